//! First-order parameterized difference equations over rational functions:
//! σ(g) - a g = c_1 f_1 + ... + c_d f_d.

use ringsum::exact_arith::RatFun;
use ringsum::fplde_base::{residual_ok, solve_fplde_rational, FpldeProblem};
use ringsum::summation_api::convert::to_ratfun;
use ringsum::summation_api::parse;

fn main() {
    let names = vec!["n".to_string(), "k".to_string()];
    let rf = |s: &str| -> RatFun { to_ratfun(&parse(s).unwrap(), &names).unwrap() };
    let cases = [
        ("1", vec!["k", "1/(k*(k+1))", "1/k"]),
        ("(k+1)/(k+n+1)", vec!["1", "k + n"]),
        ("2", vec!["k^2"]),
    ];
    for (a, fs) in cases {
        let prob = FpldeProblem::new(rf(a), fs.iter().map(|f| rf(f)).collect(), 1);
        let basis = solve_fplde_rational(&prob);
        println!("a = {a}, f = ({})", fs.join(", "));
        for (c, g) in &basis.vectors {
            let cs: Vec<String> = c.iter().map(|x| x.to_string_with(&names)).collect();
            println!("  c = ({}), g = {}   residual ok: {}", cs.join(", "), g.to_string_with(&names), residual_ok(&prob, c, g));
        }
    }
}
