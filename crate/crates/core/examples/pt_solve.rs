//! Solves a parameterized telescoping problem in a tower built from
//! (-1)^k and Binomial(n, k).

use ringsum::pt_solver::solve_pt;
use ringsum::summation_api::{parse, Compiler};

fn main() {
    let params = vec!["n".to_string()];
    let mut comp = Compiler::new(&params, "k");
    let f1 = comp.compile(&parse("(-1)^k / Binomial(n, k)").unwrap()).unwrap();
    let f2 = comp.compile(&parse("-2 * Binomial(n, k)").unwrap()).unwrap();
    print!("{}", comp.tower.render());

    let basis = solve_pt(&comp.tower, &[f1, f2]).unwrap();
    let names = comp.tower.var_names();
    println!("dim V = {}", basis.vectors.len());
    for (c, g) in &basis.vectors {
        let cs: Vec<String> = c.iter().map(|x| x.to_string_with(&names)).collect();
        println!("  c = ({}), g = {}", cs.join(", "), comp.tower.elem_to_string(g));
    }

    let expected = comp.compile(&parse("-(-1)^k * (n + 1 - k) / ((n + 2) * Binomial(n, k))").unwrap()).unwrap();
    let hit = basis.vectors.iter().any(|(c, g)| c[1].is_zero() && !c[0].is_zero() && g.scale(&c[0].recip()) == expected);
    println!("contains the telescoper of (-1)^k/Binomial(n,k): {hit}");
}
