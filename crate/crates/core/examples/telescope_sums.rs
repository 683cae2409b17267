//! Indefinite summation of nested sums: finds G with F(k) = G(k+1) - G(k)
//! and prints the closed form of Sum(k, lower, b, F(k)).

use ringsum::summation_api::{parse, telescope, verify_identity, Expr, Grid};

fn run(summand: &str, lower: i64, grid: &str) {
    let params = vec!["n".to_string()];
    let f = parse(summand).unwrap();
    println!("F(k) = {f}");
    match telescope(&f, &params, "k", lower).unwrap() {
        Some(t) => {
            println!("  G(k) = {}", t.g_expr);
            println!("  c    = {}", t.constant_expr());
            let lhs = Expr::sum("k", Expr::int(lower), Expr::sym("b"), f);
            let rhs = t.closed_form("b");
            println!("  {lhs}\n    = {rhs}");
            let report = verify_identity(&lhs, &rhs, &Grid::parse(grid).unwrap()).unwrap();
            println!("  checked at {} points: {}", report.points, report.verified());
        }
        None => println!("  no telescoper; the sum needs a new generator"),
    }
}

fn main() {
    run("Sum(i, 0, k - 1, Binomial(n, i))", 1, "n=2..10,b=1..n");
    run("(-1)^k / Binomial(n, k) * Sum(i, 0, k - 1, Binomial(n, i))", 1, "n=2..12,b=0..n");
    run("k * 2^k", 0, "n=0..0,b=0..20");
    run("1/(k + 1)", 0, "n=0..0,b=0..5");
}
