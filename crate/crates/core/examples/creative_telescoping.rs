//! Definite summation: a recurrence in n via creative telescoping, then
//! a closed form by solving the first-order recurrence.

use ringsum::summation_api::{creative_telescope, parse, solve_first_order_recurrence, verify_identity, DefiniteSum, Expr, Grid};

fn run(text: &str, grid: &str) {
    let params = vec!["n".to_string()];
    let sum = DefiniteSum::from_expr(&parse(text).unwrap(), &params, "n").unwrap();
    let ct = creative_telescope(&sum, &params, "n", 5).unwrap();
    println!("S(n) = {}", sum.as_expr("n"));
    println!("  {}", ct.recurrence);
    println!("  certificate: {}", ct.certificate);
    if ct.recurrence.order() == 1 {
        let s0 = sum.as_expr("n").subst("n", &Expr::int(0));
        let closed = solve_first_order_recurrence(&ct.recurrence, 0, &s0).unwrap();
        println!("  S(n) = {closed}");
        let report = verify_identity(&sum.as_expr("n"), &closed, &Grid::parse(grid).unwrap()).unwrap();
        println!("  checked at {} points: {}", report.points, report.verified());
    }
}

fn main() {
    run("Sum(k, 0, n, Binomial(n, k))", "n=0..12");
    run("Sum(k, 0, n, Binomial(n, k) * Sum(i, 1, k, (-1)^i / i))", "n=0..15");
    run("Sum(k, 0, n, Binomial(n, k)^2)", "n=0..10");
}
