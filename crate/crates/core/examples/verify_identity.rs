//! Exact grid checks of summation identities.

use ringsum::summation_api::{format_point, parse, verify_identity, Grid};

fn main() {
    let cases = [
        ("Sum(k, 0, n, Binomial(n, k)^2)", "Binomial(2*n, n)", "n=0..12"),
        ("Sum(k, 0, n, Binomial(n, k) * Sum(i, 1, k, (-1)^i/i))", "-2^n * Sum(j, 1, n, 1/(j*2^j))", "n=0..15"),
        // Holds only at b = n; the report shows the first counterexample.
        ("Sum(k, 0, b, Binomial(n, k))", "2^n", "n=0..6,b=0..n"),
    ];
    for (lhs, rhs, grid) in cases {
        let report = verify_identity(&parse(lhs).unwrap(), &parse(rhs).unwrap(), &Grid::parse(grid).unwrap()).unwrap();
        println!("{lhs} = {rhs}  over {grid}");
        println!("  points: {}, verified: {}", report.points, report.verified());
        if let Some(m) = report.mismatches.first() {
            println!("  first mismatch at {}: {} vs {}", format_point(&m.point), m.lhs, m.rhs);
        }
    }
}
