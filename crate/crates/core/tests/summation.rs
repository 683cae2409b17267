use ringsum::summation_api::{creative_telescope, decompile, parse, solve_first_order_recurrence, telescope, verify_identity, Compiler, DefiniteSum, Grid};

fn n() -> Vec<String> {
    vec!["n".to_string()]
}

#[test]
fn partial_binomial_sums() {
    let f = parse("Sum(i,0,k-1,Binomial(n,i))").unwrap();
    let t = telescope(&f, &n(), "k", 1).unwrap().expect("telescoper");
    println!("G = {}  c = {}", t.g_expr, t.constant_expr());
    let lhs = parse("Sum(k,1,b,Sum(i,0,k-1,Binomial(n,i)))").unwrap();
    let r = verify_identity(&lhs, &t.closed_form("b"), &Grid::parse("n=2..10,b=1..n").unwrap()).unwrap();
    assert!(r.verified(), "{:?}", r.mismatches.first());
}

#[test]
fn alternating_inverse_binomial() {
    let f = parse("(-1)^k * Binomial(n,k)^(-1) * Sum(i,0,k-1,Binomial(n,i))").unwrap();
    let t = telescope(&f, &n(), "k", 1).unwrap().expect("telescoper");
    println!("{}", t.tower.render());
    println!("G = {}  c = {}", t.g_expr, t.constant_expr());
    let lhs = parse("Sum(k,1,b,(-1)^k * Binomial(n,k)^(-1) * Sum(i,0,k-1,Binomial(n,i)))").unwrap();
    let r = verify_identity(&lhs, &t.closed_form("b"), &Grid::parse("n=2..12,b=0..n").unwrap()).unwrap();
    assert!(r.verified(), "{:?}", r.mismatches.first());
}

#[test]
fn harmonic_binomial_recurrence() {
    let s = parse("Sum(k,0,n,Binomial(n,k)*Sum(i,1,k,(-1)^i/i))").unwrap();
    let sum = DefiniteSum::from_expr(&s, &n(), "n").unwrap();
    let ct = creative_telescope(&sum, &n(), "n", 5).unwrap();
    println!("{}  order tried {}", ct.recurrence, ct.order_tried);
    println!("cert {}", ct.certificate);
    let closed = solve_first_order_recurrence(&ct.recurrence, 0, &parse("0").unwrap()).unwrap();
    println!("closed {}", closed);
    let r = verify_identity(&s, &closed, &Grid::parse("n=0..15").unwrap()).unwrap();
    assert!(r.verified(), "{:?}", r.mismatches.first());
}

#[test]
fn compile_decompile_round_trip() {
    let params = vec!["n".to_string()];
    let cases = [
        "k^2 + n/(k + 1)",
        "2^k",
        "(-1)^k * k",
        "Factorial(k) / 3^k",
        "Binomial(n, k)",
        "Binomial(n, k)^2 * (k + 1)",
        "Binomial(n + 1, k) / Binomial(n, k)",
        "Product(j, 1, k, j + 2)",
        "Sum(i, 1, k, 1/i)",
        "Sum(i, 1, k, 1/i)^2 - Sum(i, 1, k, 1/i^2)",
        "(-1)^k * Sum(i, 0, k - 1, Binomial(n, i))",
        "Sum(i, 1, k, (-1)^i / i) * Binomial(n, k)",
        "Sum(i, 1, k, 2^i / i)",
        "Sum(i, 1, k, Sum(j, 1, i, 1/j) / i)",
        "k * 2^k + Factorial(k)",
        "Sum(i, 0, k, Binomial(n, i))",
        "Sum(i, 1, k, i)",
        "(k + n)^(-1) * 2^k",
        "Binomial(2*k, k)",
        "(-1)^k * (-1)^k",
    ];
    let grid = Grid::parse("n=3..6,k=1..8").unwrap();
    for text in cases {
        let e = parse(text).unwrap();
        let mut comp = Compiler::new(&params, "k");
        let elem = comp.compile(&e).unwrap_or_else(|err| panic!("{text}: {err}"));
        let back = decompile(&elem, &comp.tower);
        let report = verify_identity(&e, &back, &grid).unwrap();
        assert!(report.verified(), "{text} -> {back}");
    }
}
