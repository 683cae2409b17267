use ringsum::cli::{run_with, EXIT_ERROR, EXIT_MISMATCH, EXIT_NO_SOLUTION, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ringsum").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn telescope_partial_binomial_sums() {
    let (code, out, _) = run(&["--param", "n", "telescope", "Sum(k,1,b,Sum(i,0,k-1,Binomial(n,i)))"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("constant = 0"), "{out}");
    assert!(out.contains("Sum(i, 0, b, Binomial(n, i))"), "{out}");
}

#[test]
fn telescope_bare_summand() {
    let (code, out, _) = run(&["telescope", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("G(k) = k"), "{out}");
}

#[test]
fn no_telescoper_exits_two() {
    let (code, _, _) = run(&["telescope", "1/(k+1)"]);
    assert_eq!(code, EXIT_NO_SOLUTION);
}

#[test]
fn malformed_input_exits_one() {
    let (code, _, err) = run(&["telescope", "Sum(k,1,"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(!err.is_empty());
    let (code, _, _) = run(&["telescope", "k*m"]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn zeilberger_finds_recurrence() {
    let (code, out, _) = run(&["--param", "n", "zeilberger", "Sum(k,0,n,Binomial(n,k))"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("2^n"), "{out}");
}

#[test]
fn zeilberger_order_cap() {
    let (code, _, _) = run(&["--param", "n", "--max-order", "1", "zeilberger", "Sum(k,0,n,Binomial(n,k)*Sum(i,1,k,(-1)^i/i))"]);
    assert_eq!(code, EXIT_NO_SOLUTION);
}

#[test]
fn verify_exit_codes() {
    let (code, _, _) = run(&["--grid", "n=0..10", "verify", "Sum(k,0,n,Binomial(n,k))", "2^n"]);
    assert_eq!(code, EXIT_OK);
    let (code, _, _) = run(&["--grid", "n=0..10", "verify", "Sum(k,0,n,Binomial(n,k))", "-2^n + 2^(n+1) + 1"]);
    assert_eq!(code, EXIT_MISMATCH);
}

#[test]
fn represent_lists_generators() {
    let (code, out, _) = run(&["represent", "2^k * k!"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().count() >= 3, "{out}");
}

#[test]
fn json_output_parses() {
    let (code, out, _) = run(&["--format", "json", "telescope", "k"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!(v.is_object());
}
