//! Command-line front end: `telescope`, `zeilberger`, `verify`, `represent`.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 no solution within the
//! caps, 3 verification mismatch.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::exact_arith::{BigRat, RatFun};
use crate::pt_solver::{PtConfig, DEFAULT_FACTOR_CAP, DEFAULT_MAX_SUPPORT};
use crate::summation_api::convert::{ratfun_to_expr, to_ratfun};
use crate::summation_api::drivers::format_point;
use crate::summation_api::{
    creative_telescope_with, parse, solve_first_order_recurrence, telescope_with, verify_identity, Compiler, DefiniteSum, Expr, Grid, SummationError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "ringsum", version, about = "Symbolic summation over nested sums and products")]
pub struct Cli {
    /// Declares a parameter (repeatable).
    #[arg(long = "param", global = true)]
    pub params: Vec<String>,
    /// Summation variable.
    #[arg(long, default_value = "k", global = true)]
    pub var: String,
    #[arg(long, default_value_t = 5, global = true)]
    pub max_order: usize,
    #[arg(long, env = "RING_TELESCOPE_MAX_SUPPORT", default_value_t = DEFAULT_MAX_SUPPORT, global = true)]
    pub max_support: i64,
    #[arg(long, default_value_t = DEFAULT_FACTOR_CAP, global = true)]
    pub factor_cap: i64,
    /// Verification grid, e.g. `n=2..12,b=0..n`.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Indefinite summation: a summand, or `Sum(k, lo, b, F)` with symbolic `b`.
    Telescope {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Lower bound when a bare summand is given.
        #[arg(long, default_value_t = 0)]
        lower: i64,
    },
    /// Creative telescoping for `Sum(k, lo, n + h, F(n, k))`.
    Zeilberger {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Exact comparison of two expressions on a grid.
    Verify {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Prints the tower that represents an expression.
    Represent {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

fn fail(io: &mut Io, code: i32, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(io.err, "error: {msg}");
    code
}

fn summation_exit(e: &SummationError) -> i32 {
    match e {
        SummationError::NoRecurrenceFound(_) | SummationError::Pt(_) => EXIT_NO_SOLUTION,
        SummationError::CertificateMismatch(_) => EXIT_MISMATCH,
        _ => EXIT_ERROR,
    }
}

fn parse_scoped(text: &str, allowed: &[String]) -> Result<Expr, String> {
    let e = parse(text).map_err(|e| e.to_string())?;
    if let Some(s) = e.free_symbols().into_iter().find(|s| !allowed.contains(s)) {
        return Err(format!("undeclared symbol `{s}` (declare parameters with --param)"));
    }
    Ok(e)
}

/// Runs the CLI with explicit streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut io = Io { out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(io.out, "{text}");
            } else {
                let _ = write!(io.err, "{text}");
            }
            return code;
        }
    };
    if cli.max_support <= 0 || cli.factor_cap <= 0 || cli.max_order == 0 {
        return fail(&mut io, EXIT_ERROR, "caps must be positive");
    }
    let cfg = PtConfig { max_support: cli.max_support, factor_cap: cli.factor_cap };
    match &cli.command {
        Command::Telescope { expr, lower } => cmd_telescope(&cli, cfg, expr, *lower, &mut io),
        Command::Zeilberger { expr } => cmd_zeilberger(&cli, cfg, expr, &mut io),
        Command::Verify { lhs, rhs } => cmd_verify(&cli, lhs, rhs, &mut io),
        Command::Represent { expr } => cmd_represent(&cli, cfg, expr, &mut io),
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn print_json(io: &mut Io, v: serde_json::Value) {
    let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&v).expect("json"));
}

/// Small grid over the parameters and one extra variable for self-checks.
fn self_check_grid(params: &[String], extra: Option<(&str, i64)>) -> Grid {
    let mut parts: Vec<String> = params.iter().map(|p| format!("{p}=2..6")).collect();
    if let Some((v, lo)) = extra {
        parts.push(format!("{v}={}..{}", lo - 1, lo + 6));
    }
    Grid::parse(&parts.join(",")).expect("generated grid")
}

fn check(io: &mut Io, lhs: &Expr, rhs: &Expr, grid: &Grid) -> Option<i32> {
    match verify_identity(lhs, rhs, grid) {
        Ok(r) if r.verified() => None,
        Ok(r) => {
            let msg = match r.mismatches.first() {
                Some(m) => format!("self-check mismatch at {}: {} != {}", format_point(&m.point), m.lhs, m.rhs),
                None => "self-check found no regular grid point".to_string(),
            };
            Some(fail(io, EXIT_MISMATCH, msg))
        }
        Err(e) => Some(fail(io, EXIT_ERROR, e)),
    }
}

fn cmd_telescope(cli: &Cli, cfg: PtConfig, text: &str, lower: i64, io: &mut Io) -> i32 {
    let parsed = match parse(text) {
        Ok(e) => e,
        Err(e) => return fail(io, EXIT_ERROR, e),
    };
    // Either Sum(k, lo, upper, F) with a fresh symbol `upper`, or a bare summand.
    let (summand, var, lower, upper) = match &parsed {
        Expr::Sum { var, lo, hi, body } if matches!(**hi, Expr::Sym(ref u) if !cli.params.contains(u)) => {
            let Expr::Sym(u) = &**hi else { unreachable!() };
            let Some(lo) = lo.as_num().filter(|x| x.is_integer()).and_then(|x| x.to_integer().try_into().ok()) else {
                return fail(io, EXIT_ERROR, "the lower bound must be an integer");
            };
            ((**body).clone(), var.clone(), lo, u.clone())
        }
        _ => (parsed.clone(), cli.var.clone(), lower, "b".to_string()),
    };
    let mut scope = cli.params.clone();
    scope.push(var.clone());
    if let Some(s) = summand.free_symbols().into_iter().find(|s| !scope.contains(s)) {
        return fail(io, EXIT_ERROR, format!("undeclared symbol `{s}` (declare parameters with --param)"));
    }
    let res = match telescope_with(&summand, &cli.params, &var, lower, cfg) {
        Ok(r) => r,
        Err(e) => return fail(io, summation_exit(&e), e),
    };
    let Some(t) = res else {
        let mut comp = Compiler::with_config(&cli.params, &var, cfg);
        let i = if var == "i" { "j" } else { "i" };
        let sum = Expr::sum(i, Expr::int(lower), Expr::sym(&var), summand.subst(&var, &Expr::sym(i)));
        let rendering = comp.compile(&sum).map(|_| comp.tower.render()).unwrap_or_default();
        if cli.format == Format::Json {
            print_json(io, json!({ "status": "no_telescoper", "tower": rendering.lines().collect::<Vec<_>>() }));
        } else {
            let _ = writeln!(io.out, "no telescoper in the constructed ring; the sum is represented by a new Σ generator:");
            let _ = write!(io.out, "{rendering}");
        }
        return EXIT_NO_SOLUTION;
    };
    let lhs = Expr::sum(&var, Expr::int(lower), Expr::sym(&upper), summand.clone());
    let rhs = t.closed_form(&upper);
    let grid = match &cli.grid {
        Some(g) => match Grid::parse(g) {
            Ok(g) => g,
            Err(e) => return fail(io, EXIT_ERROR, e),
        },
        None => self_check_grid(&cli.params, Some((&upper, lower))),
    };
    if let Some(code) = check(io, &lhs, &rhs, &grid) {
        return code;
    }
    if cli.format == Format::Json {
        print_json(io, json!({ "status": "ok", "G": t.g_expr.to_string(), "constant": t.constant_expr().to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }));
    } else {
        let _ = writeln!(io.out, "G({var}) = {}", t.g_expr);
        let _ = writeln!(io.out, "constant = {}", t.constant_expr());
        let _ = writeln!(io.out, "{lhs} = {rhs}");
    }
    EXIT_OK
}

/// The parameter in the upper bound of the definite sum.
fn recurrence_param(e: &Expr, params: &[String]) -> Option<String> {
    let Expr::Sum { hi, .. } = e else { return None };
    let used: Vec<String> = hi.free_symbols().into_iter().filter(|s| params.contains(s)).collect();
    (used.len() == 1).then(|| used[0].clone())
}

/// Initial value `S(n0)` at the first `n0 >= 0` where the sum is rational.
fn initial_value(sum: &Expr, n: &str, params: &[String]) -> Option<(i64, Expr)> {
    let mut names = params.to_vec();
    names.push("k_".to_string());
    (0..8).find_map(|n0| {
        let v: RatFun = to_ratfun(&sum.subst(n, &Expr::int(n0)), &names)?;
        Some((n0, ratfun_to_expr(&v, &names)))
    })
}

fn cmd_zeilberger(cli: &Cli, cfg: PtConfig, text: &str, io: &mut Io) -> i32 {
    let mut allowed = cli.params.clone();
    allowed.push(cli.var.clone());
    let e = match parse_scoped(text, &allowed) {
        Ok(e) => e,
        Err(m) => return fail(io, EXIT_ERROR, m),
    };
    let Some(n) = recurrence_param(&e, &cli.params) else {
        return fail(io, EXIT_ERROR, "expected Sum(k, lo, n + h, F) with exactly one parameter in the upper bound");
    };
    let sum = match DefiniteSum::from_expr(&e, &cli.params, &n) {
        Ok(s) => s,
        Err(err) => return fail(io, EXIT_ERROR, err),
    };
    let ct = match creative_telescope_with(&sum, &cli.params, &n, cli.max_order, cfg) {
        Ok(c) => c,
        Err(err) => return fail(io, summation_exit(&err), err),
    };
    let rec = &ct.recurrence;
    let mut closed = None;
    if rec.order() == 1 {
        if let Some((n0, s0)) = initial_value(&e, &n, &cli.params) {
            if let Ok(c) = solve_first_order_recurrence(rec, n0, &s0) {
                let grid = match &cli.grid {
                    Some(g) => Grid::parse(g),
                    None if cli.params.len() == 1 => Grid::parse(&format!("{n}={n0}..{}", n0 + 10)),
                    None => Ok(self_check_grid(&cli.params, None)),
                };
                match grid {
                    Ok(g) => {
                        if let Some(code) = check(io, &e, &c, &g) {
                            return code;
                        }
                    }
                    Err(err) => return fail(io, EXIT_ERROR, err),
                }
                closed = Some(c);
            }
        }
    }
    if cli.format == Format::Json {
        print_json(
            io,
            json!({
                "status": "ok",
                "order": rec.order(),
                "coefficients": rec.coeff_strings(),
                "inhomogeneous": rec.rhs.to_string(),
                "recurrence": rec.to_string(),
                "certificate": ct.certificate.to_string(),
                "closed_form": closed.as_ref().map(|c| c.to_string()),
            }),
        );
    } else {
        let _ = writeln!(io.out, "recurrence: {rec}");
        let _ = writeln!(io.out, "certificate: G({}) = {}", sum.var, ct.certificate);
        if let Some(c) = closed {
            let _ = writeln!(io.out, "closed form: {e} = {c}");
        }
    }
    EXIT_OK
}

fn cmd_verify(cli: &Cli, lhs: &str, rhs: &str, io: &mut Io) -> i32 {
    let (l, r) = match (parse(lhs), parse(rhs)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return fail(io, EXIT_ERROR, e),
    };
    let Some(spec) = &cli.grid else { return fail(io, EXIT_ERROR, "verify needs --grid") };
    let report = match Grid::parse(spec).and_then(|g| verify_identity(&l, &r, &g)) {
        Ok(rep) => rep,
        Err(e) => return fail(io, EXIT_ERROR, e),
    };
    if cli.format == Format::Json {
        let mism: Vec<_> = report.mismatches.iter().map(|m| json!({ "point": format_point(&m.point), "lhs": m.lhs.to_string(), "rhs": m.rhs.to_string() })).collect();
        let poles: Vec<_> = report.poles.iter().map(|(p, e)| json!({ "point": format_point(p), "error": e.to_string() })).collect();
        print_json(io, json!({ "points": report.points, "verified": report.verified(), "mismatches": mism, "poles": poles }));
    } else {
        for (p, e) in &report.poles {
            let _ = writeln!(io.err, "pole at {}: {e}", format_point(p));
        }
        match report.mismatches.first() {
            None => {
                let _ = writeln!(io.out, "verified at {} points", report.points - report.poles.len());
            }
            Some(m) => {
                let _ = writeln!(io.out, "mismatch at {}: {} != {} ({} of {} points differ)", format_point(&m.point), m.lhs, m.rhs, report.mismatches.len(), report.points);
            }
        }
    }
    if report.verified() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn cmd_represent(cli: &Cli, cfg: PtConfig, text: &str, io: &mut Io) -> i32 {
    let mut allowed = cli.params.clone();
    allowed.push(cli.var.clone());
    let e = match parse_scoped(text, &allowed) {
        Ok(e) => e,
        Err(m) => return fail(io, EXIT_ERROR, m),
    };
    let mut comp = Compiler::with_config(&cli.params, &cli.var, cfg);
    let elem = match comp.compile(&e) {
        Ok(x) => x,
        Err(err) => return fail(io, EXIT_ERROR, err),
    };
    // Self-check: the element evaluates like the expression.
    let tower = &comp.tower;
    let base: BTreeMap<String, BigRat> = cli.params.iter().map(|p| (p.clone(), BigRat::from_integer(5.into()))).collect();
    let mut checked = 0;
    for k in 1..8 {
        let mut env = base.clone();
        env.insert(cli.var.clone(), BigRat::from_integer(k.into()));
        if let (Ok(a), Ok(b)) = (tower.eval_at(&elem, k, &base), e.eval(&env)) {
            if a != b {
                return fail(io, EXIT_MISMATCH, format!("representation differs at {}={k}: {a} != {b}", cli.var));
            }
            checked += 1;
        }
    }
    if checked == 0 && !elem.is_zero() {
        let _ = writeln!(io.err, "warning: no regular point for the self-check");
    }
    let rendering = tower.render();
    if cli.format == Format::Json {
        print_json(io, json!({ "tower": rendering.lines().collect::<Vec<_>>(), "element": tower.elem_to_string(&elem) }));
    } else {
        let _ = write!(io.out, "{rendering}");
        let _ = writeln!(io.out, "element: {}", tower.elem_to_string(&elem));
    }
    EXIT_OK
}
