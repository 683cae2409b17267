//! Telescoping, creative telescoping, first-order recurrences and
//! grid verification.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::ast::{Env, EvalError, Expr};
use super::compile::{decompile, CompileError, Compiler};
use super::convert::{affine_in, mpoly_to_expr, ratfun_to_expr, tidy, to_ratfun};
use super::parser::{parse, ParseError};
use crate::exact_arith::{integer_roots, BigRat, RatFun};
use crate::fplde_base::linalg::nullspace;
use crate::pt_solver::{PtConfig, PtError, PtSolver};
use crate::tower::{Elem, Mono, Tower};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SummationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Pt(#[from] PtError),
    #[error("no recurrence found up to order {0}")]
    NoRecurrenceFound(usize),
    #[error("leading coefficient vanishes at n = {0}")]
    SingularLeadingCoefficient(i64),
    #[error("{0}")]
    Invalid(String),
    #[error("certificate check failed: {0}")]
    CertificateMismatch(String),
}

/// Result of indefinite summation:
/// `sum_{k=lower}^{b} F(k) = G(b+1) + constant`.
#[derive(Clone, Debug)]
pub struct Telescoping {
    pub tower: Tower,
    pub g: Elem,
    pub g_expr: Expr,
    pub constant: RatFun,
    pub lower: i64,
}

impl Telescoping {
    pub fn constant_expr(&self) -> Expr {
        ratfun_to_expr(&self.constant, &self.tower.var_names())
    }

    /// `G(upper + 1) + constant` as an expression in `upper`.
    pub fn closed_form(&self, upper: &str) -> Expr {
        let at = Expr::add(Expr::sym(upper), Expr::int(1));
        tidy(&Expr::add(self.g_expr.subst(&self.tower.var, &at), self.constant_expr()))
    }
}

/// Drops the `k`-free constant of the unit-monomial coefficient.
fn normalize_constant(g: &Elem, tower: &Tower) -> Elem {
    let kv = tower.kv();
    let Some(c) = g.coeff(&Mono::one()) else { return g.clone() };
    if c.den().depends_on(kv) {
        return g.clone();
    }
    let free = RatFun::new(c.num().coeff_in(kv, 0), c.den().clone());
    g.sub(&tower.base(free))
}

/// `c` with `G(p) + c = sum_{k=lower}^{p-1} F(k)` at the first regular point `p`.
fn fix_constant(tower: &Tower, g: &Elem, f: &Elem, lower: i64) -> Option<RatFun> {
    let mut acc = RatFun::zero(tower.nvars());
    for p in lower..lower + 8 {
        if p > lower {
            acc = &acc + &tower.eval_symbolic(f, p - 1).ok()?;
        }
        if let Ok(v) = tower.eval_symbolic(g, p) {
            return Some(&acc - &v);
        }
    }
    None
}

/// Indefinite summation of `summand` in `var`; `None` when no telescoper
/// exists in the constructed ring.
pub fn telescope(summand: &Expr, params: &[String], var: &str, lower: i64) -> Result<Option<Telescoping>, SummationError> {
    telescope_with(summand, params, var, lower, PtConfig::default())
}

pub fn telescope_with(summand: &Expr, params: &[String], var: &str, lower: i64, cfg: PtConfig) -> Result<Option<Telescoping>, SummationError> {
    let mut comp = Compiler::with_config(params, var, cfg);
    let f = comp.compile(summand)?;
    let tower = comp.tower;
    let basis = PtSolver::new(&tower, cfg)?.solve(std::slice::from_ref(&f))?;
    let Some((c, g)) = basis.vectors.into_iter().find(|(c, _)| !c[0].is_zero()) else { return Ok(None) };
    let g = normalize_constant(&g.scale(&c[0].recip()), &tower);
    let constant = fix_constant(&tower, &g, &f, lower).ok_or_else(|| SummationError::Invalid("no regular point near the lower bound".into()))?;
    let g_expr = decompile(&g, &tower);
    Ok(Some(Telescoping { tower, g, g_expr, constant, lower }))
}

/// `sum_i coeffs[i] S(n + i) = rhs`.
#[derive(Clone, Debug)]
pub struct Recurrence {
    pub var: String,
    pub coeffs: Vec<RatFun>,
    pub rhs: Expr,
    /// `rhs` as a rational function, when it is one.
    pub rhs_rational: Option<RatFun>,
    pub names: Vec<String>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string_with(&self.names)).collect()
    }

    pub fn lhs_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let arg = if i == 0 { self.var.clone() } else { format!("{}+{}", self.var, i) };
            let cs = c.to_string_with(&self.names);
            let term = match cs.as_str() {
                "1" => format!("S({arg})"),
                "-1" => format!("-S({arg})"),
                _ => format!("({cs})*S({arg})"),
            };
            if out.is_empty() {
                out = term;
            } else if let Some(t) = term.strip_prefix('-') {
                out = format!("{out} - {t}");
            } else {
                out = format!("{out} + {term}");
            }
        }
        out
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs_string(), self.rhs)
    }
}

/// Creative telescoping outcome for `S(n) = sum_{k=lo}^{hi(n)} F(n, k)`.
#[derive(Clone, Debug)]
pub struct CreativeTelescoping {
    pub tower: Tower,
    pub recurrence: Recurrence,
    pub g: Elem,
    pub certificate: Expr,
    pub order_tried: usize,
}

/// Definite sum `sum_{var=lo}^{hi} summand` with `hi = n + h`.
#[derive(Clone, Debug)]
pub struct DefiniteSum {
    pub summand: Expr,
    pub var: String,
    pub lo: i64,
    pub hi_offset: i64,
}

impl DefiniteSum {
    pub fn from_expr(e: &Expr, params: &[String], n: &str) -> Result<Self, SummationError> {
        let Expr::Sum { var, lo, hi, body } = e else {
            return Err(SummationError::Invalid("expected Sum(k, lo, hi, body)".into()));
        };
        let names: Vec<String> = params.to_vec();
        let nv = params.iter().position(|p| p == n).ok_or_else(|| SummationError::Invalid(format!("`{n}` is not a parameter")))?;
        let lo = to_ratfun(lo, &names).and_then(|r| r.as_constant()).filter(|c| c.is_integer());
        let hi = affine_in(hi, &names, nv).filter(|(s, o)| *s == 1 && o.as_constant().map_or(false, |c| c.is_integer()));
        match (lo, hi) {
            (Some(lo), Some((_, o))) => Ok(DefiniteSum {
                summand: (**body).clone(),
                var: var.clone(),
                lo: lo.to_integer().try_into().map_err(|_| SummationError::Invalid("bound too large".into()))?,
                hi_offset: o.as_constant().unwrap().to_integer().try_into().map_err(|_| SummationError::Invalid("bound too large".into()))?,
            }),
            _ => Err(SummationError::Invalid("bounds must be an integer and n + integer".into())),
        }
    }

    pub fn as_expr(&self, n: &str) -> Expr {
        Expr::sum(&self.var, Expr::int(self.lo), Expr::add(Expr::sym(n), Expr::int(self.hi_offset)), self.summand.clone())
    }
}

/// `e` with `n` replaced by `n + by`.
fn shift_param(e: &Expr, n: &str, by: i64) -> Expr {
    if by == 0 {
        e.clone()
    } else {
        e.subst(n, &Expr::add(Expr::sym(n), Expr::int(by)))
    }
}

/// Creative telescoping with orders `1..=max_order` in one shared tower.
pub fn creative_telescope(sum: &DefiniteSum, params: &[String], n: &str, max_order: usize) -> Result<CreativeTelescoping, SummationError> {
    creative_telescope_with(sum, params, n, max_order, PtConfig::default())
}

pub fn creative_telescope_with(sum: &DefiniteSum, params: &[String], n: &str, max_order: usize, cfg: PtConfig) -> Result<CreativeTelescoping, SummationError> {
    let mut comp = Compiler::with_config(params, &sum.var, cfg);
    let mut fs = Vec::new();
    for d in 1..=max_order {
        let fd = comp.compile(&shift_param(&sum.summand, n, d as i64 - 1))?;
        fs.push(fd);
        let tower = &comp.tower;
        let basis = PtSolver::new(tower, cfg)?.solve(&fs)?;
        let Some((c, g)) = basis.vectors.into_iter().find(|(c, _)| c.iter().any(|x| !x.is_zero())) else { continue };
        let last = c.iter().rposition(|x| !x.is_zero()).unwrap();
        let inv = c[last].recip();
        let coeffs: Vec<RatFun> = c[..=last].iter().map(|x| x * &inv).collect();
        let g = g.scale(&inv);
        let recurrence = build_recurrence(tower, sum, &fs, &coeffs, &g, n)?;
        let certificate = decompile(&g, tower);
        let out = CreativeTelescoping { tower: tower.clone(), recurrence, g, certificate, order_tried: d };
        check_recurrence(&out.recurrence, sum, params, n)?;
        return Ok(out);
    }
    Err(SummationError::NoRecurrenceFound(max_order))
}

fn nvar_index(tower: &Tower, n: &str) -> usize {
    tower.params.iter().position(|p| p == n).expect("n is a parameter")
}

/// Right-hand side value at `n = at`, as a rational function of the other parameters.
fn rhs_value(tower: &Tower, sum: &DefiniteSum, fs: &[Elem], coeffs: &[RatFun], g: &Elem, n: &str, at: i64) -> Option<RatFun> {
    let nv = nvar_index(tower, n);
    let point = BigRat::from_integer(at.into());
    let pin = |r: RatFun| r.eval_var(nv, &point);
    let hi = at + sum.hi_offset;
    let mut v = &pin(tower.eval_symbolic(g, hi + 1).ok()?)? - &pin(tower.eval_symbolic(g, sum.lo).ok()?)?;
    for (i, (c, f)) in coeffs.iter().zip(fs).enumerate() {
        let ci = pin(c.clone())?;
        for k in hi + 1..=hi + i as i64 {
            // F(n + i, k) is f_i evaluated before pinning n.
            v = &v + &(&ci * &pin(tower.eval_symbolic(f, k).ok()?)?);
        }
    }
    Some(v)
}

/// Rational function of `n` through the sampled values, checked on spare points.
fn interpolate(points: &[(i64, RatFun)], nvars: usize, nv: usize, max_deg: usize) -> Option<RatFun> {
    let x = |a: i64| RatFun::from_int(nvars, a);
    for total in 0..=max_deg {
        for a in (0..=total).rev() {
            let b = total - a;
            let need = a + b + 3;
            if points.len() < need {
                return None;
            }
            let ncols = a + 1 + b + 1;
            let rows: Vec<Vec<RatFun>> = points[..need]
                .iter()
                .map(|(p, v)| {
                    let mut row: Vec<RatFun> = (0..=a).map(|e| x(*p).pow(e as i64)).collect();
                    row.extend((0..=b).map(|e| -&(v * &x(*p).pow(e as i64))));
                    row
                })
                .collect();
            let ns = nullspace(rows, ncols, nvars);
            let Some(sol) = ns.into_iter().find(|s| s[a + 1..].iter().any(|q| !q.is_zero())) else { continue };
            let var = RatFun::var(nvars, nv);
            let poly = |cs: &[RatFun]| cs.iter().enumerate().fold(RatFun::zero(nvars), |acc, (e, c)| &acc + &(c * &var.pow(e as i64)));
            let den = poly(&sol[a + 1..]);
            let r = &poly(&sol[..=a]) / &den;
            let ok = points.iter().all(|(p, v)| r.eval_var(nv, &BigRat::from_integer((*p).into())).map_or(false, |y| y == *v));
            if ok {
                return Some(r);
            }
        }
    }
    None
}

fn build_recurrence(tower: &Tower, sum: &DefiniteSum, fs: &[Elem], coeffs: &[RatFun], g: &Elem, n: &str) -> Result<Recurrence, SummationError> {
    let names = tower.var_names();
    let mut points = Vec::new();
    let mut at = 0;
    while points.len() < 24 && at < 60 {
        if let Some(v) = rhs_value(tower, sum, fs, coeffs, g, n, at) {
            points.push((at, v));
        }
        at += 1;
    }
    let nv = nvar_index(tower, n);
    let rhs_rational = interpolate(&points, tower.nvars(), nv, 8);
    let rhs = match &rhs_rational {
        Some(r) => ratfun_to_expr(r, &names),
        None => {
            // Boundary form of the certificate.
            let k = &tower.var;
            let g_expr = decompile(g, tower);
            let hi = Expr::add(Expr::sym(n), Expr::int(sum.hi_offset));
            let mut e = Expr::sub(g_expr.subst(k, &Expr::add(hi.clone(), Expr::int(1))), g_expr.subst(k, &Expr::int(sum.lo)));
            for (i, c) in coeffs.iter().enumerate().skip(1) {
                let body = shift_param(&sum.summand, n, i as i64).subst(&sum.var, &Expr::sym(k));
                let comp = Expr::sum(k, Expr::add(hi.clone(), Expr::int(1)), Expr::add(hi.clone(), Expr::int(i as i64)), body);
                e = Expr::add(e, Expr::mul(ratfun_to_expr(c, &names), comp));
            }
            e
        }
    };
    let rec_names: Vec<String> = names[..names.len() - 1].to_vec();
    Ok(Recurrence { var: n.to_string(), coeffs: coeffs.to_vec(), rhs, rhs_rational, names: rec_names })
}

/// Checks the recurrence against direct summation at a few points.
fn check_recurrence(rec: &Recurrence, sum: &DefiniteSum, params: &[String], n: &str) -> Result<(), SummationError> {
    let base: Env = params.iter().filter(|p| *p != n).enumerate().map(|(i, p)| (p.clone(), BigRat::new((2 * i as i64 + 7).into(), 3.into()))).collect();
    let s = sum.as_expr(n);
    let mut checked = 0;
    for at in 0..16 {
        let mut env = base.clone();
        let val = |env: &mut Env, m: i64| {
            env.insert(n.to_string(), BigRat::from_integer(m.into()));
            s.eval(env)
        };
        let mut lhs = BigRat::zero();
        let mut ok = true;
        for (i, c) in rec.coeffs.iter().enumerate() {
            let mut point: Vec<BigRat> = params.iter().map(|p| base.get(p).cloned().unwrap_or_else(|| BigRat::from_integer(at.into()))).collect();
            point.push(BigRat::zero());
            let (Some(cv), Ok(sv)) = (c.eval_all(&point), val(&mut env, at + i as i64)) else {
                ok = false;
                break;
            };
            lhs += cv * sv;
        }
        env.insert(n.to_string(), BigRat::from_integer(at.into()));
        let Ok(rv) = rec.rhs.eval(&env) else { continue };
        if !ok {
            continue;
        }
        if lhs != rv {
            return Err(SummationError::CertificateMismatch(format!("{n} = {at}: {lhs} != {rv}")));
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(SummationError::CertificateMismatch("no regular point".into()));
    }
    Ok(())
}

/// Closed form of `c_0(n) S(n) + c_1(n) S(n+1) = r(n)` with `S(n0) = s0`,
/// by variation of constants.
pub fn solve_first_order_recurrence(rec: &Recurrence, n0: i64, s0: &Expr) -> Result<Expr, SummationError> {
    if rec.order() != 1 {
        return Err(SummationError::Invalid("recurrence must have order 1".into()));
    }
    let names = &rec.names;
    let nv = names.iter().position(|p| *p == rec.var).ok_or_else(|| SummationError::Invalid("recurrence variable is not a parameter".into()))?;
    let (c0, c1) = (&rec.coeffs[0], &rec.coeffs[1]);
    if c1.is_zero() {
        return Err(SummationError::SingularLeadingCoefficient(n0));
    }
    let bad = [c1.num(), c0.den(), c1.den()].into_iter().filter(|p| p.depends_on(nv)).flat_map(|p| integer_roots(p, nv)).filter(|&r| r >= n0).min();
    if let Some(bad) = bad {
        return Err(SummationError::SingularLeadingCoefficient(bad));
    }
    let nvars = c1.nvars();
    let a = -&(c0 / c1);
    let nvar = Expr::sym(&rec.var);
    let j = if rec.var == "j" { "i" } else { "j" };
    let h = homogeneous(&a, n0, &nvar, names, nv, nvars);
    let s0 = &match to_ratfun(s0, names) {
        Some(r) => ratfun_to_expr(&r, names),
        None => s0.clone(),
    };
    if rec.rhs == Expr::int(0) {
        return Ok(Expr::mul(h, s0.clone()));
    }
    // S(n) = h(n) (s0 + sum_{j=n0+1}^{n} r(j-1) / (c1(j-1) h(j)))
    let (body, negated) = match (&rec.rhs_rational, a.as_constant()) {
        (Some(r), Some(ac)) if !ac.is_zero() => {
            let q = (&r.shift_var(nv, -1) / &c1.shift_var(nv, -1)).scale(&num_traits::pow::Pow::pow(&ac, n0 as i32));
            let neg = q.num().lex_leading().map_or(false, |(_, c)| c.is_negative());
            let q = if neg { -&q } else { q };
            let pow = if ac == BigRat::from_integer(1.into()) { Expr::int(1) } else { Expr::pow(Expr::Num(ac), nvar.clone()) };
            (Expr::div(mpoly_to_expr(q.num(), names), Expr::mul(mpoly_to_expr(q.den(), names), pow)), neg)
        }
        _ => {
            let r = rec.rhs.subst(&rec.var, &Expr::sub(nvar.clone(), Expr::int(1)));
            let c1e = ratfun_to_expr(&c1.shift_var(nv, -1), names);
            (Expr::div(Expr::div(r, c1e), h.clone()), false)
        }
    };
    let sum = Expr::sum(j, Expr::int(n0 + 1), nvar.clone(), body.subst(&rec.var, &Expr::sym(j)));
    let inner = match (negated, *s0 == Expr::int(0)) {
        (true, true) => Expr::neg(sum),
        (false, true) => sum,
        (true, false) => Expr::sub(s0.clone(), sum),
        (false, false) => Expr::add(s0.clone(), sum),
    };
    Ok(tidy(&Expr::mul(h, inner)))
}

fn homogeneous(a: &RatFun, n0: i64, nvar: &Expr, names: &[String], nv: usize, nvars: usize) -> Expr {
    if let Some(ac) = a.as_constant() {
        if ac == BigRat::from_integer(1.into()) {
            return Expr::int(1);
        }
        let scale = num_traits::pow::Pow::pow(&ac, -(n0 as i32));
        return Expr::mul(Expr::Num(scale), Expr::pow(Expr::Num(ac), nvar.clone()));
    }
    let var = RatFun::var(nvars, nv);
    let shift = a - &var;
    if let Some(c) = shift.as_constant().filter(|c| c.is_integer()) {
        let c: i64 = c.to_integer().try_into().unwrap_or(i64::MAX);
        let start = n0 - 1 + c;
        if start >= 0 && c < i64::MAX {
            let denom: BigRat = (1..=start).fold(BigRat::from_integer(1.into()), |acc, i| acc * BigRat::from_integer(i.into()));
            return Expr::div(Expr::factorial(Expr::add(nvar.clone(), Expr::int(c - 1))), Expr::Num(denom));
        }
    }
    let j = ["m", "i", "j"].into_iter().find(|c| !names.iter().any(|x| x == c)).unwrap_or("m_");
    let body = ratfun_to_expr(a, names).subst(&names[nv], &Expr::sym(j));
    Expr::product(j, Expr::int(n0), Expr::sub(nvar.clone(), Expr::int(1)), body)
}

/// Evaluation grid: `name=lo..hi` ranges, later bounds may use earlier names.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub ranges: Vec<(String, Expr, Expr)>,
}

impl Grid {
    pub fn parse(spec: &str) -> Result<Grid, SummationError> {
        let mut ranges = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, range) = part.split_once('=').ok_or_else(|| SummationError::Invalid(format!("bad grid range `{part}`")))?;
            let (lo, hi) = range.split_once("..").ok_or_else(|| SummationError::Invalid(format!("bad grid range `{part}`")))?;
            ranges.push((name.trim().to_string(), parse(lo)?, parse(hi)?));
        }
        Ok(Grid { ranges })
    }

    /// All points, in lexicographic order.
    pub fn points(&self, base: &Env) -> Result<Vec<Env>, SummationError> {
        let mut out = vec![base.clone()];
        for (name, lo, hi) in &self.ranges {
            let mut next = Vec::new();
            for env in out {
                let b = |e: &Expr| -> Result<i64, SummationError> {
                    let v = e.eval(&env).map_err(|err| SummationError::Invalid(format!("grid bound: {err}")))?;
                    if !v.is_integer() {
                        return Err(SummationError::Invalid("grid bounds must be integers".into()));
                    }
                    v.to_integer().try_into().map_err(|_| SummationError::Invalid("grid bound too large".into()))
                };
                for v in b(lo)?..=b(hi)? {
                    let mut e = env.clone();
                    e.insert(name.clone(), BigRat::from_integer(v.into()));
                    next.push(e);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub point: Env,
    pub lhs: BigRat,
    pub rhs: BigRat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub points: usize,
    pub mismatches: Vec<Mismatch>,
    pub poles: Vec<(Env, EvalError)>,
}

impl VerifyReport {
    pub fn verified(&self) -> bool {
        self.mismatches.is_empty() && self.poles.len() < self.points
    }
}

pub fn format_point(p: &Env) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

/// Exact comparison of both sides at every grid point.
pub fn verify_identity(lhs: &Expr, rhs: &Expr, grid: &Grid) -> Result<VerifyReport, SummationError> {
    let points = grid.points(&BTreeMap::new())?;
    let mut report = VerifyReport { points: points.len(), mismatches: Vec::new(), poles: Vec::new() };
    for p in points {
        match (lhs.eval(&p), rhs.eval(&p)) {
            (Ok(a), Ok(b)) => {
                if a != b {
                    report.mismatches.push(Mismatch { point: p, lhs: a, rhs: b });
                }
            }
            (Err(e), _) | (_, Err(e)) => report.poles.push((p, e)),
        }
    }
    Ok(report)
}
