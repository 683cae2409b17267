//! Conversions between expressions and rational functions.

use num_traits::{Signed, ToPrimitive, Zero};

use super::ast::Expr;
use crate::exact_arith::{BigRat, MPoly, RatFun};

const MAX_UNROLL: i64 = 1000;

fn int_of(e: &Expr, names: &[String]) -> Option<i64> {
    let r = to_ratfun(e, names)?.as_constant()?;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

fn falling(a: &RatFun, m: i64) -> RatFun {
    let nv = a.nvars();
    let mut acc = RatFun::one(nv);
    for i in 0..m {
        acc = &(&acc * &(a - &RatFun::from_int(nv, i))) / &RatFun::from_int(nv, i + 1);
    }
    acc
}

/// `e` as a rational function in `names` (`None` if it is not rational).
pub fn to_ratfun(e: &Expr, names: &[String]) -> Option<RatFun> {
    let nv = names.len();
    let rec = |x: &Expr| to_ratfun(x, names);
    Some(match e {
        Expr::Num(x) => RatFun::constant(nv, x.clone()),
        Expr::Sym(s) => RatFun::var(nv, names.iter().position(|n| n == s)?),
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Div(a, b) => {
            let d = rec(b)?;
            if d.is_zero() {
                return None;
            }
            &rec(a)? / &d
        }
        Expr::Neg(a) => -&rec(a)?,
        Expr::Pow(a, b) => {
            let base = rec(a)?;
            let m = int_of(b, names)?;
            if m < 0 && base.is_zero() {
                return None;
            }
            base.pow(m)
        }
        Expr::Binomial(a, b) => {
            let top = rec(a)?;
            if let Some(m) = int_of(b, names) {
                if m < 0 {
                    return Some(RatFun::zero(nv));
                }
                return (m <= MAX_UNROLL).then(|| falling(&top, m));
            }
            let diff = (&top - &rec(b)?).as_constant()?;
            if !diff.is_integer() {
                return None;
            }
            let m = diff.to_integer().to_i64()?;
            if m < 0 || m > MAX_UNROLL {
                return None;
            }
            falling(&top, m)
        }
        Expr::Factorial(a) => {
            let m = int_of(a, names)?;
            if !(0..=MAX_UNROLL).contains(&m) {
                return None;
            }
            (1..=m).fold(RatFun::one(nv), |acc, i| &acc * &RatFun::from_int(nv, i))
        }
        Expr::Sum { var, lo, hi, body } | Expr::Product { var, lo, hi, body } => {
            let is_sum = matches!(e, Expr::Sum { .. });
            let (lo, hi) = (int_of(lo, names)?, int_of(hi, names)?);
            if hi - lo > MAX_UNROLL {
                return None;
            }
            let mut acc = if is_sum { RatFun::zero(nv) } else { RatFun::one(nv) };
            for i in lo..=hi {
                let v = rec(&body.subst(var, &Expr::int(i)))?;
                acc = if is_sum { &acc + &v } else { &acc * &v };
            }
            acc
        }
    })
}

/// `(slope, offset)` with `e = slope * names[v] + offset`, the slope an integer.
pub fn affine_in(e: &Expr, names: &[String], v: usize) -> Option<(i64, RatFun)> {
    let r = to_ratfun(e, names)?;
    if r.den().depends_on(v) || r.num().degree(v) > 1 {
        return None;
    }
    let slope = RatFun::new(r.num().coeff_in(v, 1), r.den().clone()).as_constant()?;
    if !slope.is_integer() {
        return None;
    }
    let offset = RatFun::new(r.num().coeff_in(v, 0), r.den().clone());
    Some((slope.to_integer().to_i64()?, offset))
}

fn num_expr(x: &BigRat) -> Expr {
    Expr::Num(x.clone())
}

fn mono_expr(exps: &[u32], names: &[String]) -> Expr {
    exps.iter().enumerate().filter(|(_, &d)| d > 0).fold(Expr::int(1), |acc, (i, &d)| {
        let v = Expr::Sym(names[i].clone());
        Expr::mul(acc, if d == 1 { v } else { Expr::pow(v, Expr::int(d as i64)) })
    })
}

/// Polynomial as a sum of monomials, highest terms first.
pub fn mpoly_to_expr(p: &MPoly, names: &[String]) -> Expr {
    let mut out = Expr::int(0);
    let terms: Vec<_> = p.terms().collect();
    for (e, c) in terms.into_iter().rev() {
        let m = mono_expr(e, names);
        let term = Expr::mul(num_expr(&c.abs()), m);
        out = if out == Expr::int(0) {
            if c.is_negative() {
                Expr::neg(term)
            } else {
                term
            }
        } else if c.is_negative() {
            Expr::sub(out, term)
        } else {
            Expr::add(out, term)
        };
    }
    out
}

pub fn ratfun_to_expr(r: &RatFun, names: &[String]) -> Expr {
    if r.den().is_one() {
        return mpoly_to_expr(r.num(), names);
    }
    // Pull a numeric denominator into the numerator's scale when possible.
    if let Some(d) = r.den().as_constant() {
        if !d.is_zero() {
            return mpoly_to_expr(&r.num().scale(&d.recip()), names);
        }
    }
    Expr::div(mpoly_to_expr(r.num(), names), mpoly_to_expr(r.den(), names))
}

/// Rewrites every maximal polynomial subexpression in canonical form,
/// e.g. bounds such as `b + 1 - 1`.
pub fn tidy(e: &Expr) -> Expr {
    let poly = |x: &Expr| -> Option<Expr> {
        let vars = x.free_symbols();
        let r = to_ratfun(x, &vars)?;
        r.den().is_constant().then(|| ratfun_to_expr(&r, &vars))
    };
    if !matches!(e, Expr::Num(_) | Expr::Sym(_)) && !contains_special(e) {
        if let Some(p) = poly(e) {
            return p;
        }
    }
    match e {
        Expr::Num(_) | Expr::Sym(_) => e.clone(),
        Expr::Add(a, b) => Expr::add(tidy(a), tidy(b)),
        Expr::Sub(a, b) => Expr::sub(tidy(a), tidy(b)),
        Expr::Mul(a, b) => Expr::mul(tidy(a), tidy(b)),
        Expr::Div(a, b) => Expr::div(tidy(a), tidy(b)),
        Expr::Neg(a) => Expr::neg(tidy(a)),
        Expr::Pow(a, b) => Expr::pow(tidy(a), tidy(b)),
        Expr::Binomial(a, b) => Expr::binomial(tidy(a), tidy(b)),
        Expr::Factorial(a) => Expr::factorial(tidy(a)),
        Expr::Sum { var, lo, hi, body } => Expr::sum(var, tidy(lo), tidy(hi), tidy(body)),
        Expr::Product { var, lo, hi, body } => Expr::product(var, tidy(lo), tidy(hi), tidy(body)),
    }
}

fn contains_special(e: &Expr) -> bool {
    match e {
        Expr::Num(_) | Expr::Sym(_) => false,
        Expr::Binomial(..) | Expr::Factorial(_) | Expr::Sum { .. } | Expr::Product { .. } => true,
        Expr::Pow(a, b) => contains_special(a) || b.as_num().is_none(),
        Expr::Neg(a) => contains_special(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => contains_special(a) || contains_special(b),
    }
}
