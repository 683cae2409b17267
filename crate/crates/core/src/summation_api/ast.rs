//! Expression trees for nested sums and products, with direct evaluation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_arith::BigRat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(BigRat),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Binomial(Box<Expr>, Box<Expr>),
    Factorial(Box<Expr>),
    Sum { var: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
    Product { var: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("non-integer value where an integer is required: {0}")]
    NotInteger(String),
    #[error("factorial of a negative integer")]
    NegativeFactorial,
    #[error("range too large")]
    RangeTooLarge,
}

pub type Env = BTreeMap<String, BigRat>;

fn as_int(x: &BigRat) -> Result<i64, EvalError> {
    if !x.is_integer() {
        return Err(EvalError::NotInteger(x.to_string()));
    }
    x.to_integer().to_i64().ok_or(EvalError::RangeTooLarge)
}

const MAX_RANGE: i64 = 1_000_000;

impl Expr {
    pub fn int(x: i64) -> Expr {
        Expr::Num(BigRat::from_integer(BigInt::from(x)))
    }

    pub fn sym(s: &str) -> Expr {
        Expr::Sym(s.to_string())
    }

    pub fn as_num(&self) -> Option<&BigRat> {
        match self {
            Expr::Num(x) => Some(x),
            _ => None,
        }
    }

    fn is_num(&self, v: i64) -> bool {
        self.as_num().map_or(false, |x| *x == BigRat::from_integer(v.into()))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            _ if a.is_num(0) => b,
            _ if b.is_num(0) => a,
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x + y),
            (_, Expr::Neg(inner)) => Expr::sub(a, (**inner).clone()),
            (_, Expr::Num(y)) if y.is_negative() => Expr::Sub(Box::new(a), Box::new(Expr::Num(-y))),
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            _ if b.is_num(0) => a,
            _ if a.is_num(0) => Expr::neg(b),
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x - y),
            (_, Expr::Neg(inner)) => Expr::add(a, (**inner).clone()),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            _ if a.is_num(0) || b.is_num(0) => Expr::int(0),
            _ if a.is_num(1) => b,
            _ if b.is_num(1) => a,
            _ if a.is_num(-1) => Expr::neg(b),
            _ if b.is_num(-1) => Expr::neg(a),
            (Expr::Num(x), Expr::Num(y)) => Expr::Num(x * y),
            (Expr::Neg(x), _) => Expr::neg(Expr::mul((**x).clone(), b)),
            (_, Expr::Neg(y)) => Expr::neg(Expr::mul(a, (**y).clone())),
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            _ if b.is_num(1) => a,
            _ if a.is_num(0) => Expr::int(0),
            (Expr::Num(x), Expr::Num(y)) if !y.is_zero() => Expr::Num(x / y),
            (Expr::Neg(x), _) => Expr::neg(Expr::div((**x).clone(), b)),
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Num(x) => Expr::Num(-x),
            Expr::Neg(x) => *x,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn pow(a: Expr, e: Expr) -> Expr {
        if e.is_num(1) {
            return a;
        }
        if e.is_num(0) {
            return Expr::int(1);
        }
        Expr::Pow(Box::new(a), Box::new(e))
    }

    pub fn binomial(a: Expr, b: Expr) -> Expr {
        Expr::Binomial(Box::new(a), Box::new(b))
    }

    pub fn factorial(a: Expr) -> Expr {
        Expr::Factorial(Box::new(a))
    }

    pub fn sum(var: &str, lo: Expr, hi: Expr, body: Expr) -> Expr {
        Expr::Sum { var: var.to_string(), lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) }
    }

    pub fn product(var: &str, lo: Expr, hi: Expr, body: Expr) -> Expr {
        Expr::Product { var: var.to_string(), lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) }
    }

    /// Free symbols (bound summation variables excluded).
    pub fn free_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                if !bound.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Factorial(a) => a.collect_free(bound, out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) | Expr::Binomial(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Expr::Sum { var, lo, hi, body } | Expr::Product { var, lo, hi, body } => {
                lo.collect_free(bound, out);
                hi.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn depends_on(&self, v: &str) -> bool {
        self.free_symbols().iter().any(|s| s == v)
    }

    /// Capture-avoiding substitution of a free symbol.
    pub fn subst(&self, v: &str, by: &Expr) -> Expr {
        let rec = |e: &Expr| e.subst(v, by);
        match self {
            Expr::Num(_) => self.clone(),
            Expr::Sym(s) => {
                if s == v {
                    by.clone()
                } else {
                    self.clone()
                }
            }
            Expr::Add(a, b) => Expr::add(rec(a), rec(b)),
            Expr::Sub(a, b) => Expr::sub(rec(a), rec(b)),
            Expr::Mul(a, b) => Expr::mul(rec(a), rec(b)),
            Expr::Div(a, b) => Expr::div(rec(a), rec(b)),
            Expr::Neg(a) => Expr::neg(rec(a)),
            Expr::Pow(a, b) => Expr::Pow(Box::new(rec(a)), Box::new(rec(b))),
            Expr::Binomial(a, b) => Expr::binomial(rec(a), rec(b)),
            Expr::Factorial(a) => Expr::factorial(rec(a)),
            Expr::Sum { var, lo, hi, body } | Expr::Product { var, lo, hi, body } => {
                let is_sum = matches!(self, Expr::Sum { .. });
                let (var, body) = if var == v {
                    (var.clone(), (**body).clone())
                } else if by.depends_on(var) {
                    let fresh = fresh_name(var, &[by, body]);
                    let renamed = body.subst(var, &Expr::Sym(fresh.clone()));
                    (fresh, renamed.subst(v, by))
                } else {
                    (var.clone(), body.subst(v, by))
                };
                if is_sum {
                    Expr::sum(&var, rec(lo), rec(hi), body)
                } else {
                    Expr::product(&var, rec(lo), rec(hi), body)
                }
            }
        }
    }

    pub fn eval(&self, env: &Env) -> Result<BigRat, EvalError> {
        match self {
            Expr::Num(x) => Ok(x.clone()),
            Expr::Sym(s) => env.get(s).cloned().ok_or_else(|| EvalError::Unbound(s.clone())),
            Expr::Add(a, b) => Ok(a.eval(env)? + b.eval(env)?),
            Expr::Sub(a, b) => Ok(a.eval(env)? - b.eval(env)?),
            Expr::Mul(a, b) => {
                let x = a.eval(env)?;
                if x.is_zero() {
                    // Still evaluate for poles on the other side.
                    b.eval(env)?;
                    return Ok(x);
                }
                Ok(x * b.eval(env)?)
            }
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(a.eval(env)? / d)
            }
            Expr::Neg(a) => Ok(-a.eval(env)?),
            Expr::Pow(a, b) => {
                let base = a.eval(env)?;
                let e = as_int(&b.eval(env)?)?;
                if e < 0 && base.is_zero() {
                    return Err(EvalError::DivisionByZero);
                }
                if e.unsigned_abs() > MAX_RANGE as u64 {
                    return Err(EvalError::RangeTooLarge);
                }
                Ok(num_traits::pow::Pow::pow(&base, e as i32))
            }
            Expr::Binomial(a, b) => binomial_value(&a.eval(env)?, as_int(&b.eval(env)?)?),
            Expr::Factorial(a) => {
                let m = as_int(&a.eval(env)?)?;
                if m < 0 {
                    return Err(EvalError::NegativeFactorial);
                }
                if m > MAX_RANGE {
                    return Err(EvalError::RangeTooLarge);
                }
                let mut acc = BigInt::one();
                for i in 2..=m {
                    acc *= i;
                }
                Ok(BigRat::from_integer(acc))
            }
            Expr::Sum { var, lo, hi, body } | Expr::Product { var, lo, hi, body } => {
                let is_sum = matches!(self, Expr::Sum { .. });
                let lo = as_int(&lo.eval(env)?)?;
                let hi = as_int(&hi.eval(env)?)?;
                if hi - lo > MAX_RANGE {
                    return Err(EvalError::RangeTooLarge);
                }
                let mut env2 = env.clone();
                let mut acc = if is_sum { BigRat::zero() } else { BigRat::one() };
                for i in lo..=hi {
                    env2.insert(var.clone(), BigRat::from_integer(i.into()));
                    let v = body.eval(&env2)?;
                    if is_sum {
                        acc += v;
                    } else {
                        acc *= v;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Generalized binomial coefficient `a (a-1) ... (a-b+1) / b!`, zero for `b < 0`.
pub fn binomial_value(a: &BigRat, b: i64) -> Result<BigRat, EvalError> {
    if b < 0 {
        return Ok(BigRat::zero());
    }
    if b > MAX_RANGE {
        return Err(EvalError::RangeTooLarge);
    }
    let mut acc = BigRat::one();
    for i in 0..b {
        let i = BigRat::from_integer(i.into());
        acc = acc * (a - &i) / (&i + BigRat::one());
    }
    Ok(acc)
}

fn fresh_name(base: &str, avoid: &[&Expr]) -> String {
    let used: Vec<String> = avoid.iter().flat_map(|e| e.all_symbols()).collect();
    (1..).map(|i| format!("{base}{i}")).find(|c| !used.contains(c)).unwrap()
}

impl Expr {
    fn all_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| match e {
            Expr::Sym(s) => out.push(s.clone()),
            Expr::Sum { var, .. } | Expr::Product { var, .. } => out.push(var.clone()),
            _ => {}
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Sym(_) => {}
            Expr::Neg(a) | Expr::Factorial(a) => a.walk(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) | Expr::Binomial(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Expr::Sum { lo, hi, body, .. } | Expr::Product { lo, hi, body, .. } => {
                lo.walk(f);
                hi.walk(f);
                body.walk(f);
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Num(x) if !x.is_integer() => 2,
            Expr::Num(x) if x.is_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.prec() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("/")?;
                write_child(f, b, 4)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3)
            }
            Expr::Pow(a, b) => {
                write_child(f, a, 5)?;
                f.write_str("^")?;
                write_child(f, b, 5)
            }
            Expr::Binomial(a, b) => write!(f, "Binomial({a}, {b})"),
            Expr::Factorial(a) => write!(f, "Factorial({a})"),
            Expr::Sum { var, lo, hi, body } => write!(f, "Sum({var}, {lo}, {hi}, {body})"),
            Expr::Product { var, lo, hi, body } => write!(f, "Product({var}, {lo}, {hi}, {body})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, i64)]) -> Env {
        pairs.iter().map(|(s, v)| (s.to_string(), BigRat::from_integer((*v).into()))).collect()
    }

    #[test]
    fn evaluates_nested_sum() {
        let e = Expr::sum("i", Expr::int(0), Expr::sub(Expr::sym("k"), Expr::int(1)), Expr::binomial(Expr::sym("n"), Expr::sym("i")));
        assert_eq!(e.eval(&env(&[("n", 4), ("k", 3)])).unwrap(), BigRat::from_integer(11.into()));
    }

    #[test]
    fn substitution_avoids_capture() {
        let e = Expr::sum("i", Expr::int(1), Expr::sym("k"), Expr::mul(Expr::sym("i"), Expr::sym("n")));
        let s = e.subst("n", &Expr::sym("i"));
        let v = s.eval(&env(&[("k", 3), ("i", 10)])).unwrap();
        assert_eq!(v, BigRat::from_integer(60.into()));
    }

    #[test]
    fn binomial_edge_cases() {
        let four = BigRat::from_integer(4.into());
        assert_eq!(binomial_value(&four, 5).unwrap(), BigRat::zero());
        assert_eq!(binomial_value(&four, -1).unwrap(), BigRat::zero());
        assert_eq!(binomial_value(&four, 2).unwrap(), BigRat::from_integer(6.into()));
    }
}
