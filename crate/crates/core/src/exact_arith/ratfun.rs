//! Rational functions over Q in a fixed list of variables.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::mpoly::MPoly;
use super::BigRat;

/// `num / den` with `gcd(num, den) = 1` and `den` primitive over Z with a
/// positive graded-lex leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let nv = num.nvars();
        if num.is_zero() {
            return RatFun { num, den: MPoly::one(nv) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = poly_gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let c = den.content();
        if c.is_one() {
            RatFun { num, den }
        } else {
            let inv = c.recip();
            RatFun { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let nv = p.nvars();
        RatFun { num: p, den: MPoly::one(nv) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: BigRat) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_poly(MPoly::from_int(nvars, c))
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, v))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<BigRat> {
        if self.is_constant() {
            Some(self.num.as_constant().unwrap() / self.den.as_constant().unwrap())
        } else {
            None
        }
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.num.depends_on(v) || self.den.depends_on(v)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn recip(&self) -> RatFun {
        assert!(!self.is_zero(), "reciprocal of zero");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> RatFun {
        if e >= 0 {
            RatFun { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
        } else {
            self.recip().pow(-e)
        }
    }

    pub fn scale(&self, c: &BigRat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.nvars());
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Substitutes `v := v + r`.
    pub fn shift_var(&self, v: usize, r: i64) -> RatFun {
        if r == 0 {
            return self.clone();
        }
        RatFun::new(self.num.shift_var(v, r), self.den.shift_var(v, r))
    }

    /// Substitutes a value for `v`; `None` at a pole.
    pub fn eval_var(&self, v: usize, x: &BigRat) -> Option<RatFun> {
        let d = self.den.eval_var(v, x);
        if d.is_zero() {
            return None;
        }
        Some(RatFun::new(self.num.eval_var(v, x), d))
    }

    /// Substitutes the polynomial `q` for variable `v`; `None` if the denominator vanishes.
    pub fn compose(&self, v: usize, q: &MPoly) -> Option<RatFun> {
        let d = self.den.compose(v, q);
        if d.is_zero() {
            return None;
        }
        Some(RatFun::new(self.num.compose(v, q), d))
    }

    pub fn eval_all(&self, point: &[BigRat]) -> Option<BigRat> {
        let d = self.den.eval_all(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_all(point) / d)
    }

    /// Degree in `v` of numerator minus denominator (`i64::MIN` for zero).
    pub fn degree_balance(&self, v: usize) -> i64 {
        if self.is_zero() {
            return i64::MIN;
        }
        self.num.degree(v) - self.den.degree(v)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        let n = self.num.to_string_with(names);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.to_string_with(names);
        let wrap = |s: String, p: &MPoly| if p.num_terms() > 1 { format!("({s})") } else { s };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }

    pub fn from_bigint(nvars: usize, x: BigInt) -> RatFun {
        RatFun::constant(nvars, BigRat::from_integer(x))
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RatFun { num: &self.num + &(&rhs.num * &self.den), den: self.den.clone() };
        }
        if self.den.is_one() {
            return RatFun { num: &rhs.num + &(&self.num * &rhs.den), den: rhs.den.clone() };
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let a = self.den.div_exact(&g).unwrap();
        let b = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &b) + &(&rhs.num * &a);
        RatFun::new(num, &self.den * &b)
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero(self.nvars());
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        // Cross-cancel before multiplying.
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        let c = den.content();
        let inv = c.recip();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl<'a> Div<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self * &rhs.recip()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFun {
            type Output = RatFun;
            fn $m(self, rhs: RatFun) -> RatFun { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("v{i}")).collect();
        f.write_str(&self.to_string_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> RatFun {
        RatFun::var(2, 1)
    }
    fn c(x: i64) -> RatFun {
        RatFun::from_int(2, x)
    }

    #[test]
    fn telescoping_fraction() {
        // sigma(-1/k) - (-1/k) = 1/(k(k+1))
        let g = -&k().recip();
        let lhs = &g.shift_var(1, 1) - &g;
        let rhs = (&k() * &(&k() + &c(1))).recip();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalization_is_canonical() {
        let a = RatFun::new(MPoly::from_int(2, 2), (&MPoly::var(2, 1)).scale(&BigRat::from_integer((-4).into())));
        let b = RatFun::new(MPoly::from_int(2, -1), MPoly::var(2, 1).scale(&BigRat::from_integer(2.into())));
        assert_eq!(a, b);
        assert!(a.den().is_integral());
    }
}
