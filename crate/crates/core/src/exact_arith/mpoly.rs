//! Sparse multivariate polynomials over Q.
//!
//! Exponent vectors are indexed by variable position. In a tower context the
//! parameters come first and the shift variable `k` is the last position.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::BigRat;

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRat::one())
    }

    pub fn constant(nvars: usize, c: BigRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRat::from_integer(BigInt::from(c)))
    }

    /// The polynomial consisting of variable `v` alone.
    pub fn var(nvars: usize, v: usize) -> Self {
        Self::monomial(nvars, v, 1, BigRat::one())
    }

    pub fn monomial(nvars: usize, v: usize, e: u32, c: BigRat) -> Self {
        let mut exps = vec![0; nvars];
        exps[v] = e;
        Self::from_terms(nvars, vec![(exps, c)])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, BigRat)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0))
    }

    /// Returns the value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigRat> {
        if self.terms.is_empty() {
            return Some(BigRat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> BigRat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.terms.keys().map(|e| e[v] as i64).max().unwrap_or(-1)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum()).max().unwrap_or(-1)
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    /// Largest variable index that occurs.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.depends_on(v))
    }

    /// Leading term in graded lexicographic order (variable 0 largest).
    pub fn glex_leading(&self) -> Option<(&Exponents, &BigRat)> {
        self.terms.iter().max_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        })
    }

    /// Leading term in lexicographic order.
    pub fn lex_leading(&self) -> Option<(&Exponents, &BigRat)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &BigRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients with respect to variable `v`, keyed by degree.
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, MPoly> {
        let mut out: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e[v];
            let mut e2 = e.clone();
            e2[v] = 0;
            out.entry(d).or_insert_with(|| MPoly::zero(self.nvars)).add_term(e2, c.clone());
        }
        out
    }

    pub fn coeff_in(&self, v: usize, d: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == d {
                let mut e2 = e.clone();
                e2[v] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: usize) -> MPoly {
        let d = self.degree(v);
        if d < 0 {
            return MPoly::zero(self.nvars);
        }
        self.coeff_in(v, d as u32)
    }

    pub fn from_coeffs(nvars: usize, v: usize, coeffs: &BTreeMap<u32, MPoly>) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (&d, c) in coeffs {
            for (e, x) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += d;
                out.add_term(e2, x.clone());
            }
        }
        out
    }

    /// Multiplies by `v^d`.
    pub fn shift_up(&self, v: usize, d: u32) -> MPoly {
        if d == 0 {
            return self.clone();
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] += d;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes variable `v` by the polynomial `q`.
    pub fn compose(&self, v: usize, q: &MPoly) -> MPoly {
        let coeffs = self.coeffs_in(v);
        let mut out = MPoly::zero(self.nvars);
        // Horner from the top degree.
        let maxd = match coeffs.keys().next_back() {
            Some(&d) => d,
            None => return out,
        };
        for d in (0..=maxd).rev() {
            out = &out * q;
            if let Some(c) = coeffs.get(&d) {
                out = &out + c;
            }
        }
        out
    }

    /// Substitutes `v := v + r`.
    pub fn shift_var(&self, v: usize, r: i64) -> MPoly {
        if r == 0 {
            return self.clone();
        }
        let q = &MPoly::var(self.nvars, v) + &MPoly::from_int(self.nvars, r);
        self.compose(v, &q)
    }

    /// Substitutes the value `x` for variable `v`.
    pub fn eval_var(&self, v: usize, x: &BigRat) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let d = e2[v];
            e2[v] = 0;
            out.add_term(e2, c * pow_rat(x, d));
        }
        out
    }

    /// Evaluates at a full point.
    pub fn eval_all(&self, point: &[BigRat]) -> BigRat {
        let mut acc = BigRat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &d) in e.iter().enumerate() {
                if d > 0 {
                    t *= pow_rat(&point[v], d);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                out.add_term(e2, c * BigRat::from_integer(BigInt::from(e[v])));
            }
        }
        out
    }

    /// Inserts a fresh variable at position `at` (all exponents zero there).
    pub fn insert_var(&self, at: usize) -> MPoly {
        MPoly {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.insert(at, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Removes variable `at`, which must not occur.
    pub fn remove_var(&self, at: usize) -> MPoly {
        debug_assert!(!self.depends_on(at));
        MPoly {
            nvars: self.nvars - 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.remove(at);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Rational content `c` such that `self / c` has coprime integer
    /// coefficients and a positive graded-lex leading coefficient.
    pub fn content(&self) -> BigRat {
        let Some((_, lead)) = self.glex_leading() else {
            return BigRat::one();
        };
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut content = BigRat::new(num_gcd, den_lcm);
        if lead.is_negative() {
            content = -content;
        }
        content
    }

    /// The normalized associate: integer, primitive, positive glex leading coefficient.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        if c.is_one() {
            return self.clone();
        }
        self.scale(&c.recip())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dl, dc) = d.lex_leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((rl, rc)) = rem.lex_leading().map(|(e, c)| (e.clone(), c.clone())) {
            if rl.iter().zip(&dl).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponents = rl.iter().zip(&dl).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let t = MPoly::from_terms(self.nvars, vec![(e, c)]);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Exponents, &BigRat)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(v, &d)| if d == 1 { names[v].clone() } else { format!("{}^{}", names[v], d) })
                .collect();
            if mono.is_empty() {
                let _ = write!(out, "{}", abs);
            } else {
                if !abs.is_one() {
                    let _ = write!(out, "{}*", abs);
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

pub(crate) fn pow_rat(x: &BigRat, d: u32) -> BigRat {
    num_traits::pow::pow(x.clone(), d as usize)
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
