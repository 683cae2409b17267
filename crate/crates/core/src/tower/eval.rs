//! Evaluation of tower elements as sequences, by unrolling each
//! generator's first-order recurrence from its anchor.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{Elem, Tower, TowerError};
use crate::exact_arith::{BigRat, RatFun};

/// Scalar domain values are computed in: exact numbers or rational
/// functions in the parameters.
pub trait Domain {
    type V: Clone + PartialEq;
    /// Coefficient `c(k)`; `None` at a pole.
    fn coef(&self, c: &RatFun, k: i64) -> Option<Self::V>;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
    fn rat(&self, x: &BigRat) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn inv(&self, a: &Self::V) -> Option<Self::V>;
    fn is_zero(&self, a: &Self::V) -> bool;
}

/// All parameters substituted by rationals.
pub struct NumericDomain {
    point: Vec<BigRat>,
}

impl NumericDomain {
    pub fn new(tower: &Tower, values: &BTreeMap<String, BigRat>) -> Result<Self, TowerError> {
        let mut point = Vec::new();
        for p in &tower.params {
            point.push(values.get(p).cloned().ok_or_else(|| TowerError::MissingParameter(p.clone()))?);
        }
        point.push(BigRat::zero());
        Ok(NumericDomain { point })
    }
}

impl Domain for NumericDomain {
    type V = BigRat;
    fn coef(&self, c: &RatFun, k: i64) -> Option<BigRat> {
        let mut p = self.point.clone();
        *p.last_mut().unwrap() = BigRat::from_integer(k.into());
        c.eval_all(&p)
    }
    fn zero(&self) -> BigRat {
        BigRat::zero()
    }
    fn one(&self) -> BigRat {
        BigRat::one()
    }
    fn rat(&self, x: &BigRat) -> BigRat {
        x.clone()
    }
    fn add(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a + b
    }
    fn sub(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a - b
    }
    fn mul(&self, a: &BigRat, b: &BigRat) -> BigRat {
        a * b
    }
    fn inv(&self, a: &BigRat) -> Option<BigRat> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRat) -> bool {
        a.is_zero()
    }
}

/// Only `k` is substituted; values are rational functions of the parameters.
pub struct SymbolicDomain {
    nvars: usize,
    kv: usize,
}

impl SymbolicDomain {
    pub fn new(tower: &Tower) -> Self {
        SymbolicDomain { nvars: tower.nvars(), kv: tower.kv() }
    }
}

impl Domain for SymbolicDomain {
    type V = RatFun;
    fn coef(&self, c: &RatFun, k: i64) -> Option<RatFun> {
        c.eval_var(self.kv, &BigRat::from_integer(k.into()))
    }
    fn zero(&self) -> RatFun {
        RatFun::zero(self.nvars)
    }
    fn one(&self) -> RatFun {
        RatFun::one(self.nvars)
    }
    fn rat(&self, x: &BigRat) -> RatFun {
        RatFun::constant(self.nvars, x.clone())
    }
    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a + b
    }
    fn sub(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a - b
    }
    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        a * b
    }
    fn inv(&self, a: &RatFun) -> Option<RatFun> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &RatFun) -> bool {
        a.is_zero()
    }
}

/// Memoizing evaluator for one tower and one parameter point.
pub struct Evaluator<'a, D: Domain> {
    tower: &'a Tower,
    dom: D,
    pi_vals: Vec<HashMap<i64, D::V>>,
    sigma_vals: Vec<HashMap<i64, D::V>>,
}

impl<'a, D: Domain> Evaluator<'a, D> {
    pub fn new(tower: &'a Tower, dom: D) -> Self {
        Evaluator { tower, dom, pi_vals: vec![HashMap::new(); tower.pis.len()], sigma_vals: vec![HashMap::new(); tower.sigmas.len()] }
    }

    pub fn domain(&self) -> &D {
        &self.dom
    }

    /// `t_i(k) = prod_{j=lower}^{k} mult(j)`, unrolled in both directions
    /// from `t_i(lower - 1) = 1`.
    pub fn pi_value(&mut self, i: usize, k: i64) -> Result<D::V, TowerError> {
        if let Some(v) = self.pi_vals[i].get(&k) {
            return Ok(v.clone());
        }
        let g = &self.tower.pis[i];
        let base = g.lower - 1;
        let mut cur = self.dom.one();
        self.pi_vals[i].insert(base, cur.clone());
        if k >= base {
            for j in base + 1..=k {
                if let Some(v) = self.pi_vals[i].get(&j) {
                    cur = v.clone();
                    continue;
                }
                let m = self.dom.coef(&g.mult, j).ok_or(TowerError::PoleEncountered(j))?;
                cur = self.dom.mul(&cur, &m);
                self.pi_vals[i].insert(j, cur.clone());
            }
        } else {
            for j in (k..base).rev() {
                let m = self.dom.coef(&g.mult, j + 1).ok_or(TowerError::PoleEncountered(j + 1))?;
                let inv = self.dom.inv(&m).ok_or(TowerError::PoleEncountered(j + 1))?;
                cur = self.dom.mul(&cur, &inv);
                self.pi_vals[i].insert(j, cur.clone());
            }
        }
        Ok(cur)
    }

    /// `s_j(k) = v0 + sum_{i=k0}^{k-1} β(i)`.
    pub fn sigma_value(&mut self, j: usize, k: i64) -> Result<D::V, TowerError> {
        if let Some(v) = self.sigma_vals[j].get(&k) {
            return Ok(v.clone());
        }
        let tower = self.tower;
        let g = &tower.sigmas[j];
        let mut cur = self.dom.coef(&g.v0, g.k0).ok_or(TowerError::PoleEncountered(g.k0))?;
        self.sigma_vals[j].insert(g.k0, cur.clone());
        if k >= g.k0 {
            for i in g.k0..k {
                if let Some(v) = self.sigma_vals[j].get(&(i + 1)) {
                    cur = v.clone();
                    continue;
                }
                let b = self.eval(&g.beta, i)?;
                cur = self.dom.add(&cur, &b);
                self.sigma_vals[j].insert(i + 1, cur.clone());
            }
        } else {
            for i in (k..g.k0).rev() {
                let b = self.eval(&g.beta, i)?;
                cur = self.dom.sub(&cur, &b);
                self.sigma_vals[j].insert(i, cur.clone());
            }
        }
        Ok(cur)
    }

    fn power(&self, v: &D::V, e: i64, k: i64) -> Result<D::V, TowerError> {
        let base = if e < 0 { self.dom.inv(v).ok_or(TowerError::PoleEncountered(k))? } else { v.clone() };
        let mut out = self.dom.one();
        for _ in 0..e.unsigned_abs() {
            out = self.dom.mul(&out, &base);
        }
        Ok(out)
    }

    pub fn eval(&mut self, e: &Elem, k: i64) -> Result<D::V, TowerError> {
        let mut acc = self.dom.zero();
        for (m, c) in e.terms() {
            let mut v = self.dom.coef(c, k).ok_or(TowerError::PoleEncountered(k))?;
            if m.x != 0 {
                let r = self.tower.root.as_ref().expect("x without root generator");
                let a = num_traits::pow(r.alpha.clone(), (k.rem_euclid(r.lambda as i64) as usize) * m.x as usize);
                v = self.dom.mul(&v, &self.dom.rat(&a));
            }
            for (i, &mu) in m.t.iter().enumerate() {
                if mu != 0 {
                    let t = self.pi_value(i, k)?;
                    v = self.dom.mul(&v, &self.power(&t, mu as i64, k)?);
                }
            }
            for (j, &nu) in m.s.iter().enumerate() {
                if nu != 0 {
                    let s = self.sigma_value(j, k)?;
                    v = self.dom.mul(&v, &self.power(&s, nu as i64, k)?);
                }
            }
            acc = self.dom.add(&acc, &v);
        }
        Ok(acc)
    }
}

impl Tower {
    /// Exact value of `e` at `k = k0` for the given parameter values.
    pub fn eval_at(&self, e: &Elem, k0: i64, params: &BTreeMap<String, BigRat>) -> Result<BigRat, TowerError> {
        Evaluator::new(self, NumericDomain::new(self, params)?).eval(e, k0)
    }

    /// Value of `e` at `k = k0` as a rational function of the parameters.
    pub fn eval_symbolic(&self, e: &Elem, k0: i64) -> Result<RatFun, TowerError> {
        Evaluator::new(self, SymbolicDomain::new(self)).eval(e, k0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial_tower() -> Tower {
        let mut t = Tower::new(&["n".to_string()], "k");
        let n = t.param(0);
        let k = t.k();
        let mult = &(&(&n - &k) + &RatFun::one(2)) / &k;
        t.add_pi("b", mult, 1, vec![], None);
        t.set_root("x", -BigRat::one(), 2).unwrap();
        // s = sum_{i=1}^{k} (-1)^i / i
        let beta = t.mul(&t.x_elem(1), &t.base(&RatFun::from_int(2, -1) / &(&k + &RatFun::one(2))));
        t.add_sigma("s", beta, 0, RatFun::zero(2), None);
        t
    }

    fn at(n: i64) -> BTreeMap<String, BigRat> {
        [("n".to_string(), BigRat::from_integer(n.into()))].into_iter().collect()
    }

    #[test]
    fn binomial_value() {
        let t = binomial_tower();
        assert_eq!(t.eval_at(&t.pi_elem(0, 1), 2, &at(4)).unwrap(), BigRat::from_integer(6.into()));
    }

    #[test]
    fn alternating_harmonic_value() {
        let t = binomial_tower();
        assert_eq!(t.eval_at(&t.sigma_elem(0), 2, &at(4)).unwrap(), BigRat::new((-1).into(), 2.into()));
    }

    #[test]
    fn symbolic_value_in_parameter() {
        let t = binomial_tower();
        let v = t.eval_symbolic(&t.pi_elem(0, 1), 2).unwrap();
        let n = t.param(0);
        let expect = (&n * &(&n - &RatFun::one(2))).scale(&BigRat::new(1.into(), 2.into()));
        assert_eq!(v, expect);
    }

    #[test]
    fn missing_parameter() {
        let t = binomial_tower();
        assert_eq!(t.eval_at(&t.one(), 0, &BTreeMap::new()), Err(TowerError::MissingParameter("n".into())));
    }
}
