//! Difference rings `K(k)(t_1..t_e)[x][s_1..s_r]` with their shift automorphism.

mod elem;
mod eval;

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

pub use elem::{Elem, Mono};
pub use eval::{Evaluator, NumericDomain, SymbolicDomain};

use crate::exact_arith::{BigRat, MPoly, RatFun};
use crate::summation_api::ast::Expr;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("element is not a unit of monomial shape")]
    NotAUnit,
    #[error("division is not exact")]
    NonExactDivision,
    #[error("pole encountered at k = {0}")]
    PoleEncountered(i64),
    #[error("no value given for parameter `{0}`")]
    MissingParameter(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
}

/// Π generator `t` with `σ(t) = mult(k+1) t`, i.e. `t(k) = prod_{j=lower}^{k} mult(j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiGen {
    pub name: String,
    pub mult: RatFun,
    pub lower: i64,
    /// Exponents of `mult` over the tower's shift-class representatives.
    pub z: Vec<i32>,
    pub anchor: Option<Expr>,
}

/// `x` with `x^λ = 1` and `σ(x) = α x`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootGen {
    pub name: String,
    pub alpha: BigRat,
    pub lambda: u32,
}

/// Σ generator `s` with `σ(s) = s + β` and `s(k0) = v0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaGen {
    pub name: String,
    pub beta: Elem,
    pub k0: i64,
    pub v0: RatFun,
    pub anchor: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tower {
    pub params: Vec<String>,
    pub var: String,
    /// Pairwise shift-prime irreducible representatives (constants included).
    pub classes: Vec<MPoly>,
    pub pis: Vec<PiGen>,
    pub root: Option<RootGen>,
    pub sigmas: Vec<SigmaGen>,
}

impl Tower {
    pub fn new(params: &[String], var: &str) -> Tower {
        Tower { params: params.to_vec(), var: var.to_string(), classes: Vec::new(), pis: Vec::new(), root: None, sigmas: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.params.len() + 1
    }

    /// Index of the shift variable in every coefficient.
    pub fn kv(&self) -> usize {
        self.params.len()
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut v = self.params.clone();
        v.push(self.var.clone());
        v
    }

    pub fn lambda(&self) -> u32 {
        self.root.as_ref().map_or(1, |r| r.lambda)
    }

    pub fn one(&self) -> Elem {
        Elem::from_ratfun(RatFun::one(self.nvars()))
    }

    pub fn constant(&self, c: BigRat) -> Elem {
        Elem::from_ratfun(RatFun::constant(self.nvars(), c))
    }

    pub fn base(&self, c: RatFun) -> Elem {
        Elem::from_ratfun(c)
    }

    pub fn k(&self) -> RatFun {
        RatFun::var(self.nvars(), self.kv())
    }

    pub fn param(&self, i: usize) -> RatFun {
        RatFun::var(self.nvars(), i)
    }

    pub fn pi_elem(&self, i: usize, e: i32) -> Elem {
        let mut t = vec![0; i + 1];
        t[i] = e;
        Elem::monomial(Mono::new(0, t, vec![]), RatFun::one(self.nvars()))
    }

    pub fn x_elem(&self, w: u32) -> Elem {
        Elem::monomial(Mono::new(w % self.lambda(), vec![], vec![]), RatFun::one(self.nvars()))
    }

    pub fn sigma_elem(&self, j: usize) -> Elem {
        Elem::monomial(Mono::new(0, vec![], vec![]).with_s(j, 1), RatFun::one(self.nvars()))
    }

    /// `σ(t_i)/t_i`.
    pub fn pi_factor(&self, i: usize) -> RatFun {
        self.pis[i].mult.shift_var(self.kv(), 1)
    }

    pub fn add_pi(&mut self, name: &str, mult: RatFun, lower: i64, z: Vec<i32>, anchor: Option<Expr>) -> usize {
        self.pis.push(PiGen { name: name.to_string(), mult, lower, z, anchor });
        self.pis.len() - 1
    }

    pub fn set_root(&mut self, name: &str, alpha: BigRat, lambda: u32) -> Result<(), TowerError> {
        if let Some(r) = &self.root {
            return if r.alpha == alpha && r.lambda == lambda {
                Ok(())
            } else {
                Err(TowerError::InvalidGenerator("only one root-of-unity generator is supported".into()))
            };
        }
        let one = BigRat::one();
        let minimal = lambda > 1
            && num_traits::pow(alpha.clone(), lambda as usize) == one
            && (1..lambda).all(|d| num_traits::pow(alpha.clone(), d as usize) != one);
        if !minimal {
            return Err(TowerError::InvalidGenerator(format!("{alpha} is not a primitive root of unity of order {lambda}")));
        }
        self.root = Some(RootGen { name: name.to_string(), alpha, lambda });
        Ok(())
    }

    pub fn add_sigma(&mut self, name: &str, beta: Elem, k0: i64, v0: RatFun, anchor: Option<Expr>) -> usize {
        self.sigmas.push(SigmaGen { name: name.to_string(), beta, k0, v0, anchor });
        self.sigmas.len() - 1
    }

    /// A generator name not yet used in this tower.
    pub fn fresh_name(&self, base: &str) -> String {
        let taken = |n: &str| {
            self.params.iter().any(|p| p == n)
                || self.var == n
                || self.pis.iter().any(|g| g.name == n)
                || self.root.as_ref().map_or(false, |r| r.name == n)
                || self.sigmas.iter().any(|g| g.name == n)
        };
        if !taken(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}{i}")).find(|n| !taken(n)).unwrap()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let lambda = self.lambda();
        let mut out = Elem::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                out.add_term(ma.times(mb, lambda), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        let mut out = self.one();
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    fn alpha_pow(&self, w: i64) -> BigRat {
        match &self.root {
            Some(r) if w != 0 => {
                let l = r.lambda as i64;
                num_traits::pow(r.alpha.clone(), w.rem_euclid(l) as usize)
            }
            _ => BigRat::one(),
        }
    }

    /// Applies the automorphism.
    pub fn sigma(&self, e: &Elem) -> Elem {
        self.sigma_dir(e, true)
    }

    pub fn sigma_inverse(&self, e: &Elem) -> Elem {
        self.sigma_dir(e, false)
    }

    /// `σ^r` for any integer `r`.
    pub fn sigma_pow(&self, e: &Elem, r: i64) -> Elem {
        let mut out = e.clone();
        for _ in 0..r.unsigned_abs() {
            out = self.sigma_dir(&out, r > 0);
        }
        out
    }

    fn sigma_dir(&self, e: &Elem, forward: bool) -> Elem {
        let kv = self.kv();
        let step = if forward { 1 } else { -1 };
        let mut images: HashMap<usize, Elem> = HashMap::new();
        let mut powers: HashMap<(usize, u32), Elem> = HashMap::new();
        let mut out = Elem::zero();
        for (m, c) in e.terms() {
            let mut coef = c.shift_var(kv, step);
            let xw = if forward { m.x as i64 } else { -(m.x as i64) };
            let a = self.alpha_pow(xw);
            if !a.is_one() {
                coef = coef.scale(&a);
            }
            for (i, &mu) in m.t.iter().enumerate() {
                if mu != 0 {
                    // σ(t) = mult(k+1) t and σ^{-1}(t) = t / mult(k).
                    let f = if forward { self.pi_factor(i) } else { self.pis[i].mult.recip() };
                    coef = &coef * &f.pow(mu as i64);
                }
            }
            let mut term = Elem::monomial(m.without_s(), coef);
            for (j, &nu) in m.s.iter().enumerate() {
                if nu == 0 {
                    continue;
                }
                if !powers.contains_key(&(j, nu)) {
                    let img = images
                        .entry(j)
                        .or_insert_with(|| {
                            let b = &self.sigmas[j].beta;
                            let shift = if forward { b.clone() } else { self.sigma_inverse(b).neg() };
                            self.sigma_elem(j).add(&shift)
                        })
                        .clone();
                    powers.insert((j, nu), self.pow(&img, nu));
                }
                term = self.mul(&term, &powers[&(j, nu)]);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn is_constant(&self, e: &Elem) -> bool {
        self.sigma(e) == *e
    }

    /// Inverse of a unit `q x^m t^μ`.
    pub fn unit_inverse(&self, u: &Elem) -> Result<Elem, TowerError> {
        let mut it = u.terms();
        let (Some((m, c)), None) = (it.next(), it.next()) else {
            return Err(TowerError::NotAUnit);
        };
        if m.has_s() {
            return Err(TowerError::NotAUnit);
        }
        let l = self.lambda();
        let inv = Mono::new((l - m.x % l) % l, m.t.iter().map(|e| -e).collect(), vec![]);
        Ok(Elem::monomial(inv, c.recip()))
    }

    /// `v` with `v u = e` for a unit `u`.
    pub fn divide_by_unit(&self, e: &Elem, u: &Elem) -> Result<Elem, TowerError> {
        Ok(self.mul(e, &self.unit_inverse(u)?))
    }

    pub fn mono_to_string(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        let pw = |name: &str, e: i64| if e == 1 { name.to_string() } else if e < 0 { format!("{name}^({e})") } else { format!("{name}^{e}") };
        if m.x != 0 {
            parts.push(pw(&self.root.as_ref().expect("x without root generator").name, m.x as i64));
        }
        for (i, &e) in m.t.iter().enumerate() {
            if e != 0 {
                parts.push(pw(&self.pis[i].name, e as i64));
            }
        }
        for (j, &e) in m.s.iter().enumerate() {
            if e != 0 {
                parts.push(pw(&self.sigmas[j].name, e as i64));
            }
        }
        parts.join("*")
    }

    pub fn elem_to_string(&self, e: &Elem) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let names = self.var_names();
        let mut out = String::new();
        for (idx, (m, c)) in e.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
            let mono = self.mono_to_string(m);
            let (neg, c) = if c.num().glex_leading().map_or(false, |(_, x)| x < &BigRat::zero()) { (true, -c) } else { (false, c.clone()) };
            let cs = c.to_string_with(&names);
            let body = if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if c.num().num_terms() > 1 && c.den().is_one() {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            match (idx, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => write!(out, "-{body}").unwrap(),
                (_, false) => write!(out, " + {body}").unwrap(),
                (_, true) => write!(out, " - {body}").unwrap(),
            }
        }
        out
    }

    /// One generator per line: `name : kind : sigma-image : anchor`.
    pub fn render(&self) -> String {
        let names = self.var_names();
        let mut out = String::new();
        writeln!(out, "{} : BaseShift : {} + 1 : {}", self.var, self.var, self.var).unwrap();
        for (i, g) in self.pis.iter().enumerate() {
            let h = self.pi_factor(i);
            let hs = h.to_string_with(&names);
            let img = if h.is_one() { g.name.clone() } else if h.num().num_terms() > 1 && h.den().is_one() { format!("({hs})*{}", g.name) } else { format!("{hs}*{}", g.name) };
            let anchor = match &g.anchor {
                Some(e) => e.to_string(),
                None => format!("Product(j, {}, {}, {})", g.lower, self.var, g.mult.to_string_with(&names).replace(&self.var, "j")),
            };
            writeln!(out, "{} : Pi : {} : {}", g.name, img, anchor).unwrap();
        }
        if let Some(r) = &self.root {
            let img = if r.alpha == -BigRat::one() { format!("-{}", r.name) } else { format!("{}*{}", r.alpha, r.name) };
            writeln!(out, "{} : RootOfUnity : {} : {}^{} = 1", r.name, img, r.name, r.lambda).unwrap();
        }
        for (j, g) in self.sigmas.iter().enumerate() {
            let img = format!("{} + {}", g.name, self.elem_to_string(&g.beta));
            let anchor = match &g.anchor {
                Some(e) => e.to_string(),
                None => format!("{}({}) = {}", g.name, g.k0, g.v0.to_string_with(&names)),
            };
            let _ = j;
            writeln!(out, "{} : Sigma : {} : {}", g.name, img, anchor).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Q(n)(k)(b)[x][s] with σ(b) = (n-k)/(k+1) b and σ(s) = s + x b.
    fn sample() -> Tower {
        let mut t = Tower::new(&["n".to_string()], "k");
        let n = t.param(0);
        let k = t.k();
        let one = RatFun::one(2);
        let mult = &(&(&n - &k) + &one) / &k;
        t.add_pi("b", mult, 1, vec![], None);
        t.set_root("x", -BigRat::one(), 2).unwrap();
        let beta = t.mul(&t.x_elem(1), &t.pi_elem(0, 1));
        t.add_sigma("s", beta, 0, RatFun::zero(2), None);
        t
    }

    #[test]
    fn sigma_on_generators() {
        let t = sample();
        let b = t.pi_elem(0, 1);
        let n = t.param(0);
        let k = t.k();
        let h = &(&n - &k) / &(&k + &RatFun::one(2));
        assert_eq!(t.sigma(&b), b.scale(&h));
        assert_eq!(t.sigma(&t.x_elem(1)), t.x_elem(1).neg());
        assert_eq!(t.sigma(&t.pow(&t.x_elem(1), 2)), t.one());
    }

    #[test]
    fn root_relation() {
        let t = sample();
        let x = t.x_elem(1);
        let p = t.mul(&x.add(&t.one()), &x.sub(&t.one()));
        assert!(p.is_zero());
    }

    #[test]
    fn inverse_roundtrip_with_sigma() {
        let t = sample();
        let s = t.sigma_elem(0);
        let e = t.mul(&t.pow(&s, 2), &t.pi_elem(0, -1)).add(&t.base(t.k()));
        assert_eq!(t.sigma_inverse(&t.sigma(&e)), e);
        assert_eq!(t.sigma(&t.sigma_inverse(&e)), e);
    }

    #[test]
    fn unit_division() {
        let t = sample();
        let b = t.pi_elem(0, 1);
        let x = t.x_elem(1);
        let s = t.sigma_elem(0);
        let xbs = t.mul(&t.mul(&x, &b), &s);
        assert_eq!(t.divide_by_unit(&xbs, &b).unwrap(), t.mul(&x, &s));
        assert_eq!(t.divide_by_unit(&t.one(), &x).unwrap(), x);
        assert_eq!(t.divide_by_unit(&xbs, &t.one()).unwrap(), xbs);
        assert_eq!(t.divide_by_unit(&xbs, &s), Err(TowerError::NotAUnit));
    }

    #[test]
    fn constants() {
        let t = sample();
        let c = t.base(RatFun::new(MPoly::one(2), &MPoly::var(2, 0) + &MPoly::from_int(2, 2)));
        assert!(t.is_constant(&c));
        assert!(!t.is_constant(&t.base(t.k())));
        assert!(!t.is_constant(&t.x_elem(1)));
    }
}
