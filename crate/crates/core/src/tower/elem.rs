use std::collections::BTreeMap;

use crate::exact_arith::RatFun;

/// Power product `x^x * t^t * s^s`; trailing zero exponents are trimmed so
/// equal monomials compare equal regardless of tower size.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono {
    pub x: u32,
    pub t: Vec<i32>,
    pub s: Vec<u32>,
}

impl Mono {
    pub fn new(x: u32, mut t: Vec<i32>, mut s: Vec<u32>) -> Mono {
        while t.last() == Some(&0) {
            t.pop();
        }
        while s.last() == Some(&0) {
            s.pop();
        }
        Mono { x, t, s }
    }

    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn is_one(&self) -> bool {
        self.x == 0 && self.t.is_empty() && self.s.is_empty()
    }

    pub fn t_at(&self, i: usize) -> i32 {
        self.t.get(i).copied().unwrap_or(0)
    }

    pub fn s_at(&self, j: usize) -> u32 {
        self.s.get(j).copied().unwrap_or(0)
    }

    pub fn has_s(&self) -> bool {
        !self.s.is_empty()
    }

    /// Same monomial without its Σ part.
    pub fn without_s(&self) -> Mono {
        Mono { x: self.x, t: self.t.clone(), s: Vec::new() }
    }

    pub fn with_s(&self, j: usize, d: u32) -> Mono {
        let mut s = self.s.clone();
        if s.len() <= j {
            s.resize(j + 1, 0);
        }
        s[j] = d;
        Mono::new(self.x, self.t.clone(), s)
    }

    pub fn times(&self, o: &Mono, lambda: u32) -> Mono {
        let n = self.t.len().max(o.t.len());
        let t = (0..n).map(|i| self.t_at(i) + o.t_at(i)).collect();
        let m = self.s.len().max(o.s.len());
        let s = (0..m).map(|j| self.s_at(j) + o.s_at(j)).collect();
        Mono::new((self.x + o.x) % lambda.max(1), t, s)
    }
}

/// Element of `K(k)[t^{±1}][x]/(x^λ - 1)[s]`, stored flat as monomial to
/// coefficient map.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Elem {
    terms: BTreeMap<Mono, RatFun>,
}

impl Elem {
    pub fn zero() -> Elem {
        Elem::default()
    }

    pub fn from_ratfun(c: RatFun) -> Elem {
        Elem::monomial(Mono::one(), c)
    }

    pub fn monomial(m: Mono, c: RatFun) -> Elem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Elem { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, RatFun)>) -> Elem {
        let mut e = Elem::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &RatFun)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Option<&RatFun> {
        self.terms.get(m)
    }

    /// The element as a member of K(k), if it has no generator part.
    pub fn as_base(&self, nvars: usize) -> Option<RatFun> {
        match self.terms.len() {
            0 => Some(RatFun::zero(nvars)),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Mono, c: RatFun) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Elem) -> Elem {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Elem) -> Elem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Elem {
        Elem { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &RatFun) -> Elem {
        if c.is_zero() {
            return Elem::zero();
        }
        Elem { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFun) -> RatFun) -> Elem {
        Elem::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Degree in the Σ generator `j` (`-1` for zero).
    pub fn deg_s(&self, j: usize) -> i64 {
        self.terms.keys().map(|m| m.s_at(j) as i64).max().unwrap_or(-1)
    }

    /// Largest index of a Σ generator that occurs.
    pub fn top_sigma(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.s.len().checked_sub(1)).max()
    }

    /// Coefficient of `s_j^d`, with `s_j` removed.
    pub fn coeff_s(&self, j: usize, d: u32) -> Elem {
        Elem::from_terms(self.terms.iter().filter(|(m, _)| m.s_at(j) == d).map(|(m, c)| (m.with_s(j, 0), c.clone())))
    }

    /// Multiplies by `s_j^d` (no reduction needed).
    pub fn times_s(&self, j: usize, d: u32) -> Elem {
        Elem::from_terms(self.terms.iter().map(|(m, c)| (m.with_s(j, m.s_at(j) + d), c.clone())))
    }

    pub fn has_sigma(&self) -> bool {
        self.terms.keys().any(|m| m.has_s())
    }
}
