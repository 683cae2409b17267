//! Parameterized telescoping in a tower:
//! find all `(c, g)` with `σ(g) - g = c_1 f_1 + ... + c_d f_d`.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::exact_arith::{factor_ratfun, ArithError, MPoly, RatFun};
use crate::fplde_base::linalg::{rref, solve_integer_system};
use crate::fplde_base::{solve_fplde_rational, FpldeProblem};
use crate::product_rep::shift_equivalent;
use crate::tower::{Elem, Mono, Tower};

pub const DEFAULT_MAX_SUPPORT: i64 = 20;
pub const DEFAULT_FACTOR_CAP: i64 = 2;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PtError {
    #[error("homogeneous solution needs Π exponent {exponent}, above the support cap {cap}")]
    SupportBoundExceeded { exponent: i64, cap: i64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Basis `{(c, g)}` of a solution space over `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBasis {
    pub arity: usize,
    pub vectors: Vec<(Vec<RatFun>, Elem)>,
}

#[derive(Clone, Copy, Debug)]
pub struct PtConfig {
    pub max_support: i64,
    pub factor_cap: i64,
}

impl Default for PtConfig {
    fn default() -> Self {
        let max_support = std::env::var("RING_TELESCOPE_MAX_SUPPORT").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_SUPPORT);
        PtConfig { max_support, factor_cap: DEFAULT_FACTOR_CAP }
    }
}

/// Outcome of testing whether `Σ β` needs a new generator.
#[derive(Clone, Debug, PartialEq)]
pub enum SigmaTest {
    /// `σ(g) - g = β` already holds for this `g`.
    Telescoper(Elem),
    AdjoinNew,
}

/// Degree bound `max_i deg_{s_j} f_i + 1` (`deg 0 = -1`).
pub fn sigma_degree_bound(f: &[Elem], j: usize) -> i64 {
    f.iter().map(|e| e.deg_s(j)).max().unwrap_or(-1) + 1
}

/// Factor classes used to decide whether `r = σ(γ)/γ` has a rational solution.
struct Classes {
    reps: Vec<MPoly>,
    kv: usize,
    cap: i64,
}

impl Classes {
    /// Sign and class exponent vector of `r`.
    fn classify(&mut self, r: &RatFun) -> Result<(i32, Vec<i32>), ArithError> {
        let fac = factor_ratfun(r, self.cap)?;
        let mut sign = if fac.unit.is_negative() { -1 } else { 1 };
        let mut exps = vec![0; self.reps.len()];
        for (f, m) in &fac.factors {
            let hit = self.reps.iter().enumerate().find_map(|(j, rep)| shift_equivalent(f, rep, self.kv).map(|(_, u)| (j, u)));
            let (j, u) = match hit {
                Some(h) => h,
                None => {
                    self.reps.push(f.clone());
                    exps.push(0);
                    (self.reps.len() - 1, 1)
                }
            };
            if u < 0 && m % 2 != 0 {
                sign = -sign;
            }
            exps[j] += m;
        }
        Ok((sign, exps))
    }
}

/// Solver state for one tower.
pub struct PtSolver<'a> {
    tower: &'a Tower,
    cfg: PtConfig,
    classes: Classes,
    hclass: Vec<(i32, Vec<i32>)>,
}

type Vectors = Vec<(Vec<RatFun>, Elem)>;

impl<'a> PtSolver<'a> {
    pub fn new(tower: &'a Tower, cfg: PtConfig) -> Result<Self, PtError> {
        let mut classes = Classes { reps: tower.classes.clone(), kv: tower.kv(), cap: cfg.factor_cap };
        let hclass = (0..tower.pis.len()).map(|i| classes.classify(&tower.pi_factor(i))).collect::<Result<_, _>>()?;
        Ok(PtSolver { tower, cfg, classes, hclass })
    }

    fn zero(&self) -> RatFun {
        RatFun::zero(self.tower.nvars())
    }

    /// `σ(m) / m` for a monomial without Σ part.
    fn shift_quotient(&self, m: &Mono) -> RatFun {
        let t = self.tower;
        let mut q = RatFun::one(t.nvars());
        if m.x > 0 {
            let alpha = &t.root.as_ref().expect("x without root generator").alpha;
            q = q.scale(&num_traits::pow(alpha.clone(), m.x as usize));
        }
        for i in 0..t.pis.len() {
            let mu = m.t_at(i);
            if mu != 0 {
                q = &q * &t.pi_factor(i).pow(mu as i64);
            }
        }
        q
    }

    /// The monomial whose component of `σ(g) - a g = 0` can have nonzero
    /// rational solutions, if any.
    fn homogeneous_support(&mut self, a: &RatFun) -> Result<Option<Mono>, PtError> {
        let (sa, va) = self.classes.classify(a)?;
        let n = self.classes.reps.len();
        let cols: Vec<Vec<i32>> = self.hclass.iter().map(|(_, v)| v.clone()).collect();
        let mut rhs = va.clone();
        rhs.resize(n, 0);
        let Some(mu) = solve_integer_system(&cols, &rhs) else { return Ok(None) };
        if mu.iter().any(|m| !m.is_integer()) {
            return Ok(None);
        }
        let mu: Vec<i32> = mu.iter().map(|m| m.to_integer().try_into().expect("exponent fits")).collect();
        if let Some(&big) = mu.iter().find(|m| m.abs() as i64 > self.cfg.max_support) {
            return Err(PtError::SupportBoundExceeded { exponent: big as i64, cap: self.cfg.max_support });
        }
        let mut sign = sa;
        for (i, &m) in mu.iter().enumerate() {
            if m % 2 != 0 {
                sign *= self.hclass[i].0;
            }
        }
        let x = match self.tower.root.as_ref() {
            _ if sign == 1 => 0,
            Some(r) if r.alpha.is_negative() => 1,
            _ => return Ok(None),
        };
        Ok(Some(Mono::new(x, mu, vec![])))
    }

    /// Basis of `{(c, g) : σ(g) - a g = sum c_i f_i}` for `a ∈ K(k)*` and
    /// `f_i, g` free of Σ generators.
    pub fn solve_fplde_tower(&mut self, a: &RatFun, f: &[Elem]) -> Result<Vectors, PtError> {
        let nv = self.tower.nvars();
        let d = f.len();
        let mut comps: BTreeSet<Mono> = f.iter().flat_map(|e| e.terms().map(|(m, _)| m.clone())).collect();
        comps.insert(Mono::one());
        if let Some(m) = self.homogeneous_support(a)? {
            comps.insert(m);
        }
        let mut state: Vec<(Vec<RatFun>, Elem)> = (0..d).map(|i| (unit_vec(nv, d, i), Elem::zero())).collect();
        for m in comps {
            let p = self.shift_quotient(&m);
            let rhs: Vec<RatFun> = state
                .iter()
                .map(|(c, _)| {
                    let s = c.iter().zip(f).fold(self.zero(), |acc, (ci, fi)| &acc + &(ci * fi.coeff(&m).unwrap_or(&self.zero())));
                    &s / &p
                })
                .collect();
            let base = solve_fplde_rational(&FpldeProblem::new(a / &p, rhs, self.tower.kv()));
            state = base
                .vectors
                .into_iter()
                .map(|(kappa, gamma)| {
                    let (c, g) = combine(&state, &kappa, nv, d);
                    (c, g.add(&Elem::monomial(m.clone(), gamma)))
                })
                .collect();
        }
        Ok(state)
    }

    /// Solutions using Σ generators `0..level` only.
    fn solve_level(&mut self, f: &[Elem], level: usize) -> Result<Vectors, PtError> {
        if level == 0 {
            return self.solve_fplde_tower(&RatFun::one(self.tower.nvars()), f);
        }
        let nv = self.tower.nvars();
        let d = f.len();
        let j = level - 1;
        let b = sigma_degree_bound(f, j);
        // (c, g, residual sum c_i f_i - (σ(g) - g))
        let mut state: Vec<(Vec<RatFun>, Elem, Elem)> = (0..d).map(|i| (unit_vec(nv, d, i), Elem::zero(), f[i].clone())).collect();
        for m in (0..=b as u32).rev() {
            let rhs: Vec<Elem> = state.iter().map(|(_, _, r)| r.coeff_s(j, m)).collect();
            let sub = self.solve_level(&rhs, j)?;
            state = sub
                .into_iter()
                .map(|(kappa, h)| {
                    let mut c = vec![self.zero(); d];
                    let mut g = Elem::zero();
                    let mut r = Elem::zero();
                    for (kq, (cq, gq, rq)) in kappa.iter().zip(&state) {
                        if kq.is_zero() {
                            continue;
                        }
                        for (ci, x) in c.iter_mut().zip(cq) {
                            *ci = &*ci + &(kq * x);
                        }
                        g = g.add(&gq.scale(kq));
                        r = r.add(&rq.scale(kq));
                    }
                    let hs = h.times_s(j, m);
                    let delta = self.tower.sigma(&hs).sub(&hs);
                    (c, g.add(&hs), r.sub(&delta))
                })
                .collect();
        }
        Ok(state
            .into_iter()
            .map(|(c, g, r)| {
                assert!(r.is_zero(), "telescoping residual did not vanish");
                assert!(g.deg_s(j) <= b, "solution exceeds the Σ degree bound");
                (c, g)
            })
            .collect())
    }

    /// Basis of the parameterized telescoping space for `f`.
    pub fn solve(&mut self, f: &[Elem]) -> Result<SolutionBasis, PtError> {
        let d = f.len();
        let raw = self.solve_level(f, self.tower.sigmas.len())?;
        let vectors = canonicalize(self.tower, raw, d);
        for (c, g) in &vectors {
            assert!(pt_residual_ok(self.tower, f, c, g), "telescoping residual check failed");
        }
        Ok(SolutionBasis { arity: d, vectors })
    }
}

fn unit_vec(nv: usize, d: usize, i: usize) -> Vec<RatFun> {
    (0..d).map(|j| if i == j { RatFun::one(nv) } else { RatFun::zero(nv) }).collect()
}

fn combine(state: &[(Vec<RatFun>, Elem)], kappa: &[RatFun], nv: usize, d: usize) -> (Vec<RatFun>, Elem) {
    let mut c = vec![RatFun::zero(nv); d];
    let mut g = Elem::zero();
    for (kq, (cq, gq)) in kappa.iter().zip(state) {
        if kq.is_zero() {
            continue;
        }
        for (ci, x) in c.iter_mut().zip(cq) {
            *ci = &*ci + &(kq * x);
        }
        g = g.add(&gq.scale(kq));
    }
    (c, g)
}

/// Row-reduces the `c` parts; homogeneous constants are scaled to `1`.
fn canonicalize(tower: &Tower, raw: Vectors, d: usize) -> Vectors {
    let nv = tower.nvars();
    // Augment each c with a unit tag so the G parts can follow the row operations.
    let n = raw.len();
    let rows: Vec<Vec<RatFun>> = raw.iter().enumerate().map(|(q, (c, _))| c.iter().cloned().chain(unit_vec(nv, n, q)).collect()).collect();
    let (red, _) = rref(rows, d + n);
    let mut out = Vec::new();
    for row in red {
        let (_, kappa) = row.split_at(d);
        let (c, mut g) = combine(&raw, kappa, nv, d);
        debug_assert_eq!(c.len(), d);
        if c.iter().all(|x| x.is_zero()) {
            if let Some(v) = g.as_base(nv).filter(|v| !v.depends_on(tower.kv())) {
                g = g.scale(&v.recip());
            }
        }
        out.push((c, g));
    }
    out
}

/// `σ(g) - g - sum c_i f_i == 0`.
pub fn pt_residual_ok(tower: &Tower, f: &[Elem], c: &[RatFun], g: &Elem) -> bool {
    let mut r = tower.sigma(g).sub(g);
    for (ci, fi) in c.iter().zip(f) {
        r = r.sub(&fi.scale(ci));
    }
    r.is_zero()
}

/// Basis of `{(c, g) : σ(g) - g = sum c_i f_i}` with default settings.
pub fn solve_pt(tower: &Tower, f: &[Elem]) -> Result<SolutionBasis, PtError> {
    PtSolver::new(tower, PtConfig::default())?.solve(f)
}

/// Whether `Σ β` needs a new Σ generator, or a telescoper `g` exists.
pub fn is_sigma_extension_needed(tower: &Tower, beta: &Elem) -> Result<SigmaTest, PtError> {
    is_sigma_extension_needed_with(tower, beta, PtConfig::default())
}

pub fn is_sigma_extension_needed_with(tower: &Tower, beta: &Elem, cfg: PtConfig) -> Result<SigmaTest, PtError> {
    let basis = PtSolver::new(tower, cfg)?.solve(std::slice::from_ref(beta))?;
    for (c, g) in basis.vectors {
        if !c[0].is_zero() {
            return Ok(SigmaTest::Telescoper(g.scale(&c[0].recip())));
        }
    }
    Ok(SigmaTest::AdjoinNew)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> Tower {
        let mut t = Tower::new(&[], "k");
        let beta = t.base(t.k().shift_var(0, 1).recip());
        t.add_sigma("s", beta, 0, RatFun::zero(1), None);
        t
    }

    #[test]
    fn sum_of_harmonic_numbers() {
        let t = harmonic();
        let b = solve_pt(&t, &[t.sigma_elem(0)]).unwrap();
        assert_eq!(b.vectors.len(), 2);
        let (c, g) = &b.vectors[0];
        assert!(c[0].is_one());
        // g = k s - k up to a constant
        let k = t.base(t.k());
        let expect = t.mul(&k, &t.sigma_elem(0)).sub(&k);
        let diff = g.sub(&expect).as_base(1).unwrap();
        assert!(diff.is_constant());
        assert_eq!(b.vectors[1], (vec![RatFun::zero(1)], t.one()));
    }

    #[test]
    fn harmonic_term_needs_extension() {
        let t = Tower::new(&[], "k");
        let beta = t.base(t.k().shift_var(0, 1).recip());
        assert_eq!(is_sigma_extension_needed(&t, &beta).unwrap(), SigmaTest::AdjoinNew);
        let h = harmonic();
        assert_eq!(is_sigma_extension_needed(&h, &beta).unwrap(), SigmaTest::Telescoper(h.sigma_elem(0)));
    }

    #[test]
    fn geometric_product_telescopes() {
        let mut t = Tower::new(&[], "k");
        t.add_pi("t", RatFun::from_int(1, 2), 1, vec![], None);
        // sum of 2^k telescopes with g = 2^k
        let f = t.pi_elem(0, 1);
        let b = solve_pt(&t, &[f]).unwrap();
        assert_eq!(b.vectors[0], (vec![RatFun::one(1)], t.pi_elem(0, 1).scale(&RatFun::from_int(1, 1))));
    }

    #[test]
    fn alternating_sign() {
        let mut t = Tower::new(&[], "k");
        t.set_root("x", -crate::exact_arith::BigRat::from_integer(1.into()), 2).unwrap();
        // σ(x) - x = -2x, so g = -x/2 for f = x
        let b = solve_pt(&t, &[t.x_elem(1)]).unwrap();
        assert_eq!(b.vectors[0], (vec![RatFun::one(1)], t.x_elem(1).scale(&RatFun::constant(1, crate::exact_arith::BigRat::new((-1).into(), 2.into())))));
    }
}
