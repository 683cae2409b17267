//! First-order parameterized linear difference equations over `K(k)`:
//! `σ(g) - a g = c_1 f_1 + ... + c_d f_d`.

pub mod linalg;

use crate::exact_arith::gcd::{poly_gcd, poly_lcm, primitive_in};
use crate::exact_arith::{dispersion, MPoly, RatFun};

/// Equation data. `kv` is the index of the shift variable.
#[derive(Clone, Debug, PartialEq)]
pub struct FpldeProblem {
    pub a: RatFun,
    pub f: Vec<RatFun>,
    pub kv: usize,
}

/// Basis of `V(a, f, K(k))`: vectors `(c_1..c_d, g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatBasis {
    pub arity: usize,
    pub vectors: Vec<(Vec<RatFun>, RatFun)>,
}

impl FpldeProblem {
    pub fn new(a: RatFun, f: Vec<RatFun>, kv: usize) -> Self {
        assert!(!a.is_zero(), "a must be nonzero");
        FpldeProblem { a, f, kv }
    }

    fn nvars(&self) -> usize {
        self.a.nvars()
    }

    /// Common denominator of the right-hand sides.
    fn rhs_den(&self) -> MPoly {
        self.f.iter().filter(|f| !f.is_zero()).fold(MPoly::one(self.nvars()), |acc, f| poly_lcm(&acc, f.den()))
    }

    /// Coefficients `(a1, a0)` of `a1 σ(g) + a0 g = B D sum c_i f_i`.
    fn operator(&self) -> (MPoly, MPoly, MPoly) {
        let d = self.rhs_den();
        let a1 = self.a.den() * &d;
        let a0 = -(self.a.num() * &d);
        (a1, a0, d)
    }

    /// Right-hand sides `B D f_i` as polynomials.
    fn rhs_polys(&self) -> Vec<MPoly> {
        let d = self.rhs_den();
        self.f
            .iter()
            .map(|f| {
                if f.is_zero() {
                    MPoly::zero(self.nvars())
                } else {
                    (&(self.a.den() * &d) * f.num()).div_exact(f.den()).expect("den divides lcm")
                }
            })
            .collect()
    }
}

/// `u` such that every rational solution `g` has `g u` polynomial in `k`
/// (universal denominator from dispersion).
pub fn denominator_bound(prob: &FpldeProblem) -> MPoly {
    let kv = prob.kv;
    let (a1, a0, _) = prob.operator();
    let mut big_a = primitive_in(&a1.shift_var(kv, -1), kv);
    let mut big_b = primitive_in(&a0, kv);
    let mut u = MPoly::one(prob.nvars());
    let n = dispersion(&big_a, &big_b, kv);
    for i in (0..=n).rev() {
        let d = primitive_in(&poly_gcd(&big_a, &big_b.shift_var(kv, i)), kv);
        if !d.depends_on(kv) {
            continue;
        }
        big_a = big_a.div_exact(&d).expect("gcd divides");
        big_b = big_b.div_exact(&d.shift_var(kv, -i)).expect("shifted gcd divides");
        for j in 0..=i {
            u = &u * &d.shift_var(kv, -j);
        }
    }
    u.primitive()
}

fn lc_ratio(num: &MPoly, den: &MPoly) -> RatFun {
    RatFun::new(num.clone(), den.clone())
}

/// Upper bound for `deg_k p` where `g = p / u` (`-1` if only `p = 0` is possible).
pub fn degree_bound(prob: &FpldeProblem, u: &MPoly) -> i64 {
    let kv = prob.kv;
    let (a1, a0, _) = prob.operator();
    let q1 = &a1 * u;
    let q0 = &a0 * &u.shift_var(kv, 1);
    let us = u * &u.shift_var(kv, 1);
    let deg_r = prob.rhs_polys().iter().filter(|r| !r.is_zero()).map(|r| (r * &us).degree(kv)).max().unwrap_or(-1);
    let (d1, d0) = (q1.degree(kv), q0.degree(kv));
    let l1 = q1.lc_in(kv);
    let l0 = q0.lc_in(kv);
    let cancel = d1 == d0 && (&l1 + &l0).is_zero();
    if !cancel {
        let m = d1.max(d0);
        return if deg_r < 0 { -1 } else { (deg_r - m).max(-1) };
    }
    let q = d1;
    let mut bound = if deg_r < 0 { -1 } else { deg_r - q + 1 };
    let sum = &q1 + &q0;
    let sub = sum.coeff_in(kv, (q - 1).max(0) as u32);
    let sub = if q >= 1 { sub } else { MPoly::zero(prob.nvars()) };
    let ratio = lc_ratio(&(-&sub), &l1);
    if let Some(c) = ratio.as_constant() {
        if c.is_integer() && c >= num_rational::BigRational::from_integer(0.into()) {
            let c: i64 = c.to_integer().try_into().unwrap_or(i64::MAX);
            bound = bound.max(c);
        }
    }
    bound.max(-1)
}

/// Basis of `V(a, f, K(k))`, every vector residual-checked.
pub fn solve_fplde_rational(prob: &FpldeProblem) -> RatBasis {
    let kv = prob.kv;
    let nv = prob.nvars();
    let d = prob.f.len();
    let u = denominator_bound(prob);
    let deg = degree_bound(prob, &u);
    let (a1, a0, _) = prob.operator();
    let us = &u * &u.shift_var(kv, 1);
    let q1 = &a1 * &u;
    let q0 = &a0 * &u.shift_var(kv, 1);
    let np = (deg + 1).max(0) as usize;
    // Columns: p_deg .. p_0, then c_1 .. c_d.
    let mut cols: Vec<MPoly> = Vec::with_capacity(np + d);
    let k = MPoly::var(nv, kv);
    let k1 = &k + &MPoly::one(nv);
    for j in (0..np as u32).rev() {
        cols.push(&(&q1 * &k1.pow(j)) + &(&q0 * &k.pow(j)));
    }
    for r in prob.rhs_polys() {
        cols.push(-(&r * &us));
    }
    let ncols = cols.len();
    let maxdeg = cols.iter().map(|c| c.degree(kv)).max().unwrap_or(-1);
    let mut rows = Vec::new();
    for m in 0..=maxdeg.max(0) as u32 {
        let row: Vec<RatFun> = cols.iter().map(|c| RatFun::from_poly(c.coeff_in(kv, m))).collect();
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
    let ns = linalg::nullspace(rows, ncols, nv);
    // Reorder to (c, p) and canonicalize.
    let reordered: Vec<Vec<RatFun>> = ns.into_iter().map(|v| v[np..].iter().chain(v[..np].iter()).cloned().collect()).collect();
    let canon = linalg::canonical_span(reordered, ncols);
    let urf = RatFun::from_poly(u.clone());
    let mut vectors = Vec::new();
    for v in canon {
        let c = v[..d].to_vec();
        let mut p = RatFun::zero(nv);
        for (idx, coef) in v[d..].iter().enumerate() {
            let j = (np - 1 - idx) as u32;
            p = &p + &(coef * &RatFun::from_poly(k.pow(j)));
        }
        let g = &p / &urf;
        assert!(residual_ok(prob, &c, &g), "FPLDE residual check failed");
        vectors.push((c, g));
    }
    RatBasis { arity: d, vectors }
}

/// `σ(g) - a g - sum c_i f_i == 0`.
pub fn residual_ok(prob: &FpldeProblem, c: &[RatFun], g: &RatFun) -> bool {
    let mut r = &g.shift_var(prob.kv, 1) - &(&prob.a * g);
    for (ci, fi) in c.iter().zip(&prob.f) {
        r = &r - &(ci * fi);
    }
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> RatFun {
        RatFun::var(2, 1)
    }
    fn q(x: i64) -> RatFun {
        RatFun::from_int(2, x)
    }

    #[test]
    fn telescoping_one() {
        let b = solve_fplde_rational(&FpldeProblem::new(q(1), vec![q(1)], 1));
        assert_eq!(b.vectors, vec![(vec![q(1)], k()), (vec![q(0)], q(1))]);
    }

    #[test]
    fn geometric_factor() {
        let b = solve_fplde_rational(&FpldeProblem::new(q(2), vec![q(1)], 1));
        assert_eq!(b.vectors, vec![(vec![q(1)], q(-1))]);
    }

    #[test]
    fn homogeneous_with_free_parameter() {
        let a = &(&k() + &q(1)) / &k();
        let b = solve_fplde_rational(&FpldeProblem::new(a, vec![q(0)], 1));
        assert_eq!(b.vectors, vec![(vec![q(1)], q(0)), (vec![q(0)], k())]);
    }

    #[test]
    fn denominator_and_degree_bounds() {
        let f = (&k() * &(&k() + &q(1))).recip();
        let p = FpldeProblem::new(q(1), vec![f], 1);
        let u = denominator_bound(&p);
        assert!(u.div_exact(&MPoly::var(2, 1)).is_some());
        let b = solve_fplde_rational(&p);
        assert_eq!(b.vectors[0], (vec![q(1)], -&k().recip()));
        assert!(degree_bound(&FpldeProblem::new(q(1), vec![q(1)], 1), &MPoly::one(2)) >= 1);
        assert!(degree_bound(&FpldeProblem::new(q(2), vec![q(1)], 1), &MPoly::one(2)) >= 0);
    }
}
