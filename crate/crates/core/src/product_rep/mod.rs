//! Representation of hypergeometric products by Π generators and one
//! root-of-unity generator.

use num_traits::{One, Signed};

use crate::exact_arith::{factor_ratfun, integer_roots, shift_resultant, ArithError, BigRat, MPoly, RatFun};
use crate::tower::{Elem, Evaluator, Mono, SymbolicDomain, Tower, TowerError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error("invalid product: {0}")]
    InvalidProduct(String),
    #[error("element cannot be expressed in the merged generator")]
    NotRewritable,
}

/// `prod_{j=lower}^{k} alpha(j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperProduct {
    pub alpha: RatFun,
    pub lower: i64,
}

/// `c * σ(g) * x^w * t^mu`, valid from `k = lower - 1` on.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductRepresentation {
    pub c: RatFun,
    pub g: RatFun,
    pub w: u32,
    pub mu: Vec<i32>,
    pub lower: i64,
    pub elem: Elem,
}

/// `Some((r, u))` with `a = u σ^r(b)`.
pub fn shift_equivalent(a: &MPoly, b: &MPoly, kv: usize) -> Option<(i64, i32)> {
    let sign_match = |x: &MPoly, y: &MPoly| {
        if x == y {
            Some(1)
        } else if *x == -y {
            Some(-1)
        } else {
            None
        }
    };
    match (a.depends_on(kv), b.depends_on(kv)) {
        (false, false) => sign_match(a, b).map(|u| (0, u)),
        (true, true) => {
            if a.degree(kv) != b.degree(kv) {
                return None;
            }
            let res = shift_resultant(a, b, kv);
            if res.is_zero() {
                return sign_match(a, b).map(|u| (0, u));
            }
            let zv = a.nvars() - 1;
            integer_roots(&res, zv).into_iter().find_map(|r| sign_match(a, &b.shift_var(kv, r)).map(|u| (r, u)))
        }
        _ => None,
    }
}

/// `γ` with `σ^r(p) = p σ(γ)/γ`.
pub fn gamma_for_shift(p: &MPoly, r: i64, kv: usize) -> RatFun {
    let nv = p.nvars();
    let mut g = RatFun::one(nv);
    if r >= 0 {
        for i in 0..r {
            g = &g * &RatFun::from_poly(p.shift_var(kv, i));
        }
    } else {
        for i in 1..=-r {
            g = &g / &RatFun::from_poly(p.shift_var(kv, -i));
        }
    }
    g
}

/// Largest integer root of numerator or denominator of `r` in `k`.
fn max_root_ratfun(r: &RatFun, kv: usize) -> Option<i64> {
    let a = factor_roots(r.num(), kv);
    let b = factor_roots(r.den(), kv);
    a.into_iter().chain(b).max()
}

fn factor_roots(p: &MPoly, kv: usize) -> Vec<i64> {
    if !p.depends_on(kv) {
        return Vec::new();
    }
    integer_roots(p, kv)
}

fn validate(p: &HyperProduct, kv: usize) -> Result<(), ProductError> {
    if p.alpha.is_zero() {
        return Err(ProductError::InvalidProduct("multiplicand is zero".into()));
    }
    for r in factor_roots(p.alpha.num(), kv) {
        if r >= p.lower {
            return Err(ProductError::InvalidProduct(format!("multiplicand vanishes at {r}")));
        }
    }
    for r in factor_roots(p.alpha.den(), kv) {
        if r >= p.lower {
            return Err(ProductError::InvalidProduct(format!("multiplicand has a pole at {r}")));
        }
    }
    Ok(())
}

use crate::fplde_base::linalg::solve_integer_system as solve_rational;

fn rank(cols: &[Vec<i32>], rows: usize) -> usize {
    let zero = vec![0; rows];
    let mut r = 0;
    let mut basis: Vec<Vec<i32>> = Vec::new();
    for c in cols {
        let mut ext = basis.clone();
        ext.push(c.clone());
        // c independent of basis iff it is not a combination of it.
        let padded: Vec<i32> = (0..rows).map(|i| c.get(i).copied().unwrap_or(0)).collect();
        if padded == zero {
            continue;
        }
        if solve_rational(&basis, &padded).is_none() {
            basis.push(c.clone());
            r += 1;
        }
    }
    r
}

/// Represents every product in `tower`, extending it as needed.
pub fn build_product_representation(products: &[HyperProduct], tower: &Tower, cap: i64) -> Result<(Tower, Vec<ProductRepresentation>), ProductError> {
    let mut tower = tower.clone();
    let mut out = Vec::new();
    for p in products {
        out.push(represent_one(p, &mut tower, cap)?);
    }
    Ok((tower, out))
}

fn represent_one(p: &HyperProduct, tower: &mut Tower, cap: i64) -> Result<ProductRepresentation, ProductError> {
    let kv = tower.kv();
    let nv = tower.nvars();
    validate(p, kv)?;
    let fac = factor_ratfun(&p.alpha, cap)?;
    let mut sign = fac.unit.clone();
    let mut g = RatFun::one(nv);
    let mut e: Vec<i32> = vec![0; tower.classes.len()];
    for (f, m) in &fac.factors {
        let found = tower.classes.iter().enumerate().find_map(|(j, h)| shift_equivalent(f, h, kv).map(|(r, u)| (j, r, u)));
        let j = match found {
            Some((j, r, u)) => {
                if u < 0 && m % 2 != 0 {
                    sign = -sign;
                }
                g = &g * &gamma_for_shift(&tower.classes[j], r, kv).pow(*m as i64);
                j
            }
            None => {
                // New class; a factor with an integer root is shifted so the root is 0.
                let rep = match integer_roots(f, kv).first() {
                    Some(&r) if f.degree(kv) == 1 => {
                        let rep = f.shift_var(kv, r);
                        g = &g * &gamma_for_shift(&rep, -r, kv).pow(*m as i64);
                        rep
                    }
                    _ => f.clone(),
                };
                tower.classes.push(rep);
                e.push(0);
                tower.classes.len() - 1
            }
        };
        e[j] += m;
    }
    let w = if sign.is_negative() { 1 } else { 0 };
    if !(sign.abs()).is_one() {
        return Err(ProductError::InvalidProduct("non-unit sign after factorization".into()));
    }

    let mu = solve_exponents(tower, &e, p.lower)?;
    if w == 1 {
        tower.set_root("x", -BigRat::one(), 2)?;
    }
    let mut lower = p.lower;
    for (i, &m) in mu.iter().enumerate() {
        if m != 0 {
            lower = lower.max(tower.pis[i].lower);
        }
    }
    if let Some(r) = max_root_ratfun(&g, kv) {
        lower = lower.max(r + 1);
    }

    // c = prod_{j=λ}^{λ'-1} α(j) / (g(λ') (-1)^{w(λ'-1)} prod t_l(λ'-1)^{mu_l})
    let mut num = RatFun::one(nv);
    for j in p.lower..lower {
        num = &num * &p.alpha.eval_var(kv, &BigRat::from_integer(j.into())).ok_or(TowerError::PoleEncountered(j))?;
    }
    let mut den = g.eval_var(kv, &BigRat::from_integer(lower.into())).ok_or(TowerError::PoleEncountered(lower))?;
    if w == 1 && (lower - 1).rem_euclid(2) == 1 {
        den = -den;
    }
    let mut ev = Evaluator::new(tower, SymbolicDomain::new(tower));
    for (i, &m) in mu.iter().enumerate() {
        if m != 0 {
            let t = ev.pi_value(i, lower - 1)?;
            den = &den * &t.pow(m as i64);
        }
    }
    if den.is_zero() {
        return Err(ProductError::InvalidProduct("degenerate normalization".into()));
    }
    let c = &num / &den;
    let coef = &c * &g.shift_var(kv, 1);
    let elem = Elem::monomial(Mono::new(w, mu.clone(), vec![]), coef);
    let check = tower.sigma(&elem).sub(&elem.scale(&p.alpha.shift_var(kv, 1)));
    assert!(check.is_zero(), "product representation failed its shift check");
    Ok(ProductRepresentation { c, g, w, mu, lower, elem })
}

/// Exponents of the Π generators reproducing class exponents `e`,
/// adjoining unit generators when the current ones do not span `e`.
fn solve_exponents(tower: &mut Tower, e: &[i32], lower: i64) -> Result<Vec<i32>, ProductError> {
    let kv = tower.kv();
    loop {
        let cols: Vec<Vec<i32>> = tower.pis.iter().map(|g| g.z.clone()).collect();
        if let Some(sol) = solve_rational(&cols, e) {
            if sol.iter().all(|x| x.is_integer()) {
                return Ok(sol.iter().map(|x| x.to_integer().try_into().unwrap()).collect());
            }
            return Err(ProductError::InvalidProduct("exponents are not integral in the generator lattice".into()));
        }
        let rows = tower.classes.len();
        let r0 = rank(&cols, rows);
        let j = (0..rows)
            .filter(|&j| e[j] != 0)
            .find(|&j| {
                let mut ext = cols.clone();
                let mut u = vec![0; j + 1];
                u[j] = 1;
                ext.push(u);
                rank(&ext, rows) > r0
            })
            .expect("some class extends the span");
        let h = tower.classes[j].clone();
        let mut z = vec![0; j + 1];
        z[j] = 1;
        let l = match factor_roots(&h, kv).into_iter().max() {
            Some(r) => lower.max(r + 1),
            None => lower,
        };
        let name = tower.fresh_name("t");
        tower.add_pi(&name, RatFun::from_poly(h), l, z, None);
    }
}

/// Substitution produced by [`merge_pi_generators`].
#[derive(Clone, Debug, PartialEq)]
pub struct PiMerge {
    pub target: usize,
    pub z: Vec<i32>,
}

impl PiMerge {
    /// Rewrites an element of the old tower into the merged one.
    pub fn rewrite(&self, e: &Elem) -> Result<Elem, ProductError> {
        let zp = self.z[self.target];
        let mut out = Elem::zero();
        for (m, c) in e.terms() {
            let a = m.t_at(self.target);
            if a % zp != 0 {
                return Err(ProductError::NotRewritable);
            }
            let q = a / zp;
            let n = m.t.len().max(self.z.len());
            let t = (0..n).map(|i| if i == self.target { q } else { m.t_at(i) - self.z.get(i).copied().unwrap_or(0) * q }).collect();
            out.add_term(Mono::new(m.x, t, m.s.clone()), c.clone());
        }
        Ok(out)
    }
}

/// Replaces the last generator `t_p` with `z_p != 0` by `t = prod t_i^{z_i}`.
pub fn merge_pi_generators(tower: &Tower, z: &[i32], name: &str) -> Result<(Tower, PiMerge), ProductError> {
    let target = z.iter().rposition(|&v| v != 0).ok_or_else(|| ProductError::InvalidProduct("zero merge vector".into()))?;
    let lowers: Vec<i64> = z.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| tower.pis[i].lower).collect();
    if lowers.iter().any(|&l| l != lowers[0]) {
        return Err(ProductError::InvalidProduct("merged generators must share their lower bound".into()));
    }
    let nv = tower.nvars();
    let mut mult = RatFun::one(nv);
    let mut zc: Vec<i32> = vec![0; tower.classes.len()];
    for (i, &v) in z.iter().enumerate() {
        if v != 0 {
            mult = &mult * &tower.pis[i].mult.pow(v as i64);
            for (j, &c) in tower.pis[i].z.iter().enumerate() {
                zc[j] += v * c;
            }
        }
    }
    while zc.last() == Some(&0) {
        zc.pop();
    }
    let merge = PiMerge { target, z: z.to_vec() };
    let mut out = tower.clone();
    out.pis[target].name = name.to_string();
    out.pis[target].mult = mult;
    out.pis[target].z = zc;
    out.pis[target].lower = lowers[0];
    out.pis[target].anchor = None;
    for s in out.sigmas.iter_mut() {
        s.beta = merge.rewrite(&s.beta)?;
    }
    Ok((out, merge))
}

/// Removes Π generators that occur in none of `keep` nor in any Σ image,
/// reindexing `keep` in place. Returns the removed indices.
pub fn drop_unused_pis(tower: &mut Tower, keep: &mut [Elem], only: &[usize]) -> Vec<usize> {
    let used = |i: usize, es: &[Elem], t: &Tower| es.iter().chain(t.sigmas.iter().map(|s| &s.beta)).any(|e| e.terms().any(|(m, _)| m.t_at(i) != 0));
    let mut removed = Vec::new();
    let mut idx: Vec<usize> = only.to_vec();
    idx.sort_unstable();
    for &i in idx.iter().rev() {
        if used(i, keep, tower) {
            continue;
        }
        tower.pis.remove(i);
        let fix = |e: &Elem| Elem::from_terms(e.terms().map(|(m, c)| {
            let mut t = m.t.clone();
            if i < t.len() {
                t.remove(i);
            }
            (Mono::new(m.x, t, m.s.clone()), c.clone())
        }));
        for e in keep.iter_mut() {
            *e = fix(e);
        }
        for s in tower.sigmas.iter_mut() {
            s.beta = fix(&s.beta);
        }
        removed.push(i);
    }
    removed
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn n() -> MPoly {
        MPoly::var(2, 0)
    }
    fn k() -> MPoly {
        MPoly::var(2, 1)
    }
    fn c(x: i64) -> MPoly {
        MPoly::from_int(2, x)
    }

    #[test]
    fn shift_equivalence() {
        let a = &k() + &n();
        let b = &(&(-&k()) - &c(2)) - &n();
        assert_eq!(shift_equivalent(&a, &b, 1), Some((-2, -1)));
        assert_eq!(shift_equivalent(&k(), &(&n() + &c(1)), 1), None);
        assert_eq!(shift_equivalent(&(&k() + &c(1)), &(&k() + &c(5)), 1), Some((-4, 1)));
    }

    #[test]
    fn gamma_identity() {
        let p = &k() + &n();
        let g = gamma_for_shift(&p, 2, 1);
        assert_eq!(g, RatFun::from_poly(&p * &(&p + &c(1))));
        for r in -3..=3 {
            let g = gamma_for_shift(&p, r, 1);
            let lhs = RatFun::from_poly(p.shift_var(1, r));
            let rhs = &(&RatFun::from_poly(p.clone()) * &g.shift_var(1, 1)) / &g;
            assert_eq!(lhs, rhs);
        }
        assert_eq!(gamma_for_shift(&k(), -1, 1), RatFun::from_poly(&k() - &c(1)).recip());
    }

    fn direct(alpha: &RatFun, lower: i64, k0: i64, n0: i64) -> BigRat {
        let mut acc = BigRat::one();
        for j in lower..=k0 {
            acc *= alpha.eval_all(&[BigRat::from_integer(n0.into()), BigRat::from_integer(j.into())]).unwrap();
        }
        acc
    }

    #[test]
    fn two_products_share_generators() {
        let t0 = Tower::new(&["n".to_string()], "k");
        let a1 = RatFun::from_poly((&(&n() + &c(1)).pow(2) * &(&k() + &n())).scale(&BigRat::from_integer(2.into())));
        let a2 = RatFun::from_poly((&(&(&n() + &c(1)) * &(&(&(-&k()) - &c(2)) - &n())) * &k()).scale(&BigRat::from_integer(4.into())));
        let ps = [HyperProduct { alpha: a1, lower: 1 }, HyperProduct { alpha: a2, lower: 1 }];
        let (t, reps) = build_product_representation(&ps, &t0, 2).unwrap();
        assert_eq!(t.pis.len(), 4);
        assert!(t.root.is_some());
        for n0 in [3, 5] {
            let env: BTreeMap<String, BigRat> = [("n".to_string(), BigRat::from_integer(n0.into()))].into();
            for (p, r) in ps.iter().zip(&reps) {
                for k0 in 1..=12 {
                    assert_eq!(t.eval_at(&r.elem, k0, &env).unwrap(), direct(&p.alpha, p.lower, k0, n0));
                }
            }
        }
    }

    #[test]
    fn incremental_matches_joint() {
        let t0 = Tower::new(&["n".to_string()], "k");
        let a1 = RatFun::from_poly(&k() + &n());
        let a2 = RatFun::from_poly(&(&k() + &n()) + &c(3));
        let (t1, _) = build_product_representation(&[HyperProduct { alpha: a1.clone(), lower: 1 }], &t0, 2).unwrap();
        let (t1, _) = build_product_representation(&[HyperProduct { alpha: a2.clone(), lower: 1 }], &t1, 2).unwrap();
        let (t2, _) = build_product_representation(&[HyperProduct { alpha: a1, lower: 1 }, HyperProduct { alpha: a2, lower: 1 }], &t0, 2).unwrap();
        assert_eq!(t1.pis.len(), t2.pis.len());
        assert_eq!(t1.pis.len(), 1);
    }

    #[test]
    fn trivial_product() {
        let t0 = Tower::new(&["n".to_string()], "k");
        let (t, r) = build_product_representation(&[HyperProduct { alpha: RatFun::one(2), lower: 1 }], &t0, 2).unwrap();
        assert!(t.pis.is_empty());
        assert_eq!(r[0].elem, t.one());
    }

    #[test]
    fn binomial_merges_into_one_generator() {
        let t0 = Tower::new(&["n".to_string()], "k");
        let alpha = &RatFun::from_poly(&(&n() - &k()) + &c(1)) / &RatFun::from_poly(k());
        let (t, r) = build_product_representation(&[HyperProduct { alpha, lower: 1 }], &t0, 2).unwrap();
        assert_eq!(t.pis.len(), 2);
        let (tm, merge) = merge_pi_generators(&t, &r[0].mu, "b").unwrap();
        let mut e = [merge.rewrite(&r[0].elem).unwrap()];
        let mut tm = tm;
        drop_unused_pis(&mut tm, &mut e, &[0, 1]);
        assert_eq!(tm.pis.len(), 1);
        let nn = RatFun::var(2, 0);
        let kk = RatFun::var(2, 1);
        let h = &(&nn - &kk) / &(&kk + &RatFun::one(2));
        assert_eq!(tm.sigma(&e[0]), e[0].scale(&h));
        let env: BTreeMap<String, BigRat> = [("n".to_string(), BigRat::from_integer(6.into()))].into();
        assert_eq!(tm.eval_at(&e[0], 2, &env).unwrap(), BigRat::from_integer(15.into()));
    }

    #[test]
    fn rejects_vanishing_multiplicand() {
        let t0 = Tower::new(&["n".to_string()], "k");
        let alpha = RatFun::from_poly(&k() - &c(3));
        assert!(matches!(build_product_representation(&[HyperProduct { alpha, lower: 1 }], &t0, 2), Err(ProductError::InvalidProduct(_))));
    }
}
