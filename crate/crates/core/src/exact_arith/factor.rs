//! Factorization into irreducibles over Z[params, k].
//!
//! Linear and quadratic factors in each variable are found exactly; cubic
//! cofactors are certified irreducible through a specialization. Anything
//! else is reported as [`ArithError::FactorDegreeExceeded`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::gcd::{content_in, poly_gcd};
use super::mpoly::{Exponents, MPoly};
use super::ratfun::RatFun;
use super::resultant::{factor_integer, univariate_rational_roots};
use super::{ArithError, BigRat};

/// `unit * prod(f^m)` where every `f` is a normalized irreducible
/// polynomial or a positive prime (as a constant polynomial).
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: BigRat,
    pub factors: Vec<(MPoly, i32)>,
}

impl Factorization {
    pub fn expand(&self, nvars: usize) -> RatFun {
        let mut out = RatFun::constant(nvars, self.unit.clone());
        for (f, m) in &self.factors {
            out = &out * &RatFun::from_poly(f.clone()).pow(*m as i64);
        }
        out
    }

    fn push(&mut self, f: MPoly, m: i32) {
        if m == 0 {
            return;
        }
        if let Some(slot) = self.factors.iter_mut().find(|(g, _)| *g == f) {
            slot.1 += m;
        } else {
            self.factors.push((f, m));
        }
    }

    fn finish(mut self) -> Self {
        self.factors.retain(|(_, m)| *m != 0);
        self.factors.sort_by(|a, b| a.0.terms().cmp(b.0.terms()));
        self
    }
}

/// Factors a nonzero polynomial. `cap` bounds the degree (in any one
/// variable) of irreducible factors that may be certified.
pub fn factor_irreducible(p: &MPoly, cap: i64) -> Result<Factorization, ArithError> {
    assert!(!p.is_zero(), "factoring zero");
    let mut out = Factorization { unit: BigRat::one(), factors: Vec::new() };
    let mut acc = Vec::new();
    factor_primitive(&p.primitive(), cap, &mut acc)?;
    let mut prod = MPoly::one(p.nvars());
    for (f, m) in &acc {
        prod = &prod * &f.pow(*m as u32);
    }
    let c = p.div_exact(&prod).and_then(|q| q.as_constant()).expect("factorization is exact");
    push_rational(&mut out, &c, p.nvars());
    for (f, m) in acc {
        out.push(f, m as i32);
    }
    Ok(out.finish())
}

/// Factors a nonzero rational function; denominators get negative multiplicities.
pub fn factor_ratfun(r: &RatFun, cap: i64) -> Result<Factorization, ArithError> {
    let a = factor_irreducible(r.num(), cap)?;
    let b = factor_irreducible(r.den(), cap)?;
    let mut out = Factorization { unit: &a.unit / &b.unit, factors: a.factors };
    for (f, m) in b.factors {
        out.push(f, -m);
    }
    Ok(out.finish())
}

fn push_rational(out: &mut Factorization, c: &BigRat, nv: usize) {
    if c.is_negative() {
        out.unit = -out.unit.clone();
    }
    for (q, e) in factor_integer(c.numer()) {
        out.push(MPoly::constant(nv, BigRat::from_integer(q)), e as i32);
    }
    for (q, e) in factor_integer(c.denom()) {
        out.push(MPoly::constant(nv, BigRat::from_integer(q)), -(e as i32));
    }
}

/// `q` is normalized (integral, primitive); appends its non-constant factors.
fn factor_primitive(q: &MPoly, cap: i64, out: &mut Vec<(MPoly, u32)>) -> Result<(), ArithError> {
    let Some(v) = q.main_var() else {
        return Ok(());
    };
    let cont = content_in(q, v);
    factor_primitive(&cont, cap, out)?;
    let pp = q.div_exact(&cont).expect("content divides").primitive();
    let g = poly_gcd(&pp, &pp.derivative(v));
    let rad = pp.div_exact(&g).expect("gcd divides").primitive();
    let mut irreducibles = Vec::new();
    split_squarefree(&rad, v, cap, &mut irreducibles)?;
    let mut rest = pp;
    for f in irreducibles {
        let mut m = 0;
        while let Some(r) = rest.div_exact(&f) {
            rest = r;
            m += 1;
        }
        debug_assert!(m > 0);
        out.push((f, m));
    }
    debug_assert!(rest.is_constant());
    Ok(())
}

/// Splits a squarefree polynomial, primitive in its main variable `v`.
fn split_squarefree(r: &MPoly, v: usize, cap: i64, out: &mut Vec<MPoly>) -> Result<(), ArithError> {
    let d = r.degree(v);
    if d <= 0 {
        return Ok(());
    }
    if d == 1 {
        out.push(r.primitive());
        return Ok(());
    }
    if d == 2 {
        return split_quadratic(r, v, cap, out);
    }
    if let Some(f) = find_linear_factor(r, v) {
        out.push(f.clone());
        let rest = r.div_exact(&f).expect("verified factor").primitive();
        return split_squarefree(&rest, v, cap, out);
    }
    if d == 3 && d <= cap && specialization_has_no_root(r, v) {
        out.push(r.primitive());
        return Ok(());
    }
    Err(ArithError::FactorDegreeExceeded { degree: d, cap })
}

fn split_quadratic(r: &MPoly, v: usize, cap: i64, out: &mut Vec<MPoly>) -> Result<(), ArithError> {
    let a = r.coeff_in(v, 2);
    let b = r.coeff_in(v, 1);
    let c = r.coeff_in(v, 0);
    let disc = &(&b * &b) - &(&(&a * &c).scale(&BigRat::from_integer(4.into())));
    match poly_sqrt(&disc) {
        Some(s) => {
            let x = MPoly::var(r.nvars(), v);
            let two_a_x = &(&a * &x).scale(&BigRat::from_integer(2.into()));
            out.push((&(two_a_x + &b) - &s).primitive());
            out.push((&(two_a_x + &b) + &s).primitive());
            Ok(())
        }
        None if cap >= 2 => {
            out.push(r.primitive());
            Ok(())
        }
        None => Err(ArithError::FactorDegreeExceeded { degree: 2, cap }),
    }
}

fn rat_sqrt(x: &BigRat) -> Option<BigRat> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRat::new(n, d))
    } else {
        None
    }
}

/// Exact square root of a polynomial, if one exists.
pub fn poly_sqrt(p: &MPoly) -> Option<MPoly> {
    let nv = p.nvars();
    if p.is_zero() {
        return Some(p.clone());
    }
    let (le, lc) = p.lex_leading().map(|(e, c)| (e.clone(), c.clone()))?;
    if le.iter().any(|e| e % 2 == 1) {
        return None;
    }
    let root_lead_e: Exponents = le.iter().map(|e| e / 2).collect();
    let root_lead = MPoly::from_terms(nv, vec![(root_lead_e.clone(), rat_sqrt(&lc)?)]);
    let two_lead = root_lead.scale(&BigRat::from_integer(2.into()));
    let mut root = root_lead.clone();
    let mut rem = p - &(&root * &root);
    for _ in 0..=p.num_terms() {
        if rem.is_zero() {
            return Some(root);
        }
        let (re, _) = rem.lex_leading()?;
        if re.iter().zip(&root_lead_e).any(|(a, b)| a < b) {
            return None;
        }
        let lead_rem = MPoly::from_terms(nv, vec![rem.lex_leading().map(|(e, c)| (e.clone(), c.clone()))?]);
        let t = lead_rem.div_exact(&two_lead)?;
        root = &root + &t;
        rem = p - &(&root * &root);
    }
    None
}

fn base_point(nv: usize, shift: i64) -> Vec<BigRat> {
    const PRIMES: [i64; 8] = [101, 211, 307, 401, 503, 601, 701, 809];
    (0..nv).map(|i| BigRat::from_integer(BigInt::from(PRIMES[i % 8] + shift * 17 + i as i64))).collect()
}

/// Specializes every variable but `v`; returns the univariate coefficients.
fn specialize(r: &MPoly, v: usize, point: &[BigRat]) -> Vec<BigRat> {
    let d = r.degree(v).max(0) as usize;
    let mut out = vec![BigRat::zero(); d + 1];
    for (i, c) in r.coeffs_in(v) {
        out[i as usize] = c.eval_all(point);
    }
    out
}

/// Looks for a factor `a*v - root` with integer `a` and `root` affine in
/// the other variables, verified by exact division.
fn find_linear_factor(r: &MPoly, v: usize) -> Option<MPoly> {
    let nv = r.nvars();
    let others: Vec<usize> = (0..nv).filter(|&w| w != v && r.depends_on(w)).collect();
    let d = r.degree(v);
    for shift in 0..3 {
        let p0 = base_point(nv, shift);
        let u0 = specialize(r, v, &p0);
        if u0.last().map_or(true, |c| c.is_zero()) || (u0.len() as i64 - 1) != d {
            continue;
        }
        let r0 = univariate_rational_roots(&u0);
        if r0.is_empty() {
            return None;
        }
        let mut per_var = Vec::new();
        for &w in &others {
            let mut pw = p0.clone();
            pw[w] += BigRat::one();
            per_var.push(univariate_rational_roots(&specialize(r, v, &pw)));
        }
        for root0 in &r0 {
            let mut choice = vec![0usize; others.len()];
            loop {
                if per_var.iter().all(|rs| !rs.is_empty()) {
                    let mut root = MPoly::constant(nv, root0.clone());
                    for (j, &w) in others.iter().enumerate() {
                        let slope = &per_var[j][choice[j]] - root0;
                        let xw = &MPoly::var(nv, w) - &MPoly::constant(nv, p0[w].clone());
                        root = &root + &xw.scale(&slope);
                    }
                    let cand = (&MPoly::var(nv, v) - &root).primitive();
                    if r.div_exact(&cand).is_some() {
                        return Some(cand);
                    }
                } else {
                    break;
                }
                let mut j = 0;
                while j < choice.len() {
                    choice[j] += 1;
                    if choice[j] < per_var[j].len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == choice.len() {
                    break;
                }
            }
        }
        return None;
    }
    None
}

fn specialization_has_no_root(r: &MPoly, v: usize) -> bool {
    let nv = r.nvars();
    let d = r.degree(v);
    for shift in 0..4 {
        let u = specialize(r, v, &base_point(nv, shift));
        if (u.len() as i64 - 1) == d && !u.last().unwrap().is_zero() {
            if univariate_rational_roots(&u).is_empty() {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n() -> MPoly {
        MPoly::var(2, 0)
    }
    fn k() -> MPoly {
        MPoly::var(2, 1)
    }
    fn c(x: i64) -> MPoly {
        MPoly::from_int(2, x)
    }

    fn roundtrip(p: &MPoly) -> Factorization {
        let f = factor_irreducible(p, 3).unwrap();
        assert_eq!(f.expand(2), RatFun::from_poly(p.clone()));
        f
    }

    #[test]
    fn factors_product_of_linears() {
        let p = &(&(&k() + &n()) * &(&k() - &c(1))) * &(&k() + &c(2)).pow(2);
        let f = roundtrip(&p);
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().any(|(g, m)| *g == &k() + &c(2) && *m == 2));
    }

    #[test]
    fn splits_quadratic_with_parameter() {
        // k^2 - n^2 = (k - n)(k + n)
        let p = &k().pow(2) - &n().pow(2);
        assert_eq!(roundtrip(&p).factors.len(), 2);
        let q = &k().pow(2) + &c(1);
        assert_eq!(roundtrip(&q).factors.len(), 1);
    }

    #[test]
    fn integer_and_parameter_content() {
        let p = &(&(&n() + &c(1)) * &(&k() + &n())).scale(&BigRat::new((-12).into(), 5.into()));
        let f = roundtrip(&p);
        assert_eq!(f.unit, -BigRat::one());
        assert!(f.factors.iter().any(|(g, m)| *g == c(5) && *m == -1));
        assert!(f.factors.iter().any(|(g, m)| *g == c(2) && *m == 2));
    }

    #[test]
    fn cubic_cap() {
        let p = &k().pow(3) + &c(2);
        assert_eq!(roundtrip(&p).factors.len(), 1);
        let q = &k().pow(4) + &c(2);
        assert!(matches!(factor_irreducible(&q, 2), Err(ArithError::FactorDegreeExceeded { .. })));
    }

    #[test]
    fn sqrt_of_square() {
        let s = &(&k() + &n()) + &c(3);
        assert_eq!(poly_sqrt(&(&s * &s)), Some(s));
        assert_eq!(poly_sqrt(&(&k() + &c(3))), None);
    }
}
