//! Resultants, integer roots and dispersion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gcd::{content_in, poly_gcd};
use super::mpoly::MPoly;
use super::BigRat;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mut m: Vec<Vec<MPoly>>, nvars: usize) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one(nvars);
    }
    let mut sign = false;
    let mut prev = MPoly::one(nvars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return MPoly::zero(nvars);
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MPoly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Resultant of `a` and `b` with respect to variable `v` (Sylvester determinant).
pub fn resultant(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let nv = a.nvars();
    if a.is_zero() || b.is_zero() {
        return MPoly::zero(nv);
    }
    let da = a.degree(v) as usize;
    let db = b.degree(v) as usize;
    if da == 0 && db == 0 {
        return MPoly::one(nv);
    }
    if da == 0 {
        return a.pow(db as u32);
    }
    if db == 0 {
        return b.pow(da as u32);
    }
    let size = da + db;
    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let get = |c: &std::collections::BTreeMap<u32, MPoly>, d: usize| c.get(&(d as u32)).cloned().unwrap_or_else(|| MPoly::zero(nv));
    let mut m = vec![vec![MPoly::zero(nv); size]; size];
    for row in 0..db {
        for i in 0..=da {
            m[row][row + i] = get(&ca, da - i);
        }
    }
    for row in 0..da {
        for i in 0..=db {
            m[db + row][row + i] = get(&cb, db - i);
        }
    }
    determinant(m, nv)
}

/// `res_k(a(k), b(k+z))` as a polynomial in the remaining variables with a
/// fresh variable `z` appended last (variable `kv` removed).
pub fn shift_resultant(a: &MPoly, b: &MPoly, kv: usize) -> MPoly {
    let nv = a.nvars();
    let a2 = a.insert_var(nv);
    let b2 = b.insert_var(nv);
    let shift = &MPoly::var(nv + 1, kv) + &MPoly::var(nv + 1, nv);
    let b2 = b2.compose(kv, &shift);
    resultant(&a2, &b2, kv).remove_var(kv)
}

type UPoly = Vec<BigRat>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn urem(a: &UPoly, b: &UPoly) -> UPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] / &lb;
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r = trim(r);
    }
    r
}

fn ugcd(a: UPoly, b: UPoly) -> UPoly {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = urem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Integer roots of `p`, viewed as a univariate polynomial in `zv` whose
/// coefficients are polynomials in the other variables. A root must make
/// every coefficient vanish identically.
pub fn integer_roots(p: &MPoly, zv: usize) -> Vec<i64> {
    assert!(!p.is_zero(), "integer_roots of zero");
    let mut groups: std::collections::BTreeMap<Vec<u32>, UPoly> = Default::default();
    for (e, c) in p.terms() {
        let mut key = e.clone();
        let d = key[zv] as usize;
        key[zv] = 0;
        let g = groups.entry(key).or_default();
        if g.len() <= d {
            g.resize(d + 1, BigRat::zero());
        }
        g[d] += c;
    }
    let mut g: UPoly = Vec::new();
    for (_, u) in groups {
        g = ugcd(g, u);
    }
    univariate_integer_roots(&g)
}

fn univariate_integer_roots(p: &UPoly) -> Vec<i64> {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return Vec::new();
    }
    // Integral primitive coefficients.
    let mut lcm = BigInt::one();
    for c in &p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(0);
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let a0 = ints[0].abs();
        let lead = ints.last().unwrap().abs();
        // Cauchy bound on root size.
        let bound = ints.iter().map(|c| c.abs()).max().unwrap() / &lead + BigInt::one();
        for d in divisors(&a0) {
            if d > bound {
                continue;
            }
            for cand in [d.clone(), -d] {
                if eval_int(ints, &cand).is_zero() {
                    if let Some(r) = cand.to_i64() {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Rational roots of a univariate polynomial given by coefficients (index = degree).
pub fn univariate_rational_roots(p: &[BigRat]) -> Vec<BigRat> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for c in &p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(BigRat::zero());
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let nums = divisors(&ints[0].abs());
        let dens = divisors(&ints.last().unwrap().abs());
        for a in &nums {
            for b in &dens {
                if !a.gcd(b).is_one() {
                    continue;
                }
                for cand in [BigRat::new(a.clone(), b.clone()), BigRat::new(-a.clone(), b.clone())] {
                    let mut acc = BigRat::zero();
                    for c in ints.iter().rev() {
                        acc = acc * &cand + BigRat::from_integer(c.clone());
                    }
                    if acc.is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c.iter().rev() {
        acc = acc * x + a;
    }
    acc
}

/// Prime factorization by trial division. Cofactors left after trial
/// division up to 10^6 are reported as a single factor.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= n && p <= limit {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in factor_integer(n) {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

/// Largest `r >= 0` such that `p` and `q(k+r)` share a factor depending on
/// `k`; `-1` when there is none.
pub fn dispersion(p: &MPoly, q: &MPoly, kv: usize) -> i64 {
    assert!(!p.is_zero() && !q.is_zero());
    let pk = k_part(p, kv);
    let qk = k_part(q, kv);
    if !pk.depends_on(kv) || !qk.depends_on(kv) {
        return -1;
    }
    let zv = p.nvars() - 1;
    let res = shift_resultant(&pk, &qk, kv);
    if res.is_zero() {
        // Only possible when they share a factor for every shift; cannot
        // happen for nonzero polynomials with a k-dependent part.
        return 0;
    }
    integer_roots(&res, zv)
        .into_iter()
        .filter(|&r| r >= 0)
        .filter(|&r| poly_gcd(&pk, &qk.shift_var(kv, r)).depends_on(kv))
        .max()
        .unwrap_or(-1)
}

fn k_part(p: &MPoly, kv: usize) -> MPoly {
    let c = content_in(p, kv);
    p.div_exact(&c).expect("content divides").primitive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> MPoly {
        MPoly::var(2, 1)
    }
    fn n() -> MPoly {
        MPoly::var(2, 0)
    }
    fn c(x: i64) -> MPoly {
        MPoly::from_int(2, x)
    }

    #[test]
    fn resultant_of_k_and_shifted_k() {
        // res_k(k, k+z) = z up to sign
        let r = shift_resultant(&k(), &k(), 1);
        assert_eq!(r.primitive(), MPoly::var(2, 1));
        assert_eq!(integer_roots(&r, 1), vec![0]);
    }

    #[test]
    fn resultant_detects_shift_two() {
        let a = &k() + &n();
        let b = &(&(-&k()) - &c(2)) - &n();
        let r = shift_resultant(&a, &b, 1);
        assert_eq!(integer_roots(&r, 1), vec![-2]);
        // The reverse direction yields the opposite shift.
        let r2 = shift_resultant(&b, &a, 1);
        assert_eq!(integer_roots(&r2, 1), vec![2]);
    }

    #[test]
    fn roots_of_quadratics() {
        let z = MPoly::var(1, 0);
        let p = &z.pow(2) - &MPoly::from_int(1, 4);
        assert_eq!(integer_roots(&p, 0), vec![-2, 2]);
        let q = &z.pow(2) + &MPoly::from_int(1, 1);
        assert!(integer_roots(&q, 0).is_empty());
        assert_eq!(integer_roots(&(&z - &MPoly::from_int(1, 2)), 0), vec![2]);
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion(&k(), &(&k() - &c(3)), 1), 3);
        assert_eq!(dispersion(&k(), &(&k() + &c(1)), 1), -1);
        let p = &(&k() + &n()) * &(&k() + &c(1));
        assert_eq!(dispersion(&p, &p, 1), 0);
    }

    #[test]
    fn factor_small_integers() {
        assert_eq!(factor_integer(&BigInt::from(360)), vec![(2.into(), 3), (3.into(), 2), (5.into(), 1)]);
    }
}
