//! Multivariate gcd by recursive primitive remainder sequences.

use super::mpoly::MPoly;

/// Greatest common divisor, normalized by [`MPoly::primitive`].
/// `gcd(0, q)` is the normalized `q`.
pub fn poly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let nv = a.nvars();
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(nv);
    }
    let pa = a.primitive();
    let pb = b.primitive();
    if pa == pb {
        return pa;
    }
    let v = pa.main_var().max(pb.main_var()).unwrap();
    if !pa.depends_on(v) {
        return poly_gcd(&pa, &content_in(&pb, v));
    }
    if !pb.depends_on(v) {
        return poly_gcd(&content_in(&pa, v), &pb);
    }
    let ca = content_in(&pa, v);
    let cb = content_in(&pb, v);
    let gc = poly_gcd(&ca, &cb);
    let mut p = pa.div_exact(&ca).expect("content divides");
    let mut q = pb.div_exact(&cb).expect("content divides");
    if p.degree(v) < q.degree(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree(v) == 0 {
            q = MPoly::one(nv);
            break;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    (&gc * &primitive_in(&q, v)).primitive()
}

pub fn poly_lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero(a.nvars());
    }
    let g = poly_gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).primitive()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &MPoly, v: usize) -> MPoly {
    let nv = p.nvars();
    let coeffs = p.coeffs_in(v);
    if coeffs.values().any(|c| c.is_constant()) {
        return MPoly::one(nv);
    }
    let mut g = MPoly::zero(nv);
    for c in coeffs.values() {
        g = poly_gcd(&g, c);
        if g.is_constant() {
            return MPoly::one(nv);
        }
    }
    g
}

pub fn primitive_in(p: &MPoly, v: usize) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").primitive()
}

/// Pseudo-remainder of `a` by `b` with respect to `v`, up to a rational factor.
pub fn prem(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let db = b.degree(v);
    let lb = b.lc_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree(v) >= db {
        let d = (r.degree(v) - db) as u32;
        let lr = r.lc_in(v);
        r = &(&r * &lb) - &(&lr * &b.shift_up(v, d));
        if !r.is_zero() {
            let c = r.content();
            r = r.scale(&c.recip());
        }
    }
    r
}
