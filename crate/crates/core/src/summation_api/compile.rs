//! Compilation of expressions into tower elements, and back.

use super::ast::Expr;
use super::convert::{affine_in, ratfun_to_expr, to_ratfun};
use crate::exact_arith::{integer_roots, BigRat, MPoly, RatFun};
use crate::product_rep::{build_product_representation, drop_unused_pis, merge_pi_generators, HyperProduct, ProductError};
use crate::pt_solver::{is_sigma_extension_needed_with, PtConfig, PtError, SigmaTest};
use crate::tower::{Elem, Tower, TowerError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("unsupported expression: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Pt(#[from] PtError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

fn unsupported(e: &Expr, why: &str) -> CompileError {
    CompileError::Unsupported(format!("{e}: {why}"))
}

/// Incremental compiler: every compiled expression extends one shared tower.
#[derive(Clone, Debug)]
pub struct Compiler {
    pub tower: Tower,
    pub cfg: PtConfig,
}

impl Compiler {
    pub fn new(params: &[String], var: &str) -> Self {
        Self::with_config(params, var, PtConfig::default())
    }

    pub fn with_config(params: &[String], var: &str, cfg: PtConfig) -> Self {
        Compiler { tower: Tower::new(params, var), cfg }
    }

    fn names(&self) -> Vec<String> {
        self.tower.var_names()
    }

    fn rational(&self, e: &Expr) -> Option<RatFun> {
        to_ratfun(e, &self.names())
    }

    fn int_value(&self, e: &Expr) -> Option<i64> {
        let c = self.rational(e)?.as_constant()?;
        c.is_integer().then(|| c.to_integer().try_into().ok()).flatten()
    }

    /// `Some(h)` when `e = k + h` with `h` an integer.
    fn var_offset(&self, e: &Expr) -> Option<i64> {
        let (s, o) = affine_in(e, &self.names(), self.tower.kv())?;
        let o = o.as_constant()?;
        (s == 1 && o.is_integer()).then(|| o.to_integer().try_into().ok()).flatten()
    }

    pub fn compile(&mut self, e: &Expr) -> Result<Elem, CompileError> {
        if let Some(r) = self.rational(e) {
            return Ok(self.tower.base(r));
        }
        match e {
            Expr::Add(a, b) => Ok(self.compile(a)?.add(&self.compile(b)?)),
            Expr::Sub(a, b) => Ok(self.compile(a)?.sub(&self.compile(b)?)),
            Expr::Neg(a) => Ok(self.compile(a)?.neg()),
            Expr::Mul(a, b) => {
                let x = self.compile(a)?;
                let y = self.compile(b)?;
                Ok(self.tower.mul(&x, &y))
            }
            Expr::Div(a, b) => {
                let x = self.compile(a)?;
                let y = self.compile(b)?;
                self.tower.divide_by_unit(&x, &y).map_err(|_| unsupported(e, "division by a non-unit"))
            }
            Expr::Pow(a, b) => self.compile_pow(e, a, b),
            Expr::Binomial(a, b) => {
                let names = self.names();
                let kv = self.tower.kv();
                let (Some((sa, oa)), Some((sb, ob))) = (affine_in(a, &names, kv), affine_in(b, &names, kv)) else {
                    return Err(unsupported(e, "binomial arguments must be affine in the summation variable"));
                };
                let alpha = &self.factorial_ratio(sa, &oa) / &(&self.factorial_ratio(sb, &ob) * &self.factorial_ratio(sa - sb, &(&oa - &ob)));
                self.hyper(e, alpha, None, true)
            }
            Expr::Factorial(a) => {
                let Some((s, o)) = affine_in(a, &self.names(), self.tower.kv()) else {
                    return Err(unsupported(e, "factorial argument must be affine in the summation variable"));
                };
                let alpha = self.factorial_ratio(s, &o);
                self.hyper(e, alpha, None, false)
            }
            Expr::Product { var, lo, hi, body } => {
                let (Some(lo), Some(h)) = (self.int_value(lo), self.var_offset(hi)) else {
                    return Err(unsupported(e, "product bounds must be an integer and k + integer"));
                };
                let k = Expr::Sym(self.tower.var.clone());
                if body.depends_on(&self.tower.var) && var != &self.tower.var {
                    return Err(unsupported(e, "product body depends on the outer variable"));
                }
                let Some(r) = self.rational(&body.subst(var, &k)) else {
                    return Err(unsupported(e, "product multiplicand must be rational"));
                };
                self.hyper(e, r.shift_var(self.tower.kv(), h), Some(lo - h), false)
            }
            Expr::Sum { var, lo, hi, body } => self.compile_sum(e, var, lo, hi, body),
            Expr::Num(_) | Expr::Sym(_) => Err(unsupported(e, "unknown symbol")),
        }
    }

    fn compile_pow(&mut self, e: &Expr, a: &Expr, b: &Expr) -> Result<Elem, CompileError> {
        if let Some(m) = self.int_value(b) {
            let x = self.compile(a)?;
            let x = if m < 0 { self.tower.unit_inverse(&x).map_err(|_| unsupported(e, "negative power of a non-unit"))? } else { x };
            return Ok(self.tower.pow(&x, m.unsigned_abs() as u32));
        }
        let kv = self.tower.kv();
        let base = self.rational(a).filter(|r| !r.depends_on(kv) && !r.is_zero());
        let expo = affine_in(b, &self.names(), kv);
        match (base, expo) {
            (Some(base), Some((s, _))) => self.hyper(e, base.pow(s), Some(1), false),
            _ => Err(unsupported(e, "power needs a constant base and an affine exponent")),
        }
    }

    /// `X(k)! / X(k-1)!` for `X = s k + o`.
    fn factorial_ratio(&self, s: i64, o: &RatFun) -> RatFun {
        let nv = self.tower.nvars();
        let x = &RatFun::from_poly(MPoly::var(nv, self.tower.kv())).scale(&BigRat::from_integer(s.into())) + o;
        let mut r = RatFun::one(nv);
        if s > 0 {
            for i in 0..s {
                r = &r * &(&x - &RatFun::from_int(nv, i));
            }
        } else {
            for i in 1..=-s {
                r = &r / &(&x + &RatFun::from_int(nv, i));
            }
        }
        r
    }

    /// Compiles a hypergeometric term `e` with `e(k) / e(k-1) = alpha(k)`.
    fn hyper(&mut self, e: &Expr, alpha: RatFun, lower: Option<i64>, binomial: bool) -> Result<Elem, CompileError> {
        let kv = self.tower.kv();
        let lower = lower.unwrap_or_else(|| {
            [alpha.num(), alpha.den()].iter().filter(|p| p.depends_on(kv)).flat_map(|p| integer_roots(p, kv)).map(|r| r + 1).max().unwrap_or(1).max(1)
        });
        let init = if matches!(e, Expr::Product { .. }) {
            RatFun::one(self.tower.nvars())
        } else {
            self.rational(&e.subst(&self.tower.var, &Expr::int(lower - 1))).ok_or_else(|| unsupported(e, "initial value is not rational"))?
        };
        if init.is_zero() {
            return Err(unsupported(e, "term vanishes at its starting point"));
        }
        let old = self.tower.pis.len();
        let (mut tower, reps) = build_product_representation(&[HyperProduct { alpha, lower }], &self.tower, self.cfg.factor_cap)?;
        let rep = reps.into_iter().next().expect("one representation per product");
        let mut elem = rep.elem;
        let fresh: Vec<usize> = (old..tower.pis.len()).collect();
        let used_new: Vec<usize> = fresh.iter().copied().filter(|&i| rep.mu.get(i).copied().unwrap_or(0) != 0).collect();
        let only_new = rep.mu.iter().enumerate().all(|(i, &m)| m == 0 || i >= old);
        if used_new.len() >= 2 && only_new {
            let z: Vec<i32> = (0..tower.pis.len()).map(|i| if i >= old { rep.mu.get(i).copied().unwrap_or(0) } else { 0 }).collect();
            let name = tower.fresh_name(if binomial { "b" } else { "t" });
            if let Ok((merged, merge)) = merge_pi_generators(&tower, &z, &name) {
                if let Ok(rewritten) = merge.rewrite(&elem) {
                    tower = merged;
                    let mut keep = [rewritten];
                    drop_unused_pis(&mut tower, &mut keep, &fresh);
                    let [r] = keep;
                    elem = r;
                }
            }
        }
        // Anchor a new generator that represents `e` up to a rational factor.
        let mut terms = elem.terms();
        if let (Some((m, c)), None) = (terms.next(), terms.next()) {
            let hits: Vec<usize> = (0..tower.pis.len()).filter(|&i| m.t_at(i) != 0).collect();
            if m.x == 0 && !m.has_s() && hits.len() == 1 && hits[0] >= old && m.t_at(hits[0]) == 1 && !c.depends_on(kv) {
                let scale = &init * c;
                let names = tower.var_names();
                tower.pis[hits[0]].anchor = Some(Expr::div(e.clone(), ratfun_to_expr(&scale, &names)));
            }
        }
        self.tower = tower;
        Ok(elem.scale(&init))
    }

    fn compile_sum(&mut self, e: &Expr, var: &str, lo: &Expr, hi: &Expr, body: &Expr) -> Result<Elem, CompileError> {
        let (Some(lo), Some(h)) = (self.int_value(lo), self.var_offset(hi)) else {
            return Err(unsupported(e, "sum bounds must be an integer and k + integer"));
        };
        if var != self.tower.var && body.depends_on(&self.tower.var) {
            return Err(unsupported(e, "sum body depends on the outer variable"));
        }
        let f = self.compile(&body.subst(var, &Expr::Sym(self.tower.var.clone())))?;
        let beta = self.tower.sigma_pow(&f, h + 1);
        // S(k) = sum_{i=lo}^{k+h} body(i), so S(k0) = 0 and σ(S) = S + β.
        let k0 = lo - h - 1;
        match is_sigma_extension_needed_with(&self.tower, &beta, self.cfg)? {
            SigmaTest::Telescoper(g) => {
                let c = self.anchor_constant(&g, &beta, k0).ok_or_else(|| unsupported(e, "no regular point to fix the additive constant"))?;
                Ok(g.add(&self.tower.base(c)))
            }
            SigmaTest::AdjoinNew => {
                let name = self.tower.fresh_name("s");
                let nv = self.tower.nvars();
                let j = self.tower.add_sigma(&name, beta, k0, RatFun::zero(nv), Some(e.clone()));
                Ok(self.tower.sigma_elem(j))
            }
        }
    }

    /// `c` with `g(k) + c = sum_{j=k0}^{k-1} β(j)` at the first regular point.
    fn anchor_constant(&self, g: &Elem, beta: &Elem, k0: i64) -> Option<RatFun> {
        let mut acc = RatFun::zero(self.tower.nvars());
        for p in k0..k0 + 8 {
            if p > k0 {
                acc = &acc + &self.tower.eval_symbolic(beta, p - 1).ok()?;
            }
            if let Ok(v) = self.tower.eval_symbolic(g, p) {
                return Some(&acc - &v);
            }
        }
        None
    }
}

fn bound_name(tower: &Tower, avoid: &[&str]) -> String {
    ["j", "i", "l", "m"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..).map(|i| format!("j{i}")))
        .find(|c| tower.fresh_name(c) == *c && !avoid.contains(&c.as_str()))
        .unwrap()
}

fn generator_power(base: Expr, e: i64) -> Expr {
    if e == 1 {
        base
    } else {
        Expr::pow(base, Expr::int(e))
    }
}

/// Replaces generators by their anchors, or by explicit sums and products.
pub fn decompile(e: &Elem, tower: &Tower) -> Expr {
    let names = tower.var_names();
    let k = Expr::Sym(tower.var.clone());
    let mut out = Expr::int(0);
    for (m, c) in e.terms() {
        let mut term = ratfun_to_expr(c, &names);
        if m.x > 0 {
            let r = tower.root.as_ref().expect("x without root generator");
            term = Expr::mul(term, generator_power(Expr::pow(Expr::Num(r.alpha.clone()), k.clone()), m.x as i64));
        }
        for i in 0..tower.pis.len() {
            let mu = m.t_at(i);
            if mu != 0 {
                term = Expr::mul(term, generator_power(pi_expr(tower, i), mu as i64));
            }
        }
        for j in 0..tower.sigmas.len() {
            let nu = m.s_at(j);
            if nu != 0 {
                term = Expr::mul(term, generator_power(sigma_expr(tower, j), nu as i64));
            }
        }
        out = Expr::add(out, term);
    }
    out
}

fn pi_expr(tower: &Tower, i: usize) -> Expr {
    let g = &tower.pis[i];
    if let Some(a) = &g.anchor {
        return a.clone();
    }
    let j = bound_name(tower, &[]);
    let names = tower.var_names();
    let body = ratfun_to_expr(&g.mult, &names).subst(&tower.var, &Expr::Sym(j.clone()));
    Expr::product(&j, Expr::int(g.lower), Expr::Sym(tower.var.clone()), body)
}

fn sigma_expr(tower: &Tower, j: usize) -> Expr {
    let g = &tower.sigmas[j];
    if let Some(a) = &g.anchor {
        return a.clone();
    }
    let v = bound_name(tower, &[]);
    let k = Expr::Sym(tower.var.clone());
    let body = decompile(&g.beta, tower).subst(&tower.var, &Expr::Sym(v.clone()));
    let names = tower.var_names();
    let v0 = ratfun_to_expr(&g.v0.eval_var(tower.kv(), &BigRat::from_integer(g.k0.into())).unwrap_or_else(|| g.v0.clone()), &names);
    Expr::add(v0, Expr::sum(&v, Expr::int(g.k0), Expr::sub(k, Expr::int(1)), body))
}
