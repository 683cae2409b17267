//! Rewrites hypergeometric products over a shared set of Π generators and
//! one root of unity, then evaluates them against direct products.

use std::collections::BTreeMap;

use ringsum::exact_arith::{BigRat, RatFun};
use ringsum::product_rep::{build_product_representation, HyperProduct};
use ringsum::summation_api::parse;
use ringsum::summation_api::convert::to_ratfun;
use ringsum::tower::Tower;

fn main() {
    let names = vec!["n".to_string(), "k".to_string()];
    let alphas = ["2*(n+1)^2*(k+n)", "4*(n+1)*(-k-2-n)*k"];
    let products: Vec<HyperProduct> = alphas
        .iter()
        .map(|a| HyperProduct { alpha: to_ratfun(&parse(a).unwrap(), &names).unwrap(), lower: 1 })
        .collect();
    let base = Tower::new(&names[..1], "k");
    let (tower, reps) = build_product_representation(&products, &base, 2).unwrap();
    print!("{}", tower.render());
    for (a, r) in alphas.iter().zip(&reps) {
        println!("prod_(j=1..k) {a}  =  {}", tower.elem_to_string(&r.elem));
    }

    let env: BTreeMap<String, BigRat> = [("n".to_string(), BigRat::from_integer(3.into()))].into();
    for (p, r) in products.iter().zip(&reps) {
        let ok = (1..=12).all(|k0| tower.eval_at(&r.elem, k0, &env).unwrap() == direct(&p.alpha, k0));
        println!("matches direct product for n = 3, k = 1..12: {ok}");
    }
}

fn direct(alpha: &RatFun, k0: i64) -> BigRat {
    (1..=k0).fold(BigRat::from_integer(1.into()), |acc, j| {
        acc * alpha.eval_all(&[BigRat::from_integer(3.into()), BigRat::from_integer(j.into())]).unwrap()
    })
}
