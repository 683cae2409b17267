//! Compiles expressions into a difference ring and prints the generators
//! together with the element and its decompiled form.

use ringsum::summation_api::{decompile, parse, Compiler};

fn main() {
    let params = vec!["n".to_string()];
    for text in [
        "(-1)^k / Binomial(n, k) * Sum(i, 0, k - 1, Binomial(n, i))",
        "2^k * k! + 1/(k + 1)",
        "Sum(i, 1, k, 1/i) * Sum(i, 1, k, 1/i^2)",
    ] {
        let mut comp = Compiler::new(&params, "k");
        let e = comp.compile(&parse(text).unwrap()).unwrap();
        println!("{text}");
        for line in comp.tower.render().lines() {
            println!("  {line}");
        }
        println!("  element:    {}", comp.tower.elem_to_string(&e));
        println!("  decompiled: {}\n", decompile(&e, &comp.tower));
    }
}
