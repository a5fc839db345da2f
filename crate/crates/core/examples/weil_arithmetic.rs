//! Nilpotent generators: d² = 0, products of distinct generators survive,
//! and smooth functions lift through their Taylor towers.

use nilbracket::scalar::Elementary;
use nilbracket::weil::Primitive;
use nilbracket::{rat, GeneratorContext, Rational, Weil};

fn main() -> nilbracket::Result<()> {
    let ctx = GeneratorContext::new();
    let g = ctx.fresh(2)?;
    let (d1, d2): (Weil<Rational>, Weil<Rational>) = (g.elem(0), g.elem(1));

    println!("d1 * d1       = {}", &d1 * &d1);
    println!("d1 * d2       = {}", &d1 * &d2);

    let x = Weil::constant(rat(3, 2)) + d1.clone() + d2.clone();
    println!("x             = {x}");
    println!("x^3           = {}", x.pow(3));

    // p(t) = 1 - t + t^2 lifted to x
    let p = Primitive::Poly(vec![rat(1, 1), rat(-1, 1), rat(1, 1)]);
    println!("p(x)          = {}", x.lift(&p)?);

    let y: Weil<f64> = Weil::constant(0.5) + g.elem(0);
    println!("sin(0.5 + d1) = {}", y.lift(&Primitive::Elementary(Elementary::Sin))?);
    println!("exp(0.5 + d1) = {}", y.lift(&Primitive::Elementary(Elementary::Exp))?);
    Ok(())
}
