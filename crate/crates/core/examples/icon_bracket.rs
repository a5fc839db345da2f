//! Lie bracket of icons: vector fields against the coordinate formula, and
//! antisymmetry and Jacobi for mixed icons.

use nilbracket::icon::{antisymmetry_residual, jacobi_residual, jacobi_terms, vector_field_bracket};
use nilbracket::sample::Sampler;
use nilbracket::suites::coordinate_bracket;
use nilbracket::{GeneratorContext, Icon, Rational, TestMap};

fn main() -> nilbracket::Result<()> {
    let ctx = GeneratorContext::new();
    let mut s = Sampler::new(11);
    let f: TestMap<Rational> = s.vector_field(2, 2);
    let g: TestMap<Rational> = s.vector_field(2, 2);
    let via_icons = vector_field_bracket(&ctx, &f, &g, 0.0)?;
    let symbolic = coordinate_bracket(&f, &g)?;
    for (i, (a, b)) in via_icons.components().iter().zip(&symbolic).enumerate() {
        println!("[f, g]_{} = {}", i + 1, a.polynomial());
        println!("  matches Jg f - Jf g: {}", a.polynomial() == b);
    }

    let x1: Icon<Rational> = s.mixed_icon(2);
    let x2: Icon<Rational> = s.mixed_icon(2);
    let x3: Icon<Rational> = s.mixed_icon(2);
    let nvars = x1.domain().dim() + x2.domain().dim();
    let h: TestMap<Rational> = s.test_map(nvars, 2, 3);
    let hf = |x: &[_]| h.eval(x);
    let r = antisymmetry_residual(&ctx, &x1, &x2, &hf, 0.0, true)?;
    println!("antisymmetry residual vanishes: {}", r.is_zero(0.0));

    let terms = jacobi_terms(&x1, &x2, &x3, 0.0, true)?;
    let nvars = nvars + x3.domain().dim();
    let h: TestMap<Rational> = s.test_map(nvars, 2, 3);
    let r = jacobi_residual(&ctx, &terms, &|x: &[_]| h.eval(x), 0.0)?;
    println!("Jacobi residual vanishes: {}", r.is_zero(0.0));
    Ok(())
}
