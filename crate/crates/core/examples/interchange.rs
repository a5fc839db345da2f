//! The four interchange formulas between compositions and strong differences.

use nilbracket::doc::IconSpec;
use nilbracket::icon::{interchange_sides, Interchange};
use nilbracket::sample::Sampler;
use nilbracket::{GeneratorContext, Icon, Rational, TestMap};

fn main() -> nilbracket::Result<()> {
    let ctx = GeneratorContext::new();
    let mut s = Sampler::new(5);
    let xi: Icon<Rational> = s.mixed_icon(2);
    let (a, b): (IconSpec, IconSpec) = s.affine_square_pair(1, 2);
    let (x1, x2): (Icon<Rational>, Icon<Rational>) = (a.build()?, b.build()?);
    let nvars = xi.domain().dim() + x1.domain().dim();
    let h: TestMap<Rational> = s.test_map(nvars, 2, 3);
    for formula in Interchange::ALL {
        let (lhs, rhs) = interchange_sides(&ctx, formula, &xi, &x1, &x2, &|x: &[_]| h.eval(x), 0.0)?;
        println!("{formula:?}: sides agree = {}", lhs.approx_eq(&rhs, 0.0));
    }
    Ok(())
}
