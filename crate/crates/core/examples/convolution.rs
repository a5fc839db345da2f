//! Convolution of functionals and its laws on a polynomial test map.

use nilbracket::sample::Sampler;
use nilbracket::{Domain, Functional, Orientation, Rational, TestMap};

fn main() -> nilbracket::Result<()> {
    let ctx = nilbracket::GeneratorContext::new();
    let mut s = Sampler::new(3);
    let (a, b, c) = (s.euclidean_domain(1), s.euclidean_domain(2), s.euclidean_domain(1));
    let f: Functional<Rational> = s.functional(&a, 2);
    let g: Functional<Rational> = s.functional(&b, 2);
    let k: Functional<Rational> = s.functional(&c, 2);
    let h: TestMap<Rational> = s.test_map(3, 2, 3);
    let h4: TestMap<Rational> = s.test_map(4, 2, 3);
    let h1: TestMap<Rational> = s.test_map(1, 2, 3);

    let fg = f.convolve(&g, Orientation::Plain)?;
    let fg_t = f.convolve(&g, Orientation::Tilde)?;
    println!("domain of f * g: {}", fg.domain());
    println!("(f * g)(h)  = {:?}", fg.eval_map(&ctx, &h)?);
    println!("(f *~ g)(h) = {:?}", fg_t.eval_map(&ctx, &h)?);

    let left = fg.convolve(&k, Orientation::Plain)?;
    let right = f.convolve(&g.convolve(&k, Orientation::Plain)?, Orientation::Plain)?;
    println!("associative: {}", left.eval_map(&ctx, &h4)? == right.eval_map(&ctx, &h4)?);

    let delta = Functional::<Rational>::dirac_at_base(Domain::terminal(), 2);
    let unit = delta.convolve(&f, Orientation::Plain)?.with_domain(a.clone());
    println!("delta is a unit: {}", unit.eval_map(&ctx, &h1)? == f.eval_map(&ctx, &h1)?);
    Ok(())
}
