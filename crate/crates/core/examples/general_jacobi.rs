//! Strong differences of microsquares and the general Jacobi identity for
//! six microcubes arranged in the order pattern.

use nilbracket::microcube::{strong_difference, subset};
use nilbracket::sample::Sampler;
use nilbracket::weil::constant_point;
use nilbracket::{rat, JacobiCubes, Microcube, Rational};

fn main() -> nilbracket::Result<()> {
    let base = constant_point(&[rat(1, 1), rat(0, 1)]);
    let square = |top: Rational| {
        Microcube::constant(2, base.clone())
            .with(subset(&[1]), constant_point(&[rat(1, 1), rat(2, 1)]))
            .with(subset(&[2]), constant_point(&[rat(0, 1), rat(1, 1)]))
            .with(subset(&[1, 2]), constant_point(&[top, rat(5, 1)]))
    };
    let t = strong_difference(&square(rat(7, 3)), &square(rat(1, 3)), 0.0)?;
    println!("strong difference: {t:?}");

    for m in 1..=3 {
        let cubes: JacobiCubes<Rational> = Sampler::new(7).order_pattern(m);
        let [a, b, c] = cubes.expressions(0.0)?;
        let sum = cubes.residual(0.0)?;
        println!("m = {m}");
        println!("  {a:?}\n  {b:?}\n  {c:?}");
        println!("  sum is zero: {}", sum.is_zero(0.0));
    }
    Ok(())
}
