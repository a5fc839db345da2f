//! Compactly supported distributions, their convolutions and the brackets
//! of their Dirac flows.

use nilbracket::distributions::{flow_bracket, flow_jacobi_terms, monomial_probes, CompactDistribution, DiracFlow};
use nilbracket::sample::Sampler;
use nilbracket::suites::PROBE_DEGREE;
use nilbracket::{rat, Domain, GeneratorContext, Orientation, Rational};

fn main() -> nilbracket::Result<()> {
    let ctx = GeneratorContext::new();
    let line = |b: i64| Domain::euclidean(vec![rat(b, 1)]);

    let u = CompactDistribution::<Rational>::dirac(line(0), vec![rat(2, 1)])?;
    let v = CompactDistribution::<Rational>::dirac(line(1), vec![rat(-1, 1)])?;
    println!("u = {u:?}\nv = {v:?}");
    println!("u * v  = {:?}", u.convolve(&v, Orientation::Plain));
    println!("u *~ v = {:?}", u.convolve(&v, Orientation::Tilde));

    let x1 = DiracFlow::point_flow(line(1), vec![rat(2, 1)])?;
    let x2 = DiracFlow::point_flow(line(0), vec![rat(3, 1)])?;
    let b = flow_bracket(&ctx, &x1, &x2, PROBE_DEGREE, 0.0)?;
    println!("bracket direction: {:?}", b.direction());
    println!("bracket direction vanishes: {}", b.direction().is_zero());

    let mut s = Sampler::new(4);
    let flows: Vec<DiracFlow<Rational>> = (0..3).map(|_| s.dirac_flow(1)).collect();
    let terms = flow_jacobi_terms(&ctx, &flows[0], &flows[1], &flows[2], PROBE_DEGREE, 0.0)?;
    let probes = monomial_probes::<Rational>(3, PROBE_DEGREE);
    let mut vanishes = true;
    for h in &probes {
        let mut acc = terms[0].icon().tangent_map(&ctx, h)?;
        for t in &terms[1..] {
            acc = acc.add(&t.icon().tangent_map(&ctx, h)?, 0.0)?;
        }
        vanishes &= acc.is_zero(0.0);
    }
    println!("Jacobi on {} monomial probes: {vanishes}", probes.len());
    Ok(())
}
