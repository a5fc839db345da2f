//! Semiforms from kernels, the bracket, antisymmetrization and the
//! Frölicher-Nijenhuis bracket read back as a kernel.

use nilbracket::forms::{fn_antisymmetry_residual, fn_jacobi_terms, signed_sum};
use nilbracket::sample::Sampler;
use nilbracket::suites::test_cubes;
use nilbracket::{GeneratorContext, Kernel, Normalization, Polynomial, Rational, Semiform};

fn show(k: &Kernel<Rational>) {
    for ((c, slots), poly) in k.entries() {
        println!("  e{} slots {:?}: {}", c + 1, slots, poly);
    }
}

fn main() -> nilbracket::Result<()> {
    let ctx = GeneratorContext::new();

    // x2 dx1 ⊗ e1 and x1 dx2 ⊗ e2
    let k1 = Kernel::<Rational>::zero(1, 2).with(0, vec![0], Polynomial::var(2, 1))?;
    let k2 = Kernel::<Rational>::zero(1, 2).with(1, vec![1], Polynomial::var(2, 0))?;
    let (w1, w2) = (Semiform::from_kernel(k1), Semiform::from_kernel(k2));

    let b = w1.bracket(&w2, 0.0)?;
    println!("bracket, degree {}:", b.degree());
    show(&b.read_kernel(&ctx)?);

    let a = b.antisymmetrize(&Normalization::Plain, 0.0)?;
    println!("antisymmetrized:");
    show(&a.read_kernel(&ctx)?);

    let f = w1.fn_bracket(&w2, 0.0)?;
    println!("Frölicher-Nijenhuis bracket:");
    show(&f.read_kernel(&ctx)?);

    let mut s = Sampler::new(9);
    let forms: Vec<Semiform<Rational>> = [1, 1, 2]
        .iter()
        .map(|&p| Semiform::from_kernel(s.alternating_kernel(p, 2, 2)))
        .collect();
    let cubes = test_cubes(&mut s, 2, 2);
    let anti = cubes
        .iter()
        .map(|g| fn_antisymmetry_residual(&ctx, &forms[0], &forms[1], g, 0.0).map(|t| t.is_zero(0.0)))
        .collect::<nilbracket::Result<Vec<_>>>()?;
    println!("graded antisymmetry on {} cubes: {}", anti.len(), anti.iter().all(|&z| z));

    let terms = fn_jacobi_terms(&forms[0], &forms[1], &forms[2], 0.0)?;
    let refs: Vec<(i64, &Semiform<Rational>)> = terms.iter().map(|(s, w)| (*s, w)).collect();
    let cubes = test_cubes(&mut s, 4, 2);
    let mut ok = true;
    for g in &cubes {
        ok &= signed_sum(&ctx, &refs, g, 0.0)?.is_zero(0.0);
    }
    println!("graded Jacobi on {} cubes: {ok}", cubes.len());
    Ok(())
}
