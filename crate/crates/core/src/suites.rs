//! Instance generators and checkers for every verification suite.
//!
//! [`sample`] draws a rational instance document for one trial; [`check`]
//! rebuilds the objects in the scalar field of the tally and records every
//! residual. Missing or ill-shaped objects in a document are parse errors.

use crate::distributions::{flow_bracket, flow_jacobi_terms, homogeneity_check, monomial_probes, CompactDistribution};
use crate::doc::{FunctionalSpec, IconSpec, InputDoc};
use crate::error::{Error, Result};
use crate::forms::{
    scaling_law_holds, nested_antisymmetrizer_sides, signed_sum, bracket_antisymmetry_residual, bracket_jacobi_terms, fn_antisymmetry_residual,
    fn_jacobi_terms, Kernel, Semiform,
};
use crate::functional::{Functional, Orientation};
use crate::harness::{SuiteConfig, SuiteName, Tally};
use crate::icon::{antisymmetry_residual, interchange_sides, jacobi_residual, jacobi_terms, vector_field_bracket, Icon, Interchange};
use crate::microcube::{JacobiCubes, Microcube};
use crate::poly::{Component, Polynomial, TestMap};
use crate::sample::Sampler;
use crate::scalar::{Rational, Scalar};
use crate::weil::{point_sub, GeneratorContext, Point, Weil};

/// Test maps per trial in the icon suites.
pub const ICON_MAPS: usize = 20;
/// Test maps per trial in the convolution suite.
pub const CONVOLUTION_MAPS: usize = 10;
/// Test maps per trial in the interchange suite.
pub const INTERCHANGE_MAPS: usize = 10;
/// Test maps per trial for the distribution agreement and bracket checks.
pub const DISTRIBUTION_MAPS: usize = 20;
/// Test maps per trial for the distribution Jacobi check.
pub const DISTRIBUTION_JACOBI_MAPS: usize = 10;
/// Degree of the monomial probes used for homogeneity and closure.
pub const PROBE_DEGREE: u32 = 2;

const WEIL_NILPOTENT: usize = 4;

type Q = Rational;

/// Draws the instance document of one trial.
pub fn sample(config: &SuiteConfig, trial: usize, seed: u64) -> InputDoc {
    let mut s = Sampler::new(seed);
    let mut doc = InputDoc::default();
    let m = config.dim;
    match config.suite {
        SuiteName::WeilRing => {
            for name in ["a", "b", "c"] {
                let p = weil_polynomial(&mut s);
                doc.test_maps
                    .push((name.into(), TestMap::polynomial(vec![p]).expect("sized")));
            }
        }
        SuiteName::GeneralJacobi => {
            let c = s.order_pattern::<Q>(m);
            for (name, cube) in [
                ("g123", c.g123),
                ("g132", c.g132),
                ("g213", c.g213),
                ("g231", c.g231),
                ("g312", c.g312),
                ("g321", c.g321),
            ] {
                doc.microcubes.push((name.into(), cube));
            }
        }
        SuiteName::IconAntisymmetry | SuiteName::IconJacobi => {
            let n = if config.suite == SuiteName::IconJacobi { 3 } else { 2 };
            let mut k = 0;
            for i in 1..=n {
                let x = s.icon_spec(m);
                k += x.domain_dim();
                doc.icons.push((format!("x{i}"), x));
            }
            push_maps(&mut doc, &mut s, "h", ICON_MAPS, k, m, 3);
        }
        SuiteName::Interchange => {
            let xi = s.icon_spec(m);
            let (xi1, xi2) = s.affine_square_pair(1, m);
            let k = xi.domain_dim() + xi1.domain_dim();
            doc.icons.push(("xi".into(), xi));
            doc.icons.push(("xi1".into(), xi1));
            doc.icons.push(("xi2".into(), xi2));
            push_maps(&mut doc, &mut s, "h", INTERCHANGE_MAPS, k, m, 3);
        }
        SuiteName::ConvolutionLaws => {
            let mut k = 0;
            for name in ["f", "g", "h"] {
                let n = 1 + s.below(2);
                let f = s.functional_spec(n, m);
                k += n;
                doc.functionals.push((name.into(), f));
            }
            let n = 1 + s.below(2);
            let dirac = FunctionalSpec::Dirac {
                base: s.rationals(n),
                dim: m,
                at: s.rationals(n),
            };
            let kd = n + doc.functionals[1].1.domain().dim();
            doc.functionals.push(("delta".into(), dirac));
            push_maps(&mut doc, &mut s, "h", CONVOLUTION_MAPS, k, m, 2);
            push_maps(&mut doc, &mut s, "k", CONVOLUTION_MAPS, kd, m, 2);
        }
        SuiteName::VectorFieldBracket => {
            let mt = 1 + trial % m;
            doc.fields.push(("f".into(), s.vector_field(mt, 3)));
            doc.fields.push(("g".into(), s.vector_field(mt, 3)));
        }
        SuiteName::FormsSemiformClosure
        | SuiteName::FormsAntisymmetry
        | SuiteName::FormsJacobi
        | SuiteName::FnGradedAntisymmetry
        | SuiteName::FnNestedAntisymmetrizer
        | SuiteName::FnGradedJacobi => {
            let alternating = matches!(
                config.suite,
                SuiteName::FnGradedAntisymmetry | SuiteName::FnNestedAntisymmetrizer | SuiteName::FnGradedJacobi
            );
            for (i, &p) in config.degrees.iter().enumerate() {
                let k = if alternating {
                    s.alternating_kernel(p, m, 1)
                } else {
                    s.kernel(p, m, 1)
                };
                doc.kernels.push((format!("w{}", i + 1), k));
            }
            let n: usize = config.degrees.iter().sum();
            for (i, c) in test_cubes(&mut s, n, m).into_iter().enumerate() {
                doc.microcubes.push((format!("c{i}"), c));
            }
            if config.suite == SuiteName::FormsSemiformClosure {
                let p = config.degrees[0];
                doc.kernels.push(("v1".into(), s.kernel(p, m, 1)));
                for (i, c) in test_cubes(&mut s, p, m).into_iter().enumerate() {
                    doc.microcubes.push((format!("e{i}"), c));
                }
            }
        }
        SuiteName::Distributions => {
            let k = m;
            for name in ["x1", "x2", "x3"] {
                let x = s.flow_spec(k);
                doc.icons.push((name.into(), x));
            }
            for name in ["u", "v"] {
                let base = s.rationals(k);
                doc.distributions.push((name.into(), s.distribution_at(base)));
            }
            push_maps(&mut doc, &mut s, "h", DISTRIBUTION_MAPS, 2 * k, 1, 3);
            push_maps(&mut doc, &mut s, "j", DISTRIBUTION_JACOBI_MAPS, 3 * k, 1, 2);
        }
    }
    doc
}

/// Test microcubes for the forms suites: for `n ≤ 3` one cube per
/// coefficient subset (base point plus that single coefficient) and one
/// generic cube; two generic cubes for `n = 4`; one beyond.
pub fn test_cubes(s: &mut Sampler, n: usize, m: usize) -> Vec<Microcube<Q>> {
    let mut out = Vec::new();
    match n {
        0..=3 => {
            for mask in 1..(1u64 << n) {
                out.push(Microcube::zero(n, m).with(0, s.point(m)).with(mask, s.point(m)));
            }
            out.push(s.microcube(n, m));
        }
        4 => {
            out.push(s.microcube(n, m));
            out.push(s.microcube(n, m));
        }
        _ => out.push(s.microcube(n, m)),
    }
    out
}

/// Element of the Weil algebra on four nilpotent generators and one free
/// indeterminate, written as a polynomial in five variables.
fn weil_polynomial(s: &mut Sampler) -> Polynomial<Q> {
    let nvars = WEIL_NILPOTENT + 1;
    let terms = (0..1 + s.below(6))
        .map(|_| {
            let mut e: Vec<u32> = (0..WEIL_NILPOTENT).map(|_| s.coin() as u32).collect();
            e.push(s.below(3) as u32);
            (s.rational(), e)
        })
        .collect::<Vec<_>>();
    Polynomial::from_terms(nvars, terms).expect("sized")
}

fn push_maps(doc: &mut InputDoc, s: &mut Sampler, prefix: &str, count: usize, nvars: usize, target: usize, degree: u32) {
    for i in 0..count {
        doc.test_maps
            .push((format!("{prefix}{i}"), s.test_map(nvars, target, degree)));
    }
}

/// `Jg·f − Jf·g`, computed symbolically.
pub fn coordinate_bracket<S: Scalar>(f: &TestMap<S>, g: &TestMap<S>) -> Result<Vec<Polynomial<S>>> {
    let not_poly = || Error::Config("coordinate bracket needs polynomial fields".into());
    let fp = f.polynomials().ok_or_else(not_poly)?;
    let gp = g.polynomials().ok_or_else(not_poly)?;
    let m = f.nvars();
    if fp.len() != m || gp.len() != m || g.nvars() != m {
        return Err(Error::DimensionMismatch {
            context: "coordinate bracket".into(),
            expected: m,
            found: gp.len(),
        });
    }
    Ok((0..m)
        .map(|i| {
            (0..m).fold(Polynomial::zero(m), |acc, j| {
                acc.add(&gp[i].derivative(j).mul(fp[j]))
                    .sub(&fp[i].derivative(j).mul(gp[j]))
            })
        })
        .collect())
}

fn missing(section: &str, name: &str) -> Error {
    Error::Parse {
        path: format!("{section}.{name}"),
        message: "required by the suite but missing".into(),
    }
}

fn icon<S: Scalar>(doc: &InputDoc, name: &str) -> Result<Icon<S>> {
    doc.icon(name).ok_or_else(|| missing("icons", name))?.build()
}

fn spec<'a>(doc: &'a InputDoc, name: &str) -> Result<&'a IconSpec> {
    doc.icon(name).ok_or_else(|| missing("icons", name))
}

fn kernel<S: Scalar>(doc: &InputDoc, name: &str) -> Result<Kernel<S>> {
    Ok(doc
        .kernel(name)
        .ok_or_else(|| missing("kernels", name))?
        .map_scalars(S::from_rational))
}

fn semiform<S: Scalar>(doc: &InputDoc, name: &str) -> Result<Semiform<S>> {
    Ok(Semiform::from_kernel(kernel(doc, name)?))
}

fn functional<S: Scalar>(doc: &InputDoc, name: &str) -> Result<Functional<S>> {
    doc.functionals
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, f)| f)
        .ok_or_else(|| missing("functionals", name))?
        .build()
}

fn distribution<S: Scalar>(doc: &InputDoc, name: &str) -> Result<CompactDistribution<S>> {
    doc.distribution(name)
        .ok_or_else(|| missing("distributions", name))?
        .map_scalars(S::from_rational)
}

fn test_map<S: Scalar>(doc: &InputDoc, name: &str) -> Result<TestMap<S>> {
    doc.test_maps
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, f)| f.map_scalars(S::from_rational))
        .ok_or_else(|| missing("test_maps", name))
}

/// Test maps named `prefix0`, `prefix1`, … in document order.
fn maps<S: Scalar>(doc: &InputDoc, prefix: &str) -> Vec<(String, TestMap<S>)> {
    doc.test_maps
        .iter()
        .filter(|(n, _)| {
            n.strip_prefix(prefix)
                .is_some_and(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
        })
        .map(|(n, f)| (n.clone(), f.map_scalars(S::from_rational)))
        .collect()
}

/// Microcubes named `prefix0`, `prefix1`, … in document order.
fn cubes<S: Scalar>(doc: &InputDoc, prefix: &str) -> Vec<(String, Microcube<S>)> {
    doc.microcubes
        .iter()
        .filter(|(n, _)| {
            n.strip_prefix(prefix)
                .is_some_and(|r| !r.is_empty() && r.chars().all(|c| c.is_ascii_digit()))
        })
        .map(|(n, c)| (n.clone(), c.map_scalars(S::from_rational)))
        .collect()
}

fn cube<S: Scalar>(doc: &InputDoc, name: &str) -> Result<Microcube<S>> {
    doc.microcubes
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, c)| c.map_scalars(S::from_rational))
        .ok_or_else(|| missing("microcubes", name))
}

fn nonempty<T>(v: Vec<T>, section: &str, prefix: &str) -> Result<Vec<T>> {
    if v.is_empty() {
        Err(missing(section, &format!("{prefix}0")))
    } else {
        Ok(v)
    }
}

/// Checks one instance document.
pub fn check<S: Scalar>(config: &SuiteConfig, doc: &InputDoc, t: &mut Tally<S>) -> Result<()> {
    let ctx = GeneratorContext::new();
    let tol = t.tol();
    match config.suite {
        SuiteName::WeilRing => check_weil_ring(&ctx, doc, t),
        SuiteName::GeneralJacobi => {
            let cubes = JacobiCubes {
                g123: cube(doc, "g123")?,
                g132: cube(doc, "g132")?,
                g213: cube(doc, "g213")?,
                g231: cube(doc, "g231")?,
                g312: cube(doc, "g312")?,
                g321: cube(doc, "g321")?,
            };
            if let Some(r) = t.guard("general jacobi", cubes.residual(tol)) {
                t.tangent("general jacobi", &r);
            }
            Ok(())
        }
        SuiteName::IconAntisymmetry => {
            let (x1, x2) = (icon::<S>(doc, "x1")?, icon::<S>(doc, "x2")?);
            for (name, h) in nonempty(maps::<S>(doc, "h"), "test_maps", "h")? {
                let label = format!("antisymmetry on {name}");
                let r = antisymmetry_residual(&ctx, &x1, &x2, &|x: &[Weil<S>]| h.eval(x), tol, config.realign);
                if let Some(r) = t.guard(&label, r) {
                    t.tangent(&label, &r);
                }
            }
            Ok(())
        }
        SuiteName::IconJacobi => {
            let xs = [icon::<S>(doc, "x1")?, icon::<S>(doc, "x2")?, icon::<S>(doc, "x3")?];
            let hs = nonempty(maps::<S>(doc, "h"), "test_maps", "h")?;
            let Some(terms) = t.guard("jacobi terms", jacobi_terms(&xs[0], &xs[1], &xs[2], tol, config.realign)) else {
                return Ok(());
            };
            for (name, h) in hs {
                let label = format!("jacobi on {name}");
                if let Some(r) = t.guard(&label, jacobi_residual(&ctx, &terms, &|x: &[Weil<S>]| h.eval(x), tol)) {
                    t.tangent(&label, &r);
                }
            }
            Ok(())
        }
        SuiteName::Interchange => {
            let (xi, xi1, xi2) = (icon::<S>(doc, "xi")?, icon::<S>(doc, "xi1")?, icon::<S>(doc, "xi2")?);
            for (name, h) in nonempty(maps::<S>(doc, "h"), "test_maps", "h")? {
                for formula in Interchange::ALL {
                    let label = format!("{formula:?} on {name}");
                    let sides = interchange_sides(&ctx, formula, &xi, &xi1, &xi2, &|x: &[Weil<S>]| h.eval(x), tol);
                    if let Some((lhs, rhs)) = t.guard(&label, sides) {
                        t.cubes(&label, &lhs, &rhs);
                    }
                }
            }
            Ok(())
        }
        SuiteName::ConvolutionLaws => check_convolution(&ctx, doc, t),
        SuiteName::VectorFieldBracket => {
            let f = doc.field("f").ok_or_else(|| missing("fields", "f"))?;
            let g = doc.field("g").ok_or_else(|| missing("fields", "g"))?;
            let (f, g) = (f.map_scalars(S::from_rational), g.map_scalars(S::from_rational));
            let oracle = coordinate_bracket(&f, &g)?;
            if let Some(b) = t.guard("icon bracket", vector_field_bracket(&ctx, &f, &g, tol)) {
                for (i, (c, o)) in b.components().iter().zip(&oracle).enumerate() {
                    let diff = c.polynomial().sub(o);
                    let coeffs: Point<S> = diff.terms().map(|(_, c)| Weil::constant(c.clone())).collect();
                    t.point(&format!("component {i}"), &coeffs);
                }
            }
            Ok(())
        }
        SuiteName::FormsSemiformClosure => check_semiform_closure(&ctx, doc, t),
        SuiteName::FormsAntisymmetry | SuiteName::FnGradedAntisymmetry => {
            let (w1, w2) = (semiform::<S>(doc, "w1")?, semiform::<S>(doc, "w2")?);
            let cs = nonempty(cubes::<S>(doc, "c"), "microcubes", "c")?;
            let graded = config.suite == SuiteName::FnGradedAntisymmetry;
            for (name, c) in &cs {
                let label = format!("residual on {name}");
                let r = if graded {
                    fn_antisymmetry_residual(&ctx, &w1, &w2, c, tol)
                } else {
                    bracket_antisymmetry_residual(&ctx, &w1, &w2, c, tol)
                };
                if let Some(r) = t.guard(&label, r) {
                    t.tangent(&label, &r);
                }
            }
            if graded {
                let all: Vec<Microcube<S>> = cs.into_iter().map(|(_, c)| c).collect();
                let pred = w1.fn_bracket(&w2, tol).and_then(|b| b.predicates(&ctx, &all, tol));
                if let Some(p) = t.guard("bracket is a form", pred) {
                    t.holds("bracket is a form", p.is_form);
                }
            }
            Ok(())
        }
        SuiteName::FormsJacobi | SuiteName::FnNestedAntisymmetrizer | SuiteName::FnGradedJacobi => {
            let ws = [semiform::<S>(doc, "w1")?, semiform::<S>(doc, "w2")?, semiform::<S>(doc, "w3")?];
            let cs = nonempty(cubes::<S>(doc, "c"), "microcubes", "c")?;
            let terms: Result<Vec<(i64, Semiform<S>)>> = match config.suite {
                SuiteName::FormsJacobi => {
                    bracket_jacobi_terms(&ws[0], &ws[1], &ws[2], tol).map(|ts| ts.into_iter().map(|w| (1, w)).collect())
                }
                SuiteName::FnNestedAntisymmetrizer => nested_antisymmetrizer_sides(&ws[0], &ws[1], &ws[2], tol).map(|(l, r)| vec![(1, l), (-1, r)]),
                _ => fn_jacobi_terms(&ws[0], &ws[1], &ws[2], tol).map(|ts| ts.into_iter().collect()),
            };
            let Some(terms) = t.guard("terms", terms) else {
                return Ok(());
            };
            let refs: Vec<(i64, &Semiform<S>)> = terms.iter().map(|(s, w)| (*s, w)).collect();
            for (name, c) in &cs {
                let label = format!("residual on {name}");
                if let Some(r) = t.guard(&label, signed_sum(&ctx, &refs, c, tol)) {
                    t.tangent(&label, &r);
                }
            }
            Ok(())
        }
        SuiteName::Distributions => check_distributions(&ctx, doc, t),
    }
}

fn check_weil_ring<S: Scalar>(ctx: &GeneratorContext, doc: &InputDoc, t: &mut Tally<S>) -> Result<()> {
    let d = ctx.fresh(WEIL_NILPOTENT)?;
    let x = ctx.fresh_free(1)?;
    let mut gens: Point<S> = d.elems();
    gens.push(x.elem(0));
    let poly = |name: &str| -> Result<Polynomial<S>> {
        let f = test_map::<S>(doc, name)?;
        match f.components() {
            [Component::Poly(p)] if p.nvars() == gens.len() => Ok(p.clone()),
            _ => Err(Error::Parse {
                path: format!("test_maps.{name}"),
                message: format!("expected one polynomial in {} variables", gens.len()),
            }),
        }
    };
    let (pa, pb, pc) = (poly("a")?, poly("b")?, poly("c")?);
    let (a, b, c) = (pa.eval(&gens), pb.eval(&gens), pc.eval(&gens));
    let one = Weil::one();
    let zero = Weil::zero();
    let mut rec = |label: &str, w: Weil<S>| t.point(label, &[w]);
    rec("associativity", &(&a * &b) * &c - &a * &(&b * &c));
    rec("commutativity", &a * &b - &b * &a);
    rec("distributivity", &a * &(&b + &c) - (&a * &b + &a * &c));
    rec("additive associativity", &(&a + &b) + &c - (&a + &(&b + &c)));
    rec("unit", &a * &one - a.clone());
    rec("zero", &(&a + &zero) - &a);
    rec("negation", &a + &(-a.clone()));
    rec("product against polynomial product", pa.mul(&pb).eval(&gens) - &a * &b);
    for g in &gens[..WEIL_NILPOTENT] {
        rec("square-zero generator", g * g);
        rec("square-zero multiple", &(g * &a) * &(g * &b));
    }
    Ok(())
}

fn check_convolution<S: Scalar>(ctx: &GeneratorContext, doc: &InputDoc, t: &mut Tally<S>) -> Result<()> {
    let (f, g, h) = (functional::<S>(doc, "f")?, functional::<S>(doc, "g")?, functional::<S>(doc, "h")?);
    let delta = functional::<S>(doc, "delta")?;
    let hs = nonempty(maps::<S>(doc, "h"), "test_maps", "h")?;
    let ks = nonempty(maps::<S>(doc, "k"), "test_maps", "k")?;
    let compare = |t: &mut Tally<S>, label: &str, lhs: &Functional<S>, rhs: &Functional<S>, maps: &[(String, TestMap<S>)]| {
        for (name, k) in maps {
            let label = format!("{label} on {name}");
            let both = lhs
                .eval_map(ctx, k)
                .and_then(|l| rhs.eval_map(ctx, k).map(|r| point_sub(&l, &r)));
            if let Some(d) = t.guard(&label, both) {
                t.point(&label, &d);
            }
        }
    };
    for o in [Orientation::Plain, Orientation::Tilde] {
        let label = format!("{o:?} associativity");
        let sides = f
            .convolve(&g, o)
            .and_then(|fg| fg.convolve(&h, o))
            .and_then(|l| Ok((l, f.convolve(&g.convolve(&h, o)?, o)?)));
        if let Some((lhs, rhs)) = t.guard(&label, sides) {
            compare(t, &label, &lhs, &rhs, &hs);
        }
    }
    let sides = delta
        .convolve(&g, Orientation::Plain)
        .and_then(|l| Ok((l, delta.convolve(&g, Orientation::Tilde)?)));
    if let Some((lhs, rhs)) = t.guard("dirac commutes on the left", sides) {
        compare(t, "dirac commutes on the left", &lhs, &rhs, &ks);
    }
    let sides = g
        .convolve(&delta, Orientation::Plain)
        .and_then(|l| Ok((l, g.convolve(&delta, Orientation::Tilde)?)));
    if let Some((lhs, rhs)) = t.guard("dirac commutes on the right", sides) {
        compare(t, "dirac commutes on the right", &lhs, &rhs, &ks);
    }
    Ok(())
}

fn check_semiform_closure<S: Scalar>(ctx: &GeneratorContext, doc: &InputDoc, t: &mut Tally<S>) -> Result<()> {
    let tol = t.tol();
    let (w1, w2) = (semiform::<S>(doc, "w1")?, semiform::<S>(doc, "w2")?);
    let cs: Vec<Microcube<S>> = nonempty(cubes(doc, "c"), "microcubes", "c")?
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    for (i, c) in cs.iter().enumerate() {
        let label = format!("scalings on c{i}");
        if let Some(ok) = t.guard(&label, scaling_law_holds(ctx, &w1, &w2, c, tol)) {
            t.holds(&label, ok);
        }
    }
    let pred = w1.bracket(&w2, tol).and_then(|b| b.predicates(ctx, &cs, tol));
    if let Some(p) = t.guard("bracket is a semiform", pred) {
        t.holds("bracket is a semiform", p.is_semiform);
    }
    let (k1, v1) = (kernel::<S>(doc, "w1")?, kernel::<S>(doc, "v1")?);
    let es: Vec<Microcube<S>> = nonempty(cubes(doc, "e"), "microcubes", "e")?
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    let sum = Semiform::from_kernel(k1.clone()).add(&Semiform::from_kernel(v1.clone()), tol);
    let Some(sum) = t.guard("sum of semiforms", sum) else {
        return Ok(());
    };
    if let Some(p) = t.guard("sum is a semiform", sum.predicates(ctx, &es, tol)) {
        t.holds("sum is a semiform", p.is_semiform);
    }
    let Some(kernel_sum) = t.guard("kernel sum", k1.add(&v1)) else {
        return Ok(());
    };
    let kernel_sum = Semiform::from_kernel(kernel_sum);
    for (i, e) in es.iter().enumerate() {
        let label = format!("sum agrees with kernel sum on e{i}");
        let d = sum
            .tangent(ctx, e)
            .and_then(|a| Ok(point_sub(&a.dir, &kernel_sum.tangent(ctx, e)?.dir)));
        if let Some(d) = t.guard(&label, d) {
            t.point(&label, &d);
        }
    }
    Ok(())
}

fn check_distributions<S: Scalar>(ctx: &GeneratorContext, doc: &InputDoc, t: &mut Tally<S>) -> Result<()> {
    let tol = t.tol();
    let (u, v) = (distribution::<S>(doc, "u")?, distribution::<S>(doc, "v")?);
    let hs = nonempty(maps::<S>(doc, "h"), "test_maps", "h")?;
    let js = nonempty(maps::<S>(doc, "j"), "test_maps", "j")?;
    let probes = monomial_probes::<S>(u.domain().dim() + v.domain().dim(), PROBE_DEGREE);
    for o in [Orientation::Plain, Orientation::Tilde] {
        let ds = u.convolve(&v, o);
        let label = format!("{o:?} convolution is homogeneous");
        if let Some(hm) = t.guard(&label, homogeneity_check(ctx, &ds.functional(), &probes, tol)) {
            t.holds(&label, hm.holds);
        }
        let Some(ic) = t.guard("functional convolution", u.functional().convolve(&v.functional(), o)) else {
            continue;
        };
        let label = format!("{o:?} functional convolution is homogeneous");
        if let Some(hm) = t.guard(&label, homogeneity_check(ctx, &ic, &probes, tol)) {
            t.holds(&label, hm.holds);
        }
        let dsf = ds.functional();
        for (name, h) in &hs {
            let label = format!("{o:?} convolutions agree on {name}");
            let d = dsf
                .eval_map(ctx, h)
                .and_then(|a| Ok(point_sub(&a, &ic.eval_map(ctx, h)?)));
            if let Some(d) = t.guard(&label, d) {
                t.point(&label, &d);
            }
        }
    }
    let flows = [spec(doc, "x1")?, spec(doc, "x2")?, spec(doc, "x3")?]
        .iter()
        .map(|x| x.build_flow::<S>())
        .collect::<Result<Vec<_>>>()?;
    if let Some(b) = t.guard("bracket closure", flow_bracket(ctx, &flows[0], &flows[1], PROBE_DEGREE, tol)) {
        t.holds("bracket direction vanishes", b.direction().is_zero());
        let bs = [flows[0].domain().clone(), flows[1].domain().clone()];
        if bs[0].dim() + bs[1].dim() == hs[0].1.nvars() {
            for (name, h) in &hs {
                let label = format!("bracket on {name}");
                if let Some(r) = t.guard(&label, b.icon().tangent_map(ctx, h)) {
                    t.tangent(&label, &r);
                }
            }
        }
    }
    let jac = flow_jacobi_terms(ctx, &flows[0], &flows[1], &flows[2], PROBE_DEGREE, tol);
    if let Some(terms) = t.guard("jacobi closure", jac) {
        let icons = [terms[0].icon().clone(), terms[1].icon().clone(), terms[2].icon().clone()];
        for (name, j) in &js {
            let label = format!("jacobi on {name}");
            if let Some(r) = t.guard(&label, jacobi_residual(ctx, &icons, &|x: &[Weil<S>]| j.eval(x), tol)) {
                t.tangent(&label, &r);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn coordinate_bracket_fixed_instance() {
        let x = |i| Polynomial::<Q>::var(2, i);
        let f = TestMap::polynomial(vec![x(1), Polynomial::zero(2)]).unwrap();
        let g = TestMap::polynomial(vec![Polynomial::zero(2), x(0)]).unwrap();
        let b = coordinate_bracket(&f, &g).unwrap();
        assert_eq!(b, vec![x(0).scale(&rat(-1, 1)), x(1)]);
    }

    #[test]
    fn sampled_documents_survive_the_wire() {
        for suite in SuiteName::ALL {
            let mut config = SuiteConfig::new(suite);
            if suite.degree_arity() == 3 {
                config.degrees = vec![1, 1, 2];
            }
            let doc = sample(&config, 1, 99);
            let text = doc.to_json().to_string();
            assert_eq!(InputDoc::parse(&text).unwrap(), doc, "{suite}");
        }
    }

    #[test]
    fn cube_policy_sizes() {
        let mut s = Sampler::new(1);
        assert_eq!(test_cubes(&mut s, 2, 2).len(), 4);
        assert_eq!(test_cubes(&mut s, 3, 2).len(), 8);
        assert_eq!(test_cubes(&mut s, 4, 2).len(), 2);
        assert_eq!(test_cubes(&mut s, 5, 2).len(), 1);
    }
}
