//! Compactly supported distributions `[[R^k → R] → R]`, modelled as finite
//! weighted sums of partial-derivative point evaluations, and Dirac flows.

use std::fmt;

use crate::error::{Error, Result};
use crate::functional::{DerivTerm, Domain, Factor, Functional, Kind, Orientation, TestFn};
use crate::icon::Icon;
use crate::poly::{Polynomial, TestMap};
use crate::scalar::Scalar;
use crate::weil::{point_approx_eq, GeneratorContext, Point, Weil};

/// Largest total derivative order accepted in floating-point mode.
pub const MAX_FLOAT_ORDER: u32 = 8;

/// `u(f) = Σ w·∂^α f(x)`.
#[derive(Clone)]
pub struct CompactDistribution<S: Scalar> {
    domain: Domain,
    terms: Vec<DerivTerm<S>>,
}

/// Equal domains and equal normalized term multisets.
impl<S: Scalar> PartialEq for CompactDistribution<S> {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && self.terms.len() == other.terms.len()
            && self.terms.iter().all(|t| other.terms.contains(t))
    }
}

impl<S: Scalar> fmt::Debug for CompactDistribution<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 on {}", self.domain);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let pt: Vec<String> = t.point.iter().map(|c| c.to_string()).collect();
                format!("{}·∂{:?}@({})", t.weight, t.orders, pt.join(","))
            })
            .collect();
        write!(f, "{} on {}", parts.join(" + "), self.domain)
    }
}

impl<S: Scalar> CompactDistribution<S> {
    pub fn new(domain: Domain, terms: Vec<DerivTerm<S>>) -> Result<Self> {
        if let Some(f) = domain
            .factors()
            .iter()
            .find(|f| matches!(f, Factor::Infinitesimal(_)))
        {
            return Err(Error::DimensionMismatch {
                context: format!("distribution domain {domain}"),
                expected: 0,
                found: f.dim(),
            });
        }
        let k = domain.dim();
        for t in &terms {
            if t.point.len() != k || t.orders.len() != k {
                return Err(Error::DimensionMismatch {
                    context: "distribution term".into(),
                    expected: k,
                    found: t.point.len().max(t.orders.len()),
                });
            }
            let order: u32 = t.orders.iter().sum();
            if !S::EXACT && order > MAX_FLOAT_ORDER {
                return Err(Error::DerivativeOrder { order: order as usize });
            }
        }
        Ok(CompactDistribution { domain, terms }.normalized())
    }

    pub fn zero(domain: Domain) -> Self {
        CompactDistribution {
            domain,
            terms: Vec::new(),
        }
    }

    /// `δ_x`.
    pub fn dirac(domain: Domain, x: Vec<S>) -> Result<Self> {
        let k = x.len();
        Self::new(
            domain,
            vec![DerivTerm {
                weight: S::one(),
                point: x,
                orders: vec![0; k],
            }],
        )
    }

    /// `δ` at the base point of the domain.
    pub fn dirac_at_base(domain: Domain) -> Self {
        let x: Vec<S> = domain.basepoint::<S>().iter().map(|w| w.constant_term()).collect();
        Self::dirac(domain, x).expect("base point has the domain dimension")
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn terms(&self) -> &[DerivTerm<S>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges repeated `(point, orders)` pairs and drops zero weights.
    fn normalized(self) -> Self {
        let mut out: Vec<DerivTerm<S>> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match out
                .iter_mut()
                .find(|o| o.point == t.point && o.orders == t.orders)
            {
                Some(o) => o.weight = o.weight.clone() + t.weight,
                None => out.push(t),
            }
        }
        out.retain(|t| !t.weight.is_zero());
        CompactDistribution {
            domain: self.domain,
            terms: out,
        }
    }

    /// The distribution as a real-valued functional.
    pub fn functional(&self) -> Functional<S> {
        Functional::derivative_combo(self.domain.clone(), 1, self.terms.clone())
            .expect("terms were validated")
    }

    /// `u(f)` for a real-valued test map.
    pub fn eval(&self, ctx: &GeneratorContext, f: &TestMap<S>) -> Result<S> {
        let v = self.functional().eval_map(ctx, f)?;
        Ok(v[0].constant_term())
    }

    /// `u(h)` for a test argument that may carry outer infinitesimals.
    pub fn eval_fn(&self, ctx: &GeneratorContext, h: &TestFn<'_, S>) -> Result<Weil<S>> {
        let v = self.functional().eval(ctx, h)?;
        Ok(v[0].clone())
    }

    pub fn add(&self, other: &CompactDistribution<S>) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DimensionMismatch {
                context: "distribution sum".into(),
                expected: self.domain.dim(),
                found: other.domain.dim(),
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(CompactDistribution {
            domain: self.domain.clone(),
            terms,
        }
        .normalized())
    }

    pub fn scale(&self, c: &S) -> Self {
        CompactDistribution {
            domain: self.domain.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| DerivTerm {
                    weight: t.weight.clone() * c,
                    ..t.clone()
                })
                .collect(),
        }
        .normalized()
    }

    pub fn sub(&self, other: &CompactDistribution<S>) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// `u ∗ v` or `u ∗̃ v` on `M × N`: weights multiply, points and
    /// multi-indices concatenate.
    pub fn convolve(&self, other: &CompactDistribution<S>, orientation: Orientation) -> Self {
        let (outer, inner) = match orientation {
            Orientation::Plain => (self, other),
            Orientation::Tilde => (other, self),
        };
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &outer.terms {
            for b in &inner.terms {
                let (s, o) = match orientation {
                    Orientation::Plain => (a, b),
                    Orientation::Tilde => (b, a),
                };
                terms.push(DerivTerm {
                    weight: a.weight.clone() * &b.weight,
                    point: s.point.iter().chain(&o.point).cloned().collect(),
                    orders: s.orders.iter().chain(&o.orders).copied().collect(),
                });
            }
        }
        CompactDistribution {
            domain: self.domain.times(&other.domain),
            terms,
        }
        .normalized()
    }

    /// Reorders coordinate groups of the domain, see [`Functional::realign`].
    pub fn realign(&self, groups: &[Domain], order: &[usize]) -> Result<Self> {
        let (domain, source) = crate::functional::realignment(&self.domain, groups, order)?;
        let terms = self
            .terms
            .iter()
            .map(|t| DerivTerm {
                weight: t.weight.clone(),
                point: source.iter().map(|&i| t.point[i].clone()).collect(),
                orders: source.iter().map(|&i| t.orders[i]).collect(),
            })
            .collect();
        Ok(CompactDistribution { domain, terms }.normalized())
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<CompactDistribution<T>> {
        let terms = self
            .terms
            .iter()
            .map(|t| DerivTerm {
                weight: f(&t.weight),
                point: t.point.iter().map(&f).collect(),
                orders: t.orders.clone(),
            })
            .collect();
        CompactDistribution::new(self.domain.clone(), terms)
    }

    /// Highest total derivative order among the terms.
    pub fn order(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.orders.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

/// Outcome of a homogeneity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Homogeneity {
    pub holds: bool,
    /// Index of the first probe on which `u(αf) ≠ α·u(f)`.
    pub witness: Option<usize>,
}

/// Checks `u(αf) = α·u(f)` with a formal `α` on every probe.
pub fn homogeneity_check<S: Scalar>(
    ctx: &GeneratorContext,
    u: &Functional<S>,
    probes: &[TestMap<S>],
    tol: f64,
) -> Result<Homogeneity> {
    for (n, f) in probes.iter().enumerate() {
        let alpha = ctx.fresh_free(1)?;
        let a: Weil<S> = alpha.elem(0);
        let scaled = u.eval(ctx, &|x: &[Weil<S>]| {
            Ok(f.eval(x)?.iter().map(|c| c.mul_ref(&a)).collect())
        })?;
        let plain: Point<S> = u.eval_map(ctx, f)?.iter().map(|c| c.mul_ref(&a)).collect();
        if !point_approx_eq(&scaled, &plain, tol) {
            return Ok(Homogeneity {
                holds: false,
                witness: Some(n),
            });
        }
    }
    Ok(Homogeneity {
        holds: true,
        witness: None,
    })
}

/// All monomials `x^β` with `|β| ≤ degree` in `k` variables, as real-valued
/// test maps.
pub fn monomial_probes<S: Scalar>(k: usize, degree: u32) -> Vec<TestMap<S>> {
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..k {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                let used: u32 = e.iter().sum();
                (0..=degree - used).map(move |j| {
                    let mut e = e.clone();
                    e.push(j);
                    e
                })
            })
            .collect();
    }
    exps.into_iter()
        .map(|e| {
            let p = Polynomial::from_terms(k, vec![(S::one(), e)]).expect("sized");
            TestMap::polynomial(vec![p]).expect("sized")
        })
        .collect()
}

/// `f ↦ f(x₀)²`, homogeneous of degree two: not a distribution.
pub fn quadratic_functional<S: Scalar>(domain: Domain) -> Functional<S> {
    let a = domain.basepoint();
    Functional::custom(domain, 1, Kind::Custom, move |_, h| {
        Ok(h(&a)?.iter().map(|c| c.mul_ref(c)).collect())
    })
}

/// A Dirac `x`-flow `ξ(d) = δ_x + d·u`.
#[derive(Clone)]
pub struct DiracFlow<S: Scalar> {
    direction: CompactDistribution<S>,
    icon: Icon<S>,
}

impl<S: Scalar> fmt::Debug for DiracFlow<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiracFlow(δ + d·({:?}))", self.direction)
    }
}

impl<S: Scalar> DiracFlow<S> {
    /// The flow based at the base point of `u`'s domain.
    pub fn new(u: CompactDistribution<S>) -> Self {
        let icon = Icon::affine(u.functional()).relabel("dirac-flow");
        DiracFlow { direction: u, icon }
    }

    /// `ξ(d) = δ_{x + d·v}`.
    pub fn point_flow(domain: Domain, velocity: Vec<S>) -> Result<Self> {
        let k = domain.dim();
        let x: Vec<S> = domain.basepoint::<S>().iter().map(|w| w.constant_term()).collect();
        let terms = (0..k)
            .map(|i| {
                let mut orders = vec![0; k];
                orders[i] = 1;
                DerivTerm {
                    weight: velocity[i].clone(),
                    point: x.clone(),
                    orders,
                }
            })
            .collect();
        if velocity.len() != k {
            return Err(Error::DimensionMismatch {
                context: "flow velocity".into(),
                expected: k,
                found: velocity.len(),
            });
        }
        let u = CompactDistribution::new(domain.clone(), terms)?;
        let icon = Icon::dirac_curve(domain, 1, velocity)?.relabel("point-flow");
        Ok(DiracFlow { direction: u, icon })
    }

    pub fn direction(&self) -> &CompactDistribution<S> {
        &self.direction
    }

    pub fn icon(&self) -> &Icon<S> {
        &self.icon
    }

    pub fn domain(&self) -> &Domain {
        self.icon.domain()
    }

    /// Checks `ξ(d)(h) = h(x) + d·u(h)` on each probe.
    pub fn agrees_on(&self, ctx: &GeneratorContext, probes: &[TestMap<S>], tol: f64) -> Result<bool> {
        let base = CompactDistribution::dirac_at_base(self.domain().clone()).functional();
        let u = self.direction.functional();
        for h in probes {
            let t = self.icon.tangent_map(ctx, h)?;
            if !point_approx_eq(&t.base, &base.eval_map(ctx, h)?, tol)
                || !point_approx_eq(&t.dir, &u.eval_map(ctx, h)?, tol)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `⌊ξ₁, ξ₂⌋` for Dirac flows. The icon is the generic Lie bracket; its
/// value is matched against `δ + d·(u₁ ∗̃ u₂ − u₁ ∗ u₂)` on all monomials of
/// degree `≤ degree`, and a mismatch is a closure violation.
pub fn flow_bracket<S: Scalar>(
    ctx: &GeneratorContext,
    x1: &DiracFlow<S>,
    x2: &DiracFlow<S>,
    degree: u32,
    tol: f64,
) -> Result<DiracFlow<S>> {
    let icon = x1.icon.lie_bracket(&x2.icon, tol)?;
    let (u1, u2) = (&x1.direction, &x2.direction);
    let direction = u1
        .convolve(u2, Orientation::Tilde)
        .sub(&u1.convolve(u2, Orientation::Plain))?;
    let flow = DiracFlow { direction, icon };
    let probes = monomial_probes(flow.domain().dim(), degree);
    if !flow.agrees_on(ctx, &probes, tol)? {
        return Err(Error::Closure(format!(
            "bracket of {x1:?} and {x2:?} is not the flow of a compact distribution"
        )));
    }
    Ok(flow)
}

/// The three summands `⌊ξ₁,⌊ξ₂,ξ₃⌋⌋`, `⌊ξ₂,⌊ξ₃,ξ₁⌋⌋`, `⌊ξ₃,⌊ξ₁,ξ₂⌋⌋` as flows
/// on `A × B × C`, each bracket closure-checked.
pub fn flow_jacobi_terms<S: Scalar>(
    ctx: &GeneratorContext,
    x1: &DiracFlow<S>,
    x2: &DiracFlow<S>,
    x3: &DiracFlow<S>,
    degree: u32,
    tol: f64,
) -> Result<[DiracFlow<S>; 3]> {
    let (a, b, c) = (x1.domain().clone(), x2.domain().clone(), x3.domain().clone());
    let br = |x: &DiracFlow<S>, y: &DiracFlow<S>| flow_bracket(ctx, x, y, degree, tol);
    let t1 = br(x1, &br(x2, x3)?)?;
    let t2 = br(x2, &br(x3, x1)?)?.realign(&[b.clone(), c.clone(), a.clone()], &[2, 0, 1])?;
    let t3 = br(x3, &br(x1, x2)?)?.realign(&[c, a, b], &[1, 2, 0])?;
    Ok([t1, t2, t3])
}

impl<S: Scalar> DiracFlow<S> {
    /// Reorders domain groups of both the icon and its direction.
    pub fn realign(&self, groups: &[Domain], order: &[usize]) -> Result<Self> {
        Ok(DiracFlow {
            direction: self.direction.realign(groups, order)?,
            icon: self.icon.realign(groups, order)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::icon::jacobi_residual;
    use crate::sample::Sampler;
    use crate::scalar::{rat, Rational};

    type R = Rational;

    fn line(b: i64) -> Domain {
        Domain::euclidean(vec![rat(b, 1)])
    }

    fn term(w: i64, x: Vec<i64>, orders: Vec<u32>) -> DerivTerm<R> {
        DerivTerm {
            weight: rat(w, 1),
            point: x.into_iter().map(|v| rat(v, 1)).collect(),
            orders,
        }
    }

    fn poly(nvars: usize, terms: Vec<(i64, Vec<u32>)>) -> TestMap<R> {
        let p = Polynomial::from_terms(nvars, terms.into_iter().map(|(c, e)| (rat(c, 1), e))).unwrap();
        TestMap::polynomial(vec![p]).unwrap()
    }

    #[test]
    fn weighted_derivative_of_square() {
        let ctx = GeneratorContext::new();
        let u = CompactDistribution::new(line(0), vec![term(2, vec![1], vec![1])]).unwrap();
        assert_eq!(u.eval(&ctx, &poly(1, vec![(1, vec![2])])).unwrap(), rat(4, 1));
        let d = CompactDistribution::dirac(line(0), vec![rat(3, 1)]).unwrap();
        assert_eq!(d.eval(&ctx, &poly(1, vec![(1, vec![2]), (1, vec![0])])).unwrap(), rat(10, 1));
    }

    #[test]
    fn convolution_with_dirac_differentiates_first_slot() {
        let ctx = GeneratorContext::new();
        let u = CompactDistribution::new(line(0), vec![term(1, vec![0], vec![1])]).unwrap();
        let v = CompactDistribution::dirac(line(0), vec![rat(1, 1)]).unwrap();
        // h = x₁x₂ + x₁²x₂³, ∂₁h(0,1) = 1
        let h = poly(2, vec![(1, vec![1, 1]), (1, vec![2, 3])]);
        for o in [Orientation::Plain, Orientation::Tilde] {
            let w = u.convolve(&v, o);
            assert_eq!(w.eval(&ctx, &h).unwrap(), rat(1, 1));
            assert_eq!(
                u.functional().convolve(&v.functional(), o).unwrap().eval_map(&ctx, &h).unwrap()[0],
                Weil::constant(rat(1, 1))
            );
        }
        let swapped = v.convolve(&u, Orientation::Tilde).realign(&[line(0), line(0)], &[1, 0]).unwrap();
        assert_eq!(swapped, u.convolve(&v, Orientation::Plain));
    }

    #[test]
    fn realignment_matches_functional_realignment() {
        let ctx = GeneratorContext::new();
        let mut s = Sampler::new(11);
        let (a, b, c) = (line(1), Domain::euclidean(vec![rat(0, 1), rat(2, 1)]), line(-1));
        let u: CompactDistribution<R> = s.compact_distribution(&a);
        let v = s.compact_distribution(&b);
        let w = s.compact_distribution(&c);
        let uvw = u.convolve(&v, Orientation::Plain).convolve(&w, Orientation::Plain);
        let groups = [a, b, c];
        let r = uvw.realign(&groups, &[2, 0, 1]).unwrap();
        let f = uvw.functional().realign(&groups, &[2, 0, 1]).unwrap();
        for _ in 0..5 {
            let h = s.test_map(4, 1, 4);
            assert_eq!(vec![Weil::constant(r.eval(&ctx, &h).unwrap())], f.eval_map(&ctx, &h).unwrap());
        }
    }

    #[test]
    fn homogeneity_separates_distributions_from_quadratics() {
        let ctx = GeneratorContext::new();
        let probes = monomial_probes::<R>(1, 3);
        let u = CompactDistribution::new(line(2), vec![term(3, vec![1], vec![2]), term(-1, vec![0], vec![0])]).unwrap();
        assert!(homogeneity_check(&ctx, &u.functional(), &probes, 0.0).unwrap().holds);
        let q = quadratic_functional::<R>(line(0));
        let res = homogeneity_check(&ctx, &q, &probes, 0.0).unwrap();
        assert_eq!(res, Homogeneity { holds: false, witness: Some(0) });
    }

    #[test]
    fn point_flow_and_derivative_flow_commute() {
        let ctx = GeneratorContext::new();
        let x1 = DiracFlow::point_flow(line(1), vec![rat(1, 1)]).unwrap();
        let u = CompactDistribution::new(line(2), vec![term(1, vec![2], vec![1])]).unwrap();
        let x2 = DiracFlow::new(u);
        let b = flow_bracket(&ctx, &x1, &x2, 4, 0.0).unwrap();
        assert!(b.direction().is_zero());
        let h = poly(2, vec![(1, vec![2, 2]), (3, vec![1, 0])]);
        let t = b.icon().tangent_map(&ctx, &h).unwrap();
        assert!(t.is_zero(0.0));
        assert_eq!(t.base, vec![Weil::constant(rat(4 + 3, 1))]);
    }

    #[test]
    fn flow_jacobi_terms_vanish() {
        let ctx = GeneratorContext::new();
        let mut s = Sampler::new(5);
        let (x1, x2, x3) = (s.dirac_flow::<R>(1), s.dirac_flow(1), s.dirac_flow(2));
        let terms = flow_jacobi_terms(&ctx, &x1, &x2, &x3, 3, 0.0).unwrap();
        let icons = [terms[0].icon().clone(), terms[1].icon().clone(), terms[2].icon().clone()];
        for _ in 0..3 {
            let h = s.test_map(4, 1, 4);
            let r = jacobi_residual(&ctx, &icons, &|x: &[Weil<R>]| h.eval(x), 0.0).unwrap();
            assert!(r.is_zero(0.0));
        }
        assert!(terms.iter().all(|t| t.direction().is_zero()));
    }

    #[test]
    fn float_mode_caps_derivative_order() {
        let t = DerivTerm {
            weight: 1.0,
            point: vec![0.0],
            orders: vec![MAX_FLOAT_ORDER + 1],
        };
        assert!(matches!(
            CompactDistribution::<f64>::new(line(0), vec![t]),
            Err(Error::DerivativeOrder { .. })
        ));
    }
}
