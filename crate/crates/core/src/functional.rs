//! Elements of the double dual `[[A → M] → M]` with `M = R^m`.
//!
//! A functional is evaluated on a test argument `h : A → M`, passed as a
//! closure over the flat coordinates of `A`. Evaluation is generic over the
//! ambient Weil algebra, so test arguments may themselves carry outer
//! infinitesimals; that is what makes nested brackets computable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::poly::TestMap;
use crate::scalar::{Rational, Scalar};
use crate::weil::{point_add, point_scale, GeneratorContext, Point, Weil};

/// A test argument `h : A → M` over flat coordinates.
pub type TestFn<'a, S> = dyn Fn(&[Weil<S>]) -> Result<Point<S>> + 'a;

type EvalFn<S> = dyn Fn(&GeneratorContext, &TestFn<'_, S>) -> Result<Point<S>> + Send + Sync;

/// A self-map of `R^m` acting on terminal-domain test arguments.
pub type PointMap<S> = Arc<dyn Fn(&[Weil<S>]) -> Result<Point<S>> + Send + Sync>;

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// The one-point space.
    Terminal,
    /// `R^k` with the given base point.
    Euclidean(Vec<Rational>),
    /// `D^p`, based at the origin.
    Infinitesimal(usize),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Terminal => 0,
            Factor::Euclidean(b) => b.len(),
            Factor::Infinitesimal(p) => *p,
        }
    }
}

/// A product of factor spaces with a base point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Domain {
    factors: Vec<Factor>,
}

impl Domain {
    pub fn terminal() -> Self {
        Domain {
            factors: vec![Factor::Terminal],
        }
    }

    pub fn euclidean(base: Vec<Rational>) -> Self {
        Domain {
            factors: vec![Factor::Euclidean(base)],
        }
    }

    pub fn infinitesimal(p: usize) -> Self {
        Domain {
            factors: vec![Factor::Infinitesimal(p)],
        }
    }

    pub fn product(parts: &[&Domain]) -> Self {
        Domain {
            factors: parts.iter().flat_map(|d| d.factors.iter().cloned()).collect(),
        }
    }

    pub fn times(&self, other: &Domain) -> Self {
        Domain::product(&[self, other])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    pub fn basepoint<S: Scalar>(&self) -> Point<S> {
        let mut out = Vec::with_capacity(self.dim());
        for f in &self.factors {
            match f {
                Factor::Terminal => {}
                Factor::Euclidean(b) => {
                    out.extend(b.iter().map(|c| Weil::constant(S::from_rational(c))))
                }
                Factor::Infinitesimal(p) => out.extend((0..*p).map(|_| Weil::zero())),
            }
        }
        out
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| match x {
                Factor::Terminal => "1".to_string(),
                Factor::Euclidean(b) => format!("R^{}", b.len()),
                Factor::Infinitesimal(p) => format!("D^{p}"),
            })
            .collect();
        write!(f, "{}", parts.join("×"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `f ∗ g`: `f` is applied outermost.
    Plain,
    /// `f ∗̃ g`: `g` is applied outermost.
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Dirac,
    DerivativeCombo,
    KernelForm,
    MapAction,
    Convolution(Orientation),
    Bracket,
    StrongDifference,
    Realign,
    Sum,
    Custom,
}

/// One weighted partial-derivative evaluation `w·∂^α h(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivTerm<S> {
    pub weight: S,
    pub point: Vec<S>,
    pub orders: Vec<u32>,
}

#[derive(Clone)]
pub struct Functional<S: Scalar> {
    domain: Domain,
    target: usize,
    kind: Kind,
    eval: Arc<EvalFn<S>>,
}

impl<S: Scalar> fmt::Debug for Functional<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional({:?} on {} → R^{})", self.kind, self.domain, self.target)
    }
}

/// `∂^α h(x)`, read off as the top coefficient of `h` at `x` perturbed by
/// `αᵢ` fresh generators in coordinate `i`.
pub fn partial_derivative<S: Scalar>(
    ctx: &GeneratorContext,
    h: &TestFn<'_, S>,
    x: &[Weil<S>],
    orders: &[u32],
) -> Result<Point<S>> {
    if orders.len() != x.len() {
        return Err(Error::DimensionMismatch {
            context: "derivative multi-index".into(),
            expected: x.len(),
            found: orders.len(),
        });
    }
    let k: usize = orders.iter().map(|&o| o as usize).sum();
    if k == 0 {
        return h(x);
    }
    let g = ctx.fresh(k)?;
    let mut args = x.to_vec();
    let mut next = 0;
    for (i, &o) in orders.iter().enumerate() {
        for _ in 0..o {
            args[i] = args[i].add_ref(&g.elem(next));
            next += 1;
        }
    }
    let mask = g.mask();
    Ok(h(&args)?.iter().map(|c| c.coeff_over(mask, mask)).collect())
}

impl<S: Scalar> Functional<S> {
    pub fn custom(
        domain: Domain,
        target: usize,
        kind: Kind,
        eval: impl Fn(&GeneratorContext, &TestFn<'_, S>) -> Result<Point<S>> + Send + Sync + 'static,
    ) -> Self {
        Functional {
            domain,
            target,
            kind,
            eval: Arc::new(eval),
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn eval(&self, ctx: &GeneratorContext, h: &TestFn<'_, S>) -> Result<Point<S>> {
        let v = (self.eval)(ctx, h)?;
        if v.len() != self.target {
            return Err(Error::DimensionMismatch {
                context: "functional value".into(),
                expected: self.target,
                found: v.len(),
            });
        }
        Ok(v)
    }

    pub fn eval_map(&self, ctx: &GeneratorContext, h: &TestMap<S>) -> Result<Point<S>> {
        self.check_test_map(h)?;
        self.eval(ctx, &|x: &[Weil<S>]| h.eval(x))
    }

    fn check_test_map(&self, h: &TestMap<S>) -> Result<()> {
        if h.nvars() != self.domain.dim() || h.target() != self.target {
            return Err(Error::DimensionMismatch {
                context: format!("test map on {}", self.domain),
                expected: self.domain.dim(),
                found: h.nvars(),
            });
        }
        Ok(())
    }

    /// The same functional read over a domain of equal dimension.
    pub fn with_domain(&self, domain: Domain) -> Self {
        debug_assert_eq!(domain.dim(), self.domain.dim());
        let mut f = self.clone();
        f.domain = domain;
        f
    }

    /// `δ_a`.
    pub fn dirac(domain: Domain, target: usize, a: Point<S>) -> Result<Self> {
        if a.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                context: format!("Dirac point in {domain}"),
                expected: domain.dim(),
                found: a.len(),
            });
        }
        Ok(Self::custom(domain, target, Kind::Dirac, move |_, h| h(&a)))
    }

    /// `δ_{a₀}` at the base point of the domain.
    pub fn dirac_at_base(domain: Domain, target: usize) -> Self {
        let a = domain.basepoint();
        Self::custom(domain, target, Kind::Dirac, move |_, h| h(&a))
    }

    /// `h ↦ Σ w·∂^α h(x)`.
    pub fn derivative_combo(domain: Domain, target: usize, terms: Vec<DerivTerm<S>>) -> Result<Self> {
        let k = domain.dim();
        for t in &terms {
            if t.point.len() != k || t.orders.len() != k {
                return Err(Error::DimensionMismatch {
                    context: "derivative term".into(),
                    expected: k,
                    found: t.point.len().max(t.orders.len()),
                });
            }
        }
        let terms: Vec<(Weil<S>, Point<S>, Vec<u32>)> = terms
            .into_iter()
            .map(|t| {
                (
                    Weil::constant(t.weight),
                    t.point.into_iter().map(Weil::constant).collect(),
                    t.orders,
                )
            })
            .collect();
        Ok(Self::custom(domain, target, Kind::DerivativeCombo, move |ctx, h| {
            let mut acc: Point<S> = vec![Weil::zero(); target];
            for (w, x, orders) in &terms {
                let v = partial_derivative(ctx, h, x, orders)?;
                acc = point_add(&acc, &point_scale(&v, w));
            }
            Ok(acc)
        }))
    }

    /// On the terminal domain `[1 → M] = M`, so a functional is a self-map
    /// of `M`: `h ↦ f(h())`.
    pub fn map_action(target: usize, f: PointMap<S>) -> Self {
        Self::custom(Domain::terminal(), target, Kind::MapAction, move |_, h| {
            let y = h(&[])?;
            f(&y)
        })
    }

    /// `h ↦ δ_{a₀}(h) + d·u(h)`.
    pub fn affine(u: &Functional<S>, d: Weil<S>) -> Self {
        let a = u.domain.basepoint();
        let u = u.clone();
        Self::custom(u.domain.clone(), u.target, Kind::Sum, move |ctx, h| {
            let base = h(&a)?;
            let du = point_scale(&u.eval(ctx, h)?, &d);
            Ok(point_add(&base, &du))
        })
    }

    /// Pointwise sum `h ↦ f(h) + g(h)`.
    pub fn add(&self, other: &Functional<S>) -> Result<Self> {
        if self.domain != other.domain || self.target != other.target {
            return Err(Error::DimensionMismatch {
                context: "functional sum".into(),
                expected: self.domain.dim(),
                found: other.domain.dim(),
            });
        }
        let (f, g) = (self.clone(), other.clone());
        Ok(Self::custom(self.domain.clone(), self.target, Kind::Sum, move |ctx, h| {
            Ok(point_add(&f.eval(ctx, h)?, &g.eval(ctx, h)?))
        }))
    }

    /// Pointwise scaling `h ↦ w·f(h)`.
    pub fn scale(&self, w: Weil<S>) -> Self {
        let f = self.clone();
        Self::custom(self.domain.clone(), self.target, Kind::Sum, move |ctx, h| {
            Ok(point_scale(&f.eval(ctx, h)?, &w))
        })
    }

    /// `f ∗ g` or `f ∗̃ g` on `A × B`.
    pub fn convolve(&self, g: &Functional<S>, orientation: Orientation) -> Result<Self> {
        if self.target != g.target {
            return Err(Error::DimensionMismatch {
                context: "convolution target".into(),
                expected: self.target,
                found: g.target,
            });
        }
        let domain = self.domain.times(&g.domain);
        let (f, g) = (self.clone(), g.clone());
        Ok(Self::custom(
            domain,
            self.target,
            Kind::Convolution(orientation),
            move |ctx, h| match orientation {
                Orientation::Plain => f.eval(ctx, &|a: &[Weil<S>]| {
                    g.eval(ctx, &|b: &[Weil<S>]| h(&concat(a, b)))
                }),
                Orientation::Tilde => g.eval(ctx, &|b: &[Weil<S>]| {
                    f.eval(ctx, &|a: &[Weil<S>]| h(&concat(a, b)))
                }),
            },
        ))
    }

    /// `h ↦ φ(x ↦ h(y(x)))` where `y[j] = x[source[j]]`, on `new_domain`.
    fn precompose(&self, new_domain: Domain, source: Vec<usize>) -> Self {
        let f = self.clone();
        Self::custom(new_domain, self.target, Kind::Realign, move |ctx, h| {
            f.eval(ctx, &|x: &[Weil<S>]| {
                let y: Point<S> = source.iter().map(|&i| x[i].clone()).collect();
                h(&y)
            })
        })
    }

    /// Reorders the factor groups of the domain. `groups` partitions the
    /// current domain (in order); the `j`-th group of the result is
    /// `groups[order[j]]`.
    pub fn realign(&self, groups: &[Domain], order: &[usize]) -> Result<Self> {
        let (domain, source) = realignment(&self.domain, groups, order)?;
        Ok(self.precompose(domain, source))
    }

    /// `φ^σ(h) = φ(x ↦ h(x_{σ(1)}, …, x_{σ(n)}))`, the action on functionals
    /// over `D^p` induced by `γ ↦ γ^σ`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.domain.dim() {
            return Err(Error::SizeMismatch {
                expected: self.domain.dim(),
                found: sigma.len(),
            });
        }
        Ok(self.precompose(self.domain.clone(), sigma.images().to_vec()))
    }
}

pub(crate) fn concat<S: Scalar>(a: &[Weil<S>], b: &[Weil<S>]) -> Point<S> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// New domain and coordinate source map for a group reordering.
pub(crate) fn realignment(
    domain: &Domain,
    groups: &[Domain],
    order: &[usize],
) -> Result<(Domain, Vec<usize>)> {
    let refs: Vec<&Domain> = groups.iter().collect();
    if Domain::product(&refs) != *domain {
        return Err(Error::DimensionMismatch {
            context: "realignment groups".into(),
            expected: domain.dim(),
            found: groups.iter().map(Domain::dim).sum(),
        });
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..groups.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidPermutation(order.to_vec()));
    }
    let mut offsets = Vec::with_capacity(groups.len());
    let mut acc = 0;
    for g in groups {
        offsets.push(acc);
        acc += g.dim();
    }
    let mut new_groups = Vec::new();
    let mut source = Vec::with_capacity(acc);
    for &k in order {
        new_groups.push(&groups[k]);
        source.extend(offsets[k]..offsets[k] + groups[k].dim());
    }
    Ok((Domain::product(&new_groups), source))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::rat;

    type R = Rational;

    fn c(n: i64) -> Weil<R> {
        Weil::constant(rat(n, 1))
    }

    fn line(b: i64) -> Domain {
        Domain::euclidean(vec![rat(b, 1)])
    }

    /// `h(x, y) = (x²y + 3y, x + y²)` on `R²`.
    fn sample_map() -> TestMap<R> {
        let p1 = Polynomial::from_terms(2, vec![(rat(1, 1), vec![2, 1]), (rat(3, 1), vec![0, 1])]).unwrap();
        let p2 = Polynomial::from_terms(2, vec![(rat(1, 1), vec![1, 0]), (rat(1, 1), vec![0, 2])]).unwrap();
        TestMap::polynomial(vec![p1, p2]).unwrap()
    }

    #[test]
    fn dirac_evaluates() {
        let ctx = GeneratorContext::new();
        let d = Functional::dirac(line(0).times(&line(0)), 2, vec![c(2), c(-1)]).unwrap();
        let v = d.eval_map(&ctx, &sample_map()).unwrap();
        assert_eq!(v, vec![c(-7), c(3)]);
    }

    #[test]
    fn derivative_combo_reads_partials() {
        let ctx = GeneratorContext::new();
        let dom = line(0).times(&line(0));
        // 2·∂x∂y h(1,2) - ∂y² h(0,0)
        let u = Functional::derivative_combo(
            dom,
            2,
            vec![
                DerivTerm {
                    weight: rat(2, 1),
                    point: vec![rat(1, 1), rat(2, 1)],
                    orders: vec![1, 1],
                },
                DerivTerm {
                    weight: rat(-1, 1),
                    point: vec![rat(0, 1), rat(0, 1)],
                    orders: vec![0, 2],
                },
            ],
        )
        .unwrap();
        // ∂x∂y h = (2x, 0); ∂y² h = (0, 2)
        let v = u.eval_map(&ctx, &sample_map()).unwrap();
        assert_eq!(v, vec![c(4), c(-2)]);
    }

    #[test]
    fn dirac_convolution_is_dirac_of_pair() {
        let ctx = GeneratorContext::new();
        let a = Functional::dirac(line(0), 2, vec![c(2)]).unwrap();
        let b = Functional::dirac(line(0), 2, vec![c(5)]).unwrap();
        let ab = Functional::dirac(line(0).times(&line(0)), 2, vec![c(2), c(5)]).unwrap();
        let h = sample_map();
        for o in [Orientation::Plain, Orientation::Tilde] {
            let conv = a.convolve(&b, o).unwrap();
            assert_eq!(conv.eval_map(&ctx, &h).unwrap(), ab.eval_map(&ctx, &h).unwrap());
        }
    }

    #[test]
    fn terminal_convolution_is_composition() {
        let ctx = GeneratorContext::new();
        let double: PointMap<R> = Arc::new(|y: &[Weil<R>]| Ok(y.iter().map(|v| v.scale(&rat(2, 1))).collect()));
        let shift: PointMap<R> = Arc::new(|y: &[Weil<R>]| Ok(vec![y[0].add_ref(&c(1))]));
        let f = Functional::map_action(1, double);
        let g = Functional::map_action(1, shift);
        let h = |_: &[Weil<R>]| Ok(vec![c(3)]);
        // f ∗ g = f ∘ g: 2·(3+1); f ∗̃ g = g ∘ f: 2·3+1
        let plain = f.convolve(&g, Orientation::Plain).unwrap();
        let tilde = f.convolve(&g, Orientation::Tilde).unwrap();
        assert_eq!(plain.eval(&ctx, &h).unwrap(), vec![c(8)]);
        assert_eq!(tilde.eval(&ctx, &h).unwrap(), vec![c(7)]);
    }

    #[test]
    fn realign_swaps_dirac_points() {
        let ctx = GeneratorContext::new();
        let groups = [line(0), line(0)];
        let ab = Functional::dirac(line(0).times(&line(0)), 2, vec![c(2), c(5)]).unwrap();
        let ba = Functional::dirac(line(0).times(&line(0)), 2, vec![c(5), c(2)]).unwrap();
        let h = sample_map();
        let swapped = ab.realign(&groups, &[1, 0]).unwrap();
        assert_eq!(swapped.eval_map(&ctx, &h).unwrap(), ba.eval_map(&ctx, &h).unwrap());
        let same = ab.realign(&groups, &[0, 1]).unwrap();
        assert_eq!(same.eval_map(&ctx, &h).unwrap(), ab.eval_map(&ctx, &h).unwrap());
        assert!(ab.realign(&groups, &[0, 0]).is_err());
    }

    #[test]
    fn convolution_rejects_target_mismatch() {
        let a = Functional::<R>::dirac_at_base(line(0), 2);
        let b = Functional::<R>::dirac_at_base(line(0), 3);
        assert!(a.convolve(&b, Orientation::Plain).is_err());
    }
}
