//! Icons: families `ξ : Dⁿ → [[A → M] → M]` with `ξ(0) = δ_{a₀}`, their
//! compositions `⊛`, `⊛̃`, strong differences and the Lie bracket.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functional::{DerivTerm, Domain, Functional, Kind, Orientation, PointMap, TestFn};
use crate::microcube::{relative_strong_difference, strong_difference, JacobiCubes, Microcube, TangentVector};
use crate::perm::Permutation;
use crate::poly::{Polynomial, TestMap};
use crate::scalar::Scalar;
use crate::weil::{point_add, point_approx_eq, point_scale, GeneratorContext, Point, Weil};

type FamilyFn<S> = dyn Fn(&[Weil<S>]) -> Result<Functional<S>> + Send + Sync;

#[derive(Clone)]
pub struct Icon<S: Scalar> {
    arity: usize,
    domain: Domain,
    target: usize,
    label: String,
    family: Arc<FamilyFn<S>>,
}

impl<S: Scalar> fmt::Debug for Icon<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Icon({}: D^{} → [[{} → R^{}] → R^{}])",
            self.label, self.arity, self.domain, self.target, self.target
        )
    }
}

impl<S: Scalar> Icon<S> {
    pub fn new(
        arity: usize,
        domain: Domain,
        target: usize,
        label: impl Into<String>,
        family: impl Fn(&[Weil<S>]) -> Result<Functional<S>> + Send + Sync + 'static,
    ) -> Self {
        Icon {
            arity,
            domain,
            target,
            label: label.into(),
            family: Arc::new(family),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `ξ(d₁, …, dₙ)`.
    pub fn at(&self, d: &[Weil<S>]) -> Result<Functional<S>> {
        if d.len() != self.arity {
            return Err(Error::SizeMismatch {
                expected: self.arity,
                found: d.len(),
            });
        }
        (self.family)(d)
    }

    /// The microcube `d ↦ ξ(d)(h)`, read at fresh generators.
    pub fn cube(&self, ctx: &GeneratorContext, h: &TestFn<'_, S>) -> Result<Microcube<S>> {
        Microcube::from_fn(ctx, self.arity, self.target, |d| self.at(d)?.eval(ctx, h))
    }

    pub fn cube_map(&self, ctx: &GeneratorContext, h: &TestMap<S>) -> Result<Microcube<S>> {
        self.cube(ctx, &|x: &[Weil<S>]| h.eval(x))
    }

    /// For a 1-icon: `ξ(d)(h) = base + d·dir`.
    pub fn tangent(&self, ctx: &GeneratorContext, h: &TestFn<'_, S>) -> Result<TangentVector<S>> {
        if self.arity != 1 {
            return Err(Error::SizeMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        let c = self.cube(ctx, h)?;
        Ok(TangentVector::new(c.coeff(0), c.coeff(1)))
    }

    pub fn tangent_map(&self, ctx: &GeneratorContext, h: &TestMap<S>) -> Result<TangentVector<S>> {
        self.tangent(ctx, &|x: &[Weil<S>]| h.eval(x))
    }

    /// Checks `ξ(0) = δ_{a₀}` on one test argument.
    pub fn starts_at_base(&self, ctx: &GeneratorContext, h: &TestFn<'_, S>, tol: f64) -> Result<bool> {
        let zero = vec![Weil::zero(); self.arity];
        let v = self.at(&zero)?.eval(ctx, h)?;
        let a = self.domain.basepoint();
        Ok(point_approx_eq(&v, &h(&a)?, tol))
    }

    /// Vector-field icon on the terminal domain: `ξ(d) = (y ↦ y + d·f(y))`.
    pub fn vector_field(f: TestMap<S>) -> Result<Self> {
        let m = f.target();
        if f.nvars() != m {
            return Err(Error::DimensionMismatch {
                context: "vector field".into(),
                expected: m,
                found: f.nvars(),
            });
        }
        let f = Arc::new(f);
        Ok(Icon::new(1, Domain::terminal(), m, "vector-field", move |d| {
            let d = d[0].clone();
            let f = f.clone();
            let map: PointMap<S> = Arc::new(move |y: &[Weil<S>]| {
                let fy = f.eval(y)?;
                Ok(point_add(y, &point_scale(&fy, &d)))
            });
            Ok(Functional::map_action(m, map))
        }))
    }

    /// Dirac curve flow `ξ(d) = δ_{a₀ + d·v}`.
    pub fn dirac_curve(domain: Domain, target: usize, velocity: Vec<S>) -> Result<Self> {
        if velocity.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "curve velocity".into(),
                expected: domain.dim(),
                found: velocity.len(),
            });
        }
        let a0: Point<S> = domain.basepoint();
        let v: Point<S> = velocity.into_iter().map(Weil::constant).collect();
        let dom = domain.clone();
        Ok(Icon::new(1, domain, target, "dirac-curve", move |d| {
            let a = point_add(&a0, &point_scale(&v, &d[0]));
            Functional::dirac(dom.clone(), target, a)
        }))
    }

    /// Affine perturbation `ξ(d) = δ_{a₀} + d·u`.
    pub fn affine(u: Functional<S>) -> Self {
        let (domain, target) = (u.domain().clone(), u.target());
        Icon::new(1, domain, target, "affine", move |d| Ok(Functional::affine(&u, d[0].clone())))
    }

    /// 2-icon `ξ(d₁,d₂) = δ_{a₀} + d₁·u₁ + d₂·u₂ + d₁d₂·u₁₂`.
    pub fn affine_square(u1: Functional<S>, u2: Functional<S>, u12: Functional<S>) -> Result<Self> {
        let (domain, target) = (u1.domain().clone(), u1.target());
        for u in [&u2, &u12] {
            if *u.domain() != domain || u.target() != target {
                return Err(Error::DimensionMismatch {
                    context: "affine square".into(),
                    expected: domain.dim(),
                    found: u.domain().dim(),
                });
            }
        }
        let a0: Point<S> = domain.basepoint();
        Ok(Icon::new(2, domain.clone(), target, "affine-square", move |d| {
            let (u1, u2, u12, a0) = (u1.clone(), u2.clone(), u12.clone(), a0.clone());
            let (d1, d2) = (d[0].clone(), d[1].clone());
            let d12 = d1.mul_ref(&d2);
            Ok(Functional::custom(domain.clone(), target, Kind::Sum, move |ctx, h| {
                let mut v = h(&a0)?;
                for (u, w) in [(&u1, &d1), (&u2, &d2), (&u12, &d12)] {
                    if !w.is_zero() {
                        v = point_add(&v, &point_scale(&u.eval(ctx, h)?, w));
                    }
                }
                Ok(v)
            }))
        }))
    }

    /// Derivative-combination affine icon on a Euclidean domain.
    pub fn derivative_flow(domain: Domain, target: usize, terms: Vec<DerivTerm<S>>) -> Result<Self> {
        Ok(Icon::affine(Functional::derivative_combo(domain, target, terms)?).relabel("derivative-flow"))
    }

    /// `ξ₁ ⊛ ξ₂` or `ξ₁ ⊛̃ ξ₂`, an `(n+m)`-icon on `A × B`.
    pub fn compose(&self, other: &Icon<S>, orientation: Orientation) -> Result<Self> {
        if self.target != other.target {
            return Err(Error::DimensionMismatch {
                context: "composition target".into(),
                expected: self.target,
                found: other.target,
            });
        }
        let (a, b) = (self.clone(), other.clone());
        let n = a.arity;
        let sym = match orientation {
            Orientation::Plain => "⊛",
            Orientation::Tilde => "⊛̃",
        };
        let label = format!("({} {sym} {})", a.label, b.label);
        Ok(Icon::new(
            a.arity + b.arity,
            a.domain.times(&b.domain),
            a.target,
            label,
            move |d| a.at(&d[..n])?.convolve(&b.at(&d[n..])?, orientation),
        ))
    }

    /// Strong difference `ξ₁ ∸ ξ₂` of two 2-icons agreeing on `D(2)`,
    /// computed per test argument.
    pub fn strong_difference(&self, other: &Icon<S>, tol: f64) -> Result<Self> {
        for x in [self, other] {
            if x.arity != 2 {
                return Err(Error::SizeMismatch {
                    expected: 2,
                    found: x.arity,
                });
            }
        }
        if self.domain != other.domain || self.target != other.target {
            return Err(Error::DimensionMismatch {
                context: "strong difference of icons".into(),
                expected: self.domain.dim(),
                found: other.domain.dim(),
            });
        }
        let (a, b) = (self.clone(), other.clone());
        let label = format!("({} ∸ {})", a.label, b.label);
        let (domain, target) = (a.domain.clone(), a.target);
        Ok(Icon::new(1, domain.clone(), target, label, move |d| {
            let (a, b, d) = (a.clone(), b.clone(), d[0].clone());
            Ok(Functional::custom(domain.clone(), target, Kind::StrongDifference, move |ctx, h| {
                let t = strong_difference(&a.cube(ctx, h)?, &b.cube(ctx, h)?, tol)?;
                Ok(point_add(&t.base, &point_scale(&t.dir, &d)))
            }))
        }))
    }

    /// `⌊ξ₁, ξ₂⌋ = ξ₁ ⊛̃ ξ₂ ∸ ξ₁ ⊛ ξ₂`.
    pub fn lie_bracket(&self, other: &Icon<S>, tol: f64) -> Result<Self> {
        for x in [self, other] {
            if x.arity != 1 {
                return Err(Error::SizeMismatch {
                    expected: 1,
                    found: x.arity,
                });
            }
        }
        let tilde = self.compose(other, Orientation::Tilde)?;
        let plain = self.compose(other, Orientation::Plain)?;
        let label = format!("⌊{}, {}⌋", self.label, other.label);
        Ok(tilde.strong_difference(&plain, tol)?.relabel(label))
    }

    /// The same icon read over another domain of equal dimension, e.g.
    /// `D^p × D^q` as `D^{p+q}`.
    pub fn with_domain(&self, domain: Domain) -> Result<Self> {
        if domain == self.domain {
            return Ok(self.clone());
        }
        if domain.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch {
                context: "domain identification".into(),
                expected: self.domain.dim(),
                found: domain.dim(),
            });
        }
        let x = self.clone();
        let dom = domain.clone();
        Ok(Icon::new(self.arity, domain, self.target, self.label.clone(), move |d| {
            x.at(d).map(|f| f.with_domain(dom.clone()))
        }))
    }

    /// Reorders domain groups, see [`Functional::realign`].
    pub fn realign(&self, groups: &[Domain], order: &[usize]) -> Result<Self> {
        let (domain, _) = crate::functional::realignment(&self.domain, groups, order)?;
        let (x, groups, order) = (self.clone(), groups.to_vec(), order.to_vec());
        Ok(Icon::new(self.arity, domain, self.target, self.label.clone(), move |d| {
            x.at(d)?.realign(&groups, &order)
        }))
    }

    /// `ξ^σ(d) = ξ(d)^σ` for icons over `D^p`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.domain.dim() {
            return Err(Error::SizeMismatch {
                expected: self.domain.dim(),
                found: sigma.len(),
            });
        }
        let (x, s) = (self.clone(), sigma.clone());
        Ok(Icon::new(self.arity, self.domain.clone(), self.target, format!("{}^{}", self.label, sigma), move |d| {
            x.at(d)?.permute(&s)
        }))
    }

    /// Reparametrizes the icon by a map on its infinitesimal arguments:
    /// `d ↦ ξ(f(d))`.
    pub fn reparametrize(
        &self,
        f: impl Fn(&[Weil<S>]) -> Vec<Weil<S>> + Send + Sync + 'static,
    ) -> Self {
        let x = self.clone();
        Icon::new(self.arity, self.domain.clone(), self.target, self.label.clone(), move |d| {
            x.at(&f(d))
        })
    }

    /// Direction-level linear combination of 1-icons sharing domain and
    /// base: `d ↦ δ₀ + d·Σ cᵢ·dirᵢ`.
    pub fn tangent_combination(terms: Vec<(S, Icon<S>)>, tol: f64) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Closure("empty combination".into()))?;
        let (domain, target) = (first.1.domain.clone(), first.1.target);
        for (_, x) in &terms {
            if x.arity != 1 || x.domain != domain || x.target != target {
                return Err(Error::DimensionMismatch {
                    context: "tangent combination".into(),
                    expected: domain.dim(),
                    found: x.domain.dim(),
                });
            }
        }
        let terms: Vec<(Weil<S>, Icon<S>)> = terms.into_iter().map(|(c, x)| (Weil::constant(c), x)).collect();
        let label = format!("Σ[{}]", terms.len());
        Ok(Icon::new(1, domain.clone(), target, label, move |d| {
            let (terms, d) = (terms.clone(), d[0].clone());
            Ok(Functional::custom(domain.clone(), target, Kind::Sum, move |ctx, h| {
                let mut acc: Option<TangentVector<S>> = None;
                for (c, x) in &terms {
                    let t = x.tangent(ctx, h)?;
                    let t = TangentVector::new(t.base, point_scale(&t.dir, c));
                    acc = Some(match acc {
                        None => t,
                        Some(a) => a.add(&t, tol)?,
                    });
                }
                let t = acc.expect("nonempty");
                Ok(point_add(&t.base, &point_scale(&t.dir, &d)))
            }))
        }))
    }
}

/// `⌊f, g⌋` of two polynomial vector fields, read off the icon bracket at
/// a point of free indeterminates. `ctx` must have no live free
/// indeterminates.
pub fn vector_field_bracket<S: Scalar>(
    ctx: &GeneratorContext,
    f: &TestMap<S>,
    g: &TestMap<S>,
    tol: f64,
) -> Result<TestMap<S>> {
    let m = f.target();
    if ctx.generators().iter().any(|g| matches!(g, crate::weil::Gen::Free(_))) {
        return Err(Error::Config("free indeterminates already in use".into()));
    }
    let b = Icon::vector_field(f.clone())?.lie_bracket(&Icon::vector_field(g.clone())?, tol)?;
    let x = ctx.fresh_free(m)?;
    let y: Point<S> = x.elems();
    let t = b.tangent(ctx, &|_: &[Weil<S>]| Ok(y.clone()))?;
    let polys = t
        .dir
        .iter()
        .map(|w| Polynomial::from_weil(w, m))
        .collect::<Result<Vec<_>>>()?;
    TestMap::polynomial(polys)
}

/// `⌊ξ₁,ξ₂⌋ + ⌊ξ₂,ξ₁⌋` on one test argument over `A × B`. With
/// `realign = false` the second bracket is evaluated on `h` as though
/// `B × A` were `A × B`.
pub fn antisymmetry_residual<S: Scalar>(
    ctx: &GeneratorContext,
    x1: &Icon<S>,
    x2: &Icon<S>,
    h: &TestFn<'_, S>,
    tol: f64,
    realign: bool,
) -> Result<TangentVector<S>> {
    let b12 = x1.lie_bracket(x2, tol)?;
    let mut b21 = x2.lie_bracket(x1, tol)?;
    if realign {
        b21 = b21.realign(&[x2.domain.clone(), x1.domain.clone()], &[1, 0])?;
    } else if b21.domain.dim() != b12.domain.dim() {
        return Err(Error::DimensionMismatch {
            context: "unaligned bracket".into(),
            expected: b12.domain.dim(),
            found: b21.domain.dim(),
        });
    }
    b12.tangent(ctx, h)?.add(&b21.tangent(ctx, h)?, tol)
}

/// The three Jacobi summands `⌊ξ₁,⌊ξ₂,ξ₃⌋⌋`, `⌊ξ₂,⌊ξ₃,ξ₁⌋⌋`,
/// `⌊ξ₃,⌊ξ₁,ξ₂⌋⌋`, the last two realigned to `A × B × C` when asked.
pub fn jacobi_terms<S: Scalar>(
    x1: &Icon<S>,
    x2: &Icon<S>,
    x3: &Icon<S>,
    tol: f64,
    realign: bool,
) -> Result<[Icon<S>; 3]> {
    let t1 = x1.lie_bracket(&x2.lie_bracket(x3, tol)?, tol)?;
    let mut t2 = x2.lie_bracket(&x3.lie_bracket(x1, tol)?, tol)?;
    let mut t3 = x3.lie_bracket(&x1.lie_bracket(x2, tol)?, tol)?;
    if realign {
        let (a, b, c) = (x1.domain.clone(), x2.domain.clone(), x3.domain.clone());
        t2 = t2.realign(&[b.clone(), c.clone(), a.clone()], &[2, 0, 1])?;
        t3 = t3.realign(&[c, a, b], &[1, 2, 0])?;
    }
    Ok([t1, t2, t3])
}

/// Sum of the three Jacobi summands on one test argument.
pub fn jacobi_residual<S: Scalar>(
    ctx: &GeneratorContext,
    terms: &[Icon<S>; 3],
    h: &TestFn<'_, S>,
    tol: f64,
) -> Result<TangentVector<S>> {
    let mut acc = terms[0].tangent(ctx, h)?;
    for t in &terms[1..] {
        acc = acc.add(&t.tangent(ctx, h)?, tol)?;
    }
    Ok(acc)
}

/// The six 3-icons `ξ₁₂₃, ξ₁₃₂, ξ₂₁₃, ξ₂₃₁, ξ₃₁₂, ξ₃₂₁` on `A × B × C`.
pub fn six_compositions<S: Scalar>(x1: &Icon<S>, x2: &Icon<S>, x3: &Icon<S>) -> Result<[Icon<S>; 6]> {
    use Orientation::{Plain, Tilde};
    Ok([
        x1.compose(&x2.compose(x3, Plain)?, Plain)?,
        x1.compose(&x2.compose(x3, Tilde)?, Plain)?,
        x1.compose(x2, Tilde)?.compose(x3, Plain)?,
        x1.compose(&x2.compose(x3, Plain)?, Tilde)?,
        x1.compose(x2, Plain)?.compose(x3, Tilde)?,
        x1.compose(&x2.compose(x3, Tilde)?, Tilde)?,
    ])
}

/// General-Jacobi residual of the six compositions' microcubes on `h`.
pub fn jacobi_residual_via_cubes<S: Scalar>(
    ctx: &GeneratorContext,
    six: &[Icon<S>; 6],
    h: &TestFn<'_, S>,
    tol: f64,
) -> Result<TangentVector<S>> {
    let c: Vec<Microcube<S>> = six.iter().map(|x| x.cube(ctx, h)).collect::<Result<_>>()?;
    let cubes = JacobiCubes {
        g123: c[0].clone(),
        g132: c[1].clone(),
        g213: c[2].clone(),
        g231: c[3].clone(),
        g312: c[4].clone(),
        g321: c[5].clone(),
    };
    cubes.residual(tol)
}

/// The four interchange formulas between compositions and strong
/// differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interchange {
    /// `ξ⊛ξ₁ ∸₁ ξ⊛ξ₂ = ξ⊛(ξ₁∸ξ₂)`
    PlainLeft,
    /// `ξ⊛̃ξ₁ ∸₁ ξ⊛̃ξ₂ = ξ⊛̃(ξ₁∸ξ₂)`
    TildeLeft,
    /// `ξ₁⊛ξ ∸₃ ξ₂⊛ξ = (ξ₁∸ξ₂)⊛ξ`
    PlainRight,
    /// `ξ₁⊛̃ξ ∸₃ ξ₂⊛̃ξ = (ξ₁∸ξ₂)⊛̃ξ`
    TildeRight,
}

impl Interchange {
    pub const ALL: [Interchange; 4] = [
        Interchange::PlainLeft,
        Interchange::TildeLeft,
        Interchange::PlainRight,
        Interchange::TildeRight,
    ];
}

/// Both sides of an interchange formula on `h`, as microsquares in
/// `(d, dᵢ)`: `d` the strong-difference variable, `dᵢ` the variable of `ξ`.
pub fn interchange_sides<S: Scalar>(
    ctx: &GeneratorContext,
    formula: Interchange,
    xi: &Icon<S>,
    xi1: &Icon<S>,
    xi2: &Icon<S>,
    h: &TestFn<'_, S>,
    tol: f64,
) -> Result<(Microcube<S>, Microcube<S>)> {
    let orientation = match formula {
        Interchange::PlainLeft | Interchange::PlainRight => Orientation::Plain,
        Interchange::TildeLeft | Interchange::TildeRight => Orientation::Tilde,
    };
    let diff = xi1.strong_difference(xi2, tol)?;
    match formula {
        Interchange::PlainLeft | Interchange::TildeLeft => {
            let lhs = relative_strong_difference(
                &xi.compose(xi1, orientation)?.cube(ctx, h)?,
                &xi.compose(xi2, orientation)?.cube(ctx, h)?,
                1,
                tol,
            )?;
            let rhs = xi
                .compose(&diff, orientation)?
                .cube(ctx, h)?
                .permute(&Permutation::transposition(2, 0, 1))?;
            Ok((lhs, rhs))
        }
        Interchange::PlainRight | Interchange::TildeRight => {
            let lhs = relative_strong_difference(
                &xi1.compose(xi, orientation)?.cube(ctx, h)?,
                &xi2.compose(xi, orientation)?.cube(ctx, h)?,
                3,
                tol,
            )?;
            let rhs = diff.compose(xi, orientation)?.cube(ctx, h)?;
            Ok((lhs, rhs))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::{rat, Rational};

    type R = Rational;

    fn field(components: Vec<Vec<(i64, Vec<u32>)>>) -> TestMap<R> {
        let m = components.len();
        TestMap::polynomial(
            components
                .into_iter()
                .map(|terms| {
                    Polynomial::from_terms(m, terms.into_iter().map(|(c, e)| (rat(c, 1), e))).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bracket_of_coordinate_fields() {
        // f = (x₂, 0), g = (0, x₁) → Jg·f − Jf·g = (−x₁, x₂)
        let ctx = GeneratorContext::new();
        let f = Icon::vector_field(field(vec![vec![(1, vec![0, 1])], vec![]])).unwrap();
        let g = Icon::vector_field(field(vec![vec![], vec![(1, vec![1, 0])]])).unwrap();
        let b = f.lie_bracket(&g, 0.0).unwrap();
        let y = vec![Weil::constant(rat(3, 1)), Weil::constant(rat(5, 1))];
        let t = b.tangent(&ctx, &|_: &[Weil<R>]| Ok(y.clone())).unwrap();
        assert_eq!(t.base, y);
        assert_eq!(t.dir, vec![Weil::constant(rat(-3, 1)), Weil::constant(rat(5, 1))]);
    }

    #[test]
    fn self_bracket_vanishes() {
        let ctx = GeneratorContext::new();
        let f = Icon::vector_field(field(vec![vec![(2, vec![1, 1])], vec![(1, vec![0, 2])]])).unwrap();
        let b = f.lie_bracket(&f, 0.0).unwrap();
        let y = vec![Weil::constant(rat(1, 2)), Weil::constant(rat(-7, 3))];
        assert!(b.tangent(&ctx, &|_: &[Weil<R>]| Ok(y.clone())).unwrap().is_zero(0.0));
    }

    #[test]
    fn icons_start_at_dirac() {
        let ctx = GeneratorContext::new();
        let dom = Domain::euclidean(vec![rat(1, 1), rat(2, 1)]);
        let curve = Icon::<R>::dirac_curve(dom, 2, vec![rat(1, 1), rat(-1, 1)]).unwrap();
        let h = TestMap::identity(2);
        assert!(curve.starts_at_base(&ctx, &|x: &[Weil<R>]| h.eval(x), 0.0).unwrap());
    }

    #[test]
    fn dirac_curve_brackets_vanish() {
        let ctx = GeneratorContext::new();
        let a = Icon::<R>::dirac_curve(Domain::euclidean(vec![rat(1, 1)]), 1, vec![rat(2, 1)]).unwrap();
        let b = Icon::<R>::dirac_curve(Domain::euclidean(vec![rat(0, 1)]), 1, vec![rat(3, 1)]).unwrap();
        let p = Polynomial::from_terms(2, vec![(rat(1, 1), vec![2, 1]), (rat(4, 1), vec![1, 1])]).unwrap();
        let h = TestMap::polynomial(vec![p]).unwrap();
        let t = a.lie_bracket(&b, 0.0).unwrap().tangent_map(&ctx, &h).unwrap();
        assert!(t.is_zero(0.0));
    }
}
