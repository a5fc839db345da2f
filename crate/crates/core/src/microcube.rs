//! Maps `Dⁿ → R^m` as coefficient tensors, with the scalar and permutation
//! actions, strong differences (plain and relativized) and the general Jacobi
//! residual.
//!
//! By square-freeness every such map is `γ(d) = Σ_S c_S ∏_{i∈S} dᵢ`, so a
//! microcube is the association `S ↦ c_S`. Subsets are bit masks with bit
//! `i-1` standing for variable `dᵢ`. Coefficients live in the ambient Weil
//! algebra so microcubes may carry nilpotent-valued coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::Scalar;
use crate::weil::{bits, point_add, point_approx_eq, point_sub, GeneratorContext, Point, Weil};

/// Converts 1-based variable indices to a subset mask.
pub fn subset(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |acc, &i| acc | (1u64 << (i - 1)))
}

/// 1-based indices of a subset mask.
pub fn subset_indices(mask: u64) -> Vec<usize> {
    bits(mask).map(|i| i + 1).collect()
}

fn zero_point<S: Scalar>(m: usize) -> Point<S> {
    vec![Weil::zero(); m]
}

fn is_zero_point<S: Scalar>(p: &[Weil<S>]) -> bool {
    p.iter().all(|x| x.is_zero())
}

#[derive(Clone, PartialEq)]
pub struct Microcube<S> {
    n: usize,
    m: usize,
    coeffs: BTreeMap<u64, Point<S>>,
}

impl<S: Scalar> Microcube<S> {
    pub fn zero(n: usize, m: usize) -> Self {
        Microcube {
            n,
            m,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, base: Point<S>) -> Self {
        let m = base.len();
        Self::zero(n, m).with(0, base)
    }

    /// Sets the coefficient of the subset `mask`.
    pub fn with(mut self, mask: u64, value: Point<S>) -> Self {
        self.set(mask, value);
        self
    }

    pub fn set(&mut self, mask: u64, value: Point<S>) {
        assert!(mask >> self.n == 0, "subset outside 1..={}", self.n);
        assert_eq!(value.len(), self.m, "coefficient dimension");
        if is_zero_point(&value) {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, value);
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn coeff(&self, mask: u64) -> Point<S> {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| zero_point(self.m))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&u64, &Point<S>)> {
        self.coeffs.iter()
    }

    pub fn base(&self) -> Point<S> {
        self.coeff(0)
    }

    /// Top coefficient `c_{1..n}`.
    pub fn top(&self) -> Point<S> {
        self.coeff(full_mask(self.n))
    }

    /// Polynomial evaluation at `n` infinitesimal arguments.
    pub fn eval(&self, args: &[Weil<S>]) -> Result<Point<S>> {
        if args.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: args.len(),
            });
        }
        for (index, a) in args.iter().enumerate() {
            if !a.body().is_zero() {
                return Err(Error::NotInfinitesimal { index: index + 1 });
            }
        }
        let mut out = zero_point(self.m);
        for (&mask, c) in &self.coeffs {
            let mut mono = Weil::one();
            for i in bits(mask) {
                mono = mono.mul_ref(&args[i]);
                if mono.is_zero() {
                    break;
                }
            }
            if mono.is_zero() {
                continue;
            }
            for (o, ci) in out.iter_mut().zip(c) {
                o.add_assign_ref(&ci.mul_ref(&mono));
            }
        }
        Ok(out)
    }

    /// Reads the coefficient tensor of `f : Dⁿ → R^m` by evaluating it at
    /// fresh generators.
    pub fn from_fn(
        ctx: &GeneratorContext,
        n: usize,
        m: usize,
        f: impl FnOnce(&[Weil<S>]) -> Result<Point<S>>,
    ) -> Result<Self> {
        let g = ctx.fresh(n)?;
        let args: Vec<Weil<S>> = g.elems();
        let value = f(&args)?;
        if value.len() != m {
            return Err(Error::DimensionMismatch {
                context: "microcube target".into(),
                expected: m,
                found: value.len(),
            });
        }
        let mask = g.mask();
        let mut cube = Microcube::zero(n, m);
        let split: Vec<_> = value.iter().map(|v| v.split(mask)).collect();
        for sub in 0..(1u64 << n) {
            let c: Point<S> = split
                .iter()
                .map(|parts| parts.get(&(sub << bit_offset(mask))).cloned().unwrap_or_default())
                .collect();
            cube.set(sub, c);
        }
        Ok(cube)
    }

    /// `α ·ᵢ γ`: replaces `dᵢ` by `α dᵢ`. `i` is 1-based.
    pub fn scale(&self, alpha: &Weil<S>, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                arity: self.n,
            });
        }
        let bit = 1u64 << (i - 1);
        let mut out = Microcube::zero(self.n, self.m);
        for (&mask, c) in &self.coeffs {
            let v = if mask & bit != 0 {
                c.iter().map(|x| x.mul_ref(alpha)).collect()
            } else {
                c.clone()
            };
            out.set(mask, v);
        }
        Ok(out)
    }

    /// `γ^σ(d₁..dₙ) = γ(d_{σ(1)}..d_{σ(n)})`; the coefficient of `T` is
    /// `c_{σ⁻¹(T)}`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: sigma.len(),
            });
        }
        let mut out = Microcube::zero(self.n, self.m);
        for (&mask, c) in &self.coeffs {
            out.set(sigma.map_mask(mask), c.clone());
        }
        Ok(out)
    }

    pub fn approx_eq(&self, other: &Microcube<S>, tol: f64) -> bool {
        self.n == other.n
            && self.m == other.m
            && (0..(1u64 << self.n)).all(|s| point_approx_eq(&self.coeff(s), &other.coeff(s), tol))
    }

    /// Maps coefficients through a function (e.g. into a different scalar).
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Microcube<T> {
        let mut out = Microcube::zero(self.n, self.m);
        for (&mask, c) in &self.coeffs {
            out.set(mask, c.iter().map(|w| w.map_scalars(f)).collect());
        }
        out
    }

    pub fn map_points(&self, f: impl Fn(&Point<S>) -> Point<S>) -> Self {
        let mut out = Microcube::zero(self.n, self.m);
        for (&mask, c) in &self.coeffs {
            out.set(mask, f(c));
        }
        out
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

fn bit_offset(mask: u64) -> u32 {
    if mask == 0 {
        0
    } else {
        mask.trailing_zeros()
    }
}

impl<S: Scalar> fmt::Debug for Microcube<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Microcube(n={}, m={}) {{", self.n, self.m)?;
        for (mask, c) in &self.coeffs {
            write!(f, " c{:?}={:?}", subset_indices(*mask), c)?;
        }
        write!(f, " }}")
    }
}

/// A tangent vector `d ↦ base + d·dir`.
#[derive(Clone, PartialEq)]
pub struct TangentVector<S> {
    pub base: Point<S>,
    pub dir: Point<S>,
}

impl<S: Scalar> TangentVector<S> {
    pub fn new(base: Point<S>, dir: Point<S>) -> Self {
        assert_eq!(base.len(), dir.len());
        TangentVector { base, dir }
    }

    pub fn zero_at(base: Point<S>) -> Self {
        let m = base.len();
        TangentVector {
            base,
            dir: zero_point(m),
        }
    }

    /// Addition in the tangent space at a common base.
    pub fn add(&self, other: &TangentVector<S>, tol: f64) -> Result<Self> {
        if !point_approx_eq(&self.base, &other.base, tol) {
            return Err(Error::BaseMismatch);
        }
        Ok(TangentVector {
            base: self.base.clone(),
            dir: point_add(&self.dir, &other.dir),
        })
    }

    pub fn neg(&self) -> Self {
        TangentVector {
            base: self.base.clone(),
            dir: self.dir.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.dir.iter().all(|x| x.approx_eq(&Weil::zero(), tol))
    }

    pub fn approx_eq(&self, other: &TangentVector<S>, tol: f64) -> bool {
        point_approx_eq(&self.base, &other.base, tol) && point_approx_eq(&self.dir, &other.dir, tol)
    }

    /// The microcube `d ↦ base + d·dir` on `D¹`.
    pub fn as_microcube(&self) -> Microcube<S> {
        Microcube::constant(1, self.base.clone()).with(1, self.dir.clone())
    }
}

impl<S: Scalar> fmt::Debug for TangentVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TangentVector {{ base: {:?}, dir: {:?} }}", self.base, self.dir)
    }
}

fn require_arity<S: Scalar>(g: &Microcube<S>, n: usize) -> Result<()> {
    if g.arity() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: g.arity(),
        });
    }
    Ok(())
}

/// Strong difference `γ₁ ∸ γ₂` of two microsquares agreeing on `D(2)`.
pub fn strong_difference<S: Scalar>(
    g1: &Microcube<S>,
    g2: &Microcube<S>,
    tol: f64,
) -> Result<TangentVector<S>> {
    require_arity(g1, 2)?;
    require_arity(g2, 2)?;
    if g1.dim() != g2.dim() {
        return Err(Error::SizeMismatch {
            expected: g1.dim(),
            found: g2.dim(),
        });
    }
    for mask in [0b00, 0b01, 0b10] {
        if !point_approx_eq(&g1.coeff(mask), &g2.coeff(mask), tol) {
            return Err(Error::D2Disagreement {
                subset: subset_indices(mask),
            });
        }
    }
    Ok(TangentVector {
        base: g1.base(),
        dir: point_sub(&g1.coeff(0b11), &g2.coeff(0b11)),
    })
}

/// Relativized strong difference `γ₁ ∸ᵢ γ₂` of microcubes, viewing
/// `D³ → M` as microsquares on `[D → M]` through the `i`-th variable.
///
/// The result is a microsquare in `(d, dᵢ)` (variable 1 is the new `d`,
/// variable 2 is `dᵢ`):
/// `c∅ + c_{i}·dᵢ + d·Δc_{jk} + d·dᵢ·Δc_{123}`.
pub fn relative_strong_difference<S: Scalar>(
    g1: &Microcube<S>,
    g2: &Microcube<S>,
    i: usize,
    tol: f64,
) -> Result<Microcube<S>> {
    require_arity(g1, 3)?;
    require_arity(g2, 3)?;
    if !(1..=3).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, arity: 3 });
    }
    let ibit = 1u64 << (i - 1);
    let jk = 0b111 & !ibit;
    for mask in 0..8u64 {
        if mask & jk == jk {
            continue;
        }
        if !point_approx_eq(&g1.coeff(mask), &g2.coeff(mask), tol) {
            return Err(Error::AgreementViolation {
                index: i,
                subset: subset_indices(mask),
            });
        }
    }
    let m = g1.dim();
    Ok(Microcube::zero(2, m)
        .with(0b00, g1.coeff(0))
        .with(0b10, g1.coeff(ibit))
        .with(0b01, point_sub(&g1.coeff(jk), &g2.coeff(jk)))
        .with(0b11, point_sub(&g1.coeff(0b111), &g2.coeff(0b111))))
}

/// Six microcubes indexed by the words of `S₃`.
#[derive(Clone, Debug)]
pub struct JacobiCubes<S: Scalar> {
    pub g123: Microcube<S>,
    pub g132: Microcube<S>,
    pub g213: Microcube<S>,
    pub g231: Microcube<S>,
    pub g312: Microcube<S>,
    pub g321: Microcube<S>,
}

impl<S: Scalar> JacobiCubes<S> {
    /// The three expressions of the general Jacobi identity, in order.
    pub fn expressions(&self, tol: f64) -> Result<[TangentVector<S>; 3]> {
        let expr = |k: usize,
                    a: &Microcube<S>,
                    b: &Microcube<S>,
                    c: &Microcube<S>,
                    d: &Microcube<S>,
                    i: usize|
         -> Result<TangentVector<S>> {
            let wrap = |e: Error| Error::IllDefined {
                expression: k,
                source: Box::new(e),
            };
            let left = relative_strong_difference(a, b, i, tol).map_err(wrap)?;
            let right = relative_strong_difference(c, d, i, tol).map_err(wrap)?;
            strong_difference(&left, &right, tol).map_err(wrap)
        };
        Ok([
            expr(1, &self.g123, &self.g132, &self.g231, &self.g321, 1)?,
            expr(2, &self.g231, &self.g213, &self.g312, &self.g132, 2)?,
            expr(3, &self.g312, &self.g321, &self.g123, &self.g213, 3)?,
        ])
    }

    /// Sum of the three expressions; vanishes whenever it is defined.
    pub fn residual(&self, tol: f64) -> Result<TangentVector<S>> {
        let [a, b, c] = self.expressions(tol)?;
        a.add(&b, tol)?.add(&c, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type R = Rational;

    fn pt(v: &[i64]) -> Point<R> {
        v.iter().map(|&x| Weil::constant(rat(x, 1))).collect()
    }

    fn sample_square() -> Microcube<R> {
        Microcube::zero(2, 2)
            .with(0, pt(&[1, 0]))
            .with(subset(&[1]), pt(&[0, 1]))
            .with(subset(&[1, 2]), pt(&[2, 2]))
    }

    #[test]
    fn evaluation_at_formal_generators() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(2).unwrap();
        let (e1, e2): (Weil<R>, Weil<R>) = (g.elem(0), g.elem(1));
        let v = sample_square().eval(&[e1.clone(), e2.clone()]).unwrap();
        let e12 = e1.mul_ref(&e2);
        assert_eq!(v[0], Weil::constant(rat(1, 1)) + e12.scale(&rat(2, 1)));
        assert_eq!(v[1], e1.clone() + e12.scale(&rat(2, 1)));

        let zero = sample_square().eval(&[Weil::zero(), Weil::zero()]).unwrap();
        assert_eq!(zero, pt(&[1, 0]));

        let partial = sample_square().eval(&[e1.clone(), Weil::zero()]).unwrap();
        assert_eq!(partial, vec![Weil::constant(rat(1, 1)), e1]);
    }

    #[test]
    fn evaluation_rejects_non_infinitesimals() {
        let r = sample_square().eval(&[Weil::one(), Weil::zero()]);
        assert!(matches!(r, Err(Error::NotInfinitesimal { index: 1 })));
    }

    #[test]
    fn scaling_touches_subsets_containing_the_slot() {
        let three = Weil::constant(rat(3, 1));
        let g = sample_square().with(subset(&[2]), pt(&[5, 5]));
        let s = g.scale(&three, 2).unwrap();
        assert_eq!(s.coeff(subset(&[2])), pt(&[15, 15]));
        assert_eq!(s.coeff(subset(&[1, 2])), pt(&[6, 6]));
        assert_eq!(s.coeff(subset(&[1])), pt(&[0, 1]));
        assert_eq!(s.coeff(0), pt(&[1, 0]));
        assert_eq!(g.scale(&Weil::one(), 1).unwrap(), g);
        assert!(g.scale(&three, 3).is_err());
    }

    #[test]
    fn transposition_swaps_linear_slots() {
        let g = sample_square().with(subset(&[2]), pt(&[7, 7]));
        let t = Permutation::transposition(2, 0, 1);
        let s = g.permute(&t).unwrap();
        assert_eq!(s.coeff(subset(&[1])), pt(&[7, 7]));
        assert_eq!(s.coeff(subset(&[2])), pt(&[0, 1]));
        assert_eq!(s.coeff(subset(&[1, 2])), g.coeff(subset(&[1, 2])));
        assert_eq!(g.permute(&Permutation::identity(2)).unwrap(), g);
    }

    #[test]
    fn strong_difference_basics() {
        let x = pt(&[1, 2]);
        let v = pt(&[3, -1]);
        let g1 = Microcube::constant(2, x.clone()).with(0b11, v.clone());
        let g2 = Microcube::constant(2, x.clone());
        let t = strong_difference(&g1, &g2, 0.0).unwrap();
        assert_eq!(t.base, x);
        assert_eq!(t.dir, v);
        assert!(strong_difference(&g1, &g1, 0.0).unwrap().is_zero(0.0));

        let bad = g2.clone().with(0b10, pt(&[1, 1]));
        assert_eq!(
            strong_difference(&g1, &bad, 0.0),
            Err(Error::D2Disagreement { subset: vec![2] })
        );
    }

    #[test]
    fn relativized_difference_unfolds() {
        let v = pt(&[1, 4]);
        let w = pt(&[-2, 3]);
        let g1 = Microcube::zero(3, 2)
            .with(subset(&[2, 3]), v.clone())
            .with(subset(&[1, 2, 3]), w.clone());
        let g2 = Microcube::zero(3, 2);
        let d = relative_strong_difference(&g1, &g2, 1, 0.0).unwrap();
        let expected = Microcube::zero(2, 2).with(0b01, v).with(0b11, w);
        assert_eq!(d, expected);

        let same = relative_strong_difference(&g1, &g1, 2, 0.0).unwrap();
        assert!(same.coeff(0b01).iter().all(|x| x.is_zero()));
        assert!(same.coeff(0b11).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn tangent_addition() {
        let x = pt(&[1, 1]);
        let v = pt(&[2, 3]);
        let a = TangentVector::new(x.clone(), v.clone());
        let z = a.add(&a.neg(), 0.0).unwrap();
        assert!(z.is_zero(0.0));
        let id = a.add(&TangentVector::zero_at(x), 0.0).unwrap();
        assert_eq!(id, a);
        let other = TangentVector::new(pt(&[0, 0]), v);
        assert_eq!(a.add(&other, 0.0), Err(Error::BaseMismatch));
    }

    #[test]
    fn general_jacobi_trivial_and_error_paths() {
        let base = Microcube::constant(3, pt(&[5, 6]));
        let cubes = JacobiCubes {
            g123: base.clone(),
            g132: base.clone(),
            g213: base.clone(),
            g231: base.clone(),
            g312: base.clone(),
            g321: base.clone(),
        };
        assert!(cubes.residual(0.0).unwrap().is_zero(0.0));

        let mut broken = cubes.clone();
        broken.g123 = broken.g123.clone().with(subset(&[1, 2]), pt(&[1, 0]));
        match broken.residual(0.0) {
            Err(Error::IllDefined { expression: 1, .. }) => {}
            other => panic!("expected expression 1 to be ill defined, got {other:?}"),
        }
    }
}
