//! Tangent-vector-valued semiforms and forms as icons over `D^p`.
//!
//! A kernel `K(x; v₁, …, v_p)`, multilinear in the `vᵢ` with polynomial
//! dependence on the base point, gives the semiform
//! `ω(d)(γ) = γ(0) + d·K(γ(0); ∂₁γ, …, ∂_pγ)`. Brackets of semiforms are
//! generic icons and are compared by evaluation on test microcubes.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::functional::{Domain, Factor, Functional, Kind, TestFn};
use crate::icon::Icon;
use crate::microcube::{Microcube, TangentVector};
use crate::perm::Permutation;
use crate::poly::Polynomial;
use crate::scalar::{factorial, Scalar};
use crate::weil::{point_add, point_approx_eq, point_scale, GeneratorContext, Point, Weil};

/// `K(x; v₁..v_p)_c = Σ_{idx} P_{c,idx}(x)·v₁[idx₁]⋯v_p[idx_p]`.
#[derive(Clone, PartialEq)]
pub struct Kernel<S: Scalar> {
    p: usize,
    m: usize,
    entries: BTreeMap<(usize, Vec<usize>), Polynomial<S>>,
}

impl<S: Scalar> fmt::Debug for Kernel<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Kernel(p={}, m={}) {{", self.p, self.m)?;
        for ((c, idx), poly) in &self.entries {
            write!(f, " [{c}; {idx:?}] = {poly};")?;
        }
        write!(f, " }}")
    }
}

impl<S: Scalar> Kernel<S> {
    pub fn zero(p: usize, m: usize) -> Self {
        Kernel {
            p,
            m,
            entries: BTreeMap::new(),
        }
    }

    /// Sets the coefficient polynomial of output `c` against the input
    /// slots `idx` (all 0-based).
    pub fn set(&mut self, c: usize, idx: Vec<usize>, poly: Polynomial<S>) -> Result<()> {
        if c >= self.m || idx.len() != self.p || idx.iter().any(|&i| i >= self.m) {
            return Err(Error::DimensionMismatch {
                context: format!("kernel entry {c} {idx:?}"),
                expected: self.p,
                found: idx.len(),
            });
        }
        if poly.nvars() != self.m {
            return Err(Error::DimensionMismatch {
                context: format!("kernel entry {c} {idx:?} polynomial"),
                expected: self.m,
                found: poly.nvars(),
            });
        }
        if poly.is_zero() {
            self.entries.remove(&(c, idx));
        } else {
            self.entries.insert((c, idx), poly);
        }
        Ok(())
    }

    pub fn with(mut self, c: usize, idx: Vec<usize>, poly: Polynomial<S>) -> Result<Self> {
        self.set(c, idx, poly)?;
        Ok(self)
    }

    /// The identity kernel `K(x; v) = v` (degree 1).
    pub fn identity(m: usize) -> Self {
        let mut k = Kernel::zero(1, m);
        for c in 0..m {
            k.entries.insert((c, vec![c]), Polynomial::constant(m, S::one()));
        }
        k
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> Kernel<T> {
        Kernel {
            p: self.p,
            m: self.m,
            entries: self
                .entries
                .iter()
                .map(|(k, poly)| (k.clone(), poly.map_scalars(f)))
                .filter(|(_, poly)| !poly.is_zero())
                .collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, Vec<usize>), &Polynomial<S>)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn eval(&self, x: &[Weil<S>], v: &[Point<S>]) -> Point<S> {
        let mut out = vec![Weil::zero(); self.m];
        for ((c, idx), poly) in &self.entries {
            let mut prod = Weil::one();
            for (j, &i) in idx.iter().enumerate() {
                prod = prod.mul_ref(&v[j][i]);
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            let px = poly.eval(x);
            out[*c].add_assign_ref(&px.mul_ref(&prod));
        }
        out
    }

    pub fn add(&self, other: &Kernel<S>) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (key, poly) in &other.entries {
            let sum = match out.entries.get(key) {
                Some(q) => q.add(poly),
                None => poly.clone(),
            };
            out.set(key.0, key.1.clone(), sum)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Kernel::zero(self.p, self.m);
        for ((c, idx), poly) in &self.entries {
            let q = poly.scale(s);
            if !q.is_zero() {
                out.entries.insert((*c, idx.clone()), q);
            }
        }
        out
    }

    fn same_shape(&self, other: &Kernel<S>) -> Result<()> {
        if self.p != other.p || self.m != other.m {
            return Err(Error::DegreeMismatch(format!(
                "kernels of shape ({}, {}) and ({}, {})",
                self.p, self.m, other.p, other.m
            )));
        }
        Ok(())
    }

    /// `K^σ(x; v₁..v_p) = K(x; v_{σ⁻¹(1)}, …, v_{σ⁻¹(p)})`, the kernel of
    /// `ω^σ`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.p {
            return Err(Error::SizeMismatch {
                expected: self.p,
                found: sigma.len(),
            });
        }
        let mut out = Kernel::zero(self.p, self.m);
        for ((c, idx), poly) in &self.entries {
            let new_idx: Vec<usize> = (0..self.p).map(|k| idx[sigma.apply(k)]).collect();
            out.entries.insert((*c, new_idx), poly.clone());
        }
        Ok(out)
    }

    /// `Σ_σ ε_σ K^σ`.
    pub fn antisymmetrize(&self) -> Self {
        let mut acc = Kernel::zero(self.p, self.m);
        for sigma in Permutation::all(self.p) {
            let term = self.permute(&sigma).expect("sized").scale(&S::from_i64(sigma.sign()));
            acc = acc.add(&term).expect("same shape");
        }
        acc
    }

    /// First permutation witnessing `K^σ ≠ ε_σ K`, if any.
    pub fn alternating_witness(&self) -> Option<Permutation> {
        Permutation::all(self.p).into_iter().find(|sigma| {
            let lhs = self.permute(sigma).expect("sized");
            lhs != self.scale(&S::from_i64(sigma.sign()))
        })
    }

    pub fn is_alternating(&self) -> bool {
        self.alternating_witness().is_none()
    }
}

/// A `[D → M]`-valued `p`-semiform: a 1-icon over `D^p`.
#[derive(Clone)]
pub struct Semiform<S: Scalar> {
    p: usize,
    icon: Icon<S>,
    kernel: Option<Kernel<S>>,
    alternating: bool,
}

impl<S: Scalar> fmt::Debug for Semiform<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Semiform(p={}, {}{})",
            self.p,
            self.icon.label(),
            if self.alternating { ", form" } else { "" }
        )
    }
}

/// Normalizations of the antisymmetrizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    /// `A`
    Plain,
    /// `A_{p,q}` or `A_{p,q,r}`: divide by the product of factorials.
    Split(Vec<usize>),
}

impl<S: Scalar> Semiform<S> {
    /// `ω(d)(γ) = γ(0) + d·K(γ(0); ∂₁γ, …, ∂_pγ)`.
    pub fn from_kernel(kernel: Kernel<S>) -> Self {
        let (p, m) = (kernel.p, kernel.m);
        let alternating = kernel.is_alternating();
        let k = kernel.clone();
        let icon = Icon::new(1, Domain::infinitesimal(p), m, "kernel", move |d| {
            let (k, d) = (k.clone(), d[0].clone());
            Ok(Functional::custom(Domain::infinitesimal(p), m, Kind::KernelForm, move |ctx, h| {
                let g = ctx.fresh(p)?;
                let value = h(&g.elems())?;
                let mask = g.mask();
                let x: Point<S> = value.iter().map(|c| c.coeff_over(mask, 0)).collect();
                if d.is_zero() {
                    return Ok(x);
                }
                let v: Vec<Point<S>> = (0..p)
                    .map(|i| value.iter().map(|c| c.coeff_over(mask, g.bit(i))).collect())
                    .collect();
                Ok(point_add(&x, &point_scale(&k.eval(&x, &v), &d)))
            }))
        });
        Semiform {
            p,
            icon,
            kernel: Some(kernel),
            alternating,
        }
    }

    /// Wraps a generic 1-icon over `D^p`.
    pub fn from_icon(icon: Icon<S>, alternating: bool) -> Result<Self> {
        let p = icon.domain().dim();
        let infinitesimal = icon
            .domain()
            .factors()
            .iter()
            .all(|f| matches!(f, Factor::Infinitesimal(_)));
        if icon.arity() != 1 || !infinitesimal {
            return Err(Error::NotTensorial(format!(
                "icon over {} is not a semiform",
                icon.domain()
            )));
        }
        Ok(Semiform {
            p,
            icon: icon.with_domain(Domain::infinitesimal(p))?,
            kernel: None,
            alternating,
        })
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.icon.target()
    }

    pub fn icon(&self) -> &Icon<S> {
        &self.icon
    }

    pub fn kernel(&self) -> Option<&Kernel<S>> {
        self.kernel.as_ref()
    }

    pub fn is_declared_form(&self) -> bool {
        self.alternating
    }

    /// The tangent vector `ω(·)(γ)` for a test microcube `γ` on `D^p`.
    pub fn tangent(&self, ctx: &GeneratorContext, gamma: &Microcube<S>) -> Result<TangentVector<S>> {
        self.check_cube(gamma)?;
        self.icon.tangent(ctx, &|x: &[Weil<S>]| gamma.eval(x))
    }

    /// Reads off the kernel of a form: its value on the cube based at a
    /// point of free indeterminates with edges `e_{j₁}, …, e_{j_p}`. Forms
    /// depend only on first-order data of the cube, so the read-off kernel
    /// reproduces the form. `ctx` must have no live free indeterminates.
    pub fn read_kernel(&self, ctx: &GeneratorContext) -> Result<Kernel<S>> {
        let (p, m) = (self.p, self.dim());
        if ctx.generators().iter().any(|g| matches!(g, crate::weil::Gen::Free(_))) {
            return Err(Error::Config("free indeterminates already in use".into()));
        }
        let x = ctx.fresh_free(m)?;
        let base: Point<S> = x.elems();
        let mut k = Kernel::zero(p, m);
        for idx in crate::sample::tuples(p, m) {
            let mut gamma = Microcube::zero(p, m).with(0, base.clone());
            for (i, &j) in idx.iter().enumerate() {
                let mut e = vec![Weil::zero(); m];
                e[j] = Weil::one();
                gamma.set(1 << i, e);
            }
            let t = self.tangent(ctx, &gamma)?;
            for (c, w) in t.dir.iter().enumerate() {
                let poly = Polynomial::from_weil(w, m)?;
                if !poly.is_zero() {
                    k.set(c, idx.clone(), poly)?;
                }
            }
        }
        Ok(k)
    }

    fn check_cube(&self, gamma: &Microcube<S>) -> Result<()> {
        if gamma.arity() != self.p || gamma.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "test microcube".into(),
                expected: self.p,
                found: gamma.arity(),
            });
        }
        Ok(())
    }

    /// `ω^σ(d) = ω(d)^σ`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        Ok(Semiform {
            p: self.p,
            icon: self.icon.permute(sigma)?,
            kernel: self.kernel.as_ref().map(|k| k.permute(sigma)).transpose()?,
            alternating: self.alternating,
        })
    }

    /// Sum in the tangent space at `δ₀`.
    pub fn add(&self, other: &Semiform<S>, tol: f64) -> Result<Self> {
        if self.p != other.p || self.dim() != other.dim() {
            return Err(Error::DegreeMismatch(format!(
                "adding semiforms of degrees {} and {}",
                self.p, other.p
            )));
        }
        let icon = Icon::tangent_combination(
            vec![(S::one(), self.icon.clone()), (S::one(), other.icon.clone())],
            tol,
        )?;
        let kernel = match (&self.kernel, &other.kernel) {
            (Some(a), Some(b)) => Some(a.add(b)?),
            _ => None,
        };
        Ok(Semiform {
            p: self.p,
            icon,
            kernel,
            alternating: self.alternating && other.alternating,
        })
    }

    /// `Aω = Σ_σ ε_σ ω^σ`, optionally divided by a product of factorials.
    pub fn antisymmetrize(&self, normalization: &Normalization, tol: f64) -> Result<Self> {
        let scale = match normalization {
            Normalization::Plain => S::one(),
            Normalization::Split(parts) => {
                if parts.iter().sum::<usize>() != self.p {
                    return Err(Error::DegreeMismatch(format!(
                        "split {parts:?} of degree {}",
                        self.p
                    )));
                }
                let denom: u64 = parts.iter().map(|&k| factorial(k)).product();
                S::one() / S::from_i64(denom as i64)
            }
        };
        let terms = Permutation::all(self.p)
            .into_iter()
            .map(|sigma| {
                let c = S::from_i64(sigma.sign()) * &scale;
                Ok((c, self.icon.permute(&sigma)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let icon = Icon::tangent_combination(terms, tol)?.relabel(format!("A({})", self.icon.label()));
        let kernel = self.kernel.as_ref().map(|k| k.antisymmetrize().scale(&scale));
        Ok(Semiform {
            p: self.p,
            icon,
            kernel,
            alternating: true,
        })
    }

    /// `⌊ω₁, ω₂⌋`, a `(p+q)`-semiform.
    pub fn bracket(&self, other: &Semiform<S>, tol: f64) -> Result<Self> {
        Semiform::from_icon(self.icon.lie_bracket(&other.icon, tol)?, false)
    }

    /// Frölicher-Nijenhuis bracket `⌈ω₁, ω₂⌉ = A_{p,q}⌊ω₁, ω₂⌋`.
    pub fn fn_bracket(&self, other: &Semiform<S>, tol: f64) -> Result<Self> {
        for w in [self, other] {
            if !w.alternating {
                return Err(Error::NotAForm(vec![w.p]));
            }
        }
        self.bracket(other, tol)?
            .antisymmetrize(&Normalization::Split(vec![self.p, other.p]), tol)
    }

    /// Scales the direction by `c`.
    pub fn scale(&self, c: S, tol: f64) -> Result<Self> {
        Ok(Semiform {
            p: self.p,
            icon: Icon::tangent_combination(vec![(c.clone(), self.icon.clone())], tol)?,
            kernel: self.kernel.as_ref().map(|k| k.scale(&c)),
            alternating: self.alternating,
        })
    }

    /// Checks `α ·ᵢ ω(d) = ω(αd)` on `γ` for a formal `α`.
    pub fn homogeneity_holds(&self, ctx: &GeneratorContext, gamma: &Microcube<S>, i: usize, tol: f64) -> Result<bool> {
        self.check_cube(gamma)?;
        let alpha = ctx.fresh_free(1)?;
        let a: Weil<S> = alpha.elem(0);
        let scaled = gamma.scale(&a, i)?;
        let lhs = self.icon.tangent(ctx, &|x: &[Weil<S>]| scaled.eval(x))?;
        let a2 = a.clone();
        let rhs = self
            .icon
            .reparametrize(move |d| vec![d[0].mul_ref(&a2)])
            .tangent(ctx, &|x: &[Weil<S>]| gamma.eval(x))?;
        Ok(lhs.approx_eq(&rhs, tol))
    }

    /// Checks the semiform and form conditions on the given test cubes.
    pub fn predicates(&self, ctx: &GeneratorContext, cubes: &[Microcube<S>], tol: f64) -> Result<Predicates> {
        let mut out = Predicates {
            is_semiform: true,
            is_form: true,
            witness: None,
        };
        for (n, gamma) in cubes.iter().enumerate() {
            let h = |x: &[Weil<S>]| gamma.eval(x);
            if !self.icon.starts_at_base(ctx, &h, tol)? {
                out.is_semiform = false;
                out.is_form = false;
                out.witness = Some(Witness::Base { cube: n });
                return Ok(out);
            }
            for i in 1..=self.p {
                if !self.homogeneity_holds(ctx, gamma, i, tol)? {
                    out.is_semiform = false;
                    out.is_form = false;
                    out.witness = Some(Witness::Homogeneity { cube: n, slot: i });
                    return Ok(out);
                }
            }
        }
        for (n, gamma) in cubes.iter().enumerate() {
            let h = |x: &[Weil<S>]| gamma.eval(x);
            let t = self.icon.tangent(ctx, &h)?;
            for sigma in Permutation::all(self.p) {
                let ts = self.icon.permute(&sigma)?.tangent(ctx, &h)?;
                let sign = Weil::constant(S::from_i64(sigma.sign()));
                if !point_approx_eq(&ts.dir, &point_scale(&t.dir, &sign), tol) {
                    out.is_form = false;
                    out.witness = Some(Witness::Alternation {
                        cube: n,
                        permutation: sigma,
                    });
                    return Ok(out);
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predicates {
    pub is_semiform: bool,
    pub is_form: bool,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Base { cube: usize },
    Homogeneity { cube: usize, slot: usize },
    Alternation { cube: usize, permutation: Permutation },
}

/// Block rotation exchanging a p-block and a q-block: one-line `[q+1, …, q+p, 1, …, q]`.
pub fn rho(p: usize, q: usize) -> Permutation {
    let images: Vec<usize> = (q..q + p).chain(0..q).collect();
    Permutation::new(images).expect("block rotation")
}

/// `ρ₁`: one-line `[p+1, …, p+q+r, 1, …, p]`.
pub fn rho1(p: usize, q: usize, r: usize) -> Permutation {
    let images: Vec<usize> = (p..p + q + r).chain(0..p).collect();
    Permutation::new(images).expect("block rotation")
}

/// `ρ₂`: one-line `[p+q+1, …, p+q+r, 1, …, p+q]`.
pub fn rho2(p: usize, q: usize, r: usize) -> Permutation {
    let images: Vec<usize> = (p + q..p + q + r).chain(0..p + q).collect();
    Permutation::new(images).expect("block rotation")
}

/// `⌊ω₁,ω₂⌋ + ⌊ω₂,ω₁⌋^ρ` on `γ`.
pub fn bracket_antisymmetry_residual<S: Scalar>(
    ctx: &GeneratorContext,
    w1: &Semiform<S>,
    w2: &Semiform<S>,
    gamma: &Microcube<S>,
    tol: f64,
) -> Result<TangentVector<S>> {
    let b12 = w1.bracket(w2, tol)?;
    let b21 = w2.bracket(w1, tol)?.permute(&rho(w1.p, w2.p))?;
    b12.tangent(ctx, gamma)?.add(&b21.tangent(ctx, gamma)?, tol)
}

/// The three summands of the semiform Jacobi identity, the last two acted
/// on by the rotations that align their slots with `(p, q, r)`.
pub fn bracket_jacobi_terms<S: Scalar>(
    w1: &Semiform<S>,
    w2: &Semiform<S>,
    w3: &Semiform<S>,
    tol: f64,
) -> Result<[Semiform<S>; 3]> {
    let (p, q, r) = (w1.p, w2.p, w3.p);
    let t1 = w1.bracket(&w2.bracket(w3, tol)?, tol)?;
    let t2 = w2.bracket(&w3.bracket(w1, tol)?, tol)?.permute(&rho1(p, q, r).inverse())?;
    let t3 = w3.bracket(&w1.bracket(w2, tol)?, tol)?.permute(&rho2(p, q, r).inverse())?;
    Ok([t1, t2, t3])
}

/// Sum of tangent vectors of several semiforms on `γ`, each with a sign.
pub fn signed_sum<S: Scalar>(
    ctx: &GeneratorContext,
    terms: &[(i64, &Semiform<S>)],
    gamma: &Microcube<S>,
    tol: f64,
) -> Result<TangentVector<S>> {
    let mut acc: Option<TangentVector<S>> = None;
    for (sign, w) in terms {
        let t = w.tangent(ctx, gamma)?;
        let t = TangentVector::new(t.base, point_scale(&t.dir, &Weil::constant(S::from_i64(*sign))));
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t, tol)?,
        });
    }
    acc.ok_or_else(|| Error::Closure("empty sum".into()))
}

/// `⌈ω₁,ω₂⌉ + (−1)^{pq}⌈ω₂,ω₁⌉` on `γ`.
pub fn fn_antisymmetry_residual<S: Scalar>(
    ctx: &GeneratorContext,
    w1: &Semiform<S>,
    w2: &Semiform<S>,
    gamma: &Microcube<S>,
    tol: f64,
) -> Result<TangentVector<S>> {
    let sign = if (w1.p * w2.p).is_multiple_of(2) { 1 } else { -1 };
    let a = w1.fn_bracket(w2, tol)?;
    let b = w2.fn_bracket(w1, tol)?;
    signed_sum(ctx, &[(1, &a), (sign, &b)], gamma, tol)
}

/// Both sides of `A_{p,q+r}⌊ω₁, A_{q,r}⌊ω₂,ω₃⌋⌋ = A_{p,q,r}⌊ω₁,⌊ω₂,ω₃⌋⌋`.
pub fn nested_antisymmetrizer_sides<S: Scalar>(
    w1: &Semiform<S>,
    w2: &Semiform<S>,
    w3: &Semiform<S>,
    tol: f64,
) -> Result<(Semiform<S>, Semiform<S>)> {
    let (p, q, r) = (w1.p, w2.p, w3.p);
    let inner = w2.bracket(w3, tol)?.antisymmetrize(&Normalization::Split(vec![q, r]), tol)?;
    let lhs = w1.bracket(&inner, tol)?.antisymmetrize(&Normalization::Split(vec![p, q + r]), tol)?;
    let rhs = w1
        .bracket(&w2.bracket(w3, tol)?, tol)?
        .antisymmetrize(&Normalization::Split(vec![p, q, r]), tol)?;
    Ok((lhs, rhs))
}

/// The three graded Jacobi summands with their signs.
pub fn fn_jacobi_terms<S: Scalar>(
    w1: &Semiform<S>,
    w2: &Semiform<S>,
    w3: &Semiform<S>,
    tol: f64,
) -> Result<[(i64, Semiform<S>); 3]> {
    let (p, q, r) = (w1.p, w2.p, w3.p);
    let s1 = if (p * (q + r)) % 2 == 0 { 1 } else { -1 };
    let s2 = if (r * (p + q)) % 2 == 0 { 1 } else { -1 };
    Ok([
        (1, w1.fn_bracket(&w2.fn_bracket(w3, tol)?, tol)?),
        (s1, w2.fn_bracket(&w3.fn_bracket(w1, tol)?, tol)?),
        (s2, w3.fn_bracket(&w1.fn_bracket(w2, tol)?, tol)?),
    ])
}

/// Whether `(ω₁ ⊛ ω₂)` and `(ω₁ ⊛̃ ω₂)` turn `α·ᵢ` into scaling of the
/// first (`i ≤ p`) or second (`i > p`) variable, on `γ` with formal `α`.
pub fn scaling_law_holds<S: Scalar>(
    ctx: &GeneratorContext,
    w1: &Semiform<S>,
    w2: &Semiform<S>,
    gamma: &Microcube<S>,
    tol: f64,
) -> Result<bool> {
    use crate::functional::Orientation;
    let n = w1.p + w2.p;
    for orientation in [Orientation::Plain, Orientation::Tilde] {
        let composed = w1.icon.compose(&w2.icon, orientation)?;
        for i in 1..=n {
            let alpha = ctx.fresh_free(1)?;
            let a: Weil<S> = alpha.elem(0);
            let scaled = gamma.scale(&a, i)?;
            let lhs = composed.cube(ctx, &|x: &[Weil<S>]| scaled.eval(x))?;
            let slot = if i <= w1.p { 0 } else { 1 };
            let a2 = a.clone();
            let rhs = composed
                .reparametrize(move |d| {
                    let mut d = d.to_vec();
                    d[slot] = d[slot].mul_ref(&a2);
                    d
                })
                .cube(ctx, &|x: &[Weil<S>]| gamma.eval(x))?;
            if !lhs.approx_eq(&rhs, tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Evaluates a semiform on `γ` through an arbitrary test function.
pub fn tangent_on<S: Scalar>(
    ctx: &GeneratorContext,
    w: &Semiform<S>,
    h: &TestFn<'_, S>,
) -> Result<TangentVector<S>> {
    w.icon.tangent(ctx, h)
}

/// All subsets of `{0..p}` of size `k`, as sorted index lists.
pub fn slot_subsets(p: usize, k: usize) -> Vec<Vec<usize>> {
    (0..p).combinations(k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microcube::subset;
    use crate::scalar::{rat, Rational};

    type R = Rational;

    fn c(n: i64) -> Weil<R> {
        Weil::constant(rat(n, 1))
    }

    fn poly_const(m: usize, n: i64) -> Polynomial<R> {
        Polynomial::constant(m, rat(n, 1))
    }

    #[test]
    fn scalar_kernel_doubles_velocity() {
        let ctx = GeneratorContext::new();
        let k = Kernel::zero(1, 1).with(0, vec![0], poly_const(1, 2)).unwrap();
        let w = Semiform::from_kernel(k);
        let gamma = Microcube::zero(1, 1).with(0, vec![c(3)]).with(1, vec![c(5)]);
        let t = w.tangent(&ctx, &gamma).unwrap();
        assert_eq!(t.base, vec![c(3)]);
        assert_eq!(t.dir, vec![c(10)]);
    }

    #[test]
    fn transposed_kernel_swaps_slots() {
        // K(x; v, w) = v₁·w  on R²
        let mut k = Kernel::zero(2, 2);
        k.set(0, vec![0, 0], poly_const(2, 1)).unwrap();
        k.set(1, vec![0, 1], poly_const(2, 1)).unwrap();
        let swapped = k.permute(&Permutation::transposition(2, 0, 1)).unwrap();
        let mut expected = Kernel::zero(2, 2);
        expected.set(0, vec![0, 0], poly_const(2, 1)).unwrap();
        expected.set(1, vec![1, 0], poly_const(2, 1)).unwrap();
        assert_eq!(swapped, expected);

        // A K = K − K^{(12)}: (v,w) ↦ v₁w − w₁v
        let a = k.antisymmetrize();
        let mut want = Kernel::zero(2, 2);
        want.set(1, vec![0, 1], poly_const(2, 1)).unwrap();
        want.set(1, vec![1, 0], poly_const(2, -1)).unwrap();
        assert_eq!(a, want);
        assert!(a.is_alternating());
        assert_eq!(a.antisymmetrize(), a.scale(&rat(2, 1)));
        assert!(k.alternating_witness().is_some());
    }

    #[test]
    fn icon_permutation_matches_kernel_permutation() {
        let ctx = GeneratorContext::new();
        let mut k = Kernel::zero(2, 2);
        k.set(0, vec![0, 1], Polynomial::var(2, 0)).unwrap();
        k.set(1, vec![1, 1], poly_const(2, 3)).unwrap();
        let w = Semiform::from_kernel(k.clone());
        let sigma = Permutation::transposition(2, 0, 1);
        let via_icon = w.permute(&sigma).unwrap();
        let via_kernel = Semiform::from_kernel(k.permute(&sigma).unwrap());
        let gamma = Microcube::zero(2, 2)
            .with(0, vec![c(1), c(2)])
            .with(subset(&[1]), vec![c(3), c(-1)])
            .with(subset(&[2]), vec![c(4), c(7)])
            .with(subset(&[1, 2]), vec![c(5), c(5)]);
        assert_eq!(
            via_icon.tangent(&ctx, &gamma).unwrap(),
            via_kernel.tangent(&ctx, &gamma).unwrap()
        );
    }

    #[test]
    fn kernel_semiforms_satisfy_predicates() {
        let ctx = GeneratorContext::new();
        let mut k = Kernel::zero(2, 2);
        k.set(0, vec![0, 1], Polynomial::var(2, 1)).unwrap();
        let w = Semiform::from_kernel(k.clone());
        let gamma = Microcube::zero(2, 2)
            .with(0, vec![c(1), c(2)])
            .with(subset(&[1]), vec![c(3), c(-1)])
            .with(subset(&[2]), vec![c(4), c(7)]);
        let pred = w.predicates(&ctx, std::slice::from_ref(&gamma), 0.0).unwrap();
        assert!(pred.is_semiform);
        assert!(!pred.is_form);
        assert!(matches!(pred.witness, Some(Witness::Alternation { .. })));

        let form = Semiform::from_kernel(k.antisymmetrize());
        let pred = form.predicates(&ctx, &[gamma], 0.0).unwrap();
        assert!(pred.is_form, "{pred:?}");
    }

    #[test]
    fn rotations_and_signs() {
        assert_eq!(rho(1, 1).one_based(), vec![2, 1]);
        assert_eq!(rho(1, 1).sign(), -1);
        assert_eq!(rho(2, 2).sign(), 1);
        assert_eq!(rho(1, 2).one_based(), vec![3, 1, 2]);
        assert_eq!(rho1(1, 1, 1).sign(), 1);
        assert_eq!(rho1(1, 1, 1).one_based(), vec![2, 3, 1]);
        for (p, q, r) in [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 1, 2)] {
            let s1 = if (p * (q + r)) % 2 == 0 { 1 } else { -1 };
            let s2 = if (r * (p + q)) % 2 == 0 { 1 } else { -1 };
            assert_eq!(rho1(p, q, r).sign(), s1);
            assert_eq!(rho2(p, q, r).sign(), s2);
        }
    }
}
