//! Square-free nilpotent polynomial algebras `S[e₁..eₙ]/(eᵢ²)`, optionally
//! tensored with a polynomial ring in a few free indeterminates.
//!
//! Nilpotent generators model elements of `D = {d : d² = 0}`; free
//! indeterminates model formal scalars (the `α` of homogeneity checks, or
//! symbolic base points). Generators are handed out by a
//! [`GeneratorContext`] in stack order: every allocation is scoped, and the
//! values escaping a scope never mention its generators.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Elementary, Scalar};

/// Maximum number of simultaneously live nilpotent generators.
pub const MAX_NILPOTENT: usize = 64;
/// Maximum number of simultaneously live free indeterminates.
pub const MAX_FREE: usize = 8;

const LANE_BITS: u32 = 8;
const LANE_MASK: u64 = 0xff;

/// A generator handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// Nilpotent generator `eᵢ` with `eᵢ² = 0`.
    Nil(u8),
    /// Free polynomial indeterminate.
    Free(u8),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Nil(i) => write!(f, "e{}", *i as u32 + 1),
            Gen::Free(i) => write!(f, "t{}", *i as u32 + 1),
        }
    }
}

/// A monomial: a square-free product of nilpotent generators times a power
/// product of free indeterminates (eight 8-bit exponent lanes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    nil: u64,
    free: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { nil: 0, free: 0 };

    pub fn nilpotent(mask: u64) -> Self {
        Monomial { nil: mask, free: 0 }
    }

    pub fn of_gen(g: Gen) -> Self {
        match g {
            Gen::Nil(i) => Monomial::nilpotent(1u64 << i),
            Gen::Free(i) => Monomial {
                nil: 0,
                free: 1u64 << (LANE_BITS * i as u32),
            },
        }
    }

    pub fn nil_mask(&self) -> u64 {
        self.nil
    }

    pub fn free_exponent(&self, var: u8) -> u32 {
        ((self.free >> (LANE_BITS * var as u32)) & LANE_MASK) as u32
    }

    pub fn is_one(&self) -> bool {
        self.nil == 0 && self.free == 0
    }

    /// Product, or `None` when a nilpotent generator would appear squared.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if self.nil & other.nil != 0 {
            return None;
        }
        let free = if self.free == 0 {
            other.free
        } else if other.free == 0 {
            self.free
        } else {
            let mut out = 0u64;
            for lane in 0..MAX_FREE as u32 {
                let shift = LANE_BITS * lane;
                let e = ((self.free >> shift) & LANE_MASK) + ((other.free >> shift) & LANE_MASK);
                assert!(e <= LANE_MASK, "free indeterminate exponent overflow");
                out |= e << shift;
            }
            out
        };
        Some(Monomial {
            nil: self.nil | other.nil,
            free,
        })
    }

    /// Generators appearing in the monomial, nilpotent ones first.
    pub fn gens(&self) -> Vec<Gen> {
        let mut out: Vec<Gen> = bits(self.nil).map(|i| Gen::Nil(i as u8)).collect();
        for lane in 0..MAX_FREE as u8 {
            for _ in 0..self.free_exponent(lane) {
                out.push(Gen::Free(lane));
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in bits(self.nil) {
            write!(f, "e{}", i + 1)?;
        }
        for lane in 0..MAX_FREE as u8 {
            match self.free_exponent(lane) {
                0 => {}
                1 => write!(f, "t{}", lane + 1)?,
                e => write!(f, "t{}^{}", lane + 1, e)?,
            }
        }
        Ok(())
    }
}

/// Iterate over set bit positions of a mask.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Supplies fresh generators in stack order.
///
/// Allocation is the only stateful step of the calculus; a context is owned
/// by one worker and never shared across threads.
#[derive(Debug, Default)]
pub struct GeneratorContext {
    nil_live: Cell<u8>,
    free_live: Cell<u8>,
}

impl GeneratorContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Currently live generators, in allocation order.
    pub fn generators(&self) -> Vec<Gen> {
        let nil = (0..self.nil_live.get()).map(Gen::Nil);
        let free = (0..self.free_live.get()).map(Gen::Free);
        nil.chain(free).collect()
    }

    pub fn nilpotent_count(&self) -> usize {
        self.nil_live.get() as usize
    }

    pub fn contains(&self, g: Gen) -> bool {
        match g {
            Gen::Nil(i) => i < self.nil_live.get(),
            Gen::Free(i) => i < self.free_live.get(),
        }
    }

    /// Allocate `k` nilpotent generators, released when the guard drops.
    pub fn fresh(&self, k: usize) -> Result<Fresh<'_>> {
        let start = self.nil_live.get() as usize;
        if start + k > MAX_NILPOTENT {
            return Err(Error::GeneratorOverflow(start + k));
        }
        self.nil_live.set((start + k) as u8);
        Ok(Fresh {
            ctx: self,
            start: start as u8,
            count: k as u8,
            free: false,
        })
    }

    /// Allocate `k` free indeterminates, released when the guard drops.
    pub fn fresh_free(&self, k: usize) -> Result<Fresh<'_>> {
        let start = self.free_live.get() as usize;
        if start + k > MAX_FREE {
            return Err(Error::GeneratorOverflow(start + k));
        }
        self.free_live.set((start + k) as u8);
        Ok(Fresh {
            ctx: self,
            start: start as u8,
            count: k as u8,
            free: true,
        })
    }
}

/// Scoped block of fresh generators.
#[derive(Debug)]
pub struct Fresh<'c> {
    ctx: &'c GeneratorContext,
    start: u8,
    count: u8,
    free: bool,
}

impl Fresh<'_> {
    pub fn len(&self) -> usize {
        self.count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn gen(&self, i: usize) -> Gen {
        assert!(i < self.count as usize);
        let idx = self.start + i as u8;
        if self.free {
            Gen::Free(idx)
        } else {
            Gen::Nil(idx)
        }
    }

    pub fn gens(&self) -> Vec<Gen> {
        (0..self.len()).map(|i| self.gen(i)).collect()
    }

    /// Nilpotent mask covering the whole block (zero for free blocks).
    pub fn mask(&self) -> u64 {
        if self.free || self.count == 0 {
            0
        } else {
            (((1u128 << self.count) - 1) as u64) << self.start
        }
    }

    /// Mask of the `i`-th generator of the block.
    pub fn bit(&self, i: usize) -> u64 {
        assert!(!self.free);
        1u64 << (self.start as usize + i)
    }

    pub fn elem<S: Scalar>(&self, i: usize) -> Weil<S> {
        Weil::generator(self.gen(i))
    }

    pub fn elems<S: Scalar>(&self) -> Vec<Weil<S>> {
        (0..self.len()).map(|i| self.elem(i)).collect()
    }
}

impl Drop for Fresh<'_> {
    fn drop(&mut self) {
        let cell = if self.free {
            &self.ctx.free_live
        } else {
            &self.ctx.nil_live
        };
        debug_assert_eq!(
            cell.get(),
            self.start + self.count,
            "generator scopes released out of order"
        );
        cell.set(self.start);
    }
}

/// An element of the Weil algebra, in normal form (no zero coefficients).
#[derive(Clone, PartialEq)]
pub struct Weil<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Weil<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Weil<S> {
    pub fn zero() -> Self {
        Weil {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        let mut w = Self::zero();
        w.add_term(Monomial::ONE, c);
        w
    }

    pub fn generator(g: Gen) -> Self {
        Self::monomial(Monomial::of_gen(g), S::one())
    }

    pub fn monomial(m: Monomial, c: S) -> Self {
        let mut w = Self::zero();
        w.add_term(m, c);
        w
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut w = Self::zero();
        for (m, c) in terms {
            w.add_term(m, c);
        }
        w
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of a product of nilpotent generators, checked against the
    /// context.
    pub fn coeff_of(&self, ctx: &GeneratorContext, subset: &[Gen]) -> Result<S> {
        let mut m = Monomial::ONE;
        for &g in subset {
            if !ctx.contains(g) {
                return Err(Error::UnknownGenerator(match g {
                    Gen::Nil(i) | Gen::Free(i) => i as u32,
                }));
            }
            m = m.mul(&Monomial::of_gen(g)).unwrap_or(m);
        }
        Ok(self.coeff(&m))
    }

    /// Scalar value, if the element has no generator content.
    pub fn as_scalar(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Weil<T> {
        let mut out = Weil::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Constant term.
    pub fn constant_term(&self) -> S {
        self.coeff(&Monomial::ONE)
    }

    /// Union of nilpotent generators present.
    pub fn nil_support(&self) -> u64 {
        self.terms.keys().fold(0, |acc, m| acc | m.nil)
    }

    pub fn has_free(&self) -> bool {
        self.terms.keys().any(|m| m.free != 0)
    }

    /// Part free of nilpotent generators (the augmentation, which may still
    /// involve free indeterminates).
    pub fn body(&self) -> Self {
        Weil {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.nil == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn nilpotent_part(&self) -> Self {
        Weil {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.nil != 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Sets the nilpotent generators in `mask` to zero.
    pub fn kill(&self, mask: u64) -> Self {
        Weil {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.nil & mask == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Splits by the generators in `mask`: the entry for `sub ⊆ mask` is the
    /// coefficient of `∏_{i∈sub} eᵢ`, an element free of `mask`.
    pub fn split(&self, mask: u64) -> BTreeMap<u64, Weil<S>> {
        let mut out: BTreeMap<u64, Weil<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let sub = m.nil & mask;
            let rest = Monomial {
                nil: m.nil & !mask,
                free: m.free,
            };
            out.entry(sub)
                .or_insert_with(Weil::zero)
                .terms
                .insert(rest, c.clone());
        }
        out
    }

    /// Coefficient of `∏_{i∈sub} eᵢ` relative to the generators in `mask`.
    pub fn coeff_over(&self, mask: u64, sub: u64) -> Weil<S> {
        debug_assert_eq!(sub & !mask, 0);
        Weil {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.nil & mask == sub)
                .map(|(m, c)| {
                    (
                        Monomial {
                            nil: m.nil & !mask,
                            free: m.free,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Weil {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.mul_ref(s)))
                .collect(),
        }
    }

    pub fn mul_ref(&self, other: &Weil<S>) -> Weil<S> {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(s) = self.as_scalar() {
            return other.scale(&s);
        }
        if let Some(s) = other.as_scalar() {
            return self.scale(&s);
        }
        let mut out = Weil::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(m) = ma.mul(mb) {
                    out.add_term(m, ca.mul_ref(cb));
                }
            }
        }
        out
    }

    pub fn add_ref(&self, other: &Weil<S>) -> Weil<S> {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn add_assign_ref(&mut self, other: &Weil<S>) {
        for (m, c) in &other.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn sub_ref(&self, other: &Weil<S>) -> Weil<S> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Weil<S> {
        let mut acc = Weil::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Substitutes a value for a free indeterminate.
    pub fn substitute_free(&self, var: u8, value: &Weil<S>) -> Weil<S> {
        let mut out = Weil::zero();
        for (m, c) in &self.terms {
            let e = m.free_exponent(var);
            let rest = Monomial {
                nil: m.nil,
                free: m.free & !(LANE_MASK << (LANE_BITS * var as u32)),
            };
            let term = Weil::monomial(rest, c.clone()).mul_ref(&value.pow(e));
            out.add_assign_ref(&term);
        }
        out
    }

    /// Equality up to `tol` on every coefficient (exact equality for exact
    /// scalars).
    pub fn approx_eq(&self, other: &Weil<S>, tol: f64) -> bool {
        if S::EXACT {
            return self == other;
        }
        self.sub_ref(other).terms.values().all(|c| c.is_negligible(tol))
    }

    /// Largest coefficient magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    /// Lifts a smooth primitive to the (possibly nilpotent-perturbed) argument.
    pub fn lift(&self, f: &Primitive<S>) -> Result<Weil<S>> {
        match f {
            Primitive::Poly(coeffs) => {
                // Horner; exact and equal to the truncated Taylor expansion.
                let mut acc = Weil::zero();
                for c in coeffs.iter().rev() {
                    acc = acc.mul_ref(self);
                    acc.add_term(Monomial::ONE, c.clone());
                }
                Ok(acc)
            }
            Primitive::Elementary(e) => {
                let body = self.body();
                let a0 = body
                    .as_scalar()
                    .ok_or_else(|| Error::NonScalarBase(e.name().to_string()))?;
                let nu = self.nilpotent_part();
                let g = nu.nil_support().count_ones() as usize;
                let mut out = Weil::zero();
                let mut nu_k = Weil::one();
                let mut fact = S::one();
                for k in 0..=g {
                    if k > 0 {
                        nu_k = nu_k.mul_ref(&nu);
                        fact = fact * S::from_i64(k as i64);
                        if nu_k.is_zero() {
                            break;
                        }
                    }
                    let dk = S::elementary_derivative(*e, &a0, k)?;
                    out.add_assign_ref(&nu_k.scale(&(dk / fact.clone())));
                }
                Ok(out)
            }
        }
    }
}

/// A smooth primitive with a known derivative tower.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive<S> {
    /// Univariate polynomial, ascending coefficients.
    Poly(Vec<S>),
    Elementary(Elementary),
}

impl<S: Scalar> Primitive<S> {
    /// Plain evaluation at a scalar.
    pub fn eval_scalar(&self, x: &S) -> Result<S> {
        match self {
            Primitive::Poly(coeffs) => {
                let mut acc = S::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * x.clone() + c.clone();
                }
                Ok(acc)
            }
            Primitive::Elementary(e) => S::elementary_derivative(*e, x, 0),
        }
    }

    /// Composition `self ∘ inner` for polynomial primitives.
    pub fn compose(&self, inner: &Primitive<S>) -> Option<Primitive<S>> {
        let (Primitive::Poly(outer), Primitive::Poly(inner)) = (self, inner) else {
            return None;
        };
        let mut acc: Vec<S> = Vec::new();
        for c in outer.iter().rev() {
            acc = poly_mul(&acc, inner);
            if acc.is_empty() {
                acc.push(S::zero());
            }
            acc[0] = acc[0].clone() + c.clone();
        }
        Some(Primitive::Poly(acc))
    }
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.mul_ref(y);
        }
    }
    out
}

impl<S: Scalar> fmt::Debug for Weil<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Weil<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}·{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Add for Weil<S> {
    type Output = Weil<S>;
    fn add(mut self, rhs: Weil<S>) -> Weil<S> {
        self.add_assign_ref(&rhs);
        self
    }
}

impl<S: Scalar> Sub for Weil<S> {
    type Output = Weil<S>;
    fn sub(self, rhs: Weil<S>) -> Weil<S> {
        self.sub_ref(&rhs)
    }
}

impl<S: Scalar> Mul for Weil<S> {
    type Output = Weil<S>;
    fn mul(self, rhs: Weil<S>) -> Weil<S> {
        self.mul_ref(&rhs)
    }
}

impl<'a, S: Scalar> Mul<&'a Weil<S>> for &'a Weil<S> {
    type Output = Weil<S>;
    fn mul(self, rhs: &'a Weil<S>) -> Weil<S> {
        self.mul_ref(rhs)
    }
}

impl<'a, S: Scalar> Add<&'a Weil<S>> for &'a Weil<S> {
    type Output = Weil<S>;
    fn add(self, rhs: &'a Weil<S>) -> Weil<S> {
        self.add_ref(rhs)
    }
}

impl<'a, S: Scalar> Sub<&'a Weil<S>> for &'a Weil<S> {
    type Output = Weil<S>;
    fn sub(self, rhs: &'a Weil<S>) -> Weil<S> {
        self.sub_ref(rhs)
    }
}

impl<S: Scalar> Neg for Weil<S> {
    type Output = Weil<S>;
    fn neg(self) -> Weil<S> {
        Weil {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

/// Points of `R^m` over the ambient algebra.
pub type Point<S> = Vec<Weil<S>>;

pub fn point_add<S: Scalar>(a: &[Weil<S>], b: &[Weil<S>]) -> Point<S> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn point_sub<S: Scalar>(a: &[Weil<S>], b: &[Weil<S>]) -> Point<S> {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn point_scale<S: Scalar>(a: &[Weil<S>], s: &Weil<S>) -> Point<S> {
    a.iter().map(|x| x.mul_ref(s)).collect()
}

pub fn point_approx_eq<S: Scalar>(a: &[Weil<S>], b: &[Weil<S>], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.approx_eq(y, tol))
}

pub fn point_max_magnitude<S: Scalar>(a: &[Weil<S>]) -> f64 {
    a.iter().map(|x| x.max_magnitude()).fold(0.0, f64::max)
}

pub fn constant_point<S: Scalar>(coords: &[S]) -> Point<S> {
    coords.iter().cloned().map(Weil::constant).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type W = Weil<Rational>;

    fn c(n: i64) -> W {
        W::constant(rat(n, 1))
    }

    #[test]
    fn schoolbook_product_drops_squares() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(2).unwrap();
        let (e1, e2) = (g.elem::<Rational>(0), g.elem::<Rational>(1));
        let a = c(1) + e1.scale(&rat(2, 1)) + e2.scale(&rat(3, 1));
        let b = c(4) + e1.scale(&rat(5, 1));
        let prod = a.mul_ref(&b);
        let expected = c(4)
            + e1.scale(&rat(13, 1))
            + e2.scale(&rat(12, 1))
            + e1.mul_ref(&e2).scale(&rat(15, 1));
        assert_eq!(prod, expected);

        let s = e1.add_ref(&e2);
        assert_eq!(s.mul_ref(&s), e1.mul_ref(&e2).scale(&rat(2, 1)));
        assert!(e1.mul_ref(&e1).is_zero());
    }

    #[test]
    fn coefficient_reads() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(2).unwrap();
        let (e1, e2) = (g.elem::<Rational>(0), g.elem::<Rational>(1));
        let a = c(4) + e1.scale(&rat(13, 1)) + e1.mul_ref(&e2).scale(&rat(15, 1));
        assert_eq!(a.coeff_of(&ctx, &[g.gen(0), g.gen(1)]).unwrap(), rat(15, 1));
        let b = c(4) + e1.scale(&rat(13, 1));
        assert_eq!(b.coeff_of(&ctx, &[g.gen(1)]).unwrap(), rat(0, 1));
        assert_eq!(c(7).coeff_of(&ctx, &[]).unwrap(), rat(7, 1));
        assert!(matches!(
            b.coeff_of(&ctx, &[Gen::Nil(5)]),
            Err(Error::UnknownGenerator(5))
        ));
    }

    #[test]
    fn fresh_generators_are_disjoint_and_deterministic() {
        let ctx = GeneratorContext::new();
        let a = ctx.fresh(2).unwrap();
        assert_eq!(a.gens(), vec![Gen::Nil(0), Gen::Nil(1)]);
        let b = ctx.fresh(1).unwrap();
        assert_eq!(b.gens(), vec![Gen::Nil(2)]);
        assert_eq!(a.mask() & b.mask(), 0);
        drop(b);
        drop(a);
        assert!(ctx.generators().is_empty());
    }

    #[test]
    fn generator_overflow_is_reported() {
        let ctx = GeneratorContext::new();
        let _a = ctx.fresh(60).unwrap();
        assert!(matches!(ctx.fresh(5), Err(Error::GeneratorOverflow(65))));
    }

    #[test]
    fn polynomial_lift_is_binomial() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(1).unwrap();
        let a0 = rat(3, 2);
        let a = W::constant(a0.clone()) + g.elem(0);
        let sq = Primitive::Poly(vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
        let lifted = a.lift(&sq).unwrap();
        let expected = W::constant(a0.clone() * a0.clone()) + g.elem::<Rational>(0).scale(&(a0 * rat(2, 1)));
        assert_eq!(lifted, expected);
    }

    #[test]
    fn exp_lift_float() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(2).unwrap();
        let a: Weil<f64> = g.elem::<f64>(0) + g.elem(1);
        let lifted = a.lift(&Primitive::Elementary(Elementary::Exp)).unwrap();
        let e12 = Monomial::nilpotent(0b11);
        assert!((lifted.constant_term() - 1.0).abs() < 1e-15);
        assert!((lifted.coeff(&Monomial::nilpotent(1)) - 1.0).abs() < 1e-15);
        assert!((lifted.coeff(&Monomial::nilpotent(2)) - 1.0).abs() < 1e-15);
        assert!((lifted.coeff(&e12) - 1.0).abs() < 1e-15);
        assert_eq!(lifted.len(), 4);

        let s = g.elem::<f64>(0).lift(&Primitive::Elementary(Elementary::Sin)).unwrap();
        assert_eq!(s, g.elem::<f64>(0));
    }

    #[test]
    fn exact_mode_refuses_exp() {
        let a = c(1);
        assert!(matches!(
            a.lift(&Primitive::Elementary(Elementary::Exp)),
            Err(Error::NonPolynomialInExactMode(_))
        ));
    }

    #[test]
    fn split_and_free_substitution() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(2).unwrap();
        let t = ctx.fresh_free(1).unwrap();
        let alpha: W = t.elem(0);
        let x = g.elem::<Rational>(0).mul_ref(&alpha) + g.elem::<Rational>(1) + c(2);
        let parts = x.split(g.bit(0));
        assert_eq!(parts[&0], g.elem::<Rational>(1) + c(2));
        assert_eq!(parts[&g.bit(0)], alpha);
        let sub = x.substitute_free(0, &c(3));
        assert_eq!(sub, g.elem::<Rational>(0).scale(&rat(3, 1)) + g.elem(1) + c(2));
    }
}
