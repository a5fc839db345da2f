//! Multivariate polynomials and polynomial test maps `R^k → R^m`, evaluable
//! at points whose coordinates live in any Weil algebra.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Elementary, Scalar};
use crate::weil::{Monomial, Point, Primitive, Weil, MAX_FREE};

/// Sparse polynomial in `nvars` variables, kept sorted by exponent vector
/// with no zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, S::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (S, Vec<u32>)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::SizeMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial<S>) -> Polynomial<S> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial<S>) -> Polynomial<S> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, s: &S) -> Polynomial<S> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul_ref(s));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial<S>) -> Polynomial<S> {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.mul_ref(cb));
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial<S> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c.clone() * S::from_i64(e[i] as i64));
            }
        }
        out
    }

    pub fn eval_scalar(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul_ref(xi);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Evaluation at a point of the ambient algebra.
    pub fn eval(&self, x: &[Weil<S>]) -> Weil<S> {
        let powers = PowerTable::new(x, self.max_exponents());
        self.eval_with(&powers)
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (mi, &k) in m.iter_mut().zip(e) {
                *mi = (*mi).max(k);
            }
        }
        m
    }

    fn eval_with(&self, powers: &PowerTable<S>) -> Weil<S> {
        let mut acc = Weil::zero();
        for (e, c) in &self.terms {
            let mut t = Weil::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul_ref(powers.get(i, k));
                    if t.is_zero() {
                        break;
                    }
                }
            }
            acc.add_assign_ref(&t);
        }
        acc
    }

    /// Reads a polynomial back from an element whose only generators are
    /// the first `nvars` free indeterminates.
    pub fn from_weil(w: &Weil<S>, nvars: usize) -> Result<Polynomial<S>> {
        assert!(nvars <= MAX_FREE);
        let mut out = Self::zero(nvars);
        for (m, c) in w.terms() {
            if m.nil_mask() != 0 {
                return Err(Error::Closure(
                    "element still depends on nilpotent generators".into(),
                ));
            }
            let e: Vec<u32> = (0..nvars as u8).map(|v| m.free_exponent(v)).collect();
            let rebuilt = (0..nvars as u8).fold(Monomial::ONE, |acc, v| {
                (0..m.free_exponent(v)).fold(acc, |a, _| {
                    a.mul(&Monomial::of_gen(crate::weil::Gen::Free(v))).unwrap()
                })
            });
            if rebuilt != *m {
                return Err(Error::Closure(
                    "element depends on extra free indeterminates".into(),
                ));
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Map coefficients into another scalar field.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        let mut out = Polynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

struct PowerTable<S> {
    table: Vec<Vec<Weil<S>>>,
}

impl<S: Scalar> PowerTable<S> {
    fn new(x: &[Weil<S>], max: Vec<u32>) -> Self {
        let table = x
            .iter()
            .zip(max)
            .map(|(xi, k)| {
                let mut row = Vec::with_capacity(k as usize);
                let mut acc = xi.clone();
                for j in 0..k {
                    if j > 0 {
                        acc = acc.mul_ref(xi);
                    }
                    row.push(acc.clone());
                }
                row
            })
            .collect();
        PowerTable { table }
    }

    fn get(&self, i: usize, k: u32) -> &Weil<S> {
        &self.table[i][k as usize - 1]
    }
}

impl<S: Scalar> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("·"))?;
            } else {
                write!(f, "{c}·{}", vars.join("·"))?;
            }
        }
        Ok(())
    }
}

/// One component of a test map: a polynomial, optionally composed with an
/// elementary function (float mode only).
#[derive(Debug, Clone, PartialEq)]
pub enum Component<S: Scalar> {
    Poly(Polynomial<S>),
    Apply(Elementary, Polynomial<S>),
}

impl<S: Scalar> Component<S> {
    pub fn polynomial(&self) -> &Polynomial<S> {
        match self {
            Component::Poly(p) | Component::Apply(_, p) => p,
        }
    }
}

/// A polynomial map `R^k → R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestMap<S: Scalar> {
    nvars: usize,
    components: Vec<Component<S>>,
}

impl<S: Scalar> TestMap<S> {
    pub fn new(nvars: usize, components: Vec<Component<S>>) -> Result<Self> {
        for (i, c) in components.iter().enumerate() {
            if c.polynomial().nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    context: format!("test map component {i}"),
                    expected: nvars,
                    found: c.polynomial().nvars(),
                });
            }
        }
        Ok(TestMap { nvars, components })
    }

    pub fn polynomial(polys: Vec<Polynomial<S>>) -> Result<Self> {
        let nvars = polys.first().map(|p| p.nvars()).unwrap_or(0);
        Self::new(nvars, polys.into_iter().map(Component::Poly).collect())
    }

    /// The identity map on `R^m`.
    pub fn identity(m: usize) -> Self {
        TestMap {
            nvars: m,
            components: (0..m).map(|i| Component::Poly(Polynomial::var(m, i))).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn target(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component<S>] {
        &self.components
    }

    pub fn polynomials(&self) -> Option<Vec<&Polynomial<S>>> {
        self.components
            .iter()
            .map(|c| match c {
                Component::Poly(p) => Some(p),
                Component::Apply(..) => None,
            })
            .collect()
    }

    pub fn eval(&self, x: &[Weil<S>]) -> Result<Point<S>> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                context: "test map argument".into(),
                expected: self.nvars,
                found: x.len(),
            });
        }
        let mut max = vec![0u32; self.nvars];
        for c in &self.components {
            for (mi, k) in max.iter_mut().zip(c.polynomial().max_exponents()) {
                *mi = (*mi).max(k);
            }
        }
        let powers = PowerTable::new(x, max);
        self.components
            .iter()
            .map(|c| match c {
                Component::Poly(p) => Ok(p.eval_with(&powers)),
                Component::Apply(e, p) => p.eval_with(&powers).lift(&Primitive::Elementary(*e)),
            })
            .collect()
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> TestMap<T> {
        TestMap {
            nvars: self.nvars,
            components: self
                .components
                .iter()
                .map(|c| match c {
                    Component::Poly(p) => Component::Poly(p.map_scalars(f)),
                    Component::Apply(e, p) => Component::Apply(*e, p.map_scalars(f)),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::weil::GeneratorContext;

    #[test]
    fn derivative_and_eval() {
        // p = 3 x1^2 x2 + 1
        let p = Polynomial::from_terms(2, vec![(rat(3, 1), vec![2, 1]), (rat(1, 1), vec![0, 0])]).unwrap();
        let d = p.derivative(0);
        assert_eq!(d.eval_scalar(&[rat(2, 1), rat(5, 1)]), rat(60, 1));
        assert_eq!(p.eval_scalar(&[rat(1, 2), rat(2, 1)]), rat(5, 2));
    }

    #[test]
    fn nilpotent_evaluation_yields_derivatives() {
        let p = Polynomial::from_terms(1, vec![(rat(1, 1), vec![3])]).unwrap();
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(1).unwrap();
        let x = Weil::constant(rat(2, 1)) + g.elem(0);
        let v = p.eval(&[x]);
        assert_eq!(v.constant_term(), rat(8, 1));
        assert_eq!(v.coeff(&Monomial::nilpotent(g.bit(0))), rat(12, 1));
    }

    #[test]
    fn exponent_length_checked() {
        let r: Result<Polynomial<Rational>> = Polynomial::from_terms(2, vec![(rat(1, 1), vec![1])]);
        assert!(r.is_err());
    }
}
