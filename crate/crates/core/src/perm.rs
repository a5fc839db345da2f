//! Permutations of `{1..p}`.
//!
//! Stored 0-based; displayed 1-based. The product follows the convention
//! under which `(γ^σ)^τ = γ^{σ·τ}`, namely `(σ·τ)(i) = τ(σ(i))`.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From the 1-based images `σ(1), …, σ(p)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(images.to_vec()));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn identity(p: usize) -> Self {
        Permutation {
            images: (0..p).collect(),
        }
    }

    /// The transposition of the (0-based) positions `i` and `j`.
    pub fn transposition(p: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..p).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based image of `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Signature by inversion count.
    pub fn sign(&self) -> i64 {
        let inversions = self
            .images
            .iter()
            .tuple_combinations()
            .filter(|(a, b)| a > b)
            .count();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `σ·τ` with `(σ·τ)(i) = τ(σ(i))`.
    pub fn then(&self, tau: &Permutation) -> Result<Self> {
        if self.len() != tau.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                found: tau.len(),
            });
        }
        Ok(Permutation {
            images: self.images.iter().map(|&i| tau.images[i]).collect(),
        })
    }

    /// Image of a subset given as a bit mask.
    pub fn map_mask(&self, mask: u64) -> u64 {
        crate::weil::bits(mask).fold(0, |acc, i| acc | (1u64 << self.images[i]))
    }

    /// All of `S_p`, in lexicographic order of images.
    pub fn all(p: usize) -> Vec<Permutation> {
        (0..p)
            .permutations(p)
            .map(|images| Permutation { images })
            .collect()
    }

    /// Juxtaposition `σ ⊕ τ` acting on `{1..p+q}` block-wise.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let p = self.len();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|i| i + p));
        Permutation { images }
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_one_based(&v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.one_based()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.one_based().iter().join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signatures() {
        assert_eq!(Permutation::identity(4).sign(), 1);
        assert_eq!(Permutation::transposition(3, 0, 2).sign(), -1);
        let cyc = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(cyc.sign(), 1);
    }

    #[test]
    fn product_convention() {
        let s = Permutation::from_one_based(&[2, 1, 3]).unwrap();
        let t = Permutation::from_one_based(&[1, 3, 2]).unwrap();
        // (s·t)(1) = t(s(1)) = t(2) = 3
        assert_eq!(s.then(&t).unwrap().one_based(), vec![3, 1, 2]);
        assert_eq!(s.then(&s.inverse()).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[1, 3]).is_err());
    }

    #[test]
    fn enumerates_group() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().map(|p| p.sign()).sum::<i64>(), 0);
    }
}
