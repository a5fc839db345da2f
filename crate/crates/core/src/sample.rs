//! Seeded random instances for the verification suites.
//!
//! All sampling goes through [`Sampler`], a ChaCha stream keyed by a `u64`,
//! so every instance is reproducible from `(seed, trial)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::{CompactDistribution, DiracFlow};
use crate::doc::{FunctionalSpec, IconSpec};
use crate::forms::Kernel;
use crate::functional::{DerivTerm, Domain, Factor, Functional};
use crate::icon::Icon;
use crate::microcube::{JacobiCubes, Microcube};
use crate::poly::{Polynomial, TestMap};
use crate::scalar::{Rational, Scalar};
use crate::weil::{Point, Weil};

pub struct Sampler {
    rng: ChaCha8Rng,
}

/// Stream seed for trial `trial` of a run seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ trial.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(trial_seed(seed, trial))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// A small rational `n/d`, `|n| ≤ 5`, `1 ≤ d ≤ 3`.
    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-5i64..=5);
        let d = self.rng.gen_range(1i64..=3);
        Rational::new(n, d)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != Rational::from_integer(0) {
                return r;
            }
        }
    }

    pub fn scalar<S: Scalar>(&mut self) -> S {
        S::from_rational(&self.rational())
    }

    pub fn scalars<S: Scalar>(&mut self, n: usize) -> Vec<S> {
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn rationals(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    pub fn point<S: Scalar>(&mut self, n: usize) -> Point<S> {
        (0..n).map(|_| Weil::constant(self.scalar())).collect()
    }

    /// Random polynomial in `nvars` variables, total degree `≤ degree`,
    /// with at most `terms` monomials.
    pub fn polynomial<S: Scalar>(&mut self, nvars: usize, degree: u32, terms: usize) -> Polynomial<S> {
        let mut acc = Polynomial::zero(nvars);
        for _ in 0..terms {
            let total = self.rng.gen_range(0..=degree);
            let mut e = vec![0u32; nvars];
            if nvars > 0 {
                for _ in 0..total {
                    e[self.below(nvars)] += 1;
                }
            }
            let c: S = self.scalar();
            let mono = Polynomial::from_terms(nvars, vec![(c, e)]).expect("sized");
            acc = acc.add(&mono);
        }
        acc
    }

    pub fn test_map<S: Scalar>(&mut self, nvars: usize, target: usize, degree: u32) -> TestMap<S> {
        let polys = (0..target).map(|_| self.polynomial(nvars, degree, 4)).collect();
        TestMap::new(
            nvars,
            Vec::into_iter(polys).map(crate::poly::Component::Poly).collect(),
        )
        .expect("sized")
    }

    pub fn vector_field<S: Scalar>(&mut self, m: usize, degree: u32) -> TestMap<S> {
        self.test_map(m, m, degree)
    }

    /// Random kernel of degree `p` on `R^m`; coefficient polynomials of
    /// degree `≤ degree`.
    pub fn kernel<S: Scalar>(&mut self, p: usize, m: usize, degree: u32) -> Kernel<S> {
        let mut k = Kernel::zero(p, m);
        for c in 0..m {
            for idx in tuples(p, m) {
                if self.rng.gen_bool(0.6) {
                    let poly = self.polynomial(m, degree, 2);
                    k.set(c, idx, poly).expect("sized");
                }
            }
        }
        k
    }

    /// Random alternating kernel: the antisymmetrization of a random one.
    pub fn alternating_kernel<S: Scalar>(&mut self, p: usize, m: usize, degree: u32) -> Kernel<S> {
        loop {
            let k = self.kernel(p, m, degree).antisymmetrize();
            if !k.is_zero() || p > m {
                return k;
            }
        }
    }

    pub fn microcube<S: Scalar>(&mut self, n: usize, m: usize) -> Microcube<S> {
        let mut c = Microcube::zero(n, m);
        for mask in 0..(1u64 << n) {
            c.set(mask, self.point(m));
        }
        c
    }

    /// Derivative combination on `domain` with derivative orders `≤ 2`.
    pub fn derivative_terms(&mut self, domain: &Domain, terms: usize) -> Vec<DerivTerm<Rational>> {
        let k = domain.dim();
        (0..terms)
            .map(|_| {
                let total = self.rng.gen_range(1..=2);
                let mut orders = vec![0u32; k];
                if k > 0 {
                    for _ in 0..total {
                        orders[self.below(k)] += 1;
                    }
                }
                DerivTerm {
                    weight: self.rational(),
                    point: self.rationals(k),
                    orders,
                }
            })
            .collect()
    }

    pub fn euclidean_domain(&mut self, k: usize) -> Domain {
        Domain::euclidean(self.rationals(k))
    }

    /// Random functional on `R^k` at a random base point: Dirac, derivative
    /// combination, or a polynomial of a point value plus a combination.
    pub fn functional_spec(&mut self, k: usize, m: usize) -> FunctionalSpec {
        let base = self.rationals(k);
        self.functional_spec_at(base, m)
    }

    pub fn functional_spec_at(&mut self, base: Vec<Rational>, m: usize) -> FunctionalSpec {
        let k = base.len();
        let dom = Domain::euclidean(base.clone());
        match self.below(3) {
            0 => FunctionalSpec::Dirac {
                base,
                dim: m,
                at: self.rationals(k),
            },
            1 => FunctionalSpec::Derivative {
                terms: self.derivative_terms(&dom, 2),
                base,
                dim: m,
            },
            _ => FunctionalSpec::PointPolynomial {
                at: self.rationals(k),
                post: self.test_map(m, m, 2),
                terms: self.derivative_terms(&dom, 1),
                base,
            },
        }
    }

    pub fn functional<S: Scalar>(&mut self, domain: &Domain, m: usize) -> Functional<S> {
        let base = euclidean_base(domain);
        self.functional_spec_at(base, m).build().expect("sized")
    }

    /// A 1-icon drawn from the mixed families: vector fields (terminal
    /// domain), kernel semiforms of degree ≤ 1, Dirac curve flows and
    /// derivative flows on lines.
    pub fn icon_spec(&mut self, m: usize) -> IconSpec {
        match self.below(4) {
            0 => IconSpec::VectorField(self.vector_field(m, 2)),
            1 => {
                let p = self.below(2);
                IconSpec::Kernel(self.kernel(p, m, 1))
            }
            2 => IconSpec::DiracCurve {
                base: self.rationals(1),
                dim: m,
                velocity: self.rationals(1),
            },
            _ => {
                let base = self.rationals(1);
                let terms = self.derivative_terms(&Domain::euclidean(base.clone()), 2);
                IconSpec::DerivativeFlow { base, dim: m, terms }
            }
        }
    }

    pub fn mixed_icon<S: Scalar>(&mut self, m: usize) -> Icon<S> {
        self.icon_spec(m).build().expect("sized")
    }

    /// Two affine 2-icons `δ + d₁u₁ + d₂u₂ + d₁d₂u₁₂` sharing `u₁, u₂` on a
    /// common domain `R^k`, so that they agree on `D(2)`.
    pub fn affine_square_pair(&mut self, k: usize, m: usize) -> (IconSpec, IconSpec) {
        let base = self.rationals(k);
        let u1 = self.functional_spec_at(base.clone(), m);
        let u2 = self.functional_spec_at(base.clone(), m);
        let a = self.functional_spec_at(base.clone(), m);
        let b = self.functional_spec_at(base, m);
        (
            IconSpec::AffineSquare {
                u1: u1.clone(),
                u2: u2.clone(),
                u12: a,
            },
            IconSpec::AffineSquare { u1, u2, u12: b },
        )
    }

    /// Random compact distribution on `R^k` at `base`: derivative terms of
    /// order `≤ 2`, sometimes with a point evaluation.
    pub fn distribution_at(&mut self, base: Vec<Rational>) -> CompactDistribution<Rational> {
        let k = base.len();
        let domain = Domain::euclidean(base);
        let n = 1 + self.below(3);
        let mut terms = self.derivative_terms(&domain, n);
        if self.coin() {
            terms.push(DerivTerm {
                weight: self.rational(),
                point: self.rationals(k),
                orders: vec![0; k],
            });
        }
        CompactDistribution::new(domain, terms).expect("sized")
    }

    pub fn compact_distribution<S: Scalar>(&mut self, domain: &Domain) -> CompactDistribution<S> {
        let base = euclidean_base(domain);
        self.distribution_at(base).map_scalars(S::from_rational).expect("sized")
    }

    /// Random Dirac flow on `R^k` at a random base point.
    pub fn flow_spec(&mut self, k: usize) -> IconSpec {
        let base = self.rationals(k);
        if self.below(3) == 0 {
            IconSpec::PointFlow {
                base,
                velocity: self.rationals(k),
            }
        } else {
            IconSpec::DiracFlow(self.distribution_at(base))
        }
    }

    pub fn dirac_flow<S: Scalar>(&mut self, k: usize) -> DiracFlow<S> {
        self.flow_spec(k).build_flow().expect("sized")
    }

    /// Instance of the order-pattern generator for the general Jacobi
    /// identity.
    pub fn order_pattern<S: Scalar>(&mut self, m: usize) -> JacobiCubes<S> {
        let shared: Vec<Point<S>> = (0..4).map(|_| self.point(m)).collect();
        // P[j][k] for j ≠ k, 0-based
        let mut pair = vec![vec![Vec::new(); 3]; 3];
        for (j, row) in pair.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                if j != k {
                    *slot = self.point(m);
                }
            }
        }
        let mut cube = |word: [usize; 3]| {
            let pos = |x: usize| word.iter().position(|&w| w == x).expect("letter");
            let mut c = Microcube::zero(3, m)
                .with(0, shared[0].clone())
                .with(0b001, shared[1].clone())
                .with(0b010, shared[2].clone())
                .with(0b100, shared[3].clone());
            for (j, k) in [(0, 1), (0, 2), (1, 2)] {
                let v = if pos(j) < pos(k) {
                    pair[j][k].clone()
                } else {
                    pair[k][j].clone()
                };
                c.set((1 << j) | (1 << k), v);
            }
            c.with(0b111, self.point(m))
        };
        JacobiCubes {
            g123: cube([0, 1, 2]),
            g132: cube([0, 2, 1]),
            g213: cube([1, 0, 2]),
            g231: cube([1, 2, 0]),
            g312: cube([2, 0, 1]),
            g321: cube([2, 1, 0]),
        }
    }

    pub fn shuffle<T>(&mut self, v: &mut [T]) {
        v.shuffle(&mut self.rng);
    }
}

/// Base point of a single Euclidean factor.
fn euclidean_base(domain: &Domain) -> Vec<Rational> {
    match domain.factors() {
        [Factor::Euclidean(b)] => b.clone(),
        _ => panic!("expected a single Euclidean factor"),
    }
}

/// All `p`-tuples over `{0..m}`.
pub fn tuples(p: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<Rational> = Sampler::for_trial(42, 3).rationals(10);
        let b: Vec<Rational> = Sampler::for_trial(42, 3).rationals(10);
        let c: Vec<Rational> = Sampler::for_trial(42, 4).rationals(10);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn order_pattern_satisfies_general_jacobi() {
        let mut s = Sampler::new(42);
        for m in 1..=3 {
            let cubes = s.order_pattern::<Rational>(m);
            assert!(cubes.residual(0.0).unwrap().is_zero(0.0));
        }
    }

    #[test]
    fn tuple_count() {
        assert_eq!(tuples(2, 3).len(), 9);
        assert_eq!(tuples(0, 3), vec![Vec::<usize>::new()]);
    }
}
