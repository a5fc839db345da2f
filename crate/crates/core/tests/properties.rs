use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use nilbracket::harness::{SuiteConfig, SuiteName};
use nilbracket::microcube::strong_difference;
use nilbracket::sample::Sampler;
use nilbracket::scalar::factorial;
use nilbracket::doc::InputDoc;
use nilbracket::{GeneratorContext, Kernel, Microcube, Permutation, Polynomial, Rational, Weil};

fn rational() -> impl Strategy<Value = Rational> {
    prop_oneof![
        (-20i64..20, 1i64..20).prop_map(|(n, d)| Rational::new(n, d)),
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d)),
    ]
}

fn permutation(p: usize) -> impl Strategy<Value = Permutation> {
    Just((0..p).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

/// A Weil element over three nilpotent generators and one free variable.
fn weil(ctx: &GeneratorContext, coeffs: &[(i64, i64)]) -> Weil<Rational> {
    let g = ctx.fresh(3).unwrap();
    let t = ctx.fresh_free(1).unwrap();
    let mut acc = Weil::zero();
    for (k, &(n, d)) in coeffs.iter().enumerate() {
        let mut term = Weil::constant(Rational::new(n, d));
        for i in 0..3 {
            if k & (1 << i) != 0 {
                term = term * g.elem(i);
            }
        }
        if k >= 8 {
            term = term * t.elem(0);
        }
        acc = acc + term;
    }
    acc
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-9i64..10, 1i64..6), 12)
}

proptest! {
    #[test]
    fn rational_matches_big_rational(a in rational(), b in rational()) {
        let (x, y) = (a.to_big(), b.to_big());
        prop_assert_eq!((a.clone() + b.clone()).to_big(), &x + &y);
        prop_assert_eq!((a.clone() - b.clone()).to_big(), &x - &y);
        prop_assert_eq!((a.clone() * b.clone()).to_big(), &x * &y);
        if !y.is_zero() {
            prop_assert_eq!((a.clone() / b.clone()).to_big(), &x / &y);
        }
        prop_assert_eq!(a.cmp(&b), x.cmp(&y));
    }

    #[test]
    fn rational_json_round_trip(a in rational(), b in rational()) {
        let c = a * b;
        prop_assert_eq!(Rational::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn promoted_values_equal_their_small_forms(n in -1000i64..1000, d in 1i64..1000) {
        let big = Rational::from_big(BigRational::new(n.into(), d.into()));
        prop_assert_eq!(big.clone(), Rational::new(n, d));
        prop_assert!(big.as_i64_pair().is_some());
    }

    #[test]
    fn weil_ring_laws(a in coeffs(), b in coeffs(), c in coeffs()) {
        let ctx = GeneratorContext::new();
        let (x, y, z) = (weil(&ctx, &a), weil(&ctx, &b), weil(&ctx, &c));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn generators_square_to_zero(n in 1usize..6) {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh(n).unwrap();
        for i in 0..n {
            let d: Weil<Rational> = g.elem(i);
            prop_assert!((&d * &d).is_zero());
        }
        let all = g.elems::<Rational>().into_iter().fold(Weil::one(), |a, d| a * d);
        prop_assert!(!all.is_zero());
    }

    #[test]
    fn permutation_group_laws(s in permutation(4), t in permutation(4), u in permutation(4)) {
        let st = s.then(&t).unwrap();
        prop_assert_eq!(st.then(&u).unwrap(), s.then(&t.then(&u).unwrap()).unwrap());
        prop_assert!(s.then(&s.inverse()).unwrap().is_identity());
        prop_assert_eq!(st.sign(), s.sign() * t.sign());
    }

    #[test]
    fn microcube_action_composes(seed in any::<u64>(), s in permutation(3), t in permutation(3)) {
        let cube: Microcube<Rational> = Sampler::new(seed).microcube(3, 2);
        let stepwise = cube.permute(&s).unwrap().permute(&t).unwrap();
        prop_assert_eq!(stepwise, cube.permute(&s.then(&t).unwrap()).unwrap());
        prop_assert_eq!(cube.permute(&s).unwrap().permute(&s.inverse()).unwrap(), cube);
    }

    #[test]
    fn antisymmetrizer_is_p_factorial_times_idempotent(seed in any::<u64>(), p in 1usize..4) {
        let k: Kernel<Rational> = Sampler::new(seed).kernel(p, 2, 2);
        let a = k.antisymmetrize();
        prop_assert!(a.is_alternating());
        let scale = Rational::from_integer(factorial(p) as i64);
        prop_assert_eq!(a.antisymmetrize(), a.scale(&scale));
    }

    #[test]
    fn strong_difference_of_a_square_with_itself_vanishes(seed in any::<u64>()) {
        let cube: Microcube<Rational> = Sampler::new(seed).microcube(2, 3);
        prop_assert!(strong_difference(&cube, &cube, 0.0).unwrap().is_zero(0.0));
    }

    #[test]
    fn polynomials_survive_evaluation_at_free_indeterminates(seed in any::<u64>()) {
        let ctx = GeneratorContext::new();
        let p: Polynomial<Rational> = Sampler::new(seed).polynomial(3, 3, 5);
        let x = ctx.fresh_free(3).unwrap();
        let w = p.eval(&x.elems());
        prop_assert_eq!(Polynomial::from_weil(&w, 3).unwrap(), p);
    }

    #[test]
    fn sampled_documents_round_trip(seed in any::<u64>(), which in 0usize..SuiteName::ALL.len()) {
        let config = SuiteConfig::new(SuiteName::ALL[which]);
        let doc = nilbracket::suites::sample(&config, 0, seed);
        let text = doc.to_json().to_string();
        let back = InputDoc::parse(&text).unwrap();
        prop_assert_eq!(back.to_json(), doc.to_json());
    }
}
