//! Algebraic invariants checked on generated inputs.

mod common;

use num_bigint::BigUint;
use proptest::prelude::*;

use common::int;
use tridecomp::bounds;
use tridecomp::oracle::{naive_prem, split_linear_solve, SplitLinearSystem};
use tridecomp::poly::{gcd, prem, resultant, resultant_interpolated, subresultant, Monomial, Polynomial, Rational};

fn poly(max_exp: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_exp, 0..=max_exp, 0..=max_exp.min(2), -9i64..=9), 1..=terms).prop_map(|ts| {
        Polynomial::from_terms(
            ts.into_iter()
                .map(|(a, b, c, k)| (Monomial::from_exponents(vec![a, b, c]), int(k))),
        )
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-5i64..=5, 3).prop_map(|v| v.into_iter().map(int).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_operations_commute_with_evaluation(a in poly(3, 5), b in poly(3, 5), p in point()) {
        prop_assert_eq!((&a * &b).eval(&p), a.eval(&p) * b.eval(&p));
        prop_assert_eq!((&a - &b).eval(&p), a.eval(&p) - b.eval(&p));
        prop_assert_eq!(&(&a + &b) * &a, &(&a * &a) + &(&b * &a));
    }

    #[test]
    fn prem_agrees_with_schoolbook(f in poly(4, 6), g in poly(3, 4), x in 0usize..3) {
        prop_assume!(g.deg(x) > 0);
        let fast = prem(&f, &g, x).unwrap();
        let slow = naive_prem(&f, &g, x).unwrap();
        let lc = g.lc_in(x);
        prop_assert_eq!(&lc.pow(slow.alpha) * &fast.remainder, &lc.pow(fast.alpha) * &slow.remainder);
        prop_assert!(fast.alpha <= slow.alpha);
        let lhs = &lc.pow(fast.alpha) * &f;
        prop_assert!((&(&lhs - &(&fast.quotient * &g)) - &fast.remainder).is_zero());
    }

    #[test]
    fn resultant_algorithms_agree(f in poly(2, 4), g in poly(2, 4)) {
        prop_assume!(f.deg(2) > 0 && g.deg(2) > 0);
        let det = subresultant(0, &f, &g, 2).unwrap();
        prop_assert_eq!(&resultant(&f, &g, 2).unwrap(), &det);
        prop_assert_eq!(&resultant_interpolated(&f, &g, 2).unwrap(), &det);
    }

    #[test]
    fn resultant_vanishes_on_common_factor(f in poly(2, 3), g in poly(2, 3), c in poly(1, 3)) {
        prop_assume!(c.deg(2) > 0 && !f.is_zero() && !g.is_zero());
        let r = resultant(&(&f * &c), &(&g * &c), 2).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn gcd_keeps_common_factor(a in poly(2, 3), b in poly(2, 3), c in poly(2, 3)) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let ac = &a * &c;
        let bc = &b * &c;
        let g = gcd(&ac, &bc);
        prop_assert!(ac.div_exact(&g).is_some());
        prop_assert!(bc.div_exact(&g).is_some());
        prop_assert!(g.div_exact(&c).is_some());
    }

    #[test]
    fn log2_enclosure_brackets_bit_length(v in 1u64..u64::MAX) {
        let (lo, hi) = bounds::log2_int(&BigUint::from(v), 64);
        let bits = 64 - v.leading_zeros();
        prop_assert!(lo <= hi);
        prop_assert!(lo >= int(i64::from(bits) - 1));
        prop_assert!(hi <= int(i64::from(bits)));
        let exact = (v as f64).log2();
        prop_assert!(num_traits::ToPrimitive::to_f64(&lo).unwrap() <= exact + 1e-9);
        prop_assert!(num_traits::ToPrimitive::to_f64(&hi).unwrap() >= exact - 1e-9);
    }

    #[test]
    fn bounds_grow_with_parameters(m in 2u32..6, d in 2u32..6) {
        let g0 = bounds::gamma_bound(d, m).unwrap();
        prop_assert!(g0.upper() < bounds::gamma_bound(d + 1, m).unwrap().lower());
        prop_assert!(g0.upper() < bounds::gamma_bound(d, m + 1).unwrap().lower());
        let h0 = bounds::output_height_bound(m, d, d, 1).unwrap();
        prop_assert!(h0.upper() < bounds::output_height_bound(m, d + 1, d, 1).unwrap().lower());
        prop_assert!(bounds::component_bound(m, m, d).unwrap() < bounds::component_bound(m, m, d + 1).unwrap());
    }

    #[test]
    fn interval_bounds_match_float_estimates(n in 1u32..5, m in 2u32..8, d in 2u32..8) {
        let b = bounds::degree_bound_b(n, m, d, 1).unwrap();
        let (log_b, eps) = bounds::float::degree_bound_b(n, m, d, 1);
        prop_assert!(bounds::agrees_with_float(&b.b, log_b, 1e-6));
        prop_assert!((b.epsilon.to_f64() - eps).abs() < 1e-6);
        let g = bounds::gamma_bound(d, m).unwrap();
        prop_assert!(bounds::agrees_with_float(&g, bounds::float::gamma_bound(d, m), 1e-6));
    }

    #[test]
    fn split_linear_solutions_are_exact(n in 2usize..4, r in 1usize..4, d in 1u32..3, seed in 0u64..1000, p in prop::collection::vec(1i64..=4, 3)) {
        let s = SplitLinearSystem::random(n, r, d, seed);
        let sol = split_linear_solve(&s);
        let point: Vec<Rational> = p[..n].iter().map(|&v| int(v)).collect();
        let vanishes = s.polys().iter().all(|f| f.eval(&point) == int(0));
        prop_assert_eq!(sol.contains(&point), vanishes);
    }
}
