use hypercycle_core::charpoly::{assemble, CanonicalOptions, FactoredCharPoly, RenderFormat};
use hypercycle_core::oracle::{brute_trace, minor_determinant_check, BruteOptions, MinorParams};
use hypercycle_core::solver::{moments_from_multiplicities, solve_multiplicities, solve_via_s};
use hypercycle_core::trace::{h_matrix, t_vector, trace_any, trace_vector};
use hypercycle_core::hypercycle_degree;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = (u32, u32)> {
    (3u32..=7, 3u32..=8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn traces_are_recovered_from_multiplicities((r, l) in shape()) {
        let mv = solve_multiplicities(r, l).unwrap();
        prop_assert_eq!(moments_from_multiplicities(&mv).unwrap(), trace_vector(r, l).unwrap());
        prop_assert_eq!(solve_via_s(r, l).unwrap(), mv.clone());
        prop_assert_eq!(mv.total_degree(), hypercycle_degree(r, l));
    }

    #[test]
    fn h_times_t_is_the_trace_vector((r, l) in shape()) {
        let t: Vec<BigRational> = t_vector(r, l).unwrap().into_iter().map(BigRational::from_integer).collect();
        let ht = h_matrix(l).unwrap().mul_vector(&t).unwrap();
        let traces: Vec<BigRational> = trace_vector(r, l).unwrap().into_iter().map(BigRational::from_integer).collect();
        prop_assert_eq!(ht, traces);
    }

    #[test]
    fn non_multiples_of_r_have_zero_trace((r, l) in shape(), k in 1u64..40) {
        let order = k.min(l as u64 * r as u64);
        let tr = trace_any(r, l, order).unwrap();
        if order % r as u64 != 0 {
            prop_assert_eq!(tr, BigInt::from(0));
        }
    }

    #[test]
    fn canonical_form_is_a_fixed_point((r, l) in shape(), split in any::<bool>()) {
        let opts = CanonicalOptions { split_rational_roots: split };
        let poly = assemble(r, l).unwrap();
        let once = poly.canonicalize(opts);
        prop_assert!(once.is_canonical());
        prop_assert_eq!(once.canonicalize(opts), once.clone());
        prop_assert_eq!(once.degree(), poly.degree());
        for d in 1..=l {
            let order = d as u64 * r as u64;
            prop_assert_eq!(once.power_sum(order).unwrap(), poly.power_sum(order).unwrap());
        }
    }

    #[test]
    fn json_round_trips((r, l) in shape(), canonical in any::<bool>()) {
        let mut poly = assemble(r, l).unwrap();
        if canonical {
            poly = poly.canonicalize(CanonicalOptions::default());
        }
        let back = FactoredCharPoly::from_json(&poly.render(RenderFormat::Json)).unwrap();
        prop_assert_eq!(back, poly);
    }

    #[test]
    fn path_minor_matches_closed_form(r in 3u32..=6, weights in prop::collection::vec(1u64..=6, 1..=6)) {
        let params = MinorParams::Path { weights };
        prop_assert!(minor_determinant_check(r, &params).unwrap().passed());
    }

    #[test]
    fn cycle_minor_matches_closed_form(r in 3u32..=6, weights in prop::collection::vec(1u64..=6, 3..=6)) {
        let params = MinorParams::Cycle { weights };
        prop_assert!(minor_determinant_check(r, &params).unwrap().passed());
    }

    #[test]
    fn oriented_cycle_minor_matches_closed_form(r in 3u32..=6, length in 3u32..=6, weight in 1u64..=6) {
        let params = MinorParams::OrientedCycle { length, weight };
        prop_assert!(minor_determinant_check(r, &params).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brute_force_matches_formula_on_small_orders(r in 3u32..=5, l in 3u32..=4, order in 1u64..=5) {
        let brute = brute_trace(r, l, order, &BruteOptions::default()).unwrap();
        prop_assert_eq!(brute, trace_any(r, l, order).unwrap());
    }
}
