use proptest::prelude::*;
use waterslide::asymptotics::{balanced_pe, gap_decomposition};
use waterslide::bounds::{bsc_pe_lower_at, BoundVariant, NeighborhoodBound};
use waterslide::channels::{awgn_capacity, bsc_capacity, min_snr_for_rate, ChannelKind, ChannelPoint};
use waterslide::numerics::{
    binary_entropy, binary_entropy_inv, chernoff_k, kl_bernoulli, kl_gaussian_var, lambert_w_lower, q_function,
};
use waterslide::optimizer::{PowerOptimizer, TechnologyWeights};

proptest! {
    #[test]
    fn entropy_inverse_round_trip(x in 1e-12f64..0.5) {
        let back = binary_entropy_inv(binary_entropy(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x.max(1e-3));
    }

    #[test]
    fn divergences_nonnegative(a in 0.0f64..=1.0, b in 1e-9f64..0.999_999_999, r in 1.0f64..1e6) {
        prop_assert!(kl_bernoulli(a, b).unwrap() >= 0.0);
        prop_assert!(kl_gaussian_var(r, 1.0).unwrap() >= 0.0);
        prop_assert_eq!(kl_bernoulli(b, b).unwrap(), 0.0);
    }

    #[test]
    fn q_symmetric_and_decreasing(x in -8.0f64..8.0, dx in 1e-6f64..1.0) {
        prop_assert!((q_function(x) + q_function(-x) - 1.0).abs() < 1e-15);
        prop_assert!(q_function(x + dx) < q_function(x));
    }

    #[test]
    fn lambert_lower_branch(u in 1e-12f64..1.0) {
        let x = -u * (-1.0f64).exp();
        let w = lambert_w_lower(x).unwrap();
        prop_assert!(w <= -1.0);
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn chernoff_below_local_curvature(g in 1e-4f64..0.5) {
        let k = chernoff_k(g).unwrap();
        let curvature = 1.0 / (2.0 * g * (1.0 - g) * std::f64::consts::LN_2);
        prop_assert!(k > 0.0 && k <= curvature * (1.0 + 1e-12));
    }

    #[test]
    fn capacities_monotone(p in 1e-6f64..0.49, snr in 1e-3f64..1e3) {
        prop_assert!(bsc_capacity(p) > bsc_capacity(p + 0.005));
        prop_assert!(awgn_capacity(snr) < awgn_capacity(snr * 1.01));
    }

    #[test]
    fn gap_split_sums(c in 0.05f64..0.99, frac in 0.01f64..0.99, pe in 0.0f64..0.4) {
        let rate = c * frac;
        let s = gap_decomposition(c, rate, pe).unwrap();
        let total = c / (1.0 - binary_entropy(pe).unwrap()) - rate;
        prop_assert!((s.rate_distortion + s.coding - total).abs() <= 1e-12 * total.max(1.0));
        let b = balanced_pe(c, c - rate).unwrap();
        let eq = gap_decomposition(c, rate, b).unwrap();
        prop_assert!((eq.rate_distortion - eq.coding).abs() <= 1e-9 * eq.coding);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bound_dominates_each_test_channel(u in 0.0f64..1.0, log_n in 0.0f64..20.0) {
        let (rate, p) = (1.0 / 3.0, 0.05);
        let g = 0.175 + u * 0.32;
        let n = log_n.exp();
        let bound = NeighborhoodBound::new(rate, ChannelKind::BscFromBpskHard).unwrap();
        let sup = bound.bsc_pe_lower(p, n).unwrap().log2_pe_bound;
        let at = bsc_pe_lower_at(g, rate, p, n).unwrap();
        prop_assert!(sup >= at - 1e-9 * at.abs());
    }

    #[test]
    fn bounds_nonincreasing_in_n(log_n in 0.0f64..25.0, step in 0.01f64..2.0, snr in 0.8f64..5.0) {
        let n = log_n.exp();
        for kind in [ChannelKind::BscFromBpskHard, ChannelKind::Awgn] {
            let ch = ChannelPoint::new(kind, snr).unwrap();
            let bound = NeighborhoodBound::new(1.0 / 3.0, kind).unwrap();
            for v in [BoundVariant::Asymptotic, BoundVariant::Numeric, BoundVariant::Combined] {
                let a = bound.log2_pe_lower(&ch, n, v).unwrap();
                let b = bound.log2_pe_lower(&ch, n * (1.0 + step), v).unwrap();
                prop_assert!(b <= a + 1e-12 * a.abs(), "{:?} {:?}", kind, v);
            }
        }
    }

    #[test]
    fn min_neighborhood_grows_with_certainty(factor in 1.05f64..4.0, lt in 2.0f64..80.0) {
        for kind in [ChannelKind::BscFromBpskHard, ChannelKind::Awgn] {
            let ch = ChannelPoint::new(kind, factor * min_snr_for_rate(1.0 / 3.0, kind).unwrap()).unwrap();
            let bound = NeighborhoodBound::new(1.0 / 3.0, kind).unwrap();
            let loose = bound.min_neighborhood(&ch, 10f64.powf(-lt), BoundVariant::Combined).unwrap();
            let tight = bound.min_neighborhood(&ch, 10f64.powf(-lt - 1.0), BoundVariant::Combined).unwrap();
            prop_assert!(tight >= loose * (1.0 - 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn total_power_above_floor(gamma in 1e-3f64..3.0, lt in 3.0f64..50.0) {
        for kind in [ChannelKind::BscFromBpskHard, ChannelKind::Awgn] {
            let opt = PowerOptimizer::new(1.0 / 3.0, kind, BoundVariant::Combined).unwrap();
            let w = TechnologyWeights::new(gamma, 3.0).unwrap();
            let point = opt.total_power_lower(&w, 10f64.powf(-lt)).unwrap();
            let floor = min_snr_for_rate(1.0 / 3.0, kind).unwrap();
            prop_assert!(point.snr_transmit > floor);
            prop_assert!((point.total_norm - point.snr_transmit - point.decode_power_norm).abs() < 1e-12 * point.total_norm);
        }
    }
}
