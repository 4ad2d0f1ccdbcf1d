mod common;

use homm_ring_core::pathsum::{loop_gain, truncation_bounds};
use homm_ring_core::{
    balanced_params, critical_coupling_amplitudes, pathsum_transfer, transfer_matrix, PathSumConfig, RingDeviceParams,
};
use proptest::prelude::*;

fn entry_errors(p: &RingDeviceParams, n: usize) -> [f64; 4] {
    let approx = pathsum_transfer(p, &PathSumConfig::new(n)).unwrap();
    let exact = transfer_matrix(p).unwrap();
    [
        (approx.t - exact.t).norm(),
        (approx.s - exact.s).norm(),
        (approx.t_prime - exact.t_prime).norm(),
        (approx.s_prime - exact.s_prime).norm(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn long_path_sum_matches_closed_form(p in common::convergent_device(0.95)) {
        let approx = pathsum_transfer(&p, &PathSumConfig::new(400)).unwrap();
        let exact = transfer_matrix(&p).unwrap();
        prop_assert!(approx.max_abs_diff(&exact) < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn truncation_error_shrinks_within_the_tail_bound(p in common::convergent_device(0.95)) {
        let mut previous = [f64::INFINITY; 4];
        for n in [1usize, 5, 20, 100] {
            let errors = entry_errors(&p, n);
            let bounds = truncation_bounds(&p, &PathSumConfig::new(n));
            for i in 0..4 {
                prop_assert!(errors[i] <= bounds[i] + 1e-13, "entry {i} at N={n}: {} > {}", errors[i], bounds[i]);
                prop_assert!(errors[i] <= previous[i] + 1e-13);
            }
            previous = errors;
        }
    }
}

#[test]
fn ratio_one_iff_through_port_nulled() {
    for i in 1..20 {
        let tau = i as f64 / 20.0;
        for j in 1..20 {
            let eta = j as f64 / 20.0;
            let ratio = critical_coupling_amplitudes(tau, eta, 1.0).unwrap().ratio;
            let t = transfer_matrix(&RingDeviceParams::real_couplers(tau, eta, 0.0).unwrap()).unwrap().t;
            if i == j {
                assert!((ratio - 1.0).abs() < 1e-12);
                assert!(t.norm() < 1e-12);
            } else {
                assert!((ratio - 1.0).abs() > 1e-3);
                assert!(t.norm() > 1e-3);
            }
        }
    }
}

/// At resonance the first fed-back term is in opposition to the direct term.
#[test]
fn first_feedback_term_opposes_direct_transmission() {
    for tau in [0.2, 0.5, 0.8] {
        let p = balanced_params(tau, 0.0).unwrap();
        let direct = pathsum_transfer(&p, &PathSumConfig::new(0)).unwrap().t;
        let first_loop = direct - p.tau();
        let phase = (first_loop / p.tau()).arg();
        assert!((phase.abs() - std::f64::consts::PI).abs() < 1e-12);
    }
}

#[test]
fn tail_rule_reaches_target() {
    for (tau, eta) in [(0.5, 0.5), (0.9, 0.95), (0.99, 0.95), (0.2, 0.999)] {
        let p = RingDeviceParams::real_couplers(tau, eta, 1.1).unwrap();
        let cfg = PathSumConfig::for_device(&p);
        let bounds = truncation_bounds(&p, &cfg);
        assert!(bounds.iter().all(|&b| b <= 1e-10 * loop_gain(&p).max(1e-300) + 1e-16));
        let err = pathsum_transfer(&p, &cfg).unwrap().max_abs_diff(&transfer_matrix(&p).unwrap());
        assert!(err < 1e-9);
    }
}
