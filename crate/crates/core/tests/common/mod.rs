#![allow(dead_code)]

use homm_ring_core::{Complex64, CouplerParams, RingDeviceParams};
use proptest::prelude::*;
use std::f64::consts::PI;

pub fn coupler(through_mag: f64, through_phase: f64, cross_phase: f64) -> CouplerParams {
    let k = (1.0 - through_mag * through_mag).max(0.0).sqrt();
    CouplerParams::new(
        Complex64::from_polar(k, cross_phase),
        Complex64::from_polar(through_mag, through_phase),
    )
    .unwrap()
}

/// Devices with arbitrary coupler phases and an arbitrary split of θ.
pub fn any_device() -> impl Strategy<Value = RingDeviceParams> {
    (
        0.0..=1.0f64,
        0.0..=1.0f64,
        -PI..PI,
        -PI..PI,
        -PI..PI,
        -PI..PI,
        -10.0..10.0f64,
        -PI..PI,
    )
        .prop_filter_map("denominator too small", |(ta, te, pa, pk, pe, pg, theta, phi1)| {
            let p = RingDeviceParams::new(coupler(ta, pa, pk), coupler(te, pe, pg), theta, phi1, theta - phi1).ok()?;
            (p.denominator().norm() > 1e-6).then_some(p)
        })
}

/// Devices whose loop gain |ητ| is at most `max_gain`.
pub fn convergent_device(max_gain: f64) -> impl Strategy<Value = RingDeviceParams> {
    (
        0.0..=1.0f64,
        0.0..=1.0f64,
        -PI..PI,
        -PI..PI,
        -PI..PI,
        -PI..PI,
        -10.0..10.0f64,
        -PI..PI,
    )
        .prop_filter_map("loop gain too large", move |(ta, te, pa, pk, pe, pg, theta, phi1)| {
            if ta * te > max_gain {
                return None;
            }
            RingDeviceParams::new(coupler(ta, pa, pk), coupler(te, pe, pg), theta, phi1, theta - phi1).ok()
        })
}
