//! Poincaré distances and the two comparison domains.

use proptest::prelude::*;

use domebound::bendbounds::c1;
use domebound::hypmetric::{d_uhp, halfplane_distance, halfstrip_distance, DistanceCertificate};
use domebound::specialfn::g_func;
use domebound::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn upper_half_plane_reference_value() {
    let d = d_uhp(c(0.3, 0.7), c(-1.2, 2.5)).unwrap();
    assert!((d - 1.596_248_831_430_909_366_3).abs() < 1e-14);
    assert!((d_uhp(c(0.0, 1.0), c(0.0, 5.0)).unwrap() - 5f64.ln()).abs() < 1e-15);
    assert_eq!(d_uhp(c(2.0, 3.0), c(2.0, 3.0)).unwrap(), 0.0);
    assert!(d_uhp(c(0.0, 0.0), c(0.0, 1.0)).is_err());
    assert!(d_uhp(c(0.0, 1.0), c(0.0, -1.0)).is_err());
}

fn point() -> impl Strategy<Value = Complex64> {
    (-10.0f64..10.0, -6.0f64..2.0).prop_map(|(x, e)| c(x, 10f64.powf(e)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn triangle_inequality(a in point(), b in point(), m in point()) {
        let ab = d_uhp(a, b).unwrap();
        let am = d_uhp(a, m).unwrap();
        let mb = d_uhp(m, b).unwrap();
        prop_assert!(ab <= am + mb + 1e-9 * (1.0 + ab));
        prop_assert_eq!(ab, d_uhp(b, a).unwrap());
    }

    #[test]
    fn isometries_preserve_distance(a in point(), b in point(), shift in -5.0f64..5.0, scale in 0.1f64..10.0) {
        let ab = d_uhp(a, b).unwrap();
        let moved = d_uhp(a * scale + shift, b * scale + shift).unwrap();
        prop_assert!((ab - moved).abs() < 1e-9 * (1.0 + ab));
        // z ↦ -1/z
        let inverted = d_uhp(-a.inv(), -b.inv()).unwrap();
        prop_assert!((ab - inverted).abs() < 1e-7 * (1.0 + ab));
    }
}

#[test]
fn half_plane_closed_form() {
    let l = 1.48;
    let g = g_func(l).unwrap();
    let top = c1(l).unwrap();
    let d = halfplane_distance(g, c(0.0, 0.0), c(0.0, top)).unwrap();
    assert!((d - ((top + g) / g).ln()).abs() < 1e-15);
    assert!((d - 1.566_193_147_556_352_812).abs() < 1e-12);
    assert!(halfplane_distance(g, c(0.0, -2.0), c(0.0, 1.0)).is_err());
    assert!(halfplane_distance(-1.0, c(0.0, 0.0), c(0.0, 1.0)).is_err());
}

#[test]
fn half_strip_shrinks_toward_half_plane() {
    let (p, q) = (c(0.0, 0.0), c(0.0, 5.0));
    let q0 = 1.3;
    let mut prev = f64::INFINITY;
    for a in [1.0, 2.0, 4.0, 8.0, 16.0, 64.0, 1024.0] {
        let d = halfstrip_distance(a, q0, p, q).unwrap();
        assert!(d < prev, "a = {a}");
        prev = d;
    }
    let plane = halfplane_distance(q0, p, q).unwrap();
    assert!(prev > plane && prev - plane < 1e-3);
    // Deeper strips are larger domains.
    assert!(halfstrip_distance(2.0, 2.0, p, q).unwrap() < halfstrip_distance(2.0, 1.0, p, q).unwrap());
    assert!(halfstrip_distance(1.0, 1.0, c(1.0, 0.0), q).is_err());
}

#[test]
fn half_strip_symmetry() {
    let (a, q0) = (3.0, 1.0);
    let d1 = halfstrip_distance(a, q0, c(0.4, 0.2), c(-1.1, 2.0)).unwrap();
    let d2 = halfstrip_distance(a, q0, c(-0.4, 0.2), c(1.1, 2.0)).unwrap();
    assert!((d1 - d2).abs() < 1e-12);
}

#[test]
fn certificate_requires_ordered_finite_values() {
    let ok = DistanceCertificate { value: 1.9, lower_bound: 1.5, upper_bound: 30.0, map_accuracy: 1e-12 };
    assert!(ok.holds());
    assert!(!DistanceCertificate { value: 1.4, ..ok.clone() }.holds());
    assert!(!DistanceCertificate { upper_bound: f64::NAN, ..ok }.holds());
}
