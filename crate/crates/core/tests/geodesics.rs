//! Piecewise geodesics: tracing, angle profiles, the three curve checks and
//! the explicit constructions.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use domebound::geodesiclab::hyperboloid::{distance, from_half_plane, origin};
use domebound::geodesiclab::{
    bilipschitz_report, check_embedding, check_hill_bound, horocycle_polygon, isosceles_identity, planar_unroll,
    roundness, theta_s_profile, PiecewiseGeodesic,
};
use domebound::hypmetric::d_uhp;
use domebound::specialfn::solve_tangent;
use domebound::Complex64;

fn grid(length: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| length * (i as f64 / n as f64)).collect()
}

fn distance_profile(gamma: &PiecewiseGeodesic, n: usize) -> Vec<f64> {
    let o = origin();
    gamma.trace_many(&grid(gamma.length, n)).iter().map(|p| distance(&o, p)).collect()
}

/// Five bends at spacing in `[0.1, 1)`, angles in `[0, 1)`, free torsion.
fn five_bend_curve(rng: &mut ChaCha8Rng) -> PiecewiseGeodesic {
    let mut t = 0.0;
    let times: Vec<f64> = (0..5)
        .map(|_| {
            t += rng.random_range(0.1..1.0);
            t
        })
        .collect();
    let angles = (0..5).map(|_| rng.random_range(0.0..1.0)).collect();
    let torsions = (0..5).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    PiecewiseGeodesic::new(times, angles, torsions, 3, t + 1.0).unwrap()
}

#[test]
fn roundness_uses_open_windows() {
    let single = PiecewiseGeodesic::planar(vec![0.0], vec![0.45], 1.0).unwrap();
    for l in [0.1, 1.0, 10.0] {
        assert_eq!(roundness(&single, l), 0.45);
    }
    let spaced = PiecewiseGeodesic::planar(vec![0.0, 1.0, 2.0], vec![0.3; 3], 2.5).unwrap();
    assert!((roundness(&spaced, 1.0) - 0.3).abs() < 1e-15);
    let close = PiecewiseGeodesic::planar(vec![0.0, 0.5, 2.0], vec![0.3; 3], 2.5).unwrap();
    assert!((roundness(&close, 1.0) - 0.6).abs() < 1e-15);
}

#[test]
fn roundness_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let g = five_bend_curve(&mut rng);
        let l = rng.random_range(0.2..2.0);
        let mut best = 0.0f64;
        for j in 0..5 {
            for k in j..5 {
                if g.bend_times[k] - g.bend_times[j] < l {
                    best = best.max(g.bend_angles[j..=k].iter().sum());
                }
            }
        }
        assert!((roundness(&g, l) - best).abs() < 1e-14);
    }
}

#[test]
fn law_of_cosines_after_one_bend() {
    let (t1, phi) = (0.6, 1.1);
    let g = PiecewiseGeodesic::new(vec![t1], vec![phi], vec![2.2], 3, 4.0).unwrap();
    for i in 1..=30 {
        let u = 0.1 * i as f64;
        let d = distance(&origin(), &g.trace(t1 + u).unwrap());
        let expect = (t1.cosh() * u.cosh() - t1.sinh() * u.sinh() * (PI - phi).cos()).acosh();
        assert!((d - expect).abs() < 1e-12, "u = {u}");
    }
}

#[test]
fn torsion_pi_mirrors_the_planar_zigzag() {
    let times = vec![0.7, 1.5];
    let angles = vec![0.8, 0.5];
    let left = PiecewiseGeodesic::new(times.clone(), angles.clone(), vec![0.0, 0.0], 3, 3.0).unwrap();
    let zigzag = PiecewiseGeodesic::new(times.clone(), angles.clone(), vec![0.0, PI], 3, 3.0).unwrap();
    let mirror = PiecewiseGeodesic::new(times, angles, vec![PI, 0.0], 3, 3.0).unwrap();
    let a = distance_profile(&zigzag, 300);
    let b = distance_profile(&mirror, 300);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
    // A zig-zag ends farther out than two turns the same way.
    assert!(a.last().unwrap() > distance_profile(&left, 300).last().unwrap());
}

#[test]
fn straight_profile() {
    let g = PiecewiseGeodesic::straight(3.0);
    let p = theta_s_profile(&g, &grid(3.0, 60)).unwrap();
    for (t, (s, th)) in p.sample_times.iter().zip(p.s_values.iter().zip(&p.theta_plus)) {
        assert!((s - t).abs() < 1e-12);
        assert_eq!(*th, 0.0);
    }
    let hill = check_hill_bound(&g, 1.0).unwrap();
    let t = solve_tangent(1.0, 1e-14).unwrap();
    assert_eq!(hill.max_theta_plus, 0.0);
    assert_eq!(hill.margin, t.theta + t.g_value);
    assert!(hill.precondition_met && hill.holds);
}

#[test]
fn planar_bend_jumps_by_its_angle() {
    let phi = 0.9;
    let g = PiecewiseGeodesic::planar(vec![1.2], vec![phi], 2.0).unwrap();
    let p = theta_s_profile(&g, &grid(2.0, 20)).unwrap();
    let i = p.sample_times.iter().position(|&t| t == 1.2).unwrap();
    assert_eq!(p.theta_minus[i], 0.0);
    assert!((p.theta_plus[i] - phi).abs() < 1e-12);
}

#[test]
fn ode_and_trigonometry_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g = five_bend_curve(&mut rng);
        let p = theta_s_profile(&g, &grid(g.length, 200)).unwrap();
        worst = worst.max(p.route_discrepancy());
    }
    assert!(worst < 1e-6, "discrepancy {worst:e}");
}

#[test]
fn profile_invariants_on_random_curves() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = five_bend_curve(&mut rng);
        let p = theta_s_profile(&g, &grid(g.length, 300)).unwrap();
        let t = &p.sample_times;
        for i in 1..t.len() {
            assert!((p.s_values[i] - p.s_values[i - 1]).abs() <= t[i] - t[i - 1] + 1e-12);
            let bend_between = g.bend_times.iter().any(|&b| b > t[i - 1] && b <= t[i]);
            if !bend_between {
                assert!(p.theta_plus[i] <= p.theta_plus[i - 1] + 1e-12, "θ rises at t = {}", t[i]);
            }
        }
        for (k, &b) in g.bend_times.iter().enumerate() {
            let i = t.iter().position(|&x| x == b).unwrap();
            assert!((p.theta_plus[i] - p.theta_minus[i]).abs() <= g.bend_angles[k] + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn trace_is_one_lipschitz(seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = five_bend_curve(&mut rng);
        let (t1, t2) = (a.min(b) * g.length, a.max(b) * g.length);
        let d = distance(&g.trace(t1).unwrap(), &g.trace(t2).unwrap());
        prop_assert!(d <= t2 - t1 + 1e-12);
        let segment = g.bend_times.iter().all(|&x| x <= t1 || x >= t2);
        if segment {
            prop_assert!((d - (t2 - t1)).abs() < 1e-9);
        }
    }
}

#[test]
fn horocycle_exceeds_g_at_length_one() {
    let gamma = horocycle_polygon(1.0, 20).unwrap();
    let report = check_hill_bound(&gamma, 1.0).unwrap();
    assert!((report.roundness - 0.96076).abs() < 1e-5);
    assert!((report.g_value - 0.948).abs() < 1e-3);
    assert!(!report.precondition_met);
    assert!(!report.holds);
}

#[test]
fn three_right_angle_turns_nearly_meet() {
    let gamma = PiecewiseGeodesic::planar(vec![0.5, 0.6, 0.7], vec![FRAC_PI_2; 3], 1.2).unwrap();
    assert!((roundness(&gamma, 1.0) - 1.5 * PI).abs() < 1e-12);
    let sep = check_embedding(&gamma, 1e-3).unwrap();
    assert!(sep < 1e-2, "separation {sep}");
    let straight = check_embedding(&PiecewiseGeodesic::straight(2.0), 1e-2).unwrap();
    assert!(straight > 0.0);
}

#[test]
fn single_bend_bilipschitz_ratio() {
    let gamma = PiecewiseGeodesic::planar(vec![1.0], vec![0.4], 2.0).unwrap();
    let r = bilipschitz_report(&gamma, 1.0).unwrap();
    assert!((r.predicted - 0.018_697_610_358_127_030).abs() < 1e-15);
    assert!(r.precondition_met);
    assert!(r.measured >= r.predicted - 1e-6);
    assert!(r.holds);
    let straight = bilipschitz_report(&PiecewiseGeodesic::straight(2.0), 1.0).unwrap();
    assert!((straight.measured - 1.0).abs() < 1e-12);
}

#[test]
fn horocycle_angles_and_roundness() {
    for &l in &[0.05, 0.5, 1.0, 1.48, 2.0, 3.0] {
        for &n in &[3, 7, 20] {
            let gamma = horocycle_polygon(l, n).unwrap();
            let expect = 2.0 * (0.5 * l).tanh().asin();
            assert_eq!(gamma.bend_count(), n - 2);
            for a in &gamma.bend_angles {
                assert!((a - expect).abs() < 1e-12, "L = {l}, n = {n}");
            }
            assert!((roundness(&gamma, l) - expect).abs() < 1e-12);
        }
    }
    let tiny = horocycle_polygon(1e-6, 5).unwrap();
    assert!(tiny.bend_angles.iter().all(|&a| a < 1e-5));
    assert!((horocycle_polygon(1.0, 5).unwrap().bend_angles[0] - 0.96076).abs() < 1e-5);
}

#[test]
fn horocycle_matches_coordinate_construction() {
    let l: f64 = 1.3;
    let spacing = 2.0 * (0.5 * l).sinh();
    let pts: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64 * spacing, 1.0)).collect();
    for w in pts.windows(2) {
        assert!((d_uhp(w[0], w[1]).unwrap() - l).abs() < 1e-12);
    }
    let gamma = horocycle_polygon(l, 8).unwrap();
    for (k, t) in gamma.bend_times.iter().enumerate() {
        assert!((t - (k + 1) as f64 * l).abs() < 1e-12);
    }
    // Distances from the first point agree with the half-plane construction.
    let o = origin();
    let start = from_half_plane(0.0, 1.0);
    for k in 1..8 {
        let traced = distance(&o, &gamma.trace((k as f64 * l).min(gamma.length)).unwrap());
        let direct = d_uhp(pts[0], pts[k]).unwrap();
        assert!((traced - direct).abs() < 1e-10, "point {k}");
        let lifted = distance(&start, &from_half_plane(pts[k].re, pts[k].im));
        assert!((lifted - direct).abs() < 1e-10);
    }
}

#[test]
fn isosceles_identity_on_fifty_angles() {
    for i in 0..50 {
        let theta = 0.05 + 1.45 * (i as f64 + 0.5) / 50.0;
        let r = isosceles_identity(theta).unwrap();
        assert!(r.residual < 1e-8, "θ = {theta}: {:e}", r.residual);
        assert!(r.equal_angle_defect() < 1e-6, "θ = {theta}");
    }
}

#[test]
fn isosceles_reference_values() {
    let r = isosceles_identity(PI / 3.0).unwrap();
    assert!((r.ell - 0.962_423_650_119_206_895).abs() < 1e-8);
    assert!((r.minimizer_angle - FRAC_PI_2).abs() < 1e-5);
    let thin = isosceles_identity(FRAC_PI_2 - 1e-6).unwrap();
    assert!(thin.ell < 1e-5);
    assert!(isosceles_identity(FRAC_PI_2).is_err());
}

#[test]
fn unrolling_a_planar_curve_keeps_its_profile() {
    // Turning the same way keeps the start point inside every corner, so the
    // unrolled curve is the input itself.
    let convex = PiecewiseGeodesic::planar(vec![0.5, 1.1, 1.9], vec![0.4, 0.7, 0.2], 3.0).unwrap();
    let u = planar_unroll(&convex).unwrap();
    for (a, b) in u.bend_angles.iter().zip(&convex.bend_angles) {
        assert!((a - b).abs() < 1e-9);
    }
    for (x, y) in distance_profile(&u, 200).iter().zip(&distance_profile(&convex, 200)) {
        assert!((x - y).abs() < 1e-12);
    }
    // A zig-zag is laid out as a fan around the start point: same distances,
    // no larger bends.
    let zigzag =
        PiecewiseGeodesic::new(vec![0.5, 1.1, 1.9], vec![0.4, 0.7, 0.2], vec![0.0, PI, 0.0], 2, 3.0).unwrap();
    let u = planar_unroll(&zigzag).unwrap();
    for (a, b) in u.bend_angles.iter().zip(&zigzag.bend_angles) {
        assert!(*a <= b + 1e-9);
    }
    for (x, y) in distance_profile(&u, 200).iter().zip(&distance_profile(&zigzag, 200)) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn unrolled_single_bend_keeps_distances() {
    let (t1, phi) = (0.9, 0.6);
    let g = PiecewiseGeodesic::new(vec![t1], vec![phi], vec![1.0], 3, 2.5).unwrap();
    let u = planar_unroll(&g).unwrap();
    assert_eq!(u.dimension, 2);
    let times = grid(g.length, 99);
    let o = origin();
    for (t, p) in times.iter().zip(u.trace_many(&times)) {
        let expect = if *t <= t1 {
            *t
        } else {
            let s = t - t1;
            (t1.cosh() * s.cosh() - t1.sinh() * s.sinh() * (PI - phi).cos()).acosh()
        };
        assert!((distance(&o, &p) - expect).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn torsion_shrinks_later_bends() {
    let g = PiecewiseGeodesic::new(vec![0.6, 1.4], vec![0.8, 0.9], vec![0.0, FRAC_PI_2], 3, 2.5).unwrap();
    let u = planar_unroll(&g).unwrap();
    // The first triangle already lies in the plane of the first two segments.
    assert!((u.bend_angles[0] - g.bend_angles[0]).abs() < 1e-9);
    assert!(u.bend_angles[1] < g.bend_angles[1] - 1e-3, "{:?}", u.bend_angles);
    for (x, y) in distance_profile(&u, 250).iter().zip(&distance_profile(&g, 250)) {
        assert!((x - y).abs() < 1e-9);
    }
}
