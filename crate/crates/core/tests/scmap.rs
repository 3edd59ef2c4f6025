//! Schwarz–Christoffel maps: analytic cases, round trips, normalization
//! invariance and local geometry on the staircase polygon.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use domebound::bendbounds::c1;
use domebound::hypmetric::domain_distance;
use domebound::region::{build_step, default_half_width, polygon_from_step, GeneralizedPolygon, Vertex, DEFAULT_TAIL_THRESHOLD};
use domebound::scmap::{sc_forward, sc_inverse, solve_parameters, SCMap, ScOptions, DEFAULT_SC_TOL};
use domebound::Complex64;

const L: f64 = 1.48;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn staircase_map() -> &'static SCMap {
    static MAP: OnceLock<SCMap> = OnceLock::new();
    MAP.get_or_init(|| {
        let a = default_half_width(L, DEFAULT_TAIL_THRESHOLD).unwrap();
        let step = build_step(L, a, 64).unwrap();
        solve_parameters(&polygon_from_step(&step).unwrap(), 8, DEFAULT_SC_TOL).unwrap()
    })
}

fn half_strip() -> GeneralizedPolygon {
    GeneralizedPolygon::new(
        vec![Vertex::Finite(c(-1.0, 0.0)), Vertex::Finite(c(1.0, 0.0)), Vertex::Infinite],
        vec![0.5, 0.5, 0.0],
    )
    .unwrap()
}

#[test]
fn half_strip_matches_arcsine_map() {
    let map = solve_parameters(&half_strip(), 8, DEFAULT_SC_TOL).unwrap();
    assert_eq!(map.prevertices(), &[-1.0, 0.0]);
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let z = c(-3.0 + 6.0 * i as f64 / 9.0, 0.05 + 3.0 * j as f64 / 9.0);
            let exact = (z * 2.0 + 1.0).asin() * (2.0 / PI);
            worst = worst.max((sc_forward(&map, z).unwrap() - exact).norm());
        }
    }
    assert!(worst < 1e-8, "max error {worst:e}");
}

#[test]
fn half_plane_is_affine() {
    let p = GeneralizedPolygon::new(vec![Vertex::Finite(c(0.0, 0.0)), Vertex::Infinite], vec![1.0, -1.0]).unwrap();
    let map = solve_parameters(&p, 8, DEFAULT_SC_TOL).unwrap();
    assert!((sc_forward(&map, c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-14);
    assert!((sc_forward(&map, c(2.5, 0.5)).unwrap() - c(2.5, 0.5)).norm() < 1e-14);
    let d = domain_distance(&map, c(0.0, 1.0), c(0.0, 2.0), 1e-12).unwrap();
    assert!((d - 2f64.ln()).abs() < 1e-12);
    assert_eq!(domain_distance(&map, c(0.3, 1.0), c(0.3, 1.0), 1e-12).unwrap(), 0.0);
}

#[test]
fn staircase_solution_quality() {
    let map = staircase_map();
    assert!(map.residual() < DEFAULT_SC_TOL);
    assert!(map.accuracy() < 10.0 * DEFAULT_SC_TOL, "accuracy {:e}", map.accuracy());
    assert!(map.prevertices().windows(2).all(|p| p[1] > p[0]));
    let vertices = map.polygon().finite_vertices();
    for (k, (&z, v)) in map.prevertices().iter().zip(&vertices).enumerate() {
        let w = sc_forward(map, c(z, 0.0)).unwrap();
        assert!((w - v).norm() <= map.accuracy() + 1e-12, "vertex {k}");
    }
}

fn random_upper_points(map: &SCMap, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = map.prevertices();
    let (lo, hi) = (z[0], z[z.len() - 1]);
    let span = hi - lo;
    (0..n)
        .map(|_| {
            let x = rng.random_range(lo - 0.2 * span..hi + 0.2 * span);
            let y = span * 10f64.powf(rng.random_range(-5.0..0.0));
            c(x, y)
        })
        .collect()
}

#[test]
fn forward_inverse_round_trip() {
    let map = staircase_map();
    let mut worst = 0.0f64;
    for z in random_upper_points(map, 100, 11) {
        let w = sc_forward(map, z).unwrap();
        let back = sc_inverse(map, w, 1e-12).unwrap();
        worst = worst.max((back - z).norm());
    }
    assert!(worst < 1e-9, "round trip error {worst:e}");
}

#[test]
fn imaginary_axis_maps_to_a_vertical_line() {
    // x ↦ -x on the polygon fixes ∞, so it corresponds to a reflection of the
    // half-plane in a vertical line.
    let map = staircase_map();
    let re: Vec<f64> = [0.0, 0.5, 2.0, 5.0, 20.0]
        .iter()
        .map(|&y| sc_inverse(map, c(0.0, y), 1e-12).unwrap().re)
        .collect();
    let scale = map.prevertices().last().unwrap() - map.prevertices()[0];
    for r in &re {
        assert!((r - re[0]).abs() < 1e-8 * scale.max(1.0), "{re:?}");
    }
}

#[test]
fn inverse_near_corners() {
    let map = staircase_map();
    let vertices = map.polygon().finite_vertices();
    let (alphas, _) = map.polygon().finite_angles();
    let mut tested = [false, false];
    for (k, v) in vertices.iter().enumerate().skip(1) {
        let kind = if alphas[k] == 0.5 { 0 } else { 1 };
        if tested[kind] || v.im > -0.5 {
            continue;
        }
        for d in 0..8 {
            let w = v + Complex64::from_polar(1e-3, PI / 8.0 + d as f64 * PI / 4.0);
            if !map.is_interior(w) {
                continue;
            }
            let z = sc_inverse(map, w, 1e-10).unwrap();
            assert!(z.im > 0.0);
            assert!((sc_forward(map, z).unwrap() - w).norm() < 1e-10, "corner {k}, direction {d}");
            tested[kind] = true;
        }
    }
    assert!(tested[0] && tested[1], "no convex or no reflex corner exercised");
}

#[test]
fn distance_is_independent_of_normalization() {
    let map = staircase_map();
    let m = map.prevertices().len();
    let other = SCMap::solve(map.polygon(), &ScOptions { pin: m / 3, ..ScOptions::default() }).unwrap();
    assert_eq!(other.pin(), m / 3);
    assert!((other.prevertices()[0] - map.prevertices()[0]).abs() > 1e-3);
    let q = c(0.0, c1(L).unwrap());
    let p = c(0.0, 0.0);
    let d1 = domain_distance(map, p, q, 1e-11).unwrap();
    let d2 = domain_distance(&other, p, q, 1e-11).unwrap();
    assert!((d1 - d2).abs() < 1e-7, "{d1} vs {d2}");
}

#[test]
fn integration_path_does_not_matter() {
    let map = staircase_map();
    for (i, z) in random_upper_points(map, 20, 3).into_iter().enumerate() {
        let via = c(z.re + 0.7 * z.im, 2.5 * z.im);
        let a = map.forward(z).unwrap();
        let b = map.forward_via(z, via).unwrap();
        let k = (i * 7) % map.prevertices().len();
        let d = map.forward_from_prevertex(k, z).unwrap();
        assert!((a - b).norm() < 1e-9, "two-leg path differs by {:e}", (a - b).norm());
        assert!((a - d).norm() < 1e-9, "start at prevertex {k} differs by {:e}", (a - d).norm());
    }
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = ((p - a) * ab.conj()).re / ab.norm_sqr();
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

#[test]
fn boundary_points_land_on_their_edges() {
    let map = staircase_map();
    let z = map.prevertices();
    let v = map.polygon().finite_vertices();
    for k in 0..z.len() - 1 {
        for t in [0.25, 0.5, 0.75] {
            let x = z[k] + t * (z[k + 1] - z[k]);
            let w = sc_forward(map, c(x, 0.0)).unwrap();
            let d = point_segment_distance(w, v[k], v[k + 1]);
            assert!(d < 1e-8, "edge {k}: {d:e}");
        }
    }
}

#[test]
fn derivative_quotients_are_direction_free() {
    let map = staircase_map();
    let h = 1e-5;
    for z in random_upper_points(map, 20, 5) {
        let z = c(z.re, z.im.max(1e-2));
        let dx = (map.forward(z + h).unwrap() - map.forward(z - h).unwrap()) / (2.0 * h);
        let ih = c(0.0, h);
        let dy = (map.forward(z + ih).unwrap() - map.forward(z - ih).unwrap()) / (2.0 * ih);
        assert!((dx - dy).norm() < 1e-6 * dx.norm(), "at {z}: {dx} vs {dy}");
        assert!((dx - map.derivative(z)).norm() < 1e-6 * dx.norm());
    }
}

#[test]
fn corners_subtend_their_angles() {
    let map = staircase_map();
    let z = map.prevertices();
    let v = map.polygon().finite_vertices();
    let (alphas, _) = map.polygon().finite_angles();
    for k in 1..z.len() - 1 {
        let r = 1e-3 * (z[k] - z[k - 1]).min(z[k + 1] - z[k]);
        let out = sc_forward(map, c(z[k] + r, 0.0)).unwrap() - v[k];
        let inn = sc_forward(map, c(z[k] - r, 0.0)).unwrap() - v[k];
        let mid = sc_forward(map, c(z[k], r)).unwrap() - v[k];
        let mut angle = (inn / out).arg();
        if angle <= 0.0 {
            angle += 2.0 * PI;
        }
        assert!((angle - PI * alphas[k]).abs() < 1e-3, "vertex {k}: {angle} vs {}", PI * alphas[k]);
        // The interior probe lies inside the corner.
        let mut to_mid = (mid / out).arg();
        if to_mid <= 0.0 {
            to_mid += 2.0 * PI;
        }
        assert!(to_mid < angle);
    }
}

#[test]
fn map_document_round_trip() {
    let map = staircase_map();
    let json = serde_json::to_string(map).unwrap();
    let back: SCMap = serde_json::from_str(&json).unwrap();
    assert_eq!(back.prevertices(), map.prevertices());
    let z = c(0.1, 0.3);
    assert_eq!(back.forward(z).unwrap(), map.forward(z).unwrap());
}
