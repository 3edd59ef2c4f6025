//! Hyperboloid model `{x : ⟨x, x⟩ = -1, x_0 > 0}` with the Minkowski form
//! `⟨x, y⟩ = -x_0 y_0 + x_1 y_1 + x_2 y_2 + x_3 y_3`.
//!
//! A frame is a Lorentz matrix whose columns are the position, the unit
//! tangent and two unit normals. Planar curves stay in `x_3 = 0`.

use nalgebra::{Matrix4, Vector4};

pub type Point = Vector4<f64>;
pub type Frame = Matrix4<f64>;

pub fn minkowski(x: &Point, y: &Point) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
}

pub fn origin() -> Point {
    Vector4::new(1.0, 0.0, 0.0, 0.0)
}

/// Hyperbolic distance. The chord form keeps nearby points accurate; far
/// apart it cancels badly and `acosh(-⟨p, q⟩)` takes over.
pub fn distance(p: &Point, q: &Point) -> f64 {
    let cosh_d = -minkowski(p, q);
    if cosh_d > 2.0 {
        return cosh_d.acosh();
    }
    let d = p - q;
    let chord2 = minkowski(&d, &d).max(0.0);
    2.0 * (0.5 * chord2.sqrt()).asinh()
}

/// Geodesic flow by arc length `s` along the frame tangent.
pub fn boost(s: f64) -> Frame {
    let (ch, sh) = (s.cosh(), s.sinh());
    let mut m = Frame::identity();
    m[(0, 0)] = ch;
    m[(0, 1)] = sh;
    m[(1, 0)] = sh;
    m[(1, 1)] = ch;
    m
}

/// Rotation of the tangent space by `angle` in the plane of frame axes `i`, `j`
/// (taking axis `i` towards axis `j`).
fn rotation(i: usize, j: usize, angle: f64) -> Frame {
    let (c, s) = (angle.cos(), angle.sin());
    let mut m = Frame::identity();
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(j, i)] = s;
    m[(i, j)] = -s;
    m
}

/// Turns the tangent by `angle` towards the first normal rotated by `torsion`
/// about the tangent.
pub fn bend(angle: f64, torsion: f64) -> Frame {
    if torsion == 0.0 {
        return rotation(1, 2, angle);
    }
    rotation(2, 3, torsion) * rotation(1, 2, angle) * rotation(2, 3, -torsion)
}

/// Unit tangent at `p` pointing away from `o`, or `None` when `p = o`.
pub fn radial_direction(o: &Point, p: &Point) -> Option<Point> {
    let u = -(o + p * minkowski(o, p));
    let n2 = minkowski(&u, &u);
    if n2 > 0.0 && n2.is_finite() {
        Some(u / n2.sqrt())
    } else {
        None
    }
}

/// Angle between two unit tangent vectors at the same point.
pub fn tangent_angle(a: &Point, b: &Point) -> f64 {
    let c = minkowski(a, b);
    let perp = b - a * c;
    let s = minkowski(&perp, &perp).max(0.0).sqrt();
    s.atan2(c)
}

/// Inverse of a Lorentz matrix, `J Fᵀ J` with `J = diag(-1, 1, 1, 1)`.
pub fn lorentz_inverse(f: &Frame) -> Frame {
    let mut inv = f.transpose();
    for k in 1..4 {
        inv[(0, k)] = -inv[(0, k)];
        inv[(k, 0)] = -inv[(k, 0)];
    }
    inv
}

/// Unit tangent at the base point of `frame` pointing away from `o`,
/// expressed in the frame's own coordinates (base point at the origin).
///
/// Working in the frame avoids the cancellation that global coordinates of
/// size `e^s` cause far from `o`.
pub fn local_radial(frame: &Frame, o: &Point) -> Option<Point> {
    let q = lorentz_inverse(frame) * o;
    let u = Vector4::new(0.0, -q[1], -q[2], -q[3]);
    let n = u.norm();
    if n > 0.0 && n.is_finite() {
        Some(u / n)
    } else {
        None
    }
}

/// Unit tangent at `p` pointing towards `q`.
pub fn direction_to(p: &Point, q: &Point) -> Option<Point> {
    let u = q + p * minkowski(p, q);
    let n2 = minkowski(&u, &u);
    if n2 > 0.0 && n2.is_finite() {
        Some(u / n2.sqrt())
    } else {
        None
    }
}

/// Upper half-plane point `x + iy` on the hyperboloid (planar slice).
pub fn from_half_plane(x: f64, y: f64) -> Point {
    let r2 = x * x + y * y;
    Vector4::new((1.0 + r2) / (2.0 * y), x / y, (r2 - 1.0) / (2.0 * y), 0.0)
}

/// Klein model coordinates of a planar point; geodesics become chords.
pub fn klein(p: &Point) -> (f64, f64) {
    (p[1] / p[0], p[2] / p[0])
}
