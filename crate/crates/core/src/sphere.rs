//! Points of the sphere at infinity and spherical-cap calculus.
//!
//! The sphere is identified with the extended complex plane by inverse
//! stereographic projection from the north pole: `∞` sits at the north pole
//! `(0, 0, 1)` and `0` at the south pole. Distances are angular (the round
//! metric), so antipodal points are at distance `π`.

use num_complex::Complex64 as Complex;
use thiserror::Error;

/// Tolerance on the unit-norm invariant of [`BoundaryPoint`].
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("inflated cap radius {0} reaches pi, no longer a proper cap")]
    CapTooLarge(f64),
    #[error("cap radius {0} outside (0, pi)")]
    InvalidCapRadius(f64),
    #[error("circle through sampled points is numerically degenerate")]
    DegenerateCircle,
    #[error("cannot normalize a near-zero vector")]
    ZeroVector,
}

/// A point of the sphere at infinity, stored as a unit vector in R^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    v: [f64; 3],
}

impl BoundaryPoint {
    /// Builds a point from any nonzero vector, normalizing it.
    pub fn new(v: [f64; 3]) -> Result<Self, GeometryError> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !n.is_finite() || n < 1e-100 {
            return Err(GeometryError::ZeroVector);
        }
        Ok(Self {
            v: [v[0] / n, v[1] / n, v[2] / n],
        })
    }

    /// The point of the extended plane at the north pole.
    pub fn infinity() -> Self {
        Self { v: [0.0, 0.0, 1.0] }
    }

    pub fn from_complex(w: Complex) -> Self {
        Self::from_homogeneous(w, Complex::new(1.0, 0.0))
    }

    /// Point of the sphere for the homogeneous pair `[z1 : z2]`, i.e. the
    /// extended complex number `z1 / z2`. Robust for any pair that is not
    /// numerically `(0, 0)`.
    pub fn from_homogeneous(z1: Complex, z2: Complex) -> Self {
        let s = z1
            .re
            .abs()
            .max(z1.im.abs())
            .max(z2.re.abs())
            .max(z2.im.abs());
        if !s.is_finite() {
            // An infinite entry dominates; treat the pair projectively.
            if z1.re.abs().max(z1.im.abs()) >= z2.re.abs().max(z2.im.abs()) {
                return Self::infinity();
            }
            return Self { v: [0.0, 0.0, -1.0] };
        }
        if s == 0.0 {
            return Self::infinity();
        }
        let z1 = z1 / s;
        let z2 = z2 / s;
        let d = z1.norm_sqr() + z2.norm_sqr();
        let cross = z1 * z2.conj();
        let v = [
            2.0 * cross.re / d,
            2.0 * cross.im / d,
            (z1.norm_sqr() - z2.norm_sqr()) / d,
        ];
        Self::new(v).expect("homogeneous pair normalizes")
    }

    /// Homogeneous coordinates `[z1 : z2]` of the point, chart chosen for
    /// numerical stability near either pole.
    pub fn to_homogeneous(self) -> (Complex, Complex) {
        let [x, y, z] = self.v;
        if z <= 0.0 {
            (Complex::new(x, y), Complex::new(1.0 - z, 0.0))
        } else {
            (Complex::new(1.0 + z, 0.0), Complex::new(x, -y))
        }
    }

    /// The finite complex number under stereographic projection, or `None`
    /// for the north pole.
    pub fn to_complex(self) -> Option<Complex> {
        let [x, y, z] = self.v;
        if 1.0 - z < 1e-13 {
            return None;
        }
        Some(Complex::new(x / (1.0 - z), y / (1.0 - z)))
    }

    pub fn coords(self) -> [f64; 3] {
        self.v
    }

    pub fn antipode(self) -> Self {
        Self {
            v: [-self.v[0], -self.v[1], -self.v[2]],
        }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.v[0] * other.v[0] + self.v[1] * other.v[1] + self.v[2] * other.v[2]
    }

    /// Euclidean distance in R^3; equals `2 sin(θ/2)` for angular distance θ.
    /// Precise at small separations where `acos` loses digits.
    pub fn chord(self, other: Self) -> f64 {
        let dx = self.v[0] - other.v[0];
        let dy = self.v[1] - other.v[1];
        let dz = self.v[2] - other.v[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Total order on coordinates, used to canonicalize point lists.
    pub fn cmp_lex(&self, other: &Self) -> std::cmp::Ordering {
        for i in 0..3 {
            match self.v[i].total_cmp(&other.v[i]) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    }
}

/// Angular distance on the round sphere, in `[0, π]`.
pub fn boundary_distance(p: BoundaryPoint, q: BoundaryPoint) -> f64 {
    // Chord-based arcsine keeps full precision at tiny separations.
    let half = (p.chord(q) / 2.0).clamp(-1.0, 1.0);
    2.0 * half.asin()
}

pub fn chord_to_angle(chord: f64) -> f64 {
    2.0 * (chord / 2.0).clamp(-1.0, 1.0).asin()
}

/// An open metric ball on the round sphere. Radius is angular and kept in
/// `(0, π)`, so a cap is always a proper subset of the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    center: BoundaryPoint,
    radius: f64,
}

impl SphericalCap {
    pub fn new(center: BoundaryPoint, radius: f64) -> Result<Self, GeometryError> {
        if !radius.is_finite() || radius <= 0.0 || radius >= std::f64::consts::PI {
            return Err(GeometryError::InvalidCapRadius(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> BoundaryPoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Membership in the open cap.
    pub fn contains(&self, p: BoundaryPoint) -> bool {
        boundary_distance(self.center, p) < self.radius
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, p: BoundaryPoint) -> bool {
        boundary_distance(self.center, p) <= self.radius
    }

    /// The cap on the far side of the same boundary circle. As a set this is
    /// the complement of the closure of `self` (up to the shared circle).
    pub fn complement(&self) -> SphericalCap {
        SphericalCap {
            center: self.center.antipode(),
            radius: std::f64::consts::PI - self.radius,
        }
    }

    /// A point on the boundary circle at angle `theta` in a fixed
    /// orthonormal frame around the center.
    pub fn boundary_point(&self, theta: f64) -> BoundaryPoint {
        let (u1, u2) = orthonormal_frame(self.center);
        let c = self.center.coords();
        let (cr, sr) = (self.radius.cos(), self.radius.sin());
        let (ct, st) = (theta.cos(), theta.sin());
        let v = [
            cr * c[0] + sr * (ct * u1[0] + st * u2[0]),
            cr * c[1] + sr * (ct * u1[1] + st * u2[1]),
            cr * c[2] + sr * (ct * u1[2] + st * u2[2]),
        ];
        BoundaryPoint::new(v).expect("boundary point is unit")
    }
}

/// Deterministic orthonormal frame perpendicular to `c`.
fn orthonormal_frame(c: BoundaryPoint) -> ([f64; 3], [f64; 3]) {
    let v = c.coords();
    // Axis least aligned with c, for a well-conditioned cross product.
    let mut k = 0;
    for i in 1..3 {
        if v[i].abs() < v[k].abs() {
            k = i;
        }
    }
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let mut u1 = cross(v, e);
    let n1 = norm(u1);
    u1 = [u1[0] / n1, u1[1] / n1, u1[2] / n1];
    let u2 = cross(v, u1);
    (u1, u2)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Grows the cap by `eps`; the result is the set of points within angular
/// distance `eps` of the original cap.
pub fn cap_inflate(c: &SphericalCap, eps: f64) -> Result<SphericalCap, GeometryError> {
    let r = c.radius + eps;
    if r >= std::f64::consts::PI {
        return Err(GeometryError::CapTooLarge(r));
    }
    SphericalCap::new(c.center, r)
}

/// Exact cap-in-cap test on the round sphere: the closure of `inner` lies in
/// the closure of `outer` iff the center gap plus the inner radius fits.
pub fn cap_contains(outer: &SphericalCap, inner: &SphericalCap) -> bool {
    boundary_distance(outer.center, inner.center) + inner.radius <= outer.radius
}

/// The cap whose boundary passes through three given points, on the side
/// containing `inside`. Radii are recovered from chords so that very small
/// and very large circles stay accurate.
pub fn cap_through(
    p1: BoundaryPoint,
    p2: BoundaryPoint,
    p3: BoundaryPoint,
    inside: BoundaryPoint,
) -> Result<SphericalCap, GeometryError> {
    let a = p1.coords();
    let b = p2.coords();
    let c = p3.coords();
    let d1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let d2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let (n1, n2) = (norm(d1), norm(d2));
    if n1 < 1e-15 || n2 < 1e-15 {
        return Err(GeometryError::DegenerateCircle);
    }
    let d1 = [d1[0] / n1, d1[1] / n1, d1[2] / n1];
    let d2 = [d2[0] / n2, d2[1] / n2, d2[2] / n2];
    let n = cross(d1, d2);
    if norm(n) < 1e-9 {
        return Err(GeometryError::DegenerateCircle);
    }
    // Keep the axis on the near side of the circle; the chord to that
    // endpoint stays below sqrt(2) where the angle recovery is precise.
    let mut axis = BoundaryPoint::new(n)?;
    if axis.dot(p1) < 0.0 {
        axis = axis.antipode();
    }
    let chord = (axis.chord(p1) + axis.chord(p2) + axis.chord(p3)) / 3.0;
    let r_near = chord_to_angle(chord);
    if r_near <= 0.0 {
        return Err(GeometryError::DegenerateCircle);
    }
    if boundary_distance(inside, axis) <= r_near {
        SphericalCap::new(axis, r_near)
    } else {
        SphericalCap::new(axis.antipode(), std::f64::consts::PI - r_near)
    }
}

/// The cap corresponding to an open Euclidean disk in the plane.
pub fn cap_from_disk(center: Complex, radius: f64) -> Result<SphericalCap, GeometryError> {
    let p1 = BoundaryPoint::from_complex(center + radius);
    let p2 = BoundaryPoint::from_complex(center - radius);
    let p3 = BoundaryPoint::from_complex(center + Complex::new(0.0, radius));
    cap_through(p1, p2, p3, BoundaryPoint::from_complex(center))
}

/// The cap `{|z| > cut} ∪ {∞}` around the north pole.
pub fn cap_beyond_radius(cut: f64) -> Result<SphericalCap, GeometryError> {
    let p1 = BoundaryPoint::from_complex(Complex::new(cut, 0.0));
    let p2 = BoundaryPoint::from_complex(Complex::new(-cut, 0.0));
    let p3 = BoundaryPoint::from_complex(Complex::new(0.0, cut));
    cap_through(p1, p2, p3, BoundaryPoint::infinity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn bp(x: f64, y: f64, z: f64) -> BoundaryPoint {
        BoundaryPoint::new([x, y, z]).unwrap()
    }

    #[test]
    fn stereographic_landmarks() {
        let zero = BoundaryPoint::from_complex(Complex::new(0.0, 0.0));
        assert!(zero.chord(bp(0.0, 0.0, -1.0)) < 1e-15);
        let one = BoundaryPoint::from_complex(Complex::new(1.0, 0.0));
        assert!(one.chord(bp(1.0, 0.0, 0.0)) < 1e-15);
        let inf = BoundaryPoint::infinity();
        assert_eq!(inf.to_complex(), None);
        let w = Complex::new(0.3, -1.7);
        let back = BoundaryPoint::from_complex(w).to_complex().unwrap();
        assert!((back - w).norm() < 1e-14);
    }

    #[test]
    fn distance_landmarks() {
        let zero = BoundaryPoint::from_complex(Complex::new(0.0, 0.0));
        let inf = BoundaryPoint::infinity();
        assert!(boundary_distance(zero, zero).abs() < 1e-15);
        assert!((boundary_distance(zero, inf) - PI).abs() < 1e-15);
        let one = BoundaryPoint::from_complex(Complex::new(1.0, 0.0));
        let neg = BoundaryPoint::from_complex(Complex::new(-1.0, 0.0));
        assert!((boundary_distance(one, neg) - PI).abs() < 1e-15);
    }

    #[test]
    fn cap_membership_and_inflate() {
        let c = SphericalCap::new(BoundaryPoint::infinity(), PI / 4.0).unwrap();
        let inflated = cap_inflate(&c, PI / 4.0).unwrap();
        assert!((inflated.radius() - PI / 2.0).abs() < 1e-15);
        assert_eq!(cap_inflate(&c, 0.0).unwrap(), c);
        // Point at distance radius + eps/2 lies inside the inflated cap.
        let eps = 0.3;
        let grown = cap_inflate(&c, eps).unwrap();
        let probe = {
            // Walk radius + eps/2 from the center along a great circle.
            let t = c.radius() + eps / 2.0;
            let dirpt = c.boundary_point(0.7);
            let c0 = c.center().coords();
            let d0 = dirpt.coords();
            let cosr = c.radius().cos();
            let sinr = c.radius().sin();
            let tang = [
                (d0[0] - cosr * c0[0]) / sinr,
                (d0[1] - cosr * c0[1]) / sinr,
                (d0[2] - cosr * c0[2]) / sinr,
            ];
            BoundaryPoint::new([
                t.cos() * c0[0] + t.sin() * tang[0],
                t.cos() * c0[1] + t.sin() * tang[1],
                t.cos() * c0[2] + t.sin() * tang[2],
            ])
            .unwrap()
        };
        assert!(grown.contains(probe));
        assert!(!c.contains(probe));
        // Overflow is rejected.
        let big = SphericalCap::new(BoundaryPoint::infinity(), PI - 1e-6).unwrap();
        assert!(matches!(
            cap_inflate(&big, 1e-3),
            Err(GeometryError::CapTooLarge(_))
        ));
    }

    #[test]
    fn cap_contains_basics() {
        let n = BoundaryPoint::infinity();
        let big = SphericalCap::new(n, PI / 2.0).unwrap();
        let small = SphericalCap::new(n, PI / 4.0).unwrap();
        assert!(cap_contains(&big, &small));
        assert!(!cap_contains(&small, &big));
        assert!(cap_contains(&big, &big));
    }

    #[test]
    fn disk_caps_match_plane_geometry() {
        let cap = cap_from_disk(Complex::new(0.25, 0.0), 0.5).unwrap();
        assert!(cap.contains(BoundaryPoint::from_complex(Complex::new(0.25, 0.0))));
        assert!(cap.contains(BoundaryPoint::from_complex(Complex::new(0.6, 0.0))));
        assert!(!cap.contains(BoundaryPoint::from_complex(Complex::new(0.8, 0.0))));
        assert!(!cap.contains(BoundaryPoint::infinity()));

        let out = cap_beyond_radius(3.0).unwrap();
        assert!(out.contains(BoundaryPoint::infinity()));
        assert!(out.contains(BoundaryPoint::from_complex(Complex::new(5.0, 0.0))));
        assert!(!out.contains(BoundaryPoint::from_complex(Complex::new(2.0, 0.0))));

        // Complement of the disk cap contains infinity and excludes the disk.
        let comp = cap.complement();
        assert!(comp.contains(BoundaryPoint::infinity()));
        assert!(!comp.contains(BoundaryPoint::from_complex(Complex::new(0.25, 0.0))));
    }

    #[test]
    fn tiny_circles_keep_precision() {
        // A circle of angular radius 1e-8 must be recoverable from three of
        // its boundary points without collapsing to radius zero.
        let c = SphericalCap::new(bp(0.2, -0.3, 0.9), 1e-8).unwrap();
        let q1 = c.boundary_point(0.0);
        let q2 = c.boundary_point(2.0 * PI / 3.0);
        let q3 = c.boundary_point(4.0 * PI / 3.0);
        let rec = cap_through(q1, q2, q3, c.center()).unwrap();
        assert!((rec.radius() - 1e-8).abs() < 5e-9);
        assert!(boundary_distance(rec.center(), c.center()) < 5e-9);
    }
}
