//! Möbius transformations of the sphere at infinity as normalized 2x2
//! complex matrices modulo sign.
//!
//! Every value is kept with determinant 1 and a canonical sign (the first
//! entry of `(a, b, c, d)` with modulus above 1e-12 has nonnegative real
//! part, ties broken by nonnegative imaginary part), so matrices that differ
//! only by sign compare entrywise equal.

use num_complex::Complex64 as Complex;
use thiserror::Error;

use crate::sphere::{cap_through, BoundaryPoint, GeometryError, SphericalCap};

/// Threshold on `|tr² − 4|` separating parabolic from loxodromic, and on the
/// entrywise distance to the identity. Parabolicity is not decidable in
/// floating point without such a cut; 1e-9 sits well above compose noise at
/// word length ~20 and well below the trace gaps of the shipped groups.
pub const CLASSIFY_TOL: f64 = 1e-9;

const DET_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum MoebiusError {
    #[error("matrix is numerically singular (|det| = {0:.3e})")]
    Singular(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryType {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    Repelling,
    Neutral,
}

#[derive(Debug, Clone, Copy)]
pub struct FixedPoint {
    pub point: BoundaryPoint,
    pub stability: Stability,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub kind: IsometryType,
    pub fixed_points: Vec<FixedPoint>,
}

impl Classification {
    /// The limit-set datum of the element: attracting fixed point of a
    /// loxodromic, the unique fixed point of a parabolic, nothing otherwise.
    pub fn limit_datum(&self) -> Option<BoundaryPoint> {
        match self.kind {
            IsometryType::Loxodromic => self
                .fixed_points
                .iter()
                .find(|f| f.stability == Stability::Attracting)
                .map(|f| f.point),
            IsometryType::Parabolic => self.fixed_points.first().map(|f| f.point),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moebius {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Moebius {
    /// Builds and normalizes a transformation from matrix entries.
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() < 1e-30 {
            return Err(MoebiusError::Singular(det.norm()));
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
        .canonical_sign())
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, MoebiusError> {
        Self::new(
            Complex::new(a, 0.0),
            Complex::new(b, 0.0),
            Complex::new(c, 0.0),
            Complex::new(d, 0.0),
        )
    }

    pub fn identity() -> Self {
        Self {
            a: Complex::new(1.0, 0.0),
            b: Complex::new(0.0, 0.0),
            c: Complex::new(0.0, 0.0),
            d: Complex::new(1.0, 0.0),
        }
    }

    /// `z ↦ z + t`.
    pub fn translation(t: Complex) -> Self {
        Self {
            a: Complex::new(1.0, 0.0),
            b: t,
            c: Complex::new(0.0, 0.0),
            d: Complex::new(1.0, 0.0),
        }
        .canonical_sign()
    }

    /// `z ↦ k z` for `k > 0`, fixing `0` and `∞`.
    pub fn scaling(k: f64) -> Self {
        let s = k.sqrt();
        Self {
            a: Complex::new(s, 0.0),
            b: Complex::new(0.0, 0.0),
            c: Complex::new(0.0, 0.0),
            d: Complex::new(1.0 / s, 0.0),
        }
        .canonical_sign()
    }

    /// Loxodromic with given finite attracting/repelling fixed points and
    /// derivative `m` at the attracting one (`0 < |m| < 1`).
    pub fn loxodromic(
        attracting: Complex,
        repelling: Complex,
        m: f64,
    ) -> Result<Self, MoebiusError> {
        // Conjugate z ↦ m z by the map sending (attracting, repelling) to (0, ∞).
        let h = Self::new(
            Complex::new(1.0, 0.0),
            -attracting,
            Complex::new(1.0, 0.0),
            -repelling,
        )?;
        let core = Self::scaling(m);
        Ok(h.inverse().compose(&core).compose(&h))
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex {
        self.a + self.d
    }

    fn canonical_sign(self) -> Self {
        let entries = [self.a, self.b, self.c, self.d];
        for e in entries {
            if e.norm() > 1e-12 {
                let flip = e.re < 0.0 || (e.re == 0.0 && e.im < 0.0);
                if flip {
                    return Self {
                        a: -self.a,
                        b: -self.b,
                        c: -self.c,
                        d: -self.d,
                    };
                }
                return self;
            }
        }
        self
    }

    fn renormalize(self) -> Self {
        // For entries beyond ~1e6 the computed determinant of a product is
        // dominated by cancellation noise; the induced sphere map is
        // projective, so leave the scale alone there. Within the
        // trustworthy range, rescale to determinant 1.
        let max_entry = self
            .a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm());
        if max_entry > 1e6 {
            return self.canonical_sign();
        }
        let det = self.det();
        if !det.is_finite() || det.norm() < 1e-30 {
            return self.canonical_sign();
        }
        let s = det.sqrt();
        Self {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        }
        .canonical_sign()
    }

    /// Group law: the matrix product `self · other`, renormalized.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
        .renormalize()
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .canonical_sign()
    }

    /// Action on the sphere at infinity through homogeneous coordinates, so
    /// the point at infinity needs no special casing.
    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        let (z1, z2) = p.to_homogeneous();
        BoundaryPoint::from_homogeneous(self.a * z1 + self.b * z2, self.c * z1 + self.d * z2)
    }

    pub fn apply_complex(&self, z: Complex) -> BoundaryPoint {
        self.apply(BoundaryPoint::from_complex(z))
    }

    /// Largest entrywise deviation between the canonical forms.
    pub fn entrywise_distance(&self, other: &Self) -> f64 {
        (self.a - other.a)
            .norm()
            .max((self.b - other.b).norm())
            .max((self.c - other.c).norm())
            .max((self.d - other.d).norm())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        matrix_distance(self, &Moebius::identity()) <= tol
    }

    /// Dynamical type and fixed points, with the default parabolicity cut.
    pub fn classify(&self) -> Classification {
        self.classify_with(CLASSIFY_TOL)
    }

    pub fn classify_with(&self, tol: f64) -> Classification {
        if self.is_identity(tol) {
            return Classification {
                kind: IsometryType::Identity,
                fixed_points: Vec::new(),
            };
        }
        // Scale-free trace square; equals tr² for determinant-1 matrices.
        let t2 = self.trace() * self.trace() / self.det();
        if !t2.is_finite() {
            let (p1, p2) = self.fixed_point_pair();
            let (m1, m2) = (self.derivative_modulus(p1), self.derivative_modulus(p2));
            let (att, rep) = if m1 < m2 { (p1, p2) } else { (p2, p1) };
            return Classification {
                kind: IsometryType::Loxodromic,
                fixed_points: vec![
                    FixedPoint {
                        point: att,
                        stability: Stability::Attracting,
                    },
                    FixedPoint {
                        point: rep,
                        stability: Stability::Repelling,
                    },
                ],
            };
        }
        let from_four = (t2 - Complex::new(4.0, 0.0)).norm();
        if from_four <= tol {
            let point = if self.c.norm() > 1e-13 {
                // Double root of c z² + (d − a) z − b.
                BoundaryPoint::from_homogeneous(self.a - self.d, 2.0 * self.c)
            } else {
                BoundaryPoint::infinity()
            };
            return Classification {
                kind: IsometryType::Parabolic,
                fixed_points: vec![FixedPoint {
                    point,
                    stability: Stability::Neutral,
                }],
            };
        }
        let (p1, p2) = self.fixed_point_pair();
        if t2.im.abs() <= tol && t2.re >= -tol && t2.re < 4.0 {
            let mut pts = vec![p1, p2];
            pts.sort_by(|x, y| x.cmp_lex(y));
            return Classification {
                kind: IsometryType::Elliptic,
                fixed_points: pts
                    .into_iter()
                    .map(|point| FixedPoint {
                        point,
                        stability: Stability::Neutral,
                    })
                    .collect(),
            };
        }
        let (m1, m2) = (self.derivative_modulus(p1), self.derivative_modulus(p2));
        let (att, rep) = if m1 < m2 { (p1, p2) } else { (p2, p1) };
        Classification {
            kind: IsometryType::Loxodromic,
            fixed_points: vec![
                FixedPoint {
                    point: att,
                    stability: Stability::Attracting,
                },
                FixedPoint {
                    point: rep,
                    stability: Stability::Repelling,
                },
            ],
        }
    }

    /// Both roots of `c z² + (d − a) z − b = 0` on the sphere.
    fn fixed_point_pair(&self) -> (BoundaryPoint, BoundaryPoint) {
        if self.c.norm() <= 1e-13 {
            let inf = BoundaryPoint::infinity();
            if (self.d - self.a).norm() <= 1e-13 {
                return (inf, inf);
            }
            let finite = BoundaryPoint::from_homogeneous(self.b, self.d - self.a);
            return (inf, finite);
        }
        let disc = ((self.d - self.a) * (self.d - self.a)
            + 4.0 * self.b * self.c)
            .sqrt();
        let two_c = 2.0 * self.c;
        (
            BoundaryPoint::from_homogeneous(self.a - self.d + disc, two_c),
            BoundaryPoint::from_homogeneous(self.a - self.d - disc, two_c),
        )
    }

    /// `|f'|` at a fixed point, evaluated in the chart at infinity when
    /// needed. Uses the computed determinant so the value is scale-free.
    fn derivative_modulus(&self, p: BoundaryPoint) -> f64 {
        let det = self.det().norm();
        match p.to_complex() {
            Some(z) => det / (self.c * z + self.d).norm_sqr(),
            None => det / self.a.norm_sqr(),
        }
    }
}

/// Sign-aware Frobenius distance `min(‖A−B‖_F, ‖A+B‖_F)`: the natural matrix
/// metric for transformations defined modulo sign.
pub fn matrix_distance(f: &Moebius, g: &Moebius) -> f64 {
    let minus = ((f.a - g.a).norm_sqr()
        + (f.b - g.b).norm_sqr()
        + (f.c - g.c).norm_sqr()
        + (f.d - g.d).norm_sqr())
    .sqrt();
    let plus = ((f.a + g.a).norm_sqr()
        + (f.b + g.b).norm_sqr()
        + (f.c + g.c).norm_sqr()
        + (f.d + g.d).norm_sqr())
    .sqrt();
    minus.min(plus)
}

/// The exact image cap: Möbius maps send circles to circles, so three
/// boundary samples determine the image circle and the image of the center
/// picks the side.
pub fn cap_image(f: &Moebius, c: &SphericalCap) -> Result<SphericalCap, GeometryError> {
    let q1 = f.apply(c.boundary_point(0.0));
    let q2 = f.apply(c.boundary_point(2.0 * std::f64::consts::PI / 3.0));
    let q3 = f.apply(c.boundary_point(4.0 * std::f64::consts::PI / 3.0));
    cap_through(q1, q2, q3, f.apply(c.center()))
}

/// Determinant drift guard used by validation paths.
pub fn det_ok(f: &Moebius) -> bool {
    (f.det() - Complex::new(1.0, 0.0)).norm() <= DET_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::boundary_distance;
    use std::f64::consts::PI;

    fn cx(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn compose_landmarks() {
        let g = Moebius::from_real(1.0, 2.5, 0.0, 1.0).unwrap();
        let id = Moebius::identity();
        assert!(id.compose(&g).entrywise_distance(&g) < 1e-15);

        let f = Moebius::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        let finv = Moebius::from_real(0.5, 0.0, 0.0, 2.0).unwrap();
        assert!(f.compose(&finv).entrywise_distance(&id) < 1e-15);

        let p = Moebius::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        let p2 = Moebius::from_real(1.0, 2.0, 0.0, 1.0).unwrap();
        assert!(p.compose(&p).entrywise_distance(&p2) < 1e-15);
    }

    #[test]
    fn canonical_sign_is_idempotent() {
        let m = Moebius::new(cx(0.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)).unwrap();
        // First nonzero entry is b; after canonicalization it is +1.
        assert!((m.b - cx(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(m.canonical_sign(), m);
        // -I normalizes to I.
        let neg =
            Moebius::new(cx(-1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)).unwrap();
        assert!(neg.entrywise_distance(&Moebius::identity()) < 1e-15);
    }

    #[test]
    fn apply_landmarks() {
        // z ↦ -1/z sends 0 to ∞.
        let s = Moebius::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        let img = s.apply_complex(cx(0.0, 0.0));
        assert!(boundary_distance(img, BoundaryPoint::infinity()) < 1e-12);

        // Parabolic fixes ∞.
        let p = Moebius::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        let img = p.apply(BoundaryPoint::infinity());
        assert!(boundary_distance(img, BoundaryPoint::infinity()) < 1e-12);

        // z ↦ 4z sends 1 to 4.
        let f = Moebius::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        let img = f.apply_complex(cx(1.0, 0.0));
        assert!(boundary_distance(img, BoundaryPoint::from_complex(cx(4.0, 0.0))) < 1e-12);
    }

    #[test]
    fn classify_landmarks() {
        let p = Moebius::from_real(1.0, 1.0, 0.0, 1.0).unwrap().classify();
        assert_eq!(p.kind, IsometryType::Parabolic);
        assert!(boundary_distance(p.fixed_points[0].point, BoundaryPoint::infinity()) < 1e-12);
        assert_eq!(p.fixed_points[0].stability, Stability::Neutral);

        let l = Moebius::from_real(2.0, 0.0, 0.0, 0.5).unwrap().classify();
        assert_eq!(l.kind, IsometryType::Loxodromic);
        let att = l.fixed_points[0];
        let rep = l.fixed_points[1];
        assert_eq!(att.stability, Stability::Attracting);
        assert!(boundary_distance(att.point, BoundaryPoint::infinity()) < 1e-12);
        assert_eq!(rep.stability, Stability::Repelling);
        assert!(boundary_distance(rep.point, BoundaryPoint::from_complex(cx(0.0, 0.0))) < 1e-12);

        let e = Moebius::from_real(0.0, -1.0, 1.0, 0.0).unwrap().classify();
        assert_eq!(e.kind, IsometryType::Elliptic);
        let pts: Vec<_> = e.fixed_points.iter().map(|f| f.point).collect();
        let i = BoundaryPoint::from_complex(cx(0.0, 1.0));
        let mi = BoundaryPoint::from_complex(cx(0.0, -1.0));
        assert!(pts
            .iter()
            .any(|p| boundary_distance(*p, i) < 1e-12));
        assert!(pts
            .iter()
            .any(|p| boundary_distance(*p, mi) < 1e-12));

        let id = Moebius::identity().classify();
        assert_eq!(id.kind, IsometryType::Identity);
    }

    #[test]
    fn cap_image_landmarks() {
        let c = crate::sphere::cap_from_disk(cx(0.3, -0.2), 0.7).unwrap();
        let id_img = cap_image(&Moebius::identity(), &c).unwrap();
        assert!(boundary_distance(id_img.center(), c.center()) < 1e-12);
        assert!((id_img.radius() - c.radius()).abs() < 1e-12);

        // Hemisphere swap under z ↦ -1/z.
        let hemi = SphericalCap::new(BoundaryPoint::infinity(), PI / 2.0).unwrap();
        let s = Moebius::from_real(0.0, -1.0, 1.0, 0.0).unwrap();
        let img = cap_image(&s, &hemi).unwrap();
        assert!(boundary_distance(img.center(), BoundaryPoint::from_complex(cx(0.0, 0.0))) < 1e-9);
        assert!((img.radius() - PI / 2.0).abs() < 1e-9);

        // Brute-force check: 360 boundary samples of z ↦ 2z land on the
        // boundary circle of the computed image cap.
        let f = Moebius::scaling(2.0);
        let c0 = crate::sphere::cap_from_disk(cx(0.0, 0.0), 1.0).unwrap();
        let img = cap_image(&f, &c0).unwrap();
        for k in 0..360 {
            let theta = 2.0 * PI * (k as f64) / 360.0;
            let q = f.apply(c0.boundary_point(theta));
            let err = (boundary_distance(img.center(), q) - img.radius()).abs();
            assert!(err < 1e-9, "boundary sample off circle by {err}");
        }
    }

    #[test]
    fn loxodromic_constructor_fixes_given_points() {
        let g = Moebius::loxodromic(cx(0.0, 0.0), cx(0.5, 0.0), 1.0 / 16.0).unwrap();
        let cls = g.classify();
        assert_eq!(cls.kind, IsometryType::Loxodromic);
        assert!(
            boundary_distance(cls.fixed_points[0].point, BoundaryPoint::from_complex(cx(0.0, 0.0)))
                < 1e-10
        );
        assert!(
            boundary_distance(cls.fixed_points[1].point, BoundaryPoint::from_complex(cx(0.5, 0.0)))
                < 1e-10
        );
    }

    #[test]
    fn matrix_distance_is_sign_aware() {
        let f = Moebius::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        let mut neg = f;
        neg.a = -neg.a;
        neg.b = -neg.b;
        neg.c = -neg.c;
        neg.d = -neg.d;
        assert!(matrix_distance(&f, &neg) < 1e-15);
    }
}
