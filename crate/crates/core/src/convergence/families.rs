//! Built-in representation fixtures and one-parameter deformation families.
//!
//! The base fixtures are ping-pong groups with dyadic matrix entries, chosen
//! so cap inclusions hold with wide margins:
//!
//! * `schottky`: two loxodromics, multiplier 16, fixed points `0, ∞` and
//!   `±1`, with four pairwise disjoint caps.
//! * `cusped`: free product of a parabolic `z ↦ z + 40` with a loxodromic
//!   fixing `0` and `1/2`. The long translation keeps all parabolic
//!   translates of the loxodromic caps far from the cusp's witness region.
//! * `sanov`: the classical free subgroup generated by `[[1,2],[0,1]]` and
//!   `[[1,0],[2,1]]`, preserving the real line.

use std::collections::BTreeMap;

use num_complex::Complex64 as Complex;
use thiserror::Error;

use crate::group::{GroupSpec, PeripheralSpec, Representation, Word};
use crate::moebius::Moebius;
use crate::sphere::{cap_beyond_radius, cap_from_disk, SphericalCap};

use super::RepFamily;

/// Default deformation scale. Small enough that every shipped family stays
/// within the default Chabauty tolerance at the last snapshots, large enough
/// to dominate floating-point noise by several orders of magnitude.
pub const DEFAULT_FAMILY_SCALE: f64 = 0.002;

/// Default scale of the pinch family: large enough that every snapshot's
/// trace stays decisively away from the parabolicity cut.
pub const DEFAULT_PINCH_SCALE: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("unknown builtin family `{0}`")]
    UnknownFamily(String),
    #[error("family needs at least one snapshot")]
    EmptyFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rate {
    /// `t_n = 2^-n`.
    Pow2,
    /// `t_n = 1/n`.
    Harmonic,
}

#[derive(Debug, Clone, Copy)]
pub struct FamilyParams {
    pub count: usize,
    pub rate: Rate,
    /// Deformation scale; `None` picks the per-family default.
    pub scale: Option<f64>,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            count: 10,
            rate: Rate::Pow2,
            scale: None,
        }
    }
}

impl FamilyParams {
    fn t(&self, n: u32) -> f64 {
        match self.rate {
            Rate::Pow2 => 2.0_f64.powi(-(n as i32)),
            Rate::Harmonic => 1.0 / n as f64,
        }
    }

    fn scale_or(&self, default: f64) -> f64 {
        self.scale.unwrap_or(default)
    }
}

pub fn schottky_group() -> GroupSpec {
    GroupSpec::free(&["a", "b"])
}

/// Rank-2 Schottky representation: `a: z ↦ 16z` and its conjugate by the
/// half-turn exchanging `{0, ∞}` with `{1, -1}`.
pub fn schottky_rep() -> Representation {
    let a = Moebius::scaling(16.0);
    let c = Moebius::new(
        Complex::new(1.0, 0.0),
        Complex::new(1.0, 0.0),
        Complex::new(-1.0, 0.0),
        Complex::new(1.0, 0.0),
    )
    .expect("conjugator is invertible");
    let b = c.compose(&a).compose(&c.inverse());
    Representation::new(schottky_group(), vec![a, b]).expect("fixture is valid")
}

/// Ping-pong caps for [`schottky_rep`], keyed by generator name, inverses
/// marked with a trailing `'`.
pub fn schottky_caps() -> BTreeMap<String, SphericalCap> {
    let mut caps = BTreeMap::new();
    caps.insert("a".into(), cap_beyond_radius(3.0).unwrap());
    caps.insert(
        "a'".into(),
        cap_from_disk(Complex::new(0.0, 0.0), 1.0 / 3.0).unwrap(),
    );
    caps.insert(
        "b".into(),
        cap_from_disk(Complex::new(-1.25, 0.0), 0.75).unwrap(),
    );
    caps.insert(
        "b'".into(),
        cap_from_disk(Complex::new(1.25, 0.0), 0.75).unwrap(),
    );
    caps
}

pub fn cusped_group() -> GroupSpec {
    GroupSpec::new(
        vec!["p".into(), "g".into()],
        vec![],
        vec![PeripheralSpec {
            name: "cusp".into(),
            generators: vec![Word::letter(0, false)],
            rank_hint: 1,
        }],
    )
    .expect("fixture group is valid")
}

/// Translation length of the cusped fixture's parabolic generator.
pub const CUSP_TRANSLATION: f64 = 40.0;

/// Free product of a parabolic and a loxodromic factor, with the parabolic
/// marked peripheral.
pub fn cusped_rep() -> Representation {
    let p = Moebius::translation(Complex::new(CUSP_TRANSLATION, 0.0));
    let g = Moebius::loxodromic(Complex::new(0.0, 0.0), Complex::new(0.5, 0.0), 1.0 / 16.0)
        .expect("loxodromic fixture");
    Representation::new(cusped_group(), vec![p, g]).expect("fixture is valid")
}

/// Caps for [`cusped_rep`]: disks around the loxodromic fixed points and,
/// for the cusp, the complement of a disk enclosing both of them.
pub fn cusped_caps() -> BTreeMap<String, SphericalCap> {
    let mut caps = BTreeMap::new();
    caps.insert(
        "g".into(),
        cap_from_disk(Complex::new(0.0, 0.0), 0.22).unwrap(),
    );
    caps.insert(
        "g'".into(),
        cap_from_disk(Complex::new(0.5, 0.0), 0.22).unwrap(),
    );
    caps.insert(
        "cusp".into(),
        cap_from_disk(Complex::new(0.25, 0.0), 0.52)
            .unwrap()
            .complement(),
    );
    caps
}

pub fn sanov_group() -> GroupSpec {
    GroupSpec::new(
        vec!["a".into(), "b".into()],
        vec![],
        vec![
            PeripheralSpec {
                name: "cusp_a".into(),
                generators: vec![Word::letter(0, false)],
                rank_hint: 1,
            },
            PeripheralSpec {
                name: "cusp_b".into(),
                generators: vec![Word::letter(1, false)],
                rank_hint: 1,
            },
        ],
    )
    .expect("fixture group is valid")
}

/// The free group generated by `[[1,2],[0,1]]` and `[[1,0],[2,1]]`; its
/// limit set lies on the great circle image of the real line.
pub fn sanov_rep() -> Representation {
    let a = Moebius::from_real(1.0, 2.0, 0.0, 1.0).unwrap();
    let b = Moebius::from_real(1.0, 0.0, 2.0, 1.0).unwrap();
    Representation::new(sanov_group(), vec![a, b]).expect("fixture is valid")
}

fn diag_conjugator(eps: f64) -> Moebius {
    Moebius::new(
        Complex::new(1.0 + eps, 0.0),
        Complex::new(0.0, 0.0),
        Complex::new(0.0, 0.0),
        Complex::new(1.0 / (1.0 + eps), 0.0),
    )
    .expect("diagonal conjugator")
}

/// Builtin one-parameter families over the base fixtures.
///
/// * `schottky_perturb`: conjugates the Schottky representation by
///   `diag(1 + s·t_n, (1 + s·t_n)^-1)`.
/// * `cusped_schottky`: perturbs the loxodromic multiplier of the cusped
///   fixture, keeping the parabolic generator fixed.
/// * `pinch`: sends the cusp generator to loxodromics of trace `2cosh(s·t_n)`
///   whose fixed points collide at the cusp in the limit.
/// * `elliptic_cusp`: sends the cusp generator to elliptic rotations by
///   `π/n` (order `2n`) converging to the parabolic; the stability
///   counterexample.
pub fn builtin_family(name: &str, params: &FamilyParams) -> Result<RepFamily, FamilyError> {
    if params.count == 0 {
        return Err(FamilyError::EmptyFamily);
    }
    let indices: Vec<u32> = (1..=params.count as u32).collect();
    match name {
        "schottky_perturb" => {
            let limit = schottky_rep();
            let spec = limit.spec().clone();
            let snapshots = indices
                .iter()
                .map(|&n| {
                    let c = diag_conjugator(params.scale * params.t(n));
                    let images = limit
                        .images()
                        .iter()
                        .map(|m| c.compose(m).compose(&c.inverse()))
                        .collect();
                    (n, Representation::new(spec.clone(), images).expect("conjugate rep"))
                })
                .collect();
            RepFamily::new(spec, snapshots, limit).map_err(|_| FamilyError::EmptyFamily)
        }
        "cusped_schottky" => {
            let limit = cusped_rep();
            let spec = limit.spec().clone();
            let p = limit.generator_image(0).clone();
            let snapshots = indices
                .iter()
                .map(|&n| {
                    let m = (1.0 / 16.0) * (1.0 + params.scale * params.t(n));
                    let g = Moebius::loxodromic(
                        Complex::new(0.0, 0.0),
                        Complex::new(0.5, 0.0),
                        m,
                    )
                    .expect("perturbed loxodromic");
                    (
                        n,
                        Representation::new(spec.clone(), vec![p.clone(), g])
                            .expect("snapshot rep"),
                    )
                })
                .collect();
            RepFamily::new(spec, snapshots, limit).map_err(|_| FamilyError::EmptyFamily)
        }
        "pinch" => {
            let limit = cusped_rep();
            let spec = limit.spec().clone();
            let g = limit.generator_image(1).clone();
            let snapshots = indices
                .iter()
                .map(|&n| {
                    let s = params.scale * params.t(n);
                    let p = Moebius::new(
                        Complex::new(s.exp(), 0.0),
                        Complex::new(CUSP_TRANSLATION, 0.0),
                        Complex::new(0.0, 0.0),
                        Complex::new((-s).exp(), 0.0),
                    )
                    .expect("pinching loxodromic");
                    (
                        n,
                        Representation::new(spec.clone(), vec![p, g.clone()])
                            .expect("snapshot rep"),
                    )
                })
                .collect();
            RepFamily::new(spec, snapshots, limit).map_err(|_| FamilyError::EmptyFamily)
        }
        "elliptic_cusp" => {
            let limit = cusped_rep();
            let spec = limit.spec().clone();
            let g = limit.generator_image(1).clone();
            let snapshots = indices
                .iter()
                .map(|&n| {
                    // Rotation by π/n about an axis that escapes to the cusp,
                    // normalized so the translation part stays at 40.
                    let half = std::f64::consts::PI / (2.0 * n as f64);
                    let p = Moebius::new(
                        Complex::new(half.cos(), 0.0),
                        Complex::new(CUSP_TRANSLATION, 0.0),
                        Complex::new(-half.sin() * half.sin() / CUSP_TRANSLATION, 0.0),
                        Complex::new(half.cos(), 0.0),
                    )
                    .expect("elliptic rotation");
                    (
                        n,
                        Representation::new(spec.clone(), vec![p, g.clone()])
                            .expect("snapshot rep"),
                    )
                })
                .collect();
            RepFamily::new(spec, snapshots, limit).map_err(|_| FamilyError::EmptyFamily)
        }
        other => Err(FamilyError::UnknownFamily(other.to_string())),
    }
}
