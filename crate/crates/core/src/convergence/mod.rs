//! Finite-truncation diagnostics for convergence of representation
//! families: algebraic convergence, the two Chabauty criteria (here called
//! C1/C2), relative strong convergence per peripheral subgroup, and the
//! peripheral stability test.
//!
//! All verdicts are evidence at the stated truncation, not proofs; reports
//! echo the truncation parameters and carry a concrete witness for every
//! failure.

pub mod families;

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{peripheral_elements, GroupError, GroupSpec, Representation, Word};
use crate::moebius::{matrix_distance, IsometryType, Moebius};
use crate::sphere::{boundary_distance, BoundaryPoint, SphericalCap};

#[derive(Debug, Error)]
pub enum ConvergenceError {
    #[error("stability instance is ill-posed: {0}")]
    BadStabilityInstance(String),
    #[error("family has no snapshots")]
    EmptyFamily,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A sequence of representations of one marked group with its algebraic
/// limit. Snapshot indices are strictly increasing.
#[derive(Debug, Clone)]
pub struct RepFamily {
    group: GroupSpec,
    snapshots: Vec<(u32, Representation)>,
    limit: Representation,
}

impl RepFamily {
    pub fn new(
        group: GroupSpec,
        snapshots: Vec<(u32, Representation)>,
        limit: Representation,
    ) -> Result<Self, ConvergenceError> {
        if snapshots.is_empty() {
            return Err(ConvergenceError::EmptyFamily);
        }
        for w in snapshots.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(ConvergenceError::BadStabilityInstance(
                    "snapshot indices must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self {
            group,
            snapshots,
            limit,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn snapshots(&self) -> &[(u32, Representation)] {
        &self.snapshots
    }

    pub fn limit(&self) -> &Representation {
        &self.limit
    }

    pub fn first(&self) -> &Representation {
        &self.snapshots[0].1
    }

    pub fn max_index(&self) -> u32 {
        self.snapshots.last().map(|(n, _)| *n).unwrap_or(0)
    }

    /// The trailing third of the snapshots (at least two when available),
    /// standing in for "all sufficiently large n".
    pub fn tail(&self) -> &[(u32, Representation)] {
        let len = self.snapshots.len();
        let take = (len.div_ceil(3)).max(2).min(len);
        &self.snapshots[len - take..]
    }
}

/// Finite proxies for the compact-open data of the Chabauty basis: a word
/// radius, a matrix-distance bound about the identity standing in for the
/// compact subset, and a comparison tolerance.
#[derive(Debug, Clone, Copy)]
pub struct TruncationParams {
    pub word_radius: usize,
    pub isom_compact_radius: f64,
    pub tolerance: f64,
}

impl Default for TruncationParams {
    fn default() -> Self {
        Self {
            word_radius: 8,
            isom_compact_radius: 50.0,
            tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureWitness {
    pub word: String,
    pub snapshot: Option<u32>,
    pub measured: f64,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub pass: bool,
    /// Worst relevant measured distance (0 when nothing was checked).
    pub worst: f64,
    /// Set when the check had nothing to verify.
    pub vacuous: bool,
    /// First snapshot index from which the condition holds through the end.
    pub holds_from: Option<u32>,
    pub witness: Option<FailureWitness>,
}

impl CheckResult {
    fn pass(worst: f64, holds_from: Option<u32>) -> Self {
        Self {
            pass: true,
            worst,
            vacuous: false,
            holds_from,
            witness: None,
        }
    }

    fn vacuous() -> Self {
        Self {
            pass: true,
            worst: 0.0,
            vacuous: true,
            holds_from: None,
            witness: None,
        }
    }

    fn fail(worst: f64, witness: FailureWitness) -> Self {
        Self {
            pass: false,
            worst,
            vacuous: false,
            holds_from: None,
            witness: Some(witness),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PeripheralVerdict {
    pub name: String,
    pub c1: CheckResult,
    pub c2: CheckResult,
    /// All snapshot images of the peripheral generators are non-elliptic
    /// and non-identity (the faithfulness hypothesis of the equivalence).
    pub faithful: bool,
}

#[derive(Debug, Clone)]
pub struct StabilityInstance {
    pub peripheral: String,
    pub u_center: BoundaryPoint,
    pub u_radius: f64,
    pub k_points: Vec<BoundaryPoint>,
    pub f_radius: usize,
    pub word_budget: usize,
}

#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub instance: StabilityInstance,
    pub result: CheckResult,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub word_radius: usize,
    pub isom_compact_radius: f64,
    pub tolerance: f64,
    pub algebraic: CheckResult,
    pub c1: CheckResult,
    pub c2: CheckResult,
    pub relative: Vec<PeripheralVerdict>,
    pub stability: Vec<StabilityVerdict>,
    pub peripherals_faithful: bool,
    /// Minimal non-identity matrix distance per snapshot (words of length
    /// at most 4): the uniform-discreteness margin.
    pub min_nonidentity: Vec<(u32, f64)>,
}

impl ConvergenceReport {
    /// Strong convergence verdict at this truncation: C1 and C2 together.
    pub fn strong_pass(&self) -> bool {
        self.c1.pass && self.c2.pass
    }

    pub fn relative_pass(&self) -> bool {
        self.relative.iter().all(|p| p.c1.pass && p.c2.pass)
    }

    pub fn stability_pass(&self) -> bool {
        self.stability.iter().all(|s| s.result.pass)
    }
}

/// Generator-wise convergence: distances to the limit are nonincreasing
/// within tolerance and end below it.
pub fn check_algebraic(fam: &RepFamily, trunc: &TruncationParams) -> CheckResult {
    let names = &fam.group().generator_names;
    let mut worst: f64 = 0.0;
    for (gi, name) in names.iter().enumerate() {
        let dists: Vec<(u32, f64)> = fam
            .snapshots()
            .iter()
            .map(|(n, rep)| {
                (
                    *n,
                    matrix_distance(rep.generator_image(gi), fam.limit().generator_image(gi)),
                )
            })
            .collect();
        for w in dists.windows(2) {
            if w[1].1 > w[0].1 + trunc.tolerance {
                return CheckResult::fail(
                    w[1].1,
                    FailureWitness {
                        word: name.clone(),
                        snapshot: Some(w[1].0),
                        measured: w[1].1,
                    },
                );
            }
        }
        let (last_n, last_d) = *dists.last().expect("nonempty family");
        worst = worst.max(last_d);
        if last_d > trunc.tolerance {
            return CheckResult::fail(
                last_d,
                FailureWitness {
                    word: name.clone(),
                    snapshot: Some(last_n),
                    measured: last_d,
                },
            );
        }
    }
    CheckResult::pass(worst, Some(fam.max_index()))
}

/// Word/image table with a distance-to-identity index for pruned
/// nearest-element queries (the reverse triangle inequality bounds the
/// distance to a candidate from below by the index gap).
struct WordTable {
    items: Vec<(Word, Moebius, f64)>,
    order: Vec<usize>,
}

impl WordTable {
    fn new(items: Vec<(Word, Moebius)>) -> Self {
        let id = Moebius::identity();
        let items: Vec<(Word, Moebius, f64)> = items
            .into_iter()
            .map(|(w, m)| {
                let d = matrix_distance(&m, &id);
                (w, m, d)
            })
            .collect();
        let mut order: Vec<usize> = (0..items.len()).collect();
        order.sort_by(|&i, &j| items[i].2.total_cmp(&items[j].2));
        Self { items, order }
    }

    fn from_words(rep: &Representation, words: &[Word]) -> Self {
        let items = words
            .iter()
            .map(|w| (w.clone(), rep.evaluate(w).expect("valid word")))
            .collect();
        Self::new(items)
    }

    /// Minimal matrix distance from `target` to any tabled image.
    fn min_distance(&self, target: &Moebius) -> f64 {
        let dt = matrix_distance(target, &Moebius::identity());
        let pos = self
            .order
            .partition_point(|&i| self.items[i].2 < dt);
        let mut best = f64::INFINITY;
        let (mut lo, mut hi) = (pos as isize - 1, pos);
        loop {
            let mut advanced = false;
            if hi < self.order.len() {
                let it = &self.items[self.order[hi]];
                if it.2 - dt < best {
                    best = best.min(matrix_distance(target, &it.1));
                    hi += 1;
                    advanced = true;
                }
            }
            if lo >= 0 {
                let it = &self.items[self.order[lo as usize]];
                if dt - it.2 < best {
                    best = best.min(matrix_distance(target, &it.1));
                    lo -= 1;
                    advanced = true;
                }
            }
            if !advanced {
                break;
            }
        }
        best
    }
}

/// Shared core of the Chabauty-style checks over an arbitrary word set.
///
/// C2 (every limit element is approximated): for each limit image in the
/// compact region there is a snapshot index from which the nearest snapshot
/// image stays within tolerance.
///
/// C1 (no spurious accumulation): values of the first tail snapshot that
/// persist across the rest of the tail (within a quarter-tolerance Cauchy
/// window) must be matched by a limit image within tolerance, over a word
/// radius enlarged by 2. Additionally, no nonempty word may collapse to the
/// identity at a tail snapshot while its limit image is far from it (a
/// marked-discreteness degeneration).
fn chabauty_core(
    fam: &RepFamily,
    trunc: &TruncationParams,
    words: &[Word],
    extended_words: &[Word],
) -> (CheckResult, CheckResult) {
    if words.is_empty() {
        return (CheckResult::vacuous(), CheckResult::vacuous());
    }
    let tail = fam.tail();
    let limit_table = WordTable::from_words(fam.limit(), words);
    let tail_tables: Vec<(u32, WordTable)> = tail
        .par_iter()
        .map(|(n, rep)| (*n, WordTable::from_words(rep, words)))
        .collect();

    // C2: each in-compact limit element approximated from some index on.
    let mut c2_worst: f64 = 0.0;
    let mut c2_from: u32 = tail_tables.first().map(|(n, _)| *n).unwrap_or(0);
    let mut c2 = None;
    let mut checked_any = false;
    for (w, m, d_to_i) in &limit_table.items {
        if *d_to_i > trunc.isom_compact_radius {
            continue;
        }
        checked_any = true;
        let dists: Vec<(u32, f64)> = tail_tables
            .iter()
            .map(|(n, t)| (*n, t.min_distance(m)))
            .collect();
        // Smallest index from which everything stays within tolerance.
        let mut from = None;
        for k in (0..dists.len()).rev() {
            if dists[k].1 <= trunc.tolerance {
                from = Some(dists[k].0);
            } else {
                break;
            }
        }
        match from {
            Some(n) => {
                c2_from = c2_from.max(n);
                c2_worst = c2_worst.max(dists.last().unwrap().1);
            }
            None => {
                let (n, d) = *dists.last().unwrap();
                c2 = Some(CheckResult::fail(
                    d,
                    FailureWitness {
                        word: w.display(&fam.group().generator_names),
                        snapshot: Some(n),
                        measured: d,
                    },
                ));
                break;
            }
        }
    }
    let c2 = c2.unwrap_or(if checked_any {
        CheckResult::pass(c2_worst, Some(c2_from))
    } else {
        CheckResult::vacuous()
    });

    // C1: stable tail values must have limit matches.
    let extended_table = WordTable::from_words(fam.limit(), extended_words);
    let cauchy_window = trunc.tolerance / 4.0;
    let (first_n, first_table) = &tail_tables[0];
    let mut c1_worst: f64 = 0.0;
    let mut c1 = None;
    for (w, v, d_to_i) in &first_table.items {
        if *d_to_i > trunc.isom_compact_radius {
            continue;
        }
        let stable = tail_tables[1..]
            .iter()
            .all(|(_, t)| t.min_distance(v) <= cauchy_window);
        if !stable {
            continue;
        }
        let match_dist = extended_table.min_distance(v);
        c1_worst = c1_worst.max(match_dist);
        if match_dist > trunc.tolerance {
            c1 = Some(CheckResult::fail(
                match_dist,
                FailureWitness {
                    word: w.display(&fam.group().generator_names),
                    snapshot: Some(*first_n),
                    measured: match_dist,
                },
            ));
            break;
        }
    }
    // Marked collapse: a nonempty word lands at the identity in a tail
    // snapshot while the limit keeps it far away.
    if c1.is_none() {
        'outer: for (n, rep) in tail {
            for w in words {
                if w.is_empty() {
                    continue;
                }
                let d_snap = matrix_distance(
                    &rep.evaluate(w).expect("valid word"),
                    &Moebius::identity(),
                );
                if d_snap <= trunc.tolerance {
                    let d_limit = matrix_distance(
                        &fam.limit().evaluate(w).expect("valid word"),
                        &Moebius::identity(),
                    );
                    if d_limit > (10.0 * trunc.tolerance).max(1e-2) {
                        c1 = Some(CheckResult::fail(
                            d_limit,
                            FailureWitness {
                                word: w.display(&fam.group().generator_names),
                                snapshot: Some(*n),
                                measured: d_snap,
                            },
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    let c1 = c1.unwrap_or(CheckResult::pass(c1_worst, None));
    (c1, c2)
}

/// Chabauty criteria over the full word ball of the truncation radius.
pub fn check_chabauty(fam: &RepFamily, trunc: &TruncationParams) -> (CheckResult, CheckResult) {
    let words = fam.group().enumerate_ball(trunc.word_radius);
    let extended = fam.group().enumerate_ball(trunc.word_radius + 2);
    chabauty_core(fam, trunc, &words, &extended)
}

/// Word budget used for peripheral subgroups: long enough that full-turn
/// degenerations of finite-order peripheral images fall inside the checked
/// range (`2·max index + 2` letters for the shipped families).
pub fn peripheral_word_budget(fam: &RepFamily, trunc: &TruncationParams) -> usize {
    trunc.word_radius.max(2 * fam.max_index() as usize + 2)
}

/// Chabauty criteria restricted to each declared peripheral subgroup.
pub fn check_relative_strong(
    fam: &RepFamily,
    trunc: &TruncationParams,
) -> Result<Vec<PeripheralVerdict>, ConvergenceError> {
    let spec = fam.group();
    let budget = peripheral_word_budget(fam, trunc);
    let mut out = Vec::new();
    for p in &spec.peripherals {
        let words = peripheral_elements(spec, p, budget)?;
        let extended = peripheral_elements(spec, p, budget + 2)?;
        let (c1, c2) = chabauty_core(fam, trunc, &words, &extended);
        let faithful = fam.snapshots().iter().map(|(_, r)| r).all(|rep| {
            p.generators.iter().all(|g| {
                let m = rep.evaluate(g).expect("valid word");
                let k = m.classify().kind;
                k != IsometryType::Elliptic && k != IsometryType::Identity
            })
        });
        out.push(PeripheralVerdict {
            name: p.name.clone(),
            c1,
            c2,
            faithful,
        });
    }
    Ok(out)
}

/// Peripheral stability of the family about its limit for one instance
/// `(U, K, F)`: all peripheral elements longer than `f_radius` (up to the
/// word budget) must push every point of `K` into `U`, for all snapshots
/// from some index on.
///
/// The hypothesis is first verified for the limit representation; an
/// instance the limit itself violates is rejected as ill-posed.
pub fn check_peripheral_stability(
    fam: &RepFamily,
    peripheral_name: &str,
    u: &SphericalCap,
    k_points: &[BoundaryPoint],
    f_radius: usize,
    word_budget: usize,
) -> Result<CheckResult, ConvergenceError> {
    let spec = fam.group();
    let p = spec.peripheral(peripheral_name)?;
    let rep_point = peripheral_fixed_point(fam.limit(), peripheral_name)?;
    if !u.contains(rep_point) {
        return Err(ConvergenceError::BadStabilityInstance(
            "peripheral fixed point is not inside U".into(),
        ));
    }
    if k_points.iter().any(|k| u.closure_contains(*k)) {
        return Err(ConvergenceError::BadStabilityInstance(
            "K meets the closure of U".into(),
        ));
    }
    let elements: Vec<Word> = peripheral_elements(spec, p, word_budget)?
        .into_iter()
        .filter(|w| w.len() > f_radius)
        .collect();
    if elements.is_empty() {
        return Ok(CheckResult::vacuous());
    }
    // Hypothesis for the limit representation.
    for h in &elements {
        let m = fam.limit().evaluate(h)?;
        for k in k_points {
            if !u.contains(m.apply(*k)) {
                return Err(ConvergenceError::BadStabilityInstance(format!(
                    "limit violates the hypothesis at `{}`",
                    h.display(&spec.generator_names)
                )));
            }
        }
    }
    // Deformed representations: find the first index from which every
    // snapshot is clean through the end.
    let mut worst: f64 = 0.0;
    let mut last_violation: Option<FailureWitness> = None;
    let mut holds_from = Some(fam.snapshots()[0].0);
    for (n, rep) in fam.snapshots() {
        let mut clean = true;
        'elems: for h in &elements {
            let m = rep.evaluate(h)?;
            for k in k_points {
                let img = m.apply(*k);
                let d = boundary_distance(u.center(), img);
                worst = worst.max(d - u.radius());
                if d >= u.radius() {
                    clean = false;
                    last_violation = Some(FailureWitness {
                        word: h.display(&spec.generator_names),
                        snapshot: Some(*n),
                        measured: d,
                    });
                    break 'elems;
                }
            }
        }
        if clean {
            if holds_from.is_none() {
                holds_from = Some(*n);
            }
        } else {
            holds_from = None;
        }
    }
    match holds_from {
        Some(n) => Ok(CheckResult::pass(worst.max(0.0), Some(n))),
        None => {
            let w = last_violation.expect("violation recorded");
            Ok(CheckResult::fail(w.measured, w))
        }
    }
}

/// Fixed point on the boundary of the (first generator of the) peripheral's
/// limit image.
pub fn peripheral_fixed_point(
    rep: &Representation,
    peripheral_name: &str,
) -> Result<BoundaryPoint, ConvergenceError> {
    let p = rep.spec().peripheral(peripheral_name)?;
    let m = rep.evaluate(&p.generators[0])?;
    m.classify().limit_datum().ok_or_else(|| {
        ConvergenceError::BadStabilityInstance(format!(
            "peripheral `{peripheral_name}` has no boundary fixed-point datum"
        ))
    })
}

/// Canonical stability instance for a peripheral: U is a half-radian cap at
/// the peripheral fixed point, K eight points on the equator about it, and
/// the exclusion radius the smallest that satisfies the limit hypothesis.
pub fn default_stability_instance(
    fam: &RepFamily,
    peripheral_name: &str,
    trunc: &TruncationParams,
) -> Result<StabilityInstance, ConvergenceError> {
    let p_point = peripheral_fixed_point(fam.limit(), peripheral_name)?;
    let u = SphericalCap::new(p_point, 0.5).expect("valid cap");
    let equator = SphericalCap::new(p_point, std::f64::consts::FRAC_PI_2).expect("valid cap");
    let k_points: Vec<BoundaryPoint> = (0..8)
        .map(|j| equator.boundary_point(2.0 * std::f64::consts::PI * j as f64 / 8.0))
        .collect();
    let word_budget = peripheral_word_budget(fam, trunc);
    for f_radius in 0..=4 {
        let ok = check_peripheral_stability(
            &RepFamily::new(
                fam.group().clone(),
                vec![(1, fam.limit().clone())],
                fam.limit().clone(),
            )?,
            peripheral_name,
            &u,
            &k_points,
            f_radius,
            word_budget,
        );
        if ok.is_ok() {
            return Ok(StabilityInstance {
                peripheral: peripheral_name.to_string(),
                u_center: p_point,
                u_radius: 0.5,
                k_points,
                f_radius,
                word_budget,
            });
        }
    }
    Err(ConvergenceError::BadStabilityInstance(format!(
        "no exclusion radius up to 4 satisfies the limit hypothesis for `{peripheral_name}`"
    )))
}

/// Minimal non-identity matrix distance over short words: the uniform
/// discreteness margin of a snapshot.
pub fn min_nonidentity_distance(rep: &Representation, radius: usize) -> f64 {
    let id = Moebius::identity();
    rep.enumerate_with_images(radius, false)
        .iter()
        .filter(|(w, _)| !w.is_empty())
        .map(|(_, m)| matrix_distance(m, &id))
        .fold(f64::INFINITY, f64::min)
}

/// Runs every check with canonical stability instances and assembles the
/// full report.
pub fn convergence_report(
    fam: &RepFamily,
    trunc: &TruncationParams,
) -> Result<ConvergenceReport, ConvergenceError> {
    let algebraic = check_algebraic(fam, trunc);
    let (c1, c2) = check_chabauty(fam, trunc);
    let relative = check_relative_strong(fam, trunc)?;
    let mut stability = Vec::new();
    for p in &fam.group().peripherals {
        match default_stability_instance(fam, &p.name, trunc) {
            Ok(instance) => {
                let u = SphericalCap::new(instance.u_center, instance.u_radius)
                    .expect("valid cap");
                let result = check_peripheral_stability(
                    fam,
                    &p.name,
                    &u,
                    &instance.k_points,
                    instance.f_radius,
                    instance.word_budget,
                )?;
                stability.push(StabilityVerdict { instance, result });
            }
            Err(e) => {
                stability.push(StabilityVerdict {
                    instance: StabilityInstance {
                        peripheral: p.name.clone(),
                        u_center: BoundaryPoint::infinity(),
                        u_radius: 0.0,
                        k_points: Vec::new(),
                        f_radius: 0,
                        word_budget: 0,
                    },
                    result: CheckResult::fail(
                        f64::INFINITY,
                        FailureWitness {
                            word: format!("{e}"),
                            snapshot: None,
                            measured: f64::INFINITY,
                        },
                    ),
                });
            }
        }
    }
    let peripherals_faithful = relative.iter().all(|p| p.faithful);
    let min_nonidentity = fam
        .snapshots()
        .iter()
        .map(|(n, rep)| (*n, min_nonidentity_distance(rep, 4)))
        .collect();
    Ok(ConvergenceReport {
        word_radius: trunc.word_radius,
        isom_compact_radius: trunc.isom_compact_radius,
        tolerance: trunc.tolerance,
        algebraic,
        c1,
        c2,
        relative,
        stability,
        peripherals_faithful,
        min_nonidentity,
    })
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use num_complex::Complex64 as Complex;

    fn constant_family(rep: Representation, count: u32) -> RepFamily {
        let spec = rep.spec().clone();
        let snapshots = (1..=count).map(|n| (n, rep.clone())).collect();
        RepFamily::new(spec, snapshots, rep).unwrap()
    }

    #[test]
    fn constant_family_passes_everything() {
        let fam = constant_family(cusped_rep(), 6);
        let trunc = TruncationParams::default();
        let report = convergence_report(&fam, &trunc).unwrap();
        assert!(report.algebraic.pass);
        assert!((report.algebraic.worst).abs() < 1e-15);
        assert!(report.strong_pass());
        assert!(report.relative_pass());
        assert!(report.stability_pass());
        assert!(report.peripherals_faithful);
    }

    #[test]
    fn algebraic_detects_fixed_gap() {
        // A family with a constant generator gap of 0.5.
        let spec = GroupSpec::free(&["t"]);
        let limit =
            Representation::new(spec.clone(), vec![Moebius::translation(Complex::new(1.0, 0.0))])
                .unwrap();
        let off =
            Representation::new(spec.clone(), vec![Moebius::translation(Complex::new(1.5, 0.0))])
                .unwrap();
        let fam = RepFamily::new(
            spec,
            (1..=4).map(|n| (n, off.clone())).collect(),
            limit,
        )
        .unwrap();
        let res = check_algebraic(&fam, &TruncationParams::default());
        assert!(!res.pass);
        let w = res.witness.unwrap();
        assert_eq!(w.word, "t");
        assert!((w.measured - 0.5).abs() < 1e-12);
    }

    #[test]
    fn conjugation_family_converges_algebraically() {
        let fam = builtin_family(
            "schottky_perturb",
            &FamilyParams {
                rate: Rate::Harmonic,
                ..Default::default()
            },
        )
        .unwrap();
        let res = check_algebraic(&fam, &TruncationParams::default());
        assert!(res.pass, "witness: {:?}", res.witness);
    }

    #[test]
    fn indiscrete_translation_family_fails_c1() {
        // t ↦ translation by 1/n, limit trivial: powers t^n accumulate at
        // translation by 1, which no limit element matches.
        let spec = GroupSpec::free(&["t"]);
        let limit = Representation::new(spec.clone(), vec![Moebius::identity()]).unwrap();
        let snapshots: Vec<(u32, Representation)> = (1..=8)
            .map(|n| {
                (
                    n,
                    Representation::new(
                        spec.clone(),
                        vec![Moebius::translation(Complex::new(1.0 / n as f64, 0.0))],
                    )
                    .unwrap(),
                )
            })
            .collect();
        let fam = RepFamily::new(spec, snapshots, limit).unwrap();
        let (c1, c2) = check_chabauty(&fam, &TruncationParams::default());
        assert!(c2.pass, "every (trivial) limit element is approximated");
        assert!(!c1.pass, "accumulated translation must be flagged");
        let w = c1.witness.unwrap();
        assert!(w.measured > 0.5, "witness distance {}", w.measured);
    }

    #[test]
    fn perturbation_families_converge_strongly() {
        let trunc = TruncationParams::default();
        for name in ["schottky_perturb", "cusped_schottky", "pinch"] {
            let fam = builtin_family(name, &FamilyParams::default()).unwrap();
            let report = convergence_report(&fam, &trunc).unwrap();
            assert!(report.algebraic.pass, "{name}: algebraic");
            assert!(
                report.strong_pass(),
                "{name}: C1={:?} C2={:?}",
                report.c1.witness,
                report.c2.witness
            );
            assert!(report.relative_pass(), "{name}: relative");
            assert!(report.stability_pass(), "{name}: stability");
            assert!(report.peripherals_faithful, "{name}: faithful");
        }
    }

    #[test]
    fn elliptic_cusp_fails_relative_strong_and_stability() {
        let fam = builtin_family("elliptic_cusp", &FamilyParams { count: 6, ..Default::default() })
            .unwrap();
        let trunc = TruncationParams::default();
        let report = convergence_report(&fam, &trunc).unwrap();
        assert!(!report.peripherals_faithful);
        assert!(!report.relative_pass(), "relative strong must fail");
        let cusp = &report.relative[0];
        assert!(
            cusp.c1.witness.is_some() || cusp.c2.witness.is_some(),
            "failure carries a witness"
        );
        assert!(!report.stability_pass(), "stability must fail");
        let stab = &report.stability[0];
        assert!(stab.result.witness.is_some());
    }

    #[test]
    fn stability_vacuous_when_exclusion_covers_budget() {
        let fam = constant_family(cusped_rep(), 3);
        let trunc = TruncationParams::default();
        let inst = default_stability_instance(&fam, "cusp", &trunc).unwrap();
        let u = SphericalCap::new(inst.u_center, inst.u_radius).unwrap();
        let res = check_peripheral_stability(
            &fam,
            "cusp",
            &u,
            &inst.k_points,
            inst.word_budget + 1,
            inst.word_budget,
        )
        .unwrap();
        assert!(res.pass && res.vacuous);
    }

    #[test]
    fn stability_rejects_ill_posed_instances() {
        let fam = constant_family(cusped_rep(), 3);
        // K touching the closure of U.
        let p = BoundaryPoint::infinity();
        let u = SphericalCap::new(p, 0.5).unwrap();
        let k = vec![u.boundary_point(0.0)];
        assert!(matches!(
            check_peripheral_stability(&fam, "cusp", &u, &k, 0, 10),
            Err(ConvergenceError::BadStabilityInstance(_))
        ));
    }

    #[test]
    fn min_nonidentity_reflects_discreteness() {
        let rep = cusped_rep();
        let d = min_nonidentity_distance(&rep, 3);
        assert!(d > 1.0, "cusped fixture is uniformly discrete, got {d}");
    }
}
