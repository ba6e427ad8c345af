//! Brute-force limit-set sampling by orbit/fixed-point accumulation, and
//! Hausdorff distance between point-cloud samples of the boundary sphere.

use rayon::prelude::*;
use thiserror::Error;

use crate::group::{peripheral_elements, GroupError, PeripheralSpec, Representation, Word};
use crate::moebius::{matrix_distance, IsometryType, Moebius};
use crate::sphere::{chord_to_angle, BoundaryPoint};

/// Angular deduplication tolerance for sampled points; far below compose
/// noise never exceeds this at the word lengths we enumerate.
pub const DEDUP_TOL: f64 = 1e-9;

/// Matrix-distance floor of the cheap discreteness sanity check.
pub const DISCRETENESS_FLOOR: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum LimitSetError {
    #[error("representation looks indiscrete: `{word}` is within {distance:.3e} of the identity")]
    LikelyIndiscrete { word: String, distance: f64 },
    #[error("sampling depth must be at least 1")]
    BadDepth,
    #[error("peripheral generator image is elliptic; no fixed-point datum on the boundary")]
    EllipticPeripheral,
    #[error("empty sample has no Hausdorff distance")]
    EmptySample,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Where limit points are read off from enumerated group elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasepointPolicy {
    /// Attracting fixed point of loxodromics, fixed point of parabolics.
    /// Fixed points lie exactly on the limit set, so this is the default.
    FixedPoints,
    /// Images of a reference point under all words of the sampling depth.
    Orbit(BoundaryPoint),
    /// Both of the above.
    Both(BoundaryPoint),
}

/// A finite point cloud approximating a limit set.
#[derive(Debug, Clone)]
pub struct LimitSetSample {
    points: Vec<BoundaryPoint>,
    depth: usize,
    resolution: f64,
}

impl LimitSetSample {
    /// Canonicalizes: points sorted lexicographically by coordinates. The
    /// resolution records the largest nearest-neighbor gap among the points
    /// (a reported diagnostic, not a certified covering radius).
    pub fn from_points(mut points: Vec<BoundaryPoint>, depth: usize) -> Self {
        points.sort_by(BoundaryPoint::cmp_lex);
        let resolution = max_nearest_neighbor_gap(&points);
        Self {
            points,
            depth,
            resolution,
        }
    }

    /// For samplers that certify their own covering radius.
    pub fn with_resolution(mut points: Vec<BoundaryPoint>, depth: usize, resolution: f64) -> Self {
        points.sort_by(BoundaryPoint::cmp_lex);
        Self {
            points,
            depth,
            resolution,
        }
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// The image sample under a fixed boundary isometry.
    pub fn map(&self, f: &Moebius) -> Self {
        let pts = self.points.iter().map(|p| f.apply(*p)).collect();
        Self::from_points(pts, self.depth)
    }
}

/// Sampled limit points labeled by the shortlex-least word that produced
/// them; points deduplicated at [`DEDUP_TOL`].
pub fn sample_limit_set_labeled(
    rep: &Representation,
    depth: usize,
    policy: BasepointPolicy,
) -> Result<Vec<(Word, BoundaryPoint)>, LimitSetError> {
    if depth == 0 {
        return Err(LimitSetError::BadDepth);
    }
    discreteness_check(rep)?;
    let entries = rep.enumerate_with_images(depth, true);
    let mut labeled: Vec<(Word, BoundaryPoint)> = entries
        .par_iter()
        .flat_map_iter(|(w, m)| {
            let mut pts: Vec<(Word, BoundaryPoint)> = Vec::new();
            match policy {
                BasepointPolicy::FixedPoints => {
                    if let Some(p) = m.classify().limit_datum() {
                        pts.push((w.clone(), p));
                    }
                }
                BasepointPolicy::Orbit(base) => {
                    pts.push((w.clone(), m.apply(base)));
                }
                BasepointPolicy::Both(base) => {
                    if let Some(p) = m.classify().limit_datum() {
                        pts.push((w.clone(), p));
                    }
                    pts.push((w.clone(), m.apply(base)));
                }
            }
            pts
        })
        .collect();
    Ok(dedup_labeled(&mut labeled))
}

/// Point cloud of the limit set at the given word-length depth.
pub fn sample_limit_set(
    rep: &Representation,
    depth: usize,
    policy: BasepointPolicy,
) -> Result<LimitSetSample, LimitSetError> {
    let labeled = sample_limit_set_labeled(rep, depth, policy)?;
    Ok(LimitSetSample::from_points(
        labeled.into_iter().map(|(_, p)| p).collect(),
        depth,
    ))
}

/// Limit set of a peripheral subgroup's image alone: the fiber of the
/// boundary extension over the corresponding parabolic point.
pub fn parabolic_fiber(
    rep: &Representation,
    peripheral: &PeripheralSpec,
    depth: usize,
) -> Result<LimitSetSample, LimitSetError> {
    if depth == 0 {
        return Err(LimitSetError::BadDepth);
    }
    for g in &peripheral.generators {
        let m = rep.evaluate(g)?;
        if m.classify().kind == IsometryType::Elliptic {
            return Err(LimitSetError::EllipticPeripheral);
        }
    }
    let elems = peripheral_elements(rep.spec(), peripheral, depth)?;
    let mut labeled: Vec<(Word, BoundaryPoint)> = Vec::new();
    for w in elems {
        let m = rep.evaluate(&w)?;
        if let Some(p) = m.classify().limit_datum() {
            labeled.push((w, p));
        }
    }
    let deduped = dedup_labeled(&mut labeled);
    Ok(LimitSetSample::from_points(
        deduped.into_iter().map(|(_, p)| p).collect(),
        depth,
    ))
}

/// Cheap indiscreteness guard: no non-identity image among short words may
/// sit next to the identity.
fn discreteness_check(rep: &Representation) -> Result<(), LimitSetError> {
    for w in rep.spec().enumerate_ball(3) {
        if w.is_empty() {
            continue;
        }
        let m = rep.evaluate(&w)?;
        let d = matrix_distance(&m, &Moebius::identity());
        if d < DISCRETENESS_FLOOR {
            return Err(LimitSetError::LikelyIndiscrete {
                word: w.display(&rep.spec().generator_names),
                distance: d,
            });
        }
    }
    Ok(())
}

/// Deduplicates labeled points at [`DEDUP_TOL`], keeping the shortlex-least
/// word per cluster; output sorted by point coordinates.
pub fn dedup_labeled(entries: &mut Vec<(Word, BoundaryPoint)>) -> Vec<(Word, BoundaryPoint)> {
    let chord_tol = 2.0 * (DEDUP_TOL / 2.0).sin();
    entries.sort_by(|x, y| x.1.cmp_lex(&y.1));
    let mut out: Vec<(Word, BoundaryPoint)> = Vec::with_capacity(entries.len());
    for (w, p) in entries.drain(..) {
        // Points within tolerance are adjacent after the coordinate sort up
        // to an x-window; scan back while the first coordinate is close.
        let mut merged = false;
        for kept in out.iter_mut().rev() {
            if (kept.1.coords()[0] - p.coords()[0]).abs() > chord_tol {
                break;
            }
            if kept.1.chord(p) <= chord_tol {
                if w.cmp_shortlex(&kept.0) == std::cmp::Ordering::Less {
                    kept.0 = w.clone();
                }
                merged = true;
                break;
            }
        }
        if !merged {
            out.push((w, p));
        }
    }
    out
}

/// Largest nearest-neighbor gap among the points (angular); zero for fewer
/// than two points.
pub fn max_nearest_neighbor_gap(points: &[BoundaryPoint]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let sorted = SortedCloud::new(points.to_vec());
    let worst = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| sorted.nearest_chord(*p, Some(i)))
        .reduce(|| 0.0f64, f64::max);
    chord_to_angle(worst)
}

/// Symmetric Hausdorff distance between two nonempty samples, in the round
/// metric.
pub fn hausdorff_distance(a: &LimitSetSample, b: &LimitSetSample) -> Result<f64, LimitSetError> {
    hausdorff_points(a.points(), b.points())
}

pub fn hausdorff_points(
    a: &[BoundaryPoint],
    b: &[BoundaryPoint],
) -> Result<f64, LimitSetError> {
    if a.is_empty() || b.is_empty() {
        return Err(LimitSetError::EmptySample);
    }
    let d_ab = directed_chord(a, b);
    let d_ba = directed_chord(b, a);
    Ok(chord_to_angle(d_ab.max(d_ba)))
}

fn directed_chord(from: &[BoundaryPoint], to: &[BoundaryPoint]) -> f64 {
    let cloud = SortedCloud::new(to.to_vec());
    from.par_iter()
        .map(|p| cloud.nearest_chord(*p, None))
        .reduce(|| 0.0f64, f64::max)
}

/// Point cloud sorted by first coordinate for pruned nearest-neighbor
/// queries: the chord is bounded below by the x-gap.
struct SortedCloud {
    points: Vec<BoundaryPoint>,
}

impl SortedCloud {
    fn new(mut points: Vec<BoundaryPoint>) -> Self {
        points.sort_by(|p, q| p.coords()[0].total_cmp(&q.coords()[0]));
        Self { points }
    }

    /// Chord distance to the nearest point; `skip` elides one exact point
    /// occurrence (self-queries). Assumes a nonempty cloud (two points for
    /// self-queries).
    fn nearest_chord(&self, p: BoundaryPoint, skip: Option<usize>) -> f64 {
        let x = p.coords()[0];
        let start = self.points.partition_point(|q| q.coords()[0] < x);
        let mut best = f64::INFINITY;
        let mut skipped = skip.is_none();
        // Expand outward from the insertion point until the x-gap alone
        // exceeds the best chord found.
        let (mut lo, mut hi) = (start as isize - 1, start);
        loop {
            let mut advanced = false;
            if hi < self.points.len() {
                let q = self.points[hi];
                if q.coords()[0] - x < best {
                    let d = p.chord(q);
                    if !skipped && d == 0.0 {
                        skipped = true;
                    } else if d < best {
                        best = d;
                    }
                    hi += 1;
                    advanced = true;
                }
            }
            if lo >= 0 {
                let q = self.points[lo as usize];
                if x - q.coords()[0] < best {
                    let d = p.chord(q);
                    if !skipped && d == 0.0 {
                        skipped = true;
                    } else if d < best {
                        best = d;
                    }
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
