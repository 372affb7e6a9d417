//! Cross-checks tying a computed hull to its inner and outer
//! approximations.
//!
//! All sampling is over rational points, so every check is exact.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::HullError;
use crate::grid::Grid;
use crate::hull::{complex_extremal_points, finitely_extremal, hv_hull, membership, ActiveSet, EliminationTrace, HvComplex};
use crate::kernel::{convex_hull_2d, int, ConvexPolygon, Point2, Point3, Rational};
use crate::pcpp::pcpp_member;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    fn new(checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        VerificationReport { checks, overall }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        write!(f, "overall: {}", if self.overall { "PASS" } else { "FAIL" })
    }
}

pub const CHECK_EXTREMAL: &str = "extremal-points-in-input";
pub const CHECK_FINITELY_EXTREMAL: &str = "finitely-extremal-in-input";
pub const CHECK_INNER: &str = "inner-rank-one-segments";
pub const CHECK_OUTER: &str = "outer-pcpp-containment";
pub const CHECK_TRACE: &str = "monotone-trace";
pub const CHECK_CERTIFICATES: &str = "separating-line-certificates";

fn pass(name: &str, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed: true,
        detail: detail.into(),
    }
}

fn fail(name: &str, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed: false,
        detail: detail.into(),
    }
}

/// Point at parameter `k / (n + 1)` along `[a, b]`.
pub fn segment_sample(a: &Point3, b: &Point3, k: u32, n: u32) -> Point3 {
    let t = Rational::new((k as i64).into(), (n as i64 + 1).into());
    let lerp = |u: &Rational, v: &Rational| u + &t * (v - u);
    Point3::from_coords(lerp(&a.xy.x, &b.xy.x), lerp(&a.xy.y, &b.xy.y), lerp(&a.z, &b.z))
}

/// Random rational convex combination of the polygon's vertices with
/// positive weights.
pub fn polygon_sample<R: Rng>(poly: &ConvexPolygon, rng: &mut R) -> Point2 {
    let weights: Vec<i64> = poly.vertices().iter().map(|_| rng.gen_range(1..=8)).collect();
    let total = int(weights.iter().sum());
    let mut x = int(0);
    let mut y = int(0);
    for (v, w) in poly.vertices().iter().zip(&weights) {
        x += &v.x * int(*w);
        y += &v.y * int(*w);
    }
    Point2::new(x / &total, y / total)
}

/// Random points of the set described by `M`.
pub fn complex_samples<R: Rng>(complex: &HvComplex, count: usize, rng: &mut R) -> Vec<Point3> {
    const STEPS: u32 = 16;
    let mut pieces: Vec<(ConvexPolygon, Rational, Option<Rational>)> = complex
        .heights()
        .iter()
        .zip(complex.level_polys())
        .map(|(h, poly)| (poly.clone(), h.clone(), None))
        .collect();
    pieces.extend(
        complex
            .slabs()
            .filter_map(|s| s.polygon.map(|poly| (poly, s.lower, Some(s.upper)))),
    );
    (0..count)
        .map(|_| {
            let (poly, lo, hi) = pieces.choose(rng).expect("complex has a level");
            let q = polygon_sample(poly, rng);
            let z = match hi {
                None => lo.clone(),
                Some(hi) => {
                    let t = Rational::new(rng.gen_range(1..=STEPS as i64).into(), (STEPS as i64 + 1).into());
                    lo + t * (hi - lo)
                }
            };
            q.at(z)
        })
        .collect()
}

/// Horizontal and vertical segments joining pairs of input points.
pub fn rank_one_segments(k: &BTreeSet<Point3>) -> Vec<(Point3, Point3)> {
    let pts: Vec<&Point3> = k.iter().collect();
    let mut out = Vec::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if a.z == b.z || a.xy == b.xy {
                out.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    out
}

/// Random points on the rank-one segments between input points.
pub fn rank_one_samples<R: Rng>(k: &BTreeSet<Point3>, count: usize, rng: &mut R) -> Vec<Point3> {
    const STEPS: u32 = 16;
    let segments = rank_one_segments(k);
    if segments.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|_| {
            let (a, b) = segments.choose(rng).expect("non-empty");
            segment_sample(a, b, rng.gen_range(1..=STEPS), STEPS)
        })
        .collect()
}

/// Replays a trace from the first-order grid of `K`, yielding the active
/// set before each batch.
fn replay(grid: &Grid, trace: &EliminationTrace) -> Vec<ActiveSet> {
    let mut active = ActiveSet::from_grid(grid);
    let mut states = Vec::with_capacity(trace.batches.len() + 1);
    states.push(active.clone());
    for batch in &trace.batches {
        for p in &batch.removed {
            active.remove(p);
        }
        states.push(active.clone());
    }
    states
}

fn check_trace(k: &BTreeSet<Point3>, grid: &Grid, trace: &EliminationTrace) -> Check {
    let bound = grid.len();
    if trace.steps() > bound || trace.total_removed() > bound {
        return fail(
            CHECK_TRACE,
            format!("{} steps / {} removals exceed |G| = {bound}", trace.steps(), trace.total_removed()),
        );
    }
    let mut active = ActiveSet::from_grid(grid);
    for batch in &trace.batches {
        if batch.removed.is_empty() {
            return fail(CHECK_TRACE, format!("step {} removes nothing", batch.step));
        }
        for p in &batch.removed {
            if k.contains(p) {
                return fail(CHECK_TRACE, format!("step {} removes input point {p}", batch.step));
            }
            if !active.remove(p) {
                return fail(CHECK_TRACE, format!("step {} removes inactive point {p}", batch.step));
            }
        }
    }
    if active != trace.final_set {
        return fail(CHECK_TRACE, "replayed final set differs from the recorded one");
    }
    pass(
        CHECK_TRACE,
        format!("{} steps, {} removals, |G| = {bound}", trace.steps(), trace.total_removed()),
    )
}

fn check_certificates(grid: &Grid, trace: &EliminationTrace) -> Check {
    let states = replay(grid, trace);
    let mut count = 0usize;
    for (batch, (before, after)) in trace.batches.iter().zip(states.iter().zip(&states[1..])) {
        for p in &batch.removed {
            let Some(level) = before.level(&p.z) else {
                return fail(CHECK_CERTIFICATES, format!("{p} has no level before step {}", batch.step));
            };
            let hull = convex_hull_2d(level).expect("non-empty level");
            if !hull.is_vertex(&p.xy) {
                return fail(
                    CHECK_CERTIFICATES,
                    format!("{p} is not a vertex of its level hull at step {}", batch.step),
                );
            }
            if let Some(rest) = after.level(&p.z) {
                if convex_hull_2d(rest).expect("non-empty level").contains(&p.xy) {
                    return fail(
                        CHECK_CERTIFICATES,
                        format!("{p} is still in its level hull after step {}", batch.step),
                    );
                }
            }
            count += 1;
        }
    }
    pass(CHECK_CERTIFICATES, format!("{count} removals certified"))
}

fn first_outside<'a>(set: &'a BTreeSet<Point3>, k: &BTreeSet<Point3>) -> Option<&'a Point3> {
    set.iter().find(|p| !k.contains(p))
}

/// Runs the six hull checks. `samples` points are drawn for each of the
/// inner and outer sampling checks.
pub fn verify_hull(
    input: &BTreeSet<Point3>,
    trace: &EliminationTrace,
    complex: &HvComplex,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, HullError> {
    if input.is_empty() {
        return Err(HullError::EmptyInput);
    }
    if hv_hull(&trace.final_set)? != *complex {
        return Err(HullError::MalformedTrace(
            "complex is not the hv-hull of the trace's final set".into(),
        ));
    }
    let grid = Grid::build(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::with_capacity(6);

    let extremal = complex_extremal_points(complex, &trace.final_set)?;
    checks.push(match first_outside(&extremal, input) {
        None => pass(CHECK_EXTREMAL, format!("{} extremal points", extremal.len())),
        Some(p) => fail(CHECK_EXTREMAL, format!("extremal point {p} is not an input point")),
    });

    let fin = finitely_extremal(&trace.final_set);
    checks.push(match first_outside(&fin, input) {
        None => pass(CHECK_FINITELY_EXTREMAL, format!("{} finitely extremal points", fin.len())),
        Some(p) => fail(CHECK_FINITELY_EXTREMAL, format!("{p} is finitely extremal but not an input point")),
    });

    let inner = rank_one_samples(input, samples, &mut rng);
    checks.push(match inner.iter().find(|p| !membership(complex, p)) {
        None if inner.is_empty() => pass(CHECK_INNER, "no rank-one segments between input points"),
        None => pass(CHECK_INNER, format!("{} samples inside", inner.len())),
        Some(p) => fail(CHECK_INNER, format!("{p} on a rank-one segment is outside the hull")),
    });

    let outer = complex_samples(complex, samples, &mut rng);
    let mut outer_failure = None;
    for p in &outer {
        if !membership(complex, p) {
            outer_failure = Some(format!("sample {p} is not in the hull itself"));
            break;
        }
        if let Some(s) = pcpp_member(input, p)?.witness() {
            outer_failure = Some(format!("{p} is cut off by shovel {s}"));
            break;
        }
    }
    checks.push(match outer_failure {
        None => pass(CHECK_OUTER, format!("{} samples inside the outer hull", outer.len())),
        Some(d) => fail(CHECK_OUTER, d),
    });

    checks.push(check_trace(input, &grid, trace));
    checks.push(check_certificates(&grid, trace));

    Ok(VerificationReport::new(checks))
}

/// Planar convex hull of an input lying in a single horizontal plane.
pub fn brute_force_hull_1level(input: &[Point3]) -> Result<ConvexPolygon, HullError> {
    let first = input.first().ok_or(HullError::EmptyInput)?;
    if let Some(other) = input.iter().find(|p| p.z != first.z) {
        return Err(HullError::MixedHeights(first.z.clone(), other.z.clone()));
    }
    convex_hull_2d(input.iter().map(|p| &p.xy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::{Hull, Strategy};
    use crate::kernel::Rank;

    fn pts(v: &[(i64, i64, i64)]) -> Vec<Point3> {
        v.iter().map(|&(x, y, z)| Point3::from_ints(x, y, z)).collect()
    }

    fn spiral() -> Vec<Point3> {
        pts(&[(1, 0, 0), (0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 2), (1, 1, 2)])
    }

    fn run(k: &[Point3]) -> (Hull, VerificationReport) {
        let h = Hull::compute(k, Strategy::Batch).unwrap();
        let r = verify_hull(&h.input, &h.trace, &h.complex, 50, 7).unwrap();
        (h, r)
    }

    #[test]
    fn spiral_staircase_passes_everything() {
        let (_, r) = run(&spiral());
        assert_eq!(r.checks.len(), 6);
        assert!(r.overall, "{r}");
    }

    #[test]
    fn stacked_points_pass() {
        let (h, r) = run(&pts(&[(2, 1, 0), (2, 1, 5)]));
        assert!(r.overall, "{r}");
        assert_eq!(h.complex.slab_polys().len(), 1);
        assert_eq!(h.complex.slab_polys()[0].as_ref().unwrap().rank(), Rank::Point);
    }

    #[test]
    fn corrupted_trace_is_flagged() {
        let h = Hull::compute(&spiral(), Strategy::Batch).unwrap();
        let mut trace = h.trace.clone();
        let victim = Point3::from_ints(1, 0, 0);
        trace.batches[0].removed.insert(victim.clone());
        let r = verify_hull(&h.input, &trace, &h.complex, 10, 1).unwrap();
        assert!(!r.overall);
        let c = r.check(CHECK_TRACE).unwrap();
        assert!(!c.passed);
        assert!(c.detail.contains(&victim.to_string()), "{}", c.detail);
    }

    #[test]
    fn mismatched_complex_is_a_contract_violation() {
        let h = Hull::compute(&spiral(), Strategy::Batch).unwrap();
        let other = Hull::compute(&pts(&[(0, 0, 0)]), Strategy::Batch).unwrap();
        assert!(matches!(
            verify_hull(&h.input, &h.trace, &other.complex, 10, 1),
            Err(HullError::MalformedTrace(_))
        ));
    }

    #[test]
    fn one_level_oracle_examples() {
        let sq = brute_force_hull_1level(&pts(&[(0, 0, 1), (2, 0, 1), (0, 2, 1), (2, 2, 1), (1, 1, 1)])).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        let seg = brute_force_hull_1level(&pts(&[(0, 0, 1), (1, 1, 1), (2, 2, 1)])).unwrap();
        assert_eq!(seg.rank(), Rank::Segment);
        assert!(matches!(
            brute_force_hull_1level(&pts(&[(0, 0, 1), (0, 0, 2)])),
            Err(HullError::MixedHeights(_, _))
        ));
        assert_eq!(brute_force_hull_1level(&[]), Err(HullError::EmptyInput));
    }

    #[test]
    fn sampling_is_deterministic_and_inside() {
        let h = Hull::compute(&spiral(), Strategy::Batch).unwrap();
        let a = complex_samples(&h.complex, 20, &mut ChaCha8Rng::seed_from_u64(3));
        let b = complex_samples(&h.complex, 20, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert!(a.iter().all(|p| h.contains(p)));
        let s = rank_one_samples(&h.input, 20, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(s.len(), 20);
    }
}
