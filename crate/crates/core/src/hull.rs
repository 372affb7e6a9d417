//! Finitely-extremal-point elimination and the hv-complex representation of
//! the resulting 2+1-convex hull.
//!
//! The run starts from the full first-order grid of the input `K` and
//! repeatedly deletes grid points that are extremal both vertically (top or
//! bottom of their column) and horizontally (a vertex of the planar hull of
//! their level) but do not belong to `K`. The surviving set `A^f` is a
//! scaffolding of `K`, and its hv-hull is the hull of `K`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::HullError;
use crate::grid::Grid;
use crate::peel::{Plane, PeelingHull};
use crate::kernel::{
    convex_hull_2d, convex_polygon_intersection, homogeneous, ConvexPolygon, Point2, Point3, Rational, Shadow,
};

/// A finite subset of the grid, indexed both by level and by column.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActiveSet {
    levels: BTreeMap<Rational, BTreeSet<Point2>>,
    columns: BTreeMap<Point2, BTreeSet<Rational>>,
}

impl ActiveSet {
    pub fn new() -> Self {
        ActiveSet::default()
    }

    pub fn from_grid(grid: &Grid) -> Self {
        ActiveSet {
            levels: grid.by_level(),
            columns: grid.by_column(),
        }
    }

    pub fn insert(&mut self, p: Point3) -> bool {
        let fresh = self.levels.entry(p.z.clone()).or_default().insert(p.xy.clone());
        self.columns.entry(p.xy).or_default().insert(p.z);
        fresh
    }

    pub fn remove(&mut self, p: &Point3) -> bool {
        let Some(level) = self.levels.get_mut(&p.z) else {
            return false;
        };
        if !level.remove(&p.xy) {
            return false;
        }
        if level.is_empty() {
            self.levels.remove(&p.z);
        }
        let column = self.columns.get_mut(&p.xy).expect("indices in sync");
        column.remove(&p.z);
        if column.is_empty() {
            self.columns.remove(&p.xy);
        }
        true
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.levels.get(&p.z).is_some_and(|l| l.contains(&p.xy))
    }

    pub fn len(&self) -> usize {
        self.levels.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn heights(&self) -> impl Iterator<Item = &Rational> {
        self.levels.keys()
    }

    pub fn levels(&self) -> &BTreeMap<Rational, BTreeSet<Point2>> {
        &self.levels
    }

    pub fn columns(&self) -> &BTreeMap<Point2, BTreeSet<Rational>> {
        &self.columns
    }

    pub fn level(&self, h: &Rational) -> Option<&BTreeSet<Point2>> {
        self.levels.get(h)
    }

    /// Points in `(z, x, y)` order.
    pub fn points(&self) -> impl Iterator<Item = Point3> + '_ {
        self.levels
            .iter()
            .flat_map(|(h, l)| l.iter().map(move |q| q.at(h.clone())))
    }

    pub fn to_set(&self) -> BTreeSet<Point3> {
        self.points().collect()
    }

    /// Whether `p` is the top or the bottom of its column.
    fn is_column_end(&self, q: &Point2, h: &Rational) -> bool {
        match self.columns.get(q) {
            Some(col) => col.first() == Some(h) || col.last() == Some(h),
            None => false,
        }
    }
}

impl FromIterator<Point3> for ActiveSet {
    fn from_iter<I: IntoIterator<Item = Point3>>(iter: I) -> Self {
        let mut a = ActiveSet::new();
        for p in iter {
            a.insert(p);
        }
        a
    }
}

fn level_vertices(level: &BTreeSet<Point2>) -> Vec<Point2> {
    convex_hull_2d(level)
        .map(|h| h.vertices().to_vec())
        .unwrap_or_default()
}

/// Points of `A` that are neither strictly inside a vertical segment between
/// two points of `A` nor in the planar hull of the other points at their
/// height.
pub fn finitely_extremal(active: &ActiveSet) -> BTreeSet<Point3> {
    active
        .levels
        .par_iter()
        .map(|(h, level)| {
            level_vertices(level)
                .into_iter()
                .filter(|q| active.is_column_end(q, h))
                .map(|q| q.at(h.clone()))
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// Point selection policy of the elimination loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Remove every finitely extremal non-input point at once.
    #[default]
    Batch,
    /// Remove one point per step, the smallest in `(z, x, y)` order.
    SequentialLex,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "batch" => Ok(Strategy::Batch),
            "seq" | "sequential" | "sequential-lex" => Ok(Strategy::SequentialLex),
            other => Err(format!("unknown strategy `{other}` (expected `batch` or `seq`)")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Strategy::Batch => "batch",
            Strategy::SequentialLex => "sequential-lex",
        })
    }
}

/// One elimination step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub step: usize,
    pub removed: BTreeSet<Point3>,
}

/// Record of an elimination run: the removed batches in order and the
/// surviving set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub strategy: Strategy,
    pub batches: Vec<Batch>,
    pub final_set: ActiveSet,
}

impl EliminationTrace {
    pub fn steps(&self) -> usize {
        self.batches.len()
    }

    pub fn total_removed(&self) -> usize {
        self.batches.iter().map(|b| b.removed.len()).sum()
    }
}

/// Deduplicated input set; errors on empty input.
pub fn ingest<'a, I>(input: I) -> Result<BTreeSet<Point3>, HullError>
where
    I: IntoIterator<Item = &'a Point3>,
{
    let k: BTreeSet<Point3> = input.into_iter().cloned().collect();
    if k.is_empty() {
        return Err(HullError::EmptyInput);
    }
    Ok(k)
}

/// Runs the elimination algorithm on `K` starting from its first-order grid.
pub fn eliminate<'a, I>(input: I, strategy: Strategy) -> Result<EliminationTrace, HullError>
where
    I: IntoIterator<Item = &'a Point3>,
{
    let k = ingest(input)?;
    let grid = Grid::build(&k)?;
    Ok(eliminate_from(&k, ActiveSet::from_grid(&grid), strategy))
}

/// Runs the elimination loop from an arbitrary starting set containing `K`.
pub fn eliminate_from(k: &BTreeSet<Point3>, start: ActiveSet, strategy: Strategy) -> EliminationTrace {
    match strategy {
        Strategy::Batch => eliminate_batch(k, start),
        Strategy::SequentialLex => eliminate_sequential(k, start),
    }
}

/// Index-based working copy of an active set: planar points are numbered
/// in lexicographic order and heights in increasing order, so a level scan
/// in index order is already sorted for the hull computation.
struct Engine {
    plane: Vec<Point2>,
    shadows: Vec<Shadow>,
    weighted: Vec<[BigInt; 3]>,
    heights: Vec<Rational>,
    /// `active[level][point]`.
    active: Vec<Vec<bool>>,
    input: Vec<Vec<bool>>,
    /// Lowest and highest active level of each column.
    column_ends: Vec<Option<(usize, usize)>>,
    hulls: Vec<PeelingHull>,
}

impl Engine {
    fn new(k: &BTreeSet<Point3>, start: &ActiveSet) -> Engine {
        let plane: Vec<Point2> = start.columns.keys().cloned().collect();
        let shadows = plane.iter().map(Shadow::of).collect();
        let weighted = plane.iter().map(homogeneous).collect();
        let heights: Vec<Rational> = start.levels.keys().cloned().collect();
        let point_index: BTreeMap<&Point2, usize> = plane.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let mut active = vec![vec![false; plane.len()]; heights.len()];
        let mut input = vec![vec![false; plane.len()]; heights.len()];
        for (l, level) in start.levels.values().enumerate() {
            for q in level {
                active[l][point_index[q]] = true;
            }
        }
        for p in k {
            if let (Some(&i), Ok(l)) = (point_index.get(&p.xy), heights.binary_search(&p.z)) {
                input[l][i] = true;
            }
        }
        let mut engine = Engine {
            plane,
            shadows,
            weighted,
            heights,
            active,
            input,
            column_ends: Vec::new(),
            hulls: Vec::new(),
        };
        engine.column_ends = (0..engine.plane.len()).map(|i| engine.find_column_ends(i)).collect();
        engine.hulls = (0..engine.heights.len())
            .into_par_iter()
            .map(|l| {
                let ids: Vec<usize> = (0..engine.plane.len()).filter(|&i| engine.active[l][i]).collect();
                let fixed: Vec<usize> = ids.iter().copied().filter(|&i| engine.input[l][i]).collect();
                PeelingHull::new(engine.view(), &ids, &fixed)
            })
            .collect();
        engine
    }

    fn find_column_ends(&self, i: usize) -> Option<(usize, usize)> {
        let lo = (0..self.heights.len()).find(|&l| self.active[l][i])?;
        let hi = (0..self.heights.len()).rev().find(|&l| self.active[l][i])?;
        Some((lo, hi))
    }

    fn view(&self) -> Plane<'_> {
        Plane {
            points: &self.plane,
            shadows: &self.shadows,
            weighted: &self.weighted,
        }
    }

    /// Finitely extremal non-input points as `(level, point)` pairs in
    /// `(z, x, y)` order.
    fn removable(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (l, hull) in self.hulls.iter().enumerate() {
            let start = out.len();
            out.extend(hull.vertices().iter().filter_map(|&i| {
                let (lo, hi) = self.column_ends[i]?;
                ((l == lo || l == hi) && !self.input[l][i]).then_some((l, i))
            }));
            out[start..].sort_unstable();
        }
        out
    }

    /// Deletes the given points, which must be hull vertices of their
    /// levels, and repairs the touched hulls.
    fn remove(&mut self, points: &[(usize, usize)]) {
        let mut touched: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &(l, i) in points {
            self.active[l][i] = false;
            touched.entry(l).or_default().insert(i);
        }
        for &(_, i) in points {
            self.column_ends[i] = self.find_column_ends(i);
        }
        let plane = Plane {
            points: &self.plane,
            shadows: &self.shadows,
            weighted: &self.weighted,
        };
        self.hulls
            .par_iter_mut()
            .enumerate()
            .for_each(|(l, hull)| {
                if let Some(deleted) = touched.get(&l) {
                    hull.remove(plane, deleted);
                }
            });
    }

    fn point(&self, (l, i): (usize, usize)) -> Point3 {
        self.plane[i].at(self.heights[l].clone())
    }

    fn into_active_set(self) -> ActiveSet {
        // Both indices come out of sorted data, so the maps are bulk-built.
        let levels = self
            .active
            .iter()
            .enumerate()
            .filter(|(_, row)| row.iter().any(|&on| on))
            .map(|(l, row)| {
                let points = (0..row.len()).filter(|&i| row[i]).map(|i| self.plane[i].clone()).collect();
                (self.heights[l].clone(), points)
            })
            .collect();
        let columns = (0..self.plane.len())
            .filter_map(|i| {
                let zs: BTreeSet<Rational> =
                    (0..self.heights.len()).filter(|&l| self.active[l][i]).map(|l| self.heights[l].clone()).collect();
                (!zs.is_empty()).then(|| (self.plane[i].clone(), zs))
            })
            .collect();
        ActiveSet { levels, columns }
    }
}

fn eliminate_batch(k: &BTreeSet<Point3>, active: ActiveSet) -> EliminationTrace {
    let mut engine = Engine::new(k, &active);
    let mut batches = Vec::new();
    loop {
        let removed = engine.removable();
        if removed.is_empty() {
            break;
        }
        engine.remove(&removed);
        batches.push(Batch {
            step: batches.len(),
            removed: removed.iter().map(|&p| engine.point(p)).collect(),
        });
    }
    EliminationTrace {
        strategy: Strategy::Batch,
        batches,
        final_set: engine.into_active_set(),
    }
}

fn eliminate_sequential(k: &BTreeSet<Point3>, active: ActiveSet) -> EliminationTrace {
    let mut engine = Engine::new(k, &active);
    let mut batches = Vec::new();
    while let Some(&first) = engine.removable().first() {
        engine.remove(&[first]);
        batches.push(Batch {
            step: batches.len(),
            removed: [engine.point(first)].into_iter().collect(),
        });
    }
    EliminationTrace {
        strategy: Strategy::SequentialLex,
        batches,
        final_set: engine.into_active_set(),
    }
}

/// Slab between two consecutive heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slab {
    pub lower: Rational,
    pub upper: Rational,
    /// Intersection of the two adjacent level polygons; `None` when empty.
    pub polygon: Option<ConvexPolygon>,
}

/// Union of the planar hulls of each level of a finite set together with
/// the vertical prisms over the intersections of consecutive level hulls.
///
/// Slab polygon vertices are not necessarily grid points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HvComplex {
    heights: Vec<Rational>,
    levels: Vec<ConvexPolygon>,
    slabs: Vec<Option<ConvexPolygon>>,
}

impl HvComplex {
    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    pub fn level_polys(&self) -> &[ConvexPolygon] {
        &self.levels
    }

    pub fn slab_polys(&self) -> &[Option<ConvexPolygon>] {
        &self.slabs
    }

    pub fn slabs(&self) -> impl Iterator<Item = Slab> + '_ {
        self.slabs.iter().enumerate().map(|(j, s)| Slab {
            lower: self.heights[j].clone(),
            upper: self.heights[j + 1].clone(),
            polygon: s.clone(),
        })
    }

    pub fn level_at(&self, h: &Rational) -> Option<&ConvexPolygon> {
        self.heights.binary_search(h).ok().map(|j| &self.levels[j])
    }

    /// Rebuilds a complex from its parts, recomputing each slab from the
    /// adjacent levels.
    pub fn from_levels(levels: Vec<(Rational, ConvexPolygon)>) -> Result<HvComplex, HullError> {
        if levels.is_empty() {
            return Err(HullError::EmptyInput);
        }
        let mut levels = levels;
        levels.sort_by(|a, b| a.0.cmp(&b.0));
        levels.dedup_by(|a, b| a.0 == b.0);
        let (heights, levels): (Vec<_>, Vec<_>) = levels.into_iter().unzip();
        let slabs = levels
            .windows(2)
            .map(|w| convex_polygon_intersection(&w[0], &w[1]))
            .collect();
        Ok(HvComplex {
            heights,
            levels,
            slabs,
        })
    }

    pub fn contains(&self, p: &Point3) -> bool {
        membership(self, p)
    }
}

/// The hv-hull of a non-empty finite set.
pub fn hv_hull(active: &ActiveSet) -> Result<HvComplex, HullError> {
    if active.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let levels = active
        .levels
        .par_iter()
        .map(|(h, l)| (h.clone(), convex_hull_2d(l).expect("levels are non-empty")))
        .collect();
    HvComplex::from_levels(levels)
}

/// Exact membership in the closed set described by `M`.
pub fn membership(complex: &HvComplex, p: &Point3) -> bool {
    match complex.heights.binary_search(&p.z) {
        Ok(j) => complex.levels[j].contains(&p.xy),
        Err(0) => false,
        Err(j) if j == complex.heights.len() => false,
        Err(j) => complex.slabs[j - 1]
            .as_ref()
            .is_some_and(|s| s.contains(&p.xy)),
    }
}

/// Points of `M` through which no relatively open horizontal or vertical
/// segment of `M` passes.
///
/// `M` must be the hv-hull of `A`.
pub fn complex_extremal_points(complex: &HvComplex, active: &ActiveSet) -> Result<BTreeSet<Point3>, HullError> {
    if hv_hull(active)? != *complex {
        return Err(HullError::InconsistentComplex);
    }
    Ok(extremal_points_of(complex))
}

/// Extremal points of a complex: level vertices not lying strictly inside a
/// vertical segment (i.e. not in both the slab below and the slab above).
pub fn extremal_points_of(complex: &HvComplex) -> BTreeSet<Point3> {
    let m = complex.heights.len();
    let in_slab = |j: usize, q: &Point2| complex.slabs[j].as_ref().is_some_and(|s| s.contains(q));
    let mut out = BTreeSet::new();
    for (j, (h, poly)) in complex.heights.iter().zip(&complex.levels).enumerate() {
        for q in poly.vertices() {
            let below = j > 0 && in_slab(j - 1, q);
            let above = j + 1 < m && in_slab(j, q);
            if !(below && above) {
                out.insert(q.at(h.clone()));
            }
        }
    }
    out
}

/// A finite superset of `K` inside the grid whose hv-hull is the hull of `K`.
pub fn scaffolding<'a, I>(input: I) -> Result<BTreeSet<Point3>, HullError>
where
    I: IntoIterator<Item = &'a Point3>,
{
    Ok(eliminate(input, Strategy::Batch)?.final_set.to_set())
}

/// Everything produced by one run of the pipeline.
#[derive(Clone, Debug)]
pub struct Hull {
    pub input: BTreeSet<Point3>,
    pub grid: Grid,
    pub trace: EliminationTrace,
    pub complex: HvComplex,
}

impl Hull {
    pub fn compute<'a, I>(input: I, strategy: Strategy) -> Result<Hull, HullError>
    where
        I: IntoIterator<Item = &'a Point3>,
    {
        let input = ingest(input)?;
        let grid = Grid::build(&input)?;
        let trace = eliminate_from(&input, ActiveSet::from_grid(&grid), strategy);
        let complex = hv_hull(&trace.final_set)?;
        Ok(Hull {
            input,
            grid,
            trace,
            complex,
        })
    }

    pub fn contains(&self, p: &Point3) -> bool {
        membership(&self.complex, p)
    }

    pub fn extremal_points(&self) -> BTreeSet<Point3> {
        extremal_points_of(&self.complex)
    }

    pub fn scaffolding(&self) -> BTreeSet<Point3> {
        self.trace.final_set.to_set()
    }
}
