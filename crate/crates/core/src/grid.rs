//! The first derived set of the planar projection and the first-order grid
//! built from it.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::HullError;
use crate::kernel::{homogeneous, orientation_shadowed, Point2, Point3, Rational, Shadow};

/// Planar projection `F` and sorted distinct heights `H` of a point set.
pub fn project<'a, I>(points: I) -> Result<(BTreeSet<Point2>, Vec<Rational>), HullError>
where
    I: IntoIterator<Item = &'a Point3>,
{
    let mut planar = BTreeSet::new();
    let mut heights = BTreeSet::new();
    for p in points {
        planar.insert(p.xy.clone());
        heights.insert(p.z.clone());
    }
    if planar.is_empty() {
        return Err(HullError::EmptyInput);
    }
    Ok((planar, heights.into_iter().collect()))
}

/// All points outside `F` where two segments with endpoints in `F` meet in
/// a single point.
///
/// Such a point is a proper crossing of two segments with four distinct
/// endpoints: a touching point of two segments is an endpoint of one of
/// them, and collinear segments never meet in a single point off `F`.
pub fn first_derived_set(planar: &BTreeSet<Point2>) -> BTreeSet<Point2> {
    let pts: Vec<&Point2> = planar.iter().collect();
    let found = match pts.iter().map(|p| small_homogeneous(p)).collect::<Option<Vec<_>>>() {
        Some(h) => derived_machine(&h),
        None => derived_exact(&pts),
    };
    sorted_set(found.into_iter().filter(|x| !planar.contains(x)).collect())
}

/// Index pairs `i < j`.
fn segments(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn disjoint(&(i, j): &(usize, usize), &(k, l): &(usize, usize)) -> bool {
    k != i && k != j && l != i && l != j
}

/// Proper crossings with rational arithmetic throughout.
fn derived_exact(pts: &[&Point2]) -> Vec<Point2> {
    let orient = Orientations::new(pts);
    let segments = segments(pts.len());
    segments
        .par_iter()
        .enumerate()
        .flat_map_iter(|(si, s)| {
            let (i, j) = *s;
            let (orient, segments) = (&orient, &segments);
            segments[si + 1..]
                .iter()
                .filter(move |t| disjoint(s, t))
                .filter(move |&&(k, l)| {
                    orient.get(i, j, k) * orient.get(i, j, l) < 0 && orient.get(k, l, i) * orient.get(k, l, j) < 0
                })
                .map(move |&(k, l)| crossing(pts[i], pts[j], pts[k], pts[l]))
        })
        .collect()
}

/// Homogeneous coordinates `[X, Y, W]` with `W > 0`, when each fits in 31
/// bits. Lines through two such points and crossings of two such lines
/// then fit in `i128`.
fn small_homogeneous(p: &Point2) -> Option<[i128; 3]> {
    const LIMIT: i64 = 1 << 31;
    let small = |v: &BigInt| v.to_i64().filter(|v| v.abs() < LIMIT).map(i128::from);
    let [x, y, w] = homogeneous(p);
    Some([small(&x)?, small(&y)?, small(&w)?])
}

fn cross3(u: &[i128; 3], v: &[i128; 3]) -> [i128; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Proper crossings in machine integers. With positive weights the sign
/// of the determinant of three homogeneous points is their orientation.
fn derived_machine(h: &[[i128; 3]]) -> Vec<Point2> {
    let orient = |i: usize, j: usize, k: usize| {
        let c = cross3(&h[i], &h[j]);
        (c[0] * h[k][0] + c[1] * h[k][1] + c[2] * h[k][2]).signum()
    };
    let segments = segments(h.len());
    let lines: Vec<[i128; 3]> = segments.iter().map(|&(i, j)| cross3(&h[i], &h[j])).collect();
    let mut found: Vec<[i128; 3]> = segments
        .par_iter()
        .enumerate()
        .flat_map_iter(|(si, s)| {
            let (i, j) = *s;
            let (segments, lines) = (&segments, &lines);
            segments[si + 1..]
                .iter()
                .enumerate()
                .filter(move |(_, t)| disjoint(s, t))
                .filter(move |(_, &(k, l))| orient(i, j, k) * orient(i, j, l) < 0 && orient(k, l, i) * orient(k, l, j) < 0)
                .map(move |(off, _)| {
                    let [x, y, w] = cross3(&lines[si], &lines[si + 1 + off]);
                    let g = gcd(gcd(x, y), w) * w.signum();
                    [x / g, y / g, w / g]
                })
        })
        .collect();
    found.sort_unstable();
    found.dedup();
    found
        .into_iter()
        .map(|[x, y, w]| {
            let r = |n: i128| Rational::new(BigInt::from(n), BigInt::from(w));
            Point2::new(r(x), r(y))
        })
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    a.unsigned_abs().gcd(&b.unsigned_abs()) as i128
}

/// Builds a set from points, presorting by their shadows so that the exact
/// sort only has to repair ties.
fn sorted_set(mut points: Vec<Point2>) -> BTreeSet<Point2> {
    let mut keyed: Vec<(Shadow, Point2)> = points.drain(..).map(|p| (Shadow::of(&p), p)).collect();
    keyed.sort_by(|a, b| a.0.x().total_cmp(&b.0.x()).then(a.0.y().total_cmp(&b.0.y())));
    let mut points: Vec<Point2> = keyed.into_iter().map(|(_, p)| p).collect();
    points.sort();
    points.dedup();
    points.into_iter().collect()
}

/// Intersection of the lines `ab` and `cd`, which must not be parallel.
fn crossing(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Point2 {
    let (dx, dy) = (&b.x - &a.x, &b.y - &a.y);
    let (ex, ey) = (&d.x - &c.x, &d.y - &c.y);
    let (wx, wy) = (&c.x - &a.x, &c.y - &a.y);
    let t = (&wx * &ey - &wy * &ex) / (&dx * &ey - &dy * &ex);
    Point2::new(&a.x + &t * dx, &a.y + &t * dy)
}

/// Orientation of index triples, tabulated for small inputs.
struct Orientations<'a> {
    pts: &'a [&'a Point2],
    shadows: Vec<Shadow>,
    table: Option<Vec<i8>>,
}

impl<'a> Orientations<'a> {
    const MAX_TABULATED: usize = 256;

    fn new(pts: &'a [&'a Point2]) -> Self {
        let shadows: Vec<Shadow> = pts.iter().map(|p| Shadow::of(p)).collect();
        let mut o = Orientations {
            pts,
            shadows,
            table: None,
        };
        let n = pts.len();
        if n <= Self::MAX_TABULATED {
            let mut table = vec![0i8; n * n * n];
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let s = o.compute(i, j, k);
                        for (a, b, c, sign) in [(i, j, k, s), (j, k, i, s), (k, i, j, s), (j, i, k, -s), (i, k, j, -s), (k, j, i, -s)] {
                            table[(a * n + b) * n + c] = sign;
                        }
                    }
                }
            }
            o.table = Some(table);
        }
        o
    }

    fn compute(&self, i: usize, j: usize, k: usize) -> i8 {
        let (p, s) = (self.pts, &self.shadows);
        orientation_shadowed(p[i], &s[i], p[j], &s[j], p[k], &s[k])
    }

    fn get(&self, i: usize, j: usize, k: usize) -> i8 {
        match &self.table {
            Some(t) => {
                let n = self.pts.len();
                t[(i * n + j) * n + k]
            }
            None => self.compute(i, j, k),
        }
    }
}

/// The product `(F ∪ F¹) × H` with level and column indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    projection: BTreeSet<Point2>,
    derived: BTreeSet<Point2>,
    planar_points: BTreeSet<Point2>,
    heights: Vec<Rational>,
}

impl Grid {
    pub fn build<'a, I>(input: I) -> Result<Grid, HullError>
    where
        I: IntoIterator<Item = &'a Point3>,
    {
        let (projection, heights) = project(input)?;
        let derived = first_derived_set(&projection);
        let planar_points = projection.union(&derived).cloned().collect();
        Ok(Grid {
            projection,
            derived,
            planar_points,
            heights,
        })
    }

    /// `F`, the projection of the input.
    pub fn projection(&self) -> &BTreeSet<Point2> {
        &self.projection
    }

    /// `F¹`, the first derived set of the projection.
    pub fn derived(&self) -> &BTreeSet<Point2> {
        &self.derived
    }

    /// `F ∪ F¹`.
    pub fn planar_points(&self) -> &BTreeSet<Point2> {
        &self.planar_points
    }

    pub fn heights(&self) -> &[Rational] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.planar_points.len() * self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.planar_points.contains(&p.xy) && self.heights.binary_search(&p.z).is_ok()
    }

    /// Every grid point, ordered by `(z, x, y)`.
    pub fn points(&self) -> impl Iterator<Item = Point3> + '_ {
        self.heights
            .iter()
            .flat_map(move |h| self.planar_points.iter().map(move |q| q.at(h.clone())))
    }

    pub fn by_level(&self) -> BTreeMap<Rational, BTreeSet<Point2>> {
        self.heights
            .iter()
            .map(|h| (h.clone(), self.planar_points.clone()))
            .collect()
    }

    pub fn by_column(&self) -> BTreeMap<Point2, BTreeSet<Rational>> {
        let hs: BTreeSet<Rational> = self.heights.iter().cloned().collect();
        self.planar_points
            .iter()
            .map(|q| (q.clone(), hs.clone()))
            .collect()
    }
}
