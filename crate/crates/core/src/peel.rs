//! Planar hull of one level under deletion of hull vertices.
//!
//! Deleting a run of consecutive vertices between surviving vertices `u`
//! and `w` only changes the boundary on the far side of the chord `uw`.
//! That part is rebuilt by repeatedly splitting a chord at the live point
//! farthest beyond it, found by branch and bound in a kd-tree over
//! floating-point shadows. The float bounds only prune; the winner is
//! chosen with exact arithmetic.

use std::collections::BTreeSet;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::kernel::{monotone_chain, orientation_shadowed, Point2, Shadow};

/// Points and shadows shared by all levels, numbered in lexicographic order.
#[derive(Clone, Copy)]
pub(crate) struct Plane<'a> {
    pub points: &'a [Point2],
    pub shadows: &'a [Shadow],
    /// Integer coordinates `[X, Y, W]` with positive weight `W`.
    pub weighted: &'a [[BigInt; 3]],
}

impl Plane<'_> {
    fn orient(&self, i: usize, j: usize, k: usize) -> i8 {
        let (p, s) = (self.points, self.shadows);
        orientation_shadowed(&p[i], &s[i], &p[j], &s[j], &p[k], &s[k])
    }

    /// Hull vertex ids of `ids`, which must be sorted and distinct.
    fn hull(&self, ids: &[usize]) -> Vec<usize> {
        monotone_chain(ids, |i, j, k| self.orient(i, j, k))
    }
}

const LEAF: usize = 8;

struct Node {
    lo: usize,
    hi: usize,
    min: [f64; 2],
    max: [f64; 2],
    alive: usize,
    children: Option<(usize, usize)>,
}

/// Static kd-tree with deletion flags.
struct KdTree {
    ids: Vec<usize>,
    alive: Vec<bool>,
    nodes: Vec<Node>,
}

impl KdTree {
    fn new(plane: Plane, mut ids: Vec<usize>) -> KdTree {
        let n = ids.len();
        let mut tree = KdTree {
            ids: Vec::new(),
            alive: vec![true; n],
            nodes: Vec::new(),
        };
        if n > 0 {
            tree.build(plane, &mut ids, 0);
        }
        tree.ids = ids;
        tree
    }

    fn build(&mut self, plane: Plane, ids: &mut [usize], offset: usize) -> usize {
        let coord = |i: usize, axis: usize| {
            let s = plane.shadows[i];
            if axis == 0 {
                s.x()
            } else {
                s.y()
            }
        };
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for &i in ids.iter() {
            for axis in 0..2 {
                min[axis] = min[axis].min(coord(i, axis));
                max[axis] = max[axis].max(coord(i, axis));
            }
        }
        let at = self.nodes.len();
        self.nodes.push(Node {
            lo: offset,
            hi: offset + ids.len(),
            min,
            max,
            alive: ids.len(),
            children: None,
        });
        if ids.len() > LEAF {
            let axis = usize::from(max[1] - min[1] > max[0] - min[0]);
            let mid = ids.len() / 2;
            ids.select_nth_unstable_by(mid, |&a, &b| coord(a, axis).total_cmp(&coord(b, axis)));
            let (left, right) = ids.split_at_mut(mid);
            let l = self.build(plane, left, offset);
            let r = self.build(plane, right, offset + mid);
            self.nodes[at].children = Some((l, r));
        }
        at
    }

    /// Marks `id` dead; `pos` is its slot in `ids`.
    fn kill(&mut self, pos: usize) {
        if !std::mem::replace(&mut self.alive[pos], false) {
            return;
        }
        let mut at = 0;
        loop {
            self.nodes[at].alive -= 1;
            match self.nodes[at].children {
                Some((l, r)) => at = if pos < self.nodes[l].hi { l } else { r },
                None => break,
            }
        }
    }

    /// The live point farthest on the open right of the line `a -> b`,
    /// ties going to the one farthest along `b - a`; such a point is a
    /// vertex of the hull of the live points.
    fn farthest_right(&self, plane: Plane, a: usize, b: usize) -> Option<usize> {
        if self.nodes.is_empty() {
            return None;
        }
        let line = Line::new(plane, a, b);
        // Every candidate's true distance is at most its upper bound; the
        // winner's is at least `floor`.
        let mut floor = 0.0f64;
        let mut candidates: Vec<(f64, usize)> = Vec::new();
        let mut stack = vec![(0, line.box_upper(&self.nodes[0]))];
        while let Some((at, ub)) = stack.pop() {
            let node = &self.nodes[at];
            if node.alive == 0 || ub <= 0.0 || ub < floor {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    let (ul, ur) = (line.box_upper(&self.nodes[l]), line.box_upper(&self.nodes[r]));
                    // Visit the more promising child first.
                    if ul > ur {
                        stack.extend([(r, ur), (l, ul)]);
                    } else {
                        stack.extend([(l, ul), (r, ur)]);
                    }
                }
                None => {
                    for p in (node.lo..node.hi).filter(|&p| self.alive[p]) {
                        let id = self.ids[p];
                        let (lo, hi) = line.point_range(plane.shadows[id]);
                        if hi <= 0.0 || hi < floor {
                            continue;
                        }
                        floor = floor.max(lo);
                        candidates.push((hi, id));
                    }
                }
            }
        }
        // With positive weights, `-(a × b) · p / W_p` is the distance of
        // `p` to the right of the line scaled by a positive constant, and
        // `d · (X_p, Y_p) / W_p` its position along `d`, a positive
        // multiple of `b - a`.
        let (ha, hb) = (&plane.weighted[a], &plane.weighted[b]);
        let line = cross3(ha, hb);
        let d = [&hb[0] * &ha[2] - &ha[0] * &hb[2], &hb[1] * &ha[2] - &ha[1] * &hb[2]];
        let mut best: Vec<usize> = Vec::new();
        let mut best_dist = (BigInt::zero(), BigInt::one());
        for (_, id) in candidates.into_iter().filter(|&(hi, _)| hi >= floor) {
            let h = &plane.weighted[id];
            let dist = (-(&line[0] * &h[0] + &line[1] * &h[1] + &line[2] * &h[2]), h[2].clone());
            match compare(&dist, &best_dist) {
                Ordering::Greater => {
                    best_dist = dist;
                    best = vec![id];
                }
                Ordering::Equal if dist.0.is_positive() => best.push(id),
                _ => {}
            }
        }
        let along = |id: usize| {
            let h = &plane.weighted[id];
            (&d[0] * &h[0] + &d[1] * &h[1], h[2].clone())
        };
        best.into_iter().map(|id| (along(id), id)).max_by(|x, y| compare(&x.0, &y.0)).map(|(_, id)| id)
    }
}

fn cross3(u: &[BigInt; 3], v: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ]
}

/// Order of fractions `n / w` with positive `w`.
fn compare(x: &(BigInt, BigInt), y: &(BigInt, BigInt)) -> Ordering {
    (&x.0 * &y.1).cmp(&(&y.0 * &x.1))
}

/// Floating-point evaluation of the signed distance (scaled) to the right
/// of a line, with rounding bounds.
struct Line {
    ax: f64,
    ay: f64,
    dx: f64,
    dy: f64,
    /// `|ax| + |bx|` and `|ay| + |by|`.
    sx: f64,
    sy: f64,
}

impl Line {
    fn new(plane: Plane, a: usize, b: usize) -> Line {
        let (a, b) = (plane.shadows[a], plane.shadows[b]);
        Line {
            ax: a.x(),
            ay: a.y(),
            dx: b.x() - a.x(),
            dy: b.y() - a.y(),
            sx: a.x().abs() + b.x().abs(),
            sy: a.y().abs() + b.y().abs(),
        }
    }

    fn value(&self, x: f64, y: f64) -> f64 {
        self.dy * (x - self.ax) - self.dx * (y - self.ay)
    }

    /// Rounding bound for points with coordinates at most `cx`, `cy` in
    /// absolute value.
    fn error(&self, cx: f64, cy: f64) -> f64 {
        16.0 * f64::EPSILON * (self.sx * (self.ay.abs() + cy) + self.sy * (self.ax.abs() + cx))
    }

    fn bounded(v: f64, e: f64) -> bool {
        v.is_finite() && e.is_finite() && e >= TINY
    }

    /// Interval containing the exact value at the point shadowed by `s`;
    /// unbounded when the arithmetic is not trustworthy.
    fn point_range(&self, s: Shadow) -> (f64, f64) {
        let v = self.value(s.x(), s.y());
        let e = self.error(s.x().abs(), s.y().abs());
        if Self::bounded(v, e) {
            (v - e, v + e)
        } else {
            (f64::NEG_INFINITY, f64::INFINITY)
        }
    }

    /// Upper bound of the exact value over a box. The computed value is
    /// monotone in each coordinate, so the largest corner is known from the
    /// signs of the direction.
    fn box_upper(&self, node: &Node) -> f64 {
        let x = if self.dy > 0.0 { node.max[0] } else { node.min[0] };
        let y = if self.dx > 0.0 { node.min[1] } else { node.max[1] };
        let v = self.value(x, y);
        let e = self.error(node.min[0].abs().max(node.max[0].abs()), node.min[1].abs().max(node.max[1].abs()));
        if Self::bounded(v, e) {
            v + e
        } else {
            f64::INFINITY
        }
    }
}

/// Below this scale rounding bounds are not trusted (subnormal range).
const TINY: f64 = 1e-280;

/// Hull of the live points of a level, kept under vertex deletion.
pub(crate) struct PeelingHull {
    /// Vertices in counter-clockwise order.
    cycle: Vec<usize>,
    tree: KdTree,
    /// Slot of each plane id in the tree, `usize::MAX` when absent.
    slot: Vec<usize>,
    /// Tree ids in increasing order, and the positions in it of the
    /// smallest and largest live ones.
    sorted: Vec<usize>,
    first: usize,
    last: usize,
}

impl PeelingHull {
    /// `ids` are the active points of the level in increasing order and
    /// `fixed` the ones that are never deleted. Points in the hull of
    /// `fixed` that are not its vertices can never become extreme and are
    /// left out.
    pub(crate) fn new(plane: Plane, ids: &[usize], fixed: &[usize]) -> PeelingHull {
        let core = plane.hull(fixed);
        let candidates: Vec<usize> = if core.len() < 3 {
            ids.to_vec()
        } else {
            let core_set: BTreeSet<usize> = core.iter().copied().collect();
            ids.iter()
                .copied()
                .filter(|&p| {
                    core_set.contains(&p) || (0..core.len()).any(|e| plane.orient(core[e], core[(e + 1) % core.len()], p) < 0)
                })
                .collect()
        };
        let mut slot = vec![usize::MAX; plane.points.len()];
        let tree = KdTree::new(plane, candidates.clone());
        for (pos, &i) in tree.ids.iter().enumerate() {
            slot[i] = pos;
        }
        PeelingHull {
            cycle: plane.hull(&candidates),
            tree,
            slot,
            first: 0,
            last: candidates.len().saturating_sub(1),
            sorted: candidates,
        }
    }

    pub(crate) fn vertices(&self) -> &[usize] {
        &self.cycle
    }

    /// Deletes hull vertices and repairs the boundary.
    pub(crate) fn remove(&mut self, plane: Plane, deleted: &BTreeSet<usize>) {
        for &i in deleted {
            self.tree.kill(self.slot[i]);
        }
        let survivors: Vec<usize> = (0..self.cycle.len()).filter(|&k| !deleted.contains(&self.cycle[k])).collect();
        if self.cycle.len() < 3 || survivors.len() < 2 {
            self.cycle = self.rebuild(plane);
            return;
        }
        let n = self.cycle.len();
        let mut next = Vec::with_capacity(n);
        for (s, &k) in survivors.iter().enumerate() {
            let u = self.cycle[k];
            next.push(u);
            let end = survivors[(s + 1) % survivors.len()];
            if (k + 1) % n == end {
                continue;
            }
            next.extend(self.arc(plane, u, self.cycle[end]));
        }
        self.cycle = next;
    }

    fn is_alive(&self, id: usize) -> bool {
        self.tree.alive[self.slot[id]]
    }

    /// Whole hull from the lexicographic extremes, which are vertices.
    fn rebuild(&mut self, plane: Plane) -> Vec<usize> {
        while self.first < self.sorted.len() && !self.is_alive(self.sorted[self.first]) {
            self.first += 1;
        }
        while self.last > self.first && !self.is_alive(self.sorted[self.last]) {
            self.last -= 1;
        }
        if self.first >= self.sorted.len() {
            return Vec::new();
        }
        let (lo, hi) = (self.sorted[self.first], self.sorted[self.last]);
        if lo == hi {
            return vec![lo];
        }
        let mut cycle = vec![lo];
        cycle.extend(self.arc(plane, lo, hi));
        cycle.push(hi);
        cycle.extend(self.arc(plane, hi, lo));
        cycle
    }

    /// Vertices strictly between `u` and `w` on the new boundary, which
    /// lies on the right of `u -> w`.
    fn arc(&self, plane: Plane, u: usize, w: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut pending = vec![(u, w)];
        // Depth-first, right part last, so vertices come out in order.
        while let Some((a, b)) = pending.pop() {
            match self.tree.farthest_right(plane, a, b) {
                Some(p) => pending.extend([(p, b), (a, p)]),
                None => out.push(b),
            }
        }
        out.pop();
        out
    }
}
