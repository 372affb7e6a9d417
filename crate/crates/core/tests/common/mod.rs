//! Random instances and brute-force oracles shared by the integration tests.
//! Nothing here calls into the hull construction it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rchull::kernel::{int, Point2, Point3, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to 8 points with integer coordinates in [-4, 4]. Every other
/// instance squeezes heights into {0, 1, 2} so that columns and levels
/// actually interact.
pub fn random_instance(rng: &mut ChaCha8Rng, index: usize) -> Vec<Point3> {
    let n = rng.gen_range(1..=8);
    let (zlo, zhi) = if index % 2 == 0 { (-4, 4) } else { (0, 2) };
    (0..n)
        .map(|_| {
            Point3::from_ints(
                rng.gen_range(-4..=4),
                rng.gen_range(-4..=4),
                rng.gen_range(zlo..=zhi),
            )
        })
        .collect()
}

pub fn random_single_height(rng: &mut ChaCha8Rng) -> Vec<Point3> {
    let n = rng.gen_range(1..=8);
    let z = rng.gen_range(-4..=4);
    (0..n)
        .map(|_| Point3::from_ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4), z))
        .collect()
}

pub fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=4);
    Rational::new(BigInt::from(rng.gen_range(lo * d..=hi * d)), BigInt::from(d))
}

/// Random query points around an instance: every third one sits exactly
/// on an input height.
pub fn probe_points(rng: &mut ChaCha8Rng, k: &[Point3], count: usize) -> Vec<Point3> {
    let heights: Vec<Rational> = k.iter().map(|p| p.z.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    (0..count)
        .map(|i| {
            let z = if i % 3 == 0 {
                heights[rng.gen_range(0..heights.len())].clone()
            } else {
                random_rational(rng, -5, 5)
            };
            Point3::from_coords(random_rational(rng, -5, 5), random_rational(rng, -5, 5), z)
        })
        .collect()
}

/// `T(x, y, z) = (L(x, y) + c, a z + b)` with `L` invertible and `a ≠ 0`.
#[derive(Clone, Debug)]
pub struct Affine {
    pub l: [[Rational; 2]; 2],
    pub c: [Rational; 2],
    pub a: Rational,
    pub b: Rational,
}

impl Affine {
    pub fn random(rng: &mut ChaCha8Rng) -> Affine {
        loop {
            let l = [
                [random_rational(rng, -3, 3), random_rational(rng, -3, 3)],
                [random_rational(rng, -3, 3), random_rational(rng, -3, 3)],
            ];
            let det = &l[0][0] * &l[1][1] - &l[0][1] * &l[1][0];
            let a = random_rational(rng, -3, 3);
            if det.is_zero() || a.is_zero() {
                continue;
            }
            return Affine {
                l,
                c: [random_rational(rng, -2, 2), random_rational(rng, -2, 2)],
                a,
                b: random_rational(rng, -2, 2),
            };
        }
    }

    pub fn apply2(&self, q: &Point2) -> Point2 {
        Point2::new(
            &self.l[0][0] * &q.x + &self.l[0][1] * &q.y + &self.c[0],
            &self.l[1][0] * &q.x + &self.l[1][1] * &q.y + &self.c[1],
        )
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        Point3::new(self.apply2(&p.xy), &self.a * &p.z + &self.b)
    }
}

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

fn on_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if !cross(a, b, p).is_zero() {
        return false;
    }
    let within = |u: &Rational, v: &Rational, w: &Rational| (u <= w && w <= v) || (v <= w && w <= u);
    within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y)
}

/// Hull membership by supporting lines: `p` is outside the hull of `s` iff
/// some line through `p` and a point `q` of `s` has all of `s` on one closed
/// side, with the points on the line lying on the open ray from `p`
/// through `q`.
pub fn brute_in_hull(s: &[&Point2], p: &Point2) -> bool {
    if s.is_empty() {
        return false;
    }
    if s.iter().any(|q| *q == p) {
        return true;
    }
    let dot = |a: &Point2, b: &Point2| (&a.x - &p.x) * (&b.x - &p.x) + (&a.y - &p.y) * (&b.y - &p.y);
    let supporting = |q: &Point2| {
        let mut left = false;
        let mut right = false;
        for r in s {
            let side = cross(p, q, r);
            if side.is_positive() {
                left = true;
            } else if side.is_negative() {
                right = true;
            } else if !dot(q, r).is_positive() {
                return false;
            }
            if left && right {
                return false;
            }
        }
        true
    };
    !s.iter().any(|q| supporting(q))
}

/// Intersection of closed segments via Cramer's rule over every pair,
/// shared endpoints included. `None` for disjoint or overlapping segments.
fn brute_segment_meet(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Option<Point2> {
    // a + t (b - a) = c + u (d - c)
    let (m00, m01) = (&b.x - &a.x, &c.x - &d.x);
    let (m10, m11) = (&b.y - &a.y, &c.y - &d.y);
    let (r0, r1) = (&c.x - &a.x, &c.y - &a.y);
    let det = &m00 * &m11 - &m01 * &m10;
    if !det.is_zero() {
        let t = (&r0 * &m11 - &m01 * &r1) / &det;
        let u = (&m00 * &r1 - &r0 * &m10) / &det;
        let unit = |v: &Rational| !v.is_negative() && *v <= Rational::one();
        return (unit(&t) && unit(&u)).then(|| Point2::new(&a.x + &t * &m00, &a.y + &t * &m10));
    }
    // Parallel: collect endpoints lying on the other segment.
    let mut common: BTreeSet<Point2> = BTreeSet::new();
    for (p, (u, v)) in [(a, (c, d)), (b, (c, d)), (c, (a, b)), (d, (a, b))] {
        if on_segment(u, v, p) {
            common.insert(p.clone());
        }
    }
    if common.len() == 1 {
        common.into_iter().next()
    } else {
        None
    }
}

/// `F¹` by enumerating every pair of segments with endpoints in `F`.
pub fn brute_derived_set(f: &BTreeSet<Point2>) -> BTreeSet<Point2> {
    let pts: Vec<&Point2> = f.iter().collect();
    let mut segs = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            segs.push((pts[i], pts[j]));
        }
    }
    let mut out = BTreeSet::new();
    for (i, (a, b)) in segs.iter().enumerate() {
        for (c, d) in &segs[i + 1..] {
            if let Some(x) = brute_segment_meet(a, b, c, d) {
                if !f.contains(&x) {
                    out.insert(x);
                }
            }
        }
    }
    out
}

/// Finitely extremal points straight from the definition.
pub fn brute_finitely_extremal(a: &BTreeSet<Point3>) -> BTreeSet<Point3> {
    a.iter()
        .filter(|p| {
            let column: Vec<&Rational> = a.iter().filter(|q| q.xy == p.xy).map(|q| &q.z).collect();
            let vertically_inside = column.iter().any(|lo| *lo < &p.z) && column.iter().any(|hi| *hi > &p.z);
            let others: Vec<&Point2> = a.iter().filter(|q| q.z == p.z && q.xy != p.xy).map(|q| &q.xy).collect();
            !vertically_inside && !brute_in_hull(&others, &p.xy)
        })
        .cloned()
        .collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn spiral() -> Vec<Point3> {
    [(1, 0, 0), (0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 2), (1, 1, 2)]
        .iter()
        .map(|&(x, y, z)| Point3::from_ints(x, y, z))
        .collect()
}

pub fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

pub fn zero() -> Rational {
    int(0)
}
