//! Shovel-based outer approximation.
//!
//! A shovel is the open set `{l(x, y) > 0, ε(z - z0) > 0}`. A point lies in
//! the outer hull of `K` iff no shovel missing `K` contains it. The search
//! is finite: for a fixed `ε` the `K`-points on the shovel's side of `z0`
//! only change when `z0` crosses a height of `K` or of the query point, so
//! one representative `z0` per open interval between consecutive relevant
//! heights is exhaustive.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::HullError;
use crate::kernel::{convex_hull_2d, int, rational_str, Point2, Point3, Rational};

/// Which side of `z0` the shovel opens to (`ε = -1` or `ε = +1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Opening {
    /// `ε = -1`: points with `z < z0`.
    Below,
    /// `ε = +1`: points with `z > z0`.
    Above,
}

impl Opening {
    pub fn sign(self) -> i8 {
        match self {
            Opening::Below => -1,
            Opening::Above => 1,
        }
    }

    fn admits(self, z: &Rational, z0: &Rational) -> bool {
        match self {
            Opening::Below => z < z0,
            Opening::Above => z > z0,
        }
    }
}

/// Affine functional `a·x + b·y + c` on the plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineFunctional {
    #[serde(with = "rational_str")]
    pub a: Rational,
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(with = "rational_str")]
    pub c: Rational,
}

impl AffineFunctional {
    pub fn eval(&self, p: &Point2) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }
}

impl fmt::Display for AffineFunctional {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "({})*x + ({})*y + ({})", self.a, self.b, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Shovel {
    l: AffineFunctional,
    #[serde(with = "rational_str")]
    z0: Rational,
    opening: Opening,
}

impl Shovel {
    pub fn new(l: AffineFunctional, z0: Rational, opening: Opening) -> Result<Shovel, HullError> {
        if l.a.is_zero() && l.b.is_zero() {
            return Err(HullError::DegenerateShovel);
        }
        Ok(Shovel { l, z0, opening })
    }

    pub fn functional(&self) -> &AffineFunctional {
        &self.l
    }

    pub fn z0(&self) -> &Rational {
        &self.z0
    }

    pub fn opening(&self) -> Opening {
        self.opening
    }

    pub fn contains(&self, p: &Point3) -> bool {
        shovel_contains(self, p)
    }
}

impl fmt::Display for Shovel {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(
            f,
            "l(x,y) = {} > 0, {}(z - {}) > 0",
            self.l,
            if self.opening == Opening::Above { "+" } else { "-" },
            self.z0
        )
    }
}

/// Both strict inequalities, exactly.
pub fn shovel_contains(s: &Shovel, p: &Point3) -> bool {
    s.l.eval(&p.xy).is_positive() && s.opening.admits(&p.z, &s.z0)
}

/// Answer of the outer-hull oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcppVerdict {
    Member,
    /// Excluded, with a shovel containing the point and missing `K`.
    Excluded(Shovel),
}

impl PcppVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, PcppVerdict::Member)
    }

    pub fn witness(&self) -> Option<&Shovel> {
        match self {
            PcppVerdict::Member => None,
            PcppVerdict::Excluded(s) => Some(s),
        }
    }
}

/// Candidate `z0` values in increasing order: one below everything, the
/// midpoint of each gap, one above everything.
fn z0_candidates(heights: &BTreeSet<Rational>) -> Vec<Rational> {
    let sorted: Vec<&Rational> = heights.iter().collect();
    let mut out = Vec::with_capacity(sorted.len() + 1);
    out.push(sorted[0] - Rational::one());
    for w in sorted.windows(2) {
        out.push((w[0] + w[1]) / int(2));
    }
    out.push(sorted[sorted.len() - 1] + Rational::one());
    out
}

/// A functional positive at `p` and strictly negative on every point of
/// `side`, or `None` if `p` lies in the convex hull of `side`.
pub fn separating_functional<'a, I>(side: I, p: &Point2) -> Option<AffineFunctional>
where
    I: IntoIterator<Item = &'a Point2>,
{
    let side: Vec<&Point2> = side.into_iter().collect();
    if side.is_empty() {
        return Some(AffineFunctional {
            a: Rational::one(),
            b: int(0),
            c: Rational::one() - &p.x,
        });
    }
    let hull = convex_hull_2d(side).expect("non-empty");
    if hull.contains(p) {
        return None;
    }
    // Perpendicular bisector of p and its closest point in the hull.
    let c = hull.closest_point(p);
    let a = &p.x - &c.x;
    let b = &p.y - &c.y;
    let mx = (&p.x + &c.x) / int(2);
    let my = (&p.y + &c.y) / int(2);
    let off = -(&a * &mx + &b * &my);
    Some(AffineFunctional { a, b, c: off })
}

/// Outer-hull membership of `p` with respect to `K`.
///
/// When `p` is excluded, the reported shovel is the first found scanning
/// `Below` before `Above` and `z0` candidates in increasing order.
pub fn pcpp_member<'a, I>(input: I, p: &Point3) -> Result<PcppVerdict, HullError>
where
    I: IntoIterator<Item = &'a Point3>,
{
    let k: Vec<&Point3> = input.into_iter().collect();
    if k.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let mut heights: BTreeSet<Rational> = k.iter().map(|q| q.z.clone()).collect();
    heights.insert(p.z.clone());
    let candidates = z0_candidates(&heights);

    for opening in [Opening::Below, Opening::Above] {
        for z0 in &candidates {
            if !opening.admits(&p.z, z0) {
                continue;
            }
            let side = k.iter().filter(|q| opening.admits(&q.z, z0)).map(|q| &q.xy);
            if let Some(l) = separating_functional(side, &p.xy) {
                let shovel = Shovel::new(l, z0.clone(), opening)?;
                return Ok(PcppVerdict::Excluded(shovel));
            }
        }
    }
    Ok(PcppVerdict::Member)
}
