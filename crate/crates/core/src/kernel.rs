//! Exact rational scalars and the planar predicates and constructions the
//! rest of the crate is built on.
//!
//! Nothing here ever rounds. Every polygon is kept in a canonical form
//! (counter-clockwise, starting at the lexicographically smallest vertex) so
//! that equality of polygons is equality of the sets they describe.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::HullError;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational literal: `p/q`, an integer, or a finite decimal
/// such as `-0.25`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty numeric literal".into());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num)?;
        let den = parse_integer(den)?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        if den.is_negative() {
            return Err(format!("negative denominator in `{s}`"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, digits) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if (digits.is_empty() && frac.is_empty()) || !all_digits(digits) || !all_digits(frac) {
            return Err(format!("invalid decimal literal `{s}`"));
        }
        let mantissa: BigInt = format!("{digits}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
        let scale = num_traits::pow(BigInt::from(10u8), frac.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    Ok(Rational::from_integer(parse_integer(s)?))
}

fn parse_integer(s: &str) -> Result<BigInt, String> {
    let t = s.trim();
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid integer literal `{t}`"));
    }
    t.parse::<BigInt>().map_err(|e| format!("invalid integer literal `{t}`: {e}"))
}

/// Serde helpers for rationals written as exact strings (`"3"`, `"-1/2"`).
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an exact rational literal such as \"3\", \"-1/2\" or \"0.25\"")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            Ok(Rational::from_integer(BigInt::from(v)))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            Err(E::custom(format!(
                "binary floating-point number {v} is not exact; quote it as a string literal"
            )))
        }
    }
}

/// Serde helper for `Vec<Rational>` as a list of exact strings.
pub mod rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "rational_str")] Rational);

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| Wrapped(v.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}

/// Same order as `Rational::cmp`, by cross-multiplication instead of
/// continued-fraction division. Denominators are positive.
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    let (sa, sb) = (a.numer().sign(), b.numer().sign());
    if sa != sb {
        return sa.cmp(&sb);
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// A point of the horizontal plane, ordered lexicographically by `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Ord for Point2 {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_rational(&self.x, &other.x).then_with(|| cmp_rational(&self.y, &other.y))
    }
}

impl PartialOrd for Point2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(int(x), int(y))
    }

    /// Attaches a height.
    pub fn at(&self, z: Rational) -> Point3 {
        Point3::new(self.clone(), z)
    }

    fn sub(&self, other: &Point2) -> (Rational, Rational) {
        (&self.x - &other.x, &self.y - &other.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of space, split into its planar part and its height.
///
/// Points are ordered lexicographically by `(z, x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point3 {
    pub xy: Point2,
    pub z: Rational,
}

impl Point3 {
    pub fn new(xy: Point2, z: Rational) -> Self {
        Point3 { xy, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Point3::new(Point2::from_ints(x, y), int(z))
    }

    pub fn from_coords(x: Rational, y: Rational, z: Rational) -> Self {
        Point3::new(Point2::new(x, y), z)
    }
}

impl Ord for Point3 {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_rational(&self.z, &other.z).then_with(|| self.xy.cmp(&other.xy))
    }
}

impl PartialOrd for Point3 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "({}, {}, {})", self.xy.x, self.xy.y, self.z)
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.x.to_string())?;
        t.serialize_element(&self.y.to_string())?;
        t.end()
    }
}

impl Serialize for Point3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.xy.x.to_string())?;
        t.serialize_element(&self.xy.y.to_string())?;
        t.serialize_element(&self.z.to_string())?;
        t.end()
    }
}

struct CoordsVisitor<const N: usize>;

impl<'de, const N: usize> Visitor<'de> for CoordsVisitor<N> {
    type Value = Vec<Rational>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "a list of {N} rational literals")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
        #[derive(Deserialize)]
        struct Lit(#[serde(with = "rational_str")] Rational);

        let mut out = Vec::with_capacity(N);
        while let Some(Lit(v)) = seq.next_element()? {
            if out.len() == N {
                return Err(de::Error::invalid_length(N + 1, &self));
            }
            out.push(v);
        }
        if out.len() != N {
            return Err(de::Error::invalid_length(out.len(), &self));
        }
        Ok(out)
    }
}

impl<'de> Deserialize<'de> for Point2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut c = d.deserialize_seq(CoordsVisitor::<2>)?.into_iter();
        let (x, y) = (c.next().unwrap(), c.next().unwrap());
        Ok(Point2::new(x, y))
    }
}

impl<'de> Deserialize<'de> for Point3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut c = d.deserialize_seq(CoordsVisitor::<3>)?.into_iter();
        let (x, y, z) = (c.next().unwrap(), c.next().unwrap(), c.next().unwrap());
        Ok(Point3::from_coords(x, y, z))
    }
}

/// A closed segment with distinct endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment2 {
    a: Point2,
    b: Point2,
}

impl Segment2 {
    pub fn new(a: Point2, b: Point2) -> Result<Self, HullError> {
        if a == b {
            return Err(HullError::DegenerateSegment(a));
        }
        Ok(Segment2 { a, b })
    }

    pub fn a(&self) -> &Point2 {
        &self.a
    }

    pub fn b(&self) -> &Point2 {
        &self.b
    }
}

fn cross(u: &(Rational, Rational), v: &(Rational, Rational)) -> Rational {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn dot(u: &(Rational, Rational), v: &(Rational, Rational)) -> Rational {
    &u.0 * &v.0 + &u.1 * &v.1
}

/// Exact sign of `(b - a) × (c - a)`: `1` for a counter-clockwise turn,
/// `-1` for clockwise, `0` for collinear.
pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> i8 {
    let det = cross(&b.sub(a), &c.sub(a));
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// Whether `p` lies on the closed segment `[a, b]` (`a` may equal `b`).
pub fn on_closed_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    orientation(a, b, p) == 0
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Dimension of a convex polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rank {
    Point = 0,
    Segment = 1,
    Full = 2,
}

/// A possibly degenerate planar convex polygon, stored by its extreme points
/// in counter-clockwise order starting at the lexicographically smallest.
///
/// A single vertex is a point, two vertices a segment, three or more a
/// full-dimensional polygon with no three consecutive vertices collinear.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn rank(&self) -> Rank {
        match self.vertices.len() {
            1 => Rank::Point,
            2 => Rank::Segment,
            _ => Rank::Full,
        }
    }

    pub fn contains(&self, p: &Point2) -> bool {
        point_in_polygon(self, p)
    }

    pub fn is_vertex(&self, p: &Point2) -> bool {
        self.vertices.contains(p)
    }

    /// Boundary edges. A segment has a single edge, a point none.
    pub fn edges(&self) -> Vec<(&Point2, &Point2)> {
        let v = &self.vertices;
        match v.len() {
            1 => vec![],
            2 => vec![(&v[0], &v[1])],
            n => (0..n).map(|i| (&v[i], &v[(i + 1) % n])).collect(),
        }
    }

    /// The point of the polygon closest to `p` in the Euclidean metric.
    pub fn closest_point(&self, p: &Point2) -> Point2 {
        if self.rank() == Rank::Full && self.contains(p) {
            return p.clone();
        }
        let edges = self.edges();
        if edges.is_empty() {
            return self.vertices[0].clone();
        }
        edges
            .into_iter()
            .map(|(a, b)| closest_on_segment(a, b, p))
            .min_by(|u, v| squared_distance(u, p).cmp(&squared_distance(v, p)))
            .expect("non-empty edge list")
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for ConvexPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexPolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let points: Vec<Point2> = Vec::deserialize(d)?;
        let hull = convex_hull_2d(&points).map_err(de::Error::custom)?;
        let mut given = points.clone();
        given.sort();
        given.dedup();
        let mut canonical = hull.vertices.clone();
        canonical.sort();
        if given != canonical {
            return Err(de::Error::custom(
                "polygon vertex list contains points that are not extreme",
            ));
        }
        Ok(hull)
    }
}

pub(crate) fn squared_distance(u: &Point2, v: &Point2) -> Rational {
    let d = u.sub(v);
    dot(&d, &d)
}

fn closest_on_segment(a: &Point2, b: &Point2, p: &Point2) -> Point2 {
    let ab = b.sub(a);
    let len2 = dot(&ab, &ab);
    if len2.is_zero() {
        return a.clone();
    }
    let t = dot(&p.sub(a), &ab) / len2;
    if !t.is_positive() {
        a.clone()
    } else if t >= Rational::one() {
        b.clone()
    } else {
        Point2::new(&a.x + &t * &ab.0, &a.y + &t * &ab.1)
    }
}

/// Convex hull of a non-empty point set. Points lying on edge interiors are
/// not vertices of the result.
pub fn convex_hull_2d<'a, I>(points: I) -> Result<ConvexPolygon, HullError>
where
    I: IntoIterator<Item = &'a Point2>,
{
    let mut pts: Vec<&Point2> = points.into_iter().collect();
    if pts.is_empty() {
        return Err(HullError::EmptyInput);
    }
    pts.sort();
    pts.dedup();
    let shadows: Vec<Shadow> = pts.iter().map(|p| Shadow::of(p)).collect();
    let order: Vec<usize> = (0..pts.len()).collect();
    let ids = monotone_chain(&order, |i, j, k| {
        orientation_shadowed(pts[i], &shadows[i], pts[j], &shadows[j], pts[k], &shadows[k])
    });
    Ok(ConvexPolygon {
        vertices: ids.into_iter().map(|i| pts[i].clone()).collect(),
    })
}

/// Hull vertices, counter-clockwise from the first, of distinct points
/// listed in lexicographic order. `turn` is the orientation predicate on
/// the listed ids.
pub(crate) fn monotone_chain(order: &[usize], mut turn: impl FnMut(usize, usize, usize) -> i8) -> Vec<usize> {
    if order.len() <= 2 {
        return order.to_vec();
    }
    // Popping on non-left turns drops collinear points.
    let mut lower: Vec<usize> = Vec::with_capacity(order.len());
    for &p in order {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(order.len());
    for &p in order.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Integer coordinates `[X, Y, W]` with `x = X / W`, `y = Y / W` and
/// `W > 0` the least common denominator.
pub(crate) fn homogeneous(p: &Point2) -> [BigInt; 3] {
    let w = p.x.denom().lcm(p.y.denom());
    let x = p.x.numer() * (&w / p.x.denom());
    let y = p.y.numer() * (&w / p.y.denom());
    [x, y, w]
}

/// Floating-point copy of a point, used only to settle predicates whose
/// sign cannot be affected by rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Shadow {
    x: f64,
    y: f64,
}

impl Shadow {
    pub(crate) fn of(p: &Point2) -> Shadow {
        Shadow {
            x: p.x.to_f64().unwrap_or(f64::NAN),
            y: p.y.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub(crate) fn x(&self) -> f64 {
        self.x
    }

    pub(crate) fn y(&self) -> f64 {
        self.y
    }
}

/// Orientation sign from shadows, `None` when the rounding error bound does
/// not exclude the other signs.
///
/// Each shadow coordinate is within two units in the last place of the
/// exact value; the bound below covers that plus every rounding of the
/// evaluation with a factor two to spare.
pub(crate) fn orientation_filter(a: &Shadow, b: &Shadow, c: &Shadow) -> Option<i8> {
    const SMALLEST: f64 = 1e-150;
    let det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    let scale = (a.x.abs() + b.x.abs()) * (a.y.abs() + c.y.abs()) + (a.y.abs() + b.y.abs()) * (a.x.abs() + c.x.abs());
    if !det.is_finite() || !scale.is_finite() || scale < SMALLEST {
        return None;
    }
    let bound = 16.0 * f64::EPSILON * scale;
    if det > bound {
        Some(1)
    } else if det < -bound {
        Some(-1)
    } else {
        None
    }
}

/// [`orientation`] with a floating-point fast path.
pub(crate) fn orientation_shadowed(a: &Point2, sa: &Shadow, b: &Point2, sb: &Shadow, c: &Point2, sc: &Shadow) -> i8 {
    orientation_filter(sa, sb, sc).unwrap_or_else(|| orientation(a, b, c))
}

/// Closed membership test, exact.
pub fn point_in_polygon(poly: &ConvexPolygon, p: &Point2) -> bool {
    let v = &poly.vertices;
    match v.len() {
        1 => &v[0] == p,
        2 => on_closed_segment(&v[0], &v[1], p),
        n => (0..n).all(|i| orientation(&v[i], &v[(i + 1) % n], p) >= 0),
    }
}

/// The unique common point of two closed segments, if they meet in exactly
/// one point. Collinear overlaps of positive length yield `None`.
pub fn segment_intersection_point(s1: &Segment2, s2: &Segment2) -> Option<Point2> {
    intersect_closed(&s1.a, &s1.b, &s2.a, &s2.b)
}

fn intersect_closed(a1: &Point2, b1: &Point2, a2: &Point2, b2: &Point2) -> Option<Point2> {
    let d1 = b1.sub(a1);
    let d2 = b2.sub(a2);
    let w = a2.sub(a1);
    let denom = cross(&d1, &d2);
    let zero = Rational::zero();
    let one = Rational::one();
    if !denom.is_zero() {
        let t = cross(&w, &d2) / &denom;
        let u = cross(&w, &d1) / &denom;
        if t < zero || t > one || u < zero || u > one {
            return None;
        }
        return Some(Point2::new(&a1.x + &t * &d1.0, &a1.y + &t * &d1.1));
    }
    if !cross(&w, &d1).is_zero() {
        return None;
    }
    // Collinear: compare parameter intervals along d1.
    let len2 = dot(&d1, &d1);
    let ta = dot(&w, &d1) / &len2;
    let tb = dot(&b2.sub(a1), &d1) / &len2;
    let (lo2, hi2) = if ta <= tb { (ta, tb) } else { (tb, ta) };
    let lo = lo2.max(zero);
    let hi = hi2.min(one);
    if lo == hi {
        Some(Point2::new(&a1.x + &lo * &d1.0, &a1.y + &lo * &d1.1))
    } else {
        None
    }
}

/// Exact intersection of two convex polygons, `None` when disjoint.
pub fn convex_polygon_intersection(p: &ConvexPolygon, q: &ConvexPolygon) -> Option<ConvexPolygon> {
    // Vertices of the intersection are vertices of one polygon inside the
    // other, or crossings of boundary edges.
    let mut candidates: Vec<Point2> = Vec::new();
    candidates.extend(p.vertices.iter().filter(|v| q.contains(v)).cloned());
    candidates.extend(q.vertices.iter().filter(|v| p.contains(v)).cloned());
    for (a1, b1) in p.edges() {
        for (a2, b2) in q.edges() {
            if let Some(x) = intersect_closed(a1, b1, a2, b2) {
                candidates.push(x);
            }
        }
    }
    if candidates.is_empty() {
        return None;
    }
    convex_hull_2d(&candidates).ok()
}
