//! Wavefront OBJ export for visualization. Coordinates are rounded to the
//! nearest `f64`, so this is the one lossy output of the crate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::hull::HvComplex;
use crate::kernel::{ConvexPolygon, Point2, Point3, Rank, Rational};

/// Triangles, line records and point records over a shared vertex table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mesh {
    pub vertices: Vec<Point3>,
    pub faces: Vec<[usize; 3]>,
    pub lines: Vec<[usize; 2]>,
    pub points: Vec<usize>,
}

#[derive(Default)]
struct Builder {
    index: BTreeMap<Point3, usize>,
    mesh: Mesh,
    face_keys: BTreeSet<[usize; 3]>,
    line_keys: BTreeSet<[usize; 2]>,
}

impl Builder {
    fn vertex(&mut self, p: Point3) -> usize {
        let next = self.mesh.vertices.len();
        *self.index.entry(p.clone()).or_insert_with(|| {
            self.mesh.vertices.push(p);
            next
        })
    }

    fn face(&mut self, a: usize, b: usize, c: usize) {
        let mut key = [a, b, c];
        key.sort_unstable();
        if self.face_keys.insert(key) {
            self.mesh.faces.push([a, b, c]);
        }
    }

    fn line(&mut self, a: usize, b: usize) {
        let key = if a < b { [a, b] } else { [b, a] };
        if self.line_keys.insert(key) {
            self.mesh.lines.push([a, b]);
        }
    }

    fn fan(&mut self, poly: &ConvexPolygon, z: &Rational) {
        let ids: Vec<usize> = poly.vertices().iter().map(|q| self.vertex(q.at(z.clone()))).collect();
        for w in 1..ids.len() - 1 {
            self.face(ids[0], ids[w], ids[w + 1]);
        }
    }

    fn quad(&mut self, a: &Point2, b: &Point2, lo: &Rational, hi: &Rational) {
        let a0 = self.vertex(a.at(lo.clone()));
        let b0 = self.vertex(b.at(lo.clone()));
        let b1 = self.vertex(b.at(hi.clone()));
        let a1 = self.vertex(a.at(hi.clone()));
        self.face(a0, b0, b1);
        self.face(a0, b1, a1);
    }
}

/// Builds the triangulated surface of a complex.
///
/// Full-dimensional levels are fan-triangulated. Each slab is extruded into
/// vertical rectangles (two triangles each) plus top and bottom faces.
/// Point and segment elements become point and line records.
pub fn build_mesh(complex: &HvComplex) -> Mesh {
    let mut b = Builder::default();
    for (h, poly) in complex.heights().iter().zip(complex.level_polys()) {
        match poly.rank() {
            Rank::Full => b.fan(poly, h),
            Rank::Segment => {
                let v = poly.vertices();
                let (i, j) = (b.vertex(v[0].at(h.clone())), b.vertex(v[1].at(h.clone())));
                b.line(i, j);
            }
            Rank::Point => {
                let i = b.vertex(poly.vertices()[0].at(h.clone()));
                b.mesh.points.push(i);
            }
        }
    }
    for slab in complex.slabs() {
        let Some(poly) = slab.polygon else { continue };
        let (lo, hi) = (&slab.lower, &slab.upper);
        match poly.rank() {
            Rank::Point => {
                let q = &poly.vertices()[0];
                let (i, j) = (b.vertex(q.at(lo.clone())), b.vertex(q.at(hi.clone())));
                b.line(i, j);
            }
            Rank::Segment => {
                let v = poly.vertices();
                b.quad(&v[0], &v[1], lo, hi);
            }
            Rank::Full => {
                for (u, v) in poly.edges() {
                    b.quad(u, v, lo, hi);
                }
                b.fan(&poly, lo);
                b.fan(&poly, hi);
            }
        }
    }
    b.mesh
}

fn decimal(r: &Rational) -> String {
    // `{}` on f64 prints the shortest string that parses back to the same
    // value.
    let v = r.to_f64().unwrap_or(f64::NAN);
    format!("{v}")
}

/// OBJ text for a complex.
pub fn export_mesh(complex: &HvComplex) -> String {
    let mesh = build_mesh(complex);
    let mut out = String::new();
    out.push_str("# hv-complex surface\n");
    out.push_str("# LOSSY: exact rational coordinates rounded to f64, for visualization only\n");
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", decimal(&v.xy.x), decimal(&v.xy.y), decimal(&v.z));
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    if !mesh.lines.is_empty() || !mesh.points.is_empty() {
        out.push_str("# degenerate elements\n");
        for l in &mesh.lines {
            let _ = writeln!(out, "l {} {}", l[0] + 1, l[1] + 1);
        }
        for p in &mesh.points {
            let _ = writeln!(out, "p {}", p + 1);
        }
    }
    out
}
