//! JSON interchange formats. Every number is an exact rational string.
//!
//! Input documents are either a bare list of `[x, y, z]` triples or an
//! object `{"name": ..., "points": [...], "labels": [...]}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::DocumentError;
use crate::hull::{Batch, EliminationTrace, HvComplex, Hull, Strategy};
use crate::kernel::{rational_str, rational_vec, ConvexPolygon, Point3, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: Vec<Point3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl InputDocument {
    pub fn from_points<I: IntoIterator<Item = Point3>>(points: I) -> Self {
        InputDocument {
            name: None,
            points: points.into_iter().collect(),
            labels: None,
        }
    }

    pub fn point_set(&self) -> BTreeSet<Point3> {
        self.points.iter().cloned().collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Parses an input document, reporting syntax and literal errors with
/// their line and column.
pub fn parse_input(bytes: &[u8]) -> Result<InputDocument, DocumentError> {
    let text = std::str::from_utf8(bytes).map_err(|e| DocumentError::Utf8(e.to_string()))?;
    let doc = if text.trim_start().starts_with('[') {
        InputDocument::from_points(serde_json::from_str::<Vec<Point3>>(text)?)
    } else {
        serde_json::from_str::<InputDocument>(text)?
    };
    if doc.points.is_empty() {
        return Err(DocumentError::NoPoints);
    }
    if let Some(labels) = &doc.labels {
        if labels.len() != doc.points.len() {
            return Err(DocumentError::LabelCount {
                labels: labels.len(),
                points: doc.points.len(),
            });
        }
    }
    Ok(doc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDocument {
    #[serde(with = "rational_str")]
    pub height: Rational,
    pub vertices: ConvexPolygon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlabDocument {
    #[serde(with = "rational_str")]
    pub lower: Rational,
    #[serde(with = "rational_str")]
    pub upper: Rational,
    pub vertices: ConvexPolygon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub strategy: Strategy,
    pub grid_size: usize,
    pub steps: usize,
    pub removed_per_step: Vec<usize>,
    pub total_removed: usize,
}

/// Serialized hull: levels and non-empty slabs in ascending height order,
/// extremal points, scaffolding and a summary of the elimination run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    #[serde(with = "rational_vec")]
    pub heights: Vec<Rational>,
    pub levels: Vec<LevelDocument>,
    pub slabs: Vec<SlabDocument>,
    pub extremal_points: Vec<Point3>,
    pub scaffolding: Vec<Point3>,
    pub trace: TraceSummary,
}

impl ComplexDocument {
    pub fn from_hull(hull: &Hull) -> Self {
        let m = &hull.complex;
        ComplexDocument {
            heights: m.heights().to_vec(),
            levels: m
                .heights()
                .iter()
                .zip(m.level_polys())
                .map(|(h, p)| LevelDocument {
                    height: h.clone(),
                    vertices: p.clone(),
                })
                .collect(),
            slabs: m
                .slabs()
                .filter_map(|s| {
                    s.polygon.map(|vertices| SlabDocument {
                        lower: s.lower,
                        upper: s.upper,
                        vertices,
                    })
                })
                .collect(),
            extremal_points: hull.extremal_points().into_iter().collect(),
            scaffolding: hull.scaffolding().into_iter().collect(),
            trace: TraceSummary {
                strategy: hull.trace.strategy,
                grid_size: hull.grid.len(),
                steps: hull.trace.steps(),
                removed_per_step: hull.trace.batches.iter().map(|b| b.removed.len()).collect(),
                total_removed: hull.trace.total_removed(),
            },
        }
    }

    /// Rebuilds the complex and checks that the recorded slabs are the ones
    /// implied by the levels.
    pub fn to_complex(&self) -> Result<HvComplex, DocumentError> {
        if self.heights.len() != self.levels.len()
            || self.heights.iter().zip(&self.levels).any(|(h, l)| *h != l.height)
        {
            return Err(DocumentError::Inconsistent("heights do not match levels".into()));
        }
        let complex = HvComplex::from_levels(
            self.levels
                .iter()
                .map(|l| (l.height.clone(), l.vertices.clone()))
                .collect(),
        )
        .map_err(|e| DocumentError::Inconsistent(e.to_string()))?;
        let expected: Vec<SlabDocument> = complex
            .slabs()
            .filter_map(|s| {
                s.polygon.map(|vertices| SlabDocument {
                    lower: s.lower,
                    upper: s.upper,
                    vertices,
                })
            })
            .collect();
        if expected != self.slabs {
            return Err(DocumentError::Inconsistent(
                "slabs are not the intersections of consecutive levels".into(),
            ));
        }
        Ok(complex)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Full elimination record, one entry per step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub strategy: Strategy,
    pub batches: Vec<Batch>,
    #[serde(rename = "final")]
    pub final_set: Vec<Point3>,
}

impl TraceDocument {
    pub fn from_trace(trace: &EliminationTrace) -> Self {
        TraceDocument {
            strategy: trace.strategy,
            batches: trace.batches.clone(),
            final_set: trace.final_set.points().collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, ratio};

    const SPIRAL: &str =
        r#"{"points": [["1","0","0"],["0","0","0"],["0","0","1"],["0","1","1"],["0","1","2"],["1","1","2"]]}"#;

    #[test]
    fn parses_spiral_staircase() {
        let doc = parse_input(SPIRAL.as_bytes()).unwrap();
        assert_eq!(doc.points.len(), 6);
        assert_eq!(doc.points[3], Point3::from_ints(0, 1, 1));
    }

    #[test]
    fn parses_bare_lists_and_decimals() {
        let doc = parse_input(br#"[["1/2","1/2","1"]]"#).unwrap();
        assert_eq!(doc.points, vec![Point3::from_coords(ratio(1, 2), ratio(1, 2), int(1))]);
        let doc = parse_input(br#"[["0.25","0","3"]]"#).unwrap();
        assert_eq!(doc.points, vec![Point3::from_coords(ratio(1, 4), int(0), int(3))]);
        let doc = parse_input(br#"[[1, -2, 3]]"#).unwrap();
        assert_eq!(doc.points, vec![Point3::from_ints(1, -2, 3)]);
    }

    #[test]
    fn reports_errors_with_position() {
        let err = parse_input(b"[[\"1\",\"2\",\"3\"],\n [\"1/0\",\"0\",\"0\"]]").unwrap_err();
        match err {
            DocumentError::Syntax { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("zero denominator"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_input(b"[[0.5, 0, 0]]"), Err(DocumentError::Syntax { .. })));
        assert!(matches!(parse_input(br#"[["inf","0","0"]]"#), Err(DocumentError::Syntax { .. })));
        assert!(matches!(parse_input(br#"[["1","2"]]"#), Err(DocumentError::Syntax { .. })));
        assert_eq!(parse_input(b"[]"), Err(DocumentError::NoPoints));
        assert!(matches!(parse_input(&[0xff, 0xfe]), Err(DocumentError::Utf8(_))));
        assert!(matches!(
            parse_input(br#"{"points": [["0","0","0"]], "labels": ["a", "b"]}"#),
            Err(DocumentError::LabelCount { labels: 2, points: 1 })
        ));
    }

    #[test]
    fn input_round_trip() {
        let doc = InputDocument {
            name: Some("spiral".into()),
            labels: Some((1..=6).map(|i| i.to_string()).collect()),
            ..parse_input(SPIRAL.as_bytes()).unwrap()
        };
        assert_eq!(parse_input(doc.to_json().as_bytes()).unwrap(), doc);
    }

    #[test]
    fn complex_round_trip_and_shape() {
        let doc = parse_input(SPIRAL.as_bytes()).unwrap();
        let hull = Hull::compute(&doc.points, Strategy::Batch).unwrap();
        let cd = ComplexDocument::from_hull(&hull);
        assert_eq!(cd.levels.len(), 3);
        assert_eq!(cd.slabs.len(), 2);
        assert_eq!(cd.trace.total_removed, 9);
        assert_eq!(cd.trace.grid_size, 15);
        let text = cd.to_json();
        let back = ComplexDocument::from_json(&text).unwrap();
        assert_eq!(back, cd);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.to_complex().unwrap(), hull.complex);
    }

    #[test]
    fn tampered_slab_is_rejected() {
        let doc = parse_input(SPIRAL.as_bytes()).unwrap();
        let hull = Hull::compute(&doc.points, Strategy::Batch).unwrap();
        let mut cd = ComplexDocument::from_hull(&hull);
        cd.slabs.pop();
        assert!(matches!(cd.to_complex(), Err(DocumentError::Inconsistent(_))));
    }
}
