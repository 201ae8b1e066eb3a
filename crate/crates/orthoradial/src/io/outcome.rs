//! JSON outcome files: the pipeline's verdict with its evidence.

use serde::{Deserialize, Serialize};

use crate::draw::{radius_f64, theta_radians, EdgeGeometry, PolarDrawing};
use crate::graph::DartId;
use crate::rep::{CycleClass, MonotoneCertificate, OrthoRadialRep};

/// One vertex position, radius and angle (radians in `[0, 2π)`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutcomeVertex {
    pub r: f64,
    pub theta: f64,
}

/// Geometry of one edge, in edge-id order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DrawnEdge {
    /// Circular arc at radius `r`, clockwise from `from` to `to` (radians).
    Arc { r: f64, from: f64, to: f64 },
    /// Radial segment at angle `theta` between the two radii.
    Radial { theta: f64, inner: f64, outer: f64 },
}

/// The serialized verdict.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "verdict", rename_all = "snake_case", deny_unknown_fields)]
pub enum OutcomeFile {
    Drawn {
        /// Chosen reference dart as `(tail, head)`.
        reference: (usize, usize),
        layers: usize,
        vertices: Vec<OutcomeVertex>,
        edges: Vec<DrawnEdge>,
    },
    Undrawable {
        reference: (usize, usize),
        /// Witness cycle as a vertex sequence.
        cycle: Vec<usize>,
        labels: Vec<i64>,
        kind: CycleClass,
    },
    Invalid {
        /// Vertices whose corner angles do not sum to 360 degrees.
        bad_vertices: Vec<usize>,
        /// Faces with the wrong facial rotation.
        bad_faces: Vec<usize>,
    },
}

/// Rounds to 12 significant digits so the JSON round-trips losslessly and
/// the output is byte-stable across platforms.
fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn dart_pair(rep: &OrthoRadialRep, d: DartId) -> (usize, usize) {
    (rep.graph.tail(d), rep.graph.head(d))
}

/// Builds the `drawn` outcome from a verified drawing.
pub fn drawn_outcome(
    rep: &OrthoRadialRep,
    reference: DartId,
    d: &PolarDrawing,
) -> OutcomeFile {
    let vertices = d
        .radius
        .iter()
        .zip(&d.theta)
        .map(|(r, t)| OutcomeVertex {
            r: sig12(radius_f64(r)),
            theta: sig12(theta_radians(t)),
        })
        .collect();
    let edges = d
        .geometry
        .iter()
        .map(|g| match g {
            EdgeGeometry::Arc { r, from, to } => DrawnEdge::Arc {
                r: sig12(radius_f64(r)),
                from: sig12(theta_radians(from)),
                to: sig12(theta_radians(to)),
            },
            EdgeGeometry::Radial {
                theta,
                inner,
                outer,
            } => DrawnEdge::Radial {
                theta: sig12(theta_radians(theta)),
                inner: sig12(radius_f64(inner)),
                outer: sig12(radius_f64(outer)),
            },
        })
        .collect();
    OutcomeFile::Drawn {
        reference: dart_pair(rep, reference),
        layers: d.layers,
        vertices,
        edges,
    }
}

/// Builds the `undrawable` outcome from a verified certificate.
pub fn undrawable_outcome(
    rep: &OrthoRadialRep,
    cert: &MonotoneCertificate,
) -> OutcomeFile {
    OutcomeFile::Undrawable {
        reference: dart_pair(rep, cert.reference),
        cycle: cert.vertices.clone(),
        labels: cert.labels.clone(),
        kind: cert.kind,
    }
}

/// Serializes an outcome; deterministic for a fixed value.
pub fn emit_outcome(o: &OutcomeFile) -> String {
    let mut s = serde_json::to_string_pretty(o).expect("outcome serializes");
    s.push('\n');
    s
}

/// Strict parse of an outcome file.
pub fn parse_outcome(text: &str) -> Result<OutcomeFile, serde_json::Error> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::search::{binary_search_reference, SearchOutcome};

    #[test]
    fn drawn_outcome_round_trips() {
        let fx = fixtures::nested_rings();
        let out = match binary_search_reference(&fx.rep, fx.reference).unwrap() {
            SearchOutcome::Drawn(d) => drawn_outcome(&fx.rep, d.reference, &d.drawing),
            SearchOutcome::Undrawable(_) => panic!("nested rings are drawable"),
        };
        let text = emit_outcome(&out);
        let back = parse_outcome(&text).unwrap();
        assert_eq!(back, out);
        assert_eq!(emit_outcome(&back), text);
        if let OutcomeFile::Drawn { vertices, .. } = &back {
            for v in vertices {
                assert!((0.0..std::f64::consts::TAU).contains(&v.theta));
                assert!(v.r > 0.0);
            }
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"verdict":"invalid","bad_vertices":[],"bad_faces":[],"x":1}"#;
        assert!(parse_outcome(text).is_err());
    }
}
