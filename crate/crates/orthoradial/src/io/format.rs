//! Line-oriented instance files.
//!
//! The format is human-diffable so that small instances can be written by
//! hand from a picture. Angles appear in degrees at the boundary and are
//! converted exactly to quarter turns internally. The canonical emitter is
//! byte-stable: emitting a parsed canonical file reproduces it exactly.
//!
//! ```text
//! orthoradial-instance 1
//! vertices <n>
//! edges <m>
//! edge <id> <u> <v>
//! vertex <v> <ccw edge ids...>
//! angles <v> <degrees per corner...>
//! central <u> <v>
//! outer <u> <v>
//! reference <u> <v>        (optional)
//! ```
//!
//! `edge` lines appear in id order, `vertex`/`angles` pairs in vertex
//! order. The `central` and `outer` designators are directed edges whose
//! right-hand face is the designated one; `reference` is the reference
//! dart. The k-th angle on an `angles` line is the corner between the k-th
//! dart of the vertex's rotation and its counterclockwise successor.

use thiserror::Error;

use crate::graph::{DartId, PlaneGraph, Vertex};
use crate::rep::{AngleAssignment, OrthoRadialRep};

/// A parsed instance: the validated representation plus the optional
/// reference dart.
#[derive(Debug)]
pub struct InstanceFile {
    pub rep: OrthoRadialRep,
    pub reference: Option<DartId>,
}

/// Parse failures with line diagnostics.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {0}: expected `{1}`")]
    Expected(usize, &'static str),
    #[error("line {0}: {1}")]
    Malformed(usize, String),
    #[error("unsupported format version {0} (this reader understands major version 1)")]
    Version(String),
    #[error("line {0}: unknown field `{1}`")]
    UnknownField(usize, String),
    #[error("structural validation failed: {0}")]
    Invalid(String),
}

fn nums(
    line: &str,
    lineno: usize,
    keyword: &'static str,
) -> Result<Vec<usize>, ParseError> {
    let mut it = line.split_whitespace();
    match it.next() {
        Some(k) if k == keyword => {}
        _ => return Err(ParseError::Expected(lineno, keyword)),
    }
    it.map(|t| {
        t.parse::<usize>()
            .map_err(|_| ParseError::Malformed(lineno, format!("`{t}` is not a number")))
    })
    .collect()
}

fn fixed<const K: usize>(
    line: &str,
    lineno: usize,
    keyword: &'static str,
) -> Result<[usize; K], ParseError> {
    let v = nums(line, lineno, keyword)?;
    v.try_into().map_err(|v: Vec<usize>| {
        ParseError::Malformed(
            lineno,
            format!("`{keyword}` takes {K} numbers, got {}", v.len()),
        )
    })
}

/// The dart `u -> v` of the first edge joining `u` and `v`.
fn directed_dart(
    g: &PlaneGraph,
    u: Vertex,
    v: Vertex,
    lineno: usize,
) -> Result<DartId, ParseError> {
    for e in 0..g.edge_count() {
        if g.tail(2 * e) == u && g.head(2 * e) == v {
            return Ok(2 * e);
        }
        if g.tail(2 * e + 1) == u && g.head(2 * e + 1) == v {
            return Ok(2 * e + 1);
        }
    }
    Err(ParseError::Malformed(
        lineno,
        format!("no edge joins {u} and {v}"),
    ))
}

/// Parses an instance file; strict about field order and arity, and runs
/// full structural validation (R1 and R2) on the result.
pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut next = || lines.next().ok_or(ParseError::Expected(usize::MAX, "more input"));

    let (ln, header) = next()?;
    let mut it = header.split_whitespace();
    if it.next() != Some("orthoradial-instance") {
        return Err(ParseError::Expected(ln, "orthoradial-instance <version>"));
    }
    let version = it.next().unwrap_or("");
    if version.split('.').next() != Some("1") {
        return Err(ParseError::Version(version.to_string()));
    }

    let (ln, l) = next()?;
    let [n] = fixed::<1>(l, ln, "vertices")?;
    let (ln, l) = next()?;
    let [m] = fixed::<1>(l, ln, "edges")?;

    let mut edges = Vec::with_capacity(m);
    for want in 0..m {
        let (ln, l) = next()?;
        let [id, u, v] = fixed::<3>(l, ln, "edge")?;
        if id != want {
            return Err(ParseError::Malformed(
                ln,
                format!("edge ids must be in order; expected {want}, got {id}"),
            ));
        }
        edges.push((u, v));
    }

    let mut rotations: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut degrees: Vec<Vec<usize>> = Vec::with_capacity(n);
    for want in 0..n {
        let (ln, l) = next()?;
        let ids = nums(l, ln, "vertex")?;
        if ids.first() != Some(&want) {
            return Err(ParseError::Malformed(
                ln,
                format!("vertex lines must be in order; expected vertex {want}"),
            ));
        }
        rotations.push(ids[1..].to_vec());
        let (ln, l) = next()?;
        let ds = nums(l, ln, "angles")?;
        if ds.first() != Some(&want) {
            return Err(ParseError::Malformed(
                ln,
                format!("angles line for vertex {want} must follow its vertex line"),
            ));
        }
        if ds.len() != rotations[want].len() + 1 {
            return Err(ParseError::Malformed(
                ln,
                format!(
                    "vertex {want} has {} corners but {} angles",
                    rotations[want].len(),
                    ds.len() - 1
                ),
            ));
        }
        for &d in &ds[1..] {
            if !matches!(d, 90 | 180 | 270 | 360) {
                return Err(ParseError::Malformed(
                    ln,
                    format!("corner angle {d} is not one of 90, 180, 270, 360"),
                ));
            }
        }
        degrees.push(ds[1..].to_vec());
    }

    let (cln, l) = next()?;
    let [cu, cv] = fixed::<2>(l, cln, "central")?;
    let (oln, l) = next()?;
    let [ou, ov] = fixed::<2>(l, oln, "outer")?;
    let reference_pair = match lines.next() {
        None => None,
        Some((ln, l)) => {
            let kw = l.split_whitespace().next().unwrap_or("");
            if kw != "reference" {
                return Err(ParseError::UnknownField(ln, kw.to_string()));
            }
            let [ru, rv] = fixed::<2>(l, ln, "reference")?;
            Some((ln, ru, rv))
        }
    };
    if let Some((ln, l)) = lines.next() {
        return Err(ParseError::UnknownField(
            ln,
            l.split_whitespace().next().unwrap_or("").to_string(),
        ));
    }

    let graph = PlaneGraph::new(n, &edges, &rotations)
        .map_err(|e| ParseError::Invalid(e.to_string()))?;
    let mut per_dart = vec![0u8; graph.dart_count()];
    for (v, degs) in degrees.iter().enumerate() {
        for (i, &d) in graph.rotation(v).iter().enumerate() {
            per_dart[d] = (degs[i] / 90) as u8;
        }
    }
    let central_dart = directed_dart(&graph, cu, cv, cln)?;
    let outer_dart = directed_dart(&graph, ou, ov, oln)?;
    let faces = crate::graph::compute_faces(&graph);
    let central = faces.face_of[central_dart];
    let outer = faces.face_of[outer_dart];
    let rep = OrthoRadialRep::new(graph, AngleAssignment { per_dart }, central, outer)
        .map_err(|e| ParseError::Invalid(e.to_string()))?;
    let reference = match reference_pair {
        None => None,
        Some((ln, ru, rv)) => Some(directed_dart(&rep.graph, ru, rv, ln)?),
    };
    Ok(InstanceFile { rep, reference })
}

/// Canonical emitter; `parse_instance` of the result reproduces the
/// representation, and re-emitting reproduces the bytes.
pub fn emit_instance(rep: &OrthoRadialRep, reference: Option<DartId>) -> String {
    let g = &rep.graph;
    let mut out = String::new();
    out.push_str("orthoradial-instance 1\n");
    out.push_str(&format!("vertices {}\n", g.vertex_count()));
    out.push_str(&format!("edges {}\n", g.edge_count()));
    for e in 0..g.edge_count() {
        out.push_str(&format!("edge {e} {} {}\n", g.tail(2 * e), g.head(2 * e)));
    }
    for v in 0..g.vertex_count() {
        out.push_str(&format!("vertex {v}"));
        for &d in g.rotation(v) {
            out.push_str(&format!(" {}", d / 2));
        }
        out.push('\n');
        out.push_str(&format!("angles {v}"));
        for &d in g.rotation(v) {
            out.push_str(&format!(" {}", 90 * rep.phi.angle(d)));
        }
        out.push('\n');
    }
    let designator = |f: usize| {
        let d = rep.faces.cycles[f][0];
        format!("{} {}", g.tail(d), g.head(d))
    };
    out.push_str(&format!("central {}\n", designator(rep.central)));
    out.push_str(&format!("outer {}\n", designator(rep.outer)));
    if let Some(r) = reference {
        out.push_str(&format!("reference {} {}\n", g.tail(r), g.head(r)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn round_trip(rep: &OrthoRadialRep, reference: DartId) {
        let text = emit_instance(rep, Some(reference));
        let parsed = parse_instance(&text).expect("canonical emit must parse");
        // emit ∘ parse is the identity on canonical files.
        assert_eq!(emit_instance(&parsed.rep, parsed.reference), text);
        // The reference survives as the same dart when the graph is simple.
        assert_eq!(parsed.reference, Some(reference));
        assert_eq!(parsed.rep.phi, rep.phi);
        assert_eq!(parsed.rep.central, rep.central);
        assert_eq!(parsed.rep.outer, rep.outer);
    }

    #[test]
    fn fixtures_round_trip() {
        for fx in [
            fixtures::nested_rings(),
            fixtures::essential_square(),
            fixtures::staircase_cover(),
            fixtures::spiral_hook(),
            fixtures::pentagon_spiral(),
        ] {
            round_trip(&fx.rep, fx.reference);
        }
    }

    fn instance_dir() -> std::path::PathBuf {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("instances")
    }

    fn named_fixtures() -> Vec<(&'static str, fixtures::Fixture)> {
        vec![
            ("nested_rings", fixtures::nested_rings()),
            ("essential_square", fixtures::essential_square()),
            ("staircase_cover", fixtures::staircase_cover()),
            ("spiral_hook", fixtures::spiral_hook()),
            ("pentagon_spiral", fixtures::pentagon_spiral()),
        ]
    }

    /// Regenerates the checked-in instance files; run with `--ignored` after
    /// changing a fixture.
    #[test]
    #[ignore]
    fn regenerate_instance_files() {
        std::fs::create_dir_all(instance_dir()).unwrap();
        for (name, fx) in named_fixtures() {
            let path = instance_dir().join(format!("{name}.txt"));
            std::fs::write(path, emit_instance(&fx.rep, Some(fx.reference))).unwrap();
        }
    }

    #[test]
    fn instance_files_match_fixture_constructors() {
        for (name, fx) in named_fixtures() {
            let path = instance_dir().join(format!("{name}.txt"));
            let text = std::fs::read_to_string(&path)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(
                text,
                emit_instance(&fx.rep, Some(fx.reference)),
                "{name} file out of date"
            );
            let parsed = parse_instance(&text).unwrap();
            assert_eq!(parsed.reference, Some(fx.reference), "{name}");
            assert_eq!(parsed.rep.phi, fx.rep.phi, "{name}");
        }
    }

    #[test]
    fn bad_angle_is_rejected() {
        let fx = fixtures::essential_square();
        let text = emit_instance(&fx.rep, None).replace(" 90", " 75");
        match parse_instance(&text) {
            Err(ParseError::Malformed(_, msg)) => assert!(msg.contains("75")),
            other => panic!("expected a malformed-angle error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_field_is_rejected() {
        let fx = fixtures::essential_square();
        let text = emit_instance(&fx.rep, None) + "colour 3\n";
        assert!(matches!(
            parse_instance(&text),
            Err(ParseError::UnknownField(_, _))
        ));
    }

    #[test]
    fn future_major_version_is_rejected() {
        assert!(matches!(
            parse_instance("orthoradial-instance 2\nvertices 1\n"),
            Err(ParseError::Version(_))
        ));
    }
}
