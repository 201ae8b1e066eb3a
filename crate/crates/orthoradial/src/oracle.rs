//! Brute-force reference implementations used for differential testing.
//!
//! Everything here favours obviousness over speed: essential cycles are
//! enumerated by backtracking, labels are recomputed from scratch per cycle
//! and per reference, and the reference sweep evaluates every realized
//! offset independently instead of shifting labels. Instance sizes are
//! capped; override with the `ORACLE_MAX_VERTICES` environment variable.

use std::collections::BTreeMap;

use crate::graph::{cycle_sides, DartId, Vertex};
use crate::rep::{classify_labels, CycleClass, MonotoneCertificate, OrthoRadialRep, RepError};

/// Default vertex cap for brute-force enumeration.
pub const DEFAULT_MAX_VERTICES: usize = 24;

fn max_vertices() -> usize {
    std::env::var("ORACLE_MAX_VERTICES")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_VERTICES)
}

fn check_size(rep: &OrthoRadialRep) -> Result<(), RepError> {
    let n = rep.graph.vertex_count();
    let cap = max_vertices();
    if n > cap {
        return Err(RepError::InvalidInput(format!(
            "brute-force oracle capped at {cap} vertices, instance has {n}"
        )));
    }
    Ok(())
}

/// Enumerates every essential simple cycle, oriented so the central face
/// lies inside. Each cycle appears exactly once, starting at its
/// smallest-id edge.
pub fn essential_cycles(rep: &OrthoRadialRep) -> Result<Vec<Vec<DartId>>, RepError> {
    check_size(rep)?;
    let g = &rep.graph;
    let mut out = Vec::new();
    // Every simple cycle has a unique minimum edge id; enumerate cycles whose
    // first dart lies on that edge and whose other edges have larger ids.
    // Both orientations of the minimum edge are tried; essentiality with the
    // central face inside keeps exactly one of them.
    for first in 0..g.dart_count() {
        let min_edge = g.edge(first);
        let start = g.tail(first);
        let mut path = vec![first];
        let mut on_path = vec![false; g.vertex_count()];
        on_path[start] = true;
        backtrack(rep, start, min_edge, &mut path, &mut on_path, &mut out);
    }
    Ok(out)
}

fn backtrack(
    rep: &OrthoRadialRep,
    start: Vertex,
    min_edge: usize,
    path: &mut Vec<DartId>,
    on_path: &mut Vec<bool>,
    out: &mut Vec<Vec<DartId>>,
) {
    let g = &rep.graph;
    let v = g.head(*path.last().unwrap());
    if v == start {
        if path.len() >= 2 {
            if let Ok(sides) = cycle_sides(g, &rep.faces, path) {
                if sides.interior[rep.central] && sides.exterior[rep.outer] {
                    out.push(path.clone());
                }
            }
        }
        return;
    }
    if on_path[v] {
        return;
    }
    on_path[v] = true;
    for &d in g.rotation(v) {
        if g.edge(d) <= min_edge || g.edge(d) == g.edge(*path.last().unwrap()) {
            continue;
        }
        path.push(d);
        backtrack(rep, start, min_edge, path, on_path, out);
        path.pop();
    }
    on_path[v] = false;
}

/// Searches every essential cycle for a strictly monotone one under the
/// given reference. Returns the certificate for the first hit in a
/// deterministic order (shortest cycle, then lexicographically smallest
/// dart sequence).
pub fn find_monotone_cycle(
    rep: &OrthoRadialRep,
    reference: DartId,
) -> Result<Option<MonotoneCertificate>, RepError> {
    let mut cycles = essential_cycles(rep)?;
    cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for cyc in cycles {
        let labels = rep.cycle_labels(&cyc, reference)?;
        let kind = classify_labels(&labels);
        if kind == CycleClass::Increasing || kind == CycleClass::Decreasing {
            let vertices = cyc.iter().map(|&d| rep.graph.tail(d)).collect();
            return Ok(Some(MonotoneCertificate {
                vertices,
                darts: cyc,
                labels,
                kind,
                reference,
            }));
        }
    }
    Ok(None)
}

/// Whether the representation is drawable without bends for a fixed
/// reference dart: true iff no essential cycle is strictly monotone.
pub fn drawable_for_reference(rep: &OrthoRadialRep, reference: DartId) -> Result<bool, RepError> {
    Ok(find_monotone_cycle(rep, reference)?.is_none())
}

/// Verdict of the sweep at one reference offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetVerdict {
    /// No monotone essential cycle: drawable at this offset.
    Drawable,
    /// Some cycle is increasing (and none decreasing): the offset is too low.
    Increasing,
    /// Some cycle is decreasing (and none increasing): the offset is too
    /// high.
    Decreasing,
    /// Both kinds occur: no offset can be drawable.
    Both,
}

/// Result of sweeping every realized reference offset along the outer face.
#[derive(Debug, Clone)]
pub struct OffsetSweep {
    /// Verdict and a representative reference dart per offset. The key is
    /// the label of the canonical probe dart measured with the
    /// representative as reference (the negated prefix rotation), so
    /// increasing certificates appear at high offsets and decreasing ones
    /// at low offsets.
    pub verdicts: BTreeMap<i64, (DartId, OffsetVerdict)>,
}

impl OffsetSweep {
    /// Offsets at which the instance is drawable.
    pub fn drawable_offsets(&self) -> Vec<i64> {
        self.verdicts
            .iter()
            .filter(|(_, (_, v))| *v == OffsetVerdict::Drawable)
            .map(|(&x, _)| x)
            .collect()
    }
}

/// Walks the reversed outer facial cycle from the canonical reference and
/// returns each dart with its prefix rotation (offset).
pub fn outer_offsets(rep: &OrthoRadialRep, reference: DartId) -> Result<Vec<(DartId, i64)>, RepError> {
    let g = &rep.graph;
    if rep.faces.face_of[g.twin(reference)] != rep.outer {
        return Err(RepError::ReferenceNotOnOuterFace);
    }
    // Reversed outer cycle: twins of the outer facial cycle in reverse order.
    let outer_cycle = &rep.faces.cycles[rep.outer];
    let pos = outer_cycle
        .iter()
        .position(|&d| d == g.twin(reference))
        .expect("reference twin must be on the outer facial cycle");
    let len = outer_cycle.len();
    let mut walk = Vec::with_capacity(len);
    for i in 0..len {
        let d = outer_cycle[(pos + len - i) % len];
        walk.push(g.twin(d));
    }
    debug_assert_eq!(walk[0], reference);
    let mut out = Vec::with_capacity(len);
    let mut prefix = 0i64;
    out.push((reference, 0));
    for i in 1..len {
        prefix += rep.turn(walk[i - 1], walk[i]);
        out.push((walk[i], prefix));
    }
    Ok(out)
}

/// Evaluates every realized offset by recomputing all cycle labels against a
/// representative dart at that offset.
pub fn sweep_offsets(rep: &OrthoRadialRep, reference: DartId) -> Result<OffsetSweep, RepError> {
    let cycles = essential_cycles(rep)?;
    let mut reps: BTreeMap<i64, DartId> = BTreeMap::new();
    for (d, o) in outer_offsets(rep, reference)? {
        reps.entry(-o).or_insert(d);
    }
    let mut verdicts = BTreeMap::new();
    for (x, d) in reps {
        let mut inc = false;
        let mut dec = false;
        for cyc in &cycles {
            match classify_labels(&rep.cycle_labels(cyc, d)?) {
                CycleClass::Increasing => inc = true,
                CycleClass::Decreasing => dec = true,
                _ => {}
            }
            if inc && dec {
                break;
            }
        }
        let verdict = match (inc, dec) {
            (false, false) => OffsetVerdict::Drawable,
            (true, false) => OffsetVerdict::Increasing,
            (false, true) => OffsetVerdict::Decreasing,
            (true, true) => OffsetVerdict::Both,
        };
        verdicts.insert(x, (d, verdict));
    }
    Ok(OffsetSweep { verdicts })
}
