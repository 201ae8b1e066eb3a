//! Certificate extraction from a stuck cover run.
//!
//! When the engine halts with segments uncovered, the frontier darts
//! `e_1, ..., e_s` (west to east) delimit facial paths between consecutive
//! hangs. Classifying those paths by the shape of their prefix-rotation
//! strings yields a dichotomy: either every path starts flat or descends
//! (the decreasing case) or every path starts flat or ascends (the
//! increasing case). The union of the path interiors contains an essential
//! cycle around the central face whose labels are strictly monotone — the
//! witness that no drawing exists for the chosen reference.

use std::collections::HashMap;

use thiserror::Error;

use crate::engine::workgraph::Origin;
use crate::engine::RunResult;
use crate::graph::DartId;
use crate::preprocess::Chain;
use crate::rep::{classify_labels, CycleClass, MonotoneCertificate, OrthoRadialRep, RepError};

/// Internal invariant failures during extraction; these indicate a bug, not
/// a property of the input.
#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("path type dichotomy violated at a stuck frontier")]
    DichotomyViolated,
    #[error("extracted labels violate the monotonicity bound")]
    LabelBound,
    #[error("extracted cycle touches a virtual edge")]
    VirtualOnCycle,
    #[error("subdivision pieces of one edge carry different labels")]
    PieceLabelMismatch,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("extraction inconsistency: {0}")]
    Internal(String),
}

/// Per-path pattern flags: whether the backward prefix-rotation string is
/// exactly `0 1^c 2` (flat), strictly extends it (descends east of the
/// hang), or whether the forward string strictly extends `0 (-1)^c -2`
/// (descends west of the hang).
#[derive(Debug, Clone, Copy, Default)]
struct PathFlags {
    flat: bool,
    east: bool,
    west: bool,
}

/// Matches `0 (-1)^c -2` with `c >= 1` as a prefix; returns whether the
/// string strictly extends the pattern.
fn down_prefix(zs: &[i64]) -> Option<bool> {
    if zs.len() < 3 || zs[0] != 0 {
        return None;
    }
    let mut i = 1;
    while i < zs.len() && zs[i] == -1 {
        i += 1;
    }
    if i == 1 || i >= zs.len() || zs[i] != -2 {
        return None;
    }
    Some(i + 1 < zs.len())
}

fn classify_path(z_fwd: &[i64], z_back: &[i64]) -> Option<PathFlags> {
    let up: Vec<i64> = z_back.iter().map(|&z| -z).collect();
    let mut flags = PathFlags::default();
    match down_prefix(&up) {
        Some(true) => flags.east = true,
        Some(false) => flags.flat = true,
        None => {}
    }
    if let Some(true) = down_prefix(z_fwd) {
        flags.west = true;
    }
    if !(flags.flat || flags.east || flags.west) {
        return None;
    }
    Some(flags)
}

/// Shape of one frontier path, read west to east between consecutive hangs.
///
/// A path is the facial walk between two adjacent frontier darts of a stuck
/// cover; its shape is decided by the prefix-rotation string of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathShape {
    /// A level run: the rotation string is exactly `0 1^c 2`.
    Flat,
    /// Descends strictly east of its west hang; compatible only with an
    /// increasing cycle.
    Ascending,
    /// Descends strictly west of its east hang; compatible only with a
    /// decreasing cycle.
    Descending,
    /// Descends on both sides; no strictly monotone cycle can use it.
    Saddle,
}

/// Walks and classifies every path of a stuck frontier, west to east,
/// starting at the path east of `frontier[0]`.
pub fn frontier_path_shapes(res: &RunResult) -> Result<Vec<PathShape>, ExtractError> {
    let (_, _, flags) = walk_frontier_paths(res)?;
    Ok(flags
        .iter()
        .map(|f| match (f.east, f.west) {
            (true, true) => PathShape::Saddle,
            (true, false) => PathShape::Ascending,
            (false, true) => PathShape::Descending,
            (false, false) => PathShape::Flat,
        })
        .collect())
}

/// Paths between consecutive hangs: the backward walk follows the face
/// south of the covered region from `twin(e_{i+1})` to `e_i`; the forward
/// path is its twin reversal, from `twin(e_i)` to `e_{i+1}`.
type FrontierPaths = (Vec<Vec<DartId>>, Vec<Vec<i64>>, Vec<PathFlags>);

fn walk_frontier_paths(res: &RunResult) -> Result<FrontierPaths, ExtractError> {
    let wg = &res.wg;
    let frontier = match &res.outcome {
        crate::engine::Outcome::Stuck { frontier } => frontier,
        crate::engine::Outcome::Covered => {
            return Err(ExtractError::Internal("run was not stuck".into()))
        }
    };
    let s = frontier.len();
    if s == 0 {
        return Err(ExtractError::Internal("stuck with empty frontier".into()));
    }
    let mut paths: Vec<Vec<DartId>> = Vec::with_capacity(s);
    let mut z_fwds: Vec<Vec<i64>> = Vec::with_capacity(s);
    let mut flags_all: Vec<PathFlags> = Vec::with_capacity(s);
    for i in 0..s {
        let e_i = frontier[i];
        let e_j = frontier[(i + 1) % s];
        let mut back = vec![wg.twin(e_j)];
        let limit = wg.dart_count();
        let mut cur = wg.twin(e_j);
        let mut found = false;
        for _ in 0..limit {
            cur = wg.face_next(cur);
            back.push(cur);
            if cur == e_i {
                found = true;
                break;
            }
        }
        if !found {
            return Err(ExtractError::Internal(
                "consecutive hangs do not share a face".into(),
            ));
        }
        let fwd: Vec<DartId> = back.iter().rev().map(|&d| wg.twin(d)).collect();
        debug_assert_eq!(fwd[0], wg.twin(e_i));
        debug_assert_eq!(*fwd.last().unwrap(), e_j);
        let prefix = |p: &[DartId]| {
            let mut z = vec![0i64];
            for w in p.windows(2) {
                z.push(z.last().unwrap() + wg.turn(w[0], w[1]));
            }
            z
        };
        let z_back = prefix(&back);
        let z_fwd = prefix(&fwd);
        let flags =
            classify_path(&z_fwd, &z_back).ok_or(ExtractError::DichotomyViolated)?;
        paths.push(fwd);
        z_fwds.push(z_fwd);
        flags_all.push(flags);
    }
    Ok((paths, z_fwds, flags_all))
}

/// Extracts a strictly monotone essential cycle from a stuck run, expressed
/// in darts of the representation the engine ran on.
pub fn extract_certificate(
    res: &RunResult,
    rep: &OrthoRadialRep,
    reference: DartId,
    chains: &[Chain],
) -> Result<MonotoneCertificate, ExtractError> {
    let wg = &res.wg;
    let (paths, z_fwds, flags_all) = walk_frontier_paths(res)?;
    // Dichotomy: every path is flat or descends on the same side, and at
    // least one path strictly descends.
    let inc_ok = flags_all.iter().all(|f| f.flat || f.east)
        && flags_all.iter().any(|f| f.east);
    let dec_ok = flags_all.iter().all(|f| f.flat || f.west)
        && flags_all.iter().any(|f| f.west);
    if !inc_ok && !dec_ok {
        return Err(ExtractError::DichotomyViolated);
    }

    // The interior subgraph H: all path edges except each path's first and
    // last edge. Record the forward prefix rotation of every interior dart.
    let mut in_h: HashMap<usize, ()> = HashMap::new();
    let mut fwd_rot: HashMap<DartId, i64> = HashMap::new();
    for (p, z) in paths.iter().zip(&z_fwds) {
        for (j, &d) in p.iter().enumerate() {
            if j == 0 || j + 1 == p.len() {
                continue;
            }
            in_h.insert(d / 2, ());
            if let Some(&prev) = fwd_rot.get(&d) {
                if prev != z[j] {
                    return Err(ExtractError::Internal(
                        "conflicting prefix rotations on a shared dart".into(),
                    ));
                }
            }
            fwd_rot.insert(d, z[j]);
        }
    }
    if in_h.is_empty() {
        return Err(ExtractError::Internal("interior subgraph is empty".into()));
    }

    // Flood the faces of the final working graph from the central face,
    // crossing only edges outside H; the contour of the flooded region
    // within H is the monotone cycle, central side on the right.
    let nd = wg.dart_count();
    let mut face_of = vec![usize::MAX; nd];
    let mut face_darts: Vec<Vec<DartId>> = Vec::new();
    for d0 in 0..nd {
        if face_of[d0] != usize::MAX {
            continue;
        }
        let fid = face_darts.len();
        let mut darts = Vec::new();
        let mut d = d0;
        loop {
            face_of[d] = fid;
            darts.push(d);
            d = wg.face_next(d);
            if d == d0 {
                break;
            }
        }
        face_darts.push(darts);
    }
    let nfaces = face_darts.len();
    let mut marked = vec![false; nfaces];
    let mut queue = vec![face_of[res.central_dart]];
    marked[face_of[res.central_dart]] = true;
    while let Some(f) = queue.pop() {
        for &d in &face_darts[f] {
            if !in_h.contains_key(&(d / 2)) {
                let g = face_of[wg.twin(d)];
                if !marked[g] {
                    marked[g] = true;
                    queue.push(g);
                }
            }
        }
    }

    // Find a starting dart of the contour: an H dart with a marked face on
    // its right and an unmarked face on its left.
    let start = (0..nd)
        .find(|&d| {
            in_h.contains_key(&(d / 2)) && marked[face_of[d]] && !marked[face_of[wg.twin(d)]]
        })
        .ok_or_else(|| ExtractError::Internal("no contour dart found".into()))?;
    let mut cycle = Vec::new();
    let mut cur = start;
    loop {
        cycle.push(cur);
        // Next contour dart: first counterclockwise successor of the twin
        // that stays within H.
        let mut cand = wg.ccw_next(wg.twin(cur));
        while !in_h.contains_key(&(cand / 2)) {
            cand = wg.ccw_next(cand);
            if cand == wg.twin(cur) {
                return Err(ExtractError::Internal("contour walk dead end".into()));
            }
        }
        cur = cand;
        if cur == start {
            break;
        }
        if cycle.len() > nd {
            return Err(ExtractError::Internal("contour walk does not close".into()));
        }
    }

    // Labels: one plus the forward prefix rotation at each contour dart;
    // the cycle must be strictly monotone.
    let mut labels = Vec::with_capacity(cycle.len());
    for &d in &cycle {
        let z = fwd_rot.get(&d).ok_or_else(|| {
            ExtractError::Internal("contour dart is not a forward path dart".into())
        })?;
        labels.push(1 + z);
    }
    let kind = classify_labels(&labels);
    let decreasing = match kind {
        CycleClass::Increasing if inc_ok => false,
        CycleClass::Decreasing if dec_ok => true,
        _ => return Err(ExtractError::LabelBound),
    };

    // Map the working-graph cycle back to input darts: contract
    // subdivision pieces and expand smoothed chains.
    let mut out_darts: Vec<DartId> = Vec::new();
    let mut out_labels: Vec<i64> = Vec::new();
    let mut i = 0;
    while i < cycle.len() {
        let d = cycle[i];
        let l = labels[i];
        match wg.origin(d) {
            Origin::GreedyVirtual | Origin::OuterVirtual => {
                return Err(ExtractError::VirtualOnCycle)
            }
            Origin::Dart(od) => {
                // Swallow subsequent pieces of the same input edge.
                let mut j = i + 1;
                while j < cycle.len() && wg.origin(cycle[j]) == Origin::Dart(od) {
                    if labels[j] != l {
                        return Err(ExtractError::PieceLabelMismatch);
                    }
                    j += 1;
                }
                out_darts.push(od);
                out_labels.push(l);
                i = j;
            }
            Origin::ChainNorth(c) => {
                let mut j = i + 1;
                while j < cycle.len() && wg.origin(cycle[j]) == Origin::ChainNorth(c) {
                    if labels[j] != l {
                        return Err(ExtractError::PieceLabelMismatch);
                    }
                    j += 1;
                }
                for &cd in &chains[c].darts {
                    out_darts.push(cd);
                    out_labels.push(l);
                }
                i = j;
            }
            Origin::ChainSouth(c) => {
                let mut j = i + 1;
                while j < cycle.len() && wg.origin(cycle[j]) == Origin::ChainSouth(c) {
                    if labels[j] != l {
                        return Err(ExtractError::PieceLabelMismatch);
                    }
                    j += 1;
                }
                for &cd in chains[c].darts.iter().rev() {
                    out_darts.push(rep.graph.twin(cd));
                    out_labels.push(l);
                }
                i = j;
            }
        }
    }
    // Contraction can split a run of pieces across the cycle's seam;
    // merge identical first and last entries.
    if out_darts.len() > 1 && out_darts.first() == out_darts.last() {
        out_darts.pop();
        out_labels.pop();
    }

    let vertices = out_darts.iter().map(|&d| rep.graph.tail(d)).collect();
    let cert = MonotoneCertificate {
        vertices,
        darts: out_darts,
        labels: out_labels,
        kind: if decreasing {
            CycleClass::Decreasing
        } else {
            CycleClass::Increasing
        },
        reference,
    };
    crate::rep::verify_certificate(rep, &cert)?;
    Ok(cert)
}

/// Collapses a certificate on a thickened instance back to the original
/// representation; fails if the collapsed vertex sequence is not a simple
/// cycle.
pub fn unthicken_certificate(
    orig: &OrthoRadialRep,
    orig_reference: DartId,
    map: &crate::preprocess::ThickenMap,
    cert: &MonotoneCertificate,
) -> Result<MonotoneCertificate, ExtractError> {
    let mut verts: Vec<usize> = Vec::new();
    for &tv in &cert.vertices {
        let p = map.parent(tv);
        if verts.last() != Some(&p) {
            verts.push(p);
        }
    }
    if verts.len() > 1 && verts.first() == verts.last() {
        verts.pop();
    }
    // Rebuild darts from the vertex sequence.
    let g = &orig.graph;
    let mut darts = Vec::with_capacity(verts.len());
    for i in 0..verts.len() {
        let (u, v) = (verts[i], verts[(i + 1) % verts.len()]);
        let d = g
            .rotation(u)
            .iter()
            .copied()
            .find(|&d| g.head(d) == v)
            .ok_or_else(|| {
                ExtractError::Internal("collapsed cycle uses a missing edge".into())
            })?;
        darts.push(d);
    }
    let labels = orig.cycle_labels(&darts, orig_reference)?;
    let kind = classify_labels(&labels);
    let cert = MonotoneCertificate {
        vertices: verts,
        darts,
        labels,
        kind,
        reference: orig_reference,
    };
    crate::rep::verify_certificate(orig, &cert)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;
    use crate::fixtures;
    use crate::preprocess::prepare;
    use crate::rep::verify_certificate;

    #[test]
    fn pentagon_spiral_certificate_is_the_pentagon() {
        let fx = fixtures::pentagon_spiral();
        let p = prepare(&fx.rep, fx.reference).unwrap();
        let res = engine::run(p.wg, p.reference, p.central_dart);
        match &res.outcome {
            engine::Outcome::Stuck { frontier } => assert_eq!(frontier.len(), 5),
            other => panic!("expected a stuck cover, got {other:?}"),
        }
        let cert = extract_certificate(&res, &fx.rep, fx.reference, &p.chains).unwrap();
        verify_certificate(&fx.rep, &cert).unwrap();
        assert_eq!(cert.kind, CycleClass::Increasing);
        let mut verts = cert.vertices.clone();
        let min = verts
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        verts.rotate_left(min);
        assert_eq!(verts, vec![0, 1, 2, 3, 4]);
        // Label 1 sits on the south closing edge (v1, v2); the four east
        // edges carry label 0.
        let south = fx.darts[&(0, 1)];
        for (d, l) in cert.darts.iter().zip(&cert.labels) {
            assert_eq!(*l, i64::from(*d == south), "dart {d}");
        }
    }

    #[test]
    fn pentagon_spiral_path_shapes_are_three_ascending_two_flat() {
        let fx = fixtures::pentagon_spiral();
        let p = prepare(&fx.rep, fx.reference).unwrap();
        let res = engine::run(p.wg, p.reference, p.central_dart);
        let shapes = frontier_path_shapes(&res).unwrap();
        assert_eq!(shapes.len(), 5);
        let want = [
            PathShape::Ascending,
            PathShape::Ascending,
            PathShape::Ascending,
            PathShape::Flat,
            PathShape::Flat,
        ];
        let matches = (0..5).any(|r| (0..5).all(|i| shapes[(i + r) % 5] == want[i]));
        assert!(matches, "cyclic pattern mismatch: {shapes:?}");
    }

    #[test]
    fn spiral_hook_certificate_at_alternate_reference() {
        let fx = fixtures::spiral_hook();
        let alt = fixtures::spiral_hook_alt_reference(&fx);
        let p = prepare(&fx.rep, alt).unwrap();
        let res = engine::run(p.wg, p.reference, p.central_dart);
        let cert = extract_certificate(&res, &fx.rep, alt, &p.chains).unwrap();
        verify_certificate(&fx.rep, &cert).unwrap();
        assert_eq!(cert.kind, CycleClass::Increasing);
        // The expected witness is the inner ring with its bump: v1..v10.
        let mut verts = cert.vertices.clone();
        let min = verts
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        verts.rotate_left(min);
        assert_eq!(verts, (0..10).collect::<Vec<_>>());
    }
}
