//! Ortho-radial representations: corner angles, the rotation calculus,
//! direction classes, horizontal segments and cycle labels.
//!
//! Angles are stored in quarter turns. The corner at a vertex between an
//! out-dart and its counterclockwise successor carries one angle; the angles
//! around a vertex sum to four (360 degrees). Direction classes are encoded
//! as `0 = east, 1 = south, 2 = west, 3 = north`, so a right turn adds one
//! modulo four.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    check_walk, cycle_sides, is_crossing_free, DartId, FaceId, FaceSet, GraphError, PlaneGraph,
    Vertex,
};

pub const EAST: u8 = 0;
pub const SOUTH: u8 = 1;
pub const WEST: u8 = 2;
pub const NORTH: u8 = 3;

/// Errors raised by representation-level validation and queries.
#[derive(Debug, Error)]
pub enum RepError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("reference dart is not on the reversed outer facial cycle")]
    ReferenceNotOnOuterFace,
    #[error("reference path is not valid for the direction formula")]
    InvalidReferencePath,
    #[error("cycle is not essential")]
    NotEssential,
    #[error("no crossing-free exterior path exists between reference and edge")]
    NoExteriorPath,
}

/// Corner angles in quarter turns, one per dart: the corner between dart `d`
/// and its counterclockwise successor at `tail(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleAssignment {
    pub per_dart: Vec<u8>,
}

impl AngleAssignment {
    #[inline]
    pub fn angle(&self, d: DartId) -> i64 {
        self.per_dart[d] as i64
    }
}

/// A plane graph together with corner angles and the two distinguished
/// faces of the cylindrical drawing surface.
#[derive(Debug, Clone)]
pub struct OrthoRadialRep {
    pub graph: PlaneGraph,
    pub faces: FaceSet,
    pub phi: AngleAssignment,
    pub central: FaceId,
    pub outer: FaceId,
}

impl OrthoRadialRep {
    pub fn new(
        graph: PlaneGraph,
        phi: AngleAssignment,
        central: FaceId,
        outer: FaceId,
    ) -> Result<Self, RepError> {
        let faces = crate::graph::compute_faces(&graph);
        if central >= faces.face_count() || outer >= faces.face_count() {
            return Err(RepError::InvalidInput("face designator out of range".into()));
        }
        if phi.per_dart.len() != graph.dart_count() {
            return Err(RepError::InvalidInput("angle count mismatch".into()));
        }
        for &a in &phi.per_dart {
            if !(1..=4).contains(&a) {
                return Err(RepError::InvalidInput(format!(
                    "corner angle {a} outside 90..360 degrees"
                )));
            }
        }
        Ok(OrthoRadialRep {
            graph,
            faces,
            phi,
            central,
            outer,
        })
    }

    /// Vertices violating the 360-degree condition (empty when valid).
    pub fn check_vertex_angles(&self) -> Vec<Vertex> {
        let mut bad = Vec::new();
        for v in 0..self.graph.vertex_count() {
            let sum: i64 = self.graph.rotation(v).iter().map(|&d| self.phi.angle(d)).sum();
            if sum != 4 {
                bad.push(v);
            }
        }
        bad
    }

    /// Faces violating the facial rotation condition (empty when valid).
    ///
    /// A facial cycle must have rotation 4 when the face is neither central
    /// nor outer, 0 when it is exactly one of them, and -4 when it is both.
    pub fn check_face_rotations(&self) -> Vec<FaceId> {
        let mut bad = Vec::new();
        for (f, cyc) in self.faces.cycles.iter().enumerate() {
            let rot: i64 = cyc
                .iter()
                .map(|&d| 2 - self.ccw_angle_sum(self.graph.twin(d), self.graph.face_next(d)))
                .sum();
            let special = (f == self.central) as i64 + (f == self.outer) as i64;
            let want = 4 - 4 * special;
            if rot != want {
                bad.push(f);
            }
        }
        bad
    }

    /// Sum of corner angles walking counterclockwise from out-dart `from` to
    /// out-dart `to` at their common tail (a full turn when equal).
    fn ccw_angle_sum(&self, from: DartId, to: DartId) -> i64 {
        let mut total = 0;
        let mut d = from;
        loop {
            total += self.phi.angle(d);
            d = self.graph.ccw_next(d);
            if d == to {
                break;
            }
        }
        total
    }

    /// Rotation contributed at the joint between consecutive walk darts:
    /// `+1` right turn, `0` straight, `-1` left turn, `-2` reversal.
    pub fn turn(&self, d1: DartId, d2: DartId) -> i64 {
        debug_assert_eq!(self.graph.head(d1), self.graph.tail(d2));
        2 - self.ccw_angle_sum(self.graph.twin(d1), d2)
    }

    /// Total rotation of a crossing-free walk (`closed` adds the wrap-around
    /// turn from the last dart back to the first).
    pub fn rotation(&self, walk: &[DartId], closed: bool) -> Result<i64, RepError> {
        if !is_crossing_free(&self.graph, walk, closed)? {
            return Err(RepError::Graph(GraphError::NotCrossingFree(
                self.graph.tail(walk[0]),
            )));
        }
        Ok(self.rotation_unchecked(walk, closed))
    }

    /// Rotation of a walk without the crossing-freedom check.
    pub fn rotation_unchecked(&self, walk: &[DartId], closed: bool) -> i64 {
        let mut total = 0;
        for i in 0..walk.len() - 1 {
            total += self.turn(walk[i], walk[i + 1]);
        }
        if closed {
            total += self.turn(walk[walk.len() - 1], walk[0]);
        }
        total
    }

    /// Direction of dart `e2` relative to dart `e1` measured along the
    /// connecting path `p` (which may be empty when the darts share an
    /// endpoint). The path must connect an endpoint of `e1` to an endpoint
    /// of `e2` without using either edge.
    ///
    /// The four endpoint combinations reduce to a rotation of a composite
    /// walk, with `+2`/`-2` corrections when the walk enters through the
    /// reversal of `e1` or leaves through the reversal of `e2`.
    pub fn direction(&self, e1: DartId, p: &[DartId], e2: DartId) -> Result<i64, RepError> {
        let g = &self.graph;
        let (u, v) = (g.tail(e1), g.head(e1));
        let (x, y) = (g.tail(e2), g.head(e2));
        let (p_start, p_end) = if p.is_empty() {
            (usize::MAX, usize::MAX) // wildcards, resolved per case below
        } else {
            check_walk(g, p, false)?;
            (g.tail(p[0]), g.head(*p.last().unwrap()))
        };
        let fits = |s: Vertex, t: Vertex| {
            if p.is_empty() {
                s == t
            } else {
                p_start == s && p_end == t
            }
        };
        let compose = |first: DartId, last: DartId| -> Vec<DartId> {
            let mut w = Vec::with_capacity(p.len() + 2);
            w.push(first);
            w.extend_from_slice(p);
            w.push(last);
            w
        };
        // Case order fixes determinism when several apply.
        let (walk, correction) = if fits(v, x) {
            (compose(e1, e2), 0)
        } else if fits(u, x) {
            (compose(g.twin(e1), e2), 2)
        } else if fits(v, y) {
            (compose(e1, g.twin(e2)), -2)
        } else if fits(u, y) {
            (compose(g.twin(e1), g.twin(e2)), 0)
        } else {
            return Err(RepError::InvalidReferencePath);
        };
        Ok(self.rotation_unchecked(&walk, false) + correction)
    }

    /// Assigns a direction class to every dart by propagating from the
    /// reference dart, which points east.
    ///
    /// The reference must be an edge of the reversed outer facial cycle,
    /// i.e. the outer face must lie on its left.
    pub fn classify_directions(&self, reference: DartId) -> Result<Vec<u8>, RepError> {
        let g = &self.graph;
        if self.faces.face_of[g.twin(reference)] != self.outer {
            return Err(RepError::ReferenceNotOnOuterFace);
        }
        let mut label = vec![u8::MAX; g.dart_count()];
        let mut queue = VecDeque::new();
        label[reference] = EAST;
        queue.push_back(reference);
        while let Some(d) = queue.pop_front() {
            let l = label[d];
            let mut push = |d2: DartId, l2: u8, label: &mut Vec<u8>| -> Result<(), RepError> {
                if label[d2] == u8::MAX {
                    label[d2] = l2;
                    queue_push(&mut queue, d2);
                } else if label[d2] != l2 {
                    return Err(RepError::InvalidInput(
                        "direction propagation is inconsistent; angle conditions violated".into(),
                    ));
                }
                Ok(())
            };
            // Twin points the opposite way.
            push(g.twin(d), (l + 2) % 4, &mut label)?;
            // Counterclockwise successor at the tail turns left by the
            // corner angle.
            let succ = g.ccw_next(d);
            let a = self.phi.angle(d) as u8;
            push(succ, (l + 4 - a % 4) % 4, &mut label)?;
        }
        if label.contains(&u8::MAX) {
            return Err(RepError::InvalidInput("direction propagation incomplete".into()));
        }
        Ok(label)
    }

    /// Labels of the darts of an essential cycle relative to a reference
    /// dart, computed through crossing-free paths in the exterior of the
    /// cycle.
    pub fn cycle_labels(&self, cycle: &[DartId], reference: DartId) -> Result<Vec<i64>, RepError> {
        let g = &self.graph;
        let sides = cycle_sides(g, &self.faces, cycle)?;
        if !sides.interior[self.central] || !sides.exterior[self.outer] {
            return Err(RepError::NotEssential);
        }
        // Exterior subgraph: the cycle itself plus all edges bordering an
        // exterior face from either side.
        let mut allowed = vec![false; g.edge_count()];
        for &d in cycle {
            allowed[g.edge(d)] = true;
        }
        for d in 0..g.dart_count() {
            if sides.exterior[self.faces.face_of[d]] {
                allowed[g.edge(d)] = true;
            }
        }
        cycle
            .iter()
            .map(|&e| self.edge_label(&allowed, reference, e))
            .collect()
    }

    /// Label of a single dart relative to the reference, restricted to a
    /// subgraph given by an edge mask that both darts belong to.
    fn edge_label(&self, allowed: &[bool], reference: DartId, e: DartId) -> Result<i64, RepError> {
        if reference == e {
            return Ok(0);
        }
        let g = &self.graph;
        let (u, v) = (g.tail(reference), g.head(reference));
        let (x, y) = (g.tail(e), g.head(e));
        // Try the four endpoint combinations in a fixed order; interior path
        // vertices avoid all four endpoints so the composite walk is
        // vertex-simple and therefore crossing-free.
        for &(s, t) in &[(v, x), (u, x), (v, y), (u, y)] {
            if let Some(p) = bfs_path(g, allowed, s, t, &[reference, e], &[u, v, x, y]) {
                return self.direction(reference, &p, e);
            }
        }
        // Fall back to paths through the endpoints, verified crossing-free.
        for &(s, t) in &[(v, x), (u, x), (v, y), (u, y)] {
            if let Some(p) = bfs_path(g, allowed, s, t, &[reference, e], &[]) {
                let val = self.direction(reference, &p, e)?;
                return Ok(val);
            }
        }
        Err(RepError::NoExteriorPath)
    }
}

fn queue_push(queue: &mut VecDeque<DartId>, d: DartId) {
    queue.push_back(d);
}

/// Shortest path from `s` to `t` in the masked subgraph, avoiding the listed
/// edges entirely and the listed vertices as interior path vertices.
fn bfs_path(
    g: &PlaneGraph,
    allowed: &[bool],
    s: Vertex,
    t: Vertex,
    avoid_darts: &[DartId],
    avoid_interior: &[Vertex],
) -> Option<Vec<DartId>> {
    if s == t {
        return Some(Vec::new());
    }
    let avoid_edges: HashSet<usize> = avoid_darts.iter().map(|&d| g.edge(d)).collect();
    let mut pred: HashMap<Vertex, DartId> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        if v != s && v != t && avoid_interior.contains(&v) {
            continue; // may be reached but not expanded
        }
        for &d in g.rotation(v) {
            if !allowed[g.edge(d)] || avoid_edges.contains(&g.edge(d)) {
                continue;
            }
            let w = g.head(d);
            if w == s || pred.contains_key(&w) {
                continue;
            }
            pred.insert(w, d);
            if w == t {
                let mut path = Vec::new();
                let mut cur = t;
                while cur != s {
                    let d = pred[&cur];
                    path.push(d);
                    cur = g.tail(d);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(w);
        }
    }
    None
}

// ───────────────────────── horizontal segments ─────────────────────────

/// A maximal run of east darts, with the vertical darts leaving it north
/// and arriving from the south.
#[derive(Debug, Clone)]
pub struct HSegment {
    /// Vertices west to east (for a cycle, the first vertex repeats
    /// implicitly; `verts.len()` equals the number of distinct vertices).
    pub verts: Vec<Vertex>,
    /// East darts west to east.
    pub darts: Vec<DartId>,
    pub is_cycle: bool,
    /// North out-darts with tail on the segment, west to east.
    pub north: Vec<DartId>,
    /// North in-darts with head on the segment, west to east.
    pub south: Vec<DartId>,
}

/// The partition of all horizontal edges into segments.
#[derive(Debug, Clone)]
pub struct SegmentSet {
    pub segments: Vec<HSegment>,
    /// Segment containing each vertex (`usize::MAX` for vertices without a
    /// horizontal edge).
    pub seg_of_vertex: Vec<usize>,
}

/// Splits the east darts into maximal horizontal segments under a direction
/// labelling. `anchor` optionally rotates the segment that contains it so
/// the listing starts at its tail (used for the outer ring).
pub fn horizontal_segments(
    g: &PlaneGraph,
    labels: &[u8],
    anchor: Option<DartId>,
) -> SegmentSet {
    let n = g.vertex_count();
    let mut east_out = vec![usize::MAX; n];
    let mut east_in = vec![usize::MAX; n];
    for d in 0..g.dart_count() {
        if labels[d] == EAST {
            east_out[g.tail(d)] = d;
            east_in[g.head(d)] = d;
        }
    }
    let mut seg_of_vertex = vec![usize::MAX; n];
    let mut segments = Vec::new();
    let mut claimed = vec![false; n];
    let build = |start: Vertex, is_cycle: bool, segments: &mut Vec<HSegment>,
                     seg_of_vertex: &mut Vec<usize>, claimed: &mut Vec<bool>| {
        let id = segments.len();
        let mut verts = vec![start];
        let mut darts = Vec::new();
        claimed[start] = true;
        seg_of_vertex[start] = id;
        let mut v = start;
        while east_out[v] != usize::MAX {
            let d = east_out[v];
            let w = g.head(d);
            darts.push(d);
            if w == start {
                break;
            }
            verts.push(w);
            claimed[w] = true;
            seg_of_vertex[w] = id;
            v = w;
        }
        let mut north = Vec::new();
        let mut south = Vec::new();
        for &v in &verts {
            for &d in g.rotation(v) {
                if labels[d] == NORTH {
                    north.push(d);
                }
                if labels[d] == SOUTH {
                    south.push(g.twin(d)); // store as the north dart arriving
                }
            }
        }
        segments.push(HSegment {
            verts,
            darts,
            is_cycle,
            north,
            south,
        });
    };
    // Anchored segment first so the outer ring starts at the reference.
    if let Some(a) = anchor {
        debug_assert_eq!(labels[a], EAST);
        let mut v = g.tail(a);
        // Walk west to find the segment start (or detect a cycle).
        let start = loop {
            if east_in[v] == usize::MAX {
                break v;
            }
            let w = g.tail(east_in[v]);
            if w == g.tail(a) {
                break g.tail(a); // cycle; anchor at the reference tail
            }
            v = w;
            if v == g.tail(a) {
                break v;
            }
        };
        let is_cycle = {
            // A cycle if walking east from `start` returns to it.
            let mut v = start;
            let mut cyc = false;
            let mut steps = 0;
            while east_out[v] != usize::MAX && steps <= n {
                v = g.head(east_out[v]);
                steps += 1;
                if v == start {
                    cyc = true;
                    break;
                }
            }
            cyc
        };
        build(start, is_cycle, &mut segments, &mut seg_of_vertex, &mut claimed);
    }
    // Path segments: start wherever no east dart arrives.
    for v in 0..n {
        if !claimed[v] && east_in[v] == usize::MAX && east_out[v] != usize::MAX {
            build(v, false, &mut segments, &mut seg_of_vertex, &mut claimed);
        }
    }
    // Remaining cycles.
    for v in 0..n {
        if !claimed[v] && east_out[v] != usize::MAX {
            build(v, true, &mut segments, &mut seg_of_vertex, &mut claimed);
        }
    }
    // Isolated vertices (no horizontal edge) form their own degenerate
    // segment so every vertex belongs somewhere.
    for v in 0..n {
        if !claimed[v] {
            let id = segments.len();
            seg_of_vertex[v] = id;
            let mut north = Vec::new();
            let mut south = Vec::new();
            for &d in g.rotation(v) {
                if labels[d] == NORTH {
                    north.push(d);
                }
                if labels[d] == SOUTH {
                    south.push(g.twin(d));
                }
            }
            segments.push(HSegment {
                verts: vec![v],
                darts: Vec::new(),
                is_cycle: false,
                north,
                south,
            });
        }
    }
    SegmentSet {
        segments,
        seg_of_vertex,
    }
}

// ───────────────────────── monotone cycles ─────────────────────────

/// How the labels of an essential cycle behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleClass {
    /// Labels of both signs: not monotone.
    NotMonotone,
    /// All labels zero.
    Flat,
    /// All labels non-negative, at least one positive.
    Increasing,
    /// All labels non-positive, at least one negative.
    Decreasing,
}

/// Classifies a label vector.
pub fn classify_labels(labels: &[i64]) -> CycleClass {
    let pos = labels.iter().any(|&l| l > 0);
    let neg = labels.iter().any(|&l| l < 0);
    match (pos, neg) {
        (true, true) => CycleClass::NotMonotone,
        (false, false) => CycleClass::Flat,
        (true, false) => CycleClass::Increasing,
        (false, true) => CycleClass::Decreasing,
    }
}

/// A strictly monotone essential cycle: the witness that a representation
/// admits no bend-free drawing for the given reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneCertificate {
    /// Vertex sequence of the cycle, oriented with the central face inside.
    pub vertices: Vec<Vertex>,
    /// Darts of the cycle (same order).
    pub darts: Vec<DartId>,
    /// Edge labels relative to the reference.
    pub labels: Vec<i64>,
    /// `Increasing` or `Decreasing`.
    pub kind: CycleClass,
    /// The reference dart the labels refer to.
    pub reference: DartId,
}

/// Re-derives every certificate property from scratch: simple, essential,
/// labels correct, strictly monotone.
pub fn verify_certificate(rep: &OrthoRadialRep, cert: &MonotoneCertificate) -> Result<(), RepError> {
    let g = &rep.graph;
    if cert.darts.is_empty() || cert.darts.len() != cert.labels.len() {
        return Err(RepError::InvalidInput("certificate shape mismatch".into()));
    }
    check_walk(g, &cert.darts, true)?;
    let verts: Vec<Vertex> = cert.darts.iter().map(|&d| g.tail(d)).collect();
    if verts != cert.vertices {
        return Err(RepError::InvalidInput("certificate vertex list mismatch".into()));
    }
    let mut seen = HashSet::new();
    if !verts.iter().all(|&v| seen.insert(v)) {
        return Err(RepError::Graph(GraphError::NotSimpleCycle));
    }
    let sides = cycle_sides(g, &rep.faces, &cert.darts)?;
    if !sides.interior[rep.central] || !sides.exterior[rep.outer] {
        return Err(RepError::NotEssential);
    }
    let labels = rep.cycle_labels(&cert.darts, cert.reference)?;
    if labels != cert.labels {
        return Err(RepError::InvalidInput(format!(
            "certificate labels do not match recomputation: {:?} vs {:?}",
            cert.labels, labels
        )));
    }
    match classify_labels(&labels) {
        CycleClass::Increasing if cert.kind == CycleClass::Increasing => Ok(()),
        CycleClass::Decreasing if cert.kind == CycleClass::Decreasing => Ok(()),
        other => Err(RepError::InvalidInput(format!(
            "certificate is not strictly monotone as claimed (got {other:?})"
        ))),
    }
}
