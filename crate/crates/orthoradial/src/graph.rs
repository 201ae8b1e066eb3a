//! Plane graphs with an explicit rotation system.
//!
//! A graph is stored as a set of darts (directed half-edges). Edge `e` owns
//! darts `2e` and `2e + 1`; `twin(d) = d ^ 1`. Every vertex carries the
//! counterclockwise cyclic order of its outgoing darts, which fixes the
//! embedding. Faces are recovered by the successor rule
//! `next(d) = σ_succ(twin(d))`: each facial cycle is the closed contour that
//! keeps its face on the right-hand side of every dart.

use std::collections::VecDeque;

use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;
pub type DartId = usize;
pub type FaceId = usize;

/// Errors raised while building or interrogating a plane graph.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {0} has degree {1}, maximum supported is 4")]
    DegreeTooHigh(Vertex, usize),
    #[error("rotation data inconsistent at vertex {0}: {1}")]
    InconsistentAdjacency(Vertex, String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("dart sequence is not a walk (break before position {0})")]
    NotAWalk(usize),
    #[error("dart sequence is not a simple cycle")]
    NotSimpleCycle,
    #[error("walk crosses itself at vertex {0}")]
    NotCrossingFree(Vertex),
}

/// A connected plane graph of maximum degree four.
#[derive(Debug, Clone)]
pub struct PlaneGraph {
    /// `head[d]` is the vertex the dart points at.
    head: Vec<Vertex>,
    /// Counterclockwise cyclic order of outgoing darts per vertex.
    rot: Vec<Vec<DartId>>,
    /// Position of each dart inside `rot[tail(d)]`.
    rot_pos: Vec<usize>,
}

impl PlaneGraph {
    /// Builds a plane graph from an edge list and, per vertex, the
    /// counterclockwise cyclic order of incident edge ids.
    ///
    /// A loop edge appears twice in its vertex's rotation; the first
    /// occurrence denotes the `u -> v` dart, the second its twin.
    pub fn new(
        vertex_count: usize,
        edges: &[(Vertex, Vertex)],
        rotations: &[Vec<EdgeId>],
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::EmptyGraph);
        }
        if rotations.len() != vertex_count {
            return Err(GraphError::InconsistentAdjacency(
                rotations.len().min(vertex_count),
                "rotation list count differs from vertex count".into(),
            ));
        }
        let m = edges.len();
        let mut head = vec![usize::MAX; 2 * m];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::InconsistentAdjacency(
                    u.max(v),
                    format!("edge {e} references a missing vertex"),
                ));
            }
            head[2 * e] = v;
            head[2 * e + 1] = u;
        }
        let mut rot: Vec<Vec<DartId>> = Vec::with_capacity(vertex_count);
        let mut seen_once = vec![false; m];
        for (v, order) in rotations.iter().enumerate() {
            if order.len() > 4 {
                return Err(GraphError::DegreeTooHigh(v, order.len()));
            }
            let mut darts = Vec::with_capacity(order.len());
            for &e in order {
                if e >= m {
                    return Err(GraphError::InconsistentAdjacency(
                        v,
                        format!("unknown edge id {e}"),
                    ));
                }
                let (u, w) = edges[e];
                let d = if u == v && w == v {
                    // Loop: first mention is the forward dart.
                    if seen_once[e] {
                        2 * e + 1
                    } else {
                        seen_once[e] = true;
                        2 * e
                    }
                } else if u == v {
                    2 * e
                } else if w == v {
                    2 * e + 1
                } else {
                    return Err(GraphError::InconsistentAdjacency(
                        v,
                        format!("edge {e} is not incident to this vertex"),
                    ));
                };
                darts.push(d);
            }
            rot.push(darts);
        }
        let mut rot_pos = vec![usize::MAX; 2 * m];
        for order in &rot {
            for (i, &d) in order.iter().enumerate() {
                if rot_pos[d] != usize::MAX {
                    return Err(GraphError::InconsistentAdjacency(
                        head[d ^ 1],
                        format!("dart of edge {} listed twice", d / 2),
                    ));
                }
                rot_pos[d] = i;
            }
        }
        if let Some(d) = rot_pos.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::InconsistentAdjacency(
                head[d ^ 1],
                format!("edge {} missing from a rotation list", d / 2),
            ));
        }
        let g = PlaneGraph { head, rot, rot_pos };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn edge_count(&self) -> usize {
        self.head.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.head.len()
    }

    #[inline]
    pub fn twin(&self, d: DartId) -> DartId {
        d ^ 1
    }

    #[inline]
    pub fn head(&self, d: DartId) -> Vertex {
        self.head[d]
    }

    #[inline]
    pub fn tail(&self, d: DartId) -> Vertex {
        self.head[d ^ 1]
    }

    #[inline]
    pub fn edge(&self, d: DartId) -> EdgeId {
        d / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rot[v].len()
    }

    /// Outgoing darts of `v` in counterclockwise order.
    pub fn rotation(&self, v: Vertex) -> &[DartId] {
        &self.rot[v]
    }

    /// Counterclockwise successor of `d` among the out-darts of `tail(d)`.
    pub fn ccw_next(&self, d: DartId) -> DartId {
        let order = &self.rot[self.tail(d)];
        order[(self.rot_pos[d] + 1) % order.len()]
    }

    /// Counterclockwise predecessor of `d` among the out-darts of `tail(d)`.
    pub fn ccw_prev(&self, d: DartId) -> DartId {
        let order = &self.rot[self.tail(d)];
        order[(self.rot_pos[d] + order.len() - 1) % order.len()]
    }

    /// Number of counterclockwise steps from out-dart `from` to out-dart
    /// `to` at their shared tail vertex, in `1..=deg` (a full turn when
    /// `from == to`).
    pub fn ccw_steps(&self, from: DartId, to: DartId) -> usize {
        debug_assert_eq!(self.tail(from), self.tail(to));
        let deg = self.rot[self.tail(from)].len();
        let a = self.rot_pos[from];
        let b = self.rot_pos[to];
        let diff = (b + deg - a) % deg;
        if diff == 0 {
            deg
        } else {
            diff
        }
    }

    /// Facial successor: the contour continues at the head of `d`, taking
    /// the counterclockwise successor of `twin(d)`.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.ccw_next(self.twin(d))
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if self.dart_count() == 0 {
            return n == 1;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &d in &self.rot[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    /// True if the graph has no loops or parallel edges.
    pub fn is_simple(&self) -> bool {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        for e in 0..self.edge_count() {
            let (u, v) = (self.tail(2 * e), self.head(2 * e));
            if u == v {
                return false;
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return false;
            }
        }
        true
    }

    /// True if the graph is biconnected (no cut vertices, at least one edge).
    pub fn is_biconnected(&self) -> bool {
        let n = self.vertex_count();
        if n < 3 {
            return self.edge_count() >= 1 && self.is_connected();
        }
        // Iterative lowpoint computation rooted at vertex 0.
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut parent = vec![usize::MAX; n];
        let mut timer = 0usize;
        let mut root_children = 0usize;
        let mut stack: Vec<(Vertex, usize)> = vec![(0, 0)];
        disc[0] = 0;
        low[0] = 0;
        timer += 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < self.rot[v].len() {
                let d = self.rot[v][*i];
                *i += 1;
                let w = self.head(d);
                if w == v {
                    continue; // loop edge
                }
                if disc[w] == usize::MAX {
                    parent[w] = v;
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == 0 {
                        root_children += 1;
                    }
                    stack.push((w, 0));
                } else if w != parent[v] {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if p != 0 && low[v] >= disc[p] {
                        return false; // p is a cut vertex
                    }
                }
            }
        }
        disc.iter().all(|&t| t != usize::MAX) && root_children <= 1
    }
}

/// The face partition of a plane graph.
#[derive(Debug, Clone)]
pub struct FaceSet {
    /// Face on the right-hand side of each dart.
    pub face_of: Vec<FaceId>,
    /// One facial cycle per face, in contour order.
    pub cycles: Vec<Vec<DartId>>,
}

impl FaceSet {
    pub fn face_count(&self) -> usize {
        self.cycles.len()
    }
}

/// Decomposes the embedding into facial cycles.
pub fn compute_faces(g: &PlaneGraph) -> FaceSet {
    let nd = g.dart_count();
    let mut face_of = vec![usize::MAX; nd];
    let mut cycles = Vec::new();
    for start in 0..nd {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut d = start;
        loop {
            face_of[d] = id;
            cyc.push(d);
            d = g.face_next(d);
            if d == start {
                break;
            }
        }
        cycles.push(cyc);
    }
    FaceSet { face_of, cycles }
}

/// Checks that a dart sequence is a contiguous walk; for `closed` walks the
/// last dart must return to the tail of the first.
pub fn check_walk(g: &PlaneGraph, walk: &[DartId], closed: bool) -> Result<(), GraphError> {
    if walk.is_empty() {
        return Err(GraphError::NotAWalk(0));
    }
    for i in 0..walk.len() - 1 {
        if g.head(walk[i]) != g.tail(walk[i + 1]) {
            return Err(GraphError::NotAWalk(i + 1));
        }
    }
    if closed && g.head(*walk.last().unwrap()) != g.tail(walk[0]) {
        return Err(GraphError::NotAWalk(walk.len()));
    }
    Ok(())
}

/// Whether a walk can be drawn without self-intersections: no edge is used
/// twice, and at every revisited vertex the two passes do not interleave in
/// the rotation order.
///
/// `closed` treats the walk as a closed curve, so its two endpoints form an
/// additional pass through the start vertex.
pub fn is_crossing_free(g: &PlaneGraph, walk: &[DartId], closed: bool) -> Result<bool, GraphError> {
    check_walk(g, walk, closed)?;
    let mut edge_used = std::collections::HashSet::new();
    for &d in walk {
        if !edge_used.insert(g.edge(d)) {
            return Ok(false);
        }
    }
    // Collect the passes through each vertex as unordered pairs of out-darts
    // (arrival darts are represented by their twins).
    let mut passes: std::collections::HashMap<Vertex, Vec<(DartId, DartId)>> =
        std::collections::HashMap::new();
    for i in 0..walk.len() {
        let next = if i + 1 < walk.len() {
            Some(walk[i + 1])
        } else if closed {
            Some(walk[0])
        } else {
            None
        };
        if let Some(out) = next {
            passes
                .entry(g.head(walk[i]))
                .or_default()
                .push((g.twin(walk[i]), out));
        }
    }
    for (&v, list) in &passes {
        if list.len() < 2 {
            continue;
        }
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let (a1, b1) = list[i];
                let (a2, b2) = list[j];
                if interleaves(g, v, a1, b1, a2, b2) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `{a2, b2}` separates `{a1, b1}` in the cyclic rotation at `v`.
fn interleaves(g: &PlaneGraph, v: Vertex, a1: DartId, b1: DartId, a2: DartId, b2: DartId) -> bool {
    let order = &g.rotation(v);
    let pos = |d: DartId| order.iter().position(|&x| x == d).unwrap();
    let (p1, q1) = (pos(a1), pos(b1));
    let (p2, q2) = (pos(a2), pos(b2));
    let between = |x: usize, lo: usize, hi: usize| {
        // Is x strictly inside the ccw interval (lo, hi)?
        if lo <= hi {
            lo < x && x < hi
        } else {
            x > lo || x < hi
        }
    };
    between(p2, p1, q1) != between(q2, p1, q1)
}

/// The two sides of a simple closed curve in the dual: `interior` is the set
/// of faces on the right-hand side of the cycle darts, `exterior` the rest.
#[derive(Debug, Clone)]
pub struct CycleSides {
    pub interior: Vec<bool>,
    pub exterior: Vec<bool>,
}

/// Splits the faces along a vertex-simple cycle given as a dart sequence.
pub fn cycle_sides(
    g: &PlaneGraph,
    faces: &FaceSet,
    cycle: &[DartId],
) -> Result<CycleSides, GraphError> {
    check_walk(g, cycle, true)?;
    let mut verts = std::collections::HashSet::new();
    for &d in cycle {
        if !verts.insert(g.tail(d)) {
            return Err(GraphError::NotSimpleCycle);
        }
    }
    let mut on_cycle = std::collections::HashSet::new();
    for &d in cycle {
        on_cycle.insert(g.edge(d));
    }
    let nf = faces.face_count();
    let mut interior = vec![false; nf];
    let seed = faces.face_of[cycle[0]];
    let mut queue = VecDeque::new();
    interior[seed] = true;
    queue.push_back(seed);
    while let Some(f) = queue.pop_front() {
        for &d in &faces.cycles[f] {
            if on_cycle.contains(&g.edge(d)) {
                continue;
            }
            let f2 = faces.face_of[g.twin(d)];
            if !interior[f2] {
                interior[f2] = true;
                queue.push_back(f2);
            }
        }
    }
    let exterior = interior.iter().map(|&b| !b).collect();
    Ok(CycleSides { interior, exterior })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Triangle with one interior pendant-free embedding: checks Euler count
    /// and the contour convention.
    #[test]
    fn triangle_faces() {
        // Vertices 0,1,2; edges 0:{0,1} 1:{1,2} 2:{2,0}. CCW rotations chosen
        // so the triangle is drawn with vertex order 0,1,2 counterclockwise.
        let g = PlaneGraph::new(
            3,
            &[(0, 1), (1, 2), (2, 0)],
            &[vec![0, 2], vec![1, 0], vec![2, 1]],
        )
        .unwrap();
        let faces = compute_faces(&g);
        assert_eq!(faces.face_count(), 2);
        assert_eq!(g.vertex_count() + faces.face_count(), g.edge_count() + 2);
        // Each facial cycle has length 3 and keeps its face on the right.
        for cyc in &faces.cycles {
            assert_eq!(cyc.len(), 3);
        }
    }

    #[test]
    fn rejects_empty_and_disconnected() {
        assert_eq!(
            PlaneGraph::new(0, &[], &[]).unwrap_err(),
            GraphError::EmptyGraph
        );
        let err = PlaneGraph::new(2, &[], &[vec![], vec![]]).unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
    }

    #[test]
    fn rejects_degree_five() {
        let edges = [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1)];
        let err = PlaneGraph::new(
            2,
            &edges,
            &[vec![0, 1, 2, 3, 4], vec![4, 3, 2, 1, 0]],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::DegreeTooHigh(0, 5)));
    }

    #[test]
    fn biconnectivity() {
        // Path 0-1-2 has a cut vertex.
        let path = PlaneGraph::new(3, &[(0, 1), (1, 2)], &[vec![0], vec![0, 1], vec![1]]).unwrap();
        assert!(!path.is_biconnected());
        // Triangle is biconnected.
        let tri = PlaneGraph::new(
            3,
            &[(0, 1), (1, 2), (2, 0)],
            &[vec![0, 2], vec![1, 0], vec![2, 1]],
        )
        .unwrap();
        assert!(tri.is_biconnected());
    }
}
