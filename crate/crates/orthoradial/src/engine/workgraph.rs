//! Growable dart-based working graph used by the greedy cover engine.
//!
//! Unlike [`crate::graph::PlaneGraph`], the working graph is mutable
//! (virtual edges and subdivision vertices are added during a run) and
//! stores the embedding as one port per compass direction per vertex: since
//! corner angles are at least 90 degrees, the outgoing darts of a vertex
//! have pairwise distinct direction classes, so the rotation order is
//! implied by the directions. Corner angles are likewise implicit.

use crate::graph::{DartId, Vertex};

/// Where a working-graph dart comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// A dart of the (possibly thickened) input graph, same orientation.
    Dart(DartId),
    /// A vertical edge replacing a smoothed chain (index into the chain
    /// table); the dart points north.
    ChainNorth(usize),
    /// As above, pointing south.
    ChainSouth(usize),
    /// The horizontal edge closing the outer segment into a ring.
    OuterVirtual,
    /// A vertical edge inserted by the greedy engine.
    GreedyVirtual,
}

/// Where a working-graph vertex comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    Original(Vertex),
    /// Subdivision midpoint created for a virtual edge; carries nothing.
    Midpoint,
}

const NO_PORT: usize = usize::MAX;

/// Mutable embedded graph with direction-labelled darts.
#[derive(Debug, Clone)]
pub struct WorkGraph {
    head: Vec<Vertex>,
    label: Vec<u8>,
    origin: Vec<Origin>,
    ports: Vec<[DartId; 4]>,
    vertex_origin: Vec<VertexOrigin>,
}

impl WorkGraph {
    pub fn new() -> Self {
        WorkGraph {
            head: Vec::new(),
            label: Vec::new(),
            origin: Vec::new(),
            ports: Vec::new(),
            vertex_origin: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.ports.len()
    }

    pub fn dart_count(&self) -> usize {
        self.head.len()
    }

    pub fn edge_count(&self) -> usize {
        self.head.len() / 2
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
    pub fn label(&self, d: DartId) -> u8 {
        self.label[d]
    }

    #[inline]
    pub fn origin(&self, d: DartId) -> Origin {
        self.origin[d]
    }

    #[inline]
    pub fn vertex_origin(&self, v: Vertex) -> VertexOrigin {
        self.vertex_origin[v]
    }

    /// Out-dart of `v` in direction `dir`, if present.
    #[inline]
    pub fn port(&self, v: Vertex, dir: u8) -> Option<DartId> {
        let d = self.ports[v][dir as usize];
        if d == NO_PORT {
            None
        } else {
            Some(d)
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.ports[v].iter().filter(|&&d| d != NO_PORT).count()
    }

    pub fn add_vertex(&mut self, origin: VertexOrigin) -> Vertex {
        self.ports.push([NO_PORT; 4]);
        self.vertex_origin.push(origin);
        self.ports.len() - 1
    }

    /// Adds an edge `u -> v` whose forward dart has direction `dir`; the
    /// twin gets the opposite direction. Both port slots must be free.
    pub fn add_edge(
        &mut self,
        u: Vertex,
        v: Vertex,
        dir: u8,
        origin_fwd: Origin,
        origin_rev: Origin,
    ) -> DartId {
        let d = self.head.len();
        let back = (dir + 2) % 4;
        self.head.push(v);
        self.head.push(u);
        self.label.push(dir);
        self.label.push(back);
        self.origin.push(origin_fwd);
        self.origin.push(origin_rev);
        assert_eq!(self.ports[u][dir as usize], NO_PORT, "port occupied");
        assert_eq!(self.ports[v][back as usize], NO_PORT, "port occupied");
        self.ports[u][dir as usize] = d;
        self.ports[v][back as usize] = d + 1;
        d
    }

    /// Splits the edge of `d` at a fresh midpoint `m`. The dart pair of `d`
    /// keeps its ids for the piece incident to `tail(d)`; a new dart pair is
    /// created for the piece incident to `head(d)`. Returns `(m, d2)` where
    /// `d2` is the new dart `m -> head(d)` (same direction as `d`).
    ///
    /// All external references to `d` remain the tail-side piece; references
    /// to `twin(d)` now denote the dart `m -> tail(d)`.
    pub fn subdivide(&mut self, d: DartId) -> (Vertex, DartId) {
        let v = self.head[d];
        let dir = self.label[d];
        let back = (dir + 2) % 4;
        let m = self.add_vertex(VertexOrigin::Midpoint);
        // New pair m -> v / v -> m.
        let d2 = self.head.len();
        self.head.push(v);
        self.head.push(m);
        self.label.push(dir);
        self.label.push(back);
        self.origin.push(self.origin[d]);
        self.origin.push(self.origin[d ^ 1]);
        // Rewire: d now heads at m; twin(d) leaves from m.
        self.head[d] = m;
        self.ports[m][back as usize] = d ^ 1;
        self.ports[m][dir as usize] = d2;
        // v's back port switches from twin(d) to twin(d2).
        debug_assert_eq!(self.ports[v][back as usize], d ^ 1);
        self.ports[v][back as usize] = d2 ^ 1;
        (m, d2)
    }

    /// Counterclockwise successor of `d` among the out-darts at `tail(d)`.
    /// Directions counterclockwise run east, north, west, south, i.e.
    /// decreasing label.
    pub fn ccw_next(&self, d: DartId) -> DartId {
        let v = self.tail(d);
        let l = self.label[d];
        for k in 1..4 {
            let cand = self.ports[v][((l + 4 - k) % 4) as usize];
            if cand != NO_PORT {
                return cand;
            }
        }
        d
    }

    /// Facial successor keeping the face on the right.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.ccw_next(self.twin(d))
    }

    /// Rotation contribution at the joint of consecutive darts:
    /// `+1` right, `0` straight, `-1` left, `-2` reversal.
    pub fn turn(&self, d1: DartId, d2: DartId) -> i64 {
        debug_assert_eq!(self.head(d1), self.tail(d2));
        match (self.label[d2] + 4 - self.label[d1]) % 4 {
            0 => 0,
            1 => 1,
            2 => -2,
            _ => -1,
        }
    }

    /// Rotation of a dart walk (`closed` adds the wrap-around turn).
    pub fn rotation(&self, walk: &[DartId], closed: bool) -> i64 {
        let mut total = 0;
        for i in 0..walk.len() - 1 {
            total += self.turn(walk[i], walk[i + 1]);
        }
        if closed {
            total += self.turn(walk[walk.len() - 1], walk[0]);
        }
        total
    }

    /// The facial cycle through `d` (contour on the right-hand side).
    pub fn facial_cycle(&self, d: DartId) -> Vec<DartId> {
        let mut cyc = vec![d];
        let mut cur = self.face_next(d);
        while cur != d {
            cyc.push(cur);
            cur = self.face_next(cur);
        }
        cyc
    }

    /// Sanity check: ports, twins, and labels are mutually consistent.
    pub fn check_consistency(&self) -> Result<(), String> {
        for v in 0..self.vertex_count() {
            for dir in 0..4u8 {
                if let Some(d) = self.port(v, dir) {
                    if self.tail(d) != v {
                        return Err(format!("port {dir} of {v} has wrong tail"));
                    }
                    if self.label[d] != dir {
                        return Err(format!("port {dir} of {v} has wrong label"));
                    }
                }
            }
        }
        for d in 0..self.dart_count() {
            if (self.label[d] + 2) % 4 != self.label[d ^ 1] {
                return Err(format!("dart {d} twin label mismatch"));
            }
            let v = self.tail(d);
            if self.ports[v][self.label[d] as usize] != d {
                return Err(format!("dart {d} not registered at its tail port"));
            }
        }
        Ok(())
    }
}

impl Default for WorkGraph {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{EAST, NORTH, SOUTH, WEST};

    fn square() -> WorkGraph {
        let mut g = WorkGraph::new();
        for _ in 0..4 {
            g.add_vertex(VertexOrigin::Original(0));
        }
        // Clockwise square: 0 -e- 1, 1 -s- 2, 2 -w- 3, 3 -n- 0.
        g.add_edge(0, 1, EAST, Origin::Dart(0), Origin::Dart(1));
        g.add_edge(1, 2, SOUTH, Origin::Dart(2), Origin::Dart(3));
        g.add_edge(2, 3, WEST, Origin::Dart(4), Origin::Dart(5));
        g.add_edge(3, 0, NORTH, Origin::Dart(6), Origin::Dart(7));
        g
    }

    #[test]
    fn square_faces_and_turns() {
        let g = square();
        g.check_consistency().unwrap();
        // Inner face (right of 0->1) has rotation 4.
        let cyc = g.facial_cycle(0);
        assert_eq!(cyc.len(), 4);
        assert_eq!(g.rotation(&cyc, true), 4);
        // Outer contour has rotation -4.
        let out = g.facial_cycle(1);
        assert_eq!(out.len(), 4);
        assert_eq!(g.rotation(&out, true), -4);
    }

    #[test]
    fn subdivision_keeps_structure() {
        let mut g = square();
        let (m, d2) = g.subdivide(0);
        g.check_consistency().unwrap();
        assert_eq!(g.head(0), m);
        assert_eq!(g.tail(d2), m);
        assert_eq!(g.head(d2), 1);
        assert_eq!(g.label(d2), EAST);
        let cyc = g.facial_cycle(0);
        assert_eq!(cyc.len(), 5);
        assert_eq!(g.rotation(&cyc, true), 4);
    }
}
