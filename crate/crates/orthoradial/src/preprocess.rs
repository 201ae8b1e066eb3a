//! Input preprocessing for the cover engine.
//!
//! Three transformations bring a valid representation into the shape the
//! greedy engine expects:
//!
//! * **Thickening** replaces every vertex by a 3x3 grid gadget and every
//!   edge by three parallel connector edges, turning any valid instance
//!   into a simple, biconnected one while preserving drawability. It is
//!   applied only when the input is not already simple and biconnected.
//! * **Smoothing** contracts maximal chains of degree-two vertices whose
//!   edges are all vertical into single vertical edges, so that every
//!   vertex of the working graph lies on a unique horizontal segment.
//! * **Closing the reference segment**: the horizontal segment containing
//!   the reference edge is turned into a ring by a virtual east edge from
//!   its east end back to its west end, unless it already is a ring.

use crate::compass::{build_rep_bidir, BidirEdge};
use crate::engine::workgraph::{Origin, VertexOrigin, WorkGraph};
use crate::graph::{DartId, Vertex};
use crate::rep::{OrthoRadialRep, RepError, EAST, NORTH, SOUTH, WEST};
use thiserror::Error;

/// Errors raised during preprocessing.
#[derive(Debug, Error)]
pub enum PrepError {
    #[error(transparent)]
    Rep(#[from] RepError),
    /// All vertices of some cycle have degree two with vertical edges only;
    /// such an instance has no horizontal segment structure to cover.
    #[error("graph contains a cycle of vertical edges through degree-two vertices")]
    VerticalCycle,
    /// A vertex of the reference segment has an edge leaving north, so the
    /// segment cannot bound the outer face; the reference is ineligible.
    #[error("reference segment has a north edge at vertex {0}")]
    NorthNotEmpty(Vertex),
}

/// A smoothed chain of vertical edges, recorded south to north.
#[derive(Debug, Clone)]
pub struct Chain {
    /// South endpoint in the input graph (kept in the working graph).
    pub south: Vertex,
    /// North endpoint in the input graph.
    pub north: Vertex,
    /// Interior degree-two vertices, south to north.
    pub inner: Vec<Vertex>,
    /// The northward input darts of the chain, south to north.
    pub darts: Vec<DartId>,
}

/// The working-graph form of an instance, ready for the cover engine.
#[derive(Debug)]
pub struct Prepared {
    pub wg: WorkGraph,
    /// Direction labels of the input darts for the chosen reference.
    pub labels: Vec<u8>,
    /// The reference dart in the working graph (east).
    pub reference: DartId,
    /// A working-graph dart whose right-hand face is the central face.
    pub central_dart: DartId,
    /// A working-graph dart whose right-hand face is the outer face.
    pub outer_dart: DartId,
    pub chains: Vec<Chain>,
    /// Input dart to working-graph dart (chain darts map to the chain edge).
    pub dart_map: Vec<DartId>,
    /// Input vertex to working-graph vertex (chain interiors map to the
    /// sentinel `usize::MAX`).
    pub vertex_map: Vec<Vertex>,
    /// Forward dart of the virtual edge closing the reference segment, if
    /// one was added.
    pub virtual_dart: Option<DartId>,
}

/// Builds the working graph for `rep` under the given reference dart.
pub fn prepare(rep: &OrthoRadialRep, reference: DartId) -> Result<Prepared, PrepError> {
    let g = &rep.graph;
    let labels = rep.classify_directions(reference)?;
    let n = g.vertex_count();

    // A vertex is smoothed away when its two darts run north and south.
    let smoothed: Vec<bool> = (0..n)
        .map(|v| {
            g.degree(v) == 2 && {
                let mut dirs: Vec<u8> = g.rotation(v).iter().map(|&d| labels[d]).collect();
                dirs.sort_unstable();
                dirs == [SOUTH, NORTH]
            }
        })
        .collect();

    // Collect maximal vertical chains, walking north from non-smoothed
    // tails into smoothed interiors.
    let mut chains: Vec<Chain> = Vec::new();
    let mut chain_of_dart: Vec<Option<usize>> = vec![None; g.dart_count()];
    let mut visited = vec![false; n];
    for d0 in 0..g.dart_count() {
        if labels[d0] != NORTH || smoothed[g.tail(d0)] || !smoothed[g.head(d0)] {
            continue;
        }
        let mut darts = vec![d0];
        let mut inner = Vec::new();
        let mut cur = g.head(d0);
        while smoothed[cur] {
            visited[cur] = true;
            inner.push(cur);
            let up = *g
                .rotation(cur)
                .iter()
                .find(|&&d| labels[d] == NORTH)
                .expect("smoothed vertex has a north dart");
            darts.push(up);
            cur = g.head(up);
        }
        for &d in &darts {
            chain_of_dart[d] = Some(chains.len());
            chain_of_dart[g.twin(d)] = Some(chains.len());
        }
        chains.push(Chain {
            south: g.tail(d0),
            north: cur,
            inner,
            darts,
        });
    }
    if (0..n).any(|v| smoothed[v] && !visited[v]) {
        return Err(PrepError::VerticalCycle);
    }

    // Build the working graph.
    let mut wg = WorkGraph::new();
    const NONE: usize = usize::MAX;
    let mut vertex_map = vec![NONE; n];
    for v in 0..n {
        if !smoothed[v] {
            vertex_map[v] = wg.add_vertex(VertexOrigin::Original(v));
        }
    }
    let mut dart_map = vec![NONE; g.dart_count()];
    for e in 0..g.edge_count() {
        let d = 2 * e;
        if chain_of_dart[d].is_some() {
            continue;
        }
        // Orient the working edge east or north.
        let fwd = if labels[d] == EAST || labels[d] == NORTH {
            d
        } else {
            g.twin(d)
        };
        let wd = wg.add_edge(
            vertex_map[g.tail(fwd)],
            vertex_map[g.head(fwd)],
            labels[fwd],
            Origin::Dart(fwd),
            Origin::Dart(g.twin(fwd)),
        );
        dart_map[fwd] = wd;
        dart_map[g.twin(fwd)] = wd ^ 1;
    }
    for (i, ch) in chains.iter().enumerate() {
        let wd = wg.add_edge(
            vertex_map[ch.south],
            vertex_map[ch.north],
            NORTH,
            Origin::ChainNorth(i),
            Origin::ChainSouth(i),
        );
        for &d in &ch.darts {
            dart_map[d] = wd;
            dart_map[g.twin(d)] = wd ^ 1;
        }
    }

    let rw = dart_map[reference];
    debug_assert_eq!(wg.label(rw), EAST);

    // Walk the reference segment and check its north side is free.
    let anchor = wg.tail(rw);
    let mut west = anchor;
    let mut is_ring = false;
    loop {
        if wg.port(west, NORTH).is_some() {
            let v = match wg.vertex_origin(west) {
                VertexOrigin::Original(v) => v,
                VertexOrigin::Midpoint => unreachable!(),
            };
            return Err(PrepError::NorthNotEmpty(v));
        }
        match wg.port(west, WEST) {
            Some(dw) => {
                west = wg.head(dw);
                if west == anchor {
                    is_ring = true;
                    break;
                }
            }
            None => break,
        }
    }
    let mut virtual_dart = None;
    if !is_ring {
        // Check the eastern part of the segment too, then close the ring.
        let mut east = anchor;
        while let Some(de) = wg.port(east, EAST) {
            east = wg.head(de);
            if wg.port(east, NORTH).is_some() {
                let v = match wg.vertex_origin(east) {
                    VertexOrigin::Original(v) => v,
                    VertexOrigin::Midpoint => unreachable!(),
                };
                return Err(PrepError::NorthNotEmpty(v));
            }
        }
        let dv = wg.add_edge(east, west, EAST, Origin::OuterVirtual, Origin::OuterVirtual);
        virtual_dart = Some(dv);
    }

    // The outer face lies north of the (now closed) reference segment. The
    // central face is designated through any dart of its input contour; when
    // the input central face coincides with the outer face, the virtual edge
    // has split it and the part south of the reference segment is central.
    let outer_dart = wg.twin(rw);
    let central_dart = if rep.central == rep.outer {
        rw
    } else {
        dart_map[rep.faces.cycles[rep.central][0]]
    };

    Ok(Prepared {
        wg,
        labels,
        reference: rw,
        central_dart,
        outer_dart,
        chains,
        dart_map,
        vertex_map,
        virtual_dart,
    })
}

/// Whether an instance needs thickening before the engine can run on it.
pub fn needs_thickening(rep: &OrthoRadialRep) -> bool {
    !rep.graph.is_simple() || !rep.graph.is_biconnected()
}

/// Mapping data from a thickened instance back to its original.
#[derive(Debug, Clone)]
pub struct ThickenMap {
    /// Connector edge ids per input edge, ordered left, middle, right as
    /// seen along the forward dart.
    edge_conn: Vec<[usize; 3]>,
    orig_vertex_count: usize,
}

impl ThickenMap {
    /// Gadget center vertex of an input vertex.
    pub fn center(&self, v: Vertex) -> Vertex {
        9 * v + 4
    }

    pub fn orig_vertex_count(&self) -> usize {
        self.orig_vertex_count
    }

    /// Parent input vertex of a thickened vertex.
    pub fn parent(&self, tv: Vertex) -> Vertex {
        tv / 9
    }

    /// Connector dart running along input dart `d` in lane 0 (left), 1
    /// (middle) or 2 (right), as seen facing along `d`.
    pub fn lane_dart(&self, d: DartId, lane: usize) -> DartId {
        let conn = self.edge_conn[d / 2];
        if d.is_multiple_of(2) {
            2 * conn[lane]
        } else {
            2 * conn[2 - lane] + 1
        }
    }

    /// The three-dart straight path replacing input dart `d`: from the tail
    /// gadget center through the middle connector to the head gadget center.
    pub fn mid_path(&self, g: &crate::graph::PlaneGraph, d: DartId, sides: &[u8]) -> [DartId; 3] {
        [
            center_out_dart(g.tail(d), sides[d]),
            self.lane_dart(d, 1),
            center_out_dart(g.head(d), sides[d ^ 1]) ^ 1,
        ]
    }
}

/// Local coordinates of a gadget cell: index `(i + 1) * 3 + (j + 1)` with
/// `i` the east offset and `j` the north offset.
fn cell(v: Vertex, i: i8, j: i8) -> Vertex {
    9 * v + ((i + 1) as usize) * 3 + ((j + 1) as usize)
}

/// Clockwise boundary triple of the gadget side facing direction `s`.
fn side_triple(v: Vertex, s: u8) -> [Vertex; 3] {
    match s {
        EAST => [cell(v, 1, 1), cell(v, 1, 0), cell(v, 1, -1)],
        SOUTH => [cell(v, 1, -1), cell(v, 0, -1), cell(v, -1, -1)],
        WEST => [cell(v, -1, -1), cell(v, -1, 0), cell(v, -1, 1)],
        NORTH => [cell(v, -1, 1), cell(v, 0, 1), cell(v, 1, 1)],
        _ => unreachable!(),
    }
}

/// Out-dart from the gadget center towards side `s` (a grid dart).
fn center_out_dart(v: Vertex, s: u8) -> DartId {
    let base = 12 * v;
    match s {
        // Horizontal grid edge (0,0)-(1,0) forward; (-1,0)-(0,0) reverse.
        EAST => 2 * (base + 4),
        WEST => 2 * (base + 1) + 1,
        // Vertical grid edge (0,0)-(0,1) forward; (0,-1)-(0,0) reverse.
        NORTH => 2 * (base + 9),
        SOUTH => 2 * (base + 8) + 1,
        _ => unreachable!(),
    }
}

/// Result of thickening: the new representation, the mapped reference, and
/// the back-mapping data.
pub struct Thickened {
    pub rep: OrthoRadialRep,
    pub reference: DartId,
    pub map: ThickenMap,
    /// Gadget side used by each input dart at its tail.
    pub sides: Vec<u8>,
}

/// Replaces each vertex by a 3x3 grid gadget and each edge by three parallel
/// connectors, producing a simple biconnected representation that is
/// drawable if and only if the input is.
pub fn thicken(rep: &OrthoRadialRep, reference: DartId) -> Result<Thickened, RepError> {
    let g = &rep.graph;
    let n = g.vertex_count();

    // Assign each out-dart a gadget side in its tail's local frame: the
    // first dart of the rotation faces east and each counterclockwise
    // successor is rotated by the corner angle.
    let mut sides = vec![0u8; g.dart_count()];
    for v in 0..n {
        let order = g.rotation(v);
        let mut s = EAST;
        for &d in order {
            sides[d] = s;
            let a = rep.phi.angle(d) as u8;
            s = (s + 8 - a) % 4;
        }
    }

    // Grid edges: twelve per vertex, in a fixed order so dart ids are
    // predictable: six horizontal, then six vertical.
    let mut edges: Vec<BidirEdge> = Vec::with_capacity(12 * n + 3 * g.edge_count());
    for v in 0..n {
        for i in [-1i8, 0] {
            for j in [-1i8, 0, 1] {
                edges.push(BidirEdge {
                    u: cell(v, i, j),
                    v: cell(v, i + 1, j),
                    dir_u: EAST,
                    dir_v: WEST,
                });
            }
        }
        for i in [-1i8, 0, 1] {
            for j in [-1i8, 0] {
                edges.push(BidirEdge {
                    u: cell(v, i, j),
                    v: cell(v, i, j + 1),
                    dir_u: NORTH,
                    dir_v: SOUTH,
                });
            }
        }
    }

    // Connector edges: three per input edge. Pair the clockwise boundary
    // triple at the tail with the reversed triple at the head; index 0 is
    // the left lane of the forward dart.
    let mut edge_conn = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let d = 2 * e;
        let (u, v) = (g.tail(d), g.head(d));
        let (s_u, s_v) = (sides[d], sides[d ^ 1]);
        let pu = side_triple(u, s_u);
        let pv = side_triple(v, s_v);
        let mut ids = [0usize; 3];
        for k in 0..3 {
            ids[k] = edges.len();
            edges.push(BidirEdge {
                u: pu[k],
                v: pv[2 - k],
                dir_u: s_u,
                dir_v: s_v,
            });
        }
        edge_conn.push(ids);
    }

    let map = ThickenMap {
        edge_conn,
        orig_vertex_count: n,
    };

    // Face designators transfer through the right lane (same right-hand
    // face); the reference transfers through the left lane (same left-hand
    // face, the outer face).
    let central_in = rep.faces.cycles[rep.central][0];
    let outer_in = rep.faces.cycles[rep.outer][0];
    let rep2 = build_rep_bidir(
        9 * n,
        &edges,
        map.lane_dart(central_in, 2),
        map.lane_dart(outer_in, 2),
    )?;
    let reference2 = map.lane_dart(reference, 0);
    Ok(Thickened {
        rep: rep2,
        reference: reference2,
        map,
        sides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn prepare_ring_reference() {
        let fx = fixtures::nested_rings();
        let p = prepare(&fx.rep, fx.reference).unwrap();
        p.wg.check_consistency().unwrap();
        // The reference segment of this instance is already a ring.
        assert!(p.virtual_dart.is_none());
        assert_eq!(p.wg.label(p.reference), EAST);
        // The outer contour is essential (it wraps the cylinder), so its
        // rotation is zero.
        let outer_cycle = p.wg.facial_cycle(p.outer_dart);
        assert_eq!(p.wg.rotation(&outer_cycle, true), 0);
        let central_cycle = p.wg.facial_cycle(p.central_dart);
        // Central facial cycle of a valid instance has rotation 0.
        assert_eq!(p.wg.rotation(&central_cycle, true), 0);
    }

    #[test]
    fn prepare_path_reference_adds_virtual_edge() {
        let fx = fixtures::spiral_hook();
        let p = prepare(&fx.rep, fx.reference).unwrap();
        p.wg.check_consistency().unwrap();
        assert!(p.virtual_dart.is_some());
        let outer_cycle = p.wg.facial_cycle(p.outer_dart);
        assert_eq!(p.wg.rotation(&outer_cycle, true), 0);
        let central_cycle = p.wg.facial_cycle(p.central_dart);
        assert_eq!(p.wg.rotation(&central_cycle, true), 0);
    }

    #[test]
    fn smoothing_contracts_vertical_chains() {
        // A ring with a two-edge vertical spoke through a degree-two
        // vertex: the spoke becomes a single chain edge.
        use crate::compass::{build_rep, CompassEdge};
        let e = |u, v, d| CompassEdge::new(u, v, d);
        // Outer ring 0-1-2-3 (east), inner ring 4-5 (east/east), chain
        // 4 - 6 - 0 going north.
        let edges = vec![
            e(0, 1, EAST),
            e(1, 2, EAST),
            e(2, 3, EAST),
            e(3, 0, EAST),
            e(4, 5, EAST),
            e(5, 4, EAST),
            e(4, 6, NORTH),
            e(6, 0, NORTH),
        ];
        let rep = build_rep(7, &edges, (4, true), (0, false)).unwrap();
        assert!(rep.check_vertex_angles().is_empty());
        assert!(rep.check_face_rotations().is_empty());
        let p = prepare(&rep, 0).unwrap();
        p.wg.check_consistency().unwrap();
        assert_eq!(p.chains.len(), 1);
        assert_eq!(p.chains[0].inner, vec![6]);
        assert_eq!(p.chains[0].south, 4);
        assert_eq!(p.chains[0].north, 0);
        assert_eq!(p.wg.vertex_count(), 6);
        assert_eq!(p.wg.edge_count(), 7);
    }

    #[test]
    fn thicken_produces_simple_biconnected_equivalent() {
        let fx = fixtures::spiral_hook();
        let n = fx.rep.graph.vertex_count();
        let m = fx.rep.graph.edge_count();
        let th = thicken(&fx.rep, fx.reference).unwrap();
        assert_eq!(th.rep.graph.vertex_count(), 9 * n);
        assert_eq!(th.rep.graph.edge_count(), 12 * n + 3 * m);
        assert!(th.rep.graph.is_simple());
        assert!(th.rep.graph.is_biconnected());
        assert!(th.rep.check_vertex_angles().is_empty());
        assert!(th.rep.check_face_rotations().is_empty());
        // The mapped reference still lies on the reversed outer contour.
        th.rep.classify_directions(th.reference).unwrap();
    }
}
