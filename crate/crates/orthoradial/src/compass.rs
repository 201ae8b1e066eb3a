//! Construction of representations from compass-annotated edge lists.
//!
//! Many test instances and the instance generator describe a drawing by
//! giving, for every edge, the compass direction its forward dart travels
//! in. Since valid corner angles make all out-dart directions at a vertex
//! distinct, the rotation system and the corner angles are both determined
//! by those directions: out-darts are sorted counterclockwise (east, north,
//! west, south) and each corner angle is the angular gap to the next.

use crate::graph::{DartId, PlaneGraph, Vertex};
use crate::rep::{AngleAssignment, OrthoRadialRep, RepError, EAST, NORTH, SOUTH, WEST};

/// An edge whose forward dart `u -> v` travels in compass direction `dir`.
#[derive(Debug, Clone, Copy)]
pub struct CompassEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub dir: u8,
}

impl CompassEdge {
    pub fn new(u: Vertex, v: Vertex, dir: u8) -> Self {
        CompassEdge { u, v, dir }
    }
}

/// Opposite compass direction.
pub fn opposite(dir: u8) -> u8 {
    (dir + 2) % 4
}

/// Counterclockwise position of a direction label: east, north, west,
/// south.
fn ccw_rank(dir: u8) -> usize {
    match dir {
        EAST => 0,
        NORTH => 1,
        WEST => 2,
        SOUTH => 3,
        _ => unreachable!(),
    }
}

/// An edge whose two darts are given independent direction labels: the
/// forward dart leaves `u` in direction `dir_u`, the reverse dart leaves `v`
/// in direction `dir_v`. This allows per-vertex local frames that need not
/// agree globally; since rotations and corner angles are purely local, the
/// result is still a well-defined representation.
#[derive(Debug, Clone, Copy)]
pub struct BidirEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub dir_u: u8,
    pub dir_v: u8,
}

/// Builds the plane graph and angle assignment determined by compass
/// directions. Fails if a vertex has two out-darts in the same direction.
pub fn build_graph(
    n: usize,
    edges: &[CompassEdge],
) -> Result<(PlaneGraph, AngleAssignment), RepError> {
    let bidir: Vec<BidirEdge> = edges
        .iter()
        .map(|ce| BidirEdge {
            u: ce.u,
            v: ce.v,
            dir_u: ce.dir,
            dir_v: opposite(ce.dir),
        })
        .collect();
    build_graph_bidir(n, &bidir)
}

/// As [`build_graph`], but with independent direction labels per endpoint.
pub fn build_graph_bidir(
    n: usize,
    edges: &[BidirEdge],
) -> Result<(PlaneGraph, AngleAssignment), RepError> {
    // Per vertex, collect (direction, edge id) of out-darts.
    let mut ports: Vec<Vec<(u8, usize)>> = vec![Vec::new(); n];
    for (e, ce) in edges.iter().enumerate() {
        if ce.u >= n || ce.v >= n {
            return Err(RepError::InvalidInput(format!(
                "edge {e} references a missing vertex"
            )));
        }
        ports[ce.u].push((ce.dir_u, e));
        ports[ce.v].push((ce.dir_v, e));
    }
    let mut rotations: Vec<Vec<usize>> = Vec::with_capacity(n);
    for (v, list) in ports.iter().enumerate() {
        let mut list = list.clone();
        let before = list.len();
        list.sort_by_key(|&(dir, _)| ccw_rank(dir));
        list.dedup_by_key(|&mut (dir, _)| dir);
        if list.len() != before {
            return Err(RepError::InvalidInput(format!(
                "vertex {v} has two edges in the same compass direction"
            )));
        }
        rotations.push(list.iter().map(|&(_, e)| e).collect());
    }
    let pairs: Vec<(Vertex, Vertex)> = edges.iter().map(|ce| (ce.u, ce.v)).collect();
    let g = PlaneGraph::new(n, &pairs, &rotations)?;
    // Corner angles: angular gap to the counterclockwise successor.
    let mut per_dart = vec![0u8; g.dart_count()];
    for v in 0..n {
        let order = g.rotation(v).to_vec();
        for (i, &d) in order.iter().enumerate() {
            let here = dart_dir(edges, d);
            let next = dart_dir(edges, order[(i + 1) % order.len()]);
            let gap = (ccw_rank(next) + 4 - ccw_rank(here)) % 4;
            per_dart[d] = if gap == 0 { 4 } else { gap as u8 };
        }
    }
    Ok((g, AngleAssignment { per_dart }))
}

fn dart_dir(edges: &[BidirEdge], d: DartId) -> u8 {
    let ce = edges[d / 2];
    if d.is_multiple_of(2) {
        ce.dir_u
    } else {
        ce.dir_v
    }
}

/// Builds a full representation; central and outer faces are designated by a
/// dart lying on their contour: `(edge index, forward)`.
pub fn build_rep(
    n: usize,
    edges: &[CompassEdge],
    central_dart: (usize, bool),
    outer_dart: (usize, bool),
) -> Result<OrthoRadialRep, RepError> {
    let (g, phi) = build_graph(n, edges)?;
    let dart = |(e, fwd): (usize, bool)| if fwd { 2 * e } else { 2 * e + 1 };
    let faces = crate::graph::compute_faces(&g);
    let central = faces.face_of[dart(central_dart)];
    let outer = faces.face_of[dart(outer_dart)];
    OrthoRadialRep::new(g, phi, central, outer)
}

/// As [`build_rep`], but from endpoint-local directions; the central and
/// outer faces are designated by darts given directly by id.
pub fn build_rep_bidir(
    n: usize,
    edges: &[BidirEdge],
    central_dart: DartId,
    outer_dart: DartId,
) -> Result<OrthoRadialRep, RepError> {
    let (g, phi) = build_graph_bidir(n, edges)?;
    let faces = crate::graph::compute_faces(&g);
    let central = faces.face_of[central_dart];
    let outer = faces.face_of[outer_dart];
    OrthoRadialRep::new(g, phi, central, outer)
}
