//! Hand-built worked instances used throughout the test suites.
//!
//! Each fixture is a small representation whose combinatorics were verified
//! by hand (facial cycles, rotations, segment structure, labels). Vertex
//! naming follows a polar layout: "columns" are angular positions, "rings"
//! are radii, east is clockwise.

use std::collections::HashMap;

use crate::compass::{build_rep, CompassEdge};
use crate::graph::{DartId, PlaneGraph, Vertex};
use crate::rep::{OrthoRadialRep, EAST, NORTH, SOUTH, WEST};

/// A fixture: the representation, the canonical reference dart, and a map
/// from `(u, v)` vertex pairs to dart ids for test lookups.
pub struct Fixture {
    pub rep: OrthoRadialRep,
    pub reference: DartId,
    pub darts: HashMap<(Vertex, Vertex), DartId>,
}

fn assemble(
    n: usize,
    edges: Vec<CompassEdge>,
    central: (usize, bool),
    outer: (usize, bool),
    reference: (usize, bool),
) -> Fixture {
    let rep = build_rep(n, &edges, central, outer).expect("fixture must be valid");
    let mut darts = HashMap::new();
    for (e, ce) in edges.iter().enumerate() {
        darts.insert((ce.u, ce.v), 2 * e);
        darts.insert((ce.v, ce.u), 2 * e + 1);
    }
    let (e, fwd) = reference;
    Fixture {
        rep,
        reference: if fwd { 2 * e } else { 2 * e + 1 },
        darts,
    }
}

/// Nested-rings instance with fourteen vertices: an outer ring, two partial
/// inner arcs and an innermost arc, joined by seven vertical edges.
///
/// Vertex indices are the 1-based names minus one. Worked facts:
/// the central facial cycle is `(v10, v11, v12, v13, v14)` with rotation 0,
/// the segment through `(v10, v9, v2)` has souths
/// `((v11,v10), (v8,v9), (v3,v2))` and norths `((v10,v14), (v2,v1))`.
pub fn nested_rings() -> Fixture {
    let e = |u: usize, v: usize, d: u8| CompassEdge::new(u - 1, v - 1, d);
    let edges = vec![
        // outer ring, ring 4 (edge ids 0..=5)
        e(14, 5, EAST),
        e(5, 1, EAST),
        e(1, 6, EAST),
        e(6, 7, EAST),
        e(7, 13, EAST),
        e(13, 14, EAST),
        // ring 3 arc (6, 7)
        e(10, 9, EAST),
        e(9, 2, EAST),
        // ring 2 arc (8, 9)
        e(8, 3, EAST),
        e(3, 4, EAST),
        // ring 1 arc (10)
        e(11, 12, EAST),
        // verticals (11..=17)
        e(10, 14, NORTH),
        e(2, 1, NORTH),
        e(11, 10, NORTH),
        e(8, 9, NORTH),
        e(3, 2, NORTH),
        e(12, 13, NORTH),
        e(4, 6, NORTH),
    ];
    // Central face: south of the east dart (v11 -> v12); outer: north of the
    // ring, i.e. the face of the west dart (v5 -> v14).
    assemble(14, edges, (10, true), (0, false), (0, true))
}

/// Ring plus an essential inner square: five outer vertices `v1..v5` and an
/// inner four-cycle `u1..u4` that winds around the centre, joined by two
/// vertical connectors. The inner cycle `(u1, u2, u3, u4)` is essential with
/// rotation 0 and label 1 on `(u1, u2)`.
pub fn essential_square() -> Fixture {
    // v1..v5 -> 0..4, u1..u4 -> 5..8.
    let v = |i: usize| i - 1;
    let u = |i: usize| 4 + i;
    let edges = vec![
        CompassEdge::new(v(1), v(2), EAST),
        CompassEdge::new(v(2), v(3), EAST),
        CompassEdge::new(v(3), v(4), EAST),
        CompassEdge::new(v(4), v(5), EAST),
        CompassEdge::new(v(5), v(1), EAST),
        CompassEdge::new(u(1), u(2), SOUTH),
        CompassEdge::new(u(2), u(3), EAST), // the long way around the centre
        CompassEdge::new(u(3), u(4), NORTH),
        CompassEdge::new(u(4), u(1), EAST),
        CompassEdge::new(u(1), v(4), NORTH),
        CompassEdge::new(u(4), v(2), NORTH),
    ];
    assemble(9, edges, (6, true), (0, false), (0, true))
}

/// Six-segment staircase used to exercise the greedy cover order: an outer
/// ring and five inner segments whose norths force the append order
/// S1..S6. After appending S2 the frontier is
/// `((v31,v11), (v32,v21), (v34,v23), (v35,v14))`.
pub fn staircase_cover() -> Fixture {
    // Index map: [11,12,13,14, 21,22,23, 31,32,33,34,35, 41,42,43,
    //             51,52,53,54,55, 61,62] -> 0..=21.
    let names = [
        11, 12, 13, 14, 21, 22, 23, 31, 32, 33, 34, 35, 41, 42, 43, 51, 52, 53, 54, 55, 61, 62,
    ];
    let idx = |name: usize| names.iter().position(|&x| x == name).unwrap();
    let e = |u: usize, v: usize, d: u8| CompassEdge::new(idx(u), idx(v), d);
    let edges = vec![
        // S1: outer ring, ring 6
        e(11, 12, EAST),
        e(12, 13, EAST),
        e(13, 14, EAST),
        e(14, 11, EAST),
        // S2: ring 5
        e(21, 22, EAST),
        e(22, 23, EAST),
        // S3: ring 4
        e(31, 32, EAST),
        e(32, 33, EAST),
        e(33, 34, EAST),
        e(34, 35, EAST),
        // S4: ring 3
        e(41, 42, EAST),
        e(42, 43, EAST),
        // S5: ring 2
        e(51, 52, EAST),
        e(52, 53, EAST),
        e(53, 54, EAST),
        e(54, 55, EAST),
        // S6: ring 1
        e(61, 62, EAST),
        // verticals
        e(21, 12, NORTH),
        e(22, 13, NORTH),
        e(31, 11, NORTH),
        e(35, 14, NORTH),
        e(32, 21, NORTH),
        e(34, 23, NORTH),
        e(41, 31, NORTH),
        e(42, 32, NORTH),
        e(43, 33, NORTH),
        e(54, 34, NORTH),
        e(55, 35, NORTH),
        e(51, 41, NORTH),
        e(52, 42, NORTH),
        e(61, 51, NORTH),
        e(62, 53, NORTH),
    ];
    assemble(22, edges, (16, true), (0, false), (0, true))
}

/// Reference-sensitive instance: a flat inner essential ring `v1..v10`
/// below a top arc `t1..t12` whose closing edge is replaced by a spiral
/// hook `t12, a, b, c, d, f, g, t1` that descends, doubles back west and
/// climbs again. Each ring vertex `vj` is tied to the top arc by an
/// S-shaped strut `t(j+1) - sj - wj - vj`. With the canonical reference
/// `(t1,t2)` the ring's labels are all 0 (flat, drawable); with the hook
/// dart `(d,f)` as reference they shift to all 1 and the ring becomes a
/// strictly increasing certificate.
pub fn spiral_hook() -> Fixture {
    // v1..v10 -> 0..9; t1..t12 -> 10..21; a,b,c,d,f,g -> 22..27;
    // s1..s10 -> 28..37; w1..w10 -> 38..47.
    let t = |i: usize| 9 + i;
    let (a, b, c, d, f, g) = (22, 23, 24, 25, 26, 27);
    let mut edges = Vec::new();
    // inner ring (ids 0..=9)
    for j in 0..10 {
        edges.push(CompassEdge::new(j, (j + 1) % 10, EAST));
    }
    // top arc (ids 10..=20)
    for i in 1..12 {
        edges.push(CompassEdge::new(t(i), t(i + 1), EAST));
    }
    // spiral hook closing the outer contour (ids 21..=27)
    edges.push(CompassEdge::new(t(12), a, SOUTH));
    edges.push(CompassEdge::new(a, b, EAST));
    edges.push(CompassEdge::new(b, c, NORTH));
    edges.push(CompassEdge::new(c, d, WEST));
    edges.push(CompassEdge::new(d, f, NORTH));
    edges.push(CompassEdge::new(f, g, EAST));
    edges.push(CompassEdge::new(g, t(1), NORTH));
    // struts (ids 28..=57): t(j+2) - s(j+1) - w(j+1) - v(j+1) for j = 0..9
    for j in 0..10 {
        let (s, w) = (28 + j, 38 + j);
        edges.push(CompassEdge::new(s, t(j + 2), NORTH));
        edges.push(CompassEdge::new(s, w, EAST));
        edges.push(CompassEdge::new(j, w, NORTH));
    }
    assemble(48, edges, (0, true), (10, false), (10, true))
}

/// The alternate reference dart of [`spiral_hook`]: the north dart `(d, f)`
/// inside the hook, which is eligible and makes the inner ring strictly
/// increasing.
pub fn spiral_hook_alt_reference(fx: &Fixture) -> DartId {
    fx.darts[&(25, 26)]
}

/// Undrawable instance whose greedy cover sticks immediately with five
/// frontier hangs over a pentagonal central cycle.
///
/// The core is a single spiral run `v2, v3, v4, v5, v1, q2, q3` whose bottom
/// winding is the pentagon and whose south closing edge `(v1, v2)` is a
/// vertical inside the run itself, so the run can never become ready. Two
/// short gadget runs `g1w-g1e` and `g2w-g2e` sit between the windings, each
/// pinned by a north edge into the uncovered structure above it
/// (`g1w -> q2` and `g2w -> g1e`). After the outer ring is appended nothing
/// else is ready, and the frontier holds the five hangs
/// `(q3, g1e, g2e, v4, v5)`.
///
/// Worked facts (verified dart by dart): the five frontier paths have
/// rotation strings `[0,1,2,3,2]`, `[0,1,2,2]`, `[0,1,1,2,3,4,3,4,3,2]`
/// (ascending), then `[0,1,2]` and `[0,1,1,1,2]` (flat); the derived
/// subgraph contains the whole pentagon, the extracted certificate is
/// `(v1..v5)` with label 1 on `(v1, v2)` and 0 elsewhere, strictly
/// increasing.
pub fn pentagon_spiral() -> Fixture {
    // v1..v5 -> 0..4; q2, q3 -> 5, 6; g1w, g1e -> 7, 8; g2w, g2e -> 9, 10;
    // ring o1..o5 -> 11..15 (above q3, g1e, g2e, v4, v5 respectively).
    let (v1, v2, v3, v4, v5) = (0, 1, 2, 3, 4);
    let (q2, q3, g1w, g1e, g2w, g2e) = (5, 6, 7, 8, 9, 10);
    let edges = vec![
        // pentagon (ids 0..=4); (v1, v2) is the south closing edge
        CompassEdge::new(v2, v3, EAST),
        CompassEdge::new(v3, v4, EAST),
        CompassEdge::new(v4, v5, EAST),
        CompassEdge::new(v5, v1, EAST),
        CompassEdge::new(v1, v2, SOUTH),
        // upper winding of the spiral run (ids 5, 6)
        CompassEdge::new(v1, q2, EAST),
        CompassEdge::new(q2, q3, EAST),
        // gadget runs and their pinning verticals (ids 7..=10)
        CompassEdge::new(q2, g1w, SOUTH),
        CompassEdge::new(g1w, g1e, EAST),
        CompassEdge::new(g1e, g2w, SOUTH),
        CompassEdge::new(g2w, g2e, EAST),
        // hangs to the outer ring (ids 11..=15)
        CompassEdge::new(q3, 11, NORTH),
        CompassEdge::new(g1e, 12, NORTH),
        CompassEdge::new(g2e, 13, NORTH),
        CompassEdge::new(v4, 14, NORTH),
        CompassEdge::new(v5, 15, NORTH),
        // outer ring (ids 16..=20)
        CompassEdge::new(11, 12, EAST),
        CompassEdge::new(12, 13, EAST),
        CompassEdge::new(13, 14, EAST),
        CompassEdge::new(14, 15, EAST),
        CompassEdge::new(15, 11, EAST),
    ];
    // Central face: south of (v2 -> v3); outer: north of the ring;
    // reference: the ring dart (o1 -> o2).
    assemble(16, edges, (0, true), (16, false), (16, true))
}

/// Plane graph (no angles) with a pentagon, two pendants inside it and a
/// square blob outside, attached through a bridge. Used for crossing-free
/// walk tests and cycle sides.
pub fn pentagon_blob() -> (PlaneGraph, HashMap<(Vertex, Vertex), DartId>) {
    // v1..v11 -> 0..10. Edges listed with explicit ids.
    let vv = |i: usize| i - 1;
    let edges: Vec<(Vertex, Vertex)> = vec![
        (vv(1), vv(2)),   // 0
        (vv(2), vv(10)),  // 1
        (vv(10), vv(9)),  // 2
        (vv(9), vv(5)),   // 3
        (vv(5), vv(1)),   // 4
        (vv(5), vv(6)),   // 5 bridge
        (vv(6), vv(3)),   // 6
        (vv(3), vv(4)),   // 7
        (vv(4), vv(7)),   // 8
        (vv(7), vv(6)),   // 9
        (vv(9), vv(8)),   // 10 pendant
        (vv(9), vv(11)),  // 11 pendant
    ];
    // Counterclockwise rotations from the worked drawing; E(v9) is
    // ({9,5},{9,8},{9,11},{9,10}).
    let rotations: Vec<Vec<usize>> = vec![
        vec![0, 4],        // v1: to v2, to v5
        vec![0, 1],        // v2: to v1, to v10
        vec![7, 6],        // v3: to v4, to v6
        vec![8, 7],        // v4: to v7, to v3
        vec![5, 4, 3],     // v5: to v6, to v1, to v9
        vec![9, 5, 6],     // v6: to v7, to v5, to v3
        vec![9, 8],        // v7: to v6, to v4
        vec![10],          // v8
        vec![3, 10, 11, 2],// v9: to v5, to v8, to v11, to v10
        vec![2, 1],        // v10: to v9, to v2
        vec![11],          // v11
    ];
    let g = PlaneGraph::new(11, &edges, &rotations).unwrap();
    let mut darts = HashMap::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        darts.insert((u + 1, v + 1), 2 * e);
        darts.insert((v + 1, u + 1), 2 * e + 1);
    }
    (g, darts)
}
