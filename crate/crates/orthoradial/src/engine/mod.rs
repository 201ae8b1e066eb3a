//! Greedy horizontal-segment cover engine.
//!
//! Starting from the reference segment (a ring after preprocessing), the
//! engine repeatedly appends segments all of whose north edges currently
//! hang consecutively from the frontier, the circular west-to-east sequence
//! of dangling north darts. Segments without north edges are reached by
//! inserting a virtual vertical edge from a subdivision of a covered edge
//! down to a subdivision of the segment; eligible insertion points are
//! found in per-face buckets keyed by rotation coordinates, which makes
//! each query logarithmic. The run either covers every segment, proving the
//! instance drawable for the chosen reference, or gets stuck with a
//! frontier from which a strictly monotone essential cycle is extracted.

pub mod workgraph;

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::graph::{DartId, Vertex};
use crate::rep::{EAST, NORTH, SOUTH, WEST};
use workgraph::{Origin, WorkGraph};

const NIL: usize = usize::MAX;

/// A horizontal segment of the working graph.
#[derive(Debug, Clone)]
pub struct Seg {
    /// West end of a path, or anchor vertex of a ring.
    pub west: Vertex,
    pub is_cycle: bool,
    /// North out-darts, west to east. For a segment that received a virtual
    /// hook this is the single virtual dart.
    pub norths: Vec<DartId>,
}

/// Work counters for complexity measurements.
#[derive(Debug, Clone, Copy, Default)]
pub struct Counters {
    pub appends: u64,
    pub splices: u64,
    pub queries: u64,
    pub bucket_moves: u64,
    pub face_splits: u64,
    pub virtual_edges: u64,
}

/// How a run ended.
#[derive(Debug)]
pub enum Outcome {
    /// Every segment was covered; the recorded append order admits a
    /// drawing.
    Covered,
    /// No segment is ready and segments remain; the frontier darts are
    /// given in circular west-to-east order.
    Stuck { frontier: Vec<DartId> },
}

/// Final engine state: the (extended) working graph, the segment table,
/// the append order, and the outcome.
#[derive(Debug)]
pub struct RunResult {
    pub wg: WorkGraph,
    pub segs: Vec<Seg>,
    pub s1: usize,
    pub reference: DartId,
    pub order: Vec<usize>,
    pub counters: Counters,
    pub outcome: Outcome,
    /// A dart whose right-hand face is the central face of the final
    /// working graph.
    pub central_dart: DartId,
    /// Frontier snapshots per append when tracing was requested.
    pub trace: Option<Vec<(usize, Vec<DartId>)>>,
}

/// Runs the cover engine on a prepared working graph.
pub fn run(wg: WorkGraph, reference: DartId, central_dart: DartId) -> RunResult {
    Engine::new(wg, reference, central_dart).run()
}

/// As [`run`], but also records the frontier after every append (meant for
/// small instances; snapshots cost linear time each).
pub fn run_traced(
    wg: WorkGraph,
    reference: DartId,
    central_dart: DartId,
) -> (RunResult, Vec<(usize, Vec<DartId>)>) {
    let mut engine = Engine::new(wg, reference, central_dart);
    engine.trace = Some(Vec::new());
    let mut res = engine.run();
    let trace = res.trace.take().unwrap();
    (res, trace)
}

struct Engine {
    wg: WorkGraph,
    reference: DartId,
    segs: Vec<Seg>,
    seg_of: Vec<usize>,
    covered_v: Vec<bool>,
    seg_covered: Vec<bool>,
    covered_count: usize,
    // Frontier: circular doubly linked list over dart ids.
    next: Vec<DartId>,
    prev: Vec<DartId>,
    on: Vec<bool>,
    fsize: usize,
    // Readiness tracking.
    north_pos: HashMap<DartId, (usize, usize)>,
    cnt_on: Vec<usize>,
    adj: Vec<usize>,
    linked: Vec<Vec<bool>>,
    in_w: Vec<bool>,
    ready_queue: VecDeque<usize>,
    // Face coordinates and candidate buckets.
    face: Vec<usize>,
    rot: Vec<i64>,
    idx: Vec<i64>,
    buckets: Vec<HashMap<i64, BTreeMap<i64, DartId>>>,
    key_seg: HashMap<DartId, usize>,
    central_face: usize,
    counters: Counters,
    order: Vec<usize>,
    s1: usize,
    trace: Option<Vec<(usize, Vec<DartId>)>>,
}

enum Work {
    Query(DartId),
    Insert(DartId),
}

impl Engine {
    fn new(wg: WorkGraph, reference: DartId, central_dart: DartId) -> Self {
        let nv = wg.vertex_count();
        let nd = wg.dart_count();

        // Horizontal segments: first all paths (vertices without a west
        // port), then the remaining rings.
        let mut seg_of = vec![NIL; nv];
        let mut segs: Vec<Seg> = Vec::new();
        let mut last_easts: Vec<Option<DartId>> = Vec::new();
        let scan = |start: Vertex,
                        is_cycle: bool,
                        wg: &WorkGraph,
                        seg_of: &mut Vec<usize>,
                        segs: &mut Vec<Seg>,
                        last_easts: &mut Vec<Option<DartId>>| {
            let id = segs.len();
            let mut norths = Vec::new();
            let mut last_east = None;
            let mut v = start;
            loop {
                seg_of[v] = id;
                if let Some(n) = wg.port(v, NORTH) {
                    norths.push(n);
                }
                match wg.port(v, EAST) {
                    Some(e) => {
                        last_east = Some(e);
                        v = wg.head(e);
                        if v == start {
                            break;
                        }
                    }
                    None => break,
                }
            }
            segs.push(Seg {
                west: start,
                is_cycle,
                norths,
            });
            last_easts.push(last_east);
        };
        for v in 0..nv {
            if seg_of[v] == NIL && wg.port(v, WEST).is_none() {
                scan(v, false, &wg, &mut seg_of, &mut segs, &mut last_easts);
            }
        }
        for v in 0..nv {
            if seg_of[v] == NIL {
                scan(v, true, &wg, &mut seg_of, &mut segs, &mut last_easts);
            }
        }
        let s1 = seg_of[wg.tail(reference)];
        assert!(segs[s1].is_cycle, "reference segment must be a ring");
        assert!(
            segs[s1].norths.is_empty(),
            "reference segment must have no north edges"
        );
        segs[s1].west = wg.tail(reference);

        // Face coordinates: per dart, the containing face, the prefix
        // rotation from the face anchor, and the position index.
        let mut face = vec![NIL; nd];
        let mut rot = vec![0i64; nd];
        let mut idx = vec![0i64; nd];
        let mut buckets: Vec<HashMap<i64, BTreeMap<i64, DartId>>> = Vec::new();
        for d0 in 0..nd {
            if face[d0] != NIL {
                continue;
            }
            let fid = buckets.len();
            buckets.push(HashMap::new());
            let mut r = 0i64;
            let mut i = 0i64;
            let mut d = d0;
            loop {
                face[d] = fid;
                rot[d] = r;
                idx[d] = i;
                let nxt = wg.face_next(d);
                if nxt == d0 {
                    break;
                }
                r += wg.turn(d, nxt);
                i += 1;
                d = nxt;
            }
        }
        let central_face = face[central_dart];

        // Readiness bookkeeping and candidate registration.
        let mut north_pos = HashMap::new();
        let mut linked = Vec::with_capacity(segs.len());
        let mut key_seg = HashMap::new();
        for (s, seg) in segs.iter().enumerate() {
            for (i, &n) in seg.norths.iter().enumerate() {
                north_pos.insert(n, (s, i));
            }
            let pairs = if seg.is_cycle {
                seg.norths.len()
            } else {
                seg.norths.len().saturating_sub(1)
            };
            linked.push(vec![false; pairs]);
            if s != s1 && seg.norths.is_empty() {
                assert!(!seg.is_cycle, "only the reference ring may lack norths");
                let last = last_easts[s].expect("segment without any east edge");
                let key = wg.twin(last);
                buckets[face[key]]
                    .entry(rot[key])
                    .or_default()
                    .insert(idx[key], key);
                key_seg.insert(key, s);
            }
        }

        let cnt_on = vec![0; segs.len()];
        let adj = vec![0; segs.len()];
        Engine {
            reference,
            seg_of,
            covered_v: vec![false; nv],
            seg_covered: vec![false; segs.len()],
            covered_count: 0,
            next: vec![NIL; nd],
            prev: vec![NIL; nd],
            on: vec![false; nd],
            fsize: 0,
            north_pos,
            cnt_on,
            adj,
            linked,
            in_w: vec![false; segs.len()],
            ready_queue: VecDeque::new(),
            face,
            rot,
            idx,
            buckets,
            key_seg,
            central_face,
            counters: Counters::default(),
            order: Vec::new(),
            s1,
            trace: None,
            segs,
            wg,
        }
    }

    fn run(mut self) -> RunResult {
        let s1 = self.s1;
        self.append(s1);
        while let Some(s) = self.ready_queue.pop_front() {
            self.in_w[s] = false;
            if self.is_ready(s) {
                self.append(s);
            }
        }
        let outcome = if self.covered_count == self.segs.len() {
            Outcome::Covered
        } else {
            Outcome::Stuck {
                frontier: self.frontier_snapshot(),
            }
        };
        let central_dart = (0..self.wg.dart_count())
            .find(|&d| self.face[d] == self.central_face)
            .expect("central face never disappears");
        RunResult {
            wg: self.wg,
            segs: self.segs,
            s1: self.s1,
            reference: self.reference,
            order: self.order,
            counters: self.counters,
            outcome,
            central_dart,
            trace: self.trace,
        }
    }

    // ------------------------------------------------------------------
    // Frontier list with readiness triggers.

    fn frontier_snapshot(&self) -> Vec<DartId> {
        let mut out = Vec::with_capacity(self.fsize);
        if self.fsize == 0 {
            return out;
        }
        let start = (0..self.next.len())
            .find(|&d| self.on[d])
            .expect("nonempty frontier");
        let mut d = start;
        loop {
            out.push(d);
            d = self.next[d];
            if d == start {
                break;
            }
        }
        out
    }

    fn frontier_insert_after(&mut self, cursor: Option<DartId>, x: DartId) {
        if self.fsize == 0 {
            self.next[x] = x;
            self.prev[x] = x;
            self.on[x] = true;
            self.fsize = 1;
            self.status_changed(x, true);
            return;
        }
        let c = cursor.expect("insertion into a nonempty frontier needs a cursor");
        let n = self.next[c];
        self.next[c] = x;
        self.prev[x] = c;
        self.next[x] = n;
        self.prev[n] = x;
        self.on[x] = true;
        self.fsize += 1;
        self.status_changed(x, true);
        self.next_changed(c);
    }

    fn frontier_remove(&mut self, x: DartId) {
        debug_assert!(self.on[x]);
        let p = self.prev[x];
        let n = self.next[x];
        if self.fsize > 1 {
            self.next[p] = n;
            self.prev[n] = p;
        }
        self.on[x] = false;
        self.fsize -= 1;
        self.status_changed(x, false);
        if p != x {
            self.next_changed(p);
        }
    }

    fn status_changed(&mut self, d: DartId, now_on: bool) {
        if let Some(&(s, i)) = self.north_pos.get(&d) {
            if now_on {
                self.cnt_on[s] += 1;
            } else {
                self.cnt_on[s] -= 1;
            }
            let len = self.segs[s].norths.len();
            self.recompute_pair(s, i);
            self.recompute_pair(s, (i + len - 1) % len);
            self.maybe_enqueue(s);
        }
    }

    fn next_changed(&mut self, d: DartId) {
        if let Some(&(s, i)) = self.north_pos.get(&d) {
            self.recompute_pair(s, i);
            self.maybe_enqueue(s);
        }
    }

    fn recompute_pair(&mut self, s: usize, i: usize) {
        let seg = &self.segs[s];
        let len = seg.norths.len();
        let pairs = self.linked[s].len();
        if i >= pairs {
            return;
        }
        let a = seg.norths[i];
        let b = seg.norths[(i + 1) % len];
        let val = self.on[a] && self.on[b] && self.next[a] == b;
        if val != self.linked[s][i] {
            self.linked[s][i] = val;
            if val {
                self.adj[s] += 1;
            } else {
                self.adj[s] -= 1;
            }
        }
    }

    fn is_ready(&self, s: usize) -> bool {
        if self.seg_covered[s] {
            return false;
        }
        let seg = &self.segs[s];
        let len = seg.norths.len();
        if len == 0 {
            return false;
        }
        let want_adj = if seg.is_cycle { len } else { len - 1 };
        self.cnt_on[s] == len && self.adj[s] == want_adj
    }

    fn maybe_enqueue(&mut self, s: usize) {
        if !self.in_w[s] && self.is_ready(s) {
            self.in_w[s] = true;
            self.ready_queue.push_back(s);
        }
    }

    // ------------------------------------------------------------------
    // Appending a segment.

    fn segment_vertices(&self, s: usize) -> Vec<Vertex> {
        let seg = &self.segs[s];
        let mut verts = vec![seg.west];
        let mut v = seg.west;
        while let Some(e) = self.wg.port(v, EAST) {
            v = self.wg.head(e);
            if v == seg.west {
                break;
            }
            verts.push(v);
        }
        verts
    }

    fn append(&mut self, s: usize) {
        self.counters.appends += 1;
        self.order.push(s);
        self.seg_covered[s] = true;
        self.covered_count += 1;

        // Splice this segment's hangs out of the frontier.
        let norths = self.segs[s].norths.clone();
        let mut cursor = None;
        if !norths.is_empty() {
            self.counters.splices += 1;
            for w in norths.windows(2) {
                debug_assert_eq!(self.next[w[0]], w[1], "norths not consecutive");
            }
            let before = self.prev[norths[0]];
            for &n in &norths {
                self.north_pos.remove(&n);
                self.frontier_remove(n);
            }
            if self.segs[s].is_cycle {
                debug_assert_eq!(self.fsize, 0, "ring append must consume the frontier");
            }
            if self.fsize > 0 {
                cursor = Some(before);
            }
        } else {
            debug_assert_eq!(s, self.s1);
        }

        // Cover the vertices, then hang souths and drain east darts,
        // west to east.
        let verts = self.segment_vertices(s);
        for &v in &verts {
            self.covered_v[v] = true;
        }
        for &v in &verts {
            if let Some(sp) = self.wg.port(v, SOUTH) {
                let hang = self.wg.twin(sp);
                debug_assert!(!self.covered_v[self.wg.tail(hang)]);
                self.frontier_insert_after(cursor, hang);
                cursor = Some(hang);
            }
            if let Some(e) = self.wg.port(v, EAST) {
                cursor = self.drain(e, cursor);
            }
        }
        if self.trace.is_some() {
            let snap = self.frontier_snapshot();
            if let Some(trace) = self.trace.as_mut() {
                trace.push((s, snap));
            }
        }
    }

    /// Hooks every reachable north-empty segment below the covered east
    /// dart `e0`, inserting its virtual hang after `cursor`; returns the
    /// advanced cursor.
    fn drain(&mut self, e0: DartId, mut cursor: Option<DartId>) -> Option<DartId> {
        let mut stack = vec![Work::Query(e0)];
        while let Some(work) = stack.pop() {
            match work {
                Work::Insert(zw) => {
                    self.frontier_insert_after(cursor, zw);
                    cursor = Some(zw);
                }
                Work::Query(e) => {
                    if let Some((key, west_side)) = self.query(e) {
                        let (e2, zw) = self.surgery(e, key, west_side);
                        stack.push(Work::Query(e2));
                        stack.push(Work::Insert(zw));
                        stack.push(Work::Query(e));
                    }
                }
            }
        }
        cursor
    }

    // ------------------------------------------------------------------
    // Bucket queries and surgery.

    /// Looks for a candidate hookable under the covered east dart `e`.
    /// Returns the candidate key dart and whether the hook attaches at the
    /// candidate's east end (`true`, rotation bucket `r - 2`) or west end
    /// (`false`, rotation bucket `r + 2`).
    fn query(&mut self, e: DartId) -> Option<(DartId, bool)> {
        self.counters.queries += 1;
        let f = self.face[e];
        let r0 = self.rot[e];
        let i0 = self.idx[e];
        let b = &self.buckets[f];
        if f == self.central_face {
            if let Some(m) = b.get(&(r0 - 2)) {
                if let Some((_, &k)) = m.iter().next() {
                    return Some((k, true));
                }
            }
            if let Some(m) = b.get(&(r0 + 2)) {
                if let Some((_, &k)) = m.iter().next() {
                    return Some((k, false));
                }
            }
        } else {
            if let Some(m) = b.get(&(r0 - 2)) {
                if let Some((&i, &k)) = m.iter().next() {
                    if i < i0 {
                        return Some((k, true));
                    }
                }
            }
            if let Some(m) = b.get(&(r0 + 2)) {
                if let Some((&i, &k)) = m.iter().next_back() {
                    if i > i0 {
                        return Some((k, false));
                    }
                }
            }
        }
        None
    }

    /// Extends per-dart arrays after the working graph grew.
    fn grow(&mut self) {
        let nd = self.wg.dart_count();
        self.next.resize(nd, NIL);
        self.prev.resize(nd, NIL);
        self.on.resize(nd, false);
        self.face.resize(nd, NIL);
        self.rot.resize(nd, 0);
        self.idx.resize(nd, 0);
    }

    /// Inserts a virtual vertical edge from a subdivision of the covered
    /// east dart `e` down to a subdivision of the candidate behind `key`,
    /// splitting the shared face. Returns the east piece of `e` and the
    /// new northward hang dart.
    fn surgery(&mut self, e: DartId, key: DartId, east_end: bool) -> (DartId, DartId) {
        let c = self.key_seg.remove(&key).expect("stale candidate key");
        // Deregister the candidate before the structure changes.
        let fk = self.face[key];
        let slot = self.buckets[fk].get_mut(&self.rot[key]).unwrap();
        slot.remove(&self.idx[key]);
        if slot.is_empty() {
            self.buckets[fk].remove(&self.rot[key]);
        }
        self.counters.virtual_edges += 1;

        let shared_face = self.face[e];
        // Subdivide the covered edge at w; pieces inherit coordinates.
        let (w, e2) = self.wg.subdivide(e);
        self.grow();
        self.face[e2] = self.face[e];
        self.rot[e2] = self.rot[e];
        self.idx[e2] = self.idx[e];
        self.face[e2 ^ 1] = self.face[e ^ 1];
        self.rot[e2 ^ 1] = self.rot[e ^ 1];
        self.idx[e2 ^ 1] = self.idx[e ^ 1];
        self.covered_v.push(true);
        self.seg_of.push(self.seg_of[self.wg.tail(e)]);
        debug_assert_eq!(self.covered_v.len() - 1, w);

        // Subdivide the candidate's boundary edge at z: its last east edge
        // when hooking at the east end, its first east edge otherwise.
        let ec = if east_end {
            self.wg.twin(key)
        } else {
            self.wg
                .port(self.segs[c].west, EAST)
                .expect("candidate has an east edge")
        };
        let (z, ec2) = self.wg.subdivide(ec);
        self.grow();
        self.face[ec2] = self.face[ec];
        self.rot[ec2] = self.rot[ec];
        self.idx[ec2] = self.idx[ec];
        self.face[ec2 ^ 1] = self.face[ec ^ 1];
        self.rot[ec2 ^ 1] = self.rot[ec ^ 1];
        self.idx[ec2 ^ 1] = self.idx[ec ^ 1];
        self.covered_v.push(false);
        self.seg_of.push(c);
        debug_assert_eq!(self.covered_v.len() - 1, z);

        let zw = self
            .wg
            .add_edge(z, w, NORTH, Origin::GreedyVirtual, Origin::GreedyVirtual);
        self.grow();
        // Vertical darts carry placeholder coordinates; they are never
        // queried and never serve as keys.
        for d in [zw, zw ^ 1] {
            self.face[d] = shared_face;
            self.rot[d] = self.rot[e];
            self.idx[d] = self.idx[e];
        }

        // The candidate now hangs from the single virtual dart.
        self.segs[c].norths = vec![zw];
        self.linked[c] = Vec::new();
        self.north_pos.insert(zw, (c, 0));

        self.split_face(shared_face, zw);
        (e2, zw)
    }

    /// Splits `f` along the new vertical edge whose northward dart is
    /// `zw`, rebuilding the coordinates of the smaller (or non-central)
    /// side as a fresh face.
    fn split_face(&mut self, f: usize, zw: DartId) {
        self.counters.face_splits += 1;
        let a0 = zw; // east side of the cut
        let b0 = zw ^ 1; // west side of the cut
        let mut list_a = vec![a0];
        let mut list_b = vec![b0];
        let mut rot_a = 0i64;
        let mut rot_b = 0i64;
        let mut cur_a = a0;
        let mut cur_b = b0;
        let (closed, closed_rot, open_start) = loop {
            let na = self.wg.face_next(cur_a);
            rot_a += self.wg.turn(cur_a, na);
            if na == a0 {
                break (list_a, rot_a, b0);
            }
            list_a.push(na);
            cur_a = na;
            let nb = self.wg.face_next(cur_b);
            rot_b += self.wg.turn(cur_b, nb);
            if nb == b0 {
                break (list_b, rot_b, a0);
            }
            list_b.push(nb);
            cur_b = nb;
        };
        if f != self.central_face {
            self.rebuild_face(&closed);
            return;
        }
        // A split of the central face leaves exactly one central side
        // (rotation 0); the other side is a regular face (rotation 4).
        if closed_rot == 4 {
            self.rebuild_face(&closed);
        } else {
            debug_assert_eq!(closed_rot, 0, "central split sides must be 0 and 4");
            let mut other = vec![open_start];
            let mut cur = open_start;
            loop {
                let n = self.wg.face_next(cur);
                if n == open_start {
                    break;
                }
                other.push(n);
                cur = n;
            }
            self.rebuild_face(&other);
        }
    }

    /// Assigns a fresh face id and fresh coordinates to `cycle`, moving any
    /// registered candidate keys into the new face's buckets.
    fn rebuild_face(&mut self, cycle: &[DartId]) {
        let nf = self.buckets.len();
        self.buckets.push(HashMap::new());
        let mut r = 0i64;
        for (i, &d) in cycle.iter().enumerate() {
            if self.key_seg.contains_key(&d) {
                let of = self.face[d];
                let slot = self.buckets[of].get_mut(&self.rot[d]).unwrap();
                slot.remove(&self.idx[d]);
                if slot.is_empty() {
                    self.buckets[of].remove(&self.rot[d]);
                }
                self.counters.bucket_moves += 1;
                self.face[d] = nf;
                self.rot[d] = r;
                self.idx[d] = i as i64;
                self.buckets[nf].entry(r).or_default().insert(i as i64, d);
            } else {
                self.face[d] = nf;
                self.rot[d] = r;
                self.idx[d] = i as i64;
            }
            let nxt = cycle[(i + 1) % cycle.len()];
            r += self.wg.turn(d, nxt);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::preprocess::prepare;

    fn run_fixture(fx: &fixtures::Fixture, reference: DartId) -> RunResult {
        let p = prepare(&fx.rep, reference).unwrap();
        run(p.wg, p.reference, p.central_dart)
    }

    #[test]
    fn nested_rings_covered() {
        let fx = fixtures::nested_rings();
        let res = run_fixture(&fx, fx.reference);
        assert!(matches!(res.outcome, Outcome::Covered));
        assert_eq!(res.order.len(), res.segs.len());
        res.wg.check_consistency().unwrap();
    }

    #[test]
    fn staircase_covered_in_six_appends() {
        let fx = fixtures::staircase_cover();
        let res = run_fixture(&fx, fx.reference);
        assert!(matches!(res.outcome, Outcome::Covered));
        assert_eq!(res.segs.len(), 6);
        assert_eq!(res.order.len(), 6);
    }

    #[test]
    fn spiral_hook_drawable_at_canonical_reference() {
        let fx = fixtures::spiral_hook();
        let res = run_fixture(&fx, fx.reference);
        assert!(matches!(res.outcome, Outcome::Covered));
    }

    #[test]
    fn spiral_hook_stuck_at_alternate_reference() {
        let fx = fixtures::spiral_hook();
        let alt = fixtures::spiral_hook_alt_reference(&fx);
        let res = run_fixture(&fx, alt);
        match res.outcome {
            Outcome::Stuck { ref frontier } => {
                assert!(!frontier.is_empty());
            }
            Outcome::Covered => panic!("expected a stuck run"),
        }
    }
}
