//! Seeded random instance generation.
//!
//! Drawable instances are built directly as drawings on a discrete
//! cylindrical grid: nested rings of occupied columns joined by same-column
//! radial connectors, which cannot cross by construction. Reading compass
//! directions off that grid yields a representation that is valid and
//! drawable by construction. Candidate non-drawable instances are produced
//! by rotating the direction of random edges a quarter turn: the four
//! corner angles around a rotated edge are adjusted in a pattern that keeps
//! every vertex sum at 360° and every facial rotation unchanged, so only
//! the monotone-cycle condition can break.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compass::{build_rep, CompassEdge};
use crate::graph::DartId;
use crate::rep::{AngleAssignment, OrthoRadialRep, RepError, EAST, NORTH};

/// Parameters for the cylindrical grid generator.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorParams {
    pub seed: u64,
    /// Number of concentric rings, outermost first.
    pub layers: usize,
    /// Columns of the outermost ring; inner rings occupy nested subsets of
    /// at least three columns.
    pub columns: usize,
    /// Quarter-turn edge rotations applied to the perturbed variant.
    pub perturbations: usize,
}

/// A generated instance with its canonical reference dart.
#[derive(Debug, Clone)]
pub struct Generated {
    pub rep: OrthoRadialRep,
    pub reference: DartId,
}

/// Errors from generation.
#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("need at least 1 layer and 3 columns, got {0} layers, {1} columns")]
    InfeasibleParams(usize, usize),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Builds a drawable instance: nested rings with all radial connectors.
pub fn generate_instance(params: GeneratorParams) -> Result<Generated, GenError> {
    if params.layers == 0 || params.columns < 3 {
        return Err(GenError::InfeasibleParams(params.layers, params.columns));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    // Nested occupied column sets, outermost (all columns) first.
    let mut occupied: Vec<Vec<usize>> = vec![(0..params.columns).collect()];
    for _ in 1..params.layers {
        let prev = occupied.last().unwrap();
        let size = rng.gen_range(3..=prev.len());
        let mut cols: Vec<usize> = prev
            .choose_multiple(&mut rng, size)
            .copied()
            .collect();
        cols.sort_unstable();
        occupied.push(cols);
    }
    // Vertex ids in (layer, column) order.
    let mut id_of = vec![vec![usize::MAX; params.columns]; params.layers];
    let mut n = 0usize;
    for (i, cols) in occupied.iter().enumerate() {
        for &c in cols {
            id_of[i][c] = n;
            n += 1;
        }
    }
    let mut edges = Vec::new();
    let mut ring_first_edge = vec![0usize; params.layers];
    for (i, cols) in occupied.iter().enumerate() {
        ring_first_edge[i] = edges.len();
        // Columns grow clockwise, so consecutive occupied columns are
        // joined by east arcs.
        let k = cols.len();
        for j in 0..k {
            edges.push(CompassEdge::new(
                id_of[i][cols[j]],
                id_of[i][cols[(j + 1) % k]],
                EAST,
            ));
        }
        // Radial connector per occupied column, toward the outer ring.
        if i > 0 {
            for &c in cols {
                edges.push(CompassEdge::new(id_of[i][c], id_of[i - 1][c], NORTH));
            }
        }
    }
    let central = (ring_first_edge[params.layers - 1], true);
    let outer = (ring_first_edge[0], false);
    let rep = build_rep(n, &edges, central, outer)?;
    Ok(Generated {
        rep,
        reference: 2 * ring_first_edge[0],
    })
}

/// Rotates the direction of random edges by one quarter turn each,
/// preserving all vertex angle sums and facial rotations. Returns the
/// perturbed representation, or the input unchanged when no rotation was
/// applicable (angles would leave the 90°..360° range).
pub fn perturb(rep: &OrthoRadialRep, seed: u64, rotations: usize) -> OrthoRadialRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = &rep.graph;
    let mut per_dart = rep.phi.per_dart.clone();
    let cw_prev = |d: DartId| {
        // The dart whose ccw successor at tail(d) is d.
        *g.rotation(g.tail(d))
            .iter()
            .find(|&&a| g.ccw_next(a) == d)
            .unwrap()
    };
    let mut applied = 0usize;
    let mut attempts = 0usize;
    while applied < rotations && attempts < 64 * rotations.max(1) {
        attempts += 1;
        let d = rng.gen_range(0..g.dart_count());
        let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let t = g.twin(d);
        let (pu, pv) = (cw_prev(d), cw_prev(t));
        // Degenerate at degree-1 endpoints (the rotation is a no-op there).
        if pu == d || pv == t {
            continue;
        }
        let bumps: [(DartId, i8); 4] = [(pu, sign), (d, -sign), (pv, sign), (t, -sign)];
        let ok = bumps.iter().all(|&(c, s)| {
            let a = per_dart[c] as i8 + s;
            (1..=4).contains(&a)
        });
        if !ok {
            continue;
        }
        for (c, s) in bumps {
            per_dart[c] = (per_dart[c] as i8 + s) as u8;
        }
        applied += 1;
    }
    let phi = AngleAssignment { per_dart };
    OrthoRadialRep::new(g.clone(), phi, rep.central, rep.outer)
        .expect("angle transfer preserves structural validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64, layers: usize, columns: usize) -> GeneratorParams {
        GeneratorParams {
            seed,
            layers,
            columns,
            perturbations: 0,
        }
    }

    #[test]
    fn single_layer_is_a_cycle() {
        let gen = generate_instance(params(7, 1, 5)).unwrap();
        assert_eq!(gen.rep.graph.vertex_count(), 5);
        assert_eq!(gen.rep.graph.edge_count(), 5);
        assert!(crate::oracle::drawable_for_reference(&gen.rep, gen.reference).unwrap());
    }

    #[test]
    fn seeds_reproduce_identical_instances() {
        let a = generate_instance(params(42, 4, 6)).unwrap();
        let b = generate_instance(params(42, 4, 6)).unwrap();
        assert_eq!(a.rep.phi.per_dart, b.rep.phi.per_dart);
        assert_eq!(a.rep.graph.vertex_count(), b.rep.graph.vertex_count());
        for v in 0..a.rep.graph.vertex_count() {
            assert_eq!(a.rep.graph.rotation(v), b.rep.graph.rotation(v));
        }
        let c = generate_instance(params(43, 4, 6)).unwrap();
        assert!(
            c.rep.graph.vertex_count() != a.rep.graph.vertex_count()
                || c.rep.phi.per_dart != a.rep.phi.per_dart
        );
    }

    #[test]
    fn generated_instances_are_valid_and_drawable() {
        for seed in 0..20 {
            let gen = generate_instance(params(seed, 3, 5)).unwrap();
            assert!(gen.rep.check_vertex_angles().is_empty());
            assert!(gen.rep.check_face_rotations().is_empty());
            assert!(crate::oracle::drawable_for_reference(&gen.rep, gen.reference).unwrap());
        }
    }

    #[test]
    fn perturbation_preserves_validity_and_can_break_drawability() {
        let mut saw_undrawable = false;
        let mut saw_drawable = false;
        for seed in 0..30 {
            let gen = generate_instance(params(seed, 3, 5)).unwrap();
            let p = perturb(&gen.rep, seed ^ 0x9e37, 2);
            assert!(p.check_vertex_angles().is_empty());
            assert!(p.check_face_rotations().is_empty());
            match crate::oracle::find_monotone_cycle(&p, gen.reference).unwrap() {
                Some(cert) => {
                    crate::rep::verify_certificate(&p, &cert).unwrap();
                    saw_undrawable = true;
                }
                None => saw_drawable = true,
            }
        }
        assert!(saw_undrawable, "no perturbation produced a monotone cycle");
        assert!(saw_drawable, "every perturbation produced a monotone cycle");
    }
}
