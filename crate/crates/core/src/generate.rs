//! Graph and batch generators for fixtures, verification and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, VertexId};
use crate::partition::{StatePartition, UpdateBatch};

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((n - 1, 0));
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Vertex 0 is the center.
pub fn star(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// G(n, p): each of the `C(n, 2)` edges present independently.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Graph on `n` vertices whose edges are the set bits of `mask` over the
/// pairs `(u, v)`, `u < v`, in lexicographic order.
pub fn from_edge_mask(n: usize, mask: u64) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e)
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Partition with exactly `n_off` off vertices chosen uniformly.
pub fn random_partition<R: Rng + ?Sized>(n: usize, n_off: usize, rng: &mut R) -> StatePartition {
    let mut vs: Vec<VertexId> = (0..n).collect();
    vs.shuffle(rng);
    StatePartition::from_off(n, &vs[..n_off.min(n)]).unwrap()
}

/// Batch with `deactivate` vertices from `V_on` and `activate` from `V_off`,
/// clamped to what the partition allows.
pub fn random_batch<R: Rng + ?Sized>(
    p: &StatePartition,
    deactivate: usize,
    activate: usize,
    rng: &mut R,
) -> UpdateBatch {
    let d = p
        .on_vertices()
        .choose_multiple(rng, deactivate.min(p.n_on()))
        .copied()
        .collect();
    let i = p
        .off_vertices()
        .choose_multiple(rng, activate.min(p.n_off()))
        .copied()
        .collect();
    UpdateBatch::new(d, i).unwrap()
}
