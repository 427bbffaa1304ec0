//! Synthetic graphs: 4-neighbour grids and sparse random connected graphs.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("requested {requested} edges but a connected graph on {n} vertices needs {}", .n - 1)]
    DensityBelowTree { n: usize, requested: usize },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}

/// Row-major `rows x cols` lattice with edges to the right and downward
/// neighbours, in canonical `(min, max)` sorted order.
pub fn grid_graph(rows: usize, cols: usize) -> Graph {
    assert!(rows >= 1 && cols >= 1, "grid needs at least one row and column");
    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).expect("grid edges are valid")
}

/// Connected random graph: a uniformly random labelled spanning tree (decoded
/// from a random Prüfer sequence) plus uniformly random extra edges until
/// `round((1 - sparsity) * n(n-1)/2)` edges exist.
pub fn random_sparse_graph(n: usize, sparsity: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::InvalidParameter(format!("n = {n}, need at least 2")));
    }
    if !(sparsity > 0.0 && sparsity < 1.0) {
        return Err(GeneratorError::InvalidParameter(format!("sparsity {sparsity} not in (0, 1)")));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (((1.0 - sparsity) * max_edges as f64).round() as usize).min(max_edges);
    if target < n - 1 {
        return Err(GeneratorError::DensityBelowTree { n, requested: target });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = random_tree(n, &mut rng);
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    while edges.len() < target {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if present.insert(e) {
            edges.push(e);
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_edges(n, &edges).expect("generated edges are valid"))
}

fn random_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    if n == 2 {
        return vec![(0, 1)];
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &p in &prufer {
        degree[p] += 1;
    }
    // Linear-time decoding: `leaf` is the smallest current leaf.
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).expect("a tree has leaves");
    let mut leaf = ptr;
    for &p in &prufer {
        edges.push((leaf.min(p), leaf.max(p)));
        degree[p] -= 1;
        if degree[p] == 1 && p < ptr {
            leaf = p;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf.min(n - 1), leaf.max(n - 1)));
    edges
}
