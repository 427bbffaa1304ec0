//! Trail decompositions: pseudo-tour, median trails, random trails, the
//! edge-wise baseline, and hand-built grid rows and columns.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::generators::grid_graph;
use crate::graph::{
    connected_components, eulerian_circuit, eulerian_trail, odd_degree_vertices, shortest_path,
    Graph, GraphError, SubGraph, Trail, TrailSet,
};

pub const DEFAULT_PAIR_SAMPLE_CAP: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph edges do not form a single connected component")]
    Disconnected,
    #[error("graph is not the {rows}x{cols} grid")]
    NotAGrid { rows: usize, cols: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    PseudoTour,
    MedianTrails,
    RandomTrails,
    EdgeWise,
    GridRowsCols { rows: usize, cols: usize },
}

impl StrategyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::PseudoTour => "pseudotour",
            StrategyKind::MedianTrails => "medians",
            StrategyKind::RandomTrails => "random",
            StrategyKind::EdgeWise => "edgewise",
            StrategyKind::GridRowsCols { .. } => "rowscols",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a strategy name. `rowscols` parses with zero dimensions; callers
/// fill them in with [`StrategyKind::with_grid`].
impl FromStr for StrategyKind {
    type Err = DecompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pseudotour" | "pseudo-tour" | "tour" => Ok(StrategyKind::PseudoTour),
            "medians" | "median" | "mediantrails" => Ok(StrategyKind::MedianTrails),
            "random" | "randomtrails" => Ok(StrategyKind::RandomTrails),
            "edgewise" | "edge-wise" | "edges" => Ok(StrategyKind::EdgeWise),
            "rowscols" | "rows+cols" | "rows-cols" => Ok(StrategyKind::GridRowsCols { rows: 0, cols: 0 }),
            other => Err(DecompositionError::InvalidStrategy(other.to_string())),
        }
    }
}

impl StrategyKind {
    pub fn with_grid(self, rows: usize, cols: usize) -> Self {
        match self {
            StrategyKind::GridRowsCols { .. } => StrategyKind::GridRowsCols { rows, cols },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionStrategy {
    pub kind: StrategyKind,
    pub seed: u64,
    /// Candidate odd-vertex pairs evaluated per iteration by the iterative
    /// strategies; pairs are sampled when there are more.
    pub pair_sample_cap: usize,
}

impl DecompositionStrategy {
    pub fn new(kind: StrategyKind, seed: u64) -> Self {
        Self { kind, seed, pair_sample_cap: DEFAULT_PAIR_SAMPLE_CAP }
    }

    pub fn decompose(&self, g: &Graph) -> Result<TrailSet, DecompositionError> {
        if self.pair_sample_cap == 0 {
            return Err(DecompositionError::InvalidStrategy("pair_sample_cap must be >= 1".into()));
        }
        match self.kind {
            StrategyKind::PseudoTour => decompose_pseudo_tour(g, self.seed),
            StrategyKind::MedianTrails => decompose_median_trails(g, self.seed, self.pair_sample_cap),
            StrategyKind::RandomTrails => decompose_random_trails(g, self.seed, self.pair_sample_cap),
            StrategyKind::EdgeWise => Ok(decompose_edge_wise(g)),
            StrategyKind::GridRowsCols { rows, cols } => {
                if rows < 2 || cols < 2 || g.n_vertices() != rows * cols || *g != grid_graph(rows, cols) {
                    return Err(DecompositionError::NotAGrid { rows, cols });
                }
                Ok(decompose_grid_rows_cols(rows, cols))
            }
        }
    }
}

fn require_connected(g: &Graph) -> Result<(), DecompositionError> {
    if g.edges_connected() {
        Ok(())
    } else {
        Err(DecompositionError::Disconnected)
    }
}

fn first_touched(g: &Graph) -> Option<usize> {
    (0..g.n_vertices()).find(|&v| g.degree(v) > 0)
}

/// Pairs odd vertices with pseudo-edges, walks one Eulerian circuit of the
/// augmented multigraph, and cuts it at every pseudo-edge. Yields exactly
/// `max(1, k)` trails for `2k` odd vertices.
pub fn decompose_pseudo_tour(g: &Graph, seed: u64) -> Result<TrailSet, DecompositionError> {
    require_connected(g)?;
    let Some(first) = first_touched(g) else {
        return Ok(TrailSet::new(g.n_vertices(), 0, Vec::new()));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut odd = odd_degree_vertices(g);
    odd.shuffle(&mut rng);

    let mut augmented = g.edges().to_vec();
    let n_real = augmented.len();
    let mut is_nbr = vec![false; g.n_vertices()];
    while let Some(a) = odd.pop() {
        for &(w, _) in g.incident(a) {
            is_nbr[w] = true;
        }
        // Prefer a non-adjacent partner; fall back to a parallel pseudo-edge.
        let pick = odd.iter().rposition(|&b| !is_nbr[b]).unwrap_or(odd.len() - 1);
        for &(w, _) in g.incident(a) {
            is_nbr[w] = false;
        }
        let b = odd.swap_remove(pick);
        augmented.push((a, b));
    }
    if augmented.len() == n_real {
        let tour = eulerian_circuit(g, first)?;
        return Ok(TrailSet::new(g.n_vertices(), g.n_edges(), vec![tour]));
    }

    let aug = Graph::from_edges(g.n_vertices(), &augmented)?;
    let circuit = eulerian_circuit(&aug, first)?;
    let cv = circuit.vertices();
    let ce = circuit.edge_ids().expect("circuit is bound");
    let m = ce.len();
    let p = ce.iter().position(|&e| e >= n_real).expect("pseudo-edges exist");

    let mut trails = Vec::new();
    let mut vertices = vec![cv[p + 1]];
    let mut edges = Vec::new();
    for i in 1..=m {
        let idx = (p + i) % m;
        let e = ce[idx];
        if e >= n_real {
            // Each vertex carries at most one pseudo-edge, so no trail is empty.
            trails.push(Trail::new(std::mem::take(&mut vertices), std::mem::take(&mut edges)));
            vertices.push(cv[idx + 1]);
        } else {
            edges.push(e);
            vertices.push(cv[idx + 1]);
        }
    }
    Ok(TrailSet::new(g.n_vertices(), g.n_edges(), trails))
}

#[derive(Clone, Copy)]
enum PathChoice {
    Median,
    Random,
}

/// Iteratively removes the median-length shortest path between odd-vertex
/// pairs; components that reach zero or two odd vertices are finished with an
/// Eulerian circuit or trail. Split-off components are processed separately.
pub fn decompose_median_trails(
    g: &Graph,
    seed: u64,
    pair_sample_cap: usize,
) -> Result<TrailSet, DecompositionError> {
    iterative_paths(g, seed, pair_sample_cap, PathChoice::Median)
}

/// Same skeleton as [`decompose_median_trails`] with the removed path drawn
/// uniformly at random among the candidate pairs.
pub fn decompose_random_trails(
    g: &Graph,
    seed: u64,
    pair_sample_cap: usize,
) -> Result<TrailSet, DecompositionError> {
    iterative_paths(g, seed, pair_sample_cap, PathChoice::Random)
}

fn iterative_paths(
    g: &Graph,
    seed: u64,
    pair_sample_cap: usize,
    choice: PathChoice,
) -> Result<TrailSet, DecompositionError> {
    require_connected(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trails = Vec::new();
    let mut pending: VecDeque<Vec<usize>> = VecDeque::new();
    if g.n_edges() > 0 {
        pending.push_back((0..g.n_edges()).collect());
    }
    while let Some(edge_ids) = pending.pop_front() {
        let sub = SubGraph::from_edge_subset(g, &edge_ids);
        let local = &sub.graph;
        let odd = odd_degree_vertices(local);
        let trail = match odd.len() {
            0 => eulerian_circuit(local, 0)?,
            2 => eulerian_trail(local, odd[0], odd[1])?,
            _ => {
                let (s, t) = match choice {
                    PathChoice::Median => median_pair(local, &odd, pair_sample_cap, &mut rng),
                    PathChoice::Random => random_pair(&odd, &mut rng),
                };
                shortest_path(local, s, t)?
            }
        };
        let finished = trail.length() == local.n_edges();
        let mut removed = vec![false; local.n_edges()];
        for &e in trail.edge_ids().expect("bound") {
            removed[e] = true;
        }
        trails.push(trail.map_ids(&sub.vertex_map, &sub.edge_map));
        if finished {
            continue;
        }
        let residual: Vec<usize> = (0..local.n_edges()).filter(|&e| !removed[e]).collect();
        let rest = SubGraph::from_edge_subset(local, &residual);
        for comp in connected_components(&rest.graph) {
            if comp.len() < 2 {
                continue;
            }
            let piece = SubGraph::from_vertex_subset(&rest.graph, &comp);
            let mut ids: Vec<usize> =
                piece.edge_map.iter().map(|&e| sub.edge_map[rest.edge_map[e]]).collect();
            ids.sort_unstable();
            pending.push_back(ids);
        }
    }
    Ok(TrailSet::new(g.n_vertices(), g.n_edges(), trails))
}

fn n_pairs(k: usize) -> usize {
    k * (k.saturating_sub(1)) / 2
}

/// Maps a pair index in `0..C(k, 2)` to `(i, j)`, `i < j`, row-major.
fn decode_pair(mut idx: usize, k: usize) -> (usize, usize) {
    for i in 0..k {
        let row = k - 1 - i;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
    }
    unreachable!("pair index out of range")
}

fn random_pair(odd: &[usize], rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (i, j) = decode_pair(rng.gen_range(0..n_pairs(odd.len())), odd.len());
    (odd[i], odd[j])
}

/// The median-length candidate, with ties ordered by `(source, target)` and
/// the lower-middle element taken for an even candidate count.
fn median_pair(g: &Graph, odd: &[usize], cap: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let total = n_pairs(odd.len());
    let mut pairs: Vec<(usize, usize)> = if total <= cap {
        (0..total).map(|p| decode_pair(p, odd.len())).collect()
    } else {
        index::sample(rng, total, cap).into_iter().map(|p| decode_pair(p, odd.len())).collect()
    };
    pairs.sort_unstable();

    let mut candidates: Vec<(usize, usize, usize)> = Vec::with_capacity(pairs.len());
    let mut dist = vec![usize::MAX; g.n_vertices()];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut start = 0;
    while start < pairs.len() {
        let src_idx = pairs[start].0;
        let end = start + pairs[start..].iter().take_while(|p| p.0 == src_idx).count();
        let source = odd[src_idx];
        let mut remaining: Vec<usize> = pairs[start..end].iter().map(|p| odd[p.1]).collect();
        remaining.sort_unstable();
        remaining.dedup();
        let mut left = remaining.len();

        // Early-exit BFS: stop once every target of this source is reached.
        dist[source] = 0;
        touched.push(source);
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            if left == 0 {
                break;
            }
            for &(w, _) in g.incident(x) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    touched.push(w);
                    queue.push_back(w);
                    if remaining.binary_search(&w).is_ok() {
                        left -= 1;
                    }
                }
            }
        }
        for p in &pairs[start..end] {
            let target = odd[p.1];
            candidates.push((dist[target], source.min(target), source.max(target)));
        }
        for v in touched.drain(..) {
            dist[v] = usize::MAX;
        }
        queue.clear();
        start = end;
    }
    candidates.sort_unstable();
    let (_, s, t) = candidates[(candidates.len() - 1) / 2];
    (s, t)
}

/// One single-edge trail per edge.
pub fn decompose_edge_wise(g: &Graph) -> TrailSet {
    let trails = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| Trail::new(vec![a, b], vec![e]))
        .collect();
    TrailSet::new(g.n_vertices(), g.n_edges(), trails)
}

/// Every row and every column of the `rows x cols` grid as one trail, rows
/// first. Edge ids follow [`grid_graph`].
pub fn decompose_grid_rows_cols(rows: usize, cols: usize) -> TrailSet {
    assert!(rows >= 2 && cols >= 2, "rows and cols must be at least 2");
    let g = grid_graph(rows, cols);
    let mut trails = Vec::with_capacity(rows + cols);
    let bind = |vertices: Vec<usize>| {
        let ids = vertices
            .windows(2)
            .map(|w| g.edge_between(w[0], w[1]).expect("grid neighbours"))
            .collect();
        Trail::new(vertices, ids)
    };
    for r in 0..rows {
        trails.push(bind((0..cols).map(|c| r * cols + c).collect()));
    }
    for c in 0..cols {
        trails.push(bind((0..rows).map(|r| r * cols + c).collect()));
    }
    TrailSet::new(g.n_vertices(), g.n_edges(), trails)
}

/// Splits every trail of length `m >= 2` at edge index `m / 2`.
pub fn halve_trails(ts: &TrailSet) -> TrailSet {
    let mut trails = Vec::with_capacity(ts.len() * 2);
    for t in &ts.trails {
        let m = t.length();
        if m >= 2 {
            let (a, b) = t.split_at_edge(m / 2);
            trails.push(a);
            trails.push(b);
        } else {
            trails.push(t.clone());
        }
    }
    TrailSet::new(ts.n_vertices, ts.n_edges, trails)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrailStats {
    pub count: usize,
    pub total_edges: usize,
    pub min: usize,
    pub max: usize,
    pub median: f64,
    pub mean: f64,
    /// Population variance of the lengths.
    pub variance: f64,
    /// length -> number of trails with that length
    pub histogram: BTreeMap<usize, usize>,
}

pub fn trail_stats(ts: &TrailSet) -> TrailStats {
    let mut lengths = ts.lengths();
    lengths.sort_unstable();
    let count = lengths.len();
    let total_edges: usize = lengths.iter().sum();
    let mut histogram = BTreeMap::new();
    for &l in &lengths {
        *histogram.entry(l).or_insert(0) += 1;
    }
    if count == 0 {
        return TrailStats {
            count,
            total_edges,
            min: 0,
            max: 0,
            median: 0.0,
            mean: 0.0,
            variance: 0.0,
            histogram,
        };
    }
    let mean = total_edges as f64 / count as f64;
    let median = if count % 2 == 1 {
        lengths[count / 2] as f64
    } else {
        (lengths[count / 2 - 1] + lengths[count / 2]) as f64 / 2.0
    };
    let variance = lengths.iter().map(|&l| (l as f64 - mean).powi(2)).sum::<f64>() / count as f64;
    TrailStats {
        count,
        total_edges,
        min: lengths[0],
        max: lengths[count - 1],
        median,
        mean,
        variance,
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_trail_partition;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn pair_decoding_covers_all_pairs() {
        let k = 7;
        let decoded: Vec<_> = (0..n_pairs(k)).map(|p| decode_pair(p, k)).collect();
        let mut expected = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                expected.push((i, j));
            }
        }
        assert_eq!(decoded, expected);
    }

    #[test]
    fn small_graphs_all_strategies() {
        for kind in [StrategyKind::PseudoTour, StrategyKind::MedianTrails, StrategyKind::RandomTrails] {
            let s = DecompositionStrategy::new(kind, 9);
            let ts = s.decompose(&cycle(4)).unwrap();
            assert_eq!(ts.lengths(), vec![4], "{kind}");
            let ts = s.decompose(&path(3)).unwrap();
            assert_eq!(ts.lengths(), vec![2], "{kind}");
        }
    }

    #[test]
    fn k4_pairs_adjacent_vertices() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b));
            }
        }
        let g = Graph::from_edges(4, &edges).unwrap();
        for seed in 0..10 {
            let ts = decompose_pseudo_tour(&g, seed).unwrap();
            assert_eq!(ts.len(), 2);
            assert!(validate_trail_partition(&g, &ts).is_valid());
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(decompose_pseudo_tour(&g, 0), Err(DecompositionError::Disconnected));
        assert_eq!(decompose_median_trails(&g, 0, 10), Err(DecompositionError::Disconnected));
    }

    #[test]
    fn isolated_vertices_are_ignored() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let ts = decompose_median_trails(&g, 0, 10).unwrap();
        assert_eq!(ts.lengths(), vec![3]);
        assert!(validate_trail_partition(&g, &ts).is_valid());
    }

    #[test]
    fn edge_wise_counts() {
        assert_eq!(decompose_edge_wise(&path(2)).lengths(), vec![1]);
        assert_eq!(decompose_edge_wise(&cycle(4)).len(), 4);
        assert_eq!(decompose_edge_wise(&grid_graph(100, 100)).len(), 19800);
    }

    #[test]
    fn rows_cols_shapes() {
        let ts = decompose_grid_rows_cols(2, 2);
        assert_eq!(ts.lengths(), vec![1, 1, 1, 1]);
        let ts = decompose_grid_rows_cols(3, 5);
        assert_eq!(ts.lengths(), vec![4, 4, 4, 2, 2, 2, 2, 2]);
        assert!(validate_trail_partition(&grid_graph(3, 5), &ts).is_valid());
        let ts = decompose_grid_rows_cols(100, 100);
        assert_eq!(ts.len(), 200);
        assert!(ts.lengths().iter().all(|&l| l == 99));
    }

    #[test]
    fn rows_cols_strategy_checks_graph() {
        let s = DecompositionStrategy::new(StrategyKind::GridRowsCols { rows: 3, cols: 3 }, 0);
        assert!(s.decompose(&grid_graph(3, 3)).is_ok());
        assert_eq!(
            s.decompose(&cycle(9)),
            Err(DecompositionError::NotAGrid { rows: 3, cols: 3 })
        );
    }

    #[test]
    fn halving() {
        let ts = TrailSet::new(5, 4, vec![Trail::new(vec![0, 1, 2, 3, 4], vec![0, 1, 2, 3])]);
        let h = halve_trails(&ts);
        assert_eq!(h.trails[0].vertices(), &[0, 1, 2]);
        assert_eq!(h.trails[1].vertices(), &[2, 3, 4]);
        assert_eq!(h.trails[1].edge_ids().unwrap(), &[2, 3]);
        let single = TrailSet::new(2, 1, vec![Trail::new(vec![0, 1], vec![0])]);
        assert_eq!(halve_trails(&single), single);
    }

    #[test]
    fn stats_arithmetic() {
        let ts = TrailSet::new(
            7,
            6,
            vec![Trail::from_vertices(vec![0, 1, 2]), Trail::from_vertices(vec![2, 3, 4, 5, 6])],
        );
        let s = trail_stats(&ts);
        assert_eq!((s.count, s.mean, s.median), (2, 3.0, 3.0));
        assert_eq!(s.variance, 1.0);
        let s = trail_stats(&decompose_edge_wise(&cycle(4)));
        assert_eq!((s.min, s.median, s.max), (1, 1.0, 1));
        let s = trail_stats(&decompose_grid_rows_cols(100, 100));
        assert_eq!((s.variance, s.median), (0.0, 99.0));
        assert_eq!(s.histogram.get(&99), Some(&200));
    }

    #[test]
    fn strategy_names_parse() {
        assert_eq!("pseudotour".parse::<StrategyKind>().unwrap(), StrategyKind::PseudoTour);
        assert_eq!("Medians".parse::<StrategyKind>().unwrap(), StrategyKind::MedianTrails);
        assert!("nonsense".parse::<StrategyKind>().is_err());
    }
}
