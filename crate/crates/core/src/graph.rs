//! Undirected multigraphs, trails, and the traversal primitives the
//! decomposition strategies are built from.
//!
//! Edge ids are stable: edge `e` is the `e`-th pair handed to
//! [`Graph::from_edges`]. Adjacency lists are kept in edge-id order, which is
//! what makes Hierholzer's walk deterministic, plus a second copy sorted by
//! neighbour id for breadth-first search.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph with {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("graph has {0} odd-degree vertices; an Eulerian circuit needs none")]
    OddDegreePresent(usize),
    #[error("edges are not all reachable from the start vertex")]
    Disconnected,
    #[error("start vertex {0} has no incident edges")]
    IsolatedStart(usize),
    #[error("odd-degree vertices are {found:?}, expected exactly {{{u}, {v}}}")]
    WrongOddCount { found: Vec<usize>, u: usize, v: usize },
    #[error("no path from {0} to {1}")]
    Unreachable(usize, usize),
}

/// An undirected multigraph with stable edge ids. Self-loops are rejected,
/// parallel edges are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    /// (neighbour, edge id), ascending edge id.
    adjacency: Vec<Vec<(usize, usize)>>,
    /// (neighbour, edge id), ascending neighbour then edge id.
    by_neighbor: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n_vertices];
        for (id, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n_vertices {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n_vertices });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
        }
        let by_neighbor = adjacency
            .iter()
            .map(|list| {
                let mut sorted = list.clone();
                sorted.sort_unstable();
                sorted
            })
            .collect();
        Ok(Self { n_vertices, edges: edges.to_vec(), adjacency, by_neighbor })
    }

    /// Builds a graph with edges canonicalized to `(min, max)`, deduplicated
    /// and sorted, so edge ids do not depend on input order.
    pub fn canonical(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut canon: Vec<(usize, usize)> =
            edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        canon.sort_unstable();
        canon.dedup();
        Self::from_edges(n_vertices, &canon)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Incident `(neighbour, edge id)` pairs in ascending edge-id order.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    /// Incident `(neighbour, edge id)` pairs in ascending neighbour order.
    pub fn neighbors_sorted(&self, v: usize) -> &[(usize, usize)] {
        &self.by_neighbor[v]
    }

    /// Lowest edge id joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let list = self.by_neighbor.get(u)?;
        let pos = list.partition_point(|&(w, _)| w < v);
        list.get(pos).filter(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n_vertices {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n_vertices: self.n_vertices })
        }
    }

    /// True when every vertex of positive degree lies in a single component.
    pub fn edges_connected(&self) -> bool {
        let Some(start) = (0..self.n_vertices).find(|&v| self.degree(v) > 0) else {
            return true;
        };
        let reached = self.bfs_order(start);
        let touched = (0..self.n_vertices).filter(|&v| self.degree(v) > 0).count();
        reached.len() == touched
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n_vertices];
        let mut order = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(w, _) in &self.by_neighbor[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }
}

/// Connected components as ascending vertex-id lists, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; g.n_vertices()];
    let mut components = Vec::new();
    for s in 0..g.n_vertices() {
        if label[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![s];
        label[s] = id;
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &(w, _) in g.incident(v) {
                if label[w] == usize::MAX {
                    label[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

pub fn odd_degree_vertices(g: &Graph) -> Vec<usize> {
    (0..g.n_vertices()).filter(|&v| g.degree(v) % 2 == 1).collect()
}

/// A walk with distinct edges: `vertices.len() == edge_ids.len() + 1`.
///
/// Trails read back from disk carry vertices only; [`Trail::is_bound`] tells
/// the two apart and [`TrailSet::bind`] recovers edge ids against a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    vertices: Vec<usize>,
    edge_ids: Option<Vec<usize>>,
}

impl Trail {
    pub fn new(vertices: Vec<usize>, edge_ids: Vec<usize>) -> Self {
        assert_eq!(
            vertices.len(),
            edge_ids.len() + 1,
            "a trail with m edges has m + 1 vertices"
        );
        Self { vertices, edge_ids: Some(edge_ids) }
    }

    /// A trail known only by its vertex sequence.
    pub fn from_vertices(vertices: Vec<usize>) -> Self {
        assert!(!vertices.is_empty(), "a trail has at least one vertex");
        Self { vertices, edge_ids: None }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> Option<&[usize]> {
        self.edge_ids.as_deref()
    }

    pub fn is_bound(&self) -> bool {
        self.edge_ids.is_some()
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    /// Splits after edge index `at` (so the first piece has `at` edges).
    pub(crate) fn split_at_edge(&self, at: usize) -> (Trail, Trail) {
        let head_v = self.vertices[..=at].to_vec();
        let tail_v = self.vertices[at..].to_vec();
        match &self.edge_ids {
            Some(e) => (Trail::new(head_v, e[..at].to_vec()), Trail::new(tail_v, e[at..].to_vec())),
            None => (Trail::from_vertices(head_v), Trail::from_vertices(tail_v)),
        }
    }

    pub(crate) fn map_ids(&self, vertex_map: &[usize], edge_map: &[usize]) -> Trail {
        Trail {
            vertices: self.vertices.iter().map(|&v| vertex_map[v]).collect(),
            edge_ids: self
                .edge_ids
                .as_ref()
                .map(|e| e.iter().map(|&id| edge_map[id]).collect()),
        }
    }
}

/// An ordered set of trails over a graph with `n_vertices` vertices and
/// `n_edges` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrailSet {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub trails: Vec<Trail>,
}

impl TrailSet {
    pub fn new(n_vertices: usize, n_edges: usize, trails: Vec<Trail>) -> Self {
        Self { n_vertices, n_edges, trails }
    }

    pub fn len(&self) -> usize {
        self.trails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trails.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.trails.iter().map(Trail::length).collect()
    }

    pub fn total_edges(&self) -> usize {
        self.trails.iter().map(Trail::length).sum()
    }

    /// Resolves edge ids of vertex-only trails against `g`, taking the lowest
    /// unused edge id for each consecutive pair. Bound trails are kept as they are.
    pub fn bind(&self, g: &Graph) -> Result<TrailSet, BindError> {
        let mut used = vec![false; g.n_edges()];
        for t in &self.trails {
            for &e in t.edge_ids().unwrap_or(&[]) {
                if e < used.len() {
                    used[e] = true;
                }
            }
        }
        let mut trails = Vec::with_capacity(self.trails.len());
        for (ti, t) in self.trails.iter().enumerate() {
            if t.is_bound() {
                trails.push(t.clone());
                continue;
            }
            let mut ids = Vec::with_capacity(t.length());
            for (pos, w) in t.vertices.windows(2).enumerate() {
                let (a, b) = (w[0], w[1]);
                let found = if a < g.n_vertices() {
                    g.neighbors_sorted(a)
                        .iter()
                        .find(|&&(x, e)| x == b && !used[e])
                        .map(|&(_, e)| e)
                } else {
                    None
                };
                match found {
                    Some(e) => {
                        used[e] = true;
                        ids.push(e);
                    }
                    None => return Err(BindError { trail: ti, position: pos, from: a, to: b }),
                }
            }
            trails.push(Trail::new(t.vertices.clone(), ids));
        }
        Ok(TrailSet::new(g.n_vertices(), g.n_edges(), trails))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("trail {trail} step {position}: no unused edge joins {from} and {to}")]
pub struct BindError {
    pub trail: usize,
    pub position: usize,
    pub from: usize,
    pub to: usize,
}

/// Hierholzer's algorithm. The unused edge with the smallest id is always
/// taken next and sub-circuits are spliced in where they close.
pub fn eulerian_circuit(g: &Graph, start: usize) -> Result<Trail, GraphError> {
    g.check_vertex(start)?;
    let odd = odd_degree_vertices(g);
    if !odd.is_empty() {
        return Err(GraphError::OddDegreePresent(odd.len()));
    }
    if g.degree(start) == 0 {
        return Err(GraphError::IsolatedStart(start));
    }
    let (vertices, edges) = hierholzer(g, start);
    if edges.len() != g.n_edges() {
        return Err(GraphError::Disconnected);
    }
    Ok(Trail::new(vertices, edges))
}

/// Walks every edge reachable from `start`; the caller checks coverage.
fn hierholzer(g: &Graph, start: usize) -> (Vec<usize>, Vec<usize>) {
    const NONE: usize = usize::MAX;
    let mut used = vec![false; g.n_edges()];
    let mut cursor = vec![0usize; g.n_vertices()];
    let mut stack = vec![(start, NONE)];
    let mut rev_vertices = Vec::with_capacity(g.n_edges() + 1);
    let mut rev_edges = Vec::with_capacity(g.n_edges());
    while let Some(&(v, _)) = stack.last() {
        let adj = g.incident(v);
        let mut c = cursor[v];
        while c < adj.len() && used[adj[c].1] {
            c += 1;
        }
        cursor[v] = c;
        if c < adj.len() {
            let (w, e) = adj[c];
            used[e] = true;
            stack.push((w, e));
        } else {
            let (v, e) = stack.pop().expect("stack is non-empty");
            rev_vertices.push(v);
            if e != NONE {
                rev_edges.push(e);
            }
        }
    }
    rev_vertices.reverse();
    rev_edges.reverse();
    (rev_vertices, rev_edges)
}

/// Eulerian trail from `u` to `v`, where `u` and `v` are the only odd-degree
/// vertices. A pseudo-edge `(u, v)` closes the trail into a circuit, which is
/// then cut open at the pseudo-edge.
pub fn eulerian_trail(g: &Graph, u: usize, v: usize) -> Result<Trail, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let odd = odd_degree_vertices(g);
    let expected = [u.min(v), u.max(v)];
    if u == v || odd != expected {
        return Err(GraphError::WrongOddCount { found: odd, u, v });
    }
    let mut augmented = g.edges().to_vec();
    let pseudo = augmented.len();
    augmented.push((v, u));
    let aug = Graph::from_edges(g.n_vertices(), &augmented)?;
    let (cv, ce) = hierholzer(&aug, u);
    if ce.len() != aug.n_edges() {
        return Err(GraphError::Disconnected);
    }
    // Rotate the circuit so that it starts right after the pseudo-edge.
    let p = ce.iter().position(|&e| e == pseudo).expect("pseudo-edge is on the circuit");
    let m = ce.len();
    let mut vertices = Vec::with_capacity(m);
    let mut edges = Vec::with_capacity(m - 1);
    vertices.push(cv[p + 1]);
    for i in 1..m {
        let idx = (p + i) % m;
        edges.push(ce[idx]);
        vertices.push(cv[idx + 1]);
    }
    let mut trail = Trail::new(vertices, edges);
    if trail.start() != u {
        trail = reverse(&trail);
    }
    debug_assert_eq!((trail.start(), trail.end()), (u, v));
    Ok(trail)
}

fn reverse(t: &Trail) -> Trail {
    let mut vertices = t.vertices.clone();
    vertices.reverse();
    let edges = t.edge_ids.as_ref().map(|e| {
        let mut e = e.clone();
        e.reverse();
        e
    });
    Trail { vertices, edge_ids: edges }
}

/// Minimum-edge path from `u` to `v`. Neighbours are expanded in ascending
/// id order, so the first-discovered parent is the lowest-id one.
pub fn shortest_path(g: &Graph, u: usize, v: usize) -> Result<Trail, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(Trail::new(vec![u], Vec::new()));
    }
    const UNSEEN: usize = usize::MAX;
    let mut parent = vec![(UNSEEN, UNSEEN); g.n_vertices()];
    parent[u] = (u, UNSEEN);
    let mut queue = VecDeque::from([u]);
    'search: while let Some(x) = queue.pop_front() {
        for &(w, e) in g.neighbors_sorted(x) {
            if parent[w].0 == UNSEEN {
                parent[w] = (x, e);
                if w == v {
                    break 'search;
                }
                queue.push_back(w);
            }
        }
    }
    if parent[v].0 == UNSEEN {
        return Err(GraphError::Unreachable(u, v));
    }
    let mut vertices = vec![v];
    let mut edges = Vec::new();
    let mut x = v;
    while x != u {
        let (p, e) = parent[x];
        edges.push(e);
        vertices.push(p);
        x = p;
    }
    vertices.reverse();
    edges.reverse();
    Ok(Trail::new(vertices, edges))
}

/// Unweighted BFS distances from `source`; `usize::MAX` marks unreachable.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n_vertices()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        for &(w, _) in g.incident(x) {
            if dist[w] == usize::MAX {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An edge covered by no trail.
    UnusedEdge(usize),
    /// An edge covered `count` times.
    ReusedEdge { edge: usize, count: usize },
    /// Consecutive trail vertices that no edge joins.
    NotAdjacent { trail: usize, position: usize, from: usize, to: usize },
    /// A listed edge id whose endpoints are not the consecutive vertices.
    EdgeMismatch { trail: usize, position: usize, edge: usize },
    VertexOutOfRange { trail: usize, vertex: usize },
}

/// Violations found by [`validate_trail_partition`]; empty means the trails
/// partition the edge set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn unused_edges(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, Violation::UnusedEdge(_))).count()
    }

    pub fn reused_edges(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, Violation::ReusedEdge { .. })).count()
    }
}

pub fn validate_trail_partition(g: &Graph, ts: &TrailSet) -> ValidationReport {
    let mut violations = Vec::new();
    let mut uses = vec![0usize; g.n_edges()];
    // Vertex-only trails are matched greedily to the lowest edge id not yet
    // claimed by that trail; bound trails are checked id by id.
    for (ti, t) in ts.trails.iter().enumerate() {
        if let Some(&bad) = t.vertices().iter().find(|&&v| v >= g.n_vertices()) {
            violations.push(Violation::VertexOutOfRange { trail: ti, vertex: bad });
            continue;
        }
        match t.edge_ids() {
            Some(ids) => {
                for (pos, (w, &e)) in t.vertices().windows(2).zip(ids).enumerate() {
                    let (a, b) = (w[0], w[1]);
                    if e >= g.n_edges() {
                        violations.push(Violation::EdgeMismatch { trail: ti, position: pos, edge: e });
                        continue;
                    }
                    let (x, y) = g.edge(e);
                    if !((x == a && y == b) || (x == b && y == a)) {
                        if g.are_adjacent(a, b) {
                            violations.push(Violation::EdgeMismatch { trail: ti, position: pos, edge: e });
                        } else {
                            violations.push(Violation::NotAdjacent { trail: ti, position: pos, from: a, to: b });
                        }
                        continue;
                    }
                    uses[e] += 1;
                }
            }
            None => {
                for (pos, w) in t.vertices().windows(2).enumerate() {
                    let (a, b) = (w[0], w[1]);
                    let candidates: Vec<usize> = g
                        .neighbors_sorted(a)
                        .iter()
                        .filter(|&&(x, _)| x == b)
                        .map(|&(_, e)| e)
                        .collect();
                    if candidates.is_empty() {
                        violations.push(Violation::NotAdjacent { trail: ti, position: pos, from: a, to: b });
                        continue;
                    }
                    let e = candidates
                        .iter()
                        .copied()
                        .find(|&e| uses[e] == 0)
                        .unwrap_or(candidates[0]);
                    uses[e] += 1;
                }
            }
        }
    }
    for (e, &count) in uses.iter().enumerate() {
        match count {
            0 => violations.push(Violation::UnusedEdge(e)),
            1 => {}
            _ => violations.push(Violation::ReusedEdge { edge: e, count }),
        }
    }
    ValidationReport { violations }
}

/// The subgraph induced by a subset of edges, with vertices relabelled
/// densely in ascending order of their original ids.
#[derive(Debug, Clone)]
pub(crate) struct SubGraph {
    pub graph: Graph,
    /// local vertex -> original vertex
    pub vertex_map: Vec<usize>,
    /// local edge -> original edge
    pub edge_map: Vec<usize>,
}

impl SubGraph {
    /// `edge_ids` must be ascending; local edge ids then preserve order.
    pub fn from_edge_subset(g: &Graph, edge_ids: &[usize]) -> SubGraph {
        let mut vertex_map: Vec<usize> =
            edge_ids.iter().flat_map(|&e| { let (a, b) = g.edge(e); [a, b] }).collect();
        vertex_map.sort_unstable();
        vertex_map.dedup();
        let local = |v: usize| vertex_map.binary_search(&v).expect("endpoint is mapped");
        let local_edges: Vec<(usize, usize)> = edge_ids
            .iter()
            .map(|&e| {
                let (a, b) = g.edge(e);
                (local(a), local(b))
            })
            .collect();
        let graph = Graph::from_edges(vertex_map.len(), &local_edges).expect("subset of a valid graph");
        SubGraph { graph, vertex_map, edge_map: edge_ids.to_vec() }
    }

    /// The subgraph spanned by a vertex set, keeping every edge between members.
    pub fn from_vertex_subset(g: &Graph, vertices: &[usize]) -> SubGraph {
        let mut vertex_map = vertices.to_vec();
        vertex_map.sort_unstable();
        let mut local_of = vec![usize::MAX; g.n_vertices()];
        for (i, &v) in vertex_map.iter().enumerate() {
            local_of[v] = i;
        }
        let mut edge_map = Vec::new();
        let mut local_edges = Vec::new();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if local_of[a] != usize::MAX && local_of[b] != usize::MAX {
                edge_map.push(e);
                local_edges.push((local_of[a], local_of[b]));
            }
        }
        let graph = Graph::from_edges(vertex_map.len(), &local_edges).expect("subset of a valid graph");
        SubGraph { graph, vertex_map, edge_map }
    }
}
