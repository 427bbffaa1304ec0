//! File formats: Matrix Market adjacency, edge lists, trail sets, vectors and
//! result tables.
//!
//! Every reader has a `parse_*` twin working on a string, which is what the
//! path-based functions call after reading the file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::admm::IterationRecord;
use crate::decompose::trail_stats;
use crate::graph::{Graph, GraphError, Trail, TrailSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a coordinate-format Matrix Market matrix: {0}")]
    NotCoordinateFormat(String),
    #[error("line {line}: vertex {vertex} out of range for {n_vertices} vertices")]
    VertexOutOfRange { line: usize, vertex: usize, n_vertices: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl IoError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        IoError::Parse { line, message: message.into() }
    }
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Io { path: path.to_owned(), source })
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, IoError> {
    tok.parse().map_err(|_| IoError::parse(line, format!("expected a non-negative integer, found {tok:?}")))
}

// ---------------------------------------------------------------- Matrix Market

pub fn read_matrix_market_adjacency(path: impl AsRef<Path>) -> Result<Graph, IoError> {
    parse_matrix_market_adjacency(&read(path.as_ref())?)
}

/// Off-diagonal stored entries become undirected edges; values, the diagonal
/// and duplicates are ignored. Edges come out canonical and sorted.
pub fn parse_matrix_market_adjacency(text: &str) -> Result<Graph, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, banner) = lines.next().ok_or_else(|| IoError::NotCoordinateFormat("empty file".into()))?;
    let tokens: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(IoError::NotCoordinateFormat(format!("missing banner, found {banner:?}")));
    }
    if tokens.len() < 5 || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(IoError::NotCoordinateFormat(banner.to_string()));
    }

    let mut size = None;
    let mut edges = Vec::new();
    let mut entries = 0usize;
    for (no, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut it = line.split_whitespace();
        match size {
            None => {
                let rows = parse_usize(it.next().unwrap(), no)?;
                let cols = parse_usize(it.next().ok_or_else(|| IoError::parse(no, "missing column count"))?, no)?;
                let nnz = parse_usize(it.next().ok_or_else(|| IoError::parse(no, "missing entry count"))?, no)?;
                if rows != cols {
                    return Err(IoError::parse(no, format!("adjacency must be square, got {rows}x{cols}")));
                }
                size = Some((rows, nnz));
            }
            Some((n, _)) => {
                let i = parse_usize(it.next().unwrap(), no)?;
                let j = parse_usize(it.next().ok_or_else(|| IoError::parse(no, "missing column index"))?, no)?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(IoError::parse(no, format!("index ({i}, {j}) outside 1..={n}")));
                }
                entries += 1;
                if i != j {
                    edges.push((i - 1, j - 1));
                }
            }
        }
    }
    let (n, nnz) = size.ok_or_else(|| IoError::parse(1, "missing size line"))?;
    if entries != nnz {
        return Err(IoError::parse(0, format!("header declares {nnz} entries, found {entries}")));
    }
    Ok(Graph::canonical(n, &edges)?)
}

/// Writes `g` as a symmetric pattern matrix (lower triangle). Parallel edges
/// collapse when read back.
pub fn write_matrix_market_adjacency(path: impl AsRef<Path>, g: &Graph) -> Result<(), IoError> {
    write(path.as_ref(), &format_matrix_market_adjacency(g))
}

pub fn format_matrix_market_adjacency(g: &Graph) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate pattern symmetric\n");
    let _ = writeln!(out, "{} {} {}", g.n_vertices(), g.n_vertices(), g.n_edges());
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "{} {}", a.max(b) + 1, a.min(b) + 1);
    }
    out
}

// ---------------------------------------------------------------- edge lists

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, IoError> {
    parse_edge_list(&read(path.as_ref())?)
}

/// `u v` per line, 0-based, in edge-id order. `#` starts a comment; a
/// `# vertices N` line fixes the vertex count (otherwise max id + 1).
pub fn parse_edge_list(text: &str) -> Result<Graph, IoError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            let mut it = c.split_whitespace();
            if it.next() == Some("vertices") {
                let n = it.next().ok_or_else(|| IoError::parse(no, "vertices directive without a count"))?;
                declared = Some(parse_usize(n, no)?);
            }
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            [u, v] => {
                let (u, v) = (parse_usize(u, no)?, parse_usize(v, no)?);
                if u == v {
                    return Err(IoError::parse(no, format!("self-loop on vertex {u}")));
                }
                edges.push((u, v));
            }
            _ => return Err(IoError::parse(no, format!("expected two vertex ids, found {:?}", body.trim()))),
        }
    }
    let needed = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < needed => {
            return Err(IoError::parse(0, format!("edge endpoint {} exceeds declared {n} vertices", needed - 1)))
        }
        Some(n) => n,
        None => needed,
    };
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn write_edge_list(path: impl AsRef<Path>, g: &Graph) -> Result<(), IoError> {
    write(path.as_ref(), &format_edge_list(g))
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# vertices {}\n", g.n_vertices());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Reads a graph by extension: `.mtx` is Matrix Market, anything else an edge list.
pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph, IoError> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("mtx")) {
        read_matrix_market_adjacency(path)
    } else {
        read_edge_list(path)
    }
}

// ---------------------------------------------------------------- vectors

pub fn read_vector_csv(path: impl AsRef<Path>) -> Result<Vec<f64>, IoError> {
    parse_vector_csv(&read(path.as_ref())?)
}

/// One finite value per line; blank lines are skipped.
pub fn parse_vector_csv(text: &str) -> Result<Vec<f64>, IoError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| IoError::parse(i + 1, format!("not a number: {t:?}")))?;
        if !v.is_finite() {
            return Err(IoError::parse(i + 1, format!("not finite: {t:?}")));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_vector_csv(path: impl AsRef<Path>, v: &[f64]) -> Result<(), IoError> {
    write(path.as_ref(), &format_vector_csv(v))
}

/// 17 significant digits, enough for exact round trips.
pub fn format_vector_csv(v: &[f64]) -> String {
    let mut out = String::with_capacity(v.len() * 24);
    for x in v {
        let _ = writeln!(out, "{x:.16e}");
    }
    out
}

// ---------------------------------------------------------------- trails

pub fn write_trails(path: impl AsRef<Path>, ts: &TrailSet) -> Result<(), IoError> {
    write(path.as_ref(), &format_trails(ts))
}

pub fn format_trails(ts: &TrailSet) -> String {
    let s = trail_stats(ts);
    let mut out = String::new();
    let _ = writeln!(out, "# vertices {} edges {}", ts.n_vertices, ts.n_edges);
    let _ = writeln!(
        out,
        "# trails {} min {} median {} mean {:.3} max {} variance {:.3}",
        s.count, s.min, s.median, s.mean, s.max, s.variance
    );
    for t in &ts.trails {
        let line: Vec<String> = t.vertices().iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_trails(path: impl AsRef<Path>, n_vertices: usize) -> Result<TrailSet, IoError> {
    parse_trails(&read(path.as_ref())?, n_vertices)
}

/// Trails come back as vertex sequences; use [`TrailSet::bind`] to attach
/// edge ids against the source graph.
pub fn parse_trails(text: &str, n_vertices: usize) -> Result<TrailSet, IoError> {
    let mut trails = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut vertices = Vec::new();
        for tok in body.split_whitespace() {
            let v = parse_usize(tok, no)?;
            if v >= n_vertices {
                return Err(IoError::VertexOutOfRange { line: no, vertex: v, n_vertices });
            }
            vertices.push(v);
        }
        trails.push(Trail::from_vertices(vertices));
    }
    let n_edges = trails.iter().map(Trail::length).sum();
    Ok(TrailSet::new(n_vertices, n_edges, trails))
}

// ---------------------------------------------------------------- tables

/// One solve of one strategy on one benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub graph: String,
    pub strategy: String,
    pub trial: usize,
    pub seed: u64,
    pub steps: usize,
    pub seconds: f64,
    pub objective: f64,
    pub converged: bool,
    pub error: Option<String>,
}

pub fn format_results_csv(results: &[TrialResult]) -> String {
    let mut out = String::from("graph,strategy,trial,steps,seconds,objective,converged\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.16e},{}",
            r.graph, r.strategy, r.trial, r.steps, r.seconds, r.objective, r.converged
        );
    }
    out
}

pub fn write_results_csv(path: impl AsRef<Path>, results: &[TrialResult]) -> Result<(), IoError> {
    write(path.as_ref(), &format_results_csv(results))
}

/// `strategy,length,count` rows for each labelled trail set.
pub fn format_histogram_csv(sets: &[(String, &TrailSet)]) -> String {
    let mut out = String::from("strategy,length,count\n");
    for (name, ts) in sets {
        for (len, count) in trail_stats(ts).histogram {
            let _ = writeln!(out, "{name},{len},{count}");
        }
    }
    out
}

pub fn write_histogram_csv(path: impl AsRef<Path>, sets: &[(String, &TrailSet)]) -> Result<(), IoError> {
    write(path.as_ref(), &format_histogram_csv(sets))
}

pub fn format_diagnostics_csv(history: &[IterationRecord]) -> String {
    let mut out = String::from("iter,r_norm,s_norm,alpha,objective\n");
    for h in history {
        let _ = writeln!(out, "{},{:e},{:e},{},{:.16e}", h.iter, h.r_norm, h.s_norm, h.alpha, h.objective);
    }
    out
}

pub fn write_diagnostics_csv(path: impl AsRef<Path>, history: &[IterationRecord]) -> Result<(), IoError> {
    write(path.as_ref(), &format_diagnostics_csv(history))
}
