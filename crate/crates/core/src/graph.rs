//! Simple undirected graphs: Erdős–Rényi sampling, edge-list parsing,
//! degrees, breadth-first all-pairs distances and diameter.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{GraphError, ParseGraphError};

/// A simple undirected graph on vertices `0..n`.
///
/// Stores both a dense adjacency relation (for O(1) edge queries while
/// assembling matrices) and sorted neighbor lists (for breadth-first search).
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edge_count", &self.edge_count)
            .finish()
    }
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adjacency: vec![false; n * n],
            neighbors: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..n {
            g.insert_edge(u - 1, u);
        }
        g
    }

    /// The cycle `C_n` (`n >= 3`).
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.insert_edge(0, n - 1);
        }
        g
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::VertexOutOfRange {
                vertex: u.max(v),
                n: self.n,
            });
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge { u, v });
        }
        self.insert_edge(u, v);
        Ok(())
    }

    fn insert_edge(&mut self, u: usize, v: usize) {
        self.adjacency[u * self.n + v] = true;
        self.adjacency[v * self.n + u] = true;
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
        self.edge_count += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v]
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    /// Iterator over edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence::new(self.neighbors.iter().map(Vec::len).collect())
    }

    /// Hop distances from every source, one breadth-first search per vertex.
    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        let n = self.n;
        let rows: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|source| self.bfs_row(source))
            .collect();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            entries.extend_from_slice(&row);
        }
        DistanceMatrix { n, entries }
    }

    fn bfs_row(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.n];
        let mut queue = VecDeque::with_capacity(self.n);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.neighbors[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Samples `G(n, p)`: every unordered pair `{u, v}` is an edge independently
/// with probability `p`.
///
/// Pairs are visited in lexicographic order `(0,1), (0,2), ..., (n-2,n-1)`
/// and each consumes one Bernoulli draw from a ChaCha8 stream seeded with
/// `seed`, so the output is identical on every platform.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(p) {
                g.insert_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Vertex degrees with cached extremes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
    min: usize,
    max: usize,
}

impl DegreeSequence {
    fn new(degrees: Vec<usize>) -> Self {
        let min = degrees.iter().copied().min().unwrap_or(0);
        let max = degrees.iter().copied().max().unwrap_or(0);
        Self { degrees, min, max }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.degrees
    }

    pub fn get(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn min(&self) -> usize {
        self.min
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }
}

pub(crate) const UNREACHABLE: u32 = u32::MAX;

/// All-pairs hop distances. Unreachable pairs read as `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `Some(hops)`, or `None` when `j` is unreachable from `i`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        match self.entries[i * self.n + j] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub fn is_connected(&self) -> bool {
        !self.entries.contains(&UNREACHABLE)
    }

    /// Largest off-diagonal distance; `None` means infinite (disconnected).
    /// A single vertex has diameter 0.
    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0;
        for &d in &self.entries {
            if d == UNREACHABLE {
                return None;
            }
            best = best.max(d);
        }
        Some(best)
    }
}

/// Whether every degree lies strictly inside `(np - n^{3/4}, np + n^{3/4})`.
pub fn degree_bound_holds(graph: &Graph, p: f64) -> bool {
    let n = graph.n() as f64;
    let centre = n * p;
    let radius = n.powf(0.75);
    let degrees = graph.degrees();
    let (lo, hi) = (degrees.min() as f64, degrees.max() as f64);
    centre - radius < lo && hi < centre + radius
}

/// Parses the edge-list text format.
///
/// The first meaningful line holds `n`; every following non-empty line holds
/// `u v` with `0 <= u < v < n`. Lines starting with `#` are ignored.
/// Errors carry 1-based line numbers.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseGraphError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let Some(g) = graph.as_mut() else {
            let n = parse_index(tokens.next().unwrap_or(""), line_no)?;
            if tokens.next().is_some() {
                return Err(ParseGraphError::Malformed {
                    line: line_no,
                    reason: "header line must contain only the vertex count".into(),
                });
            }
            if n == 0 {
                return Err(ParseGraphError::Graph {
                    line: line_no,
                    source: GraphError::NoVertices,
                });
            }
            graph = Some(Graph::empty(n));
            continue;
        };
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(ParseGraphError::Malformed {
                line: line_no,
                reason: "expected exactly two vertex indices".into(),
            });
        };
        let u = parse_index(a, line_no)?;
        let v = parse_index(b, line_no)?;
        g.try_add_edge(u, v)
            .map_err(|source| ParseGraphError::Graph {
                line: line_no,
                source,
            })?;
    }
    graph.ok_or(ParseGraphError::MissingHeader)
}

fn parse_index(token: &str, line: usize) -> Result<usize, ParseGraphError> {
    token.parse().map_err(|_| ParseGraphError::NotANumber {
        line,
        token: token.to_string(),
    })
}

/// Serializes a graph in the edge-list format accepted by [`parse_edge_list`].
pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = format!("{}\n", graph.n());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
