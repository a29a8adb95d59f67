//! Undirected loop-free graphs, the edge-list text format, and the
//! distance/degeneracy primitives the rest of the crate builds on.

use std::borrow::Cow;
use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// Dense internal vertex index in `0..n`.
pub type Vertex = usize;

/// Distance value for vertex pairs with no connecting path.
pub const UNREACHABLE: u32 = u32::MAX;

/// Immutable undirected graph without loops or parallel edges.
///
/// Vertices carry the integer label they had in the input file; internal
/// indices are assigned in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
    labels: Vec<i64>,
    index: FxHashMap<i64, Vertex>,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `0..n`. Duplicate edges are
    /// merged; loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let labels = (0..n as i64).collect();
        let mut b = Builder::with_labels(labels);
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge {i} ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: i + 1,
                    label: u as i64,
                });
            }
            b.add_edge(u, v);
        }
        Ok(b.finish())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn label(&self, v: Vertex) -> i64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn vertex_of(&self, label: i64) -> Option<Vertex> {
        self.index.get(&label).copied()
    }

    /// Parses the whitespace-separated edge-list format.
    ///
    /// Lines starting with `#`, `c` or `%` are comments. An optional header
    /// `p <n> <m>` (or DIMACS-style `p <word> <n> <m>`) declares the vertex
    /// count; labels the edges never mention are then added as isolated
    /// vertices. A line holding a single label declares an isolated vertex.
    pub fn parse(text: &str) -> Result<Self> {
        let mut b = Builder::default();
        let mut header: Option<(usize, usize)> = None;

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with(['#', 'c', '%']) {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "p" {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate header line"));
                }
                let nums = match tokens.len() {
                    3 => &tokens[1..3],
                    4 => &tokens[2..4],
                    _ => return Err(parse_err(line_no, "header must be `p <n> <m>`")),
                };
                let n = parse_count(nums[0], line_no)?;
                parse_count(nums[1], line_no)?;
                header = Some((n, line_no));
                continue;
            }
            match tokens.as_slice() {
                [a] => {
                    let a = parse_label(a, line_no)?;
                    b.vertex(a);
                }
                [a, c] => {
                    let (a, c) = (parse_label(a, line_no)?, parse_label(c, line_no)?);
                    if a == c {
                        return Err(Error::SelfLoop {
                            line: line_no,
                            label: a,
                        });
                    }
                    let (u, v) = (b.vertex(a), b.vertex(c));
                    b.add_edge(u, v);
                }
                _ => {
                    return Err(parse_err(
                        line_no,
                        format!("expected `u v`, found {} tokens", tokens.len()),
                    ))
                }
            }
        }

        if let Some((n, line_no)) = header {
            let seen = b.labels.len();
            if seen > n {
                return Err(parse_err(
                    line_no,
                    format!("header declares {n} vertices but the edges mention {seen}"),
                ));
            }
            let base = if b.index.contains_key(&0) { 0 } else { 1 };
            let mut next = base;
            while b.labels.len() < n {
                if !b.index.contains_key(&next) {
                    b.vertex(next);
                }
                next += 1;
            }
        }
        Ok(b.finish())
    }

    /// Serialises to the edge-list format: a `p n m` header, the edges as
    /// `u v` label pairs in sorted order, then isolated vertices one per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p {} {}", self.n(), self.m());
        let mut pairs: Vec<(i64, i64)> = self
            .edges()
            .map(|(u, v)| {
                let (a, b) = (self.labels[u], self.labels[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        pairs.sort_unstable();
        for (a, b) in pairs {
            let _ = writeln!(out, "{a} {b}");
        }
        let mut isolated: Vec<i64> = self
            .vertices()
            .filter(|&v| self.degree(v) == 0)
            .map(|v| self.labels[v])
            .collect();
        isolated.sort_unstable();
        for a in isolated {
            let _ = writeln!(out, "{a}");
        }
        out
    }

    /// Hop distances from `src` to every vertex.
    pub fn bfs(&self, src: Vertex) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.n()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Diameter of the induced subgraph `G[set]`, or [`UNREACHABLE`] when
    /// that subgraph is disconnected.
    pub fn induced_diameter(&self, set: &[Vertex]) -> Result<u32> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut member = FxHashMap::default();
        for (i, &v) in set.iter().enumerate() {
            member.entry(v).or_insert(i);
        }
        let mut best = 0;
        let mut dist = vec![UNREACHABLE; set.len()];
        let mut queue = VecDeque::new();
        for (&src, &si) in &member {
            dist.iter_mut().for_each(|d| *d = UNREACHABLE);
            dist[si] = 0;
            queue.push_back(src);
            let mut reached = 1;
            while let Some(u) = queue.pop_front() {
                let du = dist[member[&u]];
                for w in &self.adj[u] {
                    if let Some(&wi) = member.get(w) {
                        if dist[wi] == UNREACHABLE {
                            dist[wi] = du + 1;
                            best = best.max(du + 1);
                            reached += 1;
                            queue.push_back(*w);
                        }
                    }
                }
            }
            if reached < member.len() {
                return Ok(UNREACHABLE);
            }
        }
        Ok(best)
    }

    /// Degeneracy by repeatedly deleting a minimum-degree vertex (smallest
    /// index among ties).
    pub fn degeneracy(&self) -> Degeneracy {
        let n = self.n();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (deg[v], v)).collect();
        let mut removed = vec![false; n];
        let mut value = 0;
        let mut elimination = Vec::with_capacity(n);
        while let Some((d, v)) = queue.pop_first() {
            value = value.max(d);
            removed[v] = true;
            elimination.push(v);
            for &w in &self.adj[v] {
                if !removed[w] {
                    queue.remove(&(deg[w], w));
                    deg[w] -= 1;
                    queue.insert((deg[w], w));
                }
            }
        }
        Degeneracy { value, elimination }
    }
}

/// Result of the minimum-degree elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneracy {
    pub value: usize,
    /// Vertices in removal order.
    pub elimination: Vec<Vertex>,
}

impl Degeneracy {
    /// The reversed elimination sequence: every vertex has at most `value`
    /// neighbours to its left.
    pub fn ordering(&self) -> Vec<Vertex> {
        self.elimination.iter().rev().copied().collect()
    }
}

#[derive(Default)]
struct Builder {
    labels: Vec<i64>,
    index: FxHashMap<i64, Vertex>,
    adj: Vec<Vec<Vertex>>,
}

impl Builder {
    fn with_labels(labels: Vec<i64>) -> Self {
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let adj = vec![Vec::new(); labels.len()];
        Builder { labels, index, adj }
    }

    fn vertex(&mut self, label: i64) -> Vertex {
        if let Some(&v) = self.index.get(&label) {
            return v;
        }
        let v = self.labels.len();
        self.labels.push(label);
        self.index.insert(label, v);
        self.adj.push(Vec::new());
        v
    }

    fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn finish(mut self) -> Graph {
        let mut twice_m = 0;
        for ns in &mut self.adj {
            ns.sort_unstable();
            ns.dedup();
            twice_m += ns.len();
        }
        Graph {
            adj: self.adj,
            m: twice_m / 2,
            labels: self.labels,
            index: self.index,
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_label(tok: &str, line: usize) -> Result<i64> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not an integer vertex label")))
}

fn parse_count(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a non-negative integer")))
}

/// All-pairs hop distances.
///
/// Small graphs keep a dense table. Above [`DistanceTable::DENSE_LIMIT`]
/// vertices rows are recomputed by BFS on request, which is what the
/// turbochargers need anyway (one row per invocation).
#[derive(Debug, Clone)]
pub enum DistanceTable {
    Dense { n: usize, dist: Vec<u32> },
    OnDemand(Graph),
}

impl DistanceTable {
    pub const DENSE_LIMIT: usize = 4096;

    /// One BFS per source; every row is materialised.
    pub fn all_pairs(g: &Graph) -> Self {
        let n = g.n();
        let mut dist = Vec::with_capacity(n * n);
        for v in g.vertices() {
            dist.extend(g.bfs(v));
        }
        DistanceTable::Dense { n, dist }
    }

    /// Dense for small graphs, lazy rows otherwise.
    pub fn for_graph(g: &Graph) -> Self {
        if g.n() <= Self::DENSE_LIMIT {
            Self::all_pairs(g)
        } else {
            DistanceTable::OnDemand(g.clone())
        }
    }

    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        match self {
            DistanceTable::Dense { n, dist } => dist[u * n + v],
            DistanceTable::OnDemand(g) => g.bfs(u)[v],
        }
    }

    pub fn row(&self, src: Vertex) -> Cow<'_, [u32]> {
        match self {
            DistanceTable::Dense { n, dist } => Cow::Borrowed(&dist[src * n..(src + 1) * n]),
            DistanceTable::OnDemand(g) => Cow::Owned(g.bfs(src)),
        }
    }
}
