//! Right-to-left construction.
//!
//! Vertices are prepended. For a placed `v` the state keeps `PotSreach(v)`:
//! the members of `Wreach_r(G[S], L_S, v)` plus every free `u` that `v`
//! reaches by a path of length at most `r` whose other vertices are all
//! placed. These sets only grow under prepending and coincide with the weakly
//! r-reachable sets once every vertex is placed, so `|PotSreach(v)| > k`
//! proves the current suffix cannot be completed within `k`.
//!
//! Free vertices track the same kind of reachability among each other; its
//! size is the score the Sreach heuristic minimises.

use std::collections::BTreeSet;
use std::time::Instant;

use rustc_hash::FxHashSet;

use crate::driver::{Invocation, RunStats};
use crate::error::{Error, Result};
use crate::graph::{DistanceTable, Graph, Vertex};
use crate::order::full_wreach_sets;
use crate::search::{Deadline, TimedOut, TurboOutcome};

const FREE: usize = usize::MAX;

#[derive(Debug, Clone, Copy)]
enum Change {
    PotAdd(Vertex, Vertex),
    FreeAdd(Vertex, Vertex),
    FreeDel(Vertex, Vertex),
}

#[derive(Debug, Clone)]
pub struct RlState<'g> {
    g: &'g Graph,
    r: usize,
    k: usize,
    /// Placed vertices in prepend order; the last entry is the leftmost.
    stack: Vec<Vertex>,
    /// Index into `stack`, or `FREE`.
    slot: Vec<usize>,
    pot: Vec<FxHashSet<Vertex>>,
    /// For free vertices: free partners joined by a path of length at most
    /// `r` whose interior is placed.
    partners: Vec<FxHashSet<Vertex>>,
    overfull: usize,
    free_by_score: BTreeSet<(usize, Vertex)>,
    free_by_degree: BTreeSet<(usize, Vertex)>,
    journal: Vec<Change>,
    frames: Vec<usize>,
    dist: Vec<usize>,
}

impl PartialEq for RlState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.g, other.g)
            && self.r == other.r
            && self.k == other.k
            && self.stack == other.stack
            && self.pot == other.pot
            && self.partners == other.partners
            && self.overfull == other.overfull
    }
}

impl Eq for RlState<'_> {}

impl<'g> RlState<'g> {
    pub fn new(g: &'g Graph, r: usize, k: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter(format!(
                "radius must be at least 1, got {r}"
            )));
        }
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "target k must be at least 1, got {k}"
            )));
        }
        let n = g.n();
        // With nothing placed, two free vertices are partners iff adjacent.
        let partners: Vec<FxHashSet<Vertex>> = g
            .vertices()
            .map(|v| g.neighbors(v).iter().copied().collect())
            .collect();
        Ok(RlState {
            g,
            r,
            k,
            stack: Vec::with_capacity(n),
            slot: vec![FREE; n],
            pot: vec![FxHashSet::default(); n],
            free_by_score: g.vertices().map(|v| (1 + partners[v].len(), v)).collect(),
            partners,
            overfull: 0,
            free_by_degree: g.vertices().map(|v| (g.degree(v), v)).collect(),
            journal: Vec::new(),
            frames: Vec::new(),
            dist: vec![usize::MAX; n],
        })
    }

    /// State obtained by prepending `order` from its right end to its left
    /// end, so that the final subordering equals `order`.
    pub fn from_order(g: &'g Graph, r: usize, k: usize, order: &[Vertex]) -> Result<Self> {
        let mut st = Self::new(g, r, k)?;
        for &v in order.iter().rev() {
            st.prepend(v)?;
        }
        Ok(st)
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Placed vertices, leftmost first.
    pub fn order(&self) -> Vec<Vertex> {
        self.stack.iter().rev().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.stack.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.stack.len() == self.g.n()
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.slot[v] == FREE
    }

    pub fn is_placed(&self, v: Vertex) -> bool {
        self.slot[v] != FREE
    }

    pub fn leftmost(&self) -> Option<Vertex> {
        self.stack.last().copied()
    }

    pub fn free_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.g.vertices().filter(move |&v| self.is_free(v))
    }

    /// `PotSreach_r(G, L_S, v)` of a placed vertex, sorted.
    pub fn potsreach_of(&self, v: Vertex) -> Result<Vec<Vertex>> {
        if self.is_free(v) {
            return Err(Error::NotPlaced(v));
        }
        let mut out: Vec<Vertex> = self.pot[v].iter().copied().collect();
        out.sort_unstable();
        Ok(out)
    }

    pub fn potsreach_len(&self, v: Vertex) -> usize {
        self.pot[v].len()
    }

    /// Size of `PotSreach` the free vertex `v` would get if prepended now.
    pub fn score(&self, v: Vertex) -> usize {
        1 + self.partners[v].len()
    }

    /// Every placed vertex has `|PotSreach| <= k`.
    pub fn is_extendable(&self) -> bool {
        self.overfull == 0
    }

    pub fn overfull_count(&self) -> usize {
        self.overfull
    }

    pub(crate) fn min_free_by_score(&self) -> Option<Vertex> {
        self.free_by_score.first().map(|&(_, v)| v)
    }

    pub(crate) fn min_free_by_degree(&self) -> Option<Vertex> {
        self.free_by_degree.first().map(|&(_, v)| v)
    }

    /// Places the free vertex `x` left of everything placed so far.
    pub fn prepend(&mut self, x: Vertex) -> Result<()> {
        if x >= self.g.n() {
            return Err(Error::InvalidParameter(format!("vertex {x} out of range")));
        }
        if self.is_placed(x) {
            return Err(Error::AlreadyPlaced(x));
        }
        self.frames.push(self.journal.len());
        self.free_by_score.remove(&(self.score(x), x));
        self.free_by_degree.remove(&(self.g.degree(x), x));
        self.slot[x] = self.stack.len();
        self.stack.push(x);

        // Shortest distances from `x` along paths whose interior is placed
        // (`x` included), so only placed vertices are expanded.
        let reached = self.bfs_through_placed(x);

        let gone: Vec<Vertex> = self.partners[x].iter().copied().collect();
        for u in gone {
            self.apply(Change::FreeDel(x, u));
            self.apply(Change::FreeDel(u, x));
        }

        for &(a, da) in &reached {
            for &(b, db) in &reached {
                if a == b || da + db > self.r || self.is_placed(b) {
                    continue;
                }
                // `b` is free and joined to `a` through `x`.
                if self.is_placed(a) {
                    if !self.pot[a].contains(&b) {
                        self.apply(Change::PotAdd(a, b));
                    }
                } else if !self.partners[a].contains(&b) {
                    self.apply(Change::FreeAdd(a, b));
                }
            }
        }
        self.apply(Change::PotAdd(x, x));
        Ok(())
    }

    /// Undoes the most recent [`prepend`](Self::prepend), i.e. removes the
    /// leftmost vertex.
    pub fn pop_front(&mut self) -> Option<Vertex> {
        let x = self.stack.pop()?;
        let start = self.frames.pop().expect("frame per placed vertex");
        while self.journal.len() > start {
            let change = self.journal.pop().expect("non-empty");
            self.revert(change);
        }
        self.slot[x] = FREE;
        self.free_by_score.insert((self.score(x), x));
        self.free_by_degree.insert((self.g.degree(x), x));
        Some(x)
    }

    fn bfs_through_placed(&mut self, x: Vertex) -> Vec<(Vertex, usize)> {
        let mut reached = vec![(x, 0)];
        self.dist[x] = 0;
        let mut i = 0;
        while i < reached.len() {
            let (y, dy) = reached[i];
            i += 1;
            if dy == self.r || (y != x && self.is_free(y)) {
                continue;
            }
            for &z in self.g.neighbors(y) {
                if self.dist[z] == usize::MAX {
                    self.dist[z] = dy + 1;
                    reached.push((z, dy + 1));
                }
            }
        }
        for &(y, _) in &reached {
            self.dist[y] = usize::MAX;
        }
        reached
    }

    fn apply(&mut self, change: Change) {
        match change {
            Change::PotAdd(a, b) => {
                self.pot[a].insert(b);
                if self.pot[a].len() == self.k + 1 {
                    self.overfull += 1;
                }
            }
            Change::FreeAdd(a, b) => {
                let s = self.score(a);
                self.partners[a].insert(b);
                self.rescore(a, s);
            }
            Change::FreeDel(a, b) => {
                let s = self.score(a);
                self.partners[a].remove(&b);
                self.rescore(a, s);
            }
        }
        self.journal.push(change);
    }

    fn revert(&mut self, change: Change) {
        match change {
            Change::PotAdd(a, b) => {
                if self.pot[a].len() == self.k + 1 {
                    self.overfull -= 1;
                }
                self.pot[a].remove(&b);
            }
            Change::FreeAdd(a, b) => {
                let s = self.score(a);
                self.partners[a].remove(&b);
                self.rescore(a, s);
            }
            Change::FreeDel(a, b) => {
                let s = self.score(a);
                self.partners[a].insert(b);
                self.rescore(a, s);
            }
        }
    }

    fn rescore(&mut self, v: Vertex, old: usize) {
        if self.is_free(v) {
            self.free_by_score.remove(&(old, v));
            self.free_by_score.insert((self.score(v), v));
        }
    }

    /// Compares the maintained sets with a direct evaluation of their
    /// definitions. Intended for tests.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let g = self.g;
        let order = self.order();
        let placed: Vec<Vertex> = order.clone();
        // Wreach within G[S]: relabel S to a compact subgraph.
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in placed.iter().enumerate() {
            local[v] = i;
        }
        let edges: Vec<(Vertex, Vertex)> = g
            .edges()
            .filter(|&(a, b)| local[a] != usize::MAX && local[b] != usize::MAX)
            .map(|(a, b)| (local[a], local[b]))
            .collect();
        let sub = Graph::from_edges(placed.len(), &edges).map_err(|e| e.to_string())?;
        let ident: Vec<Vertex> = (0..placed.len()).collect();
        let inner = full_wreach_sets(&sub, self.r, &ident).map_err(|e| e.to_string())?;

        let mut overfull = 0;
        for (i, &v) in placed.iter().enumerate() {
            let mut expect: FxHashSet<Vertex> = inner[i].iter().map(|&j| placed[j]).collect();
            expect.extend(self.free_endpoints(v));
            if expect != self.pot[v] {
                return Err(format!(
                    "PotSreach({v}) is {:?}, expected {:?}",
                    self.pot[v], expect
                ));
            }
            if expect.len() > self.k {
                overfull += 1;
            }
        }
        if overfull != self.overfull {
            return Err(format!("overfull {} != {}", self.overfull, overfull));
        }
        for v in self.free_vertices() {
            let mut expect = self.free_endpoints(v);
            expect.remove(&v);
            if expect != self.partners[v] {
                return Err(format!("partners of free {v} are stale"));
            }
            if !self.free_by_score.contains(&(self.score(v), v)) {
                return Err(format!("score index misses {v}"));
            }
        }
        if self.free_by_score.len() != self.g.n() - self.stack.len() {
            return Err("score index has stale entries".into());
        }
        Ok(())
    }

    /// Free vertices reachable from `v` within `r` hops where every vertex
    /// strictly inside the path is placed.
    fn free_endpoints(&self, v: Vertex) -> FxHashSet<Vertex> {
        let mut out = FxHashSet::default();
        let mut dist = vec![usize::MAX; self.g.n()];
        let mut queue = std::collections::VecDeque::from([v]);
        dist[v] = 0;
        while let Some(y) = queue.pop_front() {
            if y != v && self.is_free(y) {
                out.insert(y);
                continue;
            }
            if dist[y] == self.r {
                continue;
            }
            for &z in self.g.neighbors(y) {
                if dist[z] == usize::MAX {
                    dist[z] = dist[y] + 1;
                    queue.push_back(z);
                }
            }
        }
        out
    }
}

/// IC-WCOL-RL: replaces the `c` leftmost vertices of a non-extendable
/// right-to-left subordering.
///
/// The freed block is refilled from its right end outwards by a depth-first
/// search. Candidates are tried by increasing distance to the leftmost vertex
/// of the subordering on entry, then by index; a branch is cut as soon as
/// some `PotSreach` set exceeds `k`.
pub fn turbocharge_rl(
    st: &mut RlState<'_>,
    c: usize,
    dist: &DistanceTable,
    deadline: &Deadline,
    stats: &mut RunStats,
) -> Result<TurboOutcome> {
    if c == 0 {
        return Err(Error::InvalidParameter(
            "reconstruction parameter must be positive".into(),
        ));
    }
    let started = Instant::now();
    let width = c.min(st.len());
    let anchor = st.leftmost();
    let mut removed = Vec::with_capacity(width);
    for _ in 0..width {
        removed.push(st.pop_front().expect("width <= len"));
    }

    let mut candidates: Vec<Vertex> = st.free_vertices().collect();
    if let Some(a) = anchor {
        let row = dist.row(a);
        candidates.sort_by_key(|&u| (row[u], u));
    }

    let mut search = Search {
        nodes: 0,
        depth: 0,
        deadline,
    };
    let outcome = match search.fill(st, &candidates, width, 1) {
        Ok(true) => TurboOutcome::Success,
        Ok(false) => TurboOutcome::Failure,
        Err(TimedOut) => TurboOutcome::Timeout,
    };
    if outcome != TurboOutcome::Success {
        for &v in removed.iter().rev() {
            st.prepend(v)?;
        }
    }
    stats.record(Invocation {
        c: width.max(1),
        nodes: search.nodes,
        depth: search.depth.max(1),
        attempts: 1,
        success: outcome == TurboOutcome::Success,
        elapsed: started.elapsed(),
    });
    Ok(outcome)
}

struct Search<'d> {
    nodes: u64,
    depth: usize,
    deadline: &'d Deadline,
}

impl Search<'_> {
    fn fill(
        &mut self,
        st: &mut RlState<'_>,
        candidates: &[Vertex],
        remaining: usize,
        level: usize,
    ) -> std::result::Result<bool, TimedOut> {
        if remaining == 0 {
            return Ok(st.is_extendable());
        }
        self.depth = self.depth.max(level);
        for &u in candidates {
            if st.is_placed(u) {
                continue;
            }
            self.nodes += 1;
            if self.deadline.expired() {
                return Err(TimedOut);
            }
            st.prepend(u).expect("candidate is free");
            let found = if st.is_extendable() {
                match self.fill(st, candidates, remaining - 1, level + 1) {
                    Ok(found) => found,
                    Err(e) => {
                        st.pop_front();
                        return Err(e);
                    }
                }
            } else {
                false
            };
            if found {
                return Ok(true);
            }
            st.pop_front();
        }
        Ok(false)
    }
}
