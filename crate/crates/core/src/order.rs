//! Left-to-right suborderings with incrementally maintained weakly
//! r-reachable sets.
//!
//! For a placed vertex `u` the state keeps `wreach_inv(u)`: every vertex
//! reachable from `u` by a path of length at most `r` whose placed vertices
//! all lie right of `u`. Free vertices never constrain a path. A free vertex
//! `v` has `wreach_inv(v) = {v}`. `wreach(v)` is the inverse relation, so
//! `|wreach(v)|` only grows while vertices are appended on the right.
//!
//! Vertices can also be switched inactive, which removes them from the graph
//! as far as reachability is concerned. The merge turbocharger uses this to
//! work in `G[S1 ∪ T ∪ {v}]`.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

const FREE: usize = usize::MAX;

/// Which side of an anchor [`OrderState::insert_at`] places the new vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Before,
    After,
}

#[derive(Debug, Clone)]
pub struct OrderState<'g> {
    g: &'g Graph,
    r: usize,
    k: usize,
    order: Vec<Vertex>,
    pos: Vec<usize>,
    active: Vec<bool>,
    wreach: Vec<Vec<Vertex>>,
    wreach_inv: Vec<Vec<Vertex>>,
    overfull: usize,
    /// Active free neighbours of every vertex, i.e. the edges of `G[T]` plus
    /// the edges from placed vertices into `T`.
    free_adj: Vec<FxHashSet<Vertex>>,
    free_by_degree: BTreeSet<(Reverse<usize>, Vertex)>,
    free_by_wreach: BTreeSet<(usize, usize, Reverse<Vertex>)>,
    at_bound: BTreeSet<Vertex>,
    scratch: Scratch,
}

impl PartialEq for OrderState<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.g, other.g)
            && self.r == other.r
            && self.k == other.k
            && self.order == other.order
            && self.pos == other.pos
            && self.active == other.active
            && self.wreach == other.wreach
            && self.wreach_inv == other.wreach_inv
            && self.overfull == other.overfull
    }
}

impl Eq for OrderState<'_> {}

impl<'g> OrderState<'g> {
    /// Empty subordering on `g` for radius `r` and target bound `k`.
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
        let free_adj = g
            .vertices()
            .map(|v| g.neighbors(v).iter().copied().collect())
            .collect();
        let mut st = OrderState {
            g,
            r,
            k,
            order: Vec::with_capacity(n),
            pos: vec![FREE; n],
            active: vec![true; n],
            wreach: (0..n).map(|v| vec![v]).collect(),
            wreach_inv: (0..n).map(|v| vec![v]).collect(),
            overfull: 0,
            free_adj,
            free_by_degree: g.vertices().map(|v| (Reverse(g.degree(v)), v)).collect(),
            free_by_wreach: g.vertices().map(|v| (1, g.degree(v), Reverse(v))).collect(),
            at_bound: BTreeSet::new(),
            scratch: Scratch::new(n),
        };
        if k == 1 {
            st.at_bound = g.vertices().collect();
        }
        Ok(st)
    }

    /// State obtained by appending `order` to an empty subordering.
    pub fn from_order(g: &'g Graph, r: usize, k: usize, order: &[Vertex]) -> Result<Self> {
        let mut st = Self::new(g, r, k)?;
        for &v in order {
            st.place_back(v)?;
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

    /// Changes the target bound; only the overfull bookkeeping depends on it.
    pub fn set_k(&mut self, k: usize) -> Result<()> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!(
                "target k must be at least 1, got {k}"
            )));
        }
        self.k = k;
        self.overfull = self.wreach.iter().filter(|w| w.len() > k).count();
        self.at_bound = self
            .g
            .vertices()
            .filter(|&v| self.indexed(v) && self.wreach[v].len() == k)
            .collect();
        Ok(())
    }

    /// Placed vertices, leftmost first.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Every vertex of the graph is placed.
    pub fn is_complete(&self) -> bool {
        self.order.len() == self.g.n()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        (self.pos[v] != FREE).then_some(self.pos[v])
    }

    pub fn is_placed(&self, v: Vertex) -> bool {
        self.pos[v] != FREE
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.pos[v] == FREE
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.active[v]
    }

    /// Active free vertices in ascending index order.
    pub fn free_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.g.vertices().filter(move |&v| self.indexed(v))
    }

    pub fn free_count(&self) -> usize {
        self.free_by_degree.len()
    }

    /// `Wreach_r(G, L_S, v)` in ascending index order.
    pub fn wreach(&self, v: Vertex) -> &[Vertex] {
        &self.wreach[v]
    }

    /// `{w : v ∈ wreach(w)}` in ascending index order.
    pub fn wreach_inv(&self, v: Vertex) -> &[Vertex] {
        &self.wreach_inv[v]
    }

    pub fn overfull_count(&self) -> usize {
        self.overfull
    }

    /// Vertices whose weakly reachable set exceeds `k`.
    pub fn overfull_vertices(&self) -> Vec<Vertex> {
        self.g
            .vertices()
            .filter(|&v| self.wreach[v].len() > self.k)
            .collect()
    }

    /// `wcol_r(G, L_S) <= k`.
    pub fn is_extendable(&self) -> bool {
        self.overfull == 0
    }

    /// `wcol_r(G, L_S)`: the largest weakly reachable set.
    pub fn wcol(&self) -> usize {
        self.wreach.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn first_free_by_degree(&self) -> Option<Vertex> {
        self.free_by_degree.first().map(|&(_, v)| v)
    }

    pub(crate) fn max_free_by_wreach(&self) -> Option<Vertex> {
        self.free_by_wreach.last().map(|&(_, _, Reverse(v))| v)
    }

    /// Smallest free vertex whose weakly reachable set has exactly `k`
    /// members.
    pub fn first_at_bound(&self) -> Option<Vertex> {
        self.at_bound.first().copied()
    }

    /// Appends `v` at the right end.
    pub fn place_back(&mut self, v: Vertex) -> Result<()> {
        self.check_free(v)?;
        self.pos[v] = self.order.len();
        self.order.push(v);
        self.mark_placed(v);
        // Everything already placed lies left of `v`, so its reach runs
        // through free vertices only.
        let reach = {
            let free_adj = &self.free_adj;
            self.scratch
                .bfs(v, self.r, |x| free_adj[x].iter().copied(), |_| true)
        };
        self.set_reach(v, reach);
        Ok(())
    }

    /// Removes the rightmost placed vertex and returns it.
    pub fn pop_back(&mut self) -> Option<Vertex> {
        let v = *self.order.last()?;
        self.remove_at(v).ok()?;
        Some(v)
    }

    /// Inserts the free vertex `v` directly before or after `anchor`.
    pub fn insert_at(&mut self, v: Vertex, anchor: Vertex, side: Side) -> Result<()> {
        self.check_free(v)?;
        let at = self.position(anchor).ok_or(Error::NotPlaced(anchor))?;
        let p = match side {
            Side::Before => at,
            Side::After => at + 1,
        };
        self.insert_at_index(v, p);
        Ok(())
    }

    /// Inserts the free vertex `v` so that it ends up at index `p`.
    pub(crate) fn insert_at_index(&mut self, v: Vertex, p: usize) {
        debug_assert!(self.is_free(v) && self.active[v] && p <= self.order.len());
        if p == self.order.len() {
            self.place_back(v).expect("checked free");
            return;
        }
        self.order.insert(p, v);
        for (i, &w) in self.order.iter().enumerate().skip(p) {
            self.pos[w] = i;
        }
        self.mark_placed(v);
        let reach = self.compute_reach(v);
        self.set_reach(v, reach);
        // Vertices right of `v` lose every path that used `v` while it was free.
        self.refresh_around(v, p + 1);
    }

    /// Removes the placed vertex `v`; it becomes free again.
    pub fn remove_at(&mut self, v: Vertex) -> Result<()> {
        let p = self.position(v).ok_or(Error::NotPlaced(v))?;
        self.set_reach(v, vec![v]);
        self.order.remove(p);
        for (i, &w) in self.order.iter().enumerate().skip(p) {
            self.pos[w] = i;
        }
        self.pos[v] = FREE;
        self.mark_free(v);
        if p < self.order.len() {
            // Vertices right of `v` may now route through it.
            self.refresh_around(v, p);
        }
        Ok(())
    }

    /// Takes the free vertex `v` out of the graph.
    pub(crate) fn deactivate(&mut self, v: Vertex) {
        debug_assert!(self.is_free(v) && self.active[v]);
        let near = self.placed_near(v);
        self.unindex_free(v);
        self.active[v] = false;
        for &z in self.g.neighbors(v) {
            self.free_adj[z].remove(&v);
        }
        for w in near {
            let reach = self.compute_reach(w);
            self.set_reach(w, reach);
        }
    }

    /// Puts a deactivated vertex back into the graph as a free vertex.
    pub(crate) fn activate(&mut self, v: Vertex) {
        debug_assert!(self.is_free(v) && !self.active[v]);
        self.active[v] = true;
        for &z in self.g.neighbors(v) {
            self.free_adj[z].insert(v);
        }
        self.index_free(v);
        for w in self.placed_near(v) {
            let reach = self.compute_reach(w);
            self.set_reach(w, reach);
        }
    }

    fn check_free(&self, v: Vertex) -> Result<()> {
        if v >= self.g.n() {
            return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
        }
        if self.is_placed(v) {
            return Err(Error::AlreadyPlaced(v));
        }
        if !self.active[v] {
            return Err(Error::InvalidParameter(format!("vertex {v} is not active")));
        }
        Ok(())
    }

    fn indexed(&self, v: Vertex) -> bool {
        self.active[v] && self.pos[v] == FREE
    }

    fn mark_placed(&mut self, v: Vertex) {
        self.unindex_free(v);
        for &z in self.g.neighbors(v) {
            self.free_adj[z].remove(&v);
        }
    }

    fn mark_free(&mut self, v: Vertex) {
        for &z in self.g.neighbors(v) {
            self.free_adj[z].insert(v);
        }
        self.index_free(v);
    }

    fn index_free(&mut self, v: Vertex) {
        let d = self.g.degree(v);
        let s = self.wreach[v].len();
        self.free_by_degree.insert((Reverse(d), v));
        self.free_by_wreach.insert((s, d, Reverse(v)));
        if s == self.k {
            self.at_bound.insert(v);
        }
    }

    fn unindex_free(&mut self, v: Vertex) {
        let d = self.g.degree(v);
        let s = self.wreach[v].len();
        self.free_by_degree.remove(&(Reverse(d), v));
        self.free_by_wreach.remove(&(s, d, Reverse(v)));
        self.at_bound.remove(&v);
    }

    /// Reach of the placed vertex `v` through active vertices that are free
    /// or placed right of it.
    fn compute_reach(&mut self, v: Vertex) -> Vec<Vertex> {
        let (g, pos, active) = (self.g, &self.pos, &self.active);
        let pv = pos[v];
        self.scratch.bfs(
            v,
            self.r,
            |x| g.neighbors(x).iter().copied(),
            |x| active[x] && (pos[x] == FREE || pos[x] > pv),
        )
    }

    /// Placed vertices within distance `r` of `v` in the active graph.
    fn placed_near(&mut self, v: Vertex) -> Vec<Vertex> {
        let (g, active) = (self.g, &self.active);
        let mut near =
            self.scratch
                .bfs(v, self.r, |x| g.neighbors(x).iter().copied(), |x| active[x]);
        near.retain(|&w| w != v && self.pos[w] != FREE);
        near
    }

    /// Recomputes the reach of placed vertices at index `from` or later that
    /// lie within distance `r` of `v`.
    fn refresh_around(&mut self, v: Vertex, from: usize) {
        let mut near = self.placed_near(v);
        near.retain(|&w| self.pos[w] >= from);
        for w in near {
            let reach = self.compute_reach(w);
            self.set_reach(w, reach);
        }
    }

    /// Replaces `wreach_inv(u)` by `reach` (sorted) and patches the inverse
    /// sets.
    fn set_reach(&mut self, u: Vertex, reach: Vec<Vertex>) {
        let old = std::mem::take(&mut self.wreach_inv[u]);
        let new = reach;
        let (mut i, mut j) = (0, 0);
        while i < old.len() || j < new.len() {
            match (old.get(i), new.get(j)) {
                (Some(&a), Some(&b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(&a), Some(&b)) if a < b => {
                    self.wreach_remove(a, u);
                    i += 1;
                }
                (Some(_), Some(&b)) => {
                    self.wreach_add(b, u);
                    j += 1;
                }
                (Some(&a), None) => {
                    self.wreach_remove(a, u);
                    i += 1;
                }
                (None, Some(&b)) => {
                    self.wreach_add(b, u);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        self.wreach_inv[u] = new;
    }

    fn wreach_add(&mut self, w: Vertex, u: Vertex) {
        let old = self.wreach[w].len();
        if let Err(i) = self.wreach[w].binary_search(&u) {
            self.wreach[w].insert(i, u);
            self.size_changed(w, old, old + 1);
        }
    }

    fn wreach_remove(&mut self, w: Vertex, u: Vertex) {
        let old = self.wreach[w].len();
        if let Ok(i) = self.wreach[w].binary_search(&u) {
            self.wreach[w].remove(i);
            self.size_changed(w, old, old - 1);
        }
    }

    fn size_changed(&mut self, w: Vertex, old: usize, new: usize) {
        let k = self.k;
        match (old > k, new > k) {
            (false, true) => self.overfull += 1,
            (true, false) => self.overfull -= 1,
            _ => {}
        }
        if self.indexed(w) {
            let d = self.g.degree(w);
            self.free_by_wreach.remove(&(old, d, Reverse(w)));
            self.free_by_wreach.insert((new, d, Reverse(w)));
            if old == k {
                self.at_bound.remove(&w);
            }
            if new == k {
                self.at_bound.insert(w);
            }
        }
    }

    /// Checks every maintained invariant against a from-scratch
    /// recomputation. Intended for tests; quadratic.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let g = self.g;
        let mut fresh = OrderState::new(g, self.r, self.k).map_err(|e| e.to_string())?;
        for v in g.vertices() {
            if !self.active[v] {
                fresh.deactivate(v);
            }
        }
        for &v in &self.order {
            fresh.place_back(v).map_err(|e| e.to_string())?;
        }
        if fresh.wreach != self.wreach || fresh.wreach_inv != self.wreach_inv {
            return Err(format!(
                "reachability differs from rebuild for order {:?}",
                self.order
            ));
        }
        if fresh.overfull != self.overfull {
            return Err(format!(
                "overfull {} != rebuilt {}",
                self.overfull, fresh.overfull
            ));
        }
        for (i, &v) in self.order.iter().enumerate() {
            if self.pos[v] != i {
                return Err(format!("position of {v} is stale"));
            }
        }
        for v in g.vertices() {
            if !self.wreach[v].contains(&v) {
                return Err(format!("{v} missing from its own wreach set"));
            }
            for &u in &self.wreach[v] {
                if self.wreach_inv[u].binary_search(&v).is_err() {
                    return Err(format!("{u} in wreach({v}) but {v} not in wreach_inv({u})"));
                }
            }
            let expect: FxHashSet<Vertex> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&z| self.active[z] && self.pos[z] == FREE)
                .collect();
            if expect != self.free_adj[v] {
                return Err(format!("free adjacency of {v} is stale"));
            }
        }
        if fresh.free_by_wreach != self.free_by_wreach
            || fresh.free_by_degree != self.free_by_degree
            || fresh.at_bound != self.at_bound
        {
            return Err("free-vertex indexes differ from rebuild".into());
        }
        Ok(())
    }
}

/// Generation-stamped scratch space for depth-bounded searches.
#[derive(Debug, Clone)]
struct Scratch {
    seen: Vec<u32>,
    stamp: u32,
    frontier: Vec<Vertex>,
    next: Vec<Vertex>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            seen: vec![0; n],
            stamp: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Vertices within `depth` hops of `src` along paths whose vertices other
    /// than `src` all satisfy `allowed`. Sorted, includes `src`.
    fn bfs<N, I>(
        &mut self,
        src: Vertex,
        depth: usize,
        neighbors: N,
        allowed: impl Fn(Vertex) -> bool,
    ) -> Vec<Vertex>
    where
        N: Fn(Vertex) -> I,
        I: Iterator<Item = Vertex>,
    {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.seen[src] = stamp;
        let mut out = vec![src];
        self.frontier.clear();
        self.frontier.push(src);
        for _ in 0..depth {
            self.next.clear();
            for &x in &self.frontier {
                for y in neighbors(x) {
                    if self.seen[y] != stamp && allowed(y) {
                        self.seen[y] = stamp;
                        self.next.push(y);
                    }
                }
            }
            if self.next.is_empty() {
                break;
            }
            out.extend_from_slice(&self.next);
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        out.sort_unstable();
        out
    }
}

/// Exact `wcol_r(G, L)` of a full ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub wcol: usize,
    /// Smallest vertex attaining `wcol`; `None` on the empty graph.
    pub witness: Option<Vertex>,
}

/// Weakly r-reachable sets of a full ordering, computed independently of
/// [`OrderState`]: one BFS per source that never enters vertices left of it.
pub fn full_wreach_sets(g: &Graph, r: usize, order: &[Vertex]) -> Result<Vec<Vec<Vertex>>> {
    let pos = positions(g, order)?;
    let mut sets = vec![Vec::new(); g.n()];
    let mut dist = vec![usize::MAX; g.n()];
    let mut touched = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for &u in order {
        dist[u] = 0;
        touched.push(u);
        queue.push_back(u);
        while let Some(x) = queue.pop_front() {
            sets[x].push(u);
            if dist[x] == r {
                continue;
            }
            for &y in g.neighbors(x) {
                if dist[y] == usize::MAX && pos[y] > pos[u] {
                    dist[y] = dist[x] + 1;
                    touched.push(y);
                    queue.push_back(y);
                }
            }
        }
        for t in touched.drain(..) {
            dist[t] = usize::MAX;
        }
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    Ok(sets)
}

/// Certifies `wcol_r(G, L)` for a full ordering.
pub fn evaluate_full_ordering(g: &Graph, r: usize, order: &[Vertex]) -> Result<Evaluation> {
    if r < 1 {
        return Err(Error::InvalidParameter(format!(
            "radius must be at least 1, got {r}"
        )));
    }
    let sets = full_wreach_sets(g, r, order)?;
    let mut best = Evaluation {
        wcol: 0,
        witness: None,
    };
    for (v, s) in sets.iter().enumerate() {
        if s.len() > best.wcol {
            best = Evaluation {
                wcol: s.len(),
                witness: Some(v),
            };
        }
    }
    Ok(best)
}

fn positions(g: &Graph, order: &[Vertex]) -> Result<Vec<usize>> {
    if order.len() != g.n() {
        return Err(Error::NotPermutation(format!(
            "{} entries for {} vertices",
            order.len(),
            g.n()
        )));
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in order.iter().enumerate() {
        if v >= g.n() {
            return Err(Error::NotPermutation(format!("vertex {v} out of range")));
        }
        if pos[v] != usize::MAX {
            return Err(Error::NotPermutation(format!("vertex {v} appears twice")));
        }
        pos[v] = i;
    }
    Ok(pos)
}

/// Parses an ordering file: one original vertex label per line, leftmost
/// first. Blank lines and `#` comments are skipped.
pub fn parse_ordering(g: &Graph, text: &str) -> Result<Vec<Vertex>> {
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let label: i64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("`{line}` is not an integer vertex label"),
        })?;
        let v = g.vertex_of(label).ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("unknown vertex label {label}"),
        })?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("label {label} repeated"),
            });
        }
        order.push(v);
    }
    if order.len() != g.n() {
        return Err(Error::NotPermutation(format!(
            "ordering lists {} of {} vertices",
            order.len(),
            g.n()
        )));
    }
    Ok(order)
}

/// Writes an ordering as one label per line.
pub fn format_ordering(g: &Graph, order: &[Vertex]) -> String {
    let mut out = String::new();
    for &v in order {
        let _ = writeln!(out, "{}", g.label(v));
    }
    out
}
