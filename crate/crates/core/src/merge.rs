//! WCOL-Merge: re-insert a set of vertices into a fixed subordering.
//!
//! Given a subordering `L_{S1}`, a set `S2` of vertices to merge and the
//! remaining free vertices `T`, [`recursive_merge`] looks for an extendable
//! subordering of `S1 ∪ S2` that keeps the relative order of `S1`. For each
//! vertex `v` of `S2` only positions directly before one of its leftmost `k`
//! breakpoints, or the right end, need to be tried.

use std::collections::VecDeque;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::FxHashSet;

use crate::driver::{Invocation, RunStats};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::order::{OrderState, Side};
use crate::search::{Deadline, TimedOut, TurboOutcome};

/// Default number of random vertex sets tried per turbocharging call.
pub const DEFAULT_ATTEMPTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeInstance<'g> {
    g: &'g Graph,
    r: usize,
    k: usize,
    s1: Vec<Vertex>,
    s2: Vec<Vertex>,
}

impl<'g> MergeInstance<'g> {
    /// `s1` is the kept subordering, `s2` the vertices to merge. Everything
    /// else is free.
    pub fn new(
        g: &'g Graph,
        r: usize,
        k: usize,
        s1: Vec<Vertex>,
        mut s2: Vec<Vertex>,
    ) -> Result<Self> {
        if r < 1 || k < 1 {
            return Err(Error::InvalidParameter(format!(
                "need r >= 1 and k >= 1, got r={r} k={k}"
            )));
        }
        let mut seen = vec![false; g.n()];
        for &v in s1.iter().chain(&s2) {
            if v >= g.n() {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("vertex {v} listed twice")));
            }
        }
        s2.sort_unstable();
        Ok(MergeInstance { g, r, k, s1, s2 })
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

    pub fn s1(&self) -> &[Vertex] {
        &self.s1
    }

    pub fn s2(&self) -> &[Vertex] {
        &self.s2
    }

    /// Free vertices: neither kept nor merged.
    pub fn free(&self) -> Vec<Vertex> {
        let mut used = vec![false; self.g.n()];
        for &v in self.s1.iter().chain(&self.s2) {
            used[v] = true;
        }
        self.g.vertices().filter(|&v| !used[v]).collect()
    }

    /// `L_{S1}` on `G[S1 ∪ T]`: every vertex of `S2` is taken out.
    fn base_state(&self) -> Result<OrderState<'g>> {
        let mut st = OrderState::new(self.g, self.r, self.k)?;
        for &v in &self.s2 {
            st.deactivate(v);
        }
        for &v in &self.s1 {
            st.place_back(v)?;
        }
        Ok(st)
    }
}

/// The leftmost `limit` breakpoints of `v ∈ S2` with respect to `L_{S1}` in
/// `G[S1 ∪ T ∪ {v}]`, left to right.
pub fn breakpoints_of(inst: &MergeInstance<'_>, v: Vertex, limit: usize) -> Result<Vec<Vertex>> {
    if inst.s2.binary_search(&v).is_err() {
        return Err(Error::InvalidParameter(format!(
            "vertex {v} is not among the merged vertices"
        )));
    }
    let st = inst.base_state()?;
    Ok(Breakpoints::new(inst.g.n()).collect(&st, v, limit))
}

/// Scratch space for breakpoint enumeration.
struct Breakpoints {
    dist: Vec<usize>,
    queue: VecDeque<Vertex>,
    touched: Vec<Vertex>,
}

impl Breakpoints {
    fn new(n: usize) -> Self {
        Breakpoints {
            dist: vec![usize::MAX; n],
            queue: VecDeque::new(),
            touched: Vec::new(),
        }
    }

    /// `v` must be free and inactive in `st`.
    ///
    /// With `v` imagined directly after position `threshold`, the placed
    /// vertices that `v` reaches through active vertices that are free or lie
    /// further right are exactly the breakpoints right of `threshold`; the
    /// leftmost of them is the next breakpoint.
    fn collect(&mut self, st: &OrderState<'_>, v: Vertex, limit: usize) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut threshold: Option<usize> = None;
        while out.len() < limit {
            let next = self.leftmost_reached(st, v, threshold);
            match next {
                Some(s) => {
                    out.push(s);
                    threshold = st.position(s);
                }
                None => break,
            }
        }
        out
    }

    fn leftmost_reached(
        &mut self,
        st: &OrderState<'_>,
        v: Vertex,
        threshold: Option<usize>,
    ) -> Option<Vertex> {
        let g = st.graph();
        let allowed = |y: Vertex| {
            st.is_active(y)
                && match st.position(y) {
                    None => true,
                    Some(p) => threshold.is_none_or(|t| p > t),
                }
        };
        let mut best: Option<(usize, Vertex)> = None;
        self.dist[v] = 0;
        self.touched.push(v);
        self.queue.push_back(v);
        while let Some(y) = self.queue.pop_front() {
            let dy = self.dist[y];
            if dy == st.r() {
                continue;
            }
            for &z in g.neighbors(y) {
                if self.dist[z] != usize::MAX || !allowed(z) {
                    continue;
                }
                self.dist[z] = dy + 1;
                self.touched.push(z);
                self.queue.push_back(z);
                if let Some(p) = st.position(z) {
                    if best.is_none_or(|(bp, _)| p < bp) {
                        best = Some((p, z));
                    }
                }
            }
        }
        for &y in &self.touched {
            self.dist[y] = usize::MAX;
        }
        self.touched.clear();
        best.map(|(_, s)| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeReport {
    pub outcome: TurboOutcome,
    /// The merged subordering of `S1 ∪ S2` on success.
    pub order: Option<Vec<Vertex>>,
    /// Recursive calls made.
    pub nodes: u64,
    /// Largest number of merged vertices placed at once.
    pub depth: usize,
    /// Largest number of children generated for a single `(call, v)` pair.
    pub max_children: usize,
}

/// Searches for an extendable subordering of `S1 ∪ S2` that agrees with
/// `L_{S1}` on `S1`. Failure is a proof that none exists.
pub fn recursive_merge(inst: &MergeInstance<'_>, deadline: &Deadline) -> Result<MergeReport> {
    let mut merger = Merger {
        st: inst.base_state()?,
        pending: inst.s2.clone(),
        done: vec![false; inst.s2.len()],
        placed: 0,
        bp: Breakpoints::new(inst.g.n()),
        forced: vec![0; inst.g.n()],
        failed: FxHashSet::default(),
        deadline,
        nodes: 0,
        depth: 0,
        max_children: 0,
    };
    let (outcome, order) = match merger.solve() {
        Ok(true) => (TurboOutcome::Success, Some(merger.st.order().to_vec())),
        Ok(false) => (TurboOutcome::Failure, None),
        Err(TimedOut) => (TurboOutcome::Timeout, None),
    };
    Ok(MergeReport {
        outcome,
        order,
        nodes: merger.nodes,
        depth: merger.depth,
        max_children: merger.max_children,
    })
}

const FAILED_CAPACITY: usize = 1 << 20;

struct Merger<'d, 'g> {
    st: OrderState<'g>,
    pending: Vec<Vertex>,
    done: Vec<bool>,
    placed: usize,
    bp: Breakpoints,
    forced: Vec<usize>,
    /// Partial suborderings already known to admit no completion.
    failed: FxHashSet<Vec<Vertex>>,
    deadline: &'d Deadline,
    nodes: u64,
    depth: usize,
    max_children: usize,
}

impl Merger<'_, '_> {
    fn solve(&mut self) -> std::result::Result<bool, TimedOut> {
        self.nodes += 1;
        if self.deadline.expired() {
            return Err(TimedOut);
        }
        self.depth = self.depth.max(self.placed);
        // Reachable sets only grow from here on.
        if !self.st.is_extendable() {
            return Ok(false);
        }
        if self.placed == self.pending.len() {
            return Ok(true);
        }
        if self.forced_overflow() || self.failed.contains(self.st.order()) {
            return Ok(false);
        }
        let found = self.branch()?;
        if !found && self.failed.len() < FAILED_CAPACITY {
            self.failed.insert(self.st.order().to_vec());
        }
        Ok(found)
    }

    fn branch(&mut self) -> std::result::Result<bool, TimedOut> {
        let k = self.st.k();
        for i in 0..self.pending.len() {
            if self.done[i] {
                continue;
            }
            let v = self.pending[i];
            let breakpoints = self.bp.collect(&self.st, v, k);
            self.st.activate(v);
            self.done[i] = true;
            self.placed += 1;
            let mut children = 0;
            let slots = breakpoints.iter().map(Some).chain([None]);
            let mut found = Ok(false);
            for s in slots {
                match s {
                    Some(&s) => self.st.insert_at(v, s, Side::Before).expect("v is free"),
                    None => self.st.place_back(v).expect("v is free"),
                }
                if self.st.wreach(v).len() <= k {
                    children += 1;
                    found = self.solve();
                }
                if !matches!(found, Ok(false)) {
                    break;
                }
                self.st.remove_at(v).expect("v was just placed");
            }
            self.max_children = self.max_children.max(children);
            match found {
                Ok(false) => {}
                Ok(true) => return Ok(true),
                Err(e) => {
                    self.st.remove_at(v).expect("v is placed");
                    self.unplace(i, v);
                    return Err(e);
                }
            }
            self.unplace(i, v);
        }
        Ok(false)
    }

    fn unplace(&mut self, i: usize, v: Vertex) {
        self.st.deactivate(v);
        self.done[i] = false;
        self.placed -= 1;
    }

    /// Every pending `u` will end up in the reachable set of each free vertex
    /// within distance `r` of it in `G[T ∪ {u}]`. Returns whether this
    /// already pushes some free vertex past `k`.
    fn forced_overflow(&mut self) -> bool {
        let g = self.st.graph();
        let r = self.st.r();
        let mut touched = Vec::new();
        for i in 0..self.pending.len() {
            if self.done[i] {
                continue;
            }
            let u = self.pending[i];
            let mut seen = vec![u];
            let mut frontier = vec![u];
            for _ in 0..r {
                let mut next = Vec::new();
                for &y in &frontier {
                    for &z in g.neighbors(y) {
                        if self.st.is_active(z) && self.st.is_free(z) && !seen.contains(&z) {
                            seen.push(z);
                            next.push(z);
                        }
                    }
                }
                frontier = next;
            }
            for &w in &seen[1..] {
                if self.forced[w] == 0 {
                    touched.push(w);
                }
                self.forced[w] += 1;
            }
        }
        let k = self.st.k();
        let overflow = touched
            .iter()
            .any(|&w| self.st.wreach(w).len() + self.forced[w] > k);
        for w in touched {
            self.forced[w] = 0;
        }
        overflow
    }
}

/// Repairs a non-extendable subordering by re-merging random vertex sets.
///
/// Each attempt draws `X` from the union of the weakly reachable sets of the
/// overfull vertices, of size `min(c, |union|)`, pads it up to `c` with random
/// placed vertices and then with random free ones, and merges `X` back into
/// `L_S` restricted to `S ∖ X`. Stops at the first success. `st` is left
/// unchanged unless an attempt succeeds.
pub fn turbocharge_merge<R: Rng + ?Sized>(
    st: &mut OrderState<'_>,
    c: usize,
    rng: &mut R,
    attempts: usize,
    deadline: &Deadline,
    stats: &mut RunStats,
) -> Result<TurboOutcome> {
    if c == 0 {
        return Err(Error::InvalidParameter(
            "reconstruction parameter must be positive".into(),
        ));
    }
    if attempts == 0 {
        return Err(Error::InvalidParameter(
            "merge attempts must be positive".into(),
        ));
    }
    let started = Instant::now();
    let g = st.graph();
    let n = g.n();
    let width = c.min(n);

    let mut in_union = vec![false; n];
    for u in st.overfull_vertices() {
        for &w in st.wreach(u) {
            in_union[w] = true;
        }
    }
    let union: Vec<Vertex> = g.vertices().filter(|&w| in_union[w]).collect();

    let mut invocation = Invocation {
        c: width.max(1),
        nodes: 0,
        depth: 0,
        attempts: 0,
        success: false,
        elapsed: Default::default(),
    };
    let mut outcome = TurboOutcome::Failure;
    for _ in 0..attempts {
        let x = draw_set(st, &union, width, rng);
        let mut in_x = vec![false; n];
        for &v in &x {
            in_x[v] = true;
        }
        let s1: Vec<Vertex> = st.order().iter().copied().filter(|&v| !in_x[v]).collect();
        let inst = MergeInstance::new(g, st.r(), st.k(), s1, x.clone())?;
        let report = recursive_merge(&inst, deadline)?;
        invocation.attempts += 1;
        invocation.nodes += report.nodes;
        invocation.depth = invocation.depth.max(report.depth);
        outcome = report.outcome;
        if let Some(order) = report.order {
            *st = OrderState::from_order(g, st.r(), st.k(), &order)?;
            break;
        }
        // With every vertex merged the search is exhaustive; repeating it
        // cannot change the answer.
        if outcome == TurboOutcome::Timeout || x.len() == n {
            break;
        }
    }
    invocation.depth = invocation.depth.clamp(1, invocation.c);
    invocation.success = outcome == TurboOutcome::Success;
    invocation.elapsed = started.elapsed();
    stats.record(invocation);
    Ok(outcome)
}

fn draw_set<R: Rng + ?Sized>(
    st: &OrderState<'_>,
    union: &[Vertex],
    width: usize,
    rng: &mut R,
) -> Vec<Vertex> {
    let n = st.graph().n();
    let mut x: Vec<Vertex> = union
        .choose_multiple(rng, width.min(union.len()))
        .copied()
        .collect();
    if x.len() < width {
        let mut in_x = vec![false; n];
        for &v in &x {
            in_x[v] = true;
        }
        let mut placed: Vec<Vertex> = st.order().iter().copied().filter(|&v| !in_x[v]).collect();
        placed.shuffle(rng);
        let mut free: Vec<Vertex> = st.free_vertices().filter(|&v| !in_x[v]).collect();
        free.shuffle(rng);
        let missing = width - x.len();
        x.extend(placed.into_iter().chain(free).take(missing));
    }
    x.sort_unstable();
    x
}
