//! Lower bounds on the weak r-coloring number.
//!
//! Contracting connected vertex sets of small diameter gives a minor `H`
//! with `degeneracy(H) + 1 <= wcol_r(G)` as long as every set has induced
//! diameter at most `(r - 1) / 2`. [`wcol_mmd_plus`] builds such a minor
//! greedily, min-degree first.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// `degeneracy + 1`, which equals the weak 1-coloring number and bounds
/// every larger radius from below. Zero for the empty graph.
pub fn degeneracy_bound(g: &Graph) -> usize {
    if g.is_empty() {
        0
    } else {
        g.degeneracy().value + 1
    }
}

/// Minor of `G` given by disjoint branch sets. Minor vertices keep the id of
/// the original vertex they started from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorModel {
    branch: Vec<Vec<Vertex>>,
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
}

impl MinorModel {
    /// The trivial model of `G` itself.
    pub fn identity(g: &Graph) -> Self {
        MinorModel {
            branch: g.vertices().map(|v| vec![v]).collect(),
            adj: g
                .vertices()
                .map(|v| g.neighbors(v).iter().copied().collect())
                .collect(),
            alive: vec![true; g.n()],
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.alive.len()).filter(move |&v| self.alive[v])
    }

    pub fn len(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Original vertices merged into the minor vertex `v`, sorted.
    pub fn branch_set(&self, v: usize) -> &[Vertex] {
        &self.branch[v]
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Merges `w` into `v`.
    fn contract(&mut self, v: usize, w: usize) {
        let wn = std::mem::take(&mut self.adj[w]);
        for &x in &wn {
            self.adj[x].remove(&w);
            if x != v {
                self.adj[x].insert(v);
                self.adj[v].insert(x);
            }
        }
        self.adj[v].remove(&w);
        let moved = std::mem::take(&mut self.branch[w]);
        self.branch[v].extend(moved);
        self.branch[v].sort_unstable();
        self.alive[w] = false;
    }

    fn delete(&mut self, v: usize) {
        for x in std::mem::take(&mut self.adj[v]) {
            self.adj[x].remove(&v);
        }
        self.branch[v].clear();
        self.alive[v] = false;
    }

    /// Checks that this is a minor model of `g` whose branch sets all have
    /// induced diameter at most `(r - 1) / 2`.
    pub fn check(&self, g: &Graph, r: usize) -> std::result::Result<(), String> {
        let limit = (r.saturating_sub(1) / 2) as u32;
        let mut owner = vec![usize::MAX; g.n()];
        for v in self.vertices() {
            if self.branch[v].is_empty() {
                return Err(format!("minor vertex {v} has an empty branch set"));
            }
            for &x in &self.branch[v] {
                if owner[x] != usize::MAX {
                    return Err(format!("vertex {x} lies in two branch sets"));
                }
                owner[x] = v;
            }
            let d = g
                .induced_diameter(&self.branch[v])
                .map_err(|e| e.to_string())?;
            if d > limit {
                return Err(format!("branch set of {v} has diameter {d} > {limit}"));
            }
        }
        for v in self.vertices() {
            for &w in &self.adj[v] {
                if !self.alive[w] || !self.adj[w].contains(&v) {
                    return Err(format!("minor edge {v}-{w} is dangling or one-sided"));
                }
                let witnessed = self.branch[v]
                    .iter()
                    .any(|&a| g.neighbors(a).iter().any(|&b| owner[b] == w));
                if !witnessed {
                    return Err(format!("minor edge {v}-{w} has no edge of G behind it"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmdAction {
    /// Merged with the given neighbour.
    Contract(usize),
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MmdStep {
    /// Minimum-degree minor vertex selected in this step.
    pub vertex: usize,
    pub degree: usize,
    pub action: MmdAction,
}

/// Step-by-step run of the min-degree contraction bound.
#[derive(Debug, Clone)]
pub struct MmdPlus<'g> {
    g: &'g Graph,
    r: usize,
    model: MinorModel,
    by_degree: BTreeSet<(usize, usize)>,
    answer: usize,
}

impl<'g> MmdPlus<'g> {
    pub fn new(g: &'g Graph, r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidParameter(format!(
                "radius must be at least 1, got {r}"
            )));
        }
        let model = MinorModel::identity(g);
        let by_degree = model.vertices().map(|v| (model.degree(v), v)).collect();
        Ok(MmdPlus {
            g,
            r,
            model,
            by_degree,
            answer: usize::from(!g.is_empty()),
        })
    }

    pub fn model(&self) -> &MinorModel {
        &self.model
    }

    /// Bound accumulated so far.
    pub fn bound(&self) -> usize {
        self.answer
    }

    pub fn step(&mut self) -> Option<MmdStep> {
        let &(degree, v) = self.by_degree.first()?;
        self.answer = self.answer.max(degree + 1);
        let limit = ((self.r - 1) / 2) as u32;

        let mut choice: Option<(usize, usize)> = None;
        // Two disjoint non-empty sets always span diameter at least 1.
        if limit > 0 {
            for &w in self.model.neighbors(v) {
                let key = (self.model.degree(w), w);
                if choice.is_some_and(|c| c <= key) {
                    continue;
                }
                let mut union = self.model.branch_set(v).to_vec();
                union.extend_from_slice(self.model.branch_set(w));
                let d = self.g.induced_diameter(&union).expect("non-empty");
                if d <= limit {
                    choice = Some(key);
                }
            }
        }

        let touched: Vec<usize> = match choice {
            Some((_, w)) => {
                let mut t: Vec<usize> = self.model.neighbors(v).iter().copied().collect();
                t.extend(self.model.neighbors(w).iter().copied());
                t.push(v);
                t
            }
            None => self.model.neighbors(v).iter().copied().chain([v]).collect(),
        };
        for &x in &touched {
            self.by_degree.remove(&(self.model.degree(x), x));
        }
        let action = match choice {
            Some((_, w)) => {
                self.model.contract(v, w);
                MmdAction::Contract(w)
            }
            None => {
                self.model.delete(v);
                MmdAction::Delete
            }
        };
        for &x in &touched {
            if self.model.alive[x] {
                self.by_degree.insert((self.model.degree(x), x));
            }
        }
        Some(MmdStep {
            vertex: v,
            degree,
            action,
        })
    }

    /// Runs to completion and returns the bound with the full trace.
    pub fn run(mut self) -> (usize, Vec<MmdStep>) {
        let mut trace = Vec::new();
        while let Some(s) = self.step() {
            trace.push(s);
        }
        (self.answer, trace)
    }
}

/// Lower bound on `wcol_r(G)` from greedy bounded-diameter contractions.
pub fn wcol_mmd_plus(g: &Graph, r: usize) -> Result<usize> {
    Ok(MmdPlus::new(g, r)?.run().0)
}
