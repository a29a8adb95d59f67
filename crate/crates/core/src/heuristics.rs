//! Greedy vertex-selection rules.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::order::{evaluate_full_ordering, OrderState};
use crate::rl::RlState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Left to right, largest static degree first.
    DegreeLr,
    /// Left to right, largest weakly reachable set first, then largest
    /// degree.
    WreachLr,
    /// Right to left, smallest potentially strongly reachable set first.
    SreachRl,
    /// Right to left, smallest static degree first.
    DegreeRl,
}

impl Heuristic {
    pub const ALL: [Heuristic; 4] = [
        Heuristic::DegreeLr,
        Heuristic::WreachLr,
        Heuristic::SreachRl,
        Heuristic::DegreeRl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::DegreeLr => "degree-lr",
            Heuristic::WreachLr => "wreach",
            Heuristic::SreachRl => "sreach",
            Heuristic::DegreeRl => "degree-rl",
        }
    }

    pub fn is_left_to_right(self) -> bool {
        matches!(self, Heuristic::DegreeLr | Heuristic::WreachLr)
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Heuristic::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown heuristic '{s}'")))
    }
}

/// Next vertex to append for a left-to-right rule.
pub fn next_vertex(st: &OrderState<'_>, kind: Heuristic) -> Result<Vertex> {
    let v = match kind {
        Heuristic::DegreeLr => st.first_free_by_degree(),
        Heuristic::WreachLr => st.max_free_by_wreach(),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{kind} builds right to left and needs a right-to-left state"
            )))
        }
    };
    v.ok_or(Error::NoFreeVertex)
}

/// Next vertex to prepend for a right-to-left rule.
pub fn next_vertex_rl(st: &RlState<'_>, kind: Heuristic) -> Result<Vertex> {
    let v = match kind {
        Heuristic::SreachRl => st.min_free_by_score(),
        Heuristic::DegreeRl => st.min_free_by_degree(),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{kind} builds left to right and needs a left-to-right state"
            )))
        }
    };
    v.ok_or(Error::NoFreeVertex)
}

/// Appends free vertices whose weakly reachable set already has `k`
/// members, smallest index first, for as long as the subordering stays
/// extendable. Such a vertex can always go next without loss.
pub fn immediate_full_placements(st: &mut OrderState<'_>) {
    while st.is_extendable() {
        let Some(v) = st.first_at_bound() else { break };
        st.place_back(v).expect("indexed vertex is free");
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainRun {
    pub order: Vec<Vertex>,
    pub wcol: usize,
}

/// Full ordering produced by `kind` without any target bound.
pub fn run_plain(g: &Graph, r: usize, kind: Heuristic) -> Result<PlainRun> {
    let k = g.n().max(1);
    let order = if kind.is_left_to_right() {
        let mut st = OrderState::new(g, r, k)?;
        while !st.is_complete() {
            let v = next_vertex(&st, kind)?;
            st.place_back(v)?;
        }
        st.order().to_vec()
    } else {
        let mut st = RlState::new(g, r, k)?;
        while !st.is_complete() {
            let v = next_vertex_rl(&st, kind)?;
            st.prepend(v)?;
        }
        st.order()
    };
    let wcol = evaluate_full_ordering(g, r, &order)?.wcol;
    Ok(PlainRun { order, wcol })
}
