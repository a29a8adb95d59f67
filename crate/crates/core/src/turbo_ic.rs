//! IC-WCOL: replace the last `c` vertices of a non-extendable subordering.

use std::time::Instant;

use crate::driver::{Invocation, RunStats};
use crate::error::{Error, Result};
use crate::graph::{DistanceTable, Vertex};
use crate::order::OrderState;
use crate::search::{Deadline, TimedOut, TurboOutcome};

/// Removes the `min(c, |S|)` rightmost vertices and searches for free
/// vertices to fill those positions, left to right, so that the result is
/// extendable.
///
/// Candidates are tried by increasing distance to the rightmost vertex on
/// entry, then by index. On failure or timeout `st` is restored exactly.
pub fn turbocharge_ic(
    st: &mut OrderState<'_>,
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
    let anchor = st.order().last().copied();
    let mut removed = Vec::with_capacity(width);
    for _ in 0..width {
        removed.push(st.pop_back().expect("width <= len"));
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
            st.place_back(v)?;
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
        st: &mut OrderState<'_>,
        candidates: &[Vertex],
        remaining: usize,
        level: usize,
    ) -> std::result::Result<bool, TimedOut> {
        if remaining == 0 {
            return Ok(st.is_extendable());
        }
        if self.deadline.expired() {
            return Err(TimedOut);
        }
        self.depth = self.depth.max(level);
        for &u in candidates {
            if !st.is_free(u) {
                continue;
            }
            self.nodes += 1;
            st.place_back(u).expect("candidate is free");
            let found = if st.is_extendable() {
                match self.fill(st, candidates, remaining - 1, level + 1) {
                    Ok(found) => found,
                    Err(e) => {
                        st.pop_back();
                        return Err(e);
                    }
                }
            } else {
                false
            };
            if found {
                return Ok(true);
            }
            st.pop_back();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn run(st: &mut OrderState<'_>, c: usize) -> TurboOutcome {
        let dist = DistanceTable::all_pairs(st.graph());
        let mut stats = RunStats::default();
        turbocharge_ic(st, c, &dist, &Deadline::never(), &mut stats).unwrap()
    }

    #[test]
    fn replaces_bad_vertex() {
        // Edge 0-1 plus isolated 2; (0) is not extendable for k = 1.
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let mut st = OrderState::from_order(&g, 1, 1, &[0]).unwrap();
        assert!(!st.is_extendable());
        assert_eq!(run(&mut st, 1), TurboOutcome::Success);
        assert_eq!(st.order(), &[2]);
        assert!(st.is_extendable());
    }

    #[test]
    fn failure_restores() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut st = OrderState::from_order(&g, 1, 2, &[0, 1]).unwrap();
        let before = st.clone();
        assert_eq!(run(&mut st, 1), TurboOutcome::Failure);
        assert_eq!(st, before);
        st.validate().unwrap();
    }

    #[test]
    fn timeout_restores() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut st = OrderState::from_order(&g, 1, 2, &[0, 1]).unwrap();
        let before = st.clone();
        let dist = DistanceTable::all_pairs(&g);
        let mut stats = RunStats::default();
        let expired = Deadline::at(Instant::now());
        let out = turbocharge_ic(&mut st, 2, &dist, &expired, &mut stats).unwrap();
        assert_eq!(out, TurboOutcome::Timeout);
        assert_eq!(st, before);
    }

    #[test]
    fn large_bound_always_succeeds() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut st = OrderState::from_order(&g, 2, 4, &[0, 2]).unwrap();
        assert_eq!(run(&mut st, 2), TurboOutcome::Success);
        assert_eq!(st.len(), 2);
    }

    #[test]
    fn zero_c_is_an_error() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let mut st = OrderState::new(&g, 1, 1).unwrap();
        let dist = DistanceTable::all_pairs(&g);
        let mut stats = RunStats::default();
        assert!(turbocharge_ic(&mut st, 0, &dist, &Deadline::never(), &mut stats).is_err());
    }
}
