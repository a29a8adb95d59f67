//! Exact weak r-coloring numbers for tiny graphs.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::heuristics::{run_plain, Heuristic};
use crate::order::{evaluate_full_ordering, OrderState};

/// Largest graph [`exact_wcol`] accepts unless told otherwise.
pub const DEFAULT_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact {
    pub wcol: usize,
    /// An ordering attaining `wcol`.
    pub order: Vec<Vertex>,
}

/// `wcol_r(G)` by branch and bound over prefixes.
///
/// Starts from the better of two greedy orderings and repeatedly asks for
/// an ordering one below the best found; prefixes whose weakly reachable
/// sets already exceed the target are cut.
pub fn exact_wcol(g: &Graph, r: usize, limit: Option<usize>) -> Result<Exact> {
    let limit = limit.unwrap_or(DEFAULT_LIMIT);
    if g.n() > limit {
        return Err(Error::TooLarge { n: g.n(), limit });
    }
    if r < 1 {
        return Err(Error::InvalidParameter(format!(
            "radius must be at least 1, got {r}"
        )));
    }
    if g.is_empty() {
        return Ok(Exact {
            wcol: 0,
            order: Vec::new(),
        });
    }
    let mut best = [Heuristic::DegreeLr, Heuristic::WreachLr]
        .into_iter()
        .map(|h| run_plain(g, r, h))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by_key(|run| run.wcol)
        .map(|run| Exact {
            wcol: run.wcol,
            order: run.order,
        })
        .expect("two candidates");
    while best.wcol > 1 {
        let mut st = OrderState::new(g, r, best.wcol - 1)?;
        if !complete(&mut st) {
            break;
        }
        let order = st.order().to_vec();
        let wcol = evaluate_full_ordering(g, r, &order)?.wcol;
        best = Exact { wcol, order };
    }
    Ok(best)
}

fn complete(st: &mut OrderState<'_>) -> bool {
    if st.is_complete() {
        return true;
    }
    let free: Vec<Vertex> = st.free_vertices().collect();
    for v in free {
        st.place_back(v).expect("free");
        if st.is_extendable() && complete(st) {
            return true;
        }
        st.pop_back();
    }
    false
}

/// `wcol_r(G)` by evaluating every permutation. For cross-checks on graphs
/// with at most `limit` vertices.
pub fn exact_wcol_bruteforce(g: &Graph, r: usize, limit: usize) -> Result<Exact> {
    if g.n() > limit {
        return Err(Error::TooLarge { n: g.n(), limit });
    }
    let mut best: Option<Exact> = None;
    for order in g.vertices().permutations(g.n()) {
        let wcol = evaluate_full_ordering(g, r, &order)?.wcol;
        if best.as_ref().is_none_or(|b| wcol < b.wcol) {
            best = Some(Exact { wcol, order });
        }
    }
    Ok(best.expect("at least the empty permutation"))
}
