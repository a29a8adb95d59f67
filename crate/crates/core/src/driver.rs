//! The anytime loop: take a plain heuristic ordering, then keep asking the
//! turbocharged heuristic for an ordering one below the best known value,
//! widening the repair window `c` after every failure.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{degeneracy_bound, wcol_mmd_plus};
use crate::error::{Error, Result};
use crate::graph::{DistanceTable, Graph, Vertex};
use crate::heuristics::{
    immediate_full_placements, next_vertex, next_vertex_rl, run_plain, Heuristic,
};
use crate::merge::{turbocharge_merge, DEFAULT_ATTEMPTS};
use crate::order::{evaluate_full_ordering, OrderState};
use crate::rl::{turbocharge_rl, RlState};
use crate::search::{Deadline, TurboOutcome};
use crate::turbo_ic::turbocharge_ic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Turbo {
    None,
    Ic,
    Merge,
    IcRl,
}

impl Turbo {
    pub const ALL: [Turbo; 4] = [Turbo::None, Turbo::Ic, Turbo::Merge, Turbo::IcRl];

    pub fn name(self) -> &'static str {
        match self {
            Turbo::None => "none",
            Turbo::Ic => "ic",
            Turbo::Merge => "merge",
            Turbo::IcRl => "ic-rl",
        }
    }

    /// `ic` and `merge` repair left-to-right suborderings, `ic-rl` repairs
    /// right-to-left ones.
    pub fn is_compatible(self, h: Heuristic) -> bool {
        match self {
            Turbo::None => true,
            Turbo::Ic | Turbo::Merge => h.is_left_to_right(),
            Turbo::IcRl => !h.is_left_to_right(),
        }
    }

    fn check(self, h: Heuristic) -> Result<()> {
        if self.is_compatible(h) {
            Ok(())
        } else {
            Err(Error::Incompatible {
                heuristic: h.name().into(),
                turbo: self.name().into(),
            })
        }
    }
}

impl fmt::Display for Turbo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Turbo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Turbo::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown turbocharger '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub r: usize,
    pub heuristic: Heuristic,
    pub turbo: Turbo,
    /// Wall-clock budget after the baseline; `None` runs until the target
    /// is proven infeasible.
    pub timeout: Option<Duration>,
    pub seed: u64,
    /// First target to try instead of one below the baseline.
    pub initial_target: Option<usize>,
    pub merge_attempts: usize,
    /// Stop as soon as an ordering with this value or better is found.
    pub target_k: Option<usize>,
}

impl RunConfig {
    pub fn new(r: usize, heuristic: Heuristic, turbo: Turbo) -> Self {
        RunConfig {
            r,
            heuristic,
            turbo,
            timeout: None,
            seed: 0,
            initial_target: None,
            merge_attempts: DEFAULT_ATTEMPTS,
            target_k: None,
        }
    }
}

/// One turbocharger call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    /// Reconstruction parameter actually used.
    pub c: usize,
    /// Search-tree nodes visited.
    pub nodes: u64,
    /// Deepest search level reached, between 1 and `c`.
    pub depth: usize,
    /// Number of merge rounds; 1 for the other turbochargers.
    pub attempts: usize,
    pub success: bool,
    pub elapsed: Duration,
}

impl Invocation {
    pub fn depth_over_c(&self) -> f64 {
        self.depth as f64 / self.c as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Improvement {
    /// Time since the run started.
    pub elapsed: Duration,
    pub k: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    pub cnt_tc: u64,
    pub nodes: u64,
    pub time_in_tc: Duration,
    pub invocations: Vec<Invocation>,
    /// Baseline first, then every improvement.
    pub timeline: Vec<Improvement>,
    /// The final value was shown optimal by an exhaustive failure.
    pub proven_optimal: bool,
}

impl RunStats {
    pub fn record(&mut self, inv: Invocation) {
        self.cnt_tc += 1;
        self.nodes += inv.nodes;
        self.time_in_tc += inv.elapsed;
        self.invocations.push(inv);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Attempt {
    /// A full ordering whose value is at most the target.
    Found(Vec<Vertex>),
    Failed,
    TimedOut,
}

/// Shared inputs of one turbocharged attempt.
pub struct Context<'a, 'g> {
    pub g: &'g Graph,
    pub r: usize,
    pub heuristic: Heuristic,
    pub turbo: Turbo,
    pub dist: &'a DistanceTable,
    pub deadline: &'a Deadline,
    pub merge_attempts: usize,
}

/// Builds an ordering with target `k`, calling the turbocharger with
/// parameter `c` at every point where the subordering stops being
/// extendable.
pub fn run_turbocharged(
    ctx: &Context<'_, '_>,
    k: usize,
    c: usize,
    rng: &mut ChaCha8Rng,
    stats: &mut RunStats,
) -> Result<Attempt> {
    ctx.turbo.check(ctx.heuristic)?;
    if k < 1 {
        return Err(Error::InvalidParameter(
            "target k must be at least 1".into(),
        ));
    }
    let order = if ctx.heuristic.is_left_to_right() {
        let mut st = OrderState::new(ctx.g, ctx.r, k)?;
        loop {
            if ctx.heuristic == Heuristic::DegreeLr {
                immediate_full_placements(&mut st);
            }
            if st.is_extendable() {
                if st.is_complete() {
                    break;
                }
                if ctx.deadline.expired() {
                    return Ok(Attempt::TimedOut);
                }
                let v = next_vertex(&st, ctx.heuristic)?;
                st.place_back(v)?;
            }
            if !st.is_extendable() {
                let out = match ctx.turbo {
                    Turbo::Ic => turbocharge_ic(&mut st, c, ctx.dist, ctx.deadline, stats)?,
                    Turbo::Merge => {
                        turbocharge_merge(&mut st, c, rng, ctx.merge_attempts, ctx.deadline, stats)?
                    }
                    _ => TurboOutcome::Failure,
                };
                match out {
                    TurboOutcome::Success => {}
                    TurboOutcome::Failure => return Ok(Attempt::Failed),
                    TurboOutcome::Timeout => return Ok(Attempt::TimedOut),
                }
            }
        }
        st.order().to_vec()
    } else {
        let mut st = RlState::new(ctx.g, ctx.r, k)?;
        while !st.is_complete() {
            if ctx.deadline.expired() {
                return Ok(Attempt::TimedOut);
            }
            let v = next_vertex_rl(&st, ctx.heuristic)?;
            st.prepend(v)?;
            if !st.is_extendable() {
                let out = match ctx.turbo {
                    Turbo::IcRl => turbocharge_rl(&mut st, c, ctx.dist, ctx.deadline, stats)?,
                    _ => TurboOutcome::Failure,
                };
                match out {
                    TurboOutcome::Success => {}
                    TurboOutcome::Failure => return Ok(Attempt::Failed),
                    TurboOutcome::Timeout => return Ok(Attempt::TimedOut),
                }
            }
        }
        st.order()
    };
    Ok(Attempt::Found(order))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub order: Vec<Vertex>,
    /// Certified value of `order`.
    pub k: usize,
    pub baseline_k: usize,
    /// Larger of the degeneracy and MMD+ bounds.
    pub lower_bound: usize,
    pub stats: RunStats,
    pub total: Duration,
}

/// Baseline, then lower the target one step at a time until the deadline
/// fires, `k` meets the lower bound, or a failure with `c >= n` proves the
/// target infeasible.
pub fn optimize(g: &Graph, cfg: &RunConfig) -> Result<RunResult> {
    cfg.turbo.check(cfg.heuristic)?;
    if cfg.merge_attempts == 0 {
        return Err(Error::InvalidParameter(
            "merge attempts must be positive".into(),
        ));
    }
    let started = Instant::now();
    let plain = run_plain(g, cfg.r, cfg.heuristic)?;
    let baseline_k = plain.wcol;
    let lower_bound = degeneracy_bound(g).max(wcol_mmd_plus(g, cfg.r)?);
    let mut best = plain.order;
    let mut k = baseline_k;
    let mut stats = RunStats {
        proven_optimal: k <= lower_bound,
        ..Default::default()
    };
    stats.timeline.push(Improvement {
        elapsed: started.elapsed(),
        k,
    });

    let deadline = Deadline::from_timeout(cfg.timeout);
    let reached = |k: usize| cfg.target_k.is_some_and(|t| k <= t);
    if cfg.turbo != Turbo::None && !stats.proven_optimal && !reached(k) {
        let dist = if cfg.turbo == Turbo::Merge {
            DistanceTable::OnDemand(g.clone())
        } else {
            DistanceTable::for_graph(g)
        };
        let ctx = Context {
            g,
            r: cfg.r,
            heuristic: cfg.heuristic,
            turbo: cfg.turbo,
            dist: &dist,
            deadline: &deadline,
            merge_attempts: cfg.merge_attempts,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut target = cfg.initial_target.map_or(k - 1, |t| t.clamp(1, k - 1));
        let mut c = 1;
        loop {
            match run_turbocharged(&ctx, target, c, &mut rng, &mut stats)? {
                Attempt::Found(order) => {
                    let value = evaluate_full_ordering(g, cfg.r, &order)?.wcol;
                    debug_assert!(value <= target);
                    best = order;
                    k = value;
                    stats.timeline.push(Improvement {
                        elapsed: started.elapsed(),
                        k,
                    });
                    if k <= lower_bound {
                        stats.proven_optimal = true;
                        break;
                    }
                    if reached(k) {
                        break;
                    }
                    target = k - 1;
                    c = 1;
                }
                Attempt::Failed if c >= g.n() => {
                    // The repair window covered the whole graph, so the
                    // search was exhaustive.
                    stats.proven_optimal = target + 1 == k;
                    break;
                }
                Attempt::Failed => c += 1,
                Attempt::TimedOut => break,
            }
        }
    }
    Ok(RunResult {
        order: best,
        k,
        baseline_k,
        lower_bound,
        stats,
        total: started.elapsed(),
    })
}
