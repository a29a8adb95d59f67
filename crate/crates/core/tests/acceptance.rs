//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line and then
//! asserts, so the summary survives output capturing.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use turbowcol::bounds::{degeneracy_bound, wcol_mmd_plus};
use turbowcol::driver::RunStats;
use turbowcol::merge::{breakpoints_of, recursive_merge, turbocharge_merge, MergeInstance};
use turbowcol::oracle::exact_wcol;
use turbowcol::rl::{turbocharge_rl, RlState};
use turbowcol::turbo_ic::turbocharge_ic;
use turbowcol::{
    evaluate_full_ordering, optimize, Deadline, DistanceTable, Graph, Heuristic, OrderState,
    RunConfig, Turbo, TurboOutcome, Vertex,
};

fn report(criterion: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    // Written straight to the handle so libtest does not capture it.
    let _ = writeln!(
        std::io::stderr(),
        "criterion {criterion}: {verdict} - {detail}"
    );
}

const TURBO_CONFIGS: [(Heuristic, Turbo); 6] = [
    (Heuristic::DegreeLr, Turbo::Ic),
    (Heuristic::WreachLr, Turbo::Ic),
    (Heuristic::DegreeLr, Turbo::Merge),
    (Heuristic::WreachLr, Turbo::Merge),
    (Heuristic::SreachRl, Turbo::IcRl),
    (Heuristic::DegreeRl, Turbo::IcRl),
];

fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<Vertex> {
    use rand::seq::SliceRandom;
    let mut v: Vec<Vertex> = (0..n).collect();
    v.shuffle(rng);
    v
}

#[test]
fn criterion_1_oracle_agreement() {
    let started = Instant::now();
    let mut graphs: Vec<Graph> = (1..=6).flat_map(connected_graphs_up_to_iso).collect();
    let exhaustive = graphs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let n = rng.gen_range(2..=6);
        let p = rng.gen_range(0.1..0.9);
        graphs.push(random_connected(&mut rng, n, p));
    }
    let mut runs = 0;
    let mut mismatches = Vec::new();
    for g in &graphs {
        for r in 1..=3 {
            let exact = exact_wcol(g, r, None).unwrap().wcol;
            for (h, t) in TURBO_CONFIGS {
                let res = optimize(g, &RunConfig::new(r, h, t)).unwrap();
                runs += 1;
                let certified = evaluate_full_ordering(g, r, &res.order).unwrap().wcol;
                if res.k != exact || certified != res.k {
                    mismatches.push(format!(
                        "n={} m={} r={r} {h}+{t}: {} vs {exact}",
                        g.n(),
                        g.m(),
                        res.k
                    ));
                }
            }
        }
    }
    let pass = mismatches.is_empty();
    report(
        1,
        pass,
        &format!(
            "{} graphs ({exhaustive} exhaustive, 500 random), {runs} runs, {} mismatches, {:.1?}",
            graphs.len(),
            mismatches.len(),
            started.elapsed()
        ),
    );
    assert!(pass, "{mismatches:?}");
}

#[test]
fn criterion_2_degeneracy_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for i in 0..200 {
        let n = rng.gen_range(1..=50);
        let p = rng.gen_range(0.02..0.5);
        let g = random_graph(&mut rng, n, p);
        let deg = g.degeneracy();
        let order = deg.ordering();
        let eval = evaluate_full_ordering(&g, 1, &order).unwrap().wcol;
        let by_paths = wcol_by_paths(&g, 1, &order);
        if eval != deg.value + 1 || by_paths != eval {
            failures.push((i, eval, by_paths, deg.value));
        }
    }
    let pass = failures.is_empty();
    report(
        2,
        pass,
        &format!("200 random graphs, {} failures", failures.len()),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_3_monotone_and_rebuildable() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();
    for i in 0..200 {
        let n = rng.gen_range(1..=12);
        let r = rng.gen_range(1..=4);
        let g = {
            let p = rng.gen_range(0.1..0.6);
            random_graph(&mut rng, n, p)
        };
        let order = random_order(&mut rng, n);
        let mut st = OrderState::new(&g, r, n).unwrap();
        let mut prev: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| BTreeSet::from([v])).collect();
        for (j, &v) in order.iter().enumerate() {
            st.place_back(v).unwrap();
            let now: Vec<BTreeSet<Vertex>> = g
                .vertices()
                .map(|u| st.wreach(u).iter().copied().collect())
                .collect();
            let monotone = prev.iter().zip(&now).all(|(a, b)| a.is_subset(b));
            let rebuilt = OrderState::from_order(&g, r, n, &order[..=j]).unwrap();
            let by_paths = wreach_by_paths(&g, r, &order[..=j], &all_allowed(&g));
            if !monotone || rebuilt != st || now != by_paths || st.validate().is_err() {
                failures.push((i, j));
                break;
            }
            prev = now;
        }
    }
    let pass = failures.is_empty();
    report(
        3,
        pass,
        &format!("200 placement sequences, {} failures", failures.len()),
    );
    assert!(pass, "{failures:?}");
}

/// Checks both breakpoint laws for one `(graph, subordering, v)` triple.
fn breakpoint_laws_hold(g: &Graph, r: usize, sub: &[Vertex], v: Vertex) -> bool {
    let allowed = all_allowed(g);
    let place = |p: usize| {
        let mut o = sub.to_vec();
        o.insert(p, v);
        wreach_by_paths(g, r, &o, &allowed)
    };
    let sets: Vec<_> = (0..=sub.len()).map(place).collect();
    // sets[i] has v directly before sub[i]; sets[i + 1] directly after it.
    let bp: Vec<Vertex> = (0..sub.len())
        .filter(|&i| sets[i][v] != sets[i + 1][v])
        .map(|i| sub[i])
        .collect();

    // Neighbouring breakpoint law: non-breakpoints change nobody's set.
    for i in 0..sub.len() {
        let is_bp = bp.contains(&sub[i]);
        let all_equal = sets[i] == sets[i + 1];
        if is_bp == all_equal {
            return false;
        }
    }
    // The reachable set of v is v plus the breakpoints left of it.
    for (p, s) in sets.iter().enumerate() {
        let left: BTreeSet<Vertex> = bp
            .iter()
            .copied()
            .filter(|b| sub[..p].contains(b))
            .chain([v])
            .collect();
        if s[v] != left {
            return false;
        }
    }
    let inst = MergeInstance::new(g, r, g.n(), sub.to_vec(), vec![v]).unwrap();
    let enumerated = breakpoints_of(&inst, v, g.n()).unwrap();
    if enumerated != bp {
        return false;
    }
    (1..=bp.len()).all(|k| breakpoints_of(&inst, v, k).unwrap() == bp[..k])
}

#[test]
fn criterion_4_breakpoint_laws() {
    let mut exhaustive = 0usize;
    let mut failures = Vec::new();
    for n in 1..=5 {
        for g in graphs_up_to_iso(n, false) {
            for v in g.vertices() {
                let others: Vec<Vertex> = g.vertices().filter(|&u| u != v).collect();
                for size in 0..others.len() + 1 {
                    for set in subsets(&others, size) {
                        for sub in itertools::Itertools::permutations(set.into_iter(), size) {
                            for r in 1..=3 {
                                exhaustive += 1;
                                if !breakpoint_laws_hold(&g, r, &sub, v) {
                                    failures.push((g.to_edge_list(), r, sub.clone(), v));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let random = 1500;
    for _ in 0..random {
        let n = rng.gen_range(2..=9);
        let g = {
            let p = rng.gen_range(0.15..0.6);
            random_graph(&mut rng, n, p)
        };
        let r = rng.gen_range(1..=4);
        let order = random_order(&mut rng, n);
        let v = order[0];
        let len = rng.gen_range(0..n);
        let sub = &order[1..=len.min(n - 1)];
        if !breakpoint_laws_hold(&g, r, sub, v) {
            failures.push((g.to_edge_list(), r, sub.to_vec(), v));
        }
    }
    let pass = failures.is_empty();
    report(
        4,
        pass,
        &format!(
            "{exhaustive} exhaustive and {random} random triples, {} failures",
            failures.len()
        ),
    );
    assert!(pass, "{:?}", &failures[..failures.len().min(3)]);
}

#[test]
fn criterion_5_merge_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let (mut successes, mut worst_ratio) = (0, 0.0f64);
    let count = 300;
    for i in 0..count {
        let n = rng.gen_range(2..=8);
        let g = {
            let p = rng.gen_range(0.15..0.6);
            random_graph(&mut rng, n, p)
        };
        let r = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let order = random_order(&mut rng, n);
        let s2_len = rng.gen_range(0..=3.min(n));
        let s1_len = rng.gen_range(0..=n - s2_len);
        let s1 = order[..s1_len].to_vec();
        let s2 = order[s1_len..s1_len + s2_len].to_vec();
        let inst = MergeInstance::new(&g, r, k, s1.clone(), s2.clone()).unwrap();
        let rep = recursive_merge(&inst, &Deadline::never()).unwrap();
        let allowed = all_allowed(&g);
        let exists = interleavings(&s1, &s2)
            .iter()
            .any(|o| extendable_by_paths(&g, r, k, o, &allowed));
        let found = rep.outcome == TurboOutcome::Success;
        let certified = rep
            .order
            .as_ref()
            .is_none_or(|o| extendable_by_paths(&g, r, k, o, &allowed));
        worst_ratio = worst_ratio.max(rep.max_children as f64 / (k + 1) as f64);
        successes += usize::from(found);
        if found != exists || !certified || rep.max_children > k + 1 {
            failures.push(i);
        }
    }
    let pass = failures.is_empty();
    report(
        5,
        pass,
        &format!(
            "{count} instances ({successes} mergeable), max children/(k+1) = {worst_ratio:.2}, {} failures",
            failures.len()
        ),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_6_lower_bound_soundness() {
    let mut graphs: Vec<Graph> = (1..=6).flat_map(|n| graphs_up_to_iso(n, false)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..150 {
        graphs.push({
            let p = rng.gen_range(0.15..0.8);
            random_graph(&mut rng, 7, p)
        });
    }
    let mut failures = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        for r in 1..=5 {
            let lower = wcol_mmd_plus(g, r).unwrap();
            let exact = exact_wcol(g, r, None).unwrap().wcol;
            if lower > exact || (r <= 2 && lower != degeneracy_bound(g)) {
                failures.push((i, r, lower, exact));
            }
        }
    }
    let pass = failures.is_empty();
    report(
        6,
        pass,
        &format!(
            "{} graphs x r in 1..=5, {} failures",
            graphs.len(),
            failures.len()
        ),
    );
    assert!(pass, "{failures:?}");
}

fn corpus() -> Vec<(String, Graph)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "gr"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let g = Graph::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), g)
        })
        .collect()
}

#[test]
fn criterion_7_turbocharging_improves() {
    let started = Instant::now();
    let graphs = corpus();
    let jobs: Vec<(usize, usize)> = (0..graphs.len())
        .flat_map(|i| [3, 4, 5].map(move |r| (i, r)))
        .collect();
    let order = [
        (Heuristic::WreachLr, Turbo::Merge),
        (Heuristic::DegreeLr, Turbo::Ic),
        (Heuristic::SreachRl, Turbo::IcRl),
        (Heuristic::WreachLr, Turbo::Ic),
        (Heuristic::DegreeLr, Turbo::Merge),
        (Heuristic::DegreeRl, Turbo::IcRl),
    ];
    let next = Mutex::new(0usize);
    let results = Mutex::new(Vec::new());
    let workers = std::thread::available_parallelism()
        .map_or(4, |n| n.get())
        .clamp(1, 8);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let job = {
                    let mut i = next.lock().unwrap();
                    let j = *i;
                    *i += 1;
                    j
                };
                let Some(&(gi, r)) = jobs.get(job) else { break };
                let (name, g) = &graphs[gi];
                let mut outcome = None;
                let mut never_worse = true;
                for (h, t) in order {
                    let mut cfg = RunConfig::new(r, h, t);
                    cfg.timeout = Some(Duration::from_secs(60));
                    cfg.seed = 7;
                    let plain = turbowcol::heuristics::run_plain(g, r, h).unwrap().wcol;
                    cfg.target_k = Some(plain - 1);
                    let res = optimize(g, &cfg).unwrap();
                    let certified = evaluate_full_ordering(g, r, &res.order).unwrap().wcol;
                    never_worse &= res.k <= res.baseline_k && certified == res.k;
                    if res.k < plain {
                        outcome = Some(format!("{h}+{t} {plain}->{}", res.k));
                        break;
                    }
                }
                results
                    .lock()
                    .unwrap()
                    .push((name.clone(), r, g.m(), outcome, never_worse));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort();
    let mut lines = Vec::new();
    for (name, r, m, outcome, never_worse) in &results {
        lines.push(format!(
            "{name} (m={m}) r={r}: {}{}",
            outcome.as_deref().unwrap_or("no improvement"),
            if *never_worse {
                ""
            } else {
                " [worse than baseline]"
            }
        ));
    }
    let improved = results.iter().filter(|x| x.3.is_some()).count();
    let all_sound = results.iter().all(|x| x.4);
    let sizes_ok = graphs.iter().all(|(_, g)| (62..=930).contains(&g.m())) && graphs.len() == 10;
    let pass = improved == results.len() && all_sound && sizes_ok;
    for l in &lines {
        let _ = writeln!(std::io::stderr(), "  {l}");
    }
    report(
        7,
        pass,
        &format!(
            "{improved}/{} (graph, r) pairs strictly improved, never worse: {all_sound}, {:.1?}",
            results.len(),
            started.elapsed()
        ),
    );
    assert!(pass, "{lines:#?}");
}

#[test]
fn criterion_8_restoration_and_determinism() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let (mut failed_calls, mut timed_out_calls) = (0, 0);
    let expired = Deadline::at(Instant::now());
    for i in 0..300 {
        let n = rng.gen_range(2..=9);
        let g = {
            let p = rng.gen_range(0.2..0.7);
            random_graph(&mut rng, n, p)
        };
        let r = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let c = rng.gen_range(1..=3);
        let order = random_order(&mut rng, n);
        let len = rng.gen_range(1..=n);
        let dist = DistanceTable::all_pairs(&g);
        let mut stats = RunStats::default();

        let lr = OrderState::from_order(&g, r, k, &order[..len]).unwrap();
        for deadline in [Deadline::never(), expired] {
            let mut st = lr.clone();
            let out = turbocharge_ic(&mut st, c, &dist, &deadline, &mut stats).unwrap();
            let mut st2 = lr.clone();
            let seed = rng.gen();
            let out2 = turbocharge_merge(
                &mut st2,
                c,
                &mut ChaCha8Rng::seed_from_u64(seed),
                10,
                &deadline,
                &mut stats,
            )
            .unwrap();
            for (o, s) in [(out, &st), (out2, &st2)] {
                match o {
                    TurboOutcome::Success => {}
                    TurboOutcome::Failure => failed_calls += 1,
                    TurboOutcome::Timeout => timed_out_calls += 1,
                }
                if o != TurboOutcome::Success && *s != lr {
                    failures.push(format!("lr #{i} {o:?}"));
                }
            }
        }

        let rl = RlState::from_order(&g, r, k, &order[n - len..]).unwrap();
        for deadline in [Deadline::never(), expired] {
            let mut st = rl.clone();
            let out = turbocharge_rl(&mut st, c, &dist, &deadline, &mut stats).unwrap();
            match out {
                TurboOutcome::Success => {}
                TurboOutcome::Failure => failed_calls += 1,
                TurboOutcome::Timeout => timed_out_calls += 1,
            }
            if out != TurboOutcome::Success && st != rl {
                failures.push(format!("rl #{i} {out:?}"));
            }
        }
    }

    let mut runs = 0;
    for i in 0..40 {
        let n = rng.gen_range(2..=7);
        let g = {
            let p = rng.gen_range(0.2..0.7);
            random_graph(&mut rng, n, p)
        };
        for (h, t) in TURBO_CONFIGS {
            let mut cfg = RunConfig::new(rng.gen_range(1..=3), h, t);
            cfg.seed = rng.gen();
            let a = optimize(&g, &cfg).unwrap();
            let b = optimize(&g, &cfg).unwrap();
            runs += 1;
            if a.order != b.order
                || a.k != b.k
                || a.stats.invocations.len() != b.stats.invocations.len()
            {
                failures.push(format!("determinism #{i} {h}+{t}"));
            }
        }
    }
    let pass = failures.is_empty() && failed_calls > 0 && timed_out_calls > 0;
    report(
        8,
        pass,
        &format!(
            "{failed_calls} failed and {timed_out_calls} timed-out calls restored, {runs} repeated runs identical, {} failures",
            failures.len()
        ),
    );
    assert!(pass, "{failures:?}");
}
