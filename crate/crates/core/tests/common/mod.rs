//! Independent reference implementations and graph generators for tests.
//!
//! Nothing here uses the incremental machinery of the library: reachable
//! sets are computed by enumerating simple paths straight from their
//! definitions.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rand::Rng;
use turbowcol::{Graph, Vertex};

/// Position of every vertex in `order`, `None` for free vertices.
pub fn positions(n: usize, order: &[Vertex]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = Some(i);
    }
    pos
}

/// Calls `visit` on every simple path of length at most `r` starting at
/// `src` that stays inside `allowed`.
pub fn for_each_path(
    g: &Graph,
    r: usize,
    src: Vertex,
    allowed: &[bool],
    visit: &mut dyn FnMut(&[Vertex]),
) {
    fn go(
        g: &Graph,
        r: usize,
        allowed: &[bool],
        path: &mut Vec<Vertex>,
        on: &mut [bool],
        visit: &mut dyn FnMut(&[Vertex]),
    ) {
        visit(path);
        if path.len() > r {
            return;
        }
        let last = *path.last().unwrap();
        for &z in g.neighbors(last) {
            if allowed[z] && !on[z] {
                on[z] = true;
                path.push(z);
                go(g, r, allowed, path, on, visit);
                path.pop();
                on[z] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    on[src] = true;
    go(g, r, allowed, &mut vec![src], &mut on, visit);
}

/// Weakly reachable sets with respect to a subordering, from the
/// definition: `u` is in the set of `v` if `u == v`, or `u` is placed and
/// some path of length at most `r` inside `allowed` joins `v` to `u` with
/// `u` the leftmost placed vertex on it.
pub fn wreach_by_paths(
    g: &Graph,
    r: usize,
    order: &[Vertex],
    allowed: &[bool],
) -> Vec<BTreeSet<Vertex>> {
    let pos = positions(g.n(), order);
    g.vertices()
        .map(|v| {
            let mut set = BTreeSet::from([v]);
            if !allowed[v] {
                return set;
            }
            for_each_path(g, r, v, allowed, &mut |path| {
                let end = *path.last().unwrap();
                let Some(pe) = pos[end] else { return };
                if path.iter().all(|&x| pos[x].is_none_or(|p| p >= pe)) {
                    set.insert(end);
                }
            });
            set
        })
        .collect()
}

pub fn all_allowed(g: &Graph) -> Vec<bool> {
    vec![true; g.n()]
}

/// Largest weakly reachable set over all vertices, free ones included.
pub fn wcol_by_paths(g: &Graph, r: usize, order: &[Vertex]) -> usize {
    wreach_by_paths(g, r, order, &all_allowed(g))
        .iter()
        .map(BTreeSet::len)
        .max()
        .unwrap_or(0)
}

pub fn extendable_by_paths(
    g: &Graph,
    r: usize,
    k: usize,
    order: &[Vertex],
    allowed: &[bool],
) -> bool {
    wreach_by_paths(g, r, order, allowed)
        .iter()
        .all(|s| s.len() <= k)
}

/// Potentially strongly reachable sets of the placed vertices of a
/// right-to-left subordering `order` (leftmost first).
pub fn potsreach_by_paths(g: &Graph, r: usize, order: &[Vertex]) -> Vec<Option<BTreeSet<Vertex>>> {
    let pos = positions(g.n(), order);
    let placed: Vec<bool> = pos.iter().map(Option::is_some).collect();
    let inner = wreach_by_paths(g, r, order, &placed);
    let everything = all_allowed(g);
    g.vertices()
        .map(|v| {
            pos[v]?;
            let mut set = inner[v].clone();
            for_each_path(g, r, v, &everything, &mut |path| {
                let end = *path.last().unwrap();
                let free_on_path: Vec<_> = path.iter().filter(|&&x| pos[x].is_none()).collect();
                if free_on_path == [&end] {
                    set.insert(end);
                }
            });
            Some(set)
        })
        .collect()
}

/// Exact `wcol_r` by trying every permutation.
pub fn exact_by_permutations(g: &Graph, r: usize) -> usize {
    if g.is_empty() {
        return 0;
    }
    g.vertices()
        .permutations(g.n())
        .map(|order| wcol_by_paths(g, r, &order))
        .min()
        .unwrap()
}

/// All subsets of `items` of size `k`, as sorted vectors.
pub fn subsets(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    items.iter().copied().combinations(k).collect()
}

/// Every way of interleaving the vertices of `extra` (in any order) into
/// `base` while keeping `base`'s relative order.
pub fn interleavings(base: &[Vertex], extra: &[Vertex]) -> Vec<Vec<Vertex>> {
    let total = base.len() + extra.len();
    let mut out = Vec::new();
    for perm in extra.iter().copied().permutations(extra.len()) {
        for slots in (0..total).combinations(extra.len()) {
            let mut order = Vec::with_capacity(total);
            let (mut b, mut e) = (0, 0);
            for i in 0..total {
                if e < slots.len() && slots[e] == i {
                    order.push(perm[e]);
                    e += 1;
                } else {
                    order.push(base[b]);
                    b += 1;
                }
            }
            out.push(order);
        }
    }
    out
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() == 0 || g.bfs(0).iter().all(|&d| d != turbowcol::UNREACHABLE)
}

/// Random connected graph: a random spanning tree plus random extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.insert((u, v));
            }
        }
    }
    let edges: Vec<_> = edges.into_iter().sorted().collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// All connected graphs on `n` vertices, one per isomorphism class.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    graphs_up_to_iso(n, true)
}

/// All graphs on `n` vertices, one per isomorphism class, optionally only
/// the connected ones.
pub fn graphs_up_to_iso(n: usize, connected_only: bool) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let relabel: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let canon = relabel
            .iter()
            .map(|map| {
                map.iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .fold(0u32, |acc, (_, &j)| acc | 1 << j)
            })
            .min()
            .unwrap();
        if canon != mask || !seen.insert(canon) {
            continue;
        }
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if !connected_only || is_connected(&g) {
            out.push(g);
        }
    }
    out
}
