//! Augmenting path search.
//!
//! Alternating paths start with an unmatched edge, so from a path end reached
//! after an even number of edges (a "tail") the next two steps are forced up
//! to one choice: an unmatched edge to some `y`, then the matched edge from
//! `y` to its mate, unless `y` is unmatched and the path is complete.
//!
//! The exact search is a depth-first search over such double steps with
//! iterative deepening on the length cap. It prunes with an admissible lower
//! bound: the alternating *walk* distance from a tail to the nearest
//! unmatched vertex other than the start. Walks may repeat vertices, so the
//! bound never exceeds the true remaining length of a simple path. Caching
//! failures per (vertex, parity) would not be sound here: whether a tail can
//! still be completed depends on which vertices the current prefix already
//! uses, so two visits to the same state at the same depth can differ.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{AlternatingPath, Matching, SimpleGraph};

const INF: u32 = u32::MAX;

/// Below this cap the search is cheap enough that computing the bound costs
/// more than it saves.
pub const BOUND_MIN_CAP: usize = 9;

/// For every vertex seen as a tail, the two smallest alternating walk
/// distances to unmatched vertices, with distinct target vertices.
#[derive(Debug, Clone, Default)]
pub struct TargetDistance {
    labels: Vec<[(u32, u32); 2]>,
}

impl TargetDistance {
    pub fn compute(g: &SimpleGraph, m: &Matching) -> Self {
        let n = g.vertex_count();
        let mut labels = vec![[(INF, INF); 2]; n];
        let mut queue = VecDeque::new();
        let offer = |labels: &mut Vec<[(u32, u32); 2]>, t: usize, dist: u32, src: u32| -> bool {
            let slot = &mut labels[t];
            if slot[0].1 == src || slot[1].1 == src {
                return false;
            }
            if slot[0].0 == INF {
                slot[0] = (dist, src);
                true
            } else if slot[1].0 == INF {
                slot[1] = (dist, src);
                true
            } else {
                false
            }
        };
        for f in 0..n {
            if m.is_matched(f) {
                continue;
            }
            for &t in g.neighbors(f) {
                if offer(&mut labels, t, 1, f as u32) {
                    queue.push_back((t, 1u32, f as u32));
                }
            }
        }
        while let Some((u, dist, src)) = queue.pop_front() {
            let Some(y) = m.mate(u) else { continue };
            for &t in g.neighbors(y) {
                if t != u && offer(&mut labels, t, dist + 2, src) {
                    queue.push_back((t, dist + 2, src));
                }
            }
        }
        TargetDistance { labels }
    }

    /// Walk distance from tail `t` to an unmatched vertex other than `start`.
    pub fn distance(&self, t: usize, start: usize) -> u32 {
        let [a, b] = self.labels[t];
        if a.1 as usize != start {
            a.0
        } else {
            b.0
        }
    }
}

/// Reusable buffers for repeated searches on one graph.
#[derive(Debug, Clone)]
pub struct Searcher {
    visited: Vec<bool>,
    path: Vec<usize>,
    bound: Option<TargetDistance>,
    pub nodes: u64,
}

impl Searcher {
    pub fn new(n: usize) -> Self {
        Searcher {
            visited: vec![false; n],
            path: Vec::new(),
            bound: None,
            nodes: 0,
        }
    }

    /// Installs the walk-distance bound for the given matching. It must be
    /// refreshed after every change to the matching.
    pub fn refresh_bound(&mut self, g: &SimpleGraph, m: &Matching) {
        self.bound = Some(TargetDistance::compute(g, m));
    }

    pub fn clear_bound(&mut self) {
        self.bound = None;
    }

    /// Lexicographically smallest augmenting path from `start` among those of
    /// length at most `cap`, in the order of the depth-first search (which
    /// returns the smallest one among the shortest when no shorter path
    /// exists).
    pub fn find_from(&mut self, g: &SimpleGraph, m: &Matching, start: usize, cap: usize) -> Option<Vec<usize>> {
        if m.is_matched(start) || cap == 0 {
            return None;
        }
        if let Some(b) = &self.bound {
            if b.distance(start, start) as usize > cap {
                return None;
            }
        }
        self.path.clear();
        self.path.push(start);
        self.visited[start] = true;
        let found = self.extend(g, m, start, start, 0, cap);
        self.visited[start] = false;
        if found {
            for &v in &self.path {
                self.visited[v] = false;
            }
            Some(std::mem::take(&mut self.path))
        } else {
            None
        }
    }

    fn extend(&mut self, g: &SimpleGraph, m: &Matching, start: usize, tail: usize, len: usize, cap: usize) -> bool {
        self.nodes += 1;
        if len + 1 > cap {
            return false;
        }
        let skip = m.mate(tail);
        for &y in g.neighbors(tail) {
            if Some(y) == skip || self.visited[y] {
                continue;
            }
            match m.mate(y) {
                None => {
                    self.path.push(y);
                    return true;
                }
                Some(z) => {
                    let rest = match &self.bound {
                        Some(b) => b.distance(z, start),
                        None => 1,
                    };
                    if rest == INF || len + 2 + rest as usize > cap {
                        continue;
                    }
                    self.visited[y] = true;
                    self.visited[z] = true;
                    self.path.push(y);
                    self.path.push(z);
                    if self.extend(g, m, start, z, len + 2, cap) {
                        return true;
                    }
                    self.path.truncate(self.path.len() - 2);
                    self.visited[y] = false;
                    self.visited[z] = false;
                }
            }
        }
        false
    }
}

fn check_seeds(m: &Matching, seeds: &[usize]) -> Result<Vec<usize>> {
    let mut s = seeds.to_vec();
    s.sort_unstable();
    s.dedup();
    for &v in &s {
        if v >= m.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: m.vertex_count(),
            });
        }
        if m.is_matched(v) {
            return Err(Error::SeedMatched(v));
        }
    }
    Ok(s)
}

/// Minimum-length augmenting path starting in `seeds` with length at most
/// `cap`; among minimum ones, the lexicographically smallest vertex sequence.
pub fn shortest_augmenting_path(
    g: &SimpleGraph,
    m: &Matching,
    seeds: &[usize],
    cap: usize,
) -> Result<Option<AlternatingPath>> {
    let seeds = check_seeds(m, seeds)?;
    Ok(shortest_from(
        g,
        m,
        &seeds,
        1,
        cap,
        &mut Searcher::new(g.vertex_count()),
    ))
}

/// Iterative deepening over odd caps `first, first + 2, …, cap`. The caller
/// guarantees that no augmenting path shorter than `first` exists.
pub(crate) fn shortest_from(
    g: &SimpleGraph,
    m: &Matching,
    seeds: &[usize],
    first: usize,
    cap: usize,
    searcher: &mut Searcher,
) -> Option<AlternatingPath> {
    let mut bounded = false;
    let mut len = first.max(1) | 1;
    while len <= cap {
        if len >= BOUND_MIN_CAP && !bounded {
            searcher.refresh_bound(g, m);
            bounded = true;
        }
        for &s in seeds {
            if let Some(p) = searcher.find_from(g, m, s, len) {
                searcher.clear_bound();
                return Some(AlternatingPath::new(p));
            }
        }
        len += 2;
    }
    searcher.clear_bound();
    None
}

/// Length of the shortest augmenting path from any unmatched vertex, if one
/// of length at most `cap` exists.
pub fn global_shortest_length(g: &SimpleGraph, m: &Matching, cap: usize) -> Option<usize> {
    let seeds = m.unmatched();
    shortest_from(g, m, &seeds, 1, cap, &mut Searcher::new(g.vertex_count())).map(|p| p.len())
}

/// Exhaustive enumeration of simple alternating paths, one edge at a time,
/// without any pruning beyond the length cap. Meant as a test oracle.
pub fn oracle_enumerate_augmenting(
    g: &SimpleGraph,
    m: &Matching,
    seeds: &[usize],
    cap: usize,
    budget: u64,
) -> Result<Option<AlternatingPath>> {
    let seeds = check_seeds(m, seeds)?;
    let mut best: Option<Vec<usize>> = None;
    let mut nodes = 0u64;
    let mut on_path = vec![false; g.vertex_count()];
    for &s in &seeds {
        let mut path = vec![s];
        on_path[s] = true;
        oracle_step(g, m, &mut path, &mut on_path, cap, budget, &mut nodes, &mut best)?;
        on_path[s] = false;
    }
    Ok(best.map(AlternatingPath::new))
}

#[allow(clippy::too_many_arguments)]
fn oracle_step(
    g: &SimpleGraph,
    m: &Matching,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    cap: usize,
    budget: u64,
    nodes: &mut u64,
    best: &mut Option<Vec<usize>>,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let len = path.len() - 1;
    let last = path[len];
    if len % 2 == 1 && !m.is_matched(last) {
        let better = match best {
            None => true,
            Some(b) => (len, &path[..]) < (b.len() - 1, &b[..]),
        };
        if better {
            *best = Some(path.clone());
        }
        return Ok(());
    }
    if len == cap {
        return Ok(());
    }
    for &w in g.neighbors(last) {
        let matched_edge = m.is_matched_edge(last, w);
        // edge number len + 1 must be matched exactly when len is odd
        if on_path[w] || matched_edge != (len % 2 == 1) {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        oracle_step(g, m, path, on_path, cap, budget, nodes, best)?;
        on_path[w] = false;
        path.pop();
    }
    Ok(())
}

/// Per-vertex minimum odd and minimum even length (at least 2) of simple
/// alternating paths from `seeds` of length at most `max_len` whose vertices
/// all satisfy `allowed`. Exhaustive, so exponential in `max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathLengths {
    pub odd: Vec<Option<usize>>,
    pub even: Vec<Option<usize>>,
}

pub fn alternating_lengths(
    g: &SimpleGraph,
    m: &Matching,
    seeds: &[usize],
    allowed: &dyn Fn(usize) -> bool,
    max_len: usize,
    budget: u64,
) -> Result<PathLengths> {
    let n = g.vertex_count();
    let mut out = PathLengths {
        odd: vec![None; n],
        even: vec![None; n],
    };
    let mut on_path = vec![false; n];
    let mut nodes = 0u64;
    for &s in seeds {
        if !allowed(s) {
            continue;
        }
        on_path[s] = true;
        lengths_step(g, m, s, 0, allowed, max_len, budget, &mut nodes, &mut on_path, &mut out)?;
        on_path[s] = false;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn lengths_step(
    g: &SimpleGraph,
    m: &Matching,
    last: usize,
    len: usize,
    allowed: &dyn Fn(usize) -> bool,
    max_len: usize,
    budget: u64,
    nodes: &mut u64,
    on_path: &mut [bool],
    out: &mut PathLengths,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    if len > 0 {
        let slot = if len % 2 == 1 {
            &mut out.odd[last]
        } else {
            &mut out.even[last]
        };
        if slot.is_none_or(|b| len < b) {
            *slot = Some(len);
        }
    }
    if len == max_len {
        return Ok(());
    }
    if len % 2 == 1 {
        if let Some(w) = m.mate(last) {
            if !on_path[w] && allowed(w) {
                on_path[w] = true;
                lengths_step(g, m, w, len + 1, allowed, max_len, budget, nodes, on_path, out)?;
                on_path[w] = false;
            }
        }
        return Ok(());
    }
    for &w in g.neighbors(last) {
        if on_path[w] || !allowed(w) || m.mate(last) == Some(w) {
            continue;
        }
        on_path[w] = true;
        lengths_step(g, m, w, len + 1, allowed, max_len, budget, nodes, on_path, out)?;
        on_path[w] = false;
    }
    Ok(())
}
