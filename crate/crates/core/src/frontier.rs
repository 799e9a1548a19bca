//! Level sets of alternating reachability from a seed set, grown one matched
//! pair at a time with optional forbidden exit edges, and the head/tail
//! classification inside each level.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Matching, SimpleGraph};
use crate::search::{alternating_lengths, PathLengths};

/// Node budget for the exhaustive classification at a single level.
pub const DEFAULT_PATH_BUDGET: u64 = 1 << 28;

/// Per-level sets of edges through which a level may not be left.
/// Levels past the end are empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ForbiddenSchedule {
    levels: Vec<Vec<(usize, usize)>>,
}

impl ForbiddenSchedule {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(g: &SimpleGraph, levels: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(levels.len());
        for set in levels {
            let mut norm = Vec::with_capacity(set.len());
            for (u, v) in set {
                if !g.has_edge(u, v) {
                    return Err(Error::BadInput(format!("forbidden pair ({u}, {v}) is not an edge")));
                }
                norm.push((u.min(v), u.max(v)));
            }
            norm.sort_unstable();
            norm.dedup();
            out.push(norm);
        }
        Ok(ForbiddenSchedule { levels: out })
    }

    pub fn at(&self, k: usize) -> &[(usize, usize)] {
        self.levels.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn is_forbidden(&self, k: usize, u: usize, v: usize) -> bool {
        self.at(k).binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Whether every level forbids at most `d · seeds` edges.
    pub fn within_budget(&self, d: usize, seeds: usize) -> bool {
        self.levels.iter().all(|set| set.len() <= d * seeds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Outside,
    Seed,
    Head,
    Tail,
    Both,
}

/// One sealed level. `lengths` holds the shortest odd and even alternating
/// path lengths from the seeds inside the level set, capped at `2·level`.
#[derive(Debug, Clone)]
pub struct FrontierState {
    pub level: usize,
    pub labels: Vec<Label>,
    pub lengths: PathLengths,
    pub seeds: Vec<usize>,
    pub members: Vec<usize>,
    pub heads: Vec<usize>,
    pub tails: Vec<usize>,
    pub both: Vec<usize>,
}

impl FrontierState {
    pub fn contains(&self, v: usize) -> bool {
        self.labels[v] != Label::Outside
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Reachable by an odd path (possibly a seed, which means augmenting).
    pub fn reaches_odd(&self, v: usize) -> bool {
        self.lengths.odd[v].is_some()
    }

    /// Reachable by an even path of length at least 2.
    pub fn reaches_even(&self, v: usize) -> bool {
        self.lengths.even[v].is_some()
    }

    pub fn is_tail_or_seed(&self, v: usize) -> bool {
        matches!(self.labels[v], Label::Tail | Label::Seed)
    }

    /// Seeds that are the end of an odd path inside the level, i.e. the
    /// endpoints of augmenting paths of length at most `2·level`.
    pub fn augmenting_seeds(&self) -> Vec<usize> {
        self.seeds.iter().copied().filter(|&s| self.reaches_odd(s)).collect()
    }

    /// Edges with exactly one endpoint in the level set, inner endpoint first.
    pub fn exit_edges(&self, g: &SimpleGraph) -> Vec<(usize, usize)> {
        self.members
            .iter()
            .flat_map(|&u| {
                g.neighbors(u)
                    .iter()
                    .filter(|&&w| !self.contains(w))
                    .map(move |&w| (u, w))
            })
            .collect()
    }

    /// Seeds, heads, tails and both-type vertices partition the level set and
    /// the matching pairs heads with tails.
    pub fn partition_holds(&self, m: &Matching) -> bool {
        let counted = self.seeds.len() + self.heads.len() + self.tails.len() + self.both.len();
        counted == self.members.len()
            && self.augmenting_seeds().is_empty()
            && self.heads.len() == self.tails.len()
            && self
                .heads
                .iter()
                .all(|&h| m.mate(h).is_some_and(|t| self.labels[t] == Label::Tail))
            && self
                .both
                .iter()
                .all(|&b| m.mate(b).is_some_and(|w| self.labels[w] == Label::Both))
    }
}

fn classify(
    g: &SimpleGraph,
    m: &Matching,
    seeds: &[usize],
    in_set: &[bool],
    level: usize,
    budget: u64,
) -> Result<FrontierState> {
    let n = g.vertex_count();
    let lengths = alternating_lengths(g, m, seeds, &|v| in_set[v], 2 * level, budget)?;
    let mut labels = vec![Label::Outside; n];
    let (mut members, mut heads, mut tails, mut both) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for v in (0..n).filter(|&v| in_set[v]) {
        members.push(v);
        labels[v] = if seeds.binary_search(&v).is_ok() {
            Label::Seed
        } else {
            match (lengths.odd[v].is_some(), lengths.even[v].is_some()) {
                (true, true) => {
                    both.push(v);
                    Label::Both
                }
                (true, false) => {
                    heads.push(v);
                    Label::Head
                }
                (false, true) => {
                    tails.push(v);
                    Label::Tail
                }
                (false, false) => unreachable!("vertex {v} in level {level} has no witness path"),
            }
        };
    }
    Ok(FrontierState {
        level,
        labels,
        lengths,
        seeds: seeds.to_vec(),
        members,
        heads,
        tails,
        both,
    })
}

/// Levels `0..=max_level`. A matched pair outside level `k` joins level
/// `k + 1` when one of its ends is adjacent, through an edge not forbidden at
/// `k`, to a seed or to a vertex with an even path inside level `k`.
pub fn grow_frontier(
    g: &SimpleGraph,
    m: &Matching,
    seeds: &[usize],
    schedule: &ForbiddenSchedule,
    max_level: usize,
    budget: u64,
) -> Result<Vec<FrontierState>> {
    let n = g.vertex_count();
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    for &s in &seeds {
        if s >= n {
            return Err(Error::VertexOutOfRange { vertex: s, n });
        }
        if m.is_matched(s) {
            return Err(Error::SeedMatched(s));
        }
    }
    let mut in_set = vec![false; n];
    for &s in &seeds {
        in_set[s] = true;
    }
    let mut states = vec![classify(g, m, &seeds, &in_set, 0, budget)?];
    for k in 0..max_level {
        let cur = &states[k];
        let mut added = Vec::new();
        for &u in &cur.members {
            if cur.labels[u] != Label::Seed && !cur.reaches_even(u) {
                continue;
            }
            for &v in g.neighbors(u) {
                let Some(w) = m.mate(v) else { continue };
                if in_set[v] || schedule.is_forbidden(k, u, v) {
                    continue;
                }
                debug_assert!(!m.is_matched_edge(u, v));
                added.push(v);
                added.push(w);
            }
        }
        for v in added {
            in_set[v] = true;
        }
        states.push(classify(g, m, &seeds, &in_set, k + 1, budget)?);
    }
    Ok(states)
}

/// Edges inside tails-and-seeds at `level` where neither end is reachable by
/// an odd path at `level + 1`. The list is expected to be empty.
pub fn tail_edge_failures(g: &SimpleGraph, states: &[FrontierState], level: usize) -> Vec<(usize, usize)> {
    let (cur, next) = (&states[level], &states[level + 1]);
    g.edges()
        .filter(|&(x, y)| cur.is_tail_or_seed(x) && cur.is_tail_or_seed(y))
        .filter(|&(x, y)| !next.reaches_odd(x) && !next.reaches_odd(y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_regular;

    fn path6() -> (SimpleGraph, Matching) {
        let g = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4)]).unwrap();
        (g, m)
    }

    #[test]
    fn path_example() {
        let (g, m) = path6();
        let states = grow_frontier(&g, &m, &[0], &ForbiddenSchedule::empty(), 3, DEFAULT_PATH_BUDGET).unwrap();
        assert_eq!(states[0].members, vec![0]);
        assert_eq!(states[1].members, vec![0, 1, 2]);
        assert_eq!(states[1].heads, vec![1]);
        assert_eq!(states[1].tails, vec![2]);
        assert_eq!(states[2].members, vec![0, 1, 2, 3, 4]);
        assert_eq!(states[2].labels[4], Label::Tail);
        // 5 is unmatched, so the frontier stops; 0-1-2-3-4-5 is augmenting
        assert_eq!(states[3].members, states[2].members);
        assert!(states.iter().all(|s| s.partition_holds(&m)));
    }

    #[test]
    fn forbidden_exit() {
        let (g, m) = path6();
        let schedule = ForbiddenSchedule::new(&g, vec![vec![(1, 0)]]).unwrap();
        let states = grow_frontier(&g, &m, &[0], &schedule, 2, DEFAULT_PATH_BUDGET).unwrap();
        assert_eq!(states[1].members, vec![0]);
        assert_eq!(states[2].members, vec![0, 1, 2]);
        assert!(ForbiddenSchedule::new(&g, vec![vec![(0, 2)]]).is_err());
        assert_eq!(
            grow_frontier(&g, &m, &[1], &schedule, 1, DEFAULT_PATH_BUDGET).unwrap_err(),
            Error::SeedMatched(1)
        );
    }

    #[test]
    fn monotone_and_tail_edges() {
        for seed in 0..20 {
            let g = random_regular(40, 3, seed).unwrap();
            let mut m = Matching::empty(40);
            for (u, v) in g.edges() {
                if !(u + v + seed as usize).is_multiple_of(3) && !m.is_matched(u) && !m.is_matched(v) {
                    m.toggle_path(&[u, v]);
                }
            }
            let seeds = m.unmatched();
            let states = grow_frontier(&g, &m, &seeds, &ForbiddenSchedule::empty(), 5, DEFAULT_PATH_BUDGET).unwrap();
            for w in states.windows(2) {
                assert!(w[0].members.iter().all(|&v| w[1].contains(v)));
                assert!(w[0].both.iter().all(|&v| w[1].labels[v] == Label::Both));
            }
            for k in 0..5 {
                assert_eq!(tail_edge_failures(&g, &states, k), vec![], "seed {seed} level {k}");
            }
        }
    }
}
