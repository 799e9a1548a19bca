//! Regular graphs, matchings and alternating paths.
//!
//! Vertices are dense indices `0..n` and adjacency lists are sorted, so every
//! traversal visits neighbors in ascending order.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable simple undirected graph in compressed adjacency form.
///
/// Degrees may differ; the search and matching routines work on any simple
/// graph. [`Graph`] adds the regularity guarantee.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl SimpleGraph {
    /// Validates an edge list: indices in range, no loops, no repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::NonSimple(format!("loop at vertex {u}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::NonSimple(format!("repeated edge {v}-{}", w[0])));
            }
            offsets.push(offsets[v] + list.len());
        }
        Ok(SimpleGraph {
            offsets,
            targets: lists.into_iter().flatten().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbors of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree_of(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && v < self.vertex_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Position of the directed edge `v -> w` in the flat adjacency array.
    /// Useful for per-edge counters.
    pub fn slot(&self, v: usize, w: usize) -> Option<usize> {
        self.neighbors(v).binary_search(&w).ok().map(|i| self.offsets[v] + i)
    }

    pub fn slot_count(&self) -> usize {
        self.targets.len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Common degree if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree_of(0);
        (0..self.vertex_count()).all(|v| self.degree_of(v) == d).then_some(d)
    }

    /// Graph obtained by renaming vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimpleGraph> {
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        SimpleGraph::from_edges(self.vertex_count(), &edges)
    }
}

/// Immutable simple `d`-regular graph with `d >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    inner: SimpleGraph,
    d: usize,
}

impl Graph {
    /// Validates an edge list and builds the graph. Rejects loops, repeated
    /// edges and degree sequences that are not constant.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InfeasibleParams("graph needs at least one vertex".into()));
        }
        Graph::try_from(SimpleGraph::from_edges(n, edges)?)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn as_simple(&self) -> &SimpleGraph {
        &self.inner
    }

    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        Graph::try_from(self.inner.relabel(perm)?)
    }
}

impl TryFrom<SimpleGraph> for Graph {
    type Error = Error;

    fn try_from(inner: SimpleGraph) -> Result<Self> {
        if inner.vertex_count() == 0 {
            return Err(Error::InfeasibleParams("graph needs at least one vertex".into()));
        }
        let d = inner.degree_of(0);
        if let Some(v) = (0..inner.vertex_count()).find(|&v| inner.degree_of(v) != d) {
            return Err(Error::NotRegular {
                vertex: v,
                found: inner.degree_of(v),
                expected: d,
            });
        }
        if d == 0 {
            return Err(Error::InfeasibleParams("degree must be positive".into()));
        }
        Ok(Graph { inner, d })
    }
}

impl std::ops::Deref for Graph {
    type Target = SimpleGraph;

    fn deref(&self) -> &SimpleGraph {
        &self.inner
    }
}

/// Mate assignment over the vertices of a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: vec![None; n] }
    }

    /// Builds a matching from a list of pairs and checks it against `g`.
    pub fn from_pairs(g: &SimpleGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(g.vertex_count());
        for &(u, v) in pairs {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("{u}-{v} is not an edge")));
            }
            if m.mate[u].is_some() || m.mate[v].is_some() {
                return Err(Error::InvalidMatching(format!(
                    "pair {u}-{v} shares a vertex with another pair"
                )));
            }
            m.mate[u] = Some(v);
            m.mate[v] = Some(u);
        }
        Ok(m)
    }

    pub fn vertex_count(&self) -> usize {
        self.mate.len()
    }

    /// Number of matched pairs.
    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    #[inline]
    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    #[inline]
    pub fn is_matched(&self, v: usize) -> bool {
        self.mate[v].is_some()
    }

    pub fn is_matched_edge(&self, u: usize, v: usize) -> bool {
        self.mate[u] == Some(v)
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub fn unmatched(&self) -> Vec<usize> {
        (0..self.mate.len()).filter(|&v| self.mate[v].is_none()).collect()
    }

    pub fn unmatched_count(&self) -> usize {
        self.mate.iter().filter(|m| m.is_none()).count()
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(Option::is_some)
    }

    /// Checks involution and that every pair is an edge of `g`.
    pub fn validate(&self, g: &SimpleGraph) -> Result<()> {
        if self.mate.len() != g.vertex_count() {
            return Err(Error::InvalidMatching("size differs from graph".into()));
        }
        for (v, m) in self.mate.iter().enumerate() {
            if let Some(w) = *m {
                if w == v || self.mate.get(w).copied().flatten() != Some(v) {
                    return Err(Error::InvalidMatching(format!("mate of {v} is not involutive")));
                }
                if !g.has_edge(v, w) {
                    return Err(Error::InvalidMatching(format!("{v}-{w} is not an edge")));
                }
            }
        }
        Ok(())
    }

    /// Replaces the matching by its symmetric difference with the edges of
    /// the walk `vertices`. No validation; an alternating path keeps the
    /// result a matching.
    pub fn toggle_path(&mut self, vertices: &[usize]) {
        let was_matched: Vec<bool> = vertices.windows(2).map(|w| self.mate[w[0]] == Some(w[1])).collect();
        // unmatch first so that pairs inside the path do not clobber the new ones
        for (w, &matched) in vertices.windows(2).zip(&was_matched) {
            if matched {
                self.mate[w[0]] = None;
                self.mate[w[1]] = None;
            }
        }
        for (w, &matched) in vertices.windows(2).zip(&was_matched) {
            if !matched {
                self.mate[w[0]] = Some(w[1]);
                self.mate[w[1]] = Some(w[0]);
            }
        }
    }

    /// Number of edges in the symmetric difference with `other`.
    pub fn difference_size(&self, other: &Matching) -> usize {
        let mut count = 0;
        for v in 0..self.mate.len() {
            if let Some(w) = self.mate[v] {
                if v < w && other.mate[v] != Some(w) {
                    count += 1;
                }
            }
            if let Some(w) = other.mate[v] {
                if v < w && self.mate[v] != Some(w) {
                    count += 1;
                }
            }
        }
        count
    }
}

/// Parity of a path length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(len: usize) -> Self {
        if len.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Path `v_0 ... v_l` whose first edge is unmatched and whose edges
/// alternate. Odd positions are head positions, even positions `>= 2` are
/// tail positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlternatingPath {
    vertices: Vec<usize>,
}

impl AlternatingPath {
    /// Wraps a vertex sequence without checking it.
    pub fn new(vertices: Vec<usize>) -> Self {
        AlternatingPath { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.len())
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("path has at least one vertex")
    }

    /// Checks self-avoidance, edge existence and alternation.
    pub fn check_alternating(&self, g: &SimpleGraph, m: &Matching) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::BadInput("empty path".into()));
        }
        let mut seen = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            if v >= g.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: g.vertex_count(),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::BadInput(format!("vertex {v} repeats")));
            }
        }
        for (i, w) in self.vertices.windows(2).enumerate() {
            if !g.has_edge(w[0], w[1]) {
                return Err(Error::BadInput(format!("{}-{} is not an edge", w[0], w[1])));
            }
            let matched = m.is_matched_edge(w[0], w[1]);
            if matched != (i % 2 == 1) {
                return Err(Error::BadInput(format!(
                    "edge {} ({}-{}) breaks alternation",
                    i, w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn is_alternating(&self, g: &SimpleGraph, m: &Matching) -> bool {
        self.check_alternating(g, m).is_ok()
    }

    pub fn is_augmenting(&self, g: &SimpleGraph, m: &Matching) -> bool {
        self.len() % 2 == 1 && self.is_alternating(g, m) && !m.is_matched(self.first()) && !m.is_matched(self.last())
    }
}

/// Flips an augmenting path: the result is `m` xor the edges of `p`.
pub fn flip_augmenting(g: &SimpleGraph, m: &Matching, p: &AlternatingPath) -> Result<Matching> {
    p.check_alternating(g, m)
        .map_err(|e| Error::NotAugmenting(e.to_string()))?;
    if p.len().is_multiple_of(2) {
        return Err(Error::NotAugmenting(format!("length {} is even", p.len())));
    }
    for end in [p.first(), p.last()] {
        if m.is_matched(end) {
            return Err(Error::NotAugmenting(format!("endpoint {end} is matched")));
        }
    }
    let mut out = m.clone();
    out.toggle_path(p.vertices());
    Ok(out)
}

/// Fraction of unmatched vertices, `|U| / n`.
pub fn unmatched_fraction(g: &SimpleGraph, m: &Matching) -> Ratio<u64> {
    Ratio::new(m.unmatched_count() as u64, g.vertex_count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn complete_and_cycle() {
        let g = k4();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.edge_count(), 6);
        let c = cycle(6);
        assert_eq!(c.degree(), 2);
        assert_eq!(c.neighbors(0), &[1, 5]);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(
            Graph::from_edges(4, &[(0, 1), (1, 2)]),
            Err(Error::NotRegular { .. })
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 1), (1, 0)]),
            Err(Error::NonSimple(_))
        ));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 0), (1, 1)]),
            Err(Error::NonSimple(_))
        ));
        assert!(matches!(
            SimpleGraph::from_edges(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn flip_on_path_graph() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = Matching::from_pairs(&g, &[(1, 2)]).unwrap();
        let p = AlternatingPath::new(vec![0, 1, 2, 3]);
        let out = flip_augmenting(&g, &m, &p).unwrap();
        assert_eq!(out.pairs(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn flip_length_one() {
        let g = k4();
        let m = Matching::from_pairs(&g, &[(0, 1)]).unwrap();
        let out = flip_augmenting(&g, &m, &AlternatingPath::new(vec![2, 3])).unwrap();
        assert_eq!(out.pairs(), vec![(0, 1), (2, 3)]);
        assert!(out.is_perfect());
    }

    #[test]
    fn flip_on_six_cycle() {
        let g = cycle(6);
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4)]).unwrap();
        let p = AlternatingPath::new(vec![0, 1, 2, 3, 4, 5]);
        let out = flip_augmenting(&g, &m, &p).unwrap();
        assert_eq!(out.pairs(), vec![(0, 1), (2, 3), (4, 5)]);
    }

    #[test]
    fn flip_rejects_non_augmenting() {
        let g = cycle(6);
        let m = Matching::from_pairs(&g, &[(1, 2), (3, 4)]).unwrap();
        for bad in [vec![0, 1, 2, 3], vec![1, 2, 3], vec![0, 5, 4, 3, 2], vec![0, 2]] {
            assert!(matches!(
                flip_augmenting(&g, &m, &AlternatingPath::new(bad)),
                Err(Error::NotAugmenting(_))
            ));
        }
    }

    #[test]
    fn fractions() {
        let g = k4();
        let m = Matching::from_pairs(&g, &[(0, 1)]).unwrap();
        assert_eq!(unmatched_fraction(&g, &m), Ratio::new(1, 2));
        let p = Matching::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(unmatched_fraction(&g, &p), Ratio::new(0, 1));
        let c = cycle(6);
        let m = Matching::from_pairs(&c, &[(1, 2)]).unwrap();
        assert_eq!(unmatched_fraction(&c, &m), Ratio::new(2, 3));
    }

    #[test]
    fn matching_validation() {
        let g = cycle(6);
        assert!(Matching::from_pairs(&g, &[(0, 2)]).is_err());
        assert!(Matching::from_pairs(&g, &[(0, 1), (1, 2)]).is_err());
    }
}
