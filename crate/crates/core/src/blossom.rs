//! Edmonds' blossom search. Finds some augmenting path, not a shortest one.

use std::collections::VecDeque;

use crate::graph::{AlternatingPath, Matching, SimpleGraph};

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    g: &'a SimpleGraph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    seen: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a SimpleGraph, m: &Matching) -> Self {
        let n = g.vertex_count();
        Blossom {
            g,
            mate: (0..n).map(|v| m.mate(v).unwrap_or(NONE)).collect(),
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            seen: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        self.seen.iter_mut().for_each(|s| *s = false);
        loop {
            a = self.base[a];
            self.seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Returns the free endpoint of an augmenting path from `root`.
    fn search(&mut self, root: usize) -> Option<usize> {
        let n = self.g.vertex_count();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let b = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, b, to);
                    self.mark_path(to, b, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = b;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn path_to(&self, end: usize) -> Vec<usize> {
        let mut path = vec![end];
        let mut v = end;
        loop {
            let pv = self.parent[v];
            path.push(pv);
            match self.mate[pv] {
                NONE => break,
                next => {
                    path.push(next);
                    v = next;
                }
            }
        }
        path.reverse();
        path
    }

    fn augment(&mut self, end: usize) {
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

/// Some augmenting path if the matching is not maximum, trying unmatched
/// roots in ascending order.
pub fn blossom_augment(g: &SimpleGraph, m: &Matching) -> Option<AlternatingPath> {
    let mut b = Blossom::new(g, m);
    for root in 0..g.vertex_count() {
        if b.mate[root] != NONE {
            continue;
        }
        if let Some(end) = b.search(root) {
            return Some(AlternatingPath::new(b.path_to(end)));
        }
    }
    None
}

/// A maximum matching grown from `start`.
pub fn maximum_matching_from(g: &SimpleGraph, start: &Matching) -> Matching {
    let mut b = Blossom::new(g, start);
    // A root without an augmenting path never gains one later.
    for root in 0..g.vertex_count() {
        if b.mate[root] == NONE {
            if let Some(end) = b.search(root) {
                b.augment(end);
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..g.vertex_count())
        .filter(|&v| b.mate[v] != NONE && v < b.mate[v])
        .map(|v| (v, b.mate[v]))
        .collect();
    Matching::from_pairs(g, &pairs).expect("blossom keeps a valid matching")
}

pub fn maximum_matching(g: &SimpleGraph) -> Matching {
    maximum_matching_from(g, &Matching::empty(g.vertex_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, random_regular};
    use crate::search::oracle_enumerate_augmenting;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let k4 = complete(4).unwrap();
        let m = Matching::from_pairs(&k4, &[(0, 1)]).unwrap();
        let p = blossom_augment(&k4, &m).unwrap();
        assert!(p.is_augmenting(&k4, &m));
        let mut ends = [p.first(), p.last()];
        ends.sort_unstable();
        assert_eq!(ends, [2, 3]);
        let perfect = Matching::from_pairs(&k4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(blossom_augment(&k4, &perfect), None);
        assert_eq!(maximum_matching(&cycle(7).unwrap()).size(), 3);
    }

    #[test]
    fn agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..200 {
            let g = random_regular(50, 3, seed).unwrap();
            let mut m = Matching::empty(50);
            for (u, v) in g.edges() {
                if rng.gen_bool(0.6) && !m.is_matched(u) && !m.is_matched(v) {
                    m.toggle_path(&[u, v]);
                }
            }
            let fast = blossom_augment(&g, &m);
            if let Some(p) = &fast {
                assert!(p.is_augmenting(&g, &m), "seed {seed}: {p:?}");
            }
            // from a maximum matching neither method may find anything
            let max = maximum_matching_from(&g, &m);
            assert!(max.size() >= m.size());
            assert_eq!(blossom_augment(&g, &max), None);
            let unmatched = max.unmatched();
            let slow = oracle_enumerate_augmenting(&g, &max, &unmatched, 15, 1 << 24).unwrap();
            assert_eq!(slow, None, "seed {seed}");
            if fast.is_none() {
                assert_eq!(max.size(), m.size());
            }
        }
    }
}
