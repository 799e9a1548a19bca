//! Seeded instance generators.
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64`, so a `GeneratorSpec`
//! maps to one edge list on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    RandomRegular,
    FiniteCayley,
    Circulant,
    PrismCliqueChain,
    Cycle,
    Complete,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| Error::BadInput(format!("unknown generator kind {s:?}")))
    }
}

/// `params` depends on the kind: the generator residues for `finite_cayley`,
/// the jump set for `circulant`, and nothing for the other kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: Vec<usize>,
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Graph> {
        let g = match self.kind {
            GeneratorKind::RandomRegular => random_regular(self.n, self.d, self.seed)?,
            GeneratorKind::FiniteCayley => finite_cayley(self.n, &self.params)?,
            GeneratorKind::Circulant => circulant(self.n, &self.params)?,
            GeneratorKind::PrismCliqueChain => {
                if self.d == 0 || !self.n.is_multiple_of(self.d) {
                    return Err(Error::InfeasibleParams(format!(
                        "n = {} is not a multiple of d = {}",
                        self.n, self.d
                    )));
                }
                prism_clique_chain(self.n / self.d, self.d)?
            }
            GeneratorKind::Cycle => cycle(self.n)?,
            GeneratorKind::Complete => complete(self.n)?,
        };
        if g.degree() != self.d {
            return Err(Error::InfeasibleParams(format!(
                "{:?} on {} vertices has degree {}, not {}",
                self.kind,
                self.n,
                g.degree(),
                self.d
            )));
        }
        Ok(g)
    }
}

const MAX_RESTARTS: usize = 10_000;

/// Pairing model with rejection at the level of single pairs: two free points
/// are drawn uniformly, the pair is dropped if it would create a loop or a
/// repeated edge, and the whole pairing restarts when the draw keeps failing.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InfeasibleParams(format!("n·d = {} is odd", n * d)));
    }
    if d == 0 || d >= n {
        return Err(Error::InfeasibleParams(format!("need 0 < d < n, got d = {d}, n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    let mut points: Vec<usize> = Vec::with_capacity(n * d);
    'restart: for _ in 0..MAX_RESTARTS {
        adj.iter_mut().for_each(Vec::clear);
        points.clear();
        points.extend((0..n).flat_map(|v| std::iter::repeat_n(v, d)));
        let mut failures = 0usize;
        while !points.is_empty() {
            let len = points.len();
            let i = rng.gen_range(0..len);
            let mut j = rng.gen_range(0..len - 1);
            if j >= i {
                j += 1;
            }
            let (u, v) = (points[i], points[j]);
            if u == v || adj[u].contains(&v) {
                failures += 1;
                if failures > 64 + 8 * len {
                    continue 'restart;
                }
                continue;
            }
            failures = 0;
            adj[u].push(v);
            adj[v].push(u);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            points.swap_remove(hi);
            points.swap_remove(lo);
        }
        let edges: Vec<(usize, usize)> = adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        return Graph::from_edges(n, &edges);
    }
    Err(Error::RejectionBudgetExceeded { attempts: MAX_RESTARTS })
}

/// Cayley graph of the cyclic group of order `n`; `generators` must already
/// be closed under negation.
pub fn finite_cayley(n: usize, generators: &[usize]) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InfeasibleParams(format!("group order {n} is too small")));
    }
    let mut set: Vec<usize> = Vec::with_capacity(generators.len());
    for &s in generators {
        let r = s % n;
        if r == 0 {
            return Err(Error::InfeasibleParams("generator 0 would create loops".into()));
        }
        if set.contains(&r) {
            return Err(Error::InfeasibleParams(format!("generator {r} repeated mod {n}")));
        }
        set.push(r);
    }
    if let Some(&r) = set.iter().find(|&&r| !set.contains(&((n - r) % n))) {
        return Err(Error::AsymmetricGenerators { n, residue: r });
    }
    if set.is_empty() {
        return Err(Error::InfeasibleParams("empty generator set".into()));
    }
    let mut edges = Vec::with_capacity(n * set.len() / 2);
    for g in 0..n {
        for &s in &set {
            let h = (g + s) % n;
            if g < h {
                edges.push((g, h));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Circulant on `n` vertices with the given jumps; negatives are added.
pub fn circulant(n: usize, jumps: &[usize]) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InfeasibleParams(format!("n = {n} is too small")));
    }
    let mut set = Vec::new();
    for &j in jumps {
        let r = j % n;
        if r == 0 {
            return Err(Error::InfeasibleParams("jump 0 would create loops".into()));
        }
        for x in [r, n - r] {
            if !set.contains(&x) {
                set.push(x);
            }
        }
    }
    finite_cayley(n, &set)
}

/// `k` disjoint copies of K_d, vertex `i` of clique `c` labelled `c·d + i`,
/// plus one external edge per vertex. The first `2⌊d/2⌋` vertices of each
/// clique are wired in a ring: vertex `i` of clique `c` joins vertex
/// `i + ⌊d/2⌋` of clique `c + 1`. When `d` is odd the last vertex of clique
/// `2j` joins the last vertex of clique `2j + 1`, which needs `k` even.
pub fn prism_clique_chain(k: usize, d: usize) -> Result<Graph> {
    if k < 2 || d < 3 {
        return Err(Error::InfeasibleParams(format!(
            "need at least 2 cliques of size at least 3, got k = {k}, d = {d}"
        )));
    }
    if d % 2 == 1 && k % 2 == 1 {
        return Err(Error::InfeasibleParams(format!(
            "odd clique size {d} needs an even number of cliques, got {k}"
        )));
    }
    let id = |c: usize, i: usize| c * d + i;
    let half = d / 2;
    let mut edges = Vec::with_capacity(k * d * (d + 1) / 2);
    for c in 0..k {
        for i in 0..d {
            for j in i + 1..d {
                edges.push((id(c, i), id(c, j)));
            }
        }
        for i in 0..half {
            let (a, b) = (id(c, i), id((c + 1) % k, i + half));
            edges.push((a.min(b), a.max(b)));
        }
        if d % 2 == 1 && c % 2 == 0 {
            edges.push((id(c, d - 1), id(c + 1, d - 1)));
        }
    }
    Graph::from_edges(k * d, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InfeasibleParams(format!("a cycle needs 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InfeasibleParams(format!("K_n needs n ≥ 2, got {n}")));
    }
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_edge_list;

    #[test]
    fn random_regular_small() {
        for seed in 0..5 {
            let g = random_regular(4, 3, seed).unwrap();
            assert!(g.edges().eq(complete(4).unwrap().edges()));
        }
        let g = random_regular(8, 3, 1).unwrap();
        assert_eq!(g.degree(), 3);
        assert_eq!(g.edge_count(), 12);
        assert!(matches!(random_regular(5, 3, 0), Err(Error::InfeasibleParams(_))));
        assert!(random_regular(4, 4, 0).is_err());
    }

    #[test]
    fn random_regular_deterministic() {
        let a = write_edge_list(&random_regular(200, 5, 42).unwrap());
        let b = write_edge_list(&random_regular(200, 5, 42).unwrap());
        let c = write_edge_list(&random_regular(200, 5, 43).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(random_regular(64, 8, 7).unwrap().degree(), 8);
    }

    #[test]
    fn cayley_examples() {
        let c6 = finite_cayley(6, &[1, 5]).unwrap();
        assert!(c6.edges().eq(cycle(6).unwrap().edges()));
        let g = finite_cayley(8, &[1, 7, 4]).unwrap();
        assert_eq!(g.degree(), 3);
        for v in 0..8 {
            assert_eq!(g.neighbors(v), {
                let mut ns = vec![(v + 1) % 8, (v + 7) % 8, (v + 4) % 8];
                ns.sort_unstable();
                ns
            });
        }
        assert_eq!(
            finite_cayley(5, &[1]),
            Err(Error::AsymmetricGenerators { n: 5, residue: 1 })
        );
        assert!(finite_cayley(5, &[0]).is_err());
        assert!(circulant(8, &[1, 4]).unwrap().edges().eq(g.edges()));
    }

    #[test]
    fn prism_examples() {
        let g = prism_clique_chain(2, 3).unwrap();
        assert_eq!(g.degree(), 3);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (0, 4), (1, 2), (1, 3), (2, 5), (3, 4), (3, 5), (4, 5)]
        );
        let g = prism_clique_chain(2, 4).unwrap();
        assert_eq!(g.degree(), 4);
        let between = g.edges().filter(|&(u, v)| u / 4 != v / 4).count();
        assert_eq!(between, 4);
        for (k, d) in [(3, 4), (4, 5), (6, 3), (5, 6)] {
            let g = prism_clique_chain(k, d).unwrap();
            assert_eq!((g.vertex_count(), g.degree()), (k * d, d));
        }
        assert!(prism_clique_chain(3, 3).is_err());
        assert!(prism_clique_chain(1, 4).is_err());
    }

    #[test]
    fn kind_dispatch() {
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"kind":"circulant","n":10,"d":4,"seed":0,"params":[1,2]}"#).unwrap();
        assert_eq!(spec.build().unwrap().degree(), 4);
        let bad = GeneratorSpec { d: 3, ..spec };
        assert!(bad.build().is_err());
        assert_eq!(
            "prism_clique_chain".parse::<GeneratorKind>().unwrap(),
            GeneratorKind::PrismCliqueChain
        );
        assert!("petersen".parse::<GeneratorKind>().is_err());
    }
}
