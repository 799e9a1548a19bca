//! Small-graph structure: Tutte deficiency, the clique decomposition of the
//! exceptional graphs with its canonical perfect matching, and automorphisms.

use serde::Serialize;

use crate::cuts::{min_cut, min_odd_cut_exact, OddCutCertificate, EXACT_ODD_CUT_CAP};
use crate::error::{Error, Result};
use crate::graph::{Matching, SimpleGraph};

pub const TUTTE_CAP: usize = 20;
pub const AUTOMORPHISM_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TutteWitness {
    pub removed: Vec<usize>,
    pub odd_components: usize,
    pub deficiency: i64,
    pub exhaustive: bool,
}

/// Number of odd components of `g` with the `removed` vertices deleted.
pub fn odd_components(g: &SimpleGraph, removed: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut seen = removed.to_vec();
    let mut stack = Vec::new();
    let mut odd = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        odd += size % 2;
    }
    odd
}

fn witness(g: &SimpleGraph, set: &[usize], exhaustive: bool) -> TutteWitness {
    let mut removed = vec![false; g.vertex_count()];
    set.iter().for_each(|&v| removed[v] = true);
    let odd = odd_components(g, &removed);
    TutteWitness {
        removed: set.to_vec(),
        odd_components: odd,
        deficiency: odd as i64 - set.len() as i64,
        exhaustive,
    }
}

fn better(a: &TutteWitness, b: &TutteWitness) -> bool {
    a.deficiency > b.deficiency || (a.deficiency == b.deficiency && a.removed.len() < b.removed.len())
}

/// Maximum-deficiency set over all vertex subsets (the empty set counts).
pub fn tutte_scan(g: &SimpleGraph, subset_cap: usize) -> Result<TutteWitness> {
    let n = g.vertex_count();
    let cap = subset_cap.min(TUTTE_CAP);
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let mut best = witness(g, &[], true);
    for mask in 1u32..(1u32 << n) {
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let w = witness(g, &set, true);
        if better(&w, &best) {
            best = w;
        }
    }
    Ok(best)
}

/// The empty set, single vertices and neighbourhoods only.
pub fn tutte_scan_heuristic(g: &SimpleGraph) -> TutteWitness {
    let n = g.vertex_count();
    let mut best = witness(g, &[], false);
    for v in 0..n {
        for set in [vec![v], g.neighbors(v).to_vec()] {
            let w = witness(g, &set, false);
            if better(&w, &best) {
                best = w;
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueDecomposition {
    pub cliques: Vec<Vec<usize>>,
    /// For every vertex, its neighbour outside its clique.
    pub external: Vec<usize>,
}

/// `d`-cliques through `v`: a clique of size `d` containing `v` lies in the
/// closed neighbourhood, so it is that neighbourhood minus one neighbour.
fn cliques_through(g: &SimpleGraph, v: usize, d: usize) -> Vec<Vec<usize>> {
    let ns = g.neighbors(v);
    if ns.len() + 1 < d {
        return Vec::new();
    }
    let mut out = Vec::new();
    for skip in 0..ns.len() {
        let mut c: Vec<usize> = ns
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &w)| w)
            .collect();
        c.push(v);
        if c.len() != d {
            continue;
        }
        c.sort_unstable();
        if c.iter()
            .enumerate()
            .all(|(i, &a)| c[i + 1..].iter().all(|&b| g.has_edge(a, b)))
        {
            out.push(c);
        }
    }
    out
}

/// Partition into `d`-cliques with every vertex in exactly one of them.
pub fn clique_decomposition(g: &SimpleGraph) -> Option<CliqueDecomposition> {
    let d = g.regular_degree()?;
    if d < 3 {
        return None;
    }
    let n = g.vertex_count();
    let mut part = vec![usize::MAX; n];
    let mut cliques = Vec::new();
    for v in 0..n {
        let cs = cliques_through(g, v, d);
        if cs.len() != 1 {
            return None;
        }
        if part[v] == usize::MAX {
            let c = cs.into_iter().next().unwrap();
            if c.iter().any(|&w| part[w] != usize::MAX) {
                return None;
            }
            c.iter().for_each(|&w| part[w] = cliques.len());
            cliques.push(c);
        }
    }
    let external = (0..n)
        .map(|v| {
            let out: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| part[w] != part[v]).collect();
            (out.len() == 1).then(|| out[0])
        })
        .collect::<Option<Vec<usize>>>()?;
    Some(CliqueDecomposition { cliques, external })
}

/// The matching of external clique edges, which is perfect whenever the
/// decomposition exists.
pub fn clique_matching(g: &SimpleGraph) -> Option<Matching> {
    let dec = clique_decomposition(g)?;
    let pairs: Vec<(usize, usize)> = dec
        .external
        .iter()
        .enumerate()
        .filter(|&(v, &w)| v < w)
        .map(|(v, &w)| (v, w))
        .collect();
    let m = Matching::from_pairs(g, &pairs).ok()?;
    assert!(m.is_perfect(), "external clique edges always pair up every vertex");
    Some(m)
}

/// Every automorphism as a permutation `perm[v]`, by backtracking.
pub fn automorphisms(g: &SimpleGraph, cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if n > cap.min(AUTOMORPHISM_CAP) {
        return Err(Error::TooLarge {
            n,
            cap: cap.min(AUTOMORPHISM_CAP),
        });
    }
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(g, 0, &mut perm, &mut used, &mut out);
    Ok(out)
}

fn extend_automorphism(g: &SimpleGraph, v: usize, perm: &mut [usize], used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let n = g.vertex_count();
    if v == n {
        out.push(perm.to_vec());
        return;
    }
    for image in 0..n {
        if used[image] || g.degree_of(image) != g.degree_of(v) {
            continue;
        }
        let consistent = (0..v).all(|u| g.has_edge(u, v) == g.has_edge(perm[u], image));
        if !consistent {
            continue;
        }
        perm[v] = image;
        used[image] = true;
        extend_automorphism(g, v + 1, perm, used, out);
        used[image] = false;
    }
    perm[v] = usize::MAX;
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub min_cut: usize,
    pub min_cut_side: Vec<usize>,
    pub min_odd_cut: Option<OddCutCertificate>,
    pub clique_matching: Option<Vec<(usize, usize)>>,
    pub tutte: TutteWitness,
}

pub fn structure_report(g: &SimpleGraph) -> Result<StructureReport> {
    let (min_cut, min_cut_side) = min_cut(g)?;
    let n = g.vertex_count();
    let min_odd_cut = if n <= EXACT_ODD_CUT_CAP {
        min_odd_cut_exact(g, EXACT_ODD_CUT_CAP)?
    } else {
        None
    };
    let tutte = if n <= 14 {
        tutte_scan(g, 14)?
    } else {
        tutte_scan_heuristic(g)
    };
    Ok(StructureReport {
        min_cut,
        min_cut_side,
        min_odd_cut,
        clique_matching: clique_matching(g).map(|m| m.pairs()),
        tutte,
    })
}
