//! Fixture corpus and seeded random instances shared by the integration tests.
#![allow(dead_code)]

use augpath::generators::{circulant, complete, cycle, prism_clique_chain, random_regular};
use augpath::pipeline::{run_pipeline, PipelineOptions};
use augpath::{Graph, Matching, SimpleGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    Graph::from_edges(10, &edges).unwrap()
}

pub fn cube() -> Graph {
    let edges: Vec<_> = (0..8usize)
        .flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b))))
        .filter(|&(u, v)| u < v)
        .collect();
    Graph::from_edges(8, &edges).unwrap()
}

pub fn k33() -> Graph {
    let edges: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
    Graph::from_edges(6, &edges).unwrap()
}

/// Connected regular graphs on at most ten vertices.
pub fn regular_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 4..=6 {
        out.push((format!("K{n}"), complete(n).unwrap()));
    }
    for n in 3..=10 {
        out.push((format!("C{n}"), cycle(n).unwrap()));
    }
    for d in 3..=5 {
        out.push((format!("prism-{d}"), prism_clique_chain(2, d).unwrap()));
    }
    out.push(("K33".into(), k33()));
    out.push(("cube".into(), cube()));
    out.push(("petersen".into(), petersen()));
    out.push(("wagner".into(), circulant(8, &[1, 7, 4]).unwrap()));
    out.push(("circ9".into(), circulant(9, &[1, 8, 2, 7]).unwrap()));
    out.push(("circ10".into(), circulant(10, &[1, 9, 3, 7]).unwrap()));
    for n in [4, 6, 8, 10] {
        for seed in 0..3 {
            out.push((format!("rr3-{n}-{seed}"), random_regular(n, 3, seed).unwrap()));
        }
    }
    for n in 5..=10 {
        for seed in 0..2 {
            out.push((format!("rr4-{n}-{seed}"), random_regular(n, 4, seed).unwrap()));
        }
    }
    out.retain(|(_, g)| g.is_connected());
    out
}

/// Greedy maximal matching over a shuffled edge list, then each edge kept
/// with probability `keep`.
pub fn random_matching(g: &SimpleGraph, keep: f64, rng: &mut ChaCha8Rng) -> Matching {
    let mut edges: Vec<_> = g.edges().collect();
    edges.shuffle(rng);
    let mut m = Matching::empty(g.vertex_count());
    for (u, v) in edges {
        if !m.is_matched(u) && !m.is_matched(v) && rng.gen_bool(keep) {
            m.toggle_path(&[u, v]);
        }
    }
    m
}

pub struct Instance {
    pub name: String,
    pub graph: SimpleGraph,
    pub matching: Matching,
}

/// Every corpus graph with the empty matching, its pipeline stage entries and
/// three random partial matchings.
pub fn corpus_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (name, g) in regular_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(name.bytes().map(u64::from).sum());
        let mut ms = vec![Matching::empty(g.vertex_count())];
        let run = run_pipeline(
            &g,
            PipelineOptions {
                keep_entries: true,
                ..Default::default()
            },
        )
        .unwrap();
        ms.extend(run.entries.into_iter().map(|(_, m)| m));
        for keep in [0.5, 0.8, 1.0] {
            ms.push(random_matching(&g, keep, &mut rng));
        }
        for (i, matching) in ms.into_iter().enumerate() {
            out.push(Instance {
                name: format!("{name}/{i}"),
                graph: g.as_simple().clone(),
                matching,
            });
        }
    }
    out
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> SimpleGraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    SimpleGraph::from_edges(n, &edges).unwrap()
}

/// Seeded (graph, partial matching) pairs on at most twelve vertices, half
/// of them regular.
pub fn random_instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let graph = if i % 2 == 0 {
                let d = rng.gen_range(2..=4);
                let n = loop {
                    let n = rng.gen_range(d + 1..=12);
                    if n * d % 2 == 0 {
                        break n;
                    }
                };
                random_regular(n, d, rng.gen()).unwrap().as_simple().clone()
            } else {
                let n = rng.gen_range(2..=12);
                gnp(n, rng.gen_range(0.2..0.7), &mut rng)
            };
            let keep = rng.gen_range(0.3..=1.0);
            let matching = random_matching(&graph, keep, &mut rng);
            Instance {
                name: format!("random-{i}"),
                graph,
                matching,
            }
        })
        .collect()
}
