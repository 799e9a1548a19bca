//! Staged matching construction.
//!
//! Stage `k` flips augmenting paths of length at most `2k + 1` until none is
//! left. Starting from the empty matching, every stage begins with no
//! augmenting path shorter than `2k + 1`, and flipping a shortest augmenting
//! path never creates a shorter one, so all flips of stage `k` have length
//! exactly `2k + 1`. Seeds are scanned in ascending order, a flip is applied
//! as soon as it is found, and passes repeat until one finds nothing; that
//! last pass is the postcondition check.

use num_rational::Ratio;
use serde::Serialize;

use crate::blossom::blossom_augment;
use crate::error::{Error, Result};
use crate::graph::{Matching, SimpleGraph};
use crate::search::{Searcher, BOUND_MIN_CAP};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTrace {
    pub stage: usize,
    /// Unmatched vertices after the stage.
    pub unmatched: usize,
    pub n: usize,
    pub flips: usize,
    /// Edges in the symmetric difference of the matchings before and after.
    pub changed_edges: usize,
    /// Longest flipped path, 0 when nothing was flipped.
    pub max_len: usize,
    /// Σ_{j ≤ stage} (2j + 3)·unmatched_j, over n.
    #[serde(skip)]
    pub churn: Ratio<u64>,
}

impl StageTrace {
    pub fn eps(&self) -> f64 {
        self.unmatched as f64 / self.n as f64
    }

    pub fn eps_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.unmatched as u64, self.n as u64)
    }

    pub fn churn_f64(&self) -> f64 {
        *self.churn.numer() as f64 / *self.churn.denom() as f64
    }

    pub fn csv_header() -> &'static str {
        "stage,eps,flips,changed_edges,max_len,churn_partial_sum"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.stage,
            self.eps(),
            self.flips,
            self.changed_edges,
            self.max_len,
            self.churn_f64()
        )
    }
}

/// Counts net status changes per edge across stages.
#[derive(Debug, Clone)]
pub struct ChurnCounter {
    counts: Vec<u32>,
}

impl ChurnCounter {
    pub fn new(g: &SimpleGraph) -> Self {
        ChurnCounter {
            counts: vec![0; g.slot_count()],
        }
    }

    fn bump(&mut self, g: &SimpleGraph, u: usize, v: usize) {
        let (a, b) = (u.min(v), u.max(v));
        self.counts[g.slot(a, b).expect("matched pairs are edges")] += 1;
    }

    /// Records the symmetric difference of `before` and `after`; returns its size.
    fn record(&mut self, g: &SimpleGraph, before: &Matching, after: &Matching) -> usize {
        let mut changed = 0;
        for v in 0..g.vertex_count() {
            let (old, new) = (before.mate(v), after.mate(v));
            if old == new {
                continue;
            }
            for w in [old, new].into_iter().flatten() {
                if v < w {
                    self.bump(g, v, w);
                    changed += 1;
                }
            }
        }
        changed
    }

    /// Edges `(u, v)` with `u < v` and their nonzero counts.
    pub fn nonzero(&self, g: &SimpleGraph) -> Vec<((usize, usize), u32)> {
        g.edges()
            .filter_map(|(u, v)| {
                let c = self.counts[g.slot(u, v).unwrap()];
                (c > 0).then_some(((u, v), c))
            })
            .collect()
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

/// Flips paths of length at most `2k + 1` from `prev` until none remain.
/// `prev` must have no augmenting path shorter than `2k + 1`.
pub fn build_stage(g: &SimpleGraph, prev: &Matching, k: usize) -> Result<(Matching, StageTrace)> {
    let mut searcher = Searcher::new(g.vertex_count());
    let mut churn = ChurnCounter::new(g);
    let trace_base = StageTrace {
        stage: k,
        unmatched: 0,
        n: g.vertex_count(),
        flips: 0,
        changed_edges: 0,
        max_len: 0,
        churn: Ratio::new(0, g.vertex_count().max(1) as u64),
    };
    stage_with(g, prev, k, &mut searcher, &mut churn, trace_base)
}

fn stage_with(
    g: &SimpleGraph,
    prev: &Matching,
    k: usize,
    searcher: &mut Searcher,
    churn: &mut ChurnCounter,
    mut trace: StageTrace,
) -> Result<(Matching, StageTrace)> {
    if prev.vertex_count() != g.vertex_count() {
        return Err(Error::InvalidMatching("size differs from graph".into()));
    }
    let cap = 2 * k + 1;
    let bounded = cap >= BOUND_MIN_CAP;
    let mut m = prev.clone();
    if bounded {
        searcher.refresh_bound(g, &m);
    } else {
        searcher.clear_bound();
    }
    loop {
        let mut flipped = false;
        for s in 0..g.vertex_count() {
            if m.is_matched(s) {
                continue;
            }
            if let Some(p) = searcher.find_from(g, &m, s, cap) {
                trace.max_len = trace.max_len.max(p.len() - 1);
                m.toggle_path(&p);
                trace.flips += 1;
                flipped = true;
                if bounded {
                    searcher.refresh_bound(g, &m);
                }
            }
        }
        if !flipped {
            break;
        }
    }
    searcher.clear_bound();
    trace.unmatched = m.unmatched_count();
    trace.changed_edges = churn.record(g, prev, &m);
    trace.churn += Ratio::new(((2 * k + 3) * trace.unmatched) as u64, g.vertex_count() as u64);
    Ok((m, trace))
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub matching: Matching,
    pub traces: Vec<StageTrace>,
    pub churn: ChurnCounter,
    /// Matchings at the start of every stage that flipped something, with
    /// the stage index. Only kept when requested.
    pub entries: Vec<(usize, Matching)>,
}

impl PipelineRun {
    pub fn deficiency(&self) -> usize {
        self.matching.unmatched_count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineOptions {
    pub max_stage: usize,
    pub keep_entries: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_stage: usize::MAX,
            keep_entries: false,
        }
    }
}

/// Runs stages `0, 1, …` from the empty matching. Stops after `max_stage`,
/// once the matching is perfect, or once a single vertex is left unmatched
/// (the least possible deficiency on an odd number of vertices). After a
/// stage without flips a blossom search decides whether the matching is
/// already maximum, which also ends the run. No augmenting path is longer
/// than `n − 1`, which bounds the number of stages.
pub fn run_pipeline(g: &SimpleGraph, opts: PipelineOptions) -> Result<PipelineRun> {
    let n = g.vertex_count();
    let mut searcher = Searcher::new(n);
    let mut churn = ChurnCounter::new(g);
    let mut m = Matching::empty(n);
    let mut traces: Vec<StageTrace> = Vec::new();
    let mut entries = Vec::new();
    let mut k = 0;
    while k <= opts.max_stage && m.unmatched_count() > 1 && 2 * k + 1 < n.max(2) {
        let base = StageTrace {
            stage: k,
            unmatched: 0,
            n,
            flips: 0,
            changed_edges: 0,
            max_len: 0,
            churn: traces.last().map_or(Ratio::new(0, n as u64), |t| t.churn),
        };
        let (next, trace) = stage_with(g, &m, k, &mut searcher, &mut churn, base)?;
        let idle = trace.flips == 0;
        if opts.keep_entries && !idle {
            entries.push((k, std::mem::replace(&mut m, next)));
        } else {
            m = next;
        }
        traces.push(trace);
        k += 1;
        if idle && blossom_augment(g, &m).is_none() {
            break;
        }
    }
    Ok(PipelineRun {
        matching: m,
        traces,
        churn,
        entries,
    })
}

/// Slope of a least-squares line through the origin and its centred R².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OriginFit {
    pub slope: f64,
    pub r2: f64,
    pub points: usize,
}

pub fn fit_through_origin(xs: &[f64], ys: &[f64]) -> OriginFit {
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let slope = sxy / sxx;
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    OriginFit {
        slope,
        r2,
        points: xs.len(),
    }
}

/// Fits `2k + 1 ≈ c·log³(1/ε_k)` over stages with `0 < ε_k < 1`.
pub fn decay_fit(traces: &[StageTrace]) -> Result<OriginFit> {
    let points: Vec<(usize, f64)> = traces.iter().map(|t| (t.stage, t.eps())).collect();
    decay_fit_points(&points)
}

/// Same fit from `(stage, ε)` pairs.
pub fn decay_fit_points(points: &[(usize, f64)]) -> Result<OriginFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|&&(_, eps)| eps > 0.0 && eps < 1.0)
        .map(|&(k, eps)| ((1.0 / eps).ln().powi(3), (2 * k + 1) as f64))
        .unzip();
    if xs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} stages with 0 < ε < 1, need 3",
            xs.len()
        )));
    }
    Ok(fit_through_origin(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blossom::maximum_matching;
    use crate::generators::{complete, cycle, prism_clique_chain, random_regular};
    use crate::search::global_shortest_length;

    #[test]
    fn stage_examples() {
        let k4 = complete(4).unwrap();
        let (m, t) = build_stage(&k4, &Matching::empty(4), 0).unwrap();
        assert!(m.is_perfect());
        assert_eq!((t.flips, t.unmatched, t.max_len), (2, 0, 1));

        let path = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let start = Matching::from_pairs(&path, &[(1, 2)]).unwrap();
        let (m, t) = build_stage(&path, &start, 1).unwrap();
        assert!(m.is_perfect());
        assert_eq!((t.flips, t.changed_edges, t.max_len), (1, 3, 3));
    }

    #[test]
    fn pipeline_examples() {
        for g in [cycle(6).unwrap(), prism_clique_chain(2, 3).unwrap()] {
            let run = run_pipeline(&g, PipelineOptions::default()).unwrap();
            assert!(run.matching.is_perfect());
        }
        let run = run_pipeline(&cycle(6).unwrap(), PipelineOptions::default()).unwrap();
        assert!(run.traces.len() <= 2);
        let run = run_pipeline(&cycle(7).unwrap(), PipelineOptions::default()).unwrap();
        assert_eq!(run.deficiency(), 1);
    }

    #[test]
    fn stage_postconditions() {
        for seed in 0..10 {
            let g = random_regular(300, 3, seed).unwrap();
            let run = run_pipeline(
                &g,
                PipelineOptions {
                    keep_entries: true,
                    ..Default::default()
                },
            )
            .unwrap();
            let mut last = usize::MAX;
            for t in &run.traces {
                assert!(t.unmatched <= last);
                last = t.unmatched;
                assert!(t.max_len <= 2 * t.stage + 1);
                assert!(t.flips == 0 || t.max_len == 2 * t.stage + 1);
                assert!(t.changed_edges <= (2 * t.stage + 1) * t.flips);
            }
            for (k, entry) in &run.entries {
                assert_eq!(global_shortest_length(&g, entry, 2 * k + 1), Some(2 * k + 1));
            }
            let max = maximum_matching(&g);
            assert_eq!(run.matching.size(), max.size(), "seed {seed}");
        }
    }

    #[test]
    fn decay_fit_recovers_constant() {
        let points: Vec<(usize, f64)> = (0..6)
            .map(|k| (k, (-(((2 * k + 1) as f64) / 5.0).cbrt()).exp()))
            .collect();
        let fit = decay_fit_points(&points).unwrap();
        assert!((fit.slope - 5.0).abs() < 1e-6, "{fit:?}");
        assert!(fit.r2 > 0.999_999);
        assert!(matches!(
            decay_fit_points(&points[..2]),
            Err(Error::InsufficientData(_))
        ));
        let run = run_pipeline(&complete(4).unwrap(), PipelineOptions::default()).unwrap();
        assert!(matches!(decay_fit(&run.traces), Err(Error::InsufficientData(_))));
    }
}
