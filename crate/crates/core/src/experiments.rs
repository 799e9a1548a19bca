//! Sweeps over generated graphs: one record per flipping pipeline stage,
//! CSV in and out, and the polylogarithmic fits.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cuts::{
    expansion_report, is_admissible_with, small_odd_cuts, OddCutCertificate, OddCutMode, SpectralOptions,
    EXACT_ODD_CUT_CAP,
};
use crate::error::{Error, Result};
use crate::generators::GeneratorSpec;
use crate::graph::Graph;
use crate::pipeline::{run_pipeline, PipelineOptions, StageTrace};
use crate::search::global_shortest_length;

pub const SCHEMA_LINE: &str = "# augpath sweep schema 1";

/// Odd sets up to this size are tried before any expensive certificate.
const QUICK_CUT_SIZE: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub graph_id: String,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub c0_lower: f64,
    /// Unmatched fraction at stage entry, as `unmatched/n`.
    pub eps: String,
    pub shortest_aug_len: usize,
    pub stage_k: usize,
    /// Time of the exact shortest-path search for this row.
    pub wall_ms: u64,
    pub admissible: bool,
    pub cut_mode: String,
    pub cut_size: Option<usize>,
    pub cut_boundary: Option<usize>,
    pub c0_rigorous: bool,
}

impl ExperimentRecord {
    pub fn eps_value(&self) -> Result<f64> {
        let (a, b) = self
            .eps
            .split_once('/')
            .ok_or_else(|| Error::BadInput(format!("eps {:?} is not a fraction", self.eps)))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::BadInput(format!("bad eps {:?}", self.eps)))
        };
        Ok(parse(a)? / parse(b)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphTrace {
    pub graph_id: String,
    pub n: usize,
    pub admissible: bool,
    pub perfect: bool,
    pub traces: Vec<StageTrace>,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub records: Vec<ExperimentRecord>,
    pub graphs: Vec<GraphTrace>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub jobs: usize,
    pub deterministic: bool,
    pub max_stage: usize,
    pub spectral: SpectralOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            jobs: 1,
            deterministic: false,
            max_stage: usize::MAX,
            spectral: SpectralOptions {
                tol: 1e-3,
                ..SpectralOptions::default()
            },
        }
    }
}

pub fn graph_id(spec: &GeneratorSpec) -> String {
    let kind = serde_json::to_value(spec.kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    format!("{kind}-n{}-d{}-s{}", spec.n, spec.d, spec.seed)
}

/// `count` copies of `spec` with seeds `first..first + count`.
pub fn with_seeds(spec: &GeneratorSpec, first: u64, count: u64) -> Vec<GeneratorSpec> {
    (first..first + count)
        .map(|seed| GeneratorSpec { seed, ..spec.clone() })
        .collect()
}

/// Expansion lower bound plus the odd-cut verdict for one graph.
#[derive(Debug, Clone, Serialize)]
pub struct Certification {
    pub c0: f64,
    pub c0_rigorous: bool,
    pub admissible: bool,
    pub mode: OddCutMode,
    pub cut: Option<OddCutCertificate>,
}

pub fn certify(g: &Graph, spectral: SpectralOptions) -> Result<Certification> {
    let report = match expansion_report(g, false, spectral) {
        Ok(r) => Some(r),
        Err(Error::NotConnected) => None,
        Err(e) => return Err(e),
    };
    let (c0, rigorous) = report.as_ref().map_or((0.0, true), |r| (r.c0(), r.is_rigorous()));
    let d = g.degree();
    if g.vertex_count() > EXACT_ODD_CUT_CAP {
        if let Some(w) = small_odd_cuts(g, QUICK_CUT_SIZE, d) {
            // an explicit odd cut refutes admissibility whatever c0 is
            return Ok(Certification {
                c0,
                c0_rigorous: rigorous,
                admissible: false,
                mode: OddCutMode::Certified,
                cut: Some(w),
            });
        }
    }
    let a = is_admissible_with(g, c0, rigorous)?;
    Ok(Certification {
        c0,
        c0_rigorous: rigorous,
        admissible: a.admissible,
        mode: a.mode,
        cut: a.witness,
    })
}

type GraphOutput = (Vec<ExperimentRecord>, GraphTrace);

fn run_one(spec: &GeneratorSpec, opts: &SweepOptions) -> Result<GraphOutput> {
    let g = spec.build()?;
    let n = g.vertex_count();
    let adm = certify(&g, opts.spectral)?;
    let run = run_pipeline(
        &g,
        PipelineOptions {
            max_stage: opts.max_stage,
            keep_entries: true,
        },
    )?;
    let id = graph_id(spec);
    let mut records = Vec::with_capacity(run.entries.len());
    for (k, m) in &run.entries {
        let t = Instant::now();
        let len = global_shortest_length(&g, m, 2 * k + 1).ok_or_else(|| {
            Error::BadInput(format!(
                "{id}: stage {k} entry has no augmenting path of length ≤ {}",
                2 * k + 1
            ))
        })?;
        let wall_ms = if opts.deterministic {
            0
        } else {
            t.elapsed().as_millis() as u64
        };
        records.push(ExperimentRecord {
            graph_id: id.clone(),
            n,
            d: g.degree(),
            seed: spec.seed,
            c0_lower: adm.c0,
            eps: format!("{}/{}", m.unmatched_count(), n),
            shortest_aug_len: len,
            stage_k: *k,
            wall_ms,
            admissible: adm.admissible,
            cut_mode: adm.mode.to_string(),
            cut_size: adm.cut.as_ref().map(|c| c.size),
            cut_boundary: adm.cut.as_ref().map(|c| c.boundary),
            c0_rigorous: adm.c0_rigorous,
        });
    }
    let trace = GraphTrace {
        graph_id: id,
        n,
        admissible: adm.admissible,
        perfect: run.matching.unmatched_count() <= n % 2,
        traces: run.traces,
    };
    Ok((records, trace))
}

/// Processes every spec on a pool of `jobs` threads; output is sorted by
/// graph and stage, so it does not depend on scheduling.
pub fn sweep(specs: &[GeneratorSpec], opts: SweepOptions) -> Result<SweepOutput> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, Result<GraphOutput>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..opts.jobs.max(1).min(specs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = specs.get(i) else { break };
                let r = run_one(spec, &opts);
                results
                    .lock()
                    .expect("no worker panics while holding the lock")
                    .push((i, r));
            });
        }
    });
    let mut results = results.into_inner().expect("workers have finished");
    results.sort_by_key(|(i, _)| *i);
    let mut out = SweepOutput::default();
    for (_, r) in results {
        let (records, trace) = r?;
        out.records.extend(records);
        out.graphs.push(trace);
    }
    out.records
        .sort_by(|a, b| (a.n, a.d, &a.graph_id, a.seed, a.stage_k).cmp(&(b.n, b.d, &b.graph_id, b.seed, b.stage_k)));
    out.graphs.sort_by(|a, b| (a.n, &a.graph_id).cmp(&(b.n, &b.graph_id)));
    Ok(out)
}

pub fn write_csv(records: &[ExperimentRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| Error::Io(e.to_string()))?;
    Ok(format!("{SCHEMA_LINE}\n{body}"))
}

pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.deserialize()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolylogFit {
    /// Slope of `L` against `log³(1/ε)` through the origin.
    #[serde(rename = "C_hat")]
    pub c_hat: f64,
    pub c_r2: f64,
    /// Slope of `log L` against `log log(1/ε)`.
    pub exponent_hat: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, my - slope * mx, r2)
}

/// Fits over admissible records with `0 < ε < 1`. Needs five distinct ε.
pub fn fit_polylog(records: &[ExperimentRecord]) -> Result<PolylogFit> {
    let mut pts = Vec::new();
    for r in records.iter().filter(|r| r.admissible) {
        let eps = r.eps_value()?;
        if eps > 0.0 && eps < 1.0 {
            pts.push((eps, r.shortest_aug_len as f64));
        }
    }
    let mut distinct: Vec<f64> = pts.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "{} distinct ε values, need 5",
            distinct.len()
        )));
    }
    let logs: Vec<f64> = pts.iter().map(|p| (1.0 / p.0).ln()).collect();
    let cubes: Vec<f64> = logs.iter().map(|l| l.powi(3)).collect();
    let ls: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let origin = crate::pipeline::fit_through_origin(&cubes, &ls);
    let lx: Vec<f64> = logs.iter().map(|l| l.ln()).collect();
    let ly: Vec<f64> = ls.iter().map(|l| l.ln()).collect();
    let (exponent_hat, intercept, r2) = linear_fit(&lx, &ly);
    Ok(PolylogFit {
        c_hat: origin.slope,
        c_r2: origin.r2,
        exponent_hat,
        intercept,
        r2,
        points: pts.len(),
    })
}

/// One fit per vertex count.
pub fn fit_by_n(records: &[ExperimentRecord]) -> BTreeMap<usize, Result<PolylogFit>> {
    let mut groups: BTreeMap<usize, Vec<ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.n).or_default().push(r.clone());
    }
    groups.into_iter().map(|(n, rs)| (n, fit_polylog(&rs))).collect()
}
