use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use augpath::cuts::{expansion_report, min_odd_cut, SpectralOptions, EXACT_ODD_CUT_CAP};
use augpath::diagnostics::{diagnose, rational_from_f64, DiagConfig, DiagnosticRun};
use augpath::experiments::{certify, fit_polylog, parse_csv, sweep, write_csv, SweepOptions};
use augpath::generators::{GeneratorKind, GeneratorSpec};
use augpath::io::{parse_matching, read_graph, write_edge_list, write_matching};
use augpath::pipeline::{run_pipeline, PipelineOptions, StageTrace};
use augpath::search::shortest_augmenting_path;
use augpath::structure::structure_report;
use augpath::Matching;
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "augpath", version, about = "Short augmenting paths in regular expanders")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a regular graph in edge-list format.
    Gen {
        #[arg(long)]
        kind: GeneratorKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator residues or circulant jumps, comma separated.
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Expansion constant: exact for small graphs, spectral lower bound otherwise.
    Expansion {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "spectral")]
        exact: bool,
        #[arg(long)]
        spectral: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Smallest odd cut: exhaustive up to the cap, small connected sets beyond it.
    Oddcut {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = EXACT_ODD_CUT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 9)]
        sample_size: usize,
    },
    /// Shortest augmenting path up to a length cap.
    Augscan {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        cap: usize,
    },
    /// Staged matching pipeline.
    Match {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_stage: Option<usize>,
        #[arg(long)]
        trace: PathBuf,
        /// Also write the final matching.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frontier, tough vertex and invariant diagnostics for one matching.
    Diag {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the matching entering the last flipping pipeline stage.
        #[arg(long)]
        matching: Option<PathBuf>,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 60)]
        family_cap: usize,
        #[arg(long, default_value_t = 24)]
        max_level: usize,
    },
    /// Cuts, clique matching and Tutte deficiency.
    Structure {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the pipeline over a JSON array of generator specs.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Zero the timing column so reruns are byte identical.
        #[arg(long)]
        deterministic: bool,
    },
    /// Polylogarithmic fit of a sweep CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print(value: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn diag_json(run: &DiagnosticRun) -> serde_json::Value {
    let levels: Vec<_> = run
        .levels
        .iter()
        .map(|l| {
            let tough: Vec<_> = l
                .tough
                .iter()
                .map(|t| {
                    json!({
                        "x": t.vertex,
                        "age": t.age,
                        "family_size": t.family.as_ref().map(Vec::len),
                        "phase": t.phase,
                        "e": t.e_count,
                        "f": t.f_count,
                    })
                })
                .collect();
            json!({
                "level": l.level,
                "X": l.x_size,
                "B": l.b_size,
                "I": l.i_value,
                "J": l.j_value,
                "hypotheses": l.hypotheses,
                "flagged": l.flagged(),
                "growth_holds": l.growth_holds,
                "tough": tough,
            })
        })
        .collect();
    json!({
        "n": run.n,
        "seeds": run.seeds.len(),
        "shortest_augmenting": run.shortest_augmenting,
        "constants": run.constants,
        "levels": levels,
        "violations": run.violations,
        "instrumented": run.instrumented,
    })
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Command::Gen {
            kind,
            n,
            d,
            seed,
            params,
            out,
        } => {
            let g = GeneratorSpec {
                kind,
                n,
                d,
                seed,
                params,
            }
            .build()?;
            write_text(&out, &write_edge_list(&g))?;
            print(json!({"n": g.vertex_count(), "m": g.edge_count(), "d": g.degree()}))?;
        }
        Command::Expansion {
            input,
            exact,
            spectral,
            tol,
        } => {
            let g = read_graph(&input)?;
            let opts = SpectralOptions {
                tol,
                ..SpectralOptions::default()
            };
            let report = expansion_report(&g, exact || !spectral, opts)?;
            print(json!({
                "c0_exact": report.c0_exact.map(|r| r.to_string()),
                "argmin": report.argmin,
                "c0_spectral_lower": report.c0_spectral_lower,
                "lambda2": report.lambda2,
                "residual": report.residual,
                "iterations": report.iterations,
                "method": report.method,
                "rigorous": report.is_rigorous(),
            }))?;
        }
        Command::Oddcut {
            input,
            cap,
            sample_size,
        } => {
            let g = read_graph(&input)?;
            print(serde_json::to_value(min_odd_cut(&g, cap, sample_size, g.degree())?)?)?;
        }
        Command::Augscan { input, matching, cap } => {
            let g = read_graph(&input)?;
            let m = parse_matching(&g, &read_text(&matching)?)?;
            let path = shortest_augmenting_path(&g, &m, &m.unmatched(), cap)?;
            print(json!({
                "found": path.is_some(),
                "length": path.as_ref().map(|p| p.len()),
                "path": path.map(|p| p.into_vertices()),
            }))?;
        }
        Command::Match {
            input,
            max_stage,
            trace,
            out,
        } => {
            let g = read_graph(&input)?;
            let run = run_pipeline(
                &g,
                PipelineOptions {
                    max_stage: max_stage.unwrap_or(usize::MAX),
                    keep_entries: false,
                },
            )?;
            let mut csv = String::from(StageTrace::csv_header());
            csv.push('\n');
            for t in &run.traces {
                csv.push_str(&t.csv_row());
                csv.push('\n');
            }
            write_text(&trace, &csv)?;
            if let Some(out) = out {
                write_text(&out, &write_matching(&run.matching))?;
            }
            print(json!({
                "stages": run.traces.len(),
                "unmatched": run.matching.unmatched_count(),
                "perfect": run.matching.is_perfect(),
            }))?;
        }
        Command::Diag {
            input,
            matching,
            trace,
            family_cap,
            max_level,
        } => {
            let g = read_graph(&input)?;
            let m: Matching = match matching {
                Some(path) => parse_matching(&g, &read_text(&path)?)?,
                None => {
                    let run = run_pipeline(
                        &g,
                        PipelineOptions {
                            keep_entries: true,
                            ..Default::default()
                        },
                    )?;
                    match run.entries.into_iter().last() {
                        Some((_, m)) => m,
                        None => bail!("the pipeline never flipped; pass --matching"),
                    }
                }
            };
            let cert = certify(&g, SpectralOptions::default())?;
            let c0 = rational_from_f64(cert.c0)?;
            let cfg = DiagConfig {
                family_cap,
                max_level,
                ..DiagConfig::default()
            };
            let run = diagnose(&g, &m, &m.unmatched(), &c0, cert.admissible, cfg)?;
            let value = diag_json(&run);
            write_text(&trace, &serde_json::to_string_pretty(&value)?)?;
            print(json!({
                "levels": run.levels.len(),
                "flagged": run.levels.iter().filter(|l| l.flagged()).count(),
                "violations": run.violations.len(),
                "admissible": cert.admissible,
            }))?;
        }
        Command::Structure { input } => {
            let g = read_graph(&input)?;
            let r = structure_report(&g)?;
            print(json!({
                "min_cut": r.min_cut,
                "min_cut_side": r.min_cut_side,
                "min_odd_cut": r.min_odd_cut,
                "clique_matching": r.clique_matching,
                "tutte_deficiency": r.tutte.deficiency,
                "tutte": r.tutte,
            }))?;
        }
        Command::Sweep {
            spec,
            out,
            jobs,
            deterministic,
        } => {
            let specs: Vec<GeneratorSpec> =
                serde_json::from_str(&read_text(&spec)?).context("parsing the spec file")?;
            let result = sweep(
                &specs,
                SweepOptions {
                    jobs,
                    deterministic,
                    ..SweepOptions::default()
                },
            )?;
            write_text(&out, &write_csv(&result.records)?)?;
            print(json!({
                "graphs": result.graphs.len(),
                "admissible": result.graphs.iter().filter(|g| g.admissible).count(),
                "records": result.records.len(),
            }))?;
        }
        Command::Fit { input } => {
            let fit = fit_polylog(&parse_csv(&read_text(&input)?)?)?;
            print(json!({
                "C_hat": fit.c_hat,
                "exponent_hat": fit.exponent_hat,
                "r2": fit.r2,
                "C_r2": fit.c_r2,
                "intercept": fit.intercept,
                "points": fit.points,
            }))?;
        }
    }
    Ok(())
}
