//! The `bench` subcommand: run presets × model families over a corpus
//! directory and write a CSV report.
//!
//! Three "families" are offered. `direct` runs the branch-and-bound solver
//! on the instance as-is. `qla` and `cgl` additionally build the
//! corresponding MIP formulation, re-encode the solver's optimal layering
//! as a model point, check every constraint, and price the point through
//! the model objective — a full round trip through the formulation, so
//! a row vouches for the model as well as the search. Rows are computed
//! in parallel (`--threads`), then sorted by (instance, preset, family),
//! so the CSV content is deterministic; only the seconds column varies
//! between runs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use layerforge::format_ratio;
use layerforge::solve::{solve_with_restarts, SolveConfig};
use rayon::prelude::*;

use crate::commands::{build_model, graph_files_sorted, instance_id, load_graph, Family, Resolved};
use crate::presets::Preset;

pub const CSV_HEADER: &str = "instance,preset,family,status,seconds,nodes,objective";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BenchFamily {
    Direct,
    Model(Family),
}

impl BenchFamily {
    fn parse(name: &str) -> Result<BenchFamily> {
        match name.trim().to_ascii_lowercase().as_str() {
            "direct" => Ok(BenchFamily::Direct),
            "qla" => Ok(BenchFamily::Model(Family::Qla)),
            "cgl" => Ok(BenchFamily::Model(Family::Cgl)),
            other => bail!("unknown family `{other}`; expected direct, qla or cgl"),
        }
    }

    fn name(self) -> &'static str {
        match self {
            BenchFamily::Direct => "direct",
            BenchFamily::Model(f) => f.name(),
        }
    }
}

struct Row {
    instance: String,
    preset: &'static str,
    family: &'static str,
    status: String,
    seconds: f64,
    nodes: u64,
    objective: String,
    vertices: usize,
}

fn run_job(
    path: &Path,
    preset: Preset,
    family: BenchFamily,
    time_limit: Option<Duration>,
) -> Result<Row> {
    let started = Instant::now();
    let g = load_graph(path)?;
    let resolved = Resolved {
        variant: preset.default_variant(),
        scheme: preset.scheme(g.n(), g.num_arcs()),
        y_layers: preset.y_layers(g.n()),
        preset: Some(preset),
    };
    let mut row = Row {
        instance: instance_id(path),
        preset: preset.name(),
        family: family.name(),
        status: String::new(),
        seconds: 0.0,
        nodes: 0,
        objective: String::new(),
        vertices: g.n(),
    };

    let model = match family {
        BenchFamily::Direct => None,
        BenchFamily::Model(f) => match build_model(&g, f, &resolved, false) {
            Ok(built) => Some(built),
            Err(_) => {
                // Layer budget or variant outside the formulation's reach
                // (e.g. CGL needs Y >= 3): report instead of failing the
                // whole benchmark.
                row.status = "unsupported".into();
                row.seconds = started.elapsed().as_secs_f64();
                return Ok(row);
            }
        },
    };

    let mut cfg = SolveConfig::new(resolved.variant, resolved.scheme.clone(), resolved.y_layers);
    cfg.time_limit = time_limit;
    let res = solve_with_restarts(&g, &cfg)?;
    row.status = res.status.as_str().into();
    row.nodes = res.nodes;
    row.objective = res.objective.as_ref().map(|o| format_ratio(o)).unwrap_or_default();

    if let (Some((ir, index)), Some(best)) = (&model, &res.best) {
        let point = index.encode(best)?;
        ir.check_point(&point)
            .with_context(|| format!("model round trip failed on {}", path.display()))?;
        let model_obj = ir.objective_at(&point)?;
        if Some(&model_obj) != res.objective.as_ref() {
            bail!(
                "model objective {} disagrees with solver objective {} on {}",
                format_ratio(&model_obj),
                row.objective,
                path.display()
            );
        }
        row.objective = format_ratio(&model_obj);
    }
    row.seconds = started.elapsed().as_secs_f64();
    Ok(row)
}

/// Size buckets mirroring the usual benchmark report groupings.
fn bucket(n: usize) -> &'static str {
    match n {
        0..=30 => "|V|<=30",
        31..=45 => "31<=|V|<=45",
        46..=60 => "46<=|V|<=60",
        _ => "|V|>=61",
    }
}

const BUCKET_ORDER: [&str; 4] = ["|V|<=30", "31<=|V|<=45", "46<=|V|<=60", "|V|>=61"];

pub fn cmd_bench(
    corpus: &Path,
    presets_arg: &str,
    families_arg: &str,
    time_limit: Option<u64>,
    out: &Path,
    threads: usize,
) -> Result<()> {
    let presets: Vec<Preset> = presets_arg
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(Preset::parse)
        .collect::<Result<_>>()?;
    let families: Vec<BenchFamily> = families_arg
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(BenchFamily::parse)
        .collect::<Result<_>>()?;
    if presets.is_empty() || families.is_empty() {
        bail!("need at least one preset and one family");
    }
    let files = graph_files_sorted(corpus)?;
    if files.is_empty() {
        bail!("no .gr instances found in {}", corpus.display());
    }
    let limit = crate::commands::resolve_time_limit(time_limit)?;

    let mut jobs: Vec<(PathBuf, Preset, BenchFamily)> = Vec::new();
    for f in &files {
        for &p in &presets {
            for &fam in &families {
                jobs.push((f.clone(), p, fam));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .context("cannot build worker pool")?;
    let mut rows: Vec<Row> = pool.install(|| {
        jobs.par_iter()
            .map(|(path, preset, family)| run_job(path, *preset, *family, limit))
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by(|a, b| {
        (&a.instance, a.preset, a.family).cmp(&(&b.instance, b.preset, b.family))
    });

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{:.3},{},{}",
            r.instance, r.preset, r.family, r.status, r.seconds, r.nodes, r.objective
        );
    }
    fs::write(out, csv).with_context(|| format!("cannot write {}", out.display()))?;

    // Timeout summary per (preset, family, size bucket): a run counts as a
    // timeout when the limit struck before optimality was proven.
    for &preset in &presets {
        for &family in &families {
            for b in BUCKET_ORDER {
                let group: Vec<&Row> = rows
                    .iter()
                    .filter(|r| {
                        r.preset == preset.name()
                            && r.family == family.name()
                            && bucket(r.vertices) == b
                    })
                    .collect();
                if group.is_empty() {
                    continue;
                }
                let timeouts = group
                    .iter()
                    .filter(|r| r.status == "feasible" || r.status == "timeout")
                    .count();
                println!(
                    "summary preset={} family={} {}: timeouts {}/{}",
                    preset.name(),
                    family.name(),
                    b,
                    timeouts,
                    group.len()
                );
            }
        }
    }
    println!("wrote {}", out.display());
    Ok(())
}
