//! Implementations of the CLI subcommands (except `bench`, see `bench.rs`).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use layerforge::graph::{generate_random, parse_dot, parse_edge_list, DiGraph, GenSpec};
use layerforge::metrics::{
    check_feasible, evaluate, objective, parse_layering, Variant, WeightScheme,
};
use layerforge::model::{build_cgl, build_qla, read_solution, write_lp, ModelIr};
use layerforge::solve::{
    brute_force, solve_with_restarts, SolveConfig, SolveStatus, DEFAULT_TIME_LIMIT,
};
use layerforge::{format_ratio, parse_ratio};
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::presets::Preset;
use crate::records::{CheckOut, MetricsOut, RunRecord, ValidationOut, WeightsOut};
use crate::ModelArgs;

/// Exit code for "the instance is infeasible / the check failed", as
/// opposed to 1 for usage or I/O errors.
pub const EXIT_INFEASIBLE: u8 = 2;

/// Which MIP formulation a command addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Qla,
    Cgl,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Qla => "qla",
            Family::Cgl => "cgl",
        }
    }
}

/// Load a graph file; `.dot` / `.gv` files go through the DOT reader,
/// anything else is treated as an edge list.
pub fn load_graph(path: &Path) -> Result<DiGraph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read graph file {}", path.display()))?;
    let by_ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.eq_ignore_ascii_case("dot") || e.eq_ignore_ascii_case("gv"))
        .unwrap_or(false);
    if by_ext {
        let (g, _names) = parse_dot(&text)
            .with_context(|| format!("cannot parse DOT file {}", path.display()))?;
        Ok(g)
    } else {
        parse_edge_list(&text)
            .with_context(|| format!("cannot parse edge list {}", path.display()))
    }
}

pub fn instance_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Resolved model parameters: preset first, explicit flags override.
pub struct Resolved {
    pub variant: Variant,
    pub scheme: WeightScheme,
    pub y_layers: u32,
    pub preset: Option<Preset>,
}

pub fn resolve_model(args: &ModelArgs, g: &DiGraph) -> Result<Resolved> {
    let preset = args.preset.as_deref().map(Preset::parse).transpose()?;
    let (mut variant, mut scheme, mut y) = match preset {
        Some(p) => (
            p.default_variant(),
            p.scheme(g.n(), g.num_arcs()),
            p.y_layers(g.n()),
        ),
        None => (
            Variant::Glp,
            WeightScheme::new(
                BigRational::one(),
                BigRational::one(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::one(),
                BigRational::one(),
            )
            .expect("default weights are valid"),
            g.n() as u32,
        ),
    };
    if let Some(v) = &args.variant {
        variant = v
            .parse()
            .map_err(|e| anyhow::anyhow!("invalid --variant: {e}"))?;
    }
    if let Some(yl) = args.ylayers {
        y = yl;
    }
    let pick = |flag: &Option<String>, current: &BigRational| -> Result<BigRational> {
        match flag {
            Some(text) => parse_ratio(text).map_err(|e| anyhow::anyhow!("invalid weight: {e}")),
            None => Ok(current.clone()),
        }
    };
    scheme = WeightScheme::new(
        pick(&args.wlen, &scheme.w_len)?,
        pick(&args.wrev, &scheme.w_rev)?,
        pick(&args.wwid, &scheme.w_wid)?,
        pick(&args.wscl, &scheme.w_scl)?,
        pick(&args.rw, &scheme.r_w)?,
        pick(&args.rh, &scheme.r_h)?,
    )?;
    Ok(Resolved {
        variant,
        scheme,
        y_layers: y,
        preset,
    })
}

/// Time limit precedence: explicit flag, then `LAYERFORGE_TIME_LIMIT`
/// (seconds), then 1800 s. A value of 0 disables the limit.
pub fn resolve_time_limit(flag: Option<u64>) -> Result<Option<Duration>> {
    let seconds = match flag {
        Some(s) => s,
        None => match std::env::var("LAYERFORGE_TIME_LIMIT") {
            Ok(text) => text
                .trim()
                .parse::<u64>()
                .with_context(|| format!("invalid LAYERFORGE_TIME_LIMIT `{text}`"))?,
            Err(_) => DEFAULT_TIME_LIMIT.as_secs(),
        },
    };
    Ok(if seconds == 0 {
        None
    } else {
        Some(Duration::from_secs(seconds))
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ManifestFile {
    file: String,
    seed: u64,
    vertices: usize,
    arcs: usize,
}

#[derive(Serialize)]
struct Manifest {
    n_target: usize,
    count: usize,
    base_seed: u64,
    density: String,
    files: Vec<ManifestFile>,
}

pub fn cmd_gen(
    n: usize,
    count: usize,
    out_dir: &Path,
    base_seed: u64,
    density: Option<BigRational>,
) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let density =
        density.unwrap_or_else(|| BigRational::new(BigInt::from(3), BigInt::from(2)));
    let mut files = Vec::with_capacity(count);
    for i in 0..count {
        let seed = base_seed.wrapping_add(i as u64);
        let spec = GenSpec {
            n_target: n,
            density: density.clone(),
            seed,
        };
        let g = generate_random(&spec)?;
        let name = format!("rand_{n}_{seed}.gr");
        fs::write(out_dir.join(&name), g.to_edge_list())?;
        files.push(ManifestFile {
            file: name,
            seed,
            vertices: g.n(),
            arcs: g.num_arcs(),
        });
    }
    let manifest = Manifest {
        n_target: n,
        count,
        base_seed,
        density: format_ratio(&density),
        files,
    };
    fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    println!(
        "wrote {} graphs and manifest.json to {}",
        count,
        out_dir.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

pub fn build_model(
    g: &DiGraph,
    family: Family,
    r: &Resolved,
    first_layer_row: bool,
) -> Result<(ModelIr, ModelIndex)> {
    match family {
        Family::Qla => {
            let (ir, index) = build_qla(g, r.y_layers, r.variant, &r.scheme)?;
            Ok((ir, ModelIndex::Qla(index)))
        }
        Family::Cgl => {
            let (ir, index) = build_cgl(g, r.y_layers, r.variant, &r.scheme, first_layer_row)?;
            Ok((ir, ModelIndex::Cgl(index)))
        }
    }
}

pub enum ModelIndex {
    Qla(layerforge::model::QlaIndex),
    Cgl(layerforge::model::CglIndex),
}

impl ModelIndex {
    pub fn encode(
        &self,
        layering: &layerforge::metrics::Layering,
    ) -> Result<Vec<BigRational>, layerforge::model::ModelError> {
        match self {
            ModelIndex::Qla(i) => i.encode(layering),
            ModelIndex::Cgl(i) => i.encode(layering),
        }
    }

    pub fn decode(
        &self,
        point: &[BigRational],
    ) -> Result<layerforge::metrics::Layering, layerforge::model::ModelError> {
        match self {
            ModelIndex::Qla(i) => i.decode(point),
            ModelIndex::Cgl(i) => i.decode(point),
        }
    }
}

pub fn cmd_build(
    graph: &Path,
    family: Family,
    args: &ModelArgs,
    out: &Path,
    first_layer_row: bool,
) -> Result<()> {
    let g = load_graph(graph)?;
    let r = resolve_model(args, &g)?;
    let (ir, _) = build_model(&g, family, &r, first_layer_row)?;
    let text = write_lp(&ir)?;
    fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))?;
    println!("family: {}", family.name());
    println!("variant: {}", r.variant.name());
    println!("y_layers: {}", r.y_layers);
    println!("variables: {}", ir.num_vars());
    println!("constraints: {}", ir.num_constraints());
    println!("wrote {}", out.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

pub fn cmd_solve(
    graph: &Path,
    args: &ModelArgs,
    time_limit: Option<u64>,
    brute: bool,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let r = resolve_model(args, &g)?;
    let mut cfg = SolveConfig::new(r.variant, r.scheme.clone(), r.y_layers);
    cfg.time_limit = resolve_time_limit(time_limit)?;
    let res = if brute {
        brute_force(&g, &cfg)?
    } else {
        solve_with_restarts(&g, &cfg)?
    };

    let (layering, metrics) = match &res.best {
        Some(lay) => {
            let m = evaluate(&g, lay, &r.scheme)?;
            let obj = objective(&m, &r.scheme, r.variant)?;
            let stored = res.objective.as_ref().expect("best implies objective");
            if &obj != stored {
                bail!(
                    "internal error: evaluator objective {} disagrees with solver objective {}",
                    format_ratio(&obj),
                    format_ratio(stored)
                );
            }
            (
                Some(lay.layers().to_vec()),
                Some(MetricsOut::new(&m, &obj)),
            )
        }
        None => (None, None),
    };
    let record = RunRecord {
        instance: instance_id(graph),
        family: "direct".into(),
        variant: r.variant.name().into(),
        preset: r.preset.map(|p| p.name().into()),
        y_layers: r.y_layers,
        weights: WeightsOut::from_scheme(&r.scheme),
        status: res.status.as_str().into(),
        objective: res.objective.as_ref().map(format_ratio),
        lower_bound: res.lower_bound.as_ref().map(format_ratio),
        nodes: res.nodes,
        wall_time: res.wall_time.as_secs_f64(),
        layering,
        metrics,
    };
    print_json(&record)?;
    Ok(if res.status == SolveStatus::Infeasible {
        EXIT_INFEASIBLE
    } else {
        0
    })
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

pub fn cmd_validate(graph: &Path, layering_file: &Path, args: &ModelArgs) -> Result<u8> {
    let g = load_graph(graph)?;
    let r = resolve_model(args, &g)?;
    let text = fs::read_to_string(layering_file)
        .with_context(|| format!("cannot read layering file {}", layering_file.display()))?;
    let lay = parse_layering(&text, g.n(), args.ylayers)?;
    let feasible = check_feasible(&g, &lay, r.variant)?;
    let metrics = if feasible {
        let m = evaluate(&g, &lay, &r.scheme)?;
        let obj = objective(&m, &r.scheme, r.variant)?;
        Some(MetricsOut::new(&m, &obj))
    } else {
        None
    };
    print_json(&ValidationOut {
        feasible,
        variant: r.variant.name().into(),
        metrics,
    })?;
    Ok(if feasible { 0 } else { EXIT_INFEASIBLE })
}

// ---------------------------------------------------------------------------
// check-solution
// ---------------------------------------------------------------------------

pub fn cmd_check_solution(
    graph: &Path,
    solution: &Path,
    family: Family,
    args: &ModelArgs,
    first_layer_row: bool,
) -> Result<u8> {
    let g = load_graph(graph)?;
    let r = resolve_model(args, &g)?;
    let (ir, index) = build_model(&g, family, &r, first_layer_row)?;
    let text = fs::read_to_string(solution)
        .with_context(|| format!("cannot read solution file {}", solution.display()))?;
    let point = read_solution(&text, &ir)?;

    let mut out = CheckOut {
        family: family.name().into(),
        variant: r.variant.name().into(),
        feasible: false,
        violation: None,
        layering: None,
        model_objective: None,
        evaluator_objective: None,
        matches: None,
    };
    if let Err(e) = ir.check_point(&point) {
        out.violation = Some(e.to_string());
        print_json(&out)?;
        return Ok(EXIT_INFEASIBLE);
    }
    out.feasible = true;
    let lay = index.decode(&point)?;
    let model_obj = ir.objective_at(&point)?;
    let m = evaluate(&g, &lay, &r.scheme)?;
    let eval_obj = objective(&m, &r.scheme, r.variant)?;
    let matches = model_obj == eval_obj;
    out.layering = Some(lay.layers().to_vec());
    out.model_objective = Some(format_ratio(&model_obj));
    out.evaluator_objective = Some(format_ratio(&eval_obj));
    out.matches = Some(matches);
    print_json(&out)?;
    Ok(if matches { 0 } else { EXIT_INFEASIBLE })
}

// ---------------------------------------------------------------------------
// render
// ---------------------------------------------------------------------------

pub fn cmd_render(graph: &Path, layering_file: &Path, out: &Path) -> Result<()> {
    let g = load_graph(graph)?;
    let text = fs::read_to_string(layering_file)
        .with_context(|| format!("cannot read layering file {}", layering_file.display()))?;
    let lay = parse_layering(&text, g.n(), None)?;
    let svg = crate::svg::render_svg(&g, &lay)?;
    fs::write(out, svg).with_context(|| format!("cannot write {}", out.display()))?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Used by `gen` paths in tests; re-exported for `bench`.
pub fn graph_files_sorted(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read corpus directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .map(|e| e.eq_ignore_ascii_case("gr"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    Ok(files)
}
