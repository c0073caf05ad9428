use std::path::PathBuf;

use anyhow::{bail, Result};
use isingbench::io::samples_to_json;
use isingbench::metrics::{consistency_report, relative_difference};
use isingbench::model::{hardness_ratio, SampleSet};
use isingbench::rng::child_seed;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::output::write_text;
use crate::solve::{file_stem, load_instance};
use crate::spec::SolverSpec;
use crate::svg::{self, BandPoint};
use crate::Ctx;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Instance files.
    #[arg(long = "instance", required = true, num_args = 1..)]
    instances: Vec<PathBuf>,
    /// Solver whose samples are scored; repeat for several.
    #[arg(long = "candidate", required = true)]
    candidates: Vec<SolverSpec>,
    /// Solver whose best energy is the reference.
    #[arg(long)]
    baseline: SolverSpec,
    /// Reads per sampling solver, replacing the reads in each spec.
    #[arg(long)]
    repetitions: Option<usize>,
}

#[derive(Debug, Serialize)]
struct RlRow {
    instance: String,
    #[serde(rename = "F")]
    f: Option<f64>,
    candidate: String,
    baseline: String,
    baseline_min: Option<f64>,
    samples: u64,
    rl_min: Option<f64>,
    rl_q1: Option<f64>,
    rl_median: Option<f64>,
    rl_mean: Option<f64>,
    rl_q3: Option<f64>,
    rl_max: Option<f64>,
    error: String,
}

#[derive(Debug, Serialize)]
struct GapRow {
    solver: String,
    instance: String,
    #[serde(rename = "F")]
    f: Option<f64>,
    min_energy: f64,
    mean_gap: f64,
    q1_gap: f64,
    median_gap: f64,
    q3_gap: f64,
    max_gap: f64,
    samples: u64,
}

pub fn run(ctx: &Ctx, args: Args) -> Result<()> {
    let mut solvers = args.candidates.clone();
    solvers.push(args.baseline.clone());
    if let Some(r) = args.repetitions {
        if r == 0 {
            return Err(crate::usage("--repetitions must be positive"));
        }
        solvers = solvers.into_iter().map(|s| s.with_reads(r)).collect();
    }
    let mut labels: Vec<&str> = solvers.iter().map(|s| s.label.as_str()).collect();
    labels.sort_unstable();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(crate::usage("solver labels must be distinct; add label=NAME to a spec"));
    }

    let instances = args.instances.iter().map(|p| load_instance(p)).collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = args.instances.iter().map(|p| file_stem(p)).collect();
    let hardness: Vec<Option<f64>> =
        instances.iter().map(|i| hardness_ratio(&i.model).ok().and_then(|r| r.f)).collect();

    let jobs: Vec<(usize, usize)> =
        (0..instances.len()).flat_map(|i| (0..solvers.len()).map(move |k| (i, k))).collect();
    let results: Vec<Result<SampleSet, String>> = jobs
        .par_iter()
        .map(|&(i, k)| {
            let seed = child_seed(child_seed(ctx.seed, i as u64), k as u64);
            solvers[k].run(&instances[i].model, seed).map_err(|e| e.to_string())
        })
        .collect();
    let result = |i: usize, k: usize| &results[i * solvers.len() + k];

    for (&(i, k), r) in jobs.iter().zip(&results) {
        match r {
            Ok(set) => {
                let meta = ctx.prov.json_with(json!({ "instance": names[i] }));
                let path = ctx.out.join("samples").join(format!("{}__{}.json", names[i], solvers[k].file_label()));
                write_text(&path, &samples_to_json(set, Some(meta)))?;
            }
            Err(e) => log::warn!("{} on {}: {e}", solvers[k], names[i]),
        }
    }
    if results.iter().all(|r| r.is_err()) {
        bail!("every solver run failed");
    }

    let base_k = solvers.len() - 1;
    let mut rl_rows = Vec::new();
    let mut boxes = Vec::new();
    for i in 0..instances.len() {
        for k in 0..base_k {
            let mut row = RlRow {
                instance: names[i].clone(),
                f: hardness[i],
                candidate: solvers[k].label.clone(),
                baseline: args.baseline.label.clone(),
                baseline_min: None,
                samples: 0,
                rl_min: None,
                rl_q1: None,
                rl_median: None,
                rl_mean: None,
                rl_q3: None,
                rl_max: None,
                error: String::new(),
            };
            match (result(i, k), result(i, base_k)) {
                (Ok(cand), Ok(base)) => match relative_difference(cand, base) {
                    Ok(rl) => {
                        let s = &rl.summary;
                        row.baseline_min = Some(rl.baseline_min);
                        row.samples = rl.rl_values.len() as u64;
                        (row.rl_min, row.rl_q1, row.rl_median) = (Some(s.min), Some(s.q1), Some(s.median));
                        (row.rl_mean, row.rl_q3, row.rl_max) = (Some(s.mean), Some(s.q3), Some(s.max));
                        boxes.push((format!("{}/{}", names[i], solvers[k].label), rl.summary));
                    }
                    Err(e) => row.error = e.to_string(),
                },
                (Err(e), _) => row.error = format!("candidate failed: {e}"),
                (_, Err(e)) => row.error = format!("baseline failed: {e}"),
            }
            rl_rows.push(row);
        }
    }

    let mut gap_rows = Vec::new();
    let mut bands = Vec::new();
    for (k, solver) in solvers.iter().enumerate() {
        let groups: Vec<((Option<f64>, String), SampleSet)> = (0..instances.len())
            .filter_map(|i| result(i, k).as_ref().ok().map(|s| ((hardness[i], names[i].clone()), s.clone())))
            .collect();
        let report = consistency_report(&groups);
        for (f, name) in &report.skipped {
            log::warn!("{solver} on {name} (F = {f:?}): no samples");
        }
        let mut points = Vec::new();
        for (idx, r) in report.rows.iter().enumerate() {
            let (f, name) = &r.group_key;
            points.push(BandPoint { x: f.unwrap_or(idx as f64), mid: r.mean_gap, lo: r.q1_gap, hi: r.q3_gap });
            gap_rows.push(GapRow {
                solver: solver.label.clone(),
                instance: name.clone(),
                f: *f,
                min_energy: r.min_energy,
                mean_gap: r.mean_gap,
                q1_gap: r.q1_gap,
                median_gap: r.median_gap,
                q3_gap: r.q3_gap,
                max_gap: r.max_gap,
                samples: r.samples,
            });
        }
        bands.push((solver.label.clone(), points));
    }

    let extra = [("baseline", args.baseline.label.clone())];
    let rl_path = crate::output::write_table(&ctx.out, "rl", &rl_rows, &ctx.prov, &extra, ctx.format)?;
    let gap_path = crate::output::write_table(&ctx.out, "consistency", &gap_rows, &ctx.prov, &extra, ctx.format)?;
    write_text(
        &ctx.out.join("rl_boxplot.svg"),
        &svg::boxplot("Relative difference to the baseline minimum", "RL", &boxes, &ctx.prov),
    )?;
    write_text(
        &ctx.out.join("consistency.svg"),
        &svg::band("Gap from the minimum energy found", "F", "energy gap", &bands, &ctx.prov),
    )?;
    let failed = rl_rows.iter().filter(|r| !r.error.is_empty()).count();
    println!("{} comparisons ({failed} failed): {}, {}", rl_rows.len(), rl_path.display(), gap_path.display());
    Ok(())
}
