use std::path::PathBuf;

use anyhow::{Context, Result};
use isingbench::knapsack::{batch_hardness, synthetic_instance, KnapsackError, DEFAULT_BINS};
use serde::Serialize;

use crate::output::{write_table, write_text};
use crate::svg;
use crate::Ctx;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Instance files or directories of instance files.
    #[arg(long = "input", num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Penalty weight (default: 1 + largest profit, per instance).
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Also draw this many synthetic instances from the master seed.
    #[arg(long)]
    synthetic: Option<usize>,
    /// Items per synthetic instance.
    #[arg(long, default_value_t = 50)]
    items: usize,
    /// Write the synthetic instances under `<out>/instances`.
    #[arg(long)]
    save_instances: bool,
}

#[derive(Debug, Serialize)]
struct Row {
    file: String,
    n: usize,
    #[serde(rename = "C")]
    capacity: u64,
    lambda: f64,
    sigma_h: f64,
    #[serde(rename = "sigma_J")]
    sigma_j: f64,
    #[serde(rename = "F_qubo")]
    f_qubo: Option<f64>,
    #[serde(rename = "F_ising")]
    f_ising: Option<f64>,
    dominance: bool,
}

#[derive(Debug, Serialize)]
struct Bin {
    bin_lo: f64,
    bin_hi: f64,
    count: u64,
}

fn collect_sources(inputs: &[PathBuf]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(input)
                .with_context(|| format!("listing {}", input.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for f in files {
                let text = std::fs::read_to_string(&f).with_context(|| format!("reading {}", f.display()))?;
                out.push((f.display().to_string(), text));
            }
        } else {
            let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            out.push((input.display().to_string(), text));
        }
    }
    Ok(out)
}

pub fn run(ctx: &Ctx, args: Args) -> Result<()> {
    if args.inputs.is_empty() && args.synthetic.is_none() {
        return Err(crate::usage("give --input or --synthetic"));
    }
    if args.bins == 0 {
        return Err(crate::usage("--bins must be positive"));
    }
    if let Some(l) = args.lambda {
        if !(l > 0.0 && l.is_finite()) {
            return Err(crate::usage(format!("--lambda must be positive, got {l}")));
        }
    }
    let mut sources = collect_sources(&args.inputs)?;
    for i in 0..args.synthetic.unwrap_or(0) {
        let inst = synthetic_instance(args.items, ctx.seed, i as u64);
        let name = format!("synthetic_{i:04}.kp");
        if args.save_instances {
            write_text(&ctx.out.join("instances").join(&name), &inst.to_text())?;
        }
        sources.push((name, inst.to_text()));
    }

    let report = match batch_hardness(&sources, args.lambda, args.bins) {
        Err(KnapsackError::AllFailed(failures)) => {
            for (name, reason) in &failures {
                eprintln!("warning: {name}: {reason}");
            }
            anyhow::bail!("no instance could be analysed");
        }
        other => other?,
    };
    for (name, reason) in &report.failures {
        eprintln!("warning: {name}: {reason}");
    }

    let rows: Vec<Row> = report
        .rows
        .iter()
        .map(|r| Row {
            file: r.name.clone(),
            n: r.n,
            capacity: r.capacity,
            lambda: r.lambda,
            sigma_h: r.hardness.ising.sigma_h,
            sigma_j: r.hardness.ising.sigma_j,
            f_qubo: r.hardness.qubo.f,
            f_ising: r.hardness.ising.f,
            dominance: r.ranges.dominance,
        })
        .collect();
    let lambda = args.lambda.map_or("1 + max profit".to_string(), |l| l.to_string());
    let extra = [("lambda", lambda), ("warnings", report.warning_count().to_string())];
    let path = write_table(&ctx.out, "kp_hardness", &rows, &ctx.prov, &extra, ctx.format)?;
    if let Some(h) = &report.histogram {
        let bins: Vec<Bin> = (0..h.counts.len())
            .map(|i| Bin { bin_lo: h.edges[i], bin_hi: h.edges[i + 1], count: h.counts[i] })
            .collect();
        write_table(&ctx.out, "kp_histogram", &bins, &ctx.prov, &extra, ctx.format)?;
        write_text(
            &ctx.out.join("kp_histogram.svg"),
            &svg::histogram("Hardness ratio of knapsack QUBOs (Ising form)", "F", h, Some(1.0), &ctx.prov),
        )?;
    }
    println!(
        "{}: {} instances, {} skipped, F_ising > 1 for {:.1}%",
        path.display(),
        rows.len(),
        report.warning_count(),
        100.0 * report.fraction_ising_above_one()
    );
    Ok(())
}
