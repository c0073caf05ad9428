use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use isingbench::io::{instance_from_json, samples_from_json, samples_to_json, Instance};
use isingbench::solvers::ENERGY_TOLERANCE;
use serde_json::json;

use crate::output::write_text;
use crate::spec::SolverSpec;
use crate::Ctx;

pub fn load_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    instance_from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned())
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// `exact`, `sa[:key=value,...]`, `sqa[:key=value,...]` or `external:COMMAND`.
    #[arg(long)]
    solver: SolverSpec,
    /// File stem of the sample file (default `<instance>__<solver>`).
    #[arg(long)]
    name: Option<String>,
}

pub fn run_solve(ctx: &Ctx, args: SolveArgs) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let set = args.solver.run(&inst.model, ctx.seed)?;
    let name = args.name.unwrap_or_else(|| format!("{}__{}", file_stem(&args.instance), args.solver.file_label()));
    let meta = ctx.prov.json_with(json!({ "instance": file_stem(&args.instance) }));
    let path = ctx.out.join(format!("{name}.json"));
    write_text(&path, &samples_to_json(&set, Some(meta)))?;
    match set.best() {
        Some(b) => println!(
            "{}: {} records, {} samples, best energy {}",
            path.display(),
            set.num_records(),
            set.total_count(),
            b.energy
        ),
        None => println!("{}: no samples", path.display()),
    }
    Ok(())
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    samples: PathBuf,
    /// Largest accepted difference between reported and recomputed energy.
    #[arg(long, default_value_t = ENERGY_TOLERANCE)]
    tolerance: f64,
}

pub fn run_verify(_ctx: &Ctx, args: VerifyArgs) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let text = std::fs::read_to_string(&args.samples).with_context(|| format!("reading {}", args.samples.display()))?;
    let set = samples_from_json(&text).with_context(|| format!("parsing {}", args.samples.display()))?;
    if let Err(e) = set.verify(&inst.model, args.tolerance) {
        bail!("{}: {e}", args.samples.display());
    }
    println!("{}: {} records verified", args.samples.display(), set.num_records());
    Ok(())
}
