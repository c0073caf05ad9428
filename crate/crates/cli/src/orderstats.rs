use anyhow::Result;
use clap::ValueEnum;
use isingbench::orderstats::{
    cdf_statistic, empirical_cdf, monte_carlo_range, pdf_statistic, statistic_upper_bound, tail_behavior_report,
    OrderStatsError, QuadratureConfig, Statistic,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{write_table, write_text};
use crate::spec::ContinuousSpec;
use crate::{svg, usage, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    #[value(name = "range")]
    Range,
    #[value(name = "scaled_range", alias = "scaled-range")]
    ScaledRange,
    #[value(name = "squared_range", alias = "squared-range")]
    SquaredRange,
}

impl From<Mode> for Statistic {
    fn from(m: Mode) -> Statistic {
        match m {
            Mode::Range => Statistic::Range,
            Mode::ScaledRange => Statistic::ScaledRange,
            Mode::SquaredRange => Statistic::SquaredRange,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Weight law: `uniform:LO,HI`, `tnormal:MU,SIGMA,LO,HI`, `exponential:RATE` or JSON.
    #[arg(long)]
    weights: ContinuousSpec,
    /// Capacity law, required by `scaled_range` and `--tail`.
    #[arg(long)]
    scale: Option<ContinuousSpec>,
    /// Sample size.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Range)]
    mode: Mode,
    /// Grid points from 0 to the largest attainable value.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Simulated draws for the empirical column; 0 disables it.
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
    /// Also write an SVG of both c.d.f.s.
    #[arg(long)]
    svg: bool,
    /// Also compare the tails of the scaled and squared ranges.
    #[arg(long)]
    tail: bool,
}

#[derive(Debug, Serialize)]
struct GridRow {
    x: f64,
    cdf: f64,
    pdf: f64,
    mc_cdf: Option<f64>,
    abs_diff: Option<f64>,
    error: String,
}

// Configuration problems are the caller's fault; convergence is not.
fn classify(e: OrderStatsError) -> anyhow::Error {
    match e {
        OrderStatsError::Convergence(_) => e.into(),
        other => usage(other.to_string()),
    }
}

fn evaluate(r: Result<f64, OrderStatsError>, what: &str, errors: &mut Vec<String>) -> Result<f64> {
    match r {
        Ok(v) => Ok(v),
        Err(OrderStatsError::Convergence(c)) => {
            errors.push(format!("{what}: {c}"));
            Ok(c.estimate)
        }
        Err(e) => Err(classify(e)),
    }
}

pub fn run(ctx: &Ctx, args: Args) -> Result<()> {
    let stat = Statistic::from(args.mode);
    let w = &args.weights.0;
    let c = args.scale.as_ref().map(|s| &s.0);
    if args.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    if args.grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    if c.is_none() && (stat == Statistic::ScaledRange || args.tail) {
        return Err(usage("scaled_range and --tail need --scale"));
    }
    if args.mc_samples != 0 && args.mc_samples < 1000 {
        return Err(usage("--mc-samples must be 0 or at least 1000"));
    }
    let cfg = QuadratureConfig::default();
    let upper = statistic_upper_bound(stat, w, c, &cfg).map_err(classify)?;
    cdf_statistic(stat, w, c, args.n, 0.5 * upper, &cfg).or_else(|e| match e {
        OrderStatsError::Convergence(_) => Ok(0.0),
        other => Err(classify(other)),
    })?;

    let draws = match args.mc_samples {
        0 => None,
        m => Some(monte_carlo_range(w, c, args.n, stat, m, ctx.seed).map_err(classify)?),
    };
    let xs: Vec<f64> = (0..args.grid).map(|i| upper * i as f64 / (args.grid - 1) as f64).collect();
    let rows = xs
        .par_iter()
        .map(|&x| {
            let mut errors = Vec::new();
            let cdf = evaluate(cdf_statistic(stat, w, c, args.n, x, &cfg), "cdf", &mut errors)?;
            let pdf = evaluate(pdf_statistic(stat, w, c, args.n, x, &cfg), "pdf", &mut errors)?;
            let mc_cdf = draws.as_ref().map(|d| empirical_cdf(d, x));
            Ok(GridRow { x, cdf, pdf, mc_cdf, abs_diff: mc_cdf.map(|m| (m - cdf).abs()), error: errors.join("; ") })
        })
        .collect::<Result<Vec<_>>>()?;

    let stem = format!("orderstats_{}", Statistic::from(args.mode).name());
    let extra = [("n", args.n.to_string()), ("mc_samples", args.mc_samples.to_string())];
    let path = write_table(&ctx.out, &stem, &rows, &ctx.prov, &extra, ctx.format)?;
    if args.svg {
        let mut series = vec![("quadrature".to_string(), rows.iter().map(|r| (r.x, r.cdf)).collect())];
        if draws.is_some() {
            series.push(("simulation".to_string(), rows.iter().filter_map(|r| Some((r.x, r.mc_cdf?))).collect()));
        }
        write_text(
            &ctx.out.join(format!("{stem}.svg")),
            &svg::lines(&format!("{} of n = {}", stat.name(), args.n), "x", "P(X <= x)", &series, &ctx.prov),
        )?;
    }
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    match rows.iter().filter_map(|r| r.abs_diff).reduce(f64::max) {
        Some(d) => {
            println!("{}: {} points, sup |cdf - mc_cdf| = {d:.5}, {failed} unconverged", path.display(), rows.len())
        }
        None => println!("{}: {} points, {failed} unconverged", path.display(), rows.len()),
    }

    if args.tail {
        let report = tail_behavior_report(w, c.expect("checked above"), args.n, &cfg).map_err(classify)?;
        let path = write_table(&ctx.out, "tail_report", &[&report], &ctx.prov, &extra, ctx.format)?;
        println!(
            "{}: q99/q50 scaled {:.4}, squared {:.4}",
            path.display(),
            report.scaled_range_tail_width,
            report.squared_range_tail_width
        );
    }
    Ok(())
}
