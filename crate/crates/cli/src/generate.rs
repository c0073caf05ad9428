use std::sync::Arc;

use anyhow::Result;
use isingbench::generator::generate_instance;
use isingbench::io::instance_to_json;
use isingbench::model::hardness_ratio;
use isingbench::rng::child_seed;
use isingbench::topology::HardwareGraph;
use serde_json::json;

use crate::output::write_text;
use crate::spec::{parse_topology, DistSpec};
use crate::Ctx;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// `chimera:M,N,T`, `pegasus:M`, `zephyr:M,T`, `complete:N` or `file:PATH`.
    #[arg(long, value_parser = parse_topology)]
    topology: HardwareGraph,
    /// `cbfm`, `hardness:F`, or JSON (inline or a file) with `h` and `J` laws.
    #[arg(long, default_value = "cbfm")]
    dist: DistSpec,
    /// Number of instances; each gets a seed derived from the master seed.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// File stem of the written instances.
    #[arg(long, default_value = "instance")]
    name: String,
}

pub fn run(ctx: &Ctx, args: Args) -> Result<()> {
    if args.count == 0 {
        return Err(crate::usage("--count must be at least 1"));
    }
    let graph = Arc::new(args.topology);
    for i in 0..args.count {
        let (seed, file) = if args.count == 1 {
            (ctx.seed, format!("{}.json", args.name))
        } else {
            (child_seed(ctx.seed, i as u64), format!("{}_{i:03}.json", args.name))
        };
        let model = generate_instance(graph.clone(), &args.dist.h, &args.dist.j, seed)?;
        let report = hardness_ratio(&model)?;
        let meta = ctx.prov.json_with(json!({
            "distribution": args.dist.label,
            "target_F": args.dist.target_f,
            "F": report.f,
        }));
        let path = ctx.out.join(&file);
        write_text(&path, &instance_to_json(&model, Some(seed), Some(meta)))?;
        let f = report.f.map_or("undefined".to_string(), |f| format!("{f:.4}"));
        println!("{}: {} nodes, {} edges, F = {f}", path.display(), model.num_spins(), model.graph().num_edges());
    }
    Ok(())
}
