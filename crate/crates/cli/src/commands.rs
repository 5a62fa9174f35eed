use std::io::Write;

use netheal::engine::{find_reference_point, run_experiment};
use netheal::metrics::Metric;
use netheal::node::Protocol;
use netheal::topology::{generate, write_edge_list, GeneratorParams};

use crate::cli::{Command, CompareArgs, GenArgs, RefpointArgs, RunArgs};
use crate::error::{CliError, Result};
use crate::output::{Emit, RunManifest};
use crate::summary::{Comparison, Summary, SUMMARY_FILE};

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Run(args) => run(args, out),
        Command::Refpoint(args) => refpoint(args, out),
        Command::Compare(args) => compare(args, out),
        Command::Gen(args) => gen(args, out),
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn run(args: RunArgs, out: &mut dyn Write) -> Result<()> {
    let manifest = RunManifest {
        config: args.experiment.resolve()?,
        output_dir: args.out,
        emit: Emit {
            per_round_csv: !args.no_csv,
            summary_json: !args.no_summary,
            final_topology_snapshot: !args.no_topology,
        },
    };
    manifest.prepare_dir()?;
    let result = run_experiment(&manifest.config)?;
    for r in &result.runs {
        manifest.write_run(r)?;
    }
    let summary = Summary::from_result(&manifest.config, &result);
    if manifest.emit.summary_json {
        summary.write(&manifest.output_dir.join(SUMMARY_FILE))?;
    }
    writeln!(
        out,
        "{} reps of {} on {} nodes: {} failed to recover; results in {}",
        summary.reps,
        manifest.config.protocol,
        result.graph.live_count(),
        summary.failed_reps,
        manifest.output_dir.display()
    )
    .map_err(stdout_err)
}

fn refpoint(args: RefpointArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = args.experiment.resolve()?;
    if args.experiment.p_f.is_none() {
        cfg.p_f = 0.0;
    }
    if let Some(b) = args.budget {
        cfg.round_budget = b;
    }
    let protocols = match args.experiment.protocol {
        Some(p) => vec![p],
        None => vec![Protocol::Trickle, Protocol::MobileAgents],
    };
    writeln!(out, "protocol,reference_round,per_rep").map_err(stdout_err)?;
    for protocol in protocols {
        cfg.protocol = protocol;
        let rp = find_reference_point(&cfg)?;
        let reps: Vec<String> = rp.per_rep.iter().map(u32::to_string).collect();
        writeln!(out, "{protocol},{},{}", rp.round, reps.join(" ")).map_err(stdout_err)?;
    }
    Ok(())
}

fn compare(args: CompareArgs, out: &mut dyn Write) -> Result<()> {
    let metrics = if args.metric == "all" {
        Metric::ALL.to_vec()
    } else {
        vec![args.metric.parse::<Metric>().map_err(CliError::Config)?]
    };
    let (a, b) = (Summary::load(&args.a)?, Summary::load(&args.b)?);
    writeln!(out, "{}", Comparison::HEADER).map_err(stdout_err)?;
    for m in metrics {
        writeln!(out, "{}", Comparison::new(m, &a, &b)?.row()).map_err(stdout_err)?;
    }
    Ok(())
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<()> {
    let mut params = GeneratorParams::of_kind(args.kind);
    macro_rules! set {
        ($($arg:ident => $field:ident),*) => { $(if let Some(v) = args.$arg { params.$field = v; })* };
    }
    set!(n => n, k => k, beta => beta, clusters => n_clusters);
    let mut rng = netheal::rng::stream(args.seed, netheal::rng::GENERATOR);
    let graph = generate(&params, &mut rng)?;
    let header = vec![
        format!("netheal edges format {}", crate::output::FORMAT_VERSION),
        format!("version {}", crate::output::CODE_VERSION),
        format!("seed {}", args.seed),
        format!(
            "generator {}",
            serde_json::to_string(&params).expect("params serialize")
        ),
        format!("nodes {} edges {}", graph.live_count(), graph.edge_count()),
    ];
    match args.out {
        Some(path) => crate::output::write_graph(&graph, &header, &path),
        None => write_edge_list(&graph, &header, out).map_err(stdout_err),
    }
}
