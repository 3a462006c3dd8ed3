//! Command-line compiler front end: loads JSON graph or schedule documents,
//! applies a pass pipeline, and dispatches to a lowering backend.
//!
//! Identical inputs and flags produce byte-identical output; no configuration
//! is read from anywhere but the flags.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pulsegraph::eval::SampleBlock;
use pulsegraph::json::{parse_document, Document};
use pulsegraph::passes::{
    FoldConstants, Pipeline, Simplify, Substitute, ValidateDurations,
};
use pulsegraph::schedule::validate_waveform;
use pulsegraph::targets::{emit_samples, munch_dds, to_dot};
use pulsegraph::{Channel, Node, ScheduleMap};

/// The reported version carries the JSON document schema version alongside
/// the package version.
const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (schema 1)");

#[derive(Parser)]
#[command(name = "pulsegraph", version = VERSION, about = "Pulse graph compiler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input JSON document: a node or a schedule
    input: PathBuf,
    /// Variable binding `key=value`; repeatable
    #[arg(long = "bind", value_name = "K=V")]
    bind: Vec<String>,
    /// Comma-separated pass list to run before lowering
    #[arg(long, value_name = "A,B,C")]
    passes: Option<String>,
    /// Output path; stdout when omitted (schedules require a path)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the post-pass graph(s) as DOT to this path
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Render samples to CSV
    Render {
        #[command(flatten)]
        common: Common,
        /// Sample rate in Hz
        #[arg(long, value_name = "HZ")]
        rate: f64,
        /// Absolute start time in seconds
        #[arg(long, value_name = "S", default_value_t = 0.0)]
        t0: f64,
    },
    /// Lower to a target representation
    Compile {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        target: Target,
        /// Sample rate in Hz (samples target only)
        #[arg(long, value_name = "HZ")]
        rate: Option<f64>,
        /// Absolute start time in seconds (samples target only)
        #[arg(long, value_name = "S", default_value_t = 0.0)]
        t0: f64,
    },
    /// Export the graph(s) as DOT
    Dot {
        #[command(flatten)]
        common: Common,
    },
    /// Report scheduling violations (negative resolved durations)
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Samples,
    Dds,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Render { common, rate, t0 } => {
            let graphs = load_and_run(&common, default_passes())?;
            emit(&common, graphs, |node, _| render_csv(node, rate, t0))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compile {
            common,
            target,
            rate,
            t0,
        } => {
            let graphs = load_and_run(&common, default_passes())?;
            match target {
                Target::Samples => {
                    let rate =
                        rate.ok_or_else(|| anyhow!("the samples target requires --rate"))?;
                    emit(&common, graphs, |node, _| render_csv(node, rate, t0))?;
                }
                Target::Dds => emit(&common, graphs, |node, _| dds_json(node))?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { common } => {
            let graphs = load_and_run(&common, default_passes())?;
            emit(&common, graphs, |node, _| Ok(to_dot(node)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { common } => {
            // Bind and fold, but do not fail inside the pipeline; the point
            // is to list every violation.
            let graphs = load_and_run(&common, "substitute,fold")?;
            let mut violations = Vec::new();
            for (channel, node) in &graphs {
                if let Node::Waveform(w) = node {
                    for v in validate_waveform(w).context("validation")? {
                        violations.push(match channel {
                            Some(c) => {
                                format!("violation: channel {} ({}): {v}", c.label(), c.id())
                            }
                            None => format!("violation: {v}"),
                        });
                    }
                }
            }
            if violations.is_empty() {
                println!("ok");
                Ok(ExitCode::SUCCESS)
            } else {
                for line in violations {
                    println!("{line}");
                }
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

fn default_passes() -> &'static str {
    "substitute,fold,simplify,validate"
}

/// Post-pass graphs keyed by channel; single-graph inputs use `None`.
type Graphs = Vec<(Option<Channel>, Node)>;

fn load_and_run(common: &Common, default_passes: &str) -> Result<Graphs> {
    let text = fs::read_to_string(&common.input)
        .with_context(|| format!("reading {}", common.input.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", common.input.display()))?;
    let document = parse_document(&value).context("loading document")?;

    let bindings = parse_bindings(&common.bind)?;
    let pass_names = common.passes.as_deref().unwrap_or(default_passes);
    let pipeline = build_pipeline(pass_names, &bindings)?;

    match document {
        Document::Node(node) => {
            let result = pipeline
                .run(&node)
                .map_err(|e| anyhow!(e.to_string()))
                .context("pipeline")?;
            Ok(vec![(None, result.graph)])
        }
        Document::Schedule(map) => run_schedule(&pipeline, &map),
    }
}

fn run_schedule(pipeline: &Pipeline, map: &ScheduleMap) -> Result<Graphs> {
    let mut graphs = Vec::new();
    let mut failures = Vec::new();
    for (channel, result) in pipeline.run_schedule(map) {
        match result {
            Ok(result) => graphs.push((Some(channel), result.graph)),
            Err(e) => failures.push(format!(
                "channel {} ({}): {e}",
                channel.label(),
                channel.id()
            )),
        }
    }
    if failures.is_empty() {
        Ok(graphs)
    } else {
        bail!("{}", failures.join("\n"));
    }
}

fn parse_bindings(bind: &[String]) -> Result<HashMap<String, f64>> {
    let mut bindings = HashMap::new();
    for entry in bind {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("--bind expects key=value, got {entry:?}"))?;
        if key.is_empty() {
            bail!("--bind key must be nonempty in {entry:?}");
        }
        let value: f64 = value
            .parse()
            .with_context(|| format!("--bind value in {entry:?}"))?;
        bindings.insert(key.to_owned(), value);
    }
    Ok(bindings)
}

fn build_pipeline(names: &str, bindings: &HashMap<String, f64>) -> Result<Pipeline> {
    let mut pipeline = Pipeline::new();
    for name in names.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        match name {
            "substitute" => pipeline.push(Box::new(Substitute::new(bindings.clone()))),
            "fold" => pipeline.push(Box::new(FoldConstants)),
            "simplify" => pipeline.push(Box::new(Simplify)),
            "validate" => pipeline.push(Box::new(ValidateDurations)),
            other => {
                bail!("unknown pass {other:?} (expected substitute, fold, simplify, validate)")
            }
        }
    }
    Ok(pipeline)
}

/// Writes one artifact per graph. Single graphs go to `--out` or stdout;
/// schedules require `--out` and write one file per channel, suffixed by
/// channel label and id.
fn emit(
    common: &Common,
    graphs: Graphs,
    produce: impl Fn(&Node, Option<&Channel>) -> Result<String>,
) -> Result<()> {
    if let Some(dot_path) = &common.dot {
        write_all(dot_path, &graphs, |node, _| Ok(to_dot(node)))?;
    }
    match &common.out {
        Some(out) => write_all(out, &graphs, produce),
        None => {
            let [(channel, node)] = graphs.as_slice() else {
                bail!("schedule outputs are per-channel files; pass --out");
            };
            print!("{}", produce(node, channel.as_ref())?);
            Ok(())
        }
    }
}

fn write_all(
    base: &Path,
    graphs: &Graphs,
    produce: impl Fn(&Node, Option<&Channel>) -> Result<String>,
) -> Result<()> {
    for (channel, node) in graphs {
        let path = match channel {
            None => base.to_path_buf(),
            Some(c) => channel_path(base, c),
        };
        let artifact = produce(node, channel.as_ref())?;
        fs::write(&path, artifact).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn channel_path(base: &Path, channel: &Channel) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let suffix = format!("{}-{}", sanitize(channel.label()), sanitize(channel.id()));
    let name = match base.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}.{suffix}.{ext}"),
        None => format!("{stem}.{suffix}"),
    };
    base.with_file_name(name)
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn as_waveform(node: &Node) -> Result<&pulsegraph::Waveform> {
    node.as_waveform()
        .ok_or_else(|| anyhow!("this backend needs a waveform, the document is a scalar"))
}

/// CSV with times to 12 significant digits and values to 9.
fn render_csv(node: &Node, rate: f64, t0: f64) -> Result<String> {
    if !(rate > 0.0) {
        bail!("--rate must be positive, got {rate}");
    }
    let block: SampleBlock = emit_samples(as_waveform(node)?, rate, t0).context("render")?;
    let mut out = String::from("index,time_s,value\n");
    for (k, value) in block.values.iter().enumerate() {
        writeln!(out, "{k},{:.11e},{value:.8e}", block.time_of(k)).unwrap();
    }
    Ok(out)
}

fn dds_json(node: &Node) -> Result<String> {
    let segments = munch_dds(as_waveform(node)?).context("dds lowering")?;
    let mut out = serde_json::to_string_pretty(&segments)?;
    out.push('\n');
    Ok(out)
}
