use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cluster_lab::areaspec::AreaSpec;
use cluster_lab::functionals::{
    anisotropic_cluster_perimeter, fractional_cluster_perimeter, FractionalOrder, Norm,
};
use cluster_lab::manifest::{sha256_hex, RunManifest};
use cluster_lab::minimizer::{minimize_n_cluster, p_sequence, AnnealConfig, GridSpec, MinimizeResult, PSequence};
use cluster_lab::packings::{
    apollonian_cluster, build_cantor_cluster, build_square_gasket, estimate_packing_exponent, figure_areas,
    generate_apollonian, CantorSchedule, ExponentEstimate,
};
use cluster_lab::report::{report, RunRecord};
use cluster_lab::svg::{cluster_svg, grid_svg};
use cluster_lab::{Cluster, Error, Region};

use crate::records;

/// Manifest key for output printed to stdout.
pub const STDOUT_KEY: &str = "-";

#[derive(Parser, Debug)]
#[command(name = "cluster-lab", version, about = "Planar clusters, packings and annealed minimal clusters")]
pub struct Cli {
    /// Seed for every random choice of the run.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG picture here.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    /// Write a replay manifest here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a cluster.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Perimeters of a cluster file.
    Perim(PerimArgs),
    /// Anneal a grid cluster with prescribed areas.
    Minimize(MinimizeArgs),
    /// Bracket the exponent of an Apollonian packing.
    Exponent(ExponentArgs),
    /// Summarize output files of earlier runs.
    Report {
        inputs: Vec<PathBuf>,
    },
    /// Draw a cluster, grid cluster or minimizer result as SVG.
    Render {
        input: PathBuf,
    },
    /// Re-run a manifest and compare the outputs byte for byte.
    Replay {
        manifest_file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// The Apollonian gasket in the unit disk.
    Apollonian {
        #[arg(long, default_value_t = 1e-3)]
        min_radius: f64,
    },
    /// Squares with areas 4^-m tiling the unit square.
    Squares {
        /// Area spec or a file holding one (or a JSON list).
        #[arg(long, conflicts_with = "figure", required_unless_present = "figure")]
        areas: Option<String>,
        /// Staircase pattern of the given depth.
        #[arg(long)]
        figure: Option<u32>,
    },
    /// The Cantor circles 3-cluster.
    Cantor {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 0.25)]
        ratio: f64,
    },
}

#[derive(Args, Debug)]
pub struct PerimArgs {
    pub input: PathBuf,
    /// `euclidean`, `manhattan`, or a JSON norm file.
    #[arg(long)]
    pub norm: Option<String>,
    /// Fractional order in (0, 1).
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Areas of regions missing from a truncated cluster.
    #[arg(long)]
    pub tail_areas: Option<String>,
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    #[arg(long)]
    pub areas: String,
    /// Number of regions; defaults to the length of the area spec.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = "256x256")]
    pub grid: String,
    /// Cell size; defaults to 1 / width.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, default_value_t = AnnealConfig::default().sweeps_per_temperature)]
    pub sweeps: u32,
    #[arg(long, default_value_t = AnnealConfig::default().cooling)]
    pub cool: f64,
    #[arg(long, default_value_t = AnnealConfig::default().initial_temperature)]
    pub t0: f64,
    #[arg(long, default_value_t = AnnealConfig::default().levels)]
    pub levels: u32,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub restarts: u32,
    /// Minimize every prefix `a_1..a_k`, `k = 1..n`.
    #[arg(long)]
    pub sequence: bool,
}

#[derive(Args, Debug)]
pub struct ExponentArgs {
    /// Cluster file of disks; the canonical gasket when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-4)]
    pub min_radius: f64,
    /// Coarse cutoff; defaults to 10 * min radius.
    #[arg(long)]
    pub coarse: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub tolerance: f64,
}

/// Files read and written during a run, with their digests.
#[derive(Default)]
struct Ctx {
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
    stdout: String,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(text.as_bytes()));
        Ok(text)
    }

    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<()> {
        match path {
            Some(p) => {
                std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
                self.outputs.insert(p.display().to_string(), sha256_hex(text.as_bytes()));
            }
            None => self.stdout.push_str(text),
        }
        Ok(())
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs serialize");
    s.push('\n');
    s
}

fn compact(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(v).expect("outputs serialize");
    s.push('\n');
    s
}

/// An area spec given inline or in a file; files may also hold a JSON list.
fn area_spec(ctx: &mut Ctx, text: &str) -> Result<AreaSpec> {
    let path = Path::new(text);
    let body = if path.is_file() { ctx.read(path)? } else { text.to_string() };
    let body = body.trim();
    if body.starts_with('[') {
        let v: Vec<f64> = serde_json::from_str(body).context("area list")?;
        let list = v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        return Ok(AreaSpec::parse(&format!("list:{list}"))?);
    }
    Ok(AreaSpec::parse(body)?)
}

fn load_cluster(ctx: &mut Ctx, path: &Path) -> Result<Cluster> {
    let text = ctx.read(path)?;
    Cluster::from_json(&text).with_context(|| format!("loading cluster {}", path.display()))
}

fn parse_grid(text: &str) -> Result<(usize, usize)> {
    let (w, h) = text
        .split_once('x')
        .ok_or_else(|| Error::InvalidArgument(format!("grid {text:?} is not WxH")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidArgument(format!("grid {text:?} is not WxH")))
    };
    Ok((parse(w)?, parse(h)?))
}

fn parse_norm(ctx: &mut Ctx, text: &str) -> Result<Norm> {
    match text {
        "euclidean" => Ok(Norm::Euclidean),
        "manhattan" => Ok(Norm::Manhattan),
        path => Ok(Norm::from_json(&ctx.read(Path::new(path))?)?),
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Perim(_) => "perim",
        Command::Minimize(_) => "minimize",
        Command::Exponent(_) => "exponent",
        Command::Report { .. } => "report",
        Command::Render { .. } => "render",
        Command::Replay { .. } => "replay",
    }
}

pub fn run(cli: Cli, argv: Vec<String>) -> Result<()> {
    if let Command::Replay { manifest_file } = &cli.command {
        return replay(manifest_file);
    }
    let mut ctx = Ctx::default();
    execute(&cli, &mut ctx)?;
    print!("{}", ctx.stdout);
    if let Some(path) = &cli.manifest {
        let mut outputs = ctx.outputs;
        if !ctx.stdout.is_empty() {
            outputs.insert(STDOUT_KEY.to_string(), sha256_hex(ctx.stdout.as_bytes()));
        }
        let manifest = RunManifest {
            command: subcommand_name(&cli.command).to_string(),
            args: argv,
            seed: cli.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: ctx.inputs,
            outputs,
        };
        manifest.save(path)?;
    }
    Ok(())
}

fn replay(path: &Path) -> Result<()> {
    let manifest = RunManifest::load(path)?;
    for (input, digest) in &manifest.inputs {
        let now = sha256_hex(&std::fs::read(input).with_context(|| format!("reading {input}"))?);
        if &now != digest {
            return Err(Error::ReplayMismatch(format!("input {input} changed since the run")).into());
        }
    }
    let mut cli = Cli::try_parse_from(std::iter::once("cluster-lab".to_string()).chain(manifest.args.iter().cloned()))
        .map_err(|e| anyhow!("manifest arguments do not parse: {e}"))?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!("a manifest cannot replay another replay");
    }
    cli.manifest = None;
    let mut ctx = Ctx::default();
    execute(&cli, &mut ctx)?;
    let mut produced = ctx.outputs;
    if !ctx.stdout.is_empty() {
        produced.insert(STDOUT_KEY.to_string(), sha256_hex(ctx.stdout.as_bytes()));
    }
    if produced != manifest.outputs {
        let diff: Vec<&String> = manifest
            .outputs
            .iter()
            .filter(|(k, v)| produced.get(*k) != Some(v))
            .map(|(k, _)| k)
            .chain(produced.keys().filter(|k| !manifest.outputs.contains_key(*k)))
            .collect();
        return Err(Error::ReplayMismatch(format!("outputs differ: {diff:?}")).into());
    }
    println!("replay of {} reproduced {} output(s)", path.display(), produced.len());
    Ok(())
}

fn execute(cli: &Cli, ctx: &mut Ctx) -> Result<()> {
    let out = cli.out.as_deref();
    let svg = cli.svg.as_deref();
    match &cli.command {
        Command::Gen(g) => {
            let cluster = match g {
                GenCommand::Apollonian { min_radius } => apollonian_cluster(&generate_apollonian(*min_radius)?),
                GenCommand::Squares { areas, figure } => {
                    let list = match (areas, figure) {
                        (_, Some(depth)) => figure_areas(*depth),
                        (Some(text), None) => area_spec(ctx, text)?.truncated(),
                        (None, None) => unreachable!("clap requires one of them"),
                    };
                    build_square_gasket(&list)?
                }
                GenCommand::Cantor { depth, ratio } => build_cantor_cluster(*depth, CantorSchedule { ratio: *ratio })?,
            };
            let mut text = cluster.to_json();
            text.push('\n');
            ctx.emit(out, &text)?;
            if let Some(p) = svg {
                ctx.emit(Some(p), &cluster_svg(&cluster))?;
            }
        }
        Command::Perim(args) => {
            let cluster = load_cluster(ctx, &args.input)?;
            let mut rec = records::cluster_record(&cluster)?;
            rec.kind = "perim".into();
            if let Some(n) = &args.norm {
                let norm = parse_norm(ctx, n)?;
                rec = rec.value("anisotropic_perimeter", anisotropic_cluster_perimeter(&cluster, &norm)?);
            }
            if let Some(s) = args.s {
                let tail = match &args.tail_areas {
                    Some(t) => area_spec(ctx, t)?.truncated(),
                    None => Vec::new(),
                };
                let v = fractional_cluster_perimeter(&cluster, FractionalOrder::new(s)?, &tail, args.samples, cli.seed)?;
                rec = rec
                    .value("fractional_order", s)
                    .value("fractional_perimeter", v.value)
                    .value("fractional_standard_error", v.standard_error)
                    .bound("fractional_tail", v.tail_bound);
            }
            ctx.emit(out, &pretty(&rec))?;
            if let Some(p) = svg {
                ctx.emit(Some(p), &cluster_svg(&cluster))?;
            }
        }
        Command::Minimize(args) => {
            let spec = area_spec(ctx, &args.areas)?;
            let n = args.n.unwrap_or(spec.len());
            let (w, h) = parse_grid(&args.grid)?;
            let grid = GridSpec::new(w, h, args.h.unwrap_or(1.0 / w as f64));
            let cfg = AnnealConfig {
                initial_temperature: args.t0,
                cooling: args.cool,
                levels: args.levels,
                sweeps_per_temperature: args.sweeps,
                lambda: args.lambda,
                restarts: args.restarts,
                seed: cli.seed,
            };
            let last = if args.sequence {
                let seq = p_sequence(&spec, n, grid, &cfg)?;
                ctx.emit(out, &compact(&seq))?;
                seq.runs.last().cloned()
            } else {
                let r = minimize_n_cluster(&spec.areas(n), grid, &cfg)?;
                ctx.emit(out, &compact(&r))?;
                Some(r)
            };
            if let (Some(p), Some(r)) = (svg, last) {
                ctx.emit(Some(p), &grid_svg(&r.grid))?;
            }
        }
        Command::Exponent(args) => {
            let radii: Vec<f64> = match &args.input {
                Some(path) => load_cluster(ctx, path)?
                    .regions()
                    .iter()
                    .map(|r| match r {
                        Region::Disk(d) => Ok(d.radius),
                        _ => Err(Error::InvalidArgument("exponent input must contain only disks".into())),
                    })
                    .collect::<std::result::Result<_, _>>()?,
                None => generate_apollonian(args.min_radius)?.iter().map(|n| n.disk.radius).collect(),
            };
            let coarse = args.coarse.unwrap_or(10.0 * args.min_radius);
            let e = estimate_packing_exponent(&radii, coarse, args.min_radius, args.tolerance)?;
            ctx.emit(out, &pretty(&e))?;
        }
        Command::Report { inputs } => {
            let mut runs = Vec::new();
            for path in inputs {
                let text = ctx.read(path)?;
                runs.push(record_of(&text).with_context(|| format!("summarizing {}", path.display()))?);
            }
            ctx.emit(out, &report(runs).to_json())?;
        }
        Command::Render { input } => {
            let text = ctx.read(input)?;
            let picture = if let Ok(r) = serde_json::from_str::<MinimizeResult>(&text) {
                grid_svg(&r.grid)
            } else if let Ok(s) = serde_json::from_str::<PSequence>(&text) {
                let last = s.runs.last().ok_or_else(|| anyhow!("empty sequence"))?;
                grid_svg(&last.grid)
            } else if let Ok(g) = serde_json::from_str::<cluster_lab::minimizer::GridCluster>(&text) {
                grid_svg(&g)
            } else {
                cluster_svg(&Cluster::from_json(&text)?)
            };
            ctx.emit(svg.or(out), &picture)?;
        }
        Command::Replay { .. } => unreachable!("handled by run"),
    }
    Ok(())
}

/// Recognizes an output file by its shape.
fn record_of(text: &str) -> Result<RunRecord> {
    if let Ok(s) = serde_json::from_str::<PSequence>(text) {
        return Ok(records::sequence_record(&s));
    }
    if let Ok(r) = serde_json::from_str::<MinimizeResult>(text) {
        return Ok(records::minimize_record(&r));
    }
    if let Ok(e) = serde_json::from_str::<ExponentEstimate>(text) {
        return Ok(records::exponent_record(&e));
    }
    if let Ok(r) = serde_json::from_str::<RunRecord>(text) {
        return Ok(r);
    }
    match Cluster::from_json(text) {
        Ok(c) => records::cluster_record(&c),
        Err(Error::Json(_)) => bail!("not a recognized output file"),
        Err(e) => Err(e.into()),
    }
}
