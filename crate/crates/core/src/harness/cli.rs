//! The `jump-tower` command line.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::constructions::demos::{coherence_check, incomparable_demo, mclaughlin_demo, STAGE_CAVEAT};
use crate::constructions::friedberg::Friedberg;
use crate::constructions::tower::{one_nonzero_index, Tower, TowerConfig};
use crate::machine::{decode_program, encode_program, jump_stage, parse_program, run, Outcome};
use crate::nat::Nat;
use crate::space::Str;
use crate::treemaps::{image_tree, Rule, TreemapHandle};
use crate::trees::TreeHandle;

use super::cache::StageCache;
use super::config::{ConfigError, ExperimentConfig};
use super::fixtures;
use super::report::{write_atomic, Report, Trace};
use super::verify::{run_suite, VerifyError, EXIT_VIOLATION, SUITES};

#[derive(Debug, Parser)]
#[command(name = "jump-tower", version, about = "Oracle machines, treemaps and the omega jump tower")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Args, Default)]
pub struct Opts {
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    #[arg(long, global = true)]
    pub stage: Option<u64>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub branching: Option<u64>,
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// `zeros`, `jump`, `jumpN` or a table such as `<1,0,1>`.
    #[arg(long, global = true)]
    pub oracle: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Write one trace record per line here.
    #[arg(long, global = true)]
    pub trace: Option<String>,
    #[arg(long, global = true)]
    pub sigma: Option<String>,
    /// A named fixture: tree for `image-tree`, pair for `incomp-demo`.
    #[arg(long, global = true)]
    pub fixture: Option<String>,
    /// Directory for cached results.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a program on an input with a budget of `--stage` steps.
    RunMachine {
        /// Program text file.
        #[arg(long, conflicts_with = "index")]
        program: Option<PathBuf>,
        #[arg(long)]
        index: Option<String>,
        #[arg(long, default_value = "0")]
        input: String,
    },
    /// The first `count` bits of the stage-bounded jump of the oracle.
    Jump {
        #[arg(long, default_value_t = 32)]
        count: u64,
    },
    /// `G(σ)` relative to the oracle.
    GMap,
    /// The image of a fixture tree under `G`, up to the depth.
    ImageTree,
    /// The longest `σ` with `G(σ) ⊆ τ`, for `τ` given by `--sigma`.
    Decode,
    /// The per-level maps `H_n` over the demo tree.
    Tower,
    /// The maps `H^ω_n` over the demo tree, with coherence checks.
    OmegaTower,
    #[command(name = "mclaughlin-demo")]
    McLaughlinDemo,
    IncompDemo,
    /// Run a verification suite, or `all`.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::RunMachine { .. } => "run-machine",
            Command::Jump { .. } => "jump",
            Command::GMap => "g-map",
            Command::ImageTree => "image-tree",
            Command::Decode => "decode",
            Command::Tower => "tower",
            Command::OmegaTower => "omega-tower",
            Command::McLaughlinDemo => "mclaughlin-demo",
            Command::IncompDemo => "incomp-demo",
            Command::Verify { .. } => "verify",
        }
    }

    /// Whether results are a function of the configuration alone.
    fn cacheable(&self) -> bool {
        !matches!(self, Command::RunMachine { .. } | Command::Jump { .. } | Command::Verify { .. })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Run(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn run_err(e: impl std::fmt::Display) -> CliError {
    CliError::Run(e.to_string())
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub trace: Trace,
    pub exit: i32,
}

impl Output {
    fn text(text: String) -> Output {
        Output { text, trace: Trace::default(), exit: 0 }
    }
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.opts.config {
        Some(p) => ExperimentConfig::parse(&std::fs::read_to_string(p)?)?,
        None => ExperimentConfig::default(),
    };
    let o = &cli.opts;
    let flags: [(&str, Option<String>); 11] = [
        ("cap", o.cap.map(|v| v.to_string())),
        ("stage", o.stage.map(|v| v.to_string())),
        ("depth", o.depth.map(|v| v.to_string())),
        ("branching", o.branching.map(|v| v.to_string())),
        ("levels", o.levels.map(|v| v.to_string())),
        ("oracle", o.oracle.clone()),
        ("seed", o.seed.map(|v| v.to_string())),
        ("out", o.out.clone()),
        ("trace", o.trace.clone()),
        ("sigma", o.sigma.clone()),
        ("fixture", o.fixture.clone()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    cfg.command = cli.command.name().into();
    Ok(cfg)
}

fn oracle(cfg: &ExperimentConfig) -> Result<crate::machine::Oracle, CliError> {
    fixtures::oracle(&cfg.oracle, cfg.stage).ok_or_else(|| CliError::Input(format!("unknown oracle {:?}", cfg.oracle)))
}

fn sigma(cfg: &ExperimentConfig) -> Result<Str, CliError> {
    let text = cfg.sigma.as_deref().ok_or_else(|| CliError::Input("--sigma is required".into()))?;
    text.parse().map_err(|_| CliError::Input(format!("cannot parse string {text:?}")))
}

fn tower_config(cfg: &ExperimentConfig) -> TowerConfig {
    TowerConfig {
        levels: cfg.levels,
        stage: cfg.stage,
        depth: cfg.depth,
        branching: cfg.branching,
        omega_tree: one_nonzero_index(),
    }
}

fn config_section(r: &mut Report, cfg: &ExperimentConfig) {
    let s = r.section("config");
    for (k, v) in cfg.to_map() {
        if !matches!(k, "out" | "trace") {
            s.add(k, v);
        }
    }
}

/// Runs a command. Does not touch the output or trace files.
pub fn execute(command: &Command, cfg: &ExperimentConfig) -> Result<Output, CliError> {
    match command {
        Command::RunMachine { program, index, input } => {
            let e = match (program, index) {
                (Some(p), _) => encode_program(&parse_program(&std::fs::read_to_string(p)?).map_err(run_err)?),
                (None, Some(i)) => i.parse::<Nat>().map_err(run_err)?,
                (None, None) => return Err(CliError::Input("--program or --index is required".into())),
            };
            let x: Nat = input.parse().map_err(run_err)?;
            let out = run(&e, &oracle(cfg)?, &x, cfg.stage);
            let text = match &out {
                Outcome::Halt { output, steps, oracle_use } => {
                    format!(
                        "index = {e}\nprogram = {}\nhalt output = {output} steps = {steps} use = {oracle_use}\n",
                        decode_program(&e).to_string().trim_end().replace('\n', "; ")
                    )
                }
                Outcome::Diverged(d) => format!("index = {e}\ndiverged = {d:?}\n"),
            };
            let mut trace = Trace::default();
            trace.push("run", cfg.stage, &x, format!("{out:?}"));
            Ok(Output { text, trace, exit: 0 })
        }
        Command::Jump { count } => {
            let bits: String = jump_stage(&oracle(cfg)?, cfg.stage)
                .iter()
                .take(*count as usize)
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            Ok(Output::text(format!("{bits}\n")))
        }
        Command::GMap => {
            let s = sigma(cfg)?;
            let g = Friedberg::new(oracle(cfg)?, cfg.cap);
            let mut trace = Trace::default();
            for n in 1..=s.len() {
                trace.push("G", cfg.cap, s.prefix(n), g.image(&s.prefix(n)));
            }
            Ok(Output { text: format!("{}\n", g.image(&s)), trace, exit: 0 })
        }
        Command::Decode => {
            let tau = sigma(cfg)?;
            let g = Friedberg::new(oracle(cfg)?, cfg.cap);
            Ok(Output::text(format!("{}\n", g.decode(&tau))))
        }
        Command::ImageTree => {
            let a = oracle(cfg)?;
            let domain = match cfg.fixture.as_deref() {
                None | Some("all") => TreeHandle::All,
                Some(name) => {
                    let (_, e) = fixtures::tree_indices()
                        .into_iter()
                        .find(|(n, _)| *n == name)
                        .ok_or_else(|| CliError::Input(format!("unknown tree {name:?}")))?;
                    TreeHandle::Corecursive { index: e, oracle: a.clone() }
                }
            };
            let map = TreemapHandle::new(domain, Rule::Friedberg(Arc::new(Friedberg::new(a, cfg.cap))));
            let image = image_tree(&map, true);
            let nodes = image.restrict_to(cfg.depth, cfg.branching, cfg.stage).map_err(run_err)?;
            Ok(Output::text(nodes.to_text()))
        }
        Command::Tower | Command::OmegaTower => {
            let t = Tower::new(tower_config(cfg)).map_err(run_err)?;
            let nodes: Vec<Str> = t
                .config()
                .base_tree()
                .restrict_to(cfg.depth, cfg.branching, cfg.stage)
                .map_err(run_err)?
                .nodes()
                .cloned()
                .collect();
            let mut r = Report::default();
            config_section(&mut r, cfg);
            r.section("fixed-point").add("index", t.index()).add("overhead", t.fixed_point().overhead);
            let omega = matches!(command, Command::OmegaTower);
            let mut trace = Trace::default();
            for n in 0..cfg.levels.max(1) {
                for s in nodes.iter().filter(|s| s.len() > n) {
                    let (name, img) = if omega {
                        (format!("H^w_{n}"), t.omega_apply(n, s).map_err(run_err)?)
                    } else {
                        (format!("H_{n}"), t.level_apply(n, s).map_err(run_err)?)
                    };
                    r.section("levels").add(format!("{name}({s})"), &img);
                    trace.push(&name, cfg.stage, s, &img);
                }
            }
            if omega {
                let c = coherence_check(&t, &nodes).map_err(run_err)?;
                let w = r.section("witnesses");
                w.add("coherence.checked", c.checked).add("coherence.failures", c.failures.len());
                for (k, f) in c.failures.iter().enumerate() {
                    w.add(format!("failure.{k}"), f);
                }
            }
            r.section("caveats").add("banner.0", STAGE_CAVEAT);
            Ok(Output { text: r.to_string(), trace, exit: 0 })
        }
        Command::McLaughlinDemo => {
            let m = mclaughlin_demo(tower_config(cfg), cfg.seed).map_err(run_err)?;
            let mut r = Report::from(&m);
            r.section("config").add("seed", cfg.seed);
            let mut trace = Trace::default();
            for w in &m.witnesses {
                trace.push("H^w_0", cfg.stage, &w.point, &w.image);
            }
            Ok(Output { text: r.to_string(), trace, exit: 0 })
        }
        Command::IncompDemo => {
            let name = cfg.fixture.as_deref().unwrap_or("pair-a");
            let pair = fixtures::mock_pair(name).ok_or_else(|| CliError::Input(format!("unknown pair {name:?}")))?;
            let m = incomparable_demo(&pair, tower_config(cfg)).map_err(run_err)?;
            let mut r = Report::from(&m);
            r.section("config").add("fixture", name);
            let mut trace = Trace::default();
            trace.push("H^w_0", cfg.stage, &pair.x, &m.x_image);
            trace.push("H^w_0", cfg.stage, &pair.y, &m.y_image);
            Ok(Output { text: r.to_string(), trace, exit: 0 })
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut text = String::new();
            let mut exit = 0;
            for name in names {
                let r = run_suite(name, cfg)?;
                text.push_str(&format!("{r}\n"));
                for v in &r.violations {
                    text.push_str(&format!("  {v}\n"));
                }
                if !r.ok() {
                    exit = EXIT_VIOLATION;
                }
            }
            Ok(Output { text, trace: Trace::default(), exit })
        }
    }
}

/// Runs a parsed command line, handling caching and output files;
/// returns the process exit code.
pub fn main_with(cli: Cli) -> Result<i32, CliError> {
    let cfg = resolve_config(&cli)?;
    let cache = cli.opts.cache.as_ref().filter(|_| cli.command.cacheable() && cfg.trace.is_none()).map(StageCache::new);
    let output = match cache {
        Some(c) => {
            let text =
                c.get_or_compute(cli.command.name(), &cfg.canonical(), || execute(&cli.command, &cfg).map(|o| o.text))?;
            Output::text(text)
        }
        None => execute(&cli.command, &cfg)?,
    };
    match &cfg.out {
        Some(p) => write_atomic(std::path::Path::new(p), &output.text)?,
        None => print!("{}", output.text),
    }
    if let Some(p) = &cfg.trace {
        write_atomic(std::path::Path::new(p), &output.trace.to_string())?;
    }
    Ok(output.exit)
}
