use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use toybox_core::env::Env;
use toybox_core::intervention::{config_from_json, import_state, StateDocument};
use toybox_core::{make_agent, render_frame, EnvParams, EpisodePolicy, GameConfig, Scalar};
use toybox_harness::emit::{self, Format};
use toybox_harness::suite::{run_suite, SuiteOptions};
use toybox_harness::suites::{
    angle_sweep, gen_suite, set_budget, Requirement, DEFAULT_ANGLE_STEP_DEG, DEFAULT_BUDGET_FRAMES,
};
use toybox_harness::DEFAULT_TRIALS;

#[derive(Parser)]
#[command(
    name = "toybox",
    version,
    about = "Deterministic Breakout with behavioral acceptance tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a behavioral suite against an agent and write result tables.
    Run(RunArgs),
    /// Play one episode with an agent.
    Play(PlayArgs),
    /// Check that a state document imports.
    Validate { doc: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    R1,
    R2,
    R3,
}

impl From<Suite> for Requirement {
    fn from(s: Suite) -> Self {
        match s {
            Suite::R1 => Requirement::R1,
            Suite::R2 => Requirement::R2,
            Suite::R3 => Requirement::R3,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Precision {
    F32,
    #[default]
    F64,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

#[derive(Args)]
struct AgentArgs {
    /// random, tracker or replay.
    #[arg(long)]
    agent: String,
    /// Agent parameter as key=value, e.g. `aim_jitter=4` or `trace=fire,left`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 4)]
    frame_skip: u32,
    /// Game config JSON; omitted fields keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    precision: Precision,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[command(flatten)]
    agent: AgentArgs,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    #[arg(long, default_value_t = DEFAULT_BUDGET_FRAMES)]
    budget_frames: u64,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated launch angles in degrees (R2 only).
    #[arg(long, value_delimiter = ',', conflicts_with = "angle_step")]
    angles: Option<Vec<f64>>,
    /// Spacing of the default full-circle angle sweep (R2 only).
    #[arg(long)]
    angle_step: Option<f64>,
    /// Exit non-zero unless every non-annotated case passes.
    #[arg(long)]
    gate: bool,
    /// Fraction of trials a case must pass under --gate.
    #[arg(long, default_value_t = 1.0)]
    gate_threshold: f64,
    /// Run trials on one thread.
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum, default_value_t)]
    format: OutputFormat,
}

#[derive(Args)]
struct PlayArgs {
    #[command(flatten)]
    agent: AgentArgs,
    /// Start from this state document instead of a fresh game.
    #[arg(long)]
    load_state: Option<PathBuf>,
    /// Write the state document here once `--at-frame` frames have been played.
    #[arg(long, requires = "at_frame")]
    dump_state: Option<PathBuf>,
    #[arg(long, requires = "dump_state")]
    at_frame: Option<u64>,
    /// Write every frame as a PNG into this directory.
    #[arg(long)]
    record_frames: Option<PathBuf>,
    /// Seeds the agent and, when given, reseeds the serve RNG.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BUDGET_FRAMES)]
    max_frames: u64,
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .with_context(|| format!("agent parameter {kv:?} is not KEY=VALUE"))?;
            Ok((k.trim().to_owned(), v.to_owned()))
        })
        .collect()
}

fn load_config<T: Scalar>(path: Option<&Path>) -> Result<GameConfig<T>> {
    let Some(path) = path else {
        return Ok(GameConfig::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    config_from_json(&text).with_context(|| format!("config {}", path.display()))
}

fn read_document(path: &Path) -> Result<StateDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    StateDocument::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run<T: Scalar>(args: &RunArgs) -> Result<bool> {
    let config = load_config::<T>(args.agent.config.as_deref())?;
    let params = parse_params(&args.agent.params)?;
    let angles = match (&args.angles, args.angle_step) {
        (Some(a), _) => a.clone(),
        (None, step) => angle_sweep(step.unwrap_or(DEFAULT_ANGLE_STEP_DEG))?,
    };
    let mut cases = gen_suite(args.suite.into(), &config, &angles)?;
    set_budget(&mut cases, args.budget_frames)?;
    let name = args.agent.agent.as_str();
    let skip = args.agent.frame_skip;
    // fail on a bad agent before spending any time
    make_agent::<T>(name, &params, &config, skip, args.seed)?;
    let options = SuiteOptions {
        agent: name.to_owned(),
        trials: args.trials,
        base_seed: args.seed,
        frame_skip: skip,
        render: false,
        parallel: !args.serial,
        gate_threshold: args.gate_threshold,
    };
    let result = run_suite(
        &cases,
        |seed| make_agent::<T>(name, &params, &config, skip, seed),
        &options,
    )?;
    let format = match args.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
        OutputFormat::Both => Format::Both,
    };
    let written = emit::emit_results(&result, &args.out, format)?;
    let summary = emit::summary(&result);
    println!("{}", serde_json::to_string(&summary)?);
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(summary.gate_pass)
}

fn save_png(frame: &toybox_core::Frame, path: &Path) -> Result<()> {
    let (h, w, _) = frame.shape();
    image::save_buffer(
        path,
        frame.as_bytes(),
        w as u32,
        h as u32,
        image::ExtendedColorType::Rgb8,
    )
    .with_context(|| format!("writing {}", path.display()))
}

fn play<T: Scalar>(args: &PlayArgs) -> Result<()> {
    let params = EnvParams {
        frame_skip: 1,
        truncate_rewards: true,
        episode_policy: EpisodePolicy::FullGame,
        seed: args.seed,
        render: false,
    };
    let mut env = match &args.load_state {
        Some(path) => {
            if args.agent.config.is_some() {
                bail!("--config and --load-state are exclusive; the document carries its own config");
            }
            Env::<T>::from_document(&read_document(path)?, params)?
        }
        None => Env::<T>::new(load_config::<T>(args.agent.config.as_deref())?, params)?,
    };
    let skip = args.agent.frame_skip.max(1);
    let mut agent = make_agent::<T>(
        &args.agent.agent,
        &parse_params(&args.agent.params)?,
        env.config(),
        skip,
        args.seed.unwrap_or(0),
    )?;
    if let Some(dir) = &args.record_frames {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let record = |env: &Env<T>, n: u64| -> Result<()> {
        match &args.record_frames {
            Some(dir) => save_png(
                &render_frame(env.state(), env.config()),
                &dir.join(format!("frame_{n:06}.png")),
            ),
            None => Ok(()),
        }
    };
    let dump = |env: &Env<T>, n: u64| -> Result<()> {
        match (&args.dump_state, args.at_frame) {
            (Some(path), Some(at)) if at == n => {
                fs::write(path, env.export().to_json()).with_context(|| format!("writing {}", path.display()))
            }
            _ => Ok(()),
        }
    };

    let mut played = 0u64;
    let mut steps = 0u64;
    record(&env, 0)?;
    dump(&env, 0)?;
    'episode: while played < args.max_frames && !env.is_done() {
        let action = agent.act(&env.observe())?;
        steps += 1;
        for _ in 0..skip {
            env.step_frame(action)?;
            played += 1;
            record(&env, played)?;
            dump(&env, played)?;
            if played >= args.max_frames || env.is_done() {
                break 'episode;
            }
        }
    }
    if let (Some(at), Some(path)) = (args.at_frame, &args.dump_state) {
        if at > played {
            bail!(
                "episode ended after {played} frames, before --at-frame {at}; nothing written to {}",
                path.display()
            );
        }
    }
    let s = env.state();
    println!(
        "{}",
        serde_json::json!({
            "frames": played,
            "agent_steps": steps,
            "score": s.score,
            "lives": s.lives_remaining,
            "level": s.level,
            "lifecycle": s.lifecycle,
        })
    );
    Ok(())
}

fn validate(path: &Path) -> Result<()> {
    let doc = read_document(path)?;
    let (state, _) = import_state::<f64>(&doc).with_context(|| format!("{} does not import", path.display()))?;
    println!(
        "ok: {} (frame {}, score {}, lives {}, {} live bricks, {:?})",
        path.display(),
        state.frame,
        state.score,
        state.lives_remaining,
        state.live_brick_count(),
        state.lifecycle
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => {
            let gate = match args.agent.precision {
                Precision::F64 => run::<f64>(args),
                Precision::F32 => run::<f32>(args),
            };
            gate.map(|pass| {
                if args.gate && !pass {
                    eprintln!("gate failed");
                    ExitCode::FAILURE
                } else {
                    ExitCode::SUCCESS
                }
            })
        }
        Command::Play(args) => match args.agent.precision {
            Precision::F64 => play::<f64>(args),
            Precision::F32 => play::<f32>(args),
        }
        .map(|()| ExitCode::SUCCESS),
        Command::Validate { doc } => validate(doc).map(|()| ExitCode::SUCCESS),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
