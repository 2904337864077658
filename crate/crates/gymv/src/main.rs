use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gymv::episodes::{self, ImageMode};
use gymv::remote::{RemoteAgent, RemoteConfig};
use gymv::service::{self, ServiceConfig};
use gymv::{catalog, golden, png, reports};
use gymv_core::harness::{run_episodes, Agent, OracleAgent, RandomAgent};
use gymv_core::metrics::{build_report, clip_negatives, difficulty_sweep, format_ratio, verify_report, EvalReport};
use gymv_core::{EnvSpec, Registry, Seed, WrapperConfig};

#[derive(Parser)]
#[command(name = "gymv", version, about = "Image-observed reasoning environments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the environment catalog.
    List {
        /// Print the full JSON manifest.
        #[arg(long)]
        json: bool,
    },
    /// Render one initial state to a PNG file.
    Render {
        env: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        level: u8,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Play episodes with a built-in or remote agent.
    Play {
        env: String,
        #[command(flatten)]
        agent: AgentArgs,
        #[command(flatten)]
        wrappers: WrapperArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        level: u8,
        #[arg(long, default_value_t = 1)]
        rollouts: u32,
        /// Write the episodes as JSON lines.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        inline_images: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate an agent and write a report plus the episodes it derives from.
    Eval {
        /// Environments (default: all).
        #[arg(long = "env")]
        envs: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        levels: Vec<u8>,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed_start: u64,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[command(flatten)]
        agent: AgentArgs,
        #[command(flatten)]
        wrappers: WrapperArgs,
        #[arg(long)]
        clip_negatives: bool,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        batch: PathBuf,
        #[arg(long)]
        inline_images: bool,
    },
    /// Accuracy per difficulty level and the robustness ratio, as CSV.
    Sweep {
        env: String,
        #[command(flatten)]
        agent: AgentArgs,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Deltas and transfer breadth from a matrix of accuracies.
    Transfer {
        input: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Recompute a report from its episode batch and list differences.
    VerifyReport {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        batch: PathBuf,
    },
    /// Compare (or with GYMV_BLESS=1, rewrite) the golden images.
    Golden {
        #[arg(long, default_value = "crates/gymv")]
        root: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AgentKind {
    Random,
    Oracle,
    Remote,
}

#[derive(Args)]
struct AgentArgs {
    #[arg(long, value_enum, default_value = "random")]
    agent: AgentKind,
    /// Chat-completions base URL for the remote agent.
    #[arg(long, default_value = "http://127.0.0.1:8000/v1")]
    endpoint: String,
    #[arg(long, default_value = "default")]
    model: String,
    /// Environment variable holding the API key.
    #[arg(long, default_value = "OPENAI_API_KEY")]
    api_key_env: String,
}

impl AgentArgs {
    fn build(&self) -> Result<Box<dyn Agent>> {
        Ok(match self.agent {
            AgentKind::Random => Box::new(RandomAgent::default()),
            AgentKind::Oracle => Box::new(OracleAgent),
            AgentKind::Remote => {
                let mut cfg = RemoteConfig::new(&self.endpoint, &self.model);
                cfg.api_key = std::env::var(&self.api_key_env).ok();
                Box::new(RemoteAgent::new(cfg).map_err(anyhow::Error::msg)?)
            }
        })
    }
}

#[derive(Args)]
struct WrapperArgs {
    /// Attach the rules text.
    #[arg(long)]
    rules: bool,
    #[arg(long)]
    caption: bool,
    /// Recent-k history window.
    #[arg(long)]
    history: Option<u32>,
    #[arg(long)]
    parser: bool,
    /// Enable a tool, e.g. `arithmetic`.
    #[arg(long)]
    tool: Option<String>,
}

impl WrapperArgs {
    fn apply(&self, mut spec: EnvSpec) -> EnvSpec {
        if self.rules {
            spec = spec.with_wrapper(WrapperConfig::Rules { enabled: true });
        }
        if self.caption {
            spec = spec.with_wrapper(WrapperConfig::Caption);
        }
        if let Some(window) = self.history {
            spec = spec.with_wrapper(WrapperConfig::History {
                window,
                include_images: false,
            });
        }
        if self.parser {
            spec = spec.with_wrapper(WrapperConfig::ActionParser);
        }
        if let Some(name) = &self.tool {
            spec = spec.with_wrapper(WrapperConfig::Tool {
                name: name.clone(),
                budget: gymv_core::wrappers::DEFAULT_TOOL_BUDGET,
            });
        }
        spec
    }
}

fn image_mode(inline: bool) -> ImageMode {
    if inline {
        ImageMode::Inline
    } else {
        ImageMode::Files
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let reg = Registry::builtin();
    match cli.cmd {
        Cmd::List { json } => {
            let m = catalog::manifest(&reg);
            if json {
                print!("{}", catalog::to_json(&m));
            } else {
                for e in &m.envs {
                    let mode = serde_json::to_value(e.mode)?;
                    let cat = serde_json::to_value(e.category)?;
                    println!(
                        "{:<20} {:<12} {:<12}",
                        e.env_id,
                        cat.as_str().unwrap_or(""),
                        mode.as_str().unwrap_or("")
                    );
                }
                println!("{} environments", m.counts.total);
            }
        }
        Cmd::Render { env, seed, level, out } => {
            let inst = reg.make(&reg.spec(&env, level)?, Seed(seed))?;
            let bytes = png::encode(&inst.render().image)?;
            let out = out.unwrap_or_else(|| PathBuf::from(format!("{env}_d{level}_s{seed}.png")));
            fs::write(&out, bytes)?;
            if let Some(c) = inst.base().caption() {
                println!("{c}");
            }
            eprintln!("wrote {}", out.display());
        }
        Cmd::Play {
            env,
            agent,
            wrappers,
            seed,
            level,
            rollouts,
            out,
            inline_images,
        } => {
            let spec = wrappers.apply(reg.spec(&env, level)?);
            let mut a = agent.build()?;
            let batch = run_episodes(&reg, a.as_mut(), &spec, &[seed], rollouts)?;
            for e in &batch {
                for (i, t) in e.transitions.iter().enumerate() {
                    println!("step {:>3}  {:?}  rewards {:?}", i + 1, t.actions, t.result.rewards);
                }
                println!("rollout {}: returns {:?}", e.rollout, e.returns);
                if let Some(err) = &e.error {
                    println!("agent error: {err}");
                }
            }
            if let Some(p) = out {
                episodes::write_batch(&p, &batch, image_mode(inline_images))?;
            }
        }
        Cmd::Serve { config } => {
            let cfg = ServiceConfig::load(config.as_deref())?;
            let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind((cfg.host.as_str(), cfg.port)).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                service::serve(cfg, listener, async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await
            })?;
        }
        Cmd::Eval {
            envs,
            levels,
            seeds,
            seed_start,
            k,
            agent,
            wrappers,
            clip_negatives: clip,
            report,
            batch: batch_path,
            inline_images,
        } => {
            let envs = if envs.is_empty() { reg.ids() } else { envs };
            let seeds: Vec<u64> = (seed_start..seed_start + seeds).collect();
            let mut a = agent.build()?;
            let mut batch = Vec::new();
            for id in &envs {
                for &level in &levels {
                    let spec = wrappers.apply(reg.spec(id, level)?);
                    batch.extend(run_episodes(&reg, a.as_mut(), &spec, &seeds, k)?);
                }
            }
            let mut r = build_report(&reg, &batch, k as usize)?;
            if clip {
                r = clip_negatives(r);
            }
            for e in &r.envs {
                println!("{:<20} mean@{k} {:.4}", e.env, e.mean_at_k);
            }
            fs::write(&report, serde_json::to_string_pretty(&r)?)?;
            episodes::write_batch(&batch_path, &batch, image_mode(inline_images))?;
        }
        Cmd::Sweep {
            env,
            agent,
            seeds,
            k,
            csv,
        } => {
            let seeds: Vec<u64> = (0..seeds).collect();
            let mut a = agent.build()?;
            let s = difficulty_sweep(&reg, a.as_mut(), &reg.spec(&env, 0)?, &seeds, k)?;
            match csv {
                Some(p) => reports::write_sweep_csv(fs::File::create(&p)?, &s.rows)?,
                None => reports::write_sweep_csv(std::io::stdout(), &s.rows)?,
            }
            eprintln!("rho = {}", format_ratio(s.rho));
        }
        Cmd::Transfer { input, out } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let t = reports::transfer_report(serde_json::from_str(&text)?)?;
            for s in &t.matrix.sources {
                let row: Vec<String> = t
                    .matrix
                    .targets
                    .iter()
                    .map(|x| format!("{:+.1}", t.matrix.deltas[s][x]))
                    .collect();
                println!("{s:<14} {}  breadth {:.1}", row.join(" "), t.breadth[s]);
            }
            if let Some(p) = out {
                fs::write(p, serde_json::to_string_pretty(&t)?)?;
            }
        }
        Cmd::VerifyReport { report, batch } => {
            let r: EvalReport = serde_json::from_str(&fs::read_to_string(&report)?)?;
            let b = episodes::read_batch(&batch)?;
            let diffs = verify_report(&reg, &r, &b)?;
            if diffs.is_empty() {
                println!("report verified: {} envs, {} levels", r.envs.len(), r.levels.len());
            } else {
                for d in &diffs {
                    println!("{d}");
                }
                bail!("{} mismatches", diffs.len());
            }
        }
        Cmd::Golden { root } => {
            let bless = golden::blessing();
            let bad = golden::check(&reg, &golden::golden_dir(&root), bless)?;
            if bless {
                println!("blessed {} images", bad.len() + reg.len() * 3);
            } else if bad.is_empty() {
                println!("all golden images match");
            } else {
                bail!("mismatched: {}", bad.join(", "));
            }
        }
    }
    Ok(())
}
