//! Command-line front end: `run`, `sweep`, `analyze` and `oracle`.
//!
//! Every configuration key has a matching flag (`dt_max` is `--dt-max`)
//! that overrides the value read from the config file. `VOIGT_THREADS`
//! sets the worker count.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use voigt::config::RunConfig;
use voigt::sweep::{self, AnalysisSettings};
use voigt::{diagnostics, io, oracle, Error, Result};

#[derive(Parser)]
#[command(name = "voigt", version, about = "Euler-Voigt and BBM pseudospectral solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a single (alpha, nu) pair.
    Run {
        config: Option<PathBuf>,
        #[command(flatten)]
        keys: KeyFlags,
    },
    /// Integrate every (alpha, nu) pair and analyze the slopes.
    Sweep {
        config: Option<PathBuf>,
        #[command(flatten)]
        keys: KeyFlags,
    },
    /// Recompute slope tables and verdicts for an existing sweep directory.
    Analyze {
        dir: PathBuf,
        #[command(flatten)]
        keys: KeyFlags,
    },
    /// Tabulate the Burgers solution for u0 = -a sin x by characteristics.
    Oracle {
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        #[arg(long)]
        t: f64,
        /// Number of grid points on [0, 2 pi).
        #[arg(long, default_value_t = 1024)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct KeyFlags {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long)]
    dt_max: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    sample_interval: Option<String>,
    #[arg(long)]
    horizons: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long)]
    checkpoint_every: Option<String>,
    #[arg(long)]
    spectrum_every: Option<String>,
    #[arg(long)]
    s_min_mode: Option<String>,
    #[arg(long)]
    s_min_alphas: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    threshold: Option<String>,
    #[arg(long)]
    fit_k: Option<String>,
}

impl KeyFlags {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let all = [
            ("model", &self.model),
            ("n", &self.n),
            ("alpha", &self.alpha),
            ("nu", &self.nu),
            ("cfl", &self.cfl),
            ("dt_max", &self.dt_max),
            ("t_end", &self.t_end),
            ("sample_interval", &self.sample_interval),
            ("horizons", &self.horizons),
            ("output", &self.output),
            ("checkpoint_every", &self.checkpoint_every),
            ("spectrum_every", &self.spectrum_every),
            ("s_min_mode", &self.s_min_mode),
            ("s_min_alphas", &self.s_min_alphas),
            ("threshold", &self.threshold),
            ("fit_k", &self.fit_k),
        ];
        all.into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect()
    }
}

fn read_config(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io {
            path: p.into(),
            source: e,
        }),
        None => Ok(String::new()),
    }
}

fn load(path: Option<&Path>, keys: &KeyFlags) -> Result<RunConfig> {
    RunConfig::parse_with_overrides(&read_config(path)?, &keys.pairs())
}

fn run(cfg: &RunConfig) -> Result<()> {
    let (&[alpha], &[nu]) = (&cfg.alphas[..], &cfg.nus[..]) else {
        return Err(Error::InvalidParameter(
            "`run` takes exactly one alpha and one nu; use `sweep` for lists".into(),
        ));
    };
    let dir = &cfg.output;
    std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
    let (series, last) = sweep::run_single(cfg, alpha, nu, Some((dir, "run")))?;
    io::write_series(&dir.join("series.csv"), &series)?;
    let t = series.times.last().copied().unwrap_or(0.0);
    io::write_checkpoint(
        &dir.join("final.ckpt"),
        &io::Checkpoint { model: cfg.model, alpha, nu, t, field: last },
    )?;
    println!("samples          {}", series.len());
    println!("energy drift     {:.3e}", diagnostics::relative_energy_error(&series)?);
    println!("sup |grad u|     {:.6e}", series.running_sup_grad.last().copied().unwrap_or(0.0));
    println!("output           {}", dir.display());
    Ok(())
}

fn report(a: &sweep::Analysis) {
    for r in &a.per_nu {
        let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.4}"));
        println!(
            "nu = {:<10e} blow-up indicated: {:<5} earliest T: {:<8} min slope: {} at T = {} {}",
            r.nu,
            r.verdict.blow_up_indicated,
            show(r.verdict.earliest_t),
            show(r.verdict.min_slope),
            show(r.verdict.min_slope_t),
            r.note,
        );
    }
    if let Some(nu) = a.nu_star {
        println!("S_min crosses the threshold at nu = {nu:.4e}");
    }
}

fn oracle_table(amplitude: f64, t: f64, points: usize, output: Option<&Path>) -> Result<()> {
    let sol = oracle::CharacteristicSolution::new(amplitude, t)?;
    let rows: Vec<(f64, f64)> = (0..points)
        .map(|j| {
            let x = 2.0 * PI * j as f64 / points as f64;
            Ok((x, oracle::burgers_eval(x, &sol)?))
        })
        .collect::<Result<_>>()?;
    let mut text = String::from("x,u\n");
    for (x, u) in &rows {
        text += &format!("{},{}\n", io::fmt(*x), io::fmt(*u));
    }
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io { path: p.into(), source: e })?,
        None => print!("{text}"),
    }
    eprintln!("blow-up time    {}", oracle::burgers_blowup_time(amplitude)?);
    eprintln!("||u_x(t)||      {:.12e}", oracle::burgers_grad_norm(&sol, 1 << 16)?);
    Ok(())
}

fn analyze(dir: &Path, keys: &KeyFlags) -> Result<()> {
    let stored = dir.join(sweep::CONFIG_FILE);
    let cfg = load(stored.exists().then_some(stored.as_path()), keys)?;
    let a = sweep::analyze_dir(dir, &AnalysisSettings::from(&cfg))?;
    report(&a);
    Ok(())
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("VOIGT_THREADS").ok().and_then(|v| v.parse().ok()) {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, keys } => load(config.as_deref(), keys).and_then(|c| run(&c)),
        Command::Sweep { config, keys } => load(config.as_deref(), keys)
            .and_then(|c| sweep::run_sweep(&c))
            .map(|out| report(&out.analysis)),
        Command::Analyze { dir, keys } => analyze(dir, keys),
        Command::Oracle { amplitude, t, points, output } => {
            oracle_table(*amplitude, *t, *points, output.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}
