//! The batch harness: parse a config, sweep (alpha, nu), write the tables,
//! then re-run the analysis from the files alone.
//!
//!     cargo run --release --example config_sweep -- [config] [output-dir]

use voigt::config::RunConfig;
use voigt::sweep::{self, AnalysisSettings};

const DEFAULT: &str = "\
# small inviscid and viscous BBM sweep
model = bbm
n = 1024
alpha = 16/1024, 18/1024, 24/1024
nu = 0, 0.005
t_end = 1.25
sample_interval = 0.01
spectrum_every = 25
";

fn main() -> voigt::Result<()> {
    let mut args = std::env::args().skip(1);
    let text = match args.next() {
        Some(path) => std::fs::read_to_string(&path).map_err(|e| voigt::Error::Io { path: path.into(), source: e })?,
        None => DEFAULT.to_string(),
    };
    let out = args.next().unwrap_or_else(|| std::env::temp_dir().join("voigt-config-sweep").display().to_string());
    let cfg = RunConfig::parse_with_overrides(&text, &[("output", out)])?;

    let result = sweep::run_sweep(&cfg)?;
    println!("wrote {} runs to {}", result.series.len(), result.dir.display());
    for r in &result.analysis.per_nu {
        println!(
            "nu = {:<6} indicated = {:<5} earliest T = {:?} min slope = {:?}",
            r.nu, r.verdict.blow_up_indicated, r.verdict.earliest_t, r.verdict.min_slope
        );
    }

    let again = sweep::analyze_dir(&result.dir, &AnalysisSettings::from(&cfg))?;
    println!("analysis from files matches: {}", again == result.analysis);
    Ok(())
}
