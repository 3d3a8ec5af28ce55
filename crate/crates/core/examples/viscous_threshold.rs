//! Viscous BBM: `S_min(nu)` for a fixed alpha pair and the viscosity at
//! which it crosses the critical slope -1.
//!
//!     cargo run --release --example viscous_threshold -- [n]

use voigt::blowup::{self, SminMode};
use voigt::{models, timestep, GridSpec, Scheme, StepperConfig, VoigtParams};

fn main() -> voigt::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|v| v.parse().ok()).unwrap_or(8192);
    let grid = GridSpec::line(n, 2.0 * std::f64::consts::PI)?;
    let u0 = models::bbm_initial(grid)?;
    let (a1, a2) = (128.0 / 8192.0, 138.0 / 8192.0);
    let horizons = blowup::horizon_grid(0.65, 0.01, 1.25);

    let nus = [5e-5, 1e-4, 2e-4, 5e-4, 1e-3];
    let mut pairs = Vec::new();
    for &nu in &nus {
        let cfg = StepperConfig::new(1.25, 0.01, Scheme::IfRk4)?;
        let run = |alpha| timestep::integrate(&u0, &VoigtParams::bbm(alpha, nu)?, &cfg, &mut ()).map(|r| r.0);
        pairs.push((nu, run(a1)?, run(a2)?));
    }
    let refs: Vec<_> = pairs.iter().map(|(nu, lo, hi)| (*nu, lo, hi)).collect();
    let rows = blowup::s_min_of_nu(&refs, &horizons, SminMode::LogLog)?;
    println!("{:>10} {:>10} {:>6}", "nu", "S_min", "at T");
    for r in &rows {
        println!("{:10.2e} {:10.4} {:6.2}", r.nu, r.s_min, r.at_t);
    }
    match blowup::crossing(&rows, blowup::CRITICAL_SLOPE) {
        Some(nu) => println!("\nS_min = -1 at nu* = {nu:.3e}"),
        None => println!("\nno crossing in the sampled range"),
    }
    Ok(())
}
