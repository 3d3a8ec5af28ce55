//! Blow-up detection for inviscid BBM with u0 = -sin x: the log-log slope of
//! `Q(alpha, T)` in `alpha` drops below -1 shortly after the Burgers shock
//! time T* = 1.
//!
//!     cargo run --release --example bbm_blowup -- [n]

use voigt::blowup::{self, SlopeTable};
use voigt::{diagnostics, models, timestep, GridSpec, Scheme, StepperConfig, VoigtParams};

fn main() -> voigt::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|v| v.parse().ok()).unwrap_or(4096);
    let grid = GridSpec::line(n, 2.0 * std::f64::consts::PI)?;
    let u0 = models::bbm_initial(grid)?;
    let cfg = StepperConfig::new(1.25, 0.01, Scheme::Rk4)?;

    // Alphas as fractions of the grid, so the smallest pair stays resolved.
    let alphas: Vec<f64> = [64.0, 69.0, 96.0].iter().map(|a| a / n as f64 * 2.0).collect();
    let mut runs = Vec::new();
    for &alpha in &alphas {
        let (s, _) = timestep::integrate(&u0, &VoigtParams::bbm(alpha, 0.0)?, &cfg, &mut ())?;
        println!("alpha = {alpha:.6}  energy drift {:.2e}", diagnostics::relative_energy_error(&s)?);
        runs.push(s);
    }

    let horizons = blowup::horizon_grid(0.65, 0.01, 1.25);
    let refs: Vec<_> = runs.iter().collect();
    let table = blowup::loglog_slopes(SlopeTable::from_series(&refs, &horizons)?)?;
    println!("\n{:>6} {:>12}", "T", "p estimate");
    for (t, p) in table.t_grid.iter().zip(&table.p_estimate).step_by(5) {
        println!("{t:6.2} {p:12.5}");
    }
    let v = blowup::verdict(&table, blowup::CRITICAL_SLOPE);
    println!("\nblow-up indicated: {}", v.blow_up_indicated);
    if let Some(t) = v.earliest_t {
        println!("slope first reaches -1 at T = {t:.2}");
    }
    Ok(())
}
