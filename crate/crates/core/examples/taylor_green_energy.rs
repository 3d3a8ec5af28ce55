//! Euler-Voigt from Taylor-Green data: the energy flows from `||u||^2` into
//! `alpha^2 ||grad u||^2` while their sum stays fixed.
//!
//!     cargo run --release --example taylor_green_energy -- [n] [alpha] [t_end]

use voigt::{diagnostics, models, timestep, GridSpec, Scheme, StepperConfig, VoigtParams};

fn main() -> voigt::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|v| v.parse().ok()).unwrap_or(32);
    let alpha = args.get(1).and_then(|v| v.parse().ok()).unwrap_or(4.0 / n as f64);
    let t_end = args.get(2).and_then(|v| v.parse().ok()).unwrap_or(2.0);

    let grid = GridSpec::cube(n, 1.0)?;
    let u0 = models::taylor_green(grid)?;
    let params = VoigtParams::euler_voigt(alpha)?;
    let cfg = StepperConfig::new(t_end, 0.25, Scheme::Rk4)?;

    let mut sink = |_: usize, t: f64, u: &voigt::SpectralField| {
        let div = diagnostics::divergence_max(u)?;
        println!("t = {t:5.2}   max |div u| = {div:.2e}");
        Ok(())
    };
    let (series, _) = timestep::integrate(&u0, &params, &cfg, &mut sink)?;

    println!("\n{:>6} {:>14} {:>14} {:>14} {:>12}", "t", "||u||^2", "a^2||grad u||^2", "sum", "max |w|");
    let total = series.alpha_energy();
    for i in 0..series.len() {
        println!(
            "{:6.2} {:14.10} {:14.10} {:14.12} {:12.6}",
            series.times[i],
            series.l2_energy[i],
            series.scaled_enstrophy[i],
            total[i],
            series.vort_max.as_ref().map_or(0.0, |v| v[i]),
        );
    }
    println!("\nrelative energy drift {:.3e}", diagnostics::relative_energy_error(&series)?);
    Ok(())
}
