//! BBM approaches Burgers as alpha -> 0: compare against the exact
//! characteristic solution at t = 0.5, before the shock.
//!
//!     cargo run --release --example burgers_oracle

use std::f64::consts::PI;

use voigt::oracle::{self, CharacteristicSolution};
use voigt::{models, timestep, GridSpec, Scheme, StepperConfig, VoigtParams};

fn main() -> voigt::Result<()> {
    let n = 8192;
    let grid = GridSpec::line(n, 2.0 * PI)?;
    let t = 0.5;
    let sol = CharacteristicSolution::new(1.0, t)?;
    let exact: Vec<f64> = (0..n)
        .map(|j| oracle::burgers_eval(grid.coordinate(0, j, 0.0), &sol))
        .collect::<voigt::Result<_>>()?;

    println!("Burgers shock time        {}", oracle::burgers_blowup_time(1.0)?);
    println!("||u_x(0.5)|| (Burgers)    {:.10}", oracle::burgers_grad_norm(&sol, 1 << 14)?);

    let cfg = StepperConfig::new(t, 0.05, Scheme::Rk4)?;
    let u0 = models::bbm_initial(grid)?;
    println!("\n{:>10} {:>14}", "alpha", "L2 error");
    for k in [64.0, 32.0, 16.0, 8.0] {
        let alpha = k / 8192.0;
        let (_, u) = timestep::integrate(&u0, &VoigtParams::bbm(alpha, 0.0)?, &cfg, &mut ())?;
        let phys = u.to_physical();
        let sq: f64 = phys.component(0).iter().zip(&exact).map(|(a, b)| (a - b).powi(2)).sum();
        println!("{alpha:10.6} {:14.6e}", (sq * 2.0 * PI / n as f64).sqrt());
    }
    Ok(())
}
