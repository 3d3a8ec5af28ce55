//! Spectral building blocks on a small Taylor-Green field: transforms,
//! derivatives, dealiasing, projection and the Helmholtz inverse.
//!
//!     cargo run --release --example spectral_operators

use std::f64::consts::PI;

use voigt::{diagnostics, models, spectral, GridSpec, SpectralField};

fn main() -> voigt::Result<()> {
    let grid = GridSpec::cube(32, 1.0)?;
    let u = models::taylor_green(grid)?;

    // Parseval: the mean square of the samples equals the coefficient sum.
    let samples = u.to_physical();
    let mean_sq: f64 = (0..3)
        .map(|c| samples.component(c).iter().map(|v| v * v).sum::<f64>())
        .sum::<f64>()
        / grid.physical_len() as f64;
    println!("mean |u|^2 from samples   {:.16}", mean_sq);
    println!("||u||^2 from coefficients {:.16}", diagnostics::energy_l2(&u));

    let back = SpectralField::to_spectral(&samples);
    let mut diff = back.clone();
    diff.axpy(-1.0, &u);
    println!("round-trip max error      {:.3e}", diff.max_abs());

    // Taylor-Green has |k|^2 = 3 (2 pi)^2 on every active mode.
    let w = spectral::curl(&u)?;
    println!("||curl u||^2              {:.12}  (3 pi^2 = {:.12})", diagnostics::energy_l2(&w), 3.0 * PI * PI);

    let alpha = 0.05;
    let h = spectral::helmholtz_invert(&u, alpha)?;
    let factor = 1.0 + 3.0 * (2.0 * PI * alpha).powi(2);
    println!("Helmholtz shrink factor   {:.12}  (expected {:.12})", diagnostics::energy_l2(&u).sqrt() / diagnostics::energy_l2(&h).sqrt(), factor);

    let p = spectral::leray_project(&u)?;
    let mut pd = p.clone();
    pd.axpy(-1.0, &u);
    println!("Leray change on TG data   {:.3e}", pd.max_abs());
    println!("max |div u|               {:.3e}", diagnostics::divergence_max(&u)?);

    let d = spectral::dealias(&spectral::dealias(&u));
    let mut dd = d;
    dd.axpy(-1.0, &spectral::dealias(&u));
    println!("dealias idempotence       {:.3e}", dd.max_abs());

    let e = diagnostics::spectrum(&u);
    println!("shell spectrum            {:?}", &e[..4]);
    Ok(())
}
