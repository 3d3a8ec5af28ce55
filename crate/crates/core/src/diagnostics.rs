//! Energies, gradient norms, spectra and vorticity maxima.
//!
//! All L2 quantities are integrals over the domain (not means), so a field
//! `-sin(x)` on a `2 pi` interval has `energy_l2 = pi`.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::spectral;

/// `||f||^2_L2`
pub fn energy_l2(f: &SpectralField) -> f64 {
    f.inner(f)
}

/// `||grad f||^2_L2`, summed over components.
pub fn grad_norm_sq(f: &SpectralField) -> f64 {
    let modes = f.grid().modes();
    let mut total = 0.0;
    for comp in f.storage() {
        let mut acc = 0.0;
        modes.for_each(|idx, [_, _, i2], k| {
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            acc += modes.weight(i2) * k2 * comp[idx].norm_sqr();
        });
        total += acc;
    }
    total * f.grid().volume()
}

/// `||f||^2 + alpha^2 ||grad f||^2 + dissipation`, where `dissipation` is the
/// accumulated `2 nu int_0^t ||u_x||^2 ds` of a viscous run (zero otherwise).
pub fn alpha_energy(f: &SpectralField, alpha: f64, dissipation: f64) -> f64 {
    energy_l2(f) + alpha * alpha * grad_norm_sq(f) + dissipation
}

/// Largest relative deviation of a conserved quantity from its first value.
pub fn relative_error(values: &[f64]) -> Result<f64> {
    let (&first, _) = values.split_first().ok_or(Error::EmptySeries)?;
    Ok(values
        .iter()
        .map(|e| ((e - first) / first).abs())
        .fold(0.0, f64::max))
}

/// `eps_rel = max_t |E_alpha(t) - E_alpha(0)| / E_alpha(0)` over a series' samples.
pub fn relative_energy_error(series: &DiagnosticSeries) -> Result<f64> {
    relative_error(&series.alpha_energy())
}

/// Energy per spherical shell `kappa - 1/2 <= |m| < kappa + 1/2`, with `|m|`
/// in integer mode units. Shell `kappa` is entry `kappa` of the returned
/// vector; shells run up to the largest `|m|` present on the grid, so the
/// entries always sum to [`energy_l2`].
pub fn spectrum(f: &SpectralField) -> Vec<f64> {
    let modes = f.grid().modes();
    let max_m2: i64 = (0..3)
        .map(|a| modes.m[a].iter().map(|m| m * m).max().unwrap_or(0))
        .sum();
    let shells = ((max_m2 as f64).sqrt() + 0.5).floor() as usize + 1;
    let mut out = vec![0.0; shells];
    for comp in f.storage() {
        modes.for_each(|idx, [i0, i1, i2], _| {
            let m2 = modes.m[0][i0].pow(2) + modes.m[1][i1].pow(2) + modes.m[2][i2].pow(2);
            let kappa = ((m2 as f64).sqrt() + 0.5).floor() as usize;
            out[kappa] += modes.weight(i2) * comp[idx].norm_sqr();
        });
    }
    let vol = f.grid().volume();
    out.iter_mut().for_each(|e| *e *= vol);
    out
}

/// `max |curl f|` over the collocation points.
pub fn vorticity_max(f: &SpectralField) -> Result<f64> {
    Ok(spectral::curl(f)?.to_physical().max_magnitude())
}

/// `max |div f|` over the collocation points.
pub fn divergence_max(f: &SpectralField) -> Result<f64> {
    Ok(spectral::divergence(f)?.to_physical().max_magnitude())
}

/// Time-sampled diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticSeries {
    pub alpha: f64,
    pub nu: f64,
    pub times: Vec<f64>,
    pub l2_energy: Vec<f64>,
    pub scaled_enstrophy: Vec<f64>,
    pub grad_norm: Vec<f64>,
    /// Present for 3D runs only.
    pub vort_max: Option<Vec<f64>>,
    pub dissipation: Vec<f64>,
    /// `max_{s <= t} ||grad u(s)||`, tracked at every time step.
    pub running_sup_grad: Vec<f64>,
}

/// One sample row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub l2_energy: f64,
    pub scaled_enstrophy: f64,
    pub grad_norm: f64,
    pub vort_max: Option<f64>,
    pub dissipation: f64,
}

impl DiagnosticSeries {
    pub fn new(alpha: f64, nu: f64, three_d: bool) -> Self {
        DiagnosticSeries {
            alpha,
            nu,
            vort_max: three_d.then(Vec::new),
            ..Default::default()
        }
    }

    /// Measure a field and build its sample row.
    pub fn measure(f: &SpectralField, t: f64, alpha: f64, dissipation: f64) -> Result<Sample> {
        let g2 = grad_norm_sq(f);
        let vort_max = if f.grid().dim() == 3 {
            Some(vorticity_max(f)?)
        } else {
            None
        };
        Ok(Sample {
            t,
            l2_energy: energy_l2(f),
            scaled_enstrophy: alpha * alpha * g2,
            grad_norm: g2.sqrt(),
            vort_max,
            dissipation,
        })
    }

    /// Append a sample; `step_sup` is the largest gradient norm seen at any
    /// time step since the previous sample.
    pub fn push(&mut self, s: Sample, step_sup: f64) {
        let prev = self.running_sup_grad.last().copied().unwrap_or(0.0);
        self.running_sup_grad
            .push(prev.max(step_sup).max(s.grad_norm));
        self.times.push(s.t);
        self.l2_energy.push(s.l2_energy);
        self.scaled_enstrophy.push(s.scaled_enstrophy);
        self.grad_norm.push(s.grad_norm);
        if let (Some(v), Some(w)) = (self.vort_max.as_mut(), s.vort_max) {
            v.push(w);
        }
        self.dissipation.push(s.dissipation);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `E_alpha(t)` per sample, including accumulated dissipation.
    pub fn alpha_energy(&self) -> Vec<f64> {
        self.l2_energy
            .iter()
            .zip(&self.scaled_enstrophy)
            .zip(&self.dissipation)
            .map(|((e, s), d)| e + s + d)
            .collect()
    }
}
