//! Initial data and semi-discrete right-hand sides.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::spectral;

/// Which equation a run integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// 3D Euler-Voigt on a periodic box.
    EulerVoigt3D,
    /// 1D Benjamin-Bona-Mahony, optionally viscous.
    Bbm1D,
}

impl Model {
    pub fn dim(self) -> usize {
        match self {
            Model::EulerVoigt3D => 3,
            Model::Bbm1D => 1,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Model::EulerVoigt3D => "ev3d",
            Model::Bbm1D => "bbm",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "ev3d" => Some(Model::EulerVoigt3D),
            "bbm" => Some(Model::Bbm1D),
            _ => None,
        }
    }
}

/// Regularization length, viscosity and model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoigtParams {
    pub alpha: f64,
    pub nu: f64,
    pub model: Model,
}

impl VoigtParams {
    pub fn new(model: Model, alpha: f64, nu: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(nu >= 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be >= 0, got {nu}")));
        }
        if model == Model::EulerVoigt3D && nu != 0.0 {
            return Err(Error::InvalidParameter("Euler-Voigt runs are inviscid (nu = 0)".into()));
        }
        Ok(VoigtParams { alpha, nu, model })
    }

    pub fn euler_voigt(alpha: f64) -> Result<Self> {
        Self::new(Model::EulerVoigt3D, alpha, 0.0)
    }

    pub fn bbm(alpha: f64, nu: f64) -> Result<Self> {
        Self::new(Model::Bbm1D, alpha, nu)
    }
}

fn require_dim(grid: &GridSpec, dim: usize) -> Result<()> {
    if grid.dim() != dim {
        return Err(Error::WrongDimension {
            expected: dim,
            found: grid.dim(),
        });
    }
    Ok(())
}

/// Taylor-Green vortex on the unit cube:
/// `u = (sin 2pi x cos 2pi y cos 2pi z, -cos 2pi x sin 2pi y cos 2pi z, 0)`.
pub fn taylor_green(grid: GridSpec) -> Result<SpectralField> {
    require_dim(&grid, 3)?;
    if (0..3).any(|a| grid.length(a) != 1.0) {
        return Err(Error::InvalidGrid("Taylor-Green data lives on the unit cube".into()));
    }
    let mut u = SpectralField::zeros(grid, 3);
    for sx in [-1i64, 1] {
        for sy in [-1i64, 1] {
            for sz in [-1i64, 1] {
                let m = [sx, sy, sz];
                u.set_coeff(0, &m, Complex64::new(0.0, -(sx as f64) / 8.0))?;
                u.set_coeff(1, &m, Complex64::new(0.0, sy as f64 / 8.0))?;
            }
        }
    }
    Ok(u)
}

/// `u0(x) = -a sin(x)` on a `2 pi` periodic interval (gridpoint `j` at `x = 2 pi j / n`).
pub fn sine_initial(grid: GridSpec, amplitude: f64) -> Result<SpectralField> {
    require_dim(&grid, 1)?;
    if (grid.length(0) - 2.0 * PI).abs() > 1e-12 {
        return Err(Error::InvalidGrid("BBM data lives on an interval of length 2 pi".into()));
    }
    let mut u = SpectralField::zeros(grid, 1);
    u.set_coeff(0, &[1], Complex64::new(0.0, amplitude / 2.0))?;
    Ok(u)
}

/// `u0(x) = -sin(x)`.
pub fn bbm_initial(grid: GridSpec) -> Result<SpectralField> {
    sine_initial(grid, 1.0)
}

/// Upper bound on `max |div u|` from the coefficient magnitudes.
pub fn divergence_bound(u: &SpectralField) -> Result<f64> {
    let div = spectral::divergence(u)?;
    let modes = u.grid().modes();
    let c = div.component(0);
    let mut acc = 0.0;
    modes.for_each(|idx, [_, _, i2], _| acc += modes.weight(i2) * c[idx].norm());
    Ok(acc)
}

/// Dealiased advective term `(u . grad) u` for a 3D field, or `u u_x` in 1D.
///
/// Gradients are taken spectrally, products pointwise on the grid.
pub fn advection(u: &SpectralField) -> SpectralField {
    let grid = *u.grid();
    let plans = fft::plans(&grid);
    let dim = grid.dim();
    let modes = grid.modes();
    // Inputs that already obey the 2/3 rule (every state the integrators
    // produce) let the inverse transforms skip the zero columns.
    let truncated = u.storage().iter().all(|c| {
        let mut clean = true;
        modes.for_each(|idx, [i0, i1, i2], _| {
            clean &= !modes.is_truncated(i0, i1, i2) || c[idx] == Complex64::default();
        });
        clean
    });
    let inverse = |c: &[Complex64]| {
        if truncated {
            plans.inverse_dealiased(c)
        } else {
            plans.inverse(c)
        }
    };
    let phys: Vec<Vec<f64>> = u.storage().iter().map(|c| inverse(c)).collect();
    let mut out = SpectralField::zeros(grid, u.components());
    let mut grad = vec![Complex64::default(); grid.spectral_len()];
    for (i, comp) in u.storage().iter().enumerate() {
        let mut acc = vec![0.0; grid.physical_len()];
        for j in 0..dim {
            let sa = grid.storage_axis(j);
            modes.for_each(|idx, ii, k| {
                grad[idx] = if modes.is_nyquist(sa, ii[sa]) {
                    Complex64::default()
                } else {
                    comp[idx] * Complex64::new(0.0, k[sa])
                };
            });
            let g = inverse(&grad);
            let uj = &phys[j];
            acc.par_iter_mut()
                .zip(g.par_iter().zip(uj.par_iter()))
                .for_each(|(a, (g, v))| *a += v * g);
        }
        out.storage_mut()[i] = plans.forward_dealiased(&acc);
    }
    out
}

/// Tolerance on the divergence bound accepted by [`ev3d_rhs`].
pub const DIVERGENCE_TOLERANCE: f64 = 1e-10;

/// Euler-Voigt tendency `du/dt = -(I - alpha^2 Lap)^{-1} P[(u . grad) u]`.
pub fn ev3d_rhs(u: &SpectralField, p: &VoigtParams) -> Result<SpectralField> {
    require_dim(u.grid(), 3)?;
    let div = divergence_bound(u)?;
    if div > DIVERGENCE_TOLERANCE {
        return Err(Error::NotDivergenceFree(div));
    }
    Ok(ev3d_tendency(u, p.alpha))
}

/// Unchecked Euler-Voigt tendency.
pub(crate) fn ev3d_tendency(u: &SpectralField, alpha: f64) -> SpectralField {
    let mut n = advection(u);
    spectral::leray_in_place(&mut n);
    spectral::helmholtz_in_place(&mut n, alpha);
    n.scale(-1.0);
    n
}

/// Advective BBM tendency `-(1 - alpha^2 d_xx)^{-1} [u u_x]`.
pub fn bbm_advective(u: &SpectralField, alpha: f64) -> Result<SpectralField> {
    require_dim(u.grid(), 1)?;
    let mut n = advection(u);
    spectral::helmholtz_in_place(&mut n, alpha);
    n.scale(-1.0);
    Ok(n)
}

/// Full BBM tendency, `(1 + alpha^2 k^2)^{-1} (-F[u u_x] - nu k^2 u)`.
pub fn bbm_rhs(u: &SpectralField, p: &VoigtParams) -> Result<SpectralField> {
    let mut t = bbm_advective(u, p.alpha)?;
    if p.nu > 0.0 {
        let symbol = bbm_linear_symbol(u.grid(), p.alpha, p.nu);
        for ((t, u), l) in t.storage_mut()[0]
            .iter_mut()
            .zip(u.component(0))
            .zip(&symbol)
        {
            *t += u * *l;
        }
    }
    Ok(t)
}

/// Diagonal viscous symbol `-nu k^2 / (1 + alpha^2 k^2)` per stored mode.
pub fn bbm_linear_symbol(grid: &GridSpec, alpha: f64, nu: f64) -> Vec<f64> {
    let modes = grid.modes();
    let mut out = vec![0.0; grid.spectral_len()];
    modes.for_each(|idx, _, k| {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        out[idx] = -nu * k2 / (1.0 + alpha * alpha * k2);
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PhysicalField;

    #[test]
    fn taylor_green_matches_samples() {
        let g = GridSpec::cube(16, 1.0).unwrap();
        let u = taylor_green(g).unwrap();
        let tp = 2.0 * PI;
        let sampled = PhysicalField::sample(g, 3, 0.0, |x, v| {
            v[0] = (tp * x[0]).sin() * (tp * x[1]).cos() * (tp * x[2]).cos();
            v[1] = -(tp * x[0]).cos() * (tp * x[1]).sin() * (tp * x[2]).cos();
            v[2] = 0.0;
        });
        let mut d = SpectralField::to_spectral(&sampled);
        d.axpy(-1.0, &u);
        assert!(d.max_abs() < 1e-15);
        assert!(divergence_bound(&u).unwrap() < 1e-14);
        assert_eq!(u.mean_abs(), 0.0);
    }

    #[test]
    fn initial_data_requires_matching_grid() {
        assert!(taylor_green(GridSpec::line(16, 1.0).unwrap()).is_err());
        assert!(taylor_green(GridSpec::cube(8, 2.0).unwrap()).is_err());
        assert!(bbm_initial(GridSpec::cube(8, 1.0).unwrap()).is_err());
        assert!(bbm_initial(GridSpec::line(8, 1.0).unwrap()).is_err());
    }

    #[test]
    fn bbm_initial_samples() {
        let g = GridSpec::line(32, 2.0 * PI).unwrap();
        let u = bbm_initial(g).unwrap();
        let p = u.to_physical();
        for (j, v) in p.component(0).iter().enumerate() {
            let x = 2.0 * PI * j as f64 / 32.0;
            assert!((v + x.sin()).abs() < 1e-15);
        }
        assert_eq!(u.coeff(0, &[0]).unwrap(), Complex64::default());
    }

    #[test]
    fn zero_fields_have_zero_tendency() {
        let g3 = GridSpec::cube(8, 1.0).unwrap();
        let p3 = VoigtParams::euler_voigt(0.1).unwrap();
        assert_eq!(ev3d_rhs(&SpectralField::zeros(g3, 3), &p3).unwrap().max_abs(), 0.0);
        let g1 = GridSpec::line(16, 2.0 * PI).unwrap();
        let p1 = VoigtParams::bbm(0.1, 0.01).unwrap();
        assert_eq!(bbm_rhs(&SpectralField::zeros(g1, 1), &p1).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn rejects_compressible_input() {
        let g = GridSpec::cube(8, 1.0).unwrap();
        let mut u = SpectralField::zeros(g, 3);
        u.set_coeff(0, &[1, 0, 0], Complex64::new(0.5, 0.0)).unwrap();
        let p = VoigtParams::euler_voigt(0.1).unwrap();
        assert!(matches!(ev3d_rhs(&u, &p), Err(Error::NotDivergenceFree(_))));
    }

    #[test]
    fn params_validation() {
        assert!(VoigtParams::new(Model::EulerVoigt3D, 0.1, 0.01).is_err());
        assert!(VoigtParams::bbm(-0.1, 0.0).is_err());
        assert!(VoigtParams::bbm(0.1, f64::NAN).is_err());
        assert_eq!(Model::from_tag("ev3d"), Some(Model::EulerVoigt3D));
        assert_eq!(Model::from_tag("euler"), None);
    }
}
