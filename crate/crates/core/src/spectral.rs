//! Diagonal Fourier-space operators on [`SpectralField`]s.
//!
//! Every operator is pure: it returns a new field and leaves its input alone.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn require_vector(f: &SpectralField) -> Result<()> {
    if f.grid().dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            found: f.grid().dim(),
        });
    }
    if f.components() != 3 {
        return Err(Error::WrongComponents {
            expected: 3,
            found: f.components(),
        });
    }
    Ok(())
}

/// Partial derivative along logical `axis`, applied to every component.
///
/// The Nyquist mode along `axis` is zeroed: its derivative has no real
/// representation on the grid.
pub fn derivative(f: &SpectralField, axis: usize) -> Result<SpectralField> {
    let sa = f.grid().check_axis(axis)?;
    let modes = f.grid().modes();
    let mut out = f.clone();
    for comp in out.storage_mut() {
        modes.for_each(|idx, i, k| {
            comp[idx] = if modes.is_nyquist(sa, i[sa]) {
                Complex64::default()
            } else {
                comp[idx] * I * k[sa]
            };
        });
    }
    Ok(out)
}

/// Sharp 2/3-rule truncation: zero every mode with `|m_j| > floor(n_j/3)`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let mut out = f.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(f: &mut SpectralField) {
    let modes = f.grid().modes();
    for comp in f.storage_mut() {
        modes.for_each(|idx, [i0, i1, i2], _| {
            if modes.is_truncated(i0, i1, i2) {
                comp[idx] = Complex64::default();
            }
        });
    }
}

/// Apply `(I - alpha^2 Laplacian)^{-1}`.
pub fn helmholtz_invert(f: &SpectralField, alpha: f64) -> Result<SpectralField> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    let mut out = f.clone();
    helmholtz_in_place(&mut out, alpha);
    Ok(out)
}

pub(crate) fn helmholtz_in_place(f: &mut SpectralField, alpha: f64) {
    let a2 = alpha * alpha;
    f.map_modes(|_, k| 1.0 / (1.0 + a2 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2])));
}

/// Orthogonal projection onto divergence-free fields,
/// `c <- c - k (k . c) / |k|^2` per mode; the mean mode is left untouched.
pub fn leray_project(f: &SpectralField) -> Result<SpectralField> {
    require_vector(f)?;
    let mut out = f.clone();
    leray_in_place(&mut out);
    Ok(out)
}

pub(crate) fn leray_in_place(f: &mut SpectralField) {
    let modes = f.grid().modes();
    let [a, b, c] = f.storage_mut() else {
        unreachable!("checked by caller")
    };
    modes.for_each(|idx, _, k| {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            return;
        }
        let dot = (a[idx] * k[0] + b[idx] * k[1] + c[idx] * k[2]) / k2;
        a[idx] -= dot * k[0];
        b[idx] -= dot * k[1];
        c[idx] -= dot * k[2];
    });
}

/// Spectral curl `i k x c`.
pub fn curl(f: &SpectralField) -> Result<SpectralField> {
    require_vector(f)?;
    let modes = f.grid().modes();
    let [a, b, c] = f.storage() else {
        unreachable!()
    };
    let mut out = SpectralField::zeros(*f.grid(), 3);
    let mut w = vec![vec![Complex64::default(); a.len()]; 3];
    modes.for_each(|idx, i, k| {
        let k = [0, 1, 2].map(|ax| if modes.is_nyquist(ax, i[ax]) { 0.0 } else { k[ax] });
        w[0][idx] = I * (b[idx] * -k[2] + c[idx] * k[1]);
        w[1][idx] = I * (c[idx] * -k[0] + a[idx] * k[2]);
        w[2][idx] = I * (a[idx] * -k[1] + b[idx] * k[0]);
    });
    for (dst, src) in out.storage_mut().iter_mut().zip(w) {
        *dst = src;
    }
    Ok(out)
}

/// Spectral divergence of a 3-component field.
pub fn divergence(f: &SpectralField) -> Result<SpectralField> {
    require_vector(f)?;
    let modes = f.grid().modes();
    let mut out = SpectralField::zeros(*f.grid(), 1);
    let src = f.storage();
    let dst = &mut out.storage_mut()[0];
    modes.for_each(|idx, i, k| {
        let mut acc = Complex64::default();
        for ax in 0..3 {
            if !modes.is_nyquist(ax, i[ax]) {
                acc += src[ax][idx] * k[ax];
            }
        }
        dst[idx] = I * acc;
    });
    Ok(out)
}
