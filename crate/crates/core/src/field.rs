use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::GridSpec;

/// Real periodic field held as Fourier coefficients.
///
/// Only the half lattice `m_last >= 0` is stored; the other half follows
/// from Hermitian symmetry `c(-m) = conj(c(m))`. Use [`SpectralField::coeff`]
/// to read the full logical lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    comps: Vec<Vec<Complex64>>,
}

/// Real samples at the collocation points, one buffer per component.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: GridSpec,
    comps: Vec<Vec<f64>>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        SpectralField {
            grid,
            comps: vec![vec![Complex64::default(); grid.spectral_len()]; components],
        }
    }

    /// Zero field with the natural component count for the grid (1 in 1D, 3 in 3D).
    pub fn zeros_like_grid(grid: GridSpec) -> Self {
        Self::zeros(grid, grid.dim())
    }

    /// Wrap raw half-lattice storage.
    pub fn from_storage(grid: GridSpec, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if let Some(bad) = comps.iter().find(|c| c.len() != grid.spectral_len()) {
            return Err(Error::GridMismatch(format!(
                "component has {} coefficients, grid expects {}",
                bad.len(),
                grid.spectral_len()
            )));
        }
        Ok(SpectralField { grid, comps })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    pub fn storage(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub(crate) fn storage_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.comps
    }

    fn storage_index(&self, m: &[i64]) -> Result<Option<(usize, bool)>> {
        if m.len() != self.grid.dim() {
            return Err(Error::GridMismatch(format!(
                "mode has {} entries on a {}D grid",
                m.len(),
                self.grid.dim()
            )));
        }
        let full = if self.grid.dim() == 1 {
            [0, 0, m[0]]
        } else {
            [m[0], m[1], m[2]]
        };
        let (full, conj) = if full[2] < 0 {
            (full.map(|x| -x), true)
        } else {
            (full, false)
        };
        let [s0, s1, s2] = self.grid.shape();
        let wrap = |mi: i64, s: usize| -> Option<usize> {
            let s = s as i64;
            let half = s / 2;
            if s == 1 {
                (mi == 0).then_some(0)
            } else if mi >= -half && mi < half {
                Some(mi.rem_euclid(s) as usize)
            } else if mi == half {
                // The stored Nyquist index represents both +n/2 and -n/2.
                Some(half as usize)
            } else {
                None
            }
        };
        if full[2] > (s2 / 2) as i64 {
            return Ok(None);
        }
        let (Some(i0), Some(i1)) = (wrap(full[0], s0), wrap(full[1], s1)) else {
            return Ok(None);
        };
        let idx = (i0 * s1 + i1) * (s2 / 2 + 1) + full[2] as usize;
        Ok(Some((idx, conj)))
    }

    /// Coefficient of logical mode `m` (length `dim`), or zero if unrepresented.
    pub fn coeff(&self, component: usize, m: &[i64]) -> Result<Complex64> {
        Ok(match self.storage_index(m)? {
            Some((idx, false)) => self.comps[component][idx],
            Some((idx, true)) => self.comps[component][idx].conj(),
            None => Complex64::default(),
        })
    }

    /// Set mode `m` and, implicitly, its conjugate partner `-m`. Nyquist
    /// modes are their own aliases and cannot be set.
    pub fn set_coeff(&mut self, component: usize, m: &[i64], value: Complex64) -> Result<()> {
        for (axis, &mi) in m.iter().enumerate() {
            if axis < self.grid.dim() && 2 * mi.unsigned_abs() as usize >= self.grid.n(axis) {
                return Err(Error::GridMismatch(format!("mode {m:?} not representable")));
            }
        }
        let Some((idx, conj)) = self.storage_index(m)? else {
            return Err(Error::GridMismatch(format!("mode {m:?} not representable")));
        };
        let neg: Vec<i64> = m.iter().map(|x| -x).collect();
        let (nidx, _) = self.storage_index(&neg)?.expect("partner of a representable mode");
        let comp = &mut self.comps[component];
        if nidx == idx {
            // Either the partner lives in the implicit half, or m is self-conjugate.
            if m.iter().all(|&x| x == 0) {
                comp[idx] = Complex64::new(value.re, 0.0);
            } else {
                comp[idx] = if conj { value.conj() } else { value };
            }
        } else {
            // Zero plane of the half axis: both m and -m are stored.
            comp[idx] = value;
            comp[nidx] = value.conj();
        }
        Ok(())
    }

    /// Transform to collocation-point samples.
    pub fn to_physical(&self) -> PhysicalField {
        let plans = fft::plans(&self.grid);
        PhysicalField {
            grid: self.grid,
            comps: self.comps.iter().map(|c| plans.inverse(c)).collect(),
        }
    }

    /// Transform collocation-point samples to coefficients.
    pub fn to_spectral(samples: &PhysicalField) -> SpectralField {
        let plans = fft::plans(&samples.grid);
        SpectralField {
            grid: samples.grid,
            comps: samples.comps.iter().map(|c| plans.forward(c)).collect(),
        }
    }

    fn check_compatible(&self, other: &SpectralField) {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        assert_eq!(self.comps.len(), other.comps.len(), "component mismatch");
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        self.check_compatible(x);
        for (dst, src) in self.comps.iter_mut().zip(&x.comps) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s * a;
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in self.comps.iter_mut().flatten() {
            *c *= a;
        }
    }

    /// Apply a real per-mode multiplier (same for every component).
    pub fn map_modes(&mut self, mut f: impl FnMut([usize; 3], [f64; 3]) -> f64) {
        let modes = self.grid.modes();
        let mut mult = vec![0.0; self.grid.spectral_len()];
        modes.for_each(|idx, i, k| mult[idx] = f(i, k));
        for comp in self.comps.iter_mut() {
            for (c, m) in comp.iter_mut().zip(&mult) {
                *c *= *m;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .flatten()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest coefficient magnitude over all components.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Magnitude of the mean (zero-mode) coefficient, maximized over components.
    pub fn mean_abs(&self) -> f64 {
        self.comps.iter().map(|c| c[0].norm()).fold(0.0, f64::max)
    }

    /// L2 inner product over the domain, `integral of sum_i f_i g_i dx`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.check_compatible(other);
        let modes = self.grid.modes();
        let mut total = 0.0;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            let mut acc = 0.0;
            modes.for_each(|idx, [_, _, i2], _| {
                acc += modes.weight(i2) * (a[idx] * b[idx].conj()).re;
            });
            total += acc;
        }
        total * self.grid.volume()
    }
}

impl PhysicalField {
    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        PhysicalField {
            grid,
            comps: vec![vec![0.0; grid.physical_len()]; components],
        }
    }

    /// Wrap sample buffers, one per component, in storage order.
    pub fn from_samples(grid: GridSpec, comps: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = comps.iter().find(|c| c.len() != grid.physical_len()) {
            return Err(Error::GridMismatch(format!(
                "component has {} samples, grid expects {}",
                bad.len(),
                grid.physical_len()
            )));
        }
        Ok(PhysicalField { grid, comps })
    }

    /// Sample `f(x)` at every gridpoint; `x` holds `dim` coordinates starting at `origin`.
    pub fn sample(
        grid: GridSpec,
        components: usize,
        origin: f64,
        f: impl Fn(&[f64], &mut [f64]),
    ) -> Self {
        let mut out = Self::zeros(grid, components);
        let [s0, s1, s2] = grid.shape();
        let mut x = vec![0.0; grid.dim()];
        let mut val = vec![0.0; components];
        for i0 in 0..s0 {
            for i1 in 0..s1 {
                for i2 in 0..s2 {
                    if grid.dim() == 1 {
                        x[0] = grid.coordinate(0, i2, origin);
                    } else {
                        x[0] = grid.coordinate(0, i0, origin);
                        x[1] = grid.coordinate(1, i1, origin);
                        x[2] = grid.coordinate(2, i2, origin);
                    }
                    f(&x, &mut val);
                    let idx = (i0 * s1 + i1) * s2 + i2;
                    for (c, v) in val.iter().enumerate() {
                        out.comps[c][idx] = *v;
                    }
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.comps[c]
    }

    /// Largest pointwise Euclidean norm over components.
    pub fn max_magnitude(&self) -> f64 {
        let n = self.grid.physical_len();
        (0..n)
            .map(|i| self.comps.iter().map(|c| c[i] * c[i]).sum::<f64>())
            .fold(0.0, f64::max)
            .sqrt()
    }
}

impl TryFrom<&PhysicalField> for SpectralField {
    type Error = Error;

    fn try_from(p: &PhysicalField) -> Result<Self> {
        Ok(SpectralField::to_spectral(p))
    }
}
