use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid over a box (3D) or an interval (1D).
///
/// Storage is always three-dimensional: a 1D grid of `n` points is laid out as
/// `1 x 1 x n`, so the same transform and mode loops serve both models. The
/// last storage axis is the real-to-complex axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    shape: [usize; 3],
    extent: [f64; 3],
}

impl GridSpec {
    /// Build a grid from per-axis point counts and lengths.
    pub fn new(n: &[usize], length: &[f64]) -> Result<Self> {
        let dim = n.len();
        if dim != 1 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 3, got {dim}")));
        }
        if length.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "{} lengths given for a {dim}D grid",
                length.len()
            )));
        }
        for &m in n {
            if m < 4 || m % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "points per axis must be even and >= 4, got {m}"
                )));
            }
        }
        for &l in length {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::InvalidGrid(format!("lengths must be positive, got {l}")));
            }
        }
        let (shape, extent) = if dim == 1 {
            ([1, 1, n[0]], [1.0, 1.0, length[0]])
        } else {
            ([n[0], n[1], n[2]], [length[0], length[1], length[2]])
        };
        Ok(GridSpec { dim, shape, extent })
    }

    /// `n^3` points on a cube of side `length`.
    pub fn cube(n: usize, length: f64) -> Result<Self> {
        Self::new(&[n, n, n], &[length, length, length])
    }

    /// `n` points on an interval of length `length`.
    pub fn line(n: usize, length: f64) -> Result<Self> {
        Self::new(&[n], &[length])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points along logical axis `axis`.
    pub fn n(&self, axis: usize) -> usize {
        self.shape[self.storage_axis(axis)]
    }

    /// Domain length along logical axis `axis`.
    pub fn length(&self, axis: usize) -> f64 {
        self.extent[self.storage_axis(axis)]
    }

    /// Domain volume (length in 1D).
    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|a| self.length(a)).product()
    }

    /// Smallest grid spacing over all axes.
    pub fn min_spacing(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.length(a) / self.n(a) as f64)
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn storage_axis(&self, axis: usize) -> usize {
        if self.dim == 1 {
            2
        } else {
            axis
        }
    }

    pub(crate) fn check_axis(&self, axis: usize) -> Result<usize> {
        if axis < self.dim {
            Ok(self.storage_axis(axis))
        } else {
            Err(Error::InvalidAxis {
                axis,
                dim: self.dim,
            })
        }
    }

    /// Physical storage shape `[s0, s1, s2]`.
    pub fn shape(&self) -> [usize; 3] {
        self.shape
    }

    /// Spectral storage shape `[s0, s1, s2/2 + 1]`.
    pub fn spectral_shape(&self) -> [usize; 3] {
        [self.shape[0], self.shape[1], self.shape[2] / 2 + 1]
    }

    pub fn physical_len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn spectral_len(&self) -> usize {
        self.spectral_shape().iter().product()
    }

    /// Integer mode numbers and physical wavenumbers for every storage axis.
    pub fn modes(&self) -> Modes {
        let [s0, s1, h] = self.spectral_shape();
        let full = |s: usize| -> Vec<i64> {
            (0..s)
                .map(|i| if i < s.div_ceil(2) { i as i64 } else { i as i64 - s as i64 })
                .collect()
        };
        let m = [full(s0), full(s1), (0..h as i64).collect::<Vec<_>>()];
        let k = [0, 1, 2].map(|a| {
            let scale = 2.0 * PI / self.extent[a];
            m[a].iter().map(|&mi| scale * mi as f64).collect::<Vec<_>>()
        });
        let cutoff = self.shape.map(|s| (s / 3) as i64);
        Modes {
            shape: [s0, s1, h],
            nyquist: self.shape.map(|s| if s > 1 { (s / 2) as i64 } else { i64::MAX }),
            cutoff,
            half_n: self.shape[2],
            m,
            k,
        }
    }

    /// Physical coordinates of gridpoint `i` along logical axis `axis`, with
    /// the grid starting at `origin`.
    pub fn coordinate(&self, axis: usize, i: usize, origin: f64) -> f64 {
        origin + self.length(axis) * i as f64 / self.n(axis) as f64
    }
}

/// Mode-number tables for a grid's spectral storage.
#[derive(Debug, Clone)]
pub struct Modes {
    pub shape: [usize; 3],
    /// `|m|` of the Nyquist mode per storage axis (`i64::MAX` on degenerate axes).
    pub nyquist: [i64; 3],
    /// 2/3-rule cutoff `floor(n/3)` per storage axis.
    pub cutoff: [i64; 3],
    half_n: usize,
    pub m: [Vec<i64>; 3],
    pub k: [Vec<f64>; 3],
}

impl Modes {
    /// Linear index of storage position `(i0, i1, i2)`.
    #[inline]
    pub fn index(&self, i0: usize, i1: usize, i2: usize) -> usize {
        (i0 * self.shape[1] + i1) * self.shape[2] + i2
    }

    /// Number of lattice modes represented by a stored coefficient on the
    /// half axis: 1 for the zero and Nyquist planes, 2 otherwise.
    #[inline]
    pub fn weight(&self, i2: usize) -> f64 {
        if i2 == 0 || 2 * i2 == self.half_n {
            1.0
        } else {
            2.0
        }
    }

    /// True if the mode lies outside the dealiased region on any axis.
    #[inline]
    pub fn is_truncated(&self, i0: usize, i1: usize, i2: usize) -> bool {
        self.m[0][i0].abs() > self.cutoff[0]
            || self.m[1][i1].abs() > self.cutoff[1]
            || self.m[2][i2].abs() > self.cutoff[2]
    }

    #[inline]
    pub fn is_nyquist(&self, axis: usize, i: usize) -> bool {
        self.m[axis][i].abs() == self.nyquist[axis]
    }

    /// Calls `f(index, i2, [k0, k1, k2])` for every stored mode.
    pub fn for_each(&self, mut f: impl FnMut(usize, [usize; 3], [f64; 3])) {
        let [s0, s1, h] = self.shape;
        let mut idx = 0;
        for i0 in 0..s0 {
            for i1 in 0..s1 {
                for i2 in 0..h {
                    f(idx, [i0, i1, i2], [self.k[0][i0], self.k[1][i1], self.k[2][i2]]);
                    idx += 1;
                }
            }
        }
    }
}
