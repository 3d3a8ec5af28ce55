//! Real-to-complex 3D transforms over the storage layout of [`GridSpec`].
//!
//! Forward transforms carry the `1/N` factor, so a stored coefficient is the
//! Fourier-series amplitude `c_m` in `u(x) = sum_m c_m exp(i k_m . x)` and
//! Parseval reads `mean(u^2) = sum_m |c_m|^2` with no extra constants.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use crate::grid::GridSpec;

pub(crate) struct Plans {
    shape: [usize; 3],
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: [Option<Arc<dyn Fft<f64>>>; 2],
    inv: [Option<Arc<dyn Fft<f64>>>; 2],
}

/// Plans are cached per storage shape; planning is the only shared state.
pub(crate) fn plans(grid: &GridSpec) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<HashMap<[usize; 3], Arc<Plans>>>> = OnceLock::new();
    let shape = grid.shape();
    let mut cache = CACHE
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    cache
        .entry(shape)
        .or_insert_with(|| {
            let mut real = RealFftPlanner::<f64>::new();
            let mut cplx = FftPlanner::<f64>::new();
            let axis = |s: usize, p: &mut FftPlanner<f64>, forward: bool| {
                (s > 1).then(|| {
                    if forward {
                        p.plan_fft_forward(s)
                    } else {
                        p.plan_fft_inverse(s)
                    }
                })
            };
            Arc::new(Plans {
                shape,
                r2c: real.plan_fft_forward(shape[2]),
                c2r: real.plan_fft_inverse(shape[2]),
                fwd: [axis(shape[0], &mut cplx, true), axis(shape[1], &mut cplx, true)],
                inv: [axis(shape[0], &mut cplx, false), axis(shape[1], &mut cplx, false)],
            })
        })
        .clone()
}

impl Plans {
    fn half(&self) -> usize {
        self.shape[2] / 2 + 1
    }

    /// Slabs and columns that can hold nonzero data; all of them unless
    /// `dealiased`, in which case only modes inside the 2/3-rule cutoff.
    fn support(&self, dealiased: bool) -> (Vec<usize>, usize) {
        let [_, s1, s2] = self.shape;
        if !dealiased {
            return ((0..s1).collect(), self.half());
        }
        let c1 = s1 / 3;
        let slabs = (0..s1)
            .filter(|&i1| s1 == 1 || i1 <= c1 || s1 - i1 <= c1)
            .collect();
        (slabs, s2 / 3 + 1)
    }

    /// Physical samples to normalized half-lattice coefficients.
    pub(crate) fn forward(&self, input: &[f64]) -> Vec<Complex64> {
        self.forward_impl(input, false)
    }

    /// Forward transform whose result is truncated by the 2/3 rule. Modes
    /// outside the cutoff are never computed.
    pub(crate) fn forward_dealiased(&self, input: &[f64]) -> Vec<Complex64> {
        self.forward_impl(input, true)
    }

    fn forward_impl(&self, input: &[f64], dealiased: bool) -> Vec<Complex64> {
        let [s0, s1, s2] = self.shape;
        let h = self.half();
        let (slabs, cols) = self.support(dealiased);
        let mut out = vec![Complex64::default(); s0 * s1 * h];
        out.par_chunks_mut(h)
            .zip(input.par_chunks(s2))
            .for_each_init(
                || (vec![0.0; s2], self.r2c.make_scratch_vec()),
                |(buf, scratch), (row_out, row_in)| {
                    buf.copy_from_slice(row_in);
                    // Lengths are fixed by the plan; errors are impossible here.
                    self.r2c
                        .process_with_scratch(buf, row_out, scratch)
                        .expect("r2c length");
                },
            );
        if let Some(fft) = &self.fwd[1] {
            transform_middle(&mut out, [s0, s1, h], cols, fft.as_ref());
        }
        if let Some(fft) = &self.fwd[0] {
            transform_outer(&mut out, [s0, s1, h], &slabs, cols, fft.as_ref());
        }
        let scale = 1.0 / (s0 * s1 * s2) as f64;
        let keep = |i: usize, s: usize| i <= s / 3 || s - i <= s / 3;
        out.par_chunks_mut(h).enumerate().for_each(|(row, c)| {
            let (i0, i1) = (row / s1, row % s1);
            let live = !dealiased || (keep(i0, s0) && keep(i1, s1));
            for (i2, v) in c.iter_mut().enumerate() {
                *v = if live && (!dealiased || i2 < cols) {
                    *v * scale
                } else {
                    Complex64::default()
                };
            }
        });
        out
    }

    /// Half-lattice coefficients to physical samples.
    pub(crate) fn inverse(&self, input: &[Complex64]) -> Vec<f64> {
        self.inverse_impl(input, false)
    }

    /// Inverse transform of coefficients known to vanish outside the 2/3-rule
    /// cutoff; columns that are identically zero are skipped.
    pub(crate) fn inverse_dealiased(&self, input: &[Complex64]) -> Vec<f64> {
        self.inverse_impl(input, true)
    }

    fn inverse_impl(&self, input: &[Complex64], dealiased: bool) -> Vec<f64> {
        let [s0, s1, s2] = self.shape;
        let h = self.half();
        let (slabs, cols) = self.support(dealiased);
        let mut work = input.to_vec();
        if let Some(fft) = &self.inv[0] {
            transform_outer(&mut work, [s0, s1, h], &slabs, cols, fft.as_ref());
        }
        if let Some(fft) = &self.inv[1] {
            transform_middle(&mut work, [s0, s1, h], cols, fft.as_ref());
        }
        let mut out = vec![0.0; s0 * s1 * s2];
        out.par_chunks_mut(s2)
            .zip(work.par_chunks_mut(h))
            .for_each_init(
                || self.c2r.make_scratch_vec(),
                |scratch, (row_out, row_in)| {
                    // The zero and Nyquist bins of a real signal are real.
                    row_in[0].im = 0.0;
                    row_in[h - 1].im = 0.0;
                    self.c2r
                        .process_with_scratch(row_in, row_out, scratch)
                        .expect("c2r length");
                },
            );
        out
    }
}

/// Transform the first `cols` columns along storage axis 1, one `s1 x h`
/// plane at a time.
fn transform_middle(data: &mut [Complex64], [_, s1, h]: [usize; 3], cols: usize, fft: &dyn Fft<f64>) {
    data.par_chunks_mut(s1 * h).for_each_init(
        || {
            (
                vec![Complex64::default(); s1 * cols],
                vec![Complex64::default(); fft.get_inplace_scratch_len()],
            )
        },
        |(buf, scratch), plane| {
            for i1 in 0..s1 {
                for i2 in 0..cols {
                    buf[i2 * s1 + i1] = plane[i1 * h + i2];
                }
            }
            fft.process_with_scratch(buf, scratch);
            for i1 in 0..s1 {
                for i2 in 0..cols {
                    plane[i1 * h + i2] = buf[i2 * s1 + i1];
                }
            }
        },
    );
}

/// Shared mutable view for slab-parallel loops that touch disjoint elements.
#[derive(Clone, Copy)]
struct SlabPtr(*mut Complex64);
unsafe impl Send for SlabPtr {}
unsafe impl Sync for SlabPtr {}

/// Transform the first `cols` columns along storage axis 0 for the listed
/// `i1` slabs.
fn transform_outer(
    data: &mut [Complex64],
    [s0, s1, h]: [usize; 3],
    slabs: &[usize],
    cols: usize,
    fft: &dyn Fft<f64>,
) {
    let stride = s1 * h;
    assert_eq!(data.len(), s0 * stride);
    assert!(slabs.iter().all(|&i1| i1 < s1));
    let ptr = SlabPtr(data.as_mut_ptr());
    slabs.par_iter().for_each_init(
        || {
            (
                vec![Complex64::default(); s0 * cols],
                vec![Complex64::default(); fft.get_inplace_scratch_len()],
            )
        },
        |(buf, scratch), &i1| {
            let base = ptr;
            for i0 in 0..s0 {
                // SAFETY: `slabs` holds distinct indices, slab i1 owns elements
                // i0 * stride + i1 * h .. + h for every i0, and `data` outlives
                // the loop.
                let row = unsafe {
                    std::slice::from_raw_parts(base.0.add(i0 * stride + i1 * h), cols)
                };
                for (i2, v) in row.iter().enumerate() {
                    buf[i2 * s0 + i0] = *v;
                }
            }
            fft.process_with_scratch(buf, scratch);
            for i0 in 0..s0 {
                // SAFETY: as above.
                let row = unsafe {
                    std::slice::from_raw_parts_mut(base.0.add(i0 * stride + i1 * h), cols)
                };
                for (i2, v) in row.iter_mut().enumerate() {
                    *v = buf[i2 * s0 + i0];
                }
            }
        },
    );
}
