//! Helpers shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use voigt::{spectral, GridSpec, PhysicalField, SpectralField};

/// Random real field, transformed and truncated to the 2/3-rule band, with
/// the mean removed.
pub fn random_dealiased(grid: GridSpec, components: usize, seed: u64) -> SpectralField {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let comps = (0..components)
        .map(|_| (0..grid.physical_len()).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let phys = PhysicalField::from_samples(grid, comps).unwrap();
    let mut f = spectral::dealias(&SpectralField::to_spectral(&phys));
    let zero = vec![0; grid.dim()];
    for c in 0..components {
        f.set_coeff(c, &zero, Complex64::default()).unwrap();
    }
    f
}

/// Random dealiased, zero-mean, divergence-free 3D vector field.
pub fn random_solenoidal(grid: GridSpec, seed: u64) -> SpectralField {
    spectral::leray_project(&random_dealiased(grid, 3, seed)).unwrap()
}

/// `sum_j <d_j a, d_j b>`.
pub fn grad_inner(a: &SpectralField, b: &SpectralField) -> f64 {
    (0..a.grid().dim())
        .map(|j| {
            spectral::derivative(a, j)
                .unwrap()
                .inner(&spectral::derivative(b, j).unwrap())
        })
        .sum()
}

pub fn max_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    let mut d = a.clone();
    d.axpy(-1.0, b);
    d.max_abs()
}

/// L2 distance between two sample vectors on a grid with spacing `dx`.
pub fn l2_distance(a: &[f64], b: &[f64], dx: f64) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() * dx).sqrt()
}

/// Integrate with a fixed step using `Stepper` directly.
pub fn fixed_step(
    u0: &SpectralField,
    params: voigt::VoigtParams,
    scheme: voigt::Scheme,
    dt: f64,
    t_end: f64,
) -> SpectralField {
    let stepper = voigt::timestep::Stepper::new(params, scheme, u0.grid()).unwrap();
    let steps = (t_end / dt).round() as usize;
    let mut s = voigt::timestep::Augmented { field: u0.clone(), acc: 0.0 };
    for _ in 0..steps {
        s = stepper.step(&s, dt).unwrap();
    }
    s.field
}

/// Observed orders `log2(e(dt) / e(dt/2))` for halving steps starting at
/// `dt0`, measured against a run with a much smaller step.
pub fn observed_orders(
    u0: &SpectralField,
    params: voigt::VoigtParams,
    scheme: voigt::Scheme,
    dt0: f64,
    t_end: f64,
    levels: usize,
) -> Vec<f64> {
    let reference = fixed_step(u0, params, scheme, dt0 / 2f64.powi(levels as i32 + 3), t_end);
    let errors: Vec<f64> = (0..levels)
        .map(|l| max_diff(&fixed_step(u0, params, scheme, dt0 / 2f64.powi(l as i32), t_end), &reference))
        .collect();
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
