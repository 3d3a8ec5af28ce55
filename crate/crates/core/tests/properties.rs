//! Invariants checked over random band-limited fields.

mod common;

use common::*;
use proptest::prelude::*;
use voigt::blowup::{self, SlopeTable};
use voigt::{diagnostics, models, spectral, GridSpec, SpectralField, VoigtParams};

fn grid_3d() -> impl Strategy<Value = GridSpec> {
    (prop::sample::select(vec![8usize, 10, 16]), prop::sample::select(vec![1.0, 2.0, 0.5]))
        .prop_map(|(n, l)| GridSpec::new(&[n, 8, n], &[l, 1.0, 2.0 * l]).unwrap())
}

fn grid_1d() -> impl Strategy<Value = GridSpec> {
    (prop::sample::select(vec![16usize, 32, 64]), prop::sample::select(vec![1.0, 2.0 * std::f64::consts::PI]))
        .prop_map(|(n, l)| GridSpec::line(n, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_and_spectrum_sum(grid in grid_3d(), seed in any::<u64>()) {
        let f = random_dealiased(grid, 3, seed);
        let e = diagnostics::energy_l2(&f);
        let p = f.to_physical();
        let mean_sq: f64 = (0..3).map(|c| p.component(c).iter().map(|v| v * v).sum::<f64>()).sum::<f64>()
            / grid.physical_len() as f64;
        prop_assert!((e - grid.volume() * mean_sq).abs() <= 1e-13 * e);
        let s: f64 = diagnostics::spectrum(&f).iter().sum();
        prop_assert!((s - e).abs() <= 1e-13 * e);
    }

    #[test]
    fn round_trip_is_exact_to_rounding(grid in grid_3d(), seed in any::<u64>()) {
        let f = random_dealiased(grid, 2, seed);
        let back = SpectralField::to_spectral(&f.to_physical());
        prop_assert!(max_diff(&back, &f) < 1e-14 * f.max_abs().max(1.0));
    }

    #[test]
    fn dealias_and_projection_are_idempotent(grid in grid_3d(), seed in any::<u64>()) {
        let f = random_dealiased(grid, 3, seed);
        let once = spectral::dealias(&f);
        prop_assert_eq!(spectral::dealias(&once), once);
        let p = spectral::leray_project(&f).unwrap();
        let pp = spectral::leray_project(&p).unwrap();
        prop_assert!(max_diff(&pp, &p) <= 4.0 * f64::EPSILON * p.max_abs());
    }

    #[test]
    fn derivative_commutes_with_helmholtz(grid in grid_3d(), seed in any::<u64>(), alpha in 0.0..0.5f64, axis in 0usize..3) {
        let f = random_dealiased(grid, 1, seed);
        let a = spectral::derivative(&spectral::helmholtz_invert(&f, alpha).unwrap(), axis).unwrap();
        let b = spectral::helmholtz_invert(&spectral::derivative(&f, axis).unwrap(), alpha).unwrap();
        prop_assert!(max_diff(&a, &b) <= 4.0 * f64::EPSILON * a.max_abs());
    }

    #[test]
    fn curl_norm_equals_gradient_norm_for_solenoidal_fields(grid in grid_3d(), seed in any::<u64>()) {
        let u = random_solenoidal(grid, seed);
        let w = diagnostics::energy_l2(&spectral::curl(&u).unwrap());
        let g = diagnostics::grad_norm_sq(&u);
        prop_assert!((w - g).abs() <= 1e-12 * g);
        prop_assert!(models::divergence_bound(&u).unwrap() < 1e-13);
    }

    #[test]
    fn euler_voigt_tendency_conserves_alpha_energy(grid in grid_3d(), seed in any::<u64>(), alpha in 0.01..0.3f64) {
        let u = random_solenoidal(grid, seed);
        let t = models::ev3d_rhs(&u, &VoigtParams::euler_voigt(alpha).unwrap()).unwrap();
        let rate = t.inner(&u) + alpha * alpha * grad_inner(&t, &u);
        let scale = (diagnostics::energy_l2(&u) + alpha * alpha * diagnostics::grad_norm_sq(&u))
            * (diagnostics::energy_l2(&t) + alpha * alpha * diagnostics::grad_norm_sq(&t)).sqrt();
        prop_assert!(rate.abs() <= 1e-12 * scale, "rate {rate:e} scale {scale:e}");
        prop_assert!(models::divergence_bound(&t).unwrap() < 1e-12 * t.max_abs().max(1.0));
        prop_assert_eq!(spectral::dealias(&t), t);
    }

    #[test]
    fn bbm_tendency_balances_dissipation(grid in grid_1d(), seed in any::<u64>(), alpha in 0.01..0.3f64, nu in prop::sample::select(vec![0.0, 1e-3, 0.05])) {
        let u = random_dealiased(grid, 1, seed);
        let t = models::bbm_rhs(&u, &VoigtParams::bbm(alpha, nu).unwrap()).unwrap();
        let rate = t.inner(&u) + alpha * alpha * grad_inner(&t, &u);
        let expected = -nu * diagnostics::grad_norm_sq(&u);
        let scale = (diagnostics::energy_l2(&u) + alpha * alpha * diagnostics::grad_norm_sq(&u))
            * (diagnostics::energy_l2(&t) + alpha * alpha * diagnostics::grad_norm_sq(&t)).sqrt()
            + expected.abs();
        prop_assert!((rate - expected).abs() <= 1e-12 * scale, "{rate:e} vs {expected:e}");
    }

    #[test]
    fn slopes_ignore_a_common_scale_of_q(
        q in prop::collection::vec(prop::collection::vec(0.1..100.0f64, 4), 3),
        c in 0.01..100.0f64,
    ) {
        let alphas = vec![0.01, 0.02, 0.04];
        let t_grid = vec![0.1, 0.2, 0.3, 0.4];
        let a = blowup::loglog_slopes(SlopeTable::new(alphas.clone(), t_grid.clone(), q.clone()).unwrap()).unwrap();
        let scaled: Vec<Vec<f64>> = q.iter().map(|r| r.iter().map(|v| v * c).collect()).collect();
        let b = blowup::loglog_slopes(SlopeTable::new(alphas, t_grid, scaled).unwrap()).unwrap();
        for (x, y) in a.slopes.iter().flatten().zip(b.slopes.iter().flatten()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn verdict_is_monotone_in_threshold(
        p in prop::collection::vec(-3.0..1.0f64, 1..20),
        lo in -3.0..1.0f64,
        gap in 0.0..2.0f64,
    ) {
        let t_grid: Vec<f64> = (0..p.len()).map(|j| j as f64 * 0.1).collect();
        let q = vec![vec![1.0; p.len()], p.iter().map(|s| 2f64.powf(*s)).collect()];
        let table = blowup::loglog_slopes(SlopeTable::new(vec![1.0, 2.0], t_grid, q).unwrap()).unwrap();
        let strict = blowup::verdict(&table, lo);
        let loose = blowup::verdict(&table, lo + gap);
        if strict.blow_up_indicated {
            prop_assert!(loose.blow_up_indicated);
            prop_assert!(loose.earliest_t.unwrap() <= strict.earliest_t.unwrap());
        }
        prop_assert_eq!(strict.min_slope, loose.min_slope);
    }
}
