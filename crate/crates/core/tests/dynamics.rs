//! Time integration: convergence order, conservation and error handling.

mod common;

use std::f64::consts::PI;

use voigt::timestep::{self, StepperConfig};
use voigt::{diagnostics, models, Error, GridSpec, Scheme, SpectralField, VoigtParams};

fn bbm_grid() -> GridSpec {
    GridSpec::line(64, 2.0 * PI).unwrap()
}

#[test]
fn rk4_is_fourth_order_for_bbm() {
    let u0 = models::bbm_initial(bbm_grid()).unwrap();
    let orders = common::observed_orders(&u0, VoigtParams::bbm(0.2, 0.0).unwrap(), Scheme::Rk4, 0.1, 0.8, 3);
    for p in orders {
        assert!((p - 4.0).abs() < 0.2, "order {p}");
    }
}

#[test]
fn integrating_factor_rk4_is_fourth_order() {
    let u0 = models::bbm_initial(bbm_grid()).unwrap();
    let orders = common::observed_orders(&u0, VoigtParams::bbm(0.2, 0.05).unwrap(), Scheme::IfRk4, 0.1, 0.8, 3);
    for p in orders {
        assert!((p - 4.0).abs() < 0.2, "order {p}");
    }
}

#[test]
fn rk4_is_fourth_order_for_euler_voigt() {
    let u0 = models::taylor_green(GridSpec::cube(16, 1.0).unwrap()).unwrap();
    let orders = common::observed_orders(&u0, VoigtParams::euler_voigt(0.1).unwrap(), Scheme::Rk4, 0.1, 0.4, 2);
    for p in orders {
        assert!((p - 4.0).abs() < 0.2, "order {p}");
    }
}

#[test]
fn integrate_lands_on_sample_times_and_conserves() {
    let u0 = models::bbm_initial(GridSpec::line(256, 2.0 * PI).unwrap()).unwrap();
    let cfg = StepperConfig::new(1.0, 0.01, Scheme::Rk4).unwrap();
    let (s, _) = timestep::integrate(&u0, &VoigtParams::bbm(0.1, 0.0).unwrap(), &cfg, &mut ()).unwrap();
    assert_eq!(s.len(), 101);
    for (j, t) in s.times.iter().enumerate() {
        assert_eq!(*t, j as f64 * 0.01);
    }
    let eps = diagnostics::relative_energy_error(&s).unwrap();
    assert!(eps < 1e-12, "{eps:e}");
    assert!(s.running_sup_grad.windows(2).all(|w| w[1] >= w[0]));
    assert!(s.running_sup_grad.iter().zip(&s.grad_norm).all(|(q, g)| q >= g));
}

#[test]
fn viscous_energy_budget_closes() {
    let u0 = models::bbm_initial(GridSpec::line(256, 2.0 * PI).unwrap()).unwrap();
    let cfg = StepperConfig::new(1.0, 0.05, Scheme::IfRk4).unwrap();
    let (s, _) = timestep::integrate(&u0, &VoigtParams::bbm(0.1, 0.02).unwrap(), &cfg, &mut ()).unwrap();
    assert!(s.l2_energy.last().unwrap() < &s.l2_energy[0]);
    assert!(s.dissipation.last().unwrap() > &0.0);
    assert!(diagnostics::relative_energy_error(&s).unwrap() < 1e-11);
}

#[test]
fn euler_voigt_keeps_divergence_and_mean() {
    let u0 = models::taylor_green(GridSpec::cube(16, 1.0).unwrap()).unwrap();
    let cfg = StepperConfig::new(0.5, 0.1, Scheme::Rk4).unwrap();
    let mut worst = 0.0f64;
    let mut sink = |_: usize, _: f64, u: &SpectralField| {
        worst = worst.max(diagnostics::divergence_max(u)?);
        assert!(u.mean_abs() < 1e-16);
        Ok(())
    };
    let (s, _) = timestep::integrate(&u0, &VoigtParams::euler_voigt(0.25).unwrap(), &cfg, &mut sink).unwrap();
    assert!(worst < 1e-12);
    assert!(diagnostics::relative_energy_error(&s).unwrap() < 1e-12);
    assert!(s.vort_max.as_ref().unwrap().len() == s.len());
}

#[test]
fn integrate_rejects_bad_input() {
    let cfg = StepperConfig::new(0.1, 0.05, Scheme::Rk4).unwrap();
    let line = models::bbm_initial(bbm_grid()).unwrap();
    let ev = VoigtParams::euler_voigt(0.1).unwrap();
    assert!(matches!(timestep::integrate(&line, &ev, &cfg, &mut ()), Err(Error::WrongDimension { .. })));

    let grid = GridSpec::cube(8, 1.0).unwrap();
    let mut u = SpectralField::zeros(grid, 3);
    u.set_coeff(0, &[1, 0, 0], num_complex::Complex64::new(1.0, 0.0)).unwrap();
    assert!(matches!(timestep::integrate(&u, &ev, &cfg, &mut ()), Err(Error::NotDivergenceFree(_))));

    let if_cfg = StepperConfig::new(0.1, 0.05, Scheme::IfRk4).unwrap();
    assert!(timestep::integrate(&line, &VoigtParams::bbm(0.1, 0.0).unwrap(), &if_cfg, &mut ()).is_err());
}

#[test]
fn sink_errors_stop_the_run() {
    let u0 = models::bbm_initial(bbm_grid()).unwrap();
    let cfg = StepperConfig::new(0.5, 0.1, Scheme::Rk4).unwrap();
    let mut sink = |j: usize, _: f64, _: &SpectralField| if j == 2 { Err(Error::EmptySeries) } else { Ok(()) };
    let r = timestep::integrate(&u0, &VoigtParams::bbm(0.1, 0.0).unwrap(), &cfg, &mut sink);
    assert!(matches!(r, Err(Error::EmptySeries)));
}
