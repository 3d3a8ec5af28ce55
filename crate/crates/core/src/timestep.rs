//! RK4 and integrating-factor RK4 stepping under an advective CFL limit.

use crate::diagnostics::{self, DiagnosticSeries};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::models::{self, Model, VoigtParams};

/// Time-stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    /// Integrating-factor RK4; the viscous term is integrated exactly.
    IfRk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub cfl: f64,
    pub dt_max: f64,
    pub t_end: f64,
    pub sample_interval: f64,
    pub scheme: Scheme,
}

impl StepperConfig {
    /// Defaults: `cfl = 0.5`, `dt_max = sample_interval / 10`.
    pub fn new(t_end: f64, sample_interval: f64, scheme: Scheme) -> Result<Self> {
        let cfg = StepperConfig {
            cfl: 0.5,
            dt_max: sample_interval / 10.0,
            t_end,
            sample_interval,
            scheme,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt_max must be positive, got {}", self.dt_max)));
        }
        if !(self.sample_interval > 0.0 && self.sample_interval.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sample_interval must be positive, got {}",
                self.sample_interval
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        let ratio = self.t_end / self.sample_interval;
        if (ratio - ratio.round()).abs() * self.sample_interval > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "t_end = {} is not a multiple of sample_interval = {}",
                self.t_end, self.sample_interval
            )));
        }
        Ok(())
    }

    /// Number of sample intervals up to `t_end`.
    pub fn samples(&self) -> usize {
        (self.t_end / self.sample_interval).round() as usize
    }
}

/// `dt = min(dt_max, cfl * dx / max|u|)`.
pub fn cfl_dt(u: &SpectralField, cfg: &StepperConfig) -> f64 {
    let speed = u.to_physical().max_magnitude();
    let dx = u.grid().min_spacing();
    if speed > 0.0 {
        cfg.dt_max.min(cfg.cfl * dx / speed)
    } else {
        cfg.dt_max
    }
}

/// A vector-space state that RK stages can combine.
pub trait StateVector: Clone {
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
}

impl StateVector for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl StateVector for SpectralField {
    fn axpy(&mut self, a: f64, x: &Self) {
        SpectralField::axpy(self, a, x);
    }
}

/// A field with a scalar accumulator advanced by the same tableau
/// (used for the viscous dissipation integral).
#[derive(Debug, Clone, PartialEq)]
pub struct Augmented {
    pub field: SpectralField,
    pub acc: f64,
}

impl StateVector for Augmented {
    fn axpy(&mut self, a: f64, x: &Self) {
        self.field.axpy(a, &x.field);
        self.acc += a * x.acc;
    }
}

/// One classical RK4 step.
pub fn rk4_step<S: StateVector>(u: &S, mut rhs: impl FnMut(&S) -> S, dt: f64) -> S {
    let stage = |base: &S, a: f64, k: &S| {
        let mut s = base.clone();
        s.axpy(a, k);
        s
    };
    let k1 = rhs(u);
    let k2 = rhs(&stage(u, 0.5 * dt, &k1));
    let k3 = rhs(&stage(u, 0.5 * dt, &k2));
    let k4 = rhs(&stage(u, dt, &k3));
    let mut out = u.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    out
}

fn apply_diag(f: &SpectralField, mult: &[f64]) -> SpectralField {
    let mut out = f.clone();
    for comp in out.storage_mut() {
        for (c, m) in comp.iter_mut().zip(mult) {
            *c *= *m;
        }
    }
    out
}

/// One integrating-factor RK4 (Lawson) step for `du/dt = L u + N(u)` with a
/// diagonal, real linear symbol `L`. `nonlinear` returns `N(u)` together with
/// the rate of the scalar accumulator at `u`.
pub fn ifrk4_step(
    u: &Augmented,
    symbol: &[f64],
    dt: f64,
    mut nonlinear: impl FnMut(&SpectralField) -> (SpectralField, f64),
) -> Result<Augmented> {
    if symbol.iter().all(|&l| l == 0.0) {
        return Err(Error::InvalidParameter(
            "integrating factor needs a nonzero linear symbol; use rk4_step".into(),
        ));
    }
    let half: Vec<f64> = symbol.iter().map(|l| (l * 0.5 * dt).exp()).collect();
    let full: Vec<f64> = symbol.iter().map(|l| (l * dt).exp()).collect();

    let (k1, r1) = nonlinear(&u.field);
    let mut a2 = u.field.clone();
    a2.axpy(0.5 * dt, &k1);
    let a2 = apply_diag(&a2, &half);
    let (k2, r2) = nonlinear(&a2);
    let eu_half = apply_diag(&u.field, &half);
    let mut a3 = eu_half.clone();
    a3.axpy(0.5 * dt, &k2);
    let (k3, r3) = nonlinear(&a3);
    let eu_full = apply_diag(&u.field, &full);
    let mut a4 = eu_full.clone();
    a4.axpy(dt, &apply_diag(&k3, &half));
    let (k4, r4) = nonlinear(&a4);

    let mut mid = k2;
    mid.axpy(1.0, &k3);
    let mut out = eu_full;
    out.axpy(dt / 6.0, &apply_diag(&k1, &full));
    out.axpy(dt / 3.0, &apply_diag(&mid, &half));
    out.axpy(dt / 6.0, &k4);
    Ok(Augmented {
        field: out,
        acc: u.acc + dt / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4),
    })
}

/// Receives the state at every sample time.
pub trait SampleSink {
    fn on_sample(&mut self, index: usize, t: f64, u: &SpectralField) -> Result<()>;
}

impl SampleSink for () {
    fn on_sample(&mut self, _: usize, _: f64, _: &SpectralField) -> Result<()> {
        Ok(())
    }
}

impl<F: FnMut(usize, f64, &SpectralField) -> Result<()>> SampleSink for F {
    fn on_sample(&mut self, index: usize, t: f64, u: &SpectralField) -> Result<()> {
        self(index, t, u)
    }
}

/// Advance a single step of the model's semi-discrete system.
pub struct Stepper {
    params: VoigtParams,
    scheme: Scheme,
    symbol: Option<Vec<f64>>,
}

impl Stepper {
    pub fn new(params: VoigtParams, scheme: Scheme, grid: &crate::grid::GridSpec) -> Result<Self> {
        let symbol = match (params.model, scheme) {
            (Model::Bbm1D, Scheme::IfRk4) => {
                if params.nu == 0.0 {
                    return Err(Error::InvalidParameter(
                        "integrating-factor stepping needs nu > 0".into(),
                    ));
                }
                Some(models::bbm_linear_symbol(grid, params.alpha, params.nu))
            }
            (Model::EulerVoigt3D, Scheme::IfRk4) => {
                return Err(Error::InvalidParameter(
                    "Euler-Voigt runs are inviscid; use RK4".into(),
                ))
            }
            _ => None,
        };
        Ok(Stepper {
            params,
            scheme,
            symbol,
        })
    }

    fn dissipation_rate(&self, u: &SpectralField) -> f64 {
        if self.params.nu > 0.0 {
            2.0 * self.params.nu * diagnostics::grad_norm_sq(u)
        } else {
            0.0
        }
    }

    fn tendency(&self, u: &SpectralField) -> SpectralField {
        match self.params.model {
            Model::EulerVoigt3D => models::ev3d_tendency(u, self.params.alpha),
            Model::Bbm1D => match self.scheme {
                Scheme::Rk4 => models::bbm_rhs(u, &self.params).expect("1D state"),
                Scheme::IfRk4 => models::bbm_advective(u, self.params.alpha).expect("1D state"),
            },
        }
    }

    pub fn step(&self, state: &Augmented, dt: f64) -> Result<Augmented> {
        match &self.symbol {
            Some(symbol) => ifrk4_step(state, symbol, dt, |f| {
                (self.tendency(f), self.dissipation_rate(f))
            }),
            None => Ok(rk4_step(
                state,
                |s: &Augmented| Augmented {
                    field: self.tendency(&s.field),
                    acc: self.dissipation_rate(&s.field),
                },
                dt,
            )),
        }
    }
}

/// Integrate from `t = 0` to `cfg.t_end`, recording diagnostics at every
/// multiple of `cfg.sample_interval`. Returns the series and the final state.
pub fn integrate(
    u0: &SpectralField,
    params: &VoigtParams,
    cfg: &StepperConfig,
    sink: &mut dyn SampleSink,
) -> Result<(DiagnosticSeries, SpectralField)> {
    cfg.validate()?;
    if u0.grid().dim() != params.model.dim() {
        return Err(Error::WrongDimension {
            expected: params.model.dim(),
            found: u0.grid().dim(),
        });
    }
    if params.model == Model::EulerVoigt3D {
        let div = models::divergence_bound(u0)?;
        if div > models::DIVERGENCE_TOLERANCE {
            return Err(Error::NotDivergenceFree(div));
        }
    }
    let stepper = Stepper::new(*params, cfg.scheme, u0.grid())?;
    let three_d = params.model == Model::EulerVoigt3D;
    let mut series = DiagnosticSeries::new(params.alpha, params.nu, three_d);
    let mut state = Augmented {
        field: u0.clone(),
        acc: 0.0,
    };
    let mut t = 0.0;
    let first = DiagnosticSeries::measure(&state.field, 0.0, params.alpha, 0.0)?;
    series.push(first, first.grad_norm);
    sink.on_sample(0, 0.0, &state.field)?;

    for j in 1..=cfg.samples() {
        let target = j as f64 * cfg.sample_interval;
        let mut step_sup: f64 = 0.0;
        loop {
            let mut dt = cfl_dt(&state.field, cfg);
            let landing = t + dt * (1.0 + 1e-9) >= target;
            if landing {
                dt = target - t;
            }
            state = stepper.step(&state, dt)?;
            t = if landing { target } else { t + dt };
            if !state.field.is_finite() || !state.acc.is_finite() {
                return Err(Error::NonFinite { t });
            }
            step_sup = step_sup.max(diagnostics::grad_norm_sq(&state.field).sqrt());
            if landing {
                break;
            }
        }
        let row = DiagnosticSeries::measure(&state.field, t, params.alpha, state.acc)?;
        series.push(row, step_sup);
        sink.on_sample(j, t, &state.field)?;
    }
    Ok((series, state.field))
}
