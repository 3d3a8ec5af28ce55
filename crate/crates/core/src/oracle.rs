//! Pre-shock inviscid Burgers solutions by the method of characteristics,
//! for `u0(x) = -a sin(x)` on a `2 pi` periodic interval.
//!
//! Along characteristics `x = xi + t u0(xi)` the solution is constant,
//! `u(x, t) = u0(xi)`, until they first cross at `T* = -1 / min u0'`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Blow-up time `T* = 1/a` of Burgers with `u0 = -a sin(x)`.
pub fn burgers_blowup_time(amplitude: f64) -> Result<f64> {
    if !(amplitude > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "blow-up needs amplitude > 0, got {amplitude}"
        )));
    }
    Ok(1.0 / amplitude)
}

/// Characteristic solver for a fixed time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicSolution {
    pub amplitude: f64,
    pub t: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Fraction of `T*` that `t` must stay below.
    pub margin: f64,
}

impl CharacteristicSolution {
    pub fn new(amplitude: f64, t: f64) -> Result<Self> {
        let sol = CharacteristicSolution {
            amplitude,
            t,
            tolerance: 1e-14,
            max_iterations: 100,
            margin: 1e-3,
        };
        sol.check_time()?;
        Ok(sol)
    }

    fn check_time(&self) -> Result<()> {
        if !(self.t >= 0.0) || !self.amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid time {}", self.t)));
        }
        if self.amplitude > 0.0 {
            let blowup = 1.0 / self.amplitude;
            if self.t >= blowup * (1.0 - self.margin) {
                return Err(Error::BeyondBlowup {
                    t: self.t,
                    blowup,
                });
            }
        } else if self.amplitude < 0.0 {
            return Err(Error::InvalidParameter("amplitude must be >= 0".into()));
        }
        Ok(())
    }

    pub fn u0(&self, xi: f64) -> f64 {
        -self.amplitude * xi.sin()
    }

    pub fn u0_prime(&self, xi: f64) -> f64 {
        -self.amplitude * xi.cos()
    }

    /// Foot `xi` of the characteristic through `(x, t)`.
    pub fn foot(&self, x: f64) -> Result<f64> {
        let (a, t) = (self.amplitude, self.t);
        let residual = |xi: f64| xi - t * a * xi.sin() - x;
        // The map xi -> xi + t u0(xi) is increasing for t < T*, and
        // |xi - x| <= t a, which brackets the root.
        let (mut lo, mut hi) = (x - t * a, x + t * a);
        let mut xi = x;
        for _ in 0..self.max_iterations {
            let r = residual(xi);
            if r.abs() <= self.tolerance * (1.0 + x.abs()) {
                return Ok(xi);
            }
            if r > 0.0 {
                hi = xi;
            } else {
                lo = xi;
            }
            let slope = 1.0 - t * a * xi.cos();
            let newton = xi - r / slope;
            xi = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * (1.0 + x.abs()) {
                return Ok(xi);
            }
        }
        Err(Error::NoConvergence { x, t })
    }

    /// Residual `|xi + t u0(xi) - x|` of an accepted foot.
    pub fn residual(&self, x: f64, xi: f64) -> f64 {
        (xi + self.t * self.u0(xi) - x).abs()
    }
}

/// `u(x, t)` from the characteristic solution.
pub fn burgers_eval(x: f64, sol: &CharacteristicSolution) -> Result<f64> {
    sol.check_time()?;
    Ok(sol.u0(sol.foot(x)?))
}

/// `||u_x(., t)||_L2` over one period, by trapezoidal quadrature in
/// characteristic coordinates: `int u0'(xi)^2 / (1 + t u0'(xi)) dxi`.
pub fn burgers_grad_norm(sol: &CharacteristicSolution, nodes: usize) -> Result<f64> {
    if sol.amplitude > 0.0 && sol.t >= 1.0 / sol.amplitude {
        return Err(Error::BeyondBlowup {
            t: sol.t,
            blowup: 1.0 / sol.amplitude,
        });
    }
    let nodes = nodes.max(4096);
    let h = 2.0 * PI / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|i| {
            let xi = -PI + i as f64 * h;
            let d = sol.u0_prime(xi);
            d * d / (1.0 + sol.t * d)
        })
        .sum();
    Ok((sum * h).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blowup_times() {
        assert_eq!(burgers_blowup_time(1.0).unwrap(), 1.0);
        assert_eq!(burgers_blowup_time(2.0).unwrap(), 0.5);
        assert!(burgers_blowup_time(0.0).is_err());
        assert!(burgers_blowup_time(-1.0).is_err());
        let ts: Vec<f64> = [1.0, 10.0, 1e3, 1e6]
            .iter()
            .map(|&a| burgers_blowup_time(a).unwrap())
            .collect();
        assert!(ts.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn initial_time_returns_initial_data() {
        let sol = CharacteristicSolution::new(1.0, 0.0).unwrap();
        for x in [-3.0, -1.0, 0.3, 2.9] {
            assert_eq!(burgers_eval(x, &sol).unwrap(), -f64::sin(x));
        }
    }

    #[test]
    fn origin_is_a_fixed_point() {
        for t in [0.1, 0.5, 0.9, 0.998] {
            let sol = CharacteristicSolution::new(1.0, t).unwrap();
            assert_eq!(burgers_eval(0.0, &sol).unwrap(), 0.0);
        }
    }

    #[test]
    fn residual_below_tolerance() {
        let sol = CharacteristicSolution::new(1.0, 0.99).unwrap();
        for i in 0..200 {
            let x = -PI + 2.0 * PI * i as f64 / 200.0;
            let xi = sol.foot(x).unwrap();
            assert!(sol.residual(x, xi) < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn rejects_times_past_blowup() {
        assert!(matches!(
            CharacteristicSolution::new(1.0, 1.0),
            Err(Error::BeyondBlowup { .. })
        ));
        assert!(CharacteristicSolution::new(1.0, 0.9995).is_err());
        let mut sol = CharacteristicSolution::new(1.0, 0.5).unwrap();
        sol.t = 1.2;
        assert!(burgers_grad_norm(&sol, 4096).is_err());
        assert!(burgers_eval(0.1, &sol).is_err());
    }

    #[test]
    fn grad_norm_at_zero_and_for_zero_data() {
        let sol = CharacteristicSolution::new(1.0, 0.0).unwrap();
        assert!((burgers_grad_norm(&sol, 4096).unwrap() - PI.sqrt()).abs() < 1e-14);
        let zero = CharacteristicSolution::new(0.0, 3.0).unwrap();
        assert_eq!(burgers_grad_norm(&zero, 4096).unwrap(), 0.0);
    }
}
