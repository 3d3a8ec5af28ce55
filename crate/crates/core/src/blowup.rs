//! Supremum tables `Q(alpha, T)`, log-log slopes in `alpha`, and the
//! resulting blow-up verdicts.
//!
//! If `Q(alpha, T) = max_{t <= T} ||grad u^alpha(t)||` scales like
//! `alpha^p` as `alpha -> 0` with `p <= -1`, then `alpha Q` stays bounded
//! away from zero and the limiting (alpha = 0) equation must be singular by
//! time `T`. The slope between the two smallest `alpha` is the estimate of `p`.

use crate::diagnostics::DiagnosticSeries;
use crate::error::{Error, Result};

/// Default critical slope.
pub const CRITICAL_SLOPE: f64 = -1.0;

const TIME_TOL: f64 = 1e-9;

/// `Q(T_j) = max_{t <= T_j} ||grad u(t)||`, using the per-step running supremum.
pub fn running_sup(series: &DiagnosticSeries, t_grid: &[f64]) -> Result<Vec<f64>> {
    let last = *series.times.last().ok_or(Error::EmptySeries)?;
    t_grid
        .iter()
        .map(|&horizon| {
            if horizon > last + TIME_TOL {
                return Err(Error::HorizonOutOfRange { horizon, last });
            }
            let upto = series
                .times
                .iter()
                .take_while(|&&t| t <= horizon + TIME_TOL)
                .count();
            Ok(series.running_sup_grad[..upto]
                .iter()
                .fold(0.0, |a: f64, &b| a.max(b)))
        })
        .collect()
}

/// Uniform horizon grid `start, start + step, ..., end` (inclusive).
pub fn horizon_grid(start: f64, step: f64, end: f64) -> Vec<f64> {
    let count = ((end - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|j| start + j as f64 * step).collect()
}

/// Q table and pairwise log-log slopes over a sorted list of `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeTable {
    pub alphas: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// `q[i][j] = Q(alphas[i], t_grid[j])`
    pub q: Vec<Vec<f64>>,
    /// `slopes[i][j]`: slope between `alphas[i]` and `alphas[i + 1]` at `t_grid[j]`.
    pub slopes: Vec<Vec<f64>>,
    /// Slope of the smallest-alpha pair per horizon (empty with fewer than two alphas).
    pub p_estimate: Vec<f64>,
}

impl SlopeTable {
    /// Build an unfilled table; `alphas` must be strictly increasing and positive.
    pub fn new(alphas: Vec<f64>, t_grid: Vec<f64>, q: Vec<Vec<f64>>) -> Result<Self> {
        if alphas.iter().any(|&a| !(a > 0.0)) || alphas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "alphas must be positive and strictly increasing".into(),
            ));
        }
        if q.len() != alphas.len() || q.iter().any(|row| row.len() != t_grid.len()) {
            return Err(Error::InvalidParameter("Q table shape mismatch".into()));
        }
        Ok(SlopeTable {
            alphas,
            t_grid,
            q,
            slopes: Vec::new(),
            p_estimate: Vec::new(),
        })
    }

    /// Tabulate `Q` from one series per `alpha` (any order).
    pub fn from_series(series: &[&DiagnosticSeries], t_grid: &[f64]) -> Result<Self> {
        let mut sorted: Vec<&&DiagnosticSeries> = series.iter().collect();
        sorted.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
        let q = sorted
            .iter()
            .map(|s| running_sup(s, t_grid))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            sorted.iter().map(|s| s.alpha).collect(),
            t_grid.to_vec(),
            q,
        )
    }

    /// Fill `slopes` and `p_estimate`.
    pub fn fill_slopes(&mut self) -> Result<()> {
        for (i, row) in self.q.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(v > 0.0) {
                    return Err(Error::NonPositiveQ {
                        value: v,
                        alpha: self.alphas[i],
                        horizon: self.t_grid[j],
                    });
                }
            }
        }
        self.slopes = self
            .alphas
            .windows(2)
            .zip(self.q.windows(2))
            .map(|(a, q)| {
                let dl = a[1].ln() - a[0].ln();
                q[0].iter()
                    .zip(&q[1])
                    .map(|(lo, hi)| (hi.ln() - lo.ln()) / dl)
                    .collect()
            })
            .collect();
        self.p_estimate = self.slopes.first().cloned().unwrap_or_default();
        Ok(())
    }

    /// Least-squares slope of `ln Q` against `ln alpha` over the `k` smallest
    /// alphas, per horizon. `k = 2` reproduces `p_estimate`.
    pub fn fit_exponent(&self, k: usize) -> Result<Vec<f64>> {
        if k < 2 || k > self.alphas.len() {
            return Err(Error::InvalidParameter(format!(
                "fit needs 2 <= k <= {}, got {k}",
                self.alphas.len()
            )));
        }
        let x: Vec<f64> = self.alphas[..k].iter().map(|a| a.ln()).collect();
        let xm = x.iter().sum::<f64>() / k as f64;
        let sxx: f64 = x.iter().map(|v| (v - xm).powi(2)).sum();
        Ok((0..self.t_grid.len())
            .map(|j| {
                let y: Vec<f64> = self.q[..k].iter().map(|row| row[j].ln()).collect();
                let ym = y.iter().sum::<f64>() / k as f64;
                x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum::<f64>() / sxx
            })
            .collect())
    }
}

/// Free-function form of [`SlopeTable::fill_slopes`].
pub fn loglog_slopes(mut table: SlopeTable) -> Result<SlopeTable> {
    table.fill_slopes()?;
    Ok(table)
}

/// Outcome of scanning `p_estimate` against a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub blow_up_indicated: bool,
    /// First horizon with `p_estimate <= threshold`.
    pub earliest_t: Option<f64>,
    /// Minimum of `p_estimate` over horizons (absent with fewer than two alphas).
    pub min_slope: Option<f64>,
    /// Horizon at which `min_slope` occurs.
    pub min_slope_t: Option<f64>,
}

pub fn verdict(table: &SlopeTable, threshold: f64) -> Verdict {
    let earliest_t = table
        .p_estimate
        .iter()
        .zip(&table.t_grid)
        .find(|(p, _)| **p <= threshold)
        .map(|(_, t)| *t);
    let min = table
        .p_estimate
        .iter()
        .zip(&table.t_grid)
        .fold(None, |best: Option<(f64, f64)>, (&p, &t)| match best {
            Some((bp, _)) if bp <= p => best,
            _ => Some((p, t)),
        });
    Verdict {
        blow_up_indicated: earliest_t.is_some(),
        earliest_t,
        min_slope: min.map(|m| m.0),
        min_slope_t: min.map(|m| m.1),
    }
}

/// How `S_min` is measured for a pair of runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SminMode {
    /// Log-log slope of `Q` between the two alphas, minimized over horizons.
    LogLog,
    /// Raw difference quotient `(||u^a2_x(t)|| - ||u^a1_x(t)||) / (a2 - a1)`,
    /// minimized over sample times in `(0, T]`.
    Literal,
}

impl SminMode {
    pub fn tag(self) -> &'static str {
        match self {
            SminMode::LogLog => "loglog",
            SminMode::Literal => "literal",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "loglog" => Some(SminMode::LogLog),
            "literal" => Some(SminMode::Literal),
            _ => None,
        }
    }
}

/// `S_min` for one viscosity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SminRow {
    pub nu: f64,
    pub s_min: f64,
    /// Horizon (log-log) or sample time (literal) of the minimum.
    pub at_t: f64,
}

/// `S_min` for two runs that differ only in `alpha`.
pub fn s_min(
    lo: &DiagnosticSeries,
    hi: &DiagnosticSeries,
    horizons: &[f64],
    mode: SminMode,
) -> Result<SminRow> {
    if lo.alpha == hi.alpha {
        return Err(Error::InvalidParameter("S_min needs two distinct alphas".into()));
    }
    if lo.times.len() != hi.times.len()
        || lo.times.iter().zip(&hi.times).any(|(a, b)| (a - b).abs() > TIME_TOL)
    {
        return Err(Error::MismatchedTimeGrids);
    }
    let (lo, hi) = if lo.alpha < hi.alpha { (lo, hi) } else { (hi, lo) };
    let (s, t) = match mode {
        SminMode::LogLog => {
            let mut table = SlopeTable::from_series(&[lo, hi], horizons)?;
            table.fill_slopes()?;
            let v = verdict(&table, CRITICAL_SLOPE);
            (v.min_slope.unwrap_or(f64::NAN), v.min_slope_t.unwrap_or(f64::NAN))
        }
        SminMode::Literal => {
            let t_max = horizons.last().copied().unwrap_or(f64::INFINITY);
            lo.times
                .iter()
                .enumerate()
                .filter(|(_, &t)| t > 0.0 && t <= t_max + TIME_TOL)
                .map(|(i, &t)| ((hi.grad_norm[i] - lo.grad_norm[i]) / (hi.alpha - lo.alpha), t))
                .fold((f64::INFINITY, f64::NAN), |best, cur| if cur.0 < best.0 { cur } else { best })
        }
    };
    Ok(SminRow {
        nu: lo.nu,
        s_min: s,
        at_t: t,
    })
}

/// `S_min(nu)` over `(nu, lo-alpha run, hi-alpha run)` triples, sorted by `nu`.
pub fn s_min_of_nu(
    runs: &[(f64, &DiagnosticSeries, &DiagnosticSeries)],
    horizons: &[f64],
    mode: SminMode,
) -> Result<Vec<SminRow>> {
    let mut rows = runs
        .iter()
        .map(|(nu, lo, hi)| {
            let mut row = s_min(lo, hi, horizons, mode)?;
            row.nu = *nu;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.nu.total_cmp(&b.nu));
    Ok(rows)
}

/// Viscosity at which `S_min` crosses `level`, interpolated linearly in
/// `ln nu` between the bracketing rows. Rows must be sorted by `nu`; rows
/// with `nu <= 0` are ignored.
pub fn crossing(rows: &[SminRow], level: f64) -> Option<f64> {
    let rows: Vec<SminRow> = rows.iter().copied().filter(|r| r.nu > 0.0).collect();
    rows.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        let (da, db) = (a.s_min - level, b.s_min - level);
        if da == 0.0 {
            return Some(a.nu);
        }
        if da * db < 0.0 || db == 0.0 {
            let f = da / (da - db);
            Some((a.nu.ln() + f * (b.nu.ln() - a.nu.ln())).exp())
        } else {
            None
        }
    })
}
