//! Line-oriented `key = value` run configuration.
//!
//! ```text
//! # inviscid BBM sweep
//! model = bbm
//! n = 8192
//! alpha = 128/8192, 138/8192, 192/8192
//! t_end = 1.25
//! sample_interval = 0.01
//! horizons = 0.65:0.01:1.25
//! ```
//!
//! Numbers may be written as exact rationals (`12/1024`); lists are
//! comma-separated; `horizons` also accepts `start:step:end`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::blowup::{self, SminMode};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::io::fmt;
use crate::models::Model;
use crate::timestep::{Scheme, StepperConfig};

/// Every key the parser accepts.
pub const KEYS: &[&str] = &[
    "model",
    "n",
    "alpha",
    "nu",
    "cfl",
    "dt_max",
    "t_end",
    "sample_interval",
    "horizons",
    "output",
    "checkpoint_every",
    "spectrum_every",
    "s_min_mode",
    "s_min_alphas",
    "threshold",
    "fit_k",
];

const REQUIRED: &[&str] = &["model", "n", "alpha", "t_end", "sample_interval"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub n: usize,
    pub alphas: Vec<f64>,
    pub nus: Vec<f64>,
    pub cfl: f64,
    /// Defaults to `sample_interval / 10`.
    pub dt_max: Option<f64>,
    pub t_end: f64,
    pub sample_interval: f64,
    pub horizons: Vec<f64>,
    pub output: PathBuf,
    /// Write a checkpoint every this many samples (0 = off).
    pub checkpoint_every: usize,
    /// Write a spectrum every this many samples (0 = off).
    pub spectrum_every: usize,
    pub s_min_mode: SminMode,
    /// Alpha pair for `S_min`; defaults to the two smallest alphas.
    pub s_min_alphas: Option<(f64, f64)>,
    pub threshold: f64,
    /// Number of smallest alphas in the least-squares exponent fit.
    pub fit_k: usize,
}

/// Evaluate a number written as a decimal or as `p/q`.
pub fn parse_number(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("malformed rational `{text}`"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("malformed rational `{text}`"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in `{text}`"));
            }
            p / q
        }
        None => text.parse().map_err(|_| format!("malformed number `{text}`"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("non-finite number `{text}`"))
    }
}

fn parse_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_number)
        .collect()
}

fn parse_horizons(text: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, end] => {
            let (start, step, end) = (parse_number(start)?, parse_number(step)?, parse_number(end)?);
            if !(step > 0.0) || end < start {
                return Err(format!("bad horizon range `{text}`"));
            }
            Ok(blowup::horizon_grid(start, step, end))
        }
        [_] => parse_list(text),
        _ => Err(format!("bad horizon range `{text}`")),
    }
}

fn parse_count(text: &str) -> std::result::Result<usize, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("expected a non-negative integer, got `{}`", text.trim()))
}

impl RunConfig {
    /// Parse and validate configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_overrides(text, &[])
    }

    /// Parse configuration text, then replace or add the given `(key, value)`
    /// pairs (reported as line 0 in errors) before validating.
    pub fn parse_with_overrides(text: &str, overrides: &[(&str, String)]) -> Result<Self> {
        let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("expected `key = value`, got `{line}`"),
                });
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("unknown key `{key}`"),
                });
            }
            if entries
                .insert(key.to_string(), (line_no, value.trim().to_string()))
                .is_some()
            {
                return Err(Error::Config {
                    line: line_no,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        for (key, value) in overrides {
            if !KEYS.contains(key) {
                return Err(Error::Config {
                    line: 0,
                    msg: format!("unknown key `{key}`"),
                });
            }
            entries.insert(key.to_string(), (0, value.trim().to_string()));
        }
        for key in REQUIRED {
            if !entries.contains_key(*key) {
                return Err(Error::MissingKey(key));
            }
        }
        let model_text = &entries["model"].1;
        let model = Model::from_tag(model_text).ok_or_else(|| Error::Config {
            line: entries["model"].0,
            msg: format!("unknown model `{model_text}` (expected ev3d or bbm)"),
        })?;
        let mut cfg = RunConfig::defaults(model);
        for (key, (line, value)) in &entries {
            cfg.apply_at(key, value, *line)?;
        }
        if !entries.contains_key("horizons") {
            // The model's default horizons, restricted to the run length.
            let end = cfg.t_end;
            cfg.horizons.retain(|&h| h <= end + 1e-9);
            if cfg.horizons.is_empty() && cfg.sample_interval > 0.0 {
                cfg.horizons = blowup::horizon_grid(0.0, cfg.sample_interval, end);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults for everything but the required keys.
    pub fn defaults(model: Model) -> Self {
        let horizons = match model {
            Model::EulerVoigt3D => blowup::horizon_grid(0.0, 0.1, 5.0),
            Model::Bbm1D => blowup::horizon_grid(0.65, 0.01, 1.25),
        };
        RunConfig {
            model,
            n: 0,
            alphas: Vec::new(),
            nus: vec![0.0],
            cfl: 0.5,
            dt_max: None,
            t_end: 0.0,
            sample_interval: 0.0,
            horizons,
            output: PathBuf::from("out"),
            checkpoint_every: 0,
            spectrum_every: 0,
            s_min_mode: SminMode::LogLog,
            s_min_alphas: None,
            threshold: blowup::CRITICAL_SLOPE,
            fit_k: 2,
        }
    }

    /// Override one key (as from a command-line flag). Call
    /// [`RunConfig::validate`] afterwards.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config {
                line: 0,
                msg: format!("unknown key `{key}`"),
            });
        }
        self.apply_at(key, value, 0)
    }

    fn apply_at(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let err = |msg: String| Error::Config { line, msg: format!("{key}: {msg}") };
        match key {
            "model" => {
                self.model = Model::from_tag(value)
                    .ok_or_else(|| err(format!("unknown model `{value}`")))?;
            }
            "n" => self.n = parse_count(value).map_err(err)?,
            "alpha" => self.alphas = parse_list(value).map_err(err)?,
            "nu" => self.nus = parse_list(value).map_err(err)?,
            "cfl" => self.cfl = parse_number(value).map_err(err)?,
            "dt_max" => self.dt_max = Some(parse_number(value).map_err(err)?),
            "t_end" => self.t_end = parse_number(value).map_err(err)?,
            "sample_interval" => self.sample_interval = parse_number(value).map_err(err)?,
            "horizons" => self.horizons = parse_horizons(value).map_err(err)?,
            "output" => self.output = PathBuf::from(value),
            "checkpoint_every" => self.checkpoint_every = parse_count(value).map_err(err)?,
            "spectrum_every" => self.spectrum_every = parse_count(value).map_err(err)?,
            "s_min_mode" => {
                self.s_min_mode = SminMode::from_tag(value)
                    .ok_or_else(|| err(format!("expected loglog or literal, got `{value}`")))?;
            }
            "s_min_alphas" => {
                let pair = parse_list(value).map_err(err)?;
                let [a, b] = pair[..] else {
                    return Err(err("expected two alphas".into()));
                };
                self.s_min_alphas = Some((a.min(b), a.max(b)));
            }
            "threshold" => self.threshold = parse_number(value).map_err(err)?,
            "fit_k" => self.fit_k = parse_count(value).map_err(err)?,
            _ => return Err(err("unknown key".into())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        self.grid()?;
        if self.alphas.is_empty() {
            return bad("alpha list is empty".into());
        }
        if self.alphas.iter().any(|&a| !(a > 0.0)) {
            return bad("alphas must be positive".into());
        }
        let mut sorted = self.alphas.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return bad("alphas must be distinct".into());
        }
        if self.nus.is_empty() || self.nus.iter().any(|&v| !(v >= 0.0)) {
            return bad("nu list must be nonempty and non-negative".into());
        }
        if self.model == Model::EulerVoigt3D && self.nus.iter().any(|&v| v != 0.0) {
            return bad("Euler-Voigt runs are inviscid (nu = 0)".into());
        }
        self.stepper(Scheme::Rk4)?;
        if let Some(&h) = self.horizons.iter().find(|&&h| h < 0.0 || h > self.t_end + 1e-9) {
            return bad(format!("horizon {h} lies outside [0, t_end]"));
        }
        if let Some((a, b)) = self.s_min_alphas {
            if a == b || !self.alphas.contains(&a) || !self.alphas.contains(&b) {
                return bad("s_min_alphas must name two distinct alphas from the list".into());
            }
        }
        if self.fit_k < 2 {
            return bad("fit_k must be at least 2".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        match self.model {
            Model::EulerVoigt3D => GridSpec::cube(self.n, 1.0),
            Model::Bbm1D => GridSpec::line(self.n, 2.0 * PI),
        }
    }

    /// Stepper settings for one run; IF-RK4 is used for viscous runs.
    pub fn stepper(&self, scheme: Scheme) -> Result<StepperConfig> {
        let cfg = StepperConfig {
            cfl: self.cfl,
            dt_max: self.dt_max.unwrap_or(self.sample_interval / 10.0),
            t_end: self.t_end,
            sample_interval: self.sample_interval,
            scheme,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn scheme_for(&self, nu: f64) -> Scheme {
        if nu > 0.0 {
            Scheme::IfRk4
        } else {
            Scheme::Rk4
        }
    }

    /// Render as a config file that parses back to `self`.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| fmt(*x)).collect::<Vec<_>>().join(", ");
        let mut out = format!(
            "model = {}\nn = {}\nalpha = {}\nnu = {}\ncfl = {}\n",
            self.model.tag(),
            self.n,
            list(&self.alphas),
            list(&self.nus),
            fmt(self.cfl),
        );
        if let Some(dt) = self.dt_max {
            out += &format!("dt_max = {}\n", fmt(dt));
        }
        out += &format!(
            "t_end = {}\nsample_interval = {}\nhorizons = {}\noutput = {}\ncheckpoint_every = {}\nspectrum_every = {}\ns_min_mode = {}\n",
            fmt(self.t_end),
            fmt(self.sample_interval),
            list(&self.horizons),
            self.output.display(),
            self.checkpoint_every,
            self.spectrum_every,
            self.s_min_mode.tag(),
        );
        if let Some((a, b)) = self.s_min_alphas {
            out += &format!("s_min_alphas = {}\n", list(&[a, b]));
        }
        out += &format!("threshold = {}\nfit_k = {}\n", fmt(self.threshold), self.fit_k);
        out
    }

    /// Alpha pair used for `S_min`.
    pub fn s_min_pair(&self) -> Option<(f64, f64)> {
        self.s_min_alphas.or_else(|| {
            let mut sorted = self.alphas.clone();
            sorted.sort_by(f64::total_cmp);
            (sorted.len() >= 2).then(|| (sorted[0], sorted[1]))
        })
    }
}
