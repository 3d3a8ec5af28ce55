//! Batch runs over `(alpha, nu)` and the analysis that turns the resulting
//! series into slope tables, verdicts and `S_min(nu)`.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::blowup::{self, SlopeTable, SminMode, SminRow, Verdict};
use crate::config::RunConfig;
use crate::diagnostics::{self, DiagnosticSeries};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::io::{self, Checkpoint};
use crate::models::{self, Model, VoigtParams};
use crate::timestep;

/// Name of the effective configuration written into a sweep directory.
pub const CONFIG_FILE: &str = "config.txt";

/// Initial data: Taylor-Green for Euler-Voigt, `-sin x` for BBM.
pub fn initial_condition(cfg: &RunConfig) -> Result<SpectralField> {
    let grid = cfg.grid()?;
    match cfg.model {
        Model::EulerVoigt3D => models::taylor_green(grid),
        Model::Bbm1D => models::bbm_initial(grid),
    }
}

fn job_stem(ai: usize, ni: usize) -> String {
    format!("a{ai:02}_n{ni:02}")
}

/// Integrate one `(alpha, nu)` pair. With `dir`, spectra and checkpoints
/// are written there at the configured cadences, named after `stem`.
pub fn run_single(
    cfg: &RunConfig,
    alpha: f64,
    nu: f64,
    dir: Option<(&Path, &str)>,
) -> Result<(DiagnosticSeries, SpectralField)> {
    let params = VoigtParams::new(cfg.model, alpha, nu)?;
    let stepper = cfg.stepper(cfg.scheme_for(nu))?;
    let u0 = initial_condition(cfg)?;
    let mut sink = |j: usize, t: f64, u: &SpectralField| -> Result<()> {
        let Some((dir, stem)) = dir else {
            return Ok(());
        };
        if cfg.spectrum_every > 0 && j.is_multiple_of(cfg.spectrum_every) {
            let path = dir.join("spectra").join(format!("{stem}_s{j:05}.csv"));
            io::write_spectrum(&path, &diagnostics::spectrum(u))?;
        }
        if cfg.checkpoint_every > 0 && j.is_multiple_of(cfg.checkpoint_every) {
            let path = dir.join("checkpoints").join(format!("{stem}_s{j:05}.ckpt"));
            let c = Checkpoint {
                model: cfg.model,
                alpha,
                nu,
                t,
                field: u.clone(),
            };
            io::write_checkpoint(&path, &c)?;
        }
        Ok(())
    };
    timestep::integrate(&u0, &params, &stepper, &mut sink)
}

/// Settings that control the analysis of a set of series.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSettings {
    pub horizons: Vec<f64>,
    pub threshold: f64,
    pub s_min_mode: SminMode,
    pub s_min_alphas: Option<(f64, f64)>,
    pub fit_k: usize,
}

impl From<&RunConfig> for AnalysisSettings {
    fn from(cfg: &RunConfig) -> Self {
        AnalysisSettings {
            horizons: cfg.horizons.clone(),
            threshold: cfg.threshold,
            s_min_mode: cfg.s_min_mode,
            s_min_alphas: cfg.s_min_pair(),
            fit_k: cfg.fit_k,
        }
    }
}

/// Analysis of the runs sharing one viscosity.
#[derive(Debug, Clone, PartialEq)]
pub struct NuAnalysis {
    pub nu: f64,
    pub table: SlopeTable,
    pub verdict: Verdict,
    /// Least-squares exponent over the `fit_k` smallest alphas, when available.
    pub fit: Option<Vec<f64>>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub per_nu: Vec<NuAnalysis>,
    pub s_min: Vec<SminRow>,
    /// Viscosity at which `S_min` crosses the threshold.
    pub nu_star: Option<f64>,
}

impl Analysis {
    pub fn for_nu(&self, nu: f64) -> Option<&NuAnalysis> {
        self.per_nu.iter().find(|a| a.nu == nu)
    }
}

/// Group series by viscosity and compute tables, verdicts and `S_min`.
pub fn analyze(series: &[DiagnosticSeries], settings: &AnalysisSettings) -> Result<Analysis> {
    let mut nus: Vec<f64> = series.iter().map(|s| s.nu).collect();
    nus.sort_by(f64::total_cmp);
    nus.dedup();
    let mut per_nu = Vec::new();
    let mut pairs = Vec::new();
    for &nu in &nus {
        let group: Vec<&DiagnosticSeries> = series.iter().filter(|s| s.nu == nu).collect();
        let mut table = SlopeTable::from_series(&group, &settings.horizons)?;
        let mut note = String::new();
        if table.alphas.len() < 2 {
            note = "a single alpha gives no slopes".into();
        } else {
            table.fill_slopes()?;
        }
        let fit = (table.alphas.len() >= settings.fit_k)
            .then(|| table.fit_exponent(settings.fit_k))
            .transpose()?;
        let verdict = blowup::verdict(&table, settings.threshold);
        per_nu.push(NuAnalysis {
            nu,
            table,
            verdict,
            fit,
            note,
        });
        if let Some((a, b)) = settings.s_min_alphas {
            let lo = group.iter().find(|s| s.alpha == a);
            let hi = group.iter().find(|s| s.alpha == b);
            if let (Some(lo), Some(hi)) = (lo, hi) {
                pairs.push((nu, *lo, *hi));
            }
        }
    }
    let s_min = blowup::s_min_of_nu(&pairs, &settings.horizons, settings.s_min_mode)?;
    let nu_star = blowup::crossing(&s_min, settings.threshold);
    Ok(Analysis {
        per_nu,
        s_min,
        nu_star,
    })
}

/// Write the analysis tables into `dir`.
pub fn write_analysis(dir: &Path, a: &Analysis, settings: &AnalysisSettings) -> Result<()> {
    for (ni, r) in a.per_nu.iter().enumerate() {
        io::write_q(&dir.join(format!("q_n{ni:02}.csv")), &r.table)?;
        io::write_slopes(&dir.join(format!("slopes_n{ni:02}.csv")), &r.table)?;
        if let Some(fit) = &r.fit {
            io::write_fit(&dir.join(format!("fit_n{ni:02}.csv")), &r.table.t_grid, fit)?;
        }
    }
    let verdicts: Vec<_> = a
        .per_nu
        .iter()
        .map(|r| (r.nu, r.verdict, r.note.clone()))
        .collect();
    io::write_verdicts(&dir.join("verdicts.csv"), settings.threshold, &verdicts)?;
    if !a.s_min.is_empty() {
        io::write_s_min(&dir.join("s_min.csv"), &a.s_min)?;
    }
    Ok(())
}

/// Everything a sweep produced.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub series: Vec<DiagnosticSeries>,
    pub analysis: Analysis,
    pub dir: PathBuf,
}

/// Run every `(alpha, nu)` combination in parallel, write per-run files and
/// the merged analysis into `cfg.output`.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let dir = cfg.output.clone();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    std::fs::write(dir.join(CONFIG_FILE), cfg.to_text()).map_err(|e| Error::io(&dir, e))?;
    let jobs: Vec<(usize, f64, usize, f64)> = cfg
        .nus
        .iter()
        .enumerate()
        .flat_map(|(ni, &nu)| cfg.alphas.iter().enumerate().map(move |(ai, &a)| (ai, a, ni, nu)))
        .collect();
    let results: Vec<(DiagnosticSeries, String)> = jobs
        .par_iter()
        .map(|&(ai, alpha, ni, nu)| {
            let stem = job_stem(ai, ni);
            let run = || -> Result<DiagnosticSeries> {
                let (series, _) = run_single(cfg, alpha, nu, Some((&dir, &stem)))?;
                io::write_series(&dir.join(format!("series_{stem}.csv")), &series)?;
                Ok(series)
            };
            run()
                .map(|s| (s, format!("series_{stem}.csv")))
                .map_err(|e| Error::RunFailed {
                    alpha,
                    nu,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;
    let manifest: Vec<_> = results
        .iter()
        .map(|(s, f)| (s.alpha, s.nu, f.clone()))
        .collect();
    io::write_runs(&dir.join("runs.csv"), &manifest)?;
    let series: Vec<DiagnosticSeries> = results.into_iter().map(|(s, _)| s).collect();
    let settings = AnalysisSettings::from(cfg);
    let analysis = analyze(&series, &settings)?;
    write_analysis(&dir, &analysis, &settings)?;
    Ok(SweepOutput {
        series,
        analysis,
        dir,
    })
}

/// Load the series listed in `dir/runs.csv`.
pub fn load_series(dir: &Path) -> Result<Vec<DiagnosticSeries>> {
    io::read_runs(&dir.join("runs.csv"))?
        .iter()
        .map(|(a, nu, f)| io::read_series(&dir.join(f), *a, *nu))
        .collect()
}

/// Recompute and rewrite the analysis of an existing sweep directory.
pub fn analyze_dir(dir: &Path, settings: &AnalysisSettings) -> Result<Analysis> {
    let series = load_series(dir)?;
    let analysis = analyze(&series, settings)?;
    write_analysis(dir, &analysis, settings)?;
    Ok(analysis)
}
