//! Plain-text tables and binary checkpoints.
//!
//! Tables are comma-separated with one header row; floats are written with
//! 17 significant digits so that reading a table back is exact.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::blowup::{SlopeTable, SminRow, Verdict};
use crate::diagnostics::DiagnosticSeries;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::models::Model;

pub const SERIES_HEADER: &str =
    "t,l2_energy,scaled_enstrophy,alpha_energy,grad_norm,vort_max,dissipation,running_sup_grad";

/// Format a float with 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn table(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse a table, checking the header; returns the data rows as cells.
pub fn read_table(path: &Path, header: &str) -> Result<Vec<Vec<String>>> {
    let text = read_text(path)?;
    let mut lines = text.lines();
    let found = lines.next().unwrap_or_default();
    if found.trim() != header {
        return Err(Error::Format {
            path: path.into(),
            msg: format!("expected header `{header}`, found `{found}`"),
        });
    }
    let width = header.split(',').count();
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let cells: Vec<String> = l.split(',').map(|c| c.trim().to_string()).collect();
            if cells.len() != width {
                return Err(Error::Format {
                    path: path.into(),
                    msg: format!("row {} has {} cells, expected {width}", i + 2, cells.len()),
                });
            }
            Ok(cells)
        })
        .collect()
}

fn cell(path: &Path, text: &str) -> Result<f64> {
    text.parse().map_err(|_| Error::Format {
        path: path.into(),
        msg: format!("bad number `{text}`"),
    })
}

pub fn write_series(path: &Path, s: &DiagnosticSeries) -> Result<()> {
    let energy = s.alpha_energy();
    let rows = (0..s.len()).map(|i| {
        vec![
            fmt(s.times[i]),
            fmt(s.l2_energy[i]),
            fmt(s.scaled_enstrophy[i]),
            fmt(energy[i]),
            fmt(s.grad_norm[i]),
            fmt_opt(s.vort_max.as_ref().map(|v| v[i])),
            fmt(s.dissipation[i]),
            fmt(s.running_sup_grad[i]),
        ]
    });
    write_text(path, &table(SERIES_HEADER, rows))
}

/// Read a series written by [`write_series`]; `alpha` and `nu` are not
/// stored in the file.
pub fn read_series(path: &Path, alpha: f64, nu: f64) -> Result<DiagnosticSeries> {
    let rows = read_table(path, SERIES_HEADER)?;
    let three_d = rows.first().is_some_and(|r| !r[5].is_empty());
    let mut s = DiagnosticSeries::new(alpha, nu, three_d);
    for r in &rows {
        s.times.push(cell(path, &r[0])?);
        s.l2_energy.push(cell(path, &r[1])?);
        s.scaled_enstrophy.push(cell(path, &r[2])?);
        s.grad_norm.push(cell(path, &r[4])?);
        if let Some(v) = s.vort_max.as_mut() {
            v.push(cell(path, &r[5])?);
        }
        s.dissipation.push(cell(path, &r[6])?);
        s.running_sup_grad.push(cell(path, &r[7])?);
    }
    Ok(s)
}

/// Shell spectrum, `E[kappa]` for `kappa = 0, 1, ...`.
pub fn write_spectrum(path: &Path, e: &[f64]) -> Result<()> {
    let rows = e.iter().enumerate().map(|(k, v)| vec![k.to_string(), fmt(*v)]);
    write_text(path, &table("kappa,E_kappa", rows))
}

pub fn read_spectrum(path: &Path) -> Result<Vec<f64>> {
    read_table(path, "kappa,E_kappa")?
        .iter()
        .map(|r| cell(path, &r[1]))
        .collect()
}

/// `Q(alpha, T)` in long form.
pub fn write_q(path: &Path, t: &SlopeTable) -> Result<()> {
    let rows = t.alphas.iter().zip(&t.q).flat_map(|(a, q)| {
        t.t_grid
            .iter()
            .zip(q)
            .map(move |(h, v)| vec![fmt(*h), fmt(*a), fmt(*v)])
    });
    write_text(path, &table("T,alpha,Q", rows))
}

/// Pairwise slopes; `p_estimate` is filled on the smallest-alpha pair only.
pub fn write_slopes(path: &Path, t: &SlopeTable) -> Result<()> {
    let rows = t.slopes.iter().enumerate().flat_map(|(i, row)| {
        row.iter().enumerate().map(move |(j, s)| {
            vec![
                fmt(t.t_grid[j]),
                fmt(t.alphas[i]),
                fmt(t.alphas[i + 1]),
                fmt(*s),
                if i == 0 { fmt(t.p_estimate[j]) } else { String::new() },
            ]
        })
    });
    write_text(path, &table("T,alpha_lo,alpha_hi,slope,p_estimate", rows))
}

pub fn write_fit(path: &Path, t_grid: &[f64], p: &[f64]) -> Result<()> {
    let rows = t_grid.iter().zip(p).map(|(t, p)| vec![fmt(*t), fmt(*p)]);
    write_text(path, &table("T,p_fit", rows))
}

/// One verdict per viscosity, with an optional free-text note.
pub fn write_verdicts(path: &Path, threshold: f64, rows: &[(f64, Verdict, String)]) -> Result<()> {
    let rows = rows.iter().map(|(nu, v, note)| {
        vec![
            fmt(*nu),
            v.blow_up_indicated.to_string(),
            fmt_opt(v.earliest_t),
            fmt_opt(v.min_slope),
            fmt_opt(v.min_slope_t),
            fmt(threshold),
            note.replace(',', ";"),
        ]
    });
    write_text(
        path,
        &table("nu,blow_up_indicated,earliest_T,min_slope,min_slope_T,threshold,note", rows),
    )
}

pub fn write_s_min(path: &Path, rows: &[SminRow]) -> Result<()> {
    let rows = rows.iter().map(|r| vec![fmt(r.nu), fmt(r.s_min), fmt(r.at_t)]);
    write_text(path, &table("nu,s_min,at_T", rows))
}

/// Manifest of the series files in a sweep directory.
pub const RUNS_HEADER: &str = "alpha,nu,file";

pub fn write_runs(path: &Path, runs: &[(f64, f64, String)]) -> Result<()> {
    let rows = runs.iter().map(|(a, nu, f)| vec![fmt(*a), fmt(*nu), f.clone()]);
    write_text(path, &table(RUNS_HEADER, rows))
}

pub fn read_runs(path: &Path) -> Result<Vec<(f64, f64, String)>> {
    read_table(path, RUNS_HEADER)?
        .into_iter()
        .map(|r| Ok((cell(path, &r[0])?, cell(path, &r[1])?, r[2].clone())))
        .collect()
}

/// A saved state with the parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model: Model,
    pub alpha: f64,
    pub nu: f64,
    pub t: f64,
    pub field: SpectralField,
}

const MAGIC: &str = "voigt-checkpoint 1";

/// Text header, then the coefficients as little-endian `f64` pairs
/// `(re, im)`, component by component in storage order.
pub fn write_checkpoint(path: &Path, c: &Checkpoint) -> Result<()> {
    let g = c.field.grid();
    let dims: Vec<String> = (0..g.dim()).map(|a| g.n(a).to_string()).collect();
    let lengths: Vec<String> = (0..g.dim()).map(|a| fmt(g.length(a))).collect();
    let header = format!(
        "{MAGIC}\nmodel = {}\nn = {}\ndim = {}\nlength = {}\nalpha = {}\nnu = {}\nt = {}\ncomponents = {}\ncoefficients = {}\nend\n",
        c.model.tag(),
        dims.join(" "),
        g.dim(),
        lengths.join(" "),
        fmt(c.alpha),
        fmt(c.nu),
        fmt(c.t),
        c.field.components(),
        g.spectral_len(),
    );
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut put = |bytes: &[u8]| w.write_all(bytes).map_err(|e| Error::io(path, e));
    put(header.as_bytes())?;
    for comp in c.field.storage() {
        for z in comp {
            put(&z.re.to_le_bytes())?;
            put(&z.im.to_le_bytes())?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |msg: String| Error::Format { path: path.into(), msg };
    let marker = b"\nend\n";
    let split = bytes
        .windows(marker.len())
        .position(|w| w == marker)
        .ok_or_else(|| bad("missing `end` line".into()))?;
    let header = std::str::from_utf8(&bytes[..split]).map_err(|_| bad("header is not UTF-8".into()))?;
    let mut lines = header.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad("not a checkpoint file".into()));
    }
    let mut keys = std::collections::HashMap::new();
    for line in lines {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("bad header line `{line}`")))?;
        keys.insert(k.trim(), v.trim());
    }
    let get = |k: &str| keys.get(k).copied().ok_or_else(|| bad(format!("missing `{k}`")));
    let num = |k: &str| -> Result<f64> {
        let v = get(k)?;
        v.parse().map_err(|_| bad(format!("bad value for `{k}`")))
    };
    let list = |k: &str| -> Result<Vec<f64>> {
        get(k)?
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|_| bad(format!("bad value for `{k}`"))))
            .collect()
    };
    let model = Model::from_tag(get("model")?).ok_or_else(|| bad("unknown model".into()))?;
    let n: Vec<usize> = list("n")?.iter().map(|&v| v as usize).collect();
    let grid = GridSpec::new(&n, &list("length")?)?;
    if num("dim")? as usize != grid.dim() {
        return Err(bad("dim does not match n".into()));
    }
    let components = num("components")? as usize;
    let per = num("coefficients")? as usize;
    if per != grid.spectral_len() {
        return Err(bad("coefficient count does not match the grid".into()));
    }
    let data = &bytes[split + marker.len()..];
    if data.len() != components * per * 16 {
        return Err(bad(format!("expected {} data bytes, found {}", components * per * 16, data.len())));
    }
    let value = |i: usize| f64::from_le_bytes(data[8 * i..8 * i + 8].try_into().expect("8 bytes"));
    let comps = (0..components)
        .map(|c| {
            (0..per)
                .map(|j| {
                    let i = 2 * (c * per + j);
                    Complex64::new(value(i), value(i + 1))
                })
                .collect()
        })
        .collect();
    Ok(Checkpoint {
        model,
        alpha: num("alpha")?,
        nu: num("nu")?,
        t: num("t")?,
        field: SpectralField::from_storage(grid, comps)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("voigt-io-{}", std::process::id()));
        dir.join(name)
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(fmt(0.1), "1.0000000000000001e-1");
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, -7.25] {
            assert_eq!(fmt(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn series_round_trip() {
        let mut s = DiagnosticSeries::new(0.25, 0.0, false);
        for i in 0..4 {
            let t = i as f64 / 3.0;
            s.push(
                crate::diagnostics::Sample {
                    t,
                    l2_energy: 1.0 / (1.0 + t),
                    scaled_enstrophy: t / 7.0,
                    grad_norm: 1.0 + t.sin(),
                    vort_max: None,
                    dissipation: 0.0,
                },
                1.5,
            );
        }
        let path = tmp("series.csv");
        write_series(&path, &s).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(SERIES_HEADER));
        assert!(text.lines().nth(1).unwrap().contains(",,"));
        assert_eq!(read_series(&path, 0.25, 0.0).unwrap(), s);
    }

    #[test]
    fn checkpoint_round_trip_is_exact() {
        let grid = GridSpec::cube(8, 1.0).unwrap();
        let c = Checkpoint {
            model: Model::EulerVoigt3D,
            alpha: 1.0 / 3.0,
            nu: 0.0,
            t: 0.7,
            field: models::taylor_green(grid).unwrap(),
        };
        let path = tmp("tg.ckpt");
        write_checkpoint(&path, &c).unwrap();
        assert_eq!(read_checkpoint(&path).unwrap(), c);
    }

    #[test]
    fn truncated_checkpoint_is_rejected() {
        let grid = GridSpec::line(16, 1.0).unwrap();
        let c = Checkpoint {
            model: Model::Bbm1D,
            alpha: 0.1,
            nu: 0.01,
            t: 0.0,
            field: SpectralField::zeros(grid, 1),
        };
        let path = tmp("short.ckpt");
        write_checkpoint(&path, &c).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 3);
        fs::write(&path, bytes).unwrap();
        assert!(matches!(read_checkpoint(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn wrong_header_is_rejected() {
        let path = tmp("bad.csv");
        write_text(&path, "a,b\n1,2\n").unwrap();
        assert!(read_table(&path, "kappa,E_kappa").is_err());
    }
}
