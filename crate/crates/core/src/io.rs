//! Configuration files, CSV output and the with/without e-e comparison.
//!
//! Every CSV starts with a `# config_hash=… seed=… code_version=…` line,
//! followed by a header row. Numbers are written with 17 significant digits
//! so that files round-trip bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ee::EeKernel;
use crate::engine::{steady_state, Diagnostics, RunOutput, Sample, SimConfig, TimeSeries};
use crate::error::{Error, Result};
use crate::grid::{CellOccupancy, OccupancyField};
use crate::material::{fermi_dirac, Band};
use crate::phonon::{PhononRateTable, PhononRates};
use crate::screening::ScreeningParams;
use crate::vec2::Vec2;

pub const TIME_SERIES_FILE: &str = "timeseries.csv";
pub const SNAPSHOT_FILE: &str = "snapshot.csv";
pub const METADATA_FILE: &str = "metadata.json";
pub const COMPARE_FILE: &str = "compare.csv";
pub const PHONON_RATES_FILE: &str = "phonon_rates.csv";
pub const EE_RATES_FILE: &str = "ee_rates.csv";

/// Fraction of samples averaged for steady-state values.
pub const STEADY_FRACTION: f64 = 0.25;

pub const TIME_SERIES_HEADER: &str = "t_ps,Vx_nm_per_ps,Vy_nm_per_ps,W_eV,rho_per_nm2";
pub const SNAPSHOT_HEADER: &str = "i,j,kx_center,ky_center,f";
pub const PHONON_RATES_HEADER: &str = "eps_eV,ac,opt_abs,opt_em,K_abs,K_em";
pub const EE_RATES_HEADER: &str = "k1_per_nm,eps_eV,intra_per_ps,inter_per_ps";
pub const COMPARE_HEADER: &str = "t_ps,V_noee_nm_per_ps,V_ee_nm_per_ps,W_noee_eV,W_ee_eV";

/// The file form of a run: simulation parameters plus where to write.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub output_dir: Option<PathBuf>,
    pub simulation: SimConfig,
}

impl RunConfig {
    /// Parses JSON text; `path` is used only in messages.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::ConfigSyntax {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    /// Reads, parses and validates a configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|cause| Error::ConfigFile {
            path: path.to_path_buf(),
            cause,
        })?;
        let cfg = Self::parse(&text, path)?;
        cfg.simulation.validate()?;
        Ok(cfg)
    }
}

#[inline]
fn num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String");
}

fn preamble(hash: &str, seed: u64, header: &str) -> String {
    format!("# config_hash={hash} seed={seed} code_version={}\n{header}\n", crate::VERSION)
}

fn write_rows<T>(
    path: &Path,
    hash: &str,
    seed: u64,
    header: &str,
    rows: impl IntoIterator<Item = T>,
    mut row: impl FnMut(&mut String, T),
) -> Result<()> {
    let mut out = preamble(hash, seed, header);
    for r in rows {
        row(&mut out, r);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_time_series(path: &Path, series: &TimeSeries) -> Result<()> {
    write_rows(path, &series.config_hash, series.seed, TIME_SERIES_HEADER, &series.samples, |out, s| {
        for (n, x) in [s.t, s.v.x, s.v.y, s.w, s.rho].into_iter().enumerate() {
            if n > 0 {
                out.push(',');
            }
            num(out, x);
        }
    })
}

/// Conduction-band occupation of every cell.
pub fn write_snapshot(path: &Path, occ: &impl CellOccupancy, hash: &str, seed: u64) -> Result<()> {
    let spec = *occ.spec();
    write_rows(path, hash, seed, SNAPSHOT_HEADER, spec.cells(), |out, (i, j)| {
        let c = spec.center(i, j);
        write!(out, "{i},{j},").expect("writing to a String");
        num(out, c.x);
        out.push(',');
        num(out, c.y);
        out.push(',');
        num(out, occ.cell_value(Band::Conduction, i, j));
    })
}

/// Parsed `timeseries.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSeries {
    pub config_hash: String,
    pub seed: u64,
    pub samples: Vec<Sample>,
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn read_time_series(path: &Path) -> Result<LoadedSeries> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let first = lines.next().ok_or_else(|| format_err(path, "empty file"))?;
    let mut config_hash = None;
    let mut seed = None;
    for field in first.trim_start_matches('#').split_whitespace() {
        match field.split_once('=') {
            Some(("config_hash", v)) => config_hash = Some(v.to_string()),
            Some(("seed", v)) => seed = v.parse().ok(),
            _ => {}
        }
    }
    let (Some(config_hash), Some(seed)) = (config_hash, seed) else {
        return Err(format_err(path, "missing config_hash/seed line"));
    };
    if lines.next() != Some(TIME_SERIES_HEADER) {
        return Err(format_err(path, "unexpected header"));
    }
    let mut samples = Vec::new();
    for (n, line) in lines.enumerate() {
        let vals: Vec<f64> = line
            .split(',')
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| format_err(path, format!("line {}: {e}", n + 3)))?;
        let [t, vx, vy, w, rho] = vals[..] else {
            return Err(format_err(path, format!("line {}: expected 5 columns", n + 3)));
        };
        samples.push(Sample {
            t,
            v: Vec2::new(vx, vy),
            w,
            rho,
            max_occupancy: f64::NAN,
        });
    }
    Ok(LoadedSeries {
        config_hash,
        seed,
        samples,
    })
}

/// Contents of `metadata.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub config_hash: String,
    pub seed: u64,
    pub code_version: String,
    pub config: SimConfig,
    pub steady_v: [f64; 2],
    pub steady_w: f64,
    pub initial_density: f64,
    pub final_density: f64,
    #[serde(skip_deserializing)]
    pub diagnostics: Diagnostics,
}

/// Paths of the files written by [`write_run`].
#[derive(Debug, Clone)]
pub struct RunFiles {
    pub time_series: PathBuf,
    pub snapshot: PathBuf,
    pub metadata: PathBuf,
}

/// Writes the time series, final snapshot and metadata of a run into `dir`.
pub fn write_run(dir: &Path, cfg: &SimConfig, output: &RunOutput) -> Result<RunFiles> {
    fs::create_dir_all(dir)?;
    let files = RunFiles {
        time_series: dir.join(TIME_SERIES_FILE),
        snapshot: dir.join(SNAPSHOT_FILE),
        metadata: dir.join(METADATA_FILE),
    };
    let series = &output.series;
    write_time_series(&files.time_series, series)?;
    write_snapshot(&files.snapshot, &output.snapshot, &series.config_hash, series.seed)?;
    let (v, w) = series.steady_state(STEADY_FRACTION);
    let meta = RunMetadata {
        config_hash: series.config_hash.clone(),
        seed: series.seed,
        code_version: series.code_version.to_string(),
        config: cfg.clone(),
        steady_v: [v.x, v.y],
        steady_w: w,
        initial_density: series.samples.first().map_or(f64::NAN, |s| s.rho),
        final_density: series.samples.last().map_or(f64::NAN, |s| s.rho),
        diagnostics: output.diagnostics.clone(),
    };
    write_json(&files.metadata, &meta)?;
    Ok(files)
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

pub fn read_metadata(path: &Path) -> Result<RunMetadata> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| format_err(path, e.to_string()))
}

/// Speed along the drift direction `−Ê`, or `|V|` without a field.
pub fn drift_speed(v: Vec2, cfg: &SimConfig) -> f64 {
    let force = cfg.force();
    if force.norm() == 0.0 {
        v.norm()
    } else {
        -v.dot(force) / force.norm()
    }
}

/// Result of comparing a run without e-e scattering to one with it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub v_noee: f64,
    pub v_ee: f64,
    pub w_noee: f64,
    pub w_ee: f64,
    /// `(V_noee − V_ee) / V_noee`.
    pub reduction: f64,
}

fn comparable(a: &SimConfig, b: &SimConfig) -> Result<()> {
    let strip = |c: &SimConfig| SimConfig {
        ee_enabled: false,
        seed: 0,
        ..c.clone()
    };
    if strip(a) != strip(b) {
        let (ja, jb) = (serde_json::to_value(strip(a))?, serde_json::to_value(strip(b))?);
        let diff: Vec<String> = ja
            .as_object()
            .expect("config is an object")
            .iter()
            .filter(|(k, v)| jb.get(k.as_str()) != Some(v))
            .map(|(k, _)| k.clone())
            .collect();
        return Err(Error::Incomparable(format!("configurations differ in {}", diff.join(", "))));
    }
    Ok(())
}

/// Steady-state comparison of two runs that differ at most in `ee_enabled`
/// and `seed`.
pub fn compare_series(
    noee_cfg: &SimConfig,
    noee: &[Sample],
    ee_cfg: &SimConfig,
    ee: &[Sample],
) -> Result<Comparison> {
    comparable(noee_cfg, ee_cfg)?;
    let (v0, w0) = steady_state(noee, STEADY_FRACTION);
    let (v1, w1) = steady_state(ee, STEADY_FRACTION);
    let (v_noee, v_ee) = (drift_speed(v0, noee_cfg), drift_speed(v1, ee_cfg));
    Ok(Comparison {
        v_noee,
        v_ee,
        w_noee: w0,
        w_ee: w1,
        reduction: (v_noee - v_ee) / v_noee,
    })
}

/// Loads two run directories, compares them and writes the paired CSV into
/// `out_dir`.
pub fn compare_runs(noee_dir: &Path, ee_dir: &Path, out_dir: &Path) -> Result<Comparison> {
    let m0 = read_metadata(&noee_dir.join(METADATA_FILE))?;
    let m1 = read_metadata(&ee_dir.join(METADATA_FILE))?;
    let s0 = read_time_series(&noee_dir.join(TIME_SERIES_FILE))?;
    let s1 = read_time_series(&ee_dir.join(TIME_SERIES_FILE))?;
    for (m, s, dir) in [(&m0, &s0, noee_dir), (&m1, &s1, ee_dir)] {
        if m.config_hash != s.config_hash || m.config.hash() != m.config_hash {
            return Err(Error::Incomparable(format!("{}: metadata and time series disagree", dir.display())));
        }
    }
    let cmp = compare_series(&m0.config, &s0.samples, &m1.config, &s1.samples)?;
    fs::create_dir_all(out_dir)?;
    let hash = format!("{}/{}", m0.config_hash, m1.config_hash);
    write_rows(
        &out_dir.join(COMPARE_FILE),
        &hash,
        m1.seed,
        COMPARE_HEADER,
        s0.samples.iter().zip(&s1.samples),
        |out, (a, b)| {
            let vals = [a.t, drift_speed(a.v, &m0.config), drift_speed(b.v, &m1.config), a.w, b.w];
            for (n, x) in vals.into_iter().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                num(out, x);
            }
        },
    )?;
    Ok(cmp)
}

/// Phonon rates on an energy grid.
pub fn phonon_rate_table(cfg: &SimConfig, points: usize) -> Result<PhononRateTable> {
    let material = cfg.material_params()?;
    Ok(PhononRateTable::new(&PhononRates::new(&material), cfg.grid.k_max_energy_ev, points))
}

pub fn write_phonon_rates(path: &Path, cfg: &SimConfig, table: &PhononRateTable) -> Result<()> {
    write_rows(
        path,
        &cfg.hash(),
        cfg.seed,
        PHONON_RATES_HEADER,
        table.energies().enumerate(),
        |out, (i, eps)| {
            num(out, eps);
            for &r in table.row(i) {
                out.push(',');
                num(out, r);
            }
        },
    )
}

/// One row of the e-e rate dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EeRateRow {
    pub k1: f64,
    pub eps: f64,
    pub intra: f64,
    pub inter: f64,
}

/// e-e rates for `k1` along `+x` against a Fermi-Dirac occupancy at
/// `cfg.eps_f_ev` sampled at cell centers (valence band included for the
/// inter-band rate).
pub fn ee_rate_curve(cfg: &SimConfig, points: usize) -> Result<Vec<EeRateRow>> {
    let material = cfg.material_params()?;
    let spec = cfg.grid_spec(&material)?;
    let (gamma, t) = (material.gamma, material.temperature);
    let mut occ = OccupancyField::from_fn(spec, Band::Conduction, |k| {
        fermi_dirac(gamma * k.norm(), cfg.eps_f_ev, t)
    });
    occ.fill(Band::Valence, |k| fermi_dirac(-gamma * k.norm(), cfg.eps_f_ev, t));
    let screening = ScreeningParams::for_density(&material, material.conduction_density(cfg.eps_f_ev))?;
    let kernel = EeKernel::new(&material, screening, cfg.ee_params(&material)?)?;
    let points = points.max(2);
    // Stay half a cell inside the box so every k1 has a cell.
    let k_top = spec.k_max - 0.5 * spec.delta_k();
    Ok((0..points)
        .map(|n| {
            let k1 = Vec2::new(k_top * (n as f64 + 0.5) / points as f64, 0.0);
            EeRateRow {
                k1: k1.x,
                eps: gamma * k1.x,
                intra: kernel.intra_rate(k1, &occ),
                inter: kernel.inter_rate(k1, &occ),
            }
        })
        .collect())
}

pub fn write_ee_rates(path: &Path, cfg: &SimConfig, rows: &[EeRateRow]) -> Result<()> {
    write_rows(path, &cfg.hash(), cfg.seed, EE_RATES_HEADER, rows, |out, r| {
        for (n, x) in [r.k1, r.eps, r.intra, r.inter].into_iter().enumerate() {
            if n > 0 {
                out.push(',');
            }
            num(out, x);
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t: f64, vx: f64) -> Sample {
        Sample {
            t,
            v: Vec2::new(vx, 0.0),
            w: 0.2,
            rho: 0.01,
            max_occupancy: 0.9,
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = RunConfig::parse("{\n  \"simulation\": {\n    \"eps_f_ev\": oops\n  }\n}", Path::new("c.json"))
            .unwrap_err();
        match err {
            Error::ConfigSyntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = RunConfig::parse(r#"{"simulation": {"eps_fermi": 0.2}}"#, Path::new("c.json")).unwrap_err();
        assert!(err.to_string().contains("eps_fermi"), "{err}");
    }

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = RunConfig::parse("{}", Path::new("c.json")).unwrap();
        assert_eq!(cfg.simulation, SimConfig::default());
        assert_eq!(cfg.output_dir, None);
    }

    #[test]
    fn time_series_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ts.csv");
        let series = TimeSeries {
            samples: vec![sample(0.0, 0.1 + 0.2), sample(0.05, -1.0 / 3.0)],
            config_hash: "abc".into(),
            seed: 9,
            code_version: "x",
        };
        write_time_series(&path, &series).unwrap();
        let back = read_time_series(&path).unwrap();
        assert_eq!((back.config_hash.as_str(), back.seed), ("abc", 9));
        for (a, b) in back.samples.iter().zip(&series.samples) {
            assert_eq!(a.v.x.to_bits(), b.v.x.to_bits());
            assert_eq!(a.t.to_bits(), b.t.to_bits());
        }
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# config_hash=abc seed=9"));
    }

    #[test]
    fn identical_runs_have_zero_reduction() {
        let cfg = SimConfig::default();
        let s: Vec<_> = (0..20).map(|n| sample(n as f64, -300.0 - n as f64)).collect();
        let c = compare_series(&cfg, &s, &cfg, &s).unwrap();
        assert_eq!(c.reduction, 0.0);
        assert!(c.v_noee > 0.0);
    }

    #[test]
    fn steady_window_is_final_quarter() {
        let cfg = SimConfig::default();
        let noee: Vec<_> = (0..8).map(|n| sample(n as f64, if n < 6 { 0.0 } else { -100.0 })).collect();
        let ee: Vec<_> = (0..8).map(|n| sample(n as f64, if n < 6 { 0.0 } else { -90.0 })).collect();
        let c = compare_series(&cfg, &noee, &SimConfig { ee_enabled: false, seed: 4, ..cfg.clone() }, &ee).unwrap();
        assert!((c.reduction - 0.1).abs() < 1e-12);
    }

    #[test]
    fn differing_configs_refused() {
        let a = SimConfig::default();
        let b = SimConfig {
            eps_f_ev: 0.25,
            ..a.clone()
        };
        let s = vec![sample(0.0, -1.0)];
        let err = compare_series(&a, &s, &b, &s).unwrap_err();
        assert!(err.to_string().contains("eps_f_ev"), "{err}");
    }

    #[test]
    fn zero_field_uses_speed() {
        let cfg = SimConfig {
            field_kv_per_cm: [0.0, 0.0],
            ..SimConfig::default()
        };
        assert_eq!(drift_speed(Vec2::new(3.0, -4.0), &cfg), 5.0);
        assert_eq!(drift_speed(Vec2::new(-3.0, 4.0), &SimConfig::default()), 3.0);
    }
}
