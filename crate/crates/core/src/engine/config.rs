use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ee::EeRateParams;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::material::{MaterialParams, TableParams, KV_PER_CM};
use crate::vec2::Vec2;

/// Fermi energies below this are outside the range where a unipolar
/// description is trusted.
pub const UNIPOLAR_EPS_F_EV: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// One RNG stream, occupancy updated after every accepted event.
    #[default]
    Serial,
    /// Particles advanced independently against a frozen snapshot per
    /// synchronization sub-step.
    Parallel,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Serial => "serial",
            Mode::Parallel => "parallel",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "serial" => Ok(Mode::Serial),
            "parallel" => Ok(Mode::Parallel),
            other => Err(Error::Config(format!("unknown mode {other:?} (expected serial or parallel)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Cells per side N.
    pub cells_per_side: usize,
    /// Box half-width expressed as an energy, `γ k_max` (eV).
    pub k_max_energy_ev: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            cells_per_side: 100,
            k_max_energy_ev: 1.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EeConfig {
    /// β quadrature nodes.
    pub m: usize,
    /// Hyperbola truncation for inter-band rates.
    pub beta_max: f64,
    pub both_branches: bool,
    pub beta_weighted: bool,
}

impl Default for EeConfig {
    fn default() -> Self {
        EeConfig {
            m: 64,
            beta_max: 6.0,
            both_branches: false,
            beta_weighted: false,
        }
    }
}

/// Everything that determines a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub material: TableParams,
    pub eps_f_ev: f64,
    pub field_kv_per_cm: [f64; 2],
    pub n_particles: usize,
    pub t_end_ps: f64,
    pub dt_obs_ps: f64,
    pub seed: u64,
    pub ee_enabled: bool,
    pub mode: Mode,
    /// Synchronization sub-step (ps). Majorants are reset and, in parallel
    /// mode, occupancy snapshots taken at every sub-step boundary.
    pub tau_sync_ps: f64,
    /// Interval (ps) after which the cached e-e rate field is discarded.
    pub ee_refresh_ps: f64,
    pub grid: GridConfig,
    pub ee: EeConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            material: TableParams::default(),
            eps_f_ev: 0.15,
            field_kv_per_cm: [1.0, 0.0],
            n_particles: 20_000,
            t_end_ps: 5.0,
            dt_obs_ps: 0.05,
            seed: 1,
            ee_enabled: true,
            mode: Mode::Serial,
            tau_sync_ps: 0.005,
            ee_refresh_ps: 0.2,
            grid: GridConfig::default(),
            ee: EeConfig::default(),
        }
    }
}

impl SimConfig {
    /// Checks the configuration and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let material = self.material_params()?;
        let mut warnings = Vec::new();
        if self.n_particles < 100 {
            return Err(Error::Config(format!("n_particles must be at least 100, got {}", self.n_particles)));
        }
        for (name, v) in [
            ("t_end_ps", self.t_end_ps),
            ("dt_obs_ps", self.dt_obs_ps),
            ("tau_sync_ps", self.tau_sync_ps),
            ("ee_refresh_ps", self.ee_refresh_ps),
            ("grid.k_max_energy_ev", self.grid.k_max_energy_ev),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.eps_f_ev.is_finite() {
            return Err(Error::Config(format!("eps_f_ev must be finite, got {}", self.eps_f_ev)));
        }
        if !self.field_kv_per_cm.iter().all(|c| c.is_finite()) {
            return Err(Error::Config("field_kv_per_cm must be finite".into()));
        }
        if self.dt_obs_ps > self.t_end_ps {
            return Err(Error::Config(format!(
                "dt_obs_ps ({}) exceeds t_end_ps ({})",
                self.dt_obs_ps, self.t_end_ps
            )));
        }
        self.grid_spec(&material)?;
        if self.ee_enabled {
            self.ee_params(&material)?;
        }
        if self.eps_f_ev.abs() < UNIPOLAR_EPS_F_EV {
            warnings.push(format!(
                "|eps_f| = {} eV is below {UNIPOLAR_EPS_F_EV} eV; the unipolar approximation may not hold",
                self.eps_f_ev
            ));
        }
        Ok(warnings)
    }

    pub fn material_params(&self) -> Result<MaterialParams> {
        MaterialParams::from_table(&self.material)
    }

    pub fn grid_spec(&self, material: &MaterialParams) -> Result<GridSpec> {
        GridSpec::new(self.grid.cells_per_side, self.grid.k_max_energy_ev / material.gamma)
    }

    pub fn ee_params(&self, material: &MaterialParams) -> Result<EeRateParams> {
        let mut p = EeRateParams::new(self.ee.m, self.ee.beta_max, self.grid.k_max_energy_ev / material.gamma)?;
        p.both_branches = self.ee.both_branches;
        p.beta_weighted = self.ee.beta_weighted;
        Ok(p)
    }

    /// `e E` in eV/nm.
    pub fn force(&self) -> Vec2 {
        Vec2::new(self.field_kv_per_cm[0], self.field_kv_per_cm[1]) * KV_PER_CM
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
