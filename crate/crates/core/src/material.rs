//! Physical constants, unit system, graphene dispersion and equilibrium
//! statistics.
//!
//! Internal units: energies in eV, lengths in nm, times in ps. Wave-vectors are
//! in 1/nm and measured from the Dirac point, whose energy is taken as zero.
//! The Coulomb coupling uses the Gaussian convention `e²/r` with
//! `e² = 1.439964548 eV·nm`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Reduced Planck constant in eV·ps.
pub const HBAR: f64 = 6.582_119_569e-4;
/// Boltzmann constant in eV/K.
pub const K_B: f64 = 8.617_333_262e-5;
/// Squared elementary charge (Gaussian units) in eV·nm.
pub const E_SQUARED: f64 = 1.439_964_548;

/// cm/s → nm/ps.
pub const CM_PER_S: f64 = 1e-5;
/// g/cm² → eV·ps²/nm⁴ (1 kg = 6.241509074e24 eV·ps²/nm²).
pub const G_PER_CM2: f64 = 6.241_509_074e21 / 1e14;
/// eV/cm → eV/nm.
pub const EV_PER_CM: f64 = 1e-7;
/// meV → eV.
pub const MEV: f64 = 1e-3;
/// kV/cm → V/nm, i.e. the force `eE` in eV/nm for unit charge.
pub const KV_PER_CM: f64 = 1e-4;
/// 1/nm² → 1/cm².
pub const PER_NM2_TO_PER_CM2: f64 = 1e14;

/// Energy band of a carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Conduction,
    Valence,
}

impl Band {
    /// `+1` for the conduction band, `-1` for the valence band.
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Band::Conduction => 1.0,
            Band::Valence => -1.0,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Band::Conduction => 0,
            Band::Valence => 1,
        }
    }
}

/// One simulated electron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub k: Vec2,
    pub band: Band,
}

impl Particle {
    pub fn conduction(k: Vec2) -> Self {
        Particle {
            k,
            band: Band::Conduction,
        }
    }
}

/// Material constants in the file/table units in which they are usually
/// quoted. This is the form stored in run configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TableParams {
    pub v_f_cm_per_s: f64,
    pub v_p_cm_per_s: f64,
    pub sigma_m_g_per_cm2: f64,
    pub d_ac_ev: f64,
    pub hbar_omega_o_mev: f64,
    pub d_o_ev_per_cm: f64,
    pub hbar_omega_k_mev: f64,
    pub d_k_ev_per_cm: f64,
    pub temperature_k: f64,
    pub g_s: u32,
    pub g_v: u32,
    pub kappa: f64,
    /// Overrides the Wigner-Seitz radius derived from `kappa` when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_s: Option<f64>,
}

impl Default for TableParams {
    fn default() -> Self {
        TableParams {
            v_f_cm_per_s: 1e8,
            v_p_cm_per_s: 2e6,
            sigma_m_g_per_cm2: 7.6e-8,
            d_ac_ev: 6.8,
            hbar_omega_o_mev: 164.6,
            d_o_ev_per_cm: 1e9,
            hbar_omega_k_mev: 124.0,
            d_k_ev_per_cm: 3.5e8,
            temperature_k: 300.0,
            g_s: 2,
            g_v: 2,
            kappa: 1.0,
            r_s: None,
        }
    }
}

/// Material constants in internal units, plus derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    /// Fermi velocity (nm/ps).
    pub v_f: f64,
    /// Sound speed (nm/ps).
    pub v_p: f64,
    /// Areal mass density (eV·ps²/nm⁴).
    pub sigma_m: f64,
    /// Acoustic deformation potential (eV).
    pub d_ac: f64,
    /// Optical phonon energy (eV).
    pub hbar_omega_o: f64,
    /// Optical coupling (eV/nm).
    pub d_o: f64,
    /// K-phonon energy (eV).
    pub hbar_omega_k: f64,
    /// K-phonon coupling (eV/nm).
    pub d_k: f64,
    /// Lattice temperature (K).
    pub temperature: f64,
    pub g_s: u32,
    pub g_v: u32,
    /// Background dielectric constant.
    pub kappa: f64,
    /// ħ v_F (eV·nm).
    pub gamma: f64,
    /// Wigner-Seitz radius.
    pub r_s: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        MaterialParams::from_table(&TableParams::default()).expect("default table is valid")
    }
}

impl MaterialParams {
    pub fn from_table(t: &TableParams) -> Result<Self> {
        let positive = [
            ("v_f_cm_per_s", t.v_f_cm_per_s),
            ("v_p_cm_per_s", t.v_p_cm_per_s),
            ("sigma_m_g_per_cm2", t.sigma_m_g_per_cm2),
            ("d_ac_ev", t.d_ac_ev),
            ("hbar_omega_o_mev", t.hbar_omega_o_mev),
            ("d_o_ev_per_cm", t.d_o_ev_per_cm),
            ("hbar_omega_k_mev", t.hbar_omega_k_mev),
            ("d_k_ev_per_cm", t.d_k_ev_per_cm),
            ("temperature_k", t.temperature_k),
            ("kappa", t.kappa),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("material.{name} must be positive, got {value}")));
            }
        }
        if t.g_s == 0 || t.g_v == 0 {
            return Err(Error::Config("material degeneracies must be positive".into()));
        }
        if let Some(r_s) = t.r_s {
            if !(r_s > 0.0 && r_s.is_finite()) {
                return Err(Error::Config(format!("material.r_s must be positive, got {r_s}")));
            }
        }
        let v_f = t.v_f_cm_per_s * CM_PER_S;
        let gamma = HBAR * v_f;
        let g = f64::from(t.g_s * t.g_v);
        let r_s = t
            .r_s
            .unwrap_or_else(|| E_SQUARED / (t.kappa * gamma) * (4.0 / g).sqrt());
        Ok(MaterialParams {
            v_f,
            v_p: t.v_p_cm_per_s * CM_PER_S,
            sigma_m: t.sigma_m_g_per_cm2 * G_PER_CM2,
            d_ac: t.d_ac_ev,
            hbar_omega_o: t.hbar_omega_o_mev * MEV,
            d_o: t.d_o_ev_per_cm * EV_PER_CM,
            hbar_omega_k: t.hbar_omega_k_mev * MEV,
            d_k: t.d_k_ev_per_cm * EV_PER_CM,
            temperature: t.temperature_k,
            g_s: t.g_s,
            g_v: t.g_v,
            kappa: t.kappa,
            gamma,
            r_s,
        })
    }

    /// Converts back to table units. `r_s` is reported only when it differs
    /// from the value implied by `kappa`.
    pub fn to_table(&self) -> TableParams {
        let derived = E_SQUARED / (self.kappa * self.gamma) * (4.0 / self.degeneracy()).sqrt();
        TableParams {
            v_f_cm_per_s: self.v_f / CM_PER_S,
            v_p_cm_per_s: self.v_p / CM_PER_S,
            sigma_m_g_per_cm2: self.sigma_m / G_PER_CM2,
            d_ac_ev: self.d_ac,
            hbar_omega_o_mev: self.hbar_omega_o / MEV,
            d_o_ev_per_cm: self.d_o / EV_PER_CM,
            hbar_omega_k_mev: self.hbar_omega_k / MEV,
            d_k_ev_per_cm: self.d_k / EV_PER_CM,
            temperature_k: self.temperature,
            g_s: self.g_s,
            g_v: self.g_v,
            kappa: self.kappa,
            r_s: ((self.r_s - derived).abs() > 1e-12 * derived).then_some(self.r_s),
        }
    }

    /// g_s · g_v.
    #[inline]
    pub fn degeneracy(&self) -> f64 {
        f64::from(self.g_s * self.g_v)
    }

    #[inline]
    pub fn kt(&self) -> f64 {
        K_B * self.temperature
    }

    pub fn energy(&self, k: Vec2, band: Band) -> f64 {
        energy(self.gamma, k, band)
    }

    pub fn velocity(&self, k: Vec2, band: Band) -> Result<Vec2> {
        velocity(self.v_f, k, band)
    }

    pub fn density_of_states(&self, eps: f64) -> f64 {
        self.degeneracy() * eps.abs() / (2.0 * std::f64::consts::PI * self.gamma * self.gamma)
    }

    pub fn fermi_momentum(&self, n: f64) -> Result<f64> {
        fermi_momentum(n, self.g_s, self.g_v)
    }

    /// Electron density of the conduction band for a Fermi-Dirac distribution
    /// at Fermi level `eps_f` and the lattice temperature (1/nm²).
    pub fn conduction_density(&self, eps_f: f64) -> f64 {
        // n = g/(2π γ²) ∫₀^∞ ε f(ε) dε
        let kt = self.kt();
        let upper = eps_f.max(0.0) + 60.0 * kt;
        let integral = simpson(|e| e * fermi_dirac(e, eps_f, self.temperature), 0.0, upper, 20_000);
        self.degeneracy() / (2.0 * std::f64::consts::PI * self.gamma * self.gamma) * integral
    }
}

/// ε = band · γ |k|.
#[inline]
pub fn energy(gamma: f64, k: Vec2, band: Band) -> f64 {
    band.sign() * gamma * k.norm()
}

/// Group velocity `band · v_F k/|k|`.
pub fn velocity(v_f: f64, k: Vec2, band: Band) -> Result<Vec2> {
    let norm = k.norm();
    if norm == 0.0 {
        return Err(Error::UndefinedDirection);
    }
    Ok(k * (band.sign() * v_f / norm))
}

/// Fermi-Dirac occupation, saturating to 0 or 1 instead of overflowing.
#[inline]
pub fn fermi_dirac(eps: f64, eps_f: f64, temperature: f64) -> f64 {
    let x = (eps - eps_f) / (K_B * temperature);
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Bose-Einstein occupation of a phonon mode of energy `hbar_omega`.
#[inline]
pub fn bose_einstein(hbar_omega: f64, temperature: f64) -> f64 {
    1.0 / (hbar_omega / (K_B * temperature)).exp_m1()
}

/// k_F = √(4πn / g_s g_v).
pub fn fermi_momentum(n: f64, g_s: u32, g_v: u32) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::Domain(format!("electron density must be positive, got {n}")));
    }
    Ok((4.0 * std::f64::consts::PI * n / f64::from(g_s * g_v)).sqrt())
}

pub(crate) fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}
