//! Electron-phonon scattering in the conduction band.
//!
//! Rates are the out-scattering rates obtained by integrating the
//! golden-rule transition rate over the final-state circle, with the k'-sum
//! replaced by `∫ dk' / (2π)²` per state (the `(2π)⁻²` is carried by the
//! squared matrix elements). Pauli blocking is not part of the rates; the
//! engine applies it by rejection.
//!
//! With the linear dispersion every channel has a closed form:
//!
//! * acoustic (elastic, `(1 + cos ϑ)`): `D_ac² k_B T ε / (4 ħ σ_m v_p² γ²)`
//! * optical (LO + TO, isotropic): `D_O² N (ε ± ħω_O) / (σ_m ω_O γ²)`
//! * K phonon (`(1 − cos ϑ)`): `D_K² N (ε ± ħω_K) / (σ_m ω_K γ²)`
//!
//! where `N = n` for absorption and `n + 1` for emission.

use std::f64::consts::PI;

use rand::Rng;

use crate::material::{bose_einstein, MaterialParams, HBAR};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhononKind {
    AcousticElastic,
    Optical,
    KPhonon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Absorption,
    Emission,
    /// Elastic channels neither absorb nor emit.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhononChannel {
    pub kind: PhononKind,
    pub direction: Direction,
}

impl PhononChannel {
    pub const ACOUSTIC: PhononChannel = PhononChannel {
        kind: PhononKind::AcousticElastic,
        direction: Direction::NotApplicable,
    };
    pub const OPTICAL_ABS: PhononChannel = PhononChannel {
        kind: PhononKind::Optical,
        direction: Direction::Absorption,
    };
    pub const OPTICAL_EM: PhononChannel = PhononChannel {
        kind: PhononKind::Optical,
        direction: Direction::Emission,
    };
    pub const K_ABS: PhononChannel = PhononChannel {
        kind: PhononKind::KPhonon,
        direction: Direction::Absorption,
    };
    pub const K_EM: PhononChannel = PhononChannel {
        kind: PhononKind::KPhonon,
        direction: Direction::Emission,
    };

    /// All channels, in rate-table column order.
    pub const ALL: [PhononChannel; 5] = [
        Self::ACOUSTIC,
        Self::OPTICAL_ABS,
        Self::OPTICAL_EM,
        Self::K_ABS,
        Self::K_EM,
    ];

    pub fn name(self) -> &'static str {
        match (self.kind, self.direction) {
            (PhononKind::AcousticElastic, _) => "ac",
            (PhononKind::Optical, Direction::Absorption) => "opt_abs",
            (PhononKind::Optical, _) => "opt_em",
            (PhononKind::KPhonon, Direction::Absorption) => "K_abs",
            (PhononKind::KPhonon, _) => "K_em",
        }
    }
}

/// Closed-form phonon rates for one material at fixed lattice temperature.
#[derive(Debug, Clone)]
pub struct PhononRates {
    acoustic_slope: f64,
    optical_coeff: f64,
    k_coeff: f64,
    pub hbar_omega_o: f64,
    pub hbar_omega_k: f64,
    pub n_o: f64,
    pub n_k: f64,
}

impl PhononRates {
    pub fn new(m: &MaterialParams) -> Self {
        let g2 = m.gamma * m.gamma;
        let omega_o = m.hbar_omega_o / HBAR;
        let omega_k = m.hbar_omega_k / HBAR;
        PhononRates {
            acoustic_slope: m.d_ac * m.d_ac * m.kt() / (4.0 * HBAR * m.sigma_m * m.v_p * m.v_p * g2),
            optical_coeff: m.d_o * m.d_o / (m.sigma_m * omega_o * g2),
            k_coeff: m.d_k * m.d_k / (m.sigma_m * omega_k * g2),
            hbar_omega_o: m.hbar_omega_o,
            hbar_omega_k: m.hbar_omega_k,
            n_o: bose_einstein(m.hbar_omega_o, m.temperature),
            n_k: bose_einstein(m.hbar_omega_k, m.temperature),
        }
    }

    /// Elastic acoustic rate (1/ps) at conduction-band energy `eps ≥ 0`.
    pub fn acoustic(&self, eps: f64) -> f64 {
        self.acoustic_slope * eps.max(0.0)
    }

    pub fn optical(&self, eps: f64, direction: Direction) -> f64 {
        inelastic(self.optical_coeff, self.n_o, self.hbar_omega_o, eps, direction)
    }

    pub fn k_phonon(&self, eps: f64, direction: Direction) -> f64 {
        inelastic(self.k_coeff, self.n_k, self.hbar_omega_k, eps, direction)
    }

    pub fn rate(&self, channel: PhononChannel, eps: f64) -> f64 {
        match channel.kind {
            PhononKind::AcousticElastic => self.acoustic(eps),
            PhononKind::Optical => self.optical(eps, channel.direction),
            PhononKind::KPhonon => self.k_phonon(eps, channel.direction),
        }
    }

    /// Rates of all channels in [`PhononChannel::ALL`] order.
    pub fn all(&self, eps: f64) -> [f64; 5] {
        PhononChannel::ALL.map(|c| self.rate(c, eps))
    }

    /// Energy exchanged with the lattice by one event of `channel`
    /// (positive when the electron gains energy).
    pub fn energy_change(&self, channel: PhononChannel) -> f64 {
        let hw = match channel.kind {
            PhononKind::AcousticElastic => return 0.0,
            PhononKind::Optical => self.hbar_omega_o,
            PhononKind::KPhonon => self.hbar_omega_k,
        };
        match channel.direction {
            Direction::Absorption => hw,
            Direction::Emission => -hw,
            Direction::NotApplicable => 0.0,
        }
    }
}

fn inelastic(coeff: f64, n: f64, hw: f64, eps: f64, direction: Direction) -> f64 {
    let eps = eps.max(0.0);
    match direction {
        Direction::Absorption => coeff * n * (eps + hw),
        // Below threshold the final state would lie in the valence band,
        // which the unipolar model excludes.
        Direction::Emission if eps >= hw => coeff * (n + 1.0) * (eps - hw),
        Direction::Emission => 0.0,
        Direction::NotApplicable => 0.0,
    }
}

/// Precomputed per-channel rates on a uniform energy grid, linearly
/// interpolated.
#[derive(Debug, Clone)]
pub struct PhononRateTable {
    pub d_eps: f64,
    pub eps_max: f64,
    rates: Vec<[f64; 5]>,
}

impl PhononRateTable {
    pub fn new(rates: &PhononRates, eps_max: f64, points: usize) -> Self {
        let points = points.max(2);
        let d_eps = eps_max / (points - 1) as f64;
        let rates = (0..points).map(|i| rates.all(i as f64 * d_eps)).collect();
        PhononRateTable {
            d_eps,
            eps_max,
            rates,
        }
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.rates.len()).map(move |i| i as f64 * self.d_eps)
    }

    pub fn row(&self, i: usize) -> &[f64; 5] {
        &self.rates[i]
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Interpolated rates; energies beyond the table are clamped to its ends.
    pub fn lookup(&self, eps: f64) -> [f64; 5] {
        let x = (eps.max(0.0) / self.d_eps).min((self.rates.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.rates.len() - 2);
        let t = x - i as f64;
        let (lo, hi) = (&self.rates[i], &self.rates[i + 1]);
        std::array::from_fn(|c| lo[c] + t * (hi[c] - lo[c]))
    }
}

/// Draws the final wave-vector of a phonon event from `k`.
///
/// The scattering angle ϑ (relative to `k`) follows `1 + cos ϑ` for acoustic,
/// uniform for optical and `1 − cos ϑ` for K phonons. The final magnitude
/// satisfies `γ|k'| = γ|k| + Δε`.
///
/// # Panics
///
/// Panics if an emission is requested below threshold; callers must screen
/// such events out through the (zero) rate.
pub fn sample_final_state<R: Rng + ?Sized>(
    k: Vec2,
    channel: PhononChannel,
    rates: &PhononRates,
    gamma: f64,
    rng: &mut R,
) -> Vec2 {
    let k_abs = k.norm();
    let k_final = k_abs + rates.energy_change(channel) / gamma;
    assert!(
        k_final >= 0.0,
        "phonon emission below threshold: |k| = {k_abs}, channel {channel:?}"
    );
    let theta = match channel.kind {
        PhononKind::AcousticElastic => sample_cosine_weighted(1.0, rng),
        PhononKind::Optical => rng.random::<f64>() * 2.0 * PI,
        PhononKind::KPhonon => sample_cosine_weighted(-1.0, rng),
    };
    let reference = if k_abs > 0.0 { k.angle() } else { 0.0 };
    Vec2::from_polar(k_final, reference + theta)
}

/// Angle on [0, 2π) with density `(1 + sign·cos ϑ) / 2π`, by rejection.
fn sample_cosine_weighted<R: Rng + ?Sized>(sign: f64, rng: &mut R) -> f64 {
    loop {
        let theta = rng.random::<f64>() * 2.0 * PI;
        if 2.0 * rng.random::<f64>() < 1.0 + sign * theta.cos() {
            return theta;
        }
    }
}
