//! Static RPA screening of the Coulomb interaction in doped graphene.
//!
//! The screened denominator `ε(q)·q = q + C_ε Π̃(q)` replaces the bare `q` of
//! the 2D Coulomb potential and removes its `q → 0` singularity.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::MaterialParams;

/// Within this relative distance of `2k_F` the small-q branch is used.
const BRANCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreeningParams {
    /// Fermi momentum (1/nm).
    pub k_f: f64,
    /// Screening constant `(r_s k_F / 2)(g_s g_v)^{3/2}` (1/nm).
    pub c_eps: f64,
    pub r_s: f64,
    pub g_s: u32,
    pub g_v: u32,
}

impl ScreeningParams {
    pub fn new(k_f: f64, r_s: f64, g_s: u32, g_v: u32) -> Result<Self> {
        if !(k_f > 0.0 && k_f.is_finite()) {
            return Err(Error::Domain(format!("Fermi momentum must be positive, got {k_f}")));
        }
        let g = f64::from(g_s * g_v);
        Ok(ScreeningParams {
            k_f,
            c_eps: 0.5 * r_s * k_f * g.powf(1.5),
            r_s,
            g_s,
            g_v,
        })
    }

    /// Screening for the Fermi momentum of the electron density `n` (1/nm²).
    pub fn for_density(material: &MaterialParams, n: f64) -> Result<Self> {
        let k_f = material.fermi_momentum(n)?;
        Self::new(k_f, material.r_s, material.g_s, material.g_v)
    }

    #[inline]
    pub fn denominator(&self, q: f64) -> f64 {
        screened_denominator(q, self)
    }
}

/// Normalized static polarizability Π̃(q) of doped graphene.
#[inline]
pub fn pi_tilde(q: f64, k_f: f64) -> f64 {
    let two_kf = 2.0 * k_f;
    if q < two_kf * (1.0 + BRANCH_TOLERANCE) {
        1.0
    } else {
        1.0 + PI * q / (8.0 * k_f) - (q * q - two_kf * two_kf).sqrt() / (2.0 * q)
            - q / (4.0 * k_f) * (two_kf / q).asin()
    }
}

/// Interband part Π̃⁻(q) = πq / 8k_F.
#[inline]
pub fn pi_tilde_minus(q: f64, k_f: f64) -> f64 {
    PI * q / (8.0 * k_f)
}

/// Intraband part Π̃⁺(q).
pub fn pi_tilde_plus(q: f64, k_f: f64) -> f64 {
    let two_kf = 2.0 * k_f;
    if q < two_kf {
        1.0 - PI * q / (8.0 * k_f)
    } else {
        1.0 - (q * q - two_kf * two_kf).sqrt() / (2.0 * q) - q / (4.0 * k_f) * (two_kf / q).asin()
    }
}

/// `ε(q)·q = q + C_ε Π̃(q)`, strictly positive for `q ≥ 0`.
#[inline]
pub fn screened_denominator(q: f64, s: &ScreeningParams) -> f64 {
    q + s.c_eps * pi_tilde(q, s.k_f)
}
