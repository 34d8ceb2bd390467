//! Screened electron-electron scattering: matrix element, rate quadrature
//! and final-state sampling.
//!
//! # Rate prefactor
//!
//! Starting from the golden rule with `|M|² = ½(V² + V'² − V V')` and
//! `V(q) = 2πe² / (ε(q) q A) · ¼(1 + cos φ₁₁)(1 + cos φ₂₂)`, writing
//! `V = (π e² / 2A) Ṽ` and replacing both k-sums by `A/(2π)² ∫ dk` gives
//!
//! ```text
//! λ(k1) = e⁴ / (64 π ħ γ) · Σ_ij f_ij δk² ∫_Γ |M̃|² dΓ
//! ```
//!
//! where the energy delta has been traded for the line integral over the
//! final-state ellipse Γ (arc length, as in the cell-wise scheme). Using
//! `e² = κ γ r_s √(g_s g_v) / 2` and `γ = ħ v_F`,
//!
//! ```text
//! λ(k1) = r_s² κ² v_F g_s g_v / (256 π) · δk² · Σ_ij f_ij ∫_Γ |M̃|² dΓ.
//! ```
//!
//! With the periodic trapezoidal rule on `m` nodes this is
//! `C_ee Σ_ij f_ij Σ_k [g̃(β_{k−1}) + g̃(β_k)]` with
//! `C_ee = r_s² κ² v_F g_s g_v δk² Δβ / (512 π)`. Units: `v_F δk²` is
//! 1/(nm·ps) and `∫|M̃|² dΓ` is nm, so rates come out in 1/ps. The partner
//! sum is over wave-vectors only (no extra spin/valley factor), matching the
//! single `g_s g_v` in `C_ee`.

pub mod geometry;

use std::f64::consts::PI;

use rand::Rng;

pub use geometry::{ellipse_from_pair, hyperbola_from_pair, EllipseGeom, HyperbolaGeom};

use crate::error::{Error, Result};
use crate::grid::CellOccupancy;
use crate::material::{Band, MaterialParams};
use crate::screening::ScreeningParams;
use crate::vec2::Vec2;

/// Symmetrized squared matrix element `Ṽ(q)² + Ṽ(q')² − Ṽ(q)Ṽ(q')`
/// from transfer momenta and the four chirality angles (unsigned, in
/// `[0, π]`).
///
/// `phi11 = ∠(k1, k1')`, `phi22 = ∠(k2, k2')`, `phi12 = ∠(k1, k2')`,
/// `phi21 = ∠(k2, k1')`.
pub fn matrix_element_sq(
    q: f64,
    qp: f64,
    phi11: f64,
    phi22: f64,
    phi12: f64,
    phi21: f64,
    s: &ScreeningParams,
) -> f64 {
    let v = (1.0 + phi11.cos()) * (1.0 + phi22.cos()) / s.denominator(q);
    let vp = (1.0 + phi12.cos()) * (1.0 + phi21.cos()) / s.denominator(qp);
    symmetrize(v, vp)
}

/// [`matrix_element_sq`] evaluated directly from the four wave-vectors.
#[inline]
pub fn matrix_element_sq_vectors(k1: Vec2, k2: Vec2, k1p: Vec2, k2p: Vec2, s: &ScreeningParams) -> f64 {
    let q = (k1 - k1p).norm();
    let qp = (k1 - k2p).norm();
    let v = (1.0 + k1.cos_angle(k1p)) * (1.0 + k2.cos_angle(k2p)) / s.denominator(q);
    let vp = (1.0 + k1.cos_angle(k2p)) * (1.0 + k2.cos_angle(k1p)) / s.denominator(qp);
    symmetrize(v, vp)
}

#[inline]
fn cos_between(u: Vec2, v: Vec2, nu: f64, nv: f64) -> f64 {
    let d = nu * nv;
    if d > 0.0 {
        (u.dot(v) / d).clamp(-1.0, 1.0)
    } else {
        1.0
    }
}

#[inline]
fn symmetrize(v: f64, vp: f64) -> f64 {
    // x² + y² − xy = (x − y/2)² + 3y²/4 ≥ 0
    (v * v + vp * vp - v * vp).max(0.0)
}

/// Quadrature and sampling settings for e-e scattering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EeRateParams {
    /// β nodes of the trapezoidal rule (even, ≥ 8).
    pub m: usize,
    /// Hyperbola parameter range `[−beta_max, beta_max]`.
    pub beta_max: f64,
    /// Radius of the compact set Ω retained on the hyperbola (1/nm).
    pub k_max: f64,
    /// Integrate both hyperbola branches instead of the sign-consistent one.
    pub both_branches: bool,
    /// Draw β with density ∝ `|M̃|² dΓ/dβ` instead of uniformly.
    pub beta_weighted: bool,
}

impl EeRateParams {
    pub fn new(m: usize, beta_max: f64, k_max: f64) -> Result<Self> {
        let p = EeRateParams {
            m,
            beta_max,
            k_max,
            both_branches: false,
            beta_weighted: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 8 || self.m % 2 != 0 {
            return Err(Error::Config(format!("ee quadrature needs an even m ≥ 8, got {}", self.m)));
        }
        if !(self.beta_max > 0.0) {
            return Err(Error::Config(format!("beta_max must be positive, got {}", self.beta_max)));
        }
        if !(self.k_max > 0.0) {
            return Err(Error::Config(format!("k_max must be positive, got {}", self.k_max)));
        }
        Ok(())
    }
}

/// Everything needed to evaluate e-e rates for one material and screening
/// state.
#[derive(Debug, Clone)]
pub struct EeKernel {
    pub screening: ScreeningParams,
    pub params: EeRateParams,
    /// `r_s² κ² v_F g_s g_v / (512 π)`; multiply by `δk² Δβ` to get `C_ee`.
    base_prefactor: f64,
    nodes: Vec<(f64, f64)>,
}

impl EeKernel {
    pub fn new(material: &MaterialParams, screening: ScreeningParams, params: EeRateParams) -> Result<Self> {
        params.validate()?;
        let base_prefactor = material.r_s * material.r_s * material.kappa * material.kappa * material.v_f
            * material.degeneracy()
            / (512.0 * PI);
        let d_beta = 2.0 * PI / params.m as f64;
        let nodes = (0..params.m)
            .map(|k| {
                let (s, c) = (k as f64 * d_beta).sin_cos();
                (c, s)
            })
            .collect();
        Ok(EeKernel {
            screening,
            params,
            base_prefactor,
            nodes,
        })
    }

    /// Intra-band trapezoidal step `2π / m`.
    pub fn d_beta(&self) -> f64 {
        2.0 * PI / self.params.m as f64
    }

    /// Inter-band trapezoidal step `2 β_max / m`.
    pub fn d_beta_inter(&self) -> f64 {
        2.0 * self.params.beta_max / self.params.m as f64
    }

    /// `C_ee` for cell edge `delta_k` and step `d_beta`.
    pub fn c_ee(&self, delta_k: f64, d_beta: f64) -> f64 {
        self.base_prefactor * delta_k * delta_k * d_beta
    }

    /// `g̃(β) = |M̃|²(q(β), q'(β)) · dΓ/dβ` on the intra-band ellipse.
    #[inline]
    pub fn intra_integrand(&self, geom: &EllipseGeom, cos_beta: f64, sin_beta: f64) -> f64 {
        let k1p = geom.point_cs(cos_beta, sin_beta);
        let k2p = geom.total_momentum() - k1p;
        matrix_element_sq_vectors(geom.k1, geom.k2, k1p, k2p, &self.screening)
            * geom.line_element(sin_beta, cos_beta)
    }

    /// Trapezoidal approximation of `∫_Γ |M̃|² dΓ` over the ellipse of
    /// `(k1, k2)`, on the kernel's `m` nodes.
    pub fn ring_integral(&self, k1: Vec2, k2: Vec2) -> f64 {
        let Ok(geom) = ellipse_from_pair(k1, k2) else {
            return 0.0;
        };
        self.ring_sum(&geom) * self.d_beta()
    }

    /// `Σ_k g̃(β_k)` with the focal distances `|k1'| = a + c cos β`,
    /// `|k2'| = a − c cos β` taken in closed form.
    fn ring_sum(&self, g: &EllipseGeom) -> f64 {
        let (k1, k2) = (g.k1, g.k2);
        let (n1, n2) = (k1.norm(), k2.norm());
        let (ux, uy) = (g.cos_theta(), g.sin_theta());
        let (a2, b2) = (g.a * g.a, g.b * g.b);
        let s = &self.screening;
        let mut sum = 0.0;
        for &(cb, sb) in &self.nodes {
            let (lx, ly) = (g.a * cb, g.b * sb);
            let p = Vec2::new(g.center.x + lx * ux - ly * uy, g.center.y + lx * uy + ly * ux);
            let p2 = g.center * 2.0 - p;
            let np = g.a + g.c * cb;
            let np2 = g.a - g.c * cb;
            let q = (k1 - p).norm();
            let qp = (p - k2).norm();
            let c11 = cos_between(k1, p, n1, np);
            let c22 = cos_between(k2, p2, n2, np2);
            let c12 = cos_between(k1, p2, n1, np2);
            let c21 = cos_between(k2, p, n2, np);
            let v = (1.0 + c11) * (1.0 + c22) / s.denominator(q);
            let vp = (1.0 + c12) * (1.0 + c21) / s.denominator(qp);
            sum += symmetrize(v, vp) * (a2 * sb * sb + b2 * cb * cb).sqrt();
        }
        sum
    }

    /// Intra-band e-e scattering rate (1/ps) of a conduction electron at
    /// `k1`, partners taken at the cell centers of `occ`.
    pub fn intra_rate<O: CellOccupancy>(&self, k1: Vec2, occ: &O) -> f64 {
        let delta_k = occ.spec().delta_k();
        let mut total = 0.0;
        occ.for_each_occupied(Band::Conduction, |k2, f| {
            total += f * self.ring_integral(k1, k2);
        });
        // Σ_k [g(β_{k−1}) + g(β_k)] = 2 Σ_k g(β_k) on a periodic grid.
        2.0 * self.c_ee(delta_k, self.d_beta()) * total / self.d_beta()
    }

    /// Trapezoidal sum `Σ_k [g(β_{k−1}) + g(β_k)]` along the hyperbola of
    /// `(k1, k2)`, restricted to final states inside Ω.
    pub fn hyperbola_sum(&self, k1: Vec2, k2: Vec2) -> f64 {
        let Ok(geom) = hyperbola_from_pair(k1, k2) else {
            return 0.0;
        };
        let m = self.params.m;
        let d_beta = self.d_beta_inter();
        let k_max = self.params.k_max;
        let sides: &[f64] = if self.params.both_branches {
            &[1.0, -1.0]
        } else if geom.branch > 0.0 {
            &[1.0]
        } else {
            &[-1.0]
        };
        let mut total = 0.0;
        for &side in sides {
            for j in 0..=m {
                let beta = -self.params.beta_max + j as f64 * d_beta;
                let (k1p, k2p) = geom.final_pair_on(side, beta);
                if k1p.norm() > k_max || k2p.norm() > k_max {
                    continue;
                }
                let weight = if j == 0 || j == m { 1.0 } else { 2.0 };
                total += weight
                    * matrix_element_sq_vectors(k1, k2, k1p, k2p, &self.screening)
                    * geom.line_element(beta);
            }
        }
        total
    }

    /// Inter-band e-e scattering rate (1/ps) of a conduction electron at `k1`
    /// against the valence-band occupation of `occ`.
    pub fn inter_rate<O: CellOccupancy>(&self, k1: Vec2, occ: &O) -> f64 {
        let delta_k = occ.spec().delta_k();
        let mut total = 0.0;
        occ.for_each_occupied(Band::Valence, |k2, f| {
            total += f * self.hyperbola_sum(k1, k2);
        });
        self.c_ee(delta_k, self.d_beta_inter()) * total
    }

    /// Draws the ellipse parameter of an intra-band event.
    pub fn sample_intra_beta<R: Rng + ?Sized>(&self, geom: &EllipseGeom, rng: &mut R) -> f64 {
        if !self.params.beta_weighted {
            return rng.random::<f64>() * 2.0 * PI;
        }
        let g: Vec<f64> = self
            .nodes
            .iter()
            .map(|&(c, s)| self.intra_integrand(geom, c, s))
            .collect();
        let m = g.len();
        let weights: Vec<f64> = (0..m).map(|k| g[k] + g[(k + 1) % m]).collect();
        let total: f64 = weights.iter().sum();
        let d_beta = self.d_beta();
        if !(total > 0.0) {
            return rng.random::<f64>() * 2.0 * PI;
        }
        let mut target = rng.random::<f64>() * total;
        let mut interval = m - 1;
        for (k, w) in weights.iter().enumerate() {
            if target < *w {
                interval = k;
                break;
            }
            target -= w;
        }
        (interval as f64 + rng.random::<f64>()) * d_beta
    }

    /// Draws a final state on the sign-consistent hyperbola branch with β
    /// uniform on the part of `[−β_max, β_max]` that stays inside Ω; `None`
    /// when the pair has no admissible final state.
    pub fn sample_inter_final<R: Rng + ?Sized>(&self, k1: Vec2, k2: Vec2, rng: &mut R) -> Option<(Vec2, Vec2)> {
        let geom = hyperbola_from_pair(k1, k2).ok()?;
        let side = if self.params.both_branches && rng.random::<bool>() {
            -geom.branch
        } else {
            geom.branch
        };
        for _ in 0..64 {
            let beta = (2.0 * rng.random::<f64>() - 1.0) * self.params.beta_max;
            let (k1p, k2p) = geom.final_pair_on(side, beta);
            if k1p.norm() <= self.params.k_max && k2p.norm() <= self.params.k_max {
                return Some((k1p, k2p));
            }
        }
        None
    }
}

/// Draws the outgoing pair of an intra-band event between `k1` and `k2`.
/// Returns `None` for a degenerate (collinear, co-directed) pair, which is
/// treated as a null event.
pub fn sample_intra_final<R: Rng + ?Sized>(
    kernel: &EeKernel,
    k1: Vec2,
    k2: Vec2,
    rng: &mut R,
) -> Option<(Vec2, Vec2)> {
    let geom = ellipse_from_pair(k1, k2).ok()?;
    if geom.is_degenerate() {
        return None;
    }
    let beta = kernel.sample_intra_beta(&geom, rng);
    Some(geom.final_pair(beta))
}
