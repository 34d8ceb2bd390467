//! Independent reference computations shared by the integration tests.
//!
//! Everything here is built from the physical tables and textbook formulas
//! directly, without calling the library routines being checked.

#![allow(dead_code)]

use std::f64::consts::PI;

// Physical constants in eV, nm, ps.
pub const HBAR: f64 = 6.582_119_569e-4;
pub const K_B: f64 = 8.617_333_262e-5;
pub const E2: f64 = 1.439_964_548;

/// Table values converted by hand to eV/nm/ps units.
pub struct Physical {
    pub gamma: f64,
    pub v_f: f64,
    pub kt: f64,
    pub sigma_m: f64,
    pub v_p: f64,
    pub d_ac: f64,
    pub hw_o: f64,
    pub d_o: f64,
    pub hw_k: f64,
    pub d_k: f64,
    pub g: f64,
    pub kappa: f64,
}

impl Physical {
    pub fn table1(temperature: f64) -> Self {
        // 1 kg = 6.241509074e18 eV · 1e24 ps² / 1e18 nm²
        let kg = 6.241_509_074e24;
        let v_f = 1e8 * 1e7 / 1e12; // cm/s → nm/ps
        Physical {
            gamma: HBAR * v_f,
            v_f,
            kt: K_B * temperature,
            sigma_m: 7.6e-8 * 1e-3 * kg / 1e14,
            v_p: 2e6 * 1e7 / 1e12,
            d_ac: 6.8,
            hw_o: 0.1646,
            d_o: 1e9 / 1e7,
            hw_k: 0.124,
            d_k: 3.5e8 / 1e7,
            g: 4.0,
            kappa: 1.0,
        }
    }

    pub fn bose(&self, hw: f64) -> f64 {
        1.0 / ((hw / self.kt).exp() - 1.0)
    }

    pub fn fermi(&self, eps: f64, eps_f: f64) -> f64 {
        1.0 / (1.0 + ((eps - eps_f) / self.kt).exp())
    }

    pub fn r_s(&self) -> f64 {
        E2 / (self.kappa * self.gamma)
    }
}

fn gaussian(x: f64, sigma: f64) -> f64 {
    (-0.5 * (x / sigma).powi(2)).exp() / (sigma * (2.0 * PI).sqrt())
}

/// Out-scattering rate from `k = (ε/γ, 0)`, obtained by summing the transition
/// rate over a Cartesian k' lattice with each energy delta replaced by a
/// Gaussian of width `sigma` (eV).
pub fn broadened_phonon_rate(p: &Physical, channel: &str, eps: f64, sigma: f64) -> f64 {
    let four_pi2 = 4.0 * PI * PI;
    // (matrix element without angular factor, energy shift, occupation, angular sign)
    let (g2, shift, occ, ang): (f64, f64, f64, f64) = match channel {
        "ac" => (PI * p.d_ac.powi(2) * p.kt / (2.0 * HBAR * p.sigma_m * p.v_p.powi(2)) / four_pi2, 0.0, 1.0, 1.0),
        "opt_abs" | "opt_em" => {
            let omega = p.hw_o / HBAR;
            let g2 = 2.0 * PI * p.d_o.powi(2) / (p.sigma_m * omega) / four_pi2;
            let n = p.bose(p.hw_o);
            if channel == "opt_abs" { (g2, p.hw_o, n, 0.0) } else { (g2, -p.hw_o, n + 1.0, 0.0) }
        }
        "K_abs" | "K_em" => {
            let omega = p.hw_k / HBAR;
            let g2 = 2.0 * PI * p.d_k.powi(2) / (p.sigma_m * omega) / four_pi2;
            let n = p.bose(p.hw_k);
            if channel == "K_abs" { (g2, p.hw_k, n, -1.0) } else { (g2, -p.hw_k, n + 1.0, -1.0) }
        }
        other => panic!("unknown channel {other}"),
    };
    let target = eps + shift;
    let k_hi = (target + 8.0 * sigma) / p.gamma;
    let h = sigma / p.gamma / 3.0;
    let n = (k_hi / h).ceil() as i64;
    let mut sum = 0.0;
    for i in -n..=n {
        let kx = (i as f64 + 0.5) * h;
        for j in -n..=n {
            let ky = (j as f64 + 0.5) * h;
            let kp = (kx * kx + ky * ky).sqrt();
            let w = gaussian(p.gamma * kp - target, sigma);
            if w == 0.0 {
                continue;
            }
            let cos = kx / kp;
            sum += w * (1.0 + ang * cos);
        }
    }
    g2 * occ * sum * h * h
}

/// Conduction density `g/(2π)² ∫ f d²k` on a Cartesian midpoint lattice.
pub fn density_quadrature(p: &Physical, eps_f: f64) -> f64 {
    let k_hi = (eps_f.max(0.0) + 45.0 * p.kt) / p.gamma;
    let h = 1e-3;
    let n = (k_hi / h).ceil() as i64;
    let mut sum = 0.0;
    for i in -n..n {
        let kx = (i as f64 + 0.5) * h;
        for j in -n..n {
            let ky = (j as f64 + 0.5) * h;
            sum += p.fermi(p.gamma * (kx * kx + ky * ky).sqrt(), eps_f);
        }
    }
    p.g / (4.0 * PI * PI) * sum * h * h
}

/// Mean band energy of the Fermi-Dirac distribution, by radial Simpson.
pub fn fd_mean_energy(p: &Physical, eps_f: f64) -> f64 {
    let hi = eps_f.max(0.0) + 45.0 * p.kt;
    let n = 200_000;
    let h = hi / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let e = i as f64 * h;
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let f = p.fermi(e, eps_f);
        num += w * e * e * f;
        den += w * e * f;
    }
    num / den
}

/// Π̃(q) written out from its piecewise definition.
pub fn pi_tilde(q: f64, k_f: f64) -> f64 {
    if q <= 2.0 * k_f {
        1.0
    } else {
        1.0 + PI * q / (8.0 * k_f) - (q * q - 4.0 * k_f * k_f).sqrt() / (2.0 * q) - q / (4.0 * k_f) * (2.0 * k_f / q).asin()
    }
}

/// Screening data derived from the density: `k_F = √(4πn/g)`,
/// `C_ε = (r_s k_F / 2) g^{3/2}`.
pub struct Screen {
    pub k_f: f64,
    pub c_eps: f64,
}

impl Screen {
    pub fn from_density(p: &Physical, n: f64) -> Self {
        let k_f = (4.0 * PI * n / p.g).sqrt();
        Screen {
            k_f,
            c_eps: 0.5 * p.r_s() * k_f * p.g.powf(1.5),
        }
    }

    pub fn denominator(&self, q: f64) -> f64 {
        q + self.c_eps * pi_tilde(q, self.k_f)
    }
}

fn cos_angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let n = (a[0].hypot(a[1])) * (b[0].hypot(b[1]));
    if n == 0.0 {
        1.0
    } else {
        ((a[0] * b[0] + a[1] * b[1]) / n).clamp(-1.0, 1.0)
    }
}

/// `|M̃|²` for the collision `(k1, k2) → (k1', k2')`.
pub fn matrix_element(s: &Screen, k1: [f64; 2], k2: [f64; 2], k1p: [f64; 2], k2p: [f64; 2]) -> f64 {
    let q = (k1[0] - k1p[0]).hypot(k1[1] - k1p[1]);
    let qp = (k1[0] - k2p[0]).hypot(k1[1] - k2p[1]);
    let v = (1.0 + cos_angle(k1, k1p)) * (1.0 + cos_angle(k2, k2p)) / s.denominator(q);
    let vp = (1.0 + cos_angle(k1, k2p)) * (1.0 + cos_angle(k2, k1p)) / s.denominator(qp);
    v * v + vp * vp - v * vp
}

/// `∫_Γ |M̃|² dΓ` over the ellipse with foci `0` and `k1 + k2` and
/// `|k1'| + |k2'| = |k1| + |k2|`, by adaptive Simpson in the eccentric
/// anomaly.
pub fn ellipse_line_integral(s: &Screen, k1: [f64; 2], k2: [f64; 2], tol: f64) -> f64 {
    let p = [k1[0] + k2[0], k1[1] + k2[1]];
    let a = 0.5 * (k1[0].hypot(k1[1]) + k2[0].hypot(k2[1]));
    let c = 0.5 * p[0].hypot(p[1]);
    let b = (a * a - c * c).max(0.0).sqrt();
    let th = p[1].atan2(p[0]);
    let (ct, st) = (th.cos(), th.sin());
    let f = |beta: f64| {
        let (x, y) = (a * beta.cos(), b * beta.sin());
        let k1p = [0.5 * p[0] + x * ct - y * st, 0.5 * p[1] + x * st + y * ct];
        let k2p = [p[0] - k1p[0], p[1] - k1p[1]];
        let dl = (a * a * beta.sin().powi(2) + b * b * beta.cos().powi(2)).sqrt();
        matrix_element(s, k1, k2, k1p, k2p) * dl
    };
    // Split into panels so the adaptive rule sees every feature.
    let panels = 64;
    let w = 2.0 * PI / panels as f64;
    (0..panels).map(|i| adaptive_simpson(&f, i as f64 * w, (i + 1) as f64 * w, tol / panels as f64, 40)).sum()
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Intra-band rate from a single occupied cell with value `f` and edge
/// `delta_k`, the partner at the cell center `k2`.
pub fn single_cell_rate(p: &Physical, s: &Screen, k1: [f64; 2], k2: [f64; 2], f: f64, delta_k: f64) -> f64 {
    let pref = p.r_s().powi(2) * p.kappa.powi(2) * p.v_f * p.g / (256.0 * PI);
    pref * delta_k * delta_k * f * ellipse_line_integral(s, k1, k2, 1e-12)
}

/// p-value of a χ² statistic with `dof` degrees of freedom.
pub fn chi2_p_value(stat: f64, dof: usize) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat)
}

/// χ² statistic of observed counts against expected counts.
pub fn chi2(observed: &[u64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum()
}
