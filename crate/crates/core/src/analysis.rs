//! Numerical checks of the structure of the e-e collision operator:
//! collisional invariants, the equilibrium kernel and pointwise entropy
//! dissipation, all evaluated on sampled conserving quadruples.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::ee::{ellipse_from_pair, hyperbola_from_pair};
use crate::error::{Error, Result};
use crate::material::Band;
use crate::vec2::Vec2;

/// Parameter range used for inter-band quadruples.
pub const INTER_BETA_MAX: f64 = 2.0;

/// Rounding floor for the entropy integrand of kernel members. `A` and `B`
/// then agree up to rounding of φ, so `|A − B|` and `|log A − log B|` both
/// stay below `1e-12` and their product below `1e-24`.
pub const KERNEL_ENTROPY_TOL: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadKind {
    /// Both electrons in the conduction band.
    Intra,
    /// `k1`, `k1'` in the conduction band; `k2`, `k2'` in the valence band.
    Inter,
}

impl QuadKind {
    /// Bands of `(k1, k2, k1', k2')`.
    pub fn bands(self) -> [Band; 4] {
        match self {
            QuadKind::Intra => [Band::Conduction; 4],
            QuadKind::Inter => [Band::Conduction, Band::Valence, Band::Conduction, Band::Valence],
        }
    }
}

/// Incoming pair `(k1, k2)` and outgoing pair `(k1p, k2p)` obeying momentum
/// and energy conservation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservingQuadruple {
    pub k1: Vec2,
    pub k2: Vec2,
    pub k1p: Vec2,
    pub k2p: Vec2,
    pub kind: QuadKind,
}

impl ConservingQuadruple {
    pub fn points(&self) -> [(Vec2, Band); 4] {
        let b = self.kind.bands();
        [(self.k1, b[0]), (self.k2, b[1]), (self.k1p, b[2]), (self.k2p, b[3])]
    }

    /// Largest wave-vector magnitude among the four.
    pub fn scale(&self) -> f64 {
        self.k1.norm().max(self.k2.norm()).max(self.k1p.norm()).max(self.k2p.norm())
    }

    /// `|k1 + k2 − k1' − k2'|`.
    pub fn momentum_residual(&self) -> f64 {
        ((self.k1 + self.k2) - (self.k1p + self.k2p)).norm()
    }

    /// Energy residual in units of γ: `Σ band·|k|` in minus out.
    pub fn energy_residual(&self) -> f64 {
        let [a, b, c, d] = self.points().map(|(k, band)| band.sign() * k.norm());
        (a + b - c - d).abs()
    }

    /// The same collision with all wave-vectors multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        ConservingQuadruple {
            k1: self.k1 * lambda,
            k2: self.k2 * lambda,
            k1p: self.k1p * lambda,
            k2p: self.k2p * lambda,
            kind: self.kind,
        }
    }
}

impl fmt::Display for ConservingQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} k1=({:.6}, {:.6}) k2=({:.6}, {:.6}) -> k1'=({:.6}, {:.6}) k2'=({:.6}, {:.6})",
            self.kind,
            self.k1.x,
            self.k1.y,
            self.k2.x,
            self.k2.y,
            self.k1p.x,
            self.k1p.y,
            self.k2p.x,
            self.k2p.y
        )
    }
}

fn uniform_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Vec2 {
    let r = radius * rng.random::<f64>().sqrt();
    Vec2::from_polar(r, 2.0 * PI * rng.random::<f64>())
}

/// Samples `count` quadruples with incoming wave-vectors uniform in the disk
/// of radius `k_scale`, outgoing pairs on the ellipse (intra) or the
/// sign-consistent hyperbola branch (inter) at a uniform parameter.
/// Degenerate incoming pairs are re-drawn.
pub fn generate_quadruples<R: Rng + ?Sized>(
    count: usize,
    kind: QuadKind,
    k_scale: f64,
    rng: &mut R,
) -> Vec<ConservingQuadruple> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k1 = uniform_disk(k_scale, rng);
        let k2 = uniform_disk(k_scale, rng);
        let pair = match kind {
            QuadKind::Intra => ellipse_from_pair(k1, k2)
                .ok()
                .filter(|g| !g.is_degenerate())
                .map(|g| g.final_pair(2.0 * PI * rng.random::<f64>())),
            QuadKind::Inter => hyperbola_from_pair(k1, k2)
                .ok()
                .map(|g| g.final_pair((2.0 * rng.random::<f64>() - 1.0) * INTER_BETA_MAX)),
        };
        if let Some((k1p, k2p)) = pair {
            out.push(ConservingQuadruple { k1, k2, k1p, k2p, kind });
        }
    }
    out
}

/// `φ(k) = a + b·k + c·ε(k)/γ`, i.e. `a + b·k + c|k|` in the conduction band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantCandidate {
    pub a: f64,
    pub b: Vec2,
    pub c: f64,
}

impl InvariantCandidate {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut u = || 2.0 * rng.random::<f64>() - 1.0;
        InvariantCandidate {
            a: u(),
            b: Vec2::new(u(), u()),
            c: u(),
        }
    }

    #[inline]
    pub fn eval(&self, k: Vec2, band: Band) -> f64 {
        self.a + self.b.dot(k) + self.c * band.sign() * k.norm()
    }
}

/// Largest residual over a set of quadruples, with the quadruple attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub max: f64,
    pub witness: Option<ConservingQuadruple>,
}

impl Residual {
    fn over(quads: &[ConservingQuadruple], mut value: impl FnMut(&ConservingQuadruple) -> f64) -> Self {
        let mut best = Residual { max: 0.0, witness: None };
        for q in quads {
            let v = value(q);
            if v > best.max || v.is_nan() {
                best = Residual {
                    max: v,
                    witness: Some(*q),
                };
                if v.is_nan() {
                    break;
                }
            }
        }
        best
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(q) => write!(f, "{:.3e} at {q}", self.max),
            None => write!(f, "{:.3e}", self.max),
        }
    }
}

/// `max |φ(k1) + φ(k2) − φ(k1') − φ(k2')|` over `quads`.
pub fn check_invariant(phi: impl Fn(Vec2, Band) -> f64, quads: &[ConservingQuadruple]) -> Residual {
    Residual::over(quads, |q| {
        let [a, b, c, d] = q.points().map(|(k, band)| phi(k, band));
        (a + b - c - d).abs()
    })
}

/// Generalized Fermi-Dirac distribution `1 / (1 + exp(a + b·k + c·ε/γ))`.
pub fn kernel_member(p: InvariantCandidate) -> impl Fn(Vec2, Band) -> f64 {
    move |k, band| logistic(p.eval(k, band))
}

/// `1 / (1 + eˣ)` without overflow.
#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Gain and loss products `(A, B) = (f'f'*(1−f)(1−f*), f f*(1−f')(1−f'*))`.
pub fn gain_loss(f: &impl Fn(Vec2, Band) -> f64, q: &ConservingQuadruple) -> (f64, f64) {
    let [f1, f2, f1p, f2p] = q.points().map(|(k, band)| f(k, band));
    (f1p * f2p * (1.0 - f1) * (1.0 - f2), f1 * f2 * (1.0 - f1p) * (1.0 - f2p))
}

/// `max |A − B|` for an arbitrary distribution.
pub fn detailed_balance_residual(f: impl Fn(Vec2, Band) -> f64, quads: &[ConservingQuadruple]) -> Residual {
    Residual::over(quads, |q| {
        let (a, b) = gain_loss(&f, q);
        (a - b).abs()
    })
}

/// Detailed-balance residual of the kernel member with parameters `p`.
pub fn equilibrium_annihilation(p: InvariantCandidate, quads: &[ConservingQuadruple]) -> Residual {
    detailed_balance_residual(kernel_member(p), quads)
}

/// `H(f) = log(f / (1 − f))`.
pub fn entropy_h(f: f64) -> f64 {
    (f / (1.0 - f)).ln()
}

/// `(A − B)(log B − log A)`, the pointwise entropy-production integrand.
/// Non-positive for every admissible `f`.
pub fn entropy_integrand_sign(f: impl Fn(Vec2, Band) -> f64, q: &ConservingQuadruple) -> Result<f64> {
    let values = q.points().map(|(k, band)| f(k, band));
    if let Some(&bad) = values.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
        return Err(Error::ExcludedPoint(bad));
    }
    let [f1, f2, f1p, f2p] = values;
    let a = f1p * f2p * (1.0 - f1) * (1.0 - f2);
    let b = f1 * f2 * (1.0 - f1p) * (1.0 - f2p);
    Ok((a - b) * (b.ln() - a.ln()))
}

/// Random smooth occupation `f = 1/(1 + exp(g(k)))` with `g` a constant plus
/// three random plane waves; strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomOccupation {
    pub offset: f64,
    pub modes: [(Vec2, f64, f64); 3],
}

impl RandomOccupation {
    pub fn random<R: Rng + ?Sized>(k_scale: f64, rng: &mut R) -> Self {
        let mut mode = || {
            let w = Vec2::from_polar(rng.random::<f64>() * 8.0 / k_scale, 2.0 * PI * rng.random::<f64>());
            (w, 3.0 * rng.random::<f64>(), 2.0 * PI * rng.random::<f64>())
        };
        let modes = [mode(), mode(), mode()];
        RandomOccupation {
            offset: 4.0 * rng.random::<f64>() - 2.0,
            modes,
        }
    }

    pub fn eval(&self, k: Vec2, band: Band) -> f64 {
        let shift = if band == Band::Valence { -1.5 } else { 0.0 };
        let g = self.offset + shift + self.modes.iter().map(|(w, amp, ph)| amp * (w.dot(k) + ph).cos()).sum::<f64>();
        logistic(g)
    }
}

/// A distribution outside the kernel: equal mixture of two Fermi-Dirac
/// bumps centered at `±k0` along x.
pub fn double_bump(k0: f64, width: f64) -> impl Fn(Vec2, Band) -> f64 {
    move |k, _| {
        let left = logistic(((k - Vec2::new(-k0, 0.0)).norm() - width) / (0.1 * width));
        let right = logistic(((k - Vec2::new(k0, 0.0)).norm() - width) / (0.1 * width));
        0.5 * (left + right)
    }
}

/// Pairs `(k, k')` with `|k'| = |k|`: the final states of elastic
/// (acoustic) phonon events.
pub fn elastic_pairs<R: Rng + ?Sized>(count: usize, k_scale: f64, rng: &mut R) -> Vec<(Vec2, Vec2)> {
    (0..count)
        .map(|_| {
            let k = uniform_disk(k_scale, rng);
            let kp = Vec2::from_polar(k.norm(), 2.0 * PI * rng.random::<f64>());
            (k, kp)
        })
        .collect()
}

/// `max |φ(k) − φ(k')|` over elastic pairs.
pub fn check_elastic_invariant(phi: impl Fn(Vec2) -> f64, pairs: &[(Vec2, Vec2)]) -> f64 {
    pairs.iter().map(|&(k, kp)| (phi(k) - phi(kp)).abs()).fold(0.0, f64::max)
}

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

/// Sample sizes for [`property_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteSizes {
    pub quadruples: usize,
    pub candidates: usize,
    pub kernel_members: usize,
    pub kernel_quadruples: usize,
    pub entropy_evaluations: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            quadruples: 100_000,
            candidates: 100,
            kernel_members: 100,
            kernel_quadruples: 10_000,
            entropy_evaluations: 1_000_000,
        }
    }
}

/// Runs the invariant, kernel and entropy checks with sampled inputs.
pub fn property_suite<R: Rng + ?Sized>(sizes: SuiteSizes, k_scale: f64, rng: &mut R) -> Vec<CheckResult> {
    let mut results = Vec::new();
    let mut push = |name: &str, passed: bool, value: f64, threshold: f64, detail: String| {
        results.push(CheckResult {
            name: name.into(),
            passed,
            value,
            threshold,
            detail,
        })
    };

    let intra = generate_quadruples(sizes.quadruples, QuadKind::Intra, k_scale, rng);
    let inter = generate_quadruples(sizes.quadruples, QuadKind::Inter, k_scale, rng);
    for (name, quads) in [("intra", &intra), ("inter", &inter)] {
        let mom = Residual::over(quads, |q| q.momentum_residual() / q.scale());
        let en = Residual::over(quads, |q| q.energy_residual() / q.scale());
        let worst = mom.max.max(en.max);
        push(
            &format!("conservation_{name}"),
            worst <= 1e-10,
            worst,
            1e-10,
            format!("momentum {mom}; energy {en}"),
        );
    }

    let mut worst = Residual { max: 0.0, witness: None };
    for _ in 0..sizes.candidates {
        let phi = InvariantCandidate::random(rng);
        for quads in [&intra, &inter] {
            let r = check_invariant(|k, b| phi.eval(k, b), quads);
            if r.max > worst.max {
                worst = r;
            }
        }
    }
    push("invariant_a_b_c", worst.max <= 1e-9, worst.max, 1e-9, worst.to_string());

    let sq = check_invariant(|k, _| k.norm_sq(), &intra);
    let threshold = 0.1 * k_scale * k_scale;
    push("non_invariant_k_squared", sq.max > threshold, sq.max, threshold, format!("witness {sq}"));

    let mut worst = Residual { max: 0.0, witness: None };
    let mut kernel_entropy = 0.0f64;
    let n_kq = sizes.kernel_quadruples.min(intra.len());
    for _ in 0..sizes.kernel_members {
        let p = InvariantCandidate {
            a: 6.0 * rng.random::<f64>() - 3.0,
            b: Vec2::new(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0) * (1.0 / k_scale),
            c: 8.0 * rng.random::<f64>() / k_scale,
        };
        for quads in [&intra[..n_kq], &inter[..n_kq]] {
            let r = equilibrium_annihilation(p, quads);
            if r.max > worst.max {
                worst = r;
            }
            for q in quads {
                if let Ok(v) = entropy_integrand_sign(kernel_member(p), q) {
                    kernel_entropy = kernel_entropy.max(v.abs());
                }
            }
        }
    }
    push("kernel_detailed_balance", worst.max <= 1e-12, worst.max, 1e-12, worst.to_string());

    let bump = detailed_balance_residual(double_bump(0.4 * k_scale, 0.3 * k_scale), &intra);
    push("non_kernel_rejected", bump.max > 1e-3, bump.max, 1e-3, format!("witness {bump}"));

    let mut max_value = f64::NEG_INFINITY;
    let mut excluded = 0u64;
    for n in 0..sizes.entropy_evaluations {
        let f = RandomOccupation::random(k_scale, rng);
        let q = if n % 2 == 0 {
            &intra[n / 2 % intra.len()]
        } else {
            &inter[n / 2 % inter.len()]
        };
        match entropy_integrand_sign(|k, b| f.eval(k, b), q) {
            Ok(v) => max_value = max_value.max(v),
            Err(_) => excluded += 1,
        }
    }
    push(
        "entropy_integrand_nonpositive",
        max_value <= 0.0,
        max_value,
        0.0,
        format!("{} evaluations, {excluded} excluded", sizes.entropy_evaluations),
    );
    push(
        "entropy_integrand_zero_on_kernel",
        kernel_entropy <= KERNEL_ENTROPY_TOL,
        kernel_entropy,
        KERNEL_ENTROPY_TOL,
        "largest |(A - B)(log B - log A)| over kernel members".into(),
    );

    let pairs = elastic_pairs(sizes.quadruples, k_scale, rng);
    let radial = check_elastic_invariant(|k| 0.7 - 1.3 * k.norm(), &pairs);
    push("elastic_invariant_a_c", radial <= 1e-9, radial, 1e-9, String::new());
    let linear = check_elastic_invariant(|k| k.dot(Vec2::new(0.6, -0.8)), &pairs);
    let threshold = 0.1 * k_scale;
    push("elastic_non_invariant_b", linear > threshold, linear, threshold, String::new());

    results
}

/// [`property_suite`] driven by a seeded ChaCha8 stream.
pub fn seeded_property_suite(sizes: SuiteSizes, k_scale: f64, seed: u64) -> Vec<CheckResult> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    property_suite(sizes, k_scale, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn generated_quadruples_conserve() {
        let mut r = rng();
        for kind in [QuadKind::Intra, QuadKind::Inter] {
            for q in generate_quadruples(2000, kind, 1.0, &mut r) {
                assert!(q.momentum_residual() <= 1e-12 * q.scale(), "{q}");
                assert!(q.energy_residual() <= 1e-12 * q.scale(), "{q}");
            }
        }
    }

    #[test]
    fn incoming_parameter_reproduces_incoming_pair() {
        let mut r = rng();
        for q in generate_quadruples(500, QuadKind::Intra, 1.0, &mut r) {
            let g = ellipse_from_pair(q.k1, q.k2).unwrap();
            let (a, b) = g.final_pair(g.parameter_of(q.k1));
            assert!((a - q.k1).norm() < 1e-9 && (b - q.k2).norm() < 1e-9);
        }
    }

    #[test]
    fn constants_are_exact_invariants() {
        let mut r = rng();
        let quads = generate_quadruples(1000, QuadKind::Intra, 1.0, &mut r);
        assert_eq!(check_invariant(|_, _| 3.25, &quads).max, 0.0);
    }

    #[test]
    fn scaling_preserves_conservation() {
        let mut r = rng();
        for q in generate_quadruples(200, QuadKind::Inter, 1.0, &mut r) {
            let s = q.scaled(3.7);
            assert!(s.momentum_residual() <= 1e-12 * s.scale());
            assert!(s.energy_residual() <= 1e-12 * s.scale());
        }
    }

    #[test]
    fn fermi_dirac_is_in_the_kernel() {
        let mut r = rng();
        let quads = generate_quadruples(5000, QuadKind::Intra, 0.5, &mut r);
        let kt = 0.025852;
        let gamma = 0.658_211_956_9;
        let fd = InvariantCandidate {
            a: -0.15 / kt,
            b: Vec2::ZERO,
            c: gamma / kt,
        };
        assert!(equilibrium_annihilation(fd, &quads).max <= 1e-12);
    }

    #[test]
    fn entropy_excluded_points() {
        let mut r = rng();
        let q = generate_quadruples(1, QuadKind::Intra, 1.0, &mut r)[0];
        assert!(matches!(entropy_integrand_sign(|_, _| 1.0, &q), Err(Error::ExcludedPoint(_))));
        assert_eq!(entropy_h(0.5), 0.0);
    }

    #[test]
    fn reduced_suite_passes() {
        let sizes = SuiteSizes {
            quadruples: 2000,
            candidates: 5,
            kernel_members: 5,
            kernel_quadruples: 500,
            entropy_evaluations: 5000,
        };
        let mut r = rng();
        for check in property_suite(sizes, 1.0, &mut r) {
            assert!(check.passed, "{check:?}");
        }
    }
}
