//! Fermi-Dirac initial condition.
//!
//! Particles are distributed cell by cell: the expected count of a cell is
//! its mean Fermi-Dirac occupation divided by the occupancy quantum, rounded
//! with the largest-remainder rule so that the total is exactly `N_p`. Inside
//! a cell, positions follow an additive low-discrepancy sequence with a
//! random offset, thinned by rejection against the Fermi-Dirac shape. A
//! plain multinomial draw would put cells of the degenerate region several
//! quanta above `f = 1` from the start.

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, OccupancyGrid};
use crate::material::{fermi_dirac, simpson, MaterialParams, Particle};
use crate::vec2::Vec2;

/// Largest tolerated fraction of the Fermi-Dirac density outside the box.
pub const MAX_TAIL_FRACTION: f64 = 1e-3;

const SUBSAMPLES: usize = 4;
const MAX_PLACEMENT_TRIES: usize = 1_000_000;
// Plastic-number (R2) increments.
const R2_A1: f64 = 0.754_877_666_246_692_7;
const R2_A2: f64 = 0.569_840_290_998_053_3;

#[derive(Debug, Clone)]
pub struct InitialState {
    pub particles: Vec<Particle>,
    pub grid: OccupancyGrid,
    /// Electrons per simulated particle per unit area (1/nm²).
    pub w_stat: f64,
    /// Fermi-Dirac electron density (1/nm²).
    pub density: f64,
}

/// Fraction of the conduction-band Fermi-Dirac density with `γ|k| > e_max`.
pub fn tail_fraction(material: &MaterialParams, eps_f: f64, e_max: f64) -> f64 {
    let t = material.temperature;
    let upper = e_max.max(eps_f) + 60.0 * material.kt();
    let tail = simpson(|e| e * fermi_dirac(e, eps_f, t), e_max, upper, 20_000);
    let total = simpson(|e| e * fermi_dirac(e, eps_f, t), 0.0, upper, 40_000);
    tail / total
}

/// Samples `n_particles` conduction electrons from the Fermi-Dirac
/// distribution at `eps_f` on the box `spec`.
pub fn init_ensemble<R: Rng + ?Sized>(
    material: &MaterialParams,
    eps_f: f64,
    n_particles: usize,
    spec: GridSpec,
    rng: &mut R,
) -> Result<InitialState> {
    if n_particles == 0 {
        return Err(Error::Config("the ensemble needs at least one particle".into()));
    }
    // The inscribed circle is the conservative measure of what the box holds.
    let tail = tail_fraction(material, eps_f, material.gamma * spec.k_max);
    if tail > MAX_TAIL_FRACTION {
        return Err(Error::Config(format!(
            "k-space box too small: {:.3}% of the Fermi-Dirac density lies beyond γk_max = {} eV",
            100.0 * tail,
            material.gamma * spec.k_max
        )));
    }
    let density = material.conduction_density(eps_f);
    let w_stat = density / n_particles as f64;
    let mut grid = OccupancyGrid::empty(spec, w_stat, material.degeneracy());
    let f = |k: Vec2| fermi_dirac(material.gamma * k.norm(), eps_f, material.temperature);

    let d = spec.delta_k();
    let means: Vec<f64> = spec
        .cells()
        .map(|(i, j)| {
            let lo = spec.center(i, j) - Vec2::new(0.5 * d, 0.5 * d);
            let mut sum = 0.0;
            for a in 0..SUBSAMPLES {
                for b in 0..SUBSAMPLES {
                    let off = Vec2::new((a as f64 + 0.5) * d, (b as f64 + 0.5) * d) * (1.0 / SUBSAMPLES as f64);
                    sum += f(lo + off);
                }
            }
            sum / (SUBSAMPLES * SUBSAMPLES) as f64
        })
        .collect();
    let counts = apportion(&means, n_particles);

    let mut particles = Vec::with_capacity(n_particles);
    for ((i, j), &count) in spec.cells().zip(&counts) {
        if count == 0 {
            continue;
        }
        let lo = spec.center(i, j) - Vec2::new(0.5 * d, 0.5 * d);
        let nearest = Vec2::new(nearest_to_zero(lo.x, lo.x + d), nearest_to_zero(lo.y, lo.y + d));
        let bound = f(nearest);
        let (mut sx, mut sy): (f64, f64) = (rng.random(), rng.random());
        let mut placed = 0;
        let mut tries = 0;
        while placed < count {
            tries += 1;
            if tries > MAX_PLACEMENT_TRIES {
                return Err(Error::Config(format!("could not place particles in cell ({i}, {j})")));
            }
            sx = (sx + R2_A1).fract();
            sy = (sy + R2_A2).fract();
            let k = lo + Vec2::new(sx * d, sy * d);
            let eta: f64 = rng.random();
            if eta * bound < f(k) && spec.cell_of(k) == Some((i, j)) {
                particles.push(Particle::conduction(k));
                grid.increment(k, crate::material::Band::Conduction)?;
                placed += 1;
            }
        }
    }
    Ok(InitialState {
        particles,
        grid,
        w_stat,
        density,
    })
}

fn nearest_to_zero(lo: f64, hi: f64) -> f64 {
    0.0f64.clamp(lo, hi)
}

/// Integer counts proportional to `weights` summing exactly to `total`
/// (largest-remainder rule, ties broken by index).
pub fn apportion(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if !(sum > 0.0) {
        return vec![0; weights.len()];
    }
    let scale = total as f64 / sum;
    let mut counts: Vec<usize> = weights.iter().map(|w| (w * scale).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = weights[a] * scale - counts[a] as f64;
        let fb = weights[b] * scale - counts[b] as f64;
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &idx in order.iter().take(total.saturating_sub(assigned)) {
        counts[idx] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::Band;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn apportion_is_exact() {
        let c = apportion(&[0.2, 0.5, 0.3, 0.0], 7);
        assert_eq!(c.iter().sum::<usize>(), 7);
        assert_eq!(c[3], 0);
        assert_eq!(apportion(&[1.0, 1.0, 1.0], 4), vec![2, 1, 1]);
    }

    #[test]
    fn ensemble_size_and_density() {
        let m = MaterialParams::default();
        let spec = GridSpec::new(100, 1.2 / m.gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = init_ensemble(&m, 0.15, 5000, spec, &mut rng).unwrap();
        assert_eq!(s.particles.len(), 5000);
        assert_eq!(s.grid.total(Band::Conduction), 5000);
        assert!((s.grid.density(Band::Conduction) - s.density).abs() < 1e-12 * s.density);
        assert!(s.grid.max_occupancy(Band::Conduction) <= 1.0 + s.grid.quantum());
    }

    #[test]
    fn small_box_is_rejected() {
        let m = MaterialParams::default();
        let spec = GridSpec::new(20, 0.2 / m.gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(init_ensemble(&m, 0.15, 1000, spec, &mut rng), Err(Error::Config(_))));
    }
}
