//! Single-particle building blocks of the Monte Carlo loop.

use rand::Rng;

use crate::material::{MaterialParams, Particle, HBAR};
use crate::vec2::Vec2;

/// Scattering channels in selection order: the five phonon channels (in
/// [`crate::phonon::PhononChannel::ALL`] order) followed by intra-band e-e.
pub const CHANNELS: usize = 6;
pub const EE_CHANNEL: usize = 5;

/// Outcome of [`select_event`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selected {
    Channel(usize),
    SelfScattering,
}

/// Ballistic motion under the force `e E` (eV/nm): `k ← k − (eE/ħ) dt`.
#[inline]
pub fn free_flight(p: Particle, force: Vec2, dt: f64) -> Particle {
    Particle {
        k: p.k - force * (dt / HBAR),
        band: p.band,
    }
}

/// Free-flight duration for the majorant `gamma_max`, from one uniform in
/// `[0, 1)`.
#[inline]
pub fn flight_time(gamma_max: f64, u: f64) -> f64 {
    -(1.0 - u).ln() / gamma_max
}

/// Picks a channel with probability `rate / gamma_max` from one uniform in
/// `[0, 1)`; the remainder is self-scattering.
pub fn select_event(rates: &[f64], gamma_max: f64, u: f64) -> Selected {
    let mut target = u * gamma_max;
    for (i, &r) in rates.iter().enumerate() {
        if target < r {
            return Selected::Channel(i);
        }
        target -= r;
    }
    Selected::SelfScattering
}

/// Pauli acceptance of a single final state: `η > f(k')`.
#[inline]
pub fn pauli_accept_one(f_final: f64, eta: f64) -> bool {
    eta > f_final
}

/// Pauli acceptance of a two-particle final state: accepted iff `η1 > f(k1')`
/// and `η2 > f(k2')`, i.e. with probability `(1 − f(k1'))(1 − f(k2'))`.
#[inline]
pub fn pauli_accept_pair(f1: f64, f2: f64, eta1: f64, eta2: f64) -> bool {
    eta1 > f1 && eta2 > f2
}

/// Uniform partner index in `0..n` excluding `self_index`. `None` if `n < 2`.
pub fn select_ee_partner<R: Rng + ?Sized>(n: usize, self_index: usize, rng: &mut R) -> Option<usize> {
    if n < 2 {
        return None;
    }
    let u = rng.random_range(0..n - 1);
    Some(if u >= self_index { u + 1 } else { u })
}

/// Ensemble means: velocity (nm/ps) and energy (eV). Particles exactly at
/// the Dirac point contribute zero velocity.
pub fn ensemble_means(particles: &[Particle], material: &MaterialParams) -> (Vec2, f64) {
    if particles.is_empty() {
        return (Vec2::ZERO, 0.0);
    }
    let mut v = Vec2::ZERO;
    let mut w = 0.0;
    for p in particles {
        v += material.velocity(p.k, p.band).unwrap_or(Vec2::ZERO);
        w += material.energy(p.k, p.band);
    }
    let n = particles.len() as f64;
    (v * (1.0 / n), w / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flight_under_one_kv_per_cm() {
        let p = free_flight(Particle::conduction(Vec2::ZERO), Vec2::new(1e-4, 0.0), 1.0);
        assert!((p.k.x + 0.151_927).abs() < 1e-5);
        assert_eq!(p.k.y, 0.0);
    }

    #[test]
    fn zero_field_is_identity_and_flights_compose() {
        let p = Particle::conduction(Vec2::new(0.1, -0.2));
        assert_eq!(free_flight(p, Vec2::ZERO, 3.0), p);
        let f = Vec2::new(2e-4, -1e-4);
        let a = free_flight(free_flight(p, f, 0.3), f, 0.7);
        let b = free_flight(p, f, 1.0);
        assert!((a.k - b.k).norm() < 1e-15);
    }

    #[test]
    fn zero_rates_always_self_scatter() {
        for u in [0.0, 0.3, 0.999] {
            assert_eq!(select_event(&[0.0; 6], 1.0, u), Selected::SelfScattering);
        }
    }

    #[test]
    fn selection_boundaries() {
        let rates = [1.0, 2.0];
        assert_eq!(select_event(&rates, 4.0, 0.0), Selected::Channel(0));
        assert_eq!(select_event(&rates, 4.0, 0.3), Selected::Channel(1));
        assert_eq!(select_event(&rates, 4.0, 0.8), Selected::SelfScattering);
    }

    #[test]
    fn pauli_extremes() {
        assert!(pauli_accept_one(0.0, 1e-300));
        assert!(!pauli_accept_one(1.0, 0.999_999));
        assert!(!pauli_accept_pair(0.0, 1.0, 0.5, 0.999));
    }

    #[test]
    fn partner_is_never_self() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(select_ee_partner(2, 0, &mut rng), Some(1));
        assert_eq!(select_ee_partner(2, 1, &mut rng), Some(0));
        assert_eq!(select_ee_partner(1, 0, &mut rng), None);
        for _ in 0..10_000 {
            let j = select_ee_partner(7, 4, &mut rng).unwrap();
            assert!(j < 7 && j != 4);
        }
    }

    #[test]
    fn means_of_ring() {
        let m = MaterialParams::default();
        let ps: Vec<_> = (0..8)
            .map(|i| Particle::conduction(Vec2::from_polar(0.3, i as f64 * std::f64::consts::FRAC_PI_4)))
            .collect();
        let (v, w) = ensemble_means(&ps, &m);
        assert!(v.norm() < 1e-9);
        assert!((w - m.gamma * 0.3).abs() < 1e-15);
    }
}
