//! Cell-wise estimate of the distribution function on a square k-space box.
//!
//! The box `[-k_max, k_max)²` is split into `n × n` square cells of edge
//! `δk = 2 k_max / n`. Cell membership is half-open, `[low, high)`, on both
//! axes. Each simulated particle stands for `w_stat` electrons per unit area,
//! which adds one quantum `w_stat (2π)² / (g_s g_v δk²)` to the occupation of
//! its cell.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::{Band, Particle};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Cells per side.
    pub n: usize,
    /// Box half-width (1/nm).
    pub k_max: f64,
}

impl GridSpec {
    pub fn new(n: usize, k_max: f64) -> Result<Self> {
        if n == 0 || !(k_max > 0.0 && k_max.is_finite()) {
            return Err(Error::Config(format!(
                "grid needs n > 0 and k_max > 0 (got n = {n}, k_max = {k_max})"
            )));
        }
        Ok(GridSpec { n, k_max })
    }

    /// Cell edge (1/nm).
    #[inline]
    pub fn delta_k(&self) -> f64 {
        2.0 * self.k_max / self.n as f64
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        let d = self.delta_k();
        d * d
    }

    /// Cell `(i, j)` holding `k`, with `i` along x and `j` along y.
    #[inline]
    pub fn cell_of(&self, k: Vec2) -> Option<(usize, usize)> {
        let d = self.delta_k();
        let fi = ((k.x + self.k_max) / d).floor();
        let fj = ((k.y + self.k_max) / d).floor();
        let n = self.n as f64;
        if fi >= 0.0 && fi < n && fj >= 0.0 && fj < n {
            Some((fi as usize, fj as usize))
        } else {
            None
        }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize) -> Vec2 {
        let d = self.delta_k();
        Vec2::new(
            -self.k_max + (i as f64 + 0.5) * d,
            -self.k_max + (j as f64 + 0.5) * d,
        )
    }

    #[inline]
    pub fn contains(&self, k: Vec2) -> bool {
        self.cell_of(k).is_some()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }
}

/// Read access to a cell-wise occupation, as needed by the e-e rate sums.
pub trait CellOccupancy {
    fn spec(&self) -> &GridSpec;

    /// Raw (unclamped) occupation of cell `(i, j)` in `band`.
    fn cell_value(&self, band: Band, i: usize, j: usize) -> f64;

    /// Calls `f(center, occupation)` for every cell with nonzero occupation.
    fn for_each_occupied(&self, band: Band, mut f: impl FnMut(Vec2, f64)) {
        let spec = *self.spec();
        for (i, j) in spec.cells() {
            let v = self.cell_value(band, i, j);
            if v != 0.0 {
                f(spec.center(i, j), v);
            }
        }
    }
}

/// Occupation estimate built from particle counts.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    spec: GridSpec,
    /// Electrons per simulated particle per unit area (1/nm²).
    w_stat: f64,
    degeneracy: f64,
    quantum: f64,
    counts: [Vec<u32>; 2],
    totals: [usize; 2],
}

impl OccupancyGrid {
    pub fn empty(spec: GridSpec, w_stat: f64, degeneracy: f64) -> Self {
        let quantum = w_stat * (2.0 * PI).powi(2) / (degeneracy * spec.cell_area());
        let cells = spec.n * spec.n;
        OccupancyGrid {
            spec,
            w_stat,
            degeneracy,
            quantum,
            counts: [vec![0; cells], vec![0; cells]],
            totals: [0, 0],
        }
    }

    /// Builds the grid from scratch. Fails on the first particle outside the
    /// box.
    pub fn estimate(
        particles: &[Particle],
        spec: GridSpec,
        w_stat: f64,
        degeneracy: f64,
    ) -> Result<Self> {
        let mut grid = Self::empty(spec, w_stat, degeneracy);
        for (idx, p) in particles.iter().enumerate() {
            grid.increment(p.k, p.band).map_err(|e| match e {
                Error::OutOfBox { k, k_max, .. } => Error::OutOfBox {
                    k,
                    k_max,
                    particle: Some(idx),
                },
                other => other,
            })?;
        }
        Ok(grid)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn w_stat(&self) -> f64 {
        self.w_stat
    }

    /// Occupation added by one particle.
    pub fn quantum(&self) -> f64 {
        self.quantum
    }

    pub fn count(&self, band: Band, i: usize, j: usize) -> u32 {
        self.counts[band.index()][self.spec.index(i, j)]
    }

    pub fn counts(&self, band: Band) -> &[u32] {
        &self.counts[band.index()]
    }

    pub fn total(&self, band: Band) -> usize {
        self.totals[band.index()]
    }

    /// Raw occupation `count · quantum` (may exceed one through counting
    /// noise).
    pub fn raw(&self, band: Band, i: usize, j: usize) -> f64 {
        f64::from(self.count(band, i, j)) * self.quantum
    }

    fn cell_checked(&self, k: Vec2) -> Result<(usize, usize)> {
        self.spec.cell_of(k).ok_or(Error::OutOfBox {
            k,
            k_max: self.spec.k_max,
            particle: None,
        })
    }

    /// Occupation of the cell containing `k`, clamped to `[0, 1]`.
    pub fn lookup(&self, k: Vec2, band: Band) -> Result<f64> {
        let (i, j) = self.cell_checked(k)?;
        Ok(self.raw(band, i, j).min(1.0))
    }

    pub fn increment(&mut self, k: Vec2, band: Band) -> Result<()> {
        let (i, j) = self.cell_checked(k)?;
        let idx = self.spec.index(i, j);
        self.counts[band.index()][idx] += 1;
        self.totals[band.index()] += 1;
        Ok(())
    }

    pub fn decrement(&mut self, k: Vec2, band: Band) -> Result<()> {
        let (i, j) = self.cell_checked(k)?;
        let idx = self.spec.index(i, j);
        let c = &mut self.counts[band.index()][idx];
        if *c == 0 {
            return Err(Error::Bookkeeping(format!(
                "decrement of empty cell ({i}, {j}) in the {band:?} band"
            )));
        }
        *c -= 1;
        self.totals[band.index()] -= 1;
        Ok(())
    }

    /// Moves one particle between the cells of `from` and `to` (no-op when
    /// they coincide).
    pub fn relocate(&mut self, from: Vec2, to: Vec2, band: Band) -> Result<()> {
        let a = self.cell_checked(from)?;
        let b = self.cell_checked(to)?;
        if a != b {
            self.decrement(from, band)?;
            self.increment(to, band)?;
        }
        Ok(())
    }

    /// Largest raw occupation over all cells of `band`.
    pub fn max_occupancy(&self, band: Band) -> f64 {
        let max = self.counts[band.index()].iter().copied().max().unwrap_or(0);
        f64::from(max) * self.quantum
    }

    /// Density `g/(2π)² Σ f_ij δk²` (1/nm²).
    pub fn density(&self, band: Band) -> f64 {
        self.total(band) as f64 * self.w_stat
    }
}

impl CellOccupancy for OccupancyGrid {
    fn spec(&self) -> &GridSpec {
        &self.spec
    }

    #[inline]
    fn cell_value(&self, band: Band, i: usize, j: usize) -> f64 {
        self.raw(band, i, j)
    }

    fn for_each_occupied(&self, band: Band, mut f: impl FnMut(Vec2, f64)) {
        let counts = &self.counts[band.index()];
        let n = self.spec.n;
        for (idx, &c) in counts.iter().enumerate() {
            if c != 0 {
                f(self.spec.center(idx / n, idx % n), f64::from(c) * self.quantum);
            }
        }
    }
}

/// A cell-wise occupation given directly as numbers, e.g. an analytic
/// Fermi-Dirac distribution sampled at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyField {
    spec: GridSpec,
    values: [Vec<f64>; 2],
}

impl OccupancyField {
    pub fn zeros(spec: GridSpec) -> Self {
        let cells = spec.n * spec.n;
        OccupancyField {
            spec,
            values: [vec![0.0; cells], vec![0.0; cells]],
        }
    }

    /// Fills `band` with `f(center)` on every cell.
    pub fn from_fn(spec: GridSpec, band: Band, f: impl Fn(Vec2) -> f64) -> Self {
        let mut field = Self::zeros(spec);
        field.fill(band, f);
        field
    }

    pub fn fill(&mut self, band: Band, f: impl Fn(Vec2) -> f64) {
        for (i, j) in self.spec.cells() {
            let idx = self.spec.index(i, j);
            self.values[band.index()][idx] = f(self.spec.center(i, j));
        }
    }

    pub fn set(&mut self, band: Band, i: usize, j: usize, value: f64) {
        let idx = self.spec.index(i, j);
        self.values[band.index()][idx] = value;
    }

    pub fn scale(&mut self, factor: f64) {
        for v in self.values.iter_mut().flatten() {
            *v *= factor;
        }
    }
}

impl CellOccupancy for OccupancyField {
    fn spec(&self) -> &GridSpec {
        &self.spec
    }

    #[inline]
    fn cell_value(&self, band: Band, i: usize, j: usize) -> f64 {
        self.values[band.index()][self.spec.index(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> GridSpec {
        GridSpec::new(10, 1.0).unwrap()
    }

    #[test]
    fn empty_ensemble_gives_zero_grid() {
        let g = OccupancyGrid::estimate(&[], spec(), 1e-3, 4.0).unwrap();
        assert_eq!(g.max_occupancy(Band::Conduction), 0.0);
        assert_eq!(g.density(Band::Conduction), 0.0);
    }

    #[test]
    fn single_particle_half_filled_cell() {
        let s = spec();
        // quantum = w (2π)² / (g δk²) = 0.5
        let w = 0.5 * 4.0 * s.cell_area() / (2.0 * PI).powi(2);
        let k = Vec2::new(0.13, -0.41);
        let g = OccupancyGrid::estimate(&[Particle::conduction(k)], s, w, 4.0).unwrap();
        let (i, j) = s.cell_of(k).unwrap();
        assert!((g.raw(Band::Conduction, i, j) - 0.5).abs() < 1e-15);
        let others: f64 = s
            .cells()
            .filter(|&c| c != (i, j))
            .map(|(a, b)| g.raw(Band::Conduction, a, b))
            .sum();
        assert_eq!(others, 0.0);
        assert!((g.lookup(s.center(i, j), Band::Conduction).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn out_of_box_particle_is_reported() {
        let ps = [
            Particle::conduction(Vec2::new(0.1, 0.1)),
            Particle::conduction(Vec2::new(1.5, 0.0)),
        ];
        match OccupancyGrid::estimate(&ps, spec(), 1e-3, 4.0) {
            Err(Error::OutOfBox { particle, .. }) => assert_eq!(particle, Some(1)),
            other => panic!("expected out-of-box error, got {other:?}"),
        }
    }

    #[test]
    fn half_open_cell_edges() {
        let s = GridSpec::new(8, 1.0).unwrap();
        // x = -0.75 is the shared edge between cells 0 and 1.
        assert_eq!(s.cell_of(Vec2::new(-0.75, 0.0)).unwrap().0, 1);
        assert_eq!(s.cell_of(Vec2::new(-1.0, -1.0)), Some((0, 0)));
        assert_eq!(s.cell_of(Vec2::new(1.0, 0.0)), None);
        assert_eq!(s.cell_of(Vec2::new(0.0, 1.0)), None);
    }

    #[test]
    fn lookup_clamps_counting_noise() {
        let s = spec();
        let k = Vec2::new(0.05, 0.05);
        let w = 0.34 * 4.0 * s.cell_area() / (2.0 * PI).powi(2);
        let ps = vec![Particle::conduction(k); 3];
        let g = OccupancyGrid::estimate(&ps, s, w, 4.0).unwrap();
        let (i, j) = s.cell_of(k).unwrap();
        assert!((g.raw(Band::Conduction, i, j) - 1.02).abs() < 1e-12);
        assert_eq!(g.lookup(k, Band::Conduction).unwrap(), 1.0);
    }

    #[test]
    fn increment_decrement_inverse_and_empty_decrement_fails() {
        let mut g = OccupancyGrid::empty(spec(), 1e-3, 4.0);
        let before = g.clone();
        let k = Vec2::new(-0.3, 0.7);
        g.increment(k, Band::Conduction).unwrap();
        g.decrement(k, Band::Conduction).unwrap();
        assert_eq!(g, before);
        assert!(matches!(g.decrement(k, Band::Conduction), Err(Error::Bookkeeping(_))));
    }

    #[test]
    fn incremental_updates_match_recount() {
        let s = GridSpec::new(20, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut ps: Vec<Particle> = (0..500)
            .map(|_| Particle::conduction(Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        let mut g = OccupancyGrid::estimate(&ps, s, 1e-4, 4.0).unwrap();
        for _ in 0..1_000_000 {
            let idx = rng.random_range(0..ps.len());
            let to = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            g.relocate(ps[idx].k, to, Band::Conduction).unwrap();
            ps[idx].k = to;
        }
        let fresh = OccupancyGrid::estimate(&ps, s, 1e-4, 4.0).unwrap();
        assert_eq!(g.counts(Band::Conduction), fresh.counts(Band::Conduction));
        assert_eq!(g.total(Band::Conduction), 500);
    }

    #[test]
    fn point_reflection_mirrors_grid() {
        let s = GridSpec::new(16, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ps: Vec<Particle> = (0..2000)
            .map(|_| Particle::conduction(Vec2::new(rng.random_range(-0.99..0.99), rng.random_range(-0.99..0.99))))
            .collect();
        let mirrored: Vec<Particle> = ps.iter().map(|p| Particle::conduction(-p.k)).collect();
        let a = OccupancyGrid::estimate(&ps, s, 1e-4, 4.0).unwrap();
        let b = OccupancyGrid::estimate(&mirrored, s, 1e-4, 4.0).unwrap();
        for (i, j) in s.cells() {
            assert_eq!(a.count(Band::Conduction, i, j), b.count(Band::Conduction, s.n - 1 - i, s.n - 1 - j));
        }
    }

    #[test]
    fn field_iterates_only_nonzero_cells() {
        let s = spec();
        let mut f = OccupancyField::zeros(s);
        f.set(Band::Valence, 2, 3, 0.25);
        let mut seen = vec![];
        f.for_each_occupied(Band::Valence, |c, v| seen.push((c, v)));
        assert_eq!(seen, vec![(s.center(2, 3), 0.25)]);
        let mut none = 0;
        f.for_each_occupied(Band::Conduction, |_, _| none += 1);
        assert_eq!(none, 0);
    }
}
