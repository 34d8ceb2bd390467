//! Lazily evaluated intra-band e-e rate on the cell-center lattice.
//!
//! The rate of a particle is the bilinear interpolation of the four
//! surrounding cell-center values. Nodes are computed on first use from the
//! occupancy current at that moment and kept until [`EeRateField::clear`].
//! `OnceLock` makes the cache shareable between worker threads; a node's
//! value only depends on the occupancy it is evaluated against.

use std::sync::OnceLock;

use crate::ee::EeKernel;
use crate::grid::{CellOccupancy, GridSpec};
use crate::vec2::Vec2;

#[derive(Debug)]
pub struct EeRateField {
    spec: GridSpec,
    nodes: Vec<OnceLock<f64>>,
}

impl EeRateField {
    pub fn new(spec: GridSpec) -> Self {
        EeRateField {
            spec,
            nodes: (0..spec.n * spec.n).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Discards all cached nodes; returns how many had been evaluated.
    pub fn clear(&mut self) -> usize {
        let mut used = 0;
        for node in &mut self.nodes {
            if node.take().is_some() {
                used += 1;
            }
        }
        used
    }

    pub fn node<O: CellOccupancy>(&self, i: usize, j: usize, kernel: &EeKernel, occ: &O) -> f64 {
        *self.nodes[self.spec.index(i, j)].get_or_init(|| kernel.intra_rate(self.spec.center(i, j), occ))
    }

    /// Interpolated rate at `k`. Outside the lattice of centers the nearest
    /// edge values are used.
    pub fn rate<O: CellOccupancy>(&self, k: Vec2, kernel: &EeKernel, occ: &O) -> f64 {
        let n = self.spec.n;
        let d = self.spec.delta_k();
        let (i0, tx) = split((k.x + self.spec.k_max) / d - 0.5, n);
        let (j0, ty) = split((k.y + self.spec.k_max) / d - 0.5, n);
        let f00 = self.node(i0, j0, kernel, occ);
        let f10 = self.node(i0 + 1, j0, kernel, occ);
        let f01 = self.node(i0, j0 + 1, kernel, occ);
        let f11 = self.node(i0 + 1, j0 + 1, kernel, occ);
        (1.0 - tx) * ((1.0 - ty) * f00 + ty * f01) + tx * ((1.0 - ty) * f10 + ty * f11)
    }
}

fn split(u: f64, n: usize) -> (usize, f64) {
    let max_base = (n - 2) as f64;
    let base = u.floor().clamp(0.0, max_base);
    (base as usize, (u - base).clamp(0.0, 1.0))
}
