//! Ensemble Monte Carlo for homogeneous unipolar transport.
//!
//! Time advances in synchronization sub-steps of length `tau_sync_ps`. Within
//! a sub-step every particle alternates exponential free flights (majorant
//! `Γ_i`, one per particle) and event selection among the five phonon
//! channels, intra-band e-e scattering and self-scattering. Final states are
//! accepted against the occupancy estimate (Pauli rejection).
//!
//! # Serial mode
//!
//! One ChaCha8 stream drives the whole run. Particles are advanced in index
//! order and the occupancy grid is updated after every flight segment and
//! every accepted event, so later particles see earlier moves immediately.
//! Draw order per flight: flight uniform; then, if an event is due, event
//! uniform; phonon events draw their final-state angle (rejection loop) and,
//! for in-box final states, one Pauli uniform; e-e events draw the partner
//! index, β (one uniform, or two with `beta_weighted`) and two Pauli
//! uniforms.
//!
//! # Parallel mode
//!
//! At every sub-step boundary the grid and the ensemble are frozen into a
//! snapshot. Particles advance independently against the snapshot with
//! their own stream (seed, stream = particle index, word offset = sub-step
//! index). An accepted e-e event updates the proposer and records the
//! partner's wave-vector change `k2' − k2` (the partner state taken from the
//! snapshot); at the barrier these kicks are added in proposer order and the
//! grid is rebuilt. The result does not depend on the number of workers, and
//! every event conserves total wave-vector exactly.
//!
//! # Rates
//!
//! Phonon rates are evaluated in closed form at the current energy. The e-e
//! rate comes from [`rate_field::EeRateField`], refreshed every
//! `ee_refresh_ps`. Majorants are reset to `total / 0.8` at each sub-step
//! boundary, raised after an accepted event when the new total exceeds
//! `0.9 Γ_i`, and raised with a re-drawn flight when a real rate is found
//! above the majorant (counted as a violation).

pub mod config;
pub mod events;
pub mod init;
pub mod rate_field;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{EeConfig, GridConfig, Mode, SimConfig};
pub use events::{
    ensemble_means, flight_time, free_flight, pauli_accept_one, pauli_accept_pair, select_ee_partner, select_event,
    Selected, CHANNELS, EE_CHANNEL,
};
pub use init::{init_ensemble, InitialState};
pub use rate_field::EeRateField;

use crate::ee::{ellipse_from_pair, EeKernel};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, OccupancyGrid};
use crate::material::{Band, MaterialParams, Particle};
use crate::phonon::{sample_final_state, PhononChannel, PhononRates};
use crate::screening::ScreeningParams;
use crate::vec2::Vec2;

const MAJORANT_FILL: f64 = 0.8;
const MAJORANT_REFRESH: f64 = 0.9;
const MIN_MAJORANT: f64 = 1e-3;
const INIT_STREAM: u64 = u64::MAX;
const SERIAL_STREAM: u64 = u64::MAX - 1;

/// Channel names in selection order, for reports.
pub const CHANNEL_NAMES: [&str; CHANNELS] = ["ac", "opt_abs", "opt_em", "K_abs", "K_em", "ee"];

/// One row of the observable time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    /// Mean velocity (nm/ps).
    pub v: Vec2,
    /// Mean energy (eV).
    pub w: f64,
    /// Electron density (1/nm²).
    pub rho: f64,
    /// Largest raw cell occupation at this instant.
    pub max_occupancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
    pub config_hash: String,
    pub seed: u64,
    pub code_version: &'static str,
}

impl TimeSeries {
    /// Mean velocity and energy over the final `fraction` of the samples
    /// (at least one sample).
    pub fn steady_state(&self, fraction: f64) -> (Vec2, f64) {
        steady_state(&self.samples, fraction)
    }

    /// Largest relative deviation of `rho` from its first value.
    pub fn rho_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        self.samples
            .iter()
            .map(|s| ((s.rho - first.rho) / first.rho).abs())
            .fold(0.0, f64::max)
    }
}

/// See [`TimeSeries::steady_state`].
pub fn steady_state(samples: &[Sample], fraction: f64) -> (Vec2, f64) {
    if samples.is_empty() {
        return (Vec2::ZERO, 0.0);
    }
    let tail = ((samples.len() as f64 * fraction).ceil() as usize).clamp(1, samples.len());
    let window = &samples[samples.len() - tail..];
    let n = window.len() as f64;
    let v = window.iter().fold(Vec2::ZERO, |acc, s| acc + s.v) * (1.0 / n);
    let w = window.iter().map(|s| s.w).sum::<f64>() / n;
    (v, w)
}

/// Event counters, indexed by channel in selection order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Counters {
    pub proposed: [u64; CHANNELS],
    pub accepted: [u64; CHANNELS],
    pub pauli_rejected: [u64; CHANNELS],
    pub out_of_box_rejected: u64,
    pub self_scattering: u64,
    pub ee_null: u64,
    pub majorant_violations: u64,
    pub majorant_refreshes: u64,
    /// Largest relative wave-vector residual of an accepted e-e event.
    pub max_momentum_residual: f64,
    /// Largest relative `Σ|k|` residual of an accepted e-e event.
    pub max_energy_residual: f64,
}

impl Counters {
    pub fn merge(&mut self, other: &Counters) {
        for c in 0..CHANNELS {
            self.proposed[c] += other.proposed[c];
            self.accepted[c] += other.accepted[c];
            self.pauli_rejected[c] += other.pauli_rejected[c];
        }
        self.out_of_box_rejected += other.out_of_box_rejected;
        self.self_scattering += other.self_scattering;
        self.ee_null += other.ee_null;
        self.majorant_violations += other.majorant_violations;
        self.majorant_refreshes += other.majorant_refreshes;
        self.max_momentum_residual = self.max_momentum_residual.max(other.max_momentum_residual);
        self.max_energy_residual = self.max_energy_residual.max(other.max_energy_residual);
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Diagnostics {
    pub counters: Counters,
    pub warnings: Vec<String>,
    /// Occupancy quantum (one particle in one cell).
    pub quantum: f64,
    /// Largest raw cell occupation over all samples.
    pub max_occupancy: f64,
    /// Samples whose largest occupation exceeded `1 + 3·quantum`.
    pub pauli_violations: u64,
    pub substeps: u64,
    pub ee_nodes_evaluated: u64,
    pub kicks_applied: u64,
    /// Partners kicked more than once within one parallel sub-step.
    pub kick_conflicts: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub series: TimeSeries,
    pub snapshot: OccupancyGrid,
    pub particles: Vec<Particle>,
    pub diagnostics: Diagnostics,
}

/// Runtime knobs that do not change results.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker cap for parallel mode (`None`: all cores).
    pub threads: Option<usize>,
}

struct Ctx<'a> {
    phonons: &'a PhononRates,
    kernel: Option<&'a EeKernel>,
    field: &'a EeRateField,
    spec: GridSpec,
    gamma: f64,
    force: Vec2,
    n: usize,
}

impl Ctx<'_> {
    fn rates(&self, k: Vec2, occ: &OccupancyGrid) -> [f64; CHANNELS] {
        let ph = self.phonons.all(self.gamma * k.norm());
        let ee = self.kernel.map_or(0.0, |kern| self.field.rate(k, kern, occ));
        [ph[0], ph[1], ph[2], ph[3], ph[4], ee]
    }

    fn total(&self, k: Vec2, occ: &OccupancyGrid) -> f64 {
        self.rates(k, occ).iter().sum()
    }

    fn out_of_box(&self, k: Vec2, particle: usize) -> Error {
        Error::OutOfBox {
            k,
            k_max: self.spec.k_max,
            particle: Some(particle),
        }
    }
}

/// What a particle sees while it is advanced.
trait World {
    fn occupancy(&self) -> &OccupancyGrid;
    fn partner(&self, j: usize) -> Vec2;
    fn relocate(&mut self, from: Vec2, to: Vec2) -> Result<()>;
    fn commit_ee(&mut self, ctx: &Ctx, j: usize, k1: Vec2, k1p: Vec2, k2: Vec2, k2p: Vec2) -> Result<()>;

    fn occupation(&self, k: Vec2) -> f64 {
        self.occupancy().lookup(k, Band::Conduction).unwrap_or(1.0)
    }
}

struct SerialWorld<'a> {
    grid: &'a mut OccupancyGrid,
    particles: &'a mut [Particle],
    majorants: &'a mut [f64],
    counters: &'a mut Counters,
}

impl World for SerialWorld<'_> {
    fn occupancy(&self) -> &OccupancyGrid {
        self.grid
    }

    fn partner(&self, j: usize) -> Vec2 {
        self.particles[j].k
    }

    fn relocate(&mut self, from: Vec2, to: Vec2) -> Result<()> {
        self.grid.relocate(from, to, Band::Conduction)
    }

    fn commit_ee(&mut self, ctx: &Ctx, j: usize, k1: Vec2, k1p: Vec2, k2: Vec2, k2p: Vec2) -> Result<()> {
        self.grid.relocate(k1, k1p, Band::Conduction)?;
        self.grid.relocate(k2, k2p, Band::Conduction)?;
        self.particles[j].k = k2p;
        let total = ctx.total(k2p, self.grid);
        if total > MAJORANT_REFRESH * self.majorants[j] {
            self.majorants[j] = total / MAJORANT_FILL;
            self.counters.majorant_refreshes += 1;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Kick {
    partner: usize,
    delta: Vec2,
}

struct SnapshotWorld<'a> {
    grid: &'a OccupancyGrid,
    particles: &'a [Particle],
    kicks: Vec<Kick>,
}

impl World for SnapshotWorld<'_> {
    fn occupancy(&self) -> &OccupancyGrid {
        self.grid
    }

    fn partner(&self, j: usize) -> Vec2 {
        self.particles[j].k
    }

    fn relocate(&mut self, _from: Vec2, _to: Vec2) -> Result<()> {
        Ok(())
    }

    fn commit_ee(&mut self, _ctx: &Ctx, j: usize, _k1: Vec2, _k1p: Vec2, k2: Vec2, k2p: Vec2) -> Result<()> {
        self.kicks.push(Kick {
            partner: j,
            delta: k2p - k2,
        });
        Ok(())
    }
}

/// Advances particle `i` by `duration` ps.
#[allow(clippy::too_many_arguments)]
fn advance_particle<W: World, R: Rng + ?Sized>(
    ctx: &Ctx,
    world: &mut W,
    i: usize,
    p: &mut Particle,
    gamma_max: &mut f64,
    duration: f64,
    rng: &mut R,
    counters: &mut Counters,
) -> Result<()> {
    let mut remaining = duration;
    loop {
        let dt = flight_time(*gamma_max, rng.random());
        let step = dt.min(remaining);
        let from = p.k;
        *p = free_flight(*p, ctx.force, step);
        if !ctx.spec.contains(p.k) {
            return Err(ctx.out_of_box(p.k, i));
        }
        world.relocate(from, p.k)?;
        if dt >= remaining {
            return Ok(());
        }
        remaining -= dt;

        let rates = ctx.rates(p.k, world.occupancy());
        let total: f64 = rates.iter().sum();
        if total > *gamma_max {
            counters.majorant_violations += 1;
            *gamma_max = total / MAJORANT_FILL;
            continue;
        }
        let channel = match select_event(&rates, *gamma_max, rng.random()) {
            Selected::SelfScattering => {
                counters.self_scattering += 1;
                continue;
            }
            Selected::Channel(c) => c,
        };
        counters.proposed[channel] += 1;
        let accepted = if channel == EE_CHANNEL {
            ee_event(ctx, world, i, p, rng, counters)?
        } else {
            phonon_event(ctx, world, PhononChannel::ALL[channel], p, rng, counters)?
        };
        if accepted {
            counters.accepted[channel] += 1;
            let total = ctx.total(p.k, world.occupancy());
            if total > MAJORANT_REFRESH * *gamma_max {
                *gamma_max = total / MAJORANT_FILL;
                counters.majorant_refreshes += 1;
            }
        } else {
            counters.pauli_rejected[channel] += 1;
        }
    }
}

fn phonon_event<W: World, R: Rng + ?Sized>(
    ctx: &Ctx,
    world: &mut W,
    channel: PhononChannel,
    p: &mut Particle,
    rng: &mut R,
    counters: &mut Counters,
) -> Result<bool> {
    let kp = sample_final_state(p.k, channel, ctx.phonons, ctx.gamma, rng);
    if !ctx.spec.contains(kp) {
        counters.out_of_box_rejected += 1;
        return Ok(false);
    }
    if pauli_accept_one(world.occupation(kp), rng.random()) {
        world.relocate(p.k, kp)?;
        p.k = kp;
        Ok(true)
    } else {
        Ok(false)
    }
}

fn ee_event<W: World, R: Rng + ?Sized>(
    ctx: &Ctx,
    world: &mut W,
    i: usize,
    p: &mut Particle,
    rng: &mut R,
    counters: &mut Counters,
) -> Result<bool> {
    let Some(kernel) = ctx.kernel else {
        counters.ee_null += 1;
        return Ok(false);
    };
    let Some(j) = select_ee_partner(ctx.n, i, rng) else {
        counters.ee_null += 1;
        return Ok(false);
    };
    let (k1, k2) = (p.k, world.partner(j));
    let geom = match ellipse_from_pair(k1, k2) {
        Ok(g) if !g.is_degenerate() => g,
        _ => {
            counters.ee_null += 1;
            return Ok(false);
        }
    };
    let beta = kernel.sample_intra_beta(&geom, rng);
    let (k1p, k2p) = geom.final_pair(beta);
    let (eta1, eta2): (f64, f64) = (rng.random(), rng.random());
    if !ctx.spec.contains(k1p) || !ctx.spec.contains(k2p) {
        counters.out_of_box_rejected += 1;
        return Ok(false);
    }
    if !pauli_accept_pair(world.occupation(k1p), world.occupation(k2p), eta1, eta2) {
        return Ok(false);
    }
    let scale = k1.norm() + k2.norm();
    counters.max_momentum_residual = counters
        .max_momentum_residual
        .max(((k1 + k2) - (k1p + k2p)).norm() / scale);
    counters.max_energy_residual = counters
        .max_energy_residual
        .max((scale - k1p.norm() - k2p.norm()).abs() / scale);
    world.commit_ee(ctx, j, k1, k1p, k2, k2p)?;
    p.k = k1p;
    Ok(true)
}

/// A running simulation.
pub struct Simulation {
    cfg: SimConfig,
    material: MaterialParams,
    phonons: PhononRates,
    kernel: Option<EeKernel>,
    spec: GridSpec,
    force: Vec2,
    particles: Vec<Particle>,
    grid: OccupancyGrid,
    majorants: Vec<f64>,
    field: EeRateField,
    rng: ChaCha8Rng,
    tau: f64,
    substeps_per_obs: u64,
    substeps_per_refresh: u64,
    total_substeps: u64,
    substep: u64,
    density: f64,
    diag: Diagnostics,
    pool: Option<rayon::ThreadPool>,
}

impl Simulation {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        Self::with_options(cfg, RunOptions::default())
    }

    pub fn with_options(cfg: &SimConfig, options: RunOptions) -> Result<Self> {
        let mut warnings = cfg.validate()?;
        let material = cfg.material_params()?;
        let spec = cfg.grid_spec(&material)?;
        let phonons = PhononRates::new(&material);

        let mut init_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        init_rng.set_stream(INIT_STREAM);
        let init = init_ensemble(&material, cfg.eps_f_ev, cfg.n_particles, spec, &mut init_rng)?;

        let kernel = if cfg.ee_enabled && cfg.n_particles >= 2 {
            let screening = ScreeningParams::for_density(&material, init.density)?;
            Some(EeKernel::new(&material, screening, cfg.ee_params(&material)?)?)
        } else {
            if cfg.ee_enabled {
                warnings.push("fewer than two particles: e-e scattering disabled".into());
            }
            None
        };

        let substeps_per_obs = ((cfg.dt_obs_ps / cfg.tau_sync_ps).round() as u64).max(1);
        let tau = cfg.dt_obs_ps / substeps_per_obs as f64;
        let substeps_per_refresh = ((cfg.ee_refresh_ps / tau).round() as u64).max(1);
        let n_obs = (cfg.t_end_ps / cfg.dt_obs_ps).round() as u64;

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(SERIAL_STREAM);

        let pool = match cfg.mode {
            Mode::Serial => None,
            Mode::Parallel => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(options.threads.unwrap_or(0))
                    .build()
                    .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?,
            ),
        };

        let diag = Diagnostics {
            warnings,
            quantum: init.grid.quantum(),
            ..Diagnostics::default()
        };
        let mut sim = Simulation {
            cfg: cfg.clone(),
            material,
            phonons,
            kernel,
            spec,
            force: cfg.force(),
            majorants: vec![MIN_MAJORANT; init.particles.len()],
            particles: init.particles,
            grid: init.grid,
            field: EeRateField::new(spec),
            rng,
            tau,
            substeps_per_obs,
            substeps_per_refresh,
            total_substeps: n_obs * substeps_per_obs,
            substep: 0,
            density: init.density,
            diag,
            pool,
        };
        sim.reset_majorants();
        Ok(sim)
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    pub fn kernel(&self) -> Option<&EeKernel> {
        self.kernel.as_ref()
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diag
    }

    /// Initial Fermi-Dirac density (1/nm²).
    pub fn initial_density(&self) -> f64 {
        self.density
    }

    pub fn time(&self) -> f64 {
        self.substep as f64 * self.tau
    }

    /// Sub-step length actually used (ps).
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn is_finished(&self) -> bool {
        self.substep >= self.total_substeps
    }

    /// Observables of the current state.
    pub fn sample(&self) -> Sample {
        let (v, w) = ensemble_means(&self.particles, &self.material);
        Sample {
            t: self.time(),
            v,
            w,
            rho: self.grid.density(Band::Conduction),
            max_occupancy: self.grid.max_occupancy(Band::Conduction),
        }
    }

    fn ctx(&self) -> Ctx<'_> {
        Ctx {
            phonons: &self.phonons,
            kernel: self.kernel.as_ref(),
            field: &self.field,
            spec: self.spec,
            gamma: self.material.gamma,
            force: self.force,
            n: self.particles.len(),
        }
    }

    fn reset_majorants(&mut self) {
        let ctx = Ctx {
            phonons: &self.phonons,
            kernel: self.kernel.as_ref(),
            field: &self.field,
            spec: self.spec,
            gamma: self.material.gamma,
            force: self.force,
            n: self.particles.len(),
        };
        let grid = &self.grid;
        let reset = |(p, g): (&Particle, &mut f64)| *g = (ctx.total(p.k, grid) / MAJORANT_FILL).max(MIN_MAJORANT);
        match &self.pool {
            Some(pool) => pool.install(|| self.particles.par_iter().zip(self.majorants.par_iter_mut()).for_each(reset)),
            None => self.particles.iter().zip(self.majorants.iter_mut()).for_each(reset),
        }
    }

    /// Advances the ensemble by one synchronization sub-step.
    pub fn advance_substep(&mut self) -> Result<()> {
        match self.cfg.mode {
            Mode::Serial => self.serial_substep()?,
            Mode::Parallel => self.parallel_substep()?,
        }
        self.substep += 1;
        self.diag.substeps = self.substep;
        if self.substep % self.substeps_per_refresh == 0 {
            self.diag.ee_nodes_evaluated += self.field.clear() as u64;
        }
        self.reset_majorants();
        Ok(())
    }

    fn serial_substep(&mut self) -> Result<()> {
        let ctx = Ctx {
            phonons: &self.phonons,
            kernel: self.kernel.as_ref(),
            field: &self.field,
            spec: self.spec,
            gamma: self.material.gamma,
            force: self.force,
            n: self.particles.len(),
        };
        let mut counters = Counters::default();
        for i in 0..self.particles.len() {
            let mut p = self.particles[i];
            let mut gamma = self.majorants[i];
            let mut local = Counters::default();
            {
                let mut world = SerialWorld {
                    grid: &mut self.grid,
                    particles: &mut self.particles,
                    majorants: &mut self.majorants,
                    counters: &mut counters,
                };
                advance_particle(&ctx, &mut world, i, &mut p, &mut gamma, self.tau, &mut self.rng, &mut local)?;
            }
            counters.merge(&local);
            self.particles[i] = p;
            self.majorants[i] = gamma;
        }
        self.diag.counters.merge(&counters);
        Ok(())
    }

    fn parallel_substep(&mut self) -> Result<()> {
        let snapshot_grid = self.grid.clone();
        let snapshot = self.particles.clone();
        let base = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let word_pos = u128::from(self.substep) << 32;
        let ctx = self.ctx();
        let tau = self.tau;
        let mut particles = self.particles.clone();
        let mut majorants = self.majorants.clone();
        let work = |(i, (p, g)): (usize, (&mut Particle, &mut f64))| {
            let mut rng = base.clone();
            rng.set_stream(i as u64);
            rng.set_word_pos(word_pos);
            let mut world = SnapshotWorld {
                grid: &snapshot_grid,
                particles: &snapshot,
                kicks: Vec::new(),
            };
            let mut counters = Counters::default();
            let result = advance_particle(&ctx, &mut world, i, p, g, tau, &mut rng, &mut counters);
            (result, counters, world.kicks)
        };
        let pool = self.pool.as_ref().expect("parallel mode owns a pool");
        let outcomes: Vec<_> = pool.install(|| {
            particles
                .par_iter_mut()
                .zip(majorants.par_iter_mut())
                .enumerate()
                .map(work)
                .collect()
        });

        let mut kicked = vec![0u32; particles.len()];
        for (result, counters, kicks) in outcomes {
            result?;
            self.diag.counters.merge(&counters);
            for kick in kicks {
                particles[kick.partner].k += kick.delta;
                kicked[kick.partner] += 1;
                self.diag.kicks_applied += 1;
            }
        }
        self.diag.kick_conflicts += kicked.iter().filter(|&&c| c > 1).count() as u64;
        self.grid = OccupancyGrid::estimate(&particles, self.spec, self.grid.w_stat(), self.material.degeneracy())?;
        self.particles = particles;
        self.majorants = majorants;
        Ok(())
    }

    fn record(&mut self, samples: &mut Vec<Sample>) {
        let s = self.sample();
        self.diag.max_occupancy = self.diag.max_occupancy.max(s.max_occupancy);
        if s.max_occupancy > 1.0 + 3.0 * self.diag.quantum * (1.0 + 1e-12) {
            self.diag.pauli_violations += 1;
        }
        samples.push(s);
    }

    /// Runs to `t_end`, sampling every `dt_obs`.
    pub fn run(mut self) -> Result<RunOutput> {
        let mut samples = Vec::new();
        self.record(&mut samples);
        while !self.is_finished() {
            self.advance_substep()?;
            if self.substep % self.substeps_per_obs == 0 {
                self.record(&mut samples);
            }
        }
        self.diag.ee_nodes_evaluated += self.field.clear() as u64;
        Ok(RunOutput {
            series: TimeSeries {
                samples,
                config_hash: self.cfg.hash(),
                seed: self.cfg.seed,
                code_version: crate::VERSION,
            },
            snapshot: self.grid,
            particles: self.particles,
            diagnostics: self.diag,
        })
    }
}

/// Initializes and runs `cfg` to completion.
pub fn run(cfg: &SimConfig) -> Result<RunOutput> {
    Simulation::new(cfg)?.run()
}

/// [`run`] with runtime options.
pub fn run_with(cfg: &SimConfig, options: RunOptions) -> Result<RunOutput> {
    Simulation::with_options(cfg, options)?.run()
}
