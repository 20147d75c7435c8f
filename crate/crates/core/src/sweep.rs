//! Ensembles generated by many heuristic runs over a parameter range.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ensemble::Ensemble;
use crate::error::{validation, Result};
use crate::louvain::{genlouvain, louvain};
use crate::network::{MultilayerNetwork, Network};
use crate::partition::{Partition, Provenance};

/// How run parameters are placed in the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// Inclusive uniform grid; run `r` uses grid point `r mod (n_gamma * n_omega)`,
    /// gamma-major.
    Grid { n_gamma: usize, n_omega: usize },
    /// Independent uniform samples drawn from each run's seed.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub gamma_range: (f64, f64),
    pub omega_range: Option<(f64, f64)>,
    pub placement: Placement,
    pub runs: usize,
    pub master_seed: u64,
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
        return Err(validation(format!(
            "{name} range [{lo}, {hi}] must be finite, non-negative and ordered"
        )));
    }
    Ok(())
}

/// Well-mixed 64-bit hash of `(master_seed, run_index)`.
pub fn run_seed(master_seed: u64, run_index: u64) -> u64 {
    let mut z = master_seed
        .wrapping_add(run_index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n <= 1 {
        lo
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_range("gamma", self.gamma_range)?;
        if let Some(r) = self.omega_range {
            check_range("omega", r)?;
        }
        if self.runs == 0 {
            return Err(validation("runs must be at least 1"));
        }
        if let Placement::Grid { n_gamma, n_omega } = self.placement {
            if n_gamma == 0 || n_omega == 0 {
                return Err(validation("grid dimensions must be at least 1"));
            }
            if self.omega_range.is_none() && n_omega != 1 {
                return Err(validation("an omega grid requires an omega range"));
            }
        }
        Ok(())
    }

    /// Provenance (parameters and seed) of every run, in run order.
    pub fn run_parameters(&self) -> Result<Vec<Provenance>> {
        self.validate()?;
        let (g0, g1) = self.gamma_range;
        Ok((0..self.runs as u64)
            .map(|r| {
                let seed = run_seed(self.master_seed, r);
                let (gamma, omega) = match self.placement {
                    Placement::Grid { n_gamma, n_omega } => {
                        let idx = (r % (n_gamma * n_omega) as u64) as usize;
                        let gamma = linspace(g0, g1, n_gamma, idx / n_omega);
                        let omega = self
                            .omega_range
                            .map(|(w0, w1)| linspace(w0, w1, n_omega, idx % n_omega));
                        (gamma, omega)
                    }
                    Placement::Uniform => {
                        let mut rng = ChaCha8Rng::seed_from_u64(run_seed(seed, u64::MAX));
                        let gamma = if g1 > g0 { rng.gen_range(g0..=g1) } else { g0 };
                        let omega = self
                            .omega_range
                            .map(|(w0, w1)| if w1 > w0 { rng.gen_range(w0..=w1) } else { w0 });
                        (gamma, omega)
                    }
                };
                Provenance {
                    gamma,
                    omega,
                    seed,
                    run_id: r,
                }
            })
            .collect())
    }
}

fn collect<'a, F>(ensemble: &mut Ensemble<'a>, params: Vec<Provenance>, run: F) -> Result<()>
where
    F: Fn(&Provenance) -> Result<Partition> + Sync,
{
    let partitions: Vec<Partition> = params.par_iter().map(&run).collect::<Result<_>>()?;
    for (p, prov) in partitions.into_iter().zip(params) {
        ensemble.insert(p, Some(prov))?;
    }
    Ok(())
}

/// Runs Louvain at every sweep point (in parallel) and de-duplicates the results.
/// Partitions are inserted in run order, so ids do not depend on scheduling.
pub fn ensemble_sweep<'a>(network: &'a Network, spec: &SweepSpec) -> Result<Ensemble<'a>> {
    if spec.omega_range.is_some() {
        return Err(validation("omega range given for a single-layer network"));
    }
    let params = spec.run_parameters()?;
    let mut ensemble = Ensemble::new(network);
    collect(&mut ensemble, params, |p| louvain(network, p.gamma, p.seed))?;
    Ok(ensemble)
}

/// Multilayer counterpart of [`ensemble_sweep`]; requires an omega range.
pub fn multilayer_sweep<'a>(network: &'a MultilayerNetwork, spec: &SweepSpec) -> Result<Ensemble<'a>> {
    if spec.omega_range.is_none() {
        return Err(validation("multilayer sweeps require an omega range"));
    }
    let params = spec.run_parameters()?;
    let mut ensemble = Ensemble::new(network);
    collect(&mut ensemble, params, |p| {
        genlouvain(network, p.gamma, p.omega.unwrap_or(0.0), p.seed)
    })?;
    Ok(ensemble)
}
