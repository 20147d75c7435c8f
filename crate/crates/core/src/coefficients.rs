//! Scalar reduction of a partition to its modularity coefficients.
//!
//! For a partition `σ`, `Q_σ(γ, ω) = Â_σ − γ P̂_σ + ω Ĉ_σ` where the three
//! coefficients are within-community sums over ordered node pairs of the
//! adjacency, null model and interlayer coupling respectively. The constant
//! `1/(2m)` prefactor of modularity is dropped.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{ChampError, Result};
use crate::network::{Edge, MultilayerNetwork, Network};
use crate::partition::Partition;

/// Absolute tolerance, scaled by `max(1, |x|)`, under which two coefficients are equal.
pub const COEFFICIENT_TOLERANCE: f64 = 1e-12;

/// The `(Â, P̂, Ĉ)` reduction of one partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTriple {
    pub partition_id: usize,
    pub a_hat: f64,
    pub p_hat: f64,
    pub c_hat: f64,
    pub community_count: usize,
    pub community_count_ge5: usize,
}

pub(crate) fn coefficient_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= COEFFICIENT_TOLERANCE * x.abs().max(y.abs()).max(1.0)
}

impl CoefficientTriple {
    /// A bare triple, mostly useful for synthetic inputs.
    pub fn new(partition_id: usize, a_hat: f64, p_hat: f64, c_hat: f64) -> Self {
        CoefficientTriple {
            partition_id,
            a_hat,
            p_hat,
            c_hat,
            community_count: 0,
            community_count_ge5: 0,
        }
    }

    /// Modularity (without prefactor) at `(gamma, omega)`.
    pub fn modularity(&self, gamma: f64, omega: f64) -> f64 {
        self.a_hat - gamma * self.p_hat + omega * self.c_hat
    }

    /// Same plane: every component equal within [`COEFFICIENT_TOLERANCE`].
    pub fn is_coplanar(&self, other: &CoefficientTriple) -> bool {
        coefficient_eq(self.a_hat, other.a_hat)
            && coefficient_eq(self.p_hat, other.p_hat)
            && coefficient_eq(self.c_hat, other.c_hat)
    }
}

/// Evaluates `Â − γP̂ + ωĈ`.
pub fn modularity_at(triple: &CoefficientTriple, gamma: f64, omega: f64) -> f64 {
    triple.modularity(gamma, omega)
}

/// A network together with a null model that can reduce partitions to coefficients.
pub trait QualityModel: Sync {
    /// Number of labelled elements (nodes or node-layers).
    fn element_count(&self) -> usize;

    /// Computes the coefficient triple for `partition`, with `partition_id` left at 0.
    fn coefficients(&self, partition: &Partition) -> Result<CoefficientTriple>;

    fn is_multilayer(&self) -> bool {
        false
    }
}

fn check_len(expected: usize, partition: &Partition) -> Result<()> {
    if partition.len() != expected {
        return Err(ChampError::LengthMismatch {
            expected,
            actual: partition.len(),
        });
    }
    Ok(())
}

fn within_sum(edges: &[Edge], labels: &[usize]) -> f64 {
    edges
        .iter()
        .filter(|e| labels[e.source] == labels[e.target])
        .fold(0.0, |s, e| s + 2.0 * e.weight)
}

fn triple_from_parts(partition: &Partition, a_hat: f64, p_hat: f64, c_hat: f64) -> CoefficientTriple {
    CoefficientTriple {
        partition_id: 0,
        a_hat,
        p_hat,
        c_hat,
        community_count: partition.community_count(),
        community_count_ge5: partition.communities_at_least(5),
    }
}

/// Single-layer coefficients in `O(M + N)`.
pub fn coefficients(network: &Network, partition: &Partition) -> Result<CoefficientTriple> {
    check_len(network.node_count(), partition)?;
    if network.is_degenerate() {
        return Err(ChampError::Degenerate("total edge weight is zero".into()));
    }
    let labels = partition.labels();
    let a_hat = within_sum(network.edges(), labels);
    let mut community_strength = vec![0.0; partition.community_count()];
    for (&c, &k) in labels.iter().zip(network.strength()) {
        community_strength[c] += k;
    }
    let two_m = 2.0 * network.total_weight();
    let p_hat = community_strength.iter().map(|k| k * k).sum::<f64>() / two_m;
    Ok(triple_from_parts(partition, a_hat, p_hat, 0.0))
}

/// Multilayer coefficients with a per-layer Newman–Girvan null model, in `O(M + N)`.
pub fn coefficients_multilayer(network: &MultilayerNetwork, partition: &Partition) -> Result<CoefficientTriple> {
    check_len(network.nodelayer_count(), partition)?;
    if network.is_degenerate() {
        return Err(ChampError::Degenerate(
            "every layer has zero intralayer weight".into(),
        ));
    }
    let labels = partition.labels();
    let a_hat = within_sum(network.intralayer_edges(), labels);
    let c_hat = within_sum(network.interlayer_edges(), labels);

    let mut sums: HashMap<(usize, usize), f64> = HashMap::new();
    for (i, &c) in labels.iter().enumerate() {
        *sums.entry((c, network.layer_of()[i])).or_insert(0.0) += network.strength()[i];
    }
    let layer_m = network.layer_total_weight();
    let mut keyed: Vec<((usize, usize), f64)> = sums.into_iter().collect();
    // Fixed summation order keeps the result independent of hash iteration order.
    keyed.sort_by_key(|&(k, _)| k);
    let p_hat = keyed
        .into_iter()
        .filter(|&((_, layer), _)| layer_m[layer] > 0.0)
        .map(|((_, layer), k)| k * k / (2.0 * layer_m[layer]))
        .sum();
    Ok(triple_from_parts(partition, a_hat, p_hat, c_hat))
}

impl QualityModel for Network {
    fn element_count(&self) -> usize {
        self.node_count()
    }

    fn coefficients(&self, partition: &Partition) -> Result<CoefficientTriple> {
        coefficients(self, partition)
    }
}

impl QualityModel for MultilayerNetwork {
    fn element_count(&self) -> usize {
        self.nodelayer_count()
    }

    fn coefficients(&self, partition: &Partition) -> Result<CoefficientTriple> {
        coefficients_multilayer(self, partition)
    }

    fn is_multilayer(&self) -> bool {
        true
    }
}
