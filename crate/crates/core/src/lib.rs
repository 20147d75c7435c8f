//! Reduction of community partitions to linear modularity coefficients and
//! pruning of partition ensembles to the subset that is optimal somewhere in
//! the resolution (`gamma`) / interlayer coupling (`omega`) parameter space.
//!
//! The pipeline is:
//!
//! 1. build a [`Network`] or [`MultilayerNetwork`],
//! 2. generate partitions, e.g. with [`louvain::louvain`] or an
//!    [`sweep::ensemble_sweep`] over a parameter range,
//! 3. reduce every unique partition to a [`CoefficientTriple`]
//!    `(a_hat, p_hat, c_hat)` so that `Q(gamma, omega) = a_hat - gamma * p_hat + omega * c_hat`,
//! 4. keep only the partitions on the upper envelope with
//!    [`envelope::prune_1d`] or [`envelope::prune_2d`],
//! 5. compare the surviving partitions with [`similarity`] measures.

pub mod coefficients;
pub mod ensemble;
pub mod envelope;
pub mod error;
pub mod io;
pub mod louvain;
pub mod network;
pub mod partition;
pub mod similarity;
pub mod sweep;

pub use coefficients::{modularity_at, CoefficientTriple, QualityModel};
pub use ensemble::{Ensemble, Insertion};
pub use error::{ChampError, Result};
pub use network::{MultilayerBuilder, MultilayerNetwork, Network};
pub use partition::{Partition, Provenance};
