//! Upper envelope of modularity planes over a parameter box.
//!
//! Each partition contributes the affine function `Q(γ, ω) = Â − γP̂ + ωĈ`.
//! The envelope assigns every parameter point to the partition(s) attaining
//! the maximum; the partitions with a region of positive measure are
//! "admissible" and their regions are their domains of optimality.

use std::cmp::Ordering;

use crate::coefficients::{coefficient_eq, CoefficientTriple};
use crate::error::{validation, Result};

pub mod geometry;
mod one_d;
mod oracle;
mod summary;
mod two_d;

pub use geometry::Point;
pub use one_d::{prune_1d, Domain1D, Envelope1D};
pub use oracle::{brute_force_envelope, brute_force_envelope_with_tolerance, ORACLE_TOLERANCE};
pub use summary::{summarize_envelope, summarize_envelope_2d, DomainSummary, EnvelopeSummary};
pub use two_d::{domain_neighbors, prune_2d, prune_2d_with, Domain2D, Envelope2D, OutsideBox, OutsideReason, ParamBox, Prune2dOptions};

/// Where two lines `Q = Â − γP̂` cross.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    At(f64),
    /// Equal slopes, different offsets: the lines never meet.
    Parallel,
    /// Same line.
    Coplanar,
}

/// Crossing point `γ = (Â₁ − Â₂) / (P̂₁ − P̂₂)` of two single-layer lines.
pub fn intersection_gamma(a: &CoefficientTriple, b: &CoefficientTriple) -> Intersection {
    if coefficient_eq(a.p_hat, b.p_hat) {
        if coefficient_eq(a.a_hat, b.a_hat) {
            Intersection::Coplanar
        } else {
            Intersection::Parallel
        }
    } else {
        Intersection::At((a.a_hat - b.a_hat) / (a.p_hat - b.p_hat))
    }
}

/// Preference among partitions tied in `Q`: smaller `P̂`, then smaller `Ĉ`,
/// then lower partition id.
pub(crate) fn tie_order(a: &CoefficientTriple, b: &CoefficientTriple) -> Ordering {
    a.p_hat
        .total_cmp(&b.p_hat)
        .then(a.c_hat.total_cmp(&b.c_hat))
        .then(a.partition_id.cmp(&b.partition_id))
}

pub(crate) fn check_triples(triples: &[CoefficientTriple]) -> Result<()> {
    if triples.is_empty() {
        return Err(validation("no partitions to prune"));
    }
    for t in triples {
        if !(t.a_hat.is_finite() && t.p_hat.is_finite() && t.c_hat.is_finite()) {
            return Err(validation(format!(
                "partition {} has non-finite coefficients",
                t.partition_id
            )));
        }
    }
    Ok(())
}

/// Groups coplanar triples. Returns, for each group, the index of its
/// representative (lowest partition id) followed by the remaining member indices.
/// When `use_c` is false only `(Â, P̂)` are compared.
pub(crate) fn coplanar_groups(triples: &[CoefficientTriple], use_c: bool) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..triples.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&triples[i], &triples[j]);
        a.a_hat
            .total_cmp(&b.a_hat)
            .then(a.p_hat.total_cmp(&b.p_hat))
            .then(if use_c { a.c_hat.total_cmp(&b.c_hat) } else { Ordering::Equal })
            .then(a.partition_id.cmp(&b.partition_id))
    });
    let same = |i: usize, j: usize| {
        let (a, b) = (&triples[i], &triples[j]);
        coefficient_eq(a.a_hat, b.a_hat)
            && coefficient_eq(a.p_hat, b.p_hat)
            && (!use_c || coefficient_eq(a.c_hat, b.c_hat))
    };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < order.len() {
        // Window of (approximately) equal Â; compare pairwise inside it.
        let mut end = start + 1;
        while end < order.len() && coefficient_eq(triples[order[start]].a_hat, triples[order[end]].a_hat) {
            end += 1;
        }
        let first_group = groups.len();
        for &idx in &order[start..end] {
            match groups[first_group..].iter_mut().find(|g| same(g[0], idx)) {
                Some(g) => g.push(idx),
                None => groups.push(vec![idx]),
            }
        }
        start = end;
    }
    for g in &mut groups {
        g.sort_by_key(|&i| triples[i].partition_id);
    }
    groups
}
