use std::collections::BTreeMap;

use crate::coefficients::CoefficientTriple;

use super::{Envelope1D, Envelope2D};

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSummary {
    pub partition_id: usize,
    /// Interval width (1D) or polygon area (2D).
    pub extent: f64,
    pub n_communities: usize,
    pub n_communities_ge5: usize,
    /// `"X.Y"`: X communities of at least five nodes, Y the rank of the
    /// extent among domains sharing the same X (1 = largest).
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSummary {
    /// Same order as the envelope's domains.
    pub domains: Vec<DomainSummary>,
    /// 1D transition points; empty for 2D envelopes.
    pub transitions: Vec<f64>,
    pub total_extent: f64,
}

fn summarize(items: Vec<(CoefficientTriple, f64)>, transitions: Vec<f64>) -> EnvelopeSummary {
    let mut by_x: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (t, _)) in items.iter().enumerate() {
        by_x.entry(t.community_count_ge5).or_default().push(i);
    }
    let mut labels = vec![String::new(); items.len()];
    for (x, mut members) in by_x {
        members.sort_by(|&i, &j| {
            items[j]
                .1
                .total_cmp(&items[i].1)
                .then(items[i].0.partition_id.cmp(&items[j].0.partition_id))
        });
        for (rank, i) in members.into_iter().enumerate() {
            labels[i] = format!("{x}.{}", rank + 1);
        }
    }
    let total_extent = items.iter().map(|(_, e)| e).sum();
    let domains = items
        .into_iter()
        .zip(labels)
        .map(|((t, extent), label)| DomainSummary {
            partition_id: t.partition_id,
            extent,
            n_communities: t.community_count,
            n_communities_ge5: t.community_count_ge5,
            label,
        })
        .collect();
    EnvelopeSummary {
        domains,
        transitions,
        total_extent,
    }
}

/// Widths, community counts, transitions and ranked labels of a 1D envelope.
pub fn summarize_envelope(env: &Envelope1D) -> EnvelopeSummary {
    let items = env.domains.iter().map(|d| (d.triple, d.width())).collect();
    summarize(items, env.transitions())
}

/// Areas, community counts and ranked labels of a 2D envelope.
pub fn summarize_envelope_2d(env: &Envelope2D) -> EnvelopeSummary {
    let items = env.domains.iter().map(|d| (d.triple, d.area)).collect();
    summarize(items, Vec::new())
}
