//! Hard partitions of nodes (or node-layers) into communities.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Community labels in canonical form: ids are renumbered `0, 1, 2, ...` in
/// order of first appearance, so two partitions are equal exactly when they
/// group the same nodes together.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    /// Canonicalizes arbitrary labels.
    pub fn new(labels: Vec<usize>) -> Partition {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let labels = labels
            .into_iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    /// Every node in one community.
    pub fn all_in_one(n: usize) -> Partition {
        Partition { labels: vec![0; n] }
    }

    /// Every node in its own community.
    pub fn singletons(n: usize) -> Partition {
        Partition {
            labels: (0..n).collect(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&m| m + 1)
    }

    /// Size of each community, indexed by canonical id.
    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Number of communities with at least `min_size` members.
    pub fn communities_at_least(&self, min_size: usize) -> usize {
        self.community_sizes()
            .into_iter()
            .filter(|&s| s >= min_size)
            .count()
    }

    /// The partition obtained by merging communities `a` and `b`.
    pub fn merge(&self, a: usize, b: usize) -> Partition {
        let labels = self
            .labels
            .iter()
            .map(|&l| if l == b { a } else { l })
            .collect();
        Partition::new(labels)
    }

    /// Restriction to the given element indices, re-canonicalized.
    pub fn restrict(&self, indices: &[usize]) -> Partition {
        Partition::new(indices.iter().map(|&i| self.labels[i]).collect())
    }
}

/// Record of the heuristic call that produced a partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub gamma: f64,
    pub omega: Option<f64>,
    pub seed: u64,
    pub run_id: u64,
}

/// Enumerates every set partition of `n` elements as restricted growth strings
/// (Bell(n) partitions in total).
#[derive(Debug, Clone)]
pub struct SetPartitions {
    current: Vec<usize>,
    maxima: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> SetPartitions {
        SetPartitions {
            current: vec![0; n],
            maxima: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition {
            labels: self.current.clone(),
        };
        // maxima[i] = max(current[0..i]); current[i] may range over 0..=maxima[i] + 1.
        let n = self.current.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let bound = self.maxima[i] + 1;
            if self.current[i] < bound {
                self.current[i] += 1;
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.maxima[j] = self.maxima[j - 1].max(self.current[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}
