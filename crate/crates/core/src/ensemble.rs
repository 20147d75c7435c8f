//! De-duplicated sets of partitions with their coefficients and provenance.

use std::collections::HashMap;

use crate::coefficients::{CoefficientTriple, QualityModel};
use crate::error::{ChampError, Result};
use crate::partition::{Partition, Provenance};

/// Outcome of [`Ensemble::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    /// A previously unseen partition was stored under this id.
    Inserted(usize),
    /// The partition already existed; only its provenance was appended.
    Merged(usize),
}

impl Insertion {
    pub fn partition_id(self) -> usize {
        match self {
            Insertion::Inserted(id) | Insertion::Merged(id) => id,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleEntry {
    pub partition: Partition,
    pub triple: CoefficientTriple,
    pub provenance: Vec<Provenance>,
}

/// Unique partitions of one network. Partition ids are dense indices `0..len()`.
pub struct Ensemble<'a> {
    model: &'a dyn QualityModel,
    entries: Vec<EnsembleEntry>,
    index: HashMap<Partition, usize>,
}

impl<'a> Ensemble<'a> {
    pub fn new(model: &'a dyn QualityModel) -> Self {
        Ensemble {
            model,
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'a dyn QualityModel {
        self.model
    }

    fn check_len(&self, partition: &Partition) -> Result<()> {
        let expected = self.model.element_count();
        if partition.len() != expected {
            return Err(ChampError::LengthMismatch {
                expected,
                actual: partition.len(),
            });
        }
        Ok(())
    }

    fn merge_existing(&mut self, partition: &Partition, provenance: Option<Provenance>) -> Option<Insertion> {
        let id = *self.index.get(partition)?;
        self.entries[id].provenance.extend(provenance);
        Some(Insertion::Merged(id))
    }

    fn push(&mut self, partition: Partition, mut triple: CoefficientTriple, provenance: Option<Provenance>) -> Insertion {
        let id = self.entries.len();
        triple.partition_id = id;
        self.index.insert(partition.clone(), id);
        self.entries.push(EnsembleEntry {
            partition,
            triple,
            provenance: provenance.into_iter().collect(),
        });
        Insertion::Inserted(id)
    }

    /// Adds a partition; coefficients are computed only for new partitions.
    pub fn insert(&mut self, partition: Partition, provenance: Option<Provenance>) -> Result<Insertion> {
        self.check_len(&partition)?;
        if let Some(merged) = self.merge_existing(&partition, provenance) {
            return Ok(merged);
        }
        let triple = self.model.coefficients(&partition)?;
        Ok(self.push(partition, triple, provenance))
    }

    /// Adds a partition whose coefficients were computed elsewhere.
    pub fn insert_with_triple(
        &mut self,
        partition: Partition,
        triple: CoefficientTriple,
        provenance: Option<Provenance>,
    ) -> Result<Insertion> {
        self.check_len(&partition)?;
        if let Some(merged) = self.merge_existing(&partition, provenance) {
            return Ok(merged);
        }
        Ok(self.push(partition, triple, provenance))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[EnsembleEntry] {
        &self.entries
    }

    pub fn partition(&self, id: usize) -> &Partition {
        &self.entries[id].partition
    }

    pub fn id_of(&self, partition: &Partition) -> Option<usize> {
        self.index.get(partition).copied()
    }

    pub fn triples(&self) -> Vec<CoefficientTriple> {
        self.entries.iter().map(|e| e.triple).collect()
    }

    pub fn partitions(&self) -> Vec<&Partition> {
        self.entries.iter().map(|e| &e.partition).collect()
    }

    /// Total number of provenance records across all unique partitions.
    pub fn run_count(&self) -> usize {
        self.entries.iter().map(|e| e.provenance.len()).sum()
    }

    /// Reorders partitions lexicographically by canonical labels and reassigns ids,
    /// so the ids depend only on the set of partitions, not on insertion order.
    /// Provenance lists are sorted by run id.
    pub fn canonicalize(&mut self) {
        self.entries
            .sort_by(|a, b| a.partition.labels().cmp(b.partition.labels()));
        self.index.clear();
        for (id, entry) in self.entries.iter_mut().enumerate() {
            entry.triple.partition_id = id;
            entry.provenance.sort_by_key(|p| p.run_id);
            self.index.insert(entry.partition.clone(), id);
        }
    }
}

impl std::fmt::Debug for Ensemble<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ensemble")
            .field("elements", &self.model.element_count())
            .field("unique", &self.entries.len())
            .finish()
    }
}
