use serde::{Deserialize, Serialize};

use crate::coefficients::QualityModel;
use crate::ensemble::Ensemble;
use crate::error::Result;
use crate::partition::{Partition, Provenance};

use super::parse_error;

/// One line of an ensemble file: a single heuristic run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    pub seed: u64,
    pub labels: Vec<usize>,
}

/// One record per provenance entry, ordered by run id; partitions without
/// provenance get a single record with a null `gamma`.
pub fn ensemble_records(ensemble: &Ensemble<'_>) -> Vec<EnsembleRecord> {
    let mut runs: Vec<(u64, EnsembleRecord)> = Vec::new();
    let mut bare: Vec<EnsembleRecord> = Vec::new();
    for entry in ensemble.entries() {
        let labels = entry.partition.labels().to_vec();
        if entry.provenance.is_empty() {
            bare.push(EnsembleRecord {
                gamma: None,
                omega: None,
                seed: 0,
                labels,
            });
            continue;
        }
        for p in &entry.provenance {
            runs.push((
                p.run_id,
                EnsembleRecord {
                    gamma: Some(p.gamma),
                    omega: p.omega,
                    seed: p.seed,
                    labels: labels.clone(),
                },
            ));
        }
    }
    runs.sort_by_key(|(id, _)| *id);
    runs.into_iter().map(|(_, r)| r).chain(bare).collect()
}

pub fn write_ensemble_string(ensemble: &Ensemble<'_>) -> Result<String> {
    let mut out = String::new();
    for r in ensemble_records(ensemble) {
        out.push_str(&serde_json::to_string(&r)?);
        out.push('\n');
    }
    Ok(out)
}

/// Parses JSON lines; blank lines are skipped.
pub fn parse_ensemble(text: &str, source: &str) -> Result<Vec<EnsembleRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| parse_error(source, i + 1, e.to_string())))
        .collect()
}

/// Builds an ensemble; the run id of each record is its position in `records`.
pub fn ensemble_from_records<'a>(model: &'a dyn QualityModel, records: &[EnsembleRecord]) -> Result<Ensemble<'a>> {
    let mut ensemble = Ensemble::new(model);
    for (i, r) in records.iter().enumerate() {
        let provenance = r.gamma.map(|gamma| Provenance {
            gamma,
            omega: r.omega,
            seed: r.seed,
            run_id: i as u64,
        });
        ensemble.insert(Partition::new(r.labels.clone()), provenance)?;
    }
    Ok(ensemble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;

    #[test]
    fn round_trip() {
        let net = Network::from_edges([(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let mut ens = Ensemble::new(&net);
        for (run, labels) in [vec![0, 0, 1], vec![0, 1, 2], vec![1, 1, 0]].into_iter().enumerate() {
            let prov = Provenance {
                gamma: 0.1 + run as f64 / 3.0,
                omega: None,
                seed: 99 + run as u64,
                run_id: run as u64,
            };
            ens.insert(Partition::new(labels), Some(prov)).unwrap();
        }
        let text = write_ensemble_string(&ens).unwrap();
        assert_eq!(text.lines().count(), 3);
        let back = ensemble_from_records(&net, &parse_ensemble(&text, "e").unwrap()).unwrap();
        assert_eq!(back.partitions(), ens.partitions());
        for (a, b) in back.entries().iter().zip(ens.entries()) {
            assert_eq!(a.provenance, b.provenance);
        }
        assert_eq!(write_ensemble_string(&back).unwrap(), text);
    }

    #[test]
    fn bad_line_and_length_mismatch() {
        let net = Network::from_edges([(0, 1, 1.0)]).unwrap();
        assert!(parse_ensemble("{\"gamma\":1}\n", "e").is_err());
        let recs = parse_ensemble("{\"gamma\":1.0,\"omega\":null,\"seed\":1,\"labels\":[0,0,0]}\n", "e").unwrap();
        assert!(ensemble_from_records(&net, &recs).is_err());
    }
}
