use serde::{Deserialize, Serialize};

use crate::envelope::{summarize_envelope, summarize_envelope_2d, Envelope1D, Envelope2D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub gamma: [f64; 2],
    pub omega: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRecord {
    pub partition_id: usize,
    pub a_hat: f64,
    pub p_hat: f64,
    pub c_hat: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<[f64; 2]>>,
    /// Interval width or polygon area.
    pub extent: f64,
    pub n_communities: usize,
    pub n_communities_ge5: usize,
    pub label: String,
    #[serde(default)]
    pub aliases: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neighbor_ami: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata_ami: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutsideRecord {
    pub partition_id: usize,
    pub reason: String,
}

/// The domain output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDocument {
    pub mode: String,
    #[serde(rename = "box")]
    pub bbox: BoxRecord,
    pub domains: Vec<DomainRecord>,
    pub outside_box: Vec<OutsideRecord>,
    pub transitions: Vec<f64>,
}

impl DomainDocument {
    pub fn to_json(&self) -> crate::error::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> crate::error::Result<DomainDocument> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn is_2d(&self) -> bool {
        self.mode == "2d"
    }
}

pub fn domain_document_1d(env: &Envelope1D) -> DomainDocument {
    let summary = summarize_envelope(env);
    let domains = env
        .domains
        .iter()
        .zip(&summary.domains)
        .map(|(d, s)| DomainRecord {
            partition_id: d.partition_id,
            a_hat: d.triple.a_hat,
            p_hat: d.triple.p_hat,
            c_hat: d.triple.c_hat,
            interval: Some([d.gamma_lo, d.gamma_hi]),
            polygon: None,
            extent: s.extent,
            n_communities: s.n_communities,
            n_communities_ge5: s.n_communities_ge5,
            label: s.label.clone(),
            aliases: d.aliases.clone(),
            neighbor_ami: None,
            metadata_ami: None,
        })
        .collect();
    DomainDocument {
        mode: "1d".into(),
        bbox: BoxRecord {
            gamma: [env.gamma_min, env.gamma_max],
            omega: None,
        },
        domains,
        outside_box: Vec::new(),
        transitions: summary.transitions,
    }
}

pub fn domain_document_2d(env: &Envelope2D) -> DomainDocument {
    let summary = summarize_envelope_2d(env);
    let domains = env
        .domains
        .iter()
        .zip(&summary.domains)
        .map(|(d, s)| DomainRecord {
            partition_id: d.partition_id,
            a_hat: d.triple.a_hat,
            p_hat: d.triple.p_hat,
            c_hat: d.triple.c_hat,
            interval: None,
            polygon: Some(d.polygon.iter().map(|p| [p.x, p.y]).collect()),
            extent: s.extent,
            n_communities: s.n_communities,
            n_communities_ge5: s.n_communities_ge5,
            label: s.label.clone(),
            aliases: d.aliases.clone(),
            neighbor_ami: None,
            metadata_ami: None,
        })
        .collect();
    let b = env.bbox;
    DomainDocument {
        mode: "2d".into(),
        bbox: BoxRecord {
            gamma: [b.gamma_min, b.gamma_max],
            omega: Some([b.omega_min, b.omega_max]),
        },
        domains,
        outside_box: env
            .outside_box
            .iter()
            .map(|o| OutsideRecord {
                partition_id: o.partition_id,
                reason: o.reason.as_str().into(),
            })
            .collect(),
        transitions: Vec::new(),
    }
}
