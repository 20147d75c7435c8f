use std::fmt::Write as _;

use crate::coefficients::CoefficientTriple;
use crate::error::Result;

use super::parse_error;

const COEFF_HEADER: &str = "partition_id,a_hat,p_hat,c_hat,n_communities,n_communities_ge5";

pub fn coefficients_csv(triples: &[CoefficientTriple]) -> String {
    let mut out = String::from(COEFF_HEADER);
    out.push('\n');
    for t in triples {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            t.partition_id, t.a_hat, t.p_hat, t.c_hat, t.community_count, t.community_count_ge5
        );
    }
    out
}

pub fn parse_coefficients_csv(text: &str, source: &str) -> Result<Vec<CoefficientTriple>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == COEFF_HEADER => {}
        _ => return Err(parse_error(source, 1, format!("expected header `{COEFF_HEADER}`"))),
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 6 {
            return Err(parse_error(source, i + 1, "expected 6 fields"));
        }
        let bad = |what: &str| parse_error(source, i + 1, format!("invalid {what}"));
        out.push(CoefficientTriple {
            partition_id: f[0].parse().map_err(|_| bad("partition_id"))?,
            a_hat: f[1].parse().map_err(|_| bad("a_hat"))?,
            p_hat: f[2].parse().map_err(|_| bad("p_hat"))?,
            c_hat: f[3].parse().map_err(|_| bad("c_hat"))?,
            community_count: f[4].parse().map_err(|_| bad("n_communities"))?,
            community_count_ge5: f[5].parse().map_err(|_| bad("n_communities_ge5"))?,
        });
    }
    Ok(out)
}

/// Square matrix with partition ids as header row and first column.
pub fn ami_matrix_csv(ids: &[usize], matrix: &[Vec<f64>]) -> String {
    let mut out = String::from("partition_id");
    for id in ids {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for (id, row) in ids.iter().zip(matrix) {
        let _ = write!(out, "{id}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Per-run modularity at the run's own parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub run_id: u64,
    pub partition_id: usize,
    pub gamma: f64,
    pub omega: Option<f64>,
    pub modularity: f64,
    pub n_communities: usize,
    pub n_communities_ge5: usize,
}

pub fn scatter_csv(rows: &[ScatterRow]) -> String {
    let mut out = String::from("run_id,partition_id,gamma,omega,modularity,n_communities,n_communities_ge5\n");
    for r in rows {
        let omega = r.omega.map(|w| w.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.run_id, r.partition_id, r.gamma, omega, r.modularity, r.n_communities, r.n_communities_ge5
        );
    }
    out
}
