use crate::coefficients::CoefficientTriple;

use super::geometry::Point;

/// Relative tolerance under which two `Q` values at a sample point count as tied.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Direct evaluation of every plane at every sample point. For each point
/// returns the ids of all partitions attaining the maximum, sorted ascending.
pub fn brute_force_envelope(triples: &[CoefficientTriple], points: &[Point]) -> Vec<Vec<usize>> {
    brute_force_envelope_with_tolerance(triples, points, ORACLE_TOLERANCE)
}

pub fn brute_force_envelope_with_tolerance(
    triples: &[CoefficientTriple],
    points: &[Point],
    rel_tol: f64,
) -> Vec<Vec<usize>> {
    points
        .iter()
        .map(|p| {
            let q: Vec<f64> = triples.iter().map(|t| t.modularity(p.x, p.y)).collect();
            let best = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let tol = rel_tol * best.abs().max(1.0);
            let mut ids: Vec<usize> = triples
                .iter()
                .zip(&q)
                .filter(|(_, &v)| v >= best - tol)
                .map(|(t, _)| t.partition_id)
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect()
}
