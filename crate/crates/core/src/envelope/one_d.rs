use crate::coefficients::CoefficientTriple;
use crate::error::{validation, Result};

use crate::coefficients::coefficient_eq;

use super::{check_triples, coplanar_groups, tie_order};

/// Half-open optimality interval `[gamma_lo, gamma_hi)` of one partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain1D {
    pub partition_id: usize,
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub triple: CoefficientTriple,
    /// Partition ids with the same line, sorted ascending.
    pub aliases: Vec<usize>,
}

impl Domain1D {
    pub fn width(&self) -> f64 {
        self.gamma_hi - self.gamma_lo
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope1D {
    pub gamma_min: f64,
    pub gamma_max: f64,
    /// Domains in increasing `gamma` order; consecutive intervals share endpoints.
    pub domains: Vec<Domain1D>,
}

impl Envelope1D {
    /// The interior boundaries between consecutive domains.
    pub fn transitions(&self) -> Vec<f64> {
        self.domains.iter().skip(1).map(|d| d.gamma_lo).collect()
    }

    /// Domain containing `gamma`; the upper end of the range belongs to the last domain.
    pub fn owner_at(&self, gamma: f64) -> Option<&Domain1D> {
        if !(self.gamma_min..=self.gamma_max).contains(&gamma) {
            return None;
        }
        let idx = self.domains.partition_point(|d| d.gamma_lo <= gamma);
        self.domains.get(idx.saturating_sub(1))
    }
}

fn strictly_after(gamma: f64, gamma_p: f64) -> bool {
    gamma > gamma_p + 1e-12 * gamma_p.abs().max(1.0)
}

/// Admissible partitions of a single-layer ensemble over `[gamma_min, gamma_max)`.
///
/// Lines are sorted by decreasing `P̂` and reduced to their upper envelope with
/// a stack, in `O(N log N)`. Where several lines meet at one point the line
/// with the smallest `P̂` takes over, and at `gamma_min` itself the maximum of
/// `Q` is chosen with the same preference.
pub fn prune_1d(triples: &[CoefficientTriple], gamma_min: f64, gamma_max: f64) -> Result<Envelope1D> {
    check_triples(triples)?;
    if !(gamma_min.is_finite() && gamma_max.is_finite()) {
        return Err(validation("gamma range must be finite"));
    }
    if gamma_min < 0.0 {
        return Err(validation(format!("gamma_min must be non-negative, got {gamma_min}")));
    }
    if gamma_min >= gamma_max {
        return Err(validation(format!(
            "gamma_min ({gamma_min}) must be below gamma_max ({gamma_max})"
        )));
    }

    let groups = coplanar_groups(triples, false);
    let reps: Vec<&CoefficientTriple> = groups.iter().map(|g| &triples[g[0]]).collect();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&x, &y| {
        let (a, b) = (reps[x], reps[y]);
        b.p_hat
            .total_cmp(&a.p_hat)
            .then(b.a_hat.total_cmp(&a.a_hat))
            .then(tie_order(a, b))
    });

    let crossing = |x: usize, y: usize| (reps[x].a_hat - reps[y].a_hat) / (reps[x].p_hat - reps[y].p_hat);
    let mut hull: Vec<usize> = Vec::new();
    for &r in &order {
        if let Some(&top) = hull.last() {
            if coefficient_eq(reps[top].p_hat, reps[r].p_hat) {
                // Parallel: only the higher line can be on top.
                if reps[r].a_hat <= reps[top].a_hat {
                    continue;
                }
                hull.pop();
            }
        }
        while hull.len() >= 2 {
            let (first, mid) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // `mid` keeps a domain only if `r` overtakes `first` strictly after `mid` does.
            if strictly_after(crossing(first, r), crossing(first, mid)) {
                break;
            }
            hull.pop();
        }
        hull.push(r);
    }
    let breaks: Vec<f64> = hull.windows(2).map(|w| crossing(w[0], w[1])).collect();

    let mut bounds: Vec<(usize, f64, f64)> = Vec::new();
    let mut k = breaks.partition_point(|&b| !strictly_after(b, gamma_min));
    let mut lo = gamma_min;
    while k < breaks.len() && breaks[k] < gamma_max {
        bounds.push((hull[k], lo, breaks[k]));
        lo = breaks[k];
        k += 1;
    }
    bounds.push((hull[k], lo, gamma_max));

    let domains = bounds
        .into_iter()
        .map(|(r, lo, hi)| {
            let group = &groups[r];
            Domain1D {
                partition_id: triples[group[0]].partition_id,
                gamma_lo: lo,
                gamma_hi: hi,
                triple: triples[group[0]],
                aliases: group[1..].iter().map(|&i| triples[i].partition_id).collect(),
            }
        })
        .collect();
    Ok(Envelope1D {
        gamma_min,
        gamma_max,
        domains,
    })
}
