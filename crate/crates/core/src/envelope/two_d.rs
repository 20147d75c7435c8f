use crate::coefficients::CoefficientTriple;
use crate::error::{validation, Result};

use super::geometry::{self, Point};
use super::{check_triples, coplanar_groups, tie_order};

/// Axis-aligned parameter rectangle `[gamma_min, gamma_max] × [omega_min, omega_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBox {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

impl ParamBox {
    pub fn new(gamma_min: f64, gamma_max: f64, omega_min: f64, omega_max: f64) -> Result<ParamBox> {
        let b = ParamBox {
            gamma_min,
            gamma_max,
            omega_min,
            omega_max,
        };
        if ![gamma_min, gamma_max, omega_min, omega_max].iter().all(|v| v.is_finite()) {
            return Err(validation("box bounds must be finite"));
        }
        if gamma_min < 0.0 || omega_min < 0.0 {
            return Err(validation("box lower bounds must be non-negative"));
        }
        if gamma_min >= gamma_max || omega_min >= omega_max {
            return Err(validation(format!(
                "degenerate box [{gamma_min}, {gamma_max}] x [{omega_min}, {omega_max}]"
            )));
        }
        Ok(b)
    }

    pub fn area(&self) -> f64 {
        (self.gamma_max - self.gamma_min) * (self.omega_max - self.omega_min)
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.gamma_min + self.gamma_max),
            0.5 * (self.omega_min + self.omega_max),
        )
    }

    /// Counterclockwise corners starting at `(gamma_min, omega_min)`.
    pub fn corners(&self) -> Vec<Point> {
        vec![
            Point::new(self.gamma_min, self.omega_min),
            Point::new(self.gamma_max, self.omega_min),
            Point::new(self.gamma_max, self.omega_max),
            Point::new(self.gamma_min, self.omega_max),
        ]
    }

    fn diagonal(&self) -> f64 {
        (self.gamma_max - self.gamma_min).hypot(self.omega_max - self.omega_min)
    }

    /// Box used to tell admissible-but-outside partitions apart from dominated ones.
    pub fn enlarged(&self) -> ParamBox {
        ParamBox {
            gamma_min: 0.0,
            gamma_max: self.gamma_max + 3.0 * (self.gamma_max - self.gamma_min) + 1.0,
            omega_min: 0.0,
            omega_max: self.omega_max + 3.0 * (self.omega_max - self.omega_min) + 1.0,
        }
    }

    fn clip(&self, poly: &[Point]) -> Vec<Point> {
        let (g0, g1, w0, w1) = (self.gamma_min, self.gamma_max, self.omega_min, self.omega_max);
        let mut out = geometry::clip_halfplane(poly, |p| p.x - g0, 0.0);
        out = geometry::clip_halfplane(&out, |p| g1 - p.x, 0.0);
        out = geometry::clip_halfplane(&out, |p| p.y - w0, 0.0);
        geometry::clip_halfplane(&out, |p| w1 - p.y, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prune2dOptions {
    /// Build on an enlarged box first so partitions optimal only outside the
    /// requested box are reported as such.
    pub detect_outside: bool,
}

impl Default for Prune2dOptions {
    fn default() -> Self {
        Prune2dOptions { detect_outside: true }
    }
}

/// Convex optimality region of one partition, counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain2D {
    pub partition_id: usize,
    pub polygon: Vec<Point>,
    pub area: f64,
    pub triple: CoefficientTriple,
    /// Partition ids with the same plane, sorted ascending.
    pub aliases: Vec<usize>,
}

impl Domain2D {
    pub fn centroid(&self) -> Point {
        geometry::centroid(&self.polygon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutsideReason {
    /// Optimal somewhere on the enlarged box but nowhere inside the requested one.
    Outside,
    /// Region inside the box is below the area threshold.
    MeasureZero,
}

impl OutsideReason {
    pub fn as_str(self) -> &'static str {
        match self {
            OutsideReason::Outside => "outside",
            OutsideReason::MeasureZero => "measure-zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutsideBox {
    pub partition_id: usize,
    pub reason: OutsideReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope2D {
    pub bbox: ParamBox,
    /// Sorted by partition id.
    pub domains: Vec<Domain2D>,
    /// Sorted by partition id.
    pub outside_box: Vec<OutsideBox>,
}

impl Envelope2D {
    /// Owner of `p`; on shared borders the partition with larger `Q`, then the tie order, wins.
    pub fn owner_at(&self, p: Point) -> Option<&Domain2D> {
        let tol = 1e-12 * self.bbox.diagonal();
        self.domains
            .iter()
            .filter(|d| geometry::contains(&d.polygon, p, tol))
            .max_by(|a, b| {
                a.triple
                    .modularity(p.x, p.y)
                    .total_cmp(&b.triple.modularity(p.x, p.y))
                    .then_with(|| tie_order(&b.triple, &a.triple))
            })
    }

    /// See [`domain_neighbors`].
    pub fn neighbors(&self) -> Vec<(usize, usize, f64)> {
        domain_neighbors(&self.domains)
    }

    /// Distance from `p` to the nearest domain border (box edges excluded).
    pub fn border_distance(&self, p: Point) -> f64 {
        let b = &self.bbox;
        let tol = 1e-12 * b.diagonal();
        let on_box = |a: Point, c: Point| {
            let vertical = (a.x - c.x).abs() <= tol && ((a.x - b.gamma_min).abs() <= tol || (a.x - b.gamma_max).abs() <= tol);
            let horizontal = (a.y - c.y).abs() <= tol && ((a.y - b.omega_min).abs() <= tol || (a.y - b.omega_max).abs() <= tol);
            vertical || horizontal
        };
        let mut best = f64::INFINITY;
        for d in &self.domains {
            let n = d.polygon.len();
            for i in 0..n {
                let (a, c) = (d.polygon[i], d.polygon[(i + 1) % n]);
                if !on_box(a, c) {
                    best = best.min(geometry::point_segment_distance(p, a, c));
                }
            }
        }
        best
    }
}

/// Pairs of domains sharing a border longer than `1e-9`, with the shared length.
/// Pairs are `(i, j)` indices into `domains` with `i < j`; domains touching in
/// a single point are not neighbors.
pub fn domain_neighbors(domains: &[Domain2D]) -> Vec<(usize, usize, f64)> {
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in domains.iter().flat_map(|d| &d.polygon) {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let tol = 1e-9 * lo.distance(hi).max(1.0);
    let mut out = Vec::new();
    for i in 0..domains.len() {
        for j in i + 1..domains.len() {
            let len = geometry::shared_border_length(&domains[i].polygon, &domains[j].polygon, tol);
            if len > 1e-9 {
                out.push((i, j, len));
            }
        }
    }
    out
}

/// [`prune_2d_with`] using default options.
pub fn prune_2d(triples: &[CoefficientTriple], bbox: ParamBox) -> Result<Envelope2D> {
    prune_2d_with(triples, bbox, Prune2dOptions::default())
}

/// Optimality regions of the planes `Q = Â − γP̂ + ωĈ` over `bbox`.
///
/// Planes are inserted one at a time into a subdivision of the working box
/// into convex cells, one per currently optimal partition; each insertion
/// carves the region where the new plane is strictly higher out of the
/// existing cells.
pub fn prune_2d_with(triples: &[CoefficientTriple], bbox: ParamBox, options: Prune2dOptions) -> Result<Envelope2D> {
    check_triples(triples)?;
    let bbox = ParamBox::new(bbox.gamma_min, bbox.gamma_max, bbox.omega_min, bbox.omega_max)?;
    let work = if options.detect_outside { bbox.enlarged() } else { bbox };

    let groups = coplanar_groups(triples, true);
    let reps: Vec<CoefficientTriple> = groups.iter().map(|g| triples[g[0]]).collect();

    let g_abs = work.gamma_min.abs().max(work.gamma_max.abs());
    let w_abs = work.omega_min.abs().max(work.omega_max.abs());
    let scale = 1.0
        + reps
            .iter()
            .map(|t| t.a_hat.abs() + t.p_hat.abs() * g_abs + t.c_hat.abs() * w_abs)
            .fold(0.0, f64::max);
    let eps = 1e-12 * scale;
    let diag = work.diagonal();
    let hull_tol = 1e-15 * diag * diag;

    let center = work.center();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&reps[i], &reps[j]);
        b.modularity(center.x, center.y)
            .total_cmp(&a.modularity(center.x, center.y))
            .then(a.a_hat.total_cmp(&b.a_hat))
            .then(a.p_hat.total_cmp(&b.p_hat))
            .then(a.c_hat.total_cmp(&b.c_hat))
            .then(a.partition_id.cmp(&b.partition_id))
    });

    let mut cells: Vec<Option<Vec<Point>>> = vec![None; reps.len()];
    let mut active: Vec<usize> = Vec::new();
    cells[order[0]] = Some(work.corners());
    active.push(order[0]);

    let mut values: Vec<f64> = Vec::new();
    let mut negated: Vec<f64> = Vec::new();
    for &t in &order[1..] {
        let new = reps[t];
        let mut gained: Vec<Point> = Vec::new();
        let mut emptied: Vec<usize> = Vec::new();
        for &o in &active {
            let owner = reps[o];
            let poly = cells[o].as_ref().expect("active cell");
            values.clear();
            values.extend(
                poly.iter()
                    .map(|p| new.modularity(p.x, p.y) - owner.modularity(p.x, p.y)),
            );
            if values.iter().all(|&d| d <= eps) {
                continue;
            }
            gained.extend(geometry::clip_with_values(poly, &values, eps));
            negated.clear();
            negated.extend(values.iter().map(|d| -d));
            let keep = geometry::clip_with_values(poly, &negated, eps);
            if keep.len() < 3 || geometry::area(&keep) <= 0.0 {
                emptied.push(o);
                cells[o] = None;
            } else {
                cells[o] = Some(keep);
            }
        }
        if gained.is_empty() {
            continue;
        }
        active.retain(|o| !emptied.contains(o));
        let hull = geometry::convex_hull(&gained, hull_tol);
        if hull.len() >= 3 && geometry::area(&hull) > 0.0 {
            cells[t] = Some(hull);
            active.push(t);
        }
    }

    let box_area = bbox.area();
    let min_area = 1e-12 * box_area;
    let min_area_work = 1e-12 * work.area();
    let point_tol = 1e-12 * bbox.diagonal();
    let mut domains = Vec::new();
    let mut outside_box = Vec::new();
    for &r in &active {
        let cell = cells[r].as_ref().expect("active cell");
        let inside = bbox.clip(cell);
        let area_in = geometry::area(&inside);
        let rep = reps[r];
        if area_in >= min_area {
            let polygon = geometry::normalize_polygon(&inside, point_tol);
            let group = &groups[r];
            domains.push(Domain2D {
                partition_id: rep.partition_id,
                area: geometry::area(&polygon),
                polygon,
                triple: rep,
                aliases: group[1..].iter().map(|&i| triples[i].partition_id).collect(),
            });
        } else {
            let reason = if area_in == 0.0 && geometry::area(cell) >= min_area_work {
                OutsideReason::Outside
            } else {
                OutsideReason::MeasureZero
            };
            outside_box.push(OutsideBox {
                partition_id: rep.partition_id,
                reason,
            });
        }
    }
    domains.sort_by_key(|d| d.partition_id);
    outside_box.sort_by_key(|o| o.partition_id);
    Ok(Envelope2D {
        bbox,
        domains,
        outside_box,
    })
}
