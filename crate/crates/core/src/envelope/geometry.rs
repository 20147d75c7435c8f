//! Planar convex-polygon helpers over the `(gamma, omega)` plane.

use serde::{Deserialize, Serialize};

/// A point in parameter space; `x` is `gamma`, `y` is `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub(crate) fn distance(self, o: Point) -> f64 {
        self.sub(o).norm()
    }
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Signed area, positive for counterclockwise vertex order.
pub fn signed_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        acc += a.x * b.y - b.x * a.y;
    }
    0.5 * acc
}

pub fn area(poly: &[Point]) -> f64 {
    signed_area(poly).abs()
}

/// Area centroid; falls back to the vertex mean for degenerate polygons.
pub fn centroid(poly: &[Point]) -> Point {
    let a = signed_area(poly);
    if a.abs() < f64::MIN_POSITIVE || poly.len() < 3 {
        let n = poly.len().max(1) as f64;
        return Point::new(
            poly.iter().map(|p| p.x).sum::<f64>() / n,
            poly.iter().map(|p| p.y).sum::<f64>() / n,
        );
    }
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let f = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * f;
        cy += (p.y + q.y) * f;
    }
    Point::new(cx / (6.0 * a), cy / (6.0 * a))
}

/// Clips a convex polygon to `{p : f(p) >= 0}` for an affine `f`.
/// Vertices with `|f| <= eps` are treated as lying on the boundary.
pub fn clip_halfplane<F>(poly: &[Point], f: F, eps: f64) -> Vec<Point>
where
    F: Fn(Point) -> f64,
{
    let values: Vec<f64> = poly.iter().map(|&p| f(p)).collect();
    clip_with_values(poly, &values, eps)
}

/// Same as [`clip_halfplane`] with precomputed vertex values.
pub fn clip_with_values(poly: &[Point], values: &[f64], eps: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (poly[i], poly[j]);
        let (dp, dq) = (values[i], values[j]);
        if dp >= -eps {
            out.push(p);
        }
        if (dp > eps && dq < -eps) || (dp < -eps && dq > eps) {
            let t = dp / (dp - dq);
            out.push(Point::new(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t));
        }
    }
    out
}

/// Counterclockwise convex hull with collinear and duplicate points removed.
/// `tol` is an absolute tolerance on twice the triangle area.
pub fn convex_hull(points: &[Point], tol: f64) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Removes near-duplicate and collinear vertices, orients counterclockwise and
/// rotates so the lexicographically smallest vertex comes first.
pub fn normalize_polygon(poly: &[Point], tol: f64) -> Vec<Point> {
    let mut out = convex_hull(poly, tol);
    // convex_hull already yields CCW; merge vertices closer than the tolerance.
    let mut merged: Vec<Point> = Vec::with_capacity(out.len());
    for p in out.drain(..) {
        if merged.last().is_some_and(|q: &Point| q.distance(p) <= tol) {
            continue;
        }
        merged.push(p);
    }
    while merged.len() > 1 && merged[0].distance(*merged.last().unwrap()) <= tol {
        merged.pop();
    }
    if let Some(start) = (0..merged.len()).min_by(|&i, &j| {
        merged[i]
            .x
            .total_cmp(&merged[j].x)
            .then(merged[i].y.total_cmp(&merged[j].y))
    }) {
        merged.rotate_left(start);
    }
    merged
}

/// Total length of boundary shared by two polygons: overlap of collinear edge pairs.
pub fn shared_border_length(a: &[Point], b: &[Point], tol: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..a.len() {
        let (p0, p1) = (a[i], a[(i + 1) % a.len()]);
        let len = p0.distance(p1);
        if len <= tol {
            continue;
        }
        let dir = Point::new((p1.x - p0.x) / len, (p1.y - p0.y) / len);
        for j in 0..b.len() {
            let (q0, q1) = (b[j], b[(j + 1) % b.len()]);
            // Perpendicular distances of q's endpoints to the line through p.
            let d0 = dir.x * (q0.y - p0.y) - dir.y * (q0.x - p0.x);
            let d1 = dir.x * (q1.y - p0.y) - dir.y * (q1.x - p0.x);
            if d0.abs() > tol || d1.abs() > tol {
                continue;
            }
            let t0 = dir.x * (q0.x - p0.x) + dir.y * (q0.y - p0.y);
            let t1 = dir.x * (q1.x - p0.x) + dir.y * (q1.y - p0.y);
            let lo = t0.min(t1).max(0.0);
            let hi = t0.max(t1).min(len);
            if hi > lo {
                total += hi - lo;
            }
        }
    }
    total
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + ab.x * t, a.y + ab.y * t))
}

/// Distance from `p` to the polygon boundary.
pub fn boundary_distance(p: Point, poly: &[Point]) -> f64 {
    (0..poly.len())
        .map(|i| point_segment_distance(p, poly[i], poly[(i + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

/// Point-in-convex-polygon test for a counterclockwise polygon (boundary counts as inside).
pub fn contains(poly: &[Point], p: Point, tol: f64) -> bool {
    if poly.len() < 3 {
        return false;
    }
    (0..poly.len()).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let len = a.distance(b).max(f64::MIN_POSITIVE);
        cross(a, b, p) / len >= -tol
    })
}
