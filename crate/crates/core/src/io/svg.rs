use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{validation, ChampError, Result};

use super::domains::{DomainDocument, DomainRecord};

/// Scalar used to color domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorKey {
    Communities,
    NeighborAmi,
    MetadataAmi,
}

impl FromStr for ColorKey {
    type Err = ChampError;

    fn from_str(s: &str) -> Result<ColorKey> {
        match s {
            "communities" => Ok(ColorKey::Communities),
            "neighbor-ami" => Ok(ColorKey::NeighborAmi),
            "metadata-ami" => Ok(ColorKey::MetadataAmi),
            other => Err(validation(format!(
                "unknown color key {other:?} (expected communities, neighbor-ami or metadata-ami)"
            ))),
        }
    }
}

impl ColorKey {
    fn value(self, d: &DomainRecord) -> Option<f64> {
        match self {
            ColorKey::Communities => Some(d.n_communities as f64),
            ColorKey::NeighborAmi => d.neighbor_ami,
            ColorKey::MetadataAmi => d.metadata_ami,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ColorKey::Communities => "communities",
            ColorKey::NeighborAmi => "neighbor AMI",
            ColorKey::MetadataAmi => "metadata AMI",
        }
    }
}

const PALETTE: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

fn color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0) * (PALETTE.len() - 1) as f64;
    let i = (t.floor() as usize).min(PALETTE.len() - 2);
    let f = t - i as f64;
    let (a, b) = (PALETTE[i], PALETTE[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 50.0;

/// Domain map: one filled polygon (2D) or strip (1D) per domain.
pub fn render_svg(doc: &DomainDocument, key: ColorKey) -> Result<String> {
    let values: Vec<Option<f64>> = doc.domains.iter().map(|d| key.value(d)).collect();
    let present: Vec<f64> = values.iter().flatten().copied().collect();
    if present.is_empty() && !doc.domains.is_empty() {
        return Err(validation(format!("no domain carries a {} value", key.name())));
    }
    let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let fill = |v: Option<f64>| match v {
        None => "#bbbbbb".to_string(),
        Some(v) if hi > lo => color((v - lo) / (hi - lo)),
        Some(_) => color(0.5),
    };

    let [g0, g1] = doc.bbox.gamma;
    let [w0, w1] = doc.bbox.omega.unwrap_or([0.0, 1.0]);
    let plot_h = if doc.is_2d() { 380.0 } else { 80.0 };
    let height = plot_h + 2.0 * MARGIN + 20.0;
    let plot_w = WIDTH - 2.0 * MARGIN;
    let x = |g: f64| MARGIN + (g - g0) / (g1 - g0) * plot_w;
    let y = |w: f64| MARGIN + plot_h - (w - w0) / (w1 - w0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    for (d, v) in doc.domains.iter().zip(&values) {
        let title = format!("<title>partition {} ({})</title>", d.partition_id, d.label);
        if let Some(poly) = &d.polygon {
            let pts: Vec<String> = poly.iter().map(|p| format!("{:.3},{:.3}", x(p[0]), y(p[1]))).collect();
            let _ = writeln!(
                s,
                "<polygon points=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.5\">{title}</polygon>",
                pts.join(" "),
                fill(*v)
            );
        } else if let Some([a, b]) = d.interval {
            let _ = writeln!(
                s,
                "<rect x=\"{:.3}\" y=\"{MARGIN:.3}\" width=\"{:.3}\" height=\"{plot_h:.3}\" fill=\"{}\" stroke=\"black\" stroke-width=\"0.5\">{title}</rect>",
                x(a),
                x(b) - x(a),
                fill(*v)
            );
        }
    }
    let base = MARGIN + plot_h;
    let _ = writeln!(
        s,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>"
    );
    let _ = writeln!(s, "<text x=\"{MARGIN}\" y=\"{:.1}\" font-size=\"12\">{g0}</text>", base + 16.0);
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{g1}</text>",
        WIDTH - MARGIN,
        base + 16.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">gamma</text>",
        WIDTH / 2.0,
        base + 30.0
    );
    if doc.is_2d() {
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{base:.1}\" font-size=\"12\" text-anchor=\"end\">{w0}</text>", MARGIN - 4.0);
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{MARGIN:.1}\" font-size=\"12\" text-anchor=\"end\">{w1}</text>", MARGIN - 4.0);
        let _ = writeln!(
            s,
            "<text x=\"14\" y=\"{:.1}\" font-size=\"13\" transform=\"rotate(-90 14 {:.1})\" text-anchor=\"middle\">omega</text>",
            MARGIN + plot_h / 2.0,
            MARGIN + plot_h / 2.0
        );
    }
    if !present.is_empty() {
        let _ = writeln!(
            s,
            "<text x=\"{MARGIN}\" y=\"{:.1}\" font-size=\"12\">{}: {} (dark) to {} (light)</text>",
            MARGIN - 14.0,
            key.name(),
            lo,
            hi
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
