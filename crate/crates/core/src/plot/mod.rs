//! Deterministic SVG scatterplots of embeddings.

use crate::error::{Error, Result};
use crate::projections::Embedding;
use std::fs;
use std::path::Path;

/// Categorical 10-color cycle (labels beyond it wrap around).
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Canvas geometry and styling.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    pub point_radius: f64,
    pub title: Option<String>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self {
            width: 800,
            height: 800,
            point_radius: 2.5,
            title: None,
        }
    }
}

fn color_for(label: Option<i64>, distinct: &[i64]) -> &'static str {
    match label {
        None => PALETTE[0],
        Some(l) => {
            let idx = distinct.iter().position(|&d| d == l).unwrap_or(0);
            PALETTE[idx % PALETTE.len()]
        }
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Render an embedding as an SVG file: axis-free square canvas, coordinates
/// min-max fitted with a 5% margin, one filled circle per point colored by
/// label. Identical inputs produce byte-identical files.
pub fn render_scatter(
    e: &Embedding,
    labels: Option<&[i64]>,
    spec: &PlotSpec,
    path: impl AsRef<Path>,
) -> Result<()> {
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::Param("plot dimensions must be positive".into()));
    }
    if let Some(l) = labels {
        if l.len() != e.len() {
            return Err(Error::Param(format!(
                "{} labels for {} points",
                l.len(),
                e.len()
            )));
        }
    }
    let svg = scatter_svg(e, labels, spec);
    fs::write(path.as_ref(), svg.as_bytes())?;
    Ok(())
}

/// The SVG document as a string (the testable core of [`render_scatter`]).
pub fn scatter_svg(e: &Embedding, labels: Option<&[i64]>, spec: &PlotSpec) -> String {
    let n = e.len();
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let (x, y) = e.point(i);
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let range_x = if max_x > min_x { max_x - min_x } else { 1.0 };
    let range_y = if max_y > min_y { max_y - min_y } else { 1.0 };

    let margin_x = 0.05 * spec.width as f64;
    let margin_y = 0.05 * spec.height as f64;
    let inner_w = spec.width as f64 - 2.0 * margin_x;
    let inner_h = spec.height as f64 - 2.0 * margin_y;

    let distinct: Vec<i64> = labels
        .map(|l| {
            let mut d = l.to_vec();
            d.sort_unstable();
            d.dedup();
            d
        })
        .unwrap_or_default();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        spec.width, spec.height, spec.width, spec.height
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");
    if let Some(title) = &spec.title {
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n",
            margin_x,
            margin_y * 0.6,
            escape_xml(title)
        ));
    }
    for i in 0..n {
        let (x, y) = e.point(i);
        let px = margin_x + (x - min_x) / range_x * inner_w;
        // SVG y grows downward; flip so larger y plots higher.
        let py = margin_y + (1.0 - (y - min_y) / range_y) * inner_h;
        let fill = color_for(labels.map(|l| l[i]), &distinct);
        out.push_str(&format!(
            "<circle cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"{:.3}\" fill=\"{fill}\"/>\n",
            spec.point_radius
        ));
    }
    out.push_str("</svg>\n");
    out
}
