//! Deterministic SVG orbit figures. Two axes give a single polyline; three
//! axes give an orthographic projection onto the first two with the third
//! encoded as per-segment gray depth shading. A single data point degrades
//! to a circle marker.

use std::path::Path;

use crate::csvio::CsvData;
use crate::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 520.0;
const MARGIN: f64 = 50.0;

pub fn plot(data: &CsvData, axes: &[String], out: &Path) -> Result<(), CliError> {
    if !(axes.len() == 2 || axes.len() == 3) {
        return Err(CliError::Invalid(format!(
            "axes must name 2 or 3 columns, got {}",
            axes.len()
        )));
    }
    let mut cols = Vec::new();
    for name in axes {
        let col = data
            .column(name)
            .ok_or_else(|| CliError::Invalid(format!("unknown column `{name}`")))?;
        cols.push(col);
    }
    let xs = &cols[0];
    let ys = &cols[1];
    let depth = cols.get(2);

    let (x_lo, x_hi) = padded_range(xs);
    let (y_lo, y_hi) = padded_range(ys);
    let pts = data_to_viewport(xs, ys);

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{h}\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n",
        m = MARGIN,
        w = WIDTH - 2.0 * MARGIN,
        h = HEIGHT - 2.0 * MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 12.0,
        axes[0]
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        axes[1]
    ));
    for (v, x, y, anchor) in [
        (x_lo, MARGIN, HEIGHT - MARGIN + 16.0, "middle"),
        (x_hi, WIDTH - MARGIN, HEIGHT - MARGIN + 16.0, "middle"),
        (y_lo, MARGIN - 6.0, HEIGHT - MARGIN, "end"),
        (y_hi, MARGIN - 6.0, MARGIN + 4.0, "end"),
    ] {
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y:.1}\" font-size=\"11\" text-anchor=\"{anchor}\">{v:.3}</text>\n"
        ));
    }

    if pts.len() == 1 {
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"black\"/>\n",
            pts[0].0, pts[0].1
        ));
    } else if let Some(zs) = depth {
        let (z_lo, z_hi) = padded_range(zs);
        let span = (z_hi - z_lo).max(f64::MIN_POSITIVE);
        for k in 1..pts.len() {
            let d = ((zs[k] - z_lo) / span).clamp(0.0, 1.0);
            let shade = 30 + (170.0 * (1.0 - d)) as u8;
            svg.push_str(&format!(
                "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"rgb({shade},{shade},{shade})\" stroke-width=\"1\"/>\n",
                pts[k - 1].0,
                pts[k - 1].1,
                pts[k].0,
                pts[k].1,
            ));
        }
    } else {
        svg.push_str("<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"");
        for (k, (px, py)) in pts.iter().enumerate() {
            if k > 0 {
                svg.push(' ');
            }
            svg.push_str(&format!("{px:.3},{py:.3}"));
        }
        svg.push_str("\"/>\n");
    }
    svg.push_str("</svg>\n");

    std::fs::write(out, svg).map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", out.display())))?;
    Ok(())
}

fn padded_range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if (hi - lo).abs() < 1e-300 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Viewport mapping used by tests to reason about the drawn bounding box.
pub fn data_to_viewport(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let (x_lo, x_hi) = padded_range(xs);
    let (y_lo, y_hi) = padded_range(ys);
    let scale = ((WIDTH - 2.0 * MARGIN) / (x_hi - x_lo)).min((HEIGHT - 2.0 * MARGIN) / (y_hi - y_lo));
    let x_mid = 0.5 * (x_lo + x_hi);
    let y_mid = 0.5 * (y_lo + y_hi);
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (WIDTH / 2.0 + (x - x_mid) * scale, HEIGHT / 2.0 - (y - y_mid) * scale))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_maps_to_square_bounding_box() {
        let n = 256;
        let xs: Vec<f64> = (0..n).map(|k| (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
        let ys: Vec<f64> = (0..n).map(|k| (2.0 * std::f64::consts::PI * k as f64 / n as f64).sin()).collect();
        let px = data_to_viewport(&xs, &ys);
        let w = px.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
            - px.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let h = px.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
            - px.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let ratio = w / h;
        assert!((0.95..1.05).contains(&ratio), "aspect ratio {ratio}");
    }
}
