use std::fmt::Write;

use super::transform::Scalogram;

/// Static heatmap of `|W|`: translations left to right, smallest scale at
/// the bottom, grey level proportional to magnitude.
pub fn scalogram_svg(s: &Scalogram, cell: f64) -> String {
    let nb = s.translations.len();
    let na = s.scales.len();
    let max = s.coefficients.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let (w, h) = (nb as f64 * cell, na as f64 * cell);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#
    );
    for (i, row) in s.coefficients.iter().enumerate() {
        let y = (na - 1 - i) as f64 * cell;
        for (j, v) in row.iter().enumerate() {
            let level = if max > 0.0 { v.abs() / max } else { 0.0 };
            let g = (255.0 * (1.0 - level)).round() as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{y}" width="{cell}" height="{cell}" fill="rgb({g},{g},{g})"/>"#,
                j as f64 * cell
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
