//! Minimal SVG output: line panels and heat maps over already computed data.

use std::fmt::Write;

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 260.0;
const MARGIN: f64 = 44.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn draw_panel(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let (x0, x1) = bounds(panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = bounds(panel.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let (pw, ph) = (PANEL_W - 2.0 * MARGIN, PANEL_H - 2.0 * MARGIN);
    let sx = |x: f64| ox + MARGIN + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| oy + MARGIN + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#,
        ox + MARGIN,
        oy + MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        ox + PANEL_W / 2.0,
        oy + MARGIN - 12.0,
        escape(&panel.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"#,
        ox + PANEL_W / 2.0,
        oy + PANEL_H - 8.0,
        escape(&panel.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="11" transform="rotate(-90 {:.2} {:.2})" text-anchor="middle">{}</text>"#,
        ox + 12.0,
        oy + PANEL_H / 2.0,
        ox + 12.0,
        oy + PANEL_H / 2.0,
        escape(&panel.y_label)
    );
    for (v, anchor, x, y) in
        [(x0, "start", sx(x0), oy + PANEL_H - MARGIN + 14.0), (x1, "end", sx(x1), oy + PANEL_H - MARGIN + 14.0)]
    {
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{y:.2}" font-size="10" text-anchor="{anchor}">{v:.3}</text>"#);
    }
    for v in [y0, y1] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{v:.3}</text>"#,
            ox + MARGIN - 4.0,
            sy(v) + 4.0
        );
    }
    for (k, s) in panel.series.iter().enumerate() {
        let mut d = String::new();
        for (i, &(x, y)) in s.points.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, sx(x), sy(y));
        }
        let dash = if s.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.3"{dash}><title>{}</title></path>"#,
            d.trim_end(),
            COLORS[k % COLORS.len()],
            escape(&s.label)
        );
    }
}

/// Panels laid out row by row, `columns` per row.
pub fn panels(panels: &[Panel], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
        PANEL_W * columns as f64,
        PANEL_H * rows as f64
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        draw_panel(&mut out, p, PANEL_W * (i % columns) as f64, PANEL_H * (i / columns) as f64);
    }
    out.push_str("</svg>\n");
    out
}

/// Diverging blue-white-red map, symmetric about zero. `values[j][i]` sits at
/// `(xs[i], ys[j])`.
pub fn heatmap(title: &str, xs: &[f64], ys: &[f64], values: &[Vec<f64>]) -> String {
    let size = 420.0;
    let margin = 40.0;
    let cw = (size - 2.0 * margin) / xs.len().max(1) as f64;
    let ch = (size - 2.0 * margin) / ys.len().max(1) as f64;
    let scale = values.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0}" height="{size:.0}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
        size / 2.0,
        margin - 14.0,
        escape(title)
    );
    for (j, row) in values.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            let t = (v / scale).clamp(-1.0, 1.0);
            let fade = |c: f64| (255.0 * (1.0 - t.abs()) + c * t.abs()).round() as u8;
            let (r, g, b) =
                if t >= 0.0 { (fade(200.0), fade(30.0), fade(30.0)) } else { (fade(30.0), fade(60.0), fade(200.0)) };
            // p grows upward
            let y = margin + (ys.len() - 1 - j) as f64 * ch;
            let _ = writeln!(
                out,
                r##"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#{r:02x}{g:02x}{b:02x}"/>"##,
                margin + i as f64 * cw,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">x ∈ [{:.2}, {:.2}], p ∈ [{:.2}, {:.2}], |W| ≤ {scale:.4}</text>"#,
        size / 2.0,
        size - 12.0,
        xs.first().copied().unwrap_or(0.0),
        xs.last().copied().unwrap_or(0.0),
        ys.first().copied().unwrap_or(0.0),
        ys.last().copied().unwrap_or(0.0)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_layout() {
        let p = Panel {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![Series { label: "s".into(), points: vec![(0.0, 0.0), (1.0, 1.0)], dashed: true }],
        };
        let svg = panels(&[p.clone(), p.clone(), p], 2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<path").count(), 3);
        assert!(svg.contains("a &lt; b") && svg.contains("stroke-dasharray"));
        assert!(svg.contains(r#"height="520""#));
    }

    #[test]
    fn heatmap_cells() {
        let svg = heatmap("w", &[0.0, 1.0], &[0.0, 1.0, 2.0], &[vec![1.0, -1.0], vec![0.0, 0.5], vec![0.2, 0.3]]);
        assert_eq!(svg.matches("<rect").count(), 1 + 6);
        assert!(svg.contains("#c81e1e") && svg.contains("#1e3cc8") && svg.contains("#ffffff"));
    }
}
