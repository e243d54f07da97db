//! SVG of the sum-rate (R0 + R1) versus cognitive-rate (R2) trade-off.

use std::fmt::Write as _;

use pcrc_core::regions::RegionTable;
use pcrc_core::{BoundKind, Weights};

use crate::output::fmt12;

/// Trade-off weights swept between pure R2 and pure sum rate.
pub const PARETO_STEPS: usize = 101;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// `(R0 + R1, R2)` points maximizing `lambda·(R0 + R1) + (1 - lambda)·R2`
/// for `lambda` from 0 to 1.
pub fn pareto_frontier(table: &RegionTable) -> Vec<(f64, f64)> {
    (0..PARETO_STEPS)
        .map(|i| {
            let lambda = i as f64 / (PARETO_STEPS - 1) as f64;
            let w = Weights::new(lambda, lambda, 1.0 - lambda).expect("nonzero weights");
            let s = table.union_support(&w);
            (s.maximizer.r0 + s.maximizer.r1, s.maximizer.r2)
        })
        .collect()
}

fn polyline(
    out: &mut String,
    pts: &[(f64, f64)],
    sx: impl Fn(f64) -> f64,
    sy: impl Fn(f64) -> f64,
    color: &str,
) {
    let coords: Vec<String> = pts
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
        coords.join(" ")
    );
}

/// Renders one curve per kind on shared axes.
pub fn render_svg(curves: &[(BoundKind, Vec<(f64, f64)>)], title: &str) -> String {
    let max_x = curves
        .iter()
        .flat_map(|(_, c)| c.iter().map(|p| p.0))
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.05;
    let max_y = curves
        .iter()
        .flat_map(|(_, c)| c.iter().map(|p| p.1))
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.05;
    let sx = |x: f64| MARGIN + x / max_x * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / max_y * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let (x0, y0) = (sx(0.0), sy(0.0));
    let _ = writeln!(
        out,
        r#"  <path d="M{x0:.2},{:.2} L{x0:.2},{y0:.2} L{:.2},{y0:.2}" fill="none" stroke="black"/>"#,
        MARGIN,
        WIDTH - MARGIN
    );
    for k in 0..=5 {
        let fx = max_x * k as f64 / 5.0;
        let fy = max_y * k as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            sx(fx),
            y0 + 16.0,
            fmt12((fx * 1000.0).round() / 1000.0)
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{}</text>"#,
            x0 - 6.0,
            sy(fy) + 3.0,
            fmt12((fy * 1000.0).round() / 1000.0)
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">R0 + R1 (bits/use)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 18.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="16" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">R2 (bits/use)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (i, (kind, pts)) in curves.iter().enumerate() {
        let color = match kind {
            BoundKind::Outer => "#c0392b",
            BoundKind::Inner => "#2471a3",
        };
        polyline(&mut out, pts, sx, sy, color);
        let ly = MARGIN + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"  <line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            WIDTH - MARGIN - 90.0,
            WIDTH - MARGIN - 70.0
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{kind}</text>"#,
            WIDTH - MARGIN - 64.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use pcrc_core::{ChannelParams, SplitGrid};

    #[test]
    fn frontier_endpoints() {
        let ch = ChannelParams::new(2.0, 0.5, 6.0, 6.0, 0.5).unwrap();
        let table =
            RegionTable::new(&ch, BoundKind::Outer, SplitGrid::new(21, 21, 40).unwrap()).unwrap();
        let f = pareto_frontier(&table);
        assert_eq!(f.len(), PARETO_STEPS);
        // lambda = 0: pure R2, alpha = 1
        assert!((f[0].1 - 0.5 * 7.0f64.log2()).abs() < 1e-12);
        // lambda = 1: largest sum rate
        assert!((f[PARETO_STEPS - 1].0 - 0.5 * 14.5f64.log2()).abs() < 1e-9);
        // R2 never increases as the weight shifts toward the sum rate
        assert!(f.windows(2).all(|p| p[1].1 <= p[0].1 + 1e-12));
    }

    #[test]
    fn svg_is_self_contained() {
        let svg = render_svg(&[(BoundKind::Outer, vec![(0.0, 1.0), (1.0, 0.0)])], "a < b");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("href"));
    }
}
