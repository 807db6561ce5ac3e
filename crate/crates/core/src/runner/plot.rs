//! Overlaid fluctuation histograms as a standalone SVG document.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::stats::{histogram, Histogram, DEFAULT_BINS, DEFAULT_RANGE};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders one semi-transparent density histogram per series on the shared
/// default grid, with a legend keyed by series label.
pub fn histogram_svg(title: &str, series: &[(String, Vec<f64>)]) -> Result<String> {
    let hists: Vec<(&str, Histogram)> = series
        .iter()
        .map(|(label, tau)| Ok((label.as_str(), histogram(tau, DEFAULT_BINS, DEFAULT_RANGE)?)))
        .collect::<Result<_>>()?;
    let (lo, hi) = DEFAULT_RANGE;
    let ymax = hists
        .iter()
        .flat_map(|(_, h)| h.densities.iter().copied())
        .fold(0.0f64, f64::max)
        .max(0.1)
        * 1.1;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - lo) / (hi - lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - y / ymax * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for (i, (label, h)) in hists.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(svg, r#"<g class="series" data-label="{}" fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="0.8">"#, escape(label));
        for (b, d) in h.densities.iter().enumerate() {
            if *d <= 0.0 {
                continue;
            }
            let x0 = sx(h.edges[b]);
            let x1 = sx(h.edges[b + 1]);
            let y = sy(*d);
            let _ = writeln!(
                svg,
                r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}"/>"#,
                x1 - x0,
                sy(0.0) - y
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    // Axes and ticks.
    let _ = writeln!(
        svg,
        r#"<g stroke="black" fill="none"><line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/><line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/></g>"#,
        MARGIN_LEFT,
        sy(0.0),
        MARGIN_LEFT + plot_w,
        sy(0.0),
        MARGIN_LEFT,
        sy(0.0),
        MARGIN_LEFT,
        MARGIN_TOP
    );
    let mut t = lo.ceil();
    while t <= hi {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{t}</text>"#,
            sy(0.0),
            sy(0.0) + 5.0,
            sy(0.0) + 18.0
        );
        t += 1.0;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">τ (normalized halting time)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">density</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    for (i, (label, _)) in hists.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 12.0 + 18.0 * i as f64;
        let x = WIDTH - MARGIN_RIGHT - 110.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend"><rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{color}" fill-opacity="0.5" stroke="{color}"/><text x="{:.1}" y="{y:.1}">{}</text></g>"#,
            y - 10.0,
            x + 18.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn write_histogram_svg(path: &Path, title: &str, series: &[(String, Vec<f64>)]) -> Result<()> {
    std::fs::write(path, histogram_svg(title, series)?)?;
    Ok(())
}
