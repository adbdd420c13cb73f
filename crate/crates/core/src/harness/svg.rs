//! Minimal SVG line chart of median logNMSE against reservoir size.

use std::fmt::Write;

use super::aggregate::MedianRow;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per activation, log-scaled x axis. Sentinel values
/// (`±∞`, the perfect-fit marker) are left off the plot.
pub fn accuracy_vs_size(rows: &[MedianRow], title: &str) -> String {
    let plottable = |v: f64| v.is_finite() && v > -1e6;
    let mut series: Vec<(&str, Vec<(usize, f64)>)> = Vec::new();
    for r in rows {
        match series.iter_mut().find(|(name, _)| *name == r.activation) {
            Some((_, pts)) => pts.push((r.size, r.median)),
            None => series.push((&r.activation, vec![(r.size, r.median)])),
        }
    }

    let mut sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let ys: Vec<f64> = rows.iter().map(|r| r.median).filter(|&v| plottable(v)).collect();
    let (mut y_lo, mut y_hi) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if ys.is_empty() {
        (y_lo, y_hi) = (-1.0, 0.0);
    }
    y_lo = y_lo.floor();
    y_hi = y_hi.ceil();
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    let x_lo = (*sizes.first().unwrap_or(&1) as f64).ln();
    let x_hi = (*sizes.last().unwrap_or(&1) as f64).ln();
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |size: usize| {
        if x_hi > x_lo {
            LEFT + ((size as f64).ln() - x_lo) / (x_hi - x_lo) * plot_w
        } else {
            LEFT + plot_w / 2.0
        }
    };
    let py = |v: f64| TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for &size in &sizes {
        let x = px(size);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{size}</text>"#,
            TOP + plot_h + 20.0
        );
    }
    let span = y_hi - y_lo;
    let step = [0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
        .into_iter()
        .find(|st| span / st <= 10.0)
        .unwrap_or(100.0);
    let mut tick = (y_lo / step).ceil() * step;
    while tick <= y_hi + 1e-9 {
        let y = py(tick);
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT,
            LEFT + plot_w
        );
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{tick}</text>"#, LEFT - 8.0, y + 4.0);
        tick += step;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">reservoir size D_x</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">median logNMSE</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .filter(|(_, v)| plottable(*v))
            .map(|&(size, v)| format!("{:.2},{:.2}", px(size), py(v)))
            .collect();
        if !coords.is_empty() {
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                coords.join(" ")
            );
            for c in &coords {
                let (x, y) = c.split_once(',').unwrap();
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/>"#);
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(a: &str, size: usize, median: f64) -> MedianRow {
        MedianRow {
            activation: a.into(),
            size,
            median,
            trials: 1,
            diverged: 0,
        }
    }

    #[test]
    fn one_polyline_per_activation() {
        let rows = vec![
            row("tanh", 25, -1.0),
            row("tanh", 100, -1.5),
            row("sinc", 25, -2.0),
            row("sinc", 100, f64::INFINITY),
        ];
        let svg = accuracy_vs_size(&rows, "logistic <test>");
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("&lt;test&gt;"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
