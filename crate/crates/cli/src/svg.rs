use std::fmt::Write;

use crate::report::FigureRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 45.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Solid curves of `p_identification` against `N`, one per `d`, with the
/// large-N limits dashed.
pub fn line_chart(rows: &[FigureRow]) -> String {
    let n_min = rows.iter().map(|r| r.n).min().unwrap_or(1) as f64;
    let n_max = rows.iter().map(|r| r.n).max().unwrap_or(1) as f64;
    let top = rows
        .iter()
        .map(|r| r.p_discrimination.max(r.p_identification))
        .fold(0.0, f64::max);
    let y_max = ((top * 10.0).ceil() / 10.0).max(0.1);
    let span = if n_max > n_min { n_max - n_min } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |n: f64| LEFT + (n - n_min) / span * plot_w;
    let y = |p: f64| TOP + (1.0 - p / y_max) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let p = y_max * k as f64 / 5.0;
        let yy = y(p);
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{yy:.2}" x2="{LEFT:.2}" y2="{yy:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{p:.2}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            yy + 4.0
        );
    }
    let ticks = (n_max - n_min).clamp(1.0, 10.0) as usize;
    let mut last = None;
    for k in 0..=ticks {
        let n = (n_min + span * k as f64 / ticks as f64).round();
        if last == Some(n) || n > n_max {
            continue;
        }
        last = Some(n);
        let xx = x(n);
        let _ = writeln!(
            s,
            r#"<line x1="{xx:.2}" y1="{:.2}" x2="{xx:.2}" y2="{:.2}" stroke="black"/><text x="{xx:.2}" y="{:.2}" text-anchor="middle">{n}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 18.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">N</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.2}" text-anchor="middle" transform="rotate(-90 15 {:.2})">success probability</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    let mut ds: Vec<usize> = rows.iter().map(|r| r.d).collect();
    ds.dedup();
    for (k, d) in ds.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let curve: Vec<&FigureRow> = rows.iter().filter(|r| r.d == *d).collect();
        let limit = curve[0].p_discrimination;
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="6 4"/>"#,
            y(limit),
            LEFT + plot_w,
            y(limit)
        );
        let points: Vec<String> = curve
            .iter()
            .map(|r| format!("{:.2},{:.2}", x(r.n as f64), y(r.p_identification)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            points.join(" ")
        );
        for r in &curve {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                x(r.n as f64),
                y(r.p_identification)
            );
        }
        let ly = TOP + 16.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">d = {d}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}
