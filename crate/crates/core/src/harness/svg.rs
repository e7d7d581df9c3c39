//! Hand-written SVG line chart of the sweep.

use std::fmt::Write;

use super::sweep::{case_bands, SweepRow};
use crate::closed_form::CaseId;

/// Legend label, colour, extra stroke attributes and value accessor.
type Series = (&'static str, &'static str, &'static str, fn(&SweepRow) -> f64);

const W: f64 = 800.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn band_fill(id: CaseId) -> &'static str {
    match id {
        CaseId::Case1 => "#d8ecd8",
        CaseId::Case2 => "#f3e3c8",
        CaseId::Case3 => "#d9e4f2",
        CaseId::Case4 => "#ecd9ec",
        CaseId::Boundary => "#e0e0e0",
        CaseId::Uncovered => "#f4d4d4",
    }
}

/// Celebrity and uniform g_max against eta, the small-core welfare as a
/// dashed line, and shaded bands for the celebrity case regions.
pub fn render(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let (lo, hi) = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => (a.eta, b.eta),
        _ => (0.0, 1.0),
    };
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5 * lo.max(0.01), hi + 0.5 * hi.max(0.01)) };
    let y_max = rows
        .iter()
        .flat_map(|r| [r.celebrity().g_max, r.uniform().g_max, r.comparison.g_max_celebrity])
        .fold(0.0_f64, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let x = |eta: f64| LEFT + (eta - lo) / (hi - lo) * pw;
    let y = |g: f64| TOP + ph - g / y_max * ph;

    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#);

    // Bands extend halfway to the neighbouring sweep points.
    let bands = case_bands(rows);
    let half = if rows.len() > 1 { (hi - lo) / (rows.len() - 1) as f64 / 2.0 } else { 0.0 };
    for (id, a, b) in &bands {
        let x0 = x((a - half).max(lo));
        let x1 = x((b + half).min(hi));
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.2}" y="{TOP}" width="{:.2}" height="{ph}" fill="{}" fill-opacity="0.8"/>"#,
            (x1 - x0).max(1.0),
            band_fill(*id)
        );
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="#444">{}</text>"##,
            (x0 + x1) / 2.0,
            TOP - 8.0,
            id.as_str()
        );
    }

    // Axes and ticks.
    let _ = writeln!(
        out,
        r#"<path d="M{LEFT} {TOP} V{:.2} H{:.2}" stroke="black" fill="none"/>"#,
        TOP + ph,
        LEFT + pw
    );
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        let ex = lo + t * (hi - lo);
        let gy = t * y_max;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{:.3}</text>"#,
            x(ex),
            TOP + ph + 18.0,
            ex
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.4}</text>"#,
            LEFT - 6.0,
            y(gy) + 4.0,
            gy
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">eta</text>"#,
        LEFT + pw / 2.0,
        H - 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">g_max</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    let series: [Series; 3] = [
        ("g_max_celebrity", "#c0392b", "", |r| r.celebrity().g_max),
        ("g_max_uniform", "#2c3e8f", "", |r| r.uniform().g_max),
        ("small-core welfare", "#555555", r#" stroke-dasharray="6 4""#, |r| r.comparison.g_max_celebrity),
    ];
    for (k, (name, colour, dash, f)) in series.iter().enumerate() {
        let pts: Vec<String> = rows.iter().map(|r| format!("{:.2},{:.2}", x(r.eta), y(f(r)))).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"{dash}/>"#,
            pts.join(" ")
        );
        let ly = TOP + 14.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"{dash}/>"#,
            W - RIGHT - 190.0,
            W - RIGHT - 160.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{name}</text>"#,
            W - RIGHT - 154.0,
            ly + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
