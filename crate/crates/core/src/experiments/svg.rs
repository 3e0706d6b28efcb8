use std::fmt::Write;

use super::{FitResult, Sample};

const W: f64 = 800.0;
const H: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
    (lo - pad, hi + pad)
}

/// Log-log scatter of the samples with zero counts dropped, plus the fitted
/// line if given.
pub fn render_svg(samples: &[Sample], fit: Option<&FitResult>, title: &str) -> String {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.count > 0)
        .map(|s| ((s.n as f64).ln(), (s.count as f64).ln()))
        .collect();
    let (x0, x1) = range(pts.iter().map(|p| p.0));
    let mut ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    if let Some(f) = fit {
        ys.extend([f.intercept + f.slope * x0, f.intercept + f.slope * x1]);
    }
    let (y0, y1) = range(ys.into_iter());
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let sy = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" width="{W}" height="{H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#, W / 2.0, escape(title));
    let (ax, ay) = (sx(x0), sy(y0));
    let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{}" y2="{ay}" stroke="black"/>"#, sx(x1));
    let _ = writeln!(s, r#"<line x1="{ax}" y1="{ay}" x2="{ax}" y2="{}" stroke="black"/>"#, sy(y1));
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{xv:.2}</text>"#, sx(xv), ay + 18.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="12">{yv:.2}</text>"#, ax - 6.0, sy(yv) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">ln N</text>"#, (ax + sx(x1)) / 2.0, H - 20.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {0})">ln count</text>"#,
        (ay + sy(y1)) / 2.0
    );
    for (x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#, sx(*x), sy(*y));
    }
    if let Some(f) = fit {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="2"/>"#,
            sx(x0),
            sy(f.intercept + f.slope * x0),
            sx(x1),
            sy(f.intercept + f.slope * x1)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="13" fill="firebrick">slope {:.4}, r² {:.4}</text>"#,
            LEFT + 10.0,
            TOP + 16.0,
            f.slope,
            f.r_squared
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
