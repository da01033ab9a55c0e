//! Minimal SVG output: line plots and heat maps (red high, blue low).

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 60.0;

pub struct Series<'a> {
    pub label: String,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(hi > lo) {
        (lo - 0.5, lo + 0.5)
    } else {
        (lo, hi)
    }
}

const COLOURS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn frame(s: &mut String, title: &str, xlabel: &str, ylabel: &str, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) {
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>
<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>
<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>
<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{ylabel}</text>
<text x="{PAD}" y="{}" text-anchor="middle">{x0:.4}</text><text x="{}" y="{}" text-anchor="middle">{x1:.4}</text>
<text x="{}" y="{}" text-anchor="end">{y0:.4}</text><text x="{}" y="{}" text-anchor="end">{y1:.4}</text>
"#,
        W / 2.0,
        W - 2.0 * PAD,
        H - 2.0 * PAD,
        W / 2.0,
        H - 15.0,
        H / 2.0,
        H / 2.0,
        H - PAD + 15.0,
        W - PAD,
        H - PAD + 15.0,
        PAD - 4.0,
        H - PAD,
        PAD - 4.0,
        PAD + 4.0,
    );
}

fn to_px(v: f64, (lo, hi): (f64, f64), a: f64, b: f64) -> f64 {
    a + (v - lo) / (hi - lo) * (b - a)
}

pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[Series], markers: &[Marker]) -> String {
    let xr = range(series.iter().flat_map(|s| s.x.iter().copied()));
    let yr = range(series.iter().flat_map(|s| s.y.iter().copied()));
    let mut s = String::new();
    frame(&mut s, title, xlabel, ylabel, xr, yr);
    for (i, ser) in series.iter().enumerate() {
        let c = COLOURS[i % COLOURS.len()];
        let pts: Vec<String> = ser
            .x
            .iter()
            .zip(ser.y)
            .filter(|(_, y)| y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", to_px(*x, xr, PAD, W - PAD), to_px(*y, yr, H - PAD, PAD)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{c}">{}</text>"#,
            W - PAD + 4.0,
            PAD + 14.0 * i as f64 + 10.0,
            ser.label
        );
    }
    for m in markers {
        let (px, py) = (to_px(m.x, xr, PAD, W - PAD), to_px(m.y, yr, H - PAD, PAD));
        let _ = writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="4" fill="none" stroke="black"/>"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#, px + 5.0, py - 5.0, m.label);
    }
    s.push_str("</svg>\n");
    s
}

/// Blue (low) to white to red (high).
fn colour(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let (r, g, b) = if t < 0.5 {
        let u = t / 0.5;
        (u, u, 1.0)
    } else {
        let u = (t - 0.5) / 0.5;
        (1.0, 1.0 - u, 1.0 - u)
    };
    format!("#{:02x}{:02x}{:02x}", (r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8)
}

/// Heat map of `values[i * ny + j]` over x[i], y[j]; crosses mark `minima`.
pub fn heat_map(title: &str, xlabel: &str, ylabel: &str, x: &[f64], y: &[f64], values: &[f64], minima: &[(f64, f64)]) -> String {
    let xr = range(x.iter().copied());
    let yr = range(y.iter().copied());
    let vr = range(values.iter().copied());
    let mut s = String::new();
    frame(&mut s, title, xlabel, ylabel, xr, yr);
    let cw = (W - 2.0 * PAD) / x.len() as f64;
    let ch = (H - 2.0 * PAD) / y.len() as f64;
    for (i, _) in x.iter().enumerate() {
        for (j, _) in y.iter().enumerate() {
            let v = values[i * y.len() + j];
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                PAD + i as f64 * cw,
                H - PAD - (j + 1) as f64 * ch,
                cw + 0.3,
                ch + 0.3,
                colour((v - vr.0) / (vr.1 - vr.0))
            );
        }
    }
    for &(mx, my) in minima {
        let (px, py) = (to_px(mx, xr, PAD, W - PAD), to_px(my, yr, H - PAD, PAD));
        let _ = writeln!(
            s,
            r#"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="black" stroke-width="2"/>"#,
            px - 5.0,
            py - 5.0,
            px + 5.0,
            py + 5.0,
            px - 5.0,
            py + 5.0,
            px + 5.0,
            py - 5.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colour_scale_runs_blue_to_red() {
        assert_eq!(colour(0.0), "#0000ff");
        assert_eq!(colour(1.0), "#ff0000");
        assert_eq!(colour(0.5), "#ffffff");
    }

    #[test]
    fn documents_are_closed_svg() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 0.0, 1.0];
        let l = line_plot("t", "x", "y", &[Series { label: "a".into(), x: &x, y: &y }], &[Marker { x: 1.0, y: 0.0, label: "m".into() }]);
        assert!(l.starts_with("<svg") && l.trim_end().ends_with("</svg>"));
        let h = heat_map("t", "x", "y", &x, &y, &[0.0; 9], &[(1.0, 0.0)]);
        assert_eq!(h.matches("<rect").count(), 2 + 9);
    }
}
