//! Self-contained SVG trend plots: z-scored yearly means as points, the
//! quadratic fit as a curve, and brackets over flagged year pairs.

use std::fmt::Write;

use moodscope::stats::{Significance, SignificanceMatrix, Thresholds, TrendSeries};

const WIDTH: f64 = 760.0;
const PLOT_HEIGHT: f64 = 300.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 48.0;
const TITLE_BAND: f64 = 32.0;
const BRACKET_STEP: f64 = 16.0;
const CURVE_SAMPLES: usize = 120;

/// Most bracket rows drawn; further flagged pairs are summarized in a note.
pub const MAX_BRACKETS: usize = 12;

struct Frame {
    x0: f64,
    x1: f64,
    y_lo: f64,
    y_hi: f64,
    top: f64,
}

impl Frame {
    fn px(&self, year: f64) -> f64 {
        let span = (self.x1 - self.x0).max(1.0);
        MARGIN_LEFT + (year - self.x0) / span * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, z: f64) -> f64 {
        self.top + (self.y_hi - z) / (self.y_hi - self.y_lo) * PLOT_HEIGHT
    }
}

fn num(x: f64) -> String {
    let r = (x * 100.0).round() / 100.0;
    if r == 0.0 {
        "0".to_owned()
    } else {
        format!("{r}")
    }
}

/// Flagged pairs to annotate, strongest first.
fn flagged(matrix: Option<&SignificanceMatrix>) -> Vec<(i32, i32, Significance, f64)> {
    let mut out: Vec<_> = matrix
        .into_iter()
        .flat_map(|m| m.iter())
        .filter(|(_, _, _, f)| *f != Significance::None)
        .map(|(a, b, r, f)| (a, b, f, r.p_value))
        .collect();
    out.sort_by(|x, y| x.3.total_cmp(&y.3).then((x.0, x.1).cmp(&(y.0, y.1))));
    out
}

pub fn render_trend(trend: &TrendSeries, matrix: Option<&SignificanceMatrix>, thresholds: Thresholds) -> String {
    let pairs = flagged(matrix);
    let shown = pairs.len().min(MAX_BRACKETS);
    let bracket_band = shown as f64 * BRACKET_STEP + if shown > 0 { 8.0 } else { 0.0 };
    let top = TITLE_BAND + bracket_band;
    let height = top + PLOT_HEIGHT + MARGIN_BOTTOM;

    let first = f64::from(*trend.years.first().unwrap_or(&0));
    let last = f64::from(*trend.years.last().unwrap_or(&0));
    let curve: Vec<(f64, f64)> = (0..=CURVE_SAMPLES)
        .map(|i| {
            let y = first + (last - first) * i as f64 / CURVE_SAMPLES as f64;
            (y, trend.fit_at_year(y))
        })
        .collect();

    let mut lo = trend
        .z_scores
        .iter()
        .chain(curve.iter().map(|(_, z)| z))
        .fold(-1.0f64, |a, &b| a.min(b));
    let mut hi = trend
        .z_scores
        .iter()
        .chain(curve.iter().map(|(_, z)| z))
        .fold(1.0f64, |a, &b| a.max(b));
    lo = (lo - 0.25).floor();
    hi = (hi + 0.25).ceil();
    let f = Frame {
        x0: first,
        x1: last,
        y_lo: lo,
        y_hi: hi,
        top,
    };

    let mut s = String::new();
    let dim = trend.dimension.label();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
        w = WIDTH,
        h = num(height)
    );
    let _ = writeln!(s, "<title>{dim} trend (z-scored yearly means)</title>");
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{dim}</text>"#,
        num(WIDTH / 2.0)
    );

    // Axes.
    let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let bottom = top + PLOT_HEIGHT;
    let _ = writeln!(s, r##"<g class="axes" stroke="#444" fill="none">"##);
    let _ = writeln!(
        s,
        r#"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}"/>"#,
        l = num(left),
        r = num(right),
        b = num(bottom)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}"/>"#,
        l = num(left),
        t = num(top),
        b = num(bottom)
    );
    let zero = f.py(0.0);
    let _ = writeln!(
        s,
        r##"<line x1="{l}" y1="{z}" x2="{r}" y2="{z}" stroke-dasharray="3 3" stroke="#bbb"/>"##,
        l = num(left),
        r = num(right),
        z = num(zero)
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="ticks" text-anchor="middle">"#);
    let step = ((trend.years.len() as f64) / 16.0).ceil().max(1.0) as usize;
    for (i, &y) in trend.years.iter().enumerate() {
        if i % step != 0 && i + 1 != trend.years.len() {
            continue;
        }
        let x = f.px(f64::from(y));
        let _ = writeln!(s, r#"<text x="{}" y="{}">{y}</text>"#, num(x), num(bottom + 16.0));
    }
    let mut z = lo;
    while z <= hi {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            num(left - 6.0),
            num(f.py(z) + 4.0),
            num(z)
        );
        z += 1.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">delivery year</text>"#,
        num((left + right) / 2.0),
        num(bottom + 36.0)
    );
    let _ = writeln!(s, "</g>");

    let mut d = String::new();
    for (i, (year, z)) in curve.iter().enumerate() {
        let _ = write!(
            d,
            "{}{},{}",
            if i == 0 { "M" } else { " L" },
            num(f.px(*year)),
            num(f.py(*z))
        );
    }
    let _ = writeln!(
        s,
        r##"<path class="fit" data-dimension="{dim}" d="{d}" fill="none" stroke="#1f5fa8" stroke-width="2"/>"##
    );

    let _ = writeln!(s, r##"<g class="points" fill="#d2572a">"##);
    for (&y, &z) in trend.years.iter().zip(&trend.z_scores) {
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3.5"><title>{y}: z={}</title></circle>"#,
            num(f.px(f64::from(y))),
            num(f.py(z)),
            num(z)
        );
    }
    let _ = writeln!(s, "</g>");

    if shown > 0 {
        let _ = writeln!(s, r##"<g class="brackets" stroke="#333" fill="none">"##);
        for (row, &(a, b, flag, p)) in pairs.iter().take(shown).enumerate() {
            let yb = top - 6.0 - row as f64 * BRACKET_STEP;
            let (xa, xb) = (f.px(f64::from(a)), f.px(f64::from(b)));
            let _ = writeln!(
                s,
                r#"<path d="M{xa},{y1} L{xa},{yb} L{xb},{yb} L{xb},{y1}"><title>{a}-{b} p={p:.4}</title></path>"#,
                xa = num(xa),
                xb = num(xb),
                yb = num(yb),
                y1 = num(yb + 5.0)
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" stroke="none" fill="black" text-anchor="middle">{}</text>"#,
                num((xa + xb) / 2.0),
                num(yb - 2.0),
                flag.stars()
            );
        }
        let _ = writeln!(s, "</g>");
    }
    if pairs.len() > shown {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="end">+{} more flagged pairs</text>"#,
            num(right),
            pairs.len() - shown
        );
    }
    let _ = writeln!(
        s,
        r##"<text x="{}" y="{}" text-anchor="end" fill="#555">* p&lt;{}  ** p&lt;{}</text>"##,
        num(right),
        num(bottom + 36.0),
        thresholds.marginal,
        thresholds.significant
    );
    s.push_str("</svg>\n");
    s
}
