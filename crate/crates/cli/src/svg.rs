/// Minimal self-contained SVG 1.1 line-plot writer. No external assets, no
/// scripts: a white background, framed plot area, tick marks with numeric
/// labels, one polyline per series, and a legend when there is more than
/// one series.
const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct Series<'a> {
    pub name: &'a str,
    pub points: &'a [(f64, f64)],
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    // Degenerate ranges (constant series) get a symmetric pad so the line
    // sits mid-plot instead of dividing by zero.
    if hi - lo <= 0.0 {
        let pad = lo.abs().max(1.0) * 1e-6;
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_owned()
    } else {
        format!("{v:.3e}")
    }
}

fn push_text(out: &mut String, x: f64, y: f64, anchor: &str, text: &str, extra: &str) {
    out.push_str(&format!(
        "  <text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"{anchor}\"{extra}>{text}</text>\n"
    ));
}

pub fn line_plot(x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (x_lo, x_hi) = range_of(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = range_of(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let map_x = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let map_y = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" \
         height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!("  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"));
    out.push_str(&format!(
        "  <rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));

    const TICKS: usize = 5;
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x_lo + t * (x_hi - x_lo);
        let xp = map_x(xv);
        out.push_str(&format!(
            "  <line x1=\"{xp:.2}\" y1=\"{:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        ));
        push_text(&mut out, xp, MARGIN_TOP + plot_h + 20.0, "middle", &fmt_tick(xv), "");
        let yv = y_lo + t * (y_hi - y_lo);
        let yp = map_y(yv);
        out.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{yp:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{yp:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0
        ));
        push_text(&mut out, MARGIN_LEFT - 9.0, yp + 4.0, "end", &fmt_tick(yv), "");
    }

    push_text(&mut out, MARGIN_LEFT + plot_w / 2.0, HEIGHT - 14.0, "middle", x_label, "");
    let y_pos = MARGIN_TOP + plot_h / 2.0;
    push_text(
        &mut out,
        18.0,
        y_pos,
        "middle",
        y_label,
        &format!(" transform=\"rotate(-90 18 {y_pos:.2})\""),
    );

    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", map_x(x), map_y(y)))
            .collect();
        out.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
    }

    if series.len() > 1 {
        for (idx, s) in series.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            let ly = MARGIN_TOP + 16.0 + 18.0 * idx as f64;
            let lx = MARGIN_LEFT + plot_w - 120.0;
            out.push_str(&format!(
                "  <line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
                 stroke=\"{color}\" stroke-width=\"2\"/>\n",
                lx + 22.0
            ));
            push_text(&mut out, lx + 28.0, ly + 4.0, "start", s.name, "");
        }
    }

    out.push_str("</svg>\n");
    out
}
