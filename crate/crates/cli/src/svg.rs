//! Hand-written SVG charts: boxplots, quartile bands, histograms and
//! line plots. Output is a pure function of the inputs.

use std::fmt::Write;

use isingbench::knapsack::Histogram;
use isingbench::metrics::Summary;

use crate::output::Provenance;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 90.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1e4 || v.abs() < 1e-3 {
        return format!("{v:.2e}");
    }
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi <= lo {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)))
}

struct Canvas {
    out: String,
    x: (f64, f64),
    y: (f64, f64),
}

impl Canvas {
    fn new(title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64), prov: &Provenance) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<!-- {} -->
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            esc(&prov.svg_comment()),
            (LEFT + WIDTH - RIGHT) / 2.0,
            esc(title)
        );
        let c = Canvas { out, x, y };
        let mut c = c;
        c.axes(x_label, y_label);
        c
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&mut self, x_label: &str, y_label: &str) {
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
        let _ = writeln!(self.out, r##"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" fill="none" stroke="#333"/>"##);
        for i in 0..=TICKS {
            let v = self.y.0 + (self.y.1 - self.y.0) * i as f64 / TICKS as f64;
            let y = self.py(v);
            let _ = writeln!(
                self.out,
                r##"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="#333"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
                x0 - 5.0,
                x0 - 8.0,
                y + 4.0,
                num(v)
            );
        }
        let _ = writeln!(
            self.out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>
<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            esc(x_label),
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            esc(y_label)
        );
    }

    fn x_ticks(&mut self) {
        let y0 = HEIGHT - BOTTOM;
        for i in 0..=TICKS {
            let v = self.x.0 + (self.x.1 - self.x.0) * i as f64 / TICKS as f64;
            let x = self.px(v);
            let _ = writeln!(
                self.out,
                r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="#333"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"##,
                y0 + 5.0,
                y0 + 20.0,
                num(v)
            );
        }
    }

    fn legend(&mut self, names: &[&str]) {
        for (i, name) in names.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * i as f64;
            let x = WIDTH - RIGHT + 16.0;
            let _ = writeln!(
                self.out,
                r#"<rect x="{x}" y="{}" width="12" height="12" fill="{}"/><text x="{}" y="{}">{}</text>"#,
                y - 10.0,
                PALETTE[i % PALETTE.len()],
                x + 18.0,
                y,
                esc(name)
            );
        }
    }

    fn polyline(&mut self, points: &[(f64, f64)], colour: &str) {
        let d: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y))).collect();
        let _ = writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
            d.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// One box per group: whiskers at min and max, box from q1 to q3, a bar
/// at the median and a dot at the mean.
pub fn boxplot(title: &str, y_label: &str, boxes: &[(String, Summary)], prov: &Provenance) -> String {
    let (lo, hi) = bounds(boxes.iter().flat_map(|(_, s)| [s.min, s.max]));
    let mut c = Canvas::new(title, "", y_label, (0.0, boxes.len().max(1) as f64), padded(lo, hi), prov);
    for (i, (label, s)) in boxes.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mid = c.px(i as f64 + 0.5);
        let half = 0.3 * (c.px(1.0) - c.px(0.0)).min(80.0);
        let (ymin, yq1, ymed, yq3, ymax, ymean) =
            (c.py(s.min), c.py(s.q1), c.py(s.median), c.py(s.q3), c.py(s.max), c.py(s.mean));
        let _ = writeln!(
            c.out,
            r##"<g stroke="#333"><line x1="{mid:.2}" y1="{ymin:.2}" x2="{mid:.2}" y2="{yq1:.2}"/><line x1="{mid:.2}" y1="{yq3:.2}" x2="{mid:.2}" y2="{ymax:.2}"/><line x1="{:.2}" y1="{ymin:.2}" x2="{:.2}" y2="{ymin:.2}"/><line x1="{:.2}" y1="{ymax:.2}" x2="{:.2}" y2="{ymax:.2}"/>
<rect x="{:.2}" y="{yq3:.2}" width="{:.2}" height="{:.2}" fill="{colour}" fill-opacity="0.35"/><line x1="{:.2}" y1="{ymed:.2}" x2="{:.2}" y2="{ymed:.2}" stroke-width="2"/></g>
<circle cx="{mid:.2}" cy="{ymean:.2}" r="3" fill="{colour}"/>
<text x="{mid:.2}" y="{}" text-anchor="end" transform="rotate(-35 {mid:.2} {})">{}</text>"##,
            mid - half / 2.0,
            mid + half / 2.0,
            mid - half / 2.0,
            mid + half / 2.0,
            mid - half,
            2.0 * half,
            (yq1 - yq3).max(0.5),
            mid - half,
            mid + half,
            HEIGHT - BOTTOM + 16.0,
            HEIGHT - BOTTOM + 16.0,
            esc(label)
        );
    }
    c.finish()
}

/// A point of a line with its interquartile band.
#[derive(Debug, Clone, Copy)]
pub struct BandPoint {
    pub x: f64,
    pub mid: f64,
    pub lo: f64,
    pub hi: f64,
}

/// One line per series with a shaded band from `lo` to `hi`.
pub fn band(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<BandPoint>)],
    prov: &Provenance,
) -> String {
    let xs = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.x)));
    let ys = bounds(series.iter().flat_map(|(_, p)| p.iter().flat_map(|q| [q.lo, q.hi, q.mid])));
    let mut c = Canvas::new(title, x_label, y_label, padded(xs.0, xs.1), padded(ys.0, ys.1), prov);
    c.x_ticks();
    for (i, (_, points)) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut outline: Vec<String> = points.iter().map(|p| format!("{:.2},{:.2}", c.px(p.x), c.py(p.hi))).collect();
        outline.extend(points.iter().rev().map(|p| format!("{:.2},{:.2}", c.px(p.x), c.py(p.lo))));
        let _ = writeln!(
            c.out,
            r#"<polygon points="{}" fill="{colour}" fill-opacity="0.2" stroke="none"/>"#,
            outline.join(" ")
        );
        let line: Vec<(f64, f64)> = points.iter().map(|p| (p.x, p.mid)).collect();
        c.polyline(&line, colour);
        for p in points {
            let _ =
                writeln!(c.out, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{colour}"/>"#, c.px(p.x), c.py(p.mid));
        }
    }
    let names: Vec<&str> = series.iter().map(|(n, _)| n.as_str()).collect();
    c.legend(&names);
    c.finish()
}

/// Bar chart of binned counts with an optional vertical marker.
pub fn histogram(title: &str, x_label: &str, hist: &Histogram, marker: Option<f64>, prov: &Provenance) -> String {
    let lo = hist.edges[0];
    let hi = *hist.edges.last().expect("edges are nonempty");
    let (lo, hi) = match marker {
        Some(m) => (lo.min(m), hi.max(m)),
        None => (lo, hi),
    };
    let top = hist.counts.iter().copied().max().unwrap_or(0) as f64;
    let mut c = Canvas::new(title, x_label, "count", padded(lo, hi), (0.0, top.max(1.0) * 1.05), prov);
    c.x_ticks();
    for (i, &n) in hist.counts.iter().enumerate() {
        let (x0, x1) = (c.px(hist.edges[i]), c.px(hist.edges[i + 1]));
        let (y0, y1) = (c.py(0.0), c.py(n as f64));
        let _ = writeln!(
            c.out,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="white" stroke-width="0.5"/>"##,
            (x1 - x0).max(1.0),
            y0 - y1,
            PALETTE[0]
        );
    }
    if let Some(m) = marker {
        let x = c.px(m);
        let _ = writeln!(
            c.out,
            r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{TOP}" stroke="#d62728" stroke-dasharray="4 3"/>"##,
            HEIGHT - BOTTOM
        );
    }
    c.finish()
}

/// Plain line plot, one polyline per series.
pub fn lines(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
    prov: &Provenance,
) -> String {
    let xs = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    let ys = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));
    let mut c = Canvas::new(title, x_label, y_label, padded(xs.0, xs.1), padded(ys.0, ys.1), prov);
    c.x_ticks();
    for (i, (_, points)) in series.iter().enumerate() {
        let finite: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        c.polyline(&finite, PALETTE[i % PALETTE.len()]);
    }
    let names: Vec<&str> = series.iter().map(|(n, _)| n.as_str()).collect();
    c.legend(&names);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prov() -> Provenance {
        Provenance { command: "isingbench kp --lambda 2".into(), seed: 0 }
    }

    #[test]
    fn numbers_are_compact() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(2.0), "2");
        assert_eq!(num(12345.0), "1.23e4");
    }

    #[test]
    fn labels_are_escaped_and_output_is_stable() {
        let s = Summary { min: 0.0, q1: 1.0, median: 2.0, mean: 2.5, q3: 3.0, max: 5.0 };
        let a = boxplot("a<b", "RL", &[("x&y".into(), s)], &prov());
        assert!(a.contains("a&lt;b") && a.contains("x&amp;y"));
        assert!(a.contains("- -lambda") && !a.contains("--lambda"));
        assert_eq!(a, boxplot("a<b", "RL", &[("x&y".into(), s)], &prov()));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn histogram_has_one_bar_per_bin() {
        let h = Histogram::build(&[0.5, 1.5, 1.6, 2.5], 3).unwrap();
        let svg = histogram("F", "F", &h, Some(1.0), &prov());
        assert_eq!(svg.matches("<rect x=").count(), 3);
        assert!(svg.contains("stroke-dasharray"));
    }
}
