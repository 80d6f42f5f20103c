//! Self-contained SVG rendering of robots and plots.

use std::fmt::Write;

use plasticoding_core::phenotype::{ModuleKind, Phenotype};

use crate::stats::quantile;

const FONT: &str = "font-family=\"sans-serif\"";

pub const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Wraps drawing elements in an SVG document.
pub fn document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn module_fill(kind: ModuleKind) -> &'static str {
    match kind {
        ModuleKind::Core => "#f2c94c",
        ModuleKind::Brick => "#56a0d3",
        ModuleKind::JointV => "#eb5757",
        ModuleKind::JointH => "#f2994a",
        ModuleKind::Sensor => "#6fcf97",
    }
}

/// Top view of a morphology on its grid, north up.
pub fn morphology(p: &Phenotype, title: &str) -> String {
    let m = &p.morphology;
    let cell = 48.0;
    let margin = 24.0;
    let header = 28.0;
    let xs = m.modules().iter().map(|x| x.cell.0);
    let ys = m.modules().iter().map(|x| x.cell.1);
    let (min_x, max_x) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
    let (min_y, max_y) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
    let width = (max_x - min_x + 1) as f64 * cell + 2.0 * margin;
    let height = (max_y - min_y + 1) as f64 * cell + 2.0 * margin + header;
    let center = |c: (i32, i32)| {
        (
            margin + (c.0 - min_x) as f64 * cell + cell / 2.0,
            header + margin + (max_y - c.1) as f64 * cell + cell / 2.0,
        )
    };
    let mut body = String::new();
    let _ = writeln!(
        body,
        "<text x=\"{margin}\" y=\"20\" {FONT} font-size=\"14\">{}</text>",
        escape(title)
    );
    for x in m.modules() {
        if let Some((parent, _)) = x.parent {
            let (x1, y1) = center(m.module(parent).cell);
            let (x2, y2) = center(x.cell);
            let _ = writeln!(
                body,
                "<line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#333\" stroke-width=\"3\"/>"
            );
        }
    }
    let side = cell * 0.8;
    for x in m.modules() {
        let (cx, cy) = center(x.cell);
        let _ = writeln!(
            body,
            "<rect x=\"{}\" y=\"{}\" width=\"{side}\" height=\"{side}\" rx=\"4\" fill=\"{}\" stroke=\"#222\"/>",
            cx - side / 2.0,
            cy - side / 2.0,
            module_fill(x.kind)
        );
        let _ = writeln!(
            body,
            "<text x=\"{cx}\" y=\"{}\" {FONT} font-size=\"14\" text-anchor=\"middle\">{}</text>",
            cy + 5.0,
            x.kind.letter()
        );
    }
    document(width.max(160.0), height, &body)
}

/// Rectangle a plot draws into.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

struct Axes {
    panel: Panel,
    x: (f64, f64),
    y: (f64, f64),
}

const PAD_LEFT: f64 = 56.0;
const PAD_BOTTOM: f64 = 36.0;
const PAD_TOP: f64 = 28.0;
const PAD_RIGHT: f64 = 12.0;

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

impl Axes {
    fn px(&self, v: f64) -> f64 {
        let w = self.panel.width - PAD_LEFT - PAD_RIGHT;
        self.panel.x + PAD_LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * w
    }

    fn py(&self, v: f64) -> f64 {
        let h = self.panel.height - PAD_TOP - PAD_BOTTOM;
        self.panel.y + PAD_TOP + (self.y.1 - v) / (self.y.1 - self.y.0) * h
    }

    fn frame(&self, out: &mut String, title: &str, x_label: &str, y_label: &str, x_ticks: bool) {
        let p = self.panel;
        let (l, r) = (p.x + PAD_LEFT, p.x + p.width - PAD_RIGHT);
        let (t, b) = (p.y + PAD_TOP, p.y + p.height - PAD_BOTTOM);
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" {FONT} font-size=\"13\" text-anchor=\"middle\">{}</text>",
            (l + r) / 2.0,
            p.y + 16.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            "<rect x=\"{l}\" y=\"{t}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>",
            r - l,
            b - t
        );
        for i in 0..=4 {
            let v = self.y.0 + (self.y.1 - self.y.0) * i as f64 / 4.0;
            let y = self.py(v);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{y}\" x2=\"{l}\" y2=\"{y}\" stroke=\"#444\"/>\
                 <text x=\"{}\" y=\"{}\" {FONT} font-size=\"10\" text-anchor=\"end\">{}</text>",
                l - 4.0,
                l - 6.0,
                y + 3.0,
                tick(v)
            );
            if x_ticks {
                let xv = self.x.0 + (self.x.1 - self.x.0) * i as f64 / 4.0;
                let x = self.px(xv);
                let _ = writeln!(
                    out,
                    "<line x1=\"{x}\" y1=\"{b}\" x2=\"{x}\" y2=\"{}\" stroke=\"#444\"/>\
                     <text x=\"{x}\" y=\"{}\" {FONT} font-size=\"10\" text-anchor=\"middle\">{}</text>",
                    b + 4.0,
                    b + 15.0,
                    tick(xv)
                );
            }
        }
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" {FONT} font-size=\"11\" text-anchor=\"middle\">{}</text>",
            (l + r) / 2.0,
            b + 30.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            "<text transform=\"translate({},{}) rotate(-90)\" {FONT} font-size=\"11\" text-anchor=\"middle\">{}</text>",
            p.x + 14.0,
            (t + b) / 2.0,
            escape(y_label)
        );
    }
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}").trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// A named polyline.
pub struct Series<'a> {
    pub name: &'a str,
    pub points: &'a [(f64, f64)],
}

/// Line plot of several series with a legend.
pub fn line_plot(panel: Panel, title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let axes = Axes {
        panel,
        x: if x1 > x0 { (x0, x1) } else { padded(x0, x1) },
        y: padded(y0, y1),
    };
    let mut out = String::new();
    axes.frame(&mut out, title, x_label, y_label, true);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", axes.px(x), axes.py(y)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            pts.join(" ")
        );
        let ly = panel.y + PAD_TOP + 14.0 + 14.0 * i as f64;
        let lx = panel.x + PAD_LEFT + 8.0;
        let _ = writeln!(
            out,
            "<line x1=\"{lx}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>\
             <text x=\"{}\" y=\"{ly}\" {FONT} font-size=\"10\">{}</text>",
            ly - 4.0,
            lx + 16.0,
            ly - 4.0,
            lx + 20.0,
            escape(s.name)
        );
    }
    out
}

/// Box plot (quartiles, 1.5 IQR whiskers, outliers) of named samples.
pub fn box_plot(panel: Panel, title: &str, y_label: &str, groups: &[(&str, &[f64])]) -> String {
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in groups.iter().flat_map(|g| g.1.iter()) {
        y0 = y0.min(*v);
        y1 = y1.max(*v);
    }
    let axes = Axes {
        panel,
        x: (0.0, groups.len() as f64),
        y: padded(y0, y1),
    };
    let mut out = String::new();
    axes.frame(&mut out, title, "", y_label, false);
    let bottom = panel.y + panel.height - PAD_BOTTOM;
    for (i, (name, values)) in groups.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let cx = axes.px(i as f64 + 0.5);
        let _ = writeln!(
            out,
            "<text x=\"{cx}\" y=\"{}\" {FONT} font-size=\"11\" text-anchor=\"middle\">{}</text>",
            bottom + 15.0,
            escape(name)
        );
        if values.is_empty() {
            continue;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let (q1, med, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
        let iqr = q3 - q1;
        let lo = v.iter().copied().find(|&x| x >= q1 - 1.5 * iqr).unwrap_or(q1);
        let hi = v.iter().rev().copied().find(|&x| x <= q3 + 1.5 * iqr).unwrap_or(q3);
        let half = (axes.px(1.0) - axes.px(0.0)) * 0.25;
        let _ = writeln!(
            out,
            "<line x1=\"{cx}\" y1=\"{}\" x2=\"{cx}\" y2=\"{}\" stroke=\"#222\"/>",
            axes.py(hi),
            axes.py(lo)
        );
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\" fill-opacity=\"0.35\" stroke=\"{color}\"/>",
            cx - half,
            axes.py(q3),
            2.0 * half,
            (axes.py(q1) - axes.py(q3)).max(0.5)
        );
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#222\" stroke-width=\"2\"/>",
            cx - half,
            cx + half,
            y = axes.py(med)
        );
        for &x in v.iter().filter(|&&x| x < lo || x > hi) {
            let _ = writeln!(
                out,
                "<circle cx=\"{cx}\" cy=\"{}\" r=\"2.5\" fill=\"none\" stroke=\"#222\"/>",
                axes.py(x)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use plasticoding_core::phenotype::{ControllerNetwork, Morphology, Slot};

    #[test]
    fn morphology_draws_every_module() {
        let mut m = Morphology::with_core();
        let b = m.attach(m.core(), Slot::Left, ModuleKind::Brick).unwrap();
        m.attach(b, Slot::Front, ModuleKind::JointV).unwrap();
        let p = Phenotype {
            morphology: m,
            controller: ControllerNetwork::new(),
        };
        let svg = morphology(&p, "robot <1>");
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<rect").count(), 1 + 3);
        assert_eq!(svg.matches("<line").count(), 2);
        assert!(svg.contains("robot &lt;1&gt;"));
    }

    #[test]
    fn plots_are_deterministic_and_well_formed() {
        let panel = Panel {
            x: 0.0,
            y: 0.0,
            width: 400.0,
            height: 300.0,
        };
        let pts = [(1.0, 0.5), (2.0, 0.7), (3.0, 0.6)];
        let a = line_plot(panel, "t", "x", "y", &[Series { name: "a", points: &pts }]);
        assert_eq!(a, line_plot(panel, "t", "x", "y", &[Series { name: "a", points: &pts }]));
        assert_eq!(a.matches("<polyline").count(), 1);
        let b = box_plot(panel, "t", "y", &[("a", &[1.0, 2.0, 3.0, 4.0, 40.0]), ("b", &[])]);
        assert_eq!(b.matches("<circle").count(), 1);
        assert!(!document(10.0, 10.0, &b).contains("NaN"));
    }
}
