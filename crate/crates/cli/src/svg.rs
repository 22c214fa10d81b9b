//! Minimal SVG plots of 2-D sets. No plotting dependency.

use std::fmt::Write;

use innerset::geometry::{InnerApprox, Shape};

#[derive(Clone, Debug)]
pub enum Layer {
    Polygon {
        pts: Vec<[f64; 2]>,
        color: &'static str,
        fill: bool,
        dashed: bool,
    },
    Circle {
        c: [f64; 2],
        r: f64,
        color: &'static str,
        dashed: bool,
    },
    Rect {
        lo: [f64; 2],
        hi: [f64; 2],
        color: &'static str,
        fill: Option<String>,
        dashed: bool,
    },
    Point {
        p: [f64; 2],
        color: &'static str,
    },
}

impl Layer {
    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        match self {
            Layer::Polygon { pts, .. } => pts.iter().fold(
                ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]),
                |(lo, hi), p| {
                    (
                        [lo[0].min(p[0]), lo[1].min(p[1])],
                        [hi[0].max(p[0]), hi[1].max(p[1])],
                    )
                },
            ),
            Layer::Circle { c, r, .. } => ([c[0] - r, c[1] - r], [c[0] + r, c[1] + r]),
            Layer::Rect { lo, hi, .. } => (*lo, *hi),
            Layer::Point { p, .. } => (*p, *p),
        }
    }
}

/// Inner shape of a 2-D result as plot layers; `None` outside 2-D.
pub fn approx_layers(a: &InnerApprox, color: &'static str, dashed: bool) -> Option<Vec<Layer>> {
    match &a.shape {
        Shape::Cube { center, r } if center.len() == 2 => Some(vec![Layer::Rect {
            lo: [center[0] - r, center[1] - r],
            hi: [center[0] + r, center[1] + r],
            color,
            fill: None,
            dashed,
        }]),
        Shape::Ball { center, r } if center.len() == 2 => Some(vec![Layer::Circle {
            c: [center[0], center[1]],
            r: *r,
            color,
            dashed,
        }]),
        Shape::Polytope { vrep: Some(v), .. } if v.dim() == 2 => {
            Some(vec![polygon(v.vertices(), color, true)])
        }
        Shape::Polytope { hrep, .. } if hrep.dim() == 2 => {
            let v = hrep.to_vpolytope().ok()?;
            Some(vec![polygon(v.vertices(), color, true)])
        }
        _ => None,
    }
}

/// Polygon through 2-D vertices, sorted by angle about their mean.
pub fn polygon(vertices: &[Vec<f64>], color: &'static str, fill: bool) -> Layer {
    let n = vertices.len().max(1) as f64;
    let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / n;
    let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / n;
    let mut pts: Vec<[f64; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| {
        (a[1] - cy)
            .atan2(a[0] - cx)
            .total_cmp(&(b[1] - cy).atan2(b[0] - cx))
    });
    Layer::Polygon {
        pts,
        color,
        fill,
        dashed: false,
    }
}

/// Blue-to-red ramp for `t` in `[0, 1]`; grey for NaN.
pub fn heat(t: f64) -> String {
    if t.is_nan() {
        return "#cccccc".into();
    }
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t) as u8;
    let b = (255.0 * (1.0 - t)) as u8;
    format!("#{r:02x}40{b:02x}")
}

/// Heat map of a sweep over joints `i` and `j`; uncertified boxes are grey.
pub fn sweep_heat_map(
    cells: &[innerset::capability::SweepCell],
    i: usize,
    j: usize,
    title: &str,
) -> String {
    let finite = cells.iter().map(|c| c.r).filter(|r| r.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r), b.max(r))
    });
    let layers: Vec<Layer> = cells
        .iter()
        .map(|c| {
            let t = if c.r.is_nan() {
                f64::NAN
            } else if hi > lo {
                (c.r - lo) / (hi - lo)
            } else {
                1.0
            };
            Layer::Rect {
                lo: [c.q[i].lo(), c.q[j].lo()],
                hi: [c.q[i].hi(), c.q[j].hi()],
                color: "none",
                fill: Some(heat(t)),
                dashed: false,
            }
        })
        .collect();
    let title = format!("{title} (r from {lo:.4} to {hi:.4})");
    render(
        &title,
        &format!("q{}", i + 1),
        &format!("q{}", j + 1),
        &layers,
    )
}

pub fn render(title: &str, xlabel: &str, ylabel: &str, layers: &[Layer]) -> String {
    const W: f64 = 480.0;
    const PAD: f64 = 60.0;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for l in layers {
        let (a, b) = l.bounds();
        for k in 0..2 {
            if a[k].is_finite() && b[k].is_finite() {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12) * 1.1;
    let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let s = (W - 2.0 * PAD) / span;
    let tx = |x: f64| PAD + (x - mid[0] + span / 2.0) * s;
    let ty = |y: f64| W - PAD - (y - mid[1] + span / 2.0) * s;
    let dash = |d: bool| if d { " stroke-dasharray=\"6 4\"" } else { "" };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{W}\" viewBox=\"0 0 {W} {W}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        escape(title)
    );
    for l in layers {
        match l {
            Layer::Polygon {
                pts,
                color,
                fill,
                dashed,
            } => {
                let p: Vec<String> = pts
                    .iter()
                    .map(|p| format!("{:.2},{:.2}", tx(p[0]), ty(p[1])))
                    .collect();
                let f = if *fill {
                    format!("{color}\" fill-opacity=\"0.15")
                } else {
                    "none".into()
                };
                let _ = writeln!(
                    out,
                    "<polygon points=\"{}\" fill=\"{f}\" stroke=\"{color}\" stroke-width=\"1.5\"{}/>",
                    p.join(" "),
                    dash(*dashed)
                );
            }
            Layer::Circle {
                c,
                r,
                color,
                dashed,
            } => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{:.2}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{}/>",
                    tx(c[0]),
                    ty(c[1]),
                    r * s,
                    dash(*dashed)
                );
            }
            Layer::Rect {
                lo,
                hi,
                color,
                fill,
                dashed,
            } => {
                let f = fill.clone().unwrap_or_else(|| "none".into());
                let _ = writeln!(
                    out,
                    "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{f}\" stroke=\"{color}\" stroke-width=\"{}\"{}/>",
                    tx(lo[0]),
                    ty(hi[1]),
                    (hi[0] - lo[0]) * s,
                    (hi[1] - lo[1]) * s,
                    if fill.is_some() { 0.0 } else { 1.5 },
                    dash(*dashed)
                );
            }
            Layer::Point { p, color } => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>",
                    tx(p[0]),
                    ty(p[1])
                );
            }
        }
    }
    // Axes through the plot frame, labelled with the data range.
    let _ = writeln!(
        out,
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{0}\" height=\"{0}\" fill=\"none\" stroke=\"#888\"/>",
        W - 2.0 * PAD
    );
    let (x0, x1) = (mid[0] - span / 2.0, mid[0] + span / 2.0);
    let (y0, y1) = (mid[1] - span / 2.0, mid[1] + span / 2.0);
    let _ = writeln!(
        out,
        "<text x=\"{PAD}\" y=\"{}\">{}</text>",
        W - PAD + 16.0,
        fmt_num(x0)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
        W - PAD,
        W - PAD + 16.0,
        fmt_num(x1)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        W - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
        PAD - 4.0,
        W - PAD,
        fmt_num(y0)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
        PAD - 4.0,
        PAD + 10.0,
        fmt_num(y1)
    );
    let _ = writeln!(
        out,
        "<text x=\"14\" y=\"{0}\" transform=\"rotate(-90 14 {0})\" text-anchor=\"middle\">{1}</text>",
        W / 2.0,
        escape(ylabel)
    );
    out.push_str("</svg>\n");
    out
}

fn fmt_num(v: f64) -> String {
    if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
