//! Self-contained SVG output: log-log scatter plots with bound curves for
//! the randomized experiments, a line plot of `C(ρ)` and heatmaps of `C̃`.

use std::fmt::Write as _;
use std::path::Path;

use super::{
    ExperimentError, ExperimentKind, ExperimentOutput, ExperimentSpec, HeatmapPanel, TrialRecord,
};
use crate::bounds::{bdgy_coefficient, lili_coefficient, lili_thresholds, tau_max};
use crate::nodes::{BDGY_N, LILI_N};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 180.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

const PALETTE: [&str; 5] = ["#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn log_covering(lo: f64, hi: f64) -> Self {
        let lo = 10f64.powf(lo.log10().floor());
        let hi = 10f64.powf(hi.log10().ceil());
        Axis {
            lo,
            hi: if hi > lo { hi } else { lo * 10.0 },
            log: true,
        }
    }

    fn linear(lo: f64, hi: f64) -> Self {
        Axis { lo, hi, log: false }
    }

    /// Position in `[0, 1]`.
    fn frac(&self, v: f64) -> f64 {
        if self.log {
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn contains(&self, v: f64) -> bool {
        v.is_finite() && v >= self.lo && v <= self.hi && (!self.log || v > 0.0)
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (
                self.lo.log10().round() as i32,
                self.hi.log10().round() as i32,
            );
            let step = ((b - a) / 8).max(1);
            (a..=b)
                .step_by(step as usize)
                .map(|e| (10f64.powi(e), format!("1e{e}")))
                .collect()
        } else {
            let span = self.hi - self.lo;
            let raw = span / 6.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .into_iter()
                .map(|k| k * mag)
                .find(|s| span / s <= 6.0)
                .unwrap_or(10.0 * mag);
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last)
                .map(|k| {
                    let v = k as f64 * step;
                    (v, format!("{}", (v * 1e6).round() / 1e6))
                })
                .collect()
        }
    }
}

/// Plot area with pixel bounds `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy)]
struct Frame {
    x: Axis,
    y: Axis,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        self.x0 + self.x.frac(v) * (self.x1 - self.x0)
    }

    fn py(&self, v: f64) -> f64 {
        self.y1 - self.y.frac(v) * (self.y1 - self.y0)
    }

    fn axes(&self, svg: &mut String, xlabel: &str, ylabel: &str) {
        let _ = writeln!(
            svg,
            r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            self.x0,
            self.y0,
            self.x1 - self.x0,
            self.y1 - self.y0
        );
        for (v, label) in self.x.ticks() {
            let x = self.px(v);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="11">{label}</text>"#,
                self.y1,
                self.y1 + 5.0,
                self.y1 + 18.0
            );
        }
        for (v, label) in self.y.ticks() {
            let y = self.py(v);
            let _ = writeln!(
                svg,
                r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{label}</text>"#,
                self.x0 - 5.0,
                self.x0,
                self.x0 - 8.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
            (self.x0 + self.x1) / 2.0,
            self.y1 + 40.0,
            escape(xlabel)
        );
        let (lx, ly) = (self.x0 - 58.0, (self.y0 + self.y1) / 2.0);
        let _ = writeln!(
            svg,
            r#"<text x="{lx:.1}" y="{ly:.1}" text-anchor="middle" font-size="13" transform="rotate(-90 {lx:.1} {ly:.1})">{}</text>"#,
            escape(ylabel)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(width: f64, height: f64, title: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    svg
}

/// A bound curve `y = f(x)` drawn on `[from, to]`.
struct Curve {
    label: String,
    from: f64,
    to: f64,
    dashed: bool,
    f: Box<dyn Fn(f64) -> f64>,
}

impl Curve {
    fn new(label: impl Into<String>, from: f64, to: f64, f: impl Fn(f64) -> f64 + 'static) -> Self {
        Curve {
            label: label.into(),
            from,
            to,
            dashed: false,
            f: Box::new(f),
        }
    }

    fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }

    fn samples(&self, axis: &Axis) -> Vec<(f64, f64)> {
        let lo = self.from.max(axis.lo);
        let hi = self.to.min(axis.hi);
        if !(lo < hi) {
            return Vec::new();
        }
        const STEPS: usize = 200;
        (0..=STEPS)
            .map(|i| {
                let s = i as f64 / STEPS as f64;
                if axis.log {
                    lo * (hi / lo).powf(s)
                } else {
                    lo + (hi - lo) * s
                }
            })
            .map(|x| (x, (self.f)(x)))
            .collect()
    }
}

fn legend(svg: &mut String, frame: &Frame, items: &[(String, &str, bool, bool)]) {
    let x = frame.x1 + 15.0;
    for (k, (label, color, dashed, marker)) in items.iter().enumerate() {
        let y = frame.y0 + 10.0 + 20.0 * k as f64;
        if *marker {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.1}" cy="{y:.1}" r="3" fill="{color}"/>"#,
                x + 10.0
            );
        } else {
            let dash = if *dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"{dash}/>"#,
                x + 20.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            x + 26.0,
            y + 4.0,
            escape(label)
        );
    }
}

/// Scatter of `points` with curves, on log or linear axes sized to fit.
fn line_plot(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    x: Axis,
    log_y: bool,
    points: &[(f64, f64)],
    point_label: &str,
    curves: &[Curve],
) -> String {
    let sampled: Vec<Vec<(f64, f64)>> = curves.iter().map(|c| c.samples(&x)).collect();
    let ys = points
        .iter()
        .chain(sampled.iter().flatten())
        .map(|p| p.1)
        .filter(|y| y.is_finite() && (!log_y || *y > 0.0));
    let (ymin, ymax) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| {
        (a.min(y), b.max(y))
    });
    let y = match (log_y, ymin.is_finite()) {
        (true, true) => Axis::log_covering(ymin, ymax),
        (true, false) => Axis::log_covering(1.0, 10.0),
        (false, true) => {
            let pad = 0.05 * (ymax - ymin).max(1e-12);
            Axis::linear(ymin - pad, ymax + pad)
        }
        (false, false) => Axis::linear(0.0, 1.0),
    };
    let frame = Frame {
        x,
        y,
        x0: MARGIN_L,
        x1: WIDTH - MARGIN_R,
        y0: MARGIN_T,
        y1: HEIGHT - MARGIN_B,
    };

    let mut svg = header(WIDTH, HEIGHT, title);
    frame.axes(&mut svg, xlabel, ylabel);
    let mut items = Vec::new();
    for (k, (curve, pts)) in curves.iter().zip(&sampled).enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|p| frame.y.contains(p.1))
            .map(|&(a, b)| format!("{:.2},{:.2}", frame.px(a), frame.py(b)))
            .collect();
        if path.len() >= 2 {
            let dash = if curve.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
                path.join(" ")
            );
        }
        items.push((curve.label.clone(), color, curve.dashed, false));
    }
    for &(a, b) in points {
        if frame.x.contains(a) && frame.y.contains(b) {
            let _ = writeln!(
                svg,
                r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#1f77b4" fill-opacity="0.7"/>"##,
                frame.px(a),
                frame.py(b)
            );
        }
    }
    if !points.is_empty() {
        items.push((point_label.to_string(), "#1f77b4", false, true));
    }
    legend(&mut svg, &frame, &items);
    svg.push_str("</svg>\n");
    svg
}

fn trial_plot(spec: &ExperimentSpec, records: &[TrialRecord]) -> String {
    let m = spec.node_count();
    let taus = records.iter().map(|r| r.tau).filter(|t| *t > 0.0);
    let (tmin, tmax) = taus.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| {
        (a.min(t), b.max(t))
    });
    let x = if tmin.is_finite() {
        Axis::log_covering(tmin, tmax)
    } else {
        Axis::log_covering(1e-11, 1.0)
    };
    let lb = Curve::new("sqrt(6)/(pi tau)", 0.0, 1.0, |t| {
        6f64.sqrt() / (std::f64::consts::PI * t)
    })
    .dashed();
    match spec.kind {
        ExperimentKind::OnePair | ExperimentKind::Pairwise => {
            let points: Vec<(f64, f64)> = records
                .iter()
                .filter_map(|r| r.spectrum.as_ref().map(|s| (r.tau, s.cond.to_f64())))
                .collect();
            let ub = if spec.kind == ExperimentKind::OnePair {
                Curve::new("4/tau", 0.0, 1.0, |t| 4.0 / t)
            } else {
                Curve::new("5/tau", 0.0, tau_max(spec.c), |t| 5.0 / t)
            };
            let title = match spec.kind {
                ExperimentKind::OnePair => format!("one nearly-colliding pair, M = {m}"),
                _ => format!("pairs of nearly-colliding nodes, M = {m}, c = {}", spec.c),
            };
            line_plot(
                &title,
                "tau",
                "condition number",
                x,
                true,
                &points,
                "cond(A)",
                &[ub, lb],
            )
        }
        ExperimentKind::CompareBdgy | ExperimentKind::CompareLili => {
            let points: Vec<(f64, f64)> = records
                .iter()
                .filter_map(|r| r.spectrum.as_ref().map(|s| (r.tau, s.pinv_norm().to_f64())))
                .collect();
            let big_n = records.first().map_or(
                if spec.kind == ExperimentKind::CompareBdgy {
                    BDGY_N
                } else {
                    LILI_N
                } as f64,
                |r| r.big_n as f64,
            );
            let root = big_n.sqrt();
            let mut curves = vec![Curve::new("pairwise", 0.0, 0.25, move |t| {
                11.3f64.sqrt() / (t * root)
            })];
            let title = if spec.kind == ExperimentKind::CompareBdgy {
                let k = bdgy_coefficient(m, big_n);
                curves.push(Curve::new("three-node bound", 0.0, 1.0, move |t| {
                    k / (t * root)
                }));
                format!("comparison, M = {m}, N = {big_n}")
            } else {
                let k = lili_coefficient(m, big_n);
                let (thm1, thm2) = lili_thresholds(m, big_n);
                curves.push(Curve::new("uniform pairs", thm2, 1.0, move |t| {
                    k / (t * root)
                }));
                curves.push(
                    Curve::new("uniform pairs, weak gate", thm1, 1.0, move |t| {
                        k / (t * root)
                    })
                    .dashed(),
                );
                format!("comparison, M = {m}, N = {big_n}")
            };
            line_plot(
                &title,
                "tau",
                "norm of pseudo-inverse",
                x,
                true,
                &points,
                "measured",
                &curves,
            )
        }
        ExperimentKind::FigCrho | ExperimentKind::FigCtilde => unreachable!(),
    }
}

fn crho_plot(points: &[(f64, f64)]) -> String {
    let x = Axis::linear(5.0, 50.0);
    let curve_pts: Vec<(f64, f64)> = points.to_vec();
    let c = Curve::new("C(rho)", 5.0, 50.0, move |r| {
        let k = curve_pts
            .partition_point(|p| p.0 < r)
            .min(curve_pts.len() - 1);
        curve_pts[k].1
    });
    let inf = Curve::new("limit 3", 5.0, 50.0, |_| 3.0).dashed();
    line_plot("C(rho)", "rho", "C(rho)", x, false, &[], "", &[c, inf])
}

/// Piecewise-linear map of `[0, 1]` onto a perceptually ordered palette.
fn colormap(s: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let s = s.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let k = (s.floor() as usize).min(STOPS.len() - 2);
    let f = s - k as f64;
    let (a, b) = (STOPS[k], STOPS[k + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

/// Top of the heatmap panels, leaving room for the title and panel labels.
const HEATMAP_TOP: f64 = 64.0;

/// Color levels of the heatmap; cells are quantized before drawing.
const LEVELS: f64 = 64.0;

fn heatmap_plot(panels: &[HeatmapPanel]) -> String {
    let vmax = panels
        .iter()
        .flat_map(|p| p.values.iter().flatten())
        .fold(0.0f64, |a, &v| a.max(v))
        .max(f64::MIN_POSITIVE);
    let pw = 300.0;
    let width = MARGIN_L + panels.len() as f64 * (pw + MARGIN_L) + 60.0;
    let height = HEATMAP_TOP + pw + MARGIN_B;
    let mut svg = header(width, height, "max(C~(tau, rho, c, M), 0)");
    for (k, p) in panels.iter().enumerate() {
        let x0 = MARGIN_L + k as f64 * (pw + MARGIN_L);
        let frame = Frame {
            x: Axis::linear(p.taus[0], p.taus[p.taus.len() - 1]),
            y: Axis::linear(p.rhos[0], p.rhos[p.rhos.len() - 1]),
            x0,
            x1: x0 + pw,
            y0: HEATMAP_TOP,
            y1: HEATMAP_TOP + pw,
        };
        let cw = pw / p.taus.len() as f64;
        let ch = pw / p.rhos.len() as f64;
        for (i, row) in p.values.iter().enumerate() {
            let y = frame.y1 - (i + 1) as f64 * ch;
            let level = |v: f64| (v / vmax * LEVELS).floor().min(LEVELS - 1.0) as i32;
            let mut j = 0;
            while j < row.len() {
                let lv = level(row[j]);
                let mut end = j + 1;
                while end < row.len() && level(row[end]) == lv {
                    end += 1;
                }
                let _ = writeln!(
                    svg,
                    r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    x0 + j as f64 * cw,
                    (end - j) as f64 * cw + 0.3,
                    ch + 0.3,
                    colormap((lv as f64 + 0.5) / LEVELS)
                );
                j = end;
            }
        }
        frame.axes(&mut svg, "tau", "rho");
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">M = {}, c = {:.4}</text>"#,
            x0 + pw / 2.0,
            HEATMAP_TOP - 4.0,
            p.m,
            p.c
        );
    }
    let bx = width - 50.0;
    for s in 0..100 {
        let f = s as f64 / 100.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{bx:.1}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#,
            HEATMAP_TOP + pw * (1.0 - f - 0.01),
            pw * 0.01 + 0.3,
            colormap(f)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="10">{vmax:.3}</text><text x="{:.1}" y="{:.1}" font-size="10">0</text>"#,
        bx - 4.0,
        HEATMAP_TOP - 4.0,
        bx + 2.0,
        HEATMAP_TOP + pw + 14.0
    );
    svg.push_str("</svg>\n");
    svg
}

/// Renders `out` to an SVG string. An empty trial list is a precondition
/// error.
pub fn render_plot(
    spec: &ExperimentSpec,
    out: &ExperimentOutput,
) -> Result<String, ExperimentError> {
    let empty = |what: &str| Err(ExperimentError::Precondition(format!("no {what} to plot")));
    match out {
        ExperimentOutput::Trials(r) if r.is_empty() => empty("trial records"),
        ExperimentOutput::Curve(p) if p.is_empty() => empty("curve points"),
        ExperimentOutput::Heatmap(p) if p.is_empty() || p.iter().any(|q| q.values.is_empty()) => {
            empty("heatmap cells")
        }
        ExperimentOutput::Trials(r) => Ok(trial_plot(spec, r)),
        ExperimentOutput::Curve(p) => Ok(crho_plot(p)),
        ExperimentOutput::Heatmap(p) => Ok(heatmap_plot(p)),
    }
}

pub fn emit_plot(
    spec: &ExperimentSpec,
    out: &ExperimentOutput,
    path: &Path,
) -> Result<(), ExperimentError> {
    let svg = render_plot(spec, out)?;
    std::fs::write(path, svg).map_err(|e| ExperimentError::io(path, e))
}
