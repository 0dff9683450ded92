use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bench::{BenchRecord, Status};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSummary {
    pub solver: String,
    pub runs: usize,
    pub timeouts: usize,
    pub errors: usize,
    /// Mean time over the instances both compared solvers completed.
    pub mean_ms: Option<f64>,
}

/// One instance run by both solvers without error. Timed-out runs sit at the
/// timeout value.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub instance: String,
    pub x_ms: f64,
    pub y_ms: f64,
    pub x_timeout: bool,
    pub y_timeout: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub rows: usize,
    pub x: SolverSummary,
    pub y: SolverSummary,
    pub completed: usize,
    pub timeout_ms: f64,
    pub points: Vec<Point>,
}

fn by_instance<'a>(records: &'a [BenchRecord], solver: &str) -> BTreeMap<&'a str, &'a BenchRecord> {
    records.iter().filter(|r| r.solver == solver).map(|r| (r.instance.as_str(), r)).collect()
}

/// Pairs the runs of `x` and `y`. Without `timeout_ms`, timeouts are clamped
/// to the largest time in the file.
pub fn compare(records: &[BenchRecord], x: &str, y: &str, timeout_ms: Option<f64>) -> Result<Comparison, String> {
    let xs = by_instance(records, x);
    let ys = by_instance(records, y);
    for (s, m) in [(x, &xs), (y, &ys)] {
        if m.is_empty() {
            return Err(format!("no rows for solver `{s}`"));
        }
    }
    let clamp = timeout_ms.unwrap_or_else(|| records.iter().map(|r| r.time_ms).fold(0.0, f64::max));
    let summary = |s: &str, m: &BTreeMap<&str, &BenchRecord>| SolverSummary {
        solver: s.to_string(),
        runs: m.len(),
        timeouts: m.values().filter(|r| r.status == Status::Timeout).count(),
        errors: m.values().filter(|r| r.status == Status::Error).count(),
        mean_ms: None,
    };
    let mut sx = summary(x, &xs);
    let mut sy = summary(y, &ys);
    let mut points = Vec::new();
    let (mut tx, mut ty, mut done) = (0.0, 0.0, 0usize);
    for (inst, rx) in &xs {
        let Some(ry) = ys.get(inst) else {
            continue;
        };
        if rx.status == Status::Error || ry.status == Status::Error {
            continue;
        }
        if rx.status == Status::Ok && ry.status == Status::Ok {
            tx += rx.time_ms;
            ty += ry.time_ms;
            done += 1;
        }
        let at = |r: &BenchRecord| if r.status == Status::Timeout { clamp } else { r.time_ms };
        points.push(Point {
            instance: inst.to_string(),
            x_ms: at(rx),
            y_ms: at(ry),
            x_timeout: rx.status == Status::Timeout,
            y_timeout: ry.status == Status::Timeout,
        });
    }
    if done > 0 {
        sx.mean_ms = Some(tx / done as f64);
        sy.mean_ms = Some(ty / done as f64);
    }
    Ok(Comparison { rows: records.len(), x: sx, y: sy, completed: done, timeout_ms: clamp, points })
}

pub fn summary_text(c: &Comparison) -> String {
    let mut s = String::new();
    writeln!(s, "rows: {}", c.rows).unwrap();
    writeln!(
        s,
        "{} vs {}: {} paired instances, {} completed by both",
        c.x.solver,
        c.y.solver,
        c.points.len(),
        c.completed
    )
    .unwrap();
    for m in [&c.x, &c.y] {
        let mean = m.mean_ms.map_or("n/a".to_string(), |v| format!("{v:.3} ms"));
        writeln!(s, "{}: {} runs, {} timeouts, {} errors, mean {mean}", m.solver, m.runs, m.timeouts, m.errors)
            .unwrap();
    }
    s
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 60.0;
/// Times below this are drawn at this value on log axes.
const FLOOR_MS: f64 = 1e-3;

/// Plot geometry shared by both axes: the `y` solver runs horizontally and
/// the `x` solver vertically, so points above the diagonal mark instances
/// where `y` is faster.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axes {
    pub log: bool,
    pub lo: f64,
    pub hi: f64,
}

impl Axes {
    pub fn fit(c: &Comparison, log: bool) -> Axes {
        let vals = c.points.iter().flat_map(|p| [p.x_ms, p.y_ms]);
        if log {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in vals {
                let v = v.max(FLOOR_MS).log10();
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if !lo.is_finite() {
                (lo, hi) = (0.0, 1.0);
            }
            let (lo, hi) = (lo.floor(), hi.ceil());
            Axes { log, lo, hi: if hi > lo { hi } else { lo + 1.0 } }
        } else {
            let hi = vals.fold(0.0, f64::max);
            Axes { log, lo: 0.0, hi: if hi > 0.0 { hi } else { 1.0 } }
        }
    }

    fn unit(&self, ms: f64) -> f64 {
        let v = if self.log { ms.max(FLOOR_MS).log10() } else { ms };
        (v - self.lo) / (self.hi - self.lo)
    }

    /// Pixel position of a point with horizontal time `h_ms` and vertical time `v_ms`.
    pub fn to_px(&self, h_ms: f64, v_ms: f64) -> (f64, f64) {
        let span = SIZE - 2.0 * MARGIN;
        (MARGIN + span * self.unit(h_ms), SIZE - MARGIN - span * self.unit(v_ms))
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            (self.lo as i32..=self.hi as i32).map(|e| (10f64.powi(e), format!("1e{e}"))).collect()
        } else {
            (0..=4)
                .map(|i| {
                    let v = self.hi * i as f64 / 4.0;
                    (v, format!("{v:.1}"))
                })
                .collect()
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_svg(c: &Comparison, log: bool) -> String {
    let ax = Axes::fit(c, log);
    let lo = if log { 10f64.powf(ax.lo) } else { 0.0 };
    let hi = if log { 10f64.powf(ax.hi) } else { ax.hi };
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    let (x0, y0) = ax.to_px(lo, lo);
    let (x1, y1) = ax.to_px(hi, hi);
    writeln!(s, r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y0 - y1)
        .unwrap();
    writeln!(
        s,
        r#"<line class="diagonal" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="gray" stroke-dasharray="4 3"/>"#
    )
    .unwrap();
    for (v, label) in ax.ticks() {
        let (tx, _) = ax.to_px(v, lo);
        let (_, ty) = ax.to_px(lo, v);
        writeln!(s, r#"<line x1="{tx}" y1="{y0}" x2="{tx}" y2="{}" stroke="black"/>"#, y0 + 5.0).unwrap();
        writeln!(s, r#"<text x="{tx}" y="{}" font-size="11" text-anchor="middle">{label}</text>"#, y0 + 18.0).unwrap();
        writeln!(s, r#"<line x1="{}" y1="{ty}" x2="{x0}" y2="{ty}" stroke="black"/>"#, x0 - 5.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{label}</text>"#, x0 - 8.0, ty + 4.0)
            .unwrap();
    }
    let scale = if log { " (log)" } else { "" };
    writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{} time, ms{scale}</text>"#,
        SIZE / 2.0,
        SIZE - 15.0,
        escape(&c.y.solver)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="15" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {})">{} time, ms{scale}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0,
        escape(&c.x.solver)
    )
    .unwrap();
    for p in &c.points {
        let (px, py) = ax.to_px(p.y_ms, p.x_ms);
        let title = escape(&p.instance);
        if p.x_timeout || p.y_timeout {
            writeln!(s, r#"<circle class="timeout" cx="{px:.2}" cy="{py:.2}" r="4" fill="none" stroke="firebrick"><title>{title}</title></circle>"#).unwrap();
        } else {
            writeln!(s, r#"<circle class="point" cx="{px:.2}" cy="{py:.2}" r="3" fill="steelblue"><title>{title}</title></circle>"#).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
