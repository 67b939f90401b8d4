//! Hand-written SVG 1.1 figures. Output depends only on the input rows, so
//! the same CSV always produces the same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::csvio::Row;
use crate::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    TrajectoryXy,
    DistanceVsTime,
    VelocityVsTime,
    TetherStateVsTime,
}

impl PlotKind {
    pub const ALL: [PlotKind; 4] = [
        PlotKind::TrajectoryXy,
        PlotKind::DistanceVsTime,
        PlotKind::VelocityVsTime,
        PlotKind::TetherStateVsTime,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PlotKind::TrajectoryXy => "trajectory_xy",
            PlotKind::DistanceVsTime => "distance_vs_time",
            PlotKind::VelocityVsTime => "velocity_vs_time",
            PlotKind::TetherStateVsTime => "tether_state_vs_time",
        }
    }
}

impl FromStr for PlotKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown plot kind `{s}`")))
    }
}

/// A polyline; `None` entries break the line.
pub struct Series {
    pub label: String,
    pub points: Vec<Option<(f64, f64)>>,
}

/// Shaded interval along the x axis.
pub struct Band {
    pub from: f64,
    pub to: f64,
    pub fill: &'static str,
    pub label: &'static str,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub bands: Vec<Band>,
    pub hlines: Vec<(f64, &'static str)>,
    pub equal_aspect: bool,
}

fn extent(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.filter(|v| v.is_finite()).fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

fn pad((lo, hi): (f64, f64)) -> (f64, f64) {
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        let m = 0.05 * (hi - lo);
        (lo - m, hi + m)
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            bands: Vec::new(),
            hlines: Vec::new(),
            equal_aspect: false,
        }
    }

    fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        let pts = || self.series.iter().flat_map(|s| s.points.iter().flatten());
        let xs = extent(pts().map(|p| p.0)).unwrap_or((0.0, 1.0));
        let ys = extent(pts().map(|p| p.1).chain(self.hlines.iter().map(|h| h.0)))
            .unwrap_or((0.0, 1.0));
        let (mut xr, mut yr) = (pad(xs), pad(ys));
        if self.equal_aspect {
            let pw = WIDTH - LEFT - RIGHT;
            let ph = HEIGHT - TOP - BOTTOM;
            let scale = ((xr.1 - xr.0) / pw).max((yr.1 - yr.0) / ph);
            let grow = |(lo, hi): (f64, f64), span: f64| {
                let c = 0.5 * (lo + hi);
                (c - 0.5 * span, c + 0.5 * span)
            };
            xr = grow(xr, scale * pw);
            yr = grow(yr, scale * ph);
        }
        (xr, yr)
    }

    pub fn render(&self) -> String {
        let ((x0, x1), (y0, y1)) = self.ranges();
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            esc(&self.title)
        );

        for b in &self.bands {
            let a = sx(b.from.max(x0));
            let z = sx(b.to.min(x1));
            if z > a {
                let _ = writeln!(
                    s,
                    r#"<rect x="{a:.2}" y="{TOP:.2}" width="{:.2}" height="{ph:.2}" fill="{}" fill-opacity="0.35"><title>{}</title></rect>"#,
                    z - a,
                    b.fill,
                    b.label
                );
            }
        }

        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{TOP:.2}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
                TOP + ph
            );
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
                LEFT + pw
            );
            let _ = writeln!(
                s,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.2}</text>"#,
                TOP + ph + 18.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.2}</text>"#,
                LEFT - 6.0,
                py + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            esc(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            esc(&self.y_label)
        );

        for (y, colour) in &self.hlines {
            let py = sy(*y);
            let _ = writeln!(
                s,
                r#"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="{colour}" stroke-dasharray="6 4"/>"#,
                LEFT + pw
            );
        }

        for (i, series) in self.series.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let mut d = String::new();
            let mut pen_down = false;
            for p in &series.points {
                match p {
                    Some((x, y)) if x.is_finite() && y.is_finite() => {
                        let cmd = if pen_down { 'L' } else { 'M' };
                        let _ = write!(d, "{cmd}{:.2} {:.2} ", sx(*x), sy(*y));
                        pen_down = true;
                    }
                    _ => pen_down = false,
                }
            }
            if !d.is_empty() {
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#,
                    d.trim_end()
                );
            }
            let ly = TOP + 14.0 + 18.0 * i as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/>"#,
                lx + 20.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 26.0,
                ly + 4.0,
                esc(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Intervals between matching start/end flags; an open start runs to the
/// final row.
pub fn bands(rows: &[Row]) -> Vec<Band> {
    let kinds: [(&str, &str, &str, &str); 2] = [
        ("perturbation_start", "perturbation_end", "#ffd700", "perturbation"),
        ("dropout_start", "dropout_end", "#a0a0a0", "dropout"),
    ];
    let t_end = rows.last().map(|r| r.t).unwrap_or(0.0);
    let mut out = Vec::new();
    for (start, end, fill, label) in kinds {
        let mut open: Option<f64> = None;
        for r in rows {
            for e in &r.events {
                if e == start && open.is_none() {
                    open = Some(r.t);
                } else if e == end {
                    if let Some(from) = open.take() {
                        out.push(Band { from, to: r.t, fill, label });
                    }
                }
            }
        }
        if let Some(from) = open {
            out.push(Band { from, to: t_end, fill, label });
        }
    }
    out
}

fn series(label: &str, rows: &[Row], f: impl Fn(&Row) -> Option<(f64, f64)>) -> Series {
    Series {
        label: label.into(),
        points: rows.iter().map(f).collect(),
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn chart(kind: PlotKind, rows: &[Row], threshold: Option<f64>) -> Chart {
    match kind {
        PlotKind::TrajectoryXy => {
            let mut c = Chart::new("Projected trajectories", "x [m]", "y [m]");
            c.equal_aspect = true;
            c.series.push(series("underwater", rows, |r| Some((r.xu, r.yu))));
            c.series.push(series("surface", rows, |r| Some((r.xs, r.ys))));
            c
        }
        PlotKind::DistanceVsTime => {
            let mut c = Chart::new("Projected distance", "t [s]", "distance [m]");
            c.series.push(series("distance", rows, |r| Some((r.t, r.dist))));
            c.bands = bands(rows);
            if let Some(th) = threshold {
                c.hlines.push((th, "#d62728"));
            }
            c
        }
        PlotKind::VelocityVsTime => {
            let mut c = Chart::new("Commanded velocity", "t [s]", "command");
            c.series.push(series("U subtask |x,y,z|", rows, |r| Some((r.t, norm(&r.u_sub[..3])))));
            c.series.push(series("U tether |x,y|", rows, |r| Some((r.t, norm(&r.u_xi[..2])))));
            c.series.push(series("U tether psi", rows, |r| Some((r.t, r.u_xi[5]))));
            c.series.push(series("S subtask |x,y|", rows, |r| Some((r.t, norm(&r.s_sub[..2])))));
            c.series.push(series("S tether |x,y|", rows, |r| Some((r.t, norm(&r.s_xi[..2])))));
            c.bands = bands(rows);
            c
        }
        PlotKind::TetherStateVsTime => {
            let mut c = Chart::new("Tether state", "t [s]", "xi [px]");
            c.series.push(series("xi US", rows, |r| r.xi_us.map(|x| (r.t, x))));
            c.series.push(series("xi SU", rows, |r| r.xi_su.map(|x| (r.t, x))));
            c.bands = bands(rows);
            c
        }
    }
}

/// Distance traces of two runs on shared axes.
pub fn compare_distance(vet: &[Row], baseline: &[Row], threshold: f64) -> Chart {
    let mut c = Chart::new("Projected distance: VET vs baseline", "t [s]", "distance [m]");
    c.series.push(series("VET", vet, |r| Some((r.t, r.dist))));
    c.series.push(series("baseline", baseline, |r| Some((r.t, r.dist))));
    c.bands = bands(vet);
    c.hlines.push((threshold, "#d62728"));
    c
}
