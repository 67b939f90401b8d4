//! Trajectory CSV writing and the lightweight row view used for plotting.

use std::io::{Read, Write};

use vet_core::{EventKind, RegionLabel, TrajectoryLog};

use crate::CliError;

const U_AXES: [&str; 6] = ["x", "y", "z", "phi", "theta", "psi"];
const S_AXES: [&str; 3] = ["x", "y", "psi"];

/// Column names in file order.
pub fn header() -> Vec<String> {
    let mut h: Vec<String> = [
        "t", "xU", "yU", "zU", "phiU", "thetaU", "psiU", "xS", "yS", "psiS",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for part in ["sub", "xi"] {
        h.extend(U_AXES.iter().map(|a| format!("uU_{part}_{a}")));
    }
    for part in ["sub", "xi"] {
        h.extend(S_AXES.iter().map(|a| format!("uS_{part}_{a}")));
    }
    h.extend(
        [
            "detectedUS",
            "detectedSU",
            "regionUS",
            "regionSU",
            "xiUS",
            "xiSU",
            "projDist",
            "eventFlags",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    h
}

fn region(r: Option<RegionLabel>) -> String {
    r.map(|r| r.as_str().to_string()).unwrap_or_else(|| "none".into())
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

pub fn write_log<W: Write>(log: &TrajectoryLog, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header())?;
    for r in &log.records {
        let u = &r.underwater;
        let s = &r.surface;
        let mut row: Vec<String> = [
            r.t,
            u.x,
            u.y,
            u.z,
            u.attitude.phi,
            u.attitude.theta,
            u.attitude.psi,
            s.x,
            s.y,
            s.psi,
        ]
        .iter()
        .chain(&r.u_subtask)
        .chain(&r.u_xi)
        .chain(&r.s_subtask)
        .chain(&r.s_xi)
        .map(f64::to_string)
        .collect();
        row.push(flag(r.obs_us.detected));
        row.push(flag(r.obs_su.detected));
        row.push(region(r.region_us));
        row.push(region(r.region_su));
        row.push(opt(r.xi_us));
        row.push(opt(r.xi_su));
        row.push(r.projected_distance.to_string());
        row.push(
            r.events
                .iter()
                .map(EventKind::token)
                .collect::<Vec<_>>()
                .join(";"),
        );
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// The subset of a trajectory row needed to draw figures.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: f64,
    pub xu: f64,
    pub yu: f64,
    pub xs: f64,
    pub ys: f64,
    pub u_sub: [f64; 6],
    pub u_xi: [f64; 6],
    pub s_sub: [f64; 3],
    pub s_xi: [f64; 3],
    pub xi_us: Option<f64>,
    pub xi_su: Option<f64>,
    pub dist: f64,
    pub events: Vec<String>,
}

struct Columns {
    idx: Vec<usize>,
}

impl Columns {
    fn new(found: &csv::StringRecord) -> Result<Self, CliError> {
        let idx = header()
            .iter()
            .map(|name| {
                found
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| CliError::Csv(format!("missing column `{name}`")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { idx })
    }

    fn get<'r>(&self, rec: &'r csv::StringRecord, col: usize) -> &'r str {
        rec.get(self.idx[col]).unwrap_or("")
    }

    fn num(&self, rec: &csv::StringRecord, col: usize, line: usize) -> Result<f64, CliError> {
        let raw = self.get(rec, col);
        raw.parse()
            .map_err(|_| CliError::Csv(format!("line {line}: bad number `{raw}` in column {}", header()[col])))
    }

    fn opt(&self, rec: &csv::StringRecord, col: usize, line: usize) -> Result<Option<f64>, CliError> {
        if self.get(rec, col).is_empty() {
            Ok(None)
        } else {
            self.num(rec, col, line).map(Some)
        }
    }
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<Row>, CliError> {
    let mut rdr = csv::Reader::from_reader(input);
    let cols = Columns::new(rdr.headers()?)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let n = |c| cols.num(&rec, c, line);
        let arr = |start: usize, out: &mut [f64]| -> Result<(), CliError> {
            for (k, v) in out.iter_mut().enumerate() {
                *v = cols.num(&rec, start + k, line)?;
            }
            Ok(())
        };
        let mut u_sub = [0.0; 6];
        let mut u_xi = [0.0; 6];
        let mut s_sub = [0.0; 3];
        let mut s_xi = [0.0; 3];
        arr(10, &mut u_sub)?;
        arr(16, &mut u_xi)?;
        arr(22, &mut s_sub)?;
        arr(25, &mut s_xi)?;
        let flags = cols.get(&rec, 35);
        rows.push(Row {
            t: n(0)?,
            xu: n(1)?,
            yu: n(2)?,
            xs: n(7)?,
            ys: n(8)?,
            u_sub,
            u_xi,
            s_sub,
            s_xi,
            xi_us: cols.opt(&rec, 32, line)?,
            xi_su: cols.opt(&rec, 33, line)?,
            dist: n(34)?,
            events: flags
                .split(';')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect(),
        });
    }
    Ok(rows)
}
