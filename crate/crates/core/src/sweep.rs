//! Parameter sweeps and their CSV form.
//!
//! Rows are sorted by (protocol, N, C, γ/κ, Tg, δ, Δ) before writing, so the
//! output does not depend on evaluation order or thread count.

use std::cmp::Ordering;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quantum::fidelity::average_gate_fidelity;
use crate::quantum::params::SystemParams;
use crate::registry::{protocols, GateRequest};

pub const CSV_COLUMNS: [&str; 9] = [
    "protocol",
    "N",
    "C",
    "gamma_over_kappa",
    "Tg",
    "delta",
    "Delta",
    "infidelity_analytic",
    "infidelity_simulated",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub protocol: String,
    pub n_qubits: usize,
    pub cooperativity: f64,
    pub gamma_over_kappa: f64,
    pub duration: Option<f64>,
    pub delta: Option<f64>,
    pub big_delta: Option<f64>,
    pub infidelity_analytic: Option<f64>,
    pub infidelity_simulated: Option<f64>,
}

impl SweepRow {
    pub fn new(protocol: &str, n_qubits: usize, cooperativity: f64, gamma_over_kappa: f64) -> Self {
        Self {
            protocol: protocol.to_string(),
            n_qubits,
            cooperativity,
            gamma_over_kappa,
            duration: None,
            delta: None,
            big_delta: None,
            infidelity_analytic: None,
            infidelity_simulated: None,
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        fn opt(a: Option<f64>, b: Option<f64>) -> Ordering {
            match (a, b) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(x), Some(y)) => x.total_cmp(&y),
            }
        }
        self.protocol
            .cmp(&other.protocol)
            .then(self.n_qubits.cmp(&other.n_qubits))
            .then(self.cooperativity.total_cmp(&other.cooperativity))
            .then(self.gamma_over_kappa.total_cmp(&other.gamma_over_kappa))
            .then(opt(self.duration, other.duration))
            .then(opt(self.delta, other.delta))
            .then(opt(self.big_delta, other.big_delta))
    }
}

pub fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| a.key_cmp(b));
}

/// 17 significant digits; round-trips every f64.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> crate::error::Error {
    invalid(format!("csv: {e}"))
}

/// Writes the header and the sorted rows.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut rows = rows.to_vec();
    sort_rows(&mut rows);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for r in &rows {
        w.write_record([
            r.protocol.clone(),
            r.n_qubits.to_string(),
            fmt_float(r.cooperativity),
            fmt_float(r.gamma_over_kappa),
            fmt_opt(r.duration),
            fmt_opt(r.delta),
            fmt_opt(r.big_delta),
            fmt_opt(r.infidelity_analytic),
            fmt_opt(r.infidelity_simulated),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_error)?.clone();
    if header.iter().ne(CSV_COLUMNS) {
        return Err(invalid(format!("unexpected CSV header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let num = |s: &str| -> Result<f64> { s.parse::<f64>().map_err(|e| invalid(format!("bad number `{s}`: {e}"))) };
    let opt = |s: &str| -> Result<Option<f64>> { if s.is_empty() { Ok(None) } else { num(s).map(Some) } };
    let mut rows = Vec::new();
    for rec in r.records() {
        let f = rec.map_err(csv_error)?;
        rows.push(SweepRow {
            protocol: f[0].to_string(),
            n_qubits: f[1].parse().map_err(|e| invalid(format!("bad N `{}`: {e}", &f[1])))?,
            cooperativity: num(&f[2])?,
            gamma_over_kappa: num(&f[3])?,
            duration: opt(&f[4])?,
            delta: opt(&f[5])?,
            big_delta: opt(&f[6])?,
            infidelity_analytic: opt(&f[7])?,
            infidelity_simulated: opt(&f[8])?,
        });
    }
    Ok(rows)
}

/// Cartesian sweep over durations, cooperativities and γ/κ for one protocol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub protocol: String,
    #[serde(default = "two")]
    pub n_qubits: usize,
    #[serde(default)]
    pub theta: Option<f64>,
    pub durations: Vec<f64>,
    pub cooperativities: Vec<f64>,
    pub gamma_over_kappa: Vec<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub big_delta: Option<f64>,
    /// Also run the full master-equation model at each point.
    #[serde(default)]
    pub simulate: bool,
}

fn two() -> usize {
    2
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        protocols().get(&self.protocol)?;
        if self.durations.is_empty() || self.cooperativities.is_empty() || self.gamma_over_kappa.is_empty() {
            return Err(invalid("sweep axes must be non-empty"));
        }
        let positive = |v: &[f64]| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if !positive(&self.durations) || !positive(&self.cooperativities) || !positive(&self.gamma_over_kappa) {
            return Err(invalid("sweep axis values must be positive and finite"));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut v = Vec::new();
        for &c in &self.cooperativities {
            for &r in &self.gamma_over_kappa {
                for &t in &self.durations {
                    v.push((c, r, t));
                }
            }
        }
        v
    }
}

/// One sweep point. Failures of the full model leave the simulated column
/// empty; analytic failures are propagated.
pub fn evaluate_point(spec: &SweepSpec, cooperativity: f64, gamma_over_kappa: f64, duration: f64) -> Result<SweepRow> {
    let proto = protocols().get(&spec.protocol)?;
    let params = SystemParams::new(spec.n_qubits).with_cooperativity(cooperativity, gamma_over_kappa);
    let req = GateRequest {
        n_qubits: spec.n_qubits,
        theta: spec.theta,
        target: None,
        duration: Some(duration),
        delta: spec.delta,
        big_delta: None,
    };
    let model = proto.model(&req, &params)?;
    let mut row = SweepRow::new(proto.name(), spec.n_qubits, cooperativity, gamma_over_kappa);
    row.duration = Some(duration);
    row.delta = model.delta;
    row.big_delta = model.big_delta;
    row.infidelity_analytic = Some(1.0 - average_gate_fidelity(&model.channel, &model.target)?);
    if spec.simulate {
        let sim_req = GateRequest {
            delta: model.delta,
            big_delta: spec.big_delta.or(if proto.name() == "B" { model.big_delta } else { None }),
            ..req
        };
        if let Ok(s) = proto.simulate(&sim_req, &params) {
            row.big_delta = Some(s.big_delta);
            row.infidelity_simulated = Some(s.infidelity);
        }
    }
    Ok(row)
}

/// Evaluates every point on the rayon pool and returns the rows in
/// canonical order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let rows: Result<Vec<SweepRow>> = spec
        .points()
        .into_par_iter()
        .map(|(c, r, t)| evaluate_point(spec, c, r, t))
        .collect();
    let mut rows = rows?;
    sort_rows(&mut rows);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: &str, n: usize, t: Option<f64>) -> SweepRow {
        SweepRow {
            duration: t,
            infidelity_analytic: Some(0.1 + n as f64 / 3.0),
            ..SweepRow::new(p, n, 1e3, 0.3)
        }
    }

    #[test]
    fn header_and_empty_fields() {
        let s = to_csv_string(&[row("A", 2, None)]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "protocol,N,C,gamma_over_kappa,Tg,delta,Delta,infidelity_analytic,infidelity_simulated");
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[4], "");
        assert_eq!(fields[8], "");
        assert_eq!(fields[2], "1.0000000000000000e3");
    }

    #[test]
    fn rows_are_sorted_canonically() {
        let rows = vec![row("baseline", 3, None), row("B", 2, Some(5.0)), row("A", 3, Some(1.0)), row("A", 2, Some(7.0)), row("A", 2, None)];
        let back = read_csv(to_csv_string(&rows).unwrap().as_bytes()).unwrap();
        let keys: Vec<(String, usize, Option<f64>)> = back.iter().map(|r| (r.protocol.clone(), r.n_qubits, r.duration)).collect();
        assert_eq!(
            keys,
            vec![
                ("A".into(), 2, None),
                ("A".into(), 2, Some(7.0)),
                ("A".into(), 3, Some(1.0)),
                ("B".into(), 2, Some(5.0)),
                ("baseline".into(), 3, None)
            ]
        );
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_csv("a,b\n".as_bytes()).is_err());
    }

    #[test]
    fn spec_validation() {
        let spec = SweepSpec {
            protocol: "A".into(),
            n_qubits: 2,
            theta: None,
            durations: vec![],
            cooperativities: vec![1e3],
            gamma_over_kappa: vec![1.0],
            delta: None,
            big_delta: None,
            simulate: false,
        };
        assert!(spec.validate().is_err());
        let bad = SweepSpec {
            protocol: "Z".into(),
            durations: vec![10.0],
            ..spec.clone()
        };
        assert!(bad.validate().is_err());
    }
}
