//! CSV records and the TNoI/time correlation analysis.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use super::experiment::{sort_records, ExperimentRecord, Status};
use crate::error::{Error, Result};
use crate::metrics::pearson;
use crate::pipeline::Label;

pub const CSV_HEADER: [&str; 10] = [
    "problem", "label", "order", "status", "gb_ms", "reduce_ms", "cad_ms", "total_ms", "cells", "tnoi",
];

/// Runs longer than this count as censored.
pub const TIME_LIMIT_MS: f64 = 1_000_000.0;
pub const CENSORED_TIME_MS: f64 = 10_000_000.0;
pub const CENSORED_CELLS: f64 = 100_000.0;
/// Times are floored here before taking logarithms.
pub const TIME_FLOOR_MS: f64 = 1e-3;

pub const CENSORING_RULES: [&str; 3] = [
    "time: status timeout or total_ms > 1000000 -> 10000000 ms",
    "cells: unknown (status not ok) -> 100000",
    "time: total_ms below 0.001 -> 0.001 ms (logarithm guard)",
];

/// `v` with six significant digits, trailing zeros trimmed.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    let s = if (-5..15).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, v)
    } else {
        format!("{:.5e}", v)
    };
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes records sorted by problem and label.
pub fn emit_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &sorted {
        w.write_record([
            r.problem.clone(),
            r.label.to_string(),
            r.order.clone(),
            r.status.to_string(),
            format_sig(r.gb_ms),
            format_sig(r.reduce_ms),
            format_sig(r.cad_ms),
            format_sig(r.total_ms()),
            r.cells.map(|c| c.to_string()).unwrap_or_default(),
            r.tnoi.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    emit_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Invalid(format!("unexpected csv header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| Error::Invalid(format!("bad number `{s}`"))) };
    let opt = |s: &str| -> Result<Option<u64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| Error::Invalid(format!("bad count `{s}`")))
        }
    };
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err)?;
        let f = |i: usize| row.get(i).unwrap_or("");
        out.push(ExperimentRecord {
            problem: f(0).to_string(),
            label: f(1).parse()?,
            order: f(2).to_string(),
            status: f(3).parse()?,
            gb_ms: num(f(4))?,
            reduce_ms: num(f(5))?,
            cad_ms: num(f(6))?,
            cells: opt(f(8))?,
            tnoi: opt(f(9))?.map(|t| t as usize),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    pub problem: String,
    pub label: Label,
    pub field: &'static str,
    pub original: Option<f64>,
    pub replaced_by: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationPoint {
    pub problem: String,
    /// `log TNoI(S) - log TNoI(G)`.
    pub x: f64,
    pub y_time: f64,
    pub y_cells: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub baseline: Label,
    pub against: Label,
    pub pairs: usize,
    pub r_time: f64,
    pub r_cells: f64,
    pub rules: Vec<String>,
    pub substitutions: Vec<Substitution>,
    pub points: Vec<CorrelationPoint>,
}

fn censored_time(r: &ExperimentRecord, subs: &mut Vec<Substitution>) -> f64 {
    let t = r.total_ms();
    let (value, field) = if r.status == Status::Timeout || t > TIME_LIMIT_MS {
        (CENSORED_TIME_MS, "time")
    } else if t < TIME_FLOOR_MS {
        (TIME_FLOOR_MS, "time_floor")
    } else {
        return t;
    };
    subs.push(Substitution {
        problem: r.problem.clone(),
        label: r.label,
        field,
        original: Some(t),
        replaced_by: value,
    });
    value
}

fn censored_cells(r: &ExperimentRecord, subs: &mut Vec<Substitution>) -> f64 {
    match (r.status, r.cells) {
        (Status::Ok, Some(c)) => c as f64,
        _ => {
            subs.push(Substitution {
                problem: r.problem.clone(),
                label: r.label,
                field: "cells",
                original: r.cells.map(|c| c as f64),
                replaced_by: CENSORED_CELLS,
            });
            CENSORED_CELLS
        }
    }
}

/// Correlates the TNoI change with the time and cell-count changes between
/// Original and `against` across problems.
pub fn correlation_analysis(records: &[ExperimentRecord], against: Label) -> Result<CorrelationReport> {
    let mut by_problem: BTreeMap<&str, (Option<&ExperimentRecord>, Option<&ExperimentRecord>)> = BTreeMap::new();
    for r in records {
        let slot = by_problem.entry(&r.problem).or_default();
        if r.label == Label::Original {
            slot.0 = Some(r);
        } else if r.label == against {
            slot.1 = Some(r);
        }
    }
    let mut substitutions = Vec::new();
    let mut points = Vec::new();
    for (problem, pair) in by_problem {
        let (Some(s), Some(g)) = pair else { continue };
        let (Some(ts), Some(tg)) = (s.tnoi, g.tnoi) else { continue };
        if ts == 0 || tg == 0 {
            continue;
        }
        let x = (ts as f64).ln() - (tg as f64).ln();
        let y_time = censored_time(s, &mut substitutions).ln() - censored_time(g, &mut substitutions).ln();
        let y_cells = censored_cells(s, &mut substitutions).ln() - censored_cells(g, &mut substitutions).ln();
        points.push(CorrelationPoint {
            problem: problem.to_string(),
            x,
            y_time,
            y_cells,
        });
    }
    if points.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!("{} usable problem pairs, need 2", points.len())));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let yt: Vec<f64> = points.iter().map(|p| p.y_time).collect();
    let yc: Vec<f64> = points.iter().map(|p| p.y_cells).collect();
    Ok(CorrelationReport {
        baseline: Label::Original,
        against,
        pairs: points.len(),
        r_time: pearson(&xs, &yt)?,
        r_cells: pearson(&xs, &yc)?,
        rules: CENSORING_RULES.iter().map(|s| s.to_string()).collect(),
        substitutions,
        points,
    })
}

impl fmt::Display for CorrelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pairs: {} ({} vs {})", self.pairs, self.baseline, self.against)?;
        writeln!(f, "r_time: {}", format_sig(self.r_time))?;
        writeln!(f, "r_cells: {}", format_sig(self.r_cells))?;
        for r in &self.rules {
            writeln!(f, "rule: {r}")?;
        }
        for s in &self.substitutions {
            let orig = s.original.map(format_sig).unwrap_or_else(|| "unknown".into());
            writeln!(
                f,
                "substituted: {} {} {} {} -> {}",
                s.problem,
                s.label,
                s.field,
                orig,
                format_sig(s.replaced_by)
            )?;
        }
        Ok(())
    }
}

/// Report as `key,value` rows.
pub fn emit_report_csv<W: Write>(report: &CorrelationReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["key", "value"]).map_err(csv_err)?;
    let mut row = |k: &str, v: String| w.write_record([k, v.as_str()]).map_err(csv_err);
    row("baseline", report.baseline.to_string())?;
    row("against", report.against.to_string())?;
    row("pairs", report.pairs.to_string())?;
    row("r_time", format_sig(report.r_time))?;
    row("r_cells", format_sig(report.r_cells))?;
    for r in &report.rules {
        row("rule", r.clone())?;
    }
    for s in &report.substitutions {
        let orig = s.original.map(format_sig).unwrap_or_else(|| "unknown".into());
        row(
            "substitution",
            format!("{} {} {} {} -> {}", s.problem, s.label, s.field, orig, format_sig(s.replaced_by)),
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(problem: &str, label: Label, status: Status, ms: f64, cells: Option<u64>, tnoi: usize) -> ExperimentRecord {
        ExperimentRecord {
            problem: problem.into(),
            label,
            order: "x>y".into(),
            status,
            gb_ms: 0.0,
            reduce_ms: 0.0,
            cad_ms: ms,
            cells,
            tnoi: Some(tnoi),
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1234.5678), "1234.57");
        assert_eq!(format_sig(0.000123456789), "0.000123457");
        assert_eq!(format_sig(2.5), "2.5");
        assert_eq!(format_sig(10_000_000.0), "10000000");
        assert_eq!(format_sig(1e20), "1.00000e20");
    }

    #[test]
    fn csv_shapes_and_round_trip() {
        assert_eq!(records_to_csv(&[]).lines().count(), 1);
        let r = rec("p", Label::GrC, Status::Ok, 12.0, Some(13), 4);
        let text = records_to_csv(std::slice::from_ref(&r));
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        let t = rec("p", Label::Original, Status::Timeout, 5.0, None, 8);
        let both = records_to_csv(&[r.clone(), t.clone()]);
        assert_eq!(both, records_to_csv(&[t.clone(), r.clone()]));
        let back = parse_csv(both.as_bytes()).unwrap();
        assert!(back[0].same_outcome(&t) && back[1].same_outcome(&r));
    }

    #[test]
    fn correlation_with_censoring() {
        // Y = 2X: time ratios are the squares of the TNoI ratios.
        let recs = vec![
            rec("a", Label::Original, Status::Ok, 400.0, Some(10), 8),
            rec("a", Label::GrC, Status::Ok, 100.0, Some(5), 4),
            rec("b", Label::Original, Status::Ok, 900.0, Some(10), 9),
            rec("b", Label::GrC, Status::Ok, 100.0, Some(4), 3),
            rec("c", Label::Original, Status::Ok, 100.0, Some(10), 5),
            rec("c", Label::GrC, Status::Ok, 100.0, Some(7), 5),
        ];
        let rep = correlation_analysis(&recs, Label::GrC).unwrap();
        assert_eq!(rep.pairs, 3);
        assert!((rep.r_time - 1.0).abs() < 1e-12);
        assert!(rep.substitutions.is_empty());

        let mut censored = recs.clone();
        censored[0] = rec("a", Label::Original, Status::Timeout, 50.0, None, 8);
        let rep = correlation_analysis(&censored, Label::GrC).unwrap();
        let fields: Vec<(&str, f64)> = rep.substitutions.iter().map(|s| (s.field, s.replaced_by)).collect();
        assert_eq!(fields, vec![("time", 10_000_000.0), ("cells", 100_000.0)]);
        assert_eq!(rep.rules.len(), 3);

        let same = vec![
            rec("a", Label::Original, Status::Ok, 200.0, Some(10), 8),
            rec("a", Label::GrC, Status::Ok, 100.0, Some(5), 4),
            rec("b", Label::Original, Status::Ok, 200.0, Some(10), 8),
            rec("b", Label::GrC, Status::Ok, 100.0, Some(5), 4),
        ];
        assert!(matches!(correlation_analysis(&same, Label::GrC), Err(Error::UndefinedCorrelation(_))));
        assert!(correlation_analysis(&same[..2], Label::GrC).is_err());
    }
}
