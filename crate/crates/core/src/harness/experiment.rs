//! Timed runs of formulations through preconditioning and CAD.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cad::{build_cad_with, CadConfig};
use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::pipeline::{formulation_from_basis, original, precondition_basis, Label, Problem};
use crate::poly::MonomialOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Timeout,
    PrecisionExhausted,
    NotWellOriented,
    /// Any other computation error.
    Failed,
}

impl Status {
    pub const ALL: [Status; 5] = [
        Status::Ok,
        Status::Timeout,
        Status::PrecisionExhausted,
        Status::NotWellOriented,
        Status::Failed,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::PrecisionExhausted => "precision_exhausted",
            Status::NotWellOriented => "not_well_oriented",
            Status::Failed => "failed",
        }
    }

    pub fn of(e: &Error) -> Status {
        match e {
            Error::Timeout { .. } => Status::Timeout,
            Error::PrecisionExhausted { .. } => Status::PrecisionExhausted,
            Error::NotWellOriented { .. } => Status::NotWellOriented,
            _ => Status::Failed,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Status::ALL
            .into_iter()
            .find(|st| st.slug() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown status `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub problem: String,
    pub label: Label,
    /// Precedence, highest first, joined by `>`.
    pub order: String,
    pub status: Status,
    pub gb_ms: f64,
    pub reduce_ms: f64,
    pub cad_ms: f64,
    /// Leaf count; `None` unless the status is ok.
    pub cells: Option<u64>,
    /// `None` when no formulation was produced.
    pub tnoi: Option<usize>,
}

impl ExperimentRecord {
    pub fn total_ms(&self) -> f64 {
        self.gb_ms + self.reduce_ms + self.cad_ms
    }

    /// Equality of everything except the timings.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.problem == other.problem
            && self.label == other.label
            && self.order == other.order
            && self.status == other.status
            && self.cells == other.cells
            && self.tnoi == other.tnoi
    }
}

pub fn order_string(ord: &MonomialOrder) -> String {
    let ctx = ord.context();
    ord.precedence().iter().map(|&v| ctx.name(v)).collect::<Vec<_>>().join(">")
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1e3
}

fn run_one(id: &str, p: &Problem, label: Label, budget: Duration, cad: &CadConfig) -> ExperimentRecord {
    let deadline = Deadline::after(budget);
    let mut rec = ExperimentRecord {
        problem: id.to_string(),
        label,
        order: order_string(p.order()),
        status: Status::Ok,
        gb_ms: 0.0,
        reduce_ms: 0.0,
        cad_ms: 0.0,
        cells: None,
        tnoi: None,
    };

    let basis = match label.direction() {
        None => None,
        Some(dir) => {
            let t = Instant::now();
            let b = precondition_basis(p, dir, deadline);
            rec.gb_ms = ms(t);
            match b {
                Ok(b) => Some(b),
                Err(e) => {
                    rec.status = Status::of(&e);
                    return rec;
                }
            }
        }
    };

    let t = Instant::now();
    let formulation = match &basis {
        None => Ok(original(p)),
        Some(b) => formulation_from_basis(p, label, b),
    };
    rec.reduce_ms = ms(t);
    let formulation = match formulation.and_then(|f| deadline.check("reduction").map(|_| f)) {
        Ok(f) => f,
        Err(e) => {
            rec.status = Status::of(&e);
            return rec;
        }
    };
    rec.tnoi = Some(formulation.tnoi);

    let config = CadConfig { deadline, ..*cad };
    let t = Instant::now();
    let tree = build_cad_with(&formulation.polynomials(), &formulation.order, &config);
    rec.cad_ms = ms(t);
    match tree {
        Ok(tree) => rec.cells = Some(tree.cell_count() as u64),
        Err(e) => rec.status = Status::of(&e),
    }
    rec
}

/// Runs each applicable label with its own `budget`. Labels needing
/// equations are skipped when the problem has none.
pub fn run_experiment(
    id: &str,
    problem: &Problem,
    labels: &[Label],
    budget: Duration,
    cad: &CadConfig,
) -> Result<Vec<ExperimentRecord>> {
    if budget.is_zero() {
        return Err(Error::Invalid("time budget must be positive".into()));
    }
    let labels: Vec<Label> = labels
        .iter()
        .copied()
        .filter(|l| l.direction().is_none() || !problem.equations().is_empty())
        .collect();
    Ok(labels
        .par_iter()
        .map(|&l| run_one(id, problem, l, budget, cad))
        .collect())
}

/// Sorts by problem id, then label.
pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| (&a.problem, a.label, &a.order).cmp(&(&b.problem, b.label, &b.order)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus;

    #[test]
    fn circle_record() {
        let p = corpus::load("circle").unwrap().unwrap();
        let recs = run_experiment("circle", &p, &Label::ALL, Duration::from_secs(30), &CadConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].status, Status::Ok);
        assert_eq!(recs[0].cells, Some(13));
        assert_eq!(recs[0].order, "x>y");
    }

    #[test]
    fn tiny_budget_times_out() {
        let p = corpus::load("solotareff-a").unwrap().unwrap();
        let recs = run_experiment("solotareff-a", &p, &[Label::GrC], Duration::from_micros(1), &CadConfig::default())
            .unwrap();
        assert_eq!(recs[0].status, Status::Timeout);
        assert_eq!(recs[0].cells, None);
        assert!(run_experiment("x", &p, &[Label::GrC], Duration::ZERO, &CadConfig::default()).is_err());
    }
}
