//! Problems, their preconditioned formulations, and TNoI-based choice.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::formula::{Formula, Relation};
use crate::groebner::{buchberger_with_deadline, GroebnerBasis};
use crate::metrics::{tnoi, Admissible};
use crate::poly::{same_context, MonomialOrder, Polynomial, VarContext, Variable};
use crate::reduction::{reduce_formula, ReductionMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        })
    }
}

impl FromStr for Quantifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exists" | "E" => Ok(Quantifier::Exists),
            "forall" | "A" => Ok(Quantifier::Forall),
            _ => Err(Error::Invalid(format!("unknown quantifier `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    ctx: Arc<VarContext>,
    equations: Vec<Polynomial>,
    constraint: Formula,
    prefix: Vec<(Quantifier, Variable)>,
    order: MonomialOrder,
}

/// Maximal runs of equal quantifiers, innermost first.
fn quantifier_blocks(prefix: &[(Quantifier, Variable)]) -> Vec<Vec<Variable>> {
    let mut blocks: Vec<(Quantifier, Vec<Variable>)> = Vec::new();
    for &(q, v) in prefix {
        match blocks.last_mut() {
            Some((bq, vs)) if *bq == q => vs.push(v),
            _ => blocks.push((q, vec![v])),
        }
    }
    blocks.into_iter().rev().map(|(_, vs)| vs).collect()
}

impl Problem {
    /// Quantified variables must sit above the free ones in `order`, each
    /// quantifier block contiguous, innermost block highest.
    pub fn new(
        equations: Vec<Polynomial>,
        constraint: Formula,
        prefix: Vec<(Quantifier, Variable)>,
        order: MonomialOrder,
    ) -> Result<Self> {
        let ctx = order.context().clone();
        for p in equations.iter().chain(constraint.polynomials().iter()) {
            if !same_context(p.context(), &ctx) {
                return Err(Error::ContextMismatch);
            }
        }
        if equations.iter().any(Polynomial::is_zero) {
            return Err(Error::InvalidProblem("an equation is identically zero".into()));
        }
        let mut seen = vec![false; ctx.len()];
        for &(_, v) in &prefix {
            if v.index() >= ctx.len() {
                return Err(Error::InvalidProblem(format!("quantified variable {} out of range", v.index())));
            }
            if std::mem::replace(&mut seen[v.index()], true) {
                return Err(Error::InvalidProblem(format!(
                    "variable {} quantified twice",
                    ctx.name(v)
                )));
            }
        }
        let problem = Problem {
            ctx,
            equations,
            constraint,
            prefix,
            order,
        };
        if !problem.admissible()?.permits(&problem.order) {
            return Err(Error::InvalidProblem(
                "declared order does not keep quantifier blocks contiguous above the free variables".into(),
            ));
        }
        Ok(problem)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn constraint(&self) -> &Formula {
        &self.constraint
    }

    pub fn prefix(&self) -> &[(Quantifier, Variable)] {
        &self.prefix
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Orderings compatible with the quantifier structure.
    pub fn admissible(&self) -> Result<Admissible> {
        let mut blocks = quantifier_blocks(&self.prefix);
        let bound: Vec<Variable> = blocks.iter().flatten().copied().collect();
        blocks.push(self.ctx.variables().filter(|v| !bound.contains(v)).collect());
        Admissible::from_blocks(&self.ctx, blocks)
    }

    /// The same problem under another admissible order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Self> {
        Problem::new(self.equations.clone(), self.constraint.clone(), self.prefix.clone(), order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Original,
    GrC,
    GrR,
    GrCMainVar,
    GrCSecondaryVars,
    GrCAllVars,
}

impl Label {
    pub const ALL: [Label; 6] = [
        Label::Original,
        Label::GrC,
        Label::GrR,
        Label::GrCMainVar,
        Label::GrCSecondaryVars,
        Label::GrCAllVars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Label::Original => "Original",
            Label::GrC => "GrC",
            Label::GrR => "GrR",
            Label::GrCMainVar => "GrC+MainVar",
            Label::GrCSecondaryVars => "GrC+SecondaryVars",
            Label::GrCAllVars => "GrC+AllVars",
        }
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            Label::Original => None,
            Label::GrR => Some(Direction::Reverse),
            _ => Some(Direction::Compatible),
        }
    }

    pub fn reduction(self) -> Option<ReductionMode> {
        match self {
            Label::GrCMainVar => Some(ReductionMode::MainVar),
            Label::GrCSecondaryVars => Some(ReductionMode::SecondaryVars),
            Label::GrCAllVars => Some(ReductionMode::AllVars),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Label::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown formulation label `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Lex under the declared order.
    Compatible,
    /// Lex under the reversed precedence.
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formulation {
    pub label: Label,
    pub equations: Vec<Polynomial>,
    pub constraint: Formula,
    /// Order the decomposition is built under.
    pub order: MonomialOrder,
    pub tnoi: usize,
}

impl Formulation {
    fn new(label: Label, equations: Vec<Polynomial>, constraint: Formula, order: MonomialOrder) -> Self {
        let mut f = Formulation {
            label,
            equations,
            constraint,
            order,
            tnoi: 0,
        };
        f.tnoi = tnoi(&f.polynomials());
        f
    }

    /// Distinct equation and constraint polynomials.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for p in self.equations.iter().cloned().chain(self.constraint.polynomials()) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// Equations as `= 0` atoms conjoined with the constraint.
    pub fn formula(&self) -> Formula {
        let mut parts: Vec<Formula> = self
            .equations
            .iter()
            .map(|e| Formula::atom(e.clone(), Relation::Eq))
            .collect();
        parts.push(self.constraint.clone());
        Formula::and(parts)
    }
}

pub fn precondition_order(p: &Problem, direction: Direction) -> MonomialOrder {
    match direction {
        Direction::Compatible => p.order.clone(),
        Direction::Reverse => p.order.reversed(),
    }
}

/// Reduced lex Gröbner basis of the equations.
pub fn precondition_basis(p: &Problem, direction: Direction, deadline: Deadline) -> Result<GroebnerBasis> {
    if p.equations.is_empty() {
        return Err(Error::InvalidProblem("no equations to precondition".into()));
    }
    buchberger_with_deadline(&p.equations, &precondition_order(p, direction), deadline)
}

pub fn precondition_equalities(p: &Problem, direction: Direction) -> Result<Vec<Polynomial>> {
    Ok(precondition_basis(p, direction, Deadline::none())?.generators().to_vec())
}

pub fn original(p: &Problem) -> Formulation {
    Formulation::new(Label::Original, p.equations.clone(), p.constraint.clone(), p.order.clone())
}

/// Builds `label` from an already computed basis for its direction.
pub fn formulation_from_basis(p: &Problem, label: Label, basis: &GroebnerBasis) -> Result<Formulation> {
    let constraint = match label.reduction() {
        Some(mode) => reduce_formula(&p.constraint, basis, mode)?,
        None => p.constraint.clone(),
    };
    Ok(Formulation::new(label, basis.generators().to_vec(), constraint, p.order.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub label: Label,
    pub outcome: Result<Formulation>,
}

/// Original, and with equations GrC, GrR and the three GrC reductions.
pub fn enumerate_variants(p: &Problem) -> Vec<Variant> {
    enumerate_variants_with(p, Deadline::none())
}

pub fn enumerate_variants_with(p: &Problem, deadline: Deadline) -> Vec<Variant> {
    let mut out = vec![Variant {
        label: Label::Original,
        outcome: Ok(original(p)),
    }];
    if p.equations.is_empty() {
        return out;
    }
    let grc = precondition_basis(p, Direction::Compatible, deadline);
    let grr = precondition_basis(p, Direction::Reverse, deadline);
    for label in &Label::ALL[1..] {
        let basis = if *label == Label::GrR { &grr } else { &grc };
        let outcome = match basis {
            Ok(b) => formulation_from_basis(p, *label, b),
            Err(e) => Err(e.clone()),
        };
        out.push(Variant { label: *label, outcome });
    }
    out
}

/// Least TNoI; ties go to Original, then label order.
pub fn recommend(variants: &[Formulation]) -> Option<&Formulation> {
    variants.iter().min_by_key(|f| (f.tnoi, f.label))
}
