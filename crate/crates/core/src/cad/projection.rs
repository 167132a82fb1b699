//! Projection phase: level normalization and the projection operators.

use std::fmt;
use std::str::FromStr;

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Polynomial, Variable};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ProjectionOperator {
    /// Coefficients, discriminants and pairwise resultants.
    #[default]
    McCallum,
    /// Leading coefficients and principal subresultant coefficients of all
    /// reducta (Hong's refinement of Collins).
    Collins,
}

impl fmt::Display for ProjectionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionOperator::McCallum => "mccallum",
            ProjectionOperator::Collins => "collins",
        })
    }
}

impl FromStr for ProjectionOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mccallum" => Ok(ProjectionOperator::McCallum),
            "collins" | "hong" => Ok(ProjectionOperator::Collins),
            _ => Err(Error::Invalid(format!("unknown projection operator `{s}`"))),
        }
    }
}

/// Projection sets `[A_n, ..., A_1]`; `A_i` holds the polynomials whose
/// highest-precedence variable is the `i`-th lowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionSet {
    levels: Vec<Vec<Polynomial>>,
    order: MonomialOrder,
}

impl ProjectionSet {
    /// Levels from the highest-precedence variable down.
    pub fn levels(&self) -> &[Vec<Polynomial>] {
        &self.levels
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Level whose main variable is `order.precedence()[i]`.
    pub fn level(&self, i: usize) -> &[Polynomial] {
        &self.levels[i]
    }

    pub fn dimension(&self) -> usize {
        self.levels.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polynomial> {
        self.levels.iter().flatten()
    }
}

/// Drops constants, takes squarefree parts of primitive parts and refines
/// the result into a pairwise coprime basis, normalized and sorted.
pub fn prepare_level(polys: &[Polynomial]) -> Vec<Polynomial> {
    let mut pending: Vec<Polynomial> = polys
        .iter()
        .filter(|p| !p.is_constant())
        .map(|p| p.primitive_normalized().squarefree_part())
        .collect();
    pending.reverse();
    let mut basis: Vec<Polynomial> = Vec::new();
    while let Some(q) = pending.pop() {
        let q = q.primitive_normalized();
        if q.is_constant() || basis.contains(&q) {
            continue;
        }
        let hit = basis.iter().enumerate().find_map(|(i, b)| {
            let g = b.gcd(&q);
            (!g.is_constant()).then_some((i, g))
        });
        match hit {
            Some((i, g)) => {
                let b = basis.remove(i);
                let bg = b.div_exact(&g).expect("gcd divides");
                let qg = q.div_exact(&g).expect("gcd divides");
                pending.extend([qg, bg, g]);
            }
            None => basis.push(q),
        }
    }
    basis.sort();
    basis
}

fn check_nonzero(polys: &[Polynomial]) -> Result<()> {
    if polys.iter().any(Polynomial::is_zero) {
        return Err(Error::ZeroPolynomial("projection"));
    }
    Ok(())
}

/// One projection step eliminating `v`; polynomials free of `v` pass down.
pub fn project_once(polys: &[Polynomial], v: Variable) -> Result<Vec<Polynomial>> {
    project_once_with(polys, v, ProjectionOperator::McCallum, Deadline::none())
}

pub fn project_once_with(
    polys: &[Polynomial],
    v: Variable,
    op: ProjectionOperator,
    deadline: Deadline,
) -> Result<Vec<Polynomial>> {
    check_nonzero(polys)?;
    let mut out: Vec<Polynomial> = Vec::new();
    let mut prim: Vec<Polynomial> = Vec::new();
    for p in prepare_level(polys) {
        if !p.contains_var(v) {
            out.push(p);
            continue;
        }
        let c = p.content_in(v);
        if !c.is_constant() {
            out.push(c);
        }
        prim.push(p.primitive_part_in(v));
    }
    match op {
        ProjectionOperator::McCallum => mccallum(&prim, v, &mut out, deadline)?,
        ProjectionOperator::Collins => collins(&prim, v, &mut out, deadline)?,
    }
    Ok(prepare_level(&out))
}

fn mccallum(prim: &[Polynomial], v: Variable, out: &mut Vec<Polynomial>, deadline: Deadline) -> Result<()> {
    for p in prim {
        deadline.check("projection")?;
        out.extend(p.coefficients_in(v).into_iter().filter(|c| !c.is_constant()));
        if p.degree(v) >= 2 {
            out.push(p.discriminant(v)?);
        }
    }
    for i in 0..prim.len() {
        for j in i + 1..prim.len() {
            deadline.check("projection")?;
            out.push(prim[i].resultant(&prim[j], v)?);
        }
    }
    Ok(())
}

/// `p` and its successive reducta of positive degree in `v`.
fn reducta(p: &Polynomial, v: Variable) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let mut coeffs = p.coefficients_in(v);
    while coeffs.len() >= 2 {
        let r = Polynomial::from_coefficients(p.context(), v, &coeffs);
        if r.degree(v) == 0 {
            break;
        }
        out.push(r);
        coeffs.pop();
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
    }
    out
}

fn collins(prim: &[Polynomial], v: Variable, out: &mut Vec<Polynomial>, deadline: Deadline) -> Result<()> {
    for p in prim {
        out.extend(p.coefficients_in(v).into_iter().filter(|c| !c.is_constant()));
        for r in reducta(p, v) {
            deadline.check("projection")?;
            let d = r.degree(v) as usize;
            if d >= 2 {
                let dr = r.derivative(v);
                for j in 0..d - 1 {
                    out.push(r.psc(&dr, v, j));
                }
            }
        }
    }
    for i in 0..prim.len() {
        for j in i + 1..prim.len() {
            let g = &prim[j];
            let dg = g.degree(v) as usize;
            for r in reducta(&prim[i], v) {
                deadline.check("projection")?;
                let dr = r.degree(v) as usize;
                for k in 0..dr.min(dg) {
                    out.push(r.psc(g, v, k));
                }
            }
        }
    }
    Ok(())
}

/// Full projection down to the lowest-precedence variable.
pub fn project_all(polys: &[Polynomial], ord: &MonomialOrder) -> Result<ProjectionSet> {
    project_all_with(polys, ord, ProjectionOperator::McCallum, Deadline::none())
}

pub fn project_all_with(
    polys: &[Polynomial],
    ord: &MonomialOrder,
    op: ProjectionOperator,
    deadline: Deadline,
) -> Result<ProjectionSet> {
    check_nonzero(polys)?;
    for p in polys {
        if !crate::poly::same_context(p.context(), ord.context()) {
            return Err(Error::ContextMismatch);
        }
    }
    let mut current = prepare_level(polys);
    let mut levels = Vec::with_capacity(ord.precedence().len());
    for &v in ord.precedence() {
        deadline.check("projection")?;
        let (here, rest): (Vec<_>, Vec<_>) = current.into_iter().partition(|p| p.contains_var(v));
        let mut next = rest;
        if !here.is_empty() {
            next.extend(project_once_with(&here, v, op, deadline)?);
        }
        levels.push(here);
        current = prepare_level(&next);
    }
    debug_assert!(current.is_empty());
    Ok(ProjectionSet {
        levels,
        order: ord.clone(),
    })
}
