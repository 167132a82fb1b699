//! Difficulty measures on projection sets and polynomial sets, variable
//! ordering search, and sample correlation.

use std::sync::Arc;

use rayon::prelude::*;

use crate::cad::{prepare_level, project_all_with, project_once_with, ProjectionOperator, ProjectionSet};
use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Polynomial, VarContext, Variable};

/// Number of polynomials over all levels.
pub fn card_set(a: &ProjectionSet) -> usize {
    a.levels().iter().map(Vec::len).sum()
}

/// Sum of total degrees over all levels.
pub fn td_set(a: &ProjectionSet) -> u64 {
    a.iter().map(|p| p.total_degree().map_or(0, u64::from)).sum()
}

/// Sum of monomial total degrees over all levels.
pub fn sotd_set(a: &ProjectionSet) -> u64 {
    a.iter().map(Polynomial::sotd).sum()
}

fn sotd_polys(polys: &[Polynomial]) -> u64 {
    polys.iter().map(Polynomial::sotd).sum()
}

/// Total number of indeterminates of a polynomial set.
pub fn tnoi(polys: &[Polynomial]) -> usize {
    polys.iter().map(Polynomial::noi).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelMetrics {
    pub variable: Variable,
    pub card: usize,
    pub sotd: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsReport {
    pub card: usize,
    pub td: u64,
    pub sotd: u64,
    pub tnoi_input: usize,
    /// Highest-precedence level first.
    pub per_level: Vec<LevelMetrics>,
}

impl MetricsReport {
    pub fn of(inputs: &[Polynomial], projection: &ProjectionSet) -> Self {
        let per_level = projection
            .order()
            .precedence()
            .iter()
            .zip(projection.levels())
            .map(|(&variable, level)| LevelMetrics {
                variable,
                card: level.len(),
                sotd: sotd_polys(level),
            })
            .collect();
        MetricsReport {
            card: card_set(projection),
            td: td_set(projection),
            sotd: sotd_set(projection),
            tnoi_input: tnoi(inputs),
            per_level,
        }
    }
}

/// Admissible orderings: variable blocks, highest precedence first. Block
/// order is fixed; variables may be permuted within a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissible {
    ctx: Arc<VarContext>,
    blocks: Vec<Vec<Variable>>,
}

impl Admissible {
    /// No constraints.
    pub fn any(ctx: &Arc<VarContext>) -> Self {
        Admissible {
            ctx: ctx.clone(),
            blocks: vec![ctx.variables().collect()],
        }
    }

    pub fn from_blocks(ctx: &Arc<VarContext>, blocks: Vec<Vec<Variable>>) -> Result<Self> {
        let mut seen = vec![false; ctx.len()];
        for &v in blocks.iter().flatten() {
            if v.index() >= ctx.len() || std::mem::replace(&mut seen[v.index()], true) {
                return Err(Error::InvalidOrder("blocks must partition the variables".into()));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidOrder("blocks must partition the variables".into()));
        }
        let blocks = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        Ok(Admissible { ctx: ctx.clone(), blocks })
    }

    pub fn blocks(&self) -> &[Vec<Variable>] {
        &self.blocks
    }

    pub fn permits(&self, ord: &MonomialOrder) -> bool {
        let mut rest = ord.precedence();
        for b in &self.blocks {
            let (head, tail) = rest.split_at(b.len());
            let mut head = head.to_vec();
            head.sort();
            if head != *b {
                return false;
            }
            rest = tail;
        }
        true
    }

    /// All admissible precedence lists, lexicographic in variable index.
    fn permutations(&self) -> Vec<Vec<Variable>> {
        fn go(blocks: &[Vec<Variable>], bi: usize, used: &mut Vec<bool>, cur: &mut Vec<Variable>, out: &mut Vec<Vec<Variable>>) {
            if bi == blocks.len() {
                out.push(cur.clone());
                return;
            }
            let block = &blocks[bi];
            let placed = block.iter().filter(|v| used[v.index()]).count();
            if placed == block.len() {
                return go(blocks, bi + 1, used, cur, out);
            }
            for &v in block {
                if !used[v.index()] {
                    used[v.index()] = true;
                    cur.push(v);
                    go(blocks, bi, used, cur, out);
                    cur.pop();
                    used[v.index()] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&self.blocks, 0, &mut vec![false; self.ctx.len()], &mut Vec::new(), &mut out);
        out
    }
}

fn context_of(polys: &[Polynomial], admissible: &Admissible) -> Result<Arc<VarContext>> {
    if polys.is_empty() {
        return Err(Error::Invalid("ordering search needs at least one polynomial".into()));
    }
    for p in polys {
        if !crate::poly::same_context(p.context(), &admissible.ctx) {
            return Err(Error::ContextMismatch);
        }
    }
    Ok(admissible.ctx.clone())
}

/// Greedy ordering: repeatedly projects the variable whose one-step
/// projection has the least sotd.
pub fn greedy_order(polys: &[Polynomial], admissible: &Admissible) -> Result<MonomialOrder> {
    greedy_order_with(polys, admissible, ProjectionOperator::McCallum, Deadline::none())
}

pub fn greedy_order_with(
    polys: &[Polynomial],
    admissible: &Admissible,
    op: ProjectionOperator,
    deadline: Deadline,
) -> Result<MonomialOrder> {
    let ctx = context_of(polys, admissible)?;
    let mut current = prepare_level(polys);
    let mut chosen: Vec<Variable> = Vec::with_capacity(ctx.len());
    for block in &admissible.blocks {
        let mut left = block.clone();
        while !left.is_empty() {
            let mut best: Option<(u64, usize, Vec<Polynomial>)> = None;
            for (i, &v) in left.iter().enumerate() {
                deadline.check("ordering")?;
                let next = project_once_with(&current, v, op, deadline)?;
                let s = sotd_polys(&next);
                if best.as_ref().is_none_or(|(bs, _, _)| s < *bs) {
                    best = Some((s, i, next));
                }
            }
            let (_, i, next) = best.expect("block is nonempty");
            chosen.push(left.remove(i));
            current = next;
        }
    }
    MonomialOrder::new(&ctx, chosen)
}

/// Exhaustive search refuses more variables than this without an override.
pub const EXHAUSTIVE_LIMIT: usize = 7;

/// Admissible ordering with the least sotd of the full projection set.
pub fn best_order_exhaustive(polys: &[Polynomial], admissible: &Admissible) -> Result<(MonomialOrder, u64)> {
    best_order_exhaustive_with(polys, admissible, ProjectionOperator::McCallum, false, Deadline::none())
}

pub fn best_order_exhaustive_with(
    polys: &[Polynomial],
    admissible: &Admissible,
    op: ProjectionOperator,
    override_guard: bool,
    deadline: Deadline,
) -> Result<(MonomialOrder, u64)> {
    let ctx = context_of(polys, admissible)?;
    if ctx.len() > EXHAUSTIVE_LIMIT && !override_guard {
        return Err(Error::Guard(format!(
            "exhaustive ordering search over {} variables exceeds the limit of {EXHAUSTIVE_LIMIT}",
            ctx.len()
        )));
    }
    let perms = admissible.permutations();
    let scored = perms
        .par_iter()
        .enumerate()
        .map(|(rank, perm)| -> Result<(u64, usize)> {
            let ord = MonomialOrder::new(&ctx, perm.clone())?;
            let set = project_all_with(polys, &ord, op, deadline)?;
            Ok((sotd_set(&set), rank))
        })
        .collect::<Result<Vec<_>>>()?;
    let (sotd, rank) = scored.into_iter().min().expect("at least one permutation");
    Ok((MonomialOrder::new(&ctx, perms[rank].clone())?, sotd))
}

/// Sample correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two samples".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("a sample has zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}
