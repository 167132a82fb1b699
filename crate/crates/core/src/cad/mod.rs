//! Full cylindrical algebraic decomposition: projection, base phase,
//! lifting and cell-wise formula evaluation.

mod lift;
mod projection;
mod roots;
mod tower;

use std::ops::Range;

use rayon::prelude::*;

pub use projection::{
    prepare_level, project_all, project_all_with, project_once, project_once_with, ProjectionOperator,
    ProjectionSet,
};
pub use roots::{isolate_real_roots, simplest_between, AlgebraicNumber};

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::poly::{MonomialOrder, Polynomial, Rational, Variable};
use lift::{build_stack, StackInput};
use roots::rational_to_f64;
use tower::Tower;

#[derive(Debug, Clone, Copy)]
pub struct CadConfig {
    pub operator: ProjectionOperator,
    /// Interval bisections per sign decision before giving up.
    pub max_refine: u32,
    pub deadline: Deadline,
}

impl Default for CadConfig {
    fn default() -> Self {
        CadConfig {
            operator: ProjectionOperator::McCallum,
            max_refine: 64,
            deadline: Deadline::none(),
        }
    }
}

/// One coordinate of a sample point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coordinate {
    Rational(Rational),
    /// The unique root in `(lo, hi)` of `defining`, whose other variables
    /// are the earlier coordinates.
    Algebraic {
        defining: Polynomial,
        lo: Rational,
        hi: Rational,
    },
}

impl Coordinate {
    pub fn enclosure(&self) -> (Rational, Rational) {
        match self {
            Coordinate::Rational(r) => (r.clone(), r.clone()),
            Coordinate::Algebraic { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    pub fn approx(&self) -> f64 {
        let (lo, hi) = self.enclosure();
        rational_to_f64(&((lo + hi) / Rational::from_integer(2.into())))
    }
}

/// Sample point of a cell, one coordinate per lifted variable.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    tower: Tower,
}

impl SamplePoint {
    pub fn dimension(&self) -> usize {
        self.tower.depth()
    }

    pub fn variables(&self) -> Vec<Variable> {
        self.tower.levels().iter().map(|l| l.var).collect()
    }

    pub fn coordinates(&self) -> Vec<Coordinate> {
        self.tower
            .levels()
            .iter()
            .map(|l| {
                if l.is_exact() {
                    Coordinate::Rational(l.lo.clone())
                } else {
                    Coordinate::Algebraic {
                        defining: l.min.clone(),
                        lo: l.lo.clone(),
                        hi: l.hi.clone(),
                    }
                }
            })
            .collect()
    }

    /// Rational coordinates if every coordinate is rational.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.tower
            .levels()
            .iter()
            .map(|l| l.is_exact().then(|| l.lo.clone()))
            .collect()
    }

    pub fn approx(&self) -> Vec<f64> {
        self.coordinates().iter().map(Coordinate::approx).collect()
    }

    /// Exact sign of `p` at the sample; `p` may only use lifted variables.
    pub fn sign_of(&self, p: &Polynomial) -> Result<i8> {
        self.tower.clone().sign(p)
    }
}

#[derive(Debug, Clone)]
pub struct Cell {
    index: Vec<u32>,
    parent: Option<usize>,
    children: Range<usize>,
    sample: SamplePoint,
    signs: Vec<i8>,
    input_signs: Vec<i8>,
}

impl Cell {
    /// Collins index; odd components are sectors, even ones sections.
    pub fn index(&self) -> &[u32] {
        &self.index
    }

    /// Position of the parent cell in the previous level.
    pub fn parent(&self) -> Option<usize> {
        self.parent
    }

    /// Positions of the children in the next level.
    pub fn children(&self) -> Range<usize> {
        self.children.clone()
    }

    pub fn sample(&self) -> &SamplePoint {
        &self.sample
    }

    /// Signs of this level's projection polynomials, in level order.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Signs of the input polynomials; filled on leaves only.
    pub fn input_signs(&self) -> &[i8] {
        &self.input_signs
    }

    pub fn is_section(&self) -> bool {
        self.index.last().is_some_and(|i| i % 2 == 0)
    }

    /// Number of sector components.
    pub fn dimension(&self) -> usize {
        self.index.iter().filter(|i| *i % 2 == 1).count()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.index.len()
    }
}

#[derive(Debug, Clone)]
pub struct CadTree {
    order: MonomialOrder,
    lift_vars: Vec<Variable>,
    projection: ProjectionSet,
    inputs: Vec<Polynomial>,
    levels: Vec<Vec<Cell>>,
}

impl CadTree {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Variables in lifting order, lowest precedence first.
    pub fn lift_variables(&self) -> &[Variable] {
        &self.lift_vars
    }

    pub fn projection(&self) -> &ProjectionSet {
        &self.projection
    }

    /// Distinct input polynomials, in first-seen order.
    pub fn inputs(&self) -> &[Polynomial] {
        &self.inputs
    }

    pub fn dimension(&self) -> usize {
        self.lift_vars.len()
    }

    /// Cells of ℝ^d, `1 <= d <= dimension`.
    pub fn cells(&self, d: usize) -> &[Cell] {
        &self.levels[d - 1]
    }

    pub fn leaves(&self) -> &[Cell] {
        self.levels.last().map_or(&[], Vec::as_slice)
    }

    /// Projection polynomials whose signs `cells(d)` record.
    pub fn level_polynomials(&self, d: usize) -> &[Polynomial] {
        self.projection.level(self.dimension() - d)
    }

    /// Number of cells of the full decomposition.
    pub fn cell_count(&self) -> usize {
        self.leaves().len()
    }

    /// Sizes of the stacks forming `cells(d)`, in order.
    pub fn stack_sizes(&self, d: usize) -> Vec<usize> {
        if d == 1 {
            return vec![self.levels[0].len()];
        }
        self.levels[d - 2].iter().map(|c| c.children.len()).collect()
    }

    pub fn all_stacks(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.dimension()).flat_map(|d| self.stack_sizes(d))
    }

    /// Sign of input `p` on leaf `i`, if `p` is an input.
    pub fn input_sign(&self, leaf: usize, p: &Polynomial) -> Option<i8> {
        let j = self.inputs.iter().position(|q| q == p)?;
        Some(self.leaves()[leaf].input_signs[j])
    }
}

/// CAD of ℝⁿ sign-invariant for `polys`, lifting from the lowest-precedence
/// variable.
pub fn build_cad(polys: &[Polynomial], ord: &MonomialOrder) -> Result<CadTree> {
    build_cad_with(polys, ord, &CadConfig::default())
}

pub fn build_cad_with(polys: &[Polynomial], ord: &MonomialOrder, config: &CadConfig) -> Result<CadTree> {
    let n = ord.precedence().len();
    if n == 0 {
        return Err(Error::InvalidContext("no variables to lift".into()));
    }
    let projection = project_all_with(polys, ord, config.operator, config.deadline)?;
    let mut inputs: Vec<Polynomial> = Vec::new();
    for p in polys {
        if !inputs.contains(p) {
            inputs.push(p.clone());
        }
    }
    let lift_vars: Vec<Variable> = ord.precedence().iter().rev().copied().collect();
    let root = Tower::new(ord.context(), config.max_refine);
    let mut levels: Vec<Vec<Cell>> = Vec::with_capacity(n);

    for k in 0..n {
        config.deadline.check("cad")?;
        let polys_k = projection.level(n - 1 - k);
        let top = k + 1 == n;
        let stack_for = |tower: &Tower, index: &[u32]| {
            build_stack(
                tower,
                &StackInput {
                    polys: polys_k,
                    var: lift_vars[k],
                    top,
                    parent_index: index,
                    config,
                },
            )
        };
        let stacks = if k == 0 {
            vec![stack_for(&root, &[])?]
        } else {
            levels[k - 1]
                .par_iter()
                .map(|c| stack_for(&c.sample.tower, &c.index))
                .collect::<Result<Vec<_>>>()?
        };

        let mut cells = Vec::new();
        for (pi, stack) in stacks.into_iter().enumerate() {
            let start = cells.len();
            let parent_index: &[u32] = if k == 0 { &[] } else { &levels[k - 1][pi].index };
            for (j, proto) in stack.into_iter().enumerate() {
                let mut index = parent_index.to_vec();
                index.push(j as u32 + 1);
                cells.push(Cell {
                    index,
                    parent: (k > 0).then_some(pi),
                    children: 0..0,
                    sample: SamplePoint { tower: proto.tower },
                    signs: proto.signs,
                    input_signs: Vec::new(),
                });
            }
            if k > 0 {
                levels[k - 1][pi].children = start..cells.len();
            }
        }
        levels.push(cells);
    }

    let leaves = levels.last_mut().expect("n >= 1");
    leaves.par_iter_mut().try_for_each(|cell| -> Result<()> {
        config.deadline.check("cad")?;
        let mut signs = Vec::with_capacity(inputs.len());
        for p in &inputs {
            signs.push(cell.sample.tower.sign(p)?);
        }
        cell.input_signs = signs;
        Ok(())
    })?;

    Ok(CadTree {
        order: ord.clone(),
        lift_vars,
        projection,
        inputs,
        levels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaEvaluation {
    /// Leaf positions where the formula holds.
    pub solution_cells: Vec<usize>,
    pub satisfiable: bool,
    /// Set when the problem carried a quantifier prefix; only the matrix
    /// was evaluated.
    pub prefix_unevaluated: bool,
}

/// Evaluates `formula` on every leaf of `tree`.
pub fn evaluate_formula(tree: &CadTree, formula: &Formula) -> Result<FormulaEvaluation> {
    let mut slots = Vec::new();
    for p in formula.polynomials() {
        let j = tree
            .inputs
            .iter()
            .position(|q| *q == p)
            .ok_or_else(|| Error::UntrackedPolynomial(p.to_string()))?;
        slots.push((p, j));
    }
    let mut solution_cells = Vec::new();
    for (i, leaf) in tree.leaves().iter().enumerate() {
        let holds = formula.evaluate(&mut |p: &Polynomial| {
            let j = slots
                .iter()
                .find(|(q, _)| q == p)
                .map(|(_, j)| *j)
                .ok_or_else(|| Error::UntrackedPolynomial(p.to_string()))?;
            Ok(leaf.input_signs[j])
        })?;
        if holds {
            solution_cells.push(i);
        }
    }
    Ok(FormulaEvaluation {
        satisfiable: !solution_cells.is_empty(),
        solution_cells,
        prefix_unevaluated: false,
    })
}
