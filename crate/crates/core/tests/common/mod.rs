//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use cadprep::cad::{isolate_real_roots, CadTree, Cell, Coordinate};
use cadprep::poly::{ratio, Monomial, Polynomial, Rational, VarContext, Variable};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn ctx(names: &[&str]) -> Arc<VarContext> {
    VarContext::new(names).unwrap()
}

pub fn parse(ctx: &Arc<VarContext>, s: &str) -> Polynomial {
    Polynomial::parse(ctx, s).unwrap()
}

/// Random polynomial in `nvars` variables with total degree at most
/// `max_deg`, small rational coefficients and up to `max_terms` terms.
pub fn poly_strategy(ctx: Arc<VarContext>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let n = ctx.len();
    let term = (prop::collection::vec(0..=max_deg, n), -6i64..=6, 1i64..=3);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(
            &ctx,
            terms.into_iter().filter_map(|(mut e, c, d)| {
                while e.iter().sum::<u32>() > max_deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (c != 0).then(|| (Monomial::from_exponents(e), ratio(c, d)))
            }),
        )
    })
}

pub fn nonzero_poly_strategy(ctx: Arc<VarContext>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    poly_strategy(ctx, max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Plain division of `h` by `g` in `v`: every step must divide the leading
/// coefficient exactly. `None` when some step is inexact.
pub fn plain_remainder(h: &Polynomial, g: &Polynomial, v: Variable) -> Option<Polynomial> {
    let e = g.degree(v);
    let lc = g.leading_coefficient_in(v);
    let mut r = h.clone();
    while !r.is_zero() && r.degree(v) >= e {
        let d = r.degree(v);
        let t = r.leading_coefficient_in(v).div_exact(&lc)?;
        let shift = Polynomial::monomial(r.context(), Monomial::var(r.nvars(), v, d - e), Rational::one());
        r = &r - &(&(&t * &shift) * g);
    }
    Some(r)
}

/// Uniform-ish random rational strictly inside `(lo, hi)`.
pub fn rational_between(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval ({lo}, {hi})");
    let k: i64 = rng.gen_range(1..1000);
    lo + (hi - lo) * ratio(k, 1000)
}

fn enclosure(c: &Coordinate) -> (Rational, Rational) {
    c.enclosure()
}

fn last_coordinate(cell: &Cell) -> (Rational, Rational) {
    enclosure(cell.sample().coordinates().last().expect("cell of positive dimension"))
}

/// Stack parity, alternation, Collins indices, cylindrical nesting and
/// increasing samples within each stack.
pub fn check_structure(tree: &CadTree) {
    let n = tree.dimension();
    for d in 1..=n {
        let cells = tree.cells(d);
        let stacks: Vec<std::ops::Range<usize>> = if d == 1 {
            std::iter::once(0..cells.len()).collect()
        } else {
            tree.cells(d - 1).iter().map(|c| c.children()).collect()
        };
        let mut next = 0;
        for (pi, range) in stacks.into_iter().enumerate() {
            assert_eq!(range.start, next, "stacks at level {d} are not contiguous");
            next = range.end;
            assert_eq!(range.len() % 2, 1, "even stack at level {d}");
            for (pos, ci) in range.clone().enumerate() {
                let cell = &cells[ci];
                assert_eq!(cell.index().len(), d);
                assert_eq!(*cell.index().last().unwrap() as usize, pos + 1, "Collins index");
                assert_eq!(cell.is_section(), pos % 2 == 1);
                assert_eq!(cell.sample().dimension(), d);
                if d > 1 {
                    let parent = &tree.cells(d - 1)[pi];
                    assert_eq!(cell.parent(), Some(pi));
                    assert_eq!(&cell.index()[..d - 1], parent.index(), "cylindrical index prefix");
                    let own = cell.sample().coordinates();
                    let up = parent.sample().coordinates();
                    // Refinement may have narrowed either copy of the interval.
                    for (a, b) in own[..d - 1].iter().zip(&up) {
                        let ((alo, ahi), (blo, bhi)) = (a.enclosure(), b.enclosure());
                        assert!(alo <= bhi && blo <= ahi, "sample does not extend its parent's");
                    }
                }
                if pos > 0 {
                    let (plo, phi) = last_coordinate(&cells[ci - 1]);
                    let (lo, hi) = last_coordinate(cell);
                    let both_exact = plo == phi && lo == hi;
                    assert!(if both_exact { phi < lo } else { phi <= lo && plo < hi }, "samples not increasing");
                }
            }
        }
        assert_eq!(next, cells.len(), "level {d} has cells outside every stack");
    }
    assert_eq!(tree.cell_count(), tree.cells(n).len());
}

/// Sign vectors of two builds agree cell by cell.
pub fn same_decomposition(a: &CadTree, b: &CadTree) -> bool {
    a.cell_count() == b.cell_count()
        && (1..=a.dimension()).all(|d| {
            a.cells(d).len() == b.cells(d).len()
                && a.cells(d).iter().zip(b.cells(d)).all(|(x, y)| x.signs() == y.signs() && x.index() == y.index())
        })
}

fn roots_at(polys: &[Polynomial], y: Variable, at: &Rational) -> Vec<(Rational, Rational)> {
    let ctx = polys[0].context();
    let mut product = Polynomial::one(ctx);
    for p in polys {
        let s = p.substitute(&[(y, at.clone())]);
        if !s.is_zero() {
            product = &product * &s;
        }
    }
    if product.is_constant() {
        return Vec::new();
    }
    isolate_real_roots(&product)
        .unwrap()
        .iter()
        .map(|r| {
            let (lo, hi) = r.interval();
            (lo.clone(), hi.clone())
        })
        .collect()
}

/// Open interval strictly between the isolating intervals at positions
/// `left` and `right` of `roots`, widening to the rays at either end.
fn gap(roots: &[(Rational, Rational)], sector: usize) -> (Rational, Rational) {
    let reach = Rational::from_integer(8.into());
    let left = sector.checked_sub(1).map(|i| roots[i].1.clone());
    let right = roots.get(sector).map(|r| r.0.clone());
    match (left, right) {
        (Some(l), Some(r)) => (l, r),
        (Some(l), None) => (l.clone(), l + reach),
        (None, Some(r)) => (&r - &reach, r),
        (None, None) => (-reach.clone(), reach),
    }
}

/// For each full-dimensional leaf of a two-variable decomposition, draws
/// `per_cell` random rational points inside the cell and checks that every
/// input polynomial has the cell's recorded sign there.
pub fn sampling_check(tree: &CadTree, per_cell: usize, rng: &mut impl Rng) -> usize {
    assert_eq!(tree.dimension(), 2, "sampling check is for plane decompositions");
    let vars = tree.lift_variables();
    let (y, x) = (vars[0], vars[1]);
    let ctx = tree.order().context().clone();
    let base = tree.cells(1);
    let base_roots: Vec<(Rational, Rational)> =
        base.iter().filter(|c| c.is_section()).map(last_coordinate).collect();
    let level2 = tree.level_polynomials(2).to_vec();
    let mut checked = 0;
    for (bi, b) in base.iter().enumerate() {
        if b.is_section() {
            continue;
        }
        let (ylo, yhi) = gap(&base_roots, bi / 2);
        for _ in 0..per_cell {
            let yv = rational_between(rng, &ylo, &yhi);
            let roots = if level2.is_empty() { Vec::new() } else { roots_at(&level2, y, &yv) };
            let stack = b.children();
            assert_eq!(stack.len(), 2 * roots.len() + 1, "stack size changes inside a sector");
            for (pos, li) in stack.enumerate() {
                if pos % 2 == 1 {
                    continue;
                }
                let leaf = &tree.leaves()[li];
                assert!(leaf.is_full_dimensional());
                let (xlo, xhi) = gap(&roots, pos / 2);
                let xv = rational_between(rng, &xlo, &xhi);
                let mut point = vec![Rational::zero(); ctx.len()];
                point[x.index()] = xv.clone();
                point[y.index()] = yv.clone();
                for (j, p) in tree.inputs().iter().enumerate() {
                    let s = sign(&p.evaluate(&point));
                    assert_eq!(s, leaf.input_signs()[j], "sign of {p} at ({xv}, {yv}) differs from cell {:?}", leaf.index());
                }
                checked += 1;
            }
        }
    }
    checked
}
