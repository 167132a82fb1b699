//! Base phase and lifting: stacks over sample points.

use super::projection::ProjectionOperator;
use super::roots::{isolate_over, sector_samples, IsolatedRoot};
use super::tower::Tower;
use super::CadConfig;
use crate::error::{Error, Result};
use crate::poly::dense::{self, Dense};
use crate::poly::{Polynomial, Rational, Variable};

/// A cell of a stack before it is placed in the tree.
pub(crate) struct Proto {
    pub tower: Tower,
    pub signs: Vec<i8>,
}

pub(crate) struct StackInput<'a> {
    pub polys: &'a [Polynomial],
    pub var: Variable,
    /// Lifting the last variable; nullification there is harmless.
    pub top: bool,
    pub parent_index: &'a [u32],
    pub config: &'a CadConfig,
}

fn label(index: &[u32], tower: &Tower) -> String {
    let coords: Vec<String> = tower
        .levels()
        .iter()
        .map(|l| {
            if l.is_exact() {
                l.lo.to_string()
            } else {
                format!("({}, {})", l.lo, l.hi)
            }
        })
        .collect();
    let idx: Vec<String> = index.iter().map(u32::to_string).collect();
    format!("[{}] at [{}]", idx.join(","), coords.join(", "))
}

enum Section {
    Exact(Rational),
    Open { min: Dense, lo: Rational, hi: Rational },
}

/// Pairwise coprime monic factors whose product has the same roots as the
/// product of the monic squarefree `factors`.
fn coprime_basis(t: &mut Tower, factors: &[Dense], k: usize, cfg: &CadConfig) -> Result<Vec<Dense>> {
    let mut basis: Vec<Dense> = Vec::new();
    for s in factors {
        let mut cur = s.clone();
        let mut next = Vec::with_capacity(basis.len() + 2);
        for b in basis {
            if cur.len() < 2 {
                next.push(b);
                continue;
            }
            cfg.deadline.check("cad")?;
            let g = t.gcd_k(cur.clone(), b.clone(), k)?;
            if g.len() < 2 {
                next.push(b);
                continue;
            }
            let rest = t.div_monic_k(&b, &g, k);
            if rest.len() >= 2 {
                next.push(rest);
            }
            cur = t.div_monic_k(&cur, &g, k);
            next.push(g);
        }
        if cur.len() >= 2 {
            next.push(cur);
        }
        basis = next;
    }
    Ok(basis)
}

/// Halves the isolating interval of a simple root of `b`.
fn refine_root(t: &mut Tower, b: &Dense, r: &mut IsolatedRoot, k: usize) -> Result<()> {
    if r.is_exact() {
        return Ok(());
    }
    let m = (&r.lo + &r.hi) / Rational::from_integer(2.into());
    let at_m = t.eval_dense(b, &m, k);
    let sm = t.sign(&at_m)?;
    if sm == 0 {
        r.lo = m.clone();
        r.hi = m;
        return Ok(());
    }
    let at_lo = t.eval_dense(b, &r.lo, k);
    if t.sign(&at_lo)? == sm {
        r.lo = m;
    } else {
        r.hi = m;
    }
    Ok(())
}

/// Roots of every basis element, sorted, with pairwise disjoint closed
/// isolating intervals.
fn isolate_basis(t: &mut Tower, basis: &[Dense], k: usize, cfg: &CadConfig) -> Result<Vec<IsolatedRoot>> {
    let mut all: Vec<(IsolatedRoot, usize)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        all.extend(isolate_over(t, b, k, cfg.deadline)?.into_iter().map(|r| (r, i)));
    }
    loop {
        all.sort_by(|a, b| (&a.0.lo, &a.0.hi).cmp(&(&b.0.lo, &b.0.hi)));
        let Some(j) = (1..all.len()).find(|&j| all[j - 1].0.hi >= all[j].0.lo) else {
            break;
        };
        cfg.deadline.check("cad")?;
        if all[j - 1].0.is_exact() && all[j].0.is_exact() {
            return Err(Error::Invalid("coprime factors share a root".into()));
        }
        for i in [j - 1, j] {
            let (mut r, bi) = all[i].clone();
            refine_root(t, &basis[bi], &mut r, k)?;
            all[i] = (r, bi);
        }
    }
    Ok(all.into_iter().map(|(r, _)| r).collect())
}

/// Builds the stack over the sample held by `parent`, returned bottom to top.
pub(crate) fn build_stack(parent: &Tower, input: &StackInput<'_>) -> Result<Vec<Proto>> {
    let cfg = input.config;
    cfg.deadline.check("cad")?;
    let mut t = parent.clone();
    let k = t.depth();
    let v = input.var;
    let positive_dim = input.parent_index.iter().any(|i| i % 2 == 1);

    let mut dens: Vec<Option<Dense>> = Vec::with_capacity(input.polys.len());
    let mut sqf: Vec<Option<Dense>> = Vec::with_capacity(input.polys.len());
    for p in input.polys {
        let mut d = dense::to_dense(&t.reduce(p), v);
        t.trim_k(&mut d, k)?;
        if d.is_empty() {
            if cfg.operator == ProjectionOperator::McCallum && !input.top && positive_dim {
                return Err(Error::NotWellOriented {
                    poly: p.to_string(),
                    cell: label(input.parent_index, &t),
                });
            }
            dens.push(None);
            sqf.push(None);
        } else if d.len() == 1 {
            dens.push(Some(d));
            sqf.push(None);
        } else {
            let s = t.squarefree_k(&d, k)?;
            dens.push(Some(d));
            sqf.push(Some(s));
        }
    }

    let factors: Vec<Dense> = sqf.iter().flatten().cloned().collect();
    let basis = coprime_basis(&mut t, &factors, k, cfg)?;
    let roots = isolate_basis(&mut t, &basis, k, cfg)?;

    // Sections: vanishing polynomials, defining polynomial, sign vector.
    let mut sections: Vec<(Section, Vec<i8>)> = Vec::with_capacity(roots.len());
    for r in &roots {
        cfg.deadline.check("cad")?;
        let mut vanishing = vec![false; sqf.len()];
        for (j, s) in sqf.iter().enumerate() {
            let Some(s) = s else { continue };
            vanishing[j] = if r.is_exact() {
                let val = t.eval_dense(s, &r.lo, k);
                t.sign(&val)? == 0
            } else {
                let a = t.eval_dense(s, &r.lo, k);
                let b = t.eval_dense(s, &r.hi, k);
                t.sign(&a)? != t.sign(&b)?
            };
        }
        let mut signs = Vec::with_capacity(dens.len());
        for (j, d) in dens.iter().enumerate() {
            let s = match d {
                None => 0,
                Some(_) if vanishing[j] => 0,
                Some(d) => {
                    let val = t.eval_dense(d, &r.lo, k);
                    t.sign(&val)?
                }
            };
            signs.push(s);
        }
        let section = if r.is_exact() {
            Section::Exact(r.lo.clone())
        } else {
            let min = sqf
                .iter()
                .zip(&vanishing)
                .filter_map(|(s, &z)| if z { s.as_ref() } else { None })
                .min_by_key(|s| s.len())
                .expect("a root of the product is a root of some factor")
                .clone();
            Section::Open {
                min,
                lo: r.lo.clone(),
                hi: r.hi.clone(),
            }
        };
        sections.push((section, signs));
    }

    let samples = sector_samples(&roots);
    let mut sectors: Vec<(Rational, Vec<i8>)> = Vec::with_capacity(samples.len());
    for x in samples {
        let mut signs = Vec::with_capacity(dens.len());
        for d in &dens {
            signs.push(match d {
                None => 0,
                Some(d) => {
                    let val = t.eval_dense(d, &x, k);
                    t.sign(&val)?
                }
            });
        }
        sectors.push((x, signs));
    }

    let template = Polynomial::zero(t.context());
    let mut out = Vec::with_capacity(2 * roots.len() + 1);
    let mut sections = sections.into_iter();
    for (x, signs) in sectors {
        let mut tower = t.clone();
        tower.push_rational(v, x);
        out.push(Proto { tower, signs });
        if let Some((section, signs)) = sections.next() {
            let mut tower = t.clone();
            match section {
                Section::Exact(r) => tower.push_rational(v, r),
                Section::Open { min, lo, hi } => {
                    let at_lo = t.eval_dense(&min, &lo, k);
                    let sign_lo = t.sign(&at_lo)?;
                    tower.push_algebraic(v, dense::from_dense(&min, v, &template), lo, hi, sign_lo);
                }
            }
            out.push(Proto { tower, signs });
        }
    }
    Ok(out)
}
