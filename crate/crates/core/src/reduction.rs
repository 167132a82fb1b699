//! Pseudo-remainder preconditioners and Gröbner reduction of constraints.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{Formula, SignCondition};
use crate::groebner::GroebnerBasis;
use crate::poly::dense::{self, Dense};
use crate::poly::{Polynomial, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReductionMode {
    MainVar,
    SecondaryVars,
    AllVars,
}

impl ReductionMode {
    pub const ALL: [ReductionMode; 3] = [
        ReductionMode::MainVar,
        ReductionMode::SecondaryVars,
        ReductionMode::AllVars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionMode::MainVar => "MainVar",
            ReductionMode::SecondaryVars => "SecondaryVars",
            ReductionMode::AllVars => "AllVars",
        }
    }
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mainvar" | "main" => Ok(ReductionMode::MainVar),
            "secondaryvars" | "secondary" => Ok(ReductionMode::SecondaryVars),
            "allvars" | "all" => Ok(ReductionMode::AllVars),
            _ => Err(Error::Invalid(format!("unknown reduction mode `{s}`"))),
        }
    }
}

/// `rem(c^k f, g)` in `v`, where `c = lc_v(g)`, if every division step is
/// exact over the remaining variables.
fn rem_power(f: &Dense, g: &Dense, k: u32) -> Option<Dense> {
    let e = g.len() - 1;
    let c = &g[e];
    let mut r = dense::scale(f, &c.pow(k));
    while r.len() > e {
        let dr = r.len() - 1;
        let t = r[dr].div_exact(c)?;
        let shift = dr - e;
        for (i, gc) in g.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(gc * &t);
        }
        dense::trim(&mut r);
    }
    Some(r)
}

struct Division {
    f: Dense,
    g: Dense,
    /// `d - e + 1`, or `None` when `deg f < deg g`.
    full: Option<u32>,
}

fn setup(f: &Polynomial, g: &Polynomial, v: Variable) -> Result<Division> {
    f.check_context(g)?;
    if g.degree(v) == 0 {
        return Err(Error::Degree(format!("divisor {g} is constant in the main variable")));
    }
    let fd = dense::to_dense(f, v);
    let gd = dense::to_dense(g, v);
    let d = f.degree(v);
    let e = g.degree(v);
    let full = if f.is_zero() || d < e { None } else { Some(d - e + 1) };
    Ok(Division { f: fd, g: gd, full })
}

fn finish(r: &Dense, v: Variable, template: &Polynomial) -> Polynomial {
    dense::from_dense(r, v, template)
}

fn even_up(n: u32) -> u32 {
    n + n % 2
}

/// Pseudo-remainder `rem(c^(d-e+1) f, g)`.
pub fn prem(f: &Polynomial, g: &Polynomial, v: Variable) -> Result<Polynomial> {
    let div = setup(f, g, v)?;
    match div.full {
        None => Ok(f.clone()),
        Some(k) => Ok(finish(&rem_power(&div.f, &div.g, k).expect("full power is exact"), v, f)),
    }
}

/// Sparse pseudo-remainder with its minimal exponent `m`.
pub fn sprem(f: &Polynomial, g: &Polynomial, v: Variable) -> Result<(Polynomial, u32)> {
    let div = setup(f, g, v)?;
    let Some(full) = div.full else {
        return Ok((f.clone(), 0));
    };
    for m in 0..=full {
        if let Some(r) = rem_power(&div.f, &div.g, m) {
            return Ok((finish(&r, v, f), m));
        }
    }
    unreachable!("the full exponent always divides exactly")
}

/// Pseudo-remainder with the exponent rounded up to even.
pub fn pprecond(f: &Polynomial, g: &Polynomial, v: Variable) -> Result<Polynomial> {
    let div = setup(f, g, v)?;
    match div.full {
        None => Ok(f.clone()),
        Some(k) => Ok(finish(
            &rem_power(&div.f, &div.g, even_up(k)).expect("power above the full exponent is exact"),
            v,
            f,
        )),
    }
}

/// Sparse pseudo-remainder with the exponent rounded up to even.
pub fn sprecond(f: &Polynomial, g: &Polynomial, v: Variable) -> Result<Polynomial> {
    let div = setup(f, g, v)?;
    let Some(full) = div.full else {
        return Ok(f.clone());
    };
    let m = (0..=full)
        .find(|&m| rem_power(&div.f, &div.g, m).is_some())
        .expect("full exponent is exact");
    Ok(finish(
        &rem_power(&div.f, &div.g, even_up(m)).expect("power above an exact exponent is exact"),
        v,
        f,
    ))
}

/// Reduces one polynomial by `g` under `mode`.
pub fn reduce_polynomial(f: &Polynomial, g: &GroebnerBasis, mode: ReductionMode) -> Result<Polynomial> {
    let Some(top) = g.order().highest() else {
        return Ok(f.clone());
    };
    let ord = g.order().clone();
    let uses_top = move |p: &Polynomial| {
        p.leading_term(&ord)
            .map(|(m, _)| m.exponent(top) > 0)
            .unwrap_or(false)
    };
    match mode {
        ReductionMode::AllVars => g.normal_form(f),
        ReductionMode::MainVar => g.reduce_filtered(f, uses_top),
        ReductionMode::SecondaryVars => g.reduce_filtered(f, |p| !uses_top(p)),
    }
}

/// Replaces every constraint polynomial by its reduction; relations are kept.
pub fn reduce_inequalities(
    conditions: &[SignCondition],
    g: &GroebnerBasis,
    mode: ReductionMode,
) -> Result<Vec<SignCondition>> {
    conditions
        .iter()
        .map(|c| Ok(SignCondition::new(reduce_polynomial(&c.poly, g, mode)?, c.rel)))
        .collect()
}

/// [`reduce_inequalities`] over a whole Boolean formula.
pub fn reduce_formula(formula: &Formula, g: &GroebnerBasis, mode: ReductionMode) -> Result<Formula> {
    formula.try_map(&mut |p| reduce_polynomial(p, g, mode))
}
