//! Real algebraic sample points as a tower of simple extensions.
//!
//! Level `i` fixes the coordinate of one variable as the unique root of a
//! monic polynomial `m_i` (coefficients over the lower levels) inside an open
//! interval with rational endpoints, or as an exact rational. Elements are
//! rational polynomials in the tower variables, reduced modulo the triangular
//! set. Zero tests are exact: the gcd of an element with `m_i` either contains
//! the chosen root (the element vanishes there, and `m_i` shrinks to the gcd)
//! or not (`m_i` shrinks to the cofactor), so the tower never guesses.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::dense::{self, Dense};
use crate::poly::{Polynomial, Rational, VarContext, Variable};

/// Rounds of plain interval refinement before the exact zero test.
const EXACT_TEST_ROUND: u32 = 3;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub var: Variable,
    /// Monic in `var`; `var - lo` when exact.
    pub min: Polynomial,
    pub lo: Rational,
    pub hi: Rational,
    /// Sign of `min` at `lo` (0 when exact).
    pub sign_lo: i8,
}

impl Level {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Tower {
    ctx: Arc<VarContext>,
    levels: Vec<Level>,
    budget: u32,
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn imul(a: (Rational, Rational), b: (Rational, Rational)) -> (Rational, Rational) {
    let p = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    (lo, hi)
}

fn ipow(a: &Rational, b: &Rational, e: u32) -> (Rational, Rational) {
    let pa = crate::poly::pow_rational(a, e);
    let pb = crate::poly::pow_rational(b, e);
    if e % 2 == 1 || !a.is_negative() {
        (pa, pb)
    } else if !b.is_positive() {
        (pb, pa)
    } else {
        (Rational::zero(), pa.max(pb))
    }
}

impl Tower {
    pub fn new(ctx: &Arc<VarContext>, budget: u32) -> Self {
        Tower {
            ctx: ctx.clone(),
            levels: Vec::new(),
            budget,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn push_rational(&mut self, var: Variable, r: Rational) {
        let min = &Polynomial::var(&self.ctx, var) - &Polynomial::constant(&self.ctx, r.clone());
        self.levels.push(Level {
            var,
            min,
            lo: r.clone(),
            hi: r,
            sign_lo: 0,
        });
    }

    /// Pushes the unique root of `min` (monic in `var`) in `(lo, hi)`.
    pub fn push_algebraic(&mut self, var: Variable, min: Polynomial, lo: Rational, hi: Rational, sign_lo: i8) {
        let mut level = Level {
            var,
            min,
            lo,
            hi,
            sign_lo,
        };
        Self::normalize_level(&mut level);
        self.levels.push(level);
    }

    /// Turns a linear `var + c` with rational `c` into an exact level.
    fn normalize_level(level: &mut Level) {
        if level.is_exact() || level.min.degree(level.var) != 1 {
            return;
        }
        let coeffs = level.min.coefficients_in(level.var);
        if let Some(c) = coeffs[0].constant_value() {
            let r = -c;
            level.lo = r.clone();
            level.hi = r;
            level.sign_lo = 0;
        }
    }

    fn level_index(&self, v: Variable) -> Option<usize> {
        self.levels.iter().position(|l| l.var == v)
    }

    /// Highest level whose variable occurs in `a`.
    fn top_level(&self, a: &Polynomial) -> Option<usize> {
        (0..self.levels.len()).rev().find(|&i| a.contains_var(self.levels[i].var))
    }

    fn check_vars(&self, a: &Polynomial) -> Result<()> {
        for v in a.variables() {
            if self.level_index(v).is_none() {
                return Err(Error::Invalid(format!(
                    "variable {} has no coordinate in the sample",
                    self.ctx.name(v)
                )));
            }
        }
        Ok(())
    }

    /// Normal form modulo levels `0..j`.
    pub fn reduce_below(&self, a: &Polynomial, j: usize) -> Polynomial {
        let mut a = a.clone();
        for lvl in self.levels[..j].iter().rev() {
            if !a.contains_var(lvl.var) {
                continue;
            }
            if lvl.is_exact() {
                a = a.substitute(&[(lvl.var, lvl.lo.clone())]);
                continue;
            }
            let m = dense::to_dense(&lvl.min, lvl.var);
            let e = m.len() - 1;
            let mut d = dense::to_dense(&a, lvl.var);
            while d.len() > e {
                let top = d.len() - 1;
                let t = d[top].clone();
                let shift = top - e;
                for (i, mc) in m.iter().enumerate().take(e) {
                    d[i + shift] = &d[i + shift] - &(mc * &t);
                }
                d[top] = Polynomial::zero(&self.ctx);
                dense::trim(&mut d);
            }
            a = dense::from_dense(&d, lvl.var, &a);
        }
        a
    }

    pub fn reduce(&self, a: &Polynomial) -> Polynomial {
        self.reduce_below(a, self.levels.len())
    }

    /// Rational interval containing the value of `a` at the sample.
    pub fn enclosure(&self, a: &Polynomial) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (m, c) in a.terms() {
            let mut iv = (c.clone(), c.clone());
            for (idx, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let l = &self.levels[self.level_index(Variable(idx)).expect("variable in tower")];
                iv = imul(iv, ipow(&l.lo, &l.hi, e));
            }
            lo += iv.0;
            hi += iv.1;
        }
        (lo, hi)
    }

    /// Sign of `a` at the sample point.
    pub fn sign(&mut self, a: &Polynomial) -> Result<i8> {
        self.check_vars(a)?;
        let mut a = self.reduce(a);
        for round in 0..=self.budget {
            if let Some(c) = a.constant_value() {
                return Ok(sign_of(&c));
            }
            let (lo, hi) = self.enclosure(&a);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if round == EXACT_TEST_ROUND.min(self.budget) {
                if self.is_zero(&a)? {
                    return Ok(0);
                }
                a = self.reduce(&a);
                continue;
            }
            if round == self.budget {
                break;
            }
            let involved: Vec<usize> = (0..self.levels.len())
                .filter(|&i| !self.levels[i].is_exact() && a.contains_var(self.levels[i].var))
                .collect();
            for i in involved {
                self.refine(i)?;
            }
            a = self.reduce(&a);
        }
        Err(Error::PrecisionExhausted { what: a.to_string() })
    }

    /// Halves the isolating interval of level `i`.
    pub fn refine(&mut self, i: usize) -> Result<()> {
        if self.levels[i].is_exact() {
            return Ok(());
        }
        let lvl = &self.levels[i];
        let mid = (&lvl.lo + &lvl.hi) / Rational::from_integer(2.into());
        let val = self.reduce_below(&lvl.min.substitute(&[(lvl.var, mid.clone())]), i);
        let s = self.sign(&val)?;
        let lvl = &mut self.levels[i];
        if s == 0 {
            lvl.min = &Polynomial::var(&self.ctx, lvl.var) - &Polynomial::constant(&self.ctx, mid.clone());
            lvl.lo = mid.clone();
            lvl.hi = mid;
            lvl.sign_lo = 0;
        } else if s == lvl.sign_lo {
            lvl.lo = mid;
        } else {
            lvl.hi = mid;
        }
        Ok(())
    }

    /// Exact zero test.
    pub fn is_zero(&mut self, a: &Polynomial) -> Result<bool> {
        self.check_vars(a)?;
        let a = self.reduce(a);
        let Some(t) = self.top_level(&a) else {
            return Ok(a.is_zero());
        };
        let (lo, hi) = self.enclosure(&a);
        if lo.is_positive() || hi.is_negative() {
            return Ok(false);
        }
        self.split(&a, t)
    }

    /// Decides whether reduced `a` (top level `t`) vanishes, shrinking `m_t`
    /// so that afterwards `a` is either zero or invertible modulo the tower.
    fn split(&mut self, a: &Polynomial, t: usize) -> Result<bool> {
        let var = self.levels[t].var;
        let am = dense::to_dense(a, var);
        let mm = dense::to_dense(&self.levels[t].min, var);
        let g = self.gcd_k(am, mm.clone(), t)?;
        if g.len() <= 1 {
            return Ok(false);
        }
        if g.len() == mm.len() {
            return Ok(true);
        }
        let (lo, hi) = (self.levels[t].lo.clone(), self.levels[t].hi.clone());
        let glo = self.eval_dense(&g, &lo, t);
        let ghi = self.eval_dense(&g, &hi, t);
        let slo = self.sign(&glo)?;
        let shi = self.sign(&ghi)?;
        let (new_min, vanishes, sign_lo) = if slo != shi {
            (g, true, slo)
        } else {
            let h = self.div_monic_k(&mm, &g, t);
            let s = self.levels[t].sign_lo * slo;
            (h, false, s)
        };
        let template = Polynomial::zero(&self.ctx);
        let lvl = &mut self.levels[t];
        lvl.min = dense::from_dense(&new_min, var, &template);
        lvl.sign_lo = sign_lo;
        Self::normalize_level(lvl);
        Ok(vanishes)
    }

    /// Inverse of a nonzero element.
    pub fn inverse(&mut self, a: &Polynomial) -> Result<Polynomial> {
        let a = self.reduce(a);
        let Some(t) = self.top_level(&a) else {
            let c = a.constant_value().expect("constant");
            if c.is_zero() {
                return Err(Error::Invalid("inverse of zero in a sample extension".into()));
            }
            return Ok(Polynomial::constant(&self.ctx, c.recip()));
        };
        if self.split(&a, t)? {
            return Err(Error::Invalid("inverse of zero in a sample extension".into()));
        }
        let a = self.reduce(&a);
        if self.top_level(&a) != Some(t) {
            return self.inverse(&a);
        }
        let var = self.levels[t].var;
        let zero = Polynomial::zero(&self.ctx);
        let one = Polynomial::one(&self.ctx);
        let mut r0 = dense::to_dense(&self.levels[t].min, var);
        let mut r1 = dense::to_dense(&a, var);
        self.trim_k(&mut r1, t)?;
        let mut s0: Dense = Vec::new();
        let mut s1: Dense = vec![one];
        loop {
            match r1.len() {
                0 => return Err(Error::Invalid("element shares a factor with its extension".into())),
                1 => {
                    let ci = self.inverse(&r1[0])?;
                    let s = dense::from_dense(&s1, var, &zero);
                    return Ok(self.reduce(&(&s * &ci)));
                }
                _ => {}
            }
            let (q, r) = self.divmod_k(&r0, &r1, t)?;
            let qs = self.mul_k(&q, &s1, t);
            let s2 = self.sub_k(&s0, &qs, t);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
    }

    // Dense polynomials over the extension formed by levels `0..t`.

    pub(crate) fn eval_dense(&self, d: &Dense, x: &Rational, t: usize) -> Polynomial {
        let mut acc = Polynomial::zero(&self.ctx);
        for c in d.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        self.reduce_below(&acc, t)
    }

    /// Drops leading coefficients that vanish at the sample.
    pub(crate) fn trim_k(&mut self, d: &mut Dense, t: usize) -> Result<()> {
        while let Some(last) = d.last() {
            let last = self.reduce_below(last, t);
            if last.is_zero() || self.is_zero(&last)? {
                d.pop();
            } else {
                break;
            }
        }
        Ok(())
    }

    fn reduce_dense(&self, d: &mut Dense, t: usize) {
        for c in d.iter_mut() {
            *c = self.reduce_below(c, t);
        }
        dense::trim(d);
    }

    fn sub_k(&self, a: &Dense, b: &Dense, t: usize) -> Dense {
        let n = a.len().max(b.len());
        let zero = Polynomial::zero(&self.ctx);
        let mut out: Dense = (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect();
        self.reduce_dense(&mut out, t);
        out
    }

    pub(crate) fn mul_k(&self, a: &Dense, b: &Dense, t: usize) -> Dense {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out: Dense = vec![Polynomial::zero(&self.ctx); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        self.reduce_dense(&mut out, t);
        out
    }

    /// Quotient and remainder; `b` must have a nonvanishing leading coefficient.
    pub(crate) fn divmod_k(&mut self, a: &Dense, b: &Dense, t: usize) -> Result<(Dense, Dense)> {
        let e = b.len() - 1;
        let lc = &b[e];
        let inv = if lc.is_one() { lc.clone() } else { self.inverse(lc)? };
        let mut r = a.clone();
        self.trim_k(&mut r, t)?;
        let zero = Polynomial::zero(&self.ctx);
        let mut q: Dense = vec![zero.clone(); r.len().saturating_sub(e).max(1)];
        while r.len() > e {
            let top = r.len() - 1;
            let coef = self.reduce_below(&(&r[top] * &inv), t);
            let shift = top - e;
            for (i, bc) in b.iter().enumerate().take(e) {
                r[i + shift] = self.reduce_below(&(&r[i + shift] - &(bc * &coef)), t);
            }
            q[shift] = coef;
            r[top] = zero.clone();
            self.trim_k(&mut r, t)?;
        }
        dense::trim(&mut q);
        Ok((q, r))
    }

    pub(crate) fn rem_k(&mut self, a: &Dense, b: &Dense, t: usize) -> Result<Dense> {
        Ok(self.divmod_k(a, b, t)?.1)
    }

    /// Remainder of `lc(b)^(2j) a` by `b`: a positive multiple of the true
    /// remainder, computed without inverses.
    pub(crate) fn prem_even_k(&mut self, a: &Dense, b: &Dense, t: usize) -> Result<Dense> {
        let e = b.len() - 1;
        let lc = &b[e];
        let mut r = a.clone();
        self.trim_k(&mut r, t)?;
        let mut steps = 0usize;
        while r.len() > e {
            let top = r.len() - 1;
            let coef = r[top].clone();
            let shift = top - e;
            for i in 0..top {
                let mut c = &r[i] * lc;
                if i >= shift {
                    c = &c - &(&b[i - shift] * &coef);
                }
                r[i] = self.reduce_below(&c, t);
            }
            r.pop();
            steps += 1;
            self.trim_k(&mut r, t)?;
            r = dense::positive_primitive(&r);
        }
        if steps % 2 == 1 {
            r = r.iter().map(|c| self.reduce_below(&(c * lc), t)).collect();
            self.trim_k(&mut r, t)?;
        }
        Ok(r)
    }

    /// Exact quotient by a monic divisor.
    pub(crate) fn div_monic_k(&self, a: &Dense, b: &Dense, t: usize) -> Dense {
        let e = b.len() - 1;
        debug_assert!(b[e].is_one());
        let mut r = a.clone();
        let zero = Polynomial::zero(&self.ctx);
        let mut q: Dense = vec![zero.clone(); r.len().saturating_sub(e).max(1)];
        while r.len() > e {
            let top = r.len() - 1;
            let coef = r[top].clone();
            let shift = top - e;
            for (i, bc) in b.iter().enumerate().take(e) {
                r[i + shift] = self.reduce_below(&(&r[i + shift] - &(bc * &coef)), t);
            }
            q[shift] = coef;
            r[top] = zero.clone();
            dense::trim(&mut r);
        }
        dense::trim(&mut q);
        q
    }

    pub(crate) fn make_monic_k(&mut self, mut a: Dense, t: usize) -> Result<Dense> {
        let last = a.len() - 1;
        if a[last].is_one() {
            return Ok(a);
        }
        let inv = self.inverse(&a[last])?;
        for c in a.iter_mut().take(last) {
            *c = self.reduce_below(&(&*c * &inv), t);
        }
        a[last] = Polynomial::one(&self.ctx);
        Ok(a)
    }

    /// Monic gcd; empty when both inputs vanish.
    pub(crate) fn gcd_k(&mut self, mut a: Dense, mut b: Dense, t: usize) -> Result<Dense> {
        self.trim_k(&mut a, t)?;
        self.trim_k(&mut b, t)?;
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = self.rem_k(&a, &b, t)?;
            a = b;
            b = dense::positive_primitive(&r);
        }
        if a.is_empty() {
            return Ok(a);
        }
        self.make_monic_k(a, t)
    }

    /// Squarefree part, monic; `a` must be trimmed with degree at least 1.
    pub(crate) fn squarefree_k(&mut self, a: &Dense, t: usize) -> Result<Dense> {
        let mut da = dense::derivative(a);
        self.reduce_dense(&mut da, t);
        let g = self.gcd_k(a.clone(), da, t)?;
        let a = self.make_monic_k(a.clone(), t)?;
        if g.len() <= 1 {
            return Ok(a);
        }
        Ok(self.div_monic_k(&a, &g, t))
    }
}
