use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::context::{same_context, VarContext, Variable};
use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::Rational;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map from exponent vector to nonzero coefficient, so two
/// equal polynomials always have identical term maps. Values are immutable
/// once built; every operation returns a new polynomial.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order: compares term sequences from the largest
/// storage monomial down. Only meant for sorting and set membership.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ctx.len()), c);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_int(ctx: &Arc<VarContext>, c: i64) -> Self {
        Self::constant(ctx, Rational::from_integer(c.into()))
    }

    pub fn var(ctx: &Arc<VarContext>, v: Variable) -> Self {
        Self::monomial(ctx, Monomial::var(ctx.len(), v, 1), Rational::one())
    }

    pub fn monomial(ctx: &Arc<VarContext>, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), ctx.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(ctx: &Arc<VarContext>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ctx.len());
            add_term(&mut map, m, c);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms: map,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.ctx.len()
    }

    /// Terms in ascending storage order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn check_context(&self, other: &Polynomial) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_context(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_context(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_context(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Total degree; the zero polynomial has none.
    pub fn total_degree(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .ok_or(Error::ZeroPolynomial("total degree"))
    }

    /// Sum of the total degrees of all monomials.
    pub fn sotd(&self) -> u64 {
        self.terms.keys().map(|m| u64::from(m.total_degree())).sum()
    }

    /// Number of distinct variables that occur.
    pub fn noi(&self) -> usize {
        self.variables().len()
    }

    pub fn variables(&self) -> Vec<Variable> {
        let n = self.nvars();
        let mut present = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    present[i] = true;
                }
            }
        }
        (0..n).filter(|&i| present[i]).map(Variable).collect()
    }

    pub fn contains_var(&self, v: Variable) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Degree in `v`; zero for the zero polynomial.
    pub fn degree(&self, v: Variable) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Highest-precedence variable of `ord` that occurs in `self`.
    pub fn main_variable(&self, ord: &MonomialOrder) -> Option<Variable> {
        let vars = self.variables();
        ord.precedence().iter().copied().find(|v| vars.contains(v))
    }

    /// Leading term with respect to `ord`.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Monomial, Rational)> {
        if !same_context(&self.ctx, ord.context()) {
            return Err(Error::ContextMismatch);
        }
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp_monomials(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(Error::ZeroPolynomial("leading monomial"))
    }

    /// Largest term in storage order.
    pub(crate) fn storage_leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn derivative(&self, v: Variable) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                None
            } else {
                Some((m.with_exponent(v, e - 1), c * Rational::from_integer(e.into())))
            }
        });
        Polynomial::from_terms(&self.ctx, terms)
    }

    /// Partial evaluation at the given rational bindings.
    pub fn substitute(&self, bindings: &[(Variable, Rational)]) -> Polynomial {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for (v, value) in bindings {
                let e = m.exponent(*v);
                if e > 0 {
                    coeff *= pow_rational(value, e);
                    mono = mono.with_exponent(*v, 0);
                }
            }
            add_term(&mut map, mono, coeff);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: map,
        }
    }

    /// Replaces `v` by the polynomial `value`.
    pub fn compose(&self, v: Variable, value: &Polynomial) -> Polynomial {
        let coeffs = self.coefficients_in(v);
        let mut acc = Polynomial::zero(&self.ctx);
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Full evaluation at a point given in context order.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rational(&point[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients of `self` viewed as a polynomial in `v`, lowest power first.
    pub fn coefficients_in(&self, v: Variable) -> Vec<Polynomial> {
        let d = self.degree(v) as usize;
        if self.is_zero() {
            return Vec::new();
        }
        let mut maps: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            maps[e].insert(m.with_exponent(v, 0), c.clone());
        }
        maps.into_iter()
            .map(|terms| Polynomial {
                ctx: self.ctx.clone(),
                terms,
            })
            .collect()
    }

    pub fn from_coefficients(ctx: &Arc<VarContext>, v: Variable, coeffs: &[Polynomial]) -> Polynomial {
        let mut map = BTreeMap::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let shifted = m.with_exponent(v, m.exponent(v) + e as u32);
                add_term(&mut map, shifted, a.clone());
            }
        }
        Polynomial {
            ctx: ctx.clone(),
            terms: map,
        }
    }

    /// Leading coefficient with respect to `v` (a polynomial free of `v`).
    pub fn leading_coefficient_in(&self, v: Variable) -> Polynomial {
        self.coefficients_in(v).pop().unwrap_or_else(|| Polynomial::zero(&self.ctx))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (dm, dc) = divisor.storage_leading().map(|(m, c)| (m.clone(), c.clone()))?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back() {
            let qm = m.div(&dm)?;
            let qc = c / &dc;
            for (t, a) in &divisor.terms {
                add_term(&mut rem, t.mul(&qm), -(a * &qc));
            }
            quot.insert(qm, qc);
        }
        Some(Polynomial {
            ctx: self.ctx.clone(),
            terms: quot,
        })
    }

    pub fn is_monic_in_storage(&self) -> bool {
        self.storage_leading().is_some_and(|(_, c)| c.is_one())
    }

    /// Scales so the largest storage-order term has coefficient one.
    pub fn monic_storage(&self) -> Polynomial {
        match self.storage_leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Integer coefficients with unit content and a positive largest
    /// storage-order coefficient. Zero stays zero.
    pub fn primitive_normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.storage_leading().unwrap().1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// True if `self = c * other` for a nonzero rational `c`; returns `c`.
    pub fn scalar_ratio(&self, other: &Polynomial) -> Option<Rational> {
        if self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ma != mb {
                return None;
            }
            let r = ca / cb;
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    /// Re-expresses the polynomial over another context using `map[i]` as
    /// the target index of variable `i`.
    pub fn remap(&self, target: &Arc<VarContext>, map: &[usize]) -> Polynomial {
        let n = target.len();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u32; n];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    exps[map[i]] += e;
                }
            }
            (Monomial::from_exponents(exps), c.clone())
        });
        Polynomial::from_terms(target, terms)
    }
}

pub(crate) fn add_term(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn pow_rational(base: &Rational, e: u32) -> Rational {
    num_traits::pow(base.clone(), e as usize)
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(same_context(&self.ctx, &rhs.ctx), "context mismatch");
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(same_context(&self.ctx, &rhs.ctx), "context mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut terms, m.clone(), -c.clone());
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert!(same_context(&self.ctx, &rhs.ctx), "context mismatch");
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Polynomial> for &'a Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
