//! Lexicographic Gröbner bases (Buchberger), normal forms and ideal membership.
//!
//! Internally polynomials are re-keyed so that each exponent vector is listed
//! in precedence order; plain lexicographic comparison of the keys is then the
//! monomial order. Terms are kept ascending, so the leading term is last.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, VarContext};

type Key = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
struct Lp {
    terms: Vec<(Key, Rational)>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn key_lcm(a: &[u32], b: &[u32]) -> Key {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn key_sub(a: &[u32], b: &[u32]) -> Key {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn key_add(a: &[u32], b: &[u32]) -> Key {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn key_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

impl Lp {
    fn from_poly(p: &Polynomial, ord: &MonomialOrder) -> Lp {
        let mut terms: Vec<(Key, Rational)> = p.terms().map(|(m, c)| (ord.key(m), c.clone())).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Lp { terms }
    }

    fn to_poly(&self, ord: &MonomialOrder) -> Polynomial {
        let ctx = ord.context();
        let n = ctx.len();
        let prec = ord.precedence();
        Polynomial::from_terms(
            ctx,
            self.terms.iter().map(|(k, c)| {
                let mut e = vec![0u32; n];
                for (i, &v) in prec.iter().enumerate() {
                    e[v.index()] = k[i];
                }
                (Monomial::from_exponents(e), c.clone())
            }),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Key {
        &self.terms.last().expect("nonzero").0
    }

    fn lc(&self) -> &Rational {
        &self.terms.last().expect("nonzero").1
    }

    fn monic(mut self) -> Lp {
        if let Some(lc) = self.terms.last().map(|t| t.1.clone()) {
            if !lc.is_one() {
                let inv = lc.recip();
                for t in &mut self.terms {
                    t.1 = &t.1 * &inv;
                }
            }
        }
        self
    }

    /// `self - c * m * g`.
    fn sub_mul(&self, c: &Rational, m: &[u32], g: &Lp) -> Lp {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms.iter().map(|(k, v)| (key_add(k, m), v * c)).peekable();
        loop {
            let take_a = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal => {
                        let x = a.next().unwrap();
                        let y = b.next().unwrap();
                        let s = &x.1 - &y.1;
                        if !s.is_zero() {
                            out.push((x.0.clone(), s));
                        }
                        continue;
                    }
                },
            };
            if take_a {
                out.push(a.next().unwrap().clone());
            } else {
                let (k, v) = b.next().unwrap();
                out.push((k, -v));
            }
        }
        Lp { terms: out }
    }
}

/// Full reduction of `f` by the monic `reducers` for which `allowed` holds.
fn reduce(f: &Lp, reducers: &[Lp], allowed: &dyn Fn(&Lp) -> bool) -> Lp {
    let active: Vec<&Lp> = reducers.iter().filter(|g| allowed(g)).collect();
    let mut p = f.clone();
    // Irreducible terms collected from the top down.
    let mut rem: Vec<(Key, Rational)> = Vec::new();
    while let Some((lm, lc)) = p.terms.last().cloned() {
        match active.iter().find(|g| divides(g.lm(), &lm)) {
            Some(g) => {
                let c = &lc / g.lc();
                let m = key_sub(&lm, g.lm());
                p = p.sub_mul(&c, &m, g);
            }
            None => {
                p.terms.pop();
                rem.push((lm, lc));
            }
        }
    }
    rem.reverse();
    Lp { terms: rem }
}

fn spoly(f: &Lp, g: &Lp) -> Lp {
    let l = key_lcm(f.lm(), g.lm());
    let mf = key_sub(&l, f.lm());
    let mg = key_sub(&l, g.lm());
    let zero = Lp { terms: Vec::new() };
    let a = zero.sub_mul(&-f.lc().recip(), &mf, f);
    a.sub_mul(&g.lc().recip(), &mg, g)
}

/// Reduced lexicographic Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    reduced: bool,
}

impl GroebnerBasis {
    /// Generators sorted by leading monomial, largest first.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.order.context()
    }

    /// Errors unless `ord` is exactly the order the basis was computed under.
    pub fn check_order(&self, ord: &MonomialOrder) -> Result<()> {
        if *ord == self.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                basis: self.order.to_string(),
                caller: ord.to_string(),
            })
        }
    }

    fn lps(&self) -> Vec<Lp> {
        self.generators.iter().map(|g| Lp::from_poly(g, &self.order)).collect()
    }

    /// Normal form of `f` modulo the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.reduce_filtered(f, |_| true)
    }

    /// Reduction of `f` using only the generators accepted by `allowed`.
    pub fn reduce_filtered<F>(&self, f: &Polynomial, allowed: F) -> Result<Polynomial>
    where
        F: Fn(&Polynomial) -> bool,
    {
        if !crate::poly::same_context(f.context(), self.context()) {
            return Err(Error::ContextMismatch);
        }
        let keep: Vec<Lp> = self
            .generators
            .iter()
            .filter(|g| allowed(g))
            .map(|g| Lp::from_poly(g, &self.order))
            .collect();
        let r = reduce(&Lp::from_poly(f, &self.order), &keep, &|_| true);
        Ok(r.to_poly(&self.order))
    }

    pub fn is_member(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn s_polynomials_vanish(&self) -> bool {
        let g = self.lps();
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| reduce(&spoly(&g[i], &g[j]), &g, &|_| true).is_zero()))
    }
}

/// `(L/lt(f))·f − (L/lt(g))·g` with `L` the lcm of the leading monomials.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, ord: &MonomialOrder) -> Result<Polynomial> {
    f.check_context(g)?;
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("s_polynomial"));
    }
    let (lf, cf) = f.leading_term(ord)?;
    let (lg, cg) = g.leading_term(ord)?;
    let l = lf.lcm(&lg);
    let a = f.mul_term(&l.div(&lf).expect("lcm"), &cf.recip());
    let b = g.mul_term(&l.div(&lg).expect("lcm"), &cg.recip());
    Ok(&a - &b)
}

pub fn buchberger(polys: &[Polynomial], ord: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_deadline(polys, ord, Deadline::none())
}

/// As [`buchberger`], giving up with a timeout once `deadline` passes.
pub fn buchberger_with_deadline(
    polys: &[Polynomial],
    ord: &MonomialOrder,
    deadline: Deadline,
) -> Result<GroebnerBasis> {
    for p in polys {
        if !crate::poly::same_context(p.context(), ord.context()) {
            return Err(Error::ContextMismatch);
        }
    }
    let mut g: Vec<Lp> = Vec::new();
    for p in polys.iter().filter(|p| !p.is_zero()) {
        let lp = Lp::from_poly(p, ord).monic();
        if !g.contains(&lp) {
            g.push(lp);
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..g.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let all = |_: &Lp| true;
    while !pairs.is_empty() {
        deadline.check("groebner")?;
        // Normal selection: smallest lcm, then smallest indices.
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = key_lcm(g[a.0].lm(), g[a.1].lm());
                let lb = key_lcm(g[b.0].lm(), g[b.1].lm());
                la.cmp(&lb).then(a.cmp(b))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pos);
        done.insert((i, j));
        if key_coprime(g[i].lm(), g[j].lm()) {
            continue;
        }
        let l = key_lcm(g[i].lm(), g[j].lm());
        let pending = |a: usize, b: usize| {
            let p = (a.min(b), a.max(b));
            pairs.contains(&p)
        };
        let chain = (0..g.len()).any(|k| k != i && k != j && divides(g[k].lm(), &l) && !pending(i, k) && !pending(j, k));
        if chain {
            continue;
        }
        let h = reduce(&spoly(&g[i], &g[j]), &g, &all);
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        let k = g.len();
        g.push(h);
        for a in 0..k {
            pairs.push((a, k));
        }
    }
    Ok(finish(g, ord))
}

/// Minimalize, inter-reduce, normalize monic, sort.
fn finish(g: Vec<Lp>, ord: &MonomialOrder) -> GroebnerBasis {
    let mut minimal: Vec<Lp> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(j, q)| {
            j != i && divides(q.lm(), p.lm()) && (q.lm() != p.lm() || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    minimal.sort_by(|a, b| b.lm().cmp(a.lm()));
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Lp> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        reduced.push(reduce(&minimal[i], &others, &|_| true).monic());
    }
    GroebnerBasis {
        generators: reduced.iter().map(|p| p.to_poly(ord)).collect(),
        order: ord.clone(),
        reduced: true,
    }
}

/// Free-function form of [`GroebnerBasis::normal_form`].
pub fn normal_form(f: &Polynomial, g: &GroebnerBasis) -> Result<Polynomial> {
    g.normal_form(f)
}

pub fn is_member(f: &Polynomial, g: &GroebnerBasis) -> Result<bool> {
    g.is_member(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarContext;

    fn setup() -> (Arc<VarContext>, MonomialOrder) {
        let ctx = VarContext::new(&["x", "y", "z"]).unwrap();
        let ord = MonomialOrder::context_order(&ctx);
        (ctx, ord)
    }

    #[test]
    fn s_polynomial_examples() {
        let (ctx, ord) = setup();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        assert_eq!(s_polynomial(&p("x*y-1"), &p("y^2-1"), &ord).unwrap(), p("x-y"));
        assert!(s_polynomial(&p("x*y-1"), &p("x*y-1"), &ord).unwrap().is_zero());
        assert!(s_polynomial(&p("x"), &p("y"), &ord).unwrap().is_zero());
        assert!(s_polynomial(&p("0"), &p("y"), &ord).is_err());
    }

    #[test]
    fn small_bases() {
        let (ctx, ord) = setup();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        let g = buchberger(&[p("x*y-1"), p("y^2-1")], &ord).unwrap();
        assert_eq!(g.generators(), &[p("x-y"), p("y^2-1")]);
        let g = buchberger(&[p("2*x-2")], &ord).unwrap();
        assert_eq!(g.generators(), &[p("x-1")]);
        assert!(buchberger(&[], &ord).unwrap().is_empty());
        assert!(buchberger(&[p("0")], &ord).unwrap().is_empty());
        let g = buchberger(&[p("x-1"), p("x+1")], &ord).unwrap();
        assert_eq!(g.generators(), &[p("1")]);
    }

    #[test]
    fn spheres_and_normal_forms() {
        let (ctx, ord) = setup();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        let s1 = p("(x-1)^2 + y^2 + z^2 - 3");
        let s2 = p("(x+1)^2 + y^2 + z^2 - 3");
        let g = buchberger(&[s1.clone(), s2.clone()], &ord).unwrap();
        assert_eq!(g.generators(), &[p("x"), p("y^2+z^2-2")]);
        assert!(g.normal_form(&s1).unwrap().is_zero());
        assert_eq!(g.normal_form(&p("x^2+y^2-1")).unwrap(), p("1-z^2"));
        assert!(g.is_member(&s2).unwrap());
        assert!(g.is_member(&p("0")).unwrap());
        let e = buchberger(&[], &ord).unwrap();
        assert_eq!(e.normal_form(&s1).unwrap(), s1);
        let one = buchberger(&[p("x-1")], &ord).unwrap();
        assert!(!one.is_member(&p("1")).unwrap());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let (_, ord) = setup();
        let g = buchberger(&[], &ord).unwrap();
        assert!(g.check_order(&ord).is_ok());
        assert!(matches!(g.check_order(&ord.reversed()), Err(Error::OrderMismatch { .. })));
    }
}
