//! Real root isolation by Sturm sequences, over the rationals or over a
//! sample-point extension.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::tower::Tower;
use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::poly::dense::{self, Dense};
use crate::poly::{Polynomial, Rational};

/// Real algebraic number: the unique root of `defining` in `(lo, hi)`, or
/// the rational `lo` when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    defining: Polynomial,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicNumber {
    pub fn defining(&self) -> &Polynomial {
        &self.defining
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Midpoint of the isolating interval as a float.
    pub fn approx(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        rational_to_f64(&mid)
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Isolating interval of one root; `lo == hi` for an exact rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatedRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

fn two() -> Rational {
    Rational::from_integer(2.into())
}

struct Sturm<'a> {
    tower: &'a mut Tower,
    seq: Vec<Dense>,
    /// Positive integer multiples of `seq` when every coefficient is a
    /// rational constant.
    ints: Option<Vec<Vec<BigInt>>>,
    t: usize,
    deadline: Deadline,
}

/// Integer coefficients of a positive multiple of `d`, if `d` is constant
/// in every other variable.
fn integer_multiple(d: &Dense) -> Option<Vec<BigInt>> {
    let vals: Vec<Rational> = d.iter().map(|c| c.constant_value()).collect::<Option<_>>()?;
    let den = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    Some(vals.iter().map(|v| (v * Rational::from_integer(den.clone())).to_integer()).collect())
}

/// Sign of `sum c_i (a/b)^i` for `b > 0`, via `sum c_i a^i b^(n-i)`.
fn sign_integer(c: &[BigInt], x: &Rational) -> i8 {
    let (a, b) = (x.numer(), x.denom());
    let Some((top, rest)) = c.split_last() else {
        return 0;
    };
    let mut acc = top.clone();
    let mut bp = BigInt::one();
    for ci in rest.iter().rev() {
        bp *= b;
        acc = acc * a + ci * &bp;
    }
    match acc.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl Sturm<'_> {
    fn sign_at(&mut self, i: usize, x: &Rational) -> Result<i8> {
        if let Some(ints) = &self.ints {
            return Ok(sign_integer(&ints[i], x));
        }
        let v = self.tower.eval_dense(&self.seq[i], x, self.t);
        self.tower.sign(&v)
    }

    fn variations(&mut self, x: &Rational) -> Result<usize> {
        let mut count = 0;
        let mut last = 0i8;
        for i in 0..self.seq.len() {
            let s = self.sign_at(i, x)?;
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        Ok(count)
    }

    /// Intervals `(a, b]` holding exactly one root each, left to right.
    fn bisect(
        &mut self,
        a: Rational,
        b: Rational,
        va: usize,
        vb: usize,
        out: &mut Vec<(Rational, Rational)>,
    ) -> Result<()> {
        self.deadline.check("cad")?;
        match va.saturating_sub(vb) {
            0 => Ok(()),
            1 => {
                out.push((a, b));
                Ok(())
            }
            _ => {
                let m = (&a + &b) / two();
                let vm = self.variations(&m)?;
                self.bisect(a, m.clone(), va, vm, out)?;
                self.bisect(m, b, vm, vb, out)
            }
        }
    }
}

/// Roots of `q` (monic, squarefree, positive degree, coefficients reduced
/// over the first `t` tower levels) at the tower's sample, in increasing order.
pub(crate) fn isolate_over(tower: &mut Tower, q: &Dense, t: usize, deadline: Deadline) -> Result<Vec<IsolatedRoot>> {
    debug_assert!(q.len() >= 2);
    let mut seq = vec![q.clone()];
    let mut d = dense::derivative(q);
    tower.trim_k(&mut d, t)?;
    if !d.is_empty() {
        seq.push(dense::positive_primitive(&d));
        loop {
            deadline.check("cad")?;
            let n = seq.len();
            let r = tower.prem_even_k(&seq[n - 2], &seq[n - 1], t)?;
            if r.is_empty() {
                break;
            }
            let neg: Dense = r.into_iter().map(|c| -c).collect();
            seq.push(dense::positive_primitive(&neg));
        }
    }

    // Cauchy bound; `q` is monic.
    let mut bound = Rational::one();
    for c in &q[..q.len() - 1] {
        let (lo, hi) = tower.enclosure(c);
        let m = lo.abs().max(hi.abs());
        if m > bound {
            bound = m;
        }
    }
    let b = Rational::from_integer((bound + Rational::one()).ceil().to_integer());

    let ints = seq.iter().map(integer_multiple).collect::<Option<Vec<_>>>();
    let mut sturm = Sturm {
        tower,
        seq,
        ints,
        t,
        deadline,
    };
    let lo = -b.clone();
    let vlo = sturm.variations(&lo)?;
    let vhi = sturm.variations(&b)?;
    let mut raw = Vec::new();
    sturm.bisect(lo, b, vlo, vhi, &mut raw)?;

    let rational_denominator = rational_coefficients(q);
    let mut roots = Vec::with_capacity(raw.len());
    for (mut a, mut b) in raw {
        if sturm.sign_at(0, &b)? == 0 {
            roots.push(IsolatedRoot { lo: b.clone(), hi: b });
            continue;
        }
        if sturm.sign_at(0, &a)? == 0 {
            // `a` is the previous root; move the left end off it.
            loop {
                let m = (&a + &b) / two();
                let vm = sturm.variations(&m)?;
                let vb = sturm.variations(&b)?;
                if vm - vb == 1 {
                    a = m;
                    break;
                }
                if sturm.sign_at(0, &m)? == 0 {
                    a = m.clone();
                    b = m;
                    break;
                }
                b = m;
            }
            if a == b {
                roots.push(IsolatedRoot { lo: a, hi: b });
                continue;
            }
        }
        let mut root = IsolatedRoot { lo: a, hi: b };
        if let Some(den) = &rational_denominator {
            detect_rational(&mut sturm, &mut root, den)?;
        }
        roots.push(root);
    }
    Ok(roots)
}

/// Common denominator of the coefficients when all are rational constants
/// of moderate size.
fn rational_coefficients(q: &Dense) -> Option<BigInt> {
    let mut den = BigInt::one();
    for c in q {
        let v = c.constant_value()?;
        den = den.lcm(v.denom());
    }
    (den.bits() <= 512).then_some(den)
}

/// A rational root of a monic `q` with coefficient denominator `den` is an
/// integer multiple of `1/den`; narrow the interval below `1/den` and test
/// the single candidate.
fn detect_rational(sturm: &mut Sturm<'_>, root: &mut IsolatedRoot, den: &BigInt) -> Result<()> {
    let step = Rational::new(BigInt::one(), den.clone());
    let s_lo = sturm.sign_at(0, &root.lo)?;
    while &root.hi - &root.lo >= step {
        let m = (&root.lo + &root.hi) / two();
        let s = sturm.sign_at(0, &m)?;
        if s == 0 {
            root.lo = m.clone();
            root.hi = m;
            return Ok(());
        }
        if s == s_lo {
            root.lo = m;
        } else {
            root.hi = m;
        }
    }
    let k = (&root.lo * Rational::from_integer(den.clone())).floor().to_integer() + BigInt::one();
    let cand = Rational::new(k, den.clone());
    if cand > root.lo && cand < root.hi && sturm.sign_at(0, &cand)? == 0 {
        root.lo = cand.clone();
        root.hi = cand;
    }
    Ok(())
}

/// Distinct real roots of a univariate polynomial, sorted, with disjoint
/// rational isolating intervals. Rational roots are reported exactly.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("isolate_real_roots"));
    }
    let vars = p.variables();
    if vars.len() > 1 {
        return Err(Error::Degree(format!("{p} is not univariate")));
    }
    let Some(&v) = vars.first() else {
        return Ok(Vec::new());
    };
    let ctx = p.context();
    let s = p.squarefree_part();
    let mut d = dense::to_dense(&s, v);
    let lc = d.last().and_then(Polynomial::constant_value).expect("constant coefficients");
    d = d.iter().map(|c| c.scale(&lc.recip())).collect();
    let mut tower = Tower::new(ctx, 64);
    let roots = isolate_over(&mut tower, &d, 0, Deadline::none())?;
    Ok(roots
        .into_iter()
        .map(|r| {
            let defining = if r.is_exact() {
                (&Polynomial::var(ctx, v) - &Polynomial::constant(ctx, r.lo.clone())).primitive_normalized()
            } else {
                s.clone()
            };
            AlgebraicNumber {
                defining,
                lo: r.lo,
                hi: r.hi,
            }
        })
        .collect())
}

/// Rational with the smallest denominator (then smallest magnitude) in the
/// open interval `(l, r)`, `l < r`.
pub fn simplest_between(l: &Rational, r: &Rational) -> Rational {
    debug_assert!(l < r);
    let zero = Rational::zero();
    if l < &zero && r > &zero {
        return zero;
    }
    if r <= &zero {
        return -simplest_between(&-r, &-l);
    }
    let fl = l.floor();
    let next = &fl + Rational::one();
    if &next < r {
        return next;
    }
    if *l == fl {
        let y = (Rational::one() / (r - &fl)).floor() + Rational::one();
        return fl + y.recip();
    }
    let inner = simplest_between(&(Rational::one() / (r - &fl)), &(Rational::one() / (l - &fl)));
    fl + inner.recip()
}

/// Rational samples for the sectors around the given sorted roots.
pub(crate) fn sector_samples(roots: &[IsolatedRoot]) -> Vec<Rational> {
    if roots.is_empty() {
        return vec![Rational::zero()];
    }
    let one = Rational::one();
    let mut out = Vec::with_capacity(roots.len() + 1);
    out.push(roots[0].lo.floor() - &one);
    for w in roots.windows(2) {
        let (l, r) = (&w[0].hi, &w[1].lo);
        out.push(if l == r { l.clone() } else { simplest_between(l, r) });
    }
    out.push(roots[roots.len() - 1].hi.ceil() + one);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, ratio, VarContext};

    #[test]
    fn isolates_examples() {
        let ctx = VarContext::new(&["x"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        let r = isolate_real_roots(&p("x^2-2")).unwrap();
        assert_eq!(r.len(), 2);
        let f = |x: &Rational| x * x - q(2);
        for a in &r {
            let (lo, hi) = a.interval();
            assert!(lo < hi && f(lo) * f(hi) < q(0));
        }
        assert!(r[0].interval().1 <= r[1].interval().0);
        assert!(r[0].approx() < 0.0 && r[1].approx() > 0.0);
        assert!(isolate_real_roots(&p("x^2+1")).unwrap().is_empty());
        let r = isolate_real_roots(&p("(x-1)*x*(x+1)")).unwrap();
        let exact: Vec<Rational> = r.iter().map(|a| a.as_rational().unwrap().clone()).collect();
        assert_eq!(exact, vec![q(-1), q(0), q(1)]);
        let r = isolate_real_roots(&p("(3*x-1)^2*(x^2-3)")).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[1].as_rational(), Some(&ratio(1, 3)));
        assert!(isolate_real_roots(&p("0")).is_err());
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&ratio(-1, 2), &q(3)), q(0));
        assert_eq!(simplest_between(&ratio(1, 3), &ratio(1, 2)), ratio(2, 5));
        assert_eq!(simplest_between(&q(1), &ratio(3, 2)), ratio(4, 3));
        assert_eq!(simplest_between(&ratio(3, 2), &q(2)), ratio(5, 3));
        assert_eq!(simplest_between(&q(-2), &ratio(-3, 2)), ratio(-5, 3));
        assert_eq!(simplest_between(&ratio(7, 10), &ratio(9, 10)), ratio(3, 4));
    }
}
