//! Univariate views of multivariate polynomials: a polynomial in a chosen
//! variable with polynomial coefficients, lowest power first.

use super::context::Variable;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use super::Rational;

pub(crate) type Dense = Vec<Polynomial>;

pub(crate) fn trim(a: &mut Dense) {
    while a.last().is_some_and(Polynomial::is_zero) {
        a.pop();
    }
}

pub(crate) fn to_dense(p: &Polynomial, v: Variable) -> Dense {
    let mut d = p.coefficients_in(v);
    trim(&mut d);
    d
}

pub(crate) fn from_dense(a: &[Polynomial], v: Variable, template: &Polynomial) -> Polynomial {
    Polynomial::from_coefficients(template.context(), v, a)
}

/// Degree; `None` for the zero polynomial.
pub(crate) fn degree(a: &Dense) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub(crate) fn scale(a: &Dense, c: &Polynomial) -> Dense {
    let mut out: Dense = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

/// `a` divided by the positive rational content of all its coefficients.
pub(crate) fn positive_primitive(a: &Dense) -> Dense {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for c in a {
        for (_, r) in c.terms() {
            num = num.gcd(r.numer());
            den = den.lcm(r.denom());
        }
    }
    if num.is_zero() || (num.is_one() && den.is_one()) {
        return a.clone();
    }
    let s = Rational::new(den, num);
    a.iter().map(|c| c.scale(&s)).collect()
}

pub(crate) fn derivative(a: &Dense) -> Dense {
    let mut out: Dense = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&super::q(i as i64)))
        .collect();
    trim(&mut out);
    out
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = degree(b).expect("pseudo-division by zero");
    let Some(da) = degree(a) else {
        return Vec::new();
    };
    if da < db {
        return a.clone();
    }
    let lc = b[db].clone();
    let mut r = a.clone();
    let mut steps = 0u32;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * &lc;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &lr;
            r[i + shift] = &r[i + shift] - &t;
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
        steps += 1;
    }
    let missing = (da - db + 1) as u32 - steps;
    if missing > 0 && !r.is_empty() {
        let f = lc.pow(missing);
        r = scale(&r, &f);
    }
    r
}

/// Exact division of every coefficient by `c`.
pub(crate) fn div_exact_scalar(a: &Dense, c: &Polynomial) -> Option<Dense> {
    a.iter().map(|x| x.div_exact(c)).collect()
}

