//! Resultants, discriminants and principal subresultant coefficients.
//!
//! Resultants use the subresultant PRS. Determinants of Sylvester-type
//! matrices (fraction-free Bareiss elimination) give the principal
//! subresultant coefficients and serve as an independent check of the PRS.

use super::context::Variable;
use super::dense::{self, Dense};
use super::polynomial::Polynomial;
use crate::error::{Error, Result};

impl Polynomial {
    /// Resultant with respect to `v`.
    pub fn resultant(&self, other: &Polynomial, v: Variable) -> Result<Polynomial> {
        self.check_context(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial("resultant"));
        }
        if self.degree(v) == 0 && other.degree(v) == 0 {
            return Err(Error::Degree("resultant: both polynomials are constant in the variable".into()));
        }
        let a = dense::to_dense(self, v);
        let b = dense::to_dense(other, v);
        Ok(subresultant_resultant(a, b, self))
    }

    /// `res_v(p, dp/dv) / lc_v(p)`, with no alternating sign factor.
    pub fn discriminant(&self, v: Variable) -> Result<Polynomial> {
        if self.degree(v) < 2 {
            return Err(Error::Degree("discriminant needs degree at least 2".into()));
        }
        let r = self.resultant(&self.derivative(v), v)?;
        let lc = self.leading_coefficient_in(v);
        Ok(r.div_exact(&lc).expect("leading coefficient divides the resultant"))
    }

    /// j-th principal subresultant coefficient of `self` and `other` in `v`.
    pub fn psc(&self, other: &Polynomial, v: Variable, j: usize) -> Polynomial {
        let a = dense::to_dense(self, v);
        let b = dense::to_dense(other, v);
        let m = sylvester_submatrix(&a, &b, j, self);
        determinant(m, self)
    }
}

fn pow(p: &Polynomial, e: usize) -> Polynomial {
    p.pow(e as u32)
}

fn subresultant_resultant(mut a: Dense, mut b: Dense, template: &Polynomial) -> Polynomial {
    let one = Polynomial::one(template.context());
    let mut da = a.len() - 1;
    let mut db = b.len() - 1;
    let mut sign_negative = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = true;
        }
    }
    if db == 0 {
        let r = pow(&b[0], da);
        return if sign_negative { -r } else { r };
    }
    let mut g = one.clone();
    let mut h = one;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = dense::prem(&a, &b);
        a = b;
        if r.is_empty() {
            return Polynomial::zero(template.context());
        }
        let divisor = &g * &pow(&h, delta);
        b = dense::div_exact_scalar(&r, &divisor).expect("subresultant division is exact");
        g = a[a.len() - 1].clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            pow(&g, delta)
                .div_exact(&pow(&h, delta - 1))
                .expect("subresultant h update is exact")
        };
        if b.len() == 1 {
            break;
        }
    }
    let da = a.len() - 1;
    let lb = &b[0];
    let num = pow(lb, da);
    let res = if da == 0 {
        &num * &h
    } else {
        num.div_exact(&pow(&h, da - 1)).expect("final subresultant step is exact")
    };
    if sign_negative {
        -res
    } else {
        res
    }
}

/// Rows `x^{n-j-1} a, ..., a, x^{m-j-1} b, ..., b` restricted to the first
/// `m + n - 2j` columns (coefficients of `x^{m+n-j-1}` down to `x^j`).
fn sylvester_submatrix(a: &Dense, b: &Dense, j: usize, template: &Polynomial) -> Vec<Vec<Polynomial>> {
    let zero = Polynomial::zero(template.context());
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n - 2 * j;
    let top = m + n - j - 1;
    let mut rows = Vec::with_capacity(size);
    let mut push_shifts = |p: &Dense, deg: usize, count: usize| {
        for s in (0..count).rev() {
            // Row for x^s * p: coefficient of x^k is p[k - s].
            let row: Vec<Polynomial> = (0..size)
                .map(|col| {
                    let k = top - col;
                    if k >= s && k - s <= deg {
                        p[k - s].clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect();
            rows.push(row);
        }
    };
    push_shifts(a, m, n - j);
    push_shifts(b, n, m - j);
    rows
}

/// Full Sylvester matrix of `p` and `q` in `v`.
pub fn sylvester_matrix(p: &Polynomial, q: &Polynomial, v: Variable) -> Vec<Vec<Polynomial>> {
    let a = dense::to_dense(p, v);
    let b = dense::to_dense(q, v);
    sylvester_submatrix(&a, &b, 0, p)
}

/// Determinant over the polynomial ring by fraction-free Bareiss elimination.
pub fn determinant(mut m: Vec<Vec<Polynomial>>, template: &Polynomial) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(template.context());
    }
    let mut negate = false;
    let mut prev = Polynomial::one(template.context());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(template.context()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarContext;

    #[test]
    fn resultant_examples() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        let x = Variable(0);
        assert_eq!(p("x^2-2").resultant(&p("x-y"), x).unwrap(), p("y^2-2"));
        assert_eq!(p("x^3+y").resultant(&p("5"), x).unwrap(), p("125"));
        assert_eq!(p("x-1").resultant(&p("x+1"), x).unwrap(), p("2"));
        assert!(p("y").resultant(&p("y+1"), x).is_err());
    }

    #[test]
    fn discriminant_examples() {
        let ctx = VarContext::new(&["x", "y", "b", "c"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        // Plain quotient res(p, p')/lc: the classical sign factor is not applied.
        let d = p("x^2+b*x+c").discriminant(Variable(0)).unwrap();
        let oracle = determinant(sylvester_matrix(&p("x^2+b*x+c"), &p("2*x+b"), Variable(0)), &d);
        assert_eq!(d, oracle);
        assert_eq!(-d, p("b^2-4*c"));
        let d = p("x^2+y^2-1").discriminant(Variable(1)).unwrap();
        assert_eq!(d, p("4*(x^2-1)"));
        assert!(p("(x-1)^2").discriminant(Variable(0)).unwrap().is_zero());
        assert!(p("x+1").discriminant(Variable(0)).is_err());
    }

    #[test]
    fn determinant_agrees_with_prs() {
        let ctx = VarContext::new(&["x", "y", "z"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        let pairs = [
            ("x^3 - y*x + z", "x^2*z + 2*x - y"),
            ("x^4 + y", "x^2 - z*x + 1"),
            ("y*x^2 + x + z", "z*x^3 - y"),
        ];
        for (a, b) in pairs {
            let (a, b) = (p(a), p(b));
            let prs = a.resultant(&b, Variable(0)).unwrap();
            let det = determinant(sylvester_matrix(&a, &b, Variable(0)), &a);
            assert_eq!(prs, det, "{a} / {b}");
            assert_eq!(a.psc(&b, Variable(0), 0), det);
        }
    }
}
