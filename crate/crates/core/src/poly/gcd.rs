//! Multivariate gcd over Q by recursive primitive remainder sequences, and
//! the content / squarefree helpers built on it.

use super::context::Variable;
use super::dense::{self, Dense};
use super::polynomial::Polynomial;

impl Polynomial {
    /// Greatest common divisor, normalized with [`Polynomial::primitive_normalized`].
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        gcd(self, other)
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: Variable) -> Polynomial {
        let coeffs = dense::to_dense(self, v);
        content_of(&coeffs, self)
    }

    /// `self` divided by its content with respect to `v`, normalized.
    pub fn primitive_part_in(&self, v: Variable) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c)
            .expect("content divides")
            .primitive_normalized()
    }

    /// Product of the distinct irreducible factors, normalized.
    pub fn squarefree_part(&self) -> Polynomial {
        if self.is_constant() {
            return self.primitive_normalized();
        }
        let mut g = self.clone();
        for v in self.variables() {
            if g.is_constant() {
                break;
            }
            g = gcd(&g, &self.derivative(v));
        }
        self.div_exact(&g).expect("gcd divides").primitive_normalized()
    }
}

fn content_of(coeffs: &Dense, template: &Polynomial) -> Polynomial {
    let mut g = Polynomial::zero(template.context());
    for c in coeffs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn highest_var(a: &Polynomial, b: &Polynomial) -> Option<Variable> {
    let va = a.variables();
    let vb = b.variables();
    va.into_iter().chain(vb).max()
}

pub(crate) fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive_normalized();
    }
    if b.is_zero() {
        return a.primitive_normalized();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(a.context());
    }
    if let Some(r) = a.scalar_ratio(b) {
        let _ = r;
        return a.primitive_normalized();
    }
    let v = highest_var(a, b).expect("non-constant");
    if !a.contains_var(v) {
        return gcd(a, &b.content_in(v));
    }
    if !b.contains_var(v) {
        return gcd(&a.content_in(v), b);
    }
    let da = dense::to_dense(a, v);
    let db = dense::to_dense(b, v);
    let ca = content_of(&da, a);
    let cb = content_of(&db, b);
    let c = gcd(&ca, &cb);
    let mut pa = dense::div_exact_scalar(&da, &ca).expect("content divides");
    let mut pb = dense::div_exact_scalar(&db, &cb).expect("content divides");
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    // Primitive PRS.
    loop {
        if pb.is_empty() {
            break;
        }
        if pb.len() == 1 {
            pa = vec![Polynomial::one(a.context())];
            break;
        }
        let r = dense::prem(&pa, &pb);
        pa = pb;
        if r.is_empty() {
            pb = Vec::new();
        } else {
            let cr = content_of(&r, a);
            pb = dense::div_exact_scalar(&r, &cr).expect("content divides");
        }
    }
    let cg = content_of(&pa, a);
    let g = dense::div_exact_scalar(&pa, &cg).expect("content divides");
    let g = dense::from_dense(&g, v, a);
    (&g * &c).primitive_normalized()
}
