use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::context::{same_context, VarContext, Variable};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Purely lexicographic monomial order given by an explicit precedence list,
/// highest (eliminated / projected first) to lowest.
#[derive(Clone)]
pub struct MonomialOrder {
    ctx: Arc<VarContext>,
    precedence: Vec<Variable>,
    rank: Vec<usize>,
}

impl PartialEq for MonomialOrder {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.precedence == other.precedence
    }
}

impl Eq for MonomialOrder {}

impl fmt::Debug for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialOrder({self})")
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.precedence.iter().map(|&v| self.ctx.name(v)).collect();
        write!(f, "{}", names.join(" > "))
    }
}

impl MonomialOrder {
    pub fn new(ctx: &Arc<VarContext>, precedence: Vec<Variable>) -> Result<Self> {
        let n = ctx.len();
        if precedence.len() != n {
            return Err(Error::InvalidOrder(format!(
                "precedence lists {} variables, context has {}",
                precedence.len(),
                n
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (i, v) in precedence.iter().enumerate() {
            if v.0 >= n || rank[v.0] != usize::MAX {
                return Err(Error::InvalidOrder("precedence is not a permutation".into()));
            }
            rank[v.0] = i;
        }
        Ok(MonomialOrder {
            ctx: ctx.clone(),
            precedence,
            rank,
        })
    }

    /// Order following the context's own variable order (first = highest).
    pub fn context_order(ctx: &Arc<VarContext>) -> Self {
        Self::new(ctx, ctx.variables().collect()).expect("identity permutation")
    }

    pub fn from_names<S: AsRef<str>>(ctx: &Arc<VarContext>, names: &[S]) -> Result<Self> {
        let vars = names
            .iter()
            .map(|n| ctx.variable(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, vars)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn precedence(&self) -> &[Variable] {
        &self.precedence
    }

    /// Position of `v` in the precedence list (0 = highest).
    pub fn rank(&self, v: Variable) -> usize {
        self.rank[v.0]
    }

    pub fn highest(&self) -> Option<Variable> {
        self.precedence.first().copied()
    }

    pub fn reversed(&self) -> Self {
        let mut p = self.precedence.clone();
        p.reverse();
        Self::new(&self.ctx, p).expect("reversal of a permutation")
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.precedence {
            match a.exponent(v).cmp(&b.exponent(v)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Lexicographic comparison, rejecting monomials from another context.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != self.ctx.len() || b.nvars() != self.ctx.len() {
            return Err(Error::ContextMismatch);
        }
        Ok(self.cmp_monomials(a, b))
    }

    /// Exponent vector permuted into precedence order, so that plain
    /// lexicographic comparison of the result agrees with this order.
    pub(crate) fn key(&self, m: &Monomial) -> Vec<u32> {
        self.precedence.iter().map(|&v| m.exponent(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    #[test]
    fn lex_comparisons() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        let ord = MonomialOrder::from_names(&ctx, &["x", "y"]).unwrap();
        let x = Monomial::var(2, Variable(0), 1);
        let y = Monomial::var(2, Variable(1), 1);
        assert_eq!(ord.compare(&x, &y).unwrap(), Ordering::Greater);
        let xy2 = Monomial::from_exponents(vec![1, 2]);
        let x2 = Monomial::from_exponents(vec![2, 0]);
        assert_eq!(ord.compare(&xy2, &x2).unwrap(), Ordering::Less);
        assert_eq!(ord.compare(&xy2, &xy2).unwrap(), Ordering::Equal);
        let other = Monomial::from_exponents(vec![1, 0, 0]);
        assert_eq!(ord.compare(&x, &other), Err(Error::ContextMismatch));
    }

    #[test]
    fn leading_terms() {
        let ctx = VarContext::new(&["x", "y", "z"]).unwrap();
        let ord = MonomialOrder::context_order(&ctx);
        let f = Polynomial::parse(&ctx, "y^2 + x^2 - 1").unwrap();
        let (m, c) = f.leading_term(&ord).unwrap();
        assert_eq!(m.exponents(), &[2, 0, 0]);
        assert_eq!(c, crate::poly::q(1));
        let (m, c) = Polynomial::from_int(&ctx, 5).leading_term(&ord).unwrap();
        assert!(m.is_one());
        assert_eq!(c, crate::poly::q(5));
        let s1 = Polynomial::parse(&ctx, "(x-1)^2 + y^2 + z^2 - 3").unwrap();
        assert_eq!(s1.leading_term(&ord).unwrap().0.exponents(), &[2, 0, 0]);
        assert!(Polynomial::zero(&ctx).leading_term(&ord).is_err());
        let rev = ord.reversed();
        assert_eq!(s1.leading_term(&rev).unwrap().0.exponents(), &[0, 0, 2]);
    }

    #[test]
    fn rejects_non_permutations() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        assert!(MonomialOrder::new(&ctx, vec![Variable(0), Variable(0)]).is_err());
        assert!(MonomialOrder::new(&ctx, vec![Variable(0)]).is_err());
    }
}
