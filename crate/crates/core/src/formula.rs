//! Sign conditions and Boolean combinations of them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::poly::{is_keyword, tokenize, Parser, Polynomial, RelToken, Tok, VarContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::Eq,
        Relation::Ne,
        Relation::Lt,
        Relation::Gt,
        Relation::Le,
        Relation::Ge,
    ];

    /// Whether a value of the given sign (-1, 0, 1) satisfies `_ rel 0`.
    pub fn holds(self, sign: i8) -> bool {
        match self {
            Relation::Eq => sign == 0,
            Relation::Ne => sign != 0,
            Relation::Lt => sign < 0,
            Relation::Gt => sign > 0,
            Relation::Le => sign <= 0,
            Relation::Ge => sign >= 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    /// Short name used in file names and labels.
    pub fn slug(self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::Ne => "ne",
            Relation::Lt => "lt",
            Relation::Gt => "gt",
            Relation::Le => "le",
            Relation::Ge => "ge",
        }
    }
}

impl From<RelToken> for Relation {
    fn from(t: RelToken) -> Self {
        match t {
            RelToken::Eq => Relation::Eq,
            RelToken::Ne => Relation::Ne,
            RelToken::Lt => Relation::Lt,
            RelToken::Gt => Relation::Gt,
            RelToken::Le => Relation::Le,
            RelToken::Ge => Relation::Ge,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "=" | "==" => Relation::Eq,
            "!=" | "<>" => Relation::Ne,
            "<" => Relation::Lt,
            ">" => Relation::Gt,
            "<=" => Relation::Le,
            ">=" => Relation::Ge,
            _ => return Err(Error::Invalid(format!("unknown relation `{s}`"))),
        })
    }
}

/// `poly rel 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignCondition {
    pub poly: Polynomial,
    pub rel: Relation,
}

impl SignCondition {
    pub fn new(poly: Polynomial, rel: Relation) -> Self {
        SignCondition { poly, rel }
    }

    /// Truth value when the polynomial is constant.
    pub fn decided(&self) -> Option<bool> {
        self.poly.constant_value().map(|c| {
            let s = if c.is_positive() {
                1
            } else if c.is_negative() {
                -1
            } else {
                0
            };
            self.rel.holds(s)
        })
    }
}

impl fmt::Display for SignCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.poly, self.rel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Atom(SignCondition),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    /// Atom `poly rel 0`, folded to a constant when `poly` is constant.
    pub fn atom(poly: Polynomial, rel: Relation) -> Formula {
        let c = SignCondition::new(poly, rel);
        match c.decided() {
            Some(b) => Formula::Const(b),
            None => Formula::Atom(c),
        }
    }

    pub fn and(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Const(true),
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::And(parts),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Const(false),
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Formula {
        Formula::Not(Box::new(inner))
    }

    /// Atoms in left-to-right order.
    pub fn atoms(&self) -> Vec<&SignCondition> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a SignCondition>) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(c) => out.push(c),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Not(f) => f.collect_atoms(out),
        }
    }

    /// Distinct atom polynomials, first occurrence order.
    pub fn polynomials(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for a in self.atoms() {
            if !out.contains(&a.poly) {
                out.push(a.poly.clone());
            }
        }
        out
    }

    /// Rebuilds the formula with every atom polynomial replaced by `f(poly)`.
    pub fn try_map<F>(&self, f: &mut F) -> Result<Formula>
    where
        F: FnMut(&Polynomial) -> Result<Polynomial>,
    {
        Ok(match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Atom(c) => Formula::atom(f(&c.poly)?, c.rel),
            Formula::And(v) => Formula::And(v.iter().map(|x| x.try_map(f)).collect::<Result<_>>()?),
            Formula::Or(v) => Formula::Or(v.iter().map(|x| x.try_map(f)).collect::<Result<_>>()?),
            Formula::Not(x) => Formula::Not(Box::new(x.try_map(f)?)),
        })
    }

    /// Evaluates with `sign` supplying the sign of each atom polynomial.
    pub fn evaluate<F>(&self, sign: &mut F) -> Result<bool>
    where
        F: FnMut(&Polynomial) -> Result<i8>,
    {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Atom(c) => c.rel.holds(sign(&c.poly)?),
            Formula::And(v) => {
                for x in v {
                    if !x.evaluate(sign)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(v) => {
                for x in v {
                    if x.evaluate(sign)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Not(x) => !x.evaluate(sign)?,
        })
    }
}

fn keyword(p: &Parser<'_>, word: &str) -> bool {
    matches!(p.peek(), Some(Tok::Ident(w)) if w == word)
}

fn disjunction(p: &mut Parser<'_>) -> Result<Formula> {
    let mut parts = vec![conjunction(p)?];
    while keyword(p, "or") {
        p.bump();
        parts.push(conjunction(p)?);
    }
    Ok(Formula::or(parts))
}

fn conjunction(p: &mut Parser<'_>) -> Result<Formula> {
    let mut parts = vec![unary(p)?];
    while keyword(p, "and") {
        p.bump();
        parts.push(unary(p)?);
    }
    Ok(Formula::and(parts))
}

fn unary(p: &mut Parser<'_>) -> Result<Formula> {
    match p.peek() {
        Some(Tok::Ident(w)) if w == "not" => {
            p.bump();
            Ok(Formula::not(unary(p)?))
        }
        Some(Tok::Ident(w)) if w == "true" || w == "false" => {
            let b = w == "true";
            p.bump();
            Ok(Formula::Const(b))
        }
        Some(Tok::LParen) => {
            // Either a parenthesized formula or a polynomial starting with `(`.
            let save = p.pos;
            p.bump();
            let grouped = disjunction(p).and_then(|f| p.expect(Tok::RParen, "`)`").map(|_| f));
            match grouped {
                Ok(f) if !matches!(p.peek(), Some(Tok::Rel(_) | Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Caret)) => Ok(f),
                _ => {
                    p.pos = save;
                    condition(p)
                }
            }
        }
        _ => condition(p),
    }
}

fn condition(p: &mut Parser<'_>) -> Result<Formula> {
    let lhs = p.polynomial()?;
    let rel = match p.peek() {
        Some(Tok::Rel(r)) => *r,
        _ => return Err(p.error("expected a relation")),
    };
    p.bump();
    let rhs = p.polynomial()?;
    Ok(Formula::atom(&lhs - &rhs, rel.into()))
}

impl Formula {
    /// Parses `poly rel poly` conditions combined with `and`, `or`, `not`
    /// and parentheses.
    pub fn parse(ctx: &Arc<VarContext>, text: &str) -> Result<Formula> {
        Self::parse_at(ctx, text, 1, 0)
    }

    pub(crate) fn parse_at(ctx: &Arc<VarContext>, text: &str, line: usize, column_offset: usize) -> Result<Formula> {
        let toks = tokenize(text, line, column_offset)?;
        let mut p = Parser::new(ctx, &toks, line, column_offset + text.chars().count() + 1);
        if p.at_end() {
            return Err(p.error("empty formula"));
        }
        let f = disjunction(&mut p)?;
        if !p.at_end() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }
}

/// Whether `name` is reserved by the formula syntax.
pub fn is_reserved(name: &str) -> bool {
    is_keyword(name)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Formula], op: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Const(true) => write!(f, "true"),
            Formula::Const(false) => write!(f, "false"),
            Formula::Atom(c) => write!(f, "{c}"),
            Formula::And(v) => join(f, v, "and"),
            Formula::Or(v) => join(f, v, "or"),
            Formula::Not(x) => write!(f, "not ({x})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarContext;

    #[test]
    fn constants_fold() {
        let ctx = VarContext::new(&["x"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        assert_eq!(Formula::atom(p("3"), Relation::Gt), Formula::Const(true));
        assert_eq!(Formula::atom(p("0"), Relation::Lt), Formula::Const(false));
        assert!(matches!(Formula::atom(p("x"), Relation::Lt), Formula::Atom(_)));
    }

    #[test]
    fn evaluation() {
        let ctx = VarContext::new(&["x", "y"]).unwrap();
        let p = |s: &str| Polynomial::parse(&ctx, s).unwrap();
        let f = Formula::and(vec![
            Formula::atom(p("x"), Relation::Gt),
            Formula::not(Formula::atom(p("y"), Relation::Eq)),
        ]);
        let mut signs = |q: &Polynomial| Ok(if *q == p("x") { 1 } else { 0 });
        assert!(!f.evaluate(&mut signs).unwrap());
        assert_eq!(f.polynomials(), vec![p("x"), p("y")]);
        let parsed = Formula::parse(&ctx, "x > 0 and not (y = 0)").unwrap();
        assert_eq!(parsed, f);
        let g = Formula::parse(&ctx, "(x+1)*y <= 2 or (x < y and true)").unwrap();
        assert_eq!(
            g,
            Formula::or(vec![
                Formula::atom(p("(x+1)*y-2"), Relation::Le),
                Formula::and(vec![Formula::atom(p("x-y"), Relation::Lt), Formula::Const(true)]),
            ])
        );
        assert!(Formula::parse(&ctx, "x + and 1").is_err());
        assert!(matches!(Formula::parse(&ctx, "x > 0 y"), Err(Error::Parse { column: 7, .. })));
        for r in Relation::ALL {
            assert_eq!(r.symbol().parse::<Relation>().unwrap(), r);
        }
    }
}
