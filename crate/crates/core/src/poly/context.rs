use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A variable, identified by its index in a [`VarContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(pub usize);

impl Variable {
    pub fn index(self) -> usize {
        self.0
    }
}

/// The ordered list of variable names a polynomial lives over.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !valid_name(n) {
                return Err(Error::InvalidContext(format!("bad variable name `{n}`")));
            }
            if out.iter().any(|m| m == n) {
                return Err(Error::InvalidContext(format!("duplicate variable `{n}`")));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(VarContext { names: out }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: Variable) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn variable(&self, name: &str) -> Result<Variable> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Variable)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> {
        (0..self.names.len()).map(Variable)
    }
}

impl fmt::Display for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

pub(crate) fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
