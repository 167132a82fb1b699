//! Problem-file reader and writer.
//!
//! ```text
//! # comment
//! vars: x > y > z
//! quantifiers: exists x; exists y
//! eqs:
//! (x-1)^2 + y^2 + z^2 - 3
//! constraints:
//! x^2 + y^2 - 1 < 0
//! ```
//!
//! Each constraint line is a formula; the lines are conjoined.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{is_reserved, Formula};
use crate::pipeline::{Problem, Quantifier};
use crate::poly::{MonomialOrder, Polynomial, VarContext, Variable};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Eqs,
    Constraints,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Column (1-based) of `part` inside `line`, both slices of the same text.
fn column_of(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

pub fn parse_problem(text: &str) -> Result<Problem> {
    let mut ctx = None;
    let mut quantifiers: Option<(usize, &str, &str)> = None;
    let mut eqs: Vec<(usize, &str, &str)> = Vec::new();
    let mut cons: Vec<(usize, &str, &str)> = Vec::new();
    let mut section = Section::Header;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let header = trimmed.split_once(':').map(|(k, v)| (k.trim(), v.trim()));
        match header {
            Some(("vars", rest)) => {
                if ctx.is_some() {
                    return Err(parse_err(lineno, column_of(raw, trimmed), "duplicate `vars:` line"));
                }
                let names: Vec<&str> = rest.split('>').map(str::trim).collect();
                for name in &names {
                    let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                    if !valid || is_reserved(name) {
                        return Err(parse_err(lineno, column_of(raw, rest), format!("invalid variable name `{name}`")));
                    }
                }
                ctx = Some(VarContext::new(&names).map_err(|e| parse_err(lineno, column_of(raw, rest), e.to_string()))?);
                section = Section::Header;
            }
            Some(("quantifiers", rest)) => {
                quantifiers = Some((lineno, raw, rest));
                section = Section::Header;
            }
            Some(("eqs", rest)) => {
                section = Section::Eqs;
                if !rest.is_empty() {
                    eqs.push((lineno, raw, rest));
                }
            }
            Some(("constraints", rest)) => {
                section = Section::Constraints;
                if !rest.is_empty() {
                    cons.push((lineno, raw, rest));
                }
            }
            _ => match section {
                Section::Eqs => eqs.push((lineno, raw, trimmed)),
                Section::Constraints => cons.push((lineno, raw, trimmed)),
                Section::Header => {
                    return Err(parse_err(lineno, column_of(raw, trimmed), "expected a section header"));
                }
            },
        }
    }

    let ctx = ctx.ok_or_else(|| parse_err(1, 1, "missing `vars:` line"))?;
    let order = MonomialOrder::context_order(&ctx);

    let mut prefix: Vec<(Quantifier, Variable)> = Vec::new();
    if let Some((lineno, raw, rest)) = quantifiers {
        for group in rest.split(';').map(str::trim).filter(|g| !g.is_empty()) {
            let mut words = group.split_whitespace();
            let q: Quantifier = words
                .next()
                .expect("nonempty group")
                .parse()
                .map_err(|e: Error| parse_err(lineno, column_of(raw, group), e.to_string()))?;
            let mut any = false;
            for w in words {
                let v = ctx
                    .variable(w.trim_end_matches(','))
                    .map_err(|_| parse_err(lineno, column_of(raw, w), format!("unknown variable `{w}`")))?;
                prefix.push((q, v));
                any = true;
            }
            if !any {
                return Err(parse_err(lineno, column_of(raw, group), "quantifier without variables"));
            }
        }
    }

    let equations = eqs
        .into_iter()
        .map(|(lineno, raw, part)| Polynomial::parse_at(&ctx, part, lineno, column_of(raw, part) - 1))
        .collect::<Result<Vec<_>>>()?;
    let constraint = Formula::and(
        cons.into_iter()
            .map(|(lineno, raw, part)| Formula::parse_at(&ctx, part, lineno, column_of(raw, part) - 1))
            .collect::<Result<Vec<_>>>()?,
    );
    Problem::new(equations, constraint, prefix, order)
}

/// Writes `problem` in the file format; the declared order becomes `vars:`.
pub fn write_problem(problem: &Problem) -> String {
    let ctx = problem.context();
    let mut out = String::new();
    let names: Vec<&str> = problem.order().precedence().iter().map(|&v| ctx.name(v)).collect();
    let _ = writeln!(out, "vars: {}", names.join(" > "));
    if !problem.prefix().is_empty() {
        let q: Vec<String> = problem
            .prefix()
            .iter()
            .map(|(q, v)| format!("{q} {}", ctx.name(*v)))
            .collect();
        let _ = writeln!(out, "quantifiers: {}", q.join("; "));
    }
    let _ = writeln!(out, "eqs:");
    for e in problem.equations() {
        let _ = writeln!(out, "{e}");
    }
    let _ = writeln!(out, "constraints:");
    match problem.constraint() {
        Formula::Const(true) => {}
        Formula::And(parts) => {
            for p in parts {
                let _ = writeln!(out, "{p}");
            }
        }
        f => {
            let _ = writeln!(out, "{f}");
        }
    }
    out
}
