//! Reader for hand-authored systems in display syntax.
//!
//! ```text
//! x1 ≛μ 1/3 + 2/3 x1^2
//! x2 =nu[4] x2 x1
//! ```
//! `≛μ`/`=mu` default to priority 1 and `≛ν`/`=nu` to priority 2; a bracketed
//! priority overrides the default and must have the matching parity.

use super::{Equation, FixpointError, FixpointSystem, Quantifier, VarKind};
use crate::poly::parse_poly;

struct Line<'a> {
    number: usize,
    var: &'a str,
    quantifier: Quantifier,
    priority: Option<u32>,
    rhs: &'a str,
}

fn split(number: usize, raw: &str) -> Result<Option<Line<'_>>, FixpointError> {
    let body = raw.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let err = |message: &str| FixpointError::Parse { line: number, message: message.to_string() };
    let (var, rest) = body.split_once(char::is_whitespace).ok_or_else(|| err("expected `var ≛μ rhs`"))?;
    let rest = rest.trim_start();
    let (quantifier, rest) = if let Some(r) = rest.strip_prefix("≛μ").or_else(|| rest.strip_prefix("=mu")) {
        (Quantifier::Mu, r)
    } else if let Some(r) = rest.strip_prefix("≛ν").or_else(|| rest.strip_prefix("=nu")) {
        (Quantifier::Nu, r)
    } else {
        return Err(err("expected `≛μ`, `≛ν`, `=mu` or `=nu`"));
    };
    let (priority, rhs) = match rest.strip_prefix('[') {
        Some(r) => {
            let (p, tail) = r.split_once(']').ok_or_else(|| err("unterminated priority"))?;
            let p: u32 = p.trim().parse().map_err(|_| err("invalid priority"))?;
            (Some(p), tail)
        }
        None => (None, rest),
    };
    Ok(Some(Line { number, var, quantifier, priority, rhs: rhs.trim() }))
}

/// Parses one equation per line; variables may be used before their equation.
pub fn parse_system(text: &str) -> Result<FixpointSystem, FixpointError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(l) = split(i + 1, raw)? {
            lines.push(l);
        }
    }
    let names: Vec<&str> = lines.iter().map(|l| l.var).collect();
    let mut equations = Vec::with_capacity(lines.len());
    for l in &lines {
        let rhs = parse_poly(l.rhs, &mut |n| names.iter().position(|m| *m == n))
            .map_err(|e| FixpointError::Parse { line: l.number, message: e.to_string() })?;
        let priority = l.priority.unwrap_or(match l.quantifier {
            Quantifier::Mu => 1,
            Quantifier::Nu => 2,
        });
        if Quantifier::of_priority(priority) != l.quantifier {
            return Err(FixpointError::QuantifierParity(l.var.to_string()));
        }
        equations.push(Equation::new(l.var, rhs, priority, VarKind::Free));
    }
    FixpointSystem::new(equations)
}
