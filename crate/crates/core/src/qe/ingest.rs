use super::{Atom, Conjunction, QeError, Rel};
use crate::poly::parse_poly;

const RELATIONS: [(&str, Rel); 6] =
    [("<=", Rel::Le), (">=", Rel::Ge), ("/=", Rel::Ne), ("<", Rel::Lt), (">", Rel::Gt), ("=", Rel::Eq)];

fn split_relation(text: &str) -> Result<(&str, Rel, &str), QeError> {
    for (i, _) in text.char_indices() {
        for (sym, rel) in RELATIONS {
            if text[i..].starts_with(sym) {
                return Ok((&text[..i], rel, &text[i + sym.len()..]));
            }
        }
    }
    Err(QeError::Parse(format!("no relation in `{}`", text.trim())))
}

/// Parses a qepcad answer such as `x2 - 1 < 0 /\ 8 x2^2 - 12 x2 + 1 = 0`.
/// Identifiers are resolved after dropping underscores, so `x_2` names `x2`;
/// `resolve` returns `None` for names that may not occur.
pub fn ingest_qf_answer(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Option<usize>,
) -> Result<Conjunction, QeError> {
    let body = text.trim().trim_end_matches('.').trim();
    let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(body);
    if body.is_empty() {
        return Err(QeError::Parse("empty answer".into()));
    }
    let mut out = Vec::new();
    for part in body.split("/\\") {
        let part = part.trim();
        let part = part.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(part);
        let (l, rel, r) = split_relation(part)?;
        let mut unknown = None;
        let mut lookup = |name: &str| {
            let key = name.replace('_', "");
            let found = resolve(&key);
            if found.is_none() && unknown.is_none() {
                unknown = Some(name.to_string());
            }
            found
        };
        let lhs = parse_poly(l.trim(), &mut lookup);
        let rhs = parse_poly(r.trim(), &mut lookup);
        if let Some(name) = unknown {
            return Err(QeError::Multivariate(name));
        }
        let lhs = lhs.map_err(|e| QeError::Parse(e.to_string()))?;
        let rhs = rhs.map_err(|e| QeError::Parse(e.to_string()))?;
        out.push(Atom::new(lhs, rel, rhs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qe::render_conjunction;

    fn names(v: usize) -> String {
        ["x1", "x2"][v].to_string()
    }

    fn ingest(text: &str) -> Result<Conjunction, QeError> {
        ingest_qf_answer(text, &mut |n| ["x1", "x2"].iter().position(|m| *m == n))
    }

    #[test]
    fn round_trips() {
        for text in ["x2 - 1 < 0 /\\ 8 x2^2 - 12 x2 + 1 = 0", "x2 = 0", "2 x1 - 1 = 0", "4 x1 - 3 <= 0 /\\ x2^2 + 2 x1^2 - 3 x1 = 0"] {
            let c = ingest(text).unwrap();
            assert_eq!(render_conjunction(&c, &names), text);
        }
    }

    #[test]
    fn underscores_and_atom_count() {
        let c = ingest("x_2 = 0").unwrap();
        assert_eq!(render_conjunction(&c, &names), "x2 = 0");
        assert_eq!(ingest("x2 - 1 < 0 /\\ 8 x2^2 - 12 x2 + 1 = 0").unwrap().len(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(ingest("y = 0"), Err(QeError::Multivariate(_))));
        assert!(matches!(ingest("x1 + 1"), Err(QeError::Parse(_))));
        assert!(matches!(ingest("x1 = = 0"), Err(QeError::Parse(_))));
    }
}
