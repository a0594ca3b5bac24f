use super::{FoFormula, Matrix};

const INDENT: &str = "    ";

fn leaf(m: &Matrix, names: &dyn Fn(usize) -> String) -> Option<String> {
    match m {
        Matrix::Conj(c) => Some(super::render_conjunction(c, names)),
        _ => None,
    }
}

fn block(m: &Matrix, depth: usize, names: &dyn Fn(usize) -> String, out: &mut Vec<String>) {
    let pad = INDENT.repeat(depth);
    match m {
        Matrix::Conj(_) => out.push(format!("{pad}[{}]", leaf(m, names).expect("leaf"))),
        Matrix::Implies(a, b) => match (leaf(a, names), leaf(b, names)) {
            (Some(l), Some(r)) => out.push(format!("{pad}[{l} ==> {r} ]")),
            _ => {
                out.push(format!("{pad}["));
                let mut lhs = Vec::new();
                block(a, depth + 1, names, &mut lhs);
                let last = lhs.len() - 1;
                lhs[last].push_str(" ==> ");
                out.extend(lhs);
                block(b, depth + 1, names, out);
                out.push(format!("{pad} ]"));
            }
        },
        Matrix::And(parts) => {
            out.push(format!("{pad}["));
            for (i, p) in parts.iter().enumerate() {
                let mut lines = Vec::new();
                block(p, depth + 1, names, &mut lines);
                if i + 1 < parts.len() {
                    let last = lines.len() - 1;
                    lines[last].push_str(" /\\");
                }
                out.extend(lines);
            }
            out.push(format!("{pad}]"));
        }
    }
}

/// Renders in the bracket layout of hand-written qepcad input, ending in `.`.
pub fn emit_qepcad(f: &FoFormula) -> String {
    let names = |v: usize| f.name(v);
    let prefix: String = f.prefix.iter().map(|(q, v)| format!("({} {})", q.letter(), f.name(*v))).collect();
    let mut lines = Vec::new();
    block(&f.matrix, 0, &names, &mut lines);
    let last = lines.len() - 1;
    lines[last].push('.');
    let mut out = String::new();
    if !prefix.is_empty() {
        out.push_str(&prefix);
        out.push('\n');
    }
    out.push_str(&lines.join("\n"));
    out.push('\n');
    out
}

/// A complete qepcad input: comment, variable list (free variables first,
/// then bound ones in prefix order), free-variable count, formula, `finish`.
pub fn qepcad_input(f: &FoFormula, comment: &str) -> String {
    let free = f.free_vars();
    let mut vars: Vec<String> = free.iter().map(|&v| f.name(v)).collect();
    vars.extend(f.prefix.iter().map(|(_, v)| f.name(*v)));
    let comment = comment.replace(['[', ']'], "");
    format!("[ {comment} ]\n({})\n{}\n{}finish\n", vars.join(","), free.len(), emit_qepcad(f))
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Drops whitespace except a single space between two word characters.
pub fn normalize_whitespace(text: &str) -> String {
    let mut out = String::new();
    let mut pending_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            pending_space = true;
            continue;
        }
        if pending_space && out.chars().last().is_some_and(is_word) && is_word(c) {
            out.push(' ');
        }
        pending_space = false;
        out.push(c);
    }
    out
}
