//! Line-oriented `.gta` reader.
//!
//! ```text
//! alphabet a b c
//! states q1 top
//! initial q1
//! priority q1 1
//! trans q1 a AND top top
//! trans q1 b AND q1 q1
//! trans q1 c AND q1 q1
//! sink top ACCEPT
//! ```

use std::collections::HashSet;

use indexmap::IndexMap;

use super::{AutomatonError, Diagnostics, GameAutomaton, GameTransition, Mode, SinkKind};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let mut column = 0;
    let mut start_column = 0;
    for (i, c) in body.char_indices() {
        column += 1;
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &body[s..i], column: start_column });
            }
        } else if start.is_none() {
            start = Some(i);
            start_column = column;
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &body[s..], column: start_column });
    }
    tokens
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '∃' | '∀' | ','))
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Syntax { line, column, message: message.into() }
}

fn ident<'a>(line: usize, t: &Token<'a>) -> Result<&'a str, AutomatonError> {
    if is_ident(t.text) {
        Ok(t.text)
    } else {
        Err(syntax(line, t.column, format!("invalid identifier `{}`", t.text)))
    }
}

fn arity(line: usize, tokens: &[Token<'_>], n: usize) -> Result<(), AutomatonError> {
    if tokens.len() == n {
        Ok(())
    } else {
        let column = tokens.get(n).map_or(tokens[0].column, |t| t.column);
        Err(syntax(
            line,
            column,
            format!("`{}` expects {} argument(s), found {}", tokens[0].text, n - 1, tokens.len() - 1),
        ))
    }
}

/// Parses and validates a `.gta` document.
pub fn parse_automaton(text: &str) -> Result<GameAutomaton, AutomatonError> {
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Vec<String> = Vec::new();
    let mut initial: Option<(String, usize)> = None;
    let mut priority: IndexMap<String, u32> = IndexMap::new();
    let mut priority_lines: IndexMap<String, usize> = IndexMap::new();
    let mut delta: IndexMap<(String, String), GameTransition> = IndexMap::new();
    let mut delta_lines: Vec<(usize, String, String, GameTransition)> = Vec::new();
    let mut sinks: IndexMap<String, SinkKind> = IndexMap::new();
    let mut sink_lines: IndexMap<String, usize> = IndexMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };
        match head.text {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(syntax(line, head.column, "alphabet declared twice"));
                }
                if tokens.len() < 2 {
                    return Err(syntax(line, head.column, "alphabet needs at least one letter"));
                }
                let letters = tokens[1..]
                    .iter()
                    .map(|t| ident(line, t).map(str::to_string))
                    .collect::<Result<Vec<_>, _>>()?;
                alphabet = Some(letters);
            }
            "states" => {
                if tokens.len() < 2 {
                    return Err(syntax(line, head.column, "states needs at least one state"));
                }
                for t in &tokens[1..] {
                    states.push(ident(line, t)?.to_string());
                }
            }
            "initial" => {
                arity(line, &tokens, 2)?;
                if initial.is_some() {
                    return Err(syntax(line, head.column, "initial state declared twice"));
                }
                initial = Some((ident(line, &tokens[1])?.to_string(), line));
            }
            "priority" => {
                arity(line, &tokens, 3)?;
                let q = ident(line, &tokens[1])?.to_string();
                let p: u32 = tokens[2]
                    .text
                    .parse()
                    .map_err(|_| syntax(line, tokens[2].column, format!("invalid priority `{}`", tokens[2].text)))?;
                if priority.contains_key(&q) || sinks.contains_key(&q) {
                    return Err(AutomatonError::DuplicatePriority { line, state: q });
                }
                priority.insert(q.clone(), p);
                priority_lines.insert(q, line);
            }
            "trans" => {
                arity(line, &tokens, 6)?;
                let q = ident(line, &tokens[1])?.to_string();
                let a = ident(line, &tokens[2])?.to_string();
                let mode = match tokens[3].text {
                    "AND" => Mode::And,
                    "OR" => Mode::Or,
                    other => return Err(syntax(line, tokens[3].column, format!("invalid mode `{other}`, expected AND or OR"))),
                };
                let l = ident(line, &tokens[4])?;
                let r = ident(line, &tokens[5])?;
                let t = GameTransition::new(mode, l, r);
                if delta.contains_key(&(q.clone(), a.clone())) || sinks.contains_key(&q) {
                    return Err(syntax(line, head.column, format!("duplicate transition for ({q}, {a})")));
                }
                delta.insert((q.clone(), a.clone()), t.clone());
                delta_lines.push((line, q, a, t));
            }
            "sink" => {
                arity(line, &tokens, 3)?;
                let q = ident(line, &tokens[1])?.to_string();
                let kind = match tokens[2].text {
                    "ACCEPT" => SinkKind::Accept,
                    "REJECT" => SinkKind::Reject,
                    other => {
                        return Err(syntax(line, tokens[2].column, format!("invalid sink kind `{other}`, expected ACCEPT or REJECT")))
                    }
                };
                if priority.contains_key(&q) || sinks.contains_key(&q) {
                    return Err(AutomatonError::DuplicatePriority { line, state: q });
                }
                if delta.keys().any(|(s, _)| s == &q) {
                    return Err(syntax(line, head.column, format!("sink `{q}` already has transitions")));
                }
                sinks.insert(q.clone(), kind);
                sink_lines.insert(q, line);
            }
            other => return Err(syntax(line, head.column, format!("unknown keyword `{other}`"))),
        }
    }

    let alphabet = alphabet.ok_or_else(|| syntax(1, 1, "missing `alphabet` declaration"))?;
    let (initial, initial_line) = initial.ok_or_else(|| syntax(1, 1, "missing `initial` declaration"))?;

    let declared: HashSet<&str> = states.iter().map(String::as_str).collect();
    let mut diags = Diagnostics::default();
    let at = |line: usize| Some(format!("line {line}"));
    if !declared.contains(initial.as_str()) {
        diags.error("undefined-state", format!("undefined state `{initial}`"), at(initial_line));
    }
    for (q, line) in &priority_lines {
        if !declared.contains(q.as_str()) {
            diags.error("undefined-state", format!("undefined state `{q}`"), at(*line));
        }
    }
    for (q, line) in &sink_lines {
        if !declared.contains(q.as_str()) {
            diags.error("undefined-state", format!("undefined state `{q}`"), at(*line));
        }
    }
    let letters: HashSet<&str> = alphabet.iter().map(String::as_str).collect();
    for (line, q, a, t) in &delta_lines {
        for s in [q, &t.left, &t.right] {
            if !declared.contains(s.as_str()) {
                diags.error("undefined-state", format!("undefined state `{s}`"), at(*line));
            }
        }
        if !letters.contains(a.as_str()) {
            diags.error("unknown-letter", format!("unknown letter `{a}`"), at(*line));
        }
    }
    if !diags.is_ok() {
        return Err(AutomatonError::Invalid(diags));
    }

    // Sinks are sugar for a fixed priority and conjunctive self-loops; they
    // are stored in declaration order of `states`.
    let mut ordered_sinks = IndexMap::new();
    for q in &states {
        if let Some(kind) = sinks.get(q) {
            ordered_sinks.insert(q.clone(), *kind);
        }
    }
    let mut full_priority = IndexMap::new();
    let mut full_delta = IndexMap::new();
    for q in &states {
        if let Some(kind) = ordered_sinks.get(q) {
            full_priority.insert(q.clone(), kind.priority());
            for a in &alphabet {
                full_delta.insert((q.clone(), a.clone()), GameTransition::and(q.clone(), q.clone()));
            }
        } else {
            if let Some(p) = priority.get(q) {
                full_priority.insert(q.clone(), *p);
            }
            for a in &alphabet {
                if let Some(t) = delta.get(&(q.clone(), a.clone())) {
                    full_delta.insert((q.clone(), a.clone()), t.clone());
                }
            }
        }
    }

    let automaton = GameAutomaton {
        alphabet,
        states,
        initial,
        priority: full_priority,
        delta: full_delta,
        sinks: ordered_sinks,
    };
    let diags = automaton.validate();
    if diags.is_ok() {
        Ok(automaton)
    } else {
        Err(AutomatonError::Invalid(diags))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L1: &str = "\
alphabet a b c
states q1 top
initial q1
priority q1 1
trans q1 a AND top top
trans q1 b AND q1 q1
trans q1 c AND q1 q1
sink top ACCEPT        # accepting sink
";

    #[test]
    fn parses_l1() {
        let a = parse_automaton(L1).unwrap();
        assert_eq!(a.states.len(), 2);
        assert_eq!(a.priority_of("top"), Some(2));
        assert_eq!(a.transition("top", "b"), Some(&GameTransition::and("top", "top")));
        assert_eq!(a.transition("q1", "a"), Some(&GameTransition::and("top", "top")));
    }

    #[test]
    fn sink_only_automaton() {
        let a = parse_automaton("alphabet a\nstates top\ninitial top\nsink top ACCEPT\n").unwrap();
        assert_eq!(a.states, vec!["top".to_string()]);
        assert!(a.is_deterministic());
    }

    #[test]
    fn undefined_state_reported() {
        let text = L1.replace("trans q1 a AND top top", "trans q1 a AND q9 top");
        match parse_automaton(&text) {
            Err(AutomatonError::Invalid(d)) => {
                assert!(d.has_error("undefined-state"));
                assert!(d.to_string().contains("undefined state `q9`"));
                assert!(d.to_string().contains("line 5"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_transition_reported() {
        let text = L1.replace("trans q1 c AND q1 q1\n", "");
        match parse_automaton(&text) {
            Err(AutomatonError::Invalid(d)) => assert!(d.has_error("missing-transition")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_priority_reported() {
        let text = format!("{L1}priority q1 3\n");
        assert_eq!(
            parse_automaton(&text),
            Err(AutomatonError::DuplicatePriority { line: 9, state: "q1".into() })
        );
    }

    #[test]
    fn syntax_error_has_position() {
        let text = L1.replace("AND top top", "XOR top top");
        match parse_automaton(&text) {
            Err(AutomatonError::Syntax { line, column, .. }) => {
                assert_eq!(line, 5);
                assert_eq!(column, 12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn accepts_quantifier_letters() {
        let text = "alphabet ∃,1 ∀,1\nstates q1\ninitial q1\npriority q1 1\n\
                    trans q1 ∃,1 OR q1 q1\ntrans q1 ∀,1 AND q1 q1\n";
        let a = parse_automaton(text).unwrap();
        assert!(!a.is_deterministic());
    }

    #[test]
    fn render_is_canonical() {
        let a = parse_automaton(L1).unwrap();
        let rendered = a.render();
        assert_eq!(parse_automaton(&rendered).unwrap(), a);
        assert_eq!(parse_automaton(&rendered).unwrap().render(), rendered);
    }
}
