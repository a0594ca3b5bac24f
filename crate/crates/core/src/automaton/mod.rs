//! Game automata: alternating parity tree automata whose transitions are a
//! single conjunction or disjunction of a left and a right move.

mod builtin;
mod normalize;
mod parse;

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

pub use builtin::{builtin, Builtin};
pub use normalize::normalize_distinct_children;
pub use parse::parse_automaton;

pub type StateId = String;
pub type Letter = String;

/// Name of the accepting sink used by the builtin automata.
pub const TOP: &str = "top";
/// Name of the rejecting sink.
pub const BOT: &str = "bot";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    And,
    Or,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::And => f.write_str("AND"),
            Mode::Or => f.write_str("OR"),
        }
    }
}

/// `(L, left) ∧ (R, right)` for [`Mode::And`], `∨` for [`Mode::Or`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameTransition {
    pub mode: Mode,
    pub left: StateId,
    pub right: StateId,
}

impl GameTransition {
    pub fn new(mode: Mode, left: impl Into<StateId>, right: impl Into<StateId>) -> Self {
        GameTransition { mode, left: left.into(), right: right.into() }
    }

    pub fn and(left: impl Into<StateId>, right: impl Into<StateId>) -> Self {
        Self::new(Mode::And, left, right)
    }

    pub fn or(left: impl Into<StateId>, right: impl Into<StateId>) -> Self {
        Self::new(Mode::Or, left, right)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SinkKind {
    /// Accepting sink, priority 2.
    Accept,
    /// Rejecting sink, priority 1.
    Reject,
}

impl SinkKind {
    pub fn priority(self) -> u32 {
        match self {
            SinkKind::Accept => 2,
            SinkKind::Reject => 1,
        }
    }
}

/// A game automaton `⟨Σ, Q, q0, δ, π⟩`.
///
/// Fields are public so that malformed values can be constructed and fed to
/// [`GameAutomaton::validate`]; everything downstream expects a valid value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameAutomaton {
    pub alphabet: Vec<Letter>,
    pub states: Vec<StateId>,
    pub initial: StateId,
    pub priority: IndexMap<StateId, u32>,
    pub delta: IndexMap<(StateId, Letter), GameTransition>,
    /// States declared as distinguished sinks.
    pub sinks: IndexMap<StateId, SinkKind>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
    pub location: Option<String>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Some(loc) => write!(f, "{}: {} [{}]", loc, self.message, self.code),
            None => write!(f, "{} [{}]", self.message, self.code),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl Diagnostics {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn error(&mut self, code: &'static str, message: impl Into<String>, location: Option<String>) {
        self.errors.push(Diagnostic { code, message: message.into(), location });
    }

    pub fn warning(&mut self, code: &'static str, message: impl Into<String>, location: Option<String>) {
        self.warnings.push(Diagnostic { code, message: message.into(), location });
    }

    pub fn has_error(&self, code: &str) -> bool {
        self.errors.iter().any(|d| d.code == code)
    }

    pub fn has_warning(&self, code: &str) -> bool {
        self.warnings.iter().any(|d| d.code == code)
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.errors {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: duplicate priority declaration for state `{state}`")]
    DuplicatePriority { line: usize, state: StateId },
    #[error("invalid automaton: {0}")]
    Invalid(Diagnostics),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("bad builtin parameters: {0}")]
    BadParameters(String),
}

fn loc(q: &str, a: &str) -> Option<String> {
    Some(format!("δ({q},{a})"))
}

impl GameAutomaton {
    pub fn transition(&self, q: &str, a: &str) -> Option<&GameTransition> {
        self.delta.get(&(q.to_string(), a.to_string()))
    }

    pub fn state_index(&self, q: &str) -> Option<usize> {
        self.states.iter().position(|s| s == q)
    }

    pub fn priority_of(&self, q: &str) -> Option<u32> {
        self.priority.get(q).copied()
    }

    /// True iff every transition is conjunctive.
    pub fn is_deterministic(&self) -> bool {
        self.delta.values().all(|t| t.mode == Mode::And)
    }

    /// Checks the shape invariants; warnings flag transitions with equal children.
    pub fn validate(&self) -> Diagnostics {
        let mut d = Diagnostics::default();
        if self.alphabet.is_empty() {
            d.error("empty-alphabet", "alphabet is empty", None);
        }
        let mut seen = HashSet::new();
        for a in &self.alphabet {
            if !seen.insert(a.as_str()) {
                d.error("duplicate-letter", format!("duplicate letter `{a}`"), None);
            }
        }
        if self.states.is_empty() {
            d.error("no-states", "no states declared", None);
        }
        let mut states = HashSet::new();
        for q in &self.states {
            if !states.insert(q.as_str()) {
                d.error("duplicate-state", format!("duplicate state `{q}`"), None);
            }
        }
        let letters: HashSet<&str> = self.alphabet.iter().map(String::as_str).collect();
        if !states.contains(self.initial.as_str()) {
            d.error("undefined-state", format!("undefined state `{}` (initial)", self.initial), None);
        }
        for q in &self.states {
            if !self.priority.contains_key(q) {
                d.error("missing-priority", format!("no priority for state `{q}`"), Some(q.clone()));
            }
        }
        for q in self.priority.keys() {
            if !states.contains(q.as_str()) {
                d.error("undefined-state", format!("undefined state `{q}` (priority)"), None);
            }
        }
        for ((q, a), t) in &self.delta {
            if !states.contains(q.as_str()) {
                d.error("undefined-state", format!("undefined state `{q}` (transition source)"), loc(q, a));
            }
            if !letters.contains(a.as_str()) {
                d.error("unknown-letter", format!("unknown letter `{a}`"), loc(q, a));
            }
            for target in [&t.left, &t.right] {
                if !states.contains(target.as_str()) {
                    d.error("undefined-state", format!("undefined state `{target}`"), loc(q, a));
                }
            }
            if t.left == t.right {
                d.warning("equal-children", format!("equal children `{}`", t.left), loc(q, a));
            }
        }
        for q in &self.states {
            for a in &self.alphabet {
                if self.transition(q, a).is_none() {
                    d.error("missing-transition", format!("missing transition for ({q}, {a})"), loc(q, a));
                }
            }
        }
        for (s, kind) in &self.sinks {
            if !states.contains(s.as_str()) {
                d.error("undefined-state", format!("undefined state `{s}` (sink)"), None);
                continue;
            }
            let parity_ok = match (kind, self.priority_of(s)) {
                (SinkKind::Accept, Some(p)) => p % 2 == 0,
                (SinkKind::Reject, Some(p)) => p % 2 == 1,
                (_, None) => true,
            };
            if !parity_ok {
                d.error("bad-sink", format!("sink `{s}` has a priority of the wrong parity"), Some(s.clone()));
            }
            for a in &self.alphabet {
                if let Some(t) = self.transition(s, a) {
                    if t.mode != Mode::And || &t.left != s || &t.right != s {
                        d.error("bad-sink", format!("sink `{s}` must loop on `{a}`"), loc(s, a));
                    }
                }
            }
        }
        d
    }

    /// Canonical text form; [`parse_automaton`] inverts it.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("alphabet {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("states {}\n", self.states.join(" ")));
        out.push_str(&format!("initial {}\n", self.initial));
        for q in &self.states {
            if self.sinks.contains_key(q) {
                continue;
            }
            if let Some(p) = self.priority_of(q) {
                out.push_str(&format!("priority {q} {p}\n"));
            }
        }
        for q in &self.states {
            if self.sinks.contains_key(q) {
                continue;
            }
            for a in &self.alphabet {
                if let Some(t) = self.transition(q, a) {
                    out.push_str(&format!("trans {q} {a} {} {} {}\n", t.mode, t.left, t.right));
                }
            }
        }
        for (s, kind) in &self.sinks {
            let word = match kind {
                SinkKind::Accept => "ACCEPT",
                SinkKind::Reject => "REJECT",
            };
            out.push_str(&format!("sink {s} {word}\n"));
        }
        out
    }
}

impl fmt::Display for GameAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_is_deterministic_w13_is_not() {
        assert!(builtin(&Builtin::L(1)).unwrap().is_deterministic());
        assert!(!builtin(&Builtin::W(1, 3)).unwrap().is_deterministic());
    }

    #[test]
    fn missing_transition_is_an_error() {
        let mut a = builtin(&Builtin::L(1)).unwrap();
        a.delta.shift_remove(&("q1".to_string(), "c".to_string()));
        let d = a.validate();
        assert!(d.has_error("missing-transition"));
    }

    #[test]
    fn equal_children_warn() {
        let a = builtin(&Builtin::L(1)).unwrap();
        let d = a.validate();
        assert!(d.is_ok());
        assert!(d.has_warning("equal-children"));
    }

    #[test]
    fn linf_validates_cleanly() {
        let a = builtin(&Builtin::Linf).unwrap();
        assert!(a.validate().is_ok());
        assert_eq!(a.priority_of("q1"), Some(1));
        assert_eq!(a.priority_of("q2"), Some(2));
    }

    #[test]
    fn delta_is_total() {
        for b in [Builtin::L(3), Builtin::Linf, Builtin::W(0, 4)] {
            let a = builtin(&b).unwrap();
            assert_eq!(a.delta.len(), a.states.len() * a.alphabet.len());
        }
    }
}
