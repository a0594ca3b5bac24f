use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use super::{AutomatonError, GameAutomaton, GameTransition, SinkKind, TOP};

/// The example automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Trees where `a` occurs at least `n` times on every branch.
    L(u32),
    /// Two states with priorities 1 and 2; the language has measure 0.
    Linf,
    /// The game languages `W(i,k)`.
    W(u32, u32),
}

impl Builtin {
    /// `L2`, `Linf`, `W1_3`: used for file names and report labels.
    pub fn slug(&self) -> String {
        match self {
            Builtin::L(n) => format!("L{n}"),
            Builtin::Linf => "Linf".to_string(),
            Builtin::W(i, k) => format!("W{i}_{k}"),
        }
    }

    /// Resolves a name plus optional numeric parameters, as given on the command line.
    pub fn from_parts(name: &str, params: &[u32]) -> Result<Builtin, AutomatonError> {
        match (name, params) {
            ("L", [n]) => Ok(Builtin::L(*n)),
            ("W", [i, k]) => Ok(Builtin::W(*i, *k)),
            ("Linf", []) => Ok(Builtin::Linf),
            (_, []) => name.parse(),
            _ => Err(AutomatonError::BadParameters(format!("{name} with {params:?}"))),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::L(n) => write!(f, "L({n})"),
            Builtin::Linf => f.write_str("Linf"),
            Builtin::W(i, k) => write!(f, "W({i},{k})"),
        }
    }
}

impl FromStr for Builtin {
    type Err = AutomatonError;

    /// Accepts `L3`, `L(3)`, `Linf`, `W(1,3)` and `W1_3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || AutomatonError::UnknownBuiltin(s.to_string());
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| unknown());
        if s == "Linf" || s == "L∞" {
            return Ok(Builtin::Linf);
        }
        if let Some(rest) = s.strip_prefix('L') {
            let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            return Ok(Builtin::L(num(inner)?));
        }
        if let Some(rest) = s.strip_prefix('W') {
            let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            let (i, k) = inner.split_once([',', '_']).ok_or_else(unknown)?;
            return Ok(Builtin::W(num(i)?, num(k)?));
        }
        Err(unknown())
    }
}

/// Builds one of the example automata.
pub fn builtin(which: &Builtin) -> Result<GameAutomaton, AutomatonError> {
    match *which {
        Builtin::L(n) => {
            if n == 0 {
                return Err(AutomatonError::BadParameters("L(n) needs n ≥ 1".into()));
            }
            Ok(chain(n))
        }
        Builtin::Linf => Ok(linf()),
        Builtin::W(i, k) => {
            if i >= k {
                return Err(AutomatonError::BadParameters(format!("W({i},{k}) needs i < k")));
            }
            Ok(game(i, k))
        }
    }
}

fn letters(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn chain(n: u32) -> GameAutomaton {
    let alphabet = letters(&["a", "b", "c"]);
    let mut states: Vec<String> = (1..=n).map(|j| format!("q{j}")).collect();
    states.push(TOP.to_string());
    let mut priority = IndexMap::new();
    let mut delta = IndexMap::new();
    for j in 1..=n {
        let q = format!("q{j}");
        let down = if j == 1 { TOP.to_string() } else { format!("q{}", j - 1) };
        priority.insert(q.clone(), 1);
        delta.insert((q.clone(), "a".to_string()), GameTransition::and(down.clone(), down));
        for a in ["b", "c"] {
            delta.insert((q.clone(), a.to_string()), GameTransition::and(q.clone(), q.clone()));
        }
    }
    priority.insert(TOP.to_string(), 2);
    for a in &alphabet {
        delta.insert((TOP.to_string(), a.clone()), GameTransition::and(TOP, TOP));
    }
    let mut sinks = IndexMap::new();
    sinks.insert(TOP.to_string(), SinkKind::Accept);
    GameAutomaton { alphabet, states, initial: format!("q{n}"), priority, delta, sinks }
}

fn linf() -> GameAutomaton {
    let alphabet = letters(&["a", "b", "c"]);
    let states = letters(&["q1", "q2"]);
    let mut priority = IndexMap::new();
    priority.insert("q1".to_string(), 1);
    priority.insert("q2".to_string(), 2);
    let mut delta = IndexMap::new();
    for q in &states {
        delta.insert((q.clone(), "a".to_string()), GameTransition::and("q2", "q2"));
        delta.insert((q.clone(), "b".to_string()), GameTransition::and("q1", "q1"));
        delta.insert((q.clone(), "c".to_string()), GameTransition::and("q1", "q1"));
    }
    GameAutomaton { alphabet, states, initial: "q1".to_string(), priority, delta, sinks: IndexMap::new() }
}

fn game(i: u32, k: u32) -> GameAutomaton {
    let mut alphabet = Vec::new();
    for j in i..=k {
        alphabet.push(format!("∃,{j}"));
        alphabet.push(format!("∀,{j}"));
    }
    let states: Vec<String> = (i..=k).map(|j| format!("q{j}")).collect();
    let mut priority = IndexMap::new();
    let mut delta = IndexMap::new();
    for (q, j) in states.iter().zip(i..=k) {
        priority.insert(q.clone(), j);
    }
    for q in &states {
        for j in i..=k {
            let target = format!("q{j}");
            delta.insert((q.clone(), format!("∃,{j}")), GameTransition::or(target.clone(), target.clone()));
            delta.insert((q.clone(), format!("∀,{j}")), GameTransition::and(target.clone(), target));
        }
    }
    GameAutomaton { alphabet, states, initial: format!("q{i}"), priority, delta, sinks: IndexMap::new() }
}
