use indexmap::{IndexMap, IndexSet};

use super::{GameAutomaton, GameTransition, StateId};

/// Rewrites every transition `(q, q)` into `(q, q')` where `q'` is a copy of
/// `q` with the same priority and the same (rewritten) outgoing transitions.
///
/// Copies are named `<q>__dup<n>` with the smallest unused `n ≥ 1`, and are
/// appended after the original states. Sinks whose loops get rewritten lose
/// their sink marker, since they no longer loop on themselves alone.
pub fn normalize_distinct_children(a: &GameAutomaton) -> GameAutomaton {
    let duplicated: IndexSet<StateId> = a
        .states
        .iter()
        .flat_map(|q| a.alphabet.iter().filter_map(move |l| a.transition(q, l)))
        .filter(|t| t.left == t.right)
        .map(|t| t.left.clone())
        .collect();
    if duplicated.is_empty() {
        return a.clone();
    }

    let mut taken: IndexSet<String> = a.states.iter().cloned().collect();
    let mut copy_of: IndexMap<StateId, StateId> = IndexMap::new();
    for q in a.states.iter().filter(|q| duplicated.contains(*q)) {
        let mut n = 1;
        let name = loop {
            let candidate = format!("{q}__dup{n}");
            if !taken.contains(&candidate) {
                break candidate;
            }
            n += 1;
        };
        taken.insert(name.clone());
        copy_of.insert(q.clone(), name);
    }

    let rewrite = |t: &GameTransition| -> GameTransition {
        if t.left == t.right {
            GameTransition::new(t.mode, t.left.clone(), copy_of[&t.left].clone())
        } else {
            t.clone()
        }
    };

    let mut states = a.states.clone();
    let mut priority = a.priority.clone();
    let mut delta = IndexMap::new();
    for q in &a.states {
        for l in &a.alphabet {
            if let Some(t) = a.transition(q, l) {
                delta.insert((q.clone(), l.clone()), rewrite(t));
            }
        }
    }
    for (q, copy) in &copy_of {
        states.push(copy.clone());
        if let Some(p) = a.priority_of(q) {
            priority.insert(copy.clone(), p);
        }
        for l in &a.alphabet {
            if let Some(t) = a.transition(q, l) {
                delta.insert((copy.clone(), l.clone()), rewrite(t));
            }
        }
    }
    let sinks = a
        .sinks
        .iter()
        .filter(|(s, _)| !a.alphabet.iter().any(|l| a.transition(s, l).is_some_and(|t| t.left == t.right)))
        .map(|(s, k)| (s.clone(), *k))
        .collect();

    GameAutomaton { alphabet: a.alphabet.clone(), states, initial: a.initial.clone(), priority, delta, sinks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{builtin, Builtin};

    #[test]
    fn l1_gets_one_copy_per_target() {
        let a = builtin(&Builtin::L(1)).unwrap();
        let n = normalize_distinct_children(&a);
        assert_eq!(n.states, vec!["q1", "top", "q1__dup1", "top__dup1"]);
        assert_eq!(n.transition("q1", "a"), Some(&GameTransition::and("top", "top__dup1")));
        assert_eq!(n.transition("q1__dup1", "b"), Some(&GameTransition::and("q1", "q1__dup1")));
        let d = n.validate();
        assert!(d.is_ok(), "{d}");
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn idempotent() {
        for b in [Builtin::L(2), Builtin::Linf, Builtin::W(1, 3)] {
            let n = normalize_distinct_children(&builtin(&b).unwrap());
            assert_eq!(normalize_distinct_children(&n), n);
        }
    }

    #[test]
    fn w13_copies_each_state() {
        let n = normalize_distinct_children(&builtin(&Builtin::W(1, 3)).unwrap());
        assert_eq!(n.states.len(), 6);
        assert_eq!(n.priority_of("q2__dup1"), Some(2));
        assert!(!n.is_deterministic());
    }

    #[test]
    fn avoids_name_clashes() {
        let mut a = builtin(&Builtin::L(1)).unwrap();
        // Rename q1 into something that collides with the first copy name of top.
        let text = a.render().replace("q1", "top__dup1");
        a = crate::automaton::parse_automaton(&text).unwrap();
        let n = normalize_distinct_children(&a);
        assert!(n.states.contains(&"top__dup2".to_string()));
        assert!(n.validate().is_ok());
    }
}
