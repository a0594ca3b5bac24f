//! Markov branching plays and the reduction from game automata.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use indexmap::IndexSet;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::automaton::{Diagnostics, GameAutomaton, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    Probabilistic,
    ExistsBranching,
    ForallBranching,
}

impl StateKind {
    fn tag(self) -> char {
        match self {
            StateKind::Probabilistic => 'P',
            StateKind::ExistsBranching => 'E',
            StateKind::ForallBranching => 'A',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MbpState {
    pub id: String,
    pub kind: StateKind,
    pub priority: u32,
}

/// A Markov branching play. Edges and probabilities are indexed by state
/// position; `prob[s][i]` is the probability of `edges[s][i]` and is empty
/// for branching states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mbp {
    pub states: Vec<MbpState>,
    pub edges: Vec<Vec<usize>>,
    pub prob: Vec<Vec<BigRational>>,
}

#[derive(Debug, Error)]
pub enum MbpError {
    #[error("automaton is not normalized: δ({state},{letter}) has equal children")]
    NotNormalized { state: String, letter: String },
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(Diagnostics),
    #[error("unknown MBP state `{0}`")]
    UnknownState(String),
}

/// Id of the probabilistic state for automaton state `q`.
pub fn prob_id(q: &str) -> String {
    format!("s({q})")
}

/// Id of the branching state for automaton state `q` and letter `a`.
pub fn branch_id(q: &str, a: &str) -> String {
    format!("s({q},{a})")
}

/// Reduction of a normalized automaton to its MBP.
pub fn build_mbp(a: &GameAutomaton) -> Result<Mbp, MbpError> {
    reduce(a, true)
}

/// Same reduction, but transitions with equal children yield a branching
/// state whose successor list repeats the target.
pub fn build_mbp_lenient(a: &GameAutomaton) -> Result<Mbp, MbpError> {
    reduce(a, false)
}

fn reduce(a: &GameAutomaton, strict: bool) -> Result<Mbp, MbpError> {
    let diags = a.validate();
    if !diags.is_ok() {
        return Err(MbpError::InvalidAutomaton(diags));
    }
    let sigma = a.alphabet.len();
    let stride = 1 + sigma;
    let uniform = BigRational::new(1.into(), sigma.into());
    let prob_index = |q: &str| a.state_index(q).expect("validated") * stride;

    let mut states = Vec::with_capacity(a.states.len() * stride);
    let mut edges = Vec::with_capacity(a.states.len() * stride);
    let mut prob = Vec::with_capacity(a.states.len() * stride);
    for (qi, q) in a.states.iter().enumerate() {
        let priority = a.priority_of(q).expect("validated");
        states.push(MbpState { id: prob_id(q), kind: StateKind::Probabilistic, priority });
        edges.push((1..=sigma).map(|j| qi * stride + j).collect());
        prob.push(vec![uniform.clone(); sigma]);
        for l in &a.alphabet {
            let t = a.transition(q, l).expect("validated");
            if strict && t.left == t.right {
                return Err(MbpError::NotNormalized { state: q.clone(), letter: l.clone() });
            }
            let kind = match t.mode {
                Mode::And => StateKind::ForallBranching,
                Mode::Or => StateKind::ExistsBranching,
            };
            states.push(MbpState { id: branch_id(q, l), kind, priority });
            edges.push(vec![prob_index(&t.left), prob_index(&t.right)]);
            prob.push(Vec::new());
        }
    }
    Ok(Mbp { states, edges, prob })
}

impl Mbp {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    /// Deterministic text listing: states then edges.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            let _ = writeln!(out, "state {} {} {}", s.id, s.kind.tag(), s.priority);
        }
        for (i, succ) in self.edges.iter().enumerate() {
            for (j, &t) in succ.iter().enumerate() {
                let target = self.states.get(t).map_or("?", |s| s.id.as_str());
                match self.prob[i].get(j) {
                    Some(p) => {
                        let _ = writeln!(out, "edge {} {} {}", self.states[i].id, target, p);
                    }
                    None => {
                        let _ = writeln!(out, "edge {} {}", self.states[i].id, target);
                    }
                }
            }
        }
        out
    }
}

/// Checks successor and distribution invariants.
pub fn validate_mbp(m: &Mbp) -> Diagnostics {
    let mut d = Diagnostics::default();
    let n = m.states.len();
    if m.edges.len() != n || m.prob.len() != n {
        d.error("shape", "edge or probability table does not match the state list", None);
        return d;
    }
    let mut ids = HashSet::new();
    for s in &m.states {
        if !ids.insert(s.id.as_str()) {
            d.error("duplicate-state", format!("duplicate state `{}`", s.id), Some(s.id.clone()));
        }
    }
    for (i, s) in m.states.iter().enumerate() {
        let here = Some(s.id.clone());
        if m.edges[i].is_empty() {
            d.error("no-successor", "no successor", here.clone());
        }
        if m.edges[i].iter().any(|&t| t >= n) {
            d.error("bad-edge", "edge to an unknown state", here.clone());
        }
        match s.kind {
            StateKind::Probabilistic => {
                let p = &m.prob[i];
                if p.len() != m.edges[i].len() {
                    d.error("bad-distribution", "distribution not supported exactly on the successors", here);
                    continue;
                }
                if p.iter().any(|x| *x <= BigRational::zero() || *x > BigRational::one()) {
                    d.error("bad-distribution", "probability outside (0,1]", here.clone());
                }
                let total: BigRational = p.iter().sum();
                if !total.is_one() {
                    d.error("bad-distribution", format!("distribution not normalized (sums to {total})"), here);
                }
            }
            _ => {
                if !m.prob[i].is_empty() {
                    d.error("bad-distribution", "branching state carries probabilities", here);
                }
            }
        }
    }
    d
}

/// Forward-reachable states from `id`, in breadth-first order, including `id`.
pub fn reachable_from(m: &Mbp, id: &str) -> Result<IndexSet<usize>, MbpError> {
    let start = m.index_of(id).ok_or_else(|| MbpError::UnknownState(id.to_string()))?;
    Ok(reachable_indices(m, start))
}

pub(crate) fn reachable_indices(m: &Mbp, start: usize) -> IndexSet<usize> {
    let mut seen = IndexSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start);
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        for &t in &m.edges[s] {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{builtin, normalize_distinct_children, Builtin};

    fn normalized(b: Builtin) -> GameAutomaton {
        normalize_distinct_children(&builtin(&b).unwrap())
    }

    #[test]
    fn sizes_match_the_reduction() {
        for b in [Builtin::L(1), Builtin::L(3), Builtin::Linf, Builtin::W(1, 3)] {
            let a = normalized(b);
            let m = build_mbp(&a).unwrap();
            let sigma = a.alphabet.len();
            assert_eq!(m.len(), a.states.len() * (1 + sigma));
            for (i, s) in m.states.iter().enumerate() {
                match s.kind {
                    StateKind::Probabilistic => assert_eq!(m.edges[i].len(), sigma),
                    _ => assert_eq!(m.edges[i].len(), 2),
                }
            }
            assert!(validate_mbp(&m).is_ok());
        }
    }

    #[test]
    fn strict_rejects_equal_children() {
        let a = builtin(&Builtin::L(1)).unwrap();
        assert!(matches!(build_mbp(&a), Err(MbpError::NotNormalized { .. })));
        let m = build_mbp_lenient(&a).unwrap();
        let probabilistic = m.states.iter().filter(|s| s.kind == StateKind::Probabilistic).count();
        assert_eq!((probabilistic, m.len() - probabilistic), (2, 6));
    }

    #[test]
    fn uniform_thirds() {
        let m = build_mbp(&normalized(Builtin::L(1))).unwrap();
        let third = BigRational::new(1.into(), 3.into());
        for (i, s) in m.states.iter().enumerate() {
            if s.kind == StateKind::Probabilistic {
                assert!(m.prob[i].iter().all(|p| *p == third));
            }
        }
    }

    #[test]
    fn unnormalized_distribution_reported() {
        let mut m = build_mbp(&normalized(Builtin::L(1))).unwrap();
        m.prob[0][0] = BigRational::new(1.into(), 6.into());
        let d = validate_mbp(&m);
        assert!(d.errors.iter().any(|e| e.message.contains("distribution not normalized")));
    }

    #[test]
    fn missing_successor_reported() {
        let mut m = build_mbp(&normalized(Builtin::L(1))).unwrap();
        m.edges[1].clear();
        let d = validate_mbp(&m);
        assert!(d.errors.iter().any(|e| e.message == "no successor"));
    }

    #[test]
    fn reachability() {
        let m = build_mbp_lenient(&builtin(&Builtin::L(3)).unwrap()).unwrap();
        assert_eq!(reachable_from(&m, "s(q3)").unwrap().len(), 16);
        let from_q1 = reachable_from(&m, "s(q1)").unwrap();
        let ids: Vec<&str> = from_q1.iter().map(|&i| m.states[i].id.as_str()).collect();
        assert_eq!(ids.len(), 8);
        assert!(ids.iter().all(|id| id.starts_with("s(q1") || id.starts_with("s(top")));
        let top = reachable_from(&m, "s(top)").unwrap();
        assert_eq!(top.len(), 4);
        assert!(matches!(reachable_from(&m, "s(q9)"), Err(MbpError::UnknownState(_))));
    }

    #[test]
    fn dump_lists_states_then_edges() {
        let m = build_mbp(&normalized(Builtin::L(1))).unwrap();
        let dump = m.dump();
        let first = dump.lines().next().unwrap();
        assert_eq!(first, "state s(q1) P 1");
        assert!(dump.contains("edge s(q1) s(q1,a) 1/3\n"));
        assert!(dump.contains("edge s(q1,a) s(top)\nedge s(q1,a) s(top__dup1)\n"));
    }
}
