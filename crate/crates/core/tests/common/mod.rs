//! Shared generators and checks for the property and acceptance suites.
#![allow(dead_code)]

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use treeprob::automaton::{GameAutomaton, GameTransition, Mode, SinkKind, BOT, TOP};
use treeprob::exact::{solve_exact, AlgebraicNumber};
use treeprob::fixpoint::{FixpointSystem, Quantifier};
use treeprob::numeric::{kleene_sequence, solve_numeric, NumericConfig};
use treeprob::pipeline::{corpus_entry, Prepared, CORPUS};

pub fn corpus() -> Vec<Prepared> {
    CORPUS.iter().map(|(f, _)| corpus_entry(None, f).unwrap()).collect()
}

/// Raw choices decoded into an automaton by [`build_automaton`].
#[derive(Clone, Debug)]
pub struct Shape {
    pub states: usize,
    pub top: bool,
    pub bot: bool,
    pub priorities: Vec<u32>,
    pub moves: Vec<(bool, usize, usize)>,
}

/// Shapes with up to three ordinary states over `letters` letters.
pub fn shape(letters: usize, priorities: Vec<u32>) -> impl Strategy<Value = Shape> {
    (
        1..=3usize,
        any::<bool>(),
        any::<bool>(),
        proptest::collection::vec(proptest::sample::select(priorities), 3),
        proptest::collection::vec((any::<bool>(), 0..5usize, 0..5usize), 3 * letters),
    )
        .prop_map(|(states, top, bot, priorities, moves)| Shape { states, top, bot, priorities, moves })
}

/// Builds the automaton; `deterministic` forces conjunctions everywhere.
pub fn build_automaton(s: &Shape, letters: &[&str], deterministic: bool) -> GameAutomaton {
    let mut states: Vec<String> = (1..=s.states).map(|j| format!("q{j}")).collect();
    let ordinary = states.clone();
    let mut sinks = IndexMap::new();
    if s.top {
        states.push(TOP.to_string());
        sinks.insert(TOP.to_string(), SinkKind::Accept);
    }
    if s.bot {
        states.push(BOT.to_string());
        sinks.insert(BOT.to_string(), SinkKind::Reject);
    }
    let mut priority = IndexMap::new();
    for (j, q) in ordinary.iter().enumerate() {
        priority.insert(q.clone(), s.priorities[j]);
    }
    for (q, k) in &sinks {
        priority.insert(q.clone(), k.priority());
    }
    let mut delta = IndexMap::new();
    for (j, q) in ordinary.iter().enumerate() {
        for (l, a) in letters.iter().enumerate() {
            let (or, left, right) = s.moves[j * letters.len() + l];
            let mode = if or && !deterministic { Mode::Or } else { Mode::And };
            let t = GameTransition::new(mode, states[left % states.len()].clone(), states[right % states.len()].clone());
            delta.insert((q.clone(), a.to_string()), t);
        }
    }
    for q in sinks.keys() {
        for a in letters {
            delta.insert((q.clone(), a.to_string()), GameTransition::and(q.clone(), q.clone()));
        }
    }
    GameAutomaton {
        alphabet: letters.iter().map(|a| a.to_string()).collect(),
        states,
        initial: "q1".to_string(),
        priority,
        delta,
        sinks,
    }
}

/// `count` values drawn from `strategy` with a fixed seed.
pub fn draw<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count).map(|_| strategy.new_tree(&mut runner).expect("strategy").current()).collect()
}

fn dyadic(k: u32) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(1u32 << 16))
}

/// `g(v) ≤ g(w)` componentwise for `cases` random pairs `v ≤ w` in `[0,1]ⁿ`, in exact arithmetic.
pub fn check_g_monotone(sys: &FixpointSystem, cases: u32) -> Result<(), String> {
    if sys.is_empty() {
        return Ok(());
    }
    let n = sys.len();
    let pair = proptest::collection::vec((0..=1u32 << 16, 0..=1u32 << 16), n);
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner
        .run(&pair, |pairs| {
            let v: Vec<BigRational> = pairs.iter().map(|&(a, b)| dyadic(a.min(b))).collect();
            let w: Vec<BigRational> = pairs.iter().map(|&(a, b)| dyadic(a.max(b))).collect();
            let gv = sys.apply_g(&v).unwrap();
            let gw = sys.apply_g(&w).unwrap();
            for i in 0..n {
                prop_assert!(gv[i] <= gw[i], "component {} decreases", sys.name(i));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Kleene iterates from 0 increase and from 1 decrease, for single-quantifier systems.
pub fn check_iterates_monotone(sys: &FixpointSystem, steps: usize) -> Result<(), String> {
    let eqs = sys.equations();
    let starts: &[f64] = if eqs.iter().all(|e| e.quantifier == Quantifier::Mu) {
        &[0.0]
    } else if eqs.iter().all(|e| e.quantifier == Quantifier::Nu) {
        &[1.0]
    } else {
        &[]
    };
    for &s in starts {
        let seq = kleene_sequence(sys, s, steps);
        for w in seq.windows(2) {
            for i in 0..sys.len() {
                let ok = if s == 0.0 { w[0][i] <= w[1][i] } else { w[0][i] >= w[1][i] };
                if !ok {
                    return Err(format!("iterate of {} not monotone from {s}", sys.name(i)));
                }
            }
        }
    }
    Ok(())
}

/// Whether nested iteration converges on both the raw and the simplified system.
pub fn numeric_converges(p: &Prepared, cfg: &NumericConfig) -> bool {
    [&p.raw, &p.system].iter().all(|s| solve_numeric(s, cfg).is_ok_and(|r| r.converged))
}

/// Every variable of the unsimplified system has the same value through the simplified one.
pub fn check_simplify_preserves(p: &Prepared, tol: f64) -> Result<(), String> {
    check_simplify_preserves_with(p, tol, &NumericConfig::default())
}

pub fn check_simplify_preserves_with(p: &Prepared, tol: f64, cfg: &NumericConfig) -> Result<(), String> {
    let raw = solve_numeric(&p.raw, cfg).map_err(|e| e.to_string())?;
    let simp = solve_numeric(&p.system, cfg).map_err(|e| e.to_string())?;
    if !raw.converged || !simp.converged {
        return Err("nested iteration did not converge".into());
    }
    for i in 0..p.raw.len() {
        let name = p.raw.name(i);
        let v = p.system.value_of(name, &simp.values).ok_or_else(|| format!("{name} unresolved"))?;
        if (v - raw.values[i]).abs() > tol {
            return Err(format!("{name}: raw {} vs simplified {v}", raw.values[i]));
        }
    }
    Ok(())
}

/// Largest gap between exact and numeric values of the simplified system.
pub fn exact_numeric_gap(p: &Prepared) -> Result<f64, String> {
    let exact = solve_exact(&p.system).map_err(|e| e.to_string())?;
    let numeric = solve_numeric(&p.system, &NumericConfig::default()).map_err(|e| e.to_string())?;
    Ok(exact.to_f64().iter().zip(&numeric.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Successive refinements of `a` are nested and shrink below the requested width.
pub fn check_refine_nesting(a: &AlgebraicNumber, widths: &[u32]) -> Result<(), TestCaseError> {
    let mut sorted = widths.to_vec();
    sorted.sort_unstable();
    let mut outer = a.interval();
    let target = a.to_f64();
    for &bits in &sorted {
        let w = BigRational::new(BigInt::from(1), BigInt::from(1u64) << bits);
        let (lo, hi) = a.refine(&w);
        prop_assert!(outer.0 <= lo && hi <= outer.1, "refinement at 2^-{} escapes", bits);
        prop_assert!(&hi - &lo <= w);
        let (flo, fhi) = (treeprob::poly::rational_to_f64(&lo), treeprob::poly::rational_to_f64(&hi));
        prop_assert!(flo <= target + 1e-15 && target - 1e-15 <= fhi);
        outer = (lo, hi);
    }
    Ok(())
}
