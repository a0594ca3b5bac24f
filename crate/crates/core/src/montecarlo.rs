//! Simulation of branching plays truncated at a fixed depth.
//!
//! A truncated play is solved by backward induction; leaves cut off by the
//! depth limit count as wins for ∃ (optimistic) or for ∀ (pessimistic).
//! States whose reachable set has a single priority parity are decided
//! outright: all-even ones are won by ∃, all-odd ones by ∀.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mbp::{reachable_indices, Mbp, StateKind};
use crate::poly::rational_to_f64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum McError {
    #[error("bracketing unsupported: non-sink states reachable from {0} mix odd and even priorities; use the solvers")]
    MixedParity(String),
    #[error("unknown MBP state `{0}`")]
    UnknownState(String),
    #[error("at least one sample is required")]
    NoSamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Optimistic,
    Pessimistic,
}

/// Counter-based generator: the value at a node depends only on the seed,
/// the sample index and the path from the root.
#[derive(Clone, Copy, Debug)]
struct Key(u64);

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Key {
    fn root(seed: u64, sample: u64) -> Key {
        Key(splitmix(splitmix(seed) ^ sample.wrapping_mul(0xD1B5_4A32_D192_ED03)))
    }

    fn child(self, j: usize) -> Key {
        Key(splitmix(self.0 ^ (j as u64 + 1).wrapping_mul(0xA24B_AED4_963E_E407)))
    }

    fn uniform(self) -> f64 {
        (splitmix(self.0 ^ 0x5851_F42D_4C95_7F2D) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sink {
    Win,
    Lose,
}

/// Precomputed per-state data for simulation from one start state.
pub struct Simulator<'a> {
    mbp: &'a Mbp,
    start: usize,
    sink: Vec<Option<Sink>>,
    can_win: Vec<bool>,
    can_lose: Vec<bool>,
    cumulative: Vec<Vec<f64>>,
}

impl<'a> Simulator<'a> {
    /// Rejects starts from which non-sink states of both parities are reachable.
    pub fn new(mbp: &'a Mbp, start: &str) -> Result<Self, McError> {
        let s = mbp.index_of(start).ok_or_else(|| McError::UnknownState(start.to_string()))?;
        let n = mbp.len();
        let sink: Vec<Option<Sink>> = (0..n)
            .map(|i| {
                let reach = reachable_indices(mbp, i);
                let even = reach.iter().all(|&j| mbp.states[j].priority % 2 == 0);
                let odd = reach.iter().all(|&j| mbp.states[j].priority % 2 == 1);
                match (even, odd) {
                    (true, _) => Some(Sink::Win),
                    (_, true) => Some(Sink::Lose),
                    _ => None,
                }
            })
            .collect();
        let parities: Vec<u32> = reachable_indices(mbp, s)
            .into_iter()
            .filter(|&j| sink[j].is_none())
            .map(|j| mbp.states[j].priority % 2)
            .collect();
        if parities.iter().any(|&p| p != parities[0]) {
            return Err(McError::MixedParity(start.to_string()));
        }
        let reaches = |k: Sink| -> Vec<bool> {
            (0..n).map(|i| reachable_indices(mbp, i).iter().any(|&j| sink[j] == Some(k))).collect()
        };
        let (can_win, can_lose) = (reaches(Sink::Win), reaches(Sink::Lose));
        let cumulative = Self::cumulative_of(mbp);
        Ok(Simulator { mbp, start: s, sink, can_win, can_lose, cumulative })
    }

    fn pick(&self, s: usize, key: Key) -> usize {
        let u = key.uniform();
        let cum = &self.cumulative[s];
        let j = cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1);
        self.mbp.edges[s][j]
    }

    /// Optimistic and pessimistic outcomes together. Only the components in
    /// `need` are computed; the optimistic one can only be false below a
    /// reachable losing sink, the pessimistic one only true below a winning one.
    fn eval(&self, s: usize, key: Key, left: usize, need: (bool, bool)) -> (bool, bool) {
        if let Some(k) = self.sink[s] {
            let win = k == Sink::Win;
            return (win, win);
        }
        let need = (need.0 && self.can_lose[s], need.1 && self.can_win[s]);
        if !need.0 && !need.1 {
            return (true, false);
        }
        if left == 0 {
            return (true, false);
        }
        match self.mbp.states[s].kind {
            StateKind::Probabilistic => self.eval(self.pick(s, key), key.child(0), left - 1, need),
            StateKind::ExistsBranching => {
                let mut acc = (!need.0, false);
                for (j, &t) in self.mbp.edges[s].iter().enumerate() {
                    let r = self.eval(t, key.child(j), left - 1, (!acc.0, need.1 && !acc.1));
                    acc = (acc.0 || r.0, acc.1 || r.1);
                    if acc.0 && (acc.1 || !need.1) {
                        break;
                    }
                }
                acc
            }
            StateKind::ForallBranching => {
                let mut acc = (true, need.1);
                for (j, &t) in self.mbp.edges[s].iter().enumerate() {
                    let r = self.eval(t, key.child(j), left - 1, (need.0 && acc.0, acc.1));
                    acc = (acc.0 && r.0, acc.1 && r.1);
                    if !acc.1 && (!acc.0 || !need.0) {
                        break;
                    }
                }
                acc
            }
        }
    }

    /// Outcome of one sample under both leaf resolutions.
    pub fn sample_outcome(&self, depth: usize, seed: u64, sample: u64) -> (bool, bool) {
        self.eval(self.start, Key::root(seed, sample), depth, (true, true))
    }

    fn build(&self, s: usize, key: Key, left: usize) -> PlayNode {
        if self.sink[s].is_some() || left == 0 {
            return PlayNode { state: s, children: Vec::new() };
        }
        let children = match self.mbp.states[s].kind {
            StateKind::Probabilistic => vec![self.build(self.pick(s, key), key.child(0), left - 1)],
            _ => self.mbp.edges[s].iter().enumerate().map(|(j, &t)| self.build(t, key.child(j), left - 1)).collect(),
        };
        PlayNode { state: s, children }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayNode {
    pub state: usize,
    pub children: Vec<PlayNode>,
}

impl PlayNode {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(PlayNode::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }
}

/// A finite prefix of a branching play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPlay {
    pub root: PlayNode,
    pub depth: usize,
}

/// Samples the play from `start` down to `depth`, stopping early at sinks.
pub fn sample_branching_play(
    m: &Mbp,
    start: &str,
    depth: usize,
    seed: u64,
    sample: u64,
) -> Result<TruncatedPlay, McError> {
    let s = m.index_of(start).ok_or_else(|| McError::UnknownState(start.to_string()))?;
    let sim = Simulator::new(m, start).or_else(|e| match e {
        // The explicit tree is well defined for any MBP; only evaluation needs one parity class.
        McError::MixedParity(_) => Ok(Simulator {
            mbp: m,
            start: s,
            sink: vec![None; m.len()],
            can_win: vec![true; m.len()],
            can_lose: vec![true; m.len()],
            cumulative: Simulator::cumulative_of(m),
        }),
        other => Err(other),
    })?;
    Ok(TruncatedPlay { root: sim.build(s, Key::root(seed, sample), depth), depth })
}

impl Simulator<'_> {
    fn cumulative_of(m: &Mbp) -> Vec<Vec<f64>> {
        m.prob
            .iter()
            .map(|ps| {
                let mut acc = 0.0;
                ps.iter()
                    .map(|p| {
                        acc += rational_to_f64(p);
                        acc
                    })
                    .collect()
            })
            .collect()
    }
}

/// Solves the finite game on `t`.
pub fn evaluate_truncated(t: &TruncatedPlay, m: &Mbp, mode: Mode) -> Result<bool, McError> {
    let start = &m.states[t.root.state].id;
    let sim = Simulator::new(m, start)?;
    fn go(sim: &Simulator, node: &PlayNode, mode: Mode) -> bool {
        if let Some(k) = sim.sink[node.state] {
            return k == Sink::Win;
        }
        if node.children.is_empty() {
            return mode == Mode::Optimistic;
        }
        match sim.mbp.states[node.state].kind {
            StateKind::Probabilistic => go(sim, &node.children[0], mode),
            StateKind::ExistsBranching => node.children.iter().any(|c| go(sim, c, mode)),
            StateKind::ForallBranching => node.children.iter().all(|c| go(sim, c, mode)),
        }
    }
    Ok(go(&sim, &t.root, mode))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub optimistic_mean: f64,
    pub pessimistic_mean: f64,
    pub n: u64,
    pub depth: usize,
    /// 95% half-width, the larger of the two sides.
    pub ci_halfwidth: f64,
    pub seed: u64,
}

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `n` at quantile `z`.
pub fn wilson(successes: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Normal interval, switching to Wilson when fewer than 10 successes or failures.
pub fn confidence_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    let failures = n - successes;
    if successes < 10 || failures < 10 {
        return wilson(successes, n, z);
    }
    let p = successes as f64 / n as f64;
    let half = z * (p * (1.0 - p) / n as f64).sqrt();
    ((p - half).max(0.0), (p + half).min(1.0))
}

impl Estimate {
    fn successes(mean: f64, n: u64) -> u64 {
        (mean * n as f64).round() as u64
    }

    /// Lower end of the pessimistic interval and upper end of the optimistic one at quantile `z`.
    pub fn bracket(&self, z: f64) -> (f64, f64) {
        let lo = confidence_interval(Self::successes(self.pessimistic_mean, self.n), self.n, z).0;
        let hi = confidence_interval(Self::successes(self.optimistic_mean, self.n), self.n, z).1;
        (lo, hi)
    }

    /// One standard error of each mean, by the normal approximation.
    pub fn sigma(&self) -> (f64, f64) {
        let se = |p: f64| (p * (1.0 - p) / self.n as f64).sqrt();
        (se(self.pessimistic_mean), se(self.optimistic_mean))
    }
}

/// `n` independent truncated plays from `start`; counts are reduced in
/// sample order so results do not depend on the thread count.
pub fn estimate(m: &Mbp, start: &str, depth: usize, n: u64, seed: u64) -> Result<Estimate, McError> {
    if n == 0 {
        return Err(McError::NoSamples);
    }
    let sim = Simulator::new(m, start)?;
    let (opt, pess) = (0..n)
        .into_par_iter()
        .map(|i| {
            let (o, p) = sim.sample_outcome(depth, seed, i);
            (o as u64, p as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let half = |k: u64| {
        let (lo, hi) = confidence_interval(k, n, Z95);
        (hi - lo) / 2.0
    };
    Ok(Estimate {
        optimistic_mean: opt as f64 / n as f64,
        pessimistic_mean: pess as f64 / n as f64,
        n,
        depth,
        ci_halfwidth: half(opt).max(half(pess)),
        seed,
    })
}
