//! Coin-flipping probability of tree languages recognized by game automata.
//!
//! The pipeline reduces an automaton to a Markov branching play, the play to
//! a nested fixed-point equation system, and solves the system numerically,
//! exactly, or by simulation.

pub mod automaton;
pub mod exact;
pub mod fixpoint;
mod graph;
pub mod mbp;
pub mod montecarlo;
pub mod numeric;
pub mod pipeline;
pub mod poly;
pub mod qe;
