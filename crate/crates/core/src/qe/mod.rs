//! First-order formulas over the reals, staged per variable, in qepcad syntax.
//!
//! Each stage characterizes one variable as the least (μ) or greatest (ν)
//! solution of its equation, given quantifier-free characterizations of the
//! variables solved in earlier stages.

mod answer;
mod emit;
mod ingest;
mod plan;
pub mod runner;

use std::fmt;

use thiserror::Error;

use crate::poly::Poly;

pub use answer::{qf_answer, simplest_between};
pub use emit::{emit_qepcad, normalize_whitespace, qepcad_input};
pub use ingest::ingest_qf_answer;
pub use plan::{build_stage_formula, export_stages, plan_stages, BoundPolicy, PrimedOrder, QeOptions, Stage, StageFile, StagePlan};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QeError {
    #[error("stage {0} out of range")]
    StageOutOfRange(usize),
    #[error("missing quantifier-free characterization for {0}")]
    MissingPrior(String),
    #[error("cannot parse answer: {0}")]
    Parse(String),
    #[error("answer mentions {0}, which is neither the target nor a parameter")]
    Multivariate(String),
    #[error("system cannot be staged: {0}")]
    NotStageable(String),
    #[error("no characterization available for {0}: {1}")]
    NoAnswer(String, String),
    #[error("external QE runner failed: {0}")]
    Runner(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "/=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// `lhs rel rhs` with polynomials over formula variable indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub lhs: Poly,
    pub rel: Rel,
    pub rhs: Poly,
}

impl Atom {
    pub fn new(lhs: Poly, rel: Rel, rhs: Poly) -> Self {
        Atom { lhs, rel, rhs }
    }

    /// `p rel 0`.
    pub fn zero(p: Poly, rel: Rel) -> Self {
        Atom { lhs: p, rel, rhs: Poly::zero() }
    }

    pub fn map_vars(&self, f: impl Fn(usize) -> usize + Copy) -> Atom {
        Atom { lhs: self.lhs.map_vars(f), rel: self.rel, rhs: self.rhs.map_vars(f) }
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.lhs.vars().into_iter().chain(self.rhs.vars()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        format!("{} {} {}", self.lhs.display_with(names), self.rel.symbol(), self.rhs.display_with(names))
    }
}

/// A quantifier-free conjunction of atoms, e.g. `x2 - 1 < 0 /\ 8 x2^2 - 12 x2 + 1 = 0`.
pub type Conjunction = Vec<Atom>;

pub fn render_conjunction(c: &Conjunction, names: &dyn Fn(usize) -> String) -> String {
    c.iter().map(|a| a.render(names)).collect::<Vec<_>>().join(" /\\ ")
}

#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    /// Rendered inline inside one pair of brackets.
    Conj(Conjunction),
    And(Vec<Matrix>),
    Implies(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn atom(a: Atom) -> Self {
        Matrix::Conj(vec![a])
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut out: Vec<usize> = match self {
            Matrix::Conj(c) => c.iter().flat_map(Atom::vars).collect(),
            Matrix::And(parts) => parts.iter().flat_map(Matrix::vars).collect(),
            Matrix::Implies(a, b) => a.vars().into_iter().chain(b.vars()).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QKind {
    Exists,
    Forall,
}

impl QKind {
    pub fn letter(self) -> &'static str {
        match self {
            QKind::Exists => "E",
            QKind::Forall => "A",
        }
    }
}

/// A prenex formula; variable `i` is named `names[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FoFormula {
    pub prefix: Vec<(QKind, usize)>,
    pub matrix: Matrix,
    pub names: Vec<String>,
}

impl FoFormula {
    pub fn name(&self, v: usize) -> String {
        self.names[v].clone()
    }

    /// Variables of the matrix not bound by the prefix, in index order.
    pub fn free_vars(&self) -> Vec<usize> {
        self.matrix.vars().into_iter().filter(|v| !self.prefix.iter().any(|(_, b)| b == v)).collect()
    }
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_qepcad(self))
    }
}
