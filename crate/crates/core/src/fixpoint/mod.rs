//! Nested fixed-point equation systems `x ≛μ/ν g(x)` built from MBPs.

mod simplify;
mod text;

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::graph::ordered_sccs;
use crate::mbp::{Mbp, StateKind};
use crate::poly::{Poly, Value};

pub use simplify::simplify;
pub use text::parse_system;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantifier {
    Mu,
    Nu,
}

impl Quantifier {
    /// μ for odd priorities, ν for even ones.
    pub fn of_priority(p: u32) -> Quantifier {
        if p % 2 == 1 {
            Quantifier::Mu
        } else {
            Quantifier::Nu
        }
    }

    /// Starting point of the Kleene iteration: 0 for μ, 1 for ν.
    pub fn bottom(self) -> f64 {
        match self {
            Quantifier::Mu => 0.0,
            Quantifier::Nu => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Mu => "μ",
            Quantifier::Nu => "ν",
        }
    }
}

/// Where a variable's equation came from; only branching rows are substituted away.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Probabilistic,
    Branching,
    /// Hand-authored equation.
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub var: String,
    pub rhs: Poly,
    pub quantifier: Quantifier,
    pub priority: u32,
    pub kind: VarKind,
}

impl Equation {
    pub fn new(var: impl Into<String>, rhs: Poly, priority: u32, kind: VarKind) -> Self {
        Equation { var: var.into(), rhs, quantifier: Quantifier::of_priority(priority), priority, kind }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixpointError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("equation for `{var}` mentions variable #{index}, which has no equation")]
    UnboundVariable { var: String, index: usize },
    #[error("equation for `{0}` has a quantifier that does not match the parity of its priority")]
    QuantifierParity(String),
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One priority basket: all variables of one priority.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basket {
    pub priority: u32,
    pub quantifier: Quantifier,
    pub vars: Vec<usize>,
}

/// What an eliminated or renamed variable evaluates to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resolved {
    Var(usize),
    Const(BigRational),
    Expr(Poly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointSystem {
    equations: Vec<Equation>,
    basket_order: Vec<u32>,
    index: HashMap<String, usize>,
    /// Names no longer carrying an equation, bound to a polynomial over the current variables.
    bindings: IndexMap<String, Poly>,
}

impl FixpointSystem {
    pub fn new(equations: Vec<Equation>) -> Result<Self, FixpointError> {
        Self::with_bindings(equations, IndexMap::new())
    }

    pub(crate) fn with_bindings(
        equations: Vec<Equation>,
        bindings: IndexMap<String, Poly>,
    ) -> Result<Self, FixpointError> {
        let mut index = HashMap::new();
        for (i, e) in equations.iter().enumerate() {
            if index.insert(e.var.clone(), i).is_some() {
                return Err(FixpointError::DuplicateVariable(e.var.clone()));
            }
            if e.quantifier != Quantifier::of_priority(e.priority) {
                return Err(FixpointError::QuantifierParity(e.var.clone()));
            }
        }
        let n = equations.len();
        for e in &equations {
            if let Some(&bad) = e.rhs.vars().iter().find(|&&v| v >= n) {
                return Err(FixpointError::UnboundVariable { var: e.var.clone(), index: bad });
            }
        }
        let mut basket_order: Vec<u32> = equations.iter().map(|e| e.priority).collect();
        basket_order.sort_unstable_by(|a, b| b.cmp(a));
        basket_order.dedup();
        Ok(FixpointSystem { equations, basket_order, index, bindings })
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn equation(&self, i: usize) -> &Equation {
        &self.equations[i]
    }

    /// Distinct priorities, highest (outermost) first.
    pub fn basket_order(&self) -> &[u32] {
        &self.basket_order
    }

    pub fn baskets(&self) -> Vec<Basket> {
        self.basket_order
            .iter()
            .map(|&p| Basket {
                priority: p,
                quantifier: Quantifier::of_priority(p),
                vars: (0..self.len()).filter(|&i| self.equations[i].priority == p).collect(),
            })
            .collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.equations[i].var
    }

    pub fn bindings(&self) -> &IndexMap<String, Poly> {
        &self.bindings
    }

    /// Resolves a variable name from any earlier form of the system.
    pub fn resolve(&self, name: &str) -> Option<Resolved> {
        if let Some(i) = self.index_of(name) {
            return Some(Resolved::Var(i));
        }
        let p = self.bindings.get(name)?;
        if let Some(c) = p.as_constant() {
            return Some(Resolved::Const(c));
        }
        let vars = p.vars();
        if p.num_terms() == 1 && vars.len() == 1 {
            let v = vars[0];
            if *p == Poly::var(v) {
                return Some(Resolved::Var(v));
            }
        }
        Some(Resolved::Expr(p.clone()))
    }

    /// Value of `name` given a solution vector of the current variables.
    pub fn value_of<T: Value>(&self, name: &str, values: &[T]) -> Option<T> {
        match self.resolve(name)? {
            Resolved::Var(i) => Some(values[i].clone()),
            Resolved::Const(c) => Some(T::from_rational(&c)),
            Resolved::Expr(p) => Some(p.eval(values)),
        }
    }

    /// Evaluates every right-hand side at `v`.
    pub fn apply_g<T: Value>(&self, v: &[T]) -> Result<Vec<T>, FixpointError> {
        if v.len() != self.len() {
            return Err(FixpointError::DimensionMismatch { expected: self.len(), found: v.len() });
        }
        Ok(self.equations.iter().map(|e| e.rhs.eval(v)).collect())
    }

    /// `deps[i]`: variables occurring in the right-hand side of `i`.
    pub fn dependencies(&self) -> Vec<Vec<usize>> {
        self.equations.iter().map(|e| e.rhs.vars().into_iter().collect()).collect()
    }

    /// Strongly connected components, dependencies first.
    pub fn components(&self) -> Vec<Vec<usize>> {
        ordered_sccs(&self.dependencies())
    }

    pub fn classify(&self) -> SystemClass {
        classify(self)
    }

    pub fn var_names(&self) -> impl Fn(usize) -> String + '_ {
        move |i| self.equations[i].var.clone()
    }

    /// One line per equation, e.g. `x1 ≛μ 1/3 + 2/3 x1^2`.
    pub fn lines(&self) -> Vec<String> {
        let names = self.var_names();
        self.equations
            .iter()
            .map(|e| format!("{} ≛{} {}", e.var, e.quantifier.symbol(), e.rhs.display_with(&names)))
            .collect()
    }
}

impl fmt::Display for FixpointSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// One equation per MBP state, indexed like the MBP.
pub fn build_system(m: &Mbp) -> FixpointSystem {
    let equations = m
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let succ = &m.edges[i];
            let (rhs, kind) = match s.kind {
                StateKind::Probabilistic => {
                    (Poly::weighted_sum(m.prob[i].iter().zip(succ.iter().copied())), VarKind::Probabilistic)
                }
                StateKind::ForallBranching => (Poly::product(succ), VarKind::Branching),
                StateKind::ExistsBranching => (Poly::coproduct(succ), VarKind::Branching),
            };
            Equation::new(s.id.clone(), rhs, s.priority, kind)
        })
        .collect();
    FixpointSystem::new(equations).expect("MBP indices are in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Linear,
    Triangular,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemClass {
    pub all_mu: bool,
    pub all_nu: bool,
    pub mixed: bool,
    pub structure: Structure,
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = if self.mixed {
            "mixed"
        } else if self.all_mu && self.all_nu {
            "empty"
        } else if self.all_mu {
            "all_mu"
        } else {
            "all_nu"
        };
        let structure = match self.structure {
            Structure::Linear => "linear",
            Structure::Triangular => "triangular",
            Structure::General => "general",
        };
        write!(f, "{flag}, {structure}")
    }
}

/// Quantifier flags plus structure; linear wins over triangular.
pub fn classify(sys: &FixpointSystem) -> SystemClass {
    let all_mu = sys.equations.iter().all(|e| e.quantifier == Quantifier::Mu);
    let all_nu = sys.equations.iter().all(|e| e.quantifier == Quantifier::Nu);
    let structure = if sys.equations.iter().all(|e| e.rhs.total_degree() <= 1) {
        Structure::Linear
    } else if sys.components().iter().all(|c| c.len() == 1) {
        Structure::Triangular
    } else {
        Structure::General
    };
    SystemClass { all_mu, all_nu, mixed: !all_mu && !all_nu, structure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{builtin, normalize_distinct_children, Builtin};
    use crate::mbp::build_mbp;
    use crate::poly::rat;

    fn system(b: Builtin) -> FixpointSystem {
        build_system(&build_mbp(&normalize_distinct_children(&builtin(&b).unwrap())).unwrap())
    }

    #[test]
    fn quantifiers_follow_parity() {
        for b in [Builtin::L(2), Builtin::Linf, Builtin::W(0, 3)] {
            let s = system(b);
            for e in s.equations() {
                assert_eq!(e.quantifier == Quantifier::Mu, e.priority % 2 == 1);
            }
        }
    }

    #[test]
    fn baskets_outermost_first() {
        let s = system(Builtin::W(1, 3));
        assert_eq!(s.basket_order(), &[3, 2, 1]);
        let s = system(Builtin::W(2, 4));
        assert_eq!(s.basket_order(), &[4, 3, 2]);
    }

    #[test]
    fn apply_g_checks_dimension() {
        let s = parse_system("x ≛μ 1/3 + 2/3 x^2").unwrap();
        assert_eq!(s.apply_g(&[rat(0, 1)]).unwrap(), vec![rat(1, 3)]);
        assert_eq!(s.apply_g(&[rat(1, 2)]).unwrap(), vec![rat(1, 2)]);
        assert_eq!(
            s.apply_g::<f64>(&[]),
            Err(FixpointError::DimensionMismatch { expected: 1, found: 0 })
        );
    }

    #[test]
    fn linf_pair_fixes_ones() {
        let s = parse_system("x1 ≛μ 1/3 x2^2 + 2/3 x1^2\nx2 ≛ν 1/3 x2^2 + 2/3 x1^2").unwrap();
        assert_eq!(s.apply_g(&[rat(1, 1), rat(1, 1)]).unwrap(), vec![rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn classification() {
        let c = classify(&parse_system("x1 ≛μ 1/3 + 2/3 x1^2\nx2 ≛μ 1/3 x1^2 + 2/3 x2^2").unwrap());
        assert_eq!((c.all_mu, c.structure), (true, Structure::Triangular));
        let c = classify(&parse_system("x1 ≛μ 1/3 x2^2 + 2/3 x1^2\nx2 ≛ν 1/3 x2^2 + 2/3 x1^2").unwrap());
        assert_eq!((c.mixed, c.structure), (true, Structure::General));
        let c = classify(&parse_system("x ≛μ 1/2 x + 1/4").unwrap());
        assert_eq!(c.structure, Structure::Linear);
    }
}
