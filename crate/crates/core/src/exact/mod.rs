//! Exact solutions as real algebraic numbers.
//!
//! Systems of degree one are solved by rational elimination. Otherwise the
//! strongly connected components are processed in dependency order: earlier
//! values are eliminated by resultants, the real roots in `[0,1]` of the
//! result are isolated, and the least (μ) or greatest (ν) root that solves
//! the original equation is kept.

pub mod algebraic;
pub mod factor;
pub mod interval;
pub mod intpoly;
pub mod linear;
pub mod resultant;
pub mod roots;
pub mod sign;
mod triangular;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

pub use algebraic::AlgebraicNumber;
pub use intpoly::IntPoly;
pub use linear::{wik_determinant, wik_value};

use crate::fixpoint::{FixpointSystem, Resolved, Structure};
use crate::poly::Poly;
use interval::Interval;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("system is not triangular")]
    NotTriangular,
    #[error("system is not linear")]
    NotLinear,
    #[error("no fixed point of {0} in [0,1]")]
    NoRoot(String),
    #[error("cannot separate candidate roots for {0} at maximum refinement")]
    Ambiguous(String),
    #[error("equation of {0} is degenerate after elimination")]
    Degenerate(String),
    #[error("reduced linear system is singular; the fixed point is ambiguous")]
    SingularReduced,
    #[error("boundary value of {0} is not a fixed point")]
    BoundaryRejected(String),
    #[error("unsupported system: {0}")]
    Unsupported(String),
    #[error("bad indices i={i}, k={k}: need 0 <= i < k")]
    BadIndices { i: u32, k: u32 },
    #[error("dimension k={0} is below 3")]
    BadDimension(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactMethod {
    Linear,
    Triangular,
    Components,
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub values: Vec<AlgebraicNumber>,
    pub method: ExactMethod,
}

impl ExactSolution {
    /// Defining polynomial of variable `i`; irreducible when [`AlgebraicNumber::is_minimal`].
    pub fn minimal_polynomial(&self, i: usize) -> &IntPoly {
        self.values[i].defining()
    }

    /// Value of an original or current variable name; expressions are
    /// evaluated when every value they mention is rational.
    pub fn value_of(&self, sys: &FixpointSystem, name: &str) -> Option<AlgebraicNumber> {
        match sys.resolve(name)? {
            Resolved::Var(i) => Some(self.values[i].clone()),
            Resolved::Const(c) => Some(AlgebraicNumber::rational(c)),
            Resolved::Expr(p) => {
                let mut q = p.clone();
                for v in p.vars() {
                    q = q.substitute(v, &Poly::constant(self.values[v].as_rational()?));
                }
                q.as_constant().map(AlgebraicNumber::rational)
            }
        }
    }

    /// Interval check of every equation with inputs refined to width `2^-bits`.
    pub fn satisfies(&self, sys: &FixpointSystem, bits: u64) -> bool {
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        let point: Vec<Interval> = self
            .values
            .iter()
            .map(|a| {
                let (lo, hi) = a.refine(&width);
                Interval::new(lo, hi)
            })
            .collect();
        sys.equations().iter().enumerate().all(|(i, e)| e.rhs.eval(&point).sub(&point[i]).contains_zero())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(AlgebraicNumber::to_f64).collect()
    }
}

/// Exact solution of a system whose components are single variables.
pub fn solve_triangular_exact(sys: &FixpointSystem) -> Result<ExactSolution, ExactError> {
    if sys.classify().structure == Structure::General {
        return Err(ExactError::NotTriangular);
    }
    Ok(ExactSolution { values: triangular::solve_components(sys)?, method: ExactMethod::Triangular })
}

/// Exact solution of a system of degree at most one.
pub fn solve_linear_exact(sys: &FixpointSystem) -> Result<ExactSolution, ExactError> {
    let values = linear::solve_linear(sys)?;
    Ok(ExactSolution { values: values.into_iter().map(AlgebraicNumber::rational).collect(), method: ExactMethod::Linear })
}

/// Dispatches on structure: linear, triangular, or components of at most two variables.
pub fn solve_exact(sys: &FixpointSystem) -> Result<ExactSolution, ExactError> {
    if sys.is_empty() {
        return Ok(ExactSolution { values: Vec::new(), method: ExactMethod::Linear });
    }
    match sys.classify().structure {
        Structure::Linear => solve_linear_exact(sys),
        Structure::Triangular => solve_triangular_exact(sys),
        Structure::General => {
            Ok(ExactSolution { values: triangular::solve_components(sys)?, method: ExactMethod::Components })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{builtin, normalize_distinct_children, Builtin};
    use crate::fixpoint::{build_system, parse_system, simplify};
    use crate::mbp::build_mbp;
    use crate::poly::rat;

    fn system(b: Builtin) -> FixpointSystem {
        let a = normalize_distinct_children(&builtin(&b).unwrap());
        simplify(&build_system(&build_mbp(&a).unwrap()))
    }

    #[test]
    fn l1_is_one_half() {
        let s = solve_exact(&system(Builtin::L(1))).unwrap();
        assert_eq!(s.values[0].as_rational(), Some(rat(1, 2)));
        assert_eq!(s.minimal_polynomial(0), &IntPoly::from_i64(&[-1, 2]));
    }

    #[test]
    fn l2_minimal_polynomial() {
        let sys = system(Builtin::L(2));
        let s = solve_exact(&sys).unwrap();
        assert_eq!(s.minimal_polynomial(1), &IntPoly::from_i64(&[1, -12, 8]));
        assert_eq!(s.values[1].decimal(10), "0.0885621722");
        assert!(s.satisfies(&sys, 64));
    }

    #[test]
    fn l3_quartic() {
        let sys = system(Builtin::L(3));
        let s = solve_exact(&sys).unwrap();
        assert_eq!(s.minimal_polynomial(2), &IntPoly::from_i64(&[1, -384, 832, -768, 256]));
        assert!(s.values[2].is_minimal());
        let expected = (3.0 - (1.0 + 3.0 * 7f64.sqrt()).sqrt()) / 4.0;
        assert!((s.values[2].to_f64() - expected).abs() < 1e-12);
    }

    #[test]
    fn linf_is_zero() {
        let s = solve_exact(&system(Builtin::Linf)).unwrap();
        assert_eq!(s.method, ExactMethod::Components);
        assert!(s.values.iter().all(|v| v.as_rational() == Some(rat(0, 1))));
    }

    #[test]
    fn w_languages() {
        for (i, k) in [(1, 3), (0, 2), (1, 2), (0, 3)] {
            let sys = system(Builtin::W(i, k));
            let s = solve_exact(&sys).unwrap();
            let v = s.value_of(&sys, &format!("s(q{i})")).unwrap();
            assert_eq!(v.as_rational(), Some(rat(wik_value(i, k).unwrap() as i64, 1)), "W({i},{k})");
        }
    }

    #[test]
    fn square_is_zero_under_mu() {
        let s = solve_exact(&parse_system("x ≛μ x^2").unwrap()).unwrap();
        assert_eq!(s.values[0].as_rational(), Some(rat(0, 1)));
        let s = solve_exact(&parse_system("x ≛ν x^2").unwrap()).unwrap();
        assert_eq!(s.values[0].as_rational(), Some(rat(1, 1)));
    }

    #[test]
    fn pair_with_same_quantifier() {
        // Least solution of x = x^2/2 + 1/4 is 1 - 1/sqrt(2).
        let sys = parse_system("x ≛μ 1/2 y + 1/4\ny ≛μ x^2").unwrap();
        let s = solve_exact(&sys).unwrap();
        assert!(s.satisfies(&sys, 64));
        let x = s.values[0].to_f64();
        assert!((x - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    }
}
