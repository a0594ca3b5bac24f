//! Nested Kleene iteration in floating point.

use thiserror::Error;

use crate::fixpoint::{Basket, FixpointSystem, Quantifier};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericConfig {
    pub tol: f64,
    /// Update budget of the innermost basket per solve.
    pub max_inner_iters: u64,
    /// Update budget of every enclosing basket.
    pub outer_rounds: u64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { tol: 1e-12, max_inner_iters: 1_000_000, outer_rounds: 200 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolution {
    pub values: Vec<f64>,
    /// `‖v − g(v)‖∞` at the returned values.
    pub residual: f64,
    /// Number of basket updates performed.
    pub iterations: u64,
    pub converged: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("bracketing needs a system with a single fixed-point quantifier")]
    MixedSystem,
    #[error("tolerance must be positive")]
    BadTolerance,
}

/// ∞-norm of `v − g(v)`.
pub fn residual(sys: &FixpointSystem, v: &[f64]) -> f64 {
    sys.equations().iter().zip(v).map(|(e, x)| (e.rhs.eval(v) - x).abs()).fold(0.0, f64::max)
}

struct Nested<'a> {
    sys: &'a FixpointSystem,
    baskets: Vec<Basket>,
    cfg: NumericConfig,
    iterations: u64,
    exhausted: bool,
}

impl Nested<'_> {
    fn level_tol(&self, level: usize) -> f64 {
        (self.cfg.tol * 0.1f64.powi(level as i32)).max(1e-15)
    }

    /// Solves basket `level` and everything nested inside it for the current
    /// values of the enclosing baskets.
    fn run(&mut self, level: usize, v: &mut [f64]) {
        let vars = self.baskets[level].vars.clone();
        let start = self.baskets[level].quantifier.bottom();
        for &i in &vars {
            v[i] = start;
        }
        let innermost = level + 1 == self.baskets.len();
        let budget = if innermost { self.cfg.max_inner_iters } else { self.cfg.outer_rounds };
        let tol = self.level_tol(level);
        let mut rounds = 0;
        loop {
            if !innermost {
                self.run(level + 1, v);
            }
            let next: Vec<f64> =
                vars.iter().map(|&i| self.sys.equation(i).rhs.eval(v).clamp(0.0, 1.0)).collect();
            let mut movement: f64 = 0.0;
            for (&i, x) in vars.iter().zip(next) {
                movement = movement.max((x - v[i]).abs());
                v[i] = x;
            }
            self.iterations += 1;
            rounds += 1;
            if movement < tol {
                break;
            }
            if rounds >= budget {
                self.exhausted = true;
                break;
            }
        }
        if !innermost {
            self.run(level + 1, v);
        }
    }
}

/// Nested iteration: each basket starts at 0 (μ) or 1 (ν) and inner baskets
/// are re-solved before every update of an enclosing one.
pub fn solve_numeric(sys: &FixpointSystem, cfg: &NumericConfig) -> Result<NumericSolution, NumericError> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(NumericError::BadTolerance);
    }
    let mut v = vec![0.0; sys.len()];
    if sys.is_empty() {
        return Ok(NumericSolution { values: v, residual: 0.0, iterations: 0, converged: true });
    }
    let mut nested = Nested { sys, baskets: sys.baskets(), cfg: *cfg, iterations: 0, exhausted: false };
    nested.run(0, &mut v);
    let r = residual(sys, &v);
    Ok(NumericSolution { residual: r, iterations: nested.iterations, converged: !nested.exhausted && r <= cfg.tol, values: v })
}

/// `g^0(start), g^1(start), …, g^n(start)` for a constant start vector.
pub fn kleene_sequence(sys: &FixpointSystem, start: f64, n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = vec![start; sys.len()];
    out.push(v.clone());
    for _ in 0..n {
        v = sys.apply_g(&v).expect("dimension matches");
        out.push(v.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    pub quantifier: Quantifier,
    /// n-fold iterate from 0.
    pub lower: Vec<f64>,
    /// n-fold iterate from 1.
    pub upper: Vec<f64>,
    /// Raised when the two iterates stay apart, i.e. more than one fixed point may lie between them.
    pub multiple_fixed_points: bool,
}

impl Bracket {
    /// The side that converges to the solution: `lower` for μ, `upper` for ν.
    pub fn solution(&self) -> &[f64] {
        match self.quantifier {
            Quantifier::Mu => &self.lower,
            Quantifier::Nu => &self.upper,
        }
    }
}

/// Iterates from both ends of the lattice; only for single-quantifier systems.
pub fn bracket(sys: &FixpointSystem, n_iters: usize) -> Result<Bracket, NumericError> {
    let class = sys.classify();
    let quantifier = match (class.all_mu, class.all_nu) {
        (true, _) => Quantifier::Mu,
        (false, true) => Quantifier::Nu,
        _ => return Err(NumericError::MixedSystem),
    };
    let lower = kleene_sequence(sys, 0.0, n_iters).pop().expect("nonempty");
    let upper = kleene_sequence(sys, 1.0, n_iters).pop().expect("nonempty");
    let gap = lower.iter().zip(&upper).map(|(l, u)| u - l).fold(0.0, f64::max);
    Ok(Bracket { quantifier, lower, upper, multiple_fixed_points: gap > 1e-6 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::parse_system;

    fn solve(text: &str) -> NumericSolution {
        solve_numeric(&parse_system(text).unwrap(), &NumericConfig::default()).unwrap()
    }

    #[test]
    fn l1_half() {
        let s = solve("x1 ≛μ 1/3 + 2/3 x1^2");
        assert!(s.converged);
        assert!((s.values[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn l2_value() {
        let s = solve("x1 ≛μ 1/3 + 2/3 x1^2\nx2 ≛μ 1/3 x1^2 + 2/3 x2^2");
        let exact = (3.0 - 7f64.sqrt()) / 4.0;
        assert!((s.values[1] - exact).abs() < 1e-9);
    }

    #[test]
    fn linf_zero() {
        let s = solve("x1 ≛μ 1/3 x2^2 + 2/3 x1^2\nx2 ≛ν 1/3 x2^2 + 2/3 x1^2");
        assert!(s.converged);
        assert!(s.values.iter().all(|x| x.abs() <= 1e-9));
    }

    #[test]
    fn nu_square_is_one() {
        let s = solve("x ≛ν x^2");
        assert_eq!(s.values, vec![1.0]);
        let b = bracket(&parse_system("x ≛ν x^2").unwrap(), 10).unwrap();
        assert_eq!((b.lower[0], b.upper[0]), (0.0, 1.0));
        assert!(b.multiple_fixed_points);
        assert_eq!(b.solution(), &[1.0]);
    }

    #[test]
    fn l1_bracket() {
        let b = bracket(&parse_system("x1 ≛μ 1/3 + 2/3 x1^2").unwrap(), 50).unwrap();
        assert!(b.lower[0] <= 0.5 && 0.5 - b.lower[0] < 1e-3);
        assert_eq!(b.upper[0], 1.0);
        assert!(b.multiple_fixed_points);
    }

    #[test]
    fn mixed_rejected() {
        let sys = parse_system("x1 ≛μ x2\nx2 ≛ν x1").unwrap();
        assert_eq!(bracket(&sys, 5), Err(NumericError::MixedSystem));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = NumericConfig { max_inner_iters: 5, ..NumericConfig::default() };
        let s = solve_numeric(&parse_system("x ≛μ 1/3 + 2/3 x^2").unwrap(), &cfg).unwrap();
        assert!(!s.converged);
    }

    #[test]
    fn nesting_order_matters() {
        // Inner μ under outer ν: x = y, y = gfp → 1. Inner ν under outer μ → 0.
        let s = solve("x =mu[1] y\ny =nu[2] x");
        assert_eq!(s.values, vec![1.0, 1.0]);
        let s = solve("x =nu[2] y\ny =mu[3] x");
        assert_eq!(s.values, vec![0.0, 0.0]);
    }
}
