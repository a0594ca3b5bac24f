//! Exact sign of a polynomial at a point with algebraic coordinates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebraic::AlgebraicNumber;
use super::interval::Interval;
use super::intpoly::IntPoly;
use super::resultant::resultant;
use crate::poly::{Poly, Value};

/// Interval width, in bits, beyond which a sign test gives up.
pub const MAX_BITS: u64 = 256;

fn pow2_inv(bits: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

fn eval_interval(h: &Poly, point: &[(usize, AlgebraicNumber)], bits: u64) -> Interval {
    let n = h.vars().iter().max().map_or(0, |v| v + 1);
    let mut values = vec![Interval::zero_value(); n];
    let width = pow2_inv(bits);
    for (v, a) in point {
        if *v < n {
            let (lo, hi) = a.refine(&width);
            values[*v] = Interval::new(lo, hi);
        }
    }
    h.eval(&values)
}

/// A univariate polynomial in a fresh variable `w` vanishing at `h(point)`.
fn annihilator(h: &Poly, point: &[(usize, AlgebraicNumber)]) -> IntPoly {
    let w = point.iter().map(|(v, _)| v + 1).chain(h.vars().iter().map(|v| v + 1)).max().unwrap_or(0);
    let mut g = Poly::var(w).sub(h);
    for (v, a) in point {
        if g.mentions(*v) {
            g = resultant(&g, &a.defining().to_poly(*v), *v);
        }
    }
    IntPoly::from_poly(&g, w).expect("all point variables eliminated")
}

/// Lower bound on the absolute value of every nonzero root of `p`.
fn nonzero_root_bound(p: &IntPoly) -> BigRational {
    let skip = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let q = &p.coeffs()[skip..];
    let q0 = q[0].abs();
    let max = q[1..].iter().map(|c| c.abs()).max().unwrap_or_default();
    BigRational::new(q0.clone(), q0 + max)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignUndecided;

/// Sign of `h` at `point`; every variable of `h` must be assigned.
pub fn sign_at(h: &Poly, point: &[(usize, AlgebraicNumber)]) -> Result<Ordering, SignUndecided> {
    let mut h = h.clone();
    let mut irrational = Vec::new();
    for (v, a) in point {
        if !h.mentions(*v) {
            continue;
        }
        match a.as_rational() {
            Some(q) => h = h.substitute(*v, &Poly::constant(q)),
            None => irrational.push((*v, a.clone())),
        }
    }
    if let Some(c) = h.as_constant() {
        return Ok(c.cmp(&BigRational::zero()));
    }
    for bits in [16, 32, 64] {
        let iv = eval_interval(&h, &irrational, bits);
        if !iv.contains_zero() {
            return Ok(if iv.lo.is_positive() { Ordering::Greater } else { Ordering::Less });
        }
    }
    let p = annihilator(&h, &irrational);
    if p.is_zero() {
        return Err(SignUndecided);
    }
    let delta = nonzero_root_bound(&p);
    let mut bits = 64;
    while bits <= MAX_BITS {
        let iv = eval_interval(&h, &irrational, bits);
        if !iv.contains_zero() {
            return Ok(if iv.lo.is_positive() { Ordering::Greater } else { Ordering::Less });
        }
        if iv.width() < delta {
            // The value and 0 are both inside and closer than any nonzero root.
            return Ok(Ordering::Equal);
        }
        bits *= 2;
    }
    Err(SignUndecided)
}
