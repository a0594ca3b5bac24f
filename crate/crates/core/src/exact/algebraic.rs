//! Real algebraic numbers as a defining polynomial plus an isolating interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::Interval;
use super::intpoly::IntPoly;
use super::roots::{isolate_roots_in, refine_interval, RootInterval};
use crate::poly::rational_to_f64;

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    defining: IntPoly,
    lo: BigRational,
    hi: BigRational,
    /// Whether `defining` is known to be irreducible.
    minimal: bool,
}

impl AlgebraicNumber {
    pub fn rational(q: BigRational) -> Self {
        AlgebraicNumber { defining: IntPoly::linear_for(&q), lo: q.clone(), hi: q, minimal: true }
    }

    /// The unique root of `defining` in `[lo, hi]`. The polynomial is made
    /// squarefree; the interval must isolate exactly one root.
    pub fn from_isolated(defining: &IntPoly, lo: BigRational, hi: BigRational, minimal: bool) -> Option<Self> {
        let p = defining.squarefree_part();
        let roots = isolate_roots_in(&p, &lo, &hi);
        if roots.len() != 1 {
            return None;
        }
        let RootInterval { lo, hi } = roots.into_iter().next().expect("one root");
        if lo == hi {
            return Some(AlgebraicNumber::rational(lo));
        }
        let minimal = minimal || p.degree() == 1;
        if p.degree() == 1 {
            let q = -BigRational::new(p.coeffs()[0].clone(), p.coeffs()[1].clone());
            return Some(AlgebraicNumber::rational(q));
        }
        Some(AlgebraicNumber { defining: p, lo, hi, minimal })
    }

    pub fn defining(&self) -> &IntPoly {
        &self.defining
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Degree of the defining polynomial.
    pub fn degree(&self) -> usize {
        self.defining.degree()
    }

    pub fn interval(&self) -> (BigRational, BigRational) {
        (self.lo.clone(), self.hi.clone())
    }

    pub fn as_interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.lo == self.hi).then(|| self.lo.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.lo == self.hi
    }

    /// Interval of width at most `width` containing the value; refining
    /// twice with decreasing widths gives nested intervals.
    pub fn refine(&self, width: &BigRational) -> (BigRational, BigRational) {
        let r = refine_interval(&self.defining, &RootInterval { lo: self.lo.clone(), hi: self.hi.clone() }, width);
        (r.lo, r.hi)
    }

    /// Narrows the stored interval in place.
    pub fn refine_in_place(&mut self, width: &BigRational) {
        let (lo, hi) = self.refine(width);
        if lo == hi {
            *self = AlgebraicNumber::rational(lo);
        } else {
            self.lo = lo;
            self.hi = hi;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.refine(&BigRational::new(BigInt::one(), BigInt::one() << 60));
        rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
    }

    /// Decimal expansion with `digits` fractional digits, from an interval of width `10^-digits`.
    pub fn decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let (lo, hi) = self.refine(&BigRational::new(BigInt::one(), scale.clone()));
        let mid = (lo + hi) / BigRational::from_integer(2.into());
        let scaled = (mid * BigRational::from_integer(scale)).round().to_integer();
        let negative = scaled < BigInt::zero();
        let digits_str = scaled.magnitude().to_string();
        let padded = format!("{:0>width$}", digits_str, width = digits + 1);
        let (int_part, frac) = padded.split_at(padded.len() - digits);
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &AlgebraicNumber) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        let mut width = (&a.hi - &a.lo).max(&b.hi - &b.lo);
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if a.is_rational() && b.is_rational() {
                return a.lo.cmp(&b.lo);
            }
            if a.equals_overlapping(&b) {
                return Ordering::Equal;
            }
            width /= BigRational::from_integer(4.into());
            a.refine_in_place(&width);
            b.refine_in_place(&width);
        }
    }

    /// Decides equality when the two intervals overlap: the values agree iff
    /// the common factor of the defining polynomials has a root in the overlap.
    fn equals_overlapping(&self, other: &AlgebraicNumber) -> bool {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        if lo > hi {
            return false;
        }
        let g = self.defining.gcd(&other.defining);
        if g.degree() == 0 {
            return false;
        }
        // Roots of the common factor inside either interval are that number's root.
        !isolate_roots_in(&g, &lo, &hi).is_empty()
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root of {} in [{},{}] ≈ {}",
            self.defining,
            crate::poly::format_rational(&self.lo),
            crate::poly::format_rational(&self.hi),
            self.decimal(12)
        )
    }
}
