//! Closed intervals with rational endpoints.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn sub(&self, other: &Interval) -> Self {
        self.plus(&other.neg())
    }
}

impl Value for Interval {
    fn zero_value() -> Self {
        Interval::point(BigRational::zero())
    }

    fn one_value() -> Self {
        Interval::point(BigRational::one())
    }

    fn from_rational(q: &BigRational) -> Self {
        Interval::point(q.clone())
    }

    fn plus(&self, other: &Self) -> Self {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    fn times(&self, other: &Self) -> Self {
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = products.iter().min().expect("four products").clone();
        let hi = products.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    fn power(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one_value();
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 || self.lo.is_positive() || self.lo.is_zero() {
            Interval { lo: a.clone().min(b.clone()), hi: a.max(b) }
        } else if !self.hi.is_positive() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: BigRational::zero(), hi: a.max(b) }
        }
    }
}
