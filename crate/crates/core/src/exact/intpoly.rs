//! Dense univariate polynomials with integer coefficients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;

/// Coefficients in ascending order; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::default()
    }

    /// `den·x − num`, the primitive polynomial of a rational.
    pub fn linear_for(q: &BigRational) -> Self {
        IntPoly::new(vec![-q.numer().clone(), q.denom().clone()])
    }

    /// Clears denominators and content; the sign of the leading coefficient is kept.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let mut lcm = BigInt::one();
        for c in coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> =
            coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        IntPoly::new(ints).primitive_part()
    }

    /// A univariate [`Poly`] in variable `v`; `None` if other variables occur.
    pub fn from_poly(p: &Poly, v: usize) -> Option<Self> {
        if p.vars().iter().any(|&w| w != v) {
            return None;
        }
        let coeffs: Vec<BigRational> = p.coeffs_in(v).iter().map(|c| c.constant_term()).collect();
        Some(IntPoly::from_rationals(&coeffs))
    }

    pub fn to_poly(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            let m = if i == 0 { Vec::new() } else { vec![(v, i as u32)] };
            out.add_term(m, BigRational::from_integer(c.clone()));
        }
        out
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content removed, sign kept.
    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Content removed and leading coefficient positive.
    pub fn normalized(&self) -> Self {
        let p = self.primitive_part();
        if p.lc().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    pub fn neg(&self) -> Self {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &Vec<BigInt>, i: usize| v.get(i).cloned().unwrap_or_default();
        IntPoly::new((0..n).map(|i| get(&self.coeffs, i) + get(&other.coeffs, i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of `p(x)`, computed on the homogenized numerator.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let (a, b) = (x.numer(), x.denom());
        let n = self.degree();
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        let mut terms = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            terms.push(bpow.clone());
            bpow *= b;
        }
        let mut apow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &apow * &terms[n - i];
            apow *= a;
        }
        acc.cmp(&BigInt::zero())
    }

    /// Quotient and remainder with `lc(d)^k` premultiplied so that everything stays integral.
    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let dl = d.lc();
        let dd = d.degree();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let rl = r.lc();
            let mut shifted = vec![BigInt::zero(); shift];
            shifted.extend(d.coeffs.iter().map(|c| c * &rl));
            r = r.scale(&dl).sub(&IntPoly::new(shifted));
        }
        r
    }

    /// Exact quotient, or `None` if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dl = d.lc();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            let (quot, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &quot * c;
            }
            q[k] = quot;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Normalized greatest common divisor (primitive remainder sequence).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        let content = self.content().gcd(&other.content());
        let g = a.normalized();
        if g.degree() == 0 {
            IntPoly::new(vec![content])
        } else {
            g
        }
    }

    /// `p / gcd(p, p')`, normalized.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree() == 0 {
            return self.normalized();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.normalized();
        }
        self.primitive_part().div_exact(&g.primitive_part()).expect("gcd divides").normalized()
    }

    /// Cauchy bound: every real root has absolute value below it.
    pub fn root_bound(&self) -> BigRational {
        let lc = BigRational::from_integer(self.lc().abs());
        let max = self.coeffs[..self.degree()].iter().map(|c| c.abs()).max().unwrap_or_default();
        BigRational::one() + BigRational::from_integer(max) / lc
    }

    /// Renders with the given variable name, e.g. `8x^2 - 12x + 1`.
    pub fn display_var<'a>(&'a self, var: &'a str) -> IntPolyDisplay<'a> {
        IntPolyDisplay { poly: self, var, spaced: false }
    }

    /// qepcad style, e.g. `8 x2^2 - 12 x2 + 1`.
    pub fn display_spaced<'a>(&'a self, var: &'a str) -> IntPolyDisplay<'a> {
        IntPolyDisplay { poly: self, var, spaced: true }
    }
}

pub struct IntPolyDisplay<'a> {
    poly: &'a IntPoly,
    var: &'a str,
    spaced: bool,
}

impl fmt::Display for IntPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let sep = if self.spaced { " " } else { "" };
            let coeff = if i > 0 && abs.is_one() { String::new() } else { format!("{abs}{sep}") };
            match i {
                0 => write!(f, "{abs}")?,
                1 => write!(f, "{coeff}{}", self.var)?,
                _ => write!(f, "{coeff}{}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn display() {
        let p = IntPoly::from_i64(&[1, -12, 8]);
        assert_eq!(p.to_string(), "8x^2 - 12x + 1");
        assert_eq!(p.display_spaced("x2").to_string(), "8 x2^2 - 12 x2 + 1");
        assert_eq!(IntPoly::from_i64(&[-1, 2]).to_string(), "2x - 1");
        assert_eq!(IntPoly::from_i64(&[0, -1, 1]).to_string(), "x^2 - x");
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x - 1)^2 (2x - 1)
        let p = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-1, 1])).mul(&IntPoly::from_i64(&[-1, 2]));
        assert_eq!(p.squarefree_part(), IntPoly::from_i64(&[1, -3, 2]));
        let g = p.gcd(&IntPoly::from_i64(&[-1, 2]).scale(&BigInt::from(6)));
        assert_eq!(g, IntPoly::from_i64(&[-1, 2]));
    }

    #[test]
    fn exact_division() {
        let p = IntPoly::from_i64(&[1, -3, 2]);
        assert_eq!(p.div_exact(&IntPoly::from_i64(&[-1, 2])), Some(IntPoly::from_i64(&[-1, 1])));
        assert_eq!(p.div_exact(&IntPoly::from_i64(&[1, 1])), None);
    }

    #[test]
    fn signs() {
        let p = IntPoly::from_i64(&[1, -12, 8]);
        assert_eq!(p.sign_at(&rat(0, 1)), Ordering::Greater);
        assert_eq!(p.sign_at(&rat(1, 2)), Ordering::Less);
        assert_eq!(IntPoly::from_i64(&[-1, 2]).sign_at(&rat(1, 2)), Ordering::Equal);
        assert_eq!(p.eval(&rat(1, 2)), rat(-3, 1));
    }

    #[test]
    fn from_rationals_clears_denominators() {
        let p = IntPoly::from_rationals(&[rat(1, 3), rat(-1, 1), rat(2, 3)]);
        assert_eq!(p, IntPoly::from_i64(&[1, -3, 2]));
    }
}
