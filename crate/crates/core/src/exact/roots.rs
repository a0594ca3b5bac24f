//! Real root isolation by Descartes' rule of signs and bisection.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intpoly::IntPoly;

/// An isolating interval; `lo == hi` marks an exact rational root.
/// For `lo < hi` the polynomial is nonzero at both ends and changes sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn rpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sign variations of `(1+t)^n p((a + b t)/(1+t))`, an upper bound on the
/// number of roots in `(a, b)` that is exact when it is 0 or 1.
fn descartes_bound(p: &IntPoly, a: &BigRational, b: &BigRational) -> usize {
    let n = p.degree();
    let lin = [a.clone(), b.clone()];
    let one_t = [BigRational::one(), BigRational::one()];
    let mut lin_pows = vec![vec![BigRational::one()]];
    let mut one_pows = vec![vec![BigRational::one()]];
    for k in 0..n {
        lin_pows.push(rpoly_mul(&lin_pows[k], &lin));
        one_pows.push(rpoly_mul(&one_pows[k], &one_t));
    }
    let mut acc = vec![BigRational::zero(); n + 1];
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = rpoly_mul(&lin_pows[i], &one_pows[n - i]);
        let c = BigRational::from_integer(c.clone());
        for (k, t) in term.iter().enumerate() {
            acc[k] += &c * t;
        }
    }
    let signs: Vec<bool> = acc.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Shrinks a neighbourhood of the exact root `m` until it holds no other root.
fn root_gap(p: &IntPoly, m: &BigRational, scale: &BigRational) -> BigRational {
    let mut delta = scale.clone();
    loop {
        let lo = m - &delta;
        let hi = m + &delta;
        if p.sign_at(&lo) != Ordering::Equal
            && p.sign_at(&hi) != Ordering::Equal
            && descartes_bound(p, &lo, m) == 0
            && descartes_bound(p, m, &hi) == 0
        {
            return delta;
        }
        delta /= BigRational::from_integer(2.into());
    }
}

fn isolate_open(p: &IntPoly, a: BigRational, b: BigRational, out: &mut Vec<RootInterval>) {
    match descartes_bound(p, &a, &b) {
        0 => {}
        1 => out.push(RootInterval { lo: a, hi: b }),
        _ => {
            let m = (&a + &b) / BigRational::from_integer(2.into());
            if p.sign_at(&m) == Ordering::Equal {
                let delta = root_gap(p, &m, &((&b - &a) / BigRational::from_integer(4.into())));
                isolate_open(p, a, &m - &delta, out);
                out.push(RootInterval { lo: m.clone(), hi: m.clone() });
                isolate_open(p, &m + &delta, b, out);
            } else {
                isolate_open(p, a, m.clone(), out);
                isolate_open(p, m, b, out);
            }
        }
    }
}

/// Isolating intervals of the real roots of `p` in the closed interval
/// `[lo, hi]`, ascending. `p` is made squarefree first.
pub fn isolate_roots_in(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Vec<RootInterval> {
    let p = p.squarefree_part();
    if p.degree() == 0 || lo > hi {
        return Vec::new();
    }
    let mut out = Vec::new();
    let scale = if hi > lo { (hi - lo) / BigRational::from_integer(4.into()) } else { BigRational::one() };
    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut tail = None;
    if p.sign_at(lo) == Ordering::Equal {
        out.push(RootInterval { lo: lo.clone(), hi: lo.clone() });
        if lo == hi {
            return out;
        }
        a = lo + root_gap(&p, lo, &scale);
    }
    if p.sign_at(hi) == Ordering::Equal {
        tail = Some(RootInterval { lo: hi.clone(), hi: hi.clone() });
        b = hi - root_gap(&p, hi, &scale);
    }
    if a < b {
        isolate_open(&p, a, b, &mut out);
    }
    out.extend(tail);
    out
}

/// All real roots, ascending.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<RootInterval> {
    let p = p.squarefree_part();
    if p.degree() == 0 {
        return Vec::new();
    }
    let bound = p.root_bound();
    isolate_roots_in(&p, &-bound.clone(), &bound)
}

/// Bisects a sign-changing interval of `p` until its width is at most `width`.
pub fn refine_interval(p: &IntPoly, iv: &RootInterval, width: &BigRational) -> RootInterval {
    let mut lo = iv.lo.clone();
    let mut hi = iv.hi.clone();
    if lo == hi {
        return iv.clone();
    }
    let lo_sign = p.sign_at(&lo);
    while &(&hi - &lo) > width {
        let m = (&lo + &hi) / BigRational::from_integer(2.into());
        match p.sign_at(&m) {
            Ordering::Equal => return RootInterval { lo: m.clone(), hi: m },
            s if s == lo_sign => lo = m,
            _ => hi = m,
        }
    }
    RootInterval { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rational_to_f64};

    #[test]
    fn l2_roots() {
        let p = IntPoly::from_i64(&[1, -12, 8]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        let r = refine_interval(&p, &roots[0], &rat(1, 1_000_000_000));
        let exact = (3.0 - 7f64.sqrt()) / 4.0;
        assert!((rational_to_f64(&r.lo) - exact).abs() < 1e-9);
        let unit = isolate_roots_in(&p, &rat(0, 1), &rat(1, 1));
        assert_eq!(unit.len(), 1);
    }

    #[test]
    fn exact_rational_roots() {
        // x (2x - 1) (x - 1)
        let p = IntPoly::from_i64(&[0, 1]).mul(&IntPoly::from_i64(&[-1, 2])).mul(&IntPoly::from_i64(&[-1, 1]));
        let roots = isolate_roots_in(&p, &rat(0, 1), &rat(1, 1));
        assert_eq!(roots.len(), 3);
        assert_eq!((&roots[0].lo, &roots[0].hi), (&rat(0, 1), &rat(0, 1)));
        assert_eq!((&roots[2].lo, &roots[2].hi), (&rat(1, 1), &rat(1, 1)));
        assert!(roots[1].lo <= rat(1, 2) && rat(1, 2) <= roots[1].hi);
    }

    #[test]
    fn l3_quartic_roots() {
        let p = IntPoly::from_i64(&[1, -384, 832, -768, 256]);
        let roots = isolate_roots_in(&p, &rat(0, 1), &rat(1, 1));
        assert!(!roots.is_empty());
        let r = refine_interval(&p, &roots[0], &rat(1, 1_000_000_000_000));
        let exact = (3.0 - (1.0 + 3.0 * 7f64.sqrt()).sqrt()) / 4.0;
        assert!((rational_to_f64(&r.lo) - exact).abs() < 1e-9);
    }

    #[test]
    fn multiple_roots_are_counted_once() {
        let p = IntPoly::from_i64(&[1, -2, 1]).mul(&IntPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(isolate_real_roots(&p).len(), 3);
    }
}
