//! Factorization over the integers by Kronecker's method.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::intpoly::IntPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorError {
    #[error("factorization exceeds the search budget")]
    TooExpensive,
}

/// Candidate interpolation tuples examined before giving up.
const BUDGET: u64 = 5_000_000;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, FactorError> {
    let mut n = n.abs().to_u64().ok_or(FactorError::TooExpensive)?;
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            primes.push((p, e));
        }
        p += 1;
        if p > 10_000_000 {
            return Err(FactorError::TooExpensive);
        }
    }
    if n > 1 {
        primes.push((n, 1));
    }
    let mut out = vec![1u64];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &out {
            let mut x = *d;
            for _ in 0..=e {
                next.push(x);
                x *= p;
            }
        }
        out = next;
    }
    out.sort_unstable();
    Ok(out.into_iter().map(BigInt::from).collect())
}

/// Lagrange interpolation through `(xs[i], ys[i])`; `None` if a coefficient is not integral.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Option<IntPoly> {
    let n = xs.len();
    let mut acc = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = BigRational::new(ys[i].clone(), denom);
        for (k, c) in basis.iter().enumerate() {
            acc[k] += c * &scale;
        }
    }
    if acc.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(IntPoly::new(acc.into_iter().map(|c| c.to_integer()).collect()))
}

/// Splits off one factor of degree exactly `d`, if any.
fn factor_of_degree(f: &IntPoly, d: usize, budget: &mut u64) -> Result<Option<IntPoly>, FactorError> {
    let mut points: Vec<(BigInt, BigInt)> = Vec::new();
    let mut k: i64 = 0;
    while points.len() < 2 * d + 4 {
        let x = BigInt::from(k);
        let y = f.eval_int(&x);
        if !y.is_zero() {
            points.push((x, y));
        }
        k = if k > 0 { -k } else { -k + 1 };
    }
    points.sort_by_key(|(_, y)| y.abs());
    points.truncate(d + 1);
    let xs: Vec<BigInt> = points.iter().map(|(x, _)| x.clone()).collect();
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .enumerate()
        .map(|(i, (_, y))| {
            let ds = divisors(y)?;
            Ok(if i == 0 { ds } else { ds.iter().flat_map(|v| [v.clone(), -v]).collect() })
        })
        .collect::<Result<_, FactorError>>()?;
    let total: u64 = choices.iter().map(|c| c.len() as u64).try_fold(1u64, |a, b| a.checked_mul(b)).unwrap_or(u64::MAX);
    if total > *budget {
        return Err(FactorError::TooExpensive);
    }
    *budget -= total;
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<BigInt> = idx.iter().enumerate().map(|(i, &j)| choices[i][j].clone()).collect();
        if let Some(g) = interpolate(&xs, &ys) {
            if g.degree() == d && !g.is_zero() {
                if let Some(q) = f.div_exact(&g) {
                    if q.degree() > 0 {
                        return Ok(Some(g.normalized()));
                    }
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Irreducible factors of a squarefree polynomial, sorted by degree, each normalized.
pub fn factor_squarefree(f: &IntPoly) -> Result<Vec<IntPoly>, FactorError> {
    let mut budget = BUDGET;
    let mut pending = vec![f.normalized()];
    let mut out = Vec::new();
    while let Some(mut g) = pending.pop() {
        if g.degree() == 0 {
            continue;
        }
        // Integer roots make the interpolation points vanish, so strip them first.
        let mut k: i64 = 0;
        let bound = g.coeffs()[0].abs().to_i64().unwrap_or(i64::MAX).min(64);
        while k.abs() <= bound && g.degree() > 0 {
            let x = BigInt::from(k);
            if g.eval_int(&x).is_zero() {
                let lin = IntPoly::new(vec![-x, BigInt::one()]);
                out.push(lin.clone());
                g = g.div_exact(&lin).expect("root divides");
                continue;
            }
            k = if k > 0 { -k } else { -k + 1 };
        }
        if g.degree() == 0 {
            continue;
        }
        let mut split = None;
        for d in 1..=g.degree() / 2 {
            if let Some(h) = factor_of_degree(&g, d, &mut budget)? {
                split = Some(h);
                break;
            }
        }
        match split {
            Some(h) => {
                let rest = g.div_exact(&h).or_else(|| g.div_exact(&h.neg())).expect("factor divides");
                out.push(h);
                pending.push(rest.normalized());
            }
            None => out.push(g.normalized()),
        }
    }
    out.sort_by_key(|p| (p.degree(), p.coeffs().to_vec()));
    Ok(out)
}

/// The irreducible factor of `f` vanishing on the root isolated by `(lo, hi)`.
pub fn factor_containing(
    f: &IntPoly,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<IntPoly, FactorError> {
    let factors = factor_squarefree(&f.squarefree_part())?;
    let found = factors.into_iter().find(|g| !super::roots::isolate_roots_in(g, lo, hi).is_empty());
    Ok(found.expect("some factor vanishes at the root"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_times_linear() {
        let f = IntPoly::from_i64(&[1, -12, 8]).mul(&IntPoly::from_i64(&[-1, 2]));
        let fs = factor_squarefree(&f).unwrap();
        assert_eq!(fs, vec![IntPoly::from_i64(&[-1, 2]), IntPoly::from_i64(&[1, -12, 8])]);
    }

    #[test]
    fn l3_quartic_is_irreducible() {
        let f = IntPoly::from_i64(&[1, -384, 832, -768, 256]);
        assert_eq!(factor_squarefree(&f).unwrap(), vec![f]);
    }

    #[test]
    fn product_of_quadratics() {
        let a = IntPoly::from_i64(&[-2, 0, 1]);
        let b = IntPoly::from_i64(&[1, -12, 8]);
        let fs = factor_squarefree(&a.mul(&b)).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a) && fs.contains(&b));
    }

    #[test]
    fn integer_roots() {
        let f = IntPoly::from_i64(&[0, -1, 1]);
        assert_eq!(factor_squarefree(&f).unwrap(), vec![IntPoly::from_i64(&[-1, 1]), IntPoly::from_i64(&[0, 1])]);
    }
}
