//! Resultants of multivariate polynomials via the Sylvester matrix.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::Poly;

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = BigRational::one();
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}

/// `Res_v(f, g)`; zero when either polynomial is zero.
pub fn resultant(f: &Poly, g: &Poly, v: usize) -> Poly {
    if f.is_zero() || g.is_zero() {
        return Poly::zero();
    }
    let a = f.coeffs_in(v);
    let b = g.coeffs_in(v);
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 {
        return a[0].pow(n as u32);
    }
    if n == 0 {
        return b[0].pow(m as u32);
    }
    let size = m + n;
    let mut rows = vec![vec![Poly::zero(); size]; size];
    for r in 0..n {
        for (d, c) in a.iter().enumerate() {
            rows[r][r + m - d] = c.clone();
        }
    }
    for r in 0..m {
        for (d, c) in b.iter().enumerate() {
            rows[n + r][r + n - d] = c.clone();
        }
    }
    determinant(rows)
}

/// Scales to integer coefficients with positive leading term; zero stays zero.
pub fn normalize(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let q = p.primitive_integer();
    match q.leading_term() {
        Some((_, c)) if *c < BigRational::zero() => q.neg(),
        _ => q,
    }
}
