//! Exact rational linear algebra and the linear fixed-point solver.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExactError;
use crate::fixpoint::{FixpointSystem, Quantifier};

/// Determinant by Gaussian elimination over the rationals.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Solves `m x = b`; `None` when `m` is singular.
pub fn solve(mut m: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(p, k);
        b.swap(p, k);
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
            let t = &factor * &b[k];
            b[i] -= t;
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// `x = A x + c` read off a system of degree at most one.
fn affine_parts(sys: &FixpointSystem) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>), ExactError> {
    let n = sys.len();
    let mut a = vec![vec![BigRational::zero(); n]; n];
    let mut c = vec![BigRational::zero(); n];
    for (i, e) in sys.equations().iter().enumerate() {
        for (m, coef) in e.rhs.terms() {
            match m.as_slice() {
                [] => c[i] += coef,
                [(v, 1)] => a[i][*v] += coef,
                _ => return Err(ExactError::NotLinear),
            }
        }
    }
    Ok((a, c))
}

/// Unique fixed point when `I − A` is nonsingular; otherwise the outermost
/// basket is pinned to its boundary value (0 for μ, 1 for ν) and the reduced
/// system must be nonsingular and consistent with the pinned equations.
pub fn solve_linear(sys: &FixpointSystem) -> Result<Vec<BigRational>, ExactError> {
    let n = sys.len();
    let (a, c) = affine_parts(sys)?;
    let i_minus = |rows: &[usize], cols: &[usize]| -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|&r| {
                cols.iter()
                    .map(|&k| if r == k { BigRational::one() - &a[r][k] } else { -a[r][k].clone() })
                    .collect()
            })
            .collect()
    };
    let all: Vec<usize> = (0..n).collect();
    if let Some(x) = solve(i_minus(&all, &all), c.clone()) {
        return Ok(x);
    }
    let outer = sys.basket_order()[0];
    let pinned: Vec<usize> = all.iter().copied().filter(|&i| sys.equation(i).priority == outer).collect();
    let rest: Vec<usize> = all.iter().copied().filter(|&i| sys.equation(i).priority != outer).collect();
    let boundary = match Quantifier::of_priority(outer) {
        Quantifier::Mu => BigRational::zero(),
        Quantifier::Nu => BigRational::one(),
    };
    let mut x = vec![BigRational::zero(); n];
    for &p in &pinned {
        x[p] = boundary.clone();
    }
    let rhs: Vec<BigRational> = rest
        .iter()
        .map(|&r| pinned.iter().fold(c[r].clone(), |acc, &p| acc + &a[r][p] * &boundary))
        .collect();
    let reduced = solve(i_minus(&rest, &rest), rhs).ok_or(ExactError::SingularReduced)?;
    for (&r, v) in rest.iter().zip(reduced) {
        x[r] = v;
    }
    for &p in &pinned {
        let value = (0..n).fold(c[p].clone(), |acc, k| acc + &a[p][k] * &x[k]);
        if value != x[p] {
            return Err(ExactError::BoundaryRejected(sys.name(p).to_string()));
        }
    }
    Ok(x)
}

/// Value of the game language `W(i,k)`: 0 for odd `k`, 1 for even `k`.
pub fn wik_value(i: u32, k: u32) -> Result<u8, ExactError> {
    if i >= k {
        return Err(ExactError::BadIndices { i, k });
    }
    Ok(if k % 2 == 0 { 1 } else { 0 })
}

/// Determinant of the `(k−1)×(k−1)` matrix with diagonal `−(k−1)/k` and off-diagonal `1/k`.
pub fn wik_determinant(k: u32) -> Result<BigRational, ExactError> {
    if k < 3 {
        return Err(ExactError::BadDimension(k));
    }
    let n = (k - 1) as usize;
    let kk = BigInt::from(k);
    let diag = BigRational::new(-BigInt::from(k - 1), kk.clone());
    let off = BigRational::new(BigInt::one(), kk);
    let m = (0..n).map(|r| (0..n).map(|c| if r == c { diag.clone() } else { off.clone() }).collect()).collect();
    Ok(determinant(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixpoint::parse_system;
    use crate::poly::rat;

    #[test]
    fn determinants() {
        assert_eq!(wik_determinant(3), Ok(rat(1, 3)));
        assert_eq!(wik_determinant(4), Ok(rat(-1, 4)));
        assert_eq!(wik_determinant(10), Ok(rat(-1, 10)));
        assert!(wik_determinant(2).is_err());
    }

    #[test]
    fn closed_form() {
        assert_eq!(wik_value(1, 3), Ok(0));
        assert_eq!(wik_value(0, 2), Ok(1));
        assert_eq!(wik_value(1, 2), Ok(1));
        assert!(wik_value(3, 3).is_err());
    }

    #[test]
    fn affine_contraction() {
        let sys = parse_system("x ≛μ 1/2 x + 1/4").unwrap();
        assert_eq!(solve_linear(&sys), Ok(vec![rat(1, 2)]));
    }

    #[test]
    fn singular_system_pins_outer_basket() {
        let sys = parse_system("x =mu[1] 1/2 x + 1/2 y\ny =nu[2] 1/2 x + 1/2 y").unwrap();
        assert_eq!(solve_linear(&sys), Ok(vec![rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn solve_small_system() {
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]];
        assert_eq!(solve(m, vec![rat(3, 1), rat(5, 1)]), Some(vec![rat(4, 5), rat(7, 5)]));
    }
}
