//! Component-wise exact solving with extremal root selection.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::algebraic::AlgebraicNumber;
use super::factor::factor_containing;
use super::intpoly::IntPoly;
use super::resultant::resultant;
use super::roots::isolate_roots_in;
use super::sign::sign_at;
use super::ExactError;
use crate::fixpoint::{FixpointSystem, Quantifier};
use crate::poly::Poly;

/// Substitutes rational values and returns the irrational ones still mentioned by `h`.
fn specialize(h: &Poly, known: &[(usize, AlgebraicNumber)]) -> (Poly, Vec<(usize, AlgebraicNumber)>) {
    let mut h = h.clone();
    let mut rest = Vec::new();
    for (v, a) in known {
        if !h.mentions(*v) {
            continue;
        }
        match a.as_rational() {
            Some(q) => h = h.substitute(*v, &Poly::constant(q)),
            None => rest.push((*v, a.clone())),
        }
    }
    (h, rest)
}

/// Polynomial in `x` alone whose roots include every `x` with `h(x, known) = 0`.
fn eliminate(h: &Poly, known: &[(usize, AlgebraicNumber)]) -> Poly {
    let mut r = h.clone();
    for (v, a) in known {
        if r.mentions(*v) {
            r = resultant(&r, &a.defining().to_poly(*v), *v);
        }
    }
    r
}

/// Candidate roots in `[0,1]`, in the order the quantifier inspects them.
fn candidates(r: &Poly, x: usize, q: Quantifier) -> Result<Vec<AlgebraicNumber>, ExactError> {
    let p = IntPoly::from_poly(r, x).ok_or(ExactError::Unsupported("elimination left extra variables".into()))?;
    let p = p.squarefree_part();
    let mut out: Vec<AlgebraicNumber> = isolate_roots_in(&p, &BigRational::zero(), &BigRational::one())
        .into_iter()
        .map(|iv| AlgebraicNumber::from_isolated(&p, iv.lo, iv.hi, false).expect("isolating interval"))
        .collect();
    if q == Quantifier::Nu {
        out.reverse();
    }
    Ok(out)
}

/// Replaces the defining polynomial by its irreducible factor when factoring is affordable.
fn minimize(a: AlgebraicNumber) -> AlgebraicNumber {
    if a.is_rational() || a.is_minimal() {
        return a;
    }
    let (lo, hi) = a.interval();
    match factor_containing(a.defining(), &lo, &hi) {
        Ok(f) => AlgebraicNumber::from_isolated(&f, lo, hi, true).unwrap_or(a),
        Err(_) => a,
    }
}

/// Extremal root in `[0,1]` of `h(x, known) = 0` for quantifier `q`, where
/// `h` mentions `x` and variables in `known` only.
pub(crate) fn select_root(
    h: &Poly,
    x: usize,
    known: &[(usize, AlgebraicNumber)],
    q: Quantifier,
    name: &str,
) -> Result<AlgebraicNumber, ExactError> {
    let (h, irrational) = specialize(h, known);
    if h.is_zero() {
        let bottom = if q == Quantifier::Mu { BigRational::zero() } else { BigRational::one() };
        return Ok(AlgebraicNumber::rational(bottom));
    }
    let r = eliminate(&h, &irrational);
    if r.is_zero() {
        return Err(ExactError::Degenerate(name.to_string()));
    }
    for c in candidates(&r, x, q)? {
        let genuine = irrational.is_empty() || {
            let mut point = irrational.clone();
            point.push((x, c.clone()));
            sign_at(&h, &point).map_err(|_| ExactError::Ambiguous(name.to_string()))? == Ordering::Equal
        };
        if genuine {
            return Ok(minimize(c));
        }
    }
    Err(ExactError::NoRoot(name.to_string()))
}

fn known_point(values: &[Option<AlgebraicNumber>]) -> Vec<(usize, AlgebraicNumber)> {
    values.iter().enumerate().filter_map(|(i, v)| v.clone().map(|a| (i, a))).collect()
}

/// Solves a two-variable component: the inner variable as a function of the
/// outer one, then the outer variable's extremal root among the common solutions.
fn solve_pair(
    sys: &FixpointSystem,
    pair: [usize; 2],
    values: &[Option<AlgebraicNumber>],
) -> Result<(AlgebraicNumber, AlgebraicNumber), ExactError> {
    let [a, b] = pair;
    let (outer, inner) = if sys.equation(b).priority > sys.equation(a).priority { (b, a) } else { (a, b) };
    let eq = |i: usize| sys.equation(i).rhs.sub(&Poly::var(i));
    let f = eq(outer);
    let g = eq(inner);
    let known = known_point(values);
    let (fs, irr_f) = specialize(&f, &known);
    let (gs, irr_g) = specialize(&g, &known);
    let mut irrational = irr_f;
    for (v, x) in irr_g {
        if !irrational.iter().any(|(w, _)| *w == v) {
            irrational.push((v, x));
        }
    }
    let joint = resultant(&fs, &gs, inner);
    if joint.is_zero() {
        return Err(ExactError::Degenerate(sys.name(outer).to_string()));
    }
    let r = eliminate(&joint, &irrational);
    if r.is_zero() {
        return Err(ExactError::Degenerate(sys.name(outer).to_string()));
    }
    let q_outer = sys.equation(outer).quantifier;
    let q_inner = sys.equation(inner).quantifier;
    for c in candidates(&r, outer, q_outer)? {
        let mut point = known.clone();
        point.push((outer, c.clone()));
        let u = match select_root(&g, inner, &point, q_inner, sys.name(inner)) {
            Ok(u) => u,
            Err(ExactError::NoRoot(_)) => continue,
            Err(e) => return Err(e),
        };
        point.push((inner, u.clone()));
        let s = sign_at(&f, &point).map_err(|_| ExactError::Ambiguous(sys.name(outer).to_string()))?;
        if s == Ordering::Equal {
            let c = minimize(c);
            return Ok(if outer == a { (c, u) } else { (u, c) });
        }
    }
    Err(ExactError::NoRoot(sys.name(outer).to_string()))
}

/// Processes strongly connected components in dependency order; components
/// of one variable take the extremal root, components of two use the nested
/// pair solver.
pub(crate) fn solve_components(sys: &FixpointSystem) -> Result<Vec<AlgebraicNumber>, ExactError> {
    let mut values: Vec<Option<AlgebraicNumber>> = vec![None; sys.len()];
    for comp in sys.components() {
        match comp.as_slice() {
            &[i] => {
                let e = sys.equation(i);
                let h = e.rhs.sub(&Poly::var(i));
                values[i] = Some(select_root(&h, i, &known_point(&values), e.quantifier, &e.var)?);
            }
            &[a, b] => {
                let (va, vb) = solve_pair(sys, [a, b], &values)?;
                values[a] = Some(va);
                values[b] = Some(vb);
            }
            _ => {
                return Err(ExactError::Unsupported(format!(
                    "strongly connected component of {} variables",
                    comp.len()
                )))
            }
        }
    }
    Ok(values.into_iter().map(|v| v.expect("every component solved")).collect())
}
