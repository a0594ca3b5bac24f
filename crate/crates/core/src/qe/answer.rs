//! Quantifier-free characterizations computed without an external QE tool.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::plan::StagePlan;
use super::{Atom, Conjunction, QeError, Rel};
use crate::exact::roots::isolate_real_roots;
use crate::exact::AlgebraicNumber;
use crate::fixpoint::{FixpointSystem, Quantifier};
use crate::poly::Poly;

/// Simplest rational strictly between `lo` and `hi` (`None` meaning +∞).
fn simplest_open(lo: &BigRational, hi: Option<&BigRational>) -> BigRational {
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    let has_integer = hi.is_none_or(|h| &next < h);
    if has_integer {
        return if lo.is_negative() && hi.is_none_or(|h| h.is_positive()) {
            BigRational::zero()
        } else if lo.is_negative() {
            let h = hi.expect("bounded");
            h.ceil() - BigRational::one()
        } else {
            next
        };
    }
    let h = hi.expect("bounded");
    let frac_lo = lo - &fl;
    let frac_hi = h - &fl;
    let inner = if frac_lo.is_zero() {
        simplest_open(&frac_hi.recip(), None)
    } else {
        simplest_open(&frac_hi.recip(), Some(&frac_lo.recip()))
    };
    fl + inner.recip()
}

/// Simplest rational (smallest denominator, then numerator) in the open interval `(lo, hi)`.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi, "empty interval");
    simplest_open(lo, Some(hi))
}

fn separator(a: &AlgebraicNumber, b: &AlgebraicNumber) -> BigRational {
    let mut width = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
    loop {
        let (_, ahi) = a.refine(&width);
        let (blo, _) = b.refine(&width);
        if ahi < blo {
            return simplest_between(&ahi, &blo);
        }
        width /= BigRational::from_integer(BigInt::from(1024));
    }
}

/// `d x - n rel 0` for the rational `n/d`.
fn linear_atom(x: usize, q: &BigRational, rel: Rel) -> Atom {
    let mut p = Poly::monomial(vec![(x, 1)], BigRational::from_integer(q.denom().clone()));
    p.add_term(Vec::new(), BigRational::from_integer(-q.numer().clone()));
    Atom::zero(p, rel)
}

/// Characterizes a known value of `x`: `d x - n = 0` for rationals, otherwise
/// separating bounds followed by the minimal polynomial.
pub fn characterize_value(x: usize, a: &AlgebraicNumber) -> Conjunction {
    if let Some(q) = a.as_rational() {
        return vec![linear_atom(x, &q, Rel::Eq)];
    }
    let defining = a.defining();
    let roots: Vec<AlgebraicNumber> = isolate_real_roots(defining)
        .into_iter()
        .map(|iv| AlgebraicNumber::from_isolated(defining, iv.lo, iv.hi, a.is_minimal()).expect("isolated"))
        .collect();
    let pos = roots.iter().position(|r| r.cmp_exact(a) == Ordering::Equal).expect("value is a root");
    let mut out = Vec::new();
    if pos > 0 {
        out.push(linear_atom(x, &separator(&roots[pos - 1], a), Rel::Gt));
    }
    if pos + 1 < roots.len() {
        out.push(linear_atom(x, &separator(a, &roots[pos + 1]), Rel::Lt));
    }
    out.push(Atom::zero(defining.to_poly(x).sorted(), Rel::Eq));
    out
}

/// Orders terms with parameters more significant than the target, highest first.
fn params_first(p: &Poly, target: usize) -> Poly {
    p.sorted_by_key(|m| {
        let t = m.iter().find(|(v, _)| *v == target).map_or(0, |(_, e)| *e);
        let params: Vec<(usize, u32)> = m.iter().copied().filter(|(v, _)| *v != target).collect();
        std::cmp::Reverse((params, t))
    })
}

/// Characterizes the extremal root of an equation that is quadratic in the
/// target with constant leading coefficient and has parameters: the
/// equation plus the sign of its derivative in the target.
fn characterize_parametric(x: usize, rhs: &Poly, q: Quantifier) -> Result<Conjunction, String> {
    let e = rhs.sub(&Poly::var(x)).primitive_integer();
    let coeffs = e.coeffs_in(x);
    if coeffs.len() != 3 {
        return Err("parametric stage is not quadratic in its target".into());
    }
    let Some(lead) = coeffs[2].as_constant() else {
        return Err("leading coefficient depends on parameters".into());
    };
    let e = if lead.is_negative() { e.neg() } else { e };
    let d = e.derivative(x).primitive_integer();
    let rel = match q {
        Quantifier::Mu => Rel::Le,
        Quantifier::Nu => Rel::Ge,
    };
    Ok(vec![Atom::zero(params_first(&d, x), rel), Atom::zero(params_first(&e, x), Rel::Eq)])
}

/// Answer for stage `k`: from `value` when the stage has no parameters,
/// otherwise from the derivative condition.
pub fn qf_answer(
    sys: &FixpointSystem,
    plan: &StagePlan,
    k: usize,
    value: Option<&AlgebraicNumber>,
) -> Result<Conjunction, QeError> {
    let stage = plan.stages.get(k).ok_or(QeError::StageOutOfRange(k))?;
    let x = stage.target;
    let name = sys.name(x).to_string();
    if stage.params.is_empty() {
        let a = value.ok_or_else(|| QeError::NoAnswer(name.clone(), "no exact value".into()))?;
        return Ok(characterize_value(x, a));
    }
    if !stage.priors.is_empty() {
        return Err(QeError::NoAnswer(name, "parametric stage with earlier characterizations".into()));
    }
    characterize_parametric(x, &sys.equation(x).rhs, stage.quantifier).map_err(|m| QeError::NoAnswer(name, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntPoly;
    use crate::poly::rat;
    use crate::qe::render_conjunction;

    fn names(v: usize) -> String {
        format!("x{}", v + 1)
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&rat(1, 10), &rat(14, 10)), rat(1, 1));
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), rat(0, 1));
        assert_eq!(simplest_between(&rat(-5, 2), &rat(-2, 1)), rat(-7, 3));
        assert_eq!(simplest_between(&rat(0, 1), &rat(1, 3)), rat(1, 4));
    }

    #[test]
    fn l2_characterization() {
        let a = AlgebraicNumber::from_isolated(&IntPoly::from_i64(&[1, -12, 8]), rat(0, 1), rat(1, 2), true).unwrap();
        let c = characterize_value(1, &a);
        assert_eq!(render_conjunction(&c, &names), "x2 - 1 < 0 /\\ 8 x2^2 - 12 x2 + 1 = 0");
    }

    #[test]
    fn rational_characterization() {
        let c = characterize_value(0, &AlgebraicNumber::rational(rat(1, 2)));
        assert_eq!(render_conjunction(&c, &names), "2 x1 - 1 = 0");
        let c = characterize_value(1, &AlgebraicNumber::rational(rat(0, 1)));
        assert_eq!(render_conjunction(&c, &names), "x2 = 0");
    }

    #[test]
    fn upper_root_gets_lower_bound() {
        let a = AlgebraicNumber::from_isolated(&IntPoly::from_i64(&[1, -12, 8]), rat(1, 1), rat(2, 1), true).unwrap();
        assert_eq!(render_conjunction(&characterize_value(1, &a), &names), "x2 - 1 > 0 /\\ 8 x2^2 - 12 x2 + 1 = 0");
    }

    #[test]
    fn parametric_least_root() {
        let sys = crate::fixpoint::parse_system("x1 ≛μ 1/3 x2^2 + 2/3 x1^2\nx2 ≛ν 1/3 x2^2 + 2/3 x1^2").unwrap();
        let c = characterize_parametric(0, &sys.equation(0).rhs, Quantifier::Mu).unwrap();
        assert_eq!(render_conjunction(&c, &names), "4 x1 - 3 <= 0 /\\ x2^2 + 2 x1^2 - 3 x1 = 0");
    }
}
