//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms keep the order in which their monomials first appeared, so that a
//! polynomial built from an MBP row prints its terms in construction order
//! (`1/3 + 2/3 x1^2`). Equality ignores that order.

use std::cmp::Ordering;
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Sorted `(variable, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(usize, u32)>;

/// Scalars a polynomial can be evaluated over.
pub trait Value: Clone {
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;

    fn power(&self, e: u32) -> Self {
        let mut acc = Self::one_value();
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }
}

impl Value for f64 {
    fn zero_value() -> Self {
        0.0
    }
    fn one_value() -> Self {
        1.0
    }
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn power(&self, e: u32) -> Self {
        self.powi(e as i32)
    }
}

impl Value for BigRational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn one_value() -> Self {
        One::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // Fall back on scaled integer division for huge numerators/denominators.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(60);
        let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn mono_div(a: &Monomial, b: &Monomial) -> Option<Monomial> {
    let mut out = Vec::new();
    let mut j = 0;
    for &(v, e) in a {
        if j < b.len() && b[j].0 < v {
            return None;
        }
        if j < b.len() && b[j].0 == v {
            match e.cmp(&b[j].1) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((v, e - b[j].1)),
            }
            j += 1;
        } else {
            out.push((v, e));
        }
    }
    if j < b.len() {
        None
    } else {
        Some(out)
    }
}

/// Lexicographic order with variable 0 most significant.
pub fn lex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let mut i = 0;
    loop {
        match (a.get(i), b.get(i)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => {
                if va != vb {
                    return if va < vb { Ordering::Greater } else { Ordering::Less };
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
            }
        }
        i += 1;
    }
}

#[derive(Clone, Debug, Default)]
pub struct Poly {
    terms: IndexMap<Monomial, BigRational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(vec![(v, 1)], BigRational::one());
        p
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// Adds `c·m`, keeping the position of an existing monomial.
    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.shift_remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Vec::new())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|(_, e)| e).sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e))
            .max()
            .unwrap_or(0)
    }

    /// Variables in order of first appearance.
    pub fn vars(&self) -> IndexSet<usize> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).collect()
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(w, _)| *w == v))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (mb, cb) in &other.terms {
            for (ma, ca) in &self.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `Σ wᵢ·xᵢ`.
    pub fn weighted_sum<'a>(items: impl IntoIterator<Item = (&'a BigRational, usize)>) -> Poly {
        let mut out = Poly::zero();
        for (w, v) in items {
            out.add_term(vec![(v, 1)], w.clone());
        }
        out
    }

    /// `∏ xᵢ`.
    pub fn product(vars: &[usize]) -> Poly {
        vars.iter().fold(Poly::one(), |acc, &v| acc.mul(&Poly::var(v)))
    }

    /// `∐ xᵢ = 1 − ∏(1 − xᵢ)`, expanded.
    pub fn coproduct(vars: &[usize]) -> Poly {
        let prod = vars.iter().fold(Poly::one(), |acc, &v| acc.mul(&Poly::one().sub(&Poly::var(v))));
        Poly::one().sub(&prod)
    }

    /// Replaces variable `v` by `by`.
    pub fn substitute(&self, v: usize, by: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::with_capacity(m.len());
            let mut e = 0;
            for &(w, k) in m {
                if w == v {
                    e = k;
                } else {
                    rest.push((w, k));
                }
            }
            if e == 0 {
                out.add_term(rest, c.clone());
            } else {
                let part = by.pow(e).mul(&Poly::monomial(rest, c.clone()));
                for (pm, pc) in part.terms {
                    out.add_term(pm, pc);
                }
            }
        }
        out
    }

    /// Substitutes several variables at once.
    pub fn substitute_all(&self, subst: &IndexMap<usize, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut part = Poly::constant(c.clone());
            let mut rest = Vec::new();
            for &(w, k) in m {
                match subst.get(&w) {
                    Some(by) => part = part.mul(&by.pow(k)),
                    None => rest.push((w, k)),
                }
            }
            let part = part.mul(&Poly::monomial(rest, BigRational::one()));
            for (pm, pc) in part.terms {
                out.add_term(pm, pc);
            }
        }
        out
    }

    /// Renames variables; monomials that collide are merged.
    pub fn map_vars(&self, f: impl Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut nm: Monomial = Vec::with_capacity(m.len());
            for &(v, e) in m {
                nm.push((f(v), e));
            }
            nm.sort_by_key(|(v, _)| *v);
            let mut merged: Monomial = Vec::with_capacity(nm.len());
            for (v, e) in nm {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += e,
                    _ => merged.push((v, e)),
                }
            }
            out.add_term(merged, c.clone());
        }
        out
    }

    pub fn eval<T: Value>(&self, values: &[T]) -> T {
        let mut acc = T::zero_value();
        for (m, c) in &self.terms {
            let mut t = T::from_rational(c);
            for &(v, e) in m {
                t = t.times(&values[v].power(e));
            }
            acc = acc.plus(&t);
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(w, _)| *w == v) {
                let e = m[pos].1;
                let mut nm = m.clone();
                if e == 1 {
                    nm.remove(pos);
                } else {
                    nm[pos].1 = e - 1;
                }
                out.add_term(nm, c * BigInt::from(e));
            }
        }
        out
    }

    /// Coefficients as polynomials in the other variables: `result[d]` multiplies `v^d`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let mut rest = Vec::with_capacity(m.len());
            let mut e = 0;
            for &(w, k) in m {
                if w == v {
                    e = k;
                } else {
                    rest.push((w, k));
                }
            }
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// `Σ cᵢ·v^i` from coefficient polynomials.
    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (d, c) in coeffs.iter().enumerate() {
            let term = if d == 0 { c.clone() } else { c.mul(&Poly::monomial(vec![(v, d as u32)], BigRational::one())) };
            out = out.add(&term);
        }
        out
    }

    /// Leading monomial and coefficient under [`lex_cmp`].
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading_term()?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading_term() {
            let m = mono_div(rm, dm)?;
            let c = rc / dc;
            let t = Poly::monomial(m, c);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Terms sorted lexicographically, highest first; for order-independent output.
    pub fn sorted(&self) -> Poly {
        let mut entries: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        entries.sort_by(|a, b| lex_cmp(&b.0, &a.0));
        Poly { terms: entries.into_iter().collect() }
    }

    /// Terms reordered by `key`, ascending; ties keep their current order.
    pub fn sorted_by_key<K: Ord>(&self, key: impl Fn(&Monomial) -> K) -> Poly {
        let mut entries: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        entries.sort_by_key(|(m, _)| key(m));
        Poly { terms: entries.into_iter().collect() }
    }

    /// Scales to integer coefficients with no common factor; the first term stays as signed.
    pub fn primitive_integer(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = (c * BigRational::from_integer(lcm.clone())).to_integer();
            gcd = gcd.gcd(&n);
        }
        self.scale(&BigRational::new(lcm, gcd))
    }

    /// Renders with the given variable names, e.g. `1/3 + 2/3 x1^2`.
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(usize) -> String) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a dyn Fn(usize) -> String,
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.poly.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut parts = Vec::new();
            if m.is_empty() || !abs.is_one() {
                parts.push(format_rational(&abs));
            }
            for &(v, e) in m {
                if e == 1 {
                    parts.push((self.names)(v));
                } else {
                    parts.push(format!("{}^{}", (self.names)(v), e));
                }
            }
            f.write_str(&parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyParseError {
    #[error("unexpected `{found}` at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero at offset {0}")]
    DivisionByZero(usize),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Num(s.parse().expect("digits")), off));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((Tok::Ident(s), off));
        } else if "+-*/^()·".contains(c) {
            out.push((Tok::Sym(if c == '·' { '*' } else { c }), off));
            i += 1;
        } else {
            return Err(PolyParseError::Unexpected { found: c.to_string(), offset: off });
        }
    }
    Ok(out)
}

struct Parser<'r> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    resolve: &'r mut dyn FnMut(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn unexpected(&self) -> PolyParseError {
        match self.toks.get(self.pos) {
            Some((t, off)) => PolyParseError::Unexpected {
                found: match t {
                    Tok::Num(n) => n.to_string(),
                    Tok::Ident(s) => s.clone(),
                    Tok::Sym(c) => c.to_string(),
                },
                offset: *off,
            },
            None => PolyParseError::Eof,
        }
    }

    fn sum(&mut self) -> Result<Poly, PolyParseError> {
        let mut sign = BigRational::one();
        if let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            if *c == '-' {
                sign = -sign;
            }
            self.pos += 1;
        }
        let mut acc = self.product()?.scale(&sign);
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek() {
            let negative = *c == '-';
            self.pos += 1;
            let t = self.product()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(')))
    }

    fn product(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = self.factor()?;
        loop {
            if let Some(Tok::Sym('*')) = self.peek() {
                self.pos += 1;
                acc = acc.mul(&self.factor()?);
            } else if self.starts_factor() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn exponent(&mut self) -> Result<u32, PolyParseError> {
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(n.clone()).map_err(|_| self.unexpected())?;
                    self.pos += 1;
                    Ok(e)
                }
                _ => Err(self.unexpected()),
            }
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Poly, PolyParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(n);
                if let Some(Tok::Sym('/')) = self.peek() {
                    let off = self.toks[self.pos].1;
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(d)) => {
                            if d.is_zero() {
                                return Err(PolyParseError::DivisionByZero(off));
                            }
                            self.pos += 1;
                            q /= BigRational::from_integer(d);
                        }
                        _ => return Err(self.unexpected()),
                    }
                }
                let e = self.exponent()?;
                Ok(Poly::constant(num_traits::pow(q, e as usize)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = (self.resolve)(&name).ok_or(PolyParseError::UnknownVariable(name))?;
                let e = self.exponent()?;
                Ok(Poly::monomial(vec![(v, e)], BigRational::one()))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => self.pos += 1,
                    _ => return Err(self.unexpected()),
                }
                let e = self.exponent()?;
                Ok(inner.pow(e))
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `1/3 + 2/3 x1^2`, `x*y`, `1 - (1 - x)(1 - y)`; juxtaposition multiplies.
pub fn parse_poly(text: &str, resolve: &mut dyn FnMut(&str) -> Option<usize>) -> Result<Poly, PolyParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, resolve };
    let out = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: usize) -> String {
        ["x", "y", "z"][v].to_string()
    }

    fn parse(s: &str) -> Poly {
        parse_poly(s, &mut |n| ["x", "y", "z"].iter().position(|m| *m == n)).unwrap()
    }

    #[test]
    fn coproduct_of_two() {
        let c = Poly::coproduct(&[0, 1]);
        assert_eq!(c, parse("x + y - x y"));
        assert_eq!(c.display_with(&names).to_string(), "x + y - x y");
    }

    #[test]
    fn construction_order_is_kept() {
        let p = Poly::constant(rat(1, 3)).add(&Poly::monomial(vec![(0, 2)], rat(2, 3)));
        assert_eq!(p.display_with(&names).to_string(), "1/3 + 2/3 x^2");
        let q = Poly::monomial(vec![(0, 2)], rat(2, 3)).add(&Poly::constant(rat(1, 3)));
        assert_eq!(p, q);
        assert_eq!(q.display_with(&names).to_string(), "2/3 x^2 + 1/3");
    }

    #[test]
    fn substitution() {
        let p = parse("1/3 + 1/3 y + 1/3 y");
        let s = p.substitute(1, &parse("x^2"));
        assert_eq!(s.display_with(&names).to_string(), "1/3 + 2/3 x^2");
    }

    #[test]
    fn evaluation() {
        let p = parse("1/3 + 2/3 x^2");
        assert_eq!(p.eval(&[rat(1, 2)]), rat(1, 2));
        assert_eq!(p.eval(&[0.0]), 1.0 / 3.0);
    }

    #[test]
    fn exact_division() {
        let a = parse("x^2 - y^2");
        let b = parse("x + y");
        assert_eq!(a.div_exact(&b).unwrap(), parse("x - y"));
        assert!(parse("x^2 + 1").div_exact(&b).is_none());
    }

    #[test]
    fn parse_errors() {
        let mut r = |n: &str| (n == "x").then_some(0);
        assert_eq!(parse_poly("x + w", &mut r), Err(PolyParseError::UnknownVariable("w".into())));
        assert!(matches!(parse_poly("x +", &mut r), Err(PolyParseError::Eof)));
        assert!(matches!(parse_poly("1/0", &mut r), Err(PolyParseError::DivisionByZero(_))));
    }

    #[test]
    fn derivative_and_coeffs() {
        let p = parse("y^2 + 2 x^2 - 3 x");
        assert_eq!(p.derivative(0), parse("4 x - 3"));
        let c = p.coeffs_in(0);
        assert_eq!(c, vec![parse("y^2"), parse("-3"), parse("2")]);
        assert_eq!(Poly::from_coeffs_in(0, &c), p);
    }

    #[test]
    fn primitive_integer_form() {
        let p = parse("1/3 y^2 + 2/3 x^2 - x");
        assert_eq!(p.primitive_integer(), parse("y^2 + 2 x^2 - 3 x"));
    }

    #[test]
    fn map_vars_merges() {
        let p = parse("x y");
        assert_eq!(p.map_vars(|_| 0), parse("x^2"));
    }
}
