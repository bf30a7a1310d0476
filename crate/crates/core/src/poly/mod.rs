//! Sparse multivariate polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

mod factor;
mod fraction;
mod laurent;
mod order;
pub mod parse;

pub use factor::{factor_linear, LinearFactorization, DEFAULT_SCAN_CAP};
pub use fraction::{fraction_eq, fraction_eq_saturated, LaurentFraction};
pub use laurent::LaurentPoly;
pub use order::{OrderKind, TermOrder};

/// Ambient polynomial ring: field, variable names and the term order that
/// fixes the canonical term sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
    order: TermOrder,
}

impl Ring {
    pub fn new<S: Into<String>>(field: Field, vars: impl IntoIterator<Item = S>) -> Arc<Ring> {
        Arc::new(Ring { field, vars: vars.into_iter().map(Into::into).collect(), order: TermOrder::grevlex() })
    }

    pub fn with_order(&self, order: TermOrder) -> Arc<Ring> {
        Arc::new(Ring { field: self.field, vars: self.vars.clone(), order })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Same field and variables; term orders may differ.
    pub fn same_ambient(&self, other: &Ring) -> bool {
        self.field == other.field && self.vars == other.vars
    }

    pub fn check_ambient(&self, other: &Ring) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        if self.vars != other.vars {
            return Err(Error::AmbientMismatch(format!("variables {:?} vs {:?}", self.vars, other.vars)));
        }
        Ok(())
    }

    /// A variable name not already in use, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.vars.contains(&name) {
            name.push('\'');
        }
        name
    }
}

/// Exponent vector, one entry per ambient variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Monomial)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// A polynomial in canonical form: terms sorted by decreasing monomial under
/// the ring's term order, no zero coefficients.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &MultiPoly) -> bool {
        if !self.ring.same_ambient(&other.ring) {
            return false;
        }
        if self.ring.order == other.ring.order {
            self.terms == other.terms
        } else {
            self.terms == other.reorder(&self.ring).terms
        }
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(ring: &Arc<Ring>) -> MultiPoly {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> MultiPoly {
        MultiPoly::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> MultiPoly {
        MultiPoly::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Arc<Ring>, c: i64) -> MultiPoly {
        MultiPoly::constant(ring, ring.field.from_i64(c))
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> MultiPoly {
        debug_assert_eq!(m.exps().len(), ring.nvars());
        debug_assert_eq!(c.field(), ring.field);
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> MultiPoly {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        MultiPoly::term(ring, Monomial(e), ring.field.one())
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> MultiPoly {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.exps().len(), ring.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        MultiPoly::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Scalar>) -> MultiPoly {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        MultiPoly { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub(crate) fn drop_leading(&mut self) {
        if !self.terms.is_empty() {
            self.terms.remove(0);
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exps()[i]).max()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exps()[i] > 0)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Multiplies by `c * m`; term order is preserved because orders are
    /// multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self - c * m * other`, the reduction step.
    pub fn sub_scaled(&self, c: &Scalar, m: &Monomial, other: &MultiPoly) -> MultiPoly {
        let neg = -c;
        self.merge(other.terms.iter().map(|(t, a)| (t.mul(m), a * &neg)))
    }

    fn merge(&self, rhs: impl Iterator<Item = (Monomial, Scalar)>) -> MultiPoly {
        let order = &self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len());
        let mut left = self.terms.iter().cloned().peekable();
        let mut right = rhs.peekable();
        loop {
            let ord = match (left.peek(), right.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(a), Some(b)) => order.cmp(&a.0, &b.0),
            };
            match ord {
                Ordering::Greater => out.push(left.next().unwrap()),
                Ordering::Less => out.push(right.next().unwrap()),
                Ordering::Equal => {
                    let (m, a) = left.next().unwrap();
                    let (_, b) = right.next().unwrap();
                    let c = &a + &b;
                    if !c.is_zero() {
                        out.push((m, c));
                    }
                }
            }
        }
        MultiPoly { ring: self.ring.clone(), terms: out }
    }

    /// Exact substitution of field values for every variable.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Arity { expected: self.ring.nvars(), got: point.len() });
        }
        if let Some(p) = point.iter().find(|p| p.field() != self.ring.field) {
            return Err(Error::FieldMismatch(format!("point coordinate {p} is not in {}", self.ring.field)));
        }
        let mut acc = self.ring.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Replaces variable `i` by `images[i]`; all images live in one target ring.
    pub fn substitute(&self, images: &[MultiPoly], target: &Arc<Ring>) -> Result<MultiPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Arity { expected: self.ring.nvars(), got: images.len() });
        }
        for img in images {
            target.check_ambient(&img.ring)?;
        }
        if self.ring.field != target.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.ring.field, target.field)));
        }
        let mut powers: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one(target)]; images.len()];
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i].reorder(target);
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `var_map[i]`. The target must have the same field.
    pub fn embed(&self, target: &Arc<Ring>, var_map: &[usize]) -> MultiPoly {
        debug_assert_eq!(var_map.len(), self.ring.nvars());
        debug_assert_eq!(self.ring.field, target.field);
        let n = target.nvars();
        MultiPoly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0; n];
                for (i, &x) in m.exps().iter().enumerate() {
                    e[var_map[i]] += x;
                }
                (Monomial(e), c.clone())
            }),
        )
    }

    /// Inverse of `embed` for polynomials that only use mapped variables.
    /// `var_map[i]` is the position in `self`'s ring of target variable `i`.
    pub fn restrict(&self, target: &Arc<Ring>, var_map: &[usize]) -> Option<MultiPoly> {
        let used: Vec<bool> = (0..self.ring.nvars()).map(|v| var_map.contains(&v)).collect();
        if self.terms.iter().any(|(m, _)| m.exps().iter().enumerate().any(|(v, &e)| e > 0 && !used[v])) {
            return None;
        }
        Some(MultiPoly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| (Monomial(var_map.iter().map(|&v| m.exps()[v]).collect()), c.clone())),
        ))
    }

    /// Same polynomial, canonical form under another ring with the same
    /// ambient (typically a different term order).
    pub fn reorder(&self, target: &Arc<Ring>) -> MultiPoly {
        debug_assert!(self.ring.same_ambient(target));
        if self.ring.order == target.order {
            return MultiPoly { ring: target.clone(), terms: self.terms.clone() };
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| target.order.cmp(&b.0, &a.0));
        MultiPoly { ring: target.clone(), terms }
    }

    /// Maps coefficients into another field (e.g. reduction of rational
    /// coefficients modulo p).
    pub fn change_field(&self, target: &Arc<Ring>) -> Result<MultiPoly> {
        if target.vars != self.ring.vars {
            return Err(Error::AmbientMismatch(format!("variables {:?} vs {:?}", self.ring.vars, target.vars)));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), target.field.convert(c)?));
        }
        Ok(MultiPoly::from_terms(target, terms))
    }

    /// Exact quotient `self / divisor`, if the division leaves no remainder.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rest = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rest.leading_term().cloned() {
            let q = m.div(lm)?;
            let qc = &c * &lc_inv;
            rest = rest.sub_scaled(&qc, &q, divisor);
            quotient.push((q, qc));
        }
        Some(MultiPoly::from_terms(&self.ring, quotient))
    }
}

/// Checked binary arithmetic for callers that cannot guarantee a shared ambient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: ArithOp) -> Result<MultiPoly> {
    a.ring.check_ambient(&b.ring)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

fn assert_compatible(a: &MultiPoly, b: &MultiPoly) {
    assert!(a.ring.same_ambient(&b.ring), "polynomial ambient mismatch: {:?} vs {:?}", a.ring, b.ring);
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_compatible(self, rhs);
        if self.ring.order == rhs.ring.order {
            self.merge(rhs.terms.iter().cloned())
        } else {
            self.merge(rhs.reorder(&self.ring).terms.into_iter())
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_compatible(self, rhs);
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.reorder(&self.ring).mul_term(m, c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        MultiPoly::from_map(&self.ring, acc)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;

    fn neg(self) -> MultiPoly {
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut coeff = c.to_string();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let factors: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.ring.vars[i].clone() } else { format!("{}^{}", self.ring.vars[i], e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(field: Field) -> Arc<Ring> {
        Ring::new(field, ["X", "Y"])
    }

    #[test]
    fn difference_of_squares() {
        let r = ring(Field::Rationals);
        let x = MultiPoly::var(&r, 0);
        let one = MultiPoly::one(&r);
        let p = &(&x + &one) * &(&x - &one);
        assert_eq!(p.to_string(), "X^2 - 1");
        assert_eq!(&p + &MultiPoly::zero(&r), p);
    }

    #[test]
    fn frobenius_in_characteristic_two() {
        let r = ring(Field::prime(2).unwrap());
        let s = &MultiPoly::var(&r, 0) + &MultiPoly::var(&r, 1);
        assert_eq!(s.pow(2).to_string(), "X^2 + Y^2");
    }

    #[test]
    fn evaluation_examples() {
        let f5 = Field::prime(5).unwrap();
        let r = ring(f5);
        let p = &MultiPoly::var(&r, 0).pow(2) + &MultiPoly::one(&r);
        assert!(p.evaluate(&[f5.from_i64(2), f5.zero()]).unwrap().is_zero());
        let q = Ring::new(Field::Rationals, ["X", "Y"]);
        let xy = &(&MultiPoly::var(&q, 0) * &MultiPoly::var(&q, 1)) - &MultiPoly::one(&q);
        let half = Field::Rationals.parse_scalar("1/2").unwrap();
        assert!(xy.evaluate(&[Field::Rationals.from_i64(2), half]).unwrap().is_zero());
        assert!(matches!(xy.evaluate(&[half_of()]), Err(Error::Arity { expected: 2, got: 1 })));
    }

    fn half_of() -> Scalar {
        Field::Rationals.parse_scalar("1/2").unwrap()
    }

    #[test]
    fn mismatched_ambients_are_rejected() {
        let a = MultiPoly::var(&ring(Field::Rationals), 0);
        let b = MultiPoly::var(&Ring::new(Field::Rationals, ["X"]), 0);
        assert!(matches!(poly_arith(&a, &b, ArithOp::Add), Err(Error::AmbientMismatch(_))));
        let c = MultiPoly::var(&ring(Field::prime(3).unwrap()), 0);
        assert!(matches!(poly_arith(&a, &c, ArithOp::Mul), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn exact_division() {
        let r = ring(Field::Rationals);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let f = &x - &y;
        let g = &(&x * &x) - &(&y * &y);
        assert_eq!(g.exact_div(&f).unwrap(), &x + &y);
        assert!(x.exact_div(&y).is_none());
    }

    #[test]
    fn substitution_composes() {
        let r = Ring::new(Field::Rationals, ["X"]);
        let t = Ring::new(Field::Rationals, ["T"]);
        let x = MultiPoly::var(&r, 0);
        let f = &x.pow(2) + &MultiPoly::from_i64(&r, 1);
        let tt = &MultiPoly::var(&t, 0) + &MultiPoly::from_i64(&t, 1);
        assert_eq!(f.substitute(&[tt], &t).unwrap().to_string(), "T^2 + 2*T + 2");
    }
}
