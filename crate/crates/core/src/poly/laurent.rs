use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use crate::field::{Field, Scalar};

/// Laurent polynomial in a single invertible variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    var: String,
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn new(field: Field, var: impl Into<String>, terms: impl IntoIterator<Item = (i64, Scalar)>) -> LaurentPoly {
        let mut acc: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            let v = match acc.remove(&e) {
                Some(old) => &old + &c,
                None => c,
            };
            if !v.is_zero() {
                acc.insert(e, v);
            }
        }
        LaurentPoly { field, var: var.into(), terms: acc }
    }

    pub fn monomial(coeff: Scalar, var: impl Into<String>, exp: i64) -> LaurentPoly {
        let field = coeff.field();
        LaurentPoly::new(field, var, [(exp, coeff)])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Terms by increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.field, rhs.field, "laurent field mismatch");
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.push((ea + eb, ca * cb));
            }
        }
        LaurentPoly::new(self.field, self.var.clone(), out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 => format!("{c}*{}", self.var),
                _ => format!("{c}*{}^{e}", self.var),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
