//! Vectors of fractions `m / f^k` in a localization `A_f`.

use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::Ideal;

use super::MultiPoly;

/// `(m_1, ..., m_r) / f^k`. The exponent is lowered at construction while
/// every numerator is exactly divisible by `f` in the polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentFraction {
    num: Vec<MultiPoly>,
    base: MultiPoly,
    exp: u32,
}

impl LaurentFraction {
    pub fn new(num: Vec<MultiPoly>, base: MultiPoly, exp: u32) -> Result<LaurentFraction> {
        if base.is_zero() {
            return Err(Error::InvalidInput("fraction denominator base must be nonzero".into()));
        }
        if num.is_empty() {
            return Err(Error::InvalidInput("fraction needs at least one numerator component".into()));
        }
        for m in &num {
            base.ring().check_ambient(m.ring())?;
        }
        let mut out = LaurentFraction { num, base, exp };
        out.reduce();
        Ok(out)
    }

    /// Scalar-valued fraction `m / f^k`.
    pub fn single(num: MultiPoly, base: MultiPoly, exp: u32) -> Result<LaurentFraction> {
        LaurentFraction::new(vec![num], base, exp)
    }

    pub fn zero(rank: usize, base: &MultiPoly) -> LaurentFraction {
        LaurentFraction { num: vec![MultiPoly::zero(base.ring()); rank], base: base.clone(), exp: 0 }
    }

    fn reduce(&mut self) {
        if self.base.is_constant() {
            if self.exp > 0 {
                let c = self.base.constant_value().expect("constant").pow(self.exp);
                let inv = c.inv().expect("nonzero base");
                self.num = self.num.iter().map(|m| m.scale(&inv)).collect();
                self.exp = 0;
            }
            return;
        }
        if self.num.iter().all(|m| m.is_zero()) {
            self.exp = 0;
            return;
        }
        while self.exp > 0 {
            let divided: Option<Vec<MultiPoly>> = self.num.iter().map(|m| m.exact_div(&self.base)).collect();
            match divided {
                Some(d) => {
                    self.num = d;
                    self.exp -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerators(&self) -> &[MultiPoly] {
        &self.num
    }

    pub fn base(&self) -> &MultiPoly {
        &self.base
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn rank(&self) -> usize {
        self.num.len()
    }

    /// Numerators over `f^k` for some `k >= exponent()`, without reducing.
    pub fn numerators_at(&self, k: u32) -> Vec<MultiPoly> {
        assert!(k >= self.exp);
        let scale = self.base.pow(k - self.exp);
        self.num.iter().map(|m| m * &scale).collect()
    }

    /// Image in the further localization at `base * extra`.
    pub fn restrict(&self, extra: &MultiPoly) -> LaurentFraction {
        let scale = extra.pow(self.exp);
        LaurentFraction {
            num: self.num.iter().map(|m| m * &scale).collect(),
            base: &self.base * extra,
            exp: self.exp,
        }
    }

    fn combine(&self, other: &LaurentFraction, sign: i64) -> Result<LaurentFraction> {
        if self.base != other.base {
            return Err(Error::AmbientMismatch(format!("fraction bases {} and {} differ", self.base, other.base)));
        }
        if self.rank() != other.rank() {
            return Err(Error::Arity { expected: self.rank(), got: other.rank() });
        }
        let k = self.exp.max(other.exp);
        let a = self.numerators_at(k);
        let b = other.numerators_at(k);
        let s = self.base.field().from_i64(sign);
        let num = a.iter().zip(&b).map(|(x, y)| x + &y.scale(&s)).collect();
        LaurentFraction::new(num, self.base.clone(), k)
    }

    pub fn add(&self, other: &LaurentFraction) -> Result<LaurentFraction> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &LaurentFraction) -> Result<LaurentFraction> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> LaurentFraction {
        LaurentFraction { num: self.num.iter().map(|m| -m).collect(), base: self.base.clone(), exp: self.exp }
    }

    /// Multiplies every component by a polynomial.
    pub fn scale(&self, c: &MultiPoly) -> LaurentFraction {
        let num = self.num.iter().map(|m| m * c).collect();
        LaurentFraction::new(num, self.base.clone(), self.exp).expect("same ambient")
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.num.iter().all(|m| m.is_zero())
    }
}

impl fmt::Display for LaurentFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.num.iter().map(|m| m.to_string()).collect();
        let num = if parts.len() == 1 { parts[0].clone() } else { format!("({})", parts.join(", ")) };
        match self.exp {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num} / ({})", self.base),
            k => write!(f, "{num} / ({})^{k}", self.base),
        }
    }
}

/// Equality in `(A/I)_f`: each component of `a_num f^{k_b} - b_num f^{k_a}`
/// must lie in `(I : f^inf)`.
pub fn fraction_eq(a: &LaurentFraction, b: &LaurentFraction, ambient: &Ideal) -> Result<bool> {
    ambient.ring().check_ambient(a.base.ring())?;
    let saturated = ambient.saturation(&a.base)?;
    fraction_eq_saturated(a, b, &saturated)
}

/// As [`fraction_eq`], with the saturation `(I : f^inf)` precomputed.
pub fn fraction_eq_saturated(a: &LaurentFraction, b: &LaurentFraction, saturated: &Ideal) -> Result<bool> {
    let diff = a.sub(b)?;
    for m in &diff.num {
        if !saturated.contains(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::Ring;

    #[test]
    fn x_over_x_is_one() {
        let r = Ring::new(Field::Rationals, ["X"]);
        let x = MultiPoly::var(&r, 0);
        let zero_ideal = Ideal::new(&r, vec![]);
        let a = LaurentFraction::single(x.clone(), x.clone(), 1).unwrap();
        let b = LaurentFraction::single(MultiPoly::one(&r), x.clone(), 0).unwrap();
        assert!(fraction_eq(&a, &b, &zero_ideal).unwrap());
        // reduced structurally at construction
        assert_eq!(a, b);
    }

    #[test]
    fn nilpotent_numerator_vanishes_after_localizing() {
        let r = Ring::new(Field::Rationals, ["x"]);
        let x = MultiPoly::var(&r, 0);
        let ideal = Ideal::new(&r, vec![x.pow(2)]);
        // x / x vs 0 in (k[x]/(x^2))_x, where x is nilpotent
        let a = LaurentFraction::single(x.clone(), x.clone(), 1).unwrap();
        let zero = LaurentFraction::zero(1, &x);
        assert!(fraction_eq(&a, &zero, &ideal).unwrap());
        let zero_ideal = Ideal::new(&r, vec![]);
        assert!(!fraction_eq(&a, &zero, &zero_ideal).unwrap());
    }

    #[test]
    fn componentwise_equality_without_denominators() {
        let r = Ring::new(Field::Rationals, ["X", "Y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let one = MultiPoly::one(&r);
        let ideal = Ideal::new(&r, vec![]);
        let a = LaurentFraction::new(vec![x.clone(), y.clone()], one.clone(), 0).unwrap();
        let b = LaurentFraction::new(vec![x.clone(), x.clone()], one.clone(), 0).unwrap();
        assert!(fraction_eq(&a, &a, &ideal).unwrap());
        assert!(!fraction_eq(&a, &b, &ideal).unwrap());
    }

    #[test]
    fn restriction_and_arithmetic() {
        let r = Ring::new(Field::Rationals, ["X"]);
        let x = MultiPoly::var(&r, 0);
        let y = &MultiPoly::one(&r) - &x;
        let a = LaurentFraction::single(MultiPoly::one(&r), x.clone(), 1).unwrap();
        let b = a.restrict(&y);
        assert_eq!(b.base(), &(&x * &y));
        assert_eq!(b.numerators()[0], y);
        assert!(a.add(&LaurentFraction::single(MultiPoly::one(&r), y.clone(), 1).unwrap()).is_err());
    }
}
