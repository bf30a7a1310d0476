//! Stripping linear factors from univariate polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

use super::{Monomial, MultiPoly};

/// `f = unit * prod (X - root)^mult * cofactor`, cofactor monic and root-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactorization {
    pub unit: Scalar,
    pub roots: Vec<(Scalar, u32)>,
    pub cofactor: MultiPoly,
}

impl LinearFactorization {
    /// Multiplies the factors back together.
    pub fn expand(&self, var: usize) -> MultiPoly {
        let ring = self.cofactor.ring();
        let x = MultiPoly::var(ring, var);
        let mut acc = self.cofactor.scale(&self.unit);
        for (a, e) in &self.roots {
            let lin = &x - &MultiPoly::constant(ring, a.clone());
            acc = &acc * &lin.pow(*e);
        }
        acc
    }
}

/// Default largest prime for exhaustive root scans.
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// Finds every root in the base field and strips the corresponding linear
/// factors. `f` may live in a multivariate ring but must use at most one
/// variable; the returned index names it.
pub fn factor_linear(f: &MultiPoly, scan_cap: u64) -> Result<(usize, LinearFactorization)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = f.ring().clone();
    let used: Vec<usize> = (0..ring.nvars()).filter(|&v| f.uses_var(v)).collect();
    let var = match used.as_slice() {
        [] => 0,
        [v] => *v,
        _ => return Err(Error::InvalidInput(format!("{f} is not univariate"))),
    };
    if ring.nvars() == 0 {
        let unit = f.constant_value().expect("constant");
        return Ok((0, LinearFactorization { unit, roots: Vec::new(), cofactor: MultiPoly::one(&ring) }));
    }

    let mut coeffs = dense(f, var);
    let unit = coeffs.last().expect("nonzero").clone();
    let inv = unit.inv().expect("nonzero leading coefficient");
    for c in coeffs.iter_mut() {
        *c = &*c * &inv;
    }

    let field = ring.field();
    let mut roots = Vec::new();
    let zero_mult = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        coeffs.drain(..zero_mult);
        roots.push((field.zero(), zero_mult as u32));
    }

    let candidates: Vec<Scalar> = match field {
        Field::Prime(p) => {
            if p > scan_cap {
                return Err(Error::CapExceeded(format!("root scan over Fp:{p} exceeds cap {scan_cap}")));
            }
            (1..p).map(|v| field.from_i64(v as i64)).collect()
        }
        Field::Rationals => rational_candidates(&coeffs),
    };
    for a in candidates {
        if coeffs.len() <= 1 {
            break;
        }
        let mut mult = 0;
        while coeffs.len() > 1 {
            match divide_linear(&coeffs, &a) {
                Some(q) => {
                    coeffs = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            roots.push((a, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));

    let cofactor = MultiPoly::from_terms(
        &ring,
        coeffs.into_iter().enumerate().map(|(d, c)| {
            let mut e = vec![0; ring.nvars()];
            e[var] = d as u32;
            (Monomial::new(e), c)
        }),
    );
    Ok((var, LinearFactorization { unit, roots, cofactor }))
}

fn dense(f: &MultiPoly, var: usize) -> Vec<Scalar> {
    let deg = f.degree_in(var).unwrap_or(0) as usize;
    let mut out = vec![f.field().zero(); deg + 1];
    for (m, c) in f.terms() {
        out[m.exps()[var] as usize] = c.clone();
    }
    out
}

/// Synthetic division by `X - a`; `None` when `a` is not a root.
fn divide_linear(coeffs: &[Scalar], a: &Scalar) -> Option<Vec<Scalar>> {
    let n = coeffs.len() - 1;
    let mut q = vec![a.field().zero(); n];
    let mut carry = a.field().zero();
    for d in (0..=n).rev() {
        let v = &coeffs[d] + &(&carry * a);
        if d == 0 {
            return if v.is_zero() { Some(q) } else { None };
        }
        q[d - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Rational root theorem candidates for a monic polynomial with nonzero
/// constant term.
fn rational_candidates(coeffs: &[Scalar]) -> Vec<Scalar> {
    let qs: Vec<&BigRational> = coeffs.iter().map(|c| c.as_rational().expect("rational field")).collect();
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (*q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = ints.last().expect("nonempty").abs();
    let constant = ints[0].abs();
    if constant.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for p in divisors(&constant) {
        for q in divisors(&lead) {
            for sign in [1i32, -1] {
                let r = BigRational::new(p.clone() * BigInt::from(sign), q.clone());
                let s = Scalar::Rational(r);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    if let Some(n64) = n.to_u128() {
        let mut d = 1u128;
        while d * d <= n64 {
            if n64 % d == 0 {
                small.push(BigInt::from(d));
                if d * d != n64 {
                    large.push(BigInt::from(n64 / d));
                }
            }
            d += 1;
        }
    } else {
        // beyond trial-division range only the trivial divisors are tried
        small.push(BigInt::one());
        large.push(n.clone());
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Ring;

    fn univariate(field: Field, coeffs: &[i64]) -> MultiPoly {
        let r = Ring::new(field, ["X"]);
        MultiPoly::from_terms(&r, coeffs.iter().enumerate().map(|(d, &c)| (Monomial::new(vec![d as u32]), field.from_i64(c))))
    }

    /// Brute-force root oracle over a small prime field.
    fn scan_roots(f: &MultiPoly) -> Vec<Scalar> {
        f.field().elements().unwrap().filter(|a| f.evaluate(&[a.clone()]).unwrap().is_zero()).collect()
    }

    #[test]
    fn x_squared_minus_one_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let f = univariate(f5, &[-1, 0, 1]);
        assert_eq!(scan_roots(&f), vec![f5.from_i64(1), f5.from_i64(4)]);
        let (_, fac) = factor_linear(&f, DEFAULT_SCAN_CAP).unwrap();
        assert!(fac.unit.is_one());
        assert_eq!(fac.roots, vec![(f5.from_i64(1), 1), (f5.from_i64(4), 1)]);
        assert!(fac.cofactor.is_one());
    }

    #[test]
    fn x_squared_plus_one_over_f3_is_root_free() {
        let f3 = Field::prime(3).unwrap();
        let f = univariate(f3, &[1, 0, 1]);
        assert!(scan_roots(&f).is_empty());
        let (_, fac) = factor_linear(&f, DEFAULT_SCAN_CAP).unwrap();
        assert!(fac.roots.is_empty());
        assert_eq!(fac.cofactor, f);
    }

    #[test]
    fn scaled_square_over_q() {
        // 3 (X - 2)^2 = 3X^2 - 12X + 12
        let q = Field::Rationals;
        let f = univariate(q, &[12, -12, 3]);
        let (v, fac) = factor_linear(&f, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!(fac.unit, q.from_i64(3));
        assert_eq!(fac.roots, vec![(q.from_i64(2), 2)]);
        assert!(fac.cofactor.is_one());
        assert_eq!(fac.expand(v), f);
    }

    #[test]
    fn rational_roots_with_fractions() {
        let q = Field::Rationals;
        // (2X - 1)(X + 3)(X^2 + 1) X
        let f = univariate(q, &[0, -3, 5, -1, 5, 2]);
        let (v, fac) = factor_linear(&f, DEFAULT_SCAN_CAP).unwrap();
        let roots: Vec<String> = fac.roots.iter().map(|(a, _)| a.to_string()).collect();
        assert_eq!(roots, ["-3", "0", "1/2"]);
        assert_eq!(fac.cofactor.to_string(), "X^2 + 1");
        assert_eq!(fac.expand(v), f);
    }

    #[test]
    fn zero_and_cap_errors() {
        let f = univariate(Field::Rationals, &[]);
        assert_eq!(factor_linear(&f, 10), Err(Error::ZeroPolynomial));
        let g = univariate(Field::prime(13).unwrap(), &[1, 1]);
        assert!(matches!(factor_linear(&g, 11), Err(Error::CapExceeded(_))));
    }
}
