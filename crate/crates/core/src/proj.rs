//! Projective space through its standard charts: points over finite
//! fields, Serre twists on P^1 as Laurent glue units, and the cohomology of
//! `O(d)` on `P^n` from the multidegree pieces of the Cech complex.

use std::fmt;

use rayon::prelude::*;

use crate::cech::{cohomology_dims, CochainComplex, Matrix};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::LaurentPoly;

/// Largest `n` accepted by [`cohomology_pn`].
pub const MAX_N: usize = 4;
/// Largest `|d|` accepted by [`cohomology_pn`].
pub const MAX_ABS_D: i64 = 12;

/// A point `[x_0 : ... : x_n]` with first nonzero coordinate `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<ProjPoint> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()) else {
            return Err(Error::InvalidInput("homogeneous coordinates are all zero".into()));
        };
        let field = lead.field();
        if field.size().is_none() {
            return Err(Error::InvalidField("projective points live over a prime field".into()));
        }
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(format!("{bad} over {}", bad.field())));
        }
        let inv = lead.inv().expect("nonzero");
        Ok(ProjPoint { coords: coords.iter().map(|c| c * &inv).collect() })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Result<ProjPoint> {
        ProjPoint::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// `n` for a point of `P^n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Affine coordinates `x_j / x_i` (`j ≠ i`) in chart `i`.
    pub fn dehomogenize(&self, i: usize) -> Option<Vec<Scalar>> {
        let inv = self.coords.get(i)?.inv()?;
        Some(self.coords.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c * &inv).collect())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", c.join(":"))
    }
}

/// Equality by vanishing of every `x_i y_j - y_i x_j`.
pub fn point_eq(p: &ProjPoint, q: &ProjPoint) -> Result<bool> {
    if p.coords.len() != q.coords.len() {
        return Err(Error::Arity { expected: p.coords.len(), got: q.coords.len() });
    }
    if p.field() != q.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", p.field(), q.field())));
    }
    let n = p.coords.len();
    for i in 0..n {
        for j in i + 1..n {
            let minor = &(&p.coords[i] * &q.coords[j]) - &(&q.coords[i] * &p.coords[j]);
            if !minor.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Indices `i` with `x_i ≠ 0`: the charts containing the point.
pub fn chart_cover(p: &ProjPoint) -> Vec<usize> {
    (0..p.coords.len()).filter(|&i| !p.coords[i].is_zero()).collect()
}

/// Every point of `P^n(F_q)`, one normalized representative each.
pub fn enumerate_points(field: Field, n: usize) -> Result<Vec<ProjPoint>> {
    let q = field.size().ok_or_else(|| Error::InvalidField("enumeration needs a prime field".into()))?;
    let mut out = Vec::new();
    for lead in 0..=n {
        let free = n - lead;
        let count = (q as u128).checked_pow(free as u32).filter(|&c| c <= 10_000_000).ok_or_else(|| {
            Error::CapExceeded(format!("{q}^{free} points"))
        })?;
        for idx in 0..count {
            let mut coords = vec![field.zero(); n + 1];
            coords[lead] = field.one();
            let mut rest = idx;
            for c in coords.iter_mut().skip(lead + 1) {
                *c = field.from_i64((rest % q as u128) as i64);
                rest /= q as u128;
            }
            out.push(ProjPoint { coords });
        }
    }
    out.sort();
    Ok(out)
}

/// `αX^n` from a Laurent polynomial with exactly one term.
pub fn classify_unit(g: &LaurentPoly) -> Result<(Scalar, i64)> {
    let mut terms = g.terms();
    match (terms.next(), terms.next()) {
        (Some((n, a)), None) => Ok((a.clone(), n)),
        (None, _) => Err(Error::NotAUnit("0".into())),
        _ => Err(Error::NotAUnit(g.to_string())),
    }
}

/// Glue datum on `U_0 ∩ U_1 ⊂ P^1`: a section `s_0` on `U_0` and `s_1` on
/// `U_1` agree when `s_1 = g·s_0`. `O(-1)` is glued by `X`, `O(1)` by `1/X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistGlue {
    unit: LaurentPoly,
}

impl TwistGlue {
    pub fn new(unit: LaurentPoly) -> Result<TwistGlue> {
        classify_unit(&unit)?;
        Ok(TwistGlue { unit })
    }

    pub fn unit(&self) -> &LaurentPoly {
        &self.unit
    }

    fn parts(&self) -> (Scalar, i64) {
        classify_unit(&self.unit).expect("checked at construction")
    }
}

impl fmt::Display for TwistGlue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)
    }
}

/// The glue `X^{-d}` of `O(d)`.
pub fn twist_glue(field: Field, d: i64) -> TwistGlue {
    TwistGlue { unit: LaurentPoly::monomial(field.one(), "X", -d) }
}

pub fn tensor_glue(a: &TwistGlue, b: &TwistGlue) -> Result<TwistGlue> {
    TwistGlue::new(&a.unit * &b.unit)
}

pub fn bundle_degree(g: &TwistGlue) -> i64 {
    -g.parts().1
}

/// Ambient `P^n` and twist `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    pub n: usize,
    pub d: i64,
    pub field: Field,
}

impl TwistSpec {
    pub fn new(n: usize, d: i64) -> TwistSpec {
        TwistSpec { n, d, field: Field::Rationals }
    }
}

/// Cech complex of the monomial `x^e` over the standard cover: subsets `S`
/// of charts with `e_i ≥ 0` off `S`, graded by `|S| - 1`.
fn multidegree_complex(field: Field, n: usize, e: &[i64]) -> Result<CochainComplex> {
    let forced: u32 = e.iter().enumerate().filter(|&(_, &x)| x < 0).map(|(i, _)| 1u32 << i).sum();
    let total = n + 1;
    // spaces[p]: admissible subsets of size p + 1, as bit masks, increasing
    let mut spaces: Vec<Vec<u32>> = vec![Vec::new(); total];
    for mask in 1u32..(1 << total) {
        if mask & forced == forced {
            spaces[mask.count_ones() as usize - 1].push(mask);
        }
    }
    let dims: Vec<usize> = spaces.iter().map(|s| s.len()).collect();
    let mut maps = Vec::with_capacity(n);
    for p in 0..n {
        let mut m = Matrix::zeros(field, dims[p + 1], dims[p]);
        for (col, &s) in spaces[p].iter().enumerate() {
            for i in 0..total {
                if s & (1 << i) != 0 {
                    continue;
                }
                let t = s | (1 << i);
                let row = spaces[p + 1].binary_search(&t).expect("supersets of admissible sets are admissible");
                let pos = (t & ((1 << i) - 1)).count_ones();
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                m.set(row, col, field.from_i64(sign));
            }
        }
        maps.push(m);
    }
    CochainComplex::new(field, dims, maps)
}

/// Exponent vectors of length `n + 1` in `[lo, hi]` summing to `d`.
fn multidegrees(n: usize, d: i64, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    fn go(left: usize, remaining: i64, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 1 {
            if (lo..=hi).contains(&remaining) {
                cur.push(remaining);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let rest = left as i64 - 1;
        for x in lo..=hi {
            let r = remaining - x;
            if r < rest * lo || r > rest * hi {
                continue;
            }
            cur.push(x);
            go(left - 1, r, lo, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n + 1, d, lo, hi, &mut Vec::new(), &mut out);
    out
}

fn summed_dims(spec: &TwistSpec, margin: u32) -> Result<Vec<usize>> {
    let n = spec.n;
    let m = margin as i64;
    let lo = -(spec.d.abs() + n as i64 + 1 + m);
    let hi = spec.d.abs() + m;
    let pieces: Vec<Result<Vec<usize>>> = multidegrees(n, spec.d, lo, hi)
        .par_iter()
        .map(|e| cohomology_dims(&multidegree_complex(spec.field, n, e)?))
        .collect();
    let mut total = vec![0usize; n + 1];
    for piece in pieces {
        for (t, x) in total.iter_mut().zip(piece?) {
            *t += x;
        }
    }
    Ok(total)
}

/// `dim H^q(P^n, O(d))` for `q = 0..n`, summed over multidegrees in the
/// window and checked against the window one wider.
pub fn cohomology_pn(spec: &TwistSpec, window_margin: u32) -> Result<Vec<usize>> {
    if spec.n == 0 || spec.n > MAX_N || spec.d.abs() > MAX_ABS_D {
        return Err(Error::CapExceeded(format!(
            "supported range is 1 <= n <= {MAX_N}, |d| <= {MAX_ABS_D}; got n = {}, d = {}",
            spec.n, spec.d
        )));
    }
    let dims = summed_dims(spec, window_margin)?;
    let wider = summed_dims(spec, window_margin + 1)?;
    if dims != wider {
        return Err(Error::WindowInstability(format!("margin {window_margin}: {dims:?}, next: {wider:?}")));
    }
    Ok(dims)
}

fn binomial(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `H^0 = C(n+d, n)`, `H^n = C(-d-1, n)`, zero in between.
pub fn closed_form_dims(spec: &TwistSpec) -> Vec<usize> {
    let n = spec.n as i64;
    let mut dims = vec![0; spec.n + 1];
    if spec.d >= 0 {
        dims[0] = binomial(n + spec.d, n);
    }
    if spec.d < -n {
        dims[spec.n] += binomial(-spec.d - 1, n);
    }
    dims
}

/// Cohomology of the bundle on `P^1` glued by `g = αX^m`, from the two
/// charts directly: `C^0 = k[X] ⊕ k[X^-1]`, `C^1 = k[X, X^-1]`,
/// `(s_0, s_1) ↦ s_1 - g s_0`, split by the degree `t` of the image.
pub fn p1_glue_cohomology(g: &TwistGlue, field: Field) -> Result<Vec<usize>> {
    let (alpha, m) = g.parts();
    let alpha = field.convert(&alpha)?;
    let reach = m.abs() + 2;
    let mut h = vec![0usize; 2];
    for t in -reach..=reach {
        // sources: s_0 coefficient at t - m (if t - m >= 0), s_1 coefficient at t (if t <= 0)
        let mut col = Vec::new();
        if t - m >= 0 {
            col.push(-&alpha);
        }
        if t <= 0 {
            col.push(field.one());
        }
        let map = Matrix::from_rows(field, 1, col.len(), vec![col.clone()])?;
        let dims = cohomology_dims(&CochainComplex::new(field, vec![col.len(), 1], vec![map])?)?;
        h[0] += dims[0];
        h[1] += dims[1];
    }
    Ok(h)
}
