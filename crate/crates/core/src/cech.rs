//! Cech cochains on a finite cover of an affine algebra, the explicit H^1
//! splitting for coprime systems, and dimensions of finite complexes of
//! vector spaces.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::cover::Check;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::fpalg::FpAlgebra;
use crate::groebner::{unimodular_certificate, Ideal};
use crate::poly::{fraction_eq_saturated, LaurentFraction, MultiPoly};

/// Cover functions `f_0..f_{n-1}` of an ambient algebra, with cached
/// saturations of the ambient ideal at each intersection.
#[derive(Debug)]
pub struct CechCover {
    ambient: FpAlgebra,
    fs: Vec<MultiPoly>,
    saturated: Mutex<HashMap<Vec<usize>, Arc<Ideal>>>,
}

impl CechCover {
    pub fn new(ambient: &FpAlgebra, fs: Vec<MultiPoly>) -> Result<Arc<CechCover>> {
        if fs.is_empty() {
            return Err(Error::InvalidInput("a cover needs at least one function".into()));
        }
        for f in &fs {
            ambient.ring().check_ambient(f.ring())?;
            if f.is_zero() {
                return Err(Error::InvalidInput("cover functions must be nonzero".into()));
            }
        }
        let fs = fs.iter().map(|f| f.reorder(ambient.ring())).collect();
        Ok(Arc::new(CechCover { ambient: ambient.clone(), fs, saturated: Mutex::new(HashMap::new()) }))
    }

    pub fn ambient(&self) -> &FpAlgebra {
        &self.ambient
    }

    pub fn functions(&self) -> &[MultiPoly] {
        &self.fs
    }

    pub fn len(&self) -> usize {
        self.fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fs.is_empty()
    }

    /// `Π f_i` over the tuple: the denominator base on `U_tuple`.
    pub fn base(&self, tuple: &[usize]) -> MultiPoly {
        tuple.iter().fold(MultiPoly::one(self.ambient.ring()), |acc, &i| &acc * &self.fs[i])
    }

    fn saturation(&self, tuple: &[usize]) -> Result<Arc<Ideal>> {
        if let Some(hit) = self.saturated.lock().expect("cache lock").get(tuple) {
            return Ok(hit.clone());
        }
        let sat = Arc::new(self.ambient.ideal().saturation(&self.base(tuple))?);
        self.saturated.lock().expect("cache lock").insert(tuple.to_vec(), sat.clone());
        Ok(sat)
    }

    /// Equality of two sections over `U_tuple`.
    pub fn section_eq(&self, tuple: &[usize], a: &LaurentFraction, b: &LaurentFraction) -> Result<bool> {
        let sat = self.saturation(tuple)?;
        fraction_eq_saturated(a, b, &sat)
    }
}

/// Strictly increasing `len`-subsets of `0..n`, lexicographic.
pub fn increasing_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, len, &mut Vec::with_capacity(len), &mut out);
    out
}

/// A `k`-cochain with values in `A^rank`, stored on increasing tuples.
#[derive(Clone, Debug)]
pub struct Cochain {
    cover: Arc<CechCover>,
    degree: usize,
    rank: usize,
    values: BTreeMap<Vec<usize>, LaurentFraction>,
}

impl Cochain {
    pub fn zero(cover: &Arc<CechCover>, degree: usize, rank: usize) -> Cochain {
        Cochain { cover: cover.clone(), degree, rank, values: BTreeMap::new() }
    }

    pub fn new(cover: &Arc<CechCover>, degree: usize, rank: usize, values: BTreeMap<Vec<usize>, LaurentFraction>) -> Result<Cochain> {
        let mut c = Cochain::zero(cover, degree, rank);
        for (t, v) in values {
            c.insert(t, v)?;
        }
        Ok(c)
    }

    /// Sets the value on an increasing tuple.
    pub fn insert(&mut self, tuple: Vec<usize>, value: LaurentFraction) -> Result<()> {
        if tuple.len() != self.degree + 1 {
            return Err(Error::Arity { expected: self.degree + 1, got: tuple.len() });
        }
        if tuple.windows(2).any(|w| w[0] >= w[1]) || tuple.iter().any(|&i| i >= self.cover.len()) {
            return Err(Error::InvalidInput(format!("{tuple:?} is not an increasing tuple of cover indices")));
        }
        if value.rank() != self.rank {
            return Err(Error::Arity { expected: self.rank, got: value.rank() });
        }
        let base = self.cover.base(&tuple);
        let value = if value.base() == &base {
            value
        } else if value.base().is_constant() {
            LaurentFraction::new(value.numerators().to_vec(), base, 0)?
        } else {
            return Err(Error::InvalidInput(format!("value on {tuple:?} is not over the base {base}")));
        };
        self.values.insert(tuple, value);
        Ok(())
    }

    pub fn cover(&self) -> &Arc<CechCover> {
        &self.cover
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Stored values on increasing tuples; absent tuples are zero.
    pub fn values(&self) -> &BTreeMap<Vec<usize>, LaurentFraction> {
        &self.values
    }

    /// Value on any tuple, extended by alternating signs; zero on tuples
    /// with a repeated index.
    pub fn value(&self, tuple: &[usize]) -> LaurentFraction {
        let mut sorted = tuple.to_vec();
        let mut sign = false;
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        let base = self.cover.base(&sorted);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return LaurentFraction::zero(self.rank, &base);
        }
        match self.values.get(&sorted) {
            Some(v) if sign => v.neg(),
            Some(v) => v.clone(),
            None => LaurentFraction::zero(self.rank, &base),
        }
    }

    /// `(∂s)(l_0..l_{k+1}) = Σ_j (-1)^j s(l_0..l̂_j..l_{k+1})`, each term
    /// restricted by the omitted cover function.
    pub fn boundary(&self) -> Result<Cochain> {
        let n = self.cover.len();
        let mut out = Cochain::zero(&self.cover, self.degree + 1, self.rank);
        for t in increasing_tuples(n, self.degree + 2) {
            let mut acc = LaurentFraction::zero(self.rank, &self.cover.base(&t));
            for j in 0..t.len() {
                let face: Vec<usize> = t.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &l)| l).collect();
                let Some(v) = self.values.get(&face) else { continue };
                let term = v.restrict(&self.cover.fs[t[j]]);
                acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            if !acc.is_structurally_zero() {
                out.values.insert(t, acc);
            }
        }
        Ok(out)
    }

    /// Whether every value vanishes in its localization.
    pub fn is_zero(&self) -> Result<bool> {
        for (t, v) in &self.values {
            if !self.cover.section_eq(t, v, &LaurentFraction::zero(self.rank, v.base()))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_cocycle(&self) -> Result<bool> {
        self.boundary()?.is_zero()
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        if self.degree != other.degree || self.rank != other.rank || !Arc::ptr_eq(&self.cover, &other.cover) {
            return Err(Error::AmbientMismatch("cochains live on different complexes".into()));
        }
        let mut out = self.clone();
        for (t, v) in &other.values {
            let diff = self.value(t).sub(v)?;
            out.values.insert(t.clone(), diff);
        }
        Ok(out)
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(t, v)| format!("{t:?}: {v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A 1-cocycle on a unimodular cover, with `Σ r_i f_i = 1`.
#[derive(Clone, Debug)]
pub struct CoprimeSystemCocycle {
    s: Cochain,
    witness: Vec<MultiPoly>,
}

impl CoprimeSystemCocycle {
    /// Checks the cocycle condition on every triple; computes a witness
    /// when none is supplied.
    pub fn new(s: Cochain, witness: Option<Vec<MultiPoly>>) -> Result<CoprimeSystemCocycle> {
        if s.degree != 1 {
            return Err(Error::InvalidInput(format!("expected a 1-cochain, got degree {}", s.degree)));
        }
        let cover = s.cover.clone();
        let ideal = cover.ambient.ideal();
        let witness = match witness {
            Some(r) => {
                if r.len() != cover.len() {
                    return Err(Error::Arity { expected: cover.len(), got: r.len() });
                }
                let sum = r.iter().zip(&cover.fs).fold(MultiPoly::zero(cover.ambient.ring()), |acc, (a, b)| &acc + &(a * b));
                if !ideal.contains(&(&sum - &MultiPoly::one(cover.ambient.ring())))? {
                    return Err(Error::NotUnimodular);
                }
                r
            }
            None => unimodular_certificate(&cover.fs, ideal)?.ok_or(Error::NotUnimodular)?,
        };
        let ds = s.boundary()?;
        for (t, v) in &ds.values {
            if !cover.section_eq(t, v, &LaurentFraction::zero(s.rank, v.base()))? {
                return Err(Error::CocycleConditionViolated(t[0], t[1], t[2]));
            }
        }
        Ok(CoprimeSystemCocycle { s, witness })
    }

    pub fn cochain(&self) -> &Cochain {
        &self.s
    }

    pub fn witness(&self) -> &[MultiPoly] {
        &self.witness
    }
}

#[derive(Clone, Debug)]
pub struct H1Splitting {
    /// `u` with `u_j - u_i = s_ij`, `u_i` over the base `f_i`.
    pub u: Cochain,
    pub verification: Vec<Check>,
}

/// Splits a 1-cocycle: after rewriting `s_ij = m_ij / (h_i h_j)` with the
/// cocycle identity holding on the nose, `u_i = -Σ_k r_k m_ik / h_i` for
/// `Σ r_k h_k = 1`.
pub fn split_h1(z: &CoprimeSystemCocycle) -> Result<H1Splitting> {
    let s = &z.s;
    let cover = s.cover.clone();
    let n = cover.len();
    let rank = s.rank;
    let ring = cover.ambient.ring().clone();
    let ideal = cover.ambient.ideal();
    let fs = &cover.fs;

    // common exponent e: s_ij = m_ij / (g_i g_j), g_i = f_i^e
    let e = s.values.values().map(|v| v.exponent()).max().unwrap_or(0);
    let g: Vec<MultiPoly> = fs.iter().map(|f| f.pow(e)).collect();
    let zero_vec = vec![MultiPoly::zero(&ring); rank];
    let mut m: Vec<Vec<Vec<MultiPoly>>> = vec![vec![zero_vec.clone(); n]; n];
    for (t, v) in &s.values {
        let (i, j) = (t[0], t[1]);
        let num = v.numerators_at(e);
        m[j][i] = num.iter().map(|x| -x).collect();
        m[i][j] = num;
    }

    // N with (g_i g_j g_k)^N (g_i m_jk - g_j m_ik + g_k m_ij) ∈ I on every triple
    let mut big_n = 0u32;
    for t in increasing_tuples(n, 3) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let h = &(&g[i] * &g[j]) * &g[k];
        for c in 0..rank {
            let defect = &(&(&g[i] * &m[j][k][c]) - &(&g[j] * &m[i][k][c])) + &(&g[k] * &m[i][j][c]);
            let mut acc = defect;
            let mut l = 0u32;
            while !ideal.contains(&acc)? {
                if l == 64 && !ideal.saturation(&h)?.contains(&acc)? {
                    return Err(Error::CocycleConditionViolated(i, j, k));
                }
                acc = &acc * &h;
                l += 1;
            }
            big_n = big_n.max(l);
        }
    }

    let h: Vec<MultiPoly> = g.iter().map(|gi| gi.pow(big_n + 1)).collect();
    let mp: Vec<Vec<Vec<MultiPoly>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let scale = (&g[i] * &g[j]).pow(big_n);
                    m[i][j].iter().map(|x| x * &scale).collect()
                })
                .collect()
        })
        .collect();
    let r = if big_n == 0 && e == 1 {
        z.witness.clone()
    } else {
        unimodular_certificate(&h, ideal)?.ok_or(Error::NotUnimodular)?
    };

    let exp = e * (big_n + 1);
    let mut u = Cochain::zero(&cover, 0, rank);
    for i in 0..n {
        let num: Vec<MultiPoly> = (0..rank)
            .map(|c| {
                let sum = (0..n).fold(MultiPoly::zero(&ring), |acc, k| &acc + &(&r[k] * &mp[i][k][c]));
                ideal.normal_form(&(-&sum)).expect("same ring")
            })
            .collect();
        u.insert(vec![i], LaurentFraction::new(num, fs[i].clone(), exp)?)?;
    }

    let mut verification = Vec::new();
    for t in increasing_tuples(n, 2) {
        let (i, j) = (t[0], t[1]);
        let lhs = u.value(&[j]).restrict(&fs[i]).sub(&u.value(&[i]).restrict(&fs[j]))?;
        let ok = cover.section_eq(&t, &lhs, &s.value(&t))?;
        verification.push(Check::new(format!("u_{j} - u_{i} = s_{i}{j}"), ok));
    }
    if let Some(bad) = verification.iter().find(|c| !c.passed) {
        return Err(Error::VerificationFailed(bad.name.clone()));
    }
    Ok(H1Splitting { u, verification })
}

/// A dense matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: usize, cols: usize, data: Vec<Vec<Scalar>>) -> Result<Matrix> {
        if data.len() != rows {
            return Err(Error::Arity { expected: rows, got: data.len() });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for row in data {
            if row.len() != cols {
                return Err(Error::Arity { expected: cols, got: row.len() });
            }
            for x in row {
                entries.push(field.convert(&x)?);
            }
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Arity { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else { continue };
            a.swap(rank, pivot);
            let inv = a[rank][col].inv().expect("nonzero pivot");
            let prow: Vec<Scalar> = a[rank].iter().map(|x| x * &inv).collect();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for (x, p) in row.iter_mut().zip(&prow) {
                        *x = &*x - &(&factor * p);
                    }
                }
            }
            a[rank] = prow;
            rank += 1;
        }
        rank
    }
}

/// `C^0 → C^1 → ... → C^m`, with `maps[k]` of shape `dims[k+1] × dims[k]`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub field: Field,
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

impl CochainComplex {
    pub fn new(field: Field, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<CochainComplex> {
        if dims.is_empty() || maps.len() + 1 != dims.len() {
            return Err(Error::Arity { expected: dims.len().saturating_sub(1), got: maps.len() });
        }
        for (k, m) in maps.iter().enumerate() {
            if m.field != field {
                return Err(Error::FieldMismatch(format!("map {k} over {}", m.field)));
            }
            if m.cols != dims[k] || m.rows != dims[k + 1] {
                return Err(Error::InvalidInput(format!(
                    "map {k} has shape {}x{}, expected {}x{}",
                    m.rows, m.cols, dims[k + 1], dims[k]
                )));
            }
        }
        Ok(CochainComplex { field, dims, maps })
    }
}

/// `dim H^k = (dim C^k - rank ∂^k) - rank ∂^{k-1}`, after checking
/// `∂^{k+1} ∂^k = 0`.
pub fn cohomology_dims(complex: &CochainComplex) -> Result<Vec<usize>> {
    for k in 0..complex.maps.len().saturating_sub(1) {
        if !complex.maps[k + 1].mul(&complex.maps[k])?.is_zero() {
            return Err(Error::CompositionNotZero(k));
        }
    }
    let ranks: Vec<usize> = complex.maps.iter().map(|m| m.rank()).collect();
    Ok((0..complex.dims.len())
        .map(|k| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = if k == 0 { 0 } else { ranks[k - 1] };
            complex.dims[k] - out - inc
        })
        .collect())
}
