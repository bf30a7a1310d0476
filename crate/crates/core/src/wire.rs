//! JSON documents for polynomials, fractions, algebras and the cover and
//! cocycle inputs. Polynomials are term lists; the ring comes from the
//! enclosing document.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::FactoredUnit;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::fpalg::FpAlgebra;
use crate::poly::{LaurentFraction, Monomial, MultiPoly, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: String,
    pub exps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn encode(f: &MultiPoly) -> PolyDoc {
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| TermDoc { coeff: c.to_string(), exps: m.exps().to_vec() })
            .collect();
        PolyDoc { terms }
    }

    pub fn decode(&self, ring: &Arc<Ring>) -> Result<MultiPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.exps.len() != ring.nvars() {
                return Err(Error::Arity { expected: ring.nvars(), got: t.exps.len() });
            }
            terms.push((Monomial::new(t.exps.clone()), ring.field().parse_scalar(&t.coeff)?));
        }
        Ok(MultiPoly::from_terms(ring, terms))
    }
}

pub fn encode_polys(fs: &[MultiPoly]) -> Vec<PolyDoc> {
    fs.iter().map(PolyDoc::encode).collect()
}

pub fn decode_polys(docs: &[PolyDoc], ring: &Arc<Ring>) -> Result<Vec<MultiPoly>> {
    docs.iter().map(|d| d.decode(ring)).collect()
}

/// `(num_1, ..., num_r) / base^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionDoc {
    pub num: Vec<PolyDoc>,
    pub base: PolyDoc,
    pub exp: u32,
}

impl FractionDoc {
    pub fn encode(f: &LaurentFraction) -> FractionDoc {
        FractionDoc { num: encode_polys(f.numerators()), base: PolyDoc::encode(f.base()), exp: f.exponent() }
    }

    pub fn decode(&self, ring: &Arc<Ring>) -> Result<LaurentFraction> {
        LaurentFraction::new(decode_polys(&self.num, ring)?, self.base.decode(ring)?, self.exp)
    }
}

/// `{"n", "relations", "names"}`, with an optional field (default from the
/// caller's configuration).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub n: usize,
    #[serde(default)]
    pub relations: Vec<PolyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl AlgebraDoc {
    pub fn encode(a: &FpAlgebra) -> AlgebraDoc {
        AlgebraDoc {
            field: Some(a.field().to_string()),
            n: a.ngens(),
            relations: encode_polys(a.relations()),
            names: Some(a.names().to_vec()),
        }
    }

    pub fn decode(&self, default_field: Field) -> Result<FpAlgebra> {
        let field = match &self.field {
            Some(s) => s.parse()?,
            None => default_field,
        };
        let names = match &self.names {
            Some(names) if names.len() != self.n => return Err(Error::Arity { expected: self.n, got: names.len() }),
            Some(names) => names.clone(),
            None => (1..=self.n).map(|i| format!("x{i}")).collect(),
        };
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != names.len() {
            return Err(Error::InvalidInput("generator names must be distinct".into()));
        }
        let ring = Ring::new(field, names);
        FpAlgebra::from_relations(&ring, decode_polys(&self.relations, &ring)?)
    }
}

/// Optional ambient algebra; absent means the polynomial ring on `vars`.
fn ambient_of(ambient: &Option<AlgebraDoc>, vars: &Option<Vec<String>>, field: Field) -> Result<FpAlgebra> {
    match (ambient, vars) {
        (Some(a), _) => a.decode(field),
        (None, Some(v)) => Ok(FpAlgebra::polynomial_ring(&Ring::new(field, v.clone()))),
        (None, None) => Err(Error::InvalidInput("document needs \"ambient\" or \"vars\"".into())),
    }
}

/// Input of ideal patching: local generators over each cover function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub cover: Vec<PolyDoc>,
    pub locals: Vec<Vec<FractionDoc>>,
}

pub struct Family {
    pub ambient: FpAlgebra,
    pub cover: Vec<MultiPoly>,
    pub locals: Vec<Vec<LaurentFraction>>,
}

impl FamilyDoc {
    pub fn decode(&self, field: Field) -> Result<Family> {
        let ambient = ambient_of(&self.ambient, &self.vars, field)?;
        let ring = ambient.ring().clone();
        let cover = decode_polys(&self.cover, &ring)?;
        let locals = self
            .locals
            .iter()
            .map(|gs| gs.iter().map(|g| g.decode(&ring)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Family { ambient, cover, locals })
    }
}

/// `"i,j"` keys with `i < j`.
pub fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("index pair {key:?} is not of the form \"i,j\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    Ok((i, j))
}

pub fn pair_key(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

/// Input of the H^1 splitting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    pub cover: Vec<PolyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<PolyDoc>>,
    pub rank: usize,
    pub s: BTreeMap<String, FractionDoc>,
}

pub struct CocycleInput {
    pub ambient: FpAlgebra,
    pub cover: Vec<MultiPoly>,
    pub witness: Option<Vec<MultiPoly>>,
    pub rank: usize,
    pub s: BTreeMap<(usize, usize), LaurentFraction>,
}

impl CocycleDoc {
    pub fn decode(&self, field: Field) -> Result<CocycleInput> {
        let ambient = ambient_of(&self.ambient, &self.vars, field)?;
        let ring = ambient.ring().clone();
        let cover = decode_polys(&self.cover, &ring)?;
        let witness = self.witness.as_ref().map(|w| decode_polys(w, &ring)).transpose()?;
        let mut s = BTreeMap::new();
        for (k, v) in &self.s {
            s.insert(parse_pair(k)?, v.decode(&ring)?);
        }
        Ok(CocycleInput { ambient, cover, witness, rank: self.rank, s })
    }
}

/// `unit * Π (X - root)^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitDoc {
    pub unit: String,
    #[serde(default)]
    pub roots: Vec<(String, i64)>,
}

impl UnitDoc {
    pub fn encode(u: &FactoredUnit) -> UnitDoc {
        UnitDoc { unit: u.unit().to_string(), roots: u.roots().iter().map(|(a, e)| (a.to_string(), *e)).collect() }
    }

    pub fn decode(&self, field: Field) -> Result<FactoredUnit> {
        let roots = self.roots.iter().map(|(a, e)| Ok((field.parse_scalar(a)?, *e))).collect::<Result<Vec<_>>>()?;
        FactoredUnit::new(field.parse_scalar(&self.unit)?, roots)
    }
}

/// Pieces `A^1 ∖ S_p` and transitions `f_pq` (`p < q`, `s_q = f_pq s_p`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub pieces: Vec<Vec<String>>,
    #[serde(default)]
    pub transitions: BTreeMap<String, UnitDoc>,
}

pub struct SectionsInput {
    pub field: Field,
    pub pieces: Vec<BTreeSet<Scalar>>,
    pub transitions: BTreeMap<(usize, usize), FactoredUnit>,
}

impl SectionsDoc {
    pub fn decode(&self, default_field: Field) -> Result<SectionsInput> {
        let field = match &self.field {
            Some(s) => s.parse()?,
            None => default_field,
        };
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.iter().map(|a| field.parse_scalar(a)).collect::<Result<BTreeSet<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut transitions = BTreeMap::new();
        for (k, v) in &self.transitions {
            transitions.insert(parse_pair(k)?, v.decode(field)?);
        }
        Ok(SectionsInput { field, pieces, transitions })
    }
}

/// Pointed cocycle values `c_ij` (`i < j`) in `k^dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub size: usize,
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(default)]
    pub base: usize,
    pub c: BTreeMap<String, Vec<String>>,
}

fn one() -> usize {
    1
}

pub struct PointedInput {
    pub field: Field,
    pub size: usize,
    pub dim: usize,
    pub base: usize,
    pub c: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl PointedDoc {
    pub fn decode(&self, default_field: Field) -> Result<PointedInput> {
        let field = match &self.field {
            Some(s) => s.parse()?,
            None => default_field,
        };
        let mut c = BTreeMap::new();
        for (k, v) in &self.c {
            let vals = v.iter().map(|x| field.parse_scalar(x)).collect::<Result<Vec<_>>>()?;
            c.insert(parse_pair(k)?, vals);
        }
        Ok(PointedInput { field, size: self.size, dim: self.dim, base: self.base, c })
    }
}

/// Explicit complex: `maps[k]` has `dims[k+1]` rows and `dims[k]` columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub maps: Vec<Vec<Vec<String>>>,
}

impl ComplexDoc {
    pub fn decode(&self, default_field: Field) -> Result<crate::cech::CochainComplex> {
        use crate::cech::{CochainComplex, Matrix};
        let field = match &self.field {
            Some(s) => s.parse()?,
            None => default_field,
        };
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, rows) in self.maps.iter().enumerate() {
            let data = rows
                .iter()
                .map(|r| r.iter().map(|x| field.parse_scalar(x)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let (nr, nc) = (self.dims.get(k + 1).copied().unwrap_or(0), self.dims.get(k).copied().unwrap_or(0));
            maps.push(Matrix::from_rows(field, nr, nc, data)?);
        }
        CochainComplex::new(field, self.dims.clone(), maps)
    }
}
