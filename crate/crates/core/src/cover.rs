//! Zariski covers: containment of standard opens and closed sets, patching
//! locally given ideals, splitting invertible functions on overlaps in the
//! affine line, merging local sections, and pointed cocycles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::fpalg::FpAlgebra;
use crate::groebner::{unimodular_certificate, Ideal};
use crate::poly::factor_linear;
use crate::poly::{LaurentFraction, MultiPoly, Ring};

/// Default bound on the exponent search in [`patch_ideals`].
pub const DEFAULT_PATCH_BOUND: u32 = 20;

/// `D(f_1, ..., f_n)`: the locus where some `f_i` is invertible.
#[derive(Clone, Debug)]
pub struct StandardOpen {
    ambient: FpAlgebra,
    fs: Vec<MultiPoly>,
}

impl StandardOpen {
    pub fn new(ambient: &FpAlgebra, fs: Vec<MultiPoly>) -> Result<StandardOpen> {
        if fs.is_empty() {
            return Err(Error::InvalidInput("a standard open needs at least one function".into()));
        }
        for f in &fs {
            ambient.ring().check_ambient(f.ring())?;
        }
        Ok(StandardOpen { ambient: ambient.clone(), fs })
    }

    pub fn principal(ambient: &FpAlgebra, f: MultiPoly) -> Result<StandardOpen> {
        StandardOpen::new(ambient, vec![f])
    }

    pub fn ambient(&self) -> &FpAlgebra {
        &self.ambient
    }

    pub fn functions(&self) -> &[MultiPoly] {
        &self.fs
    }

    /// `D(f) = ∅` iff `f` is nilpotent.
    pub fn is_empty(&self) -> Result<bool> {
        for f in &self.fs {
            if !self.ambient.ideal().radical_contains(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `V(f_1, ..., f_n)`: the locus where every `f_i` vanishes.
#[derive(Clone, Debug)]
pub struct ClosedSet {
    ambient: FpAlgebra,
    fs: Vec<MultiPoly>,
}

impl ClosedSet {
    pub fn new(ambient: &FpAlgebra, fs: Vec<MultiPoly>) -> Result<ClosedSet> {
        for f in &fs {
            ambient.ring().check_ambient(f.ring())?;
        }
        Ok(ClosedSet { ambient: ambient.clone(), fs })
    }

    pub fn functions(&self) -> &[MultiPoly] {
        &self.fs
    }
}

fn same_algebra(a: &FpAlgebra, b: &FpAlgebra) -> Result<()> {
    if a != b {
        return Err(Error::AmbientMismatch(format!("{a} vs {b}")));
    }
    Ok(())
}

/// `D(f_1..f_m) ⊆ D(g_1..g_n)` iff every `f_i ∈ √(I + (g))`.
pub fn open_contained(u: &StandardOpen, v: &StandardOpen) -> Result<bool> {
    same_algebra(&u.ambient, &v.ambient)?;
    let target = u.ambient.ideal().extend(&v.fs)?;
    for f in &u.fs {
        if !target.radical_contains(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `V(f) ⊆ V(g)` as ideals: `(g) ⊆ (f)` in the ambient algebra.
pub fn closed_contained(a: &ClosedSet, b: &ClosedSet) -> Result<bool> {
    same_algebra(&a.ambient, &b.ambient)?;
    let outer = a.ambient.ideal().extend(&a.fs)?;
    for g in &b.fs {
        if !outer.contains(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ideals `I_i ⊆ A_{f_i}` on a unimodular cover, each generated by
/// fractions over the base `f_i`.
#[derive(Clone, Debug)]
pub struct LocalIdealFamily {
    ambient: FpAlgebra,
    cover: Vec<MultiPoly>,
    witness: Vec<MultiPoly>,
    locals: Vec<Vec<LaurentFraction>>,
}

impl LocalIdealFamily {
    pub fn new(ambient: &FpAlgebra, cover: Vec<MultiPoly>, locals: Vec<Vec<LaurentFraction>>) -> Result<LocalIdealFamily> {
        if cover.len() != locals.len() {
            return Err(Error::Arity { expected: cover.len(), got: locals.len() });
        }
        for f in &cover {
            ambient.ring().check_ambient(f.ring())?;
        }
        let witness = unimodular_certificate(&cover, ambient.ideal())?.ok_or(Error::NotUnimodular)?;
        for (f, gens) in cover.iter().zip(&locals) {
            for g in gens {
                if g.rank() != 1 {
                    return Err(Error::Arity { expected: 1, got: g.rank() });
                }
                if !g.base().is_constant() && g.base() != f {
                    return Err(Error::InvalidInput(format!("local generator {g} is not over the base {f}")));
                }
            }
        }
        Ok(LocalIdealFamily { ambient: ambient.clone(), cover, witness, locals })
    }

    pub fn ambient(&self) -> &FpAlgebra {
        &self.ambient
    }

    pub fn cover(&self) -> &[MultiPoly] {
        &self.cover
    }

    /// `r` with `Σ r_i f_i = 1` in the ambient algebra.
    pub fn witness(&self) -> &[MultiPoly] {
        &self.witness
    }

    pub fn locals(&self) -> &[Vec<LaurentFraction>] {
        &self.locals
    }

    fn cleared(&self, i: usize) -> Vec<MultiPoly> {
        self.locals[i].iter().map(|g| g.numerators()[0].clone()).collect()
    }
}

/// One self-check performed while computing a result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Check {
        Check { name: name.into(), passed }
    }
}

#[derive(Clone, Debug)]
pub struct PatchedIdeal {
    pub ideal: Ideal,
    /// Largest compatibility exponent found, per piece.
    pub exponents: Vec<u32>,
    pub verification: Vec<Check>,
}

/// Smallest `l` with `h^l g ∈ J`, searching up to `bound` and deciding by
/// saturation beyond it.
fn clearing_exponent(g: &MultiPoly, h: &MultiPoly, target: &Ideal, bound: u32) -> Result<Option<u32>> {
    let mut acc = g.clone();
    for l in 0..=bound {
        if target.contains(&acc)? {
            return Ok(Some(l));
        }
        acc = &acc * h;
    }
    if !target.saturation(h)?.contains(g)? {
        return Ok(None);
    }
    let mut l = bound + 1;
    loop {
        if target.contains(&acc)? {
            return Ok(Some(l));
        }
        acc = &acc * h;
        l += 1;
    }
}

/// A finitely generated `I ⊆ A` with `I·A_{f_i} = I_i` for every `i`.
///
/// Each local generator `g_ik` (numerator after clearing `f_i`) is compared
/// on every overlap: the least `l` with `(f_i f_j)^l g_ik ∈ (g_j) + I_A`
/// exists by compatibility, and `f_i^L g_ik` for the largest such `L` lies
/// in every `I_j`. Those products generate `I`.
pub fn patch_ideals(fam: &LocalIdealFamily, bound: u32) -> Result<PatchedIdeal> {
    let n = fam.cover.len();
    let base = fam.ambient.ideal();
    let cleared: Vec<Vec<MultiPoly>> = (0..n).map(|i| fam.cleared(i)).collect();
    let local_ideals: Vec<Ideal> = cleared.iter().map(|g| base.extend(g)).collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .flat_map(|(i, j)| (0..cleared[i].len()).map(move |k| (i, j, k)))
        .collect();
    let found: Vec<Result<u32>> = jobs
        .par_iter()
        .map(|&(i, j, k)| {
            let h = &fam.cover[i] * &fam.cover[j];
            clearing_exponent(&cleared[i][k], &h, &local_ideals[j], bound)?
                .ok_or(Error::CompatibilityFailure { i, j, generator: k })
        })
        .collect();
    let mut exponents = vec![0u32; n];
    for (&(i, _, _), l) in jobs.iter().zip(found) {
        exponents[i] = exponents[i].max(l?);
    }

    let mut gens = Vec::new();
    for (i, gs) in cleared.iter().enumerate() {
        let scale = fam.cover[i].pow(exponents[i]);
        gens.extend(gs.iter().map(|g| &scale * g));
    }
    let ideal = Ideal::new(fam.ambient.ring(), gens);
    let global = base.extend(ideal.generators())?;

    let mut verification = Vec::new();
    for i in 0..n {
        let f = &fam.cover[i];
        let local_sat = local_ideals[i].saturation(f)?;
        let down = ideal.generators().iter().map(|g| local_sat.contains(g)).collect::<Result<Vec<_>>>()?;
        verification.push(Check::new(format!("I·A_f{i} ⊆ I_{i}"), down.into_iter().all(|b| b)));
        let global_sat = global.saturation(f)?;
        let up = cleared[i].iter().map(|g| global_sat.contains(g)).collect::<Result<Vec<_>>>()?;
        verification.push(Check::new(format!("I_{i} ⊆ I·A_f{i}"), up.into_iter().all(|b| b)));
    }
    if let Some(bad) = verification.iter().find(|c| !c.passed) {
        return Err(Error::VerificationFailed(bad.name.clone()));
    }
    Ok(PatchedIdeal { ideal, exponents, verification })
}

/// `unit · Π (X - a)^{e_a}` with integer exponents: an invertible function
/// on the complement of its roots in the affine line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredUnit {
    unit: Scalar,
    roots: BTreeMap<Scalar, i64>,
}

impl FactoredUnit {
    pub fn new(unit: Scalar, roots: impl IntoIterator<Item = (Scalar, i64)>) -> Result<FactoredUnit> {
        if unit.is_zero() {
            return Err(Error::NotAUnit("zero".into()));
        }
        let mut map = BTreeMap::new();
        for (a, e) in roots {
            if a.field() != unit.field() {
                return Err(Error::FieldMismatch(format!("root {a} over {}", a.field())));
            }
            *map.entry(a).or_insert(0) += e;
        }
        map.retain(|_, e| *e != 0);
        Ok(FactoredUnit { unit, roots: map })
    }

    pub fn constant(unit: Scalar) -> Result<FactoredUnit> {
        FactoredUnit::new(unit, [])
    }

    /// Factors `num / den` into linear pieces; fails if either has a factor
    /// without a root in the field.
    pub fn from_fraction(num: &MultiPoly, den: &MultiPoly, scan_cap: u64) -> Result<FactoredUnit> {
        let (_, fnum) = factor_linear(num, scan_cap)?;
        let (_, fden) = factor_linear(den, scan_cap)?;
        for cof in [&fnum.cofactor, &fden.cofactor] {
            if !cof.is_constant() {
                return Err(Error::UnsupportedRoot(format!("irreducible factor {cof}")));
            }
        }
        let unit = fnum.unit.checked_div(&fden.unit).expect("nonzero");
        let roots = fnum
            .roots
            .iter()
            .map(|(a, e)| (a.clone(), *e as i64))
            .chain(fden.roots.iter().map(|(a, e)| (a.clone(), -(*e as i64))));
        FactoredUnit::new(unit, roots)
    }

    pub fn field(&self) -> Field {
        self.unit.field()
    }

    pub fn unit(&self) -> &Scalar {
        &self.unit
    }

    pub fn roots(&self) -> &BTreeMap<Scalar, i64> {
        &self.roots
    }

    pub fn support(&self) -> BTreeSet<Scalar> {
        self.roots.keys().cloned().collect()
    }

    pub fn is_constant(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn mul(&self, other: &FactoredUnit) -> FactoredUnit {
        let roots = self.roots.iter().chain(&other.roots).map(|(a, e)| (a.clone(), *e));
        FactoredUnit::new(&self.unit * &other.unit, roots).expect("product of units")
    }

    pub fn inv(&self) -> FactoredUnit {
        let roots = self.roots.iter().map(|(a, e)| (a.clone(), -e));
        FactoredUnit::new(self.unit.inv().expect("unit"), roots).expect("inverse of a unit")
    }

    pub fn div(&self, other: &FactoredUnit) -> FactoredUnit {
        self.mul(&other.inv())
    }

    /// `(numerator, denominator)` as polynomials in the single variable of `ring`.
    pub fn to_fraction(&self, ring: &Arc<Ring>) -> (MultiPoly, MultiPoly) {
        let x = MultiPoly::var(ring, 0);
        let mut num = MultiPoly::constant(ring, self.unit.clone());
        let mut den = MultiPoly::one(ring);
        for (a, &e) in &self.roots {
            let lin = &x - &MultiPoly::constant(ring, a.clone());
            if e > 0 {
                num = &num * &lin.pow(e as u32);
            } else {
                den = &den * &lin.pow((-e) as u32);
            }
        }
        (num, den)
    }
}

impl fmt::Display for FactoredUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (a, e) in &self.roots {
            let lin = if a.is_zero() { "X".to_string() } else { format!("(X - {a})") };
            if *e == 1 {
                write!(f, "*{lin}")?;
            } else {
                write!(f, "*{lin}^{e}")?;
            }
        }
        Ok(())
    }
}

fn univariate(field: Field) -> Arc<Ring> {
    Ring::new(field, ["X"])
}

/// Whether `a·b = c` as rational functions, by cross-multiplying.
fn product_identity(a: &FactoredUnit, b: &FactoredUnit, c: &FactoredUnit) -> bool {
    let ring = univariate(c.field());
    let (an, ad) = a.to_fraction(&ring);
    let (bn, bd) = b.to_fraction(&ring);
    let (cn, cd) = c.to_fraction(&ring);
    &(&an * &bn) * &cd == &(&ad * &bd) * &cn
}

/// Splits `f`, invertible on `U ∩ V`, as `g·h` with `g` invertible on `U`
/// (roots in `shared ∪ u_only`, carrying the constant) and `h` invertible
/// on `V` (roots in `v_only`).
pub fn decompose_unit_on_intersection(
    shared: &[Scalar],
    u_only: &[Scalar],
    v_only: &[Scalar],
    f: &FactoredUnit,
) -> Result<(FactoredUnit, FactoredUnit)> {
    let mut seen = BTreeSet::new();
    for a in shared.iter().chain(u_only).chain(v_only) {
        if a.field() != f.field() {
            return Err(Error::FieldMismatch(format!("root {a} over {}", a.field())));
        }
        if !seen.insert(a.clone()) {
            return Err(Error::InvalidInput(format!("root {a} listed twice")));
        }
    }
    let v_side: BTreeSet<&Scalar> = v_only.iter().collect();
    let mut g_roots = Vec::new();
    let mut h_roots = Vec::new();
    for (a, &e) in &f.roots {
        if !seen.contains(a) {
            return Err(Error::UnsupportedRoot(a.to_string()));
        }
        if v_side.contains(a) {
            h_roots.push((a.clone(), e));
        } else {
            g_roots.push((a.clone(), e));
        }
    }
    let g = FactoredUnit::new(f.unit.clone(), g_roots)?;
    let h = FactoredUnit::new(f.field().one(), h_roots)?;
    if !product_identity(&g, &h, f) {
        return Err(Error::VerificationFailed("g·h ≠ f".into()));
    }
    Ok((g, h))
}

/// Pieces `A¹ ∖ S_p` with transitions `f_pq` on overlaps, read as
/// `s_q = f_pq · s_p`.
#[derive(Clone, Debug)]
pub struct SectionData {
    field: Field,
    pieces: Vec<BTreeSet<Scalar>>,
    transitions: BTreeMap<(usize, usize), FactoredUnit>,
}

impl SectionData {
    /// `transitions` holds `f_pq` for `p < q`.
    pub fn new(field: Field, pieces: Vec<BTreeSet<Scalar>>, transitions: BTreeMap<(usize, usize), FactoredUnit>) -> Result<SectionData> {
        let n = pieces.len();
        if n == 0 {
            return Err(Error::InvalidInput("at least one piece is required".into()));
        }
        let mut full = BTreeMap::new();
        for p in 0..n {
            for q in p + 1..n {
                let f = transitions
                    .get(&(p, q))
                    .ok_or_else(|| Error::InvalidInput(format!("missing transition ({p}, {q})")))?;
                if f.field() != field {
                    return Err(Error::FieldMismatch(format!("transition ({p}, {q})")));
                }
                let allowed: BTreeSet<&Scalar> = pieces[p].union(&pieces[q]).collect();
                if let Some(a) = f.roots.keys().find(|a| !allowed.contains(a)) {
                    return Err(Error::UnsupportedRoot(format!("{a} in transition ({p}, {q})")));
                }
                full.insert((q, p), f.inv());
                full.insert((p, q), f.clone());
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    if p == q || q == r || p == r {
                        continue;
                    }
                    // s_r = f_qr s_q = f_qr f_pq s_p
                    if full[&(q, r)].mul(&full[&(p, q)]) != full[&(p, r)] {
                        return Err(Error::CocycleConditionViolated(p, q, r));
                    }
                }
            }
        }
        Ok(SectionData { field, pieces, transitions: full })
    }

    pub fn pieces(&self) -> &[BTreeSet<Scalar>] {
        &self.pieces
    }

    /// `f_pq` for any `p ≠ q`.
    pub fn transition(&self, p: usize, q: usize) -> &FactoredUnit {
        &self.transitions[&(p, q)]
    }
}

#[derive(Clone, Debug)]
pub struct MergedSection {
    /// Removed points of the union of all pieces.
    pub support: BTreeSet<Scalar>,
    /// Units `c_p` on each original piece with `c_p s_p` gluing to one section.
    pub corrections: Vec<FactoredUnit>,
    pub verification: Vec<Check>,
}

/// Merges pieces two at a time, splitting each transition with
/// [`decompose_unit_on_intersection`], until one section on the union remains.
pub fn merge_sections(data: &SectionData) -> Result<MergedSection> {
    let n = data.pieces.len();
    let one = FactoredUnit::constant(data.field.one())?;
    // live pieces: (removed points, original members with their corrections)
    let mut live: Vec<(BTreeSet<Scalar>, Vec<(usize, FactoredUnit)>)> =
        (0..n).map(|p| (data.pieces[p].clone(), vec![(p, one.clone())])).collect();
    // transitions between live pieces, indexed by position
    let mut trans: BTreeMap<(usize, usize), FactoredUnit> = data.transitions.clone();

    while live.len() > 1 {
        let (sq, members_q) = live.remove(1);
        let (sp, members_p) = live.remove(0);
        let f = trans[&(0, 1)].clone();
        let shared: Vec<Scalar> = sp.intersection(&sq).cloned().collect();
        let u_only: Vec<Scalar> = sp.difference(&sq).cloned().collect();
        let v_only: Vec<Scalar> = sq.difference(&sp).cloned().collect();
        let (g, h) = decompose_unit_on_intersection(&shared, &u_only, &v_only, &f)?;
        let h_inv = h.inv();

        let mut members: Vec<(usize, FactoredUnit)> = members_p.into_iter().map(|(p, c)| (p, g.mul(&c))).collect();
        members.extend(members_q.into_iter().map(|(q, c)| (q, h_inv.mul(&c))));
        members.sort_by_key(|(p, _)| *p);

        let merged_removed: BTreeSet<Scalar> = shared.into_iter().collect();
        let mut next = BTreeMap::new();
        let g_inv = g.inv();
        for k in 0..live.len() {
            let old = k + 2;
            let via_p = trans[&(0, old)].mul(&g_inv);
            let via_q = trans[&(1, old)].mul(&h);
            if via_p != via_q {
                return Err(Error::VerificationFailed(format!("merged transition to piece {old} is ambiguous")));
            }
            let allowed: BTreeSet<&Scalar> = merged_removed.union(&live[k].0).collect();
            if let Some(a) = via_p.roots.keys().find(|a| !allowed.contains(a)) {
                return Err(Error::UnsupportedRoot(a.to_string()));
            }
            next.insert((0, k + 1), via_p.clone());
            next.insert((k + 1, 0), via_p.inv());
            for l in 0..live.len() {
                if l != k {
                    next.insert((k + 1, l + 1), trans[&(old, l + 2)].clone());
                }
            }
        }
        trans = next;
        live.insert(0, (merged_removed, members));
    }

    let (support, members) = live.pop().expect("one piece remains");
    let corrections: Vec<FactoredUnit> = members.into_iter().map(|(_, c)| c).collect();
    let mut verification = Vec::new();
    for p in 0..n {
        let within = corrections[p].support().is_subset(&data.pieces[p]);
        verification.push(Check::new(format!("c_{p} invertible on piece {p}"), within));
        for q in p + 1..n {
            let glued = corrections[p] == corrections[q].mul(data.transition(p, q));
            verification.push(Check::new(format!("c_{p} s_{p} = c_{q} s_{q}"), glued));
        }
    }
    if let Some(bad) = verification.iter().find(|c| !c.passed) {
        return Err(Error::VerificationFailed(bad.name.clone()));
    }
    Ok(MergedSection { support, corrections, verification })
}

/// Values `c_ij` in `k^dim` on a finite index set with base index `i0`,
/// satisfying `c_ij + c_jk = c_ik`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedCocycle {
    size: usize,
    base: usize,
    values: Vec<Vec<Vec<Scalar>>>,
}

impl PointedCocycle {
    /// Builds from `c_ij` for `i < j`; the rest follows by antisymmetry.
    pub fn new(field: Field, size: usize, dim: usize, base: usize, upper: &BTreeMap<(usize, usize), Vec<Scalar>>) -> Result<PointedCocycle> {
        if size == 0 || base >= size {
            return Err(Error::InvalidInput("the index set must contain the base index".into()));
        }
        let zero = vec![field.zero(); dim];
        let mut values = vec![vec![zero.clone(); size]; size];
        for (&(i, j), v) in upper {
            if i >= j || j >= size {
                return Err(Error::InvalidInput(format!("entry ({i}, {j}) is not an upper pair")));
            }
            if v.len() != dim {
                return Err(Error::Arity { expected: dim, got: v.len() });
            }
            if let Some(bad) = v.iter().find(|x| x.field() != field) {
                return Err(Error::FieldMismatch(format!("{bad} over {}", bad.field())));
            }
            values[i][j] = v.clone();
            values[j][i] = v.iter().map(|x| -x).collect();
        }
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let lhs: Vec<Scalar> = values[i][j].iter().zip(&values[j][k]).map(|(a, b)| a + b).collect();
                    if lhs != values[i][k] {
                        return Err(Error::CocycleLawViolation(i, j, k));
                    }
                }
            }
        }
        Ok(PointedCocycle { size, base, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn value(&self, i: usize, j: usize) -> &[Scalar] {
        &self.values[i][j]
    }
}

/// `u_i = -c_{i0 i}`, so that `u_i - u_j = c_ij`.
pub fn trivialize_pointed_cocycle(c: &PointedCocycle) -> Vec<Vec<Scalar>> {
    (0..c.size).map(|i| c.values[c.base][i].iter().map(|x| -x).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    fn qx() -> (FpAlgebra, Arc<Ring>) {
        let r = Ring::new(Field::Rationals, ["X"]);
        (FpAlgebra::polynomial_ring(&r), r)
    }

    fn p(s: &str, r: &Arc<Ring>) -> MultiPoly {
        parse_poly(s, r).unwrap()
    }

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn open_containment() {
        let (a, r) = qx();
        let d = |s: &str| StandardOpen::principal(&a, p(s, &r)).unwrap();
        assert!(open_contained(&d("X^2"), &d("X")).unwrap());
        assert!(open_contained(&d("X"), &d("X^2")).unwrap());
        assert!(!open_contained(&d("1"), &d("X")).unwrap());
        let b = FpAlgebra::from_relations(&r, vec![p("X^3", &r)]).unwrap();
        assert!(StandardOpen::principal(&b, p("X", &r)).unwrap().is_empty().unwrap());
    }

    #[test]
    fn closed_containment() {
        let (a, r) = qx();
        let v = |s: &str| ClosedSet::new(&a, vec![p(s, &r)]).unwrap();
        assert!(closed_contained(&v("X"), &v("X^2")).unwrap());
        assert!(!closed_contained(&v("X^2"), &v("X")).unwrap());
        assert!(closed_contained(&v("X - 3"), &v("X - 3")).unwrap());
    }

    fn family(a: &FpAlgebra, r: &Arc<Ring>, cover: &[&str], locals: &[&[&str]]) -> LocalIdealFamily {
        let cover: Vec<MultiPoly> = cover.iter().map(|s| p(s, r)).collect();
        let locals = locals
            .iter()
            .zip(&cover)
            .map(|(gs, f)| gs.iter().map(|g| LaurentFraction::single(p(g, r), f.clone(), 0).unwrap()).collect())
            .collect();
        LocalIdealFamily::new(a, cover, locals).unwrap()
    }

    #[test]
    fn patching_examples() {
        let (a, r) = qx();
        let fam = family(&a, &r, &["X", "1 - X"], &[&["X - 2"], &["X - 2"]]);
        let out = patch_ideals(&fam, DEFAULT_PATCH_BOUND).unwrap();
        let expected = Ideal::new(&r, vec![p("X - 2", &r)]);
        assert!(out.ideal.contains_ideal(&expected).unwrap() && expected.contains_ideal(&out.ideal).unwrap());
        assert!(out.verification.iter().all(|c| c.passed));

        let ones = family(&a, &r, &["X", "1 - X"], &[&["1"], &["1"]]);
        assert!(patch_ideals(&ones, DEFAULT_PATCH_BOUND).unwrap().ideal.is_unit());

        let zeros = family(&a, &r, &["X", "1 - X"], &[&["0"], &[]]);
        assert!(patch_ideals(&zeros, DEFAULT_PATCH_BOUND).unwrap().ideal.basis().is_empty());
    }

    #[test]
    fn patching_needs_exponents() {
        // I = (X^2 - X): locally (X - 1) on D(X) and (X) on D(1 - X)
        let (a, r) = qx();
        let fam = family(&a, &r, &["X", "1 - X"], &[&["X - 1"], &["X"]]);
        let out = patch_ideals(&fam, DEFAULT_PATCH_BOUND).unwrap();
        assert_eq!(out.exponents, vec![1, 1]);
        let expected = Ideal::new(&r, vec![p("X^2 - X", &r)]);
        assert!(out.ideal.contains_ideal(&expected).unwrap() && expected.contains_ideal(&out.ideal).unwrap());
    }

    #[test]
    fn patching_detects_incompatibility() {
        let (a, r) = qx();
        let fam = family(&a, &r, &["X", "1 - X"], &[&["X - 2"], &["X - 3"]]);
        let err = patch_ideals(&fam, 3).unwrap_err();
        assert!(matches!(err, Error::CompatibilityFailure { i: 0, j: 1, generator: 0 }));
    }

    #[test]
    fn family_requires_unimodular_cover() {
        let (a, r) = qx();
        let locals = vec![vec![], vec![]];
        let err = LocalIdealFamily::new(&a, vec![p("X", &r), p("X^2", &r)], locals).unwrap_err();
        assert_eq!(err, Error::NotUnimodular);
    }

    #[test]
    fn decomposition_examples() {
        let f = FactoredUnit::new(q(1), [(q(0), 2), (q(1), -1)]).unwrap();
        let (g, h) = decompose_unit_on_intersection(&[], &[q(0)], &[q(1)], &f).unwrap();
        assert_eq!(g, FactoredUnit::new(q(1), [(q(0), 2)]).unwrap());
        assert_eq!(h, FactoredUnit::new(q(1), [(q(1), -1)]).unwrap());

        let alpha = FactoredUnit::constant(q(7)).unwrap();
        let (g, h) = decompose_unit_on_intersection(&[], &[q(0)], &[q(1)], &alpha).unwrap();
        assert_eq!((g, h.is_constant() && h.unit().is_one()), (alpha, true));

        let bad = FactoredUnit::new(q(1), [(q(5), 1)]).unwrap();
        assert!(matches!(decompose_unit_on_intersection(&[], &[q(0)], &[q(1)], &bad), Err(Error::UnsupportedRoot(_))));
    }

    #[test]
    fn units_from_fractions() {
        let (_, r) = qx();
        let u = FactoredUnit::from_fraction(&p("2*X^2", &r), &p("X - 1", &r), 1000).unwrap();
        assert_eq!(u, FactoredUnit::new(q(2), [(q(0), 2), (q(1), -1)]).unwrap());
        assert!(FactoredUnit::from_fraction(&p("X^2 + 1", &r), &p("1", &r), 1000).is_err());
    }

    fn pieces(sets: &[&[i64]]) -> Vec<BTreeSet<Scalar>> {
        sets.iter().map(|s| s.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn merge_single_and_pair() {
        let single = SectionData::new(Field::Rationals, pieces(&[&[]]), BTreeMap::new()).unwrap();
        let out = merge_sections(&single).unwrap();
        assert!(out.corrections[0].is_constant());

        let f = FactoredUnit::new(q(1), [(q(0), 2)]).unwrap();
        let data = SectionData::new(Field::Rationals, pieces(&[&[0], &[1]]), BTreeMap::from([((0, 1), f)])).unwrap();
        let out = merge_sections(&data).unwrap();
        assert!(out.support.is_empty());
        assert!(out.verification.iter().all(|c| c.passed));
    }

    #[test]
    fn merge_recovers_known_section() {
        let c = [
            FactoredUnit::new(q(2), [(q(0), 1), (q(1), -2)]).unwrap(),
            FactoredUnit::new(q(1), [(q(2), 3)]).unwrap(),
            FactoredUnit::new(q(-1), [(q(0), -1), (q(3), 1)]).unwrap(),
        ];
        let sets = pieces(&[&[0, 1], &[2, 5], &[0, 3]]);
        let mut trans = BTreeMap::new();
        for p in 0..3 {
            for r in p + 1..3 {
                // c_p = c_r f_pr
                trans.insert((p, r), c[p].div(&c[r]));
            }
        }
        let data = SectionData::new(Field::Rationals, sets, trans).unwrap();
        let out = merge_sections(&data).unwrap();
        let ratio = out.corrections[0].div(&c[0]);
        assert!(ratio.is_constant());
        for p in 0..3 {
            assert_eq!(out.corrections[p].div(&c[p]), ratio);
        }
    }

    #[test]
    fn pointed_cocycles() {
        let f = Field::Rationals;
        let u = [0, 1, 3];
        let upper: BTreeMap<_, _> =
            [(0, 1), (0, 2), (1, 2)].into_iter().map(|(i, j)| ((i, j), vec![q(u[i] - u[j])])).collect();
        let c = PointedCocycle::new(f, 3, 1, 0, &upper).unwrap();
        let t = trivialize_pointed_cocycle(&c);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(&t[i][0] - &t[j][0], c.value(i, j)[0]);
            }
        }
        let zero = PointedCocycle::new(f, 3, 2, 1, &BTreeMap::new()).unwrap();
        assert!(trivialize_pointed_cocycle(&zero).iter().flatten().all(|x| x.is_zero()));

        let bad: BTreeMap<_, _> = [((0, 1), vec![q(1)]), ((1, 2), vec![q(1)]), ((0, 2), vec![q(3)])].into();
        assert_eq!(PointedCocycle::new(f, 3, 1, 0, &bad).unwrap_err(), Error::CocycleLawViolation(0, 1, 2));
    }
}
