//! Finitely presented algebras `k[x_1..x_n]/(f_1..f_m)`, homomorphisms
//! between them, and the constructions built from presentations: tensor and
//! fiber products, localizations, rational points over finite fields and
//! the external roundtrip between an algebra and functions on its spectrum.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groebner::{Ideal, KDim};
use crate::poly::{Monomial, MultiPoly, Ring};

/// Default bound on enumerated grids (points, elements, hom candidates).
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// `n` generators and `m` relations over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    ring: Arc<Ring>,
    relations: Vec<MultiPoly>,
}

impl Presentation {
    pub fn new(ring: &Arc<Ring>, relations: Vec<MultiPoly>) -> Result<Presentation> {
        for r in &relations {
            ring.check_ambient(r.ring()).map_err(|_| Error::Arity { expected: ring.nvars(), got: r.ring().nvars() })?;
        }
        Ok(Presentation { ring: ring.clone(), relations: relations.iter().map(|r| r.reorder(ring)).collect() })
    }

    /// Generators named `x1..xn`.
    pub fn anonymous(field: Field, n: usize, relations: impl FnOnce(&Arc<Ring>) -> Vec<MultiPoly>) -> Presentation {
        let ring = Ring::new(field, (1..=n).map(|i| format!("x{i}")));
        let rels = relations(&ring);
        Presentation { ring, relations: rels }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.ring.nvars()
    }

    pub fn m(&self) -> usize {
        self.relations.len()
    }

    pub fn relations(&self) -> &[MultiPoly] {
        &self.relations
    }
}

/// A finitely presented algebra with its relation ideal.
#[derive(Clone, Debug)]
pub struct FpAlgebra {
    presentation: Presentation,
    ideal: Arc<Ideal>,
}

impl PartialEq for FpAlgebra {
    /// Equality of presentations, not isomorphism.
    fn eq(&self, other: &FpAlgebra) -> bool {
        self.presentation == other.presentation
    }
}

impl FpAlgebra {
    pub fn new(presentation: Presentation) -> FpAlgebra {
        let ideal = Ideal::new(&presentation.ring, presentation.relations.clone());
        FpAlgebra { presentation, ideal: Arc::new(ideal) }
    }

    pub fn from_relations(ring: &Arc<Ring>, relations: Vec<MultiPoly>) -> Result<FpAlgebra> {
        Ok(FpAlgebra::new(Presentation::new(ring, relations)?))
    }

    pub fn polynomial_ring(ring: &Arc<Ring>) -> FpAlgebra {
        FpAlgebra::new(Presentation { ring: ring.clone(), relations: Vec::new() })
    }

    /// The base field as an algebra over itself (`n = m = 0`).
    pub fn base(field: Field) -> FpAlgebra {
        FpAlgebra::polynomial_ring(&Ring::new(field, Vec::<String>::new()))
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.presentation.ring
    }

    pub fn field(&self) -> Field {
        self.ring().field()
    }

    pub fn ngens(&self) -> usize {
        self.presentation.n()
    }

    pub fn names(&self) -> &[String] {
        self.ring().vars()
    }

    pub fn relations(&self) -> &[MultiPoly] {
        &self.presentation.relations
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Canonical representative of an element.
    pub fn reduce(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.ideal.normal_form(f)
    }

    pub fn element_eq(&self, a: &MultiPoly, b: &MultiPoly) -> Result<bool> {
        self.ideal.contains(&(a - b))
    }

    /// `A = 0` iff `1` lies in the relation ideal.
    pub fn is_trivial(&self) -> bool {
        self.ideal.is_unit()
    }

    pub fn k_dimension(&self) -> KDim {
        self.ideal.k_dimension()
    }

    pub fn gen(&self, i: usize) -> MultiPoly {
        MultiPoly::var(self.ring(), i)
    }

    /// The same presentation read over another field.
    pub fn change_field(&self, field: Field) -> Result<FpAlgebra> {
        let ring = Ring::new(field, self.names().to_vec());
        let rels = self.relations().iter().map(|r| r.change_field(&ring)).collect::<Result<Vec<_>>>()?;
        FpAlgebra::from_relations(&ring, rels)
    }

    /// Every element of a finite algebra over a prime field, as normal forms
    /// enumerated by coefficient vectors on the standard monomials.
    pub fn elements(&self, cap: u64) -> Result<Vec<MultiPoly>> {
        let basis = self
            .ideal
            .standard_monomials()
            .ok_or_else(|| Error::CapExceeded("algebra is infinite-dimensional".into()))?;
        self.span(&basis, cap)
    }

    /// Normal forms supported on standard monomials of degree at most `deg`;
    /// every element when the algebra is finite and `deg` is large enough.
    pub fn elements_up_to_degree(&self, deg: u32, cap: u64) -> Result<Vec<MultiPoly>> {
        self.span(&self.ideal.standard_monomials_up_to(deg), cap)
    }

    fn span(&self, basis: &[Monomial], cap: u64) -> Result<Vec<MultiPoly>> {
        let q = self
            .field()
            .size()
            .ok_or_else(|| Error::InvalidInput("element enumeration needs a finite field".into()))?;
        let count = checked_pow(q, basis.len()).filter(|&c| c <= cap).ok_or_else(|| {
            Error::CapExceeded(format!("{q}^{} elements exceed the cap {cap}", basis.len()))
        })?;
        let ring = self.ring();
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut rest = idx;
            let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
            for m in basis {
                let digit = rest % q;
                rest /= q;
                terms.push((m.clone(), self.field().from_i64(digit as i64)));
            }
            out.push(MultiPoly::from_terms(ring, terms));
        }
        Ok(out)
    }
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

impl fmt::Display for FpAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations().iter().map(|r| r.to_string()).collect();
        write!(f, "{}[{}]/({})", self.field(), self.names().join(", "), rels.join(", "))
    }
}

/// A verified algebra homomorphism, given by the images of the source
/// generators.
#[derive(Clone, Debug)]
pub struct AlgHom {
    source: FpAlgebra,
    target: FpAlgebra,
    images: Vec<MultiPoly>,
}

impl AlgHom {
    /// Checks that every source relation maps into the target ideal.
    pub fn new(source: &FpAlgebra, target: &FpAlgebra, images: Vec<MultiPoly>) -> Result<AlgHom> {
        if images.len() != source.ngens() {
            return Err(Error::Arity { expected: source.ngens(), got: images.len() });
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", source.field(), target.field())));
        }
        let images = images.iter().map(|g| target.reduce(g)).collect::<Result<Vec<_>>>()?;
        for (index, rel) in source.relations().iter().enumerate() {
            let image = rel.substitute(&images, target.ring())?;
            if !target.ideal().contains(&image)? {
                return Err(Error::WellDefinednessFailure {
                    index,
                    relation: rel.to_string(),
                    image: target.reduce(&image)?.to_string(),
                });
            }
        }
        Ok(AlgHom { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(a: &FpAlgebra) -> AlgHom {
        let images = (0..a.ngens()).map(|i| a.reduce(&a.gen(i)).expect("same ring")).collect();
        AlgHom { source: a.clone(), target: a.clone(), images }
    }

    pub fn source(&self) -> &FpAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FpAlgebra {
        &self.target
    }

    /// Images of the source generators, in target normal form.
    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    /// Image of an element of the source (given by any representative).
    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.source.ring().check_ambient(f.ring())?;
        self.target.reduce(&f.substitute(&self.images, self.target.ring())?)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &AlgHom) -> Result<AlgHom> {
        if self.target != next.source {
            return Err(Error::AmbientMismatch("composition of non-composable homomorphisms".into()));
        }
        let images = self.images.iter().map(|g| next.apply(g)).collect::<Result<Vec<_>>>()?;
        Ok(AlgHom { source: self.source.clone(), target: next.target.clone(), images })
    }

    /// Pulls a point of the target back to a point of the source.
    pub fn spec_map(&self, point: &RationalPoint) -> Result<RationalPoint> {
        let coords = self.images.iter().map(|g| g.evaluate(&point.0)).collect::<Result<Vec<_>>>()?;
        Ok(RationalPoint(coords))
    }
}

impl PartialEq for AlgHom {
    /// Structural equality of generator images after reduction.
    fn eq(&self, other: &AlgHom) -> bool {
        self.source == other.source && self.target == other.target && self.images == other.images
    }
}

/// The unique map `k[x]/(xi) → target` sending `x` to `solution`.
pub fn induced_hom(xi: &Presentation, target: &FpAlgebra, solution: Vec<MultiPoly>) -> Result<AlgHom> {
    let source = FpAlgebra::new(xi.clone());
    AlgHom::new(&source, target, solution).map_err(|e| match e {
        Error::WellDefinednessFailure { index, relation, .. } => Error::SolutionInvalid { index, relation },
        other => other,
    })
}

/// A point of `Spec A` over a finite field: coordinates solving every relation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint(pub Vec<Scalar>);

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// All `F_q`-points of `A`, sorted lexicographically.
pub fn spec_points(a: &FpAlgebra, cap: u64) -> Result<Vec<RationalPoint>> {
    let field = a.field();
    let q = field.size().ok_or_else(|| Error::InvalidInput("point enumeration needs a prime field".into()))?;
    let n = a.ngens();
    let total = checked_pow(q, n)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::CapExceeded(format!("{q}^{n} points exceed the cap {cap}")))?;
    if a.is_trivial() {
        return Ok(Vec::new());
    }
    let rels = a.relations();
    let decode = |idx: u64| -> Vec<Scalar> {
        // most significant digit first gives lexicographic order
        let mut coords = vec![field.zero(); n];
        let mut rest = idx;
        for c in coords.iter_mut().rev() {
            *c = field.from_i64((rest % q) as i64);
            rest /= q;
        }
        coords
    };
    let points: Vec<RationalPoint> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let coords = decode(idx);
            rels.iter().all(|r| r.evaluate(&coords).map(|v| v.is_zero()).unwrap_or(false)).then_some(RationalPoint(coords))
        })
        .collect();
    Ok(points)
}

/// `A ⊗ B` (over the base field or over `C`) with its two inclusions.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub algebra: FpAlgebra,
    pub left: AlgHom,
    pub right: AlgHom,
}

/// Maps from a common source into the two factors of a fiber product.
pub struct FiberBase<'a> {
    pub base: &'a FpAlgebra,
    pub to_left: &'a AlgHom,
    pub to_right: &'a AlgHom,
}

/// Disjoint union of generators and relations; over `C` one extra relation
/// `f(c) - g(c)` per generator of `C`.
pub fn tensor(a: &FpAlgebra, b: &FpAlgebra, over: Option<FiberBase<'_>>) -> Result<TensorProduct> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.field(), b.field())));
    }
    let mut vars: Vec<String> = a.names().to_vec();
    for name in b.names() {
        let mut fresh = name.clone();
        while vars.contains(&fresh) {
            fresh.push('\'');
        }
        vars.push(fresh);
    }
    let ring = Ring::new(a.field(), vars);
    let left_map: Vec<usize> = (0..a.ngens()).collect();
    let right_map: Vec<usize> = (a.ngens()..a.ngens() + b.ngens()).collect();
    let mut rels: Vec<MultiPoly> = a.relations().iter().map(|r| r.embed(&ring, &left_map)).collect();
    rels.extend(b.relations().iter().map(|r| r.embed(&ring, &right_map)));
    if let Some(FiberBase { base, to_left, to_right }) = &over {
        if to_left.source() != *base || to_right.source() != *base || to_left.target() != a || to_right.target() != b {
            return Err(Error::AmbientMismatch("fiber product maps do not match the factors".into()));
        }
        for (fl, gr) in to_left.images().iter().zip(to_right.images()) {
            rels.push(&fl.embed(&ring, &left_map) - &gr.embed(&ring, &right_map));
        }
    }
    let algebra = FpAlgebra::from_relations(&ring, rels)?;
    let left = AlgHom::new(a, &algebra, (0..a.ngens()).map(|i| MultiPoly::var(&ring, i)).collect())?;
    let right = AlgHom::new(b, &algebra, right_map.iter().map(|&i| MultiPoly::var(&ring, i)).collect())?;
    Ok(TensorProduct { algebra, left, right })
}

/// `A_f = A[Y]/(Y f - 1)` with the canonical map `A → A_f`.
pub fn localize(a: &FpAlgebra, f: &MultiPoly) -> Result<(FpAlgebra, AlgHom)> {
    a.ring().check_ambient(f.ring())?;
    let mut vars = a.names().to_vec();
    vars.push(a.ring().fresh_name("Y"));
    let ring = Ring::new(a.field(), vars);
    let map: Vec<usize> = (0..a.ngens()).collect();
    let mut rels: Vec<MultiPoly> = a.relations().iter().map(|r| r.embed(&ring, &map)).collect();
    let y = MultiPoly::var(&ring, a.ngens());
    rels.push(&(&y * &f.embed(&ring, &map)) - &MultiPoly::one(&ring));
    let af = FpAlgebra::from_relations(&ring, rels)?;
    let canonical = AlgHom::new(a, &af, map.iter().map(|&i| MultiPoly::var(&ring, i)).collect())?;
    Ok((af, canonical))
}

/// Degree bound on checked elements when `L_xi` is infinite.
pub const SQC_DEGREE_BOUND: u32 = 2;

/// Outcome of the external roundtrip check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqcReport {
    /// Elements `u` of `L_xi` checked.
    pub elements: usize,
    /// Set when `L_xi` is infinite and only elements up to this degree were checked.
    pub degree_bound: Option<u32>,
    /// Pairs `(f: L → M, s)` in the test family.
    pub test_points: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SqcReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `L_xi = L[X]/(q)` together with `ι: L → L_xi`.
struct Extension {
    algebra: FpAlgebra,
    iota: AlgHom,
    stage_gens: usize,
}

fn extend_stage(stage: &FpAlgebra, xi: &Presentation) -> Result<Extension> {
    if stage.field() != xi.ring().field() {
        return Err(Error::FieldMismatch(format!("stage over {} vs presentation over {}", stage.field(), xi.ring().field())));
    }
    let t = tensor(stage, &FpAlgebra::new(xi.clone()), None)?;
    Ok(Extension { iota: t.left, stage_gens: stage.ngens(), algebra: t.algebra })
}

/// All homomorphisms between finite algebras, by enumerating generator images.
pub fn enumerate_homs(source: &FpAlgebra, target: &FpAlgebra, cap: u64) -> Result<Vec<AlgHom>> {
    let elems = target.elements(cap)?;
    let count = checked_pow(elems.len() as u64, source.ngens())
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::CapExceeded(format!("{}^{} candidate homomorphisms", elems.len(), source.ngens())))?;
    let mut out = Vec::new();
    for idx in 0..count {
        let mut rest = idx;
        let mut images = Vec::with_capacity(source.ngens());
        for _ in 0..source.ngens() {
            images.push(elems[(rest % elems.len() as u64) as usize].clone());
            rest /= elems.len() as u64;
        }
        if let Ok(h) = AlgHom::new(source, target, images) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Solutions in `M^n` of the presentation's relations.
fn solutions(xi: &Presentation, target: &FpAlgebra, cap: u64) -> Result<Vec<Vec<MultiPoly>>> {
    let elems = target.elements(cap)?;
    let n = xi.n();
    let count = checked_pow(elems.len() as u64, n)
        .filter(|&c| c <= cap)
        .ok_or_else(|| Error::CapExceeded(format!("{}^{n} candidate solutions", elems.len())))?;
    let mut out = Vec::new();
    for idx in 0..count {
        let mut rest = idx;
        let mut s = Vec::with_capacity(n);
        for _ in 0..n {
            s.push(elems[(rest % elems.len() as u64) as usize].clone());
            rest /= elems.len() as u64;
        }
        let ok = xi
            .relations()
            .iter()
            .map(|r| target.ideal().contains(&r.substitute(&s, target.ring())?))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if ok {
            out.push(s);
        }
    }
    Ok(out)
}

/// The unique `i(f, s): L_xi → M` with `i(f,s) ∘ ι = f` and `i(f,s)(X) = s`.
fn induced_from_stage(ext: &Extension, f: &AlgHom, s: &[MultiPoly]) -> Result<AlgHom> {
    let mut images = f.images().to_vec();
    images.extend(s.iter().cloned());
    AlgHom::new(&ext.algebra, f.target(), images)
}

/// Checks `ψ(φ u) = u` for every element `u` of `L_xi`, and
/// `(φ(ψ l))_{f,s} = l_{f,s}` together with the uniformity condition
/// `g(l_{f,s}) = l_{g∘f, g s}` for `l = φ u`, over every `(f, s)` with `f`
/// ranging over homomorphisms from the stage into the given family.
pub fn sqc_roundtrip(xi: &Presentation, stage: &FpAlgebra, family: &[FpAlgebra], cap: u64) -> Result<SqcReport> {
    let ext = extend_stage(stage, xi)?;
    let degree_bound = match ext.algebra.k_dimension() {
        KDim::Finite(_) => None,
        KDim::Infinite => Some(SQC_DEGREE_BOUND),
    };
    let elements = match degree_bound {
        None => ext.algebra.elements(cap)?,
        Some(d) => ext.algebra.elements_up_to_degree(d, cap)?,
    };
    let s_xi: Vec<MultiPoly> =
        (0..xi.n()).map(|i| MultiPoly::var(ext.algebra.ring(), ext.stage_gens + i)).collect();
    let i_id = induced_from_stage(&ext, &ext.iota, &s_xi)?;

    let mut report = SqcReport { elements: elements.len(), degree_bound, test_points: 0, checks: 0, failures: Vec::new() };
    if i_id != AlgHom::identity(&ext.algebra) {
        report.failures.push("i(ι, s_ξ) is not the identity".into());
    }

    // test family: (M, f, s, i(f,s))
    let mut points: Vec<(usize, AlgHom, Vec<MultiPoly>, AlgHom)> = Vec::new();
    for (k, m) in family.iter().enumerate() {
        for f in enumerate_homs(stage, m, cap)? {
            for s in solutions(xi, m, cap)? {
                let i_fs = induced_from_stage(&ext, &f, &s)?;
                points.push((k, f.clone(), s, i_fs));
            }
        }
    }
    report.test_points = points.len();

    // homomorphisms between family members, for uniformity
    let mut transport: Vec<(usize, usize, AlgHom)> = Vec::new();
    for (a, ma) in family.iter().enumerate() {
        for (b, mb) in family.iter().enumerate() {
            for g in enumerate_homs(ma, mb, cap)? {
                transport.push((a, b, g));
            }
        }
    }

    for u in &elements {
        // ψ(φ u) = (φ u)_{ι, s_ξ}
        let psi_phi = i_id.apply(u)?;
        report.checks += 1;
        if psi_phi != *u {
            report.failures.push(format!("ψ(φ {u}) = {psi_phi}"));
        }
        for (k, f, s, i_fs) in &points {
            let l_fs = i_fs.apply(u)?;
            let again = i_fs.apply(&psi_phi)?;
            report.checks += 1;
            if again != l_fs {
                report.failures.push(format!("(φ ψ φ {u}) differs at stage {k}"));
            }
            for (_, b, g) in transport.iter().filter(|(a, _, _)| a == k) {
                let gf = f.then(g)?;
                let gs = s.iter().map(|x| g.apply(x)).collect::<Result<Vec<_>>>()?;
                let moved = induced_from_stage(&ext, &gf, &gs)?.apply(u)?;
                report.checks += 1;
                if g.apply(&l_fs)? != moved {
                    report.failures.push(format!("uniformity fails for {u} from stage {k} to {b}"));
                }
            }
        }
    }
    Ok(report)
}
