use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};
use zk_core::cech::{cohomology_dims, split_h1, CechCover, Cochain, CoprimeSystemCocycle};
use zk_core::cover::{
    closed_contained, decompose_unit_on_intersection, merge_sections, open_contained, patch_ideals,
    trivialize_pointed_cocycle, Check, ClosedSet, FactoredUnit, LocalIdealFamily, PointedCocycle, SectionData,
    StandardOpen,
};
use zk_core::fpalg::{localize, spec_points, sqc_roundtrip, tensor, AlgHom, FiberBase, FpAlgebra, Presentation};
use zk_core::groebner::unimodular_certificate;
use zk_core::poly::parse::parse_laurent;
use zk_core::poly::DEFAULT_SCAN_CAP;
use zk_core::proj::{
    bundle_degree, classify_unit, closed_form_dims, cohomology_pn, p1_glue_cohomology, tensor_glue, twist_glue,
    TwistSpec,
};
use zk_core::wire::{AlgebraDoc, CocycleDoc, ComplexDoc, FamilyDoc, PointedDoc, SectionsDoc, UnitDoc};
use zk_core::{Field, Ideal, KDim, MultiPoly, Ring, Scalar};

use crate::args::*;
use crate::input::{algebra_json, fraction_json, polys_json, Ctx};
use crate::{CliError, Outcome};

type Res = Result<Outcome, CliError>;

pub fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Res {
    match cmd {
        Command::Gb(a) => gb(a, ctx),
        Command::Member(a) => member(a, ctx),
        Command::RadicalMember(a) => radical_member(a, ctx),
        Command::Unimodular(a) => unimodular(a, ctx),
        Command::Kdim(a) => kdim(a, ctx),
        Command::Regular(a) => regular(a, ctx),
        Command::Algebra(AlgebraCmd::New(a)) => algebra_new(a, ctx),
        Command::Algebra(AlgebraCmd::Show(a)) => algebra_show(a, ctx),
        Command::Hom(a) => hom(a, ctx),
        Command::Tensor(a) => tensor_cmd(a, ctx),
        Command::Localize(a) => localize_cmd(a, ctx),
        Command::SpecPoints(a) => spec_points_cmd(a, ctx),
        Command::SqcRoundtrip(a) => sqc(a, ctx),
        Command::OpenContained(a) => contained(a, ctx, true),
        Command::ClosedContained(a) => contained(a, ctx, false),
        Command::PatchIdeals(a) => patch(a, ctx),
        Command::SplitUnit(a) => split_unit(a, ctx),
        Command::MergeSections(a) => merge(a, ctx),
        Command::TrivializeCocycle(a) => trivialize(a, ctx),
        Command::SplitCocycle(a) => split_cocycle(a, ctx),
        Command::CechDims(a) => cech_dims(a, ctx),
        Command::PnCohomology(a) => pn(a, ctx),
        Command::ClassifyUnit(a) => classify(a, ctx),
        Command::Twist(a) => twist(a, ctx),
        Command::Corpus(a) => crate::corpus::run_dir(&a.dir),
    }
}

fn ideal_of(ctx: &mut Ctx, value: &str, ring: &std::sync::Arc<Ring>) -> Result<Ideal, CliError> {
    Ok(Ideal::new(ring, ctx.polys("--ideal", value, ring)?))
}

fn gb(a: &IdealArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--ideal", &a.ideal)])?;
    let ideal = ideal_of(ctx, &a.ideal, &ring)?;
    let basis = ideal.basis().to_vec();
    let mut generated = true;
    for g in ideal.generators() {
        generated &= ideal.contains(g)?;
    }
    let result = json!({ "vars": ring.vars(), "order": ring.order().to_string(), "basis": polys_json(&basis) });
    Ok(Outcome::value(result).with_checks(vec![Check::new("input generators reduce to zero", generated)]))
}

fn member(a: &MemberArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--ideal", &a.ideal), ("--f", &a.f)])?;
    let ideal = ideal_of(ctx, &a.ideal, &ring)?;
    let f = ctx.poly("--f", &a.f, &ring)?;
    let yes = ideal.contains(&f)?;
    let mut out = json!({ "member": yes });
    if yes {
        if let Some(c) = ideal.lift(&f)? {
            out["cofactors"] = polys_json(&c);
        }
    }
    Ok(Outcome::decision(out, yes))
}

fn radical_member(a: &MemberArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--ideal", &a.ideal), ("--f", &a.f)])?;
    let ideal = ideal_of(ctx, &a.ideal, &ring)?;
    let f = ctx.poly("--f", &a.f, &ring)?;
    let yes = ideal.radical_contains(&f)?;
    Ok(Outcome::decision(json!({ "radical_member": yes }), yes))
}

fn unimodular(a: &UnimodularArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--ideal", &a.ideal), ("--fs", &a.fs)])?;
    let ideal = ideal_of(ctx, &a.ideal, &ring)?;
    let fs = ctx.polys("--fs", &a.fs, &ring)?;
    let cert = unimodular_certificate(&fs, &ideal)?;
    let yes = cert.is_some();
    let mut out = json!({ "unimodular": yes });
    let mut checks = Vec::new();
    if let Some(r) = cert {
        let sum = r.iter().zip(&fs).fold(MultiPoly::zero(&ring), |acc, (x, y)| &acc + &(x * y));
        checks.push(Check::new("Σ r_i f_i = 1", ideal.contains(&(&sum - &MultiPoly::one(&ring)))?));
        if a.certificate {
            out["certificate"] = polys_json(&r);
        }
    }
    Ok(Outcome::decision(out, yes).with_checks(checks))
}

fn kdim_json(k: KDim) -> Value {
    match k {
        KDim::Finite(n) => json!(n),
        KDim::Infinite => json!("infinite"),
    }
}

fn kdim(a: &IdealArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--ideal", &a.ideal)])?;
    let ideal = ideal_of(ctx, &a.ideal, &ring)?;
    Ok(Outcome::value(json!({ "k_dimension": kdim_json(ideal.k_dimension()) })))
}

fn regular(a: &MemberArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--ideal", &a.ideal), ("--f", &a.f)])?;
    let ideal = ideal_of(ctx, &a.ideal, &ring)?;
    let f = ctx.poly("--f", &a.f, &ring)?;
    let yes = ideal.is_regular(&f)?;
    Ok(Outcome::decision(json!({ "regular": yes }), yes))
}

fn write_doc(path: &Path, a: &FpAlgebra) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&AlgebraDoc::encode(a)).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| CliError::usage("--out", format!("{}: {e}", path.display())))
}

fn describe(a: &FpAlgebra) -> Value {
    json!({ "algebra": algebra_json(a), "display": a.to_string() })
}

fn algebra_new(a: &AlgebraNewArgs, ctx: &mut Ctx) -> Res {
    let ring = ctx.ring(&[("--relations", &a.relations)])?;
    let rels = ctx.polys("--relations", &a.relations, &ring)?;
    let alg = FpAlgebra::from_relations(&ring, rels)?;
    if let Some(p) = &a.out {
        write_doc(p, &alg)?;
    }
    Ok(Outcome::value(describe(&alg)))
}

fn algebra_show(a: &AlgebraFile, ctx: &mut Ctx) -> Res {
    let alg = ctx.algebra("--algebra", &a.algebra)?;
    let mut out = describe(&alg);
    out["trivial"] = json!(alg.is_trivial());
    out["k_dimension"] = kdim_json(alg.k_dimension());
    Ok(Outcome::value(out))
}

fn hom(a: &HomArgs, ctx: &mut Ctx) -> Res {
    let source = ctx.algebra("--source", &a.source)?;
    let target = ctx.algebra("--target", &a.target)?;
    let images = ctx.polys("--images", &a.images, target.ring())?;
    let h = AlgHom::new(&source, &target, images)?;
    let checks = (0..source.relations().len())
        .map(|i| Check::new(format!("relation {i} maps into the target ideal"), true))
        .collect();
    Ok(Outcome::value(json!({ "well_defined": true, "images": polys_json(h.images()) })).with_checks(checks))
}

fn tensor_cmd(a: &TensorArgs, ctx: &mut Ctx) -> Res {
    let left = ctx.algebra("--left", &a.left)?;
    let right = ctx.algebra("--right", &a.right)?;
    let t = match &a.over {
        Some(over) => {
            let base = ctx.algebra("--over", over)?;
            let li = ctx.polys("--left-images", a.left_images.as_deref().unwrap_or("[]"), left.ring())?;
            let ri = ctx.polys("--right-images", a.right_images.as_deref().unwrap_or("[]"), right.ring())?;
            let to_left = AlgHom::new(&base, &left, li)?;
            let to_right = AlgHom::new(&base, &right, ri)?;
            tensor(&left, &right, Some(FiberBase { base: &base, to_left: &to_left, to_right: &to_right }))?
        }
        None => tensor(&left, &right, None)?,
    };
    if let Some(p) = &a.out {
        write_doc(p, &t.algebra)?;
    }
    let mut out = describe(&t.algebra);
    out["k_dimension"] = kdim_json(t.algebra.k_dimension());
    Ok(Outcome::value(out))
}

fn localize_cmd(a: &LocalizeArgs, ctx: &mut Ctx) -> Res {
    let alg = ctx.algebra("--algebra", &a.algebra)?;
    let f = ctx.poly("--f", &a.f, alg.ring())?;
    let (af, _) = localize(&alg, &f)?;
    if let Some(p) = &a.out {
        write_doc(p, &af)?;
    }
    let mut out = describe(&af);
    out["trivial"] = json!(af.is_trivial());
    Ok(Outcome::value(out))
}

fn on_config_field(alg: FpAlgebra, ctx: &Ctx) -> Result<FpAlgebra, CliError> {
    if ctx.config.field_given && alg.field() != ctx.config.field {
        return Ok(alg.change_field(ctx.config.field)?);
    }
    Ok(alg)
}

fn scalars_json(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(|x| json!(x.to_string())).collect())
}

fn spec_points_cmd(a: &AlgebraFile, ctx: &mut Ctx) -> Res {
    let alg = ctx.algebra("--algebra", &a.algebra)?;
    let alg = on_config_field(alg, ctx)?;
    let pts = spec_points(&alg, ctx.config.cap)?;
    let mut all_solve = true;
    for p in &pts {
        for r in alg.relations() {
            all_solve &= r.evaluate(&p.0)?.is_zero();
        }
    }
    let out = json!({
        "field": alg.field().to_string(),
        "count": pts.len(),
        "points": pts.iter().map(|p| scalars_json(&p.0)).collect::<Vec<_>>(),
    });
    Ok(Outcome::value(out).with_checks(vec![Check::new("every point solves the relations", all_solve)]))
}

fn sqc(a: &SqcArgs, ctx: &mut Ctx) -> Res {
    let xi = match (&a.algebra, &a.relations) {
        (Some(doc), _) => on_config_field(ctx.algebra("--algebra", doc)?, ctx)?,
        (None, Some(rels)) => {
            let ring = ctx.ring(&[("--relations", rels)])?;
            let rels = ctx.polys("--relations", rels, &ring)?;
            FpAlgebra::from_relations(&ring, rels)?
        }
        (None, None) => return Err(CliError::usage("--relations", "either --algebra or --relations is required")),
    };
    let field = xi.field();
    let stage = match &a.stage {
        Some(doc) => on_config_field(ctx.algebra("--stage", doc)?, ctx)?,
        None => FpAlgebra::base(field),
    };
    let family = if a.family.is_empty() {
        let t = Ring::new(field, ["t"]);
        let dual = FpAlgebra::from_relations(&t, vec![MultiPoly::var(&t, 0).pow(2)])?;
        vec![FpAlgebra::base(field), dual]
    } else {
        a.family
            .iter()
            .map(|d| ctx.algebra("--family", d).and_then(|x| on_config_field(x, ctx)))
            .collect::<Result<Vec<_>, _>>()?
    };
    let pres = Presentation::new(xi.ring(), xi.relations().to_vec())?;
    let report = sqc_roundtrip(&pres, &stage, &family, ctx.config.cap)?;
    let out = json!({
        "presentation": xi.to_string(),
        "stage": stage.to_string(),
        "family": family.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "elements": report.elements,
        "degree_bound": report.degree_bound,
        "test_points": report.test_points,
        "checks": report.checks,
        "failures": report.failures,
        "passed": report.passed(),
    });
    Ok(Outcome::decision(out, report.passed()))
}

fn contained(a: &ContainArgs, ctx: &mut Ctx, open: bool) -> Res {
    let ambient = match &a.ambient {
        Some(doc) => ctx.algebra("--ambient", doc)?,
        None => FpAlgebra::polynomial_ring(&ctx.ring(&[("--f", &a.f), ("--g", &a.g)])?),
    };
    let f = ctx.polys("--f", &a.f, ambient.ring())?;
    let g = ctx.polys("--g", &a.g, ambient.ring())?;
    let yes = if open {
        open_contained(&StandardOpen::new(&ambient, f)?, &StandardOpen::new(&ambient, g)?)?
    } else {
        closed_contained(&ClosedSet::new(&ambient, f)?, &ClosedSet::new(&ambient, g)?)?
    };
    Ok(Outcome::decision(json!({ "contained": yes }), yes))
}

fn patch(a: &FamilyArg, ctx: &mut Ctx) -> Res {
    let doc: FamilyDoc = ctx.doc("--family", &a.family)?;
    let fam = doc.decode(ctx.config.field).map_err(|e| CliError::usage("--family", e))?;
    let fam = LocalIdealFamily::new(&fam.ambient, fam.cover, fam.locals)?;
    let out = patch_ideals(&fam, ctx.config.sat_bound)?;
    let result = json!({
        "vars": fam.ambient().names(),
        "ideal": polys_json(out.ideal.generators()),
        "exponents": out.exponents,
    });
    Ok(Outcome::value(result).with_checks(out.verification))
}

fn scalar_list(flag: &str, s: &str, field: Field) -> Result<Vec<Scalar>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| field.parse_scalar(x).map_err(|e| CliError::usage(flag, e)))
        .collect()
}

fn unit_json(u: &FactoredUnit) -> Value {
    let mut v = serde_json::to_value(UnitDoc::encode(u)).expect("serializable");
    v["display"] = json!(u.to_string());
    v
}

fn split_unit(a: &SplitUnitArgs, ctx: &mut Ctx) -> Res {
    let field = ctx.config.field;
    let f = match (&a.unit, &a.num) {
        (Some(doc), _) => {
            let d: UnitDoc = ctx.doc("--unit", doc)?;
            d.decode(field).map_err(|e| CliError::usage("--unit", e))?
        }
        (None, Some(num)) => {
            let ring = ctx.ring(&[("--num", num), ("--den", &a.den)])?;
            if ring.nvars() > 1 {
                return Err(CliError::usage("--num", "expected a polynomial in one variable"));
            }
            let num = ctx.poly("--num", num, &ring)?;
            let den = ctx.poly("--den", &a.den, &ring)?;
            FactoredUnit::from_fraction(&num, &den, DEFAULT_SCAN_CAP)?
        }
        (None, None) => return Err(CliError::usage("--unit", "either --unit or --num is required")),
    };
    let shared = scalar_list("--shared", &a.shared, field)?;
    let u_only = scalar_list("--u-only", &a.u_only, field)?;
    let v_only = scalar_list("--v-only", &a.v_only, field)?;
    let (g, h) = decompose_unit_on_intersection(&shared, &u_only, &v_only, &f)?;
    let u_side: Vec<&Scalar> = shared.iter().chain(&u_only).collect();
    let v_side: Vec<&Scalar> = shared.iter().chain(&v_only).collect();
    let checks = vec![
        Check::new("g·h = f", g.mul(&h) == f),
        Check::new("g is invertible on U", g.roots().keys().all(|r| u_side.contains(&r))),
        Check::new("h is invertible on V", h.roots().keys().all(|r| v_side.contains(&r))),
    ];
    Ok(Outcome::value(json!({ "f": unit_json(&f), "g": unit_json(&g), "h": unit_json(&h) })).with_checks(checks))
}

fn merge(a: &SectionsArg, ctx: &mut Ctx) -> Res {
    let doc: SectionsDoc = ctx.doc("--sections", &a.sections)?;
    let input = doc.decode(ctx.config.field).map_err(|e| CliError::usage("--sections", e))?;
    let data = SectionData::new(input.field, input.pieces, input.transitions)?;
    let out = merge_sections(&data)?;
    let support: Vec<String> = out.support.iter().map(|s| s.to_string()).collect();
    let result = json!({
        "support": support,
        "corrections": out.corrections.iter().map(unit_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::value(result).with_checks(out.verification))
}

fn trivialize(a: &CocycleArg, ctx: &mut Ctx) -> Res {
    let doc: PointedDoc = ctx.doc("--cocycle", &a.cocycle)?;
    let input = doc.decode(ctx.config.field).map_err(|e| CliError::usage("--cocycle", e))?;
    let c = PointedCocycle::new(input.field, input.size, input.dim, input.base, &input.c)?;
    let u = trivialize_pointed_cocycle(&c);
    let mut ok = true;
    for i in 0..c.size() {
        for j in 0..c.size() {
            let diff: Vec<Scalar> = u[i].iter().zip(&u[j]).map(|(x, y)| x - y).collect();
            ok &= diff == c.value(i, j);
        }
    }
    let result = json!({ "u": u.iter().map(|v| scalars_json(v)).collect::<Vec<_>>() });
    Ok(Outcome::value(result).with_checks(vec![Check::new("u_i - u_j = c_ij for all i, j", ok)]))
}

fn split_cocycle(a: &CocycleArg, ctx: &mut Ctx) -> Res {
    let doc: CocycleDoc = ctx.doc("--cocycle", &a.cocycle)?;
    let input = doc.decode(ctx.config.field).map_err(|e| CliError::usage("--cocycle", e))?;
    let cover = CechCover::new(&input.ambient, input.cover)?;
    let mut values = BTreeMap::new();
    for ((i, j), v) in input.s {
        let (key, v) = if i < j { (vec![i, j], v) } else { (vec![j, i], v.neg()) };
        values.insert(key, v);
    }
    let s = Cochain::new(&cover, 1, input.rank, values)?;
    let z = CoprimeSystemCocycle::new(s, input.witness)?;
    let out = split_h1(&z)?;
    let u: Vec<Value> = (0..cover.len()).map(|i| fraction_json(&out.u.value(&[i]))).collect();
    let result = json!({
        "vars": input.ambient.names(),
        "witness": polys_json(z.witness()),
        "u": u,
    });
    Ok(Outcome::value(result).with_checks(out.verification))
}

fn cech_dims(a: &ComplexArg, ctx: &mut Ctx) -> Res {
    let doc: ComplexDoc = ctx.doc("--complex", &a.complex)?;
    let complex = doc.decode(ctx.config.field).map_err(|e| CliError::usage("--complex", e))?;
    let dims = cohomology_dims(&complex)?;
    Ok(Outcome::value(json!({ "dims": dims })).with_checks(vec![Check::new("consecutive maps compose to zero", true)]))
}

fn pn_row(n: usize, d: i64, ctx: &Ctx, checks: &mut Vec<Check>) -> Result<Value, CliError> {
    let spec = TwistSpec { n, d, field: Field::Rationals };
    let dims = cohomology_pn(&spec, ctx.config.margin)?;
    let oracle = closed_form_dims(&spec);
    let matched = dims == oracle;
    checks.push(Check::new(format!("d = {d}: window margin {} agrees with {}", ctx.config.margin, ctx.config.margin + 1), true));
    checks.push(Check::new(format!("d = {d}: closed form"), matched));
    if n == 1 {
        let glue = p1_glue_cohomology(&twist_glue(Field::Rationals, d), Field::Rationals)?;
        checks.push(Check::new(format!("d = {d}: two-chart glue complex"), glue == dims));
    }
    Ok(json!({ "d": d, "dims": dims, "oracle": oracle, "match": matched }))
}

fn pn(a: &PnArgs, ctx: &mut Ctx) -> Res {
    let mut checks = Vec::new();
    match (&a.table, a.d) {
        (Some(range), _) => {
            let bad = || CliError::usage("--table", format!("{range:?} is not of the form dmin..dmax"));
            let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            let rows = (lo..=hi).map(|d| pn_row(a.n, d, ctx, &mut checks)).collect::<Result<Vec<_>, _>>()?;
            let all = rows.iter().all(|r| r["match"] == json!(true));
            Ok(Outcome::value(json!({ "n": a.n, "table": rows, "match": all })).with_checks(checks))
        }
        (None, Some(d)) => {
            let mut row = pn_row(a.n, d, ctx, &mut checks)?;
            row["n"] = json!(a.n);
            Ok(Outcome::value(row).with_checks(checks))
        }
        (None, None) => Err(CliError::usage("--d", "required without --table")),
    }
}

fn classify(a: &UnitArgs, ctx: &mut Ctx) -> Res {
    let text = ctx.text("--g", &a.g)?;
    let g = parse_laurent(&text, ctx.config.field, &a.var).map_err(|e| CliError::usage("--g", e))?;
    let (alpha, n) = classify_unit(&g)?;
    Ok(Outcome::value(json!({ "alpha": alpha.to_string(), "n": n })))
}

fn twist(a: &TwistArgs, ctx: &mut Ctx) -> Res {
    let field = ctx.config.field;
    let mut g = twist_glue(field, a.d);
    for &k in &a.tensor {
        g = tensor_glue(&g, &twist_glue(field, k))?;
    }
    let (alpha, n) = classify_unit(g.unit())?;
    let degree = bundle_degree(&g);
    let expected = a.d + a.tensor.iter().sum::<i64>();
    let result = json!({ "unit": g.to_string(), "alpha": alpha.to_string(), "n": n, "degree": degree });
    Ok(Outcome::value(result).with_checks(vec![Check::new("degree is additive under tensor", degree == expected)]))
}
