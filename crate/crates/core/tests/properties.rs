mod common;

use std::sync::Arc;

use proptest::prelude::*;
use zk_core::cech::{cohomology_dims, increasing_tuples, CechCover, Cochain, CochainComplex, Matrix};
use zk_core::cover::{open_contained, StandardOpen};
use zk_core::fpalg::spec_points;
use zk_core::poly::{factor_linear, fraction_eq};
use zk_core::proj::{
    bundle_degree, chart_cover, classify_unit, closed_form_dims, cohomology_pn, enumerate_points, tensor_glue,
    twist_glue, TwistSpec,
};
use zk_core::{AlgHom, Field, FpAlgebra, Ideal, LaurentFraction, LaurentPoly, Monomial, MultiPoly, Ring, Scalar, TermOrder};

use common::{binom, poly, projective_count};

fn q(v: i64) -> Scalar {
    Field::Rationals.from_i64(v)
}

fn ring2() -> Arc<Ring> {
    Ring::new(Field::Rationals, ["x", "y"])
}

fn build(ring: &Arc<Ring>, terms: Vec<(Vec<u32>, i64)>) -> MultiPoly {
    MultiPoly::from_terms(ring, terms.into_iter().map(|(e, c)| (Monomial::new(e), ring.field().from_i64(c))))
}

fn poly_in(ring: Arc<Ring>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let n = ring.nvars();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), -5i64..=5), 0..=max_terms)
        .prop_map(move |t| build(&ring, t))
}

fn nonzero_in(ring: Arc<Ring>, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    poly_in(ring, max_deg, max_terms).prop_filter("nonzero", |f| !f.is_zero())
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (mf, cf) = f.leading_term().unwrap();
    let (mg, cg) = g.leading_term().unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_term(&l.div(mf).unwrap(), &cf.inv().unwrap());
    let b = g.mul_term(&l.div(mg).unwrap(), &cg.inv().unwrap());
    &a - &b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_in(ring2(), 3, 4), b in poly_in(ring2(), 3, 4), c in poly_in(ring2(), 3, 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(a.ring()), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly_in(ring2(), 3, 4), b in poly_in(ring2(), 3, 4), x in -6i64..6, y in -6i64..6) {
        let p = [q(x), q(y)];
        let ea = a.evaluate(&p).unwrap();
        let eb = b.evaluate(&p).unwrap();
        prop_assert_eq!((&a * &b).evaluate(&p).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).evaluate(&p).unwrap(), &ea + &eb);
    }

    #[test]
    fn linear_factors_reconstruct(roots in prop::collection::vec((-5i64..5, 1u32..3), 0..4), unit in 1i64..4, quad in 1i64..4) {
        let r = Ring::new(Field::Rationals, ["X"]);
        // X^2 + quad has no rational root
        let mut f = &poly(&format!("X^2 + {quad}"), &r) * &MultiPoly::from_i64(&r, unit);
        for (a, e) in &roots {
            f = &f * &poly(&format!("X - ({a})"), &r).pow(*e);
        }
        let (var, fac) = factor_linear(&f, 1000).unwrap();
        prop_assert_eq!(fac.expand(var), f.clone());
        for (a, _) in &fac.roots {
            prop_assert!(f.evaluate(std::slice::from_ref(a)).unwrap().is_zero());
        }
        for t in -10..=10 {
            prop_assert!(!fac.cofactor.evaluate(&[q(t)]).unwrap().is_zero());
        }
    }

    #[test]
    fn fraction_equality_is_an_equivalence(m in poly_in(ring2(), 2, 3), k in 0u32..3, s in 0u32..3, t in 0u32..3) {
        let r = ring2();
        let f = poly("x + y + 1", &r);
        let ambient = Ideal::zero(&r);
        let a = LaurentFraction::single(m.clone(), f.clone(), k).unwrap();
        let b = LaurentFraction::single(&m * &f.pow(s), f.clone(), k + s).unwrap();
        let c = LaurentFraction::single(&m * &f.pow(t), f.clone(), k + t).unwrap();
        prop_assert!(fraction_eq(&a, &a, &ambient).unwrap());
        prop_assert_eq!(fraction_eq(&a, &b, &ambient).unwrap(), fraction_eq(&b, &a, &ambient).unwrap());
        prop_assert!(fraction_eq(&a, &b, &ambient).unwrap() && fraction_eq(&b, &c, &ambient).unwrap());
        prop_assert!(fraction_eq(&a, &c, &ambient).unwrap());
        let shifted = LaurentFraction::single(&m + &MultiPoly::one(&r), f, k).unwrap();
        prop_assert!(!fraction_eq(&a, &shifted, &ambient).unwrap());
    }

    #[test]
    fn cochain_boundary_squares_to_zero(seeds in prop::collection::vec((poly_in(ring1(), 2, 2), 0u32..3), 3)) {
        let r = ring1();
        let a = FpAlgebra::polynomial_ring(&r);
        let c = CechCover::new(&a, vec![poly("X", &r), poly("X - 1", &r), poly("X - 2", &r)]).unwrap();
        let mut v = Cochain::zero(&c, 0, 1);
        for (i, (m, e)) in seeds.into_iter().enumerate() {
            v.insert(vec![i], LaurentFraction::single(m, c.base(&[i]), e).unwrap()).unwrap();
        }
        let dv = v.boundary().unwrap();
        prop_assert!(dv.is_cocycle().unwrap());
        prop_assert!(dv.boundary().unwrap().is_zero().unwrap());
    }

    #[test]
    fn bundle_degree_is_additive(a in -20i64..20, b in -20i64..20) {
        let f = Field::Rationals;
        let g = tensor_glue(&twist_glue(f, a), &twist_glue(f, b)).unwrap();
        prop_assert_eq!(bundle_degree(&g), a + b);
        prop_assert_eq!(bundle_degree(&twist_glue(f, a)), a);
    }

    #[test]
    fn monomials_classify(alpha in -9i64..9, n in -12i64..12) {
        prop_assume!(alpha != 0);
        let g = LaurentPoly::monomial(q(alpha), "X", n);
        prop_assert_eq!(classify_unit(&g).unwrap(), (q(alpha), n));
    }

    #[test]
    fn laurent_sums_are_not_units(a in 1i64..9, b in 1i64..9, n in -6i64..6, gap in 1i64..6) {
        let g = LaurentPoly::new(Field::Rationals, "X", [(n, q(a)), (n + gap, q(-b))]);
        prop_assert!(classify_unit(&g).is_err());
    }
}

fn ring1() -> Arc<Ring> {
    Ring::new(Field::Rationals, ["X"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn groebner_bases_are_reduced_and_complete(gens in prop::collection::vec(nonzero_in(ring2(), 3, 3), 1..4)) {
        let r = ring2();
        let ideal = Ideal::new(&r, gens.clone());
        let basis = ideal.basis();
        for g in &gens {
            prop_assert!(ideal.normal_form(g).unwrap().is_zero());
        }
        for (i, a) in basis.iter().enumerate() {
            prop_assert!(a.leading_coeff().unwrap().is_one());
            for (j, b) in basis.iter().enumerate() {
                if i < j {
                    prop_assert!(ideal.normal_form(&s_poly(a, b)).unwrap().is_zero());
                }
                if i != j {
                    let lead = b.leading_monomial().unwrap();
                    prop_assert!(a.terms().iter().all(|(m, _)| !lead.divides(m)));
                }
            }
        }
    }

    #[test]
    fn membership_is_order_independent(gens in prop::collection::vec(nonzero_in(ring2(), 2, 3), 1..3), probe in poly_in(ring2(), 3, 3), h in poly_in(ring2(), 1, 2)) {
        let r = ring2();
        let lex_ring = r.with_order(TermOrder::lex());
        let grevlex = Ideal::new(&r, gens.clone());
        let lex = Ideal::new(&lex_ring, gens.iter().map(|g| g.reorder(&lex_ring)).collect());
        let member = &probe + &(&h * &gens[0]);
        for f in [&probe, &member] {
            prop_assert_eq!(grevlex.contains(f).unwrap(), lex.contains(&f.reorder(&lex_ring)).unwrap());
        }
        prop_assert!(grevlex.contains(&(&h * &gens[0])).unwrap());
        for g in lex.basis() {
            prop_assert!(grevlex.contains(&g.reorder(&r)).unwrap());
        }
    }

    #[test]
    fn products_of_regular_elements_are_regular(f in nonzero_in(ring2(), 2, 3), g in nonzero_in(ring2(), 2, 3)) {
        let r = ring2();
        let ideal = Ideal::new(&r, vec![poly("x^2*y - x", &r), poly("y^3", &r)]);
        if ideal.is_regular(&f).unwrap() && ideal.is_regular(&g).unwrap() {
            prop_assert!(ideal.is_regular(&(&f * &g)).unwrap());
        }
        if ideal.is_regular(&(&f * &g)).unwrap() {
            prop_assert!(ideal.is_regular(&f).unwrap() && ideal.is_regular(&g).unwrap());
        }
    }

    #[test]
    fn open_containment_is_a_preorder(f in nonzero_in(ring2(), 2, 2), g in nonzero_in(ring2(), 2, 2), h in nonzero_in(ring2(), 2, 2)) {
        let r = ring2();
        let a = FpAlgebra::polynomial_ring(&r);
        let d = |p: &MultiPoly| StandardOpen::principal(&a, p.clone()).unwrap();
        prop_assert!(open_contained(&d(&f), &d(&f)).unwrap());
        prop_assert!(open_contained(&d(&(&f * &g)), &d(&f)).unwrap());
        let fg = open_contained(&d(&f), &d(&g)).unwrap();
        let gh = open_contained(&d(&g), &d(&h)).unwrap();
        if fg && gh {
            prop_assert!(open_contained(&d(&f), &d(&h)).unwrap());
        }
    }

    #[test]
    fn spec_is_a_contravariant_functor(ia in poly_in(Ring::new(Field::prime(3).unwrap(), ["b", "c"]), 2, 3),
                                       jb in poly_in(Ring::new(Field::prime(3).unwrap(), ["d"]), 2, 3),
                                       jc in poly_in(Ring::new(Field::prime(3).unwrap(), ["d"]), 2, 3)) {
        let f3 = Field::prime(3).unwrap();
        let a = FpAlgebra::polynomial_ring(&Ring::new(f3, ["a"]));
        let b = FpAlgebra::polynomial_ring(ia.ring());
        let c = FpAlgebra::polynomial_ring(jb.ring());
        let h = AlgHom::new(&a, &b, vec![ia]).unwrap();
        let g = AlgHom::new(&b, &c, vec![jb, jc]).unwrap();
        let hg = h.then(&g).unwrap();
        prop_assert_eq!(AlgHom::identity(&a).then(&h).unwrap(), h.clone());
        prop_assert_eq!(h.then(&AlgHom::identity(&b)).unwrap(), h.clone());
        for p in spec_points(&c, 1000).unwrap() {
            prop_assert_eq!(hg.spec_map(&p).unwrap(), h.spec_map(&g.spec_map(&p).unwrap()).unwrap());
            prop_assert_eq!(AlgHom::identity(&c).spec_map(&p).unwrap(), p.clone());
        }
    }

    #[test]
    fn complex_dims_survive_base_change(h in prop::collection::vec(0usize..3, 3), x in 0usize..3, y in 0usize..3, seed in any::<u64>()) {
        let (complex, expected) = disguised_complex(&h, x, y, seed);
        prop_assert_eq!(cohomology_dims(&complex).unwrap(), expected);
    }
}

/// Cohomology `h` plus `x` acyclic pairs in degrees 0→1 and `y` in 1→2,
/// conjugated by random invertible matrices and a permutation.
fn disguised_complex(h: &[usize], x: usize, y: usize, seed: u64) -> (CochainComplex, Vec<usize>) {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let f = Field::Rationals;
    let dims = [h[0] + x, h[1] + x + y, h[2] + y];
    let mut d0 = Matrix::zeros(f, dims[1], dims[0]);
    for k in 0..x {
        d0.set(h[1] + k, h[0] + k, f.one());
    }
    let mut d1 = Matrix::zeros(f, dims[2], dims[1]);
    for k in 0..y {
        d1.set(h[2] + k, h[1] + x + k, f.one());
    }
    let mut rng = common::rng(seed);
    let mut change = |n: usize| -> (Matrix, Matrix) {
        // unit upper triangular U and a permutation P; returns (P U, (P U)^-1)
        let mut u = Matrix::identity(f, n);
        for i in 0..n {
            for j in i + 1..n {
                u.set(i, j, f.from_i64(rng.gen_range(-3..=3)));
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut p = Matrix::zeros(f, n, n);
        let mut pt = Matrix::zeros(f, n, n);
        for (i, &j) in perm.iter().enumerate() {
            p.set(i, j, f.one());
            pt.set(j, i, f.one());
        }
        let mut uinv = Matrix::identity(f, n);
        for i in (0..n).rev() {
            for j in i + 1..n {
                let mut acc = f.zero();
                for k in i + 1..=j {
                    acc = &acc + &(u.get(i, k) * uinv.get(k, j));
                }
                uinv.set(i, j, -acc);
            }
        }
        (p.mul(&u).unwrap(), uinv.mul(&pt).unwrap())
    };
    let (_, a0inv) = change(dims[0]);
    let (a1, a1inv) = change(dims[1]);
    let (a2, _) = change(dims[2]);
    let m0 = a1.mul(&d0).unwrap().mul(&a0inv).unwrap();
    let m1 = a2.mul(&d1).unwrap().mul(&a1inv).unwrap();
    (CochainComplex::new(f, dims.to_vec(), vec![m0, m1]).unwrap(), h.to_vec())
}

#[test]
fn point_counts_match_the_geometric_series() {
    for p in [2u64, 3, 5, 7] {
        let f = Field::prime(p).unwrap();
        for n in 0..=3usize {
            let pts = enumerate_points(f, n).unwrap();
            assert_eq!(pts.len() as u64, projective_count(n as u32, p), "n = {n}, q = {p}");
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            assert!(pts.iter().all(|x| !chart_cover(x).is_empty()));
        }
    }
}

/// χ(O(d)) on P^n is the polynomial C(d + n, n) in d.
fn euler(n: usize, d: i64) -> i64 {
    let n = n as i64;
    let num: i64 = (1..=n).map(|i| d + i).product();
    num / (1..=n).product::<i64>()
}

#[test]
fn serre_symmetry_and_euler_characteristic() {
    for n in 1..=3usize {
        for d in -7i64..=7 {
            let dims = cohomology_pn(&TwistSpec::new(n, d), 0).unwrap();
            let dual = cohomology_pn(&TwistSpec::new(n, -d - n as i64 - 1), 0).unwrap();
            assert_eq!(dims[0], dual[n], "n = {n}, d = {d}");
            let chi: i64 = dims.iter().enumerate().map(|(q, &h)| if q % 2 == 0 { h as i64 } else { -(h as i64) }).sum();
            assert_eq!(chi, euler(n, d), "n = {n}, d = {d}");
            if d >= 0 {
                assert_eq!(dims[0] as i64, binom(d + n as i64, n as i64));
            }
            assert_eq!(dims, closed_form_dims(&TwistSpec::new(n, d)));
        }
    }
}

#[test]
fn increasing_tuples_count() {
    for n in 0..6 {
        for k in 0..=n {
            assert_eq!(increasing_tuples(n, k).len() as i64, binom(n as i64, k as i64));
        }
    }
}
