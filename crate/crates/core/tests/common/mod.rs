#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zk_core::cech::Matrix;
use zk_core::poly::parse::parse_poly;
use zk_core::{Field, Monomial, MultiPoly, Ring, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly(s: &str, ring: &Arc<Ring>) -> MultiPoly {
    parse_poly(s, ring).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Exponent vectors of total degree exactly `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

fn random_coeff(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-4i64..=4);
    }
    field.from_i64(c)
}

/// Up to `terms` random terms drawn from `support`.
pub fn random_from(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, support: &[Vec<u32>], terms: usize) -> MultiPoly {
    let mut out = MultiPoly::zero(ring);
    for _ in 0..terms {
        let m = Monomial::new(support[rng.gen_range(0..support.len())].clone());
        out = &out + &MultiPoly::term(ring, m, random_coeff(rng, ring.field()));
    }
    out
}

pub fn random_poly(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, max_deg: u32, terms: usize) -> MultiPoly {
    random_from(rng, ring, &monomials_up_to(ring.nvars(), max_deg), terms)
}

pub fn random_homogeneous(rng: &mut ChaCha8Rng, ring: &Arc<Ring>, deg: u32, terms: usize) -> MultiPoly {
    random_from(rng, ring, &monomials_of_degree(ring.nvars(), deg), terms)
}

/// Membership by linear algebra: is `f` in the span of `m·g` over the
/// monomials `m` with `deg(m·g) <= bound`? Exact for homogeneous inputs when
/// `bound = deg f`; sufficient (never wrongly positive) in general.
pub fn macaulay_member(f: &MultiPoly, gens: &[MultiPoly], bound: u32) -> bool {
    let ring = f.ring();
    let n = ring.nvars();
    let cols = monomials_up_to(n, bound);
    let index = |e: &[u32]| cols.iter().position(|c| c.as_slice() == e);
    let row_of = |p: &MultiPoly| -> Option<Vec<Scalar>> {
        let mut row = vec![ring.field().zero(); cols.len()];
        for (m, c) in p.terms() {
            row[index(m.exps())?] = c.clone();
        }
        Some(row)
    };
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let gd = g.total_degree().unwrap();
        if gd > bound {
            continue;
        }
        for m in monomials_up_to(n, bound - gd) {
            let shifted = g.mul_term(&Monomial::new(m), &ring.field().one());
            rows.push(row_of(&shifted).expect("within bound"));
        }
    }
    let Some(target) = row_of(f) else { return false };
    if f.is_zero() {
        return true;
    }
    if rows.is_empty() {
        return false;
    }
    let rank = |rs: &Vec<Vec<Scalar>>| Matrix::from_rows(ring.field(), rs.len(), cols.len(), rs.clone()).unwrap().rank();
    let before = rank(&rows);
    rows.push(target);
    rank(&rows) == before
}

/// `|P^n(F_q)|` by the geometric series.
pub fn projective_count(n: u32, q: u64) -> u64 {
    (q.pow(n + 1) - 1) / (q - 1)
}

pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}
