//! Buchberger's algorithm with the coprime and chain criteria and normal
//! pair selection.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use crate::poly::{Monomial, MultiPoly, Ring};

/// Full reduction of `f` modulo `basis`. Every basis element must be nonzero
/// and in the same ring as `f`.
pub(crate) fn normal_form(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let ring = f.ring().clone();
    let mut rest = f.clone();
    let mut remainder: Vec<(Monomial, crate::field::Scalar)> = Vec::new();
    while let Some((m, c)) = rest.leading_term().cloned() {
        let reducer = basis.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match reducer {
            Some(g) => {
                let (lm, lc) = g.leading_term().expect("nonzero reducer");
                let q = m.div(lm).expect("divisible");
                let qc = c.checked_div(lc).expect("nonzero leading coefficient");
                rest = rest.sub_scaled(&qc, &q, g);
            }
            None => {
                rest.drop_leading();
                remainder.push((m, c));
            }
        }
    }
    // terms were emitted in decreasing order
    MultiPoly::from_terms(&ring, remainder)
}

fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (mf, cf) = f.leading_term().expect("nonzero");
    let (mg, cg) = g.leading_term().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&l.div(mf).unwrap(), &cf.inv().unwrap());
    let b = g.mul_term(&l.div(mg).unwrap(), &cg.inv().unwrap());
    &a - &b
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced, monic Groebner basis of the ideal generated by `gens` under the
/// order of `ring`. Sorted by decreasing leading monomial.
pub(crate) fn reduced_basis(gens: &[MultiPoly], ring: &Arc<Ring>) -> Vec<MultiPoly> {
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in gens {
        let g = g.reorder(ring);
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return vec![MultiPoly::one(ring)];
        }
        basis.push(g.monic());
    }
    if basis.is_empty() {
        return basis;
    }

    let order = ring.order().clone();
    let mut pending: Vec<Pair> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            let lcm = basis[i].leading_monomial().unwrap().lcm(basis[j].leading_monomial().unwrap());
            pending.push(Pair { i, j, lcm });
            pending_set.insert((i, j));
        }
    }

    while !pending.is_empty() {
        // normal strategy: smallest lcm first
        let best = (0..pending.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pending[a], &pending[b]);
                pa.lcm.degree().cmp(&pb.lcm.degree()).then_with(|| order.cmp(&pa.lcm, &pb.lcm))
            })
            .unwrap();
        let Pair { i, j, lcm } = pending.swap_remove(best);
        pending_set.remove(&(i, j));

        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if li.is_coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&lcm)
                && !pending_set.contains(&(i.min(k), i.max(k)))
                && !pending_set.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![MultiPoly::one(ring)];
        }
        let r = r.monic();
        let n = basis.len();
        let lr = r.leading_monomial().unwrap().clone();
        basis.push(r);
        for k in 0..n {
            let lcm = basis[k].leading_monomial().unwrap().lcm(&lr);
            pending.push(Pair { i: k, j: n, lcm });
            pending_set.insert((k, n));
        }
    }

    interreduce(basis, ring)
}

/// Minimizes and inter-reduces a Groebner basis.
fn interreduce(mut basis: Vec<MultiPoly>, ring: &Arc<Ring>) -> Vec<MultiPoly> {
    let order = ring.order().clone();
    basis.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for g in basis {
        let lm = g.leading_monomial().unwrap();
        if !minimal.iter().any(|h| h.leading_monomial().unwrap().divides(lm)) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<MultiPoly> =
            minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        let (lm, lc) = minimal[k].leading_term().unwrap().clone();
        let tail = &minimal[k] - &MultiPoly::term(ring, lm.clone(), lc.clone());
        let tail = normal_form(&tail, &others);
        let g = &MultiPoly::term(ring, lm, lc) + &tail;
        reduced.push(g.monic());
    }
    reduced.sort_by(|a, b| order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap()).then(Ordering::Equal));
    reduced
}

/// Groebner basis element together with its expression in the original
/// generators.
#[derive(Clone)]
struct Tracked {
    poly: MultiPoly,
    cofactors: Vec<MultiPoly>,
}

impl Tracked {
    fn sub_scaled(&self, c: &crate::field::Scalar, m: &Monomial, other: &Tracked) -> Tracked {
        Tracked {
            poly: self.poly.sub_scaled(c, m, &other.poly),
            cofactors: self.cofactors.iter().zip(&other.cofactors).map(|(a, b)| a.sub_scaled(c, m, b)).collect(),
        }
    }

    fn scale(&self, c: &crate::field::Scalar) -> Tracked {
        Tracked { poly: self.poly.scale(c), cofactors: self.cofactors.iter().map(|a| a.scale(c)).collect() }
    }
}

/// Reduces the leading terms of `f` by `basis` until none is divisible,
/// tracking cofactors; lower terms are reduced too (full reduction).
fn tracked_reduce(f: Tracked, basis: &[Tracked]) -> (Tracked, MultiPoly) {
    let ring = f.poly.ring().clone();
    let mut rest = f;
    let mut remainder: Vec<(Monomial, crate::field::Scalar)> = Vec::new();
    while let Some((m, c)) = rest.poly.leading_term().cloned() {
        match basis.iter().find(|g| g.poly.leading_monomial().unwrap().divides(&m)) {
            Some(g) => {
                let (lm, lc) = g.poly.leading_term().unwrap();
                let q = m.div(lm).unwrap();
                let qc = c.checked_div(lc).unwrap();
                rest = rest.sub_scaled(&qc, &q, g);
            }
            None => {
                rest.poly.drop_leading();
                remainder.push((m, c));
            }
        }
    }
    // rest.poly is now zero; when the input satisfied poly = sum cof*g, the
    // final cofactors express the remainder
    (rest, MultiPoly::from_terms(&ring, remainder))
}

/// Expresses `f` as `sum c_i gens_i`, or `None` when `f` is not in the ideal.
pub(crate) fn lift(f: &MultiPoly, gens: &[MultiPoly], ring: &Arc<Ring>) -> Option<Vec<MultiPoly>> {
    let n = gens.len();
    let f = f.reorder(ring);
    if f.is_zero() {
        return Some(vec![MultiPoly::zero(ring); n]);
    }
    let unit_vec = |k: usize| -> Vec<MultiPoly> {
        (0..n).map(|i| if i == k { MultiPoly::one(ring) } else { MultiPoly::zero(ring) }).collect()
    };
    let mut basis: Vec<Tracked> = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let g = g.reorder(ring);
        if g.is_zero() {
            continue;
        }
        let inv = g.leading_coeff().unwrap().inv().unwrap();
        basis.push(Tracked { poly: g, cofactors: unit_vec(k) }.scale(&inv));
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let order = ring.order().clone();
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let la = basis[pairs[a].0].poly.leading_monomial().unwrap().lcm(basis[pairs[a].1].poly.leading_monomial().unwrap());
                let lb = basis[pairs[b].0].poly.leading_monomial().unwrap().lcm(basis[pairs[b].1].poly.leading_monomial().unwrap());
                la.degree().cmp(&lb.degree()).then_with(|| order.cmp(&la, &lb))
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        let (mi, mj) = (
            basis[i].poly.leading_monomial().unwrap().clone(),
            basis[j].poly.leading_monomial().unwrap().clone(),
        );
        if mi.is_coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let one = ring.field().one();
        let zero_t = Tracked { poly: MultiPoly::zero(ring), cofactors: vec![MultiPoly::zero(ring); n] };
        let a = zero_t.sub_scaled(&-&one, &l.div(&mi).unwrap(), &basis[i]);
        let s = a.sub_scaled(&one, &l.div(&mj).unwrap(), &basis[j]);
        let (reduced, remainder) = tracked_reduce(s, &basis);
        if remainder.is_zero() {
            continue;
        }
        // remainder = s - (s - remainder); cofactors of remainder are those of
        // the original s minus the subtracted multiples, which `reduced`
        // tracks with the remainder terms moved out.
        let rem = Tracked { poly: remainder, cofactors: reduced.cofactors };
        let inv = rem.poly.leading_coeff().unwrap().inv().unwrap();
        let rem = rem.scale(&inv);
        let k = basis.len();
        basis.push(rem);
        for i in 0..k {
            pairs.push((i, k));
        }
    }

    let start = Tracked { poly: f.clone(), cofactors: vec![MultiPoly::zero(ring); n] };
    let (reduced, remainder) = tracked_reduce(start, &basis);
    if !remainder.is_zero() {
        return None;
    }
    // reduced.cofactors c satisfy f - sum c_i g_i = 0 with the sign convention
    // of sub_scaled (f - q g): the subtracted multiples are -c
    Some(reduced.cofactors.iter().map(|c| -c).collect())
}
