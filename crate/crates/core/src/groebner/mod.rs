//! Ideals with cached reduced Groebner bases, and the decision procedures
//! built on them: membership, containment, saturation, ideal quotients,
//! radical membership, unimodularity, finite k-dimension and regularity.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, Ring, TermOrder};

mod buchberger;

pub(crate) use buchberger::normal_form;

/// An ideal of a polynomial ring. The reduced basis is computed on first use
/// under the ring's term order and cached.
#[derive(Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<MultiPoly>,
    basis: OnceLock<Vec<MultiPoly>>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "Ideal({})", gens.join(", "))
    }
}

/// Vector-space dimension of a quotient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KDim {
    Finite(u64),
    Infinite,
}

impl fmt::Display for KDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KDim::Finite(n) => write!(f, "{n}"),
            KDim::Infinite => write!(f, "infinite"),
        }
    }
}

impl Ideal {
    /// Panics if a generator lives in a different ambient; use
    /// [`Ideal::try_new`] for unchecked input.
    pub fn new(ring: &Arc<Ring>, generators: Vec<MultiPoly>) -> Ideal {
        Ideal::try_new(ring, generators).expect("generators share the ideal's ambient")
    }

    pub fn try_new(ring: &Arc<Ring>, generators: Vec<MultiPoly>) -> Result<Ideal> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            ring.check_ambient(g.ring())?;
            gens.push(g.reorder(ring));
        }
        Ok(Ideal { ring: ring.clone(), generators: gens, basis: OnceLock::new() })
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![MultiPoly::one(ring)])
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// The same ideal with its basis computed under `order`.
    pub fn buchberger(&self, order: TermOrder) -> Ideal {
        let ring = self.ring.with_order(order);
        let out = Ideal::new(&ring, self.generators.clone());
        out.basis();
        out
    }

    /// Reduced monic Groebner basis under the ring's order.
    pub fn basis(&self) -> &[MultiPoly] {
        self.basis.get_or_init(|| buchberger::reduced_basis(&self.generators, &self.ring))
    }

    pub fn is_basis_cached(&self) -> bool {
        self.basis.get().is_some()
    }

    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.ring.check_ambient(f.ring())?;
        Ok(normal_form(&f.reorder(&self.ring), self.basis()))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        self.ring.check_ambient(&other.ring)?;
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self) -> bool {
        self.basis().first().is_some_and(|g| g.is_constant())
    }

    /// `self + (extra)`.
    pub fn extend(&self, extra: &[MultiPoly]) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        Ideal::try_new(&self.ring, gens)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_ambient(&other.ring)?;
        self.extend(&other.generators)
    }

    /// `(self : f^inf)` via the Rabinowitsch construction: eliminate a fresh
    /// variable `T` from `self + (1 - T f)`.
    pub fn saturation(&self, f: &MultiPoly) -> Result<Ideal> {
        self.ring.check_ambient(f.ring())?;
        if f.is_zero() {
            return Err(Error::InvalidInput("saturation by the zero polynomial".into()));
        }
        if f.is_constant() {
            return Ok(self.clone());
        }
        let (ext, t) = self.with_fresh_var("T");
        let mut gens: Vec<MultiPoly> = self.generators.iter().map(|g| shift(g, &ext)).collect();
        gens.push(&MultiPoly::one(&ext) - &(&t * &shift(f, &ext)));
        Ok(eliminate_first(&gens, &ext, &self.ring))
    }

    /// Ideal quotient `(self : f)`, via `self ∩ (f)` divided by `f`.
    pub fn quotient(&self, f: &MultiPoly) -> Result<Ideal> {
        self.ring.check_ambient(f.ring())?;
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let principal = Ideal::new(&self.ring, vec![f.clone()]);
        let meet = self.intersection(&principal)?;
        let gens = meet
            .basis()
            .iter()
            .map(|h| h.exact_div(&f.reorder(&self.ring)).expect("elements of (f) are divisible by f"))
            .collect();
        Ok(Ideal::new(&self.ring, gens))
    }

    /// `self ∩ other` by eliminating `t` from `t·self + (1 - t)·other`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_ambient(&other.ring)?;
        let (ext, t) = self.with_fresh_var("t");
        let one_minus_t = &MultiPoly::one(&ext) - &t;
        let mut gens: Vec<MultiPoly> = self.generators.iter().map(|g| &t * &shift(g, &ext)).collect();
        gens.extend(other.generators.iter().map(|g| &one_minus_t * &shift(g, &ext)));
        Ok(eliminate_first(&gens, &ext, &self.ring))
    }

    /// `f ∈ √self` iff `1 ∈ self + (1 - T f)`.
    pub fn radical_contains(&self, f: &MultiPoly) -> Result<bool> {
        self.ring.check_ambient(f.ring())?;
        let (ext, t) = self.with_fresh_var("T");
        let mut gens: Vec<MultiPoly> = self.generators.iter().map(|g| shift(g, &ext)).collect();
        gens.push(&MultiPoly::one(&ext) - &(&t * &shift(f, &ext)));
        Ok(Ideal::new(&ext, gens).is_unit())
    }

    /// Whether multiplication by `f` is injective on the quotient ring,
    /// i.e. `(self : f) ⊆ self`.
    pub fn is_regular(&self, f: &MultiPoly) -> Result<bool> {
        if self.is_unit() {
            return Ok(true);
        }
        let q = self.quotient(f)?;
        self.contains_ideal(&q)
    }

    /// Coefficients `c` with `f = Σ c_i g_i` over the generators, when `f`
    /// lies in the ideal.
    pub fn lift(&self, f: &MultiPoly) -> Result<Option<Vec<MultiPoly>>> {
        self.ring.check_ambient(f.ring())?;
        if !self.contains(f)? {
            return Ok(None);
        }
        Ok(buchberger::lift(f, &self.generators, &self.ring))
    }

    /// Monomials outside the leading-term ideal, increasing, when finitely
    /// many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let n = self.ring.nvars();
        let basis = self.basis();
        if self.is_unit() {
            return Some(Vec::new());
        }
        let leads: Vec<&Monomial> = basis.iter().map(|g| g.leading_monomial().unwrap()).collect();
        let mut bounds = Vec::with_capacity(n);
        for v in 0..n {
            let pure = leads
                .iter()
                .filter(|m| m.exps().iter().enumerate().all(|(i, &e)| i == v || e == 0))
                .map(|m| m.exps()[v])
                .min()?;
            bounds.push(pure);
        }
        let mut out = Vec::new();
        let mut e = vec![0u32; n];
        loop {
            let m = Monomial::new(e.clone());
            if !leads.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            // odometer over the box [0, bound_v)
            let mut v = 0;
            loop {
                if v == n {
                    let order = self.ring.order().clone();
                    out.sort_by(|a, b| order.cmp(a, b));
                    return Some(out);
                }
                e[v] += 1;
                if e[v] < bounds[v] {
                    break;
                }
                e[v] = 0;
                v += 1;
            }
        }
    }

    /// Standard monomials of total degree at most `deg`, increasing.
    pub fn standard_monomials_up_to(&self, deg: u32) -> Vec<Monomial> {
        if self.is_unit() {
            return Vec::new();
        }
        let n = self.ring.nvars();
        let leads: Vec<&Monomial> = self.basis().iter().map(|g| g.leading_monomial().unwrap()).collect();
        let mut out = Vec::new();
        let mut e = vec![0u32; n];
        loop {
            let m = Monomial::new(e.clone());
            if m.degree() <= deg && !leads.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            let mut v = 0;
            loop {
                if v == n {
                    let order = self.ring.order().clone();
                    out.sort_by(|a, b| order.cmp(a, b));
                    return out;
                }
                e[v] += 1;
                if e.iter().sum::<u32>() <= deg {
                    break;
                }
                e[v] = 0;
                v += 1;
            }
        }
    }

    pub fn k_dimension(&self) -> KDim {
        match self.standard_monomials() {
            Some(ms) => KDim::Finite(ms.len() as u64),
            None => KDim::Infinite,
        }
    }

    fn with_fresh_var(&self, name: &str) -> (Arc<Ring>, MultiPoly) {
        let mut vars = vec![self.ring.fresh_name(name)];
        vars.extend(self.ring.vars().iter().cloned());
        let ext = Ring::new(self.ring.field(), vars).with_order(TermOrder::block(1));
        let t = MultiPoly::var(&ext, 0);
        (ext, t)
    }
}

/// Embeds into a ring with one extra leading variable.
fn shift(f: &MultiPoly, ext: &Arc<Ring>) -> MultiPoly {
    let map: Vec<usize> = (1..=f.ring().nvars()).collect();
    f.embed(ext, &map)
}

/// Basis elements free of the first variable, moved back to `target`.
fn eliminate_first(gens: &[MultiPoly], ext: &Arc<Ring>, target: &Arc<Ring>) -> Ideal {
    let gb = Ideal::new(ext, gens.to_vec());
    let map: Vec<usize> = (1..ext.nvars()).collect();
    let kept: Vec<MultiPoly> = gb.basis().iter().filter_map(|g| g.restrict(target, &map)).collect();
    
    Ideal::new(target, kept)
}

/// Reduced basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: TermOrder) -> Ideal {
    ideal.buchberger(order)
}

pub fn membership(f: &MultiPoly, ideal: &Ideal) -> Result<bool> {
    ideal.contains(f)
}

/// Whether `inner ⊆ outer`.
pub fn ideal_contains(outer: &Ideal, inner: &Ideal) -> Result<bool> {
    outer.contains_ideal(inner)
}

pub fn saturation(ideal: &Ideal, f: &MultiPoly) -> Result<Ideal> {
    ideal.saturation(f)
}

pub fn radical_membership(f: &MultiPoly, ideal: &Ideal) -> Result<bool> {
    ideal.radical_contains(f)
}

/// Whether `1 ∈ ambient + (fs)`.
pub fn is_unimodular(fs: &[MultiPoly], ambient: &Ideal) -> Result<bool> {
    Ok(ambient.extend(fs)?.is_unit())
}

/// Coefficients `r` with `Σ r_i f_i ≡ 1` modulo `ambient`, if any.
pub fn unimodular_certificate(fs: &[MultiPoly], ambient: &Ideal) -> Result<Option<Vec<MultiPoly>>> {
    let ext = ambient.extend(fs)?;
    let one = MultiPoly::one(ambient.ring());
    Ok(ext.lift(&one)?.map(|c| c[ambient.generators().len()..].to_vec()))
}

pub fn k_dimension(ideal: &Ideal) -> KDim {
    ideal.k_dimension()
}

pub fn is_regular(f: &MultiPoly, ideal: &Ideal) -> Result<bool> {
    ideal.is_regular(f)
}
