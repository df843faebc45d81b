//! The Hopf algebra of core graphs.
//!
//! Elements are finite ℚ-combinations of monomials; a monomial is a sorted
//! multiset of canonical keys of connected graphs with at least one edge.
//! Edge-free components are identified with the unit, so the empty monomial
//! is `𝕀`. Subgraphs keep all half-edges: edges outside the subgraph are cut
//! into leaf pairs.

use super::canon::{canonical_form, CanonicalKey};
use super::characters::Character;
use super::{check_subset_width, full_mask, Graph};
use crate::error::{Error, Result};
use rug::Rational;
use std::collections::{BTreeMap, HashMap};

pub type Monomial = Vec<CanonicalKey>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HopfElement {
    pub terms: BTreeMap<Monomial, Rational>,
}

impl HopfElement {
    pub fn zero() -> Self {
        HopfElement::default()
    }

    pub fn unit() -> Self {
        HopfElement::monomial(Vec::new())
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::from(1));
        HopfElement { terms }
    }

    /// The monomial of a graph: keys of its components that have edges.
    pub fn of_graph(g: &Graph) -> Self {
        HopfElement::monomial(monomial_of(g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &HopfElement, c: &Rational) {
        for (m, x) in &other.terms {
            let entry = self.terms.entry(m.clone()).or_default();
            *entry += Rational::from(x * c);
            if *entry == 0 {
                self.terms.remove(m);
            }
        }
    }

    pub fn mul(&self, other: &HopfElement) -> HopfElement {
        let mut out = HopfElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                m.extend(b.iter().cloned());
                m.sort();
                let mut single = HopfElement::monomial(m);
                single.terms.values_mut().for_each(|v| *v = Rational::from(x * y));
                out.add_scaled(&single, &Rational::from(1));
            }
        }
        out
    }

    /// Number of graph factors in each monomial, for display.
    pub fn degree_profile(&self) -> Vec<usize> {
        self.terms.keys().map(|m| m.len()).collect()
    }
}

pub(crate) fn monomial_of(g: &Graph) -> Monomial {
    let mut m: Monomial = g
        .components()
        .into_iter()
        .filter(|c| c.edge_count() > 0)
        .map(|c| canonical_form(&c).key)
        .collect();
    m.sort();
    m
}

/// Edge masks of all core subgraphs, in increasing order.
pub(crate) fn core_masks(g: &Graph) -> Result<Vec<u64>> {
    check_subset_width(g)?;
    let edges = g.edges();
    Ok((0..=full_mask(edges.len())).filter(|&mask| g.is_core_subset(&edges, mask)).collect())
}

#[derive(Default)]
struct AntipodeCache {
    memo: HashMap<CanonicalKey, HopfElement>,
}

impl AntipodeCache {
    /// `S` of any core graph, factored over components.
    fn of_graph(&mut self, g: &Graph) -> Result<HopfElement> {
        let mut out = HopfElement::unit();
        for c in g.components().into_iter().filter(|c| c.edge_count() > 0) {
            out = out.mul(&self.connected(&c)?);
        }
        Ok(out)
    }

    fn connected(&mut self, c: &Graph) -> Result<HopfElement> {
        let key = canonical_form(c).key;
        if let Some(s) = self.memo.get(&key) {
            return Ok(s.clone());
        }
        let all = full_mask(c.edge_count());
        let mut s = HopfElement::zero();
        for mask in core_masks(c)? {
            if mask == all {
                continue;
            }
            let term = self.of_graph(&c.cut_open(mask))?.mul(&HopfElement::of_graph(&c.contract(mask)));
            s.add_scaled(&term, &Rational::from(-1));
        }
        self.memo.insert(key, s.clone());
        Ok(s)
    }
}

/// `S(Γ) = −Σ_{γ ⊊ Γ core} S(γ) Γ/γ`, with `S(𝕀) = 𝕀`.
pub fn antipode(g: &Graph) -> Result<HopfElement> {
    if !g.is_core() {
        return Err(Error::NotCore);
    }
    AntipodeCache::default().of_graph(g)
}

/// `Σ_{γ ⊂ Γ core} γ · S(Γ/γ)`; equals `u∘ε(Γ)` on core graphs.
pub fn id_star_antipode(g: &Graph) -> Result<HopfElement> {
    if !g.is_core() {
        return Err(Error::NotCore);
    }
    let mut cache = AntipodeCache::default();
    let mut out = HopfElement::zero();
    for mask in core_masks(g)? {
        let term = HopfElement::of_graph(&g.cut_open(mask)).mul(&cache.of_graph(&g.contract(mask))?);
        out.add_scaled(&term, &Rational::from(1));
    }
    Ok(out)
}

/// `Δ(Γ) = Σ_{γ ⊂ Γ core} γ ⊗ Γ/γ`, with equal terms collected.
pub fn coproduct(g: &Graph) -> Result<BTreeMap<(Monomial, Monomial), u64>> {
    let mut out = BTreeMap::new();
    for mask in core_masks(g)? {
        *out.entry((monomial_of(&g.cut_open(mask)), monomial_of(&g.contract(mask)))).or_insert(0) += 1;
    }
    Ok(out)
}

/// Isomorphism classes of core subgraphs with their multiplicities.
pub fn core_subgraph_classes(g: &Graph) -> Result<BTreeMap<Monomial, u64>> {
    let mut out = BTreeMap::new();
    for mask in core_masks(g)? {
        *out.entry(monomial_of(&g.cut_open(mask))).or_insert(0) += 1;
    }
    Ok(out)
}

/// `(φ⋆ψ)(Γ) = Σ_{γ ⊂ Γ core} φ(γ) ψ(Γ/γ)`.
pub fn convolve(phi: &Character, psi: &Character, g: &Graph) -> Result<Rational> {
    let mut total = Rational::new();
    for mask in core_masks(g)? {
        total += phi.eval(&g.cut_open(mask)) * psi.eval(&g.contract(mask));
    }
    Ok(total)
}
