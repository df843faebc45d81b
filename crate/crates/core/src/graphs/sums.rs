//! Brute-force graph sums.

use super::canon::{canonical_form_labeled, CanonicalKey};
use super::characters::{tau, Character};
use super::enumerate::{enumerate_graphs, EnumConfig};
use super::{check_subset_width, full_mask, Graph};
use crate::arith::{double_factorial_odd, factorial};
use crate::error::{Error, Result};
use rug::Rational;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// `Σ χ(Γ)/|Aut Γ|` over admissible classes with `|Γ| = loop_order` and
/// `leaves` unlabeled leaves.
pub fn character_sum(
    loop_order: i64,
    leaves: usize,
    chi: &Character,
    connected: bool,
    cfg: &EnumConfig,
) -> Result<Rational> {
    let mut total = Rational::new();
    for c in enumerate_graphs(loop_order, leaves, connected, true, cfg)? {
        total += chi.eval(&c.graph) / Rational::from(&c.automorphisms);
    }
    Ok(total)
}

/// `Σ χ(Γ)/|PAut Γ|` over connected leaf-labeled classes with fundamental
/// group of rank `rank`, computed as `s!` times the unlabeled sum.
pub fn leaf_labeled_character_sum(rank: usize, leaves: usize, chi: &Character, cfg: &EnumConfig) -> Result<Rational> {
    let unlabeled = character_sum(rank as i64 - 1, leaves, chi, true, cfg)?;
    Ok(unlabeled * Rational::from(factorial(leaves)))
}

/// The same sum, enumerating the leaf labelings of every unlabeled class and
/// collecting the leaf-labeled classes directly.
pub fn leaf_labeled_character_sum_direct(
    rank: usize,
    leaves: usize,
    chi: &Character,
    cfg: &EnumConfig,
) -> Result<Rational> {
    if leaves > 8 {
        return Err(Error::CapExceeded { what: "leaf labelings".into(), count: leaves as u64, cap: 8 });
    }
    let mut total = Rational::new();
    for c in enumerate_graphs(rank as i64 - 1, leaves, true, true, cfg)? {
        let value = chi.eval(&c.graph);
        let mut seen: BTreeSet<CanonicalKey> = BTreeSet::new();
        let mut labels: Vec<u32> = (0..leaves as u32).collect();
        for_each_permutation(&mut labels, 0, &mut |perm| {
            let cf = canonical_form_labeled(&c.graph, perm);
            if seen.insert(cf.key) {
                total += &value / Rational::from(&cf.automorphisms);
            }
        });
    }
    Ok(total)
}

fn for_each_permutation(items: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

/// `Σ_{γ ⊂ Γ} τ(γ)(−1)^{e(Γ/γ)}` over all edge subsets.
pub fn convolution_check(g: &Graph) -> Result<Rational> {
    check_subset_width(g)?;
    let e = g.edge_count();
    let mut total = Rational::new();
    for mask in 0..=full_mask(e) {
        let t = tau(&g.cut_open(mask));
        if (e - mask.count_ones() as usize).is_multiple_of(2) {
            total += t;
        } else {
            total -= t;
        }
    }
    Ok(total)
}

/// `Σ_{|Γ| = loop_order} Π_v b_{|v|} / |Aut Γ|` over all leafless admissible
/// graphs, connected or not.
pub fn vertex_weight_sum(loop_order: i64, weights: &BTreeMap<usize, Rational>, cfg: &EnumConfig) -> Result<Rational> {
    let mut total = Rational::new();
    for c in enumerate_graphs(loop_order, 0, false, true, cfg)? {
        let mut p = Rational::from(1);
        for d in c.graph.valences() {
            let b = weights
                .get(&d)
                .ok_or_else(|| Error::Domain(format!("no vertex weight for valence {d}")))?;
            p *= b;
        }
        total += p / Rational::from(&c.automorphisms);
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LabeledCountingReport {
    pub max_total: i64,
    /// `(a, ℓ, lhs, rhs)` for the coefficient of `z^a w^ℓ`.
    pub coefficients: Vec<(i64, usize, String, String)>,
    pub agree: bool,
}

/// Compares both sides of
/// `Σ_{Γ∈𝒢₀} Σ_{γ⊂Γ} τ(γ) z^{|γ|} w^{e(Γ/γ)}/|Aut Γ| = Σ_ℓ w^ℓ (2ℓ−1)!! Σ_{γ∈𝒢_{2ℓ}} τ(γ) z^{|γ|}/|Aut γ|`
/// on all coefficients `z^a w^ℓ` with `a + ℓ ≤ max_total`.
pub fn labeled_counting_check(max_total: i64, cfg: &EnumConfig) -> Result<LabeledCountingReport> {
    let mut lhs: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
    for order in 0..=max_total {
        for c in enumerate_graphs(order, 0, false, true, cfg)? {
            check_subset_width(&c.graph)?;
            let e = c.graph.edge_count();
            let aut = Rational::from(&c.automorphisms);
            for mask in 0..=full_mask(e) {
                let gamma = c.graph.cut_open(mask);
                let l = e - mask.count_ones() as usize;
                *lhs.entry((gamma.loop_order(), l)).or_default() += tau(&gamma) / &aut;
            }
        }
    }
    let mut rhs: BTreeMap<(i64, usize), Rational> = BTreeMap::new();
    for l in 0..=(3 * max_total.max(0)) as usize {
        let weight = Rational::from(double_factorial_odd(l));
        let lowest = -((2 * l as i64) / 3);
        for a in lowest..=max_total - l as i64 {
            let mut s = Rational::new();
            for c in enumerate_graphs(a, 2 * l, false, true, cfg)? {
                s += tau(&c.graph) / Rational::from(&c.automorphisms);
            }
            *rhs.entry((a, l)).or_default() += s * &weight;
        }
    }
    lhs.retain(|_, v| *v != 0);
    rhs.retain(|_, v| *v != 0);
    let keys: BTreeSet<(i64, usize)> = lhs.keys().chain(rhs.keys()).copied().collect();
    let zero = Rational::new();
    let coefficients = keys
        .iter()
        .map(|k| {
            let fmt = |q: &Rational| q.to_string();
            (k.0, k.1, fmt(lhs.get(k).unwrap_or(&zero)), fmt(rhs.get(k).unwrap_or(&zero)))
        })
        .collect();
    Ok(LabeledCountingReport { max_total, coefficients, agree: lhs == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bernoulli;

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rank_two_sums() {
        assert_eq!(character_sum(1, 0, &Character::Tau, true, &cfg()).unwrap(), q(-1, 24));
        assert_eq!(character_sum(1, 0, &Character::Sigma, true, &cfg()).unwrap(), q(-1, 12));
        assert_eq!(character_sum(1, 0, &Character::Xi, true, &cfg()).unwrap(), q(-1, 24));
    }

    #[test]
    fn sigma_sums_are_bernoulli() {
        for n in 1..=2usize {
            let b = bernoulli(n + 1) / Rational::from(n * (n + 1));
            assert_eq!(character_sum(n as i64, 0, &Character::Sigma, true, &cfg()).unwrap(), -b);
        }
    }

    #[test]
    fn leaf_labeled_small_groups() {
        let t = Character::Tau;
        for (n, s, want) in [(2, 0, q(-1, 24)), (1, 1, q(1, 2)), (0, 3, q(1, 1))] {
            assert_eq!(leaf_labeled_character_sum(n, s, &t, &cfg()).unwrap(), want, "n={n} s={s}");
        }
        for (n, s) in [(2, 0), (1, 1), (0, 3), (0, 4), (1, 2), (2, 1)] {
            let a = leaf_labeled_character_sum(n, s, &t, &cfg()).unwrap();
            let b = leaf_labeled_character_sum_direct(n, s, &t, &cfg()).unwrap();
            assert_eq!(a, b, "n={n} s={s}");
        }
    }

    #[test]
    fn convolution_check_values() {
        assert_eq!(convolution_check(&Graph::rose(2)).unwrap(), 0);
        assert_eq!(convolution_check(&Graph::theta(3)).unwrap(), 0);
        assert_eq!(convolution_check(&Graph::star(3)).unwrap(), 1);
    }

    #[test]
    fn vertex_weights_at_order_one() {
        let minus_one: BTreeMap<usize, Rational> = (3..=8).map(|s| (s, Rational::from(-1))).collect();
        assert_eq!(vertex_weight_sum(1, &minus_one, &cfg()).unwrap(), q(1, 12));
        let factorials: BTreeMap<usize, Rational> =
            (3..=8).map(|s| (s, -Rational::from(factorial(s - 2)))).collect();
        assert_eq!(vertex_weight_sum(1, &factorials, &cfg()).unwrap(), q(-1, 24));
        assert_eq!(vertex_weight_sum(0, &BTreeMap::new(), &cfg()).unwrap(), 1);
    }

    #[test]
    fn labeled_counting_low_order() {
        let r = labeled_counting_check(1, &cfg()).unwrap();
        assert!(r.agree, "{:?}", r.coefficients);
    }
}
