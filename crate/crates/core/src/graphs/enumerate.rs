//! Isomorphism classes of admissible graphs by loop order and leaf count.
//!
//! Connected classes come from valence sequences: for each sequence and each
//! distribution of leaves, every symmetric multiplicity matrix with the right
//! row sums is generated and reduced to its canonical key. Disconnected
//! classes are multisets of connected ones.

use super::canon::{canonical_form, CanonicalKey};
use super::{Graph, UnionFind};
use crate::error::{Error, Result};
use rayon::prelude::*;
use rug::Integer;
use std::collections::BTreeMap;

pub const DEFAULT_CANDIDATE_CAP: u64 = 10_000_000;
pub const DEFAULT_CLASS_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    /// Maximum multiplicity matrices generated for one valence sequence.
    pub candidate_cap: u64,
    /// Maximum number of classes returned.
    pub class_cap: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { candidate_cap: DEFAULT_CANDIDATE_CAP, class_cap: DEFAULT_CLASS_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphClass {
    pub key: CanonicalKey,
    pub graph: Graph,
    pub automorphisms: Integer,
}

fn valence_sequences(v: usize, total: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, slots: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if left < 3 * slots {
            return;
        }
        let hi = max.min(left - 3 * (slots - 1));
        for d in (3..=hi).rev() {
            cur.push(d);
            go(left - d, slots - 1, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, v, total, &mut Vec::new(), &mut out);
    out
}

/// Leaf counts per vertex, non-increasing within runs of equal valence.
fn leaf_distributions(val: &[usize], s: usize) -> Vec<Vec<usize>> {
    fn go(val: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == val.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut hi = left.min(val[i]);
        if i > 0 && val[i] == val[i - 1] {
            hi = hi.min(cur[i - 1]);
        }
        for l in (0..=hi).rev() {
            cur.push(l);
            go(val, i + 1, left - l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(val, 0, s, &mut Vec::new(), &mut out);
    out
}

struct MatrixFill<'a> {
    n: usize,
    rem: Vec<usize>,
    m: Vec<Vec<usize>>,
    leaves: &'a [usize],
    cap: u64,
    generated: u64,
    found: BTreeMap<CanonicalKey, GraphClass>,
}

impl MatrixFill<'_> {
    fn fill(&mut self, i: usize, j: usize) -> Result<()> {
        if i == self.n {
            self.generated += 1;
            if self.generated > self.cap {
                return Err(Error::CapExceeded {
                    what: "multiplicity matrices per valence sequence".into(),
                    count: self.generated,
                    cap: self.cap,
                });
            }
            if connected(&self.m) {
                let g = Graph::from_multiplicities(self.leaves, &self.m).expect("valid multiplicities");
                let cf = canonical_form(&g);
                self.found.entry(cf.key.clone()).or_insert(GraphClass {
                    key: cf.key,
                    graph: g,
                    automorphisms: cf.automorphisms,
                });
            }
            return Ok(());
        }
        if j == self.n {
            if self.rem[i] == 0 {
                return self.fill(i + 1, i + 1);
            }
            return Ok(());
        }
        if i == j {
            for loops in 0..=self.rem[i] / 2 {
                self.rem[i] -= 2 * loops;
                self.m[i][i] = loops;
                self.fill(i, j + 1)?;
                self.m[i][i] = 0;
                self.rem[i] += 2 * loops;
            }
            return Ok(());
        }
        let hi = self.rem[i].min(self.rem[j]);
        for k in 0..=hi {
            self.rem[i] -= k;
            self.rem[j] -= k;
            self.m[i][j] = k;
            self.m[j][i] = k;
            self.fill(i, j + 1)?;
            self.m[i][j] = 0;
            self.m[j][i] = 0;
            self.rem[i] += k;
            self.rem[j] += k;
        }
        Ok(())
    }
}

fn connected(m: &[Vec<usize>]) -> bool {
    let n = m.len();
    let mut uf = UnionFind::new(n);
    let mut comps = n;
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] > 0 && uf.union(i, j) {
                comps -= 1;
            }
        }
    }
    comps <= 1
}

/// Connected admissible graphs with `|Γ| = loop_order` and `leaves` leaves,
/// one per isomorphism class, sorted by key.
pub fn enumerate_connected(loop_order: i64, leaves: usize, cfg: &EnumConfig) -> Result<Vec<GraphClass>> {
    let s = leaves as i64;
    let max_v = 2 * loop_order + s;
    let mut jobs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for v in 1..=max_v.max(0) {
        let e = v + loop_order;
        if e < v - 1 {
            continue;
        }
        let total = (2 * e + s) as usize;
        for val in valence_sequences(v as usize, total) {
            for dist in leaf_distributions(&val, leaves) {
                jobs.push((val.clone(), dist));
            }
        }
    }
    let partial: Vec<Result<BTreeMap<CanonicalKey, GraphClass>>> = jobs
        .par_iter()
        .map(|(val, dist)| {
            let n = val.len();
            let mut fill = MatrixFill {
                n,
                rem: val.iter().zip(dist).map(|(d, l)| d - l).collect(),
                m: vec![vec![0; n]; n],
                leaves: dist,
                cap: cfg.candidate_cap,
                generated: 0,
                found: BTreeMap::new(),
            };
            fill.fill(0, 0)?;
            Ok(fill.found)
        })
        .collect();
    let mut all: BTreeMap<CanonicalKey, GraphClass> = BTreeMap::new();
    for p in partial {
        for (k, c) in p? {
            all.entry(k).or_insert(c);
        }
        if all.len() as u64 > cfg.class_cap {
            return Err(Error::CapExceeded { what: "graph classes".into(), count: all.len() as u64, cap: cfg.class_cap });
        }
    }
    Ok(all.into_values().collect())
}

/// Admissible graphs with `|Γ| = loop_order` and `leaves` leaves.
///
/// Disconnected classes are built from connected components. Leafless
/// components have loop order at least 1; components with leaves may have
/// loop order down to −1 (trees). Only admissible graphs are generated:
/// without the valence bound every loop order has infinitely many classes.
pub fn enumerate_graphs(
    loop_order: i64,
    leaves: usize,
    connected: bool,
    admissible: bool,
    cfg: &EnumConfig,
) -> Result<Vec<GraphClass>> {
    if !admissible {
        return Err(Error::Usage(
            "only admissible graphs (all valences at least 3) can be enumerated".into(),
        ));
    }
    if connected {
        return enumerate_connected(loop_order, leaves, cfg);
    }
    // Components of type (a, s) have weight 2a + s ≥ 1, and the weights of a
    // disconnected graph add up to 2·loop_order + leaves.
    let budget = 2 * loop_order + leaves as i64;
    if budget < 0 {
        return Ok(Vec::new());
    }
    let mut types: Vec<(i64, usize, GraphClass)> = Vec::new();
    for w in 1..=budget {
        for s in 0..=leaves.min(w as usize + 2) {
            let twice_a = w - s as i64;
            if twice_a % 2 != 0 || twice_a < -2 {
                continue;
            }
            for c in enumerate_connected(twice_a / 2, s, cfg)? {
                types.push((twice_a / 2, s, c));
            }
        }
    }
    let mut out: BTreeMap<CanonicalKey, GraphClass> = BTreeMap::new();
    let mut chosen: Vec<usize> = Vec::new();
    combine(&types, 0, loop_order, leaves, &mut chosen, &mut out, cfg)?;
    Ok(out.into_values().collect())
}

fn combine(
    types: &[(i64, usize, GraphClass)],
    start: usize,
    a_left: i64,
    s_left: usize,
    chosen: &mut Vec<usize>,
    out: &mut BTreeMap<CanonicalKey, GraphClass>,
    cfg: &EnumConfig,
) -> Result<()> {
    if a_left == 0 && s_left == 0 {
        let mut graph = Graph::empty();
        let mut aut = Integer::from(1);
        let mut run = 1usize;
        for (idx, &t) in chosen.iter().enumerate() {
            graph = graph.disjoint_union(&types[t].2.graph);
            aut *= &types[t].2.automorphisms;
            if idx > 0 && chosen[idx - 1] == t {
                run += 1;
                aut *= run;
            } else {
                run = 1;
            }
        }
        let key = canonical_form(&graph).key;
        out.insert(key.clone(), GraphClass { key, graph, automorphisms: aut });
        if out.len() as u64 > cfg.class_cap {
            return Err(Error::CapExceeded { what: "graph classes".into(), count: out.len() as u64, cap: cfg.class_cap });
        }
        return Ok(());
    }
    for t in start..types.len() {
        let (a, s, _) = &types[t];
        if *s > s_left || 2 * (a_left - a) + (s_left - s) as i64 <= 0 && !(a_left == *a && s_left == *s) {
            continue;
        }
        chosen.push(t);
        combine(types, t, a_left - a, s_left - s, chosen, out, cfg)?;
        chosen.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> EnumConfig {
        EnumConfig::default()
    }

    #[test]
    fn rank_two_has_three_classes() {
        let classes = enumerate_connected(1, 0, &cfg()).unwrap();
        assert_eq!(classes.len(), 3);
        let mut auts: Vec<Integer> = classes.iter().map(|c| c.automorphisms.clone()).collect();
        auts.sort();
        assert_eq!(auts, vec![8, 8, 12]);
    }

    #[test]
    fn degenerate_orders() {
        assert!(enumerate_connected(0, 0, &cfg()).unwrap().is_empty());
        assert_eq!(enumerate_connected(-1, 3, &cfg()).unwrap().len(), 1);
        assert_eq!(enumerate_connected(0, 1, &cfg()).unwrap().len(), 1);
        let empty = enumerate_graphs(0, 0, false, true, &cfg()).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].graph.vertex_count(), 0);
    }

    #[test]
    fn non_admissible_is_rejected() {
        assert!(matches!(enumerate_graphs(1, 0, true, false, &cfg()), Err(Error::Usage(_))));
    }

    #[test]
    fn disconnected_automorphisms_match_canonical_form() {
        let classes = enumerate_graphs(2, 0, false, true, &cfg()).unwrap();
        let connected = enumerate_connected(2, 0, &cfg()).unwrap().len();
        assert_eq!(classes.len(), connected + 6);
        for c in &classes {
            assert_eq!(c.automorphisms, canonical_form(&c.graph).automorphisms);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let tiny = EnumConfig { candidate_cap: 1, class_cap: 10 };
        assert!(matches!(enumerate_connected(2, 0, &tiny), Err(Error::CapExceeded { .. })));
    }
}
