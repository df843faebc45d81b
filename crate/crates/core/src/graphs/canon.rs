//! Canonical forms and automorphism counts.
//!
//! A half-edge graph is reduced to a vertex-colored multigraph: a symmetric
//! multiplicity matrix plus a per-vertex color (its leaves). Vertex orderings
//! are explored by colour refinement with individualization over the whole
//! search tree; the least encoding is the canonical key, and the number of
//! leaves attaining it is the order of the vertex-level automorphism group.
//! The half-edge group is that order times the local symmetries: permuting
//! parallel edges, flipping and permuting loops, and permuting leaves at a
//! vertex (the last factor is absent when leaves carry labels).

use super::Graph;
use crate::arith::factorial;
use rug::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    pub automorphisms: Integer,
}

struct ColoredMultigraph {
    n: usize,
    color: Vec<Vec<u32>>,
    m: Vec<Vec<u32>>,
}

struct Search<'a> {
    g: &'a ColoredMultigraph,
    best: Option<Vec<u32>>,
    hits: u64,
}

impl ColoredMultigraph {
    fn initial_partition(&self) -> Vec<usize> {
        let sig: Vec<(Vec<u32>, u32, u32)> = (0..self.n)
            .map(|i| (self.color[i].clone(), self.m[i][i], self.m[i].iter().sum::<u32>() + self.m[i][i]))
            .collect();
        rank(&sig)
    }

    /// Colour refinement to a stable partition. Cell ranks stay ordered.
    fn refine(&self, mut cells: Vec<usize>) -> Vec<usize> {
        let mut count = distinct(&cells);
        loop {
            let sig: Vec<(usize, Vec<(usize, u32)>)> = (0..self.n)
                .map(|i| {
                    let mut nb: Vec<(usize, u32)> = (0..self.n)
                        .filter(|&j| j != i && self.m[i][j] > 0)
                        .map(|j| (cells[j], self.m[i][j]))
                        .collect();
                    nb.sort_unstable();
                    (cells[i], nb)
                })
                .collect();
            cells = rank(&sig);
            let next = distinct(&cells);
            if next == count {
                return cells;
            }
            count = next;
        }
    }

    fn encode(&self, cells: &[usize]) -> Vec<u32> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| cells[v]);
        let mut code = vec![self.n as u32];
        for &v in &order {
            code.push(self.color[v].len() as u32);
            code.extend_from_slice(&self.color[v]);
        }
        for (a, &u) in order.iter().enumerate() {
            for &w in &order[a..] {
                code.push(self.m[u][w]);
            }
        }
        code
    }
}

impl Search<'_> {
    fn run(&mut self, cells: Vec<usize>) {
        let cells = self.g.refine(cells);
        let n = self.g.n;
        if distinct(&cells) == n {
            let code = self.g.encode(&cells);
            match &self.best {
                Some(b) if code > *b => {}
                Some(b) if code == *b => self.hits += 1,
                _ => {
                    self.best = Some(code);
                    self.hits = 1;
                }
            }
            return;
        }
        let mut size = vec![0usize; n];
        for &c in &cells {
            size[c] += 1;
        }
        let target = (0..n).find(|&c| size[c] > 1).expect("non-discrete partition has a big cell");
        for v in (0..n).filter(|&v| cells[v] == target) {
            let sig: Vec<(usize, bool)> = (0..n).map(|u| (cells[u], u != v)).collect();
            self.run(rank(&sig));
        }
    }
}

fn rank<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sig.to_vec();
    sorted.sort();
    sorted.dedup();
    sig.iter().map(|s| sorted.binary_search(s).expect("present")).collect()
}

fn distinct(cells: &[usize]) -> usize {
    let mut c = cells.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn canonicalize(g: &Graph, color: Vec<Vec<u32>>, leaf_factor: bool) -> CanonicalForm {
    let m: Vec<Vec<u32>> = g
        .multiplicities()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as u32).collect())
        .collect();
    let cmg = ColoredMultigraph { n: g.vertex_count(), color, m };
    let mut search = Search { g: &cmg, best: None, hits: 0 };
    if cmg.n == 0 {
        return CanonicalForm { key: CanonicalKey(vec![0]), automorphisms: Integer::from(1) };
    }
    search.run(cmg.initial_partition());
    let mut aut = Integer::from(search.hits);
    for i in 0..cmg.n {
        let loops = cmg.m[i][i] as usize;
        aut *= factorial(loops);
        aut <<= loops as u32;
        for j in i + 1..cmg.n {
            aut *= factorial(cmg.m[i][j] as usize);
        }
    }
    if leaf_factor {
        for s in g.leaves_per_vertex() {
            aut *= factorial(s);
        }
    }
    CanonicalForm { key: CanonicalKey(search.best.expect("search reached a leaf")), automorphisms: aut }
}

/// Canonical key and `|Aut|` of a graph with unlabeled leaves.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let color = g.leaves_per_vertex().into_iter().map(|s| vec![s as u32]).collect();
    canonicalize(g, color, true)
}

/// Canonical key and `|PAut|` when the leaf half-edges carry labels.
/// `labels[i]` is the label of the i-th leaf in half-edge order.
pub fn canonical_form_labeled(g: &Graph, labels: &[u32]) -> CanonicalForm {
    let leaves = g.leaves();
    assert_eq!(leaves.len(), labels.len(), "one label per leaf");
    let mut color: Vec<Vec<u32>> = vec![vec![u32::MAX]; g.vertex_count()];
    for (&h, &l) in leaves.iter().zip(labels) {
        color[g.vertex_of()[h]].push(l);
    }
    for c in &mut color {
        c.sort_unstable();
    }
    canonicalize(g, color, false)
}

/// Independent `|Aut|` by orbit-stabilizer: the group of half-edge
/// permutations preserving the vertex partition acts on involutions with the
/// same fixed-point count; `|Aut| = |group| / |orbit|`, the orbit being
/// counted by brute force over all such involutions.
pub fn automorphism_count_by_orbits(g: &Graph) -> Integer {
    let h = g.half_edge_count();
    let target = canonical_form(g).key;
    let mut group = Integer::from(1);
    let mut by_valence: BTreeMap<usize, usize> = BTreeMap::new();
    for d in g.valences() {
        *by_valence.entry(d).or_default() += 1;
        group *= factorial(d);
    }
    for &k in by_valence.values() {
        group *= factorial(k);
    }
    let s = g.leaf_count();
    let mut orbit = 0u64;
    let mut inv: Vec<usize> = vec![usize::MAX; h];
    let mut fixed_left = s;
    involutions(g, &target, &mut inv, &mut fixed_left, &mut orbit);
    group / orbit
}

fn involutions(g: &Graph, target: &CanonicalKey, inv: &mut Vec<usize>, fixed_left: &mut usize, orbit: &mut u64) {
    let Some(i) = inv.iter().position(|&x| x == usize::MAX) else {
        let cand = Graph::new(g.vertex_count(), g.vertex_of().to_vec(), inv.clone()).expect("valid involution");
        if canonical_form(&cand).key == *target {
            *orbit += 1;
        }
        return;
    };
    if *fixed_left > 0 {
        inv[i] = i;
        *fixed_left -= 1;
        involutions(g, target, inv, fixed_left, orbit);
        *fixed_left += 1;
        inv[i] = usize::MAX;
    }
    for j in i + 1..inv.len() {
        if inv[j] == usize::MAX {
            inv[i] = j;
            inv[j] = i;
            involutions(g, target, inv, fixed_left, orbit);
            inv[i] = usize::MAX;
            inv[j] = usize::MAX;
        }
    }
}
