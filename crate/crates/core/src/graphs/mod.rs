//! Half-edge multigraphs and the graph sums built on them.
//!
//! A graph is a set of half-edges `0..H`, a map from half-edges to vertices
//! and an involution. Fixed points of the involution are leaves, 2-orbits are
//! edges. Vertices are `0..vertex_count`; a vertex may carry no half-edges.

mod canon;
mod characters;
mod enumerate;
mod hopf;
mod sums;

pub use canon::{
    automorphism_count_by_orbits, canonical_form, canonical_form_labeled, CanonicalForm,
    CanonicalKey,
};
pub use characters::{sigma, tau, unit, xi, Character};
pub use enumerate::{
    enumerate_connected, enumerate_graphs, EnumConfig, GraphClass, DEFAULT_CANDIDATE_CAP,
    DEFAULT_CLASS_CAP,
};
pub use hopf::{antipode, convolve, coproduct, core_subgraph_classes, id_star_antipode, HopfElement, Monomial};
pub use sums::{
    character_sum, convolution_check, labeled_counting_check, leaf_labeled_character_sum,
    leaf_labeled_character_sum_direct, vertex_weight_sum, LabeledCountingReport,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    vertex_of: Vec<usize>,
    involution: Vec<usize>,
}

/// JSON exchange record. `vertices` defaults to one more than the largest
/// vertex id in `vertex_of`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphRecord {
    pub half_edges: usize,
    pub vertex_of: Vec<usize>,
    pub involution: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
}

/// Minimal union-find over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Graph {
    pub fn new(vertex_count: usize, vertex_of: Vec<usize>, involution: Vec<usize>) -> Result<Self> {
        let h = vertex_of.len();
        if involution.len() != h {
            return Err(Error::InvalidGraph(format!(
                "vertex_of has {h} entries but involution has {}",
                involution.len()
            )));
        }
        for (i, &v) in vertex_of.iter().enumerate() {
            if v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "half-edge {i} sits at vertex {v} but there are only {vertex_count} vertices"
                )));
            }
        }
        for (i, &j) in involution.iter().enumerate() {
            if j >= h || involution[j] != i {
                return Err(Error::InvalidGraph(format!("involution is not self-inverse at half-edge {i}")));
            }
        }
        Ok(Graph { vertex_count, vertex_of, involution })
    }

    pub fn from_record(r: &GraphRecord) -> Result<Self> {
        if r.vertex_of.len() != r.half_edges {
            return Err(Error::InvalidGraph(format!(
                "half_edges = {} but vertex_of has {} entries",
                r.half_edges,
                r.vertex_of.len()
            )));
        }
        let vc = r
            .vertices
            .unwrap_or_else(|| r.vertex_of.iter().map(|&v| v + 1).max().unwrap_or(0));
        Graph::new(vc, r.vertex_of.clone(), r.involution.clone())
    }

    pub fn to_record(&self) -> GraphRecord {
        let implied = self.vertex_of.iter().map(|&v| v + 1).max().unwrap_or(0);
        GraphRecord {
            half_edges: self.half_edge_count(),
            vertex_of: self.vertex_of.clone(),
            involution: self.involution.clone(),
            vertices: (implied != self.vertex_count).then_some(self.vertex_count),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Graph::from_record(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("graph record serializes")
    }

    /// Builds a graph from vertex leaf counts and an edge list.
    /// Half-edges are numbered vertex by vertex.
    pub fn from_edges(vertex_count: usize, leaves: &[usize], edges: &[(usize, usize)]) -> Result<Self> {
        if leaves.len() != vertex_count {
            return Err(Error::InvalidGraph("leaf list length differs from vertex count".into()));
        }
        let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidGraph(format!("edge {k} uses a missing vertex")));
            }
            ends[a].push((k, 0));
            ends[b].push((k, 1));
        }
        let mut vertex_of = Vec::new();
        let mut slot = vec![[0usize; 2]; edges.len()];
        let mut leaf_ids = Vec::new();
        for v in 0..vertex_count {
            for _ in 0..leaves[v] {
                leaf_ids.push(vertex_of.len());
                vertex_of.push(v);
            }
            for &(k, side) in &ends[v] {
                slot[k][side] = vertex_of.len();
                vertex_of.push(v);
            }
        }
        let mut involution: Vec<usize> = (0..vertex_of.len()).collect();
        for s in &slot {
            involution[s[0]] = s[1];
            involution[s[1]] = s[0];
        }
        Graph::new(vertex_count, vertex_of, involution)
    }

    /// Builds a graph from leaf counts and a symmetric multiplicity matrix,
    /// where `m[i][i]` counts loops at `i`.
    pub fn from_multiplicities(leaves: &[usize], m: &[Vec<usize>]) -> Result<Self> {
        let n = leaves.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i..n {
                for _ in 0..m[i][j] {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, leaves, &edges)
    }

    pub fn half_edge_count(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertex_of(&self) -> &[usize] {
        &self.vertex_of
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.half_edge_count()).filter(|&h| self.involution[h] == h).count()
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.half_edge_count()).filter(|&h| self.involution[h] == h).collect()
    }

    pub fn edge_count(&self) -> usize {
        (self.half_edge_count() - self.leaf_count()) / 2
    }

    /// Edges as half-edge pairs `(h, ι(h))` with `h < ι(h)`, in order of `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.half_edge_count())
            .filter(|&h| self.involution[h] > h)
            .map(|h| (h, self.involution[h]))
            .collect()
    }

    /// `|Γ| = e(Γ) − v(Γ)`.
    pub fn loop_order(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count as i64
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count];
        for &v in &self.vertex_of {
            val[v] += 1;
        }
        val
    }

    pub fn is_admissible(&self) -> bool {
        self.valences().iter().all(|&d| d >= 3)
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut count = self.vertex_count;
        for (a, b) in self.edges() {
            if uf.union(self.vertex_of[a], self.vertex_of[b]) {
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// First Betti number.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count
    }

    pub fn has_cycle(&self) -> bool {
        self.cycle_rank() > 0
    }

    /// Leaf counts per vertex.
    pub fn leaves_per_vertex(&self) -> Vec<usize> {
        let mut s = vec![0; self.vertex_count];
        for h in self.leaves() {
            s[self.vertex_of[h]] += 1;
        }
        s
    }

    /// Symmetric multiplicity matrix; the diagonal counts loops.
    pub fn multiplicities(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        let mut m = vec![vec![0; n]; n];
        for (a, b) in self.edges() {
            let (u, v) = (self.vertex_of[a], self.vertex_of[b]);
            m[u][v] += 1;
            if u != v {
                m[v][u] += 1;
            }
        }
        m
    }

    /// Whether edge `k` of `edges()` restricted to the edge subset `mask`
    /// is a bridge of that subgraph.
    fn is_bridge_in(&self, edges: &[(usize, usize)], mask: u64, k: usize) -> bool {
        let (a, b) = edges[k];
        let (u, v) = (self.vertex_of[a], self.vertex_of[b]);
        if u == v {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_count);
        for (j, &(x, y)) in edges.iter().enumerate() {
            if j != k && mask >> j & 1 == 1 {
                uf.union(self.vertex_of[x], self.vertex_of[y]);
            }
        }
        uf.find(u) != uf.find(v)
    }

    pub(crate) fn is_core_subset(&self, edges: &[(usize, usize)], mask: u64) -> bool {
        (0..edges.len()).all(|k| mask >> k & 1 == 0 || !self.is_bridge_in(edges, mask, k))
    }

    /// Bridgeless: no separating edge.
    pub fn is_core(&self) -> bool {
        let edges = self.edges();
        self.is_core_subset(&edges, full_mask(edges.len()))
    }

    pub fn has_separating_edge(&self) -> bool {
        !self.is_core()
    }

    /// The subgraph on the edges selected by `mask` (bit k ↔ `edges()[k]`):
    /// same half-edges and vertices, other edges cut into leaf pairs.
    pub fn cut_open(&self, mask: u64) -> Graph {
        let mut inv = self.involution.clone();
        for (k, (a, b)) in self.edges().into_iter().enumerate() {
            if mask >> k & 1 == 0 {
                inv[a] = a;
                inv[b] = b;
            }
        }
        Graph { vertex_count: self.vertex_count, vertex_of: self.vertex_of.clone(), involution: inv }
    }

    /// Collapses the edges selected by `mask`: their endpoints are merged and
    /// the edges removed. Loops in the selection are deleted.
    pub fn contract(&self, mask: u64) -> Graph {
        let edges = self.edges();
        let mut uf = UnionFind::new(self.vertex_count);
        let mut removed = vec![false; self.half_edge_count()];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                uf.union(self.vertex_of[a], self.vertex_of[b]);
                removed[a] = true;
                removed[b] = true;
            }
        }
        let mut new_id = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            if new_id[r] == usize::MAX {
                new_id[r] = count;
                count += 1;
            }
            new_id[v] = new_id[r];
        }
        let kept: Vec<usize> = (0..self.half_edge_count()).filter(|&h| !removed[h]).collect();
        let mut index = vec![usize::MAX; self.half_edge_count()];
        for (i, &h) in kept.iter().enumerate() {
            index[h] = i;
        }
        Graph {
            vertex_count: count,
            vertex_of: kept.iter().map(|&h| new_id[self.vertex_of[h]]).collect(),
            involution: kept.iter().map(|&h| index[self.involution[h]]).collect(),
        }
    }

    /// Connected components, ordered by smallest vertex id.
    pub fn components(&self) -> Vec<Graph> {
        let mut uf = UnionFind::new(self.vertex_count);
        for (a, b) in self.edges() {
            uf.union(self.vertex_of[a], self.vertex_of[b]);
        }
        let mut comp_of = vec![usize::MAX; self.vertex_count];
        let mut local = vec![0; self.vertex_count];
        let mut sizes: Vec<usize> = Vec::new();
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            if comp_of[r] == usize::MAX {
                comp_of[r] = sizes.len();
                sizes.push(0);
            }
            comp_of[v] = comp_of[r];
            local[v] = sizes[comp_of[v]];
            sizes[comp_of[v]] += 1;
        }
        let mut halves: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
        for h in 0..self.half_edge_count() {
            halves[comp_of[self.vertex_of[h]]].push(h);
        }
        let mut index = vec![0; self.half_edge_count()];
        for hs in &halves {
            for (i, &h) in hs.iter().enumerate() {
                index[h] = i;
            }
        }
        halves
            .iter()
            .zip(&sizes)
            .map(|(hs, &size)| Graph {
                vertex_count: size,
                vertex_of: hs.iter().map(|&h| local[self.vertex_of[h]]).collect(),
                involution: hs.iter().map(|&h| index[self.involution[h]]).collect(),
            })
            .collect()
    }

    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let h = self.half_edge_count();
        let mut vertex_of = self.vertex_of.clone();
        vertex_of.extend(other.vertex_of.iter().map(|&v| v + self.vertex_count));
        let mut involution = self.involution.clone();
        involution.extend(other.involution.iter().map(|&j| j + h));
        Graph { vertex_count: self.vertex_count + other.vertex_count, vertex_of, involution }
    }

    pub fn empty() -> Graph {
        Graph { vertex_count: 0, vertex_of: Vec::new(), involution: Vec::new() }
    }

    /// One vertex with `s` leaves and no edges.
    pub fn star(s: usize) -> Graph {
        Graph::from_edges(1, &[s], &[]).expect("star is well formed")
    }

    /// One vertex with `k` loops.
    pub fn rose(k: usize) -> Graph {
        Graph::from_edges(1, &[0], &vec![(0, 0); k]).expect("rose is well formed")
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn theta(k: usize) -> Graph {
        Graph::from_edges(2, &[0, 0], &vec![(0, 1); k]).expect("theta is well formed")
    }

    /// Two loops joined by a separating edge.
    pub fn dumbbell() -> Graph {
        Graph::from_edges(2, &[0, 0], &[(0, 0), (0, 1), (1, 1)]).expect("dumbbell is well formed")
    }
}

pub(crate) fn full_mask(e: usize) -> u64 {
    if e >= 64 {
        u64::MAX
    } else {
        (1u64 << e) - 1
    }
}

pub const MAX_SUBSET_EDGES: usize = 30;

/// Guard for routines that iterate over all edge subsets.
pub(crate) fn check_subset_width(g: &Graph) -> Result<()> {
    let e = g.edge_count();
    if e > MAX_SUBSET_EDGES {
        return Err(Error::CapExceeded { what: "edges for subset iteration".into(), count: e as u64, cap: MAX_SUBSET_EDGES as u64 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_on_small_graphs() {
        let f = Graph::rose(2);
        assert_eq!((f.vertex_count(), f.edge_count(), f.loop_order()), (1, 2, 1));
        let t = Graph::theta(3);
        assert_eq!((t.vertex_count(), t.edge_count(), t.loop_order()), (2, 3, 1));
        assert!(t.is_core() && f.is_core());
        assert!(Graph::dumbbell().has_separating_edge());
        assert_eq!(Graph::dumbbell().cycle_rank(), 2);
    }

    #[test]
    fn rejects_broken_involution() {
        assert!(Graph::new(1, vec![0, 0], vec![1, 1]).is_err());
        assert!(Graph::new(1, vec![0, 1], vec![1, 0]).is_err());
    }

    #[test]
    fn json_round_trip_keeps_isolated_vertices() {
        let g = Graph::from_edges(3, &[0, 3, 0], &[(0, 0), (0, 0)]).unwrap();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let parsed = Graph::from_json(r#"{"half_edges":2,"vertex_of":[0,0],"involution":[1,0]}"#).unwrap();
        assert_eq!(parsed.vertex_count(), 1);
    }

    #[test]
    fn cut_and_contract() {
        let t = Graph::theta(3);
        let cut = t.cut_open(0b001);
        assert_eq!((cut.edge_count(), cut.leaf_count()), (1, 4));
        let c = t.contract(0b001);
        assert_eq!((c.vertex_count(), c.edge_count()), (1, 2));
        assert_eq!(t.contract(0b111).edge_count(), 0);
        assert_eq!(t.cut_open(0).edge_count(), 0);
    }

    #[test]
    fn components_split() {
        let g = Graph::rose(1).disjoint_union(&Graph::theta(3)).disjoint_union(&Graph::star(2));
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[1], Graph::theta(3));
        assert_eq!(comps[2].leaf_count(), 2);
    }
}
