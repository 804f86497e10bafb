//! Immutable digraphs and the neighborhood/degree queries the rest of the crate uses.
//!
//! Vertices are dense indices `0..n`. There are no loops and no parallel arcs,
//! but a pair of opposite arcs `(u,v)`, `(v,u)` is allowed.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::GraphError;
use crate::vertex_set::VertexSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Digraph {
    /// Builds a digraph on `n` vertices. Duplicate arcs are merged; loops and
    /// out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Digraph { n, out_adj, in_adj })
    }

    /// Digraph with `n` vertices and no arcs.
    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
        }
    }

    /// Complete biorientation of a simple graph: each edge becomes two opposite arcs.
    pub fn biorient<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        Self::new(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]))
    }

    /// Complete biorientation of K_n.
    pub fn complete_biorientation(n: usize) -> Self {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::new(n, arcs).expect("complete digraph arcs are valid")
    }

    /// Directed path 0 -> 1 -> ... -> n-1.
    pub fn directed_path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path arcs are valid")
    }

    /// Directed cycle 0 -> 1 -> ... -> n-1 -> 0, for n >= 2.
    pub fn directed_cycle(n: usize) -> Self {
        assert!(n >= 2, "a directed cycle needs at least two vertices");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle arcs are valid")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out_adj[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    /// Directionless neighborhood N(v) = N⁻(v) ∪ N⁺(v), sorted.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.in_adj[v].iter().chain(&self.out_adj[v]).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn adjacent_with(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn min_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).min().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.in_adj[v].is_empty() && self.out_adj[v].is_empty()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        (0..self.n).any(|v| self.is_isolated(v))
    }

    /// The converse D⁻¹: every arc reversed.
    pub fn converse(&self) -> Self {
        Digraph {
            n: self.n,
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
        }
    }

    /// Subdigraph induced by `subset`, reindexed in ascending order. The
    /// returned map sends each new index to its original vertex.
    pub fn induced_subdigraph(&self, subset: &VertexSet) -> Result<(Digraph, Vec<usize>), GraphError> {
        self.check_set(subset)?;
        let kept = subset.to_vec();
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_index[v] = i;
        }
        let arcs = self
            .arcs()
            .filter(|&(u, v)| subset.contains(u) && subset.contains(v))
            .map(|(u, v)| (new_index[u], new_index[v]));
        let sub = Digraph::new(kept.len(), arcs)?;
        Ok((sub, kept))
    }

    /// Number of arcs going from `from` to `to`, i.e. |(A,B)_D|.
    pub fn arc_cut_count(&self, from: &VertexSet, to: &VertexSet) -> Result<usize, GraphError> {
        self.check_set(from)?;
        self.check_set(to)?;
        Ok(from
            .iter()
            .map(|u| self.out_adj[u].iter().filter(|&&v| to.contains(v)).count())
            .sum())
    }

    /// Weak connectivity: the underlying graph is connected. The empty digraph counts as connected.
    pub fn is_weakly_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in self.in_adj[v].iter().chain(&self.out_adj[v]) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.n
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let shift = self.n;
        let arcs = self
            .arcs()
            .chain(other.arcs().map(|(u, v)| (u + shift, v + shift)));
        Digraph::new(self.n + other.n, arcs).expect("shifted arcs stay valid")
    }

    pub(crate) fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        if set.universe_size() != self.n {
            return Err(GraphError::UniverseMismatch {
                expected: self.n,
                found: set.universe_size(),
            });
        }
        Ok(())
    }

    pub fn classify(&self) -> VertexClassification {
        let n = self.n;
        let mut end_vertices = VertexSet::empty(n);
        for v in 0..n {
            if self.in_degree(v) + self.out_degree(v) == 1 {
                end_vertices.insert(v).expect("in range");
            }
        }
        let mut penultimate_vertices = VertexSet::empty(n);
        for e in end_vertices.iter() {
            for w in self.neighbors(e) {
                penultimate_vertices.insert(w).expect("in range");
            }
        }
        let is_connected = self.is_weakly_connected();
        let is_directed_tree = n >= 1 && is_connected && self.arc_count() == n - 1;
        let is_functional = (0..n).all(|v| self.out_degree(v) == 1);
        let is_contrafunctional = (0..n).all(|v| self.in_degree(v) == 1);
        VertexClassification {
            e: end_vertices.len(),
            p: penultimate_vertices.len(),
            end_vertices,
            penultimate_vertices,
            is_connected,
            is_directed_tree,
            is_functional,
            is_contrafunctional,
            min_in_degree: self.min_in_degree(),
            min_out_degree: self.min_out_degree(),
            max_in_degree: self.max_in_degree(),
            max_out_degree: self.max_out_degree(),
        }
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

/// Degree extrema and structural flags, plus end-vertex / penultimate-vertex sets.
///
/// An end-vertex has `deg⁺(v) + deg⁻(v) = 1`; a penultimate vertex is adjacent
/// (in either direction) with some end-vertex. A vertex can be both, as in P₂.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexClassification {
    pub end_vertices: VertexSet,
    pub penultimate_vertices: VertexSet,
    pub e: usize,
    pub p: usize,
    pub is_connected: bool,
    pub is_directed_tree: bool,
    pub is_functional: bool,
    pub is_contrafunctional: bool,
    pub min_in_degree: usize,
    pub min_out_degree: usize,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, members: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, members.iter().copied()).unwrap()
    }

    #[test]
    fn build_small_digraphs() {
        let p2 = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(p2.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        let k3 = Digraph::new(3, [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]).unwrap();
        assert_eq!(k3, Digraph::complete_biorientation(3));
        assert_eq!(k3.arc_count(), 6);
    }

    #[test]
    fn build_rejects_loops_and_range_errors() {
        assert_eq!(Digraph::new(2, [(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(
            Digraph::new(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn duplicate_arcs_are_merged() {
        let d = Digraph::new(2, [(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(d.arc_count(), 2);
        assert_eq!(d.out_neighbors(0), &[1]);
    }

    #[test]
    fn converse_examples() {
        let p2 = Digraph::directed_path(2);
        assert_eq!(p2.converse().arcs().collect::<Vec<_>>(), vec![(1, 0)]);
        let k3 = Digraph::complete_biorientation(3);
        assert_eq!(k3.converse(), k3);
        let star = Digraph::new(3, [(0, 1), (0, 2)]).unwrap();
        let conv = star.converse();
        assert_eq!(conv.arcs().collect::<Vec<_>>(), vec![(1, 0), (2, 0)]);
        assert_eq!(conv.in_degree(0), 2);
        assert_eq!(conv.out_degree(0), 0);
    }

    #[test]
    fn induced_subdigraph_examples() {
        let k3 = Digraph::complete_biorientation(3);
        let (sub, map) = k3.induced_subdigraph(&set(3, &[0, 1])).unwrap();
        assert_eq!(sub, Digraph::complete_biorientation(2));
        assert_eq!(map, vec![0, 1]);

        let p3 = Digraph::directed_path(3);
        let (sub, map) = p3.induced_subdigraph(&set(3, &[0, 2])).unwrap();
        assert_eq!(sub, Digraph::empty(2));
        assert_eq!(map, vec![0, 2]);

        let (sub, _) = p3.induced_subdigraph(&VertexSet::full(3)).unwrap();
        assert_eq!(sub, p3);

        assert!(p3.induced_subdigraph(&VertexSet::full(4)).is_err());
    }

    #[test]
    fn classify_path() {
        let c = Digraph::directed_path(3).classify();
        assert_eq!(c.e, 2);
        assert_eq!(c.end_vertices.to_vec(), vec![0, 2]);
        assert_eq!(c.p, 1);
        assert_eq!(c.penultimate_vertices.to_vec(), vec![1]);
        assert!(c.is_directed_tree && c.is_connected);
    }

    #[test]
    fn classify_two_cycle() {
        let c = Digraph::directed_cycle(2).classify();
        assert!(c.is_functional && c.is_contrafunctional);
        assert_eq!((c.e, c.p), (0, 0));
        assert!(!c.is_directed_tree);
    }

    #[test]
    fn classify_complete_biorientation() {
        let c = Digraph::complete_biorientation(3).classify();
        assert!(!c.is_directed_tree);
        assert_eq!((c.min_in_degree, c.max_in_degree), (2, 2));
    }

    #[test]
    fn biorient_counts() {
        assert_eq!(Digraph::biorient(2, [(0, 1)]).unwrap(), Digraph::complete_biorientation(2));
        assert_eq!(Digraph::biorient(3, [(0, 1), (1, 2)]).unwrap().arc_count(), 4);
        let k4_edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let k4 = Digraph::biorient(4, k4_edges).unwrap();
        assert_eq!(k4.arc_count(), 12);
        assert_eq!(k4, Digraph::complete_biorientation(4));
        assert_eq!(Digraph::biorient(2, [(1, 1)]), Err(GraphError::Loop(1)));
    }

    #[test]
    fn arc_cut_examples() {
        let p2 = Digraph::directed_path(2);
        assert_eq!(p2.arc_cut_count(&set(2, &[0]), &set(2, &[1])).unwrap(), 1);
        let k2 = Digraph::complete_biorientation(2);
        assert_eq!(k2.arc_cut_count(&VertexSet::full(2), &VertexSet::full(2)).unwrap(), 2);
        let p3 = Digraph::directed_path(3);
        // arcs 0->1, 1->2; only 0->1 leaves {0,2} into {1}
        assert_eq!(p3.arc_cut_count(&set(3, &[0, 2]), &set(3, &[1])).unwrap(), 1);
    }

    #[test]
    fn disconnected_is_not_a_tree() {
        let d = Digraph::new(4, [(0, 1), (2, 3), (3, 2)]).unwrap();
        let c = d.classify();
        assert!(!c.is_connected && !c.is_directed_tree);
    }
}
