//! Undirected multigraphs as used by graphic matroids. Edge `i` of the graph is
//! element `i` of its cycle matroid.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::subset::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidInput(format!(
                    "edge {i} = ({u},{v}) references a vertex >= {vertices}"
                )));
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// `K_n` with edges `(u,v)`, `u < v`, in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph { vertices: n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Every unordered vertex pair joined by exactly one edge, no self-loops.
    pub fn is_complete(&self) -> bool {
        let n = self.vertices;
        if self.edges.len() != n * n.saturating_sub(1) / 2 {
            return false;
        }
        let mut seen = vec![false; n * n];
        for &(u, v) in &self.edges {
            if u == v {
                return false;
            }
            let (a, b) = (u.min(v), u.max(v));
            if std::mem::replace(&mut seen[a * n + b], true) {
                return false;
            }
        }
        true
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Edges incident to `v` (the star `δ(v)`).
    pub fn star(&self, v: usize) -> ElementSet {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == v || b == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Vertices touched by the given edges.
    pub fn vertices_of(&self, edges: ElementSet) -> Vec<usize> {
        let mut vs: Vec<usize> = edges
            .iter()
            .flat_map(|e| {
                let (a, b) = self.edges[e];
                [a, b]
            })
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Size of a spanning forest of the edge subset.
    pub fn forest_rank(&self, edges: ElementSet) -> usize {
        let mut uf = UnionFind::new(self.vertices);
        edges
            .iter()
            .filter(|&e| {
                let (a, b) = self.edges[e];
                uf.union(a, b)
            })
            .count()
    }

    /// Orients the tree `tree` away from `root`: for every tree edge, the
    /// endpoint farther from the root. Returns `None` if `tree` is not a
    /// spanning tree.
    pub fn far_endpoints(&self, tree: ElementSet, root: usize) -> Option<Vec<(usize, usize)>> {
        if tree.len() + 1 != self.vertices || self.forest_rank(tree) != tree.len() {
            return None;
        }
        let mut adjacency = vec![Vec::new(); self.vertices];
        for e in tree {
            let (a, b) = self.edges[e];
            adjacency[a].push((e, b));
            adjacency[b].push((e, a));
        }
        let mut visited = vec![false; self.vertices];
        let mut out = Vec::with_capacity(tree.len());
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(v) = queue.pop_front() {
            for &(e, w) in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    out.push((e, w));
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        Some(out)
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
