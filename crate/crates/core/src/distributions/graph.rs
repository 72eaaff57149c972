use super::HomogeneousDistribution;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Weighted spanning-tree distribution of a connected multigraph. The
/// ground set is the edge list (edge `e` is element `e`) and `w(T)` is the
/// product of the edge weights of spanning tree `T`.
#[derive(Clone, Debug)]
pub struct SpanningTrees {
    vertices: usize,
    edges: Vec<WeightedEdge>,
    log_weights: Vec<f64>,
}

impl SpanningTrees {
    pub fn new(vertices: usize, edges: Vec<WeightedEdge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        for (e, edge) in edges.iter().enumerate() {
            if edge.u >= vertices || edge.v >= vertices {
                return Err(Error::input(format!(
                    "edge {e} ({}, {}) references a vertex outside 0..{vertices}",
                    edge.u, edge.v
                )));
            }
            if edge.u == edge.v {
                return Err(Error::input(format!("edge {e} is a self-loop at vertex {}", edge.u)));
            }
            if !(edge.weight > 0.0 && edge.weight.is_finite()) {
                return Err(Error::input(format!(
                    "edge {e} weight must be positive and finite, got {}",
                    edge.weight
                )));
            }
        }
        let mut uf = UnionFind::new(vertices);
        let mut components = vertices;
        for edge in &edges {
            if uf.union(edge.u, edge.v) {
                components -= 1;
            }
        }
        if components != 1 {
            return Err(Error::input(format!(
                "graph is disconnected ({components} components)"
            )));
        }
        let log_weights = edges.iter().map(|e| e.weight.ln()).collect();
        Ok(SpanningTrees {
            vertices,
            edges,
            log_weights,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    /// True iff the listed edges form a spanning tree.
    pub fn is_spanning_tree(&self, edge_indices: &[usize]) -> bool {
        if edge_indices.len() + 1 != self.vertices {
            return false;
        }
        // v-1 acyclic edges on v vertices are connected
        let mut uf = UnionFind::new(self.vertices);
        edge_indices.iter().all(|&e| {
            let edge = &self.edges[e];
            uf.union(edge.u, edge.v)
        })
    }
}

impl HomogeneousDistribution for SpanningTrees {
    fn ground_size(&self) -> usize {
        self.edges.len()
    }

    fn degree(&self) -> usize {
        self.vertices - 1
    }

    fn log_mass_unchecked(&self, indices: &[usize]) -> f64 {
        if self.is_spanning_tree(indices) {
            indices.iter().map(|&e| self.log_weights[e]).sum()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn mass_unchecked(&self, indices: &[usize]) -> f64 {
        if self.is_spanning_tree(indices) {
            indices.iter().map(|&e| self.edges[e].weight).product()
        } else {
            0.0
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if already merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::{KSubsets, Subset};

    fn unit(edges: &[(usize, usize)]) -> Vec<WeightedEdge> {
        edges.iter().map(|&(u, v)| WeightedEdge { u, v, weight: 1.0 }).collect()
    }

    #[test]
    fn triangle_every_pair_is_a_tree() {
        let g = SpanningTrees::new(3, unit(&[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(g.degree(), 2);
        for s in KSubsets::new(3, 2) {
            assert_eq!(g.mass(&s).unwrap(), 1.0);
        }
    }

    #[test]
    fn four_cycle_opposite_edges_are_not_trees() {
        let g = SpanningTrees::new(4, unit(&[(0, 1), (1, 2), (2, 3), (3, 0)])).unwrap();
        assert_eq!(g.degree(), 3);
        // 3 of 4 cycle edges always form a path
        for s in KSubsets::new(4, 3) {
            assert_eq!(g.mass(&s).unwrap(), 1.0);
        }
        // opposite edge pairs leave two vertices isolated
        assert!(!g.is_spanning_tree(&[0, 2]));
        assert!(!g.is_spanning_tree(&[1, 3]));
    }

    #[test]
    fn weights_multiply() {
        let edges = vec![
            WeightedEdge { u: 0, v: 1, weight: 2.0 },
            WeightedEdge { u: 1, v: 2, weight: 3.0 },
            WeightedEdge { u: 0, v: 2, weight: 5.0 },
        ];
        let g = SpanningTrees::new(3, edges).unwrap();
        let m = g.mass(&Subset::from_sorted(vec![0, 2])).unwrap();
        assert!((m - 10.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_graphs() {
        assert!(SpanningTrees::new(3, unit(&[(0, 1)])).is_err());
        assert!(SpanningTrees::new(2, unit(&[(0, 0), (0, 1)])).is_err());
        assert!(SpanningTrees::new(2, unit(&[(0, 2)])).is_err());
        let bad = vec![WeightedEdge { u: 0, v: 1, weight: -1.0 }];
        assert!(SpanningTrees::new(2, bad).is_err());
    }
}
