//! Undirected multigraphs with labelled edges, as consumed by the
//! spanning-tree samplers.

use std::collections::VecDeque;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<(usize, usize)>>,
    ends: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], ends: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds an edge and returns its id. Parallel edges are allowed.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        let e = self.ends.len();
        self.ends.push((u, v));
        self.adj[u].push((v, e));
        if u != v {
            self.adj[v].push((u, e));
        }
        e
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    /// `(neighbor, edge id)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_edges_get_distinct_ids() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        assert_eq!(g.neighbors(0), &[(1, 0), (1, 1)]);
        assert_eq!(g.other(1, 1), 0);
        assert!(g.is_connected());
        assert!(!Graph::new(2).is_connected());
    }
}
