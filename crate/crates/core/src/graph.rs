//! Simple graphs with dense 0-based vertex ids.
//!
//! Undirected graphs are the default; directed graphs exist for the DAG
//! equilibrium solver, where a vertex's inputs are its in-neighbors. The two
//! flavors are never mixed in one instance.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphError {
    VertexOutOfRange { edge: (usize, usize), n: usize },
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphError::VertexOutOfRange { edge, n } => {
                write!(f, "edge ({}, {}) references a vertex >= n = {}", edge.0, edge.1, n)
            }
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {}", v),
            GraphError::DuplicateEdge(u, v) => write!(f, "duplicate edge ({}, {})", u, v),
        }
    }
}

/// A simple graph. `adjacency(v)` lists neighbors (in-neighbors when
/// directed); those are exactly the inputs a vertex's local function sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    /// Out-neighbor lists; populated only for directed graphs.
    out_adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn undirected(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        Self::build(n, edges, false)
    }

    /// Edge `(u, v)` means an arc from `u` to `v`; `u` becomes an in-neighbor
    /// (input) of `v`.
    pub fn directed(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        Self::build(n, edges, true)
    }

    fn build(n: usize, edges: Vec<(usize, usize)>, directed: bool) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        let mut out_adj = if directed { vec![Vec::new(); n] } else { Vec::new() };
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { edge: (u, v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = if directed || u < v { (u, v) } else { (v, u) };
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            if directed {
                adj[v].push(u);
                out_adj[u].push(v);
            } else {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        for list in out_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { n, directed, edges, adj, out_adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Number of inputs feeding `v` besides itself (in-degree when directed).
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v`; in-neighbors when directed.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Out-neighbors of `v`; empty for undirected graphs.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        if self.directed {
            &self.out_adj[v]
        } else {
            &[]
        }
    }

    pub fn is_complete(&self) -> bool {
        !self.directed && self.n >= 1 && self.m() == self.n * (self.n - 1) / 2
    }

    /// 2-colorability check via BFS over the underlying undirected structure.
    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        let mut queue = Vec::new();
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            queue.push(start);
            while let Some(v) = queue.pop() {
                for &w in self.undirected_neighbors_iter(v) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undirected_neighbors_iter(&self, v: usize) -> impl Iterator<Item = &usize> {
        let outs: &[usize] = if self.directed { &self.out_adj[v] } else { &[] };
        self.adj[v].iter().chain(outs.iter())
    }

    /// Connected components of the underlying undirected structure, each
    /// sorted ascending; components ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            comp[start] = id;
            let mut members = vec![start];
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in self.undirected_neighbors_iter(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Kahn's algorithm; `None` if the graph is undirected or has a directed
    /// cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        if !self.directed {
            return None;
        }
        let mut indeg: Vec<usize> = (0..self.n).map(|v| self.adj[v].len()).collect();
        // BTreeSet keeps the frontier in ascending id order for determinism.
        let mut frontier: BTreeSet<usize> =
            (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(&v) = frontier.iter().next() {
            frontier.remove(&v);
            order.push(v);
            for &w in &self.out_adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    frontier.insert(w);
                }
            }
        }
        if order.len() == self.n {
            Some(order)
        } else {
            None
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Self::undirected(n, edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges = (0..n.saturating_sub(1)).map(|v| (v, v + 1)).collect();
        Self::undirected(n, edges).expect("path graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Self::undirected(n, edges).expect("cycle graph is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Self::undirected(a + b, edges).expect("complete bipartite graph is simple")
    }
}
