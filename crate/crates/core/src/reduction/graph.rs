use std::collections::BTreeSet;
use std::fmt;

use crate::model::AlgebraicSystem;

/// Undirected graph on species: an edge joins two species that multiply in
/// some monomial of some equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    pub vertices: Vec<String>,
    /// Pairs `(i, j)` with `i < j`, indices into `vertices`.
    pub edges: BTreeSet<(usize, usize)>,
    /// Species occurring with exponent at least 2.
    pub nonlinear: BTreeSet<usize>,
}

impl DependencyGraph {
    pub fn new(vertices: Vec<String>) -> Self {
        DependencyGraph {
            vertices,
            edges: BTreeSet::new(),
            nonlinear: BTreeSet::new(),
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.vertices.len() && b < self.vertices.len());
        if a != b {
            self.edges.insert((a.min(b), a.max(b)));
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_cover(&self, cover: &BTreeSet<usize>) -> bool {
        self.nonlinear.is_subset(cover)
            && self
                .edges
                .iter()
                .all(|(a, b)| cover.contains(a) || cover.contains(b))
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].clone(), self.vertices[b].clone()))
            .collect()
    }
}

impl fmt::Display for DependencyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices.join(" "))?;
        for (a, b) in self.edge_names() {
            writeln!(f, "edge: {a} -- {b}")?;
        }
        let nl: Vec<&str> = self.nonlinear.iter().map(|&i| self.vertices[i].as_str()).collect();
        write!(f, "nonlinear: {}", nl.join(" "))
    }
}

pub fn build_dependency_graph(sys: &AlgebraicSystem) -> DependencyGraph {
    let n = sys.variables.len();
    let mut g = DependencyGraph::new(sys.variables.clone());
    for eq in &sys.equations {
        for (m, _) in eq.terms() {
            let present: Vec<usize> = (0..n).filter(|&i| m[i] > 0).collect();
            for (k, &a) in present.iter().enumerate() {
                if m[a] >= 2 {
                    g.nonlinear.insert(a);
                }
                for &b in &present[k + 1..] {
                    g.add_edge(a, b);
                }
            }
        }
    }
    g
}
