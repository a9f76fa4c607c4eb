use std::collections::BTreeSet;

use super::DependencyGraph;

/// Minimum vertex cover containing every nonlinear vertex.
///
/// Exact branch and bound over vertices in index order, trying "include"
/// before "exclude". Only strictly smaller covers replace the incumbent, so
/// the result is the lexicographically smallest cover among those of
/// minimum size.
pub fn minimum_vertex_cover(g: &DependencyGraph) -> BTreeSet<usize> {
    let n = g.len();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbours(v)).collect();
    let mut search = Search {
        g,
        adj: &adj,
        state: vec![None; n],
        best: None,
    };
    search.branch(0, 0);
    search.best.expect("including every vertex is always a cover")
}

struct Search<'a> {
    g: &'a DependencyGraph,
    adj: &'a [Vec<usize>],
    state: Vec<Option<bool>>,
    best: Option<BTreeSet<usize>>,
}

impl Search<'_> {
    /// Size of a greedy matching on edges with both ends undecided: a lower
    /// bound on how many more vertices are needed.
    fn matching_bound(&self, from: usize) -> usize {
        let mut used = vec![false; self.state.len()];
        let mut size = 0;
        for &(a, b) in &self.g.edges {
            if a >= from && b >= from && !used[a] && !used[b] {
                used[a] = true;
                used[b] = true;
                size += 1;
            }
        }
        size
    }

    fn branch(&mut self, v: usize, size: usize) {
        if let Some(best) = &self.best {
            if size + self.matching_bound(v) >= best.len() {
                return;
            }
        }
        if v == self.state.len() {
            let cover = (0..v).filter(|&i| self.state[i] == Some(true)).collect();
            self.best = Some(cover);
            return;
        }
        let forced = self.g.nonlinear.contains(&v)
            || self.adj[v]
                .iter()
                .any(|&u| u < v && self.state[u] == Some(false));
        self.state[v] = Some(true);
        self.branch(v + 1, size + 1);
        if !forced {
            // Excluding v forces its later neighbours in, which is accounted
            // for when they are reached.
            self.state[v] = Some(false);
            self.branch(v + 1, size);
        }
        self.state[v] = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> DependencyGraph {
        let mut g = DependencyGraph::new((0..n).map(|i| format!("v{i}")).collect());
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    #[test]
    fn triangle_tie_break() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(minimum_vertex_cover(&g), BTreeSet::from([0, 1]));
    }

    #[test]
    fn empty_graph() {
        assert!(minimum_vertex_cover(&graph(4, &[])).is_empty());
        assert!(minimum_vertex_cover(&graph(0, &[])).is_empty());
    }

    #[test]
    fn star_picks_centre() {
        let g = graph(5, &[(4, 0), (4, 1), (4, 2), (4, 3)]);
        assert_eq!(minimum_vertex_cover(&g), BTreeSet::from([4]));
    }

    #[test]
    fn nonlinear_vertices_forced() {
        let mut g = graph(3, &[(0, 1)]);
        g.nonlinear.insert(2);
        assert_eq!(minimum_vertex_cover(&g), BTreeSet::from([0, 2]));
    }
}
