use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// A finite undirected graph whose vertices may carry loops.
///
/// Vertex `i` is adjacent to itself iff it has a loop.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<Vec<bool>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint {0} is not a declared vertex")]
    UnknownVertex(usize),
}

impl Graph {
    pub fn new(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(GraphError::DuplicateVertex(n.clone()));
            }
        }
        let n = names.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in edges {
            for e in [a, b] {
                if e >= n {
                    return Err(GraphError::UnknownVertex(e));
                }
            }
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Ok(Graph { names, adj })
    }

    /// Vertices `0..n` named by their index, with the given edges
    /// (`(v, v)` is a loop).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Graph::new(names, edges.iter().copied()).expect("valid fixture")
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        Graph::from_edges(n, &edges)
    }

    /// The path `P_n` on `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    /// The cycle `C_n`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Path `0 - 1 - 2` with a loop at `0`.
    pub fn p100() -> Self {
        Graph::from_edges(3, &[(0, 0), (0, 1), (1, 2)])
    }

    /// A single edge with a loop at one end.
    pub fn p10() -> Self {
        Graph::from_edges(2, &[(0, 0), (0, 1)])
    }

    /// Path on three vertices with loops at both ends.
    pub fn p101() -> Self {
        Graph::from_edges(3, &[(0, 0), (0, 1), (1, 2), (2, 2)])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adj[v][v]
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.has_loop(v)).collect()
    }

    /// Neighbours of `v`, including `v` itself when looped.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&w| self.adj[v][w])
    }

    /// Non-loop edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.adj[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.len()).all(|v| !self.has_loop(v))
    }

    /// True if `self` is `K_n` for `n = self.len()`.
    pub fn is_complete(&self) -> bool {
        self.is_irreflexive() && self.edge_count() == self.len() * self.len().saturating_sub(1) / 2
    }

    fn degree_without_loop(&self, v: usize) -> usize {
        self.neighbours(v).filter(|&w| w != v).count()
    }

    /// Vertex sets of the connected components, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Proper 2-colouring as booleans, or `None` if some component has an odd
    /// cycle (loops included).
    pub fn two_colouring(&self) -> Option<Vec<bool>> {
        let mut colour: Vec<Option<bool>> = vec![None; self.len()];
        for s in 0..self.len() {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for w in self.neighbours(v) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_colouring().is_some()
    }

    /// Irreflexive and acyclic.
    pub fn is_forest(&self) -> bool {
        self.is_irreflexive() && self.edge_count() + self.components().len() == self.len()
    }

    /// True if some 4-cycle exists (four distinct vertices).
    pub fn has_four_cycle(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for c in a + 1..n {
                let common = (0..n)
                    .filter(|&b| b != a && b != c && self.adj[a][b] && self.adj[c][b])
                    .count();
                if common >= 2 {
                    return true;
                }
            }
        }
        false
    }

    /// Number of vertices on a longest path inside each tree, per component.
    ///
    /// Only meaningful for forests; computed by the two-sweep method.
    pub fn longest_paths(&self) -> Vec<usize> {
        self.components()
            .iter()
            .map(|comp| {
                let (far, _) = self.farthest(comp[0]);
                let (_, d) = self.farthest(far);
                d + 1
            })
            .collect()
    }

    fn farthest(&self, s: usize) -> (usize, usize) {
        let mut dist = vec![usize::MAX; self.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut best = (s, 0);
        while let Some(v) = queue.pop_front() {
            if dist[v] > best.1 {
                best = (v, dist[v]);
            }
            for w in self.neighbours(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        best
    }

    /// Looped vertices adjacent to every vertex.
    pub fn dominating_loops(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&w| (0..self.len()).all(|v| self.adj[w][v]))
            .collect()
    }

    /// The graph induced on all vertices except `v`.
    pub fn without(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.len()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    pub fn induced(&self, keep: &[usize]) -> Graph {
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate().skip(i) {
                if self.adj[a][b] {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(names, edges).expect("induced subgraph is valid")
    }

    /// Disjoint union, with the vertices of `other` renamed by suffix when
    /// names clash.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.len();
        let mut names = self.names.clone();
        for n in &other.names {
            let mut name = n.clone();
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
        }
        let mut edges = Vec::new();
        for a in 0..self.len() {
            for b in a..self.len() {
                if self.adj[a][b] {
                    edges.push((a, b));
                }
            }
        }
        for a in 0..other.len() {
            for b in a..other.len() {
                if other.adj[a][b] {
                    edges.push((a + offset, b + offset));
                }
            }
        }
        Graph::new(names, edges).expect("disjoint union is valid")
    }

    /// The same graph with vertex `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut names = vec![String::new(); self.len()];
        for (i, &p) in perm.iter().enumerate() {
            names[p] = self.names[i].clone();
        }
        let mut edges = Vec::new();
        for a in 0..self.len() {
            for b in a..self.len() {
                if self.adj[a][b] {
                    edges.push((perm[a], perm[b]));
                }
            }
        }
        Graph::new(names, edges).expect("permutation of a valid graph")
    }

    /// Whether `self` and `other` are isomorphic; brute force, small graphs only.
    pub fn isomorphic(&self, other: &Graph) -> bool {
        if self.len() != other.len()
            || self.edge_count() != other.edge_count()
            || self.loops().len() != other.loops().len()
        {
            return false;
        }
        let n = self.len();
        let mut deg_a: Vec<_> = (0..n)
            .map(|v| (self.degree_without_loop(v), self.has_loop(v)))
            .collect();
        let mut deg_b: Vec<_> = (0..n)
            .map(|v| (other.degree_without_loop(v), other.has_loop(v)))
            .collect();
        deg_a.sort_unstable();
        deg_b.sort_unstable();
        if deg_a != deg_b {
            return false;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_iso(other, 0, &mut map, &mut used)
    }

    fn extend_iso(&self, other: &Graph, v: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if v == self.len() {
            return true;
        }
        for c in 0..other.len() {
            if used[c] {
                continue;
            }
            let ok = (0..=v).all(|u| {
                let cu = if u == v { c } else { map[u] };
                self.adj[u][v] == other.adj[cu][c]
            });
            if ok {
                map[v] = c;
                used[c] = true;
                if self.extend_iso(other, v + 1, map, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        map[v] = usize::MAX;
        false
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.len())
            .field("loops", &self.loops())
            .field("edges", &self.edges())
            .finish()
    }
}

/// A template: a finite graph or the two-way infinite path over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Template {
    Finite(Graph),
    InfinitePath,
}

impl Template {
    /// Resolves a named template: `k<N>`, `path<N>`, `cycle<N>`, `infpath`,
    /// `p100`, `p10`, `p101`.
    pub fn named(spec: &str) -> Option<Template> {
        let graph = match spec {
            "infpath" => return Some(Template::InfinitePath),
            "p100" => Graph::p100(),
            "p10" => Graph::p10(),
            "p101" => Graph::p101(),
            _ => {
                let (ctor, digits): (fn(usize) -> Graph, &str) =
                    if let Some(d) = spec.strip_prefix("path") {
                        (Graph::path, d)
                    } else if let Some(d) = spec.strip_prefix("cycle") {
                        (Graph::cycle, d)
                    } else {
                        (Graph::complete, spec.strip_prefix('k')?)
                    };
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                let n: usize = digits.parse().ok()?;
                let min = if spec.starts_with("cycle") { 3 } else { 1 };
                if n < min || n > 64 {
                    return None;
                }
                ctor(n)
            }
        };
        Some(Template::Finite(graph))
    }

    /// Resolves a named template or an inline edge list `N:a-b,c-d,...` on
    /// vertices `0..N`, where `v-v` is a loop.
    pub fn parse_spec(spec: &str) -> Option<Template> {
        let Some((n, edges)) = spec.split_once(':') else {
            return Template::named(spec);
        };
        let n: usize = n.parse().ok()?;
        if n == 0 || n > 64 {
            return None;
        }
        let mut list = Vec::new();
        for pair in edges.split(',').filter(|p| !p.is_empty()) {
            let (a, b) = pair.split_once('-')?;
            let (a, b): (usize, usize) = (a.parse().ok()?, b.parse().ok()?);
            if a >= n || b >= n {
                return None;
            }
            list.push((a, b));
        }
        Some(Template::Finite(Graph::from_edges(n, &list)))
    }

    pub fn finite(&self) -> Option<&Graph> {
        match self {
            Template::Finite(g) => Some(g),
            Template::InfinitePath => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_constructors() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.is_complete());
        assert_eq!(Graph::path(5).edge_count(), 4);
        assert_eq!(Graph::cycle(6).edge_count(), 6);
        let p100 = Graph::p100();
        assert_eq!(p100.loops(), vec![0]);
        assert_eq!(p100.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(Graph::p10().loops(), vec![0]);
        assert_eq!(Graph::p101().loops(), vec![0, 2]);
    }

    #[test]
    fn named_specs() {
        assert_eq!(
            Template::named("k4"),
            Some(Template::Finite(Graph::complete(4)))
        );
        assert_eq!(Template::named("infpath"), Some(Template::InfinitePath));
        assert_eq!(
            Template::named("path7"),
            Some(Template::Finite(Graph::path(7)))
        );
        assert_eq!(Template::named("cycle2"), None);
        assert_eq!(Template::named("k"), None);
        assert_eq!(Template::named("kx"), None);
        assert_eq!(Template::named("tree3"), None);
    }

    #[test]
    fn inline_specs() {
        let star = Template::parse_spec("4:0-0,0-1,0-2,0-3").unwrap();
        assert_eq!(star.finite().unwrap().dominating_loops(), vec![0]);
        assert_eq!(
            Template::parse_spec("3:"),
            Some(Template::Finite(Graph::from_edges(3, &[])))
        );
        assert_eq!(Template::parse_spec("cycle6"), Template::named("cycle6"));
        assert_eq!(Template::parse_spec("2:0-2"), None);
        assert_eq!(Template::parse_spec("0:"), None);
        assert_eq!(Template::parse_spec("2:0+1"), None);
    }

    #[test]
    fn structural_queries() {
        assert!(Graph::path(6).is_forest());
        assert!(!Graph::cycle(4).is_forest());
        assert!(Graph::cycle(4).has_four_cycle());
        assert!(!Graph::cycle(6).has_four_cycle());
        assert!(!Graph::cycle(5).is_bipartite());
        assert!(!Graph::p10().is_bipartite());
        let two_trees = Graph::path(3).disjoint_union(&Graph::path(4));
        assert_eq!(two_trees.longest_paths(), vec![3, 4]);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.longest_paths(), vec![3]);
        assert_eq!(Graph::p100().dominating_loops(), Vec::<usize>::new());
        assert_eq!(Graph::p10().dominating_loops(), vec![0]);
    }

    #[test]
    fn isomorphism_ignores_labels() {
        let a = Graph::from_edges(3, &[(0, 0), (0, 1), (1, 2)]);
        let b = a.permuted(&[2, 1, 0]);
        assert!(a.isomorphic(&b));
        assert!(!a.isomorphic(&Graph::p101()));
    }
}
