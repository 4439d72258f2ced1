//! Instance and template families for exhaustive and randomized checks.

use rand::Rng;

use crate::formula::{Graph, Instance, Var};

/// All `n(n-1)/2` vertex pairs of `0..n`, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(Var, Var)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// Every loop-free edge set on `0..n`, as the subsets of [`pairs`].
pub fn edge_sets(n: usize) -> impl Iterator<Item = Vec<(Var, Var)>> {
    let all = pairs(n);
    assert!(all.len() < 32, "too many edge subsets");
    (0u32..1 << all.len()).map(move |mask| {
        all.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect()
    })
}

/// Every assignment of counts from `allowed` to `n` variables.
pub fn count_vectors(n: usize, allowed: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                allowed.iter().map(move |&c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// Options for exhaustive instance enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Family<'a> {
    pub counts: &'a [u32],
    pub connected: bool,
    pub bipartite: bool,
}

/// All instances on exactly `n` variables from the family. Distinct
/// instances differ as ordered structures, so no symmetry reduction applies.
pub fn instances(n: usize, family: Family<'_>) -> Vec<Instance> {
    let count_vecs = count_vectors(n, family.counts);
    let mut out = Vec::new();
    for edges in edge_sets(n) {
        let shape = Instance::from_counts(&vec![1; n], &edges);
        if family.connected && shape.component_vars().len() > 1 {
            continue;
        }
        if family.bipartite && !shape.is_bipartite() {
            continue;
        }
        for counts in &count_vecs {
            out.push(Instance::from_counts(counts, &edges));
        }
    }
    out
}

/// All instances with `1..=max_n` variables from the family.
pub fn instances_up_to(max_n: usize, family: Family<'_>) -> Vec<Instance> {
    (1..=max_n).flat_map(|n| instances(n, family)).collect()
}

/// Every instance on `1..=max_n` variables with counts from `allowed` where
/// each variable may also carry a loop atom.
pub fn instances_with_loops(max_n: usize, allowed: &[u32]) -> Vec<Instance> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let counts = count_vectors(n, allowed);
        for edges in edge_sets(n) {
            for loops in 0u32..1 << n {
                let mut atoms = edges.clone();
                atoms.extend((0..n).filter(|v| loops >> v & 1 == 1).map(|v| (v, v)));
                for c in &counts {
                    out.push(Instance::from_counts(c, &atoms));
                }
            }
        }
    }
    out
}

/// Random instance: each pair is an atom with probability `p`; counts drawn
/// uniformly from `allowed`.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, allowed: &[u32], p: f64) -> Instance {
    let counts: Vec<u32> = (0..n)
        .map(|_| allowed[rng.gen_range(0..allowed.len())])
        .collect();
    let edges: Vec<_> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Instance::from_counts(&counts, &edges)
}

/// Random connected instance: a random spanning tree plus extra atoms with
/// probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, allowed: &[u32], p: f64) -> Instance {
    let counts: Vec<u32> = (0..n)
        .map(|_| allowed[rng.gen_range(0..allowed.len())])
        .collect();
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for e in pairs(n) {
        if !edges.contains(&e) && rng.gen_bool(p) {
            edges.push(e);
        }
    }
    Instance::from_counts(&counts, &edges)
}

/// Random connected bipartite instance: a random spanning tree plus extra
/// atoms between the two sides with probability `p`.
pub fn random_bipartite<R: Rng>(rng: &mut R, n: usize, allowed: &[u32], p: f64) -> Instance {
    let counts: Vec<u32> = (0..n)
        .map(|_| allowed[rng.gen_range(0..allowed.len())])
        .collect();
    let mut side = vec![false; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        side[v] = !side[u];
        edges.push((u, v));
    }
    for (a, b) in pairs(n) {
        if side[a] != side[b] && !edges.contains(&(a, b)) && rng.gen_bool(p) {
            edges.push((a, b));
        }
    }
    Instance::from_counts(&counts, &edges)
}

/// Random forest on `n` vertices: each vertex after the first joins a random
/// earlier vertex with probability `attach`.
pub fn random_forest<R: Rng>(rng: &mut R, n: usize, attach: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        if rng.gen_bool(attach) {
            edges.push((rng.gen_range(0..v), v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// All graphs on `n ≤ 3` vertices with any loops, up to isomorphism.
pub fn small_templates() -> Vec<Graph> {
    let mut out: Vec<Graph> = Vec::new();
    for n in 1..=3 {
        for edges in edge_sets(n) {
            for loops in 0u32..1 << n {
                let mut all = edges.clone();
                all.extend((0..n).filter(|v| loops >> v & 1 == 1).map(|v| (v, v)));
                let g = Graph::from_edges(n, &all);
                if !out.iter().any(|h| h.isomorphic(&g)) {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_of_families() {
        assert_eq!(edge_sets(4).count(), 64);
        assert_eq!(count_vectors(3, &[1, 2]).len(), 8);
        let connected = instances(
            3,
            Family {
                counts: &[2],
                connected: true,
                bipartite: false,
            },
        );
        // Connected labeled graphs on three vertices: three paths and a triangle.
        assert_eq!(connected.len(), 4);
    }

    #[test]
    fn small_template_census() {
        // Graphs with loops on one, two and three vertices: 2 + 6 + 20.
        assert_eq!(small_templates().len(), 28);
    }
}
