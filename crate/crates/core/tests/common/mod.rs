//! Brute-force reference implementations used only by the tests. Each one
//! follows a definition directly, with no memo tables or pruning shared with
//! the library.

#![allow(dead_code)]

use proptest::prelude::*;
use xcsp::formula::{Graph, Instance};
use xcsp::generate::pairs;

/// Game value by literal enumeration of Prover's `count`-subsets.
pub fn subset_minimax(inst: &Instance, g: &Graph) -> bool {
    fn win(inst: &Instance, g: &Graph, prefix: &mut Vec<usize>) -> bool {
        let v = prefix.len();
        if v == inst.len() {
            return inst.atoms().all(|(a, b)| g.adjacent(prefix[a], prefix[b]));
        }
        let need = inst.count(v) as usize;
        subsets(g.len(), need).into_iter().any(|offer| {
            offer.into_iter().all(|c| {
                prefix.push(c);
                let ok = win(inst, g, prefix);
                prefix.pop();
                ok
            })
        })
    }
    win(inst, g, &mut Vec::new())
}

/// All `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Whether the atoms of `inst` map homomorphically into `g`, ignoring counts.
pub fn homomorphism(inst: &Instance, g: &Graph) -> bool {
    fn extend(inst: &Instance, g: &Graph, f: &mut Vec<usize>) -> bool {
        let v = f.len();
        if v == inst.len() {
            return true;
        }
        for c in 0..g.len() {
            f.push(c);
            let ok = inst
                .atoms()
                .filter(|&(_, b)| b == v)
                .all(|(a, b)| g.adjacent(f[a], f[b]));
            if ok && extend(inst, g, f) {
                return true;
            }
            f.pop();
        }
        false
    }
    extend(inst, g, &mut Vec::new())
}

/// Connected components by union-find, each sorted, ordered by first member.
pub fn union_find_components(inst: &Instance) -> Vec<Vec<usize>> {
    let n = inst.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in inst.atoms() {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = root(&mut parent, v);
        match groups.iter_mut().find(|g| g[0] == r) {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    groups
}

/// The looping-walk predicate, straight from its recursive definition.
pub fn looping(inst: &Instance, w: &[usize]) -> bool {
    let r = w.len();
    if r < 2
        || w[0] == w[r - 1]
        || w.windows(2)
            .any(|p| !inst.has_atom(p[0], p[1]) || p[0] == p[1])
    {
        return false;
    }
    if r == 2 {
        return true;
    }
    let (x, y) = (w[0], w[r - 1]);
    if !w[1..r - 1].iter().all(|&z| z > x && z > y) {
        return false;
    }
    (1..r - 1).any(|l| looping(inst, &w[..=l]) && looping(inst, &w[l..]))
}

/// `λ` of a walk.
pub fn lambda(inst: &Instance, w: &[usize]) -> i64 {
    let interior: i64 = w[1..w.len() - 1]
        .iter()
        .map(|&z| inst.count(z) as i64 - 1)
        .sum();
    (w.len() as i64 - 1) - 2 * interior
}

/// Minimum `λ` over looping walks from `u` to `v`, by enumerating every
/// walk whose interior lies after `u`. A looping walk through `k` later
/// vertices is at most `2^k` long, so the length bound is exact.
pub fn delta_by_walks(inst: &Instance, u: usize, v: usize) -> Option<i64> {
    let later = inst.len() - 1 - u.max(v);
    let max_len = 1usize << later.min(10);
    let adj = inst.adjacency();
    let mut best = None;
    let mut walk = vec![u];
    fn go(
        inst: &Instance,
        adj: &[Vec<usize>],
        v: usize,
        max_len: usize,
        walk: &mut Vec<usize>,
        best: &mut Option<i64>,
    ) {
        let last = *walk.last().unwrap();
        if last == v && walk.len() > 1 {
            if looping(inst, walk) {
                let l = lambda(inst, walk);
                *best = Some(best.map_or(l, |b: i64| b.min(l)));
            }
            return;
        }
        if walk.len() > max_len {
            return;
        }
        for &z in &adj[last] {
            if z == v || z > walk[0].max(v) {
                walk.push(z);
                go(inst, adj, v, max_len, walk, best);
                walk.pop();
            }
        }
    }
    go(inst, &adj, v, max_len, &mut walk, &mut best);
    best
}

/// Random instance: `1..=max_n` variables, counts from `allowed`, any atoms
/// (loops too when `loops` is set).
pub fn instance(
    max_n: usize,
    allowed: &'static [u32],
    loops: bool,
) -> impl Strategy<Value = Instance> {
    (1..=max_n).prop_flat_map(move |n| {
        let m = pairs(n).len();
        (
            proptest::collection::vec(proptest::sample::select(allowed), n),
            proptest::collection::vec(any::<bool>(), m),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(counts, mask, looped)| {
                let mut atoms: Vec<_> = pairs(n)
                    .into_iter()
                    .zip(mask)
                    .filter(|(_, keep)| *keep)
                    .map(|(p, _)| p)
                    .collect();
                if loops {
                    atoms.extend((0..n).filter(|&v| looped[v]).map(|v| (v, v)));
                }
                Instance::from_counts(&counts, &atoms)
            })
    })
}

/// Random graph on `1..=max_n` vertices, loops allowed when `loops` is set.
pub fn graph(max_n: usize, loops: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            proptest::collection::vec(any::<bool>(), pairs(n).len()),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(mask, looped)| {
                let mut edges: Vec<_> = pairs(n)
                    .into_iter()
                    .zip(mask)
                    .filter(|(_, keep)| *keep)
                    .map(|(p, _)| p)
                    .collect();
                if loops {
                    edges.extend((0..n).filter(|&v| looped[v]).map(|v| (v, v)));
                }
                Graph::from_edges(n, &edges)
            })
    })
}
