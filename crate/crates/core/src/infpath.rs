//! Counting quantifiers `∃` and `∃≥2` on the two-way infinite path.
//!
//! A looping walk from `u` to `v` is a walk with distinct endpoints whose
//! interior is quantified after both endpoints and which splits at an interior
//! vertex into two looping walks. Its value `λ` is its length minus twice the
//! summed `count - 1` of its interior. `δ(u, v)` is the least `λ` over looping
//! walks between `u` and `v`.
//!
//! A looping walk of length at least two splits at some interior `w` into
//! looping walks `u..w` and `w..v`, so
//!
//! ```text
//! δ(u, v) = min( 1 if uv is an atom,
//!                min over w after u and v of δ(u, w) + δ(w, v) - 2·count(w) + 2 )
//! ```
//!
//! Every term on the right has a later endpoint than `max(u, v)`, so one pass
//! over pairs in decreasing order of their later endpoint computes `δ` exactly.
//!
//! The instance is true on the infinite path iff it is loop-free, bipartite
//! and no pair `u ≺ v` has `δ(u, v) ≤ count(v) - 2` (a bad walk).

use thiserror::Error;

use crate::formula::{Instance, Var};
use crate::oracle::{Adversary, Prover};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Via {
    Atom,
    Split(Var),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    lambda: i64,
    /// Length of the shortest walk attaining `lambda`, saturating.
    length: u64,
    via: Via,
}

/// The symmetric partial map `δ`, with the walks that attain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    n: usize,
    entries: Vec<Option<Entry>>,
}

impl DeltaTable {
    fn idx(&self, u: Var, v: Var) -> usize {
        u.min(v) * self.n + u.max(v)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `δ(u, v)`, or `None` when no looping walk joins them (`∞`).
    pub fn get(&self, u: Var, v: Var) -> Option<i64> {
        assert_ne!(u, v, "δ is undefined on the diagonal");
        self.entries[self.idx(u, v)].map(|e| e.lambda)
    }

    /// A shortest looping walk from `u` to `v` attaining `δ(u, v)`.
    pub fn walk(&self, u: Var, v: Var) -> Option<Vec<Var>> {
        self.get(u, v)?;
        let mut out = vec![u];
        self.extend_walk(u, v, &mut out);
        Some(out)
    }

    fn extend_walk(&self, u: Var, v: Var, out: &mut Vec<Var>) {
        match self.entries[self.idx(u, v)].expect("finite entry").via {
            Via::Atom => out.push(v),
            Via::Split(w) => {
                self.extend_walk(u, w, out);
                self.extend_walk(w, v, out);
            }
        }
    }

    /// Pairs `(u, v)`, `u < v`, with `δ(u, v) ≤ count(v) - 2`, in
    /// lexicographic order.
    pub fn bad_pairs(&self, inst: &Instance) -> Vec<(Var, Var)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if let Some(d) = self.get(u, v) {
                    if d <= inst.count(v) as i64 - 2 {
                        out.push((u, v));
                    }
                }
            }
        }
        out
    }
}

/// A looping walk `u = walk[0] ≺ v = walk.last()` with `λ ≤ count(v) - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadWalk {
    pub walk: Vec<Var>,
    pub lambda: i64,
}

/// Outcome of the `δ` computation with early exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Delta {
    Table(DeltaTable),
    /// Stopped at the first pair violating `δ(u, v) ≥ count(v) - 1`.
    EarlyNo(BadWalk),
}

fn compute(inst: &Instance, stop_early: bool) -> Result<DeltaTable, BadWalk> {
    let n = inst.len();
    let mut table = DeltaTable {
        n,
        entries: vec![None; n * n],
    };
    for m in (0..n).rev() {
        for u in 0..m {
            let mut best: Option<Entry> = inst.has_atom(u, m).then_some(Entry {
                lambda: 1,
                length: 1,
                via: Via::Atom,
            });
            for w in m + 1..n {
                let (Some(a), Some(b)) = (
                    table.entries[table.idx(u, w)],
                    table.entries[table.idx(m, w)],
                ) else {
                    continue;
                };
                let cand = Entry {
                    lambda: a.lambda + b.lambda - 2 * inst.count(w) as i64 + 2,
                    length: a.length.saturating_add(b.length),
                    via: Via::Split(w),
                };
                if best.is_none_or(|e| (cand.lambda, cand.length) < (e.lambda, e.length)) {
                    best = Some(cand);
                }
            }
            let i = table.idx(u, m);
            table.entries[i] = best;
            if stop_early {
                if let Some(e) = best {
                    if e.lambda <= inst.count(m) as i64 - 2 {
                        let walk = table.walk(u, m).expect("finite entry");
                        return Err(BadWalk {
                            walk,
                            lambda: e.lambda,
                        });
                    }
                }
            }
        }
    }
    Ok(table)
}

/// Computes `δ`, stopping at the first bad walk found.
///
/// Expects a bipartite instance; the values are still well defined otherwise.
pub fn delta_table(inst: &Instance) -> Delta {
    match compute(inst, true) {
        Ok(t) => Delta::Table(t),
        Err(b) => Delta::EarlyNo(b),
    }
}

/// Computes `δ` for every pair, bad walks included.
pub fn full_delta_table(inst: &Instance) -> DeltaTable {
    compute(inst, false).expect("no early exit")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk needs at least two entries")]
    TooShort,
    #[error("variable {0} is out of range")]
    OutOfRange(Var),
    #[error("consecutive entries {0} and {1} are not joined by an atom")]
    NotAnAtom(Var, Var),
}

/// `λ` of a walk: its length minus twice the summed `count - 1` of the
/// interior entries, with multiplicity.
pub fn walk_lambda(inst: &Instance, walk: &[Var]) -> Result<i64, WalkError> {
    if walk.len() < 2 {
        return Err(WalkError::TooShort);
    }
    if let Some(&v) = walk.iter().find(|&&v| v >= inst.len()) {
        return Err(WalkError::OutOfRange(v));
    }
    for p in walk.windows(2) {
        if p[0] == p[1] || !inst.has_atom(p[0], p[1]) {
            return Err(WalkError::NotAnAtom(p[0], p[1]));
        }
    }
    let interior: i64 = walk[1..walk.len() - 1]
        .iter()
        .map(|&v| inst.count(v) as i64 - 1)
        .sum();
    Ok(walk.len() as i64 - 1 - 2 * interior)
}

/// Whether `walk` is a looping walk: distinct endpoints, every interior entry
/// after both endpoints, and a recursive split into looping walks.
pub fn is_looping_walk(inst: &Instance, walk: &[Var]) -> bool {
    if walk_lambda(inst, walk).is_err() {
        return false;
    }
    looping(walk)
}

fn looping(walk: &[Var]) -> bool {
    let (first, last) = (walk[0], walk[walk.len() - 1]);
    if first == last {
        return false;
    }
    if walk.len() == 2 {
        return true;
    }
    let interior = &walk[1..walk.len() - 1];
    if interior.iter().any(|&x| x <= first.max(last)) {
        return false;
    }
    (1..walk.len() - 1).any(|l| looping(&walk[..=l]) && looping(&walk[l..]))
}

/// Why an instance is false on the infinite path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    LoopAtom(Var),
    /// A closed walk of odd length.
    OddCycle(Vec<Var>),
    BadWalk(BadWalk),
}

/// Decides the instance on the infinite path.
pub fn decide_infinite_path(inst: &Instance) -> bool {
    if inst.has_loop_atom() || !inst.is_bipartite() {
        return false;
    }
    matches!(delta_table(inst), Delta::Table(_))
}

/// Like [`decide_infinite_path`], returning a checkable reason on NO. The bad
/// walk reported is a shortest one for the lexicographically least bad pair.
pub fn refute_infinite_path(inst: &Instance) -> Option<Refutation> {
    if let Some((v, _)) = inst.atoms().find(|&(a, b)| a == b) {
        return Some(Refutation::LoopAtom(v));
    }
    if let Some(cycle) = odd_cycle(inst) {
        return Some(Refutation::OddCycle(cycle));
    }
    let table = full_delta_table(inst);
    let &(u, v) = table.bad_pairs(inst).first()?;
    Some(Refutation::BadWalk(BadWalk {
        walk: table.walk(u, v).expect("bad pairs are finite"),
        lambda: table.get(u, v).expect("bad pairs are finite"),
    }))
}

/// An odd closed walk `x0, x1, ..., x0`, if the instance graph has one.
pub fn odd_cycle(inst: &Instance) -> Option<Vec<Var>> {
    let adj = inst.adjacency();
    let n = inst.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for s in 0..n {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                } else if depth[w] == depth[v] {
                    let up = |mut x: usize| {
                        let mut path = vec![x];
                        while parent[x] != usize::MAX {
                            x = parent[x];
                            path.push(x);
                        }
                        path
                    };
                    let (pv, pw) = (up(v), up(w));
                    // Trim the shared tail above the lowest common ancestor.
                    let mut i = pv.len();
                    let mut j = pw.len();
                    while i > 1 && j > 1 && pv[i - 2] == pw[j - 2] {
                        i -= 1;
                        j -= 1;
                    }
                    let mut cycle: Vec<Var> = pv[..i].to_vec();
                    cycle.extend(pw[..j - 1].iter().rev());
                    cycle.push(v);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

/// The interval of values for the next variable keeping `|f(u) - f(v)| ≤ δ(u, v)`
/// for every earlier `u` with finite `δ`; `None` when unconstrained.
pub fn offer_window(table: &DeltaTable, prefix: &[i64]) -> Option<(i64, i64)> {
    let v = prefix.len();
    let mut window: Option<(i64, i64)> = None;
    for (u, &fu) in prefix.iter().enumerate() {
        if let Some(d) = table.get(u, v) {
            let (lo, hi) = (fu - d, fu + d);
            window = Some(match window {
                None => (lo, hi),
                Some((a, b)) => (a.max(lo), b.min(hi)),
            });
        }
    }
    window
}

/// Prover for the infinite path: offers the top of the window and, for
/// `∃≥2`, the value two below it; `0` (and `2`) when unconstrained.
pub struct InfPathProver<'a> {
    inst: &'a Instance,
    table: DeltaTable,
}

impl<'a> InfPathProver<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        InfPathProver {
            inst,
            table: full_delta_table(inst),
        }
    }

    pub fn table(&self) -> &DeltaTable {
        &self.table
    }
}

/// The offer of [`InfPathProver`] for the next variable.
pub fn infpath_prover_offers(inst: &Instance, table: &DeltaTable, prefix: &[i64]) -> Vec<i64> {
    let two = inst.count(prefix.len()) != 1;
    match offer_window(table, prefix) {
        None if two => vec![0, 2],
        None => vec![0],
        Some((_, top)) if two => vec![top - 2, top],
        Some((_, top)) => vec![top],
    }
}

impl Prover<i64> for InfPathProver<'_> {
    fn offer(&mut self, prefix: &[i64]) -> Vec<i64> {
        infpath_prover_offers(self.inst, &self.table, prefix)
    }
}

/// Adversary that takes an offered value breaking `|f(u) - f(v)| ≤ δ(u, v)`
/// or the parity of `f(u) + f(v) + δ(u, v)` for some earlier `u`, when one
/// exists, and otherwise the first offered value.
pub struct ViolationSeeker {
    table: DeltaTable,
}

impl ViolationSeeker {
    pub fn new(inst: &Instance) -> Self {
        ViolationSeeker {
            table: full_delta_table(inst),
        }
    }
}

impl Adversary<i64> for ViolationSeeker {
    fn pick(&mut self, prefix: &[i64], offered: &[i64]) -> i64 {
        let v = prefix.len();
        let breaks = |c: i64| {
            prefix.iter().enumerate().any(|(u, &fu)| {
                self.table
                    .get(u, v)
                    .is_some_and(|d| (fu - c).abs() > d || (fu + c + d).rem_euclid(2) == 1)
            })
        };
        offered
            .iter()
            .copied()
            .find(|&c| breaks(c))
            .unwrap_or(offered[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom() {
        let inst = Instance::from_counts(&[2, 2], &[(0, 1)]);
        let t = full_delta_table(&inst);
        assert_eq!(t.get(0, 1), Some(1));
        assert_eq!(t.walk(0, 1), Some(vec![0, 1]));
        assert!(decide_infinite_path(&inst));
    }

    #[test]
    fn split_walk_through_later_vertex() {
        // u=0, v=1 both joined to w=2 (∃≥2): λ(0,2,1) = 2 - 2 = 0.
        let inst = Instance::from_counts(&[1, 2, 2], &[(0, 2), (1, 2)]);
        let t = full_delta_table(&inst);
        assert_eq!(t.get(0, 1), Some(0));
        assert_eq!(t.walk(0, 1), Some(vec![0, 2, 1]));
        assert!(!decide_infinite_path(&inst));
        match delta_table(&inst) {
            Delta::EarlyNo(b) => {
                assert_eq!(b.walk, vec![0, 2, 1]);
                assert_eq!(b.lambda, 0);
            }
            other => panic!("expected early NO, got {other:?}"),
        }
    }

    #[test]
    fn earlier_interior_is_not_looping() {
        // Interior 0 precedes both endpoints: no looping walk 1..2.
        let inst = Instance::from_counts(&[2, 1, 1], &[(0, 1), (0, 2)]);
        let t = full_delta_table(&inst);
        assert_eq!(t.get(1, 2), None);
        assert!(!is_looping_walk(&inst, &[1, 0, 2]));
    }

    #[test]
    fn lambda_of_edge_is_one() {
        let inst = Instance::from_counts(&[2, 2], &[(0, 1)]);
        assert_eq!(walk_lambda(&inst, &[0, 1]), Ok(1));
        assert_eq!(walk_lambda(&inst, &[0]), Err(WalkError::TooShort));
        assert_eq!(walk_lambda(&inst, &[0, 0]), Err(WalkError::NotAnAtom(0, 0)));
    }

    #[test]
    fn triangle_is_refuted_by_odd_cycle() {
        let inst = Instance::from_counts(&[1, 1, 1], &[(0, 1), (1, 2), (0, 2)]);
        assert!(!decide_infinite_path(&inst));
        match refute_infinite_path(&inst) {
            Some(Refutation::OddCycle(c)) => {
                assert_eq!(c.first(), c.last());
                assert_eq!(c.len() % 2, 0);
                for p in c.windows(2) {
                    assert!(inst.has_atom(p[0], p[1]));
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn window_and_offers() {
        let inst = Instance::from_counts(&[1, 1], &[(0, 1)]);
        let t = full_delta_table(&inst);
        assert_eq!(offer_window(&t, &[5]), Some((4, 6)));
        assert_eq!(infpath_prover_offers(&inst, &t, &[5]), vec![6]);
        let lone = Instance::from_counts(&[2], &[]);
        let t = full_delta_table(&lone);
        assert_eq!(infpath_prover_offers(&lone, &t, &[]), vec![0, 2]);
    }
}
