//! `∃≥2` on the complete graph with four vertices.
//!
//! The decider derives three relations over the instance variables:
//! pairs `F` that must receive different values, triples `R⁺` whose last
//! variable must repeat one of the two earlier values, and triples `R⁻` whose
//! last variable must avoid both. Starting from `F = atoms`, seven rules are
//! applied until nothing changes; the instance is true iff no triple of `R⁺`
//! contradicts `F` or `R⁻`.
//!
//! Triples are unordered; below, `x < y` compares quantifier positions and all
//! named variables in a rule are distinct.
//!
//! | rule | premises | conclusion |
//! |------|----------|------------|
//! | X1 | `{x,y} < z`, `xz, yz ∈ F` | `xyz ∈ R⁻` |
//! | X2 | `{x,y,w} < z`, `wz ∈ F`, `xyz ∈ R⁻` | `xyw ∈ R⁺` |
//! | X3 | `{x,y,w} < z`, `wz ∈ F`, `xyz ∈ R⁺` | `xyw ∈ R⁻` if `{x,y} < w`, else `xw, yw ∈ F` |
//! | X4 | `{x,w} < y < z`, `xyz ∈ R⁺`, `wyz ∈ R⁻` | `xw ∈ F`, `xyw ∈ R⁺` |
//! | X5 | `{x,y,w} < z`, `xyz, wyz` both in `R⁺` or both in `R⁻` | `xyw ∈ R⁺` |
//! | X6 | `{x,y,w} < q < z`, `xyz, wqz` both in `R⁺` or both in `R⁻` | `xyw, xyq ∈ R⁺` |
//! | X7 | `{x,y,w} < q < z`, one of `xyz, wqz` in `R⁺`, the other in `R⁻` | `xyq ∈ R⁻`; `xyw ∈ R⁻` if `{x,y} < w`, else `xw, yw ∈ F` |

use crate::formula::{Instance, Var};
use crate::oracle::Prover;

/// The closed relations `F`, `R⁺`, `R⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSets {
    n: usize,
    f: Vec<bool>,
    plus: Vec<bool>,
    minus: Vec<bool>,
}

fn sort3(a: Var, b: Var, c: Var) -> (Var, Var, Var) {
    let mut t = [a, b, c];
    t.sort_unstable();
    (t[0], t[1], t[2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Fact {
    F(Var, Var),
    Plus(Var, Var, Var),
    Minus(Var, Var, Var),
}

impl ClosureSets {
    fn empty(n: usize) -> Self {
        ClosureSets {
            n,
            f: vec![false; n * n],
            plus: vec![false; n * n * n],
            minus: vec![false; n * n * n],
        }
    }

    fn tri(&self, a: Var, b: Var, c: Var) -> usize {
        let (a, b, c) = sort3(a, b, c);
        (a * self.n + b) * self.n + c
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn in_f(&self, a: Var, b: Var) -> bool {
        a != b && self.f[a.min(b) * self.n + a.max(b)]
    }

    pub fn in_plus(&self, a: Var, b: Var, c: Var) -> bool {
        distinct(a, b, c) && self.plus[self.tri(a, b, c)]
    }

    pub fn in_minus(&self, a: Var, b: Var, c: Var) -> bool {
        distinct(a, b, c) && self.minus[self.tri(a, b, c)]
    }

    /// Pairs of `F` as `(a, b)`, `a < b`, in lexicographic order.
    pub fn f_pairs(&self) -> Vec<(Var, Var)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if self.in_f(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn triples(&self, set: &[bool]) -> Vec<(Var, Var, Var)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if set[(a * self.n + b) * self.n + c] {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    /// Triples of `R⁺` as sorted tuples, in lexicographic order.
    pub fn plus_triples(&self) -> Vec<(Var, Var, Var)> {
        self.triples(&self.plus)
    }

    /// Triples of `R⁻` as sorted tuples, in lexicographic order.
    pub fn minus_triples(&self) -> Vec<(Var, Var, Var)> {
        self.triples(&self.minus)
    }

    fn insert(&mut self, fact: Fact) -> bool {
        let slot = match fact {
            Fact::F(a, b) => {
                debug_assert_ne!(a, b);
                let i = a.min(b) * self.n + a.max(b);
                &mut self.f[i]
            }
            Fact::Plus(a, b, c) => {
                debug_assert!(distinct(a, b, c));
                let i = self.tri(a, b, c);
                &mut self.plus[i]
            }
            Fact::Minus(a, b, c) => {
                debug_assert!(distinct(a, b, c));
                let i = self.tri(a, b, c);
                &mut self.minus[i]
            }
        };
        !std::mem::replace(slot, true)
    }

    fn same(&self, plus: bool, a: Var, b: Var, c: Var) -> bool {
        if plus {
            self.in_plus(a, b, c)
        } else {
            self.in_minus(a, b, c)
        }
    }
}

fn distinct(a: Var, b: Var, c: Var) -> bool {
    a != b && b != c && a != c
}

/// Least relations containing the atoms and closed under X1–X7.
///
/// Loop atoms are ignored here; see [`decide_k4`].
pub fn closure(inst: &Instance) -> ClosureSets {
    let n = inst.len();
    let mut sets = ClosureSets::empty(n);
    let mut work: Vec<Fact> = Vec::new();
    for (a, b) in inst.atoms() {
        if a != b && sets.insert(Fact::F(a, b)) {
            work.push(Fact::F(a, b));
        }
    }
    let mut out = Vec::new();
    while let Some(fact) = work.pop() {
        consequences(&sets, fact, &mut out);
        for g in out.drain(..) {
            if sets.insert(g) {
                work.push(g);
            }
        }
    }
    sets
}

/// Conclusions of every rule instance in which `fact` is one of the premises.
fn consequences(s: &ClosureSets, fact: Fact, out: &mut Vec<Fact>) {
    match fact {
        Fact::F(a, b) => {
            let (w, z) = (a.min(b), a.max(b));
            // X1: the new pair is xz (or yz).
            for y in 0..z {
                if y != w && s.in_f(y, z) {
                    out.push(Fact::Minus(w, y, z));
                }
            }
            // X2, X3: the new pair is wz.
            for x in 0..z {
                for y in x + 1..z {
                    if x == w || y == w {
                        continue;
                    }
                    if s.in_minus(x, y, z) {
                        out.push(Fact::Plus(x, y, w));
                    }
                    if s.in_plus(x, y, z) {
                        x3(x, y, w, out);
                    }
                }
            }
        }
        Fact::Plus(a, b, c) | Fact::Minus(a, b, c) => {
            let plus = matches!(fact, Fact::Plus(..));
            let (a, b, z) = sort3(a, b, c);
            // X2 / X3: the new triple is xyz.
            for w in 0..z {
                if w != a && w != b && s.in_f(w, z) {
                    if plus {
                        x3(a, b, w, out);
                    } else {
                        out.push(Fact::Plus(a, b, w));
                    }
                }
            }
            // X4: the new triple is xyz ∈ R⁺ (x < y < z) or wyz ∈ R⁻.
            let y = b;
            for other in 0..y {
                if other == a {
                    continue;
                }
                if plus && s.in_minus(other, y, z) {
                    out.push(Fact::F(a, other));
                    out.push(Fact::Plus(a, y, other));
                }
                if !plus && s.in_plus(other, y, z) {
                    out.push(Fact::F(other, a));
                    out.push(Fact::Plus(other, y, a));
                }
            }
            // X5: shared variable y, the new triple plays xyz or wyz.
            for (y, x) in [(a, b), (b, a)] {
                for w in 0..z {
                    if w != x && w != y && s.same(plus, w, y, z) {
                        out.push(Fact::Plus(x, y, w));
                    }
                }
            }
            // X6 / X7 with the new triple as xyz.
            for q in b + 1..z {
                for w in 0..q {
                    if w == a || w == b {
                        continue;
                    }
                    if s.same(plus, w, q, z) {
                        x6(a, b, w, q, out);
                    }
                    if s.same(!plus, w, q, z) {
                        x7(a, b, w, q, out);
                    }
                }
            }
            // X6 / X7 with the new triple as wqz.
            let (w, q) = (a, b);
            for x in 0..q {
                for y in x + 1..q {
                    if x == w || y == w {
                        continue;
                    }
                    if s.same(plus, x, y, z) {
                        x6(x, y, w, q, out);
                    }
                    if s.same(!plus, x, y, z) {
                        x7(x, y, w, q, out);
                    }
                }
            }
        }
    }
}

fn x3(x: Var, y: Var, w: Var, out: &mut Vec<Fact>) {
    if x.max(y) < w {
        out.push(Fact::Minus(x, y, w));
    } else {
        out.push(Fact::F(x, w));
        out.push(Fact::F(y, w));
    }
}

fn x6(x: Var, y: Var, w: Var, q: Var, out: &mut Vec<Fact>) {
    out.push(Fact::Plus(x, y, w));
    out.push(Fact::Plus(x, y, q));
}

fn x7(x: Var, y: Var, w: Var, q: Var, out: &mut Vec<Fact>) {
    out.push(Fact::Minus(x, y, q));
    x3(x, y, w, out);
}

/// A reason the instance is false on `K₄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum K4Violation {
    LoopAtom(Var),
    /// `xyz ∈ R⁺` (`x < y < z`) with `xz ∈ F` or `yz ∈ F`; `pair` is the pair.
    PlusWithPair {
        triple: (Var, Var, Var),
        pair: (Var, Var),
    },
    /// `xyz ∈ R⁺` and `xwz ∈ R⁻` with `w < z` (possibly `w = y`), or
    /// `ywz ∈ R⁻` with `y < w < z`; `minus` is that triple, sorted.
    PlusWithMinus {
        triple: (Var, Var, Var),
        minus: (Var, Var, Var),
    },
}

/// Finds the first forbidden configuration in closed sets, if any.
pub fn find_violation(sets: &ClosureSets) -> Option<K4Violation> {
    for (x, y, z) in sets.plus_triples() {
        let triple = (x, y, z);
        for p in [(x, z), (y, z)] {
            if sets.in_f(p.0, p.1) {
                return Some(K4Violation::PlusWithPair { triple, pair: p });
            }
        }
        for w in 0..z {
            if w != x && sets.in_minus(x, w, z) {
                return Some(K4Violation::PlusWithMinus {
                    triple,
                    minus: sort3(x, w, z),
                });
            }
        }
        for w in y + 1..z {
            if sets.in_minus(y, w, z) {
                return Some(K4Violation::PlusWithMinus {
                    triple,
                    minus: sort3(y, w, z),
                });
            }
        }
    }
    None
}

/// The reason the instance is false on `K₄`, or `None` when it is true.
/// Every count must be 2.
pub fn refute_k4(inst: &Instance) -> Option<K4Violation> {
    if let Some((v, _)) = inst.atoms().find(|&(a, b)| a == b) {
        return Some(K4Violation::LoopAtom(v));
    }
    find_violation(&closure(inst))
}

/// Decides an all-`∃≥2` instance on `K₄`.
pub fn decide_k4(inst: &Instance) -> bool {
    refute_k4(inst).is_none()
}

/// The four-step offer for the next variable `z`, with template values
/// `0..4`:
/// 1. `{f(x), f(y)}` for the first `xyz ∈ R⁺` with `f(x) ≠ f(y)`;
/// 2. else the complement of `{f(x), f(y)}` for the first such `xyz ∈ R⁻`;
/// 3. else the two least values other than `f(x)` for the first `xz ∈ F`;
/// 4. else `{0, 1}`.
pub fn k4_prover_offers(sets: &ClosureSets, prefix: &[usize]) -> Vec<usize> {
    let z = prefix.len();
    let pairs = || (0..z).flat_map(|x| (x + 1..z).map(move |y| (x, y)));
    for (x, y) in pairs() {
        if sets.in_plus(x, y, z) && prefix[x] != prefix[y] {
            let mut offer = vec![prefix[x], prefix[y]];
            offer.sort_unstable();
            return offer;
        }
    }
    for (x, y) in pairs() {
        if sets.in_minus(x, y, z) && prefix[x] != prefix[y] {
            return (0..4)
                .filter(|&c| c != prefix[x] && c != prefix[y])
                .collect();
        }
    }
    if let Some(x) = (0..z).find(|&x| sets.in_f(x, z)) {
        return (0..4).filter(|&c| c != prefix[x]).take(2).collect();
    }
    vec![0, 1]
}

/// [`k4_prover_offers`] as a game strategy.
pub struct K4Prover {
    sets: ClosureSets,
}

impl K4Prover {
    pub fn new(inst: &Instance) -> Self {
        K4Prover {
            sets: closure(inst),
        }
    }
}

impl Prover<usize> for K4Prover {
    fn offer(&mut self, prefix: &[usize]) -> Vec<usize> {
        k4_prover_offers(&self.sets, prefix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x1_fires() {
        let inst = Instance::from_counts(&[2, 2, 2], &[(0, 2), (1, 2)]);
        let s = closure(&inst);
        assert!(s.in_minus(0, 1, 2));
    }

    #[test]
    fn x2_follows_x1() {
        // x, y, w, z = 0, 1, 2, 3 with xz, yz, wz: X1 gives xyz ∈ R⁻, X2 gives xyw ∈ R⁺.
        let inst = Instance::from_counts(&[2, 2, 2, 2], &[(0, 3), (1, 3), (2, 3)]);
        let s = closure(&inst);
        assert!(s.in_minus(0, 1, 3));
        assert!(s.in_plus(0, 1, 2));
    }

    #[test]
    fn k5_is_false() {
        let edges: Vec<_> = crate::generate::pairs(5);
        let inst = Instance::from_counts(&[2; 5], &edges);
        assert!(!decide_k4(&inst));
    }

    #[test]
    fn triangle_is_true() {
        let inst = Instance::from_counts(&[2; 3], &[(0, 1), (1, 2), (0, 2)]);
        assert!(decide_k4(&inst));
    }

    #[test]
    fn pendant_chain_is_false() {
        // p, q, w, r with atoms pr, qr, wr, qw.
        let inst = Instance::from_counts(&[2; 4], &[(0, 3), (1, 3), (2, 3), (1, 2)]);
        let s = closure(&inst);
        assert!(s.in_minus(0, 1, 3));
        assert!(s.in_plus(0, 1, 2));
        assert!(!decide_k4(&inst));
    }

    #[test]
    fn offers_follow_the_steps() {
        let mut s = ClosureSets::empty(4);
        s.insert(Fact::Plus(0, 1, 2));
        assert_eq!(k4_prover_offers(&s, &[0, 1]), vec![0, 1]);
        let mut s = ClosureSets::empty(4);
        s.insert(Fact::Minus(0, 1, 2));
        assert_eq!(k4_prover_offers(&s, &[0, 1]), vec![2, 3]);
        let mut s = ClosureSets::empty(4);
        s.insert(Fact::F(0, 1));
        assert_eq!(k4_prover_offers(&s, &[0]), vec![1, 2]);
        assert_eq!(
            k4_prover_offers(&ClosureSets::empty(4), &[2, 3]),
            vec![0, 1]
        );
    }
}
