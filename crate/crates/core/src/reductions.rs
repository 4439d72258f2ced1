//! Instance generators for the hardness reductions: quantified colouring on
//! `K_n` into `{n}` on `K_2n`, quantified colouring on `K_j` into `{1,2}` on
//! the cycle `C_2j`, and the two transformations used for a looped
//! dominating vertex over a non-bipartite remainder.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::formula::{Graph, Instance, InstanceError, Var, Variable};
use crate::oracle::{BudgetExhausted, Solver};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("parameter must be at least {min}, got {got}")]
    TooSmall { min: u32, got: u32 },
    #[error("variable `{name}` has count {count}; expected one of {allowed:?}")]
    Count {
        name: String,
        count: u32,
        allowed: Vec<u32>,
    },
    #[error("source instance has a loop atom on `{0}`")]
    LoopAtom(String),
    #[error("template has no looped vertex adjacent to every vertex")]
    NoDominatingLoop,
    #[error("generated names clash: {0}")]
    Names(#[from] InstanceError),
}

fn check_source(src: &Instance, allowed: &[u32]) -> Result<(), ReductionError> {
    for v in src.variables() {
        if !allowed.contains(&v.count) {
            return Err(ReductionError::Count {
                name: v.name.clone(),
                count: v.count,
                allowed: allowed.to_vec(),
            });
        }
    }
    if let Some((a, _)) = src.atoms().find(|&(a, b)| a == b) {
        return Err(ReductionError::LoopAtom(src.name(a).to_string()));
    }
    Ok(())
}

/// Accumulates variables in quantifier order and atoms by index.
#[derive(Default)]
struct Builder {
    vars: Vec<Variable>,
    atoms: Vec<(Var, Var)>,
}

impl Builder {
    fn var(&mut self, name: String, count: u32) -> Var {
        self.vars.push(Variable::new(name, count));
        self.vars.len() - 1
    }

    fn edge(&mut self, a: Var, b: Var) {
        self.atoms.push((a, b));
    }

    fn finish(self) -> Result<Instance, ReductionError> {
        Ok(Instance::new(self.vars, self.atoms)?)
    }
}

/// Lifts a quantified `K_n` colouring instance (counts `1` for `∃`, `n` for
/// `∀`) to an all-`∃≥n` instance over `K_2n`.
///
/// Variables: `u1..un` forming a clique, then the source variables in order
/// (each adjacent to `u1`, universal ones also to `u2..un`), then for every
/// source atom `x y` the gadget `w q z a b c` with atoms `wa wb qb qc za zb`,
/// `xa yb`, `a u1`, `c u1 u2 u3`, and `a b c` to each of `u4..un`.
pub fn lift_to_k2n(src: &Instance, n: u32) -> Result<Instance, ReductionError> {
    if n < 3 {
        return Err(ReductionError::TooSmall { min: 3, got: n });
    }
    check_source(src, &[1, n])?;
    let n = n as usize;
    let mut b = Builder::default();
    let u: Vec<Var> = (1..=n).map(|i| b.var(format!("u{i}"), n as u32)).collect();
    for i in 0..n {
        for k in i + 1..n {
            b.edge(u[i], u[k]);
        }
    }
    let v: Vec<Var> = src
        .variables()
        .iter()
        .map(|var| b.var(var.name.clone(), n as u32))
        .collect();
    for (i, var) in src.variables().iter().enumerate() {
        b.edge(v[i], u[0]);
        if var.count as usize == n {
            for &uk in &u[1..] {
                b.edge(v[i], uk);
            }
        }
    }
    for (e, (x, y)) in src.atoms().enumerate() {
        let g: Vec<Var> = ["w", "q", "z", "a", "b", "c"]
            .iter()
            .map(|s| b.var(format!("g{}{s}", e + 1), n as u32))
            .collect();
        let [w, q, z, a, bb, c] = [g[0], g[1], g[2], g[3], g[4], g[5]];
        for (p, r) in [(w, a), (w, bb), (q, bb), (q, c), (z, a), (z, bb)] {
            b.edge(p, r);
        }
        b.edge(v[x], a);
        b.edge(v[y], bb);
        b.edge(a, u[0]);
        for &uk in &u[..3] {
            b.edge(c, uk);
        }
        for &uk in &u[3..] {
            for t in [a, bb, c] {
                b.edge(t, uk);
            }
        }
    }
    b.finish()
}

/// Plays the edge gadget alone at parameter `n`: `u_i` fixed to colour
/// `n + i`, the gadget's endpoints fixed to colours `cx` and `cy` (colours
/// are `1..=2n`), and the six gadget variables counted `∃≥n`. Returns whether
/// Prover wins.
pub fn gadget_game(n: u32, cx: u32, cy: u32) -> Result<bool, BudgetExhausted> {
    assert!(n >= 3 && (1..=2 * n).contains(&cx) && (1..=2 * n).contains(&cy));
    let nn = n as usize;
    let counts: Vec<u32> = std::iter::repeat_n(1, nn + 2)
        .chain(std::iter::repeat_n(n, 6))
        .collect();
    let (x, y) = (nn, nn + 1);
    let [w, q, z, a, b, c] = [nn + 2, nn + 3, nn + 4, nn + 5, nn + 6, nn + 7];
    let mut atoms = vec![
        (x, 0),
        (y, 0),
        (w, a),
        (w, b),
        (q, b),
        (q, c),
        (z, a),
        (z, b),
    ];
    atoms.extend([(x, a), (y, b), (a, 0), (c, 0), (c, 1), (c, 2)]);
    for i in 0..nn {
        atoms.extend((i + 1..nn).map(|k| (i, k)));
    }
    for uk in 3..nn {
        atoms.extend([(a, uk), (b, uk), (c, uk)]);
    }
    let inst = Instance::from_counts(&counts, &atoms);
    let k2n = Graph::complete(2 * nn);
    let only = |colour: u32| {
        (0..2 * nn)
            .map(|t| t + 1 == colour as usize)
            .collect::<Vec<_>>()
    };
    let mut solver = Solver::new(&inst, &k2n);
    for i in 0..nn {
        solver = solver.restrict(i, only(n + 1 + i as u32));
    }
    solver = solver.restrict(x, only(cx)).restrict(y, only(cy));
    solver.wins_from(&[])
}

/// Recounts a [`lift_to_k2n`] output against the source. Returns the first
/// discrepancy found.
pub fn validate_k2n_lift(src: &Instance, n: u32, out: &Instance) -> Result<(), String> {
    let nn = n as usize;
    let index: HashMap<&str, Var> = (0..out.len()).map(|v| (out.name(v), v)).collect();
    let find = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or(format!("missing variable {name}"))
    };
    let expected = nn + src.len() + 6 * src.atom_count();
    if out.len() != expected {
        return Err(format!("{} variables, expected {expected}", out.len()));
    }
    if let Some(v) = (0..out.len()).find(|&v| out.count(v) != n) {
        return Err(format!(
            "{} has count {}, expected {n}",
            out.name(v),
            out.count(v)
        ));
    }
    let u: Vec<Var> = (1..=nn)
        .map(|i| find(&format!("u{i}")))
        .collect::<Result<_, _>>()?;
    if u.iter().enumerate().any(|(i, &ui)| ui != i) {
        return Err("the clique variables do not come first".into());
    }
    let mut atoms = nn * (nn - 1) / 2;
    for i in 0..nn {
        for k in i + 1..nn {
            if !out.has_atom(u[i], u[k]) {
                return Err(format!("clique atom u{} u{} missing", i + 1, k + 1));
            }
        }
    }
    for (i, var) in src.variables().iter().enumerate() {
        let v = find(&var.name)?;
        if v != nn + i {
            return Err(format!("{} out of order", var.name));
        }
        let tied = if var.count == n { nn } else { 1 };
        atoms += tied;
        if (0..nn).any(|k| out.has_atom(v, u[k]) != (k < tied)) {
            return Err(format!(
                "{} is tied to the wrong clique variables",
                var.name
            ));
        }
    }
    for (e, (x, y)) in src.atoms().enumerate() {
        let g = |s: &str| find(&format!("g{}{s}", e + 1));
        let (w, q, z, a, b, c) = (g("w")?, g("q")?, g("z")?, g("a")?, g("b")?, g("c")?);
        let (x, y) = (find(src.name(x))?, find(src.name(y))?);
        let mut need = vec![
            (w, a),
            (w, b),
            (q, b),
            (q, c),
            (z, a),
            (z, b),
            (x, a),
            (y, b),
            (a, u[0]),
        ];
        need.extend(u[..3].iter().map(|&uk| (c, uk)));
        for &uk in &u[3..] {
            need.extend([(a, uk), (b, uk), (c, uk)]);
        }
        atoms += need.len();
        if let Some(&(p, r)) = need.iter().find(|&&(p, r)| !out.has_atom(p, r)) {
            return Err(format!(
                "gadget {} lacks atom {} {}",
                e + 1,
                out.name(p),
                out.name(r)
            ));
        }
    }
    if out.atom_count() != atoms {
        return Err(format!("{} atoms, expected {atoms}", out.atom_count()));
    }
    Ok(())
}

/// The predicted outcome of [`gadget_game`]: Adversary wins iff the
/// endpoints share a colour from `1..=n` or one of them has colour `n + 1`.
pub fn gadget_prediction(n: u32, cx: u32, cy: u32) -> bool {
    !(cx == cy && cx <= n) && cx != n + 1 && cy != n + 1
}

/// Names of the parts of a [`lift_to_cycle`] instance, in generation order.
pub mod cycle_names {
    /// Fixed cycle vertex `k` (0-based).
    pub fn fixed(k: usize) -> String {
        format!("w{}", k + 1)
    }

    /// Vertex `t` (1-based) of the path leading to the universal variable `v`.
    pub fn lead(v: &str, t: usize) -> String {
        format!("{v}_l{t}")
    }

    /// Vertex `k` of cycle copy `i` in the gadget for source atom `e`.
    pub fn copy(e: usize, i: usize, k: usize) -> String {
        format!("e{}c{}_{}", e + 1, i, k)
    }

    /// Pendant vertex `t` (1-based) in the gadget for source atom `e`.
    pub fn pendant(e: usize, t: usize) -> String {
        format!("e{}p{}", e + 1, t)
    }
}

/// Lifts a quantified `K_j` colouring instance (counts `1` for `∃`, `j` for
/// `∀`) to a `{1,2}` instance over `C_2j`.
///
/// Layout, in quantifier order:
///
/// * the fixed cycle `w1..w2j`, with `w1..w(j+1)` counted `∃≥2` and the rest
///   `∃`;
/// * the source variables in order; a universal `v` is preceded by a lead
///   path `v_l1 .. v_lj` ending in `v` (`j` atoms), with `v_l1` tied to `w1`,
///   `v_l1` and `v` counted `∃` and `v_l2..v_lj` counted `∃≥2`;
/// * per source atom `x y`: `3j` copies of `C_2j` joined vertex-by-vertex to
///   each other and copy 0 to the fixed cycle, `y` tied to vertex 0 of the
///   last copy, and a pendant path `x, p1, .., p(j-1)` whose end is tied to
///   the opposite vertex `j` of the last copy. All gadget variables are `∃`.
pub fn lift_to_cycle(src: &Instance, j: u32) -> Result<Instance, ReductionError> {
    use cycle_names::*;
    if j < 3 {
        return Err(ReductionError::TooSmall { min: 3, got: j });
    }
    check_source(src, &[1, j])?;
    let j = j as usize;
    let len = 2 * j;
    let mut b = Builder::default();
    let w: Vec<Var> = (0..len)
        .map(|k| b.var(fixed(k), if k <= j { 2 } else { 1 }))
        .collect();
    for k in 0..len {
        b.edge(w[k], w[(k + 1) % len]);
    }
    let mut v = Vec::with_capacity(src.len());
    for var in src.variables() {
        if var.count as usize == j {
            let lead: Vec<Var> = (1..=j)
                .map(|t| b.var(lead(&var.name, t), if t == 1 { 1 } else { 2 }))
                .collect();
            b.edge(lead[0], w[0]);
            for t in 1..j {
                b.edge(lead[t - 1], lead[t]);
            }
            let me = b.var(var.name.clone(), 1);
            b.edge(lead[j - 1], me);
            v.push(me);
        } else {
            v.push(b.var(var.name.clone(), 1));
        }
    }
    for (e, (x, y)) in src.atoms().enumerate() {
        let copies = 3 * j;
        let c: Vec<Vec<Var>> = (0..copies)
            .map(|i| (0..len).map(|k| b.var(copy(e, i, k), 1)).collect())
            .collect();
        for i in 0..copies {
            for k in 0..len {
                b.edge(c[i][k], c[i][(k + 1) % len]);
                let prev = if i == 0 { w[k] } else { c[i - 1][k] };
                b.edge(prev, c[i][k]);
            }
        }
        let last = &c[copies - 1];
        b.edge(v[y], last[0]);
        let mut tail = v[x];
        for t in 1..j {
            let p = b.var(pendant(e, t), 1);
            b.edge(tail, p);
            tail = p;
        }
        b.edge(tail, last[j]);
    }
    b.finish()
}

/// Recounts a [`lift_to_cycle`] output against the source. Returns the first
/// discrepancy found.
pub fn validate_cycle_lift(src: &Instance, j: u32, out: &Instance) -> Result<(), String> {
    use cycle_names::*;
    let j = j as usize;
    let len = 2 * j;
    let index: HashMap<&str, Var> = (0..out.len()).map(|v| (out.name(v), v)).collect();
    let find = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or(format!("missing variable {name}"))
    };
    let universal = src
        .variables()
        .iter()
        .filter(|v| v.count as usize == j)
        .count();
    let edges = src.atoms().count();
    let expected = len + src.len() + universal * j + edges * (3 * j * len + j - 1);
    if out.len() != expected {
        return Err(format!("{} variables, expected {expected}", out.len()));
    }
    let prefix: Vec<u32> = (0..len).map(|k| if k <= j { 2 } else { 1 }).collect();
    for (k, &want) in prefix.iter().enumerate() {
        let wk = find(&fixed(k))?;
        if wk != k || out.count(wk) != want {
            return Err(format!(
                "fixed vertex {} out of place or miscounted",
                fixed(k)
            ));
        }
        if !out.has_atom(wk, find(&fixed((k + 1) % len))?) {
            return Err(format!("fixed cycle edge missing at {}", fixed(k)));
        }
    }
    for var in src.variables().iter().filter(|v| v.count as usize == j) {
        let me = find(&var.name)?;
        let lead: Vec<Var> = (1..=j)
            .map(|t| find(&lead(&var.name, t)))
            .collect::<Result<_, _>>()?;
        let counts: Vec<u32> = lead.iter().map(|&l| out.count(l)).collect();
        let ok_counts = counts[0] == 1 && counts[1..].iter().all(|&c| c == 2) && out.count(me) == 1;
        let mut chain = lead.clone();
        chain.push(me);
        let ok_path = chain
            .windows(2)
            .all(|p| p[0] < p[1] && out.has_atom(p[0], p[1]));
        if !ok_counts || !ok_path || !out.has_atom(lead[0], 0) {
            return Err(format!("lead path of {} malformed", var.name));
        }
    }
    for (e, (x, y)) in src.atoms().enumerate() {
        let c = |i: usize, k: usize| find(&copy(e, i, k));
        for i in 0..3 * j {
            for k in 0..len {
                if !out.has_atom(c(i, k)?, c(i, (k + 1) % len)?) {
                    return Err(format!("copy {i} of atom {} is not a cycle", e + 1));
                }
                let prev = if i == 0 { k } else { c(i - 1, k)? };
                if !out.has_atom(prev, c(i, k)?) {
                    return Err(format!(
                        "rung missing before copy {i}, vertex {k}, atom {}",
                        e + 1
                    ));
                }
            }
        }
        let (gx, gy) = (find(src.name(x))?, find(src.name(y))?);
        let last = 3 * j - 1;
        let mut gadget: Vec<Var> = vec![gx, gy];
        gadget.extend(
            (0..3 * j)
                .flat_map(|i| (0..len).map(move |k| (i, k)))
                .map(|(i, k)| c(i, k).unwrap()),
        );
        gadget.extend((1..j).map(|t| find(&pendant(e, t)).unwrap()));
        if distance(out, &gadget, gx, c(last, j)?) != Some(j) {
            return Err(format!(
                "pendant of atom {} does not reach the far vertex in {j} steps",
                e + 1
            ));
        }
        if distance(out, &gadget, gy, c(last, 0)?) != Some(1) {
            return Err(format!("atom {} is not tied to the last copy", e + 1));
        }
        if distance(out, &gadget, gx, gy) != Some(2 * j + 1) {
            return Err(format!("endpoints of atom {} at the wrong distance", e + 1));
        }
    }
    Ok(())
}

/// Breadth-first distance between `from` and `to` inside the variables `within`.
fn distance(inst: &Instance, within: &[Var], from: Var, to: Var) -> Option<usize> {
    let mut allowed = vec![false; inst.len()];
    within.iter().for_each(|&v| allowed[v] = true);
    let adj = inst.adjacency();
    let mut dist = vec![usize::MAX; inst.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            return Some(dist[v]);
        }
        for &u in &adj[v] {
            if allowed[u] && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Turns a plain `∃` instance into the same instance with every variable
/// counted `∃≥2`.
pub fn exists_to_atleast2(src: &Instance) -> Result<Instance, ReductionError> {
    check_counts_only(src, &[1])?;
    Ok(src.map_counts(|_, _| 2))
}

fn check_counts_only(src: &Instance, allowed: &[u32]) -> Result<(), ReductionError> {
    match src.variables().iter().find(|v| !allowed.contains(&v.count)) {
        Some(v) => Err(ReductionError::Count {
            name: v.name.clone(),
            count: v.count,
            allowed: allowed.to_vec(),
        }),
        None => Ok(()),
    }
}

/// An `∃` instance in which some variables may only take values outside the
/// dominating vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guarded {
    pub instance: Instance,
    /// Variables carrying the unary guard.
    pub guarded: Vec<bool>,
    /// Template vertices the guard admits.
    pub admits: Vec<bool>,
}

/// Replaces every `∃≥2 v` by `∃ v` guarded to the template minus its looped
/// dominating vertex.
pub fn add_unary_guard(src: &Instance, g: &Graph) -> Result<Guarded, ReductionError> {
    check_counts_only(src, &[1, 2])?;
    let w = *g
        .dominating_loops()
        .first()
        .ok_or(ReductionError::NoDominatingLoop)?;
    Ok(Guarded {
        instance: src.map_counts(|_, _| 1),
        guarded: (0..src.len()).map(|v| src.count(v) == 2).collect(),
        admits: (0..g.len()).map(|t| t != w).collect(),
    })
}

impl Guarded {
    /// Decides the guarded instance with the oracle.
    pub fn decide(&self, g: &Graph) -> Result<bool, BudgetExhausted> {
        let mut solver = Solver::new(&self.instance, g);
        for v in (0..self.instance.len()).filter(|&v| self.guarded[v]) {
            solver = solver.restrict(v, self.admits.clone());
        }
        solver.wins_from(&[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2n_sizes() {
        let src = Instance::from_counts(&[1, 1], &[(0, 1)]);
        let out = lift_to_k2n(&src, 3).unwrap();
        assert_eq!(out.len(), 11);
        assert!(out.counts().all(|c| c == 3));
        let lone = lift_to_k2n(&Instance::from_counts(&[1], &[]), 3).unwrap();
        assert_eq!((lone.len(), lone.atom_count()), (4, 4));
        assert!(matches!(
            lift_to_k2n(&src, 2),
            Err(ReductionError::TooSmall { .. })
        ));
        assert_eq!(validate_k2n_lift(&src, 3, &out), Ok(()));
        let mixed = Instance::from_counts(&[4, 1, 4], &[(0, 1), (1, 2)]);
        let out = lift_to_k2n(&mixed, 4).unwrap();
        assert_eq!(validate_k2n_lift(&mixed, 4, &out), Ok(()));
        assert!(validate_k2n_lift(&mixed, 3, &out).is_err());
    }

    #[test]
    fn cycle_prefix_and_size() {
        let lone = lift_to_cycle(&Instance::from_counts(&[1], &[]), 3).unwrap();
        assert_eq!((lone.len(), lone.atom_count()), (7, 6));
        let counts: Vec<u32> = lone.counts().take(6).collect();
        assert_eq!(counts, vec![2, 2, 2, 2, 1, 1]);
        let src = Instance::from_counts(&[1, 1], &[(0, 1)]);
        let out = lift_to_cycle(&src, 3).unwrap();
        assert_eq!(out.len(), 6 + 2 + 9 * 6 + 2);
        assert_eq!(validate_cycle_lift(&src, 3, &out), Ok(()));
    }

    #[test]
    fn validator_notices_a_missing_rung() {
        let src = Instance::from_counts(&[3, 1], &[(0, 1)]);
        let out = lift_to_cycle(&src, 3).unwrap();
        assert_eq!(validate_cycle_lift(&src, 3, &out), Ok(()));
        let a = out.index_of("e1c4_2").unwrap();
        let b = out.index_of("e1c5_2").unwrap();
        let atoms: Vec<_> = out.atoms().filter(|&e| e != (a, b)).collect();
        let broken = Instance::new(out.variables().to_vec(), atoms).unwrap();
        assert!(validate_cycle_lift(&src, 3, &broken).is_err());
    }

    #[test]
    fn guard_marks_doubles() {
        let g = Graph::from_edges(3, &[(0, 0), (0, 1), (0, 2), (1, 2)]);
        let src = Instance::from_counts(&[2, 1], &[(0, 1)]);
        let guarded = add_unary_guard(&src, &g).unwrap();
        assert_eq!(guarded.guarded, vec![true, false]);
        assert_eq!(guarded.admits, vec![false, true, true]);
        assert!(guarded.instance.counts().all(|c| c == 1));
    }
}
