//! Exact evaluation of counting-quantified instances on finite templates.
//!
//! Prover wins from a partial assignment iff at least `count(next)` template
//! vertices are consistent with the already-assigned neighbours of `next` and
//! are themselves winning. Subtrees are memoised on the values of the
//! variables that can still influence later atoms.

mod game;

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Graph, Instance, Var};

pub use game::{
    explore, play, Adversary, Board, ContractError, Exploration, FirstOffered, GraphBoard, Move,
    OracleProver, PathBoard, Play, Prover, RandomAdversary,
};

/// Default node budget for a single decision.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "XCSP_BUDGET";

/// The node budget from [`BUDGET_ENV`], or [`DEFAULT_BUDGET`].
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("node budget of {budget} exhausted")]
pub struct BudgetExhausted {
    pub budget: u64,
}

/// Decides `tmpl ⊨ inst` with the default budget.
pub fn decide(inst: &Instance, tmpl: &Graph) -> Result<bool, BudgetExhausted> {
    decide_with_budget(inst, tmpl, default_budget())
}

/// Decides `tmpl ⊨ inst`, failing once more than `budget` game nodes have
/// been expanded. Components are evaluated independently.
pub fn decide_with_budget(
    inst: &Instance,
    tmpl: &Graph,
    budget: u64,
) -> Result<bool, BudgetExhausted> {
    if inst.counts().any(|c| c as usize > tmpl.len()) {
        return Ok(false);
    }
    let mut spent = 0;
    for comp in inst.components() {
        let mut solver = Solver::new(&comp, tmpl).budget(budget - spent);
        let won = solver.wins_from(&[])?;
        spent += solver.nodes();
        if !won {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides the instance on the two-way infinite path by evaluating it on the
/// finite path with `2N + 2` vertices.
pub fn infinite_path_decide(inst: &Instance) -> Result<bool, BudgetExhausted> {
    decide(inst, &Graph::path(2 * inst.len() + 2))
}

/// Memoised game evaluator for one instance and template.
///
/// Reusable across queries from different prefixes; the memo table is shared.
pub struct Solver<'a> {
    inst: &'a Instance,
    tmpl: &'a Graph,
    /// Earlier neighbours of each variable, and whether it carries a loop atom.
    back: Vec<Vec<Var>>,
    looped: Vec<bool>,
    /// Variables before `i` with a neighbour at or after `i`.
    frontier: Vec<Vec<Var>>,
    domains: Vec<Option<Vec<bool>>>,
    memo: Vec<HashMap<Vec<u16>, bool>>,
    nodes: u64,
    budget: u64,
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a Instance, tmpl: &'a Graph) -> Self {
        assert!(tmpl.len() <= u16::MAX as usize, "template too large");
        let n = inst.len();
        let mut back = vec![Vec::new(); n];
        let mut looped = vec![false; n];
        let mut last = vec![0; n];
        for (a, b) in inst.atoms() {
            if a == b {
                looped[a] = true;
            } else {
                back[b].push(a);
                last[a] = last[a].max(b);
            }
        }
        let frontier = (0..=n)
            .map(|i| (0..i).filter(|&u| last[u] >= i).collect())
            .collect();
        Solver {
            inst,
            tmpl,
            back,
            looped,
            frontier,
            domains: vec![None; n],
            memo: vec![HashMap::new(); n + 1],
            nodes: 0,
            budget: default_budget(),
        }
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Restricts variable `v` to the template vertices marked `true`.
    pub fn restrict(mut self, v: Var, allowed: Vec<bool>) -> Self {
        assert_eq!(allowed.len(), self.tmpl.len());
        self.domains[v] = Some(allowed);
        self.memo.iter_mut().for_each(HashMap::clear);
        self
    }

    /// Nodes expanded so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// True if value `c` for variable `prefix.len()` satisfies every atom to
    /// earlier variables and its domain.
    pub fn consistent(&self, prefix: &[usize], c: usize) -> bool {
        let v = prefix.len();
        if let Some(d) = &self.domains[v] {
            if !d[c] {
                return false;
            }
        }
        if self.looped[v] && !self.tmpl.has_loop(c) {
            return false;
        }
        self.back[v]
            .iter()
            .all(|&u| self.tmpl.adjacent(prefix[u], c))
    }

    /// Whether Prover wins the game continued from `prefix`, which must
    /// satisfy all atoms among its own variables.
    pub fn wins_from(&mut self, prefix: &[usize]) -> Result<bool, BudgetExhausted> {
        let mut f = prefix.to_vec();
        f.resize(self.inst.len(), 0);
        self.wins(prefix.len(), &mut f)
    }

    /// Consistent values for the next variable from which Prover still wins.
    pub fn winning_values(&mut self, prefix: &[usize]) -> Result<Vec<usize>, BudgetExhausted> {
        let i = prefix.len();
        let mut f = prefix.to_vec();
        f.resize(self.inst.len(), 0);
        let mut out = Vec::new();
        for c in 0..self.tmpl.len() {
            if self.consistent(&f[..i], c) {
                f[i] = c;
                if self.wins(i + 1, &mut f)? {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }

    fn wins(&mut self, i: usize, f: &mut Vec<usize>) -> Result<bool, BudgetExhausted> {
        if i == self.inst.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExhausted {
                budget: self.budget,
            });
        }
        let key: Vec<u16> = self.frontier[i].iter().map(|&u| f[u] as u16).collect();
        if let Some(&known) = self.memo[i].get(&key) {
            return Ok(known);
        }
        let need = self.inst.count(i) as usize;
        let candidates: Vec<usize> = (0..self.tmpl.len())
            .filter(|&c| self.consistent(&f[..i], c))
            .collect();
        let mut won = 0;
        let mut left = candidates.len();
        let mut result = false;
        for c in candidates {
            if won + left < need {
                break;
            }
            left -= 1;
            f[i] = c;
            if self.wins(i + 1, f)? {
                won += 1;
                if won >= need {
                    result = true;
                    break;
                }
            }
        }
        self.memo[i].insert(key, result);
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atleast_two_after_exists_on_single_edge_is_false() {
        let inst = Instance::from_counts(&[1, 2], &[(0, 1)]);
        assert!(!decide(&inst, &Graph::path(2)).unwrap());
    }

    #[test]
    fn loop_atom_on_k4_is_false() {
        let inst = Instance::from_counts(&[1], &[(0, 0)]);
        assert!(!decide(&inst, &Graph::complete(4)).unwrap());
    }

    #[test]
    fn all_two_triangle_on_k4_is_true() {
        let inst = Instance::from_counts(&[2, 2, 2], &[(0, 1), (1, 2), (0, 2)]);
        assert!(decide(&inst, &Graph::complete(4)).unwrap());
    }

    #[test]
    fn counts_beyond_template_size_are_false() {
        let inst = Instance::from_counts(&[3], &[]);
        assert!(!decide(&inst, &Graph::path(2)).unwrap());
    }

    #[test]
    fn lone_atleast_two_variable_on_infinite_path() {
        let inst = Instance::from_counts(&[2], &[]);
        assert!(infinite_path_decide(&inst).unwrap());
    }

    #[test]
    fn tiny_budget_is_reported() {
        let inst = Instance::from_counts(&[2, 2, 2, 2], &[(0, 1), (1, 2), (2, 3)]);
        let err = decide_with_budget(&inst, &Graph::complete(4), 2).unwrap_err();
        assert_eq!(err, BudgetExhausted { budget: 2 });
    }

    #[test]
    fn winning_values_from_prefix() {
        // x ∃, y ∃≥2 with x–y on P3: only the middle vertex works for x.
        let inst = Instance::from_counts(&[1, 2], &[(0, 1)]);
        let g = Graph::path(3);
        let mut s = Solver::new(&inst, &g);
        assert_eq!(s.winning_values(&[]).unwrap(), vec![1]);
    }

    #[test]
    fn domain_restriction() {
        let inst = Instance::from_counts(&[1], &[]);
        let g = Graph::path(3);
        let mut s = Solver::new(&inst, &g).restrict(0, vec![false, false, false]);
        assert!(!s.wins_from(&[]).unwrap());
    }
}
