//! Strategy-vs-strategy simulation of the Prover/Adversary game.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use super::{BudgetExhausted, Solver};
use crate::formula::{Graph, Instance};

/// The set of values the game is played over.
pub trait Board {
    type Value: Copy + Eq + Ord + Hash + Debug + Display;

    fn contains(&self, c: Self::Value) -> bool;

    /// Whether an atom may map to `(a, b)`; `a == b` asks for a loop.
    fn adjacent(&self, a: Self::Value, b: Self::Value) -> bool;
}

/// A finite template; values are vertex indices.
#[derive(Clone, Copy, Debug)]
pub struct GraphBoard<'a>(pub &'a Graph);

impl Board for GraphBoard<'_> {
    type Value = usize;

    fn contains(&self, c: usize) -> bool {
        c < self.0.len()
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.0.adjacent(a, b)
    }
}

/// A path over the integers: `[lo, hi]`, or all of ℤ when unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PathBoard {
    pub bounds: Option<(i64, i64)>,
}

impl PathBoard {
    /// `P_n` with vertices `1..=n`.
    pub fn finite(n: usize) -> Self {
        PathBoard {
            bounds: Some((1, n as i64)),
        }
    }

    pub fn infinite() -> Self {
        PathBoard { bounds: None }
    }
}

impl Board for PathBoard {
    type Value = i64;

    fn contains(&self, c: i64) -> bool {
        self.bounds.is_none_or(|(lo, hi)| lo <= c && c <= hi)
    }

    fn adjacent(&self, a: i64, b: i64) -> bool {
        (a - b).abs() == 1
    }
}

/// Chooses the offered set for the next variable, given the values so far.
pub trait Prover<V> {
    fn offer(&mut self, prefix: &[V]) -> Vec<V>;
}

/// Chooses one of the offered values.
pub trait Adversary<V> {
    fn pick(&mut self, prefix: &[V], offered: &[V]) -> V;
}

impl<V, F: FnMut(&[V]) -> Vec<V>> Prover<V> for F {
    fn offer(&mut self, prefix: &[V]) -> Vec<V> {
        self(prefix)
    }
}

impl<V, F: FnMut(&[V], &[V]) -> V> Adversary<V> for F {
    fn pick(&mut self, prefix: &[V], offered: &[V]) -> V {
        self(prefix, offered)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractError {
    #[error("step {step}: offered {got} values, expected {expected}")]
    WrongSize {
        step: usize,
        expected: usize,
        got: usize,
    },
    #[error("step {step}: offered value {value} twice")]
    Repeated { step: usize, value: String },
    #[error("step {step}: offered value {value} is not on the board")]
    OffBoard { step: usize, value: String },
    #[error("step {step}: picked {value}, which was not offered")]
    PickOutside { step: usize, value: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move<V> {
    pub offered: Vec<V>,
    pub chosen: V,
}

/// A complete play: one move per variable, and whether the resulting map is
/// a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play<V> {
    pub moves: Vec<Move<V>>,
    pub verdict: bool,
}

impl<V: Copy> Play<V> {
    pub fn values(&self) -> Vec<V> {
        self.moves.iter().map(|m| m.chosen).collect()
    }
}

fn check_offer<B: Board>(
    inst: &Instance,
    board: &B,
    step: usize,
    offered: &[B::Value],
) -> Result<(), ContractError> {
    let expected = inst.count(step) as usize;
    if offered.len() != expected {
        return Err(ContractError::WrongSize {
            step,
            expected,
            got: offered.len(),
        });
    }
    for (i, &c) in offered.iter().enumerate() {
        if !board.contains(c) {
            return Err(ContractError::OffBoard {
                step,
                value: c.to_string(),
            });
        }
        if offered[..i].contains(&c) {
            return Err(ContractError::Repeated {
                step,
                value: c.to_string(),
            });
        }
    }
    Ok(())
}

/// True if every atom between variable `prefix.len() - 1` and earlier
/// variables (or itself) is satisfied.
fn last_consistent<B: Board>(inst: &Instance, board: &B, prefix: &[B::Value]) -> bool {
    let v = prefix.len() - 1;
    inst.atoms()
        .filter(|&(_, b)| b == v)
        .all(|(a, b)| board.adjacent(prefix[a], prefix[b]))
}

/// Plays one game to the end.
pub fn play<B: Board>(
    inst: &Instance,
    board: &B,
    prover: &mut dyn Prover<B::Value>,
    adversary: &mut dyn Adversary<B::Value>,
) -> Result<Play<B::Value>, ContractError> {
    let mut prefix = Vec::with_capacity(inst.len());
    let mut moves = Vec::with_capacity(inst.len());
    for step in 0..inst.len() {
        let offered = prover.offer(&prefix);
        check_offer(inst, board, step, &offered)?;
        let chosen = adversary.pick(&prefix, &offered);
        if !offered.contains(&chosen) {
            return Err(ContractError::PickOutside {
                step,
                value: chosen.to_string(),
            });
        }
        prefix.push(chosen);
        moves.push(Move { offered, chosen });
    }
    let verdict = inst
        .atoms()
        .all(|(a, b)| board.adjacent(prefix[a], prefix[b]));
    Ok(Play { moves, verdict })
}

/// Result of letting Adversary try every offered value at every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exploration<V> {
    /// Branches visited; a branch ends at a full assignment or at the first
    /// violated atom.
    pub branches: u64,
    /// Values chosen along some losing branch, up to the violated atom.
    pub losing: Option<Vec<V>>,
}

impl<V> Exploration<V> {
    pub fn prover_always_wins(&self) -> bool {
        self.losing.is_none()
    }
}

/// Runs the exhaustive Adversary against a Prover strategy that depends only
/// on the values chosen so far. Stops at the first losing branch.
pub fn explore<B: Board>(
    inst: &Instance,
    board: &B,
    prover: &mut dyn Prover<B::Value>,
) -> Result<Exploration<B::Value>, ContractError> {
    let mut out = Exploration {
        branches: 0,
        losing: None,
    };
    let mut prefix = Vec::with_capacity(inst.len());
    explore_from(inst, board, prover, &mut prefix, &mut out)?;
    Ok(out)
}

fn explore_from<B: Board>(
    inst: &Instance,
    board: &B,
    prover: &mut dyn Prover<B::Value>,
    prefix: &mut Vec<B::Value>,
    out: &mut Exploration<B::Value>,
) -> Result<(), ContractError> {
    let step = prefix.len();
    if step == inst.len() {
        out.branches += 1;
        return Ok(());
    }
    let offered = prover.offer(prefix);
    check_offer(inst, board, step, &offered)?;
    for c in offered {
        prefix.push(c);
        if !last_consistent(inst, board, prefix) {
            out.branches += 1;
            out.losing = Some(prefix.clone());
        } else {
            explore_from(inst, board, prover, prefix, out)?;
        }
        prefix.pop();
        if out.losing.is_some() {
            return Ok(());
        }
    }
    Ok(())
}

/// Perfect-information Prover on a finite template: offers winning values
/// when enough exist, padded with the smallest remaining vertices otherwise.
pub struct OracleProver<'a> {
    solver: Solver<'a>,
    inst: &'a Instance,
    size: usize,
}

impl<'a> OracleProver<'a> {
    pub fn new(inst: &'a Instance, tmpl: &'a Graph) -> Self {
        OracleProver {
            solver: Solver::new(inst, tmpl),
            inst,
            size: tmpl.len(),
        }
    }

    pub fn try_offer(&mut self, prefix: &[usize]) -> Result<Vec<usize>, BudgetExhausted> {
        let need = self.inst.count(prefix.len()) as usize;
        let mut offer = self.solver.winning_values(prefix)?;
        offer.truncate(need);
        for c in 0..self.size {
            if offer.len() == need {
                break;
            }
            if !offer.contains(&c) {
                offer.push(c);
            }
        }
        offer.sort_unstable();
        Ok(offer)
    }
}

impl Prover<usize> for OracleProver<'_> {
    fn offer(&mut self, prefix: &[usize]) -> Vec<usize> {
        self.try_offer(prefix)
            .expect("oracle prover exceeded its node budget")
    }
}

/// Adversary that always takes the first offered value.
pub struct FirstOffered;

impl<V: Copy> Adversary<V> for FirstOffered {
    fn pick(&mut self, _prefix: &[V], offered: &[V]) -> V {
        offered[0]
    }
}

/// Adversary that picks uniformly at random.
pub struct RandomAdversary<R>(pub R);

impl<V: Copy, R: Rng> Adversary<V> for RandomAdversary<R> {
    fn pick(&mut self, _prefix: &[V], offered: &[V]) -> V {
        *offered.choose(&mut self.0).expect("offers are non-empty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::decide;

    #[test]
    fn oracle_prover_wins_every_branch_on_yes_instance() {
        let inst = Instance::from_counts(&[2, 2, 2], &[(0, 1), (1, 2), (0, 2)]);
        let k4 = Graph::complete(4);
        assert!(decide(&inst, &k4).unwrap());
        let mut p = OracleProver::new(&inst, &k4);
        let ex = explore(&inst, &GraphBoard(&k4), &mut p).unwrap();
        assert!(ex.prover_always_wins());
        assert_eq!(ex.branches, 8);
    }

    #[test]
    fn exhaustive_adversary_finds_loss_on_no_instance() {
        let inst = Instance::from_counts(&[1, 2], &[(0, 1)]);
        let p2 = Graph::path(2);
        let mut p = OracleProver::new(&inst, &p2);
        let ex = explore(&inst, &GraphBoard(&p2), &mut p).unwrap();
        assert!(ex.losing.is_some());
    }

    #[test]
    fn contract_violations_name_the_step() {
        let inst = Instance::from_counts(&[1, 2], &[]);
        let g = Graph::path(3);
        let board = GraphBoard(&g);
        let mut short = |_: &[usize]| vec![0];
        let err = play(&inst, &board, &mut short, &mut FirstOffered).unwrap_err();
        assert_eq!(
            err,
            ContractError::WrongSize {
                step: 1,
                expected: 2,
                got: 1
            }
        );

        let mut fine = |p: &[usize]| if p.is_empty() { vec![0] } else { vec![0, 1] };
        let mut cheat = |_: &[usize], _: &[usize]| 2usize;
        let err = play(&inst, &board, &mut fine, &mut cheat).unwrap_err();
        assert_eq!(
            err,
            ContractError::PickOutside {
                step: 0,
                value: "2".into()
            }
        );

        let mut off = |_: &[usize]| vec![7];
        assert!(matches!(
            play(&inst, &board, &mut off, &mut FirstOffered),
            Err(ContractError::OffBoard { step: 0, .. })
        ));
    }

    #[test]
    fn play_records_transcript() {
        let inst = Instance::from_counts(&[1, 2], &[(0, 1)]);
        let board = PathBoard::infinite();
        let mut prover = |p: &[i64]| if p.is_empty() { vec![0] } else { vec![1, -1] };
        let result = play(&inst, &board, &mut prover, &mut FirstOffered).unwrap();
        assert_eq!(result.values(), vec![0, 1]);
        assert!(result.verdict);
    }
}
