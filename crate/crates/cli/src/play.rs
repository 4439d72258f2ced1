//! The `play` subcommand: one game of Prover against Adversary, with either
//! side (or neither) typed in by a person.
//!
//! Moves go to standard output as they happen; prompts and complaints about
//! malformed entries go to standard error.

use std::cell::RefCell;
use std::io::{BufRead, Write};

use clap::ValueEnum;
use xcsp::formula::{Graph, Instance, Template};
use xcsp::infpath::{InfPathProver, ViolationSeeker};
use xcsp::oracle::{
    play, Adversary, Board, GraphBoard, OracleProver, PathBoard, Play, Prover, Solver,
};

use crate::input::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Prover,
    Adversary,
    /// Engine against engine.
    None,
}

/// How values are written and read for one kind of board.
trait Notation<V> {
    fn show(&self, v: V) -> String;
    fn read(&self, s: &str) -> Option<V>;
    /// Any `k` distinct values on the board.
    fn filler(&self, k: usize) -> Vec<V>;
}

struct VertexNames<'a>(&'a Graph);

impl Notation<usize> for VertexNames<'_> {
    fn show(&self, v: usize) -> String {
        self.0.name(v).to_string()
    }

    fn read(&self, s: &str) -> Option<usize> {
        self.0.index_of(s)
    }

    fn filler(&self, k: usize) -> Vec<usize> {
        (0..k).collect()
    }
}

struct Integers;

impl Notation<i64> for Integers {
    fn show(&self, v: i64) -> String {
        v.to_string()
    }

    fn read(&self, s: &str) -> Option<i64> {
        s.parse().ok()
    }

    fn filler(&self, k: usize) -> Vec<i64> {
        (0..k as i64).collect()
    }
}

/// Shared state of one session: the input stream and the first failure.
/// Strategies cannot return errors, so a failure is parked here and the
/// strategy answers with filler until the game ends.
struct Session<R> {
    input: R,
    failure: Option<Failure>,
}

impl<R: BufRead> Session<R> {
    fn line(&mut self, prompt: &str) -> Option<String> {
        eprint!("{prompt}");
        let _ = std::io::stderr().flush();
        let mut buf = String::new();
        match self.input.read_line(&mut buf) {
            Ok(0) | Err(_) => {
                self.failure
                    .get_or_insert(Failure::Parse("input ended before the game did".into()));
                None
            }
            Ok(_) => Some(buf.trim().to_string()),
        }
    }
}

fn show_all<V: Copy>(n: &dyn Notation<V>, vs: &[V]) -> String {
    vs.iter().map(|&v| n.show(v)).collect::<Vec<_>>().join(" ")
}

struct HumanProver<'a, R, B: Board> {
    session: &'a RefCell<Session<R>>,
    inst: &'a Instance,
    board: B,
    notation: &'a dyn Notation<B::Value>,
}

impl<R: BufRead, B: Board> Prover<B::Value> for HumanProver<'_, R, B> {
    fn offer(&mut self, prefix: &[B::Value]) -> Vec<B::Value> {
        let v = prefix.len();
        let k = self.inst.count(v) as usize;
        let mut s = self.session.borrow_mut();
        loop {
            if s.failure.is_some() {
                return self.notation.filler(k);
            }
            let prompt = format!("offer {k} value(s) for {}: ", self.inst.name(v));
            let Some(line) = s.line(&prompt) else {
                continue;
            };
            let parsed: Option<Vec<_>> = line
                .split_whitespace()
                .map(|t| self.notation.read(t))
                .collect();
            let Some(mut offer) = parsed else {
                eprintln!("unknown value in `{line}`, try again");
                continue;
            };
            if offer.len() != k {
                eprintln!("need exactly {k} value(s), got {}", offer.len());
                continue;
            }
            if offer.iter().any(|&c| !self.board.contains(c)) {
                eprintln!("every value must be on the template, try again");
                continue;
            }
            offer.sort();
            offer.dedup();
            if offer.len() != k {
                eprintln!("values must be distinct, try again");
                continue;
            }
            return offer;
        }
    }
}

struct HumanAdversary<'a, R, V> {
    session: &'a RefCell<Session<R>>,
    inst: &'a Instance,
    notation: &'a dyn Notation<V>,
}

impl<R: BufRead, V: Copy + PartialEq> Adversary<V> for HumanAdversary<'_, R, V> {
    fn pick(&mut self, prefix: &[V], offered: &[V]) -> V {
        let mut s = self.session.borrow_mut();
        loop {
            if s.failure.is_some() || offered.len() == 1 {
                return offered[0];
            }
            let prompt = format!(
                "pick a value for {} from {}: ",
                self.inst.name(prefix.len()),
                show_all(self.notation, offered)
            );
            let Some(line) = s.line(&prompt) else {
                continue;
            };
            match self.notation.read(&line) {
                Some(c) if offered.contains(&c) => return c,
                _ => eprintln!("`{line}` was not offered, try again"),
            }
        }
    }
}

/// Adversary with perfect play on a finite template: takes an offered value
/// from which Prover can no longer win, when there is one.
struct OracleAdversary<'a> {
    solver: Solver<'a>,
    inst: &'a Instance,
    tmpl: &'a Graph,
    failure: Option<Failure>,
}

impl Adversary<usize> for OracleAdversary<'_> {
    fn pick(&mut self, prefix: &[usize], offered: &[usize]) -> usize {
        let broken = self
            .inst
            .atoms()
            .any(|(a, b)| a.max(b) < prefix.len() && !self.tmpl.adjacent(prefix[a], prefix[b]));
        if broken || self.failure.is_some() {
            return offered[0];
        }
        match self.solver.winning_values(prefix) {
            Ok(good) => offered
                .iter()
                .copied()
                .find(|c| !good.contains(c))
                .unwrap_or(offered[0]),
            Err(e) => {
                self.failure = Some(e.into());
                offered[0]
            }
        }
    }
}

/// Oracle Prover that parks budget exhaustion instead of panicking.
struct PatientOracle<'a> {
    inner: OracleProver<'a>,
    failure: Option<Failure>,
    size: usize,
    count: Vec<usize>,
}

impl Prover<usize> for PatientOracle<'_> {
    fn offer(&mut self, prefix: &[usize]) -> Vec<usize> {
        if self.failure.is_none() {
            match self.inner.try_offer(prefix) {
                Ok(o) => return o,
                Err(e) => self.failure = Some(e.into()),
            }
        }
        (0..self.count[prefix.len()].min(self.size)).collect()
    }
}

/// Prints every move as it is made, until the input runs out.
struct Narrated<'a, R, V> {
    inner: &'a mut dyn Adversary<V>,
    session: &'a RefCell<Session<R>>,
    inst: &'a Instance,
    notation: &'a dyn Notation<V>,
}

impl<R, V: Copy> Adversary<V> for Narrated<'_, R, V> {
    fn pick(&mut self, prefix: &[V], offered: &[V]) -> V {
        let c = self.inner.pick(prefix, offered);
        if self.session.borrow().failure.is_some() {
            return c;
        }
        println!(
            "{}: offered {}, took {}",
            self.inst.name(prefix.len()),
            show_all(self.notation, offered),
            self.notation.show(c)
        );
        c
    }
}

fn replay<B: Board>(inst: &Instance, board: &B, game: &Play<B::Value>) -> Result<(), Failure> {
    let mut offers = game.moves.iter().map(|m| m.offered.clone());
    let mut choices = game.moves.iter().map(|m| m.chosen);
    let mut p = |_: &[B::Value]| offers.next().expect("one offer per variable");
    let mut a = |_: &[B::Value], _: &[B::Value]| choices.next().expect("one choice per variable");
    let again = play(inst, board, &mut p, &mut a)
        .map_err(|e| Failure::Check(format!("internal error: transcript does not replay: {e}")))?;
    if again != *game {
        return Err(Failure::Check(
            "internal error: transcript replays differently".into(),
        ));
    }
    Ok(())
}

fn finish<B: Board>(
    inst: &Instance,
    board: &B,
    notation: &dyn Notation<B::Value>,
    game: &Play<B::Value>,
) -> Result<bool, Failure> {
    replay(inst, board, game)?;
    let values = game.values();
    if let Some((a, b)) = inst
        .atoms()
        .find(|&(a, b)| !board.adjacent(values[a], values[b]))
    {
        println!(
            "atom {} - {} lands on {} - {}, which is not an edge",
            inst.name(a),
            inst.name(b),
            notation.show(values[a]),
            notation.show(values[b])
        );
    }
    println!(
        "{}",
        if game.verdict {
            "Prover wins"
        } else {
            "Adversary wins"
        }
    );
    Ok(game.verdict)
}

fn take<R>(session: &RefCell<Session<R>>, engine: Option<Failure>) -> Result<(), Failure> {
    match session.borrow_mut().failure.take().or(engine) {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// Plays one game and prints the transcript. Returns whether Prover won.
pub fn run<R: BufRead>(
    inst: &Instance,
    tmpl: &Template,
    side: Side,
    input: R,
) -> Result<bool, Failure> {
    let session = RefCell::new(Session {
        input,
        failure: None,
    });
    match tmpl {
        Template::Finite(g) => {
            if let Some(v) = (0..inst.len()).find(|&v| inst.count(v) as usize > g.len()) {
                return Err(Failure::Unsupported(format!(
                    "{} needs {} distinct values but the template has {}",
                    inst.name(v),
                    inst.count(v),
                    g.len()
                )));
            }
            let board = GraphBoard(g);
            let notation = VertexNames(g);
            let mut human_p = HumanProver {
                session: &session,
                inst,
                board,
                notation: &notation,
            };
            let mut engine_p = PatientOracle {
                inner: OracleProver::new(inst, g),
                failure: None,
                size: g.len(),
                count: inst.counts().map(|c| c as usize).collect(),
            };
            let mut human_a = HumanAdversary {
                session: &session,
                inst,
                notation: &notation,
            };
            let mut engine_a = OracleAdversary {
                solver: Solver::new(inst, g),
                inst,
                tmpl: g,
                failure: None,
            };
            let prover: &mut dyn Prover<usize> = match side {
                Side::Prover => &mut human_p,
                _ => &mut engine_p,
            };
            let adversary: &mut dyn Adversary<usize> = match side {
                Side::Adversary => &mut human_a,
                _ => &mut engine_a,
            };
            let mut narrated = Narrated {
                inner: adversary,
                session: &session,
                inst,
                notation: &notation,
            };
            let game = play(inst, &board, prover, &mut narrated);
            take(&session, engine_p.failure.or(engine_a.failure))?;
            let game = game.map_err(|e| Failure::Check(format!("internal error: {e}")))?;
            finish(inst, &board, &notation, &game)
        }
        Template::InfinitePath => {
            let board = PathBoard::infinite();
            let mut human_p = HumanProver {
                session: &session,
                inst,
                board,
                notation: &Integers,
            };
            let mut engine_p = InfPathProver::new(inst);
            let mut human_a = HumanAdversary {
                session: &session,
                inst,
                notation: &Integers,
            };
            let mut engine_a = ViolationSeeker::new(inst);
            let prover: &mut dyn Prover<i64> = match side {
                Side::Prover => &mut human_p,
                _ => &mut engine_p,
            };
            let adversary: &mut dyn Adversary<i64> = match side {
                Side::Adversary => &mut human_a,
                _ => &mut engine_a,
            };
            let mut narrated = Narrated {
                inner: adversary,
                session: &session,
                inst,
                notation: &Integers,
            };
            let game = play(inst, &board, prover, &mut narrated);
            take(&session, None)?;
            let game = game.map_err(|e| Failure::Check(format!("internal error: {e}")))?;
            finish(inst, &board, &Integers, &game)
        }
    }
}
