//! The acceptance suite: every decider, strategy and generator checked
//! against the oracle or a fixture, grouped into nine criteria.
//!
//! Each criterion is a list of named checks. A check that fails for a
//! documented reason is listed in [`KNOWN_DEVIATIONS`]; the suite as a whole
//! is accepted when every failing check is one of those.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{
    classify, decide_dominating, decide_p100, decide_small, small_shape, SmallShape,
};
use crate::finpath::{
    decide_forest, decide_path, gamma_path, small_path, AwayAdversary, TowardProver,
};
use crate::formula::{Graph, Instance, Template};
use crate::generate::{
    instances_up_to, instances_with_loops, random_bipartite, random_connected, random_forest,
    random_instance, small_templates, Family,
};
use crate::infpath::{
    decide_infinite_path, is_looping_walk, refute_infinite_path, walk_lambda, InfPathProver,
    Refutation, ViolationSeeker,
};
use crate::k4::{decide_k4, K4Prover};
use crate::oracle::{
    self, explore, play, Adversary, BudgetExhausted, ContractError, GraphBoard, PathBoard, Prover,
};
use crate::reductions::{
    gadget_game, gadget_prediction, lift_to_cycle, lift_to_k2n, validate_cycle_lift,
};

/// Checks expected to fail, with the reason.
pub const KNOWN_DEVIATIONS: &[(&str, &str)] = &[
    (
        "walk fixture: lambda(Q*) = 0",
        "with the fixture's counts the short walk scores 2; the long walk Q is the bad walk",
    ),
    (
        "P5: direct rule vs displacement test",
        "the direct rule misses a first `∃≥2` variable pulled to an end by a later walk; the displacement test matches the oracle",
    ),
    (
        "P100 forbidden patterns match the oracle",
        "the four patterns reject YES instances and no finite list captures the forcing chains",
    ),
];

/// One named comparison inside a criterion.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    /// The documented reason this check is allowed to fail, if any.
    pub fn known_deviation(&self) -> Option<&'static str> {
        KNOWN_DEVIATIONS
            .iter()
            .find(|(name, _)| *name == self.name)
            .map(|&(_, why)| why)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub number: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// True when every failing check is a known deviation.
    pub fn accepted(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed || c.known_deviation().is_some())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {} {verdict}: {} ({:.1}s)",
            self.number,
            self.title,
            self.elapsed.as_secs_f64()
        )?;
        for c in &self.checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            write!(f, "\n    [{mark}] {}: {}", c.name, c.detail)?;
            if let (false, Some(why)) = (c.passed, c.known_deviation()) {
                write!(f, " (known deviation: {why})")?;
            }
        }
        Ok(())
    }
}

pub const CRITERIA: [(u8, &str); 9] = [
    (1, "K4 closure decider"),
    (2, "infinite path"),
    (3, "finite paths"),
    (4, "forests"),
    (5, "strategy simulations"),
    (6, "edge gadget table"),
    (7, "reduction faithfulness"),
    (8, "small templates"),
    (9, "classifier"),
];

/// Runs one criterion by number.
pub fn run(number: u8) -> Outcome {
    let start = Instant::now();
    let checks = match number {
        1 => k4_checks(),
        2 => infpath_checks(),
        3 => finpath_checks(),
        4 => forest_checks(),
        5 => strategy_checks(),
        6 => gadget_checks(),
        7 => reduction_checks(),
        8 => small_checks(),
        9 => classifier_checks(),
        _ => panic!("no criterion {number}"),
    };
    let title = CRITERIA
        .iter()
        .find(|(n, _)| *n == number)
        .map_or("", |&(_, t)| t);
    Outcome {
        number,
        title,
        checks,
        elapsed: start.elapsed(),
    }
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(|&(n, _)| run(n)).collect()
}

/// Compares a decider with the oracle over a corpus.
fn agreement<'a>(
    name: impl Into<String>,
    corpus: impl IntoIterator<Item = &'a Instance>,
    mut fast: impl FnMut(&Instance) -> bool,
    mut slow: impl FnMut(&Instance) -> Result<bool, BudgetExhausted>,
) -> Check {
    let (mut total, mut yes, mut wrong) = (0usize, 0usize, Vec::new());
    for inst in corpus {
        total += 1;
        let expected = match slow(inst) {
            Ok(v) => v,
            Err(e) => return Check::new(name, false, format!("oracle gave up on {inst:?}: {e}")),
        };
        yes += expected as usize;
        if fast(inst) != expected {
            wrong.push(inst.clone());
        }
    }
    let mut detail = format!(
        "{} disagreements on {total} instances ({yes} YES)",
        wrong.len()
    );
    if let Some(first) = wrong.first() {
        detail += &format!(", first {first:?}");
    }
    Check::new(name, wrong.is_empty(), detail)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn k4_corpus() -> (Vec<Instance>, Vec<Instance>) {
    let exhaustive = instances_up_to(
        5,
        Family {
            counts: &[2],
            connected: true,
            bipartite: false,
        },
    );
    let mut r = rng(1);
    let random = (0..500)
        .map(|_| {
            let n = r.gen_range(6..=8);
            random_connected(&mut r, n, &[2], 0.25)
        })
        .collect();
    (exhaustive, random)
}

fn k4_checks() -> Vec<Check> {
    let k4 = Graph::complete(4);
    let (exhaustive, random) = k4_corpus();
    let oracle = |i: &Instance| oracle::decide(i, &k4);
    vec![
        agreement("connected, <= 5 variables", &exhaustive, decide_k4, oracle),
        agreement("500 random, 6-8 variables", &random, decide_k4, oracle),
    ]
}

/// The worked example of a bad walk: nine variables on a path-like graph.
pub fn walk_fixture() -> Instance {
    Instance::from_counts(
        &[1, 2, 2, 2, 1, 2, 1, 1, 2],
        &[
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (0, 8),
            (1, 6),
        ],
    )
}

/// The short walk `v1 v9 v8 v7 v2` of the fixture.
pub const SHORT_WALK: [usize; 5] = [0, 8, 7, 6, 1];

/// The long walk through `v3` of the fixture.
pub const LONG_WALK: [usize; 13] = [0, 8, 7, 6, 5, 4, 3, 2, 3, 4, 5, 6, 1];

fn bipartite_corpus() -> (Vec<Instance>, Vec<Instance>) {
    let exhaustive = instances_up_to(
        5,
        Family {
            counts: &[1, 2],
            connected: false,
            bipartite: true,
        },
    );
    let mut r = rng(2);
    let random = (0..500)
        .map(|_| {
            let n = r.gen_range(1..=8);
            random_bipartite(&mut r, n, &[1, 2], 0.2)
        })
        .collect();
    (exhaustive, random)
}

fn infpath_checks() -> Vec<Check> {
    let (exhaustive, random) = bipartite_corpus();
    let mut checks = vec![
        agreement(
            "bipartite, <= 5 variables",
            &exhaustive,
            decide_infinite_path,
            oracle::infinite_path_decide,
        ),
        agreement(
            "500 random, <= 8 variables",
            &random,
            decide_infinite_path,
            oracle::infinite_path_decide,
        ),
    ];
    let fixture = walk_fixture();
    let answer = decide_infinite_path(&fixture);
    let oracle_answer = oracle::infinite_path_decide(&fixture);
    checks.push(Check::new(
        "walk fixture is NO",
        !answer && oracle_answer == Ok(false),
        format!("decider {answer}, oracle {oracle_answer:?}"),
    ));
    for (name, walk) in [("Q*", &SHORT_WALK[..]), ("Q", &LONG_WALK[..])] {
        let lambda = walk_lambda(&fixture, walk);
        let looping = is_looping_walk(&fixture, walk);
        checks.push(Check::new(
            format!("walk fixture: lambda({name}) = 0"),
            lambda == Ok(0) && looping,
            format!("lambda {lambda:?}, looping walk {looping}"),
        ));
    }
    let certificate = match refute_infinite_path(&fixture) {
        Some(Refutation::BadWalk(w)) => Some(w),
        _ => None,
    };
    checks.push(Check::new(
        "walk fixture certificate re-scores",
        certificate.as_ref().is_some_and(|w| {
            walk_lambda(&fixture, &w.walk)
                .is_ok_and(|l| l <= fixture.count(*w.walk.last().unwrap()) as i64 - 2)
        }),
        format!("{certificate:?}"),
    ));
    checks
}

fn connected_bipartite_corpus() -> (Vec<Instance>, Vec<Instance>) {
    let exhaustive = instances_up_to(
        5,
        Family {
            counts: &[1, 2],
            connected: true,
            bipartite: true,
        },
    );
    let mut r = rng(3);
    let random = (0..300)
        .map(|_| {
            let n = r.gen_range(6..=8);
            random_bipartite(&mut r, n, &[1, 2], 0.15)
        })
        .collect();
    (exhaustive, random)
}

fn finpath_checks() -> Vec<Check> {
    let (exhaustive, random) = connected_bipartite_corpus();
    let mut checks = Vec::new();
    for n in 1..=9 {
        let g = Graph::path(n);
        let corpus = exhaustive.iter().chain(&random);
        checks.push(agreement(
            format!("P{n}, connected bipartite"),
            corpus,
            |i| decide_path(i, n),
            |i| oracle::decide(i, &g),
        ));
    }
    for n in [4, 5] {
        let (mut compared, mut wrong) = (0, 0);
        for inst in exhaustive.iter().filter(|i| decide_infinite_path(i)) {
            compared += 1;
            wrong += (small_path(inst, n) != gamma_path(inst, n)) as usize;
        }
        checks.push(Check::new(
            format!("P{n}: direct rule vs displacement test"),
            wrong == 0,
            format!("{wrong} disagreements on {compared} instances"),
        ));
    }
    checks
}

fn forest_checks() -> Vec<Check> {
    let mut r = rng(4);
    let (mut pairs, mut wrong, mut yes) = (0, Vec::new(), 0);
    for _ in 0..2000 {
        let size = r.gen_range(1..=7);
        let forest = random_forest(&mut r, size, 0.7);
        let n = r.gen_range(1..=5);
        let inst = random_instance(&mut r, n, &[1, 2], 0.4);
        pairs += 1;
        let expected = oracle::decide(&inst, &forest).expect("small instances fit the budget");
        yes += expected as usize;
        if decide_forest(&inst, &forest) != Ok(expected) {
            wrong.push((forest, inst));
        }
    }
    let mut detail = format!("{} disagreements on {pairs} pairs ({yes} YES)", wrong.len());
    if let Some((g, i)) = wrong.first() {
        detail += &format!(", first {i:?} on {g:?}");
    }
    let mut checks = vec![Check::new(
        "2000 random forest/instance pairs",
        wrong.is_empty(),
        detail,
    )];
    let ties = Graph::path(3).disjoint_union(&Graph::path(3));
    let all = instances_up_to(
        4,
        Family {
            counts: &[1, 2],
            connected: false,
            bipartite: false,
        },
    );
    checks.push(agreement(
        "two longest trees of equal length, <= 4 variables",
        &all,
        |i| decide_forest(i, &ties) == Ok(true),
        |i| oracle::decide(i, &ties),
    ));
    checks
}

/// Runs `explore`, treating a value off a finite board as a loss.
fn always_wins<B: oracle::Board>(
    inst: &Instance,
    board: &B,
    prover: &mut dyn Prover<B::Value>,
) -> bool {
    match explore(inst, board, prover) {
        Ok(e) => e.prover_always_wins(),
        Err(ContractError::OffBoard { .. }) => false,
        Err(e) => panic!("strategy broke the game contract: {e}"),
    }
}

fn strategy_tally(name: String, tried: usize, failed: Vec<Instance>) -> Check {
    let mut detail = format!("{} failures in {tried} games", failed.len());
    if let Some(first) = failed.first() {
        detail += &format!(", first {first:?}");
    }
    Check::new(name, failed.is_empty(), detail)
}

fn strategy_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    let k4 = Graph::complete(4);
    let (a, b) = k4_corpus();
    let yes: Vec<_> = a.iter().chain(&b).filter(|i| decide_k4(i)).collect();
    let failed = yes
        .iter()
        .filter(|i| !always_wins(i, &GraphBoard(&k4), &mut K4Prover::new(i)))
        .map(|&i| i.clone())
        .collect();
    checks.push(strategy_tally(
        "K4 four-step Prover on YES instances".into(),
        yes.len(),
        failed,
    ));

    let (a, b) = bipartite_corpus();
    let yes: Vec<_> = a
        .iter()
        .chain(&b)
        .filter(|i| decide_infinite_path(i))
        .collect();
    let failed = yes
        .iter()
        .filter(|i| !always_wins(i, &PathBoard::infinite(), &mut InfPathProver::new(i)))
        .map(|&i| i.clone())
        .collect();
    checks.push(strategy_tally(
        "window Prover on infinite-path YES instances".into(),
        yes.len(),
        failed,
    ));

    let (a, b) = connected_bipartite_corpus();
    let corpus: Vec<_> = a.iter().chain(&b).collect();
    for n in 1..=9 {
        let board = PathBoard::finite(n);
        let (mut yes_games, mut yes_failed) = (0, Vec::new());
        let (mut no_games, mut no_failed) = (0, Vec::new());
        for &inst in &corpus {
            let mut prover = TowardProver::for_path(inst, n);
            if decide_path(inst, n) {
                yes_games += 1;
                if !always_wins(inst, &board, &mut prover) {
                    yes_failed.push(inst.clone());
                }
            } else {
                no_games += 1;
                let mut away = AwayAdversary { m2: n as i64 + 1 };
                let mut seeker = ViolationSeeker::new(inst);
                let adversary: &mut dyn Adversary<i64> = if decide_infinite_path(inst) {
                    &mut away
                } else {
                    &mut seeker
                };
                let prover_won = match play(inst, &board, &mut prover, adversary) {
                    Ok(p) => p.verdict,
                    Err(ContractError::OffBoard { .. }) => false,
                    Err(e) => panic!("strategy broke the game contract: {e}"),
                };
                if prover_won {
                    no_failed.push(inst.clone());
                }
            }
        }
        checks.push(strategy_tally(
            format!("P{n}: toward-centre Prover on YES instances"),
            yes_games,
            yes_failed,
        ));
        checks.push(strategy_tally(
            format!("P{n}: away-from-centre Adversary on NO instances"),
            no_games,
            no_failed,
        ));
    }
    checks
}

fn gadget_checks() -> Vec<Check> {
    let mut wrong = Vec::new();
    for cx in 1..=6 {
        for cy in 1..=6 {
            match gadget_game(3, cx, cy) {
                Ok(won) if won == gadget_prediction(3, cx, cy) => {}
                other => wrong.push(format!("({cx},{cy}) -> {other:?}")),
            }
        }
    }
    vec![Check::new(
        "36 colour pairs at n = 3",
        wrong.is_empty(),
        if wrong.is_empty() {
            "all match".to_string()
        } else {
            wrong.join("; ")
        },
    )]
}

/// Every source with at most two variables and at most one atom, counts in
/// `{1, n}`.
pub fn small_sources(n: u32) -> Vec<Instance> {
    let mut out = Vec::new();
    for c in [1, n] {
        out.push(Instance::from_counts(&[c], &[]));
    }
    for a in [1, n] {
        for b in [1, n] {
            out.push(Instance::from_counts(&[a, b], &[]));
            out.push(Instance::from_counts(&[a, b], &[(0, 1)]));
        }
    }
    out
}

fn reduction_checks() -> Vec<Check> {
    let (k3, k6) = (Graph::complete(3), Graph::complete(6));
    let sources = small_sources(3);
    let lifted: Vec<Instance> = sources
        .iter()
        .map(|s| lift_to_k2n(s, 3).expect("valid sources"))
        .collect();
    let mut checks = Vec::new();
    let sizes_ok = sources
        .iter()
        .zip(&lifted)
        .all(|(s, l)| l.len() == 3 + s.len() + 6 * s.atom_count() && l.counts().all(|c| c == 3));
    checks.push(Check::new(
        "lifted sizes n + N + 6|E|, all counts n",
        sizes_ok,
        format!("{} sources", sources.len()),
    ));
    let mut wrong = Vec::new();
    for (s, l) in sources.iter().zip(&lifted) {
        let want = oracle::decide(s, &k3);
        let got = oracle::decide(l, &k6);
        if want.is_err() || want != got {
            wrong.push(format!("{s:?}: source {want:?}, lifted {got:?}"));
        }
    }
    checks.push(Check::new(
        "K3 sources vs lifted K6 instances",
        wrong.is_empty(),
        format!(
            "{} of {} disagree {}",
            wrong.len(),
            sources.len(),
            wrong.join("; ")
        ),
    ));
    let mut bad = Vec::new();
    let cycle_sources = small_sources(3)
        .into_iter()
        .chain([Instance::from_counts(&[3, 1, 1], &[(0, 1), (1, 2), (0, 2)])]);
    let mut count = 0;
    for s in cycle_sources {
        count += 1;
        let out = lift_to_cycle(&s, 3).expect("valid sources");
        if let Err(e) = validate_cycle_lift(&s, 3, &out) {
            bad.push(format!("{s:?}: {e}"));
        }
        let prefix: Vec<u32> = out.counts().take(6).collect();
        if prefix != [2, 2, 2, 2, 1, 1] {
            bad.push(format!("{s:?}: prefix {prefix:?}"));
        }
    }
    checks.push(Check::new(
        "cycle reduction structure at j = 3",
        bad.is_empty(),
        format!(
            "{} problems in {count} sources {}",
            bad.len(),
            bad.join("; ")
        ),
    ));
    let one_edge = Instance::from_counts(&[1, 1], &[(0, 1)]);
    let size = lift_to_cycle(&one_edge, 3).map(|i| i.len());
    checks.push(Check::new(
        "cycle reduction size for one atom",
        size == Ok(6 + 2 + 54 + 2),
        format!("{size:?} variables"),
    ));
    checks
}

/// Four-vertex and five-vertex templates with a looped dominating vertex
/// over a remainder the dominating-vertex rule decides.
pub fn dominated_templates() -> Vec<Graph> {
    let mut out: Vec<Graph> = small_templates()
        .into_iter()
        .filter(|g| !g.dominating_loops().is_empty())
        .collect();
    out.push(Graph::from_edges(
        5,
        &[
            (4, 4),
            (4, 0),
            (4, 1),
            (4, 2),
            (4, 3),
            (0, 1),
            (1, 2),
            (2, 3),
            (0, 3),
        ],
    ));
    out.push(Graph::from_edges(
        4,
        &[(3, 3), (3, 0), (3, 1), (3, 2), (0, 1), (1, 2)],
    ));
    out
}

fn small_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    let looped = instances_with_loops(4, &[1, 2]);
    let (mut templates, mut wrong, mut refused) = (0, Vec::new(), 0);
    for g in small_templates() {
        match small_shape(&g) {
            Some(SmallShape::Triangle | SmallShape::LoopedEnds) => {
                refused += 1;
                continue;
            }
            // Checked on its own below.
            Some(SmallShape::P100) => continue,
            _ => {}
        }
        templates += 1;
        for inst in &looped {
            let fast = decide_small(inst, &g).expect("shape accepted");
            if fast != oracle::decide(inst, &g).expect("small") {
                wrong.push(format!("{inst:?} on {g:?}"));
            }
        }
    }
    checks.push(Check::new(
        "decide_small, templates on <= 3 vertices other than P100, <= 4 variables with loops",
        wrong.is_empty(),
        format!(
            "{} disagreements over {templates} templates x {} instances ({refused} hard templates refused){}",
            wrong.len(),
            looped.len(),
            wrong.first().map_or(String::new(), |w| format!(", first {w}"))
        ),
    ));
    let mut wrong = Vec::new();
    let dominated = dominated_templates();
    for g in &dominated {
        for inst in &looped {
            match decide_dominating(inst, g) {
                Ok(fast) if fast == oracle::decide(inst, g).expect("small") => {}
                other => wrong.push(format!("{inst:?} on {g:?}: {other:?}")),
            }
        }
    }
    checks.push(Check::new(
        "decide_dominating, <= 4 variables with loops",
        wrong.is_empty(),
        format!(
            "{} disagreements over {} templates{}",
            wrong.len(),
            dominated.len(),
            wrong
                .first()
                .map_or(String::new(), |w| format!(", first {w}"))
        ),
    ));
    let p100 = Graph::p100();
    let loop_free = instances_up_to(
        5,
        Family {
            counts: &[1, 2],
            connected: false,
            bipartite: false,
        },
    );
    let (mut false_yes, mut false_no) = (0, 0);
    for inst in &loop_free {
        let want = oracle::decide(inst, &p100).expect("small");
        match (decide_p100(inst), want) {
            (true, false) => false_yes += 1,
            (false, true) => false_no += 1,
            _ => {}
        }
    }
    checks.push(Check::new(
        "P100 forbidden patterns match the oracle",
        false_yes + false_no == 0,
        format!(
            "{} instances: {false_yes} accepted NO instances, {false_no} rejected YES instances",
            loop_free.len()
        ),
    ));
    checks
}

/// The checked-in classification table: template spec, quantifier list,
/// expected label, and what the row covers.
pub const CLASSIFY_TABLE: &str = include_str!("../golden/classify.tsv");

/// Parses a comma-separated quantifier list.
pub fn parse_quantifiers(list: &str) -> Option<BTreeSet<u32>> {
    list.split(',').map(|q| q.trim().parse().ok()).collect()
}

fn classifier_checks() -> Vec<Check> {
    let mut wrong = Vec::new();
    let mut rows = 0;
    for line in CLASSIFY_TABLE.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        rows += 1;
        let cols: Vec<&str> = line.split('\t').collect();
        let (Some(t), Some(x)) = (Template::parse_spec(cols[0]), parse_quantifiers(cols[1])) else {
            wrong.push(format!("unreadable row `{line}`"));
            continue;
        };
        let got = classify(&t, &x).to_string();
        if got != cols[2] {
            wrong.push(format!(
                "{} {}: got `{got}`, expected `{}`",
                cols[0], cols[1], cols[2]
            ));
        }
    }
    vec![Check::new(
        "golden classification table",
        wrong.is_empty(),
        format!(
            "{} mismatches in {rows} rows {}",
            wrong.len(),
            wrong.join("; ")
        ),
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviations_name_real_checks() {
        assert_eq!(parse_quantifiers("1, 2"), Some([1, 2].into()));
        assert_eq!(parse_quantifiers("1,x"), None);
        let outcome = run(6);
        assert!(outcome.passed());
        assert!(outcome.to_string().starts_with("criterion 6 PASS"));
    }
}
