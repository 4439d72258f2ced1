//! The `bench` subcommand: each polynomial decider against the oracle on
//! seeded random instances.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xcsp::acceptance::dominated_templates;
use xcsp::classify::{decide_dominating, decide_small, small_shape, SmallShape};
use xcsp::finpath::{decide_forest, decide_path};
use xcsp::formula::{Graph, Instance};
use xcsp::generate::{
    random_bipartite, random_connected, random_forest, random_instance, small_templates,
};
use xcsp::infpath::decide_infinite_path;
use xcsp::k4::decide_k4;
use xcsp::oracle::{decide, BudgetExhausted};

use crate::input::Failure;

pub struct Row {
    pub decider: &'static str,
    pub vars: usize,
    pub instances: usize,
    pub decider_time: Duration,
    pub oracle_time: Duration,
    pub agree: usize,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

/// A random instance of the family and the template the oracle should use.
fn generate(name: &str, n: usize, rng: &mut ChaCha8Rng) -> (Instance, Graph) {
    match name {
        "k4" => (random_connected(rng, n, &[2], 0.3), Graph::complete(4)),
        "infpath" => (
            random_bipartite(rng, n, &[1, 2], 0.3),
            Graph::path(2 * n + 2),
        ),
        "finpath" => {
            let len = rng.gen_range(1..=n + 1);
            (random_bipartite(rng, n, &[1, 2], 0.3), Graph::path(len))
        }
        "forest" => {
            let size = rng.gen_range(2..=7);
            let g = random_forest(rng, size, 0.8);
            (random_instance(rng, n, &[1, 2], 0.4), g)
        }
        "small" => {
            let pool: Vec<Graph> = small_templates()
                .into_iter()
                .filter(|g| {
                    !matches!(
                        small_shape(g),
                        Some(SmallShape::Triangle | SmallShape::LoopedEnds | SmallShape::P100)
                    )
                })
                .collect();
            let g = pool[rng.gen_range(0..pool.len())].clone();
            (random_instance(rng, n, &[1, 2], 0.4), g)
        }
        "dominating" => {
            let pool = dominated_templates();
            let g = pool[rng.gen_range(0..pool.len())].clone();
            (random_instance(rng, n, &[1, 2], 0.4), g)
        }
        _ => unreachable!("unknown family {name}"),
    }
}

fn verdict(name: &str, inst: &Instance, g: &Graph) -> bool {
    match name {
        "k4" => decide_k4(inst),
        "infpath" => decide_infinite_path(inst),
        "finpath" => decide_path(inst, g.len()),
        "forest" => decide_forest(inst, g).expect("generated a forest"),
        "small" => decide_small(inst, g).expect("routable shape"),
        "dominating" => decide_dominating(inst, g).expect("dominated template"),
        _ => unreachable!("unknown family {name}"),
    }
}

pub const FAMILIES: [&str; 6] = ["k4", "infpath", "finpath", "forest", "small", "dominating"];

/// Runs every family at every size; decider and oracle see the same
/// instances and are timed separately.
pub fn run(sizes: &[usize], per: usize, seed: u64) -> Result<Vec<Row>, BudgetExhausted> {
    let mut rows = Vec::new();
    for &n in sizes {
        for (k, &name) in FAMILIES.iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 8) ^ k as u64);
            let mut decider_time = Duration::ZERO;
            let mut oracle_time = Duration::ZERO;
            let mut agree = 0;
            for _ in 0..per {
                let (inst, g) = generate(name, n, &mut rng);
                let (got, dt) = timed(|| verdict(name, &inst, &g));
                let (expected, ot) = timed(|| decide(&inst, &g));
                decider_time += dt;
                oracle_time += ot;
                agree += usize::from(expected? == got);
            }
            rows.push(Row {
                decider: name,
                vars: n,
                instances: per,
                decider_time,
                oracle_time,
                agree,
            });
        }
    }
    Ok(rows)
}

pub fn print(rows: &[Row]) -> Result<(), Failure> {
    println!(
        "{:<11} {:>4} {:>9} {:>12} {:>12} {:>7}",
        "decider", "vars", "instances", "decider ms", "oracle ms", "agree"
    );
    for r in rows {
        println!(
            "{:<11} {:>4} {:>9} {:>12.3} {:>12.3} {:>7}",
            r.decider,
            r.vars,
            r.instances,
            r.decider_time.as_secs_f64() * 1e3,
            r.oracle_time.as_secs_f64() * 1e3,
            if r.agree == r.instances {
                "all".to_string()
            } else {
                format!("{}/{}", r.agree, r.instances)
            }
        );
    }
    let bad: usize = rows.iter().map(|r| r.instances - r.agree).sum();
    if bad > 0 {
        return Err(Failure::Check(format!(
            "{bad} disagreement(s) with the oracle"
        )));
    }
    Ok(())
}
