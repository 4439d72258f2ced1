//! The `solve` subcommand: method dispatch and certificates.

use std::fmt;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use xcsp::classify::{
    decide_dominating, decide_small, p100_obstruction, small_shape, P100Obstruction, SmallShape,
};
use xcsp::finpath::{decide_forest, decide_path, gamma_tables};
use xcsp::formula::{Colour, Graph, Instance, Template, Var};
use xcsp::infpath::{
    full_delta_table, is_looping_walk, refute_infinite_path, walk_lambda, Refutation,
};
use xcsp::k4::{closure, refute_k4, K4Violation};
use xcsp::oracle::decide_with_budget;

use crate::input::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Oracle,
    K4,
    Infpath,
    Finpath,
    Forest,
    Small,
    P100,
    Dominating,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

pub struct Report {
    pub verdict: bool,
    pub method: Method,
    pub elapsed: Duration,
    /// Why the answer is NO, already re-checked against the instance.
    pub certificate: Option<String>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn verdict_line(&self) -> &'static str {
        if self.verdict {
            "YES"
        } else {
            "NO"
        }
    }
}

fn ones_and_twos(inst: &Instance) -> bool {
    inst.counts_within(&[1, 2])
}

fn is_path(g: &Graph) -> bool {
    g.is_irreflexive() && g.isomorphic(&Graph::path(g.len()))
}

fn is_k4(g: &Graph) -> bool {
    g.len() == 4 && g.is_irreflexive() && g.is_complete()
}

fn dominating_applies(g: &Graph) -> bool {
    g.dominating_loops().first().is_some_and(|&w| {
        let rest = g.without(w);
        !rest.loops().is_empty() || rest.is_bipartite()
    })
}

/// The method `auto` resolves to. The three-vertex path with one looped end
/// goes to the oracle, since its forbidden-configuration rule is not exact.
pub fn route(inst: &Instance, tmpl: &Template) -> Method {
    let g = match tmpl {
        Template::InfinitePath if ones_and_twos(inst) => return Method::Infpath,
        Template::InfinitePath => return Method::Oracle,
        Template::Finite(g) => g,
    };
    if is_k4(g) && inst.counts().all(|c| c == 2) {
        return Method::K4;
    }
    if !ones_and_twos(inst) {
        return Method::Oracle;
    }
    if is_path(g) {
        Method::Finpath
    } else if g.is_forest() {
        Method::Forest
    } else if matches!(
        small_shape(g),
        Some(s) if !matches!(s, SmallShape::Triangle | SmallShape::LoopedEnds | SmallShape::P100)
    ) {
        Method::Small
    } else if dominating_applies(g) {
        Method::Dominating
    } else {
        Method::Oracle
    }
}

fn finite(tmpl: &Template, method: Method) -> Result<&Graph, Failure> {
    tmpl.finite()
        .ok_or_else(|| Failure::Unsupported(format!("{method} needs a finite template")))
}

fn need_ones_and_twos(inst: &Instance, method: Method) -> Result<(), Failure> {
    if ones_and_twos(inst) {
        Ok(())
    } else {
        Err(Failure::Unsupported(format!(
            "{method} needs every count to be 1 or 2"
        )))
    }
}

const P100_WARNING: &str = "warning: the forbidden-configuration rule for this template is not \
                            exact; `--method oracle` gives the reference answer";

pub fn solve(
    inst: &Instance,
    tmpl: &Template,
    method: Method,
    budget: u64,
) -> Result<Report, Failure> {
    let method = if method == Method::Auto {
        route(inst, tmpl)
    } else {
        method
    };
    let start = Instant::now();
    let mut warnings = Vec::new();
    let verdict = match method {
        Method::Auto => unreachable!("resolved above"),
        Method::Oracle => {
            let g = match tmpl {
                Template::Finite(g) => g.clone(),
                // Values never need to leave a window of 2N + 2 vertices.
                Template::InfinitePath => Graph::path(2 * inst.len() + 2),
            };
            decide_with_budget(inst, &g, budget)?
        }
        Method::K4 => {
            let g = finite(tmpl, method)?;
            if !is_k4(g) {
                return Err(Failure::Unsupported("k4 needs the template K4".into()));
            }
            if inst.counts().any(|c| c != 2) {
                return Err(Failure::Unsupported("k4 needs every count to be 2".into()));
            }
            refute_k4(inst).is_none()
        }
        Method::Infpath => {
            if *tmpl != Template::InfinitePath {
                return Err(Failure::Unsupported(
                    "infpath needs the template infpath".into(),
                ));
            }
            need_ones_and_twos(inst, method)?;
            refute_infinite_path(inst).is_none()
        }
        Method::Finpath => {
            let g = finite(tmpl, method)?;
            if !is_path(g) {
                return Err(Failure::Unsupported(
                    "finpath needs a loopless path template".into(),
                ));
            }
            need_ones_and_twos(inst, method)?;
            decide_path(inst, g.len())
        }
        Method::Forest => {
            let g = finite(tmpl, method)?;
            need_ones_and_twos(inst, method)?;
            decide_forest(inst, g).map_err(|e| Failure::Unsupported(e.to_string()))?
        }
        Method::Small => {
            let g = finite(tmpl, method)?;
            if small_shape(g) == Some(SmallShape::P100) {
                warnings.push(P100_WARNING.to_string());
            }
            decide_small(inst, g).map_err(|e| Failure::Unsupported(e.to_string()))?
        }
        Method::P100 => {
            let g = finite(tmpl, method)?;
            if !g.isomorphic(&Graph::p100()) {
                return Err(Failure::Unsupported(
                    "p100 needs the three-vertex path with one looped end".into(),
                ));
            }
            need_ones_and_twos(inst, method)?;
            warnings.push(P100_WARNING.to_string());
            p100_obstruction(inst).is_none()
        }
        Method::Dominating => {
            let g = finite(tmpl, method)?;
            decide_dominating(inst, g).map_err(|e| Failure::Unsupported(e.to_string()))?
        }
    };
    let elapsed = start.elapsed();
    let certificate = if verdict {
        None
    } else {
        certificate(inst, tmpl, method)?
    };
    Ok(Report {
        verdict,
        method,
        elapsed,
        certificate,
        warnings,
    })
}

fn names(inst: &Instance, vars: &[Var]) -> String {
    vars.iter()
        .map(|&v| inst.name(v))
        .collect::<Vec<_>>()
        .join(",")
}

fn unverified(what: &str) -> Failure {
    Failure::Check(format!(
        "internal error: {what} certificate did not re-verify"
    ))
}

fn certificate(
    inst: &Instance,
    tmpl: &Template,
    method: Method,
) -> Result<Option<String>, Failure> {
    Ok(match method {
        Method::Infpath => refute_infinite_path(inst)
            .map(|r| describe_refutation(inst, &r))
            .transpose()?,
        Method::K4 => refute_k4(inst).map(|v| describe_k4(inst, v)).transpose()?,
        Method::Finpath => {
            let n = tmpl.finite().map_or(0, Graph::len);
            match refute_infinite_path(inst) {
                Some(r) => Some(format!(
                    "false on the infinite path already: {}",
                    describe_refutation(inst, &r)?
                )),
                None if n >= 4 => gamma_witness(inst, n),
                None => None,
            }
        }
        Method::Forest => match refute_infinite_path(inst) {
            Some(r) => Some(format!(
                "false on the infinite path already: {}",
                describe_refutation(inst, &r)?
            )),
            None => None,
        },
        Method::P100 => p100_obstruction(inst).map(|o| describe_p100(inst, o)),
        Method::Dominating => Some(
            "the ∃≥2 variables do not map into the template without its dominating loop".into(),
        ),
        _ => None,
    })
}

/// Renders an infinite-path refutation after checking it against the
/// instance from scratch.
pub fn describe_refutation(inst: &Instance, r: &Refutation) -> Result<String, Failure> {
    match r {
        Refutation::LoopAtom(v) => {
            if !inst.has_atom(*v, *v) {
                return Err(unverified("loop atom"));
            }
            Ok(format!("loop atom on {}", inst.name(*v)))
        }
        Refutation::OddCycle(cycle) => {
            let closed = cycle.first() == cycle.last() && cycle.len() % 2 == 0;
            let joined = cycle
                .windows(2)
                .all(|p| p[0] != p[1] && inst.has_atom(p[0], p[1]));
            if !closed || !joined {
                return Err(unverified("odd cycle"));
            }
            Ok(format!("odd closed walk {}", names(inst, cycle)))
        }
        Refutation::BadWalk(bad) => {
            let lambda = walk_lambda(inst, &bad.walk).map_err(|_| unverified("bad walk"))?;
            let v = *bad.walk.last().expect("walks have two entries");
            let bound = inst.count(v) as i64 - 2;
            if lambda != bad.lambda || lambda > bound || !is_looping_walk(inst, &bad.walk) {
                return Err(unverified("bad walk"));
            }
            Ok(format!(
                "bad walk {} (lambda {lambda}, at most count({}) - 2 = {bound})",
                names(inst, &bad.walk),
                inst.name(v)
            ))
        }
    }
}

fn describe_k4(inst: &Instance, violation: K4Violation) -> Result<String, Failure> {
    let triple = |(a, b, c): (Var, Var, Var)| names(inst, &[a, b, c]);
    match violation {
        K4Violation::LoopAtom(v) => {
            if !inst.has_atom(v, v) {
                return Err(unverified("loop atom"));
            }
            Ok(format!("loop atom on {}", inst.name(v)))
        }
        K4Violation::PlusWithPair { triple: t, pair } => {
            let sets = closure(inst);
            if !sets.in_plus(t.0, t.1, t.2) || !sets.in_f(pair.0, pair.1) {
                return Err(unverified("K4"));
            }
            Ok(format!(
                "R+ holds {} while F holds {}",
                triple(t),
                names(inst, &[pair.0, pair.1])
            ))
        }
        K4Violation::PlusWithMinus { triple: t, minus } => {
            let sets = closure(inst);
            if !sets.in_plus(t.0, t.1, t.2) || !sets.in_minus(minus.0, minus.1, minus.2) {
                return Err(unverified("K4"));
            }
            Ok(format!(
                "R+ holds {} while R- holds {}",
                triple(t),
                triple(minus)
            ))
        }
    }
}

/// The displacement that pushes Prover off `P_n`: one variable on an even
/// path, or one per colour class in a component on an odd path.
fn gamma_witness(inst: &Instance, n: usize) -> Option<String> {
    let gt = gamma_tables(inst, &full_delta_table(inst));
    let n = n as i64;
    if n % 2 == 0 {
        let v = (0..inst.len()).find(|&v| 2 * gt.gamma[v] >= n)?;
        return Some(format!(
            "gamma({}) = {}, and 2 * gamma must stay below {n}",
            inst.name(v),
            gt.gamma[v]
        ));
    }
    let far = |v: Var| 2 * gt.gamma_prime[v] >= n - 1;
    inst.component_vars().iter().find_map(|comp| {
        let pick = |c: Colour| {
            comp.iter()
                .copied()
                .find(|&v| far(v) && gt.colouring.colour(v) == c)
        };
        let (b, w) = (pick(Colour::Black)?, pick(Colour::White)?);
        Some(format!(
            "gamma'({}) = {} and gamma'({}) = {} reach {} on both colour classes",
            inst.name(b),
            gt.gamma_prime[b],
            inst.name(w),
            gt.gamma_prime[w],
            (n - 1) / 2
        ))
    })
}

fn describe_p100(inst: &Instance, o: P100Obstruction) -> String {
    let n = |v: Var| inst.name(v);
    match o {
        P100Obstruction::Chain { x1, x2, x3 } => {
            format!("∃≥2 chain {} - {} - {}", n(x1), n(x2), n(x3))
        }
        P100Obstruction::SharedNeighbour { x1, x2, x3 } => format!(
            "∃≥2 {} is adjacent to ∃≥2 {} and to {}",
            n(x3),
            n(x2),
            n(x1)
        ),
        P100Obstruction::Detour { x1, x2, x3, y } => format!(
            "∃≥2 atom {} - {} with ∃ {} joined to {} and {}",
            n(x2),
            n(x3),
            n(y),
            n(x1),
            n(x3)
        ),
        P100Obstruction::Bridge {
            x1,
            x2,
            x3,
            x4,
            y1,
            y2,
        } => format!(
            "∃≥2 atoms {} - {} and {} - {} bridged by ∃ atom {} - {}",
            n(x1),
            n(x2),
            n(x3),
            n(x4),
            n(y1),
            n(y2)
        ),
    }
}
