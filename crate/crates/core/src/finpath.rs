//! Counting quantifiers `∃` and `∃≥2` on finite paths and forests.
//!
//! Paths are taken with vertices `1..=n`. For `n ≥ 4` the decision reduces to
//! how far Adversary can push a value from the centre `(n + 1) / 2`, which is
//! measured by two recursions over `δ` (see [`GammaTable`]).

use thiserror::Error;

use crate::formula::{Colour, Colouring, Graph, Instance, Var};
use crate::infpath::{decide_infinite_path, full_delta_table, offer_window, DeltaTable};
use crate::oracle::{Adversary, Prover};

/// Displacement bounds per variable.
///
/// `gamma(v) = 0` and `gamma_prime(v) = count(v) - 1` for the first variable
/// of a component; otherwise both follow
///
/// ```text
/// g(v) = count(v) - 1 + max(0, max over u ≺ v with δ(u, v) finite of g(u) - δ(u, v) + count(v) - 1)
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    pub gamma: Vec<i64>,
    pub gamma_prime: Vec<i64>,
    pub colouring: Colouring,
    /// Whether each variable is the first of its component.
    pub first: Vec<bool>,
}

/// First variable of each variable's component.
pub fn component_heads(inst: &Instance) -> Vec<Var> {
    let mut head = vec![0; inst.len()];
    for comp in inst.component_vars() {
        for &v in &comp {
            head[v] = comp[0];
        }
    }
    head
}

/// Computes both recursions. The instance must be bipartite.
pub fn gamma_tables(inst: &Instance, table: &DeltaTable) -> GammaTable {
    let colouring = inst
        .bipartition()
        .expect("gamma tables need a bipartite instance");
    let head = component_heads(inst);
    let n = inst.len();
    let mut gamma = vec![0i64; n];
    let mut gamma_prime = vec![0i64; n];
    let first: Vec<bool> = (0..n).map(|v| head[v] == v).collect();
    for v in 0..n {
        let b = inst.count(v) as i64 - 1;
        if first[v] {
            gamma[v] = 0;
            gamma_prime[v] = b;
            continue;
        }
        let (mut g, mut gp) = (0i64, 0i64);
        for u in 0..v {
            if let Some(d) = table.get(u, v) {
                g = g.max(gamma[u] - d + b);
                gp = gp.max(gamma_prime[u] - d + b);
            }
        }
        gamma[v] = b + g;
        gamma_prime[v] = b + gp;
    }
    GammaTable {
        gamma,
        gamma_prime,
        colouring,
        first,
    }
}

/// Decides the instance on `P_n`, `n ≥ 1`. Counts must be 1 or 2.
pub fn decide_path(inst: &Instance, n: usize) -> bool {
    assert!(n >= 1, "paths have at least one vertex");
    if inst.has_loop_atom() || !decide_infinite_path(inst) {
        return false;
    }
    match n {
        1..=3 => small_path(inst, n),
        _ => gamma_path(inst, n),
    }
}

/// The displacement test for `P_n`, `n ≥ 4`. The instance must already be
/// true on the infinite path.
pub fn gamma_path(inst: &Instance, n: usize) -> bool {
    assert!(n >= 4, "the displacement test needs at least four vertices");
    let table = full_delta_table(inst);
    let gt = gamma_tables(inst, &table);
    if n.is_multiple_of(2) {
        even_path(&gt, n)
    } else {
        odd_path(inst, &gt, n)
    }
}

/// Direct characterizations for `n ≤ 5`, per component; the instance must
/// already be true on the infinite path.
pub fn small_path(inst: &Instance, n: usize) -> bool {
    let colouring = inst.bipartition().expect("checked bipartite");
    let two = |v: Var| inst.count(v) == 2;
    inst.component_vars().iter().all(|comp| {
        let f = comp[0];
        match n {
            1 => comp.len() == 1 && !two(f),
            2 => comp[1..].iter().all(|&v| !two(v)),
            3 => {
                let mut colours = comp
                    .iter()
                    .filter(|&&v| two(v))
                    .map(|&v| colouring.colour(v));
                match colours.next() {
                    None => true,
                    Some(c) => colours.all(|d| d == c),
                }
            }
            4 => inst
                .atoms()
                .all(|(a, b)| !(comp.contains(&a) && a != f && b != f && two(a) && two(b))),
            5 => [Colour::Black, Colour::White].iter().any(|&c| {
                inst.atoms()
                    .filter(|&(a, b)| comp.contains(&a) && two(a) && two(b))
                    .all(|(a, _)| colouring.colour(a) == c)
            }),
            _ => panic!("no direct characterization for P_{n}"),
        }
    })
}

fn even_path(gt: &GammaTable, n: usize) -> bool {
    gt.gamma.iter().all(|&g| 2 * g < n as i64)
}

fn odd_path(inst: &Instance, gt: &GammaTable, n: usize) -> bool {
    let far = |v: Var| 2 * gt.gamma_prime[v] >= n as i64 - 1;
    inst.component_vars().iter().all(|comp| {
        let black = comp
            .iter()
            .any(|&v| far(v) && gt.colouring.colour(v) == Colour::Black);
        let white = comp
            .iter()
            .any(|&v| far(v) && gt.colouring.colour(v) == Colour::White);
        !(black && white)
    })
}

/// For each component (indexed by its first variable), the parity Prover
/// should give that first variable when steering towards the centre of
/// `P_n`; `None` where either parity works.
pub fn centre_parities(inst: &Instance, n: usize) -> Vec<Option<i64>> {
    let colouring = match inst.bipartition() {
        Some(c) => c,
        None => return vec![None; inst.len()],
    };
    let mut out = vec![None; inst.len()];
    if n.is_multiple_of(2) {
        return out;
    }
    let table = full_delta_table(inst);
    let gt = gamma_tables(inst, &table);
    for comp in inst.component_vars() {
        let head = comp[0];
        // Colour class whose values must stay odd; the head is black.
        let odd_class = if n <= 3 {
            comp.iter()
                .find(|&&v| inst.count(v) == 2)
                .map_or(Colour::Black, |&v| colouring.colour(v))
        } else {
            // Values of the "near" class stay within the centre; the other
            // class is kept odd so it cannot reach an even endpoint.
            let black_near = comp.iter().all(|&v| {
                colouring.colour(v) != Colour::Black || 2 * gt.gamma_prime[v] <= n as i64 - 3
            });
            if black_near {
                Colour::White
            } else {
                Colour::Black
            }
        };
        out[head] = Some(if odd_class == Colour::Black { 1 } else { 0 });
    }
    out
}

/// Adversary that picks the offered value farthest from `M` (ties: larger).
/// `M` is given doubled so that half-integers are exact.
#[derive(Clone, Copy, Debug)]
pub struct AwayAdversary {
    pub m2: i64,
}

pub fn adversary_away(offered: &[i64], m2: i64) -> i64 {
    *offered
        .iter()
        .max_by_key(|&&c| ((2 * c - m2).abs(), c))
        .expect("offers are non-empty")
}

impl Adversary<i64> for AwayAdversary {
    fn pick(&mut self, _prefix: &[i64], offered: &[i64]) -> i64 {
        adversary_away(offered, self.m2)
    }
}

/// Prover that offers values as close to `M` as the `δ` window and parity
/// allow. `M` is given doubled.
pub struct TowardProver<'a> {
    inst: &'a Instance,
    table: DeltaTable,
    m2: i64,
    parities: Vec<Option<i64>>,
}

impl<'a> TowardProver<'a> {
    /// Steers towards `M = m2 / 2`, with optional parities for the first
    /// variable of each component (indexed by that variable).
    pub fn new(inst: &'a Instance, m2: i64, parities: Vec<Option<i64>>) -> Self {
        TowardProver {
            inst,
            table: full_delta_table(inst),
            m2,
            parities,
        }
    }

    /// The strategy for `P_n`: centre `(n + 1) / 2`, parities from
    /// [`centre_parities`].
    pub fn for_path(inst: &'a Instance, n: usize) -> Self {
        TowardProver::new(inst, n as i64 + 1, centre_parities(inst, n))
    }
}

/// The offer of [`TowardProver`] for the next variable.
pub fn prover_toward(
    inst: &Instance,
    table: &DeltaTable,
    prefix: &[i64],
    m2: i64,
    parity: Option<i64>,
) -> Vec<i64> {
    let v = prefix.len();
    let beta = inst.count(v) as usize;
    let floor = m2.div_euclid(2);
    let Some((lo, hi)) = offer_window(table, prefix) else {
        return match (parity, beta) {
            (None, 1) => vec![floor],
            (None, _) => vec![floor, floor + 1],
            (Some(t), 1) => {
                if floor.rem_euclid(2) == t {
                    vec![floor]
                } else {
                    vec![floor + 1]
                }
            }
            (Some(t), _) => {
                if floor.rem_euclid(2) == t {
                    vec![floor, floor + 2]
                } else {
                    vec![floor - 1, floor + 1]
                }
            }
        };
    };
    // Values of the parity of the window top, nearest to M; ties go to the
    // smaller value. Outside the window only when it is too narrow.
    let p = hi.rem_euclid(2);
    let anchor = if lo <= hi { floor.clamp(lo, hi) } else { floor };
    let mut centre = anchor - 1;
    while centre.rem_euclid(2) != p {
        centre += 1;
    }
    let mut candidates: Vec<i64> = (-(beta as i64) - 2..=beta as i64 + 2)
        .map(|k| centre + 2 * k)
        .collect();
    candidates.sort_by_key(|&c| (!(lo <= c && c <= hi), (2 * c - m2).abs(), c));
    let mut offer: Vec<i64> = candidates.into_iter().take(beta).collect();
    offer.sort_unstable();
    offer
}

impl Prover<i64> for TowardProver<'_> {
    fn offer(&mut self, prefix: &[i64]) -> Vec<i64> {
        let parity = self.parities.get(prefix.len()).copied().flatten();
        prover_toward(self.inst, &self.table, prefix, self.m2, parity)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("template is not a forest")]
pub struct NotAForest;

/// Decides the instance on a forest template by reduction to its longest
/// path. When two or more trees share the longest path length, the first
/// variable of every instance component is treated as `∃`.
pub fn decide_forest(inst: &Instance, forest: &Graph) -> Result<bool, NotAForest> {
    if !forest.is_forest() {
        return Err(NotAForest);
    }
    if forest.is_empty() {
        return Ok(inst.is_empty());
    }
    let lengths = forest.longest_paths();
    let p = *lengths.iter().max().expect("non-empty forest");
    let tie = lengths.iter().filter(|&&l| l == p).count() >= 2;
    let inst = if tie {
        let head = component_heads(inst);
        inst.map_counts(|v, c| if head[v] == v { 1 } else { c })
    } else {
        inst.clone()
    };
    Ok(decide_path(&inst, p))
}
