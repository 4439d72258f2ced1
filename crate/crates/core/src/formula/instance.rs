use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of a variable inside an [`Instance`]. The index order is the
/// quantifier order: variable `i` is quantified before variable `j` iff `i < j`.
pub type Var = usize;

/// A quantified variable `∃^{≥count} name`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub count: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, count: u32) -> Self {
        Variable {
            name: name.into(),
            count,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("atom endpoint {0} is not a declared variable")]
    UnknownVariable(Var),
    #[error("variable `{0}` has count 0; counts must be at least 1")]
    ZeroCount(String),
}

/// A conjunction of edge atoms under a prefix of counting quantifiers.
///
/// Atoms are stored as normalized pairs `(a, b)` with `a <= b`; `a == b` is
/// the loop atom `E(a, a)`. Repeated atoms collapse to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    vars: Vec<Variable>,
    atoms: BTreeSet<(Var, Var)>,
}

impl Instance {
    pub fn new(
        vars: Vec<Variable>,
        atoms: impl IntoIterator<Item = (Var, Var)>,
    ) -> Result<Self, InstanceError> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.name.as_str()) {
                return Err(InstanceError::DuplicateVariable(v.name.clone()));
            }
            if v.count == 0 {
                return Err(InstanceError::ZeroCount(v.name.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in atoms {
            for e in [a, b] {
                if e >= vars.len() {
                    return Err(InstanceError::UnknownVariable(e));
                }
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Instance { vars, atoms: set })
    }

    /// Builds an instance with variables named `v1, v2, ...`.
    ///
    /// Panics on out-of-range atoms or zero counts; meant for generated and
    /// hand-written fixtures.
    pub fn from_counts(counts: &[u32], atoms: &[(Var, Var)]) -> Self {
        let vars = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| Variable::new(format!("v{}", i + 1), c))
            .collect();
        Instance::new(vars, atoms.iter().copied()).expect("valid fixture")
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn count(&self, v: Var) -> u32 {
        self.vars[v].count
    }

    pub fn counts(&self) -> impl Iterator<Item = u32> + '_ {
        self.vars.iter().map(|v| v.count)
    }

    pub fn name(&self, v: Var) -> &str {
        &self.vars[v].name
    }

    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Normalized atoms `(a, b)` with `a <= b`, in lexicographic order.
    pub fn atoms(&self) -> impl Iterator<Item = (Var, Var)> + '_ {
        self.atoms.iter().copied()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn has_atom(&self, a: Var, b: Var) -> bool {
        self.atoms.contains(&(a.min(b), a.max(b)))
    }

    pub fn has_loop_atom(&self) -> bool {
        self.atoms.iter().any(|&(a, b)| a == b)
    }

    /// Neighbours of `v` in the instance graph, excluding `v` itself.
    pub fn neighbours(&self, v: Var) -> Vec<Var> {
        self.atoms
            .iter()
            .filter_map(|&(a, b)| {
                if a == v && b != v {
                    Some(b)
                } else if b == v && a != v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Adjacency lists for all variables (loops excluded).
    pub fn adjacency(&self) -> Vec<Vec<Var>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.atoms {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// True if every count lies in `allowed`.
    pub fn counts_within(&self, allowed: &[u32]) -> bool {
        self.vars.iter().all(|v| allowed.contains(&v.count))
    }

    /// Same variables and atoms with every count replaced by `f(var, count)`.
    pub fn map_counts(&self, mut f: impl FnMut(Var, u32) -> u32) -> Instance {
        let vars = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| Variable::new(v.name.clone(), f(i, v.count)))
            .collect();
        Instance::new(vars, self.atoms.iter().copied()).expect("counts stay positive")
    }

    /// The sub-instance induced by `keep` (in increasing order), preserving the
    /// relative quantifier order.
    pub fn induced(&self, keep: &[Var]) -> Instance {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in sorted.iter().enumerate() {
            pos[v] = i;
        }
        let vars = sorted.iter().map(|&v| self.vars[v].clone()).collect();
        let atoms = self
            .atoms
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]));
        Instance::new(vars, atoms).expect("induced sub-instance is valid")
    }

    /// Variable sets of the connected components, each sorted, ordered by
    /// their first variable.
    pub fn component_vars(&self) -> Vec<Vec<Var>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Connected components of the instance graph as standalone instances.
    pub fn components(&self) -> Vec<Instance> {
        self.component_vars()
            .iter()
            .map(|c| self.induced(c))
            .collect()
    }

    /// A proper black/white colouring, with the first variable of every
    /// component black; `None` if some component is not bipartite (a loop
    /// atom counts as an odd cycle).
    pub fn bipartition(&self) -> Option<Colouring> {
        if self.has_loop_atom() {
            return None;
        }
        let adj = self.adjacency();
        let mut colour: Vec<Option<Colour>> = vec![None; self.len()];
        for start in 0..self.len() {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(Colour::Black);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].expect("queued vertices are coloured");
                for &w in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(c.other());
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Colouring(colour.into_iter().map(Option::unwrap).collect()))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<u32> = self.counts().collect();
        let atoms: Vec<_> = self.atoms().collect();
        f.debug_struct("Instance")
            .field("counts", &counts)
            .field("atoms", &atoms)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Colour {
    Black,
    White,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Black => Colour::White,
            Colour::White => Colour::Black,
        }
    }
}

/// Proper two-colouring of an instance graph, indexed by variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring(Vec<Colour>);

impl Colouring {
    pub fn colour(&self, v: Var) -> Colour {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[Colour] {
        &self.0
    }

    /// Exchange black and white everywhere.
    pub fn swapped(&self) -> Colouring {
        Colouring(self.0.iter().map(|c| c.other()).collect())
    }
}
