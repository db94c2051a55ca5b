//! Coalition models: per-state effectivity tables, valuations, and the
//! validators for playability, regularity, coalition monotonicity, and
//! alpha-duality.
//!
//! Effectivity families are stored as antichains of minimal enforceable
//! sets. Membership means "some minimal set is contained in the query",
//! so families are upward closed by construction and outcome monotonicity
//! is structural. Explicit families arriving from a model file are
//! verified upward closed and compressed at load time.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sets::{AgentSet, StateSet, MAX_AGENTS, MAX_STATES};

/// Full-subset sweeps (N-maximality, alpha-duality) refuse models beyond
/// this many states.
pub const STATE_SWEEP_LIMIT: usize = 20;

/// An upward-closed family of outcome sets, represented by the antichain
/// of its minimal members.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EffFamily {
    minimal: Vec<StateSet>,
}

impl EffFamily {
    /// The family with no members at all (violates Safety; useful for
    /// validator tests and degenerate corners).
    pub fn empty() -> Self {
        EffFamily { minimal: Vec::new() }
    }

    /// Normalize a list of generating sets into a minimal antichain:
    /// supersets of other members are pruned, duplicates collapse, and the
    /// result is sorted by bit value.
    pub fn from_minimal(sets: impl IntoIterator<Item = StateSet>) -> Self {
        let mut sets: Vec<StateSet> = sets.into_iter().collect();
        sets.sort_by_key(|s| (s.len(), s.bits()));
        let mut minimal: Vec<StateSet> = Vec::new();
        for s in sets {
            if !minimal.iter().any(|m| m.is_subset_of(s)) {
                minimal.push(s);
            }
        }
        minimal.sort_by_key(|s| s.bits());
        EffFamily { minimal }
    }

    /// Validate that an explicitly listed family is upward closed within
    /// `0..2^num_states`, then compress it to its minimal antichain.
    pub fn from_explicit(family: &[StateSet], num_states: usize) -> Result<Self, (StateSet, StateSet)> {
        let full = StateSet::full(num_states);
        for &x in family {
            for u in 0..num_states {
                if !x.contains(u) {
                    let bigger = x.insert(u);
                    if bigger.is_subset_of(full) && !family.contains(&bigger) {
                        return Err((x, bigger));
                    }
                }
            }
        }
        Ok(EffFamily::from_minimal(family.iter().copied()))
    }

    /// Membership: `x` is in the upward closure iff some minimal set is a
    /// subset of `x`.
    pub fn contains(&self, x: StateSet) -> bool {
        self.minimal.iter().any(|m| m.is_subset_of(x))
    }

    /// The minimal antichain, sorted by bit value.
    pub fn minimal(&self) -> &[StateSet] {
        &self.minimal
    }

    /// True when the family has no members (not even the full state set).
    pub fn is_void(&self) -> bool {
        self.minimal.is_empty()
    }
}

/// A coalition model: `num_states` states, `num_agents` agents, a
/// valuation, and a total effectivity table over all states and all
/// `2^num_agents` coalitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionModel {
    num_states: usize,
    num_agents: usize,
    valuation: BTreeMap<String, StateSet>,
    /// Indexed by `state << num_agents | coalition bits`.
    effectivity: Vec<EffFamily>,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model must have at least one state")]
    NoStates,
    #[error("model must have at least one agent")]
    NoAgents,
    #[error("{got} states exceeds the supported maximum of {max}")]
    TooManyStates { got: usize, max: usize },
    #[error("{got} agents exceeds the supported maximum of {max}")]
    TooManyAgents { got: usize, max: usize },
    #[error("state index {state} out of range for {num_states} states")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("agent index {agent} out of range for {num_agents} agents")]
    AgentOutOfRange { agent: usize, num_agents: usize },
    #[error("effectivity is missing an entry for state {state}, coalition {coalition}")]
    MissingEffectivity { state: usize, coalition: AgentSet },
    #[error("duplicate effectivity entry for state {state}, coalition {coalition}")]
    DuplicateEffectivity { state: usize, coalition: AgentSet },
    #[error("effectivity entry for state {state}, coalition {coalition} must have exactly one of \"minimal\" or \"explicit\"")]
    AmbiguousFamily { state: usize, coalition: AgentSet },
    #[error("explicit family at state {state}, coalition {coalition} is not upward closed: contains {member} but not {missing}")]
    NotUpwardClosed {
        state: usize,
        coalition: AgentSet,
        member: StateSet,
        missing: StateSet,
    },
    #[error("state space too large for a full-subset sweep: {num_states} states (limit {limit})")]
    StateSpaceTooLarge { num_states: usize, limit: usize },
    #[error("invalid model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CoalitionModel {
    /// Build a model from a closure supplying the family for every
    /// (state, coalition) pair. Totality is guaranteed by construction.
    pub fn build(
        num_states: usize,
        num_agents: usize,
        valuation: BTreeMap<String, StateSet>,
        mut eff: impl FnMut(usize, AgentSet) -> EffFamily,
    ) -> Result<Self, ModelError> {
        Self::check_dims(num_states, num_agents)?;
        let full = StateSet::full(num_states);
        for (atom, set) in &valuation {
            if !set.is_subset_of(full) {
                let bad = set.iter().find(|&s| s >= num_states).unwrap();
                let _ = atom;
                return Err(ModelError::StateOutOfRange { state: bad, num_states });
            }
        }
        let coalitions = 1usize << num_agents;
        let mut table = Vec::with_capacity(num_states * coalitions);
        for w in 0..num_states {
            for bits in 0..coalitions {
                let c = AgentSet::from_bits(bits as u16);
                let fam = eff(w, c);
                for &m in fam.minimal() {
                    if !m.is_subset_of(full) {
                        let bad = m.iter().find(|&s| s >= num_states).unwrap();
                        return Err(ModelError::StateOutOfRange { state: bad, num_states });
                    }
                }
                table.push(fam);
            }
        }
        Ok(CoalitionModel {
            num_states,
            num_agents,
            valuation,
            effectivity: table,
        })
    }

    fn check_dims(num_states: usize, num_agents: usize) -> Result<(), ModelError> {
        if num_states == 0 {
            return Err(ModelError::NoStates);
        }
        if num_agents == 0 {
            return Err(ModelError::NoAgents);
        }
        if num_states > MAX_STATES {
            return Err(ModelError::TooManyStates { got: num_states, max: MAX_STATES });
        }
        if num_agents > MAX_AGENTS {
            return Err(ModelError::TooManyAgents { got: num_agents, max: MAX_AGENTS });
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    /// The grand coalition `N`.
    pub fn grand_coalition(&self) -> AgentSet {
        AgentSet::full(self.num_agents)
    }

    /// The full state set `W`.
    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.num_states)
    }

    /// The effectivity family `E_w(C)`.
    pub fn eff(&self, state: usize, coalition: AgentSet) -> &EffFamily {
        debug_assert!(state < self.num_states);
        debug_assert!(coalition.is_subset_of(self.grand_coalition()));
        &self.effectivity[(state << self.num_agents) | coalition.bits() as usize]
    }

    /// Truth set of an atom; atoms absent from the valuation denote the
    /// empty set.
    pub fn valuation(&self, atom: &str) -> StateSet {
        self.valuation.get(atom).copied().unwrap_or(StateSet::EMPTY)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    /// All coalitions of this model, ascending by bit value.
    pub fn coalitions(&self) -> impl Iterator<Item = AgentSet> {
        AgentSet::all_subsets(self.num_agents)
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModelFile {
    states: usize,
    agents: usize,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<usize>>,
    effectivity: Vec<EffEntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EffEntryFile {
    state: usize,
    coalition: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    minimal: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    explicit: Option<Vec<Vec<usize>>>,
}

fn indices_to_state_set(indices: &[usize], num_states: usize) -> Result<StateSet, ModelError> {
    let mut s = StateSet::EMPTY;
    for &i in indices {
        if i >= num_states {
            return Err(ModelError::StateOutOfRange { state: i, num_states });
        }
        s = s.insert(i);
    }
    Ok(s)
}

impl CoalitionModel {
    /// Parse the JSON model format. Every (state, coalition) pair must be
    /// present exactly once; `"explicit"` families are verified upward
    /// closed and compressed to antichains.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile = serde_json::from_str(text)?;
        Self::check_dims(file.states, file.agents)?;
        let num_states = file.states;
        let num_agents = file.agents;

        let mut valuation = BTreeMap::new();
        for (atom, indices) in &file.valuation {
            valuation.insert(atom.clone(), indices_to_state_set(indices, num_states)?);
        }

        let coalitions = 1usize << num_agents;
        let mut table: Vec<Option<EffFamily>> = vec![None; num_states * coalitions];
        for entry in &file.effectivity {
            if entry.state >= num_states {
                return Err(ModelError::StateOutOfRange { state: entry.state, num_states });
            }
            let mut coalition = AgentSet::EMPTY;
            for &a in &entry.coalition {
                if a >= num_agents {
                    return Err(ModelError::AgentOutOfRange { agent: a, num_agents });
                }
                coalition = coalition.insert(a);
            }
            let slot = (entry.state << num_agents) | coalition.bits() as usize;
            if table[slot].is_some() {
                return Err(ModelError::DuplicateEffectivity { state: entry.state, coalition });
            }
            let fam = match (&entry.minimal, &entry.explicit) {
                (Some(min), None) => {
                    let sets = min
                        .iter()
                        .map(|ind| indices_to_state_set(ind, num_states))
                        .collect::<Result<Vec<_>, _>>()?;
                    EffFamily::from_minimal(sets)
                }
                (None, Some(expl)) => {
                    let sets = expl
                        .iter()
                        .map(|ind| indices_to_state_set(ind, num_states))
                        .collect::<Result<Vec<_>, _>>()?;
                    EffFamily::from_explicit(&sets, num_states).map_err(|(member, missing)| {
                        ModelError::NotUpwardClosed {
                            state: entry.state,
                            coalition,
                            member,
                            missing,
                        }
                    })?
                }
                _ => return Err(ModelError::AmbiguousFamily { state: entry.state, coalition }),
            };
            table[slot] = Some(fam);
        }

        let mut effectivity = Vec::with_capacity(table.len());
        for (slot, fam) in table.into_iter().enumerate() {
            match fam {
                Some(f) => effectivity.push(f),
                None => {
                    return Err(ModelError::MissingEffectivity {
                        state: slot >> num_agents,
                        coalition: AgentSet::from_bits((slot & (coalitions - 1)) as u16),
                    })
                }
            }
        }

        Ok(CoalitionModel {
            num_states,
            num_agents,
            valuation,
            effectivity,
        })
    }

    /// Serialize to the JSON model format, always emitting minimal
    /// antichains. Output is deterministic: entries ordered by state then
    /// coalition bit value.
    pub fn to_json(&self) -> String {
        let valuation = self
            .valuation
            .iter()
            .map(|(k, v)| (k.clone(), v.to_indices()))
            .collect();
        let mut effectivity = Vec::new();
        for w in 0..self.num_states {
            for c in self.coalitions() {
                effectivity.push(EffEntryFile {
                    state: w,
                    coalition: c.to_indices(),
                    minimal: Some(self.eff(w, c).minimal().iter().map(|s| s.to_indices()).collect()),
                    explicit: None,
                });
            }
        }
        let file = ModelFile {
            states: self.num_states,
            agents: self.num_agents,
            valuation,
            effectivity,
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }
}

// ---------------------------------------------------------------------------
// Validators
// ---------------------------------------------------------------------------

/// One playability axiom violation at a particular state, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlayabilityViolation {
    /// The empty set is enforceable.
    Liveness { coalition: AgentSet },
    /// The family has no members at all (the full set is not enforceable).
    Safety { coalition: AgentSet },
    /// An explicit family contained `member` but not the superset
    /// `missing`. Antichain-backed models cannot produce this; it is
    /// reported when explicit input fails validation.
    OutcomeMonotonicity {
        coalition: AgentSet,
        member: StateSet,
        missing: StateSet,
    },
    /// `x` in `E(c)` and `y` in `E(d)` with `c`, `d` disjoint, but the
    /// intersection is not in `E(c | d)`.
    Superadditivity {
        c: AgentSet,
        d: AgentSet,
        x: StateSet,
        y: StateSet,
    },
    /// The biconditional `x not in E(empty) <=> complement(x) in E(N)`
    /// fails for this `x`.
    NMaximality { x: StateSet },
}

impl fmt::Display for PlayabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlayabilityViolation::Liveness { coalition } => {
                write!(f, "liveness: empty set enforceable by {}", coalition)
            }
            PlayabilityViolation::Safety { coalition } => {
                write!(f, "safety: full state set not enforceable by {}", coalition)
            }
            PlayabilityViolation::OutcomeMonotonicity { coalition, member, missing } => write!(
                f,
                "outcome monotonicity: {} enforces {} but not its superset {}",
                coalition, member, missing
            ),
            PlayabilityViolation::Superadditivity { c, d, x, y } => write!(
                f,
                "superadditivity: {} enforces {} and {} enforces {}, but their union cannot enforce the intersection",
                c, x, d, y
            ),
            PlayabilityViolation::NMaximality { x } => {
                write!(f, "N-maximality fails at set {}", x)
            }
        }
    }
}

/// Per-state playability violations; the state's effectivity function is
/// playable exactly when its list is empty.
#[derive(Clone, Debug, Default)]
pub struct PlayabilityReport {
    per_state: Vec<Vec<PlayabilityViolation>>,
}

impl PlayabilityReport {
    pub fn is_playable(&self) -> bool {
        self.per_state.iter().all(|v| v.is_empty())
    }

    pub fn state(&self, w: usize) -> &[PlayabilityViolation] {
        &self.per_state[w]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &PlayabilityViolation)> {
        self.per_state
            .iter()
            .enumerate()
            .flat_map(|(w, vs)| vs.iter().map(move |v| (w, v)))
    }

    pub fn total_violations(&self) -> usize {
        self.per_state.iter().map(Vec::len).sum()
    }
}

/// Check the playability axioms at every state. Outcome monotonicity is
/// structural for antichain-backed families and is not re-checked here.
/// Witnesses are enumerated in lexicographic order: coalitions by bit
/// value, then sets by bit value.
pub fn check_playability(m: &CoalitionModel) -> Result<PlayabilityReport, ModelError> {
    if m.num_states() > STATE_SWEEP_LIMIT {
        return Err(ModelError::StateSpaceTooLarge {
            num_states: m.num_states(),
            limit: STATE_SWEEP_LIMIT,
        });
    }
    let n = m.num_agents();
    let full = m.all_states();
    let grand = m.grand_coalition();
    let mut per_state = Vec::with_capacity(m.num_states());
    for w in 0..m.num_states() {
        let mut violations = Vec::new();
        for c in m.coalitions() {
            if m.eff(w, c).contains(StateSet::EMPTY) {
                violations.push(PlayabilityViolation::Liveness { coalition: c });
            }
        }
        for c in m.coalitions() {
            if !m.eff(w, c).contains(full) {
                violations.push(PlayabilityViolation::Safety { coalition: c });
            }
        }
        // Antichain products suffice: upward closure lifts the minimal
        // witnesses to every member of the two families.
        for c in m.coalitions() {
            for d in m.coalitions() {
                if !c.is_disjoint(d) {
                    continue;
                }
                let union = c.union(d);
                for &x in m.eff(w, c).minimal() {
                    for &y in m.eff(w, d).minimal() {
                        if !m.eff(w, union).contains(x.intersection(y)) {
                            violations.push(PlayabilityViolation::Superadditivity { c, d, x, y });
                        }
                    }
                }
            }
        }
        let empty_c = AgentSet::EMPTY;
        for x in StateSet::all_subsets(m.num_states()) {
            let lhs = !m.eff(w, empty_c).contains(x);
            let rhs = m.eff(w, grand).contains(x.complement(m.num_states()));
            if lhs != rhs {
                violations.push(PlayabilityViolation::NMaximality { x });
            }
        }
        let _ = n;
        per_state.push(violations);
    }
    Ok(PlayabilityReport { per_state })
}

/// Witness of a regularity failure: both `set` and its complement are
/// enforceable, by `coalition` and its complement respectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityViolation {
    pub state: usize,
    pub coalition: AgentSet,
    pub set: StateSet,
}

impl fmt::Display for RegularityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "state {}: {} enforces {} while its complement coalition enforces the complement set",
            self.state, self.coalition, self.set
        )
    }
}

/// Scan for regularity failures. It suffices to scan the minimal members
/// of each family: any violating set contains a violating minimal one.
pub fn check_regularity(m: &CoalitionModel) -> Vec<RegularityViolation> {
    let mut out = Vec::new();
    for w in 0..m.num_states() {
        for c in m.coalitions() {
            let cbar = c.complement(m.num_agents());
            for &x in m.eff(w, c).minimal() {
                if m.eff(w, cbar).contains(x.complement(m.num_states())) {
                    out.push(RegularityViolation { state: w, coalition: c, set: x });
                }
            }
        }
    }
    out
}

/// Witness of a coalition monotonicity failure: `small` is a subset of
/// `large`, yet `small` enforces `set` and `large` does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionMonotonicityViolation {
    pub state: usize,
    pub small: AgentSet,
    pub large: AgentSet,
    pub set: StateSet,
}

impl fmt::Display for CoalitionMonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "state {}: {} enforces {} but the superset coalition {} does not",
            self.state, self.small, self.set, self.large
        )
    }
}

/// Scan all nested coalition pairs for monotonicity failures.
pub fn check_coalition_monotonicity(m: &CoalitionModel) -> Vec<CoalitionMonotonicityViolation> {
    let mut out = Vec::new();
    for w in 0..m.num_states() {
        for large in m.coalitions() {
            for small in large.subsets() {
                if small == large {
                    continue;
                }
                for &x in m.eff(w, small).minimal() {
                    if !m.eff(w, large).contains(x) {
                        out.push(CoalitionMonotonicityViolation { state: w, small, large, set: x });
                    }
                }
            }
        }
    }
    // Deterministic order: state, then small coalition bits, then large.
    out.sort_by_key(|v| (v.state, v.small.bits(), v.large.bits(), v.set.bits()));
    out
}

/// Result of the alpha-duality sweep at one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaDualityCheck {
    pub holds: bool,
    /// First `(coalition, set)` where the biconditional fails, in
    /// lexicographic order.
    pub witness: Option<(AgentSet, StateSet)>,
}

/// Check `X in E_w(C) <=> complement(X) not in E_w(complement(C))` for all
/// coalitions and all subsets at state `w`.
pub fn check_alpha_duality(m: &CoalitionModel, w: usize) -> Result<AlphaDualityCheck, ModelError> {
    if m.num_states() > STATE_SWEEP_LIMIT {
        return Err(ModelError::StateSpaceTooLarge {
            num_states: m.num_states(),
            limit: STATE_SWEEP_LIMIT,
        });
    }
    for c in m.coalitions() {
        let cbar = c.complement(m.num_agents());
        for x in StateSet::all_subsets(m.num_states()) {
            let lhs = m.eff(w, c).contains(x);
            let rhs = !m.eff(w, cbar).contains(x.complement(m.num_states()));
            if lhs != rhs {
                return Ok(AlphaDualityCheck { holds: false, witness: Some((c, x)) });
            }
        }
    }
    Ok(AlphaDualityCheck { holds: true, witness: None })
}

/// True when alpha-duality holds at every state.
pub fn is_alpha_dual(m: &CoalitionModel) -> Result<bool, ModelError> {
    for w in 0..m.num_states() {
        if !check_alpha_duality(m, w)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}
