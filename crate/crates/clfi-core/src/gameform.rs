//! Strategic game forms and the effectivity they induce.
//!
//! A game form assigns each state a one-shot interaction: an action count
//! per agent and an outcome table over joint action profiles. Profiles are
//! indexed in mixed-radix order with agent 0 as the fastest digit, so the
//! outcome table layout is unambiguous: profile `(a_0, .., a_{n-1})` sits
//! at `a_0 + a_1*|Act_0| + a_2*|Act_0||Act_1| + ..`.
//!
//! A coalition enforces an outcome set when some joint strategy of its
//! members pins every resulting outcome inside the set regardless of how
//! the opponents act. Equivalently, the coalition's effectivity is the
//! upward closure of its outcome cells.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mcheck::PowerCategory;
use crate::model::{CoalitionModel, EffFamily, ModelError};
use crate::sets::{AgentSet, StateSet, MAX_AGENTS, MAX_STATES};

/// Refuse to sweep joint-action spaces larger than this.
pub const PROFILE_SPACE_LIMIT: usize = 1_000_000;

/// The one-shot game at a single state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateForm {
    /// Number of actions per agent; every entry is at least 1.
    pub actions: Vec<usize>,
    /// Outcome state per joint profile, mixed-radix indexed.
    pub outcomes: Vec<usize>,
}

impl StateForm {
    pub fn profile_count(&self) -> usize {
        self.actions.iter().product()
    }
}

/// Per-state strategic game forms over a common state and agent universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameForm {
    num_states: usize,
    num_agents: usize,
    forms: Vec<StateForm>,
}

#[derive(Debug, Error)]
pub enum GameFormError {
    #[error("game form must have at least one state")]
    NoStates,
    #[error("game form must have at least one agent")]
    NoAgents,
    #[error("{got} states exceeds the supported maximum of {max}")]
    TooManyStates { got: usize, max: usize },
    #[error("{got} agents exceeds the supported maximum of {max}")]
    TooManyAgents { got: usize, max: usize },
    #[error("state {state}: expected {expected} action counts, got {got}")]
    WrongAgentCount { state: usize, expected: usize, got: usize },
    #[error("state {state}: agent {agent} has zero actions")]
    NoActions { state: usize, agent: usize },
    #[error("state {state}: outcome table has {got} entries, expected {expected}")]
    WrongOutcomeCount { state: usize, expected: usize, got: usize },
    #[error("state {state}: outcome index {outcome} out of range for {num_states} states")]
    OutcomeOutOfRange { state: usize, outcome: usize, num_states: usize },
    #[error("state {state} missing from the forms list")]
    MissingForm { state: usize },
    #[error("state {state} appears more than once in the forms list")]
    DuplicateForm { state: usize },
    #[error("joint action space at state {state} has {profiles} profiles (limit {limit})")]
    ProfileSpaceTooLarge { state: usize, profiles: usize, limit: usize },
    #[error("cell set is empty: malformed game form")]
    EmptyCellSet,
    #[error("invalid game form JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl GameForm {
    pub fn new(
        num_states: usize,
        num_agents: usize,
        forms: Vec<StateForm>,
    ) -> Result<Self, GameFormError> {
        if num_states == 0 {
            return Err(GameFormError::NoStates);
        }
        if num_agents == 0 {
            return Err(GameFormError::NoAgents);
        }
        if num_states > MAX_STATES {
            return Err(GameFormError::TooManyStates { got: num_states, max: MAX_STATES });
        }
        if num_agents > MAX_AGENTS {
            return Err(GameFormError::TooManyAgents { got: num_agents, max: MAX_AGENTS });
        }
        if forms.len() != num_states {
            return Err(GameFormError::MissingForm { state: forms.len().min(num_states) });
        }
        for (w, form) in forms.iter().enumerate() {
            if form.actions.len() != num_agents {
                return Err(GameFormError::WrongAgentCount {
                    state: w,
                    expected: num_agents,
                    got: form.actions.len(),
                });
            }
            if let Some(agent) = form.actions.iter().position(|&a| a == 0) {
                return Err(GameFormError::NoActions { state: w, agent });
            }
            let expected = form.profile_count();
            if form.outcomes.len() != expected {
                return Err(GameFormError::WrongOutcomeCount {
                    state: w,
                    expected,
                    got: form.outcomes.len(),
                });
            }
            if let Some(&outcome) = form.outcomes.iter().find(|&&o| o >= num_states) {
                return Err(GameFormError::OutcomeOutOfRange { state: w, outcome, num_states });
            }
        }
        Ok(GameForm { num_states, num_agents, forms })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn form(&self, state: usize) -> &StateForm {
        &self.forms[state]
    }

    fn check_profile_space(&self, state: usize) -> Result<(), GameFormError> {
        let profiles = self.forms[state].profile_count();
        if profiles > PROFILE_SPACE_LIMIT {
            return Err(GameFormError::ProfileSpaceTooLarge {
                state,
                profiles,
                limit: PROFILE_SPACE_LIMIT,
            });
        }
        Ok(())
    }

    /// Decode the mixed-radix profile index into per-agent actions.
    fn profile(&self, state: usize, mut index: usize) -> Vec<usize> {
        self.forms[state]
            .actions
            .iter()
            .map(|&n| {
                let a = index % n;
                index /= n;
                a
            })
            .collect()
    }
}

/// The outcome cells of coalition `c` at `state`: for each joint strategy
/// of `c`, the set of outcomes reachable as the opponents vary. Duplicate
/// strategies yielding the same cell collapse; cells are never empty.
pub fn outcome_cells(
    g: &GameForm,
    state: usize,
    c: AgentSet,
) -> Result<BTreeSet<StateSet>, GameFormError> {
    g.check_profile_space(state)?;
    let form = g.form(state);
    let mut by_strategy: BTreeMap<Vec<usize>, StateSet> = BTreeMap::new();
    for (index, &outcome) in form.outcomes.iter().enumerate() {
        let profile = g.profile(state, index);
        let key: Vec<usize> = c.iter().map(|i| profile[i]).collect();
        let cell = by_strategy.entry(key).or_insert(StateSet::EMPTY);
        *cell = cell.insert(outcome);
    }
    Ok(by_strategy.into_values().collect())
}

/// Effectivity of every coalition at `state`, as minimal antichains of the
/// outcome cells. Indexed by coalition bit value.
pub fn induce_effectivity(g: &GameForm, state: usize) -> Result<Vec<EffFamily>, GameFormError> {
    let mut out = Vec::with_capacity(1 << g.num_agents());
    for c in AgentSet::all_subsets(g.num_agents()) {
        let cells = outcome_cells(g, state, c)?;
        out.push(EffFamily::from_minimal(cells));
    }
    Ok(out)
}

/// Build the coalition model induced by a game form, attaching a valuation.
pub fn induce_model(
    g: &GameForm,
    valuation: BTreeMap<String, StateSet>,
) -> Result<CoalitionModel, GameFormError> {
    let mut tables = Vec::with_capacity(g.num_states());
    for w in 0..g.num_states() {
        tables.push(induce_effectivity(g, w)?);
    }
    let model = CoalitionModel::build(g.num_states(), g.num_agents(), valuation, |w, c| {
        tables[w][c.bits() as usize].clone()
    })?;
    Ok(model)
}

/// Classify an outcome set against a coalition's cells: enforceability of
/// `x` means some cell fits inside `x`, and "every cell meets `x`" is the
/// same as no cell fitting inside the complement.
pub fn classify_by_cells(
    cells: &BTreeSet<StateSet>,
    x: StateSet,
    num_states: usize,
) -> Result<PowerCategory, GameFormError> {
    if cells.is_empty() {
        return Err(GameFormError::EmptyCellSet);
    }
    debug_assert!(cells.iter().all(|cell| !cell.is_empty()));
    let xbar = x.complement(num_states);
    let a = cells.iter().any(|cell| cell.is_subset_of(x));
    let b = cells.iter().any(|cell| cell.is_subset_of(xbar));
    Ok(PowerCategory::from_bits(a, b))
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GameFormFile {
    states: usize,
    agents: usize,
    forms: Vec<StateFormFile>,
}

#[derive(Serialize, Deserialize)]
struct StateFormFile {
    state: usize,
    actions: Vec<usize>,
    outcomes: Vec<usize>,
}

impl GameForm {
    pub fn from_json(text: &str) -> Result<Self, GameFormError> {
        let file: GameFormFile = serde_json::from_str(text)?;
        let mut forms: Vec<Option<StateForm>> = vec![None; file.states];
        for f in file.forms {
            if f.state >= file.states {
                return Err(GameFormError::MissingForm { state: f.state });
            }
            if forms[f.state].is_some() {
                return Err(GameFormError::DuplicateForm { state: f.state });
            }
            forms[f.state] = Some(StateForm { actions: f.actions, outcomes: f.outcomes });
        }
        let forms = forms
            .into_iter()
            .enumerate()
            .map(|(w, f)| f.ok_or(GameFormError::MissingForm { state: w }))
            .collect::<Result<Vec<_>, _>>()?;
        GameForm::new(file.states, file.agents, forms)
    }

    pub fn to_json(&self) -> String {
        let file = GameFormFile {
            states: self.num_states,
            agents: self.num_agents,
            forms: self
                .forms
                .iter()
                .enumerate()
                .map(|(w, f)| StateFormFile {
                    state: w,
                    actions: f.actions.clone(),
                    outcomes: f.outcomes.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("game form serialization cannot fail")
    }
}
