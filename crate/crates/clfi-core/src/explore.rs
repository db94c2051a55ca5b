//! Fixtures, seeded random generators, and bounded satisfiability search.
//!
//! Random playable models come exclusively from game forms: the induced
//! effectivity is playable by the representation argument, so no rejection
//! sampling is needed. The alpha-dual generator instead samples one family
//! per complementary coalition pair, derives the partner through the
//! duality biconditional, and rejects candidates that fail playability.
//!
//! `bounded_sat` is a sound but incomplete substitute for a full decision
//! procedure: any witness it returns is re-verified against the
//! semantics, and `Unknown` never claims unsatisfiability.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::Formula;
use crate::gameform::{induce_model, GameForm, GameFormError, StateForm};
use crate::mcheck::{satisfies, EvalError};
use crate::model::{check_playability, is_alpha_dual, CoalitionModel, EffFamily, ModelError};
use crate::sets::{AgentSet, StateSet};

/// Upper bounds for the rejection-sampling alpha-dual generator.
pub const ALPHA_DUAL_MAX_STATES: usize = 4;
pub const ALPHA_DUAL_MAX_AGENTS: usize = 3;

/// Formulas handed to `bounded_sat` may mention at most this many agents;
/// the searched universe may add one more on top of that.
pub const SAT_MAX_FORMULA_AGENTS: usize = 4;
pub const SAT_MAX_UNIVERSE_AGENTS: usize = 5;

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("unknown fixture name: {0} (expected matching-pennies, dictator, veto, or shutdown)")]
    UnknownFixture(String),
    #[error("alpha-dual sampling supports at most {max_states} states and {max_agents} agents")]
    AlphaDualTooLarge { max_states: usize, max_agents: usize },
    #[error("bounded search supports formulas over at most {max} agents, got {got}")]
    SatFormulaTooWide { got: usize, max: usize },
    #[error("bounded search universe must cover the formula's {needed} agents and stay within {max}")]
    SatBadUniverse { needed: usize, max: usize },
    #[error(transparent)]
    GameForm(#[from] GameFormError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// The four canonical two-state fixtures. Every state reuses the same
/// one-shot game, so single-step semantics stay faithful at either state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    /// Two players pick a coin side; state 0 means the coins match.
    /// Valuation: `p = {0}`. Each singleton is fully unable on `p`,
    /// the pair has full control.
    MatchingPennies,
    /// Agent 0 picks the next state outright; agent 1's action is
    /// irrelevant. States 0 and 1; valuation `p = {0}`.
    Dictator,
    /// Three agents vote; state 0 (`pass`) requires unanimous consent,
    /// anything else yields state 1 (`fail`). Valuation: `pass = {0}`.
    Veto,
    /// Two monitors; state 0 (`shutdown`) occurs when either triggers,
    /// state 1 otherwise. Valuation: `p = {0}`. Each monitor positively
    /// determines `p`.
    Shutdown,
}

impl FixtureKind {
    pub const ALL: [FixtureKind; 4] = [
        FixtureKind::MatchingPennies,
        FixtureKind::Dictator,
        FixtureKind::Veto,
        FixtureKind::Shutdown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureKind::MatchingPennies => "matching-pennies",
            FixtureKind::Dictator => "dictator",
            FixtureKind::Veto => "veto",
            FixtureKind::Shutdown => "shutdown",
        }
    }
}

impl FromStr for FixtureKind {
    type Err = ExploreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matching-pennies" => Ok(FixtureKind::MatchingPennies),
            "dictator" => Ok(FixtureKind::Dictator),
            "veto" => Ok(FixtureKind::Veto),
            "shutdown" => Ok(FixtureKind::Shutdown),
            other => Err(ExploreError::UnknownFixture(other.to_string())),
        }
    }
}

/// A canonical game form together with its induced model.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub kind: FixtureKind,
    pub game_form: GameForm,
    pub model: CoalitionModel,
}

/// Build one of the canonical fixtures.
pub fn fixture(kind: FixtureKind) -> Fixture {
    let (agents, actions, outcomes, atom) = match kind {
        FixtureKind::MatchingPennies => (2, vec![2, 2], vec![0, 1, 1, 0], "p"),
        FixtureKind::Dictator => (2, vec![2, 2], vec![0, 1, 0, 1], "p"),
        FixtureKind::Veto => (3, vec![2, 2, 2], vec![0, 1, 1, 1, 1, 1, 1, 1], "pass"),
        FixtureKind::Shutdown => (2, vec![2, 2], vec![0, 0, 0, 1], "p"),
    };
    let form = StateForm { actions, outcomes };
    let game_form = GameForm::new(2, agents, vec![form.clone(), form])
        .expect("fixture game forms are well-formed");
    let mut valuation = BTreeMap::new();
    valuation.insert(atom.to_string(), StateSet::singleton(0));
    let model = induce_model(&game_form, valuation).expect("fixture induction cannot fail");
    Fixture { kind, game_form, model }
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

/// A seeded random game form: per state, every agent draws an action
/// count in `1..=max_actions` and the outcome table is filled uniformly.
/// Identical seeds yield identical forms.
pub fn random_game_form(
    seed: u64,
    num_states: usize,
    num_agents: usize,
    max_actions: usize,
) -> Result<GameForm, ExploreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_game_form_with(&mut rng, num_states, num_agents, max_actions)
}

fn random_game_form_with(
    rng: &mut impl Rng,
    num_states: usize,
    num_agents: usize,
    max_actions: usize,
) -> Result<GameForm, ExploreError> {
    let mut forms = Vec::with_capacity(num_states);
    for _ in 0..num_states {
        let actions: Vec<usize> = (0..num_agents)
            .map(|_| rng.gen_range(1..=max_actions.max(1)))
            .collect();
        let profiles: usize = actions.iter().product();
        let outcomes: Vec<usize> = (0..profiles).map(|_| rng.gen_range(0..num_states)).collect();
        forms.push(StateForm { actions, outcomes });
    }
    Ok(GameForm::new(num_states, num_agents, forms)?)
}

/// A seeded random playable model: a random game form induced into a
/// model, with each atom assigned a uniform random state set.
pub fn random_induced_model(
    seed: u64,
    num_states: usize,
    num_agents: usize,
    max_actions: usize,
    atoms: &[&str],
) -> Result<(GameForm, CoalitionModel), ExploreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let game_form = random_game_form_with(&mut rng, num_states, num_agents, max_actions)?;
    let mut valuation = BTreeMap::new();
    for atom in atoms {
        valuation.insert(atom.to_string(), random_state_set(&mut rng, num_states));
    }
    let model = induce_model(&game_form, valuation)?;
    Ok((game_form, model))
}

fn random_state_set(rng: &mut impl Rng, num_states: usize) -> StateSet {
    let bits: u32 = rng.gen_range(0..(1u64 << num_states)) as u32;
    StateSet::from_bits(bits)
}

/// A seeded random formula of bounded depth over the given atoms and
/// agent universe.
pub fn random_formula(
    rng: &mut impl Rng,
    num_agents: usize,
    atoms: &[&str],
    depth: usize,
) -> Formula {
    if depth == 0 {
        return Formula::atom(atoms[rng.gen_range(0..atoms.len())]);
    }
    match rng.gen_range(0..10) {
        0 | 1 => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
        2 | 3 => Formula::not(random_formula(rng, num_agents, atoms, depth - 1)),
        4 | 5 => Formula::and(
            random_formula(rng, num_agents, atoms, depth - 1),
            random_formula(rng, num_agents, atoms, depth - 1),
        ),
        6 | 7 => Formula::eff(
            random_coalition(rng, num_agents),
            random_formula(rng, num_agents, atoms, depth - 1),
        ),
        _ => Formula::fi(
            random_coalition(rng, num_agents),
            random_formula(rng, num_agents, atoms, depth - 1),
        ),
    }
}

/// Like [`random_formula`] but guaranteed to contain a full-inability
/// node, wrapping the result when the draw happens to avoid one.
pub fn random_formula_with_fi(
    rng: &mut impl Rng,
    num_agents: usize,
    atoms: &[&str],
    depth: usize,
) -> Formula {
    let f = random_formula(rng, num_agents, atoms, depth);
    if f.contains_fi() {
        f
    } else {
        Formula::fi(random_coalition(rng, num_agents), f)
    }
}

fn random_coalition(rng: &mut impl Rng, num_agents: usize) -> AgentSet {
    AgentSet::from_bits(rng.gen_range(0..(1u32 << num_agents)) as u16)
}

// ---------------------------------------------------------------------------
// Alpha-dual sampling
// ---------------------------------------------------------------------------

/// Result of alpha-dual sampling: either an accepted random model or the
/// dictator-style fallback after the retry budget ran out.
#[derive(Clone, Debug)]
pub struct AlphaDualSample {
    pub model: CoalitionModel,
    pub fell_back: bool,
    pub attempts: usize,
}

/// Sample an alpha-dual playable model. For each complementary coalition
/// pair one family is drawn upward-closed and the partner derived through
/// the biconditional, which makes alpha-duality structural; candidates
/// failing playability are rejected. Falls back to a dictatorship model
/// of the requested size when the budget is exhausted.
pub fn random_alpha_dual(
    seed: u64,
    num_states: usize,
    num_agents: usize,
) -> Result<AlphaDualSample, ExploreError> {
    if num_states == 0
        || num_agents == 0
        || num_states > ALPHA_DUAL_MAX_STATES
        || num_agents > ALPHA_DUAL_MAX_AGENTS
    {
        return Err(ExploreError::AlphaDualTooLarge {
            max_states: ALPHA_DUAL_MAX_STATES,
            max_agents: ALPHA_DUAL_MAX_AGENTS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const BUDGET: usize = 400;
    for attempt in 1..=BUDGET {
        let candidate = sample_alpha_dual_candidate(&mut rng, num_states, num_agents)?;
        if check_playability(&candidate)?.is_playable() && is_alpha_dual(&candidate)? {
            return Ok(AlphaDualSample { model: candidate, fell_back: false, attempts: attempt });
        }
    }
    Ok(AlphaDualSample {
        model: dictatorship_model(num_states, num_agents)?,
        fell_back: true,
        attempts: BUDGET,
    })
}

fn sample_alpha_dual_candidate(
    rng: &mut impl Rng,
    num_states: usize,
    num_agents: usize,
) -> Result<CoalitionModel, ExploreError> {
    let coalition_count = 1usize << num_agents;
    let grand_bits = coalition_count - 1;
    let mut tables: Vec<Vec<EffFamily>> = Vec::with_capacity(num_states);
    for _ in 0..num_states {
        let mut families: Vec<Option<EffFamily>> = vec![None; coalition_count];
        for bits in 0..coalition_count {
            let partner = grand_bits ^ bits;
            if bits > partner {
                continue; // handled from the canonical side
            }
            let canonical = if bits == 0 {
                // the environment usually forces nothing beyond totality
                if rng.gen_bool(0.75) {
                    EffFamily::from_minimal([StateSet::full(num_states)])
                } else {
                    random_upward_family(rng, num_states)
                }
            } else {
                random_upward_family(rng, num_states)
            };
            families[partner] = Some(dual_family(&canonical, num_states));
            families[bits] = Some(canonical);
        }
        tables.push(families.into_iter().map(Option::unwrap).collect());
    }
    let mut valuation = BTreeMap::new();
    valuation.insert("p".to_string(), random_state_set(rng, num_states));
    valuation.insert("q".to_string(), random_state_set(rng, num_states));
    Ok(CoalitionModel::build(num_states, num_agents, valuation, |w, c| {
        tables[w][c.bits() as usize].clone()
    })?)
}

fn random_upward_family(rng: &mut impl Rng, num_states: usize) -> EffFamily {
    let count = rng.gen_range(1..=3);
    let sets = (0..count).map(|_| {
        let bits = rng.gen_range(1..(1u64 << num_states)) as u32;
        StateSet::from_bits(bits)
    });
    EffFamily::from_minimal(sets)
}

/// The family forced on the complementary coalition by alpha-duality:
/// a set belongs iff its complement is not enforceable by the canonical
/// side. Returned as the antichain of minimal members.
fn dual_family(canonical: &EffFamily, num_states: usize) -> EffFamily {
    let member = |y: StateSet| !canonical.contains(y.complement(num_states));
    let minimal = StateSet::all_subsets(num_states)
        .filter(|&y| member(y) && y.iter().all(|u| !member(y.remove(u))));
    EffFamily::from_minimal(minimal)
}

/// The generalized dictatorship: agent 0 picks the next state outright,
/// everyone else has a single irrelevant action. Alpha-dual at any size.
fn dictatorship_model(num_states: usize, num_agents: usize) -> Result<CoalitionModel, ExploreError> {
    let mut actions = vec![1usize; num_agents];
    actions[0] = num_states;
    let outcomes: Vec<usize> = (0..num_states).collect();
    let form = StateForm { actions, outcomes };
    let game_form = GameForm::new(num_states, num_agents, vec![form; num_states])?;
    let mut valuation = BTreeMap::new();
    valuation.insert("p".to_string(), StateSet::singleton(0));
    let odd = StateSet::from_indices(
        &(0..num_states).filter(|s| s % 2 == 1).collect::<Vec<_>>(),
    );
    valuation.insert("q".to_string(), odd);
    Ok(induce_model(&game_form, valuation)?)
}

// ---------------------------------------------------------------------------
// Bounded satisfiability search
// ---------------------------------------------------------------------------

/// Search budget and universe for [`bounded_sat`].
#[derive(Clone, Copy, Debug)]
pub struct SatParams {
    pub max_states: usize,
    pub max_actions: usize,
    pub samples: usize,
    pub seed: u64,
    /// Agent universe to search. `None` uses exactly the agents the
    /// formula mentions; satisfiability is always relative to a declared
    /// universe, so widening it (one environment agent, say) can make
    /// more formulas satisfiable.
    pub num_agents: Option<usize>,
}

impl SatParams {
    pub fn new(max_states: usize, max_actions: usize, samples: usize, seed: u64) -> Self {
        SatParams { max_states, max_actions, samples, seed, num_agents: None }
    }

    pub fn with_agents(mut self, num_agents: usize) -> Self {
        self.num_agents = Some(num_agents);
        self
    }
}

/// A verified model of the query formula.
#[derive(Clone, Debug)]
pub struct SatWitness {
    pub game_form: GameForm,
    pub model: CoalitionModel,
    pub state: usize,
}

/// Outcome of the bounded search. `Unknown` means the budget ran out or
/// the space was exhausted without a witness; it never asserts
/// unsatisfiability.
#[derive(Clone, Debug)]
pub enum SatOutcome {
    Witness(Box<SatWitness>),
    Unknown,
}

impl SatOutcome {
    pub fn witness(&self) -> Option<&SatWitness> {
        match self {
            SatOutcome::Witness(w) => Some(w),
            SatOutcome::Unknown => None,
        }
    }
}

/// Search game-form-induced models for one satisfying the formula.
/// Exhaustive when the candidate space fits the sample budget, otherwise
/// seeded sampling. Every returned witness is rebuilt from its game form
/// and re-verified before being handed back.
pub fn bounded_sat(f: &Formula, params: &SatParams) -> Result<SatOutcome, ExploreError> {
    let needed = f.max_agent().map_or(0, |m| m + 1);
    if needed > SAT_MAX_FORMULA_AGENTS {
        return Err(ExploreError::SatFormulaTooWide { got: needed, max: SAT_MAX_FORMULA_AGENTS });
    }
    let num_agents = params.num_agents.unwrap_or(needed.max(1));
    if num_agents < needed.max(1) || num_agents > SAT_MAX_UNIVERSE_AGENTS {
        return Err(ExploreError::SatBadUniverse {
            needed: needed.max(1),
            max: SAT_MAX_UNIVERSE_AGENTS,
        });
    }
    let atoms: Vec<String> = f.atoms().iter().map(|a| a.to_string()).collect();
    let max_states = params.max_states.max(1);
    let max_actions = params.max_actions.max(1);

    let space = candidate_space(max_states, num_agents, max_actions, atoms.len());
    if space <= params.samples as u128 {
        exhaustive_search(f, num_agents, max_states, max_actions, &atoms)
    } else {
        sampled_search(f, params, num_agents, max_states, max_actions, &atoms)
    }
}

/// Number of (game form, valuation) candidates across all state counts.
fn candidate_space(max_states: usize, num_agents: usize, max_actions: usize, num_atoms: usize) -> u128 {
    let mut total: u128 = 0;
    for s in 1..=max_states {
        let per_state = forms_per_state(s, num_agents, max_actions);
        let mut candidates: u128 = 1;
        for _ in 0..s {
            candidates = candidates.saturating_mul(per_state);
        }
        let mut valuations: u128 = 1;
        for _ in 0..num_atoms {
            valuations = valuations.saturating_mul(1u128 << s);
        }
        total = total.saturating_add(candidates.saturating_mul(valuations));
    }
    total
}

/// Number of distinct one-state forms: action vectors in
/// `{1..max_actions}^agents`, outcome tables in `states^profiles`.
fn forms_per_state(states: usize, num_agents: usize, max_actions: usize) -> u128 {
    let mut total: u128 = 0;
    let mut vector = vec![1usize; num_agents];
    loop {
        let profiles: usize = vector.iter().product();
        let mut tables: u128 = 1;
        for _ in 0..profiles {
            tables = tables.saturating_mul(states as u128);
        }
        total = total.saturating_add(tables);
        // advance the action-count vector in mixed radix
        let mut i = 0;
        loop {
            if i == num_agents {
                return total;
            }
            vector[i] += 1;
            if vector[i] <= max_actions {
                break;
            }
            vector[i] = 1;
            i += 1;
        }
    }
}

/// All one-state forms for the given dimensions, in enumeration order.
fn all_state_forms(states: usize, num_agents: usize, max_actions: usize) -> Vec<StateForm> {
    let mut out = Vec::new();
    let mut vector = vec![1usize; num_agents];
    loop {
        let profiles: usize = vector.iter().product();
        let mut outcomes = vec![0usize; profiles];
        loop {
            out.push(StateForm { actions: vector.clone(), outcomes: outcomes.clone() });
            // advance the outcome table in mixed radix
            let mut i = 0;
            loop {
                if i == profiles {
                    break;
                }
                outcomes[i] += 1;
                if outcomes[i] < states {
                    break;
                }
                outcomes[i] = 0;
                i += 1;
            }
            if outcomes.iter().all(|&o| o == 0) {
                break;
            }
        }
        let mut i = 0;
        loop {
            if i == num_agents {
                return out;
            }
            vector[i] += 1;
            if vector[i] <= max_actions {
                break;
            }
            vector[i] = 1;
            i += 1;
        }
    }
}

fn exhaustive_search(
    f: &Formula,
    num_agents: usize,
    max_states: usize,
    max_actions: usize,
    atoms: &[String],
) -> Result<SatOutcome, ExploreError> {
    for s in 1..=max_states {
        let forms = all_state_forms(s, num_agents, max_actions);
        let mut form_choice = vec![0usize; s];
        loop {
            let chosen: Vec<StateForm> =
                form_choice.iter().map(|&i| forms[i].clone()).collect();
            let game_form = GameForm::new(s, num_agents, chosen)?;
            let mut val_choice = vec![0u64; atoms.len()];
            loop {
                let valuation: BTreeMap<String, StateSet> = atoms
                    .iter()
                    .zip(&val_choice)
                    .map(|(a, &bits)| (a.clone(), StateSet::from_bits(bits as u32)))
                    .collect();
                if let Some(outcome) = try_candidate(f, &game_form, valuation)? {
                    return Ok(outcome);
                }
                if !advance_mixed_radix_u64(&mut val_choice, 1u64 << s) {
                    break;
                }
            }
            if !advance_mixed_radix(&mut form_choice, forms.len()) {
                break;
            }
        }
    }
    Ok(SatOutcome::Unknown)
}

fn advance_mixed_radix(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn advance_mixed_radix_u64(digits: &mut [u64], radix: u64) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn sampled_search(
    f: &Formula,
    params: &SatParams,
    num_agents: usize,
    max_states: usize,
    max_actions: usize,
    atoms: &[String],
) -> Result<SatOutcome, ExploreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.samples {
        let s = rng.gen_range(1..=max_states);
        let game_form = random_game_form_with(&mut rng, s, num_agents, max_actions)?;
        let valuation: BTreeMap<String, StateSet> = atoms
            .iter()
            .map(|a| (a.clone(), random_state_set(&mut rng, s)))
            .collect();
        if let Some(outcome) = try_candidate(f, &game_form, valuation)? {
            return Ok(outcome);
        }
    }
    Ok(SatOutcome::Unknown)
}

fn try_candidate(
    f: &Formula,
    game_form: &GameForm,
    valuation: BTreeMap<String, StateSet>,
) -> Result<Option<SatOutcome>, ExploreError> {
    let model = induce_model(game_form, valuation.clone())?;
    for w in 0..model.num_states() {
        if satisfies(&model, w, f)? {
            // rebuild from scratch so the witness stands on its own
            let fresh = induce_model(game_form, valuation)?;
            assert!(satisfies(&fresh, w, f)?, "witness failed re-verification");
            return Ok(Some(SatOutcome::Witness(Box::new(SatWitness {
                game_form: game_form.clone(),
                model: fresh,
                state: w,
            }))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcheck::{classify, PowerCategory};
    use crate::model::{check_coalition_monotonicity, check_regularity};

    #[test]
    fn fixture_shapes() {
        let mp = fixture(FixtureKind::MatchingPennies);
        assert_eq!(mp.model.num_agents(), 2);
        assert_eq!(mp.model.num_states(), 2);
        assert_eq!(mp.model.valuation("p"), StateSet::singleton(0));

        let veto = fixture(FixtureKind::Veto);
        assert_eq!(veto.model.num_agents(), 3);
        assert_eq!(veto.model.valuation("pass"), StateSet::singleton(0));

        let shutdown = fixture(FixtureKind::Shutdown);
        assert_eq!(
            classify(&shutdown.model, 0, AgentSet::singleton(0), &Formula::atom("p")).unwrap(),
            PowerCategory::Pd
        );
    }

    #[test]
    fn fixtures_are_playable() {
        for kind in FixtureKind::ALL {
            let f = fixture(kind);
            assert!(check_playability(&f.model).unwrap().is_playable(), "{:?}", kind);
            assert!(check_regularity(&f.model).is_empty());
            assert!(check_coalition_monotonicity(&f.model).is_empty());
        }
    }

    #[test]
    fn fixture_names_round_trip() {
        for kind in FixtureKind::ALL {
            assert_eq!(kind.name().parse::<FixtureKind>().unwrap(), kind);
        }
        assert!(matches!(
            "nonsense".parse::<FixtureKind>(),
            Err(ExploreError::UnknownFixture(_))
        ));
    }

    #[test]
    fn random_game_form_is_deterministic() {
        let a = random_game_form(1, 3, 2, 2).unwrap();
        let b = random_game_form(1, 3, 2, 2).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = random_game_form(2, 3, 2, 2).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn degenerate_random_form_is_playable() {
        let (_, m) = random_induced_model(7, 1, 1, 1, &["p"]).unwrap();
        assert!(check_playability(&m).unwrap().is_playable());
    }

    #[test]
    fn random_induced_models_are_playable() {
        for seed in 0..40 {
            let (_, m) = random_induced_model(seed, 3, 2, 3, &["p", "q"]).unwrap();
            assert!(check_playability(&m).unwrap().is_playable(), "seed {}", seed);
        }
    }

    #[test]
    fn alpha_dual_samples_verify() {
        let mut accepted = 0;
        for seed in 0..12 {
            let sample = random_alpha_dual(seed, 2, 2).unwrap();
            assert!(is_alpha_dual(&sample.model).unwrap());
            assert!(check_playability(&sample.model).unwrap().is_playable());
            if !sample.fell_back {
                accepted += 1;
            }
        }
        assert!(accepted > 0, "rejection sampling never accepted a candidate");
    }

    #[test]
    fn alpha_dual_models_are_regular_and_complement_determined() {
        for seed in 0..6 {
            let m = random_alpha_dual(seed, 3, 2).unwrap().model;
            assert!(check_regularity(&m).is_empty());
            // the converse of regularity: whatever the complement cannot
            // refute, the coalition enforces
            for w in 0..m.num_states() {
                for c in m.coalitions() {
                    let cbar = c.complement(m.num_agents());
                    for x in StateSet::all_subsets(m.num_states()) {
                        let refuted = m.eff(w, cbar).contains(x.complement(m.num_states()));
                        if !refuted {
                            assert!(m.eff(w, c).contains(x));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dictatorship_fallback_is_alpha_dual() {
        for (states, agents) in [(2, 2), (3, 3), (4, 2)] {
            let m = dictatorship_model(states, agents).unwrap();
            assert!(is_alpha_dual(&m).unwrap());
            assert!(check_playability(&m).unwrap().is_playable());
        }
    }

    #[test]
    fn dual_family_matches_definition() {
        let canonical = EffFamily::from_minimal([StateSet::from_indices(&[0, 1])]);
        let dual = dual_family(&canonical, 2);
        for y in StateSet::all_subsets(2) {
            assert_eq!(dual.contains(y), !canonical.contains(y.complement(2)));
        }
    }

    #[test]
    fn bounded_sat_finds_full_inability_witness() {
        let f: Formula = "FI[{0}](p)".parse().unwrap();
        let params = SatParams::new(2, 2, 100_000, 42).with_agents(2);
        let outcome = bounded_sat(&f, &params).unwrap();
        let witness = outcome.witness().expect("a matching-pennies-like witness exists");
        assert!(satisfies(&witness.model, witness.state, &f).unwrap());
    }

    #[test]
    fn bounded_sat_unknown_for_grand_coalition_inability() {
        // with the universe pinned to the formula's own agents, the grand
        // coalition can never be fully unable in a playable model
        let f: Formula = "FI[{0,1}](p)".parse().unwrap();
        let params = SatParams::new(2, 2, 50_000, 7).with_agents(2);
        assert!(matches!(bounded_sat(&f, &params).unwrap(), SatOutcome::Unknown));
        // same for a single agent forming the whole universe
        let g: Formula = "FI[{0}](p)".parse().unwrap();
        let params = SatParams::new(2, 2, 20_000, 7);
        assert!(matches!(bounded_sat(&g, &params).unwrap(), SatOutcome::Unknown));
    }

    #[test]
    fn bounded_sat_unknown_for_contradiction() {
        let f: Formula = "p & ~p".parse().unwrap();
        let params = SatParams::new(2, 2, 5_000, 3);
        assert!(matches!(bounded_sat(&f, &params).unwrap(), SatOutcome::Unknown));
    }

    #[test]
    fn bounded_sat_rejects_oversized_inputs() {
        let f: Formula = "FI[{0,1,2,3,4}](p)".parse().unwrap();
        let params = SatParams::new(2, 2, 100, 0);
        assert!(matches!(
            bounded_sat(&f, &params),
            Err(ExploreError::SatFormulaTooWide { .. })
        ));
        let g: Formula = "FI[{0,1}](p)".parse().unwrap();
        let params = SatParams::new(2, 2, 100, 0).with_agents(1);
        assert!(matches!(
            bounded_sat(&g, &params),
            Err(ExploreError::SatBadUniverse { .. })
        ));
    }

    #[test]
    fn random_formulas_respect_the_universe() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let f = random_formula(&mut rng, 3, &["p", "q"], 4);
            assert!(f.coalitions_fit(3));
            let g = random_formula_with_fi(&mut rng, 3, &["p", "q"], 3);
            assert!(g.contains_fi());
        }
    }
}
