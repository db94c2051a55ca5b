//! Dummy-player analysis, inability thresholds, k-robustness, and
//! strategic profiles.
//!
//! Escaping full inability means enforcing at least one side of the
//! issue. On playable models escape is monotone under coalition growth,
//! so the inclusion-minimal escaping coalitions form an antichain and
//! minimality can be certified by immediate subsets alone. Threshold
//! analysis therefore rejects non-playable input instead of emitting
//! possibly-non-antichain output.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::mcheck::{classify, truth_set, EvalError, PowerCategory};
use crate::model::{check_playability, CoalitionModel, ModelError};
use crate::sets::AgentSet;

/// Coalition sweeps refuse models beyond this many agents.
pub const COALITION_SWEEP_AGENT_LIMIT: usize = 8;

#[derive(Debug, Error)]
pub enum RobustnessError {
    #[error("coalition sweep refused: {got} agents (limit {limit})")]
    TooManyAgents { got: usize, limit: usize },
    #[error("threshold analysis requires a playable model; state {state} violates: {violation}")]
    NotPlayable { state: usize, violation: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn check_agent_cap(m: &CoalitionModel) -> Result<(), RobustnessError> {
    if m.num_agents() > COALITION_SWEEP_AGENT_LIMIT {
        return Err(RobustnessError::TooManyAgents {
            got: m.num_agents(),
            limit: COALITION_SWEEP_AGENT_LIMIT,
        });
    }
    Ok(())
}

fn require_playable(m: &CoalitionModel) -> Result<(), RobustnessError> {
    let report = check_playability(m)?;
    if let Some((state, violation)) = report.iter().next() {
        return Err(RobustnessError::NotPlayable {
            state,
            violation: violation.to_string(),
        });
    }
    Ok(())
}

fn check_agent(m: &CoalitionModel, agent: usize) -> Result<(), RobustnessError> {
    if agent >= m.num_agents() {
        return Err(ModelError::AgentOutOfRange { agent, num_agents: m.num_agents() }.into());
    }
    Ok(())
}

/// First coalition (by bit value) excluding `agent` whose enforceability
/// of the formula changes when the agent joins; `None` means the agent is
/// a dummy for the formula at this state.
pub fn dummy_counterexample(
    m: &CoalitionModel,
    state: usize,
    agent: usize,
    f: &Formula,
) -> Result<Option<AgentSet>, RobustnessError> {
    check_agent_cap(m)?;
    check_agent(m, agent)?;
    let ts = truth_set(m, f)?;
    let others = AgentSet::full(m.num_agents()).remove(agent);
    for c in others.subsets() {
        let without = m.eff(state, c).contains(ts);
        let with = m.eff(state, c.insert(agent)).contains(ts);
        if with != without {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// True when joining any coalition never changes enforceability of the
/// formula at the state.
pub fn is_dummy(
    m: &CoalitionModel,
    state: usize,
    agent: usize,
    f: &Formula,
) -> Result<bool, RobustnessError> {
    Ok(dummy_counterexample(m, state, agent, f)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DummyFiVerdict {
    /// All premises hold, and full inability follows.
    Confirmed,
    /// At least one premise fails; nothing is asserted. `fi_holds` may
    /// still be true, which witnesses that the implication has no
    /// converse.
    Vacuous,
}

/// The premises and conclusion of the dummy-to-full-inability implication
/// for one (state, agent, formula) triple.
#[derive(Clone, Debug)]
pub struct DummyFiReport {
    pub state: usize,
    pub agent: usize,
    pub dummy_for_formula: bool,
    pub dummy_for_negation: bool,
    /// The empty coalition cannot enforce the formula's truth set.
    pub empty_cannot_enforce: bool,
    /// The empty coalition cannot enforce the complement.
    pub empty_cannot_refute: bool,
    pub fi_holds: bool,
    pub verdict: DummyFiVerdict,
}

/// When the agent is a dummy for the formula and its negation, and the
/// empty coalition enforces neither side, the singleton must be fully
/// unable. Reports vacuous when any premise fails.
pub fn dummy_fi_check(
    m: &CoalitionModel,
    state: usize,
    agent: usize,
    f: &Formula,
) -> Result<DummyFiReport, RobustnessError> {
    check_agent(m, agent)?;
    let neg = Formula::not(f.clone());
    let dummy_for_formula = is_dummy(m, state, agent, f)?;
    let dummy_for_negation = is_dummy(m, state, agent, &neg)?;
    let ts = truth_set(m, f)?;
    let empty = m.eff(state, AgentSet::EMPTY);
    let empty_cannot_enforce = !empty.contains(ts);
    let empty_cannot_refute = !empty.contains(ts.complement(m.num_states()));
    let fi_holds =
        classify(m, state, AgentSet::singleton(agent), f)? == PowerCategory::Fi;
    let premises =
        dummy_for_formula && dummy_for_negation && empty_cannot_enforce && empty_cannot_refute;
    if premises {
        // forced by instantiating the dummy condition at the empty coalition
        assert!(fi_holds, "dummy premises held but full inability failed");
    }
    Ok(DummyFiReport {
        state,
        agent,
        dummy_for_formula,
        dummy_for_negation,
        empty_cannot_enforce,
        empty_cannot_refute,
        fi_holds,
        verdict: if premises { DummyFiVerdict::Confirmed } else { DummyFiVerdict::Vacuous },
    })
}

/// The inclusion-minimal coalitions escaping full inability, with the
/// least escaping cardinality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    /// Antichain, sorted by cardinality then bit value.
    pub minimal_escaping: Vec<AgentSet>,
    /// Minimum cardinality over the minimal escaping coalitions;
    /// playability guarantees the grand coalition escapes, so this is
    /// always defined.
    pub degree: usize,
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "minimal escaping: ")?;
        for (k, c) in self.minimal_escaping.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "; degree: {}", self.degree)
    }
}

/// True when no set in the list contains another.
pub fn is_antichain(sets: &[AgentSet]) -> bool {
    sets.iter().all(|a| {
        sets.iter()
            .all(|b| a == b || !(a.is_subset_of(*b) || b.is_subset_of(*a)))
    })
}

/// Compute the inability threshold of a formula at a state. Requires a
/// playable model; minimality of each escaping coalition is certified by
/// its immediate subsets, which suffices because escape is monotone under
/// playability.
pub fn inability_threshold(
    m: &CoalitionModel,
    state: usize,
    f: &Formula,
) -> Result<ThresholdReport, RobustnessError> {
    check_agent_cap(m)?;
    require_playable(m)?;
    let ts = truth_set(m, f)?;
    let comp = ts.complement(m.num_states());
    let escapes = |c: AgentSet| {
        let fam = m.eff(state, c);
        fam.contains(ts) || fam.contains(comp)
    };
    let mut minimal_escaping = Vec::new();
    for c in m.coalitions() {
        if escapes(c) && c.iter().all(|i| !escapes(c.remove(i))) {
            minimal_escaping.push(c);
        }
    }
    minimal_escaping.sort_by_key(|c| (c.len(), c.bits()));
    assert!(
        is_antichain(&minimal_escaping),
        "minimal escaping coalitions must form an antichain"
    );
    let degree = minimal_escaping
        .iter()
        .map(|c| c.len())
        .min()
        .expect("the grand coalition escapes on playable models");
    Ok(ThresholdReport { minimal_escaping, degree })
}

/// k-robustness via the threshold: no coalition of size at most `k`
/// escapes full inability exactly when the degree exceeds `k`.
pub fn is_k_robust(
    m: &CoalitionModel,
    state: usize,
    f: &Formula,
    k: usize,
) -> Result<bool, RobustnessError> {
    Ok(inability_threshold(m, state, f)?.degree > k)
}

/// The same question answered by brute force: full inability must hold
/// for every coalition of size at most `k`. Kept as an independent route;
/// the two must agree on playable models.
pub fn is_k_robust_exhaustive(
    m: &CoalitionModel,
    state: usize,
    f: &Formula,
    k: usize,
) -> Result<bool, RobustnessError> {
    check_agent_cap(m)?;
    require_playable(m)?;
    for c in m.coalitions() {
        if c.len() <= k && classify(m, state, c, f)? != PowerCategory::Fi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Violations of the coalitional shift laws: full inability must descend
/// to subcoalitions, full control must ascend to supercoalitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftViolation {
    /// The extended coalition is fully unable but the base is not.
    FiNotInherited {
        state: usize,
        coalition: AgentSet,
        added_agent: usize,
        formula: Formula,
    },
    /// The base has full control but the extended coalition does not.
    FcNotPropagated {
        state: usize,
        coalition: AgentSet,
        added_agent: usize,
        formula: Formula,
    },
}

impl fmt::Display for ShiftViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftViolation::FiNotInherited { state, coalition, added_agent, formula } => write!(
                f,
                "state {}: {} plus agent {} is fully unable on {} but the base coalition is not",
                state, coalition, added_agent, formula
            ),
            ShiftViolation::FcNotPropagated { state, coalition, added_agent, formula } => write!(
                f,
                "state {}: {} has full control of {} but loses it when agent {} joins",
                state, coalition, formula, added_agent
            ),
        }
    }
}

/// Check both shift laws over all covering coalition pairs and the given
/// formulas. Empty on playable models.
pub fn coalitional_shift_check(
    m: &CoalitionModel,
    formulas: &[Formula],
) -> Result<Vec<ShiftViolation>, RobustnessError> {
    check_agent_cap(m)?;
    let mut out = Vec::new();
    for w in 0..m.num_states() {
        for f in formulas {
            for c in m.coalitions() {
                let base = classify(m, w, c, f)?;
                for i in 0..m.num_agents() {
                    if c.contains(i) {
                        continue;
                    }
                    let extended = classify(m, w, c.insert(i), f)?;
                    if extended == PowerCategory::Fi && base != PowerCategory::Fi {
                        out.push(ShiftViolation::FiNotInherited {
                            state: w,
                            coalition: c,
                            added_agent: i,
                            formula: f.clone(),
                        });
                    }
                    if base == PowerCategory::Fc && extended != PowerCategory::Fc {
                        out.push(ShiftViolation::FcNotPropagated {
                            state: w,
                            coalition: c,
                            added_agent: i,
                            formula: f.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Per-state category counts for a single agent: how many states fall in
/// each of the four categories. The counts always sum to the number of
/// states.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StrategicProfile {
    pub fc: usize,
    pub pd: usize,
    pub ad: usize,
    pub fi: usize,
}

impl StrategicProfile {
    pub fn total(&self) -> usize {
        self.fc + self.pd + self.ad + self.fi
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.fc, self.pd, self.ad, self.fi]
    }
}

impl fmt::Display for StrategicProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FC={} PD={} AD={} FI={}", self.fc, self.pd, self.ad, self.fi)
    }
}

pub fn strategic_profile(
    m: &CoalitionModel,
    agent: usize,
    f: &Formula,
) -> Result<StrategicProfile, RobustnessError> {
    check_agent(m, agent)?;
    let c = AgentSet::singleton(agent);
    let mut profile = StrategicProfile::default();
    for w in 0..m.num_states() {
        match classify(m, w, c, f)? {
            PowerCategory::Fc => profile.fc += 1,
            PowerCategory::Pd => profile.pd += 1,
            PowerCategory::Ad => profile.ad += 1,
            PowerCategory::Fi => profile.fi += 1,
        }
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{fixture, FixtureKind};
    use crate::model::EffFamily;
    use crate::sets::StateSet;
    use std::collections::BTreeMap;

    fn ag(indices: &[usize]) -> AgentSet {
        AgentSet::from_indices(indices)
    }

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn dictator_dummy_analysis() {
        let m = fixture(FixtureKind::Dictator).model;
        assert!(is_dummy(&m, 0, 1, &p()).unwrap());
        assert_eq!(
            dummy_counterexample(&m, 0, 0, &p()).unwrap(),
            Some(AgentSet::EMPTY)
        );
    }

    #[test]
    fn matching_pennies_players_are_not_dummies() {
        let m = fixture(FixtureKind::MatchingPennies).model;
        assert_eq!(dummy_counterexample(&m, 0, 1, &p()).unwrap(), Some(ag(&[0])));
    }

    #[test]
    fn dummy_fi_confirmed_for_sidelined_agent() {
        let m = fixture(FixtureKind::Dictator).model;
        let report = dummy_fi_check(&m, 0, 1, &p()).unwrap();
        assert_eq!(report.verdict, DummyFiVerdict::Confirmed);
        assert!(report.fi_holds);
    }

    #[test]
    fn dummy_fi_vacuous_for_the_dictator() {
        let m = fixture(FixtureKind::Dictator).model;
        let report = dummy_fi_check(&m, 0, 0, &p()).unwrap();
        assert_eq!(report.verdict, DummyFiVerdict::Vacuous);
        assert!(!report.dummy_for_formula);
        assert!(!report.fi_holds);
    }

    #[test]
    fn dummy_fi_has_no_converse() {
        // a matching-pennies player is fully unable yet pivotal
        let m = fixture(FixtureKind::MatchingPennies).model;
        let report = dummy_fi_check(&m, 0, 1, &p()).unwrap();
        assert_eq!(report.verdict, DummyFiVerdict::Vacuous);
        assert!(!report.dummy_for_formula);
        assert!(report.fi_holds);
    }

    #[test]
    fn threshold_examples() {
        let mp = fixture(FixtureKind::MatchingPennies).model;
        let report = inability_threshold(&mp, 0, &p()).unwrap();
        assert_eq!(report.minimal_escaping, vec![ag(&[0, 1])]);
        assert_eq!(report.degree, 2);

        let dict = fixture(FixtureKind::Dictator).model;
        let report = inability_threshold(&dict, 0, &p()).unwrap();
        assert_eq!(report.minimal_escaping, vec![ag(&[0])]);
        assert_eq!(report.degree, 1);

        let veto = fixture(FixtureKind::Veto).model;
        let report = inability_threshold(&veto, 0, &Formula::atom("pass")).unwrap();
        assert_eq!(report.minimal_escaping, vec![ag(&[0]), ag(&[1]), ag(&[2])]);
        assert_eq!(report.degree, 1);
        assert!(is_antichain(&report.minimal_escaping));
    }

    #[test]
    fn minimality_agrees_with_full_subset_oracle() {
        // oracle: a coalition is minimal-escaping iff it escapes and no
        // proper subset does
        for kind in FixtureKind::ALL {
            let f = fixture(kind);
            let m = &f.model;
            let atom = Formula::atom(if kind == FixtureKind::Veto { "pass" } else { "p" });
            for w in 0..m.num_states() {
                let report = inability_threshold(m, w, &atom).unwrap();
                let escapes = |c: AgentSet| {
                    classify(m, w, c, &atom).unwrap() != PowerCategory::Fi
                };
                let oracle: Vec<AgentSet> = m
                    .coalitions()
                    .filter(|&c| {
                        escapes(c)
                            && c.subsets().all(|d| d == c || !escapes(d))
                    })
                    .collect();
                let mut sorted = oracle;
                sorted.sort_by_key(|c| (c.len(), c.bits()));
                assert_eq!(report.minimal_escaping, sorted);
            }
        }
    }

    #[test]
    fn k_robustness_examples_and_route_agreement() {
        let mp = fixture(FixtureKind::MatchingPennies).model;
        assert!(is_k_robust(&mp, 0, &p(), 1).unwrap());
        assert!(!is_k_robust(&mp, 0, &p(), 2).unwrap());
        for kind in FixtureKind::ALL {
            let f = fixture(kind);
            let m = &f.model;
            let atom = Formula::atom(if kind == FixtureKind::Veto { "pass" } else { "p" });
            for w in 0..m.num_states() {
                for k in 0..=m.num_agents() {
                    assert_eq!(
                        is_k_robust(m, w, &atom, k).unwrap(),
                        is_k_robust_exhaustive(m, w, &atom, k).unwrap(),
                    );
                }
                // the grand coalition always escapes
                assert!(!is_k_robust(m, w, &atom, m.num_agents()).unwrap());
            }
        }
    }

    #[test]
    fn threshold_rejects_non_playable_models() {
        let m = CoalitionModel::build(2, 2, BTreeMap::new(), |_, _| EffFamily::empty()).unwrap();
        assert!(matches!(
            inability_threshold(&m, 0, &p()),
            Err(RobustnessError::NotPlayable { .. })
        ));
    }

    #[test]
    fn agent_indices_are_validated() {
        let m = fixture(FixtureKind::MatchingPennies).model;
        assert!(matches!(
            strategic_profile(&m, 5, &p()),
            Err(RobustnessError::Model(_))
        ));
        assert!(matches!(
            is_dummy(&m, 0, 5, &p()),
            Err(RobustnessError::Model(_))
        ));
    }

    #[test]
    fn coalition_sweeps_refuse_oversized_agent_spaces() {
        let m = CoalitionModel::build(1, COALITION_SWEEP_AGENT_LIMIT + 1, BTreeMap::new(), |_, _| {
            EffFamily::from_minimal([StateSet::singleton(0)])
        })
        .unwrap();
        assert!(matches!(
            is_dummy(&m, 0, 0, &p()),
            Err(RobustnessError::TooManyAgents { .. })
        ));
        assert!(matches!(
            inability_threshold(&m, 0, &p()),
            Err(RobustnessError::TooManyAgents { .. })
        ));
    }

    #[test]
    fn shift_laws_hold_on_fixtures() {
        for kind in FixtureKind::ALL {
            let f = fixture(kind);
            let atom = Formula::atom(if kind == FixtureKind::Veto { "pass" } else { "p" });
            let formulas = [atom.clone(), Formula::not(atom)];
            assert!(coalitional_shift_check(&f.model, &formulas).unwrap().is_empty());
        }
    }

    #[test]
    fn shift_violations_on_a_corrupted_model() {
        // the pair {0,1} loses what {0} can do: monotonicity broken by hand
        let mut valuation = BTreeMap::new();
        valuation.insert("p".to_string(), StateSet::from_indices(&[0]));
        let m = CoalitionModel::build(2, 2, valuation, |_, c| {
            if c == ag(&[0]) {
                EffFamily::from_minimal([StateSet::from_indices(&[0]), StateSet::from_indices(&[1])])
            } else {
                EffFamily::from_minimal([StateSet::full(2)])
            }
        })
        .unwrap();
        let violations = coalitional_shift_check(&m, &[p()]).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, ShiftViolation::FiNotInherited { .. })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, ShiftViolation::FcNotPropagated { .. })));
    }

    #[test]
    fn strategic_profiles() {
        let mp = fixture(FixtureKind::MatchingPennies).model;
        assert_eq!(
            strategic_profile(&mp, 0, &p()).unwrap().as_array(),
            [0, 0, 0, 2]
        );
        let dict = fixture(FixtureKind::Dictator).model;
        assert_eq!(
            strategic_profile(&dict, 0, &p()).unwrap().as_array(),
            [2, 0, 0, 0]
        );
        for kind in FixtureKind::ALL {
            let f = fixture(kind);
            let atom = Formula::atom(if kind == FixtureKind::Veto { "pass" } else { "p" });
            for agent in 0..f.model.num_agents() {
                let profile = strategic_profile(&f.model, agent, &atom).unwrap();
                assert_eq!(profile.total(), f.model.num_states());
            }
        }
    }
}
