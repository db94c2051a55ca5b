//! Model checking: truth sets, the four-fold power classification,
//! strategic values, and the two bilattice orders.
//!
//! A coalition's status on a formula is the Boolean pair
//! (can enforce the truth set, can enforce its complement):
//!
//! * `(1,1)` full control, `FC`
//! * `(1,0)` positive determination, `PD`
//! * `(0,1)` adverse determination, `AD`
//! * `(0,0)` full inability, `FI`
//!
//! The full-inability clause is evaluated natively from the effectivity
//! table; the elimination translation in [`crate::formula`] provides an
//! independent route that the test suites cross-check against.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::model::CoalitionModel;
use crate::sets::{AgentSet, StateSet};

/// Sweep limits for the bimonotonicity check.
pub const BIMONOTONE_STATE_LIMIT: usize = 16;
pub const BIMONOTONE_AGENT_LIMIT: usize = 8;

/// The four-fold classification of a coalition's power over an issue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowerCategory {
    /// Can enforce the set and its complement.
    Fc,
    /// Can enforce the set but not its complement.
    Pd,
    /// Can enforce the complement but not the set.
    Ad,
    /// Can enforce neither.
    Fi,
}

impl PowerCategory {
    pub const ALL: [PowerCategory; 4] =
        [PowerCategory::Fc, PowerCategory::Pd, PowerCategory::Ad, PowerCategory::Fi];

    pub fn from_bits(enforce: bool, refute: bool) -> Self {
        match (enforce, refute) {
            (true, true) => PowerCategory::Fc,
            (true, false) => PowerCategory::Pd,
            (false, true) => PowerCategory::Ad,
            (false, false) => PowerCategory::Fi,
        }
    }

    pub fn value(self) -> StrategicValue {
        match self {
            PowerCategory::Fc => StrategicValue { enforce: true, refute: true },
            PowerCategory::Pd => StrategicValue { enforce: true, refute: false },
            PowerCategory::Ad => StrategicValue { enforce: false, refute: true },
            PowerCategory::Fi => StrategicValue { enforce: false, refute: false },
        }
    }

    /// Stable index for per-category arrays: FC, PD, AD, FI.
    pub fn index(self) -> usize {
        match self {
            PowerCategory::Fc => 0,
            PowerCategory::Pd => 1,
            PowerCategory::Ad => 2,
            PowerCategory::Fi => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PowerCategory::Fc => "FC",
            PowerCategory::Pd => "PD",
            PowerCategory::Ad => "AD",
            PowerCategory::Fi => "FI",
        }
    }
}

impl fmt::Display for PowerCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The Boolean-pair encoding of a category: `enforce` is "the set is
/// enforceable", `refute` is "its complement is enforceable".
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct StrategicValue {
    pub enforce: bool,
    pub refute: bool,
}

impl StrategicValue {
    pub fn category(self) -> PowerCategory {
        PowerCategory::from_bits(self.enforce, self.refute)
    }

    /// Determination order: both coordinates non-decreasing.
    /// `FI` is the least element, `FC` the greatest, `PD`/`AD` incomparable.
    pub fn leq_k(self, other: StrategicValue) -> bool {
        self.enforce <= other.enforce && self.refute <= other.refute
    }

    /// Directionality order: `enforce` non-decreasing, `refute`
    /// non-increasing. `AD` is the least element, `PD` the greatest.
    pub fn leq_t(self, other: StrategicValue) -> bool {
        self.enforce <= other.enforce && other.refute <= self.refute
    }
}

impl fmt::Display for StrategicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.enforce as u8, self.refute as u8)
    }
}

/// Where a value may migrate when the outcome set grows (set inclusion):
/// exactly the up-set in the directionality order.
pub fn outcome_migration_targets(from: PowerCategory) -> &'static [PowerCategory] {
    match from {
        PowerCategory::Ad => &[PowerCategory::Ad, PowerCategory::Fi, PowerCategory::Fc, PowerCategory::Pd],
        PowerCategory::Fi => &[PowerCategory::Fi, PowerCategory::Pd],
        PowerCategory::Fc => &[PowerCategory::Fc, PowerCategory::Pd],
        PowerCategory::Pd => &[PowerCategory::Pd],
    }
}

/// Where a value may migrate when the coalition grows: exactly the up-set
/// in the determination order.
pub fn coalition_migration_targets(from: PowerCategory) -> &'static [PowerCategory] {
    match from {
        PowerCategory::Fi => &[PowerCategory::Fi, PowerCategory::Pd, PowerCategory::Ad, PowerCategory::Fc],
        PowerCategory::Pd => &[PowerCategory::Pd, PowerCategory::Fc],
        PowerCategory::Ad => &[PowerCategory::Ad, PowerCategory::Fc],
        PowerCategory::Fc => &[PowerCategory::Fc],
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("coalition {coalition} exceeds the model's {num_agents} agents")]
    CoalitionOutOfRange { coalition: AgentSet, num_agents: usize },
    #[error("{what} sweep refused: {got} {unit} (limit {limit})")]
    SweepTooLarge {
        what: &'static str,
        got: usize,
        unit: &'static str,
        limit: usize,
    },
}

/// The truth set of a formula. Atoms absent from the valuation denote the
/// empty set; every coalition must fit the model's agent count.
pub fn truth_set(m: &CoalitionModel, f: &Formula) -> Result<StateSet, EvalError> {
    match f {
        Formula::Atom(p) => Ok(m.valuation(p)),
        Formula::Not(sub) => Ok(truth_set(m, sub)?.complement(m.num_states())),
        Formula::And(l, r) => Ok(truth_set(m, l)?.intersection(truth_set(m, r)?)),
        Formula::Eff(c, sub) => {
            check_coalition(m, *c)?;
            let ts = truth_set(m, sub)?;
            let mut out = StateSet::EMPTY;
            for w in 0..m.num_states() {
                if m.eff(w, *c).contains(ts) {
                    out = out.insert(w);
                }
            }
            Ok(out)
        }
        Formula::Fi(c, sub) => {
            check_coalition(m, *c)?;
            let ts = truth_set(m, sub)?;
            let comp = ts.complement(m.num_states());
            let mut out = StateSet::EMPTY;
            for w in 0..m.num_states() {
                let fam = m.eff(w, *c);
                if !fam.contains(ts) && !fam.contains(comp) {
                    out = out.insert(w);
                }
            }
            Ok(out)
        }
    }
}

fn check_coalition(m: &CoalitionModel, c: AgentSet) -> Result<(), EvalError> {
    if !c.is_subset_of(m.grand_coalition()) {
        return Err(EvalError::CoalitionOutOfRange {
            coalition: c,
            num_agents: m.num_agents(),
        });
    }
    Ok(())
}

pub fn satisfies(m: &CoalitionModel, w: usize, f: &Formula) -> Result<bool, EvalError> {
    Ok(truth_set(m, f)?.contains(w))
}

/// The strategic value of an outcome set for a coalition at a state.
pub fn strategic_value(m: &CoalitionModel, w: usize, c: AgentSet, x: StateSet) -> StrategicValue {
    let fam = m.eff(w, c);
    StrategicValue {
        enforce: fam.contains(x),
        refute: fam.contains(x.complement(m.num_states())),
    }
}

/// Classify a coalition's power over a formula at a state. Exactly one
/// category results by construction.
pub fn classify(
    m: &CoalitionModel,
    w: usize,
    c: AgentSet,
    f: &Formula,
) -> Result<PowerCategory, EvalError> {
    check_coalition(m, c)?;
    let ts = truth_set(m, f)?;
    Ok(strategic_value(m, w, c, ts).category())
}

/// A failure of one of the two monotonicity clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BimonotonicityViolation {
    /// Growing the outcome set by one state broke the directionality order.
    Outcome {
        state: usize,
        coalition: AgentSet,
        set: StateSet,
        added_state: usize,
        from: StrategicValue,
        to: StrategicValue,
    },
    /// Growing the coalition by one agent broke the determination order.
    Coalition {
        state: usize,
        coalition: AgentSet,
        added_agent: usize,
        set: StateSet,
        from: StrategicValue,
        to: StrategicValue,
    },
}

impl fmt::Display for BimonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BimonotonicityViolation::Outcome { state, coalition, set, added_state, from, to } => {
                write!(
                    f,
                    "state {}: value of {} for {} moves {} -> {} against the directionality order when adding state {}",
                    state, set, coalition, from, to, added_state
                )
            }
            BimonotonicityViolation::Coalition { state, coalition, added_agent, set, from, to } => {
                write!(
                    f,
                    "state {}: value of {} moves {} -> {} against the determination order when {} gains agent {}",
                    state, set, from, to, coalition, added_agent
                )
            }
        }
    }
}

/// Check both monotonicity clauses over all single-element extensions:
/// outcome growth must respect the directionality order and coalition
/// growth the determination order. Playable models produce no violations.
pub fn check_bimonotonicity(m: &CoalitionModel) -> Result<Vec<BimonotonicityViolation>, EvalError> {
    if m.num_states() > BIMONOTONE_STATE_LIMIT {
        return Err(EvalError::SweepTooLarge {
            what: "bimonotonicity",
            got: m.num_states(),
            unit: "states",
            limit: BIMONOTONE_STATE_LIMIT,
        });
    }
    if m.num_agents() > BIMONOTONE_AGENT_LIMIT {
        return Err(EvalError::SweepTooLarge {
            what: "bimonotonicity",
            got: m.num_agents(),
            unit: "agents",
            limit: BIMONOTONE_AGENT_LIMIT,
        });
    }
    let mut out = Vec::new();
    for w in 0..m.num_states() {
        for c in m.coalitions() {
            for x in StateSet::all_subsets(m.num_states()) {
                let base = strategic_value(m, w, c, x);
                for u in 0..m.num_states() {
                    if !x.contains(u) {
                        let to = strategic_value(m, w, c, x.insert(u));
                        if !base.leq_t(to) {
                            out.push(BimonotonicityViolation::Outcome {
                                state: w,
                                coalition: c,
                                set: x,
                                added_state: u,
                                from: base,
                                to,
                            });
                        }
                    }
                }
                for i in 0..m.num_agents() {
                    if !c.contains(i) {
                        let to = strategic_value(m, w, c.insert(i), x);
                        if !base.leq_k(to) {
                            out.push(BimonotonicityViolation::Coalition {
                                state: w,
                                coalition: c,
                                added_agent: i,
                                set: x,
                                from: base,
                                to,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
