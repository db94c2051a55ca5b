//! Transformations on (coalition, formula) pairs and the conditional
//! duality theory.
//!
//! Propositional negation swaps the two coordinates of a strategic value
//! and therefore permutes categories on every model. Coalition
//! complementation permutes categories only on alpha-dual models, where
//! the two generators produce a Klein four-group action. On merely
//! playable models the complement's category is constrained but not
//! determined, and this module also checks those weaker constraints.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::mcheck::{classify, EvalError, PowerCategory};
use crate::model::{check_alpha_duality, CoalitionModel, ModelError};
use crate::sets::{AgentSet, StateSet};

/// The four transformations acting on (coalition, formula) pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transform {
    Id,
    /// Negate the formula, keep the coalition.
    Neg,
    /// Complement the coalition, keep the formula.
    Comp,
    /// Both at once.
    Both,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Id, Transform::Neg, Transform::Comp, Transform::Both];

    pub fn label(self) -> &'static str {
        match self {
            Transform::Id => "id",
            Transform::Neg => "neg",
            Transform::Comp => "comp",
            Transform::Both => "both",
        }
    }

    /// The induced permutation of category labels under alpha-duality:
    /// negation swaps the coordinates, complementation negates and swaps
    /// them, their composite negates both.
    pub fn category_action(self, cat: PowerCategory) -> PowerCategory {
        let v = cat.value();
        let (enforce, refute) = match self {
            Transform::Id => (v.enforce, v.refute),
            Transform::Neg => (v.refute, v.enforce),
            Transform::Comp => (!v.refute, !v.enforce),
            Transform::Both => (!v.enforce, !v.refute),
        };
        PowerCategory::from_bits(enforce, refute)
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Apply a transformation to a (coalition, formula) pair. Negation wraps
/// the formula in a fresh negation node; no simplification happens, so a
/// double application is an involution only up to semantic equivalence.
pub fn apply_transform(
    t: Transform,
    coalition: AgentSet,
    formula: &Formula,
    num_agents: usize,
) -> (AgentSet, Formula) {
    match t {
        Transform::Id => (coalition, formula.clone()),
        Transform::Neg => (coalition, Formula::not(formula.clone())),
        Transform::Comp => (coalition.complement(num_agents), formula.clone()),
        Transform::Both => (
            coalition.complement(num_agents),
            Formula::not(formula.clone()),
        ),
    }
}

#[derive(Debug, Error)]
pub enum DualityError {
    #[error("model is not alpha-dual at state {state}: witness coalition {coalition}, set {set}")]
    NotAlphaDual {
        state: usize,
        coalition: AgentSet,
        set: StateSet,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn require_alpha_dual_at(m: &CoalitionModel, state: usize) -> Result<(), DualityError> {
    let check = check_alpha_duality(m, state)?;
    if !check.holds {
        let (coalition, set) = check.witness.expect("failed check carries a witness");
        return Err(DualityError::NotAlphaDual { state, coalition, set });
    }
    Ok(())
}

/// The categories of one (state, coalition, formula) triple under all four
/// transformations, plus whether they match the expected permutation
/// pattern.
#[derive(Clone, Debug)]
pub struct KleinTable {
    pub state: usize,
    pub coalition: AgentSet,
    pub formula: Formula,
    /// Indexed in [`Transform::ALL`] order: id, neg, comp, both.
    pub categories: [PowerCategory; 4],
    pub pass: bool,
}

impl KleinTable {
    pub fn category(&self, t: Transform) -> PowerCategory {
        let idx = Transform::ALL.iter().position(|&x| x == t).unwrap();
        self.categories[idx]
    }
}

/// Classify a triple under all four transformations and verify the
/// Klein-group permutation pattern. The model must be alpha-dual at the
/// state; the symmetry is conditional on that, so non-dual input is a
/// hard error rather than a warning.
pub fn klein_table_check(
    m: &CoalitionModel,
    state: usize,
    coalition: AgentSet,
    formula: &Formula,
) -> Result<KleinTable, DualityError> {
    require_alpha_dual_at(m, state)?;
    let n = m.num_agents();
    let mut categories = [PowerCategory::Fi; 4];
    for (i, t) in Transform::ALL.iter().enumerate() {
        let (c, f) = apply_transform(*t, coalition, formula, n);
        categories[i] = classify(m, state, c, &f)?;
    }
    let base = categories[0];
    let pass = Transform::ALL
        .iter()
        .enumerate()
        .all(|(i, t)| categories[i] == t.category_action(base));
    Ok(KleinTable {
        state,
        coalition,
        formula: formula.clone(),
        categories,
        pass,
    })
}

/// Failure of the dual equivalence between full inability and the
/// complement's full control on a specific triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalDualityViolation {
    pub state: usize,
    pub coalition: AgentSet,
    pub formula: Formula,
    pub category: PowerCategory,
    pub complement_category: PowerCategory,
}

impl fmt::Display for ConditionalDualityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "state {}: {} is {} on {} while the complement coalition is {}",
            self.state, self.coalition, self.category, self.formula, self.complement_category
        )
    }
}

/// Check `FI_C <=> FC_complement(C)` and `FC_C <=> FI_complement(C)` for
/// every state, coalition, and given formula. Requires an alpha-dual
/// model; the violation list is empty whenever the precondition holds.
pub fn check_conditional_duality(
    m: &CoalitionModel,
    formulas: &[Formula],
) -> Result<Vec<ConditionalDualityViolation>, DualityError> {
    for w in 0..m.num_states() {
        require_alpha_dual_at(m, w)?;
    }
    Ok(check_conditional_duality_unchecked(m, formulas)?)
}

/// The same sweep without the alpha-duality gate, for exhibiting how the
/// equivalence fails on merely playable models.
pub fn check_conditional_duality_unchecked(
    m: &CoalitionModel,
    formulas: &[Formula],
) -> Result<Vec<ConditionalDualityViolation>, EvalError> {
    let mut out = Vec::new();
    for w in 0..m.num_states() {
        for c in m.coalitions() {
            let cbar = c.complement(m.num_agents());
            for f in formulas {
                let cat = classify(m, w, c, f)?;
                let comp = classify(m, w, cbar, f)?;
                let fi_fc = (cat == PowerCategory::Fi) == (comp == PowerCategory::Fc);
                let fc_fi = (cat == PowerCategory::Fc) == (comp == PowerCategory::Fi);
                if !fi_fc || !fc_fi {
                    out.push(ConditionalDualityViolation {
                        state: w,
                        coalition: c,
                        formula: f.clone(),
                        category: cat,
                        complement_category: comp,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// What playability alone allows for the complement coalition: full
/// control forces complementary full inability, one-sided determination
/// rules out the opposing one-sided case, and full inability constrains
/// nothing.
pub fn allowed_complement_categories(cat: PowerCategory) -> &'static [PowerCategory] {
    match cat {
        PowerCategory::Fc => &[PowerCategory::Fi],
        PowerCategory::Pd => &[PowerCategory::Pd, PowerCategory::Fi],
        PowerCategory::Ad => &[PowerCategory::Ad, PowerCategory::Fi],
        PowerCategory::Fi => &PowerCategory::ALL,
    }
}

/// A complement pair falling outside the playability constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplementConstraintViolation {
    pub state: usize,
    pub coalition: AgentSet,
    pub formula: Formula,
    pub category: PowerCategory,
    pub complement_category: PowerCategory,
}

impl fmt::Display for ComplementConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "state {}: {} is {} on {} but the complement coalition is {}, outside the playable envelope",
            self.state, self.coalition, self.category, self.formula, self.complement_category
        )
    }
}

/// Sweep every state, coalition, and formula, checking the complement's
/// category against the playability envelope. Empty on playable models.
pub fn complement_constraints(
    m: &CoalitionModel,
    formulas: &[Formula],
) -> Result<Vec<ComplementConstraintViolation>, EvalError> {
    let mut out = Vec::new();
    for w in 0..m.num_states() {
        for c in m.coalitions() {
            let cbar = c.complement(m.num_agents());
            for f in formulas {
                let cat = classify(m, w, c, f)?;
                let comp = classify(m, w, cbar, f)?;
                if !allowed_complement_categories(cat).contains(&comp) {
                    out.push(ComplementConstraintViolation {
                        state: w,
                        coalition: c,
                        formula: f.clone(),
                        category: cat,
                        complement_category: comp,
                    });
                }
            }
        }
    }
    Ok(out)
}
