//! Lattice analysis of the four power regions.
//!
//! For a fixed state and coalition, every outcome set gets a strategic
//! value; the four fibers of that labelling partition the powerset into
//! the full-control, positive-determination, adverse-determination and
//! full-inability regions. The enforceable region is upward closed and the
//! co-enforceable region downward closed, which makes every fiber
//! order-convex on playable models.
//!
//! Convexity is certified through directionality-monotonicity along
//! covering pairs; the exhaustive chain enumerator is retained as a
//! small-instance oracle.

use std::fmt;

use crate::mcheck::{strategic_value, EvalError, PowerCategory, StrategicValue};
use crate::model::{CoalitionModel, EffFamily};
use crate::sets::{AgentSet, StateSet};

/// Full-powerset region sweeps refuse models beyond this many states.
pub const REGION_STATE_LIMIT: usize = 16;

/// A downward-closed family of outcome sets represented by the antichain
/// of its maximal members: `x` belongs iff `x` is contained in some
/// maximal set. Dual to [`EffFamily`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoEffFamily {
    maximal: Vec<StateSet>,
}

impl CoEffFamily {
    pub fn contains(&self, x: StateSet) -> bool {
        self.maximal.iter().any(|m| x.is_subset_of(*m))
    }

    /// The maximal antichain, sorted by bit value.
    pub fn maximal(&self) -> &[StateSet] {
        &self.maximal
    }
}

/// The co-effectivity of a family: the sets whose complements are
/// enforceable. Its maximal members are the complements of the minimal
/// enforceable sets, pruned to an antichain.
pub fn co_effectivity(fam: &EffFamily, num_states: usize) -> CoEffFamily {
    let mut candidates: Vec<StateSet> = fam
        .minimal()
        .iter()
        .map(|m| m.complement(num_states))
        .collect();
    candidates.sort_by_key(|s| (std::cmp::Reverse(s.len()), s.bits()));
    let mut maximal: Vec<StateSet> = Vec::new();
    for s in candidates {
        if !maximal.iter().any(|m| s.is_subset_of(*m)) {
            maximal.push(s);
        }
    }
    maximal.sort_by_key(|s| s.bits());
    CoEffFamily { maximal }
}

/// Closure verdicts for a label array: the enforce bit must be upward
/// closed and the refute bit downward closed along set inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureVerdict {
    pub enforce_upward: bool,
    pub refute_downward: bool,
}

impl ClosureVerdict {
    pub fn holds(self) -> bool {
        self.enforce_upward && self.refute_downward
    }
}

/// Convexity verdicts: one flag per region, plus whether the label array
/// is directionality-monotone along every covering pair (the certificate
/// that implies all four at once).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityVerdict {
    /// Indexed by [`PowerCategory::index`]: FC, PD, AD, FI.
    pub per_region: [bool; 4],
    pub covering_monotone: bool,
}

impl ConvexityVerdict {
    pub fn all_convex(self) -> bool {
        self.per_region.iter().all(|&b| b)
    }

    pub fn region(self, cat: PowerCategory) -> bool {
        self.per_region[cat.index()]
    }
}

/// The complete strategic labelling of the powerset for one state and
/// coalition: a flat array of values indexed by subset bit value.
#[derive(Clone, Debug)]
pub struct RegionReport {
    state: usize,
    coalition: AgentSet,
    num_states: usize,
    labels: Vec<StrategicValue>,
    closure: ClosureVerdict,
    convexity: ConvexityVerdict,
}

impl RegionReport {
    pub fn state(&self) -> usize {
        self.state
    }

    pub fn coalition(&self) -> AgentSet {
        self.coalition
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn label(&self, x: StateSet) -> StrategicValue {
        self.labels[x.bits() as usize]
    }

    pub fn closure(&self) -> ClosureVerdict {
        self.closure
    }

    pub fn convexity(&self) -> ConvexityVerdict {
        self.convexity
    }

    /// Region sizes in FC, PD, AD, FI order; they always sum to `2^|W|`.
    pub fn counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for v in &self.labels {
            counts[v.category().index()] += 1;
        }
        counts
    }

    /// Every outcome set labelled with the given category, ascending by
    /// bit value.
    pub fn members(&self, cat: PowerCategory) -> Vec<StateSet> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i].category() == cat)
            .map(|i| StateSet::from_bits(i as u32))
            .collect()
    }

    /// Inclusion-minimal members of a region.
    pub fn minimal_members(&self, cat: PowerCategory) -> Vec<StateSet> {
        let members = self.members(cat);
        members
            .iter()
            .copied()
            .filter(|&x| !members.iter().any(|&y| y != x && y.is_subset_of(x)))
            .collect()
    }

    /// Inclusion-maximal members of a region.
    pub fn maximal_members(&self, cat: PowerCategory) -> Vec<StateSet> {
        let members = self.members(cat);
        members
            .iter()
            .copied()
            .filter(|&x| !members.iter().any(|&y| y != x && x.is_subset_of(y)))
            .collect()
    }

    fn from_labels(state: usize, coalition: AgentSet, num_states: usize, labels: Vec<StrategicValue>) -> Self {
        debug_assert_eq!(labels.len(), 1 << num_states);
        let mut report = RegionReport {
            state,
            coalition,
            num_states,
            labels,
            closure: ClosureVerdict { enforce_upward: true, refute_downward: true },
            convexity: ConvexityVerdict { per_region: [true; 4], covering_monotone: true },
        };
        report.closure = closure_of_labels(&report);
        report.convexity = verify_convexity(&report);
        report
    }
}

impl fmt::Display for RegionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts = self.counts();
        write!(
            f,
            "state {} coalition {}: FC={} PD={} AD={} FI={}",
            self.state, self.coalition, counts[0], counts[1], counts[2], counts[3]
        )
    }
}

/// Label every outcome set at `(state, coalition)` with its strategic
/// value and record closure and convexity verdicts.
pub fn power_regions(
    m: &CoalitionModel,
    state: usize,
    coalition: AgentSet,
) -> Result<RegionReport, EvalError> {
    if m.num_states() > REGION_STATE_LIMIT {
        return Err(EvalError::SweepTooLarge {
            what: "power region",
            got: m.num_states(),
            unit: "states",
            limit: REGION_STATE_LIMIT,
        });
    }
    let labels = StateSet::all_subsets(m.num_states())
        .map(|x| strategic_value(m, state, coalition, x))
        .collect();
    Ok(RegionReport::from_labels(state, coalition, m.num_states(), labels))
}

fn closure_of_labels(report: &RegionReport) -> ClosureVerdict {
    let n = report.num_states;
    let mut enforce_upward = true;
    let mut refute_downward = true;
    for x in StateSet::all_subsets(n) {
        let here = report.label(x);
        for u in 0..n {
            if !x.contains(u) {
                let above = report.label(x.insert(u));
                if here.enforce && !above.enforce {
                    enforce_upward = false;
                }
                if above.refute && !here.refute {
                    refute_downward = false;
                }
            }
        }
    }
    ClosureVerdict { enforce_upward, refute_downward }
}

/// Confirm upward closure of the enforce bit and downward closure of the
/// refute bit over all single-element extensions.
pub fn verify_closure(report: &RegionReport) -> bool {
    closure_of_labels(report).holds()
}

fn covering_monotone(report: &RegionReport) -> bool {
    let n = report.num_states;
    for x in StateSet::all_subsets(n) {
        let here = report.label(x);
        for u in 0..n {
            if !x.contains(u) && !here.leq_t(report.label(x.insert(u))) {
                return false;
            }
        }
    }
    true
}

/// Exact order-convexity of one fiber: no outside point may have both a
/// member below and a member above it. Linear-time in the label array via
/// subset/superset reachability.
fn region_convex(report: &RegionReport, cat: PowerCategory) -> bool {
    let n = report.num_states;
    let size = 1usize << n;
    let member: Vec<bool> = (0..size)
        .map(|i| report.labels[i].category() == cat)
        .collect();
    // below[x]: some member is a subset of x
    let mut below = member.clone();
    for bits in 0..size {
        if !below[bits] {
            let x = StateSet::from_bits(bits as u32);
            below[bits] = x.iter().any(|u| below[x.remove(u).bits() as usize]);
        }
    }
    // above[x]: some member is a superset of x
    let mut above = member.clone();
    for bits in (0..size).rev() {
        if !above[bits] {
            let x = StateSet::from_bits(bits as u32);
            above[bits] = (0..n).any(|u| !x.contains(u) && above[x.insert(u).bits() as usize]);
        }
    }
    (0..size).all(|i| member[i] || !(below[i] && above[i]))
}

/// Per-region convexity. The primary certificate is covering-pair
/// directionality-monotonicity, which implies all four fibers convex; when
/// it fails, each region is decided exactly.
pub fn verify_convexity(report: &RegionReport) -> ConvexityVerdict {
    let covering = covering_monotone(report);
    let per_region = if covering {
        [true; 4]
    } else {
        let mut out = [true; 4];
        for cat in PowerCategory::ALL {
            out[cat.index()] = region_convex(report, cat);
        }
        out
    };
    ConvexityVerdict { per_region, covering_monotone: covering }
}

/// Exhaustive convexity oracle: enumerate every chain `X` in `Y` in `Z` and
/// demand that matching endpoint labels force the midpoint label. Costs
/// `4^|W|`; intended for small instances.
pub fn convexity_by_chains(report: &RegionReport) -> [bool; 4] {
    let n = report.num_states;
    let mut ok = [true; 4];
    for z in StateSet::all_subsets(n) {
        // submask enumeration of x within z
        let zb = z.bits();
        let mut xb = zb;
        loop {
            let x = StateSet::from_bits(xb);
            let cx = report.label(x).category();
            if cx == report.label(z).category() {
                // midpoints: x union s for s within z \ x
                let diff = z.difference(x).bits();
                let mut sb = diff;
                loop {
                    let y = x.union(StateSet::from_bits(sb));
                    if report.label(y).category() != cx {
                        ok[cx.index()] = false;
                    }
                    if sb == 0 {
                        break;
                    }
                    sb = (sb - 1) & diff;
                }
            }
            if xb == 0 {
                break;
            }
            xb = (xb - 1) & zb;
        }
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{fixture, FixtureKind};
    use crate::formula::Formula;
    use crate::mcheck::{classify, satisfies, truth_set};

    fn ss(indices: &[usize]) -> StateSet {
        StateSet::from_indices(indices)
    }

    fn ag(indices: &[usize]) -> AgentSet {
        AgentSet::from_indices(indices)
    }

    #[test]
    fn co_effectivity_examples() {
        // W = {pass, fail}: enforcing fail means co-enforcing pass
        let fam = EffFamily::from_minimal([ss(&[1])]);
        assert_eq!(co_effectivity(&fam, 2).maximal(), &[ss(&[0])]);

        let fam = EffFamily::from_minimal([StateSet::full(2)]);
        assert_eq!(co_effectivity(&fam, 2).maximal(), &[StateSet::EMPTY]);

        let fam = EffFamily::from_minimal([ss(&[0]), ss(&[1])]);
        assert_eq!(co_effectivity(&fam, 2).maximal(), &[ss(&[0]), ss(&[1])]);
    }

    #[test]
    fn co_effectivity_agrees_with_membership_sweep() {
        let fam = EffFamily::from_minimal([ss(&[0, 1]), ss(&[2])]);
        let co = co_effectivity(&fam, 3);
        for x in StateSet::all_subsets(3) {
            assert_eq!(co.contains(x), fam.contains(x.complement(3)));
        }
    }

    #[test]
    fn matching_pennies_regions() {
        let m = fixture(FixtureKind::MatchingPennies).model;
        let report = power_regions(&m, 0, ag(&[1])).unwrap();
        assert_eq!(report.counts(), [0, 1, 1, 2]);
        assert_eq!(report.members(PowerCategory::Fc), vec![]);
        assert_eq!(report.members(PowerCategory::Pd), vec![StateSet::full(2)]);
        assert_eq!(report.members(PowerCategory::Ad), vec![StateSet::EMPTY]);
        assert_eq!(report.members(PowerCategory::Fi), vec![ss(&[0]), ss(&[1])]);
        assert!(report.convexity().all_convex());
        assert!(verify_closure(&report));
    }

    #[test]
    fn dictator_regions() {
        let m = fixture(FixtureKind::Dictator).model;
        let report = power_regions(&m, 0, ag(&[0])).unwrap();
        assert_eq!(report.members(PowerCategory::Fc), vec![ss(&[0]), ss(&[1])]);
        assert_eq!(report.members(PowerCategory::Pd), vec![StateSet::full(2)]);
        assert_eq!(report.members(PowerCategory::Ad), vec![StateSet::EMPTY]);
        assert_eq!(report.members(PowerCategory::Fi), vec![]);
    }

    #[test]
    fn extremes_are_forced_on_playable_models() {
        for kind in FixtureKind::ALL {
            let m = fixture(kind).model;
            for w in 0..m.num_states() {
                for c in m.coalitions() {
                    let report = power_regions(&m, w, c).unwrap();
                    let empty = report.label(StateSet::EMPTY).category();
                    assert!(matches!(empty, PowerCategory::Ad | PowerCategory::Fi));
                    let full = report.label(m.all_states()).category();
                    assert!(matches!(full, PowerCategory::Pd | PowerCategory::Fc));
                    let counts = report.counts();
                    assert_eq!(counts.iter().sum::<usize>(), 1 << m.num_states());
                }
            }
        }
    }

    #[test]
    fn closure_on_fixtures_and_degenerate_model() {
        for kind in [FixtureKind::MatchingPennies, FixtureKind::Dictator, FixtureKind::Veto] {
            let m = fixture(kind).model;
            let report = power_regions(&m, 0, ag(&[0])).unwrap();
            assert!(verify_closure(&report));
        }
        let labels = vec![StrategicValue { enforce: true, refute: false }; 2];
        let degenerate = RegionReport::from_labels(0, AgentSet::EMPTY, 1, labels);
        assert!(verify_closure(&degenerate));
    }

    #[test]
    fn corrupted_label_breaks_closure() {
        let m = fixture(FixtureKind::MatchingPennies).model;
        let mut report = power_regions(&m, 0, ag(&[1])).unwrap();
        // flip the enforce bit of the empty set on: nothing above it has it
        report.labels[StateSet::EMPTY.bits() as usize].enforce = true;
        assert!(!verify_closure(&report));
    }

    #[test]
    fn adversarial_labels_fail_convexity() {
        // over one chain: {} -> FI, {0} -> PD, {0,1} -> FI
        let fi = StrategicValue { enforce: false, refute: false };
        let pd = StrategicValue { enforce: true, refute: false };
        let labels = vec![fi, pd, fi, fi];
        let report = RegionReport::from_labels(0, AgentSet::EMPTY, 2, labels);
        let verdict = verify_convexity(&report);
        assert!(!verdict.covering_monotone);
        assert!(!verdict.region(PowerCategory::Fi));
        let chains = convexity_by_chains(&report);
        assert_eq!(verdict.per_region, chains);
    }

    #[test]
    fn chain_oracle_agrees_on_fixtures() {
        for kind in FixtureKind::ALL {
            let m = fixture(kind).model;
            for w in 0..m.num_states() {
                for c in m.coalitions() {
                    let report = power_regions(&m, w, c).unwrap();
                    assert_eq!(report.convexity().per_region, convexity_by_chains(&report));
                }
            }
        }
    }

    #[test]
    fn formula_categories_agree_with_region_membership() {
        let m = fixture(FixtureKind::Veto).model;
        let pass = Formula::atom("pass");
        let formulas = [pass.clone(), Formula::not(pass)];
        for w in 0..m.num_states() {
            for c in m.coalitions() {
                let report = power_regions(&m, w, c).unwrap();
                for f in &formulas {
                    let ts = truth_set(&m, f).unwrap();
                    let cat = classify(&m, w, c, f).unwrap();
                    assert_eq!(report.label(ts).category(), cat);
                    // and the formula-level phrasing of full control
                    let fc_formula = Formula::and(
                        Formula::eff(c, f.clone()),
                        Formula::eff(c, Formula::not(f.clone())),
                    );
                    assert_eq!(
                        satisfies(&m, w, &fc_formula).unwrap(),
                        cat == PowerCategory::Fc
                    );
                }
            }
        }
    }
}
