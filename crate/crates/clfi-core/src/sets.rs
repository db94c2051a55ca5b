//! Fixed-width bit-vector sets for agents and states.
//!
//! [`AgentSet`] packs a coalition into a `u16` (agent indices `0..N-1`,
//! `N <= 16`); [`StateSet`] packs an outcome set into a `u32` (state indices
//! `0..|W|-1`, `|W| <= 32`). Complements are always taken relative to a
//! declared universe size, never the full machine word.

use std::fmt;

/// Hard limit on the number of agents a coalition can index.
pub const MAX_AGENTS: usize = 16;
/// Hard limit on the number of states an outcome set can index.
pub const MAX_STATES: usize = 32;

/// A coalition: a subset of the agent indices `0..num_agents`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentSet(u16);

/// An outcome set: a subset of the state indices `0..num_states`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(u32);

macro_rules! bitset_impl {
    ($name:ident, $repr:ty, $max:expr) => {
        impl $name {
            /// The empty set.
            pub const EMPTY: Self = Self(0);

            /// Set holding exactly the given index.
            pub fn singleton(i: usize) -> Self {
                debug_assert!(i < $max);
                Self(1 << i)
            }

            /// Full set over a universe of size `n`.
            pub fn full(n: usize) -> Self {
                debug_assert!(n <= $max);
                if n == 0 {
                    Self(0)
                } else {
                    Self((!0 as $repr) >> ($max - n))
                }
            }

            /// Build from raw bits.
            pub fn from_bits(bits: $repr) -> Self {
                Self(bits)
            }

            /// Raw bit representation; doubles as the set's rank in the
            /// lexicographic sweep order used by the checkers.
            pub fn bits(self) -> $repr {
                self.0
            }

            /// Build from explicit indices; duplicates collapse.
            pub fn from_indices(indices: &[usize]) -> Self {
                let mut bits: $repr = 0;
                for &i in indices {
                    debug_assert!(i < $max);
                    bits |= 1 << i;
                }
                Self(bits)
            }

            pub fn contains(self, i: usize) -> bool {
                i < $max && self.0 & (1 << i) != 0
            }

            pub fn insert(self, i: usize) -> Self {
                debug_assert!(i < $max);
                Self(self.0 | (1 << i))
            }

            pub fn remove(self, i: usize) -> Self {
                Self(self.0 & !(1 << i))
            }

            pub fn union(self, other: Self) -> Self {
                Self(self.0 | other.0)
            }

            pub fn intersection(self, other: Self) -> Self {
                Self(self.0 & other.0)
            }

            pub fn difference(self, other: Self) -> Self {
                Self(self.0 & !other.0)
            }

            /// Complement relative to a universe of size `n`.
            pub fn complement(self, n: usize) -> Self {
                Self(!self.0 & Self::full(n).0)
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn is_subset_of(self, other: Self) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn is_disjoint(self, other: Self) -> bool {
                self.0 & other.0 == 0
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            /// Member indices in ascending order.
            pub fn iter(self) -> impl Iterator<Item = usize> {
                (0..$max).filter(move |&i| self.0 & (1 << i) != 0)
            }

            /// All subsets of a universe of size `n`, in ascending bit-value
            /// order (the canonical sweep order).
            pub fn all_subsets(n: usize) -> impl Iterator<Item = Self> {
                debug_assert!(n <= $max);
                (0..=Self::full(n).0 as u64).map(|b| Self(b as $repr))
            }

            /// Member indices as a vector (ascending); the JSON wire form.
            pub fn to_indices(self) -> Vec<usize> {
                self.iter().collect()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{{")?;
                for (k, i) in self.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", i)?;
                }
                write!(f, "}}")
            }
        }
    };
}

bitset_impl!(AgentSet, u16, MAX_AGENTS);
bitset_impl!(StateSet, u32, MAX_STATES);

impl AgentSet {
    /// All subsets of `self`, ascending by bit value. Used for coalition
    /// sweeps restricted to a base coalition.
    pub fn subsets(self) -> impl Iterator<Item = AgentSet> {
        let bits = self.0;
        // Standard submask enumeration, emitted in ascending order.
        let mut masks: Vec<u16> = Vec::with_capacity(1 << bits.count_ones());
        let mut sub = 0u16;
        loop {
            masks.push(sub);
            if sub == bits {
                break;
            }
            sub = (sub.wrapping_sub(bits)) & bits;
        }
        masks.into_iter().map(AgentSet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_relative_to_universe() {
        let c = AgentSet::from_indices(&[0]);
        assert_eq!(c.complement(2), AgentSet::from_indices(&[1]));
        assert_eq!(c.complement(3), AgentSet::from_indices(&[1, 2]));
        assert_eq!(AgentSet::EMPTY.complement(0), AgentSet::EMPTY);
    }

    #[test]
    fn full_and_subset_relations() {
        let w = StateSet::full(3);
        assert_eq!(w.len(), 3);
        assert!(StateSet::from_indices(&[0, 2]).is_subset_of(w));
        assert!(!w.is_subset_of(StateSet::from_indices(&[0, 2])));
        assert!(StateSet::EMPTY.is_subset_of(StateSet::EMPTY));
    }

    #[test]
    fn all_subsets_counts_and_order() {
        let subs: Vec<StateSet> = StateSet::all_subsets(3).collect();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs[0], StateSet::EMPTY);
        assert_eq!(subs[7], StateSet::full(3));
        // ascending bit order is the documented witness order
        assert!(subs.windows(2).all(|p| p[0].bits() < p[1].bits()));
    }

    #[test]
    fn submask_enumeration() {
        let c = AgentSet::from_indices(&[0, 2]);
        let subs: Vec<AgentSet> = c.subsets().collect();
        assert_eq!(
            subs,
            vec![
                AgentSet::EMPTY,
                AgentSet::from_indices(&[0]),
                AgentSet::from_indices(&[2]),
                AgentSet::from_indices(&[0, 2]),
            ]
        );
    }

    #[test]
    fn display_braces() {
        assert_eq!(AgentSet::from_indices(&[1, 3]).to_string(), "{1,3}");
        assert_eq!(StateSet::EMPTY.to_string(), "{}");
    }

    #[test]
    fn zero_width_universe() {
        assert_eq!(StateSet::full(0), StateSet::EMPTY);
        assert_eq!(StateSet::all_subsets(0).count(), 1);
    }
}
