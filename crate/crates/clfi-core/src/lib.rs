//! Coalition logic with an explicit full-inability modality.
//!
//! A coalition's power over an issue is the Boolean pair "can it enforce
//! the issue, can it enforce the complement", yielding four categories:
//! full control, positive determination, adverse determination, and full
//! inability. This crate model-checks the extended language over finite
//! playable effectivity models and verifies the surrounding structure:
//!
//! * [`formula`] — AST, parser, printer, elimination translation, closure
//! * [`model`] — coalition models, playability and duality validators
//! * [`gameform`] — strategic game forms and induced effectivity
//! * [`mcheck`] — truth sets, classification, bilattice orders
//! * [`regions`] — power regions, closure and convexity verification
//! * [`duality`] — Klein-group transformations, conditional duality
//! * [`robustness`] — dummy players, thresholds, k-robustness, profiles
//! * [`explore`] — fixtures, seeded generators, bounded satisfiability

pub mod duality;
pub mod explore;
pub mod formula;
pub mod gameform;
pub mod mcheck;
pub mod model;
pub mod regions;
pub mod robustness;
pub mod sets;

pub use formula::{Formula, ParseError};
pub use gameform::GameForm;
pub use mcheck::{PowerCategory, StrategicValue};
pub use model::{CoalitionModel, EffFamily};
pub use sets::{AgentSet, StateSet};
