//! Adaptive Mamdani fuzzy inference for a tactical air-combat decision score.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the whole learning
//! pipeline:
//!
//! * [`variable`]: linguistic variables whose triangular membership functions
//!   are fully determined by an ordered vector of centers,
//! * [`system`] and [`inference`]: the rule base, operator configuration and
//!   the traced Mamdani inference engine,
//! * [`wang_mendel`]: structure learning from input/output samples,
//! * [`gradient`] and [`genetic`]: two ways of tuning membership centers,
//! * [`domain`]: the four tactical decision factors, a synthetic data
//!   generator and the reference scenarios.
//!
//! IO, file formats, the HTTP service and the CLI live in the `tacdss` crate.
#![no_std]

extern crate alloc;

pub mod domain;
pub mod error;
pub mod genetic;
pub mod gradient;
pub mod inference;
pub mod system;
pub mod variable;
pub mod wang_mendel;

pub use error::{Error, Result};
pub use inference::{fuzzify, infer, rmse, InferenceTrace, TrainingSample};
pub use system::{
    Aggregation, Defuzzifier, FuzzyRule, FuzzySystem, Implication, InferenceConfig, TNorm,
    WeightMode,
};
pub use variable::LinguisticVariable;
