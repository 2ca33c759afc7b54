//! District-based elections: voters are split into districts, each district
//! elects a local winner, and the overall winner is the alternative with the
//! largest total weight of districts won. The crate measures how far such
//! outcomes can be from the welfare optimum (their distortion), evaluates
//! closed-form worst-case bounds, builds instances that attain them, and
//! searches over districtings.

pub mod bounds;
pub mod districting;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod generators;
pub mod io;
pub mod model;
pub mod rules;

pub use engine::{distortion, run_and_measure, run_election, DistortionReport, DistrictElection, ElectionOutcome, Evaluator};
pub use error::{Error, Result};
pub use model::{
    AlternativeId, DistrictPartition, ElectionClass, TieBreakMode, TieBreakOrder, ValuationProfile, WeightVector,
};
pub use rules::{apply_rule, RuleName, VotingRuleSpec};
