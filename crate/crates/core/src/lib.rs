//! Bribery in elections: winner rules, exact solvers for the tractable cases, hardness reductions,
//! integer-program formulations, and an exhaustive oracle that checks all of them.
//!
//! Everything is generic over an exact integer type; [`BigElection`] and friends fix it to
//! [`num_bigint::BigInt`], the `*64` aliases to `i64`.

pub mod bribery;
pub mod crosscheck;
pub mod election;
pub mod error;
pub mod format;
pub mod ilp;
pub mod knapsack;
pub mod oracle;
pub mod reductions;
pub mod scalar;
pub mod solver;

pub use bribery::{BribeAction, BriberyQuery, BriberyWitness, Encoding, Outcome, Variant};
pub use election::{ApprovalVector, Ballot, Election, PreferenceOrder, Rule, ScoringProtocol, VoterBlock};
pub use error::{Error, Result};
pub use scalar::Int;

use num_bigint::BigInt;

pub type BigElection = Election<BigInt>;
pub type BigQuery = BriberyQuery<BigInt>;
pub type BigWitness = BriberyWitness<BigInt>;
pub type BigRule = Rule<BigInt>;

pub type Election64 = Election<i64>;
pub type Query64 = BriberyQuery<i64>;
pub type Witness64 = BriberyWitness<i64>;
pub type Rule64 = Rule<i64>;
