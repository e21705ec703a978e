//! Proof checking and finite countermodel search for first-order logic in
//! which self-identity is an assumption rather than a theorem.

pub mod cli;
pub mod corpus;
pub mod kernel;
pub mod search;
pub mod semantics;
pub mod syntax;
