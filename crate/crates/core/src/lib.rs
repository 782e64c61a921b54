//! Quadratic forms in characteristic 2 over F_{2^e}((t1))...((tn)).

pub mod chow;
pub mod clifford;
pub mod corpus;
pub mod dsl;
pub mod fieldtower;
pub mod forms;
pub mod linalg;
pub mod pfister;
pub mod witt;
