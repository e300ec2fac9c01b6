//! Exact solutions of the octahedron recurrence (T-system) with principal
//! coefficients, computed five independent ways, plus coefficient
//! specializations.

pub mod laurent;
pub mod surface;
pub mod oracle;
pub mod graph;
pub mod matching;
pub mod path;
pub mod network;
pub mod specialize;
pub mod solve;
pub mod suite;
