//! Support code for the acceptance suite: a seeded generator of valid random
//! models and deltas, and a brute-force oracle that recomputes coverage
//! straight from model data without the traceability graph.

pub mod gen;
pub mod oracle;
