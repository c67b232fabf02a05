//! Seeded instance generation, brute-force oracles and the property suites
//! that exercise the structural results on them.

pub mod generate;
pub mod oracle;
pub mod shrink;
pub mod suite;

pub use generate::{gen_pfms, gen_pfms_on, GeneratorConfig};
pub use oracle::{oracle_convexity, oracle_convexity_with, oracle_hull};
pub use shrink::shrink;
pub use suite::{
    replay, run_suite, run_suite_with, Counterexample, Suite, SuiteParams, SuiteResult,
};
