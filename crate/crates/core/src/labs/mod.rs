//! Experiment harnesses: a timing comparison against single-modulus RSA, a
//! partial-compromise experiment, and the brute-force reference oracles the
//! test suites check the fast paths against.

mod bench;
mod compromise;
pub mod oracle;

pub use bench::{bench_compare, BenchOp, BenchReport, ClassicalKey, Timing, EFFICIENCY_BAND};
pub use compromise::{
    compromise_exhaustive, compromise_sweep, partial_compromise, CompromiseOutcome, CompromiseReport,
    MessageDistribution, TrialRecord, Verdict, EXHAUSTIVE_SWEEP_LIMIT,
};
pub use oracle::{oracle_crt_scan, oracle_is_prime, oracle_naive_modpow, oracle_trial_division};
