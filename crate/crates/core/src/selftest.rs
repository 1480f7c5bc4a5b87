//! End-to-end check of the published worked example.
//!
//! Primes (53, 97, 61, 89) with k = 7 encrypt z = 65. The published vector
//! lists the first ciphertext component as 2979, but 65^7 mod 5141 = 787
//! (repeated multiplication and square-and-multiply agree, and
//! 2979^4279 mod 5141 = 2211, not 65). The selftest asserts 787 and reports
//! the disagreement with the published figure.

use std::fmt;

use crate::keys::{derive_private, public_of, PrivateKey};
use crate::labs::oracle_naive_modpow;
use crate::numtheory::Natural;
use crate::scheme::{decrypt, encrypt};

pub const EXAMPLE_PRIMES: [u32; 4] = [53, 97, 61, 89];
pub const EXAMPLE_EXPONENT: u32 = 7;
pub const EXAMPLE_MESSAGE: u32 = 65;
pub const EXAMPLE_D1: u32 = 4279;
pub const EXAMPLE_D2: u32 = 2263;
pub const EXAMPLE_W2: u32 = 3757;
/// `65^7 mod 5141`, reconciled against the repeated-multiplication oracle.
pub const EXAMPLE_W1: u32 = 787;
/// First ciphertext component as it appears in the published example.
pub const EXAMPLE_W1_AS_PUBLISHED: u32 = 2979;

pub fn example_private_key() -> PrivateKey {
    let [p1, q1, p2, q2] = EXAMPLE_PRIMES.map(Natural::from);
    derive_private(&p1, &q1, &p2, &q2, &Natural::from(EXAMPLE_EXPONENT))
        .expect("example primes are distinct and k = 7 is invertible")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn new(name: &'static str, expected: impl ToString, actual: impl ToString) -> Self {
        Self {
            name,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    /// Whether the computed w1 equals the published 2979.
    pub w1_matches_published: bool,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            let status = if check.passed() { "ok  " } else { "FAIL" };
            writeln!(f, "{status} {} = {} (expected {})", check.name, check.actual, check.expected)?;
        }
        if self.w1_matches_published {
            writeln!(f, "note: w1 agrees with the published value {EXAMPLE_W1_AS_PUBLISHED}")?;
        } else {
            writeln!(
                f,
                "note: w1 disagrees with the published value {EXAMPLE_W1_AS_PUBLISHED}; \
                 65^7 mod 5141 = {EXAMPLE_W1} by direct computation, so the published figure is treated as an erratum"
            )?;
        }
        write!(f, "{}", if self.passed() { "selftest passed" } else { "selftest FAILED" })
    }
}

/// Rebuilds the example key and message and checks every derived quantity.
pub fn run_selftest() -> SelftestReport {
    let private = example_private_key();
    let public = public_of(&private);
    let z = Natural::from(EXAMPLE_MESSAGE);
    let mut checks = vec![
        Check::new("N1", 5141, &private.n1),
        Check::new("phi1", 4992, &private.phi1),
        Check::new("N2", 5429, &private.n2),
        Check::new("phi2", 5280, &private.phi2),
        Check::new("d1", EXAMPLE_D1, &private.d1),
        Check::new("d2", EXAMPLE_D2, &private.d2),
    ];

    let oracle_w1 = oracle_naive_modpow(u64::from(EXAMPLE_MESSAGE), u64::from(EXAMPLE_EXPONENT), 5141)
        .expect("within oracle bounds");
    checks.push(Check::new("w1 (oracle)", EXAMPLE_W1, oracle_w1));

    let mut w1_matches_published = false;
    match encrypt(&public, &z) {
        Ok(c) => {
            w1_matches_published = c.w1 == Natural::from(EXAMPLE_W1_AS_PUBLISHED);
            checks.push(Check::new("w1", EXAMPLE_W1, &c.w1));
            checks.push(Check::new("w2", EXAMPLE_W2, &c.w2));
            let recovered = decrypt(&private, &c).map_or_else(|e| e.to_string(), |m| m.to_string());
            checks.push(Check::new("decrypt(encrypt(65))", EXAMPLE_MESSAGE, recovered));
        }
        Err(e) => checks.push(Check::new("encrypt(65)", "ciphertext", e)),
    }
    SelftestReport {
        checks,
        w1_matches_published,
    }
}
