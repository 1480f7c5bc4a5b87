//! Definitionally direct reference computations on machine integers.
//!
//! Deliberately slow and independent of `numtheory`: repeated
//! multiplication, linear scans and trial division. Each has a documented
//! input bound and refuses anything larger.

use crate::error::{Error, Result};

pub const NAIVE_MODPOW_MAX_EXPONENT: u64 = 10_000;
pub const CRT_SCAN_MAX_PRODUCT: u64 = 1_000_000;
pub const TRIAL_DIVISION_MAX: u64 = 10_000_000_000;

/// `base^exponent mod modulus` by `exponent` successive multiplications.
pub fn oracle_naive_modpow(base: u64, exponent: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::ZeroModulus);
    }
    if exponent > NAIVE_MODPOW_MAX_EXPONENT {
        return Err(Error::OracleBound(format!(
            "exponent {exponent} > {NAIVE_MODPOW_MAX_EXPONENT}"
        )));
    }
    let m = u128::from(modulus);
    let b = u128::from(base);
    let mut acc = 1 % m;
    for _ in 0..exponent {
        acc = acc * (b % m) % m;
    }
    Ok(acc as u64)
}

/// Smallest `z` in `[0, n1*n2)` with `z ≡ r1 (mod n1)` and `z ≡ r2 (mod n2)`,
/// found by scanning every candidate. `None` if no candidate satisfies both.
pub fn oracle_crt_scan(r1: u64, n1: u64, r2: u64, n2: u64) -> Result<Option<u64>> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::ZeroModulus);
    }
    let product = n1
        .checked_mul(n2)
        .filter(|&p| p <= CRT_SCAN_MAX_PRODUCT)
        .ok_or_else(|| Error::OracleBound(format!("n1*n2 > {CRT_SCAN_MAX_PRODUCT}")))?;
    Ok((0..product).find(|z| z % n1 == r1 && z % n2 == r2))
}

/// Prime factorization with multiplicity, ascending, by division by every
/// integer up to the square root. Returns an empty list for 0 and 1.
pub fn oracle_trial_division(n: u64) -> Result<Vec<u64>> {
    if n > TRIAL_DIVISION_MAX {
        return Err(Error::OracleBound(format!("{n} > {TRIAL_DIVISION_MAX}")));
    }
    let mut factors = Vec::new();
    if n < 2 {
        return Ok(factors);
    }
    let mut rest = n;
    let mut d = 2;
    while d * d <= rest {
        while rest.is_multiple_of(d) {
            factors.push(d);
            rest /= d;
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    Ok(factors)
}

pub fn oracle_is_prime(n: u64) -> Result<bool> {
    Ok(oracle_trial_division(n)? == [n])
}
