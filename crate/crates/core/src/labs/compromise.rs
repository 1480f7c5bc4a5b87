//! Partial-compromise experiment.
//!
//! The attacker knows the public key, one ciphertext, and the factorization
//! of one modulus. From those factors it derives that modulus's private
//! exponent and recovers `z mod N_leaked`. The recovery is complete exactly
//! when `z < N_leaked`; otherwise only the residue leaks.

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::keys::{ModulusId, PrivateKey};
use crate::numtheory::{mod_inverse, mod_pow, Natural, RandomSource};
use crate::scheme::{decrypt, encrypt, Ciphertext};

/// Largest `N1*N2` for which `compromise_exhaustive` will enumerate.
pub const EXHAUSTIVE_SWEEP_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The leaked residue equals the plaintext.
    Full,
    /// Only `z mod N_leaked` was learned.
    Partial,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Full => "full",
            Verdict::Partial => "partial",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompromiseOutcome {
    pub leaked: ModulusId,
    pub residue: Natural,
    pub verdict: Verdict,
}

/// Runs the attack on one ciphertext with the factors of `leaked` exposed.
///
/// The private key supplies the leaked factors to the attacker and the true
/// plaintext to the judge; the attacker never touches the other modulus.
pub fn partial_compromise(private: &PrivateKey, c: &Ciphertext, leaked: ModulusId) -> Result<CompromiseOutcome> {
    let (p, q) = private.factors(leaked);
    let modulus = p * q;
    let phi = (p - 1u8) * (q - 1u8);
    let d = mod_inverse(&private.k, &phi)?;
    let w = c.component(leaked);
    if w >= &modulus {
        return Err(Error::CiphertextOutOfRange { which: leaked });
    }
    let residue = mod_pow(w, &d, &modulus)?;

    let truth = decrypt(private, c)?;
    let verdict = if residue == truth { Verdict::Full } else { Verdict::Partial };
    Ok(CompromiseOutcome {
        leaked,
        residue,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MessageDistribution {
    /// `z` uniform in `[0, N1*N2)`.
    UniformFullRange,
    /// `z` uniform in `[0, min(N1, N2))`.
    BelowMinModulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub below_leaked: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompromiseReport {
    pub leaked: ModulusId,
    pub leaked_modulus: Natural,
    pub message_bound: Natural,
    pub trials: u64,
    pub full: u64,
    pub partial: u64,
    pub records: Vec<TrialRecord>,
}

impl CompromiseReport {
    fn new(private: &PrivateKey, leaked: ModulusId) -> Self {
        Self {
            leaked,
            leaked_modulus: private.modulus(leaked).clone(),
            message_bound: &private.n1 * &private.n2,
            trials: 0,
            full: 0,
            partial: 0,
            records: Vec::new(),
        }
    }

    fn record(&mut self, z: &Natural, outcome: &CompromiseOutcome) {
        self.trials += 1;
        match outcome.verdict {
            Verdict::Full => self.full += 1,
            Verdict::Partial => self.partial += 1,
        }
        self.records.push(TrialRecord {
            below_leaked: z < &self.leaked_modulus,
            verdict: outcome.verdict,
        });
    }

    pub fn full_fraction(&self) -> f64 {
        self.full as f64 / self.trials as f64
    }

    /// The full-recovery probability a single trial has under `distribution`.
    pub fn expected_full_fraction(&self, distribution: MessageDistribution) -> f64 {
        match distribution {
            MessageDistribution::BelowMinModulus => 1.0,
            MessageDistribution::UniformFullRange => ratio(&self.leaked_modulus, &self.message_bound),
        }
    }

    /// True when every verdict agrees with the `z < N_leaked` predicate.
    pub fn verdicts_match_bound(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.below_leaked == (r.verdict == Verdict::Full))
    }
}

fn ratio(a: &Natural, b: &Natural) -> f64 {
    // shift both down so the quotient survives conversion to f64
    let shift = b.bits().saturating_sub(64);
    let a = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    let b = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
    a / b
}

impl fmt::Display for CompromiseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "leaked modulus: {} = {}", self.leaked, self.leaked_modulus)?;
        writeln!(f, "trials:         {}", self.trials)?;
        writeln!(f, "full recovery:  {}", self.full)?;
        writeln!(f, "residue only:   {}", self.partial)?;
        write!(f, "full fraction:  {:.6}", self.full_fraction())
    }
}

/// Aggregates `partial_compromise` over `trials` sampled messages.
pub fn compromise_sweep(
    private: &PrivateKey,
    leaked: ModulusId,
    trials: u64,
    distribution: MessageDistribution,
    rng: &mut RandomSource,
) -> Result<CompromiseReport> {
    if trials == 0 {
        return Err(Error::InvalidParams("sweep needs at least one trial".into()));
    }
    let public = private.public_key();
    let bound = match distribution {
        MessageDistribution::UniformFullRange => public.message_bound(),
        MessageDistribution::BelowMinModulus => public.n1.clone().min(public.n2.clone()),
    };
    let mut report = CompromiseReport::new(private, leaked);
    for _ in 0..trials {
        let z = rng.below(&bound);
        let c = encrypt(&public, &z)?;
        report.record(&z, &partial_compromise(private, &c, leaked)?);
    }
    Ok(report)
}

/// Runs the attack on every `z` in `[0, N1*N2)`.
pub fn compromise_exhaustive(private: &PrivateKey, leaked: ModulusId) -> Result<CompromiseReport> {
    let public = private.public_key();
    let bound = public
        .message_bound()
        .to_u64()
        .filter(|&b| b <= EXHAUSTIVE_SWEEP_LIMIT)
        .ok_or_else(|| Error::OracleBound(format!("N1*N2 > {EXHAUSTIVE_SWEEP_LIMIT}")))?;
    let mut report = CompromiseReport::new(private, leaked);
    for z in 0..bound {
        let z = Natural::from(z);
        let c = encrypt(&public, &z)?;
        report.record(&z, &partial_compromise(private, &c, leaked)?);
    }
    Ok(report)
}
