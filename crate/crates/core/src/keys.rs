//! Key generation, derivation and validation.
//!
//! Four pairwise-distinct primes give two moduli `N1 = p1*q1`, `N2 = p2*q2`.
//! A single public exponent `k` must be invertible modulo both totients; the
//! private exponents are `d_i = k^-1 mod φ(N_i)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{gcd, gen_prime, is_probable_prime, mod_inverse, Natural, RandomSource, DEFAULT_MR_ROUNDS};

pub const DEFAULT_PUBLIC_EXPONENT: u32 = 65537;

/// Prime-pair draws allowed per modulus before `generate_keypair` gives up.
pub const MAX_KEYGEN_ATTEMPTS: u32 = 1000;

const VALIDATION_SEED: &[u8] = b"dmrsa key validation";

/// Selects one of the two moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModulusId {
    N1,
    N2,
}

impl ModulusId {
    pub const BOTH: [ModulusId; 2] = [ModulusId::N1, ModulusId::N2];

    pub fn index(self) -> u8 {
        match self {
            ModulusId::N1 => 1,
            ModulusId::N2 => 2,
        }
    }
}

impl fmt::Display for ModulusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N{}", self.index())
    }
}

impl FromStr for ModulusId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n1" | "1" => Ok(ModulusId::N1),
            "n2" | "2" => Ok(ModulusId::N2),
            other => Err(Error::InvalidParams(format!("unknown modulus `{other}` (expected n1 or n2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyGenParams {
    /// Bit length of each of p1 and q1.
    pub bits1: u64,
    /// Bit length of each of p2 and q2.
    pub bits2: u64,
    pub k: Natural,
    pub seed: Option<Vec<u8>>,
}

impl Default for KeyGenParams {
    fn default() -> Self {
        Self {
            bits1: 512,
            bits2: 512,
            k: Natural::from(DEFAULT_PUBLIC_EXPONENT),
            seed: None,
        }
    }
}

impl KeyGenParams {
    pub fn new(bits1: u64, bits2: u64, k: Natural) -> Self {
        Self {
            bits1,
            bits2,
            k,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: impl Into<Vec<u8>>) -> Self {
        self.seed = Some(seed.into());
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.bits1 < 4 || self.bits2 < 4 {
            return Err(Error::InvalidParams(format!(
                "prime bit lengths must be at least 4 (got {} and {})",
                self.bits1, self.bits2
            )));
        }
        if self.k < Natural::from(3u8) || !self.k.bit(0) {
            return Err(Error::InvalidParams(format!(
                "public exponent must be odd and at least 3 (got {})",
                self.k
            )));
        }
        Ok(())
    }

    /// The random source these parameters call for: seeded if a seed is set.
    pub fn random_source(&self) -> RandomSource {
        match &self.seed {
            Some(seed) => RandomSource::from_seed(seed),
            None => RandomSource::from_entropy(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub n1: Natural,
    pub n2: Natural,
    pub k: Natural,
}

impl PublicKey {
    pub fn modulus(&self, which: ModulusId) -> &Natural {
        match which {
            ModulusId::N1 => &self.n1,
            ModulusId::N2 => &self.n2,
        }
    }

    /// `N1 * N2`, the exclusive upper bound of the message space.
    pub fn message_bound(&self) -> Natural {
        &self.n1 * &self.n2
    }
}

/// Full secret material. The primes and totients are kept alongside `d1, d2`
/// so that a key can be re-validated after loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    pub p1: Natural,
    pub q1: Natural,
    pub p2: Natural,
    pub q2: Natural,
    pub n1: Natural,
    pub n2: Natural,
    pub phi1: Natural,
    pub phi2: Natural,
    pub d1: Natural,
    pub d2: Natural,
    pub k: Natural,
}

impl PrivateKey {
    /// Builds a key from stored fields, recomputing `N_i` and `φ_i` from the
    /// primes. Nothing is checked; run `validate_keypair` on the result.
    pub fn from_stored(
        [p1, q1, p2, q2]: [Natural; 4],
        k: Natural,
        d1: Natural,
        d2: Natural,
    ) -> Self {
        let n1 = &p1 * &q1;
        let n2 = &p2 * &q2;
        let phi1 = totient(&p1, &q1);
        let phi2 = totient(&p2, &q2);
        Self {
            p1,
            q1,
            p2,
            q2,
            n1,
            n2,
            phi1,
            phi2,
            d1,
            d2,
            k,
        }
    }

    pub fn modulus(&self, which: ModulusId) -> &Natural {
        match which {
            ModulusId::N1 => &self.n1,
            ModulusId::N2 => &self.n2,
        }
    }

    pub fn private_exponent(&self, which: ModulusId) -> &Natural {
        match which {
            ModulusId::N1 => &self.d1,
            ModulusId::N2 => &self.d2,
        }
    }

    pub fn totient(&self, which: ModulusId) -> &Natural {
        match which {
            ModulusId::N1 => &self.phi1,
            ModulusId::N2 => &self.phi2,
        }
    }

    pub fn factors(&self, which: ModulusId) -> (&Natural, &Natural) {
        match which {
            ModulusId::N1 => (&self.p1, &self.q1),
            ModulusId::N2 => (&self.p2, &self.q2),
        }
    }

    pub fn public_key(&self) -> PublicKey {
        public_of(self)
    }
}

fn totient(p: &Natural, q: &Natural) -> Natural {
    let one = Natural::one();
    if p.is_zero() || q.is_zero() {
        return Natural::zero();
    }
    (p - &one) * (q - &one)
}

/// Projects `(N1, N2, k)` out of a private key.
pub fn public_of(private: &PrivateKey) -> PublicKey {
    PublicKey {
        n1: private.n1.clone(),
        n2: private.n2.clone(),
        k: private.k.clone(),
    }
}

/// Fills every derived field from the four primes and `k`.
///
/// Checks, in order: the primes are pairwise distinct, each is a probable
/// prime, and `k` is invertible modulo both totients.
pub fn derive_private(
    p1: &Natural,
    q1: &Natural,
    p2: &Natural,
    q2: &Natural,
    k: &Natural,
) -> Result<PrivateKey> {
    let primes = [p1, q1, p2, q2];
    for (i, a) in primes.iter().enumerate() {
        if primes[i + 1..].contains(a) {
            return Err(Error::RepeatedPrime((*a).clone()));
        }
    }
    let mut rng = RandomSource::from_seed(VALIDATION_SEED);
    for p in primes {
        if !is_probable_prime(p, DEFAULT_MR_ROUNDS, &mut rng) {
            return Err(Error::NotPrime(p.clone()));
        }
    }
    let phi1 = totient(p1, q1);
    let phi2 = totient(p2, q2);
    let d1 = mod_inverse(k, &phi1)?;
    let d2 = mod_inverse(k, &phi2)?;
    Ok(PrivateKey {
        p1: p1.clone(),
        q1: q1.clone(),
        p2: p2.clone(),
        q2: q2.clone(),
        n1: p1 * q1,
        n2: p2 * q2,
        phi1,
        phi2,
        d1,
        d2,
        k: k.clone(),
    })
}

/// Generates a fresh keypair.
///
/// `k` is never adjusted: a prime pair whose totient shares a factor with `k`
/// (or that repeats an earlier prime) is discarded and redrawn, at most
/// `MAX_KEYGEN_ATTEMPTS` times per modulus.
pub fn generate_keypair(params: &KeyGenParams, rng: &mut RandomSource) -> Result<(PublicKey, PrivateKey)> {
    params.check()?;
    let (p1, q1) = draw_prime_pair(params.bits1, &params.k, &[], rng)?;
    let (p2, q2) = draw_prime_pair(params.bits2, &params.k, &[&p1, &q1], rng)?;
    let private = derive_private(&p1, &q1, &p2, &q2, &params.k)?;
    Ok((public_of(&private), private))
}

fn draw_prime_pair(
    bits: u64,
    k: &Natural,
    taken: &[&Natural],
    rng: &mut RandomSource,
) -> Result<(Natural, Natural)> {
    for _ in 0..MAX_KEYGEN_ATTEMPTS {
        let p = gen_prime(bits, rng)?;
        let q = gen_prime(bits, rng)?;
        if p == q || taken.contains(&&p) || taken.contains(&&q) {
            continue;
        }
        if gcd(k, &totient(&p, &q)).is_one() {
            return Ok((p, q));
        }
    }
    Err(Error::Exhausted {
        attempts: MAX_KEYGEN_ATTEMPTS,
    })
}

/// One violated key invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotPrime(&'static str),
    PrimesNotDistinct,
    FactorizationMismatch(ModulusId),
    TotientMismatch(ModulusId),
    ExponentNotCoprime(ModulusId),
    PrivateExponentOutOfRange(ModulusId),
    PrivateExponentNotInverse(ModulusId),
    ModulusTooSmall(ModulusId),
    ModuliEqual,
    ModuliNotCoprime,
    PublicMismatch(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotPrime(name) => write!(f, "{name} is not prime"),
            Violation::PrimesNotDistinct => write!(f, "p1, q1, p2, q2 are not pairwise distinct"),
            Violation::FactorizationMismatch(m) => {
                let i = m.index();
                write!(f, "N{i} ≠ p{i}·q{i}")
            }
            Violation::TotientMismatch(m) => {
                let i = m.index();
                write!(f, "φ{i} ≠ (p{i}−1)(q{i}−1)")
            }
            Violation::ExponentNotCoprime(m) => write!(f, "gcd(k, φ{}) ≠ 1", m.index()),
            Violation::PrivateExponentOutOfRange(m) => {
                let i = m.index();
                write!(f, "d{i} not in [1, φ{i})")
            }
            Violation::PrivateExponentNotInverse(m) => {
                let i = m.index();
                write!(f, "k·d{i} ≢ 1 mod φ{i}")
            }
            Violation::ModulusTooSmall(m) => write!(f, "{m} < 6"),
            Violation::ModuliEqual => write!(f, "N1 = N2"),
            Violation::ModuliNotCoprime => write!(f, "gcd(N1, N2) ≠ 1"),
            Violation::PublicMismatch(field) => write!(f, "public {field} differs from private {field}"),
        }
    }
}

/// Outcome of a validation: empty means the key is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, violation: &Violation) -> bool {
        self.violations.contains(violation)
    }

    fn push_if(&mut self, failed: bool, violation: Violation) {
        if failed {
            self.violations.push(violation);
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let names: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", names.join("; "))
    }
}

/// Checks the public-key invariants on their own.
pub fn validate_public(public: &PublicKey) -> ValidationReport {
    let mut report = ValidationReport::default();
    let six = Natural::from(6u8);
    for m in ModulusId::BOTH {
        report.push_if(public.modulus(m) < &six, Violation::ModulusTooSmall(m));
    }
    report.push_if(public.n1 == public.n2, Violation::ModuliEqual);
    report.push_if(!gcd(&public.n1, &public.n2).is_one(), Violation::ModuliNotCoprime);
    report
}

/// Checks every public and private invariant and that the two keys agree.
pub fn validate_keypair(public: &PublicKey, private: &PrivateKey) -> ValidationReport {
    let mut report = validate_public(public);
    for (name, public_field, private_field) in [
        ("n1", &public.n1, &private.n1),
        ("n2", &public.n2, &private.n2),
        ("k", &public.k, &private.k),
    ] {
        report.push_if(public_field != private_field, Violation::PublicMismatch(name));
    }

    let mut rng = RandomSource::from_seed(VALIDATION_SEED);
    let primes = [
        ("p1", &private.p1),
        ("q1", &private.q1),
        ("p2", &private.p2),
        ("q2", &private.q2),
    ];
    for (name, p) in primes {
        report.push_if(!is_probable_prime(p, DEFAULT_MR_ROUNDS, &mut rng), Violation::NotPrime(name));
    }
    let distinct = primes
        .iter()
        .enumerate()
        .all(|(i, (_, a))| primes[i + 1..].iter().all(|(_, b)| a != b));
    report.push_if(!distinct, Violation::PrimesNotDistinct);

    let one = Natural::one();
    for m in ModulusId::BOTH {
        let (p, q) = private.factors(m);
        let phi = private.totient(m);
        let d = private.private_exponent(m);
        report.push_if(private.modulus(m) != &(p * q), Violation::FactorizationMismatch(m));
        report.push_if(phi != &totient(p, q), Violation::TotientMismatch(m));
        report.push_if(!gcd(&private.k, phi).is_one(), Violation::ExponentNotCoprime(m));
        report.push_if(d.is_zero() || d >= phi, Violation::PrivateExponentOutOfRange(m));
        let inverse_ok = !phi.is_zero() && (&private.k * d) % phi == (&one % phi);
        report.push_if(!inverse_ok, Violation::PrivateExponentNotInverse(m));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn example_key() -> PrivateKey {
        derive_private(&n(53), &n(97), &n(61), &n(89), &n(7)).unwrap()
    }

    #[test]
    fn derive_example_key() {
        let key = example_key();
        assert_eq!(key.n1, n(5141));
        assert_eq!(key.phi1, n(4992));
        assert_eq!(key.n2, n(5429));
        assert_eq!(key.phi2, n(5280));
        assert_eq!(key.d1, n(4279));
        assert_eq!(key.d2, n(2263));
    }

    #[test]
    fn derive_tiny_key() {
        let key = derive_private(&n(5), &n(11), &n(7), &n(13), &n(7)).unwrap();
        assert_eq!((key.d1.clone(), key.d2.clone()), (n(23), n(31)));
        assert_eq!((n(7) * &key.d1) % n(40), n(1));
        assert_eq!((n(7) * &key.d2) % n(72), n(1));
    }

    #[test]
    fn derive_rejects_bad_inputs() {
        assert_eq!(
            derive_private(&n(53), &n(53), &n(61), &n(89), &n(7)),
            Err(Error::RepeatedPrime(n(53)))
        );
        assert_eq!(
            derive_private(&n(53), &n(97), &n(61), &n(53), &n(7)),
            Err(Error::RepeatedPrime(n(53)))
        );
        assert_eq!(
            derive_private(&n(53), &n(91), &n(61), &n(89), &n(7)),
            Err(Error::NotPrime(n(91)))
        );
        // φ1 = 4992 = 2^7 · 3 · 13
        assert_eq!(
            derive_private(&n(53), &n(97), &n(61), &n(89), &n(13)),
            Err(Error::NotInvertible { gcd: n(13) })
        );
    }

    #[test]
    fn derive_is_pure() {
        assert_eq!(example_key(), example_key());
    }

    #[test]
    fn example_keypair_validates() {
        let private = example_key();
        let report = validate_keypair(&public_of(&private), &private);
        assert!(report.is_valid(), "{report}");
        assert_eq!(report.to_string(), "valid");
    }

    #[test]
    fn public_projection() {
        let private = example_key();
        let public = public_of(&private);
        assert_eq!((public.n1.clone(), public.n2.clone(), public.k.clone()), (n(5141), n(5429), n(7)));
        assert_eq!(public_of(&private), public);
        assert_eq!(private.public_key(), public);
    }

    #[test]
    fn tampered_private_exponent_is_reported() {
        let mut private = example_key();
        let public = public_of(&private);
        private.d1 += 1u8;
        let report = validate_keypair(&public, &private);
        assert_eq!(report.violations, vec![Violation::PrivateExponentNotInverse(ModulusId::N1)]);
        assert_eq!(report.to_string(), "k·d1 ≢ 1 mod φ1");
    }

    #[test]
    fn modulus_overwritten_is_reported() {
        let mut private = example_key();
        private.n1 = private.n2.clone();
        let public = public_of(&private);
        let report = validate_keypair(&public, &private);
        assert!(report.contains(&Violation::ModuliEqual));
        assert!(report.contains(&Violation::FactorizationMismatch(ModulusId::N1)));
        assert!(report.contains(&Violation::ModuliNotCoprime));
    }

    #[test]
    fn mismatched_public_key_is_reported() {
        let private = example_key();
        let mut public = public_of(&private);
        public.k = n(65537);
        let report = validate_keypair(&public, &private);
        assert_eq!(report.violations, vec![Violation::PublicMismatch("k")]);
    }

    #[test]
    fn validation_never_panics_on_zeroes() {
        let private = PrivateKey::from_stored([n(0), n(0), n(0), n(0)], n(0), n(0), n(0));
        let report = validate_keypair(&public_of(&private), &private);
        assert!(!report.is_valid());
    }

    #[test]
    fn keygen_params_checks() {
        assert!(KeyGenParams::new(16, 16, n(65537)).check().is_ok());
        assert!(KeyGenParams::new(3, 16, n(65537)).check().is_err());
        assert!(KeyGenParams::new(16, 16, n(6)).check().is_err());
        assert!(KeyGenParams::new(16, 16, n(1)).check().is_err());
        assert_eq!(KeyGenParams::default().k, n(65537));
    }

    #[test]
    fn generate_is_deterministic() {
        let params = KeyGenParams::new(16, 20, n(65537)).with_seed(*b"fixed");
        let a = generate_keypair(&params, &mut params.random_source()).unwrap();
        let b = generate_keypair(&params, &mut params.random_source()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generate_unequal_sizes() {
        let mut rng = RandomSource::from_seed(b"unequal");
        let params = KeyGenParams::new(16, 20, n(65537));
        let (public, private) = generate_keypair(&params, &mut rng).unwrap();
        assert!(validate_keypair(&public, &private).is_valid());
        assert!([31, 32].contains(&public.n1.bits()));
        assert!([39, 40].contains(&public.n2.bits()));
        assert!(gcd(&public.n1, &public.n2).is_one());
        assert_eq!(public_of(&private), public);
    }

    #[test]
    fn generate_holds_k_fixed() {
        // k = 3 excludes every prime ≡ 1 mod 3, so some pairs must be redrawn
        let mut rng = RandomSource::from_seed(b"k3");
        for _ in 0..20 {
            let (public, private) = generate_keypair(&KeyGenParams::new(12, 12, n(3)), &mut rng).unwrap();
            assert_eq!(public.k, n(3));
            assert!(validate_keypair(&public, &private).is_valid());
        }
    }

    #[test]
    fn generate_exhausts_when_primes_run_out() {
        // only 11 and 13 have exactly four bits, so no second distinct pair exists
        let mut rng = RandomSource::from_seed(b"four");
        let params = KeyGenParams::new(4, 4, n(7));
        assert_eq!(
            generate_keypair(&params, &mut rng),
            Err(Error::Exhausted {
                attempts: MAX_KEYGEN_ATTEMPTS
            })
        );
    }

    #[test]
    fn modulus_id_parsing() {
        assert_eq!("n1".parse::<ModulusId>().unwrap(), ModulusId::N1);
        assert_eq!("N2".parse::<ModulusId>().unwrap(), ModulusId::N2);
        assert!("n3".parse::<ModulusId>().is_err());
        assert_eq!(ModulusId::N2.to_string(), "N2");
    }
}
