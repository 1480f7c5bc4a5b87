//! Arbitrary-precision number theory: modular exponentiation, Euclid,
//! inverses, CRT recombination, Miller-Rabin and prime generation.
//!
//! Storage and schoolbook multiplication/division come from `num-bigint`;
//! the algorithms in this module are implemented directly on top of it.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Miller-Rabin rounds used wherever the caller does not choose.
pub const DEFAULT_MR_ROUNDS: u32 = 40;

/// Number of `+2` steps `gen_prime` takes from a random start before redrawing.
pub const PRIME_SEARCH_WINDOW: u32 = 1024;

/// Seedable, reproducible random stream (ChaCha20).
///
/// A byte-string seed is hashed with SHA-256 into the 32-byte ChaCha key, so
/// seeds of any length are accepted and the same seed always yields the same
/// stream. One source belongs to one task; give concurrent tasks their own.
#[derive(Debug)]
pub struct RandomSource {
    rng: ChaCha20Rng,
}

impl RandomSource {
    pub fn from_seed(seed: &[u8]) -> Self {
        let key: [u8; 32] = Sha256::digest(seed).into();
        Self {
            rng: ChaCha20Rng::from_seed(key),
        }
    }

    pub fn from_entropy() -> Self {
        Self {
            rng: ChaCha20Rng::from_entropy(),
        }
    }

    /// Uniform integer with at most `bits` bits.
    pub fn natural_bits(&mut self, bits: u64) -> Natural {
        if bits == 0 {
            return Natural::zero();
        }
        let nbytes = bits.div_ceil(8) as usize;
        let mut buf = vec![0u8; nbytes];
        self.rng.fill_bytes(&mut buf);
        let excess = (nbytes as u64) * 8 - bits;
        buf[0] &= 0xff >> excess;
        Natural::from_bytes_be(&buf)
    }

    /// Uniform integer in `[0, bound)`. `bound` must be positive.
    pub fn below(&mut self, bound: &Natural) -> Natural {
        assert!(!bound.is_zero(), "RandomSource::below called with zero bound");
        let bits = bound.bits();
        loop {
            let candidate = self.natural_bits(bits);
            if &candidate < bound {
                return candidate;
            }
        }
    }

    /// Uniform integer in `[low, high)`; requires `low < high`.
    pub fn between(&mut self, low: &Natural, high: &Natural) -> Natural {
        assert!(low < high, "RandomSource::between called with empty range");
        low + self.below(&(high - low))
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// `base^exponent mod modulus` by left-to-right square-and-multiply.
pub fn mod_pow(base: &Natural, exponent: &Natural, modulus: &Natural) -> Result<Natural> {
    if modulus.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if modulus.is_one() {
        return Ok(Natural::zero());
    }
    let base = base % modulus;
    let mut acc = Natural::one();
    for i in (0..exponent.bits()).rev() {
        acc = &acc * &acc % modulus;
        if exponent.bit(i) {
            acc = acc * &base % modulus;
        }
    }
    Ok(acc)
}

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Natural, b: &Natural) -> Natural {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
///
/// The cofactors are signed; this is the only place signed arithmetic appears.
pub fn ext_gcd(a: &Natural, b: &Natural) -> (Natural, BigInt, BigInt) {
    let (mut old_r, mut r) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let (mut old_x, mut x) = (BigInt::one(), BigInt::zero());
    let (mut old_y, mut y) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_x = &old_x - &q * &x;
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = &old_y - &q * &y;
        old_y = std::mem::replace(&mut y, next_y);
    }
    let g = old_r
        .to_biguint()
        .expect("remainders of nonnegative inputs stay nonnegative");
    (g, old_x, old_y)
}

/// The inverse of `a` modulo `m`, in `[1, m)`.
pub fn mod_inverse(a: &Natural, m: &Natural) -> Result<Natural> {
    if m < &Natural::from(2u8) {
        return Err(Error::InverseModulusTooSmall(m.clone()));
    }
    let (g, x, _) = ext_gcd(&(a % m), m);
    if !g.is_one() {
        return Err(Error::NotInvertible { gcd: g });
    }
    let m_signed = BigInt::from(m.clone());
    Ok(x
        .mod_floor(&m_signed)
        .to_biguint()
        .expect("mod_floor by a positive modulus is nonnegative"))
}

/// The unique `r` in `[0, n1*n2)` with `r ≡ r1 (mod n1)` and `r ≡ r2 (mod n2)`.
///
/// Garner's form: `r = r1 + n1 * ((r2 - r1) * n1^-1 mod n2)`.
pub fn crt_combine(r1: &Natural, n1: &Natural, r2: &Natural, n2: &Natural) -> Result<Natural> {
    for (residue, modulus) in [(r1, n1), (r2, n2)] {
        if residue >= modulus {
            return Err(Error::ResidueOutOfRange {
                residue: residue.clone(),
                modulus: modulus.clone(),
            });
        }
    }
    if !gcd(n1, n2).is_one() {
        return Err(Error::NonCoprimeModuli {
            n1: n1.clone(),
            n2: n2.clone(),
        });
    }
    if n2.is_one() {
        return Ok(r1.clone());
    }
    let n1_inv = mod_inverse(n1, n2)?;
    let r1_mod_n2 = r1 % n2;
    let diff = (r2 + n2 - r1_mod_n2) % n2;
    let h = diff * n1_inv % n2;
    Ok(r1 + n1 * h)
}

const SMALL_PRIME_LIMIT: u32 = 1000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for i in 2..limit {
            if !composite[i] {
                primes.push(i as u32);
                for j in (i * i..limit).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        primes
    })
}

/// Miller-Rabin with `rounds` random witnesses drawn from `rng`.
///
/// Inputs below `SMALL_PRIME_LIMIT²` are decided exactly by trial division
/// against the sieved small primes; `false` is always a proof of compositeness.
pub fn is_probable_prime(n: &Natural, rounds: u32, rng: &mut RandomSource) -> bool {
    if n < &Natural::from(2u8) {
        return false;
    }
    for &p in small_primes() {
        let p = Natural::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let limit = u64::from(SMALL_PRIME_LIMIT);
    if n.to_u64().is_some_and(|v| v < limit * limit) {
        return true;
    }

    let one = Natural::one();
    let n_minus_one = n - &one;
    let s = n_minus_one
        .trailing_zeros()
        .expect("n - 1 is nonzero for n > 2");
    let d = &n_minus_one >> s;
    let two = Natural::from(2u8);

    'witness: for _ in 0..rounds.max(1) {
        // a in [2, n-2]
        let a = rng.between(&two, &n_minus_one);
        let mut x = mod_pow(&a, &d, n).expect("n > 1");
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_one {
                continue 'witness;
            }
            if x.is_one() {
                return false;
            }
        }
        return false;
    }
    true
}

/// A random probable prime with exactly `bits` significant bits.
///
/// Draws an odd candidate with the top bit set and walks upward in steps of
/// two for at most `PRIME_SEARCH_WINDOW` steps, redrawing when the window is
/// exhausted or the walk would grow past `bits`.
pub fn gen_prime(bits: u64, rng: &mut RandomSource) -> Result<Natural> {
    if bits < 4 {
        return Err(Error::InvalidParams(format!(
            "prime bit length must be at least 4, got {bits}"
        )));
    }
    loop {
        let mut candidate = rng.natural_bits(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        for _ in 0..PRIME_SEARCH_WINDOW {
            if candidate.bits() != bits {
                break;
            }
            if is_probable_prime(&candidate, DEFAULT_MR_ROUNDS, rng) {
                return Ok(candidate);
            }
            candidate += 2u8;
        }
    }
}
