//! Shared fixtures for the criterion benchmarks.

use dmrsa_core::keys::{generate_keypair, KeyGenParams, DEFAULT_PUBLIC_EXPONENT};
use dmrsa_core::labs::ClassicalKey;
use dmrsa_core::{Natural, PrivateKey, PublicKey, RandomSource};

pub struct Fixture {
    pub classical: ClassicalKey,
    pub public: PublicKey,
    pub private: PrivateKey,
    pub message: Natural,
}

/// Deterministic keys at `bits`-bit primes and one message below the
/// classical modulus.
pub fn fixture(bits: u64) -> Fixture {
    let mut rng = RandomSource::from_seed(format!("bench fixture {bits}").as_bytes());
    let e = Natural::from(DEFAULT_PUBLIC_EXPONENT);
    let classical = ClassicalKey::generate(bits, &e, &mut rng).expect("classical keygen");
    let (public, private) = generate_keypair(&KeyGenParams::new(bits, bits, e), &mut rng).expect("dm-rsa keygen");
    let message = rng.below(&classical.n);
    Fixture {
        classical,
        public,
        private,
        message,
    }
}
