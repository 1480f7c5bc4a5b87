//! Dual-modulus RSA (DM-RSA).
//!
//! A message block `z < N1*N2` is encrypted under two independent RSA moduli
//! with one public exponent `k`, giving `(z^k mod N1, z^k mod N2)`. Decryption
//! inverts each component with its own private exponent and recombines the
//! residues with the Chinese Remainder Theorem.
//!
//! ```
//! use dmrsa_core::{decrypt, derive_private, encrypt, Natural};
//!
//! let n = |v: u32| Natural::from(v);
//! let private = derive_private(&n(53), &n(97), &n(61), &n(89), &n(7)).unwrap();
//! let c = encrypt(&private.public_key(), &n(65)).unwrap();
//! assert_eq!((c.w1.clone(), c.w2.clone()), (n(787), n(3757)));
//! assert_eq!(decrypt(&private, &c).unwrap(), n(65));
//! ```
//!
//! This is textbook (unpadded, deterministic) encryption, and multi-block
//! messages are encrypted block by block. Neither is semantically secure.

pub mod codec;
pub mod error;
pub mod keys;
pub mod labs;
pub mod numtheory;
pub mod scheme;
pub mod selftest;

pub use codec::{CipherStream, MessageBlock};
pub use error::{Error, Result};
pub use keys::{
    derive_private, generate_keypair, public_of, validate_keypair, validate_public, KeyGenParams, ModulusId,
    PrivateKey, PublicKey, ValidationReport, Violation,
};
pub use numtheory::{Natural, RandomSource};
pub use scheme::{decrypt, decrypt_component, encrypt, Ciphertext};
