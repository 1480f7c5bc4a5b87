use thiserror::Error;

use crate::keys::{ModulusId, ValidationReport};
use crate::numtheory::Natural;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be nonzero")]
    ZeroModulus,

    #[error("modulus {0} is too small for a modular inverse (need at least 2)")]
    InverseModulusTooSmall(Natural),

    #[error("value is not invertible: gcd = {gcd}")]
    NotInvertible { gcd: Natural },

    #[error("moduli {n1} and {n2} are not coprime")]
    NonCoprimeModuli { n1: Natural, n2: Natural },

    #[error("residue {residue} is not below its modulus {modulus}")]
    ResidueOutOfRange { residue: Natural, modulus: Natural },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("prime {0} appears more than once")]
    RepeatedPrime(Natural),

    #[error("{0} is not prime")]
    NotPrime(Natural),

    #[error("no suitable primes found after {attempts} attempts")]
    Exhausted { attempts: u32 },

    #[error("message exceeds the message space: must be below N1*N2 = {bound}")]
    MessageTooLarge { bound: Natural },

    #[error("ciphertext component {which} is not below its modulus")]
    CiphertextOutOfRange { which: ModulusId },

    #[error("key too small: N1*N2 must have at least 9 bits to carry one byte per block")]
    KeyTooSmall,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line 1: unsupported key file version `{0}`")]
    UnknownVersion(String),

    #[error("line {line}: missing field `{field}`")]
    MissingField { field: &'static str, line: usize },

    #[error("key rejected: {0}")]
    InvalidKey(ValidationReport),

    #[error("corrupt stream: {0}")]
    CorruptStream(String),

    #[error("input exceeds oracle bound: {0}")]
    OracleBound(String),
}
