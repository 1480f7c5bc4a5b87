//! Block encryption and CRT decryption.
//!
//! A plaintext block is any integer `z` with `0 <= z < N1*N2`. Encryption
//! yields one textbook-RSA ciphertext per modulus; decryption inverts each
//! component and recombines the two residues with the CRT. No padding or
//! randomization is applied.

use crate::error::{Error, Result};
use crate::keys::{ModulusId, PrivateKey, PublicKey};
use crate::numtheory::{crt_combine, mod_pow, Natural};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ciphertext {
    pub w1: Natural,
    pub w2: Natural,
}

impl Ciphertext {
    pub fn new(w1: Natural, w2: Natural) -> Self {
        Self { w1, w2 }
    }

    pub fn component(&self, which: ModulusId) -> &Natural {
        match which {
            ModulusId::N1 => &self.w1,
            ModulusId::N2 => &self.w2,
        }
    }
}

/// `(z^k mod N1, z^k mod N2)`.
pub fn encrypt(public: &PublicKey, z: &Natural) -> Result<Ciphertext> {
    let bound = public.message_bound();
    if z >= &bound {
        return Err(Error::MessageTooLarge { bound });
    }
    Ok(Ciphertext {
        w1: mod_pow(z, &public.k, &public.n1)?,
        w2: mod_pow(z, &public.k, &public.n2)?,
    })
}

/// `w_i^d_i mod N_i` for the selected component.
pub fn decrypt_component(private: &PrivateKey, c: &Ciphertext, which: ModulusId) -> Result<Natural> {
    let modulus = private.modulus(which);
    let w = c.component(which);
    if w >= modulus {
        return Err(Error::CiphertextOutOfRange { which });
    }
    mod_pow(w, private.private_exponent(which), modulus)
}

/// CRT recombination of both component decryptions.
///
/// Any in-range pair decrypts; no check is made that it came from `encrypt`.
pub fn decrypt(private: &PrivateKey, c: &Ciphertext) -> Result<Natural> {
    for which in ModulusId::BOTH {
        if c.component(which) >= private.modulus(which) {
            return Err(Error::CiphertextOutOfRange { which });
        }
    }
    let r1 = decrypt_component(private, c, ModulusId::N1)?;
    let r2 = decrypt_component(private, c, ModulusId::N2)?;
    crt_combine(&r1, &private.n1, &r2, &private.n2)
}
