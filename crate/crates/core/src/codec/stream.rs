//! Binary ciphertext stream.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "DMR1"
//! 4       4     width1           (u32, big-endian)
//! 8       4     width2           (u32, big-endian)
//! 12      8     plaintext_length (u64, big-endian)
//! 20      4     block count      (u32, big-endian)
//! 24      ...   count * (w1 as width1 bytes || w2 as width2 bytes)
//! ```

use crate::codec::blocks::{block_capacity, blocks_to_bytes, bytes_to_blocks, i2osp, os2ip, MessageBlock};
use crate::error::{Error, Result};
use crate::keys::{PrivateKey, PublicKey};
use crate::numtheory::Natural;
use crate::scheme::{decrypt, encrypt, Ciphertext};

pub const STREAM_MAGIC: [u8; 4] = *b"DMR1";
pub const STREAM_HEADER_LEN: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherStream {
    pub width1: u32,
    pub width2: u32,
    pub plaintext_length: u64,
    pub blocks: Vec<Ciphertext>,
}

fn byte_width(modulus: &Natural) -> u32 {
    modulus.bits().div_ceil(8) as u32
}

fn corrupt(message: impl Into<String>) -> Error {
    Error::CorruptStream(message.into())
}

pub fn write_cipher_stream(stream: &CipherStream) -> Result<Vec<u8>> {
    let count = u32::try_from(stream.blocks.len()).map_err(|_| corrupt("too many blocks for one stream"))?;
    let (width1, width2) = (stream.width1 as usize, stream.width2 as usize);
    let mut out = Vec::with_capacity(STREAM_HEADER_LEN + stream.blocks.len() * (width1 + width2));
    out.extend_from_slice(&STREAM_MAGIC);
    out.extend_from_slice(&stream.width1.to_be_bytes());
    out.extend_from_slice(&stream.width2.to_be_bytes());
    out.extend_from_slice(&stream.plaintext_length.to_be_bytes());
    out.extend_from_slice(&count.to_be_bytes());
    for (i, block) in stream.blocks.iter().enumerate() {
        for (w, width) in [(&block.w1, width1), (&block.w2, width2)] {
            let bytes = i2osp(w, width).ok_or_else(|| corrupt(format!("block {i} exceeds its field width")))?;
            out.extend_from_slice(&bytes);
        }
    }
    Ok(out)
}

pub fn read_cipher_stream(bytes: &[u8]) -> Result<CipherStream> {
    if bytes.len() < STREAM_HEADER_LEN {
        if !STREAM_MAGIC.starts_with(&bytes[..bytes.len().min(4)]) {
            return Err(corrupt("bad magic"));
        }
        return Err(corrupt(format!(
            "truncated header: {} of {STREAM_HEADER_LEN} bytes",
            bytes.len()
        )));
    }
    let (header, body) = bytes.split_at(STREAM_HEADER_LEN);
    if header[..4] != STREAM_MAGIC {
        return Err(corrupt("bad magic"));
    }
    let be32 = |at: usize| u32::from_be_bytes(header[at..at + 4].try_into().unwrap());
    let width1 = be32(4);
    let width2 = be32(8);
    let plaintext_length = u64::from_be_bytes(header[12..20].try_into().unwrap());
    let count = be32(20);
    if width1 == 0 || width2 == 0 {
        return Err(corrupt("zero field width"));
    }

    let block_len = width1 as u64 + width2 as u64;
    let expected = block_len * count as u64;
    if (body.len() as u64) < expected {
        return Err(corrupt(format!(
            "truncated: {count} blocks need {expected} bytes, found {}",
            body.len()
        )));
    }
    if (body.len() as u64) > expected {
        return Err(corrupt(format!("{} trailing bytes after the last block", body.len() as u64 - expected)));
    }

    let blocks = body
        .chunks_exact(block_len as usize)
        .map(|chunk| {
            let (w1, w2) = chunk.split_at(width1 as usize);
            Ciphertext::new(os2ip(w1), os2ip(w2))
        })
        .collect();
    Ok(CipherStream {
        width1,
        width2,
        plaintext_length,
        blocks,
    })
}

/// Frames `message` into blocks and encrypts each one independently.
pub fn encrypt_bytes(public: &PublicKey, message: &[u8]) -> Result<CipherStream> {
    let blocks = bytes_to_blocks(message, public)?
        .iter()
        .map(|block| encrypt(public, &block.z))
        .collect::<Result<Vec<_>>>()?;
    Ok(CipherStream {
        width1: byte_width(&public.n1),
        width2: byte_width(&public.n2),
        plaintext_length: message.len() as u64,
        blocks,
    })
}

/// Decrypts every block and reassembles the original bytes.
///
/// A stream made under a different key is caught by a width mismatch, an
/// out-of-range component, or a block value too wide for its byte slot;
/// otherwise the output is simply wrong.
pub fn decrypt_stream(private: &PrivateKey, stream: &CipherStream) -> Result<Vec<u8>> {
    let expected = (byte_width(&private.n1), byte_width(&private.n2));
    if (stream.width1, stream.width2) != expected {
        return Err(corrupt(format!(
            "block widths ({}, {}) do not match the key's ({}, {})",
            stream.width1, stream.width2, expected.0, expected.1
        )));
    }
    let capacity = block_capacity(&private.public_key())?;
    let blocks = stream
        .blocks
        .iter()
        .map(|c| decrypt(private, c).map(|z| MessageBlock { z, capacity }))
        .collect::<Result<Vec<_>>>()?;
    blocks_to_bytes(&blocks, stream.plaintext_length)
}
