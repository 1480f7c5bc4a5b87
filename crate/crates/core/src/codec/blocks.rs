use num_traits::Zero;

use crate::error::{Error, Result};
use crate::keys::PublicKey;
use crate::numtheory::Natural;

/// One plaintext block: the big-endian value of at most `capacity` bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageBlock {
    pub z: Natural,
    pub capacity: usize,
}

/// `floor((bitlen(N1*N2) - 1) / 8)`: the largest byte count whose value is
/// always below `N1*N2`.
pub fn block_capacity(public: &PublicKey) -> Result<usize> {
    let bits = public.message_bound().bits();
    let capacity = (bits.saturating_sub(1) / 8) as usize;
    if capacity == 0 {
        return Err(Error::KeyTooSmall);
    }
    Ok(capacity)
}

/// Big-endian octet string to integer.
pub fn os2ip(bytes: &[u8]) -> Natural {
    Natural::from_bytes_be(bytes)
}

/// Integer to a big-endian octet string of exactly `width` bytes, or `None`
/// if the value does not fit.
pub fn i2osp(value: &Natural, width: usize) -> Option<Vec<u8>> {
    if value.is_zero() {
        return Some(vec![0; width]);
    }
    let digits = value.to_bytes_be();
    if digits.len() > width {
        return None;
    }
    let mut out = vec![0u8; width - digits.len()];
    out.extend_from_slice(&digits);
    Some(out)
}

/// Splits `message` into `block_capacity` sized chunks (the last may be
/// shorter), each read as a big-endian integer.
pub fn bytes_to_blocks(message: &[u8], public: &PublicKey) -> Result<Vec<MessageBlock>> {
    let capacity = block_capacity(public)?;
    Ok(message
        .chunks(capacity)
        .map(|chunk| MessageBlock {
            z: os2ip(chunk),
            capacity,
        })
        .collect())
}

/// Inverse of `bytes_to_blocks`. `plaintext_length` fixes the width of the
/// last block, which restores any leading zero bytes.
pub fn blocks_to_bytes(blocks: &[MessageBlock], plaintext_length: u64) -> Result<Vec<u8>> {
    let Some(first) = blocks.first() else {
        return if plaintext_length == 0 {
            Ok(Vec::new())
        } else {
            Err(Error::CorruptStream(format!(
                "no blocks but plaintext length {plaintext_length}"
            )))
        };
    };
    let capacity = first.capacity;
    if capacity == 0 || blocks.iter().any(|b| b.capacity != capacity) {
        return Err(Error::CorruptStream("inconsistent block capacity".into()));
    }
    let full = (blocks.len() as u64 - 1) * capacity as u64;
    if plaintext_length <= full || plaintext_length > full + capacity as u64 {
        return Err(Error::CorruptStream(format!(
            "plaintext length {plaintext_length} does not match {} blocks of {capacity} bytes",
            blocks.len()
        )));
    }
    let last_width = (plaintext_length - full) as usize;

    let mut out = Vec::with_capacity(plaintext_length as usize);
    let last = blocks.len() - 1;
    for (i, block) in blocks.iter().enumerate() {
        let width = if i == last { last_width } else { capacity };
        let bytes = i2osp(&block.z, width)
            .ok_or_else(|| Error::CorruptStream(format!("block {i} does not fit in {width} bytes")))?;
        out.extend_from_slice(&bytes);
    }
    Ok(out)
}
