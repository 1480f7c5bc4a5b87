//! Byte framing and the two persistent formats: text key files and binary
//! ciphertext streams.

mod blocks;
mod keyfile;
mod stream;

pub use blocks::{block_capacity, blocks_to_bytes, bytes_to_blocks, i2osp, os2ip, MessageBlock};
pub use keyfile::{
    parse_private_key, parse_public_key, read_private_key, read_public_key, write_private_key, write_public_key,
    PRIVATE_KEY_HEADER, PUBLIC_KEY_HEADER,
};
pub use stream::{
    decrypt_stream, encrypt_bytes, read_cipher_stream, write_cipher_stream, CipherStream, STREAM_HEADER_LEN,
    STREAM_MAGIC,
};
