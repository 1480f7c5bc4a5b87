//! Line-oriented key files.
//!
//! ```text
//! DMRSA PRIVATE KEY V1
//! p1 = 53
//! q1 = 97
//! ...
//! ```
//!
//! UTF-8, LF line endings, one `name = decimal` line per field in fixed
//! order, every line LF-terminated, no blank lines. Derived private fields
//! (`N_i`, `φ_i`) are not stored; they are recomputed on load.

use crate::error::{Error, Result};
use crate::keys::{public_of, validate_keypair, validate_public, PrivateKey, PublicKey};
use crate::numtheory::Natural;

pub const PUBLIC_KEY_HEADER: &str = "DMRSA PUBLIC KEY V1";
pub const PRIVATE_KEY_HEADER: &str = "DMRSA PRIVATE KEY V1";

const PUBLIC_FIELDS: [&str; 3] = ["n1", "n2", "k"];
const PRIVATE_FIELDS: [&str; 7] = ["p1", "q1", "p2", "q2", "k", "d1", "d2"];

fn render(header: &str, fields: &[(&str, &Natural)]) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for (name, value) in fields {
        out.push_str(&format!("{name} = {value}\n"));
    }
    out
}

pub fn write_public_key(key: &PublicKey) -> String {
    render(PUBLIC_KEY_HEADER, &[("n1", &key.n1), ("n2", &key.n2), ("k", &key.k)])
}

pub fn write_private_key(key: &PrivateKey) -> String {
    render(
        PRIVATE_KEY_HEADER,
        &[
            ("p1", &key.p1),
            ("q1", &key.q1),
            ("p2", &key.p2),
            ("q2", &key.q2),
            ("k", &key.k),
            ("d1", &key.d1),
            ("d2", &key.d2),
        ],
    )
}

/// Parses a public key file without validating it.
pub fn parse_public_key(text: &str) -> Result<PublicKey> {
    let [n1, n2, k] = parse_fields(text, PUBLIC_KEY_HEADER, &PUBLIC_FIELDS)?
        .try_into()
        .expect("parse_fields returns one value per field");
    Ok(PublicKey { n1, n2, k })
}

/// Parses and validates a public key file.
pub fn read_public_key(text: &str) -> Result<PublicKey> {
    let key = parse_public_key(text)?;
    let report = validate_public(&key);
    if !report.is_valid() {
        return Err(Error::InvalidKey(report));
    }
    Ok(key)
}

/// Parses a private key file without validating it.
pub fn parse_private_key(text: &str) -> Result<PrivateKey> {
    let [p1, q1, p2, q2, k, d1, d2] = parse_fields(text, PRIVATE_KEY_HEADER, &PRIVATE_FIELDS)?
        .try_into()
        .expect("parse_fields returns one value per field");
    Ok(PrivateKey::from_stored([p1, q1, p2, q2], k, d1, d2))
}

/// Parses a private key file and refuses it unless every invariant holds.
pub fn read_private_key(text: &str) -> Result<PrivateKey> {
    let key = parse_private_key(text)?;
    let report = validate_keypair(&public_of(&key), &key);
    if !report.is_valid() {
        return Err(Error::InvalidKey(report));
    }
    Ok(key)
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_fields(text: &str, header: &str, fields: &[&'static str]) -> Result<Vec<Natural>> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    let (_, first) = lines.next().expect("split yields at least one item");
    check_header(first, header)?;

    let mut values = Vec::with_capacity(fields.len());
    for &field in fields {
        let Some((line_no, line)) = lines.next() else {
            return Err(Error::MissingField {
                field,
                line: values.len() + 2,
            });
        };
        values.push(parse_field_line(line_no, line, field)?);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_error(line_no, "unexpected content after the last field"));
    }
    Ok(values)
}

fn check_header(line: &str, expected: &str) -> Result<()> {
    if line == expected {
        return Ok(());
    }
    let (other, kind) = if expected == PUBLIC_KEY_HEADER {
        (PRIVATE_KEY_HEADER, "DMRSA PUBLIC KEY V")
    } else {
        (PUBLIC_KEY_HEADER, "DMRSA PRIVATE KEY V")
    };
    if line == other {
        return Err(parse_error(1, format!("expected `{expected}`, found `{other}`")));
    }
    if line.starts_with(kind) {
        return Err(Error::UnknownVersion(line.to_string()));
    }
    Err(parse_error(1, format!("expected header `{expected}`")))
}

fn parse_field_line(line_no: usize, line: &str, field: &str) -> Result<Natural> {
    if line.contains('\r') {
        return Err(parse_error(line_no, "carriage return in key file (LF line endings only)"));
    }
    if line.is_empty() {
        return Err(parse_error(line_no, format!("blank line where `{field}` was expected")));
    }
    let (name, digits) = line
        .split_once(" = ")
        .ok_or_else(|| parse_error(line_no, format!("expected `{field} = <decimal>`")))?;
    if name != field {
        return Err(parse_error(line_no, format!("expected field `{field}`, found `{name}`")));
    }
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(line_no, format!("`{field}` is not a decimal number")));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(parse_error(line_no, format!("`{field}` has leading zeros")));
    }
    Ok(digits.parse().expect("validated decimal digits"))
}
