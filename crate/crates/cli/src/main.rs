//! `dmrsa`: key generation, file encryption and decryption, key inspection,
//! the worked-example selftest, and the two experiment harnesses.
//!
//! Exit codes: 0 success, 1 operational error (including bad flags),
//! 2 validation findings.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use dmrsa_core::codec::{
    decrypt_stream, encrypt_bytes, parse_private_key, parse_public_key, read_cipher_stream, read_private_key,
    read_public_key, write_cipher_stream, write_private_key, write_public_key, PRIVATE_KEY_HEADER,
    PUBLIC_KEY_HEADER,
};
use dmrsa_core::keys::{generate_keypair, validate_keypair, validate_public, KeyGenParams, ModulusId};
use dmrsa_core::labs::{bench_compare, partial_compromise, Verdict};
use dmrsa_core::selftest::run_selftest;
use dmrsa_core::{Natural, RandomSource};

const EXIT_ERROR: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(name = "dmrsa", version, about = "Dual-modulus RSA with CRT decryption (textbook, unpadded)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a keypair and write the public and private key files.
    Keygen {
        /// Bit length of p1 and q1.
        #[arg(long, default_value_t = 512)]
        bits1: u64,
        /// Bit length of p2 and q2.
        #[arg(long, default_value_t = 512)]
        bits2: u64,
        /// Public exponent k (odd, at least 3).
        #[arg(long, default_value = "65537")]
        pubexp: Natural,
        #[arg(long, value_name = "PATH")]
        out_pub: PathBuf,
        #[arg(long, value_name = "PATH")]
        out_priv: PathBuf,
        /// Hex seed for reproducible generation.
        #[arg(long, value_name = "HEX", value_parser = parse_hex)]
        seed: Option<HexSeed>,
    },
    /// Encrypt a file into a ciphertext stream.
    Encrypt {
        #[arg(long = "pub", value_name = "PATH")]
        public: PathBuf,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Decrypt a ciphertext stream back to the original bytes.
    Decrypt {
        #[arg(long = "priv", value_name = "PATH")]
        private: PathBuf,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Print a key's fields and, for private keys, the full validation report.
    Inspect {
        #[arg(long, value_name = "PATH")]
        key: PathBuf,
    },
    /// Re-derive the worked example (primes 53, 97, 61, 89; k = 7; z = 65).
    Selftest,
    /// Time single-modulus RSA against DM-RSA at one prime size.
    Bench {
        #[arg(long, default_value_t = 512)]
        bits: u64,
        #[arg(long, default_value_t = 50)]
        iters: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long, value_name = "HEX", value_parser = parse_hex)]
        seed: Option<HexSeed>,
        /// Also write the report to this file.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Recover what one leaked factorization reveals about each block of a stream.
    Attack {
        #[arg(long = "priv", value_name = "PATH")]
        private: PathBuf,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_parser = parse_leak)]
        leak: ModulusId,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Clone)]
struct HexSeed(Vec<u8>);

fn parse_hex(s: &str) -> Result<HexSeed, String> {
    hex::decode(s).map(HexSeed).map_err(|e| format!("invalid hex seed: {e}"))
}

fn parse_leak(s: &str) -> Result<ModulusId, String> {
    s.parse().map_err(|e: dmrsa_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Keygen {
            bits1,
            bits2,
            pubexp,
            out_pub,
            out_priv,
            seed,
        } => {
            let params = KeyGenParams {
                bits1,
                bits2,
                k: pubexp,
                seed: seed.map(|s| s.0),
            };
            keygen(params, &out_pub, &out_priv)
        }
        Command::Encrypt { public, input, out } => encrypt_file(&public, &input, &out),
        Command::Decrypt { private, input, out } => decrypt_file(&private, &input, &out),
        Command::Inspect { key } => inspect(&key),
        Command::Selftest => selftest(),
        Command::Bench {
            bits,
            iters,
            format,
            seed,
            out,
        } => bench(bits, iters, format, seed, out.as_deref()),
        Command::Attack { private, input, leak } => attack(&private, &input, leak),
    }
}

/// Writes to a temporary file beside `path`, then renames it into place.
fn stage(path: &Path, contents: &[u8]) -> anyhow::Result<tempfile::NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    Ok(tmp)
}

fn write_atomic(path: &Path, contents: &[u8]) -> anyhow::Result<()> {
    stage(path, contents)?
        .persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn keygen(params: KeyGenParams, out_pub: &Path, out_priv: &Path) -> anyhow::Result<ExitCode> {
    params.check()?;
    let mut rng = params.random_source();
    let (public, private) = generate_keypair(&params, &mut rng)?;

    let pub_tmp = stage(out_pub, write_public_key(&public).as_bytes())?;
    let priv_tmp = stage(out_priv, write_private_key(&private).as_bytes())?;
    priv_tmp
        .persist(out_priv)
        .with_context(|| format!("writing {}", out_priv.display()))?;
    pub_tmp
        .persist(out_pub)
        .with_context(|| format!("writing {}", out_pub.display()))?;

    eprintln!("N1: {} bits", public.n1.bits());
    eprintln!("N2: {} bits", public.n2.bits());
    Ok(ExitCode::SUCCESS)
}

fn encrypt_file(public: &Path, input: &Path, out: &Path) -> anyhow::Result<ExitCode> {
    let public = read_public_key(&read_text(public)?).with_context(|| format!("loading {}", public.display()))?;
    let message = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let stream = encrypt_bytes(&public, &message)?;
    write_atomic(out, &write_cipher_stream(&stream)?)?;
    eprintln!("encrypted {} bytes into {} blocks", message.len(), stream.blocks.len());
    Ok(ExitCode::SUCCESS)
}

fn decrypt_file(private: &Path, input: &Path, out: &Path) -> anyhow::Result<ExitCode> {
    let private = read_private_key(&read_text(private)?).with_context(|| format!("loading {}", private.display()))?;
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let stream = read_cipher_stream(&bytes).with_context(|| format!("reading {}", input.display()))?;
    let message = decrypt_stream(&private, &stream).context("decrypting (wrong key or corrupt stream?)")?;
    write_atomic(out, &message)?;
    Ok(ExitCode::SUCCESS)
}

fn inspect(path: &Path) -> anyhow::Result<ExitCode> {
    let text = read_text(path)?;
    let context = || format!("parsing {}", path.display());
    let bits = |v: &Natural| v.bits();

    let report = if text.starts_with(PRIVATE_KEY_HEADER) {
        let key = parse_private_key(&text).with_context(context)?;
        println!("type: private key");
        println!("N1 = {} ({} bits)", key.n1, bits(&key.n1));
        println!("N2 = {} ({} bits)", key.n2, bits(&key.n2));
        println!("k = {} ({} bits)", key.k, bits(&key.k));
        for (name, v) in [
            ("p1", &key.p1),
            ("q1", &key.q1),
            ("p2", &key.p2),
            ("q2", &key.q2),
            ("d1", &key.d1),
            ("d2", &key.d2),
        ] {
            println!("{name}: {} bits", bits(v));
        }
        validate_keypair(&key.public_key(), &key)
    } else if text.starts_with(PUBLIC_KEY_HEADER) {
        let key = parse_public_key(&text).with_context(context)?;
        println!("type: public key");
        println!("n1: {} bits", bits(&key.n1));
        println!("n2: {} bits", bits(&key.n2));
        println!("k: {} bits", bits(&key.k));
        validate_public(&key)
    } else {
        // let the parser produce the precise header error
        parse_public_key(&text).with_context(context)?;
        bail!("{}: unrecognized key file", path.display());
    };

    if report.is_valid() {
        println!("validation: valid");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("validation: {} violation(s)", report.violations.len());
        for v in &report.violations {
            println!("  - {v}");
        }
        Ok(ExitCode::from(EXIT_INVALID))
    }
}

fn selftest() -> anyhow::Result<ExitCode> {
    let report = run_selftest();
    println!("{report}");
    if report.passed() {
        return Ok(ExitCode::SUCCESS);
    }
    let failed: Vec<_> = report.failures().map(|c| c.name).collect();
    bail!("selftest failed: {}", failed.join(", "))
}

fn bench(bits: u64, iters: usize, format: Format, seed: Option<HexSeed>, out: Option<&Path>) -> anyhow::Result<ExitCode> {
    let mut rng = match seed {
        Some(HexSeed(seed)) => RandomSource::from_seed(&seed),
        None => RandomSource::from_entropy(),
    };
    let report = bench_compare(bits, iters, &mut rng)?;
    let rendered = match format {
        Format::Table => report.to_table(),
        Format::Csv => report.to_csv(),
    };
    print!("{rendered}");
    if let Some(path) = out {
        write_atomic(path, rendered.as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn attack(private: &Path, input: &Path, leak: ModulusId) -> anyhow::Result<ExitCode> {
    let private = read_private_key(&read_text(private)?).with_context(|| format!("loading {}", private.display()))?;
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let stream = read_cipher_stream(&bytes).with_context(|| format!("reading {}", input.display()))?;

    println!("leaked: factorization of {leak} = {}", private.modulus(leak));
    println!("{:>8}  {:<8}  residue", "block", "verdict");
    let (mut full, mut partial) = (0u64, 0u64);
    for (i, c) in stream.blocks.iter().enumerate() {
        let outcome = partial_compromise(&private, c, leak).with_context(|| format!("block {i}"))?;
        match outcome.verdict {
            Verdict::Full => full += 1,
            Verdict::Partial => partial += 1,
        }
        println!("{i:>8}  {:<8}  {}", outcome.verdict.to_string(), outcome.residue);
    }
    println!("blocks: {}  full recovery: {full}  residue only: {partial}", stream.blocks.len());
    Ok(ExitCode::SUCCESS)
}
