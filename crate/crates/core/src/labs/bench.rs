use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use num_traits::One;

use crate::error::{Error, Result};
use crate::keys::{generate_keypair, KeyGenParams, ModulusId, DEFAULT_PUBLIC_EXPONENT};
use crate::numtheory::{gcd, gen_prime, mod_inverse, mod_pow, Natural, RandomSource};
use crate::scheme::{decrypt, decrypt_component, encrypt};

/// Expected band for DM-RSA encrypt time over single-modulus encrypt time.
/// Informational only: timings depend on the machine.
pub const EFFICIENCY_BAND: (f64, f64) = (1.5, 3.0);

/// Single-modulus textbook RSA, the baseline the benchmark compares against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalKey {
    pub n: Natural,
    pub e: Natural,
    pub d: Natural,
}

impl ClassicalKey {
    /// Two distinct `bits`-bit primes with `gcd(e, φ) = 1`.
    pub fn generate(bits: u64, e: &Natural, rng: &mut RandomSource) -> Result<Self> {
        loop {
            let p = gen_prime(bits, rng)?;
            let q = gen_prime(bits, rng)?;
            if p == q {
                continue;
            }
            let phi = (&p - 1u8) * (&q - 1u8);
            if !gcd(e, &phi).is_one() {
                continue;
            }
            return Ok(Self {
                n: &p * &q,
                e: e.clone(),
                d: mod_inverse(e, &phi)?,
            });
        }
    }

    pub fn encrypt(&self, z: &Natural) -> Result<Natural> {
        if z >= &self.n {
            return Err(Error::MessageTooLarge { bound: self.n.clone() });
        }
        mod_pow(z, &self.e, &self.n)
    }

    pub fn decrypt(&self, c: &Natural) -> Result<Natural> {
        mod_pow(c, &self.d, &self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchOp {
    ClassicalEncrypt,
    DmEncrypt,
    ClassicalDecrypt,
    DmDecrypt,
    DmComponentDecrypt,
}

impl BenchOp {
    pub const ALL: [BenchOp; 5] = [
        BenchOp::ClassicalEncrypt,
        BenchOp::DmEncrypt,
        BenchOp::ClassicalDecrypt,
        BenchOp::DmDecrypt,
        BenchOp::DmComponentDecrypt,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BenchOp::ClassicalEncrypt => "rsa-encrypt",
            BenchOp::DmEncrypt => "dmrsa-encrypt",
            BenchOp::ClassicalDecrypt => "rsa-decrypt",
            BenchOp::DmDecrypt => "dmrsa-decrypt",
            BenchOp::DmComponentDecrypt => "dmrsa-decrypt-component",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timing {
    pub op: BenchOp,
    pub mean: Duration,
    pub median: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchReport {
    pub bits: u64,
    pub iterations: usize,
    pub rows: Vec<Timing>,
}

impl BenchReport {
    pub fn timing(&self, op: BenchOp) -> &Timing {
        self.rows
            .iter()
            .find(|t| t.op == op)
            .expect("every report carries all five rows")
    }

    /// Mean DM-RSA encrypt time over mean single-modulus encrypt time.
    pub fn encrypt_ratio(&self) -> f64 {
        ratio(self.timing(BenchOp::DmEncrypt).mean, self.timing(BenchOp::ClassicalEncrypt).mean)
    }

    pub fn decrypt_ratio(&self) -> f64 {
        ratio(self.timing(BenchOp::DmDecrypt).mean, self.timing(BenchOp::ClassicalDecrypt).mean)
    }

    pub fn encrypt_ratio_in_band(&self) -> bool {
        let r = self.encrypt_ratio();
        (EFFICIENCY_BAND.0..=EFFICIENCY_BAND.1).contains(&r)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "prime bits: {}   iterations: {}", self.bits, self.iterations);
        let _ = writeln!(out, "{:<26}{:>16}{:>16}", "operation", "mean (us)", "median (us)");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:<26}{:>16.3}{:>16.3}",
                row.op.label(),
                micros(row.mean),
                micros(row.median)
            );
        }
        let _ = writeln!(
            out,
            "encrypt ratio dmrsa/rsa: {:.3} (expected band {:.1}-{:.1}, {})",
            self.encrypt_ratio(),
            EFFICIENCY_BAND.0,
            EFFICIENCY_BAND.1,
            if self.encrypt_ratio_in_band() { "inside" } else { "outside" }
        );
        let _ = writeln!(out, "decrypt ratio dmrsa/rsa: {:.3}", self.decrypt_ratio());
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("operation,bits,iterations,mean_ns,median_ns\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.op.label(),
                self.bits,
                self.iterations,
                row.mean.as_nanos(),
                row.median.as_nanos()
            );
        }
        out
    }
}

fn ratio(a: Duration, b: Duration) -> f64 {
    a.as_secs_f64() / b.as_secs_f64()
}

fn micros(d: Duration) -> f64 {
    d.as_secs_f64() * 1e6
}

fn summarize(op: BenchOp, mut samples: Vec<Duration>) -> Timing {
    samples.sort_unstable();
    let total: Duration = samples.iter().sum();
    let mean = total / samples.len() as u32;
    let mid = samples.len() / 2;
    let median = if samples.len().is_multiple_of(2) {
        (samples[mid - 1] + samples[mid]) / 2
    } else {
        samples[mid]
    };
    let floor = Duration::from_nanos(1);
    Timing {
        op,
        mean: mean.max(floor),
        median: median.max(floor),
    }
}

fn time<T>(mut f: impl FnMut() -> Result<T>) -> Result<Duration> {
    let start = Instant::now();
    black_box(f()?);
    Ok(start.elapsed())
}

/// Times single-modulus RSA against DM-RSA at the same prime size.
///
/// Both schemes use `k = 65537` and `bits`-bit primes; the same `iters`
/// random messages (drawn below the classical modulus) feed every row.
/// Runs strictly sequentially on the calling thread.
pub fn bench_compare(bits: u64, iters: usize, rng: &mut RandomSource) -> Result<BenchReport> {
    if bits < 16 {
        return Err(Error::InvalidParams(format!("benchmark prime size must be at least 16 bits, got {bits}")));
    }
    if iters == 0 {
        return Err(Error::InvalidParams("benchmark needs at least one iteration".into()));
    }
    let e = Natural::from(DEFAULT_PUBLIC_EXPONENT);
    let classical = ClassicalKey::generate(bits, &e, rng)?;
    let (public, private) = generate_keypair(&KeyGenParams::new(bits, bits, e), rng)?;

    let messages: Vec<Natural> = (0..iters).map(|_| rng.below(&classical.n)).collect();
    let classical_ct = messages
        .iter()
        .map(|z| classical.encrypt(z))
        .collect::<Result<Vec<_>>>()?;
    let dm_ct = messages
        .iter()
        .map(|z| encrypt(&public, z))
        .collect::<Result<Vec<_>>>()?;

    let mut samples: [Vec<Duration>; 5] = Default::default();
    for i in 0..iters {
        samples[0].push(time(|| classical.encrypt(&messages[i]))?);
        samples[1].push(time(|| encrypt(&public, &messages[i]))?);
        samples[2].push(time(|| classical.decrypt(&classical_ct[i]))?);
        samples[3].push(time(|| decrypt(&private, &dm_ct[i]))?);
        samples[4].push(time(|| decrypt_component(&private, &dm_ct[i], ModulusId::N1))?);
    }
    let rows = BenchOp::ALL
        .into_iter()
        .zip(samples)
        .map(|(op, s)| summarize(op, s))
        .collect();
    Ok(BenchReport {
        bits,
        iterations: iters,
        rows,
    })
}
