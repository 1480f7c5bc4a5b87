use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dmrsa_core::codec::write_private_key;
use dmrsa_core::selftest::example_private_key;
use tempfile::TempDir;

fn dmrsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmrsa"))
        .args(args)
        .output()
        .expect("run dmrsa")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn keygen(dir: &TempDir, stem: &str, extra: &[&str]) -> (PathBuf, PathBuf) {
    let public = path(dir, &format!("{stem}.pub"));
    let private = path(dir, &format!("{stem}.key"));
    let mut args = vec!["keygen", "--out-pub", s(&public), "--out-priv", s(&private)];
    args.extend_from_slice(extra);
    let out = dmrsa(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    (public, private)
}

#[test]
fn keygen_is_reproducible_with_seed() {
    let dir = TempDir::new().unwrap();
    let (pub_a, priv_a) = keygen(&dir, "a", &["--bits1", "32", "--bits2", "40", "--seed", "00"]);
    let (pub_b, priv_b) = keygen(&dir, "b", &["--bits1", "32", "--bits2", "40", "--seed", "00"]);
    assert_eq!(fs::read(&pub_a).unwrap(), fs::read(&pub_b).unwrap());
    assert_eq!(fs::read(&priv_a).unwrap(), fs::read(&priv_b).unwrap());
    let (_, priv_c) = keygen(&dir, "c", &["--bits1", "32", "--bits2", "40", "--seed", "01"]);
    assert_ne!(fs::read(&priv_a).unwrap(), fs::read(&priv_c).unwrap());
}

#[test]
fn keygen_reports_modulus_sizes() {
    let dir = TempDir::new().unwrap();
    for seed in ["00", "0a", "ff", "1234"] {
        let public = path(&dir, "k.pub");
        let private = path(&dir, "k.key");
        let out = dmrsa(&[
            "keygen", "--bits1", "16", "--bits2", "24", "--seed", seed, "--out-pub", s(&public), "--out-priv",
            s(&private),
        ]);
        assert!(out.status.success());
        let err = stderr(&out);
        assert!(err.contains("N1: 31 bits") || err.contains("N1: 32 bits"), "{err}");
        assert!(err.contains("N2: 47 bits") || err.contains("N2: 48 bits"), "{err}");
        assert!(stdout(&out).is_empty());
    }
}

#[test]
fn keygen_rejects_even_exponent_and_writes_nothing() {
    let dir = TempDir::new().unwrap();
    let public = path(&dir, "x.pub");
    let private = path(&dir, "x.key");
    let out = dmrsa(&["keygen", "--pubexp", "6", "--out-pub", s(&public), "--out-priv", s(&private)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("odd"));
    assert!(!public.exists() && !private.exists());
}

#[test]
fn keygen_exhaustion_is_an_error() {
    let dir = TempDir::new().unwrap();
    let public = path(&dir, "x.pub");
    let private = path(&dir, "x.key");
    let out = dmrsa(&[
        "keygen", "--bits1", "4", "--bits2", "4", "--pubexp", "7", "--seed", "00", "--out-pub", s(&public),
        "--out-priv", s(&private),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("attempts"));
    assert!(!public.exists() && !private.exists());
}

#[test]
fn invalid_flags_print_usage() {
    for args in [
        vec!["keygen", "--bogus"],
        vec!["encrypt", "--pub", "a"],
        vec!["frobnicate"],
        vec!["attack", "--priv", "a", "--in", "b", "--leak", "n3"],
        vec!["keygen", "--seed", "xyz", "--out-pub", "a", "--out-priv", "b"],
    ] {
        let out = dmrsa(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).contains("Usage") || stderr(&out).contains("--help"), "{args:?}");
    }
    assert!(dmrsa(&["--help"]).status.success());
}

#[test]
fn encrypt_decrypt_round_trip_and_empty_file() {
    let dir = TempDir::new().unwrap();
    let (public, private) = keygen(&dir, "k", &["--bits1", "32", "--bits2", "32", "--seed", "42"]);
    for (name, contents) in [
        ("empty", Vec::new()),
        ("text", b"attack at dawn\n".to_vec()),
        ("zeros", vec![0u8; 1000]),
        ("binary", (0..=255u8).cycle().take(5000).collect()),
    ] {
        let input = path(&dir, name);
        let ct = path(&dir, &format!("{name}.dmr"));
        let back = path(&dir, &format!("{name}.out"));
        fs::write(&input, &contents).unwrap();
        assert!(dmrsa(&["encrypt", "--pub", s(&public), "--in", s(&input), "--out", s(&ct)]).status.success());
        assert!(dmrsa(&["decrypt", "--priv", s(&private), "--in", s(&ct), "--out", s(&back)]).status.success());
        assert_eq!(fs::read(&back).unwrap(), contents, "{name}");
    }
    assert_eq!(fs::read(path(&dir, "empty.dmr")).unwrap().len(), 24);
}

#[test]
fn decrypt_with_wrong_key_never_silently_succeeds() {
    let dir = TempDir::new().unwrap();
    let (public, _) = keygen(&dir, "right", &["--bits1", "32", "--bits2", "32", "--seed", "01"]);
    let (_, wrong) = keygen(&dir, "wrong", &["--bits1", "32", "--bits2", "32", "--seed", "02"]);
    let input = path(&dir, "msg");
    let message: Vec<u8> = (0..4000u32).map(|i| (i * 7 % 251) as u8).collect();
    fs::write(&input, &message).unwrap();
    let ct = path(&dir, "msg.dmr");
    assert!(dmrsa(&["encrypt", "--pub", s(&public), "--in", s(&input), "--out", s(&ct)]).status.success());

    let out_path = path(&dir, "msg.out");
    let out = dmrsa(&["decrypt", "--priv", s(&wrong), "--in", s(&ct), "--out", s(&out_path)]);
    if out.status.success() {
        assert_ne!(fs::read(&out_path).unwrap(), message);
    } else {
        assert_eq!(out.status.code(), Some(1));
        assert!(!out_path.exists(), "failed decrypt must not leave output behind");
    }
}

#[test]
fn corrupt_stream_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (public, private) = keygen(&dir, "k", &["--bits1", "24", "--bits2", "24", "--seed", "03"]);
    let input = path(&dir, "msg");
    fs::write(&input, b"some plaintext").unwrap();
    let ct = path(&dir, "msg.dmr");
    assert!(dmrsa(&["encrypt", "--pub", s(&public), "--in", s(&input), "--out", s(&ct)]).status.success());
    let mut bytes = fs::read(&ct).unwrap();
    bytes[0] = b'X';
    fs::write(&ct, &bytes).unwrap();
    let out_path = path(&dir, "msg.out");
    let out = dmrsa(&["decrypt", "--priv", s(&private), "--in", s(&ct), "--out", s(&out_path)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad magic"));
    assert!(!out_path.exists());
}

#[test]
fn inspect_example_private_key() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "example.key");
    fs::write(&key, write_private_key(&example_private_key())).unwrap();
    let out = dmrsa(&["inspect", "--key", s(&key)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("type: private key"));
    assert!(text.contains("N1 = 5141 (13 bits)"), "{text}");
    assert!(text.contains("validation: valid"));
}

#[test]
fn inspect_tampered_key_exits_two() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "tampered.key");
    let text = write_private_key(&example_private_key()).replace("d1 = 4279", "d1 = 4280");
    fs::write(&key, text).unwrap();
    let out = dmrsa(&["inspect", "--key", s(&key)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("k·d1 ≢ 1 mod φ1"));
}

#[test]
fn inspect_public_key_prints_bit_lengths_only() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "example.pub");
    fs::write(&key, "DMRSA PUBLIC KEY V1\nn1 = 5141\nn2 = 5429\nk = 7\n").unwrap();
    let out = dmrsa(&["inspect", "--key", s(&key)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n1: 13 bits") && text.contains("n2: 13 bits") && text.contains("k: 3 bits"));
    assert!(!text.contains("5141"));
}

#[test]
fn inspect_unparseable_key_exits_one() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "bad.key");
    fs::write(&key, "DMRSA PRIVATE KEY V1\np1 = 53\nq1 = 97\n").unwrap();
    let out = dmrsa(&["inspect", "--key", s(&key)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing field `p2`"));

    fs::write(&key, "DMRSA PUBLIC KEY V2\n").unwrap();
    let out = dmrsa(&["inspect", "--key", s(&key)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unsupported key file version"));
}

#[test]
fn encrypt_refuses_invalid_public_key() {
    let dir = TempDir::new().unwrap();
    let key = path(&dir, "bad.pub");
    fs::write(&key, "DMRSA PUBLIC KEY V1\nn1 = 5141\nn2 = 5141\nk = 7\n").unwrap();
    let input = path(&dir, "msg");
    fs::write(&input, b"x").unwrap();
    let out = dmrsa(&["encrypt", "--pub", s(&key), "--in", s(&input), "--out", s(&path(&dir, "o"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("N1 = N2"));
}

#[test]
fn selftest_reports_example_values() {
    let out = dmrsa(&["selftest"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("d1 = 4279"));
    assert!(text.contains("w2 = 3757"));
    assert!(text.contains("w1 = 787"));
    assert!(text.contains("2979"));
    assert!(text.contains("selftest passed"));
}

#[test]
fn bench_emits_all_rows() {
    let dir = TempDir::new().unwrap();
    let report = path(&dir, "bench.csv");
    let out = dmrsa(&["bench", "--bits", "32", "--iters", "3", "--format", "csv", "--seed", "00", "--out", s(&report)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "operation,bits,iterations,mean_ns,median_ns");
    let ops: Vec<_> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(
        ops,
        ["rsa-encrypt", "dmrsa-encrypt", "rsa-decrypt", "dmrsa-decrypt", "dmrsa-decrypt-component"]
    );
    assert_eq!(fs::read_to_string(&report).unwrap(), text);

    let out = dmrsa(&["bench", "--bits", "32", "--iters", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("encrypt ratio"));

    assert_eq!(dmrsa(&["bench", "--bits", "8"]).status.code(), Some(1));
}

#[test]
fn attack_on_example_key() {
    let dir = TempDir::new().unwrap();
    let private = path(&dir, "example.key");
    let public = path(&dir, "example.pub");
    let key = example_private_key();
    fs::write(&private, write_private_key(&key)).unwrap();
    fs::write(&public, dmrsa_core::codec::write_public_key(&key.public_key())).unwrap();
    let input = path(&dir, "a");
    fs::write(&input, b"A").unwrap();
    let ct = path(&dir, "a.dmr");
    assert!(dmrsa(&["encrypt", "--pub", s(&public), "--in", s(&input), "--out", s(&ct)]).status.success());

    let out = dmrsa(&["attack", "--priv", s(&private), "--in", s(&ct), "--leak", "n1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("full      65"), "{text}");
    assert!(text.contains("full recovery: 1  residue only: 0"));

    // three bytes per block: "zzz" = 8026746 exceeds both moduli
    fs::write(&input, b"zzz").unwrap();
    assert!(dmrsa(&["encrypt", "--pub", s(&public), "--in", s(&input), "--out", s(&ct)]).status.success());
    let out = dmrsa(&["attack", "--priv", s(&private), "--in", s(&ct), "--leak", "n2"]);
    let text = stdout(&out);
    assert!(text.contains(&format!("partial   {}", 8026746 % 5429)), "{text}");
}
