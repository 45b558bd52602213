use std::collections::hash_map::RandomState;
use std::hash::{BuildHasher, Hasher};
use std::path::Path;
use std::process::{Command, Output};

use bcb_cli::ResultCache;
use bcb_core::{count_bisections, CountConfig, Strategy};
use serde_json::Value;

fn bcb(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcb"))
        .env_remove("BCB_CACHE")
        .arg("--cache")
        .arg(cache)
        .args(args)
        .output()
        .expect("failed to spawn bcb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn count_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = bcb(&cache, &["--json", "count", "--n", "8"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["total"], "6");
    assert_eq!(v["nontrivial"], "4");
    assert_eq!(v["strategy"], "MeetInMiddle");
    assert!(v["elapsed_ms"].is_u64());

    let o = bcb(&cache, &["--json", "count", "--n", "8", "--strategy", "brute"]);
    let v = &json_lines(&o)[0];
    assert_eq!(v["total"], "6");
    assert_eq!(v["strategy"], "BruteForce");

    let o = bcb(&cache, &["--json", "count", "--n", "50"]);
    assert_eq!(json_lines(&o)[0]["total"], "6");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    assert_eq!(bcb(&cache, &["table", "--max-n", "0"]).status.code(), Some(2));
    assert_eq!(bcb(&cache, &["count"]).status.code(), Some(2));
    assert_eq!(bcb(&cache, &["count", "--n", "0"]).status.code(), Some(2));
    assert_eq!(bcb(&cache, &["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(bcb(&cache, &["count", "--n", "30", "--strategy", "brute"]).status.code(), Some(3));
    assert_eq!(bcb(&cache, &["bijection", "--n", "21"]).status.code(), Some(3));
    assert_eq!(
        bcb(&cache, &["--memory-gib", "0", "count", "--n", "40"]).status.code(),
        Some(3)
    );
    assert_eq!(bcb(&cache, &["count", "--n", "8", "--shard", "1"]).status.code(), Some(2));
}

#[test]
fn table_diff() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = bcb(&cache, &["table", "--max-n", "14", "--diff"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("13\t144\t128\t16\t144\tok"));
    assert!(text.trim_end().ends_with("mismatches: 0"));

    // a corrupted cache entry is caught by the diff
    let mut c = ResultCache::open(&cache).unwrap();
    let mut bad = c.get(14).unwrap().count.clone();
    bad.total = 16u32.into();
    bad.nontrivial = 14u32.into();
    let text = c.to_json().replace("\"total\": \"14\"", "\"total\": \"16\"");
    std::fs::write(&cache, text).unwrap();
    let o = bcb(&cache, &["table", "--max-n", "14", "--diff"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("MISMATCH"));
    assert!(c.insert_count(bad).is_err());
}

#[test]
fn appendix_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = bcb(&cache, &["appendix", "--n", "24", "--diff"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("24\t32\t1000110111011000100010001"));
    assert!(text.contains("24\t16\t1011001111010100101000101"));
    assert!(text.contains("match"));

    let o = bcb(&cache, &["appendix", "--n", "4", "--diff"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1);

    let o = bcb(&cache, &["--json", "appendix", "--n", "29"]);
    let total: u64 = json_lines(&o).iter().map(|v| v["orbit_size"].as_u64().unwrap()).sum();
    assert_eq!(total, 2048);

    // orbits are cached next to the count
    let c = ResultCache::open(&cache).unwrap();
    assert_eq!(c.get(29).unwrap().orbits.as_ref().unwrap().len(), 1);
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    for suite in ["primes", "pow2", "families", "bijection", "backmap", "bounds"] {
        let o = bcb(&cache, &["--json", "verify", suite]);
        assert!(o.status.success(), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
        let lines = json_lines(&o);
        assert!(!lines.is_empty());
        assert!(lines.iter().all(|v| v["pass"] == true && v["suite"] == suite));
    }
}

#[test]
fn families_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = bcb(&cache, &["families", "--limit", "100"]);
    assert_eq!(stdout(&o), "13\n14\n33\n34\n61\n62\n97\n98\n");
    let o = bcb(&cache, &["families", "--max-n", "14", "--family", "fourtermswap"]);
    let w = &json_lines(&o)[0];
    assert_eq!(w["n"], 13);
    assert_eq!(w["bisection_bits"], "11110011001000");
    assert_eq!(w["positions"], serde_json::json!([4, 5, 7, 10]));
}

#[test]
fn bijection_and_backmap_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = bcb(&cache, &["bijection", "--n", "13"]);
    let v = &json_lines(&o)[0];
    assert_eq!((v["j_n"].as_str(), v["x_n"].as_str(), v["equal"].as_bool()), (Some("144"), Some("144"), Some(true)));

    let o = bcb(&cache, &["--json", "backmap", "--n", "8"]);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 4);
    let first = lines.iter().find(|v| v["bits"] == "100110001").unwrap();
    assert_eq!(first["theta"], serde_json::json!([0, -1, 0, 1, 0, -1, -1, 0]));
    assert_eq!(first["theta_ivp"], true);
}

#[test]
fn bounds_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let o = bcb(&cache, &["bounds", "--max-n", "16"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["n", "exact", "holder", "remark_2^{n+2}/n", "refined", "pow2"]);
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[8][1], "6");
    assert!(rows[8][5].starts_with("log2:"));
    assert!(rows[16][5].starts_with("log2:"));
    assert_eq!(rows[3][3], "");
}

#[test]
fn sharded_count_and_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let manifest = dir.path().join("shards.jsonl");
    let mut text = String::new();
    for id in 0..8 {
        let id = id.to_string();
        let o = bcb(&cache, &["count", "--n", "20", "--prefix-len", "3", "--shard", &id]);
        assert!(o.status.success());
        text += &stdout(&o);
    }
    std::fs::write(&manifest, &text).unwrap();
    let o = bcb(&cache, &["--json", "merge", manifest.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json_lines(&o)[0]["total"], "6");

    // a partial manifest is refused
    let partial: String = text.lines().take(7).map(|l| format!("{l}\n")).collect();
    std::fs::write(&manifest, partial).unwrap();
    assert_eq!(bcb(&cache, &["merge", manifest.to_str().unwrap()]).status.code(), Some(2));

    for threads in ["1", "3"] {
        let o = bcb(&cache, &["--no-cache", "--threads", threads, "--json", "count", "--n", "24", "--prefix-len", "5"]);
        assert_eq!(json_lines(&o)[0]["total"], "50");
    }
}

#[test]
fn cache_env_and_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("env-cache.json");
    let o = Command::new(env!("CARGO_BIN_EXE_bcb"))
        .env("BCB_CACHE", &cache)
        .args(["table", "--max-n", "20"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let c = ResultCache::open(&cache).unwrap();
    assert_eq!(c.len(), 20);

    // five random rows per run, cached against fresh
    let mut h = RandomState::new().build_hasher();
    h.write_u64(0);
    let mut seed = h.finish();
    let cfg = CountConfig::default();
    for _ in 0..5 {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let n = 1 + (seed >> 33) as usize % 20;
        let fresh = count_bisections(n, Strategy::MeetInMiddle, &cfg).unwrap();
        assert!(c.get(n).unwrap().count.same_counts(&fresh), "n={n}");
    }

    // --no-cache leaves no file behind
    let none = dir.path().join("none.json");
    let o = bcb(&none, &["--no-cache", "count", "--n", "9"]);
    assert!(o.status.success());
    assert!(!none.exists());
}
