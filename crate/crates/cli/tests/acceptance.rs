//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! to stderr (bypassing output capture) and then asserts it.

use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use gronwall::ga::{self, ConditionI, GAStatus};
use gronwall::harmonic::{lagarias_scan, LagariasVariant};
use gronwall::robin::{abundancy_records, robin_bound_scan, R_SIZE};
use gronwall::sigma::DEFAULT_MEMORY_BUDGET;
use gronwall::superabundant::{sa_check_ae, sa_enumerate};
use gronwall::table::{golden_rows, GOLDEN_TABLE};
use gronwall::{factor, g_compare, Ladder};
use serde_json::Value;

static SERIAL: Mutex<()> = Mutex::new(());

const NU: u64 = 183_783_600;

fn report(n: u32, ok: bool, elapsed: Duration, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let line = format!("criterion {n}: {verdict} ({:.2} s) {detail}\n", elapsed.as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gronwall")).args(args).output().expect("run gronwall");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json_line(s: &str) -> Value {
    serde_json::from_str(s.lines().next().expect("one record")).expect("valid json")
}

fn sa_values(limit: u64) -> Vec<u64> {
    sa_enumerate(limit, DEFAULT_MEMORY_BUDGET).unwrap().iter().map(|e| e.s.to_string().parse().unwrap()).collect()
}

#[test]
fn criterion_1_table_reproduction() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let (code, out, err) = cli(&["--format", "csv", "table1"]);
    let elapsed = t.elapsed();
    let rows = out.lines().count().saturating_sub(1);
    let exact = out == GOLDEN_TABLE;
    let mismatches: Vec<&str> = err.lines().filter(|l| l.starts_with("mismatch")).collect();
    let ok = code == 0 && exact && rows == R_SIZE && elapsed < Duration::from_secs(1);
    let detail = format!("exit {code}, {rows} rows, bit-exact: {exact}; {}", mismatches.join("; "));
    report(1, ok, elapsed, &detail);
}

#[test]
fn criterion_2_range_scan() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let (code, out, _) = cli(&["--format", "jsonl", "scan", "5041", "35280"]);
    let elapsed = t.elapsed();
    let v = json_line(&out);
    let empty = |k: &str| v[k].as_array().is_some_and(|a| a.is_empty());
    let ok = code == 0 && empty("violations") && empty("indeterminates") && elapsed < Duration::from_secs(10);
    let detail = format!("exit {code}, violations {}, indeterminates {}, max G at n = {}", v["violations"], v["indeterminates"], v["max_n"]);
    report(2, ok, elapsed, &detail);
}

#[test]
fn criterion_3_near_miss() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let (code, out, _) = cli(&["--format", "jsonl", "probe", "183783600", "--amax", "19"]);
    let v = json_line(&out);
    let primes: Vec<u64> = factor::factorize(NU).primes().collect();
    let cond_i = v["condition_i"]["status"]["verdict"] == "ga1" && v["condition_i"]["label"] == "certified";
    let witnesses: Vec<u64> =
        v["condition_ii"]["witnesses"].as_array().unwrap().iter().map(|w| w.as_u64().unwrap()).collect();
    let separated = g_compare(19 * NU, NU, &Ladder::default()).unwrap() == std::cmp::Ordering::Greater;
    let elapsed = t.elapsed();
    let ok = code == 0
        && primes == [2, 3, 5, 7, 11, 13, 17]
        && cond_i
        && witnesses.contains(&19)
        && separated
        && elapsed < Duration::from_secs(1);
    let detail = format!(
        "condition (i) over {primes:?}: {}, condition (ii) witnesses up to 19: {witnesses:?}, G(19n) > G(n) certified: {separated}",
        v["condition_i"]["status"]["verdict"]
    );
    report(3, ok, elapsed, &detail);
}

#[test]
fn criterion_4_four_is_extraordinary() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let (code, out, _) = cli(&["--format", "jsonl", "certify4"]);
    let elapsed = t.elapsed();
    let steps: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let find = |needle: &str| steps.iter().find(|s| s["claim"].as_str().unwrap().starts_with(needle)).cloned();
    let g2 = find("G(2) < 0").is_some_and(|s| s["status"] == "true");
    let b5 = find("e^gamma + 0.6483/(log log 5)^2 truncates").is_some_and(|s| s["value"] == "4.643" && s["status"] == "true");
    let g4 = find("G(4) truncates").is_some_and(|s| s["value"] == "5.357" && s["status"] == "true");
    let above = find("G(4) > 4.644").is_some_and(|s| s["status"] == "true");
    let ok = code == 0 && g2 && b5 && g4 && above && elapsed < Duration::from_secs(1);
    report(4, ok, elapsed, &format!("G(2) < 0: {g2}, bound at 5 = 4.643: {b5}, G(4) = 5.357: {g4}, G(4) > 4.644: {above}"));
}

#[test]
fn criterion_5_superabundant_oracle() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let limit = 100_000u64;
    let mut brute = Vec::new();
    let (mut bs, mut bn) = (0u128, 1u128);
    for n in 1..=limit {
        let s: u64 = (1..=n.isqrt()).filter(|d| n % d == 0).map(|d| if d * d == n { d } else { d + n / d }).sum();
        if s as u128 * bn > bs * n as u128 {
            (bs, bn) = (s as u128, n as u128);
            brute.push(n);
        }
    }
    let same = sa_values(limit) == brute;
    let l = Ladder::default();
    let million = sa_enumerate(1_000_000, DEFAULT_MEMORY_BUDGET).unwrap();
    let bad: Vec<String> = million
        .iter()
        .filter(|e| !e.factorization.is_one())
        .filter(|e| !sa_check_ae(&e.factorization, &l).unwrap().holds())
        .map(|e| e.s.to_string())
        .collect();
    let elapsed = t.elapsed();
    let ok = same && bad.is_empty() && elapsed < Duration::from_secs(60);
    let detail = format!("{} SA numbers up to 10^5 match brute force: {same}; AE1-AE3 failures among {} SA up to 10^6: {bad:?}", brute.len(), million.len());
    report(5, ok, elapsed, &detail);
}

#[test]
fn criterion_6_ga1_methods() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let l = Ladder::default();
    let m = ConditionI::NonStrict;
    let mut disagreements = Vec::new();
    let mut checked = 0u32;
    for n in 4..=100_000u64 {
        if factor::is_prime(n) {
            continue;
        }
        checked += 1;
        let d = ga::ga1_check_direct(n, &l, m).unwrap();
        if d != ga::ga1_check_criterion(n, &l, m).unwrap() || matches!(d, GAStatus::Indeterminate { .. }) {
            disagreements.push(n);
        }
    }
    let mut p_mismatch = Vec::new();
    for row in golden_rows().unwrap() {
        let r: u64 = row.r.parse().unwrap();
        let computed = match ga::ga1_check_direct(r, &l, m).unwrap() {
            GAStatus::NotGa1 { witness } => witness.to_string(),
            _ => String::new(),
        };
        if computed != row.p {
            p_mismatch.push(format!("r={r}: table {} computed {computed}", row.p));
        }
    }
    let elapsed = t.elapsed();
    let ok = disagreements.is_empty() && p_mismatch.is_empty() && elapsed < Duration::from_secs(120);
    let detail = format!(
        "{checked} composites, method disagreements {disagreements:?}; minimal witness vs table p(r): {}",
        if p_mismatch.is_empty() { "all equal".to_string() } else { p_mismatch.join(", ") }
    );
    report(6, ok, elapsed, &detail);
}

#[test]
fn criterion_7_propositions() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let l = Ladder::default();
    let two_p = ga::prop_2p_scan(10_000, &l, ConditionI::NonStrict).unwrap();
    let mismatched: Vec<u64> = two_p.iter().filter(|e| !e.matches()).map(|e| e.p).collect();
    let pq = ga::prop_pq_scan(1_000_000, &l, ConditionI::NonStrict).unwrap();
    let elapsed = t.elapsed();
    let ok = mismatched.is_empty() && pq.violations.is_empty() && pq.indeterminates.is_empty() && elapsed < Duration::from_secs(120);
    let detail = format!(
        "2p: {} primes, mismatches {mismatched:?}; pq: {} products, violations {:?}, indeterminates {:?}",
        two_p.len(),
        pq.checked,
        pq.violations,
        pq.indeterminates
    );
    report(7, ok, elapsed, &detail);
}

#[test]
fn criterion_8_unconditional_inequalities() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let l = Ladder::default();
    let bound = robin_bound_scan(3, 1_000_000, &l, DEFAULT_MEMORY_BUDGET).unwrap();
    let lag = lagarias_scan(2, 100_000, LagariasVariant::Doubled, &l, DEFAULT_MEMORY_BUDGET).unwrap();
    let elapsed = t.elapsed();
    let ok = bound.failures.is_empty()
        && bound.indeterminates.is_empty()
        && lag.failures.is_empty()
        && lag.indeterminates.is_empty()
        && elapsed < Duration::from_secs(120);
    let detail = format!(
        "bound margin 3..10^6: failures {:?}, indeterminates {:?}; doubled Lagarias 2..10^5: failures {:?}, indeterminates {:?}",
        bound.failures, bound.indeterminates, lag.failures, lag.indeterminates
    );
    report(8, ok, elapsed, &detail);
}

#[test]
fn criterion_9_records_are_superabundant() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let records = abundancy_records(1_000_000);
    let sa = sa_values(1_000_000);
    let missing: Vec<u64> = records.iter().copied().filter(|r| sa.binary_search(r).is_err()).collect();
    let elapsed = t.elapsed();
    let ok = missing.is_empty() && elapsed < Duration::from_secs(60);
    report(9, ok, elapsed, &format!("{} record setters, {} SA numbers, missing from SA list: {missing:?}", records.len(), sa.len()));
}
