use std::process::{Command, Output};

use subgroup_codes::cli::cache::{Cache, CacheEntry, CacheKey, CACHE_ENV};
use subgroup_codes::cli::report::{ReportEnvelope, TransversalReport, SCHEMA};
use subgroup_codes::cli::suite::SuiteSummary;
use subgroup_codes::group::Subgroup;
use subgroup_codes::perfect::{Interpretation, Policy, Provenance, RuleId, Status, SweepRow};
use subgroup_codes::perm::Permutation;
use subgroup_codes::Caps;

const D4_H1: &str = "(1 4 7 6)(2 8 3 5); (2 5)(3 8)(4 6)";
const D4_H2: &str = "(1 6)(2 4)(3 8)(5 7); (1 8 5 4)(2 7 3 6)";

fn subcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subcodes"))
        .args(args)
        .env_remove(CACHE_ENV)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn envelope(o: &Output) -> ReportEnvelope {
    serde_json::from_slice(&o.stdout).expect("report JSON")
}

#[test]
fn classify_dihedral_pair() {
    let h1 = subcodes(&["--json", "classify", "--n", "8", "--gens", D4_H1]);
    assert_eq!(code(&h1), 0, "{}", String::from_utf8_lossy(&h1.stderr));
    let r1 = envelope(&h1);
    assert_eq!(r1.schema, SCHEMA);
    assert_eq!(r1.report.verdict, Status::NotPerfect);
    assert_eq!(r1.report.certificate.as_ref().unwrap().kind, "bad_double_coset");

    let h2 = subcodes(&["--json", "classify", "--n", "8", "--gens", D4_H2]);
    assert_eq!(code(&h2), 0);
    let r2 = envelope(&h2);
    assert_eq!(r2.report.verdict, Status::Perfect);
    assert_eq!(r2.report.certificate.as_ref().unwrap().data.len(), 40320 / 8);
}

#[test]
fn odd_index_rule_comes_first() {
    let o = subcodes(&["--json", "classify", "--n", "3", "--gens", "(1 2)"]);
    assert_eq!(code(&o), 0);
    let r = envelope(&o);
    assert_eq!(r.report.verdict, Status::Perfect);
    assert_eq!(r.report.rule_trace[0].rule, RuleId::OddIndex);
    assert_eq!(r.report.provenance, Provenance::OracleProven);

    let fast = envelope(&subcodes(&[
        "--json", "classify", "--n", "3", "--gens", "(1 2)", "--policy", "fast",
    ]));
    assert_eq!(fast.report.provenance, Provenance::TheoremFastPath(RuleId::OddIndex));
    assert_eq!(fast.report.rule_trace.len(), 1);
}

#[test]
fn report_json_round_trips() {
    let o = subcodes(&[
        "--json",
        "classify",
        "--n",
        "6",
        "--gens",
        "(1 2 3 4)(5 6)",
        "--policy",
        "checked",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let r = envelope(&o);
    assert_eq!(serde_json::from_str::<ReportEnvelope>(&r.to_json()).unwrap(), r);
    for field in [
        "schema",
        "n",
        "generators",
        "order",
        "verdict",
        "provenance",
        "rule_trace",
        "certificate",
        "discrepancies",
        "timing_ms",
        "caps",
    ] {
        assert!(text.contains(&format!("\"{field}\"")), "missing {field}");
    }
    let gens: Vec<Permutation> = r
        .report
        .generators
        .iter()
        .map(|g| Permutation::parse(g, 6).unwrap())
        .collect();
    let h = Subgroup::close(&gens, 6, 1 << 20).unwrap();
    assert_eq!(h.order(), r.report.order);
}

#[test]
fn exit_code_contract() {
    assert_eq!(code(&subcodes(&["--help"])), 0);
    assert_eq!(code(&subcodes(&[])), 1);
    assert_eq!(code(&subcodes(&["classify", "--n", "4", "--gens", "(1 5)"])), 1);
    assert_eq!(code(&subcodes(&["classify", "--n", "4", "--gens", "(1 2"])), 1);
    assert_eq!(
        code(&subcodes(&[
            "classify", "--n", "4", "--gens", "(1 2)", "--policy", "maybe"
        ])),
        1
    );
    assert_eq!(code(&subcodes(&["numtheory-check", "--l-max", "21"])), 1);
    assert_eq!(code(&subcodes(&["classify", "--n", "33", "--gens", "(1 2)"])), 2);
    assert_eq!(code(&subcodes(&["oracle", "--n", "11", "--gens", "(1 2)(3 4)"])), 2);
    assert_eq!(code(&subcodes(&["sweep-cyclic", "--n", "11"])), 2);
    assert_eq!(code(&subcodes(&["numtheory-check", "--l-max", "2"])), 0);
}

#[test]
fn oracle_and_transversal_commands() {
    let o = subcodes(&["--json", "oracle", "--n", "4", "--gens", "(1 2)(3 4)"]);
    assert_eq!(code(&o), 0);
    let r = envelope(&o);
    assert_eq!(r.command, "oracle");
    assert_eq!(r.report.verdict, Status::NotPerfect);
    assert_eq!(r.report.provenance, Provenance::OracleProven);

    let t = subcodes(&["--json", "transversal", "--n", "3", "--gens", "(1 2)"]);
    assert_eq!(code(&t), 0);
    let tr: TransversalReport = serde_json::from_slice(&t.stdout).unwrap();
    assert_eq!(tr.transversal.unwrap(), vec!["e", "(1 2 3)", "(1 3 2)"]);

    let none = subcodes(&["--json", "transversal", "--n", "4", "--gens", "(1 2)(3 4)"]);
    let tr: TransversalReport = serde_json::from_slice(&none.stdout).unwrap();
    assert_eq!(tr.transversal, None);
}

#[test]
fn sweep_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.jsonl");
    let o = subcodes(&["sweep-cyclic", "--n", "6", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows: Vec<SweepRow> = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let row = rows.iter().find(|r| r.cycle_type == "[4,2]").unwrap();
    assert!(!row.readings_agree);
    assert_eq!(
        std::fs::read_dir(dir.path()).unwrap().count(),
        1,
        "temporary file left behind"
    );

    let two = subcodes(&["--json", "sweep-cyclic", "--n", "2"]);
    let rows: Vec<SweepRow> = String::from_utf8(two.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].oracle, Status::Perfect);

    let four = subcodes(&["--json", "sweep-cyclic", "--n", "4"]);
    assert_eq!(String::from_utf8(four.stdout).unwrap().lines().count(), 3);
}

#[test]
fn quick_suite_exits_cleanly() {
    let o = subcodes(&["--json", "paper-suite"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s: SuiteSummary = serde_json::from_slice(&o.stdout).unwrap();
    for name in ["d4_h1", "d4_h2", "d4_isomorphic", "d4_h1_coset"] {
        assert!(s.fixture(name).unwrap().agrees, "{name}");
    }
}

#[test]
fn cache_serves_the_same_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_subcodes"))
            .args(["--json", "classify", "--n", "8", "--gens", D4_H2])
            .env(CACHE_ENV, &path)
            .output()
            .unwrap()
    };
    let first = envelope(&run());
    let second = envelope(&run());
    assert!(!first.cached);
    assert!(second.cached);
    assert_eq!(first.report, second.report);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);
}

#[test]
fn cache_rejects_mismatched_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path().join("c.jsonl"));
    let caps = Caps::default();
    let o = subcodes(&["--json", "classify", "--n", "4", "--gens", "(1 2)(3 4)"]);
    let report = envelope(&o).report;
    let key = CacheKey {
        n: 4,
        generators: report.generators.clone(),
        policy: Policy::FastWithOracleCheck,
        interpretation: Interpretation::NotASquare,
    };
    cache
        .store(&CacheEntry::new(key.clone(), caps, report.clone()))
        .unwrap();
    assert!(cache.lookup(&key, &caps).unwrap().is_some());
    assert!(cache.lookup(&key, &caps.allow_big()).unwrap().is_none());
    let other = CacheKey {
        policy: Policy::OracleOnly,
        ..key.clone()
    };
    assert!(cache.lookup(&other, &caps).unwrap().is_none());

    let mut stale = CacheEntry::new(key.clone(), caps, report.clone());
    stale.tool_version = "0.0.0".into();
    let mut tampered = CacheEntry::new(key.clone(), caps, report);
    tampered.report.certificate.as_mut().unwrap().data[0] = "e".into();
    let fresh = Cache::new(dir.path().join("d.jsonl"));
    fresh.store(&stale).unwrap();
    fresh.store(&tampered).unwrap();
    assert!(fresh.lookup(&key, &caps).unwrap().is_none());
}
