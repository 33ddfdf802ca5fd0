use std::process::{Command, Output};

use fano_cli::report::{AssocReport, ClassifyReport, LatticeInfo, SweepRow};
use fano_lattice::discgroup::DiscriminantRecord;
use fano_lattice::fano::{DivisorLabel, ExampleRow, TargetRow};
use fano_lattice::lattice::LatticeRecord;
use fano_lattice::{DiscriminantGroup, Lattice};
use serde_json::Value;

fn fano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fano")).args(args).output().expect("spawn fano")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = fano(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> String {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let s = stdout_ok(&a);
    assert!(s.ends_with('\n'));
    s
}

#[test]
fn lattice_info_rank_two() {
    let info: LatticeInfo = serde_json::from_str(&json(&["lattice-info", "[[2,2],[2,4]]"])).unwrap();
    assert_eq!(info.signature, (2, 0));
    assert_eq!(info.determinant, "4");
    assert_eq!(info.discriminant.invariant_factors, vec![2, 2]);
    assert_eq!(info.group, "(Z/2)^2");
}

#[test]
fn lattice_info_hyperbolic_plane() {
    let info: LatticeInfo = serde_json::from_str(&json(&["lattice-info", "[[0,1],[1,0]]"])).unwrap();
    assert!(info.even && info.unimodular);
    assert_eq!(info.signature, (1, 1));
    assert_eq!(info.determinant, "-1");
    assert_eq!(info.abs_determinant, "1");
    assert!(info.discriminant.invariant_factors.is_empty());
}

#[test]
fn lattice_info_lambda() {
    let info: LatticeInfo = serde_json::from_str(&json(&["lattice-info", "Lambda"])).unwrap();
    assert!(info.even);
    assert_eq!(info.signature, (20, 2));
    assert_eq!(info.discriminant.invariant_factors, vec![2, 2]);
    assert_eq!(info.discriminant.b, vec![vec!["1/2", "0"], vec!["0", "1/2"]]);
}

#[test]
fn lattice_info_text() {
    let t = stdout_ok(&["lattice-info", "E8"]);
    assert!(t.contains("signature:    (8,0)"));
    assert!(t.contains("parity:       even"));
    assert!(t.contains("unimodular:   yes"));
}

#[test]
fn lattice_info_reads_files_and_its_own_output() {
    let dir = std::env::temp_dir().join(format!("fano-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("lambda2.json");
    let out = fano(&["lattice-info", "Lambda2", "--format", "json", "--out", report.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let again = json(&["lattice-info", report.to_str().unwrap()]);
    let info: LatticeInfo = serde_json::from_str(&again).unwrap();
    assert_eq!(info.label, "Lambda2");
    assert_eq!(info.gram, vec![vec![2, 0], vec![0, 2]]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn assoc_verdicts() {
    let r10: AssocReport = serde_json::from_str(&json(&["assoc", "10"])).unwrap();
    assert!(r10.k3.value && !r10.cubic.value);
    let r2: AssocReport = serde_json::from_str(&json(&["assoc", "2"])).unwrap();
    assert!(r2.k3.value && r2.cubic.value);
    for v in [r10.k3, r10.cubic, r2.k3, r2.cubic] {
        assert_eq!(v.prime_criterion, v.congruence_oracle);
    }
    let t = stdout_ok(&["assoc", "10"]);
    assert!(t.lines().any(|l| l.split_whitespace().take(2).eq(["K3", "yes"])));
    assert!(t.lines().any(|l| l.split_whitespace().take(2).eq(["cubic", "no"])));
}

#[test]
fn sweep_rows_are_admissible_residues() {
    let rows: Vec<SweepRow> = serde_json::from_str(&json(&["sweep", "30"])).unwrap();
    let ds: Vec<u64> = rows.iter().map(|r| r.d).collect();
    let expected: Vec<u64> = (1..=30).filter(|d| [0, 2, 4].contains(&(d % 8))).collect();
    assert_eq!(ds, expected);
    assert_eq!(ds, vec![2, 4, 8, 10, 12, 16, 18, 20, 24, 26, 28]);
    for r in &rows {
        assert_eq!(r.orbits, if r.d % 8 == 2 { 2 } else { 1 });
        assert_eq!(r.labels.len(), r.orbits);
    }
}

#[test]
fn classify_orbits() {
    let r: ClassifyReport = serde_json::from_str(&json(&["classify", "18"])).unwrap();
    let labels: Vec<String> = r.orbits.iter().map(|o| o.divisor_label.to_string()).collect();
    assert_eq!(labels, ["Dprime_18", "Dsecond_18"]);
    for o in &r.orbits {
        assert_eq!(o.basis.len(), 3);
        assert!(o.basis.iter().all(|b| b.len() == 24));
        // Gram of the basis in I22,2 = diag(1^22, -1^2) reproduces embedded_gram.
        let dot = |x: &[i64], y: &[i64]| -> i64 {
            x.iter().zip(y).enumerate().map(|(i, (a, b))| if i < 22 { a * b } else { -a * b }).sum()
        };
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(dot(&o.basis[i], &o.basis[j]), o.embedded_gram[i][j]);
            }
        }
    }
}

#[test]
fn examples_table() {
    let rows: Vec<ExampleRow> = serde_json::from_str(&json(&["examples"])).unwrap();
    assert_eq!(rows.len(), 6);
    let t = stdout_ok(&["examples"]);
    assert_eq!(t.lines().count(), 7);
}

#[test]
fn th81_rows() {
    let rows: Vec<TargetRow> = serde_json::from_str(&json(&["th81", "1"])).unwrap();
    assert!(rows.iter().any(|r| r.e == 1 && r.d == 18 && r.divisor_label.to_string() == "Dprime_18"));
    let rows: Vec<TargetRow> = serde_json::from_str(&json(&["th81", "0"])).unwrap();
    assert!(rows.iter().any(|r| r.e == 0 && r.divisor_label.to_string() == "Dprime_10"));
}

#[test]
fn exit_codes() {
    assert_eq!(fano(&["classify", "6"]).status.code(), Some(3));
    assert_eq!(fano(&["assoc", "7"]).status.code(), Some(3));
    assert_eq!(fano(&["lattice-info", "[[1,2]"]).status.code(), Some(2));
    assert_eq!(fano(&["lattice-info", "[[1,2],[3]]"]).status.code(), Some(2));
    assert_eq!(fano(&["lattice-info", "[[1,1],[1,1]]"]).status.code(), Some(3));
    assert_eq!(fano(&["lattice-info", "[[1,2],[3,4]]"]).status.code(), Some(3));
    assert_eq!(fano(&["th81", "-1"]).status.code(), Some(3));
    assert_eq!(fano(&["sweep", "x"]).status.code(), Some(2));
    let out = fano(&["classify", "6"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn deterministic_output() {
    for args in [
        &["sweep", "60", "--format", "json"][..],
        &["classify", "26"][..],
        &["lattice-info", "I20_2", "--format", "json"][..],
        &["th81", "3"][..],
    ] {
        assert_eq!(fano(args).stdout, fano(args).stdout, "{args:?}");
    }
}

#[test]
fn golden_files() {
    let golden = |name: &str| std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
    assert_eq!(json(&["examples"]), golden("examples.json"));
    assert_eq!(stdout_ok(&["sweep", "30"]), golden("sweep_30.txt"));
    assert_eq!(json(&["th81", "1"]), golden("th81_1.json"));
}

#[test]
fn json_round_trips_through_library_parsers() {
    let info: Value = serde_json::from_str(&json(&["lattice-info", "Lambda"])).unwrap();
    let record: LatticeRecord = serde_json::from_value(info.clone()).unwrap();
    let lattice = Lattice::try_from(record).unwrap();
    assert_eq!(lattice.signature(), (20, 2));
    let disc: DiscriminantRecord = serde_json::from_value(info["discriminant"].clone()).unwrap();
    let group = DiscriminantGroup::try_from(disc.clone()).unwrap();
    assert_eq!(group.to_record(), disc);

    let rows: Vec<ExampleRow> = serde_json::from_str(&json(&["examples"])).unwrap();
    let back = serde_json::to_string_pretty(&rows).unwrap() + "\n";
    assert_eq!(back, json(&["examples"]));

    let rows: Vec<TargetRow> = serde_json::from_str(&json(&["th81", "2"])).unwrap();
    for r in &rows {
        let label: DivisorLabel = r.divisor_label.to_string().parse().unwrap();
        assert_eq!(label, r.divisor_label);
    }
    let back = serde_json::to_string_pretty(&rows).unwrap() + "\n";
    assert_eq!(back, json(&["th81", "2"]));
}
