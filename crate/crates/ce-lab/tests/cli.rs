//! End-to-end tests of the ce-lab binary: outputs, exit codes, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ce_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ce-lab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn parsed_ce(out: &Output) -> f64 {
    let text = stdout(out);
    let line = text
        .lines()
        .find(|l| l.starts_with("C(S) = "))
        .unwrap_or_else(|| panic!("no CE line in {text:?}"));
    line.trim_start_matches("C(S) = ").parse().unwrap()
}

#[test]
fn exact_fixture_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(&["exact", "--state", "ghz:5", "--subset", "1-5"], dir.path());
    assert!(out.status.success());
    assert!((parsed_ce(&out) - 0.46875).abs() < 1e-10);

    let out = ce_lab(&["exact", "--state", "w:4", "--subset", "1-4"], dir.path());
    assert!((parsed_ce(&out) - 0.375).abs() < 1e-10);

    let out = ce_lab(&["exact", "--state", "ghz:2", "--subset", "1"], dir.path());
    assert!((parsed_ce(&out) - 0.25).abs() < 1e-10);
}

#[test]
fn exact_all_subsets_enumerates_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(&["exact", "--state", "ghz:3", "--all-subsets"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    // 7 non-empty subsets plus the header.
    assert_eq!(text.lines().count(), 8);
    for line in text.lines().skip(1) {
        let mut fields = line.split(',');
        let subset = fields.next().unwrap();
        let s: u32 = fields.next().unwrap().parse().unwrap();
        let ce: f64 = fields.next().unwrap().parse().unwrap();
        // GHZ_3: every proper marginal has purity 1/2, so CE depends on s only.
        let expected = if s == 1 { 0.25 } else { 0.375 };
        assert!((ce - expected).abs() < 1e-10, "subset {subset}: {ce}");
    }

    let out = ce_lab(&["exact", "--state", "ghz:13", "--all-subsets"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_then_estimate_closes_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &[
            "simulate", "--state", "ghz:3", "--strategy", "lrm-mean", "-L", "2000", "-K", "2",
            "--seed", "7", "--out-dir", ".",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let record = dir.path().join("ghz_3-lrm-mean-seed7.record");
    let result = dir.path().join("ghz_3-lrm-mean-seed7.result.json");
    assert!(record.exists() && result.exists());

    let re_estimate = dir.path().join("re.json");
    let out = ce_lab(
        &[
            "estimate",
            "--record",
            record.to_str().unwrap(),
            "--strategy",
            "lrm-mean",
            "--out",
            re_estimate.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success());

    let a: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&result).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&re_estimate).unwrap()).unwrap();
    assert_eq!(a["estimate"], b["estimate"]);
    assert_eq!(a["shots_used"], b["shots_used"]);
    // The simulate result also carries no planner echo for explicit budgets.
    assert!(a.get("plan").is_none());
}

#[test]
fn same_seed_gives_identical_record_files() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = ce_lab(
            &[
                "simulate", "--state", "ghz:2", "--strategy", "sic-mom-k2", "--eps", "0.2",
                "--delta", "0.1", "--seed", "42", "--out-dir", ".",
            ],
            dir.path(),
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let name = "ghz_2-sic-mom-k2-seed42.record";
    let a = fs::read(dir_a.path().join(name)).unwrap();
    let b = fs::read(dir_b.path().join(name)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mom_strategy_rejects_k_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &[
            "simulate", "--state", "ghz:2", "--strategy", "lrm-mom", "-L", "240", "-K", "3",
            "--delta", "0.05", "--seed", "1", "--out-dir", ".",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("K = 2"));
}

#[test]
fn conflicting_budget_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &[
            "simulate", "--state", "ghz:2", "--strategy", "lrm-mean", "-L", "100", "--eps",
            "0.1", "--delta", "0.05", "--seed", "1", "--out-dir", ".",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kind_mismatch_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &[
            "simulate", "--state", "ghz:2", "--strategy", "lrm-mean", "-L", "50", "--seed",
            "3", "--out-dir", ".",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let out = ce_lab(
        &[
            "estimate", "--record", "ghz_2-lrm-mean-seed3.record", "--strategy", "sic-mom-k2",
            "--delta", "0.05",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not match"));
}

#[test]
fn truncated_record_fails_with_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &[
            "simulate", "--state", "ghz:2", "--strategy", "lrm-mean", "-L", "50", "--seed",
            "5", "--out-dir", ".",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let path = dir.path().join("ghz_2-lrm-mean-seed5.record");
    let text = fs::read_to_string(&path).unwrap();
    let truncated: Vec<&str> = text.lines().take(30).collect();
    fs::write(&path, truncated.join("\n")).unwrap();
    let out = ce_lab(
        &["estimate", "--record", path.to_str().unwrap(), "--strategy", "lrm-mean"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(&["estimate", "--bogus-flag"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = ce_lab(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn plan_compare_shows_kopt_and_single_setting() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &["plan", "--compare", "-s", "1", "--eps", "0.05", "--delta", "0.05"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 5);
    let kopt_line = text.lines().find(|l| l.starts_with("sic-mom-kopt")).unwrap();
    assert!(kopt_line.contains("9601"));
    for line in text.lines().filter(|l| l.starts_with("sic")) {
        assert!(line.trim_end().ends_with('1'), "settings column: {line}");
    }
}

#[test]
fn external_sic_file_estimates_from_lab_data() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lab.record");
    fs::write(
        &path,
        "format: ce-record/1\nkind: sic\nn: 1\nsubset: 1\nM: 4\nseed: none\ncreator: labstack\n\n1\n1\n2\n4\n",
    )
    .unwrap();
    let out = ce_lab(
        &[
            "estimate", "--record", path.to_str().unwrap(), "--strategy", "sic-mom-k2",
            "--delta", "0.78",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("estimate"));
}

#[test]
fn verify_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(&["verify"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("all 16 checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_trials_mode_passes_generously() {
    let dir = tempfile::tempdir().unwrap();
    let out = ce_lab(
        &[
            "verify", "--seed", "3", "--trials", "40", "--eps", "0.2", "--delta", "0.1",
            "--state", "ghz:2", "--strategy", "sic-mom-k2",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("failures in 40 trials"));
}

#[test]
fn amplitude_file_states_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.txt");
    // Bell pair written as amplitudes, with a comment line.
    fs::write(&path, "# bell\n0.7071067811865476 0\n0\n0\n0.7071067811865476 0\n").unwrap();
    let out = ce_lab(
        &[
            "exact",
            "--state",
            &format!("file:{}", path.display()),
            "--subset",
            "1,2",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!((parsed_ce(&out) - 0.25).abs() < 1e-10);
}
