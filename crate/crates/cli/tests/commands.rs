mod common;

use std::time::{Duration, Instant};

use common::{cli, fixture};

fn isanum() -> String {
    fixture("isanum").display().to_string()
}

#[test]
fn validate_reports_counts_quickly() {
    let start = Instant::now();
    let out = cli(&["validate", &isanum()]);
    assert!(start.elapsed() < Duration::from_secs(1));
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "23 competencies, 5 blocks, 494 topics OK\n");
}

#[test]
fn validate_json_counts() {
    let out = cli(&["--json", "validate", &isanum()]);
    assert_eq!(out.code, 0);
    let v = out.json();
    assert_eq!(v["ok"], true);
    assert_eq!(v["counts"]["areas"], 34);
    assert_eq!(v["counts"]["topics"], 494);
}

#[test]
fn empty_directory_is_a_valid_empty_model() {
    let empty = fixture("empty").display().to_string();
    let out = cli(&["validate", &empty]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "0 competencies, 0 blocks, 0 topics OK\n");
}

#[test]
fn unknown_competency_in_empty_model_exits_1() {
    let empty = fixture("empty").display().to_string();
    let out = cli(&["coverage", &empty, "--competency", "1.1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("E_UNKNOWN_ID"), "{}", out.stderr);
    assert!(out.stdout.is_empty());

    let out = cli(&["--json", "coverage", &empty, "--competency", "1.1"]);
    assert_eq!(out.code, 1);
    assert_eq!(out.json()["diagnostics"][0]["code"], "E_UNKNOWN_ID");
}

#[test]
fn invalid_model_exits_1_with_spans() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bad.cdsl"),
        "block 1 \"B\"\ncompetency \"1.1\" in block 1 \"C\" {\n  requires nowhere/t1 @ B1\n}\n",
    )
    .unwrap();
    let out = cli(&["--json", "validate", &dir.path().display().to_string()]);
    assert_eq!(out.code, 1);
    let d = &out.json()["diagnostics"][0];
    assert_eq!(d["code"], "E_DANGLING_REF");
    assert_eq!(d["span"]["line_start"], 3);
    assert!(out.stderr.contains("bad.cdsl:3:"), "{}", out.stderr);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["trace", "x"],
        vec!["trace", "x", "--topic", "a", "--competency", "b"],
        vec!["export", "x", "--format", "pdf", "--out", "y"],
        vec!["coverage", "x", "--matrix", "--competency", "1.1"],
        vec!["serve", "x", "--port", "70000"],
    ] {
        let out = cli(&args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_and_version_exit_0() {
    let out = cli(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("whatif"));
    let out = cli(&["--version"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("cforge "));
}

#[test]
fn missing_path_is_an_io_diagnostic() {
    let out = cli(&["--json", "gaps", "/definitely/not/here"]);
    assert_eq!(out.code, 1);
    assert_eq!(out.json()["diagnostics"][0]["code"], "E_IO");
}

#[test]
fn every_competency_has_some_teaching() {
    let v = cli(&["--json", "coverage", &isanum(), "--matrix"]).json();
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 23);
    for (i, row) in cells.iter().enumerate() {
        let total: u64 = row
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n.as_u64().unwrap())
            .sum();
        assert!(total > 0, "row {i} of the matrix is empty");
    }
}

#[test]
fn se_pathway_emphasizes_blocks_1_and_5() {
    let v = cli(&["--json", "pathway", &isanum(), "--id", "se"]).json();
    let emphasized: Vec<u64> = v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|b| b["emphasized"] == true)
        .map(|b| b["block"].as_u64().unwrap())
        .collect();
    assert_eq!(emphasized, [1, 5]);
}

fn warned_blocks(v: &serde_json::Value) -> Vec<String> {
    v["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|w| w["code"] == "W_EMPHASIS_UNDERSERVED")
        .map(|w| w["message"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn deleting_block_2_courses_underserves_the_data_pathway() {
    let before = cli(&["--json", "pathway", &isanum(), "--id", "data"]).json();
    assert!(
        warned_blocks(&before)
            .iter()
            .all(|m| !m.contains("block 2 ")),
        "{before}"
    );

    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixture("isanum")).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    // Drop the data-* courses and every portfolio/path reference to them.
    let courses = std::fs::read_to_string(dir.path().join("courses.cdsl")).unwrap();
    let kept: Vec<&str> = courses
        .split("\ncourse ")
        .filter(|c| !c.starts_with("data-"))
        .collect();
    std::fs::write(dir.path().join("courses.cdsl"), kept.join("\ncourse ")).unwrap();
    std::fs::remove_file(dir.path().join("portfolio.cdsl")).unwrap();

    let out = cli(&[
        "--json",
        "pathway",
        &dir.path().display().to_string(),
        "--id",
        "data",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let after = out.json();
    let block2 = after["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["block"] == 2)
        .unwrap();
    assert_eq!(block2["mean_fraction"]["num"], 0);
    assert!(
        warned_blocks(&after).iter().any(|m| m.contains("block 2 ")),
        "{after}"
    );
}

#[test]
fn stats_reports_the_exact_mean() {
    let out = cli(&["stats", &isanum()]);
    assert_eq!(out.code, 0);
    assert!(
        out.stdout.contains("specs per page  1115/133 (8.38)"),
        "{}",
        out.stdout
    );
    let v = cli(&["--json", "stats", &isanum()]).json();
    assert_eq!(v["specs_per_page_mean"]["num"], 1115);
    assert_eq!(v["specs_per_page_mean"]["den"], 133);
}

#[test]
fn stats_on_empty_cohort_has_no_mean() {
    let v = cli(&["--json", "stats", &fixture("empty").display().to_string()]).json();
    assert_eq!(v["pages"], 0);
    assert!(v["specs_per_page_mean"].is_null());
    let out = cli(&["stats", &fixture("empty").display().to_string()]);
    assert!(out.stdout.contains("undefined"));
}

#[test]
fn attainment_lists_evidence() {
    let out = cli(&[
        "--json",
        "attainment",
        &isanum(),
        "--student",
        "student-01",
        "--competency",
        "1.1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = out.json();
    assert_eq!(v["student"], "student-01");
    assert!(v["fraction"]["den"].as_u64().unwrap() > 0);
}

#[test]
fn export_round_trips_through_every_format() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["dsl", "json", "wiki", "dot"] {
        let out_dir = dir.path().join(format);
        let out = cli(&[
            "export",
            &isanum(),
            "--format",
            format,
            "--out",
            &out_dir.display().to_string(),
        ]);
        assert_eq!(out.code, 0, "{format}: {}", out.stderr);
        assert!(std::fs::read_dir(&out_dir).unwrap().count() > 0);
    }
    let a = cli(&["--json", "gaps", &isanum()]).json();
    let b = cli(&[
        "--json",
        "gaps",
        &dir.path().join("dsl").display().to_string(),
    ])
    .json();
    let c = cli(&[
        "--json",
        "gaps",
        &dir.path().join("json/model.json").display().to_string(),
    ])
    .json();
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert!(dir.path().join("wiki/Competency_1.1.wiki").exists());
    assert!(std::fs::read_to_string(dir.path().join("dot/graph.dot"))
        .unwrap()
        .starts_with("digraph"));
}

#[test]
fn strict_fpk_never_credits_more() {
    let loose = cli(&["--json", "coverage", &isanum()]).json();
    let strict = cli(&["--json", "--strict-fpk", "coverage", &isanum()]).json();
    for (l, s) in loose
        .as_array()
        .unwrap()
        .iter()
        .zip(strict.as_array().unwrap())
    {
        assert_eq!(l["topic_fraction"], s["topic_fraction"]);
        if s["skills_ok"] == true {
            assert_eq!(l["skills_ok"], true);
        }
        if s["dispositions_ok"] == true {
            assert_eq!(l["dispositions_ok"], true);
        }
    }
}
