use std::path::PathBuf;
use std::process::{Command, Output};

use chowmot_cli::{run, Mode, Report, RunConfig, Suite, EXIT_PARSE, EXIT_PASS, EXIT_VALIDATION};

fn chowmot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowmot")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chowmot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const P1_RING: &str = r#"{
  "dimension": 1,
  "cells": [
    {"codim": 0, "index": 1, "label": "1"},
    {"codim": 1, "index": 1, "label": "pt"}
  ],
  "products": []
}"#;

#[test]
fn pairing_on_gr24_passes() {
    let o = chowmot(&["verify", "--catalog", "gr24", "--suite", "pairing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[PASS] pairing on gr24"));
}

#[test]
fn projectors_with_battery_pass() {
    let o = chowmot(&["verify", "--catalog", "hirzebruch:1", "--suite", "projectors", "--battery", "point,p1,p2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("family on P2×F1"));
}

#[test]
fn full_verify_passes() {
    let o = chowmot(&["verify", "--catalog", "hirzebruch:2", "--catalog", "product:p1,p2", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn malformed_ring_file_is_a_located_parse_error() {
    let path = scratch("broken.json", &P1_RING.replace("\"index\": 1, \"label\": \"pt\"", "\"index\": 1 \"label\": \"pt\""));
    let o = chowmot(&["verify", "--ring-file", path.to_str().unwrap(), "--suite", "pairing"]);
    assert_eq!(o.status.code(), Some(EXIT_PARSE));
    assert!(stdout(&o).contains("line 5"), "{}", stdout(&o));
}

#[test]
fn ring_files_load_and_verify() {
    let path = scratch("p1.json", P1_RING);
    let o = chowmot(&["verify", "--ring-file", path.to_str().unwrap(), "--suite", "pairing,motives,murre"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn invalid_fibration_exits_with_validation_status() {
    let bad = r#"{"base": "p1", "fiber": "p1", "t_products": [
        {"left": "h", "right": "1", "components": [{"base_cycle": [{"label": "1", "coeff": 2}], "generator": "h"}]}]}"#;
    let path = scratch("bad-fibration.json", bad);
    let o = chowmot(&["verify", "--fibration-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_VALIDATION));
}

#[test]
fn unknown_catalog_name() {
    assert_eq!(chowmot(&["verify", "--catalog", "nonsense"]).status.code(), Some(EXIT_PARSE));
}

#[test]
fn catalog_lists_dimensions_and_ranks() {
    let o = chowmot(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gr25") && text.contains("[1, 1, 2, 2, 2, 1, 1]"), "{text}");
}

fn single(mode: Mode, name: &str) -> Report {
    run(&RunConfig::new(mode).catalog(name))
}

#[test]
fn decompose_piece_counts() {
    for (name, pieces) in [("p2", 3), ("hirzebruch:2", 4), ("point", 1)] {
        let r = single(Mode::Decompose, name);
        assert_eq!(r.status, EXIT_PASS);
        assert_eq!(r.sections[0].tables[0].rows.len(), pieces, "{name}");
    }
    let r = single(Mode::Decompose, "hirzebruch:2");
    let ranks: Vec<&str> = r.sections[0].tables[1].rows.iter().map(|row| row[1].as_str()).collect();
    assert_eq!(ranks, ["1", "2", "1"]);
}

#[test]
fn ck_support_tables() {
    let r = single(Mode::Ck, "hirzebruch:1");
    assert_eq!(r.status, EXIT_PASS);
    assert_eq!(r.sections[0].tables[0].rows.len(), 5);

    let r = single(Mode::Ck, "product:p2,p1");
    assert_eq!(r.status, EXIT_PASS);
    for (k, row) in r.sections[0].tables[0].rows.iter().enumerate() {
        for (p, cell) in row[1..].iter().enumerate() {
            if k != 2 * p {
                assert_eq!(cell, "0", "π_{k} on CH^{p}");
            }
        }
    }

    let r = single(Mode::Ck, "point");
    assert_eq!(r.sections[0].tables[0].rows, vec![vec!["π_0".to_string(), "1".to_string()]]);
}

#[test]
fn structured_output_round_trips() {
    let o = chowmot(&["verify", "--catalog", "p2", "--suite", "duality,ck", "--samples", "5", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&stdout(&o)).unwrap();
    let again = Report::from_json(&report.to_json()).unwrap();
    assert_eq!(report, again);
    assert_eq!(report.summary(), again.summary());
    assert_eq!(report.to_text(), again.to_text());
}

#[test]
fn reports_are_deterministic_given_the_seed() {
    let mut config = RunConfig::new(Mode::Verify).catalog("hirzebruch:1").catalog("gr24");
    config.samples = 10;
    config.seed = 42;
    let a = run(&config).without_timings();
    let b = run(&config).without_timings();
    assert_eq!(a, b);
    let names: Vec<&str> = a.sections.iter().map(|s| s.suite.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn identities_subcommand() {
    let mut config = RunConfig::new(Mode::Identities).suite(Suite::Identities);
    config.samples = 10;
    let r = run(&config);
    assert_eq!(r.status, EXIT_PASS, "{}", r.to_text());
    assert!(r.sections[0].checks.iter().all(|c| c.count >= 10));
}
