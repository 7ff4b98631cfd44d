//! End-to-end tests of the binary: output contracts and exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tree-moduli"));
    cmd.env_remove("TREE_MODULI_MAX_N");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

const STAR3: &str = r#"{"vertices":4,"edges":[[0,3],[1,3],[2,3]]}"#;
const STAR4: &str = r#"{"vertices":5,"edges":[[0,4],[1,4],[2,4],[3,4]]}"#;

#[test]
fn strata_table_two_rows_for_one_node() {
    let output = run(&["strata", "--max-nodes", "1", "--format", "table"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "header plus two strata:\n{text}");
    assert!(lines[0].starts_with("code"));
    assert!(lines[1].starts_with("()"));
    assert!(lines[2].starts_with("()()"));
}

#[test]
fn strata_rejects_negative_max_nodes() {
    let output = run(&["strata", "--max-nodes", "-1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn strata_json_matches_schema() {
    let output = run(&["strata", "--max-nodes", "3", "--format", "json"]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let strata = value["strata"].as_array().unwrap();
    assert_eq!(strata.len(), 5);
    for stratum in strata {
        assert!(stratum["code"].is_string());
        assert!(stratum["nodes"].is_u64());
        assert!(stratum["codim"].is_u64());
    }
    // the smooth stratum row
    assert_eq!(strata[0]["code"], "()");
    assert_eq!(strata[0]["stack_dim"], -3);
    assert_eq!(strata[0]["aut_dim"], 3);
    assert_eq!(strata[0]["aut_component_order"], 1);
}

#[test]
fn cohom_dualizing_dual_on_the_three_star() {
    let output = run(&["cohom", "--tree", STAR3, "--bundle", "dualizing-dual"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "h0=3 h1=0 chi=3\n");
}

#[test]
fn cohom_basis_dump_is_json() {
    let output = run(&[
        "cohom",
        "--tree",
        STAR4,
        "--bundle",
        "dualizing-power:2",
        "--basis",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h0=1 h1=4 chi=-3"));
    let value: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(value["dimension"], 1);
    let section = value["basis"][0].as_array().unwrap();
    assert_eq!(section.len(), 5);
    // leaves carry the zero restriction
    assert_eq!(section[0].as_array().unwrap().len(), 0);
    // the center carries a quartic
    assert_eq!(section[4].as_array().unwrap().len(), 5);
}

#[test]
fn cohom_structure_sheaf_via_degrees() {
    let output = run(&["cohom", "--tree", STAR3, "--bundle", "degrees:0,0,0,0"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "h0=1 h1=0 chi=1\n");
}

#[test]
fn cohom_rejects_bad_inputs_as_usage_errors() {
    let output = run(&["cohom", "--tree", "{", "--bundle", "dualizing"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["cohom", "--tree", STAR3, "--bundle", "nonsense"]);
    assert_eq!(output.status.code(), Some(2));

    // a 4-vertex tree with a 3-vertex degree list: parses, fails in computation
    let output = run(&["cohom", "--tree", STAR3, "--bundle", "degrees:0,0,0"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn poset_dot_counts_nodes_and_arrows() {
    let output = run(&["poset", "--max-nodes", "3", "--format", "dot"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.matches("[label=").count(), 5);
    assert_eq!(text.matches(" -> ").count(), 4);
    assert!(text.contains("\"()\" -> \"()()\";"));
}

#[test]
fn poset_json_round_trips() {
    let output = run(&["poset", "--max-nodes", "3", "--format", "json"]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(value["strata"].as_array().unwrap().len(), 5);
    let covers = value["covers"].as_array().unwrap();
    assert_eq!(covers.len(), 4);
    for cover in covers {
        let from = cover[0].as_str().unwrap();
        let to = cover[1].as_str().unwrap();
        // contraction loses one vertex: codes shrink by two characters
        assert_eq!(from.len(), to.len() + 2);
    }
}

#[test]
fn poset_zero_nodes() {
    let output = run(&["poset", "--max-nodes", "0", "--format", "dot"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.matches("[label=").count(), 1);
    assert_eq!(text.matches(" -> ").count(), 0);
}

#[test]
fn aut_reports_structure_and_generators() {
    let output = run(&["aut", "--tree", STAR3]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("|Aut(Gamma)|: 6"));
    assert!(text.contains("Aut(C): dimension 6, E factors 3, Gm factors 0, component group order 6"));
    // the normalized tree is echoed in the wire schema
    assert!(text.contains(r#"tree: {"vertices":4,"edges":[[0,3],[1,3],[2,3]]}"#));

    let output = run(&["aut", "--tree", STAR4]);
    let text = stdout(&output);
    assert!(text.contains("|Aut(Gamma)|: 24"));
    assert!(text.contains("not determined (maximal multiplicity 4 exceeds 3)"));

    let output = run(&["aut", "--tree", r#"{"vertices":1,"edges":[]}"#]);
    let text = stdout(&output);
    assert!(text.contains("automorphism group of the projective line"));
}

#[test]
fn fitting_stratifies_points_in_order() {
    let output = run(&[
        "fitting",
        "--family",
        r#"{"parameters":2,"nodes":["t0","t1"]}"#,
        "--points",
        r#"[[0,0],[1,0],[3,5],["1/2",0]]"#,
    ]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "point=[0, 0] exact=2\npoint=[1, 0] exact=1\npoint=[3, 5] exact=0\npoint=[1/2, 0] exact=1\n"
    );
}

#[test]
fn fitting_arity_mismatch_is_a_computation_error() {
    let output = run(&[
        "fitting",
        "--family",
        r#"{"parameters":2,"nodes":["t0"]}"#,
        "--points",
        "[[1]]",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8(output.stderr).unwrap().contains("arity"));
}

#[test]
fn fitting_rejects_bad_payloads_as_usage_errors() {
    let output = run(&["fitting", "--family", "{}", "--points", "[[0]]"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&[
        "fitting",
        "--family",
        r#"{"parameters":1,"nodes":["t0"]}"#,
        "--points",
        "[[0.5]]",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_rejected() {
    let output = run(&["strata", "--max-nodes", "1", "--frmt", "table"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["nonsense"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["poset", "--max-nodes", "1", "--format", "table"]);
    assert_eq!(output.status.code(), Some(2), "dot|json only for poset");
}

#[test]
fn enumeration_cap_is_env_overridable() {
    let output = run(&["strata", "--max-nodes", "13", "--format", "table"]);
    assert_eq!(output.status.code(), Some(2));

    let output = bin()
        .env("TREE_MODULI_MAX_N", "4")
        .args(["strata", "--max-nodes", "4", "--format", "table"])
        .output()
        .unwrap();
    assert!(output.status.success());
    // 1 + 1 + 1 + 2 + 3 strata plus the header
    assert_eq!(stdout(&output).lines().count(), 9);

    let output = bin()
        .env("TREE_MODULI_MAX_N", "2")
        .args(["strata", "--max-nodes", "3"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    let output = bin()
        .env("TREE_MODULI_MAX_N", "zebra")
        .args(["strata", "--max-nodes", "1"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["strata", "--max-nodes", "4", "--format", "json"],
        vec!["poset", "--max-nodes", "4", "--format", "dot"],
        vec!["aut", "--tree", STAR3],
        vec!["cohom", "--tree", STAR4, "--bundle", "dualizing-power:2", "--basis"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
    }
}
