use std::process::{Command, Output};

use serde_json::Value;

fn lbuild(args: &str, fault: bool) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lbuild"));
    cmd.args(args.split_whitespace()).env("THREADS", "2");
    if fault {
        cmd.env("LBUILD_INJECT_FAULT", "1");
    } else {
        cmd.env_remove("LBUILD_INJECT_FAULT");
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sl_relation_report() {
    let out = lbuild("sl verify-relation --n 4 --q 2", false);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["formula"], 210);
    assert_eq!(v["enumerated"], 210);
    assert_eq!(v["relation_holds"], true);
}

#[test]
fn sp_chamber_count() {
    let v = json(&lbuild("sp count-chambers --n 2 --q 3", false));
    assert_eq!(v["enumerated"], 160);
    assert_eq!(v["match"], true);
}

#[test]
fn dot_export_of_a_close_complex() {
    let out = lbuild("sl export-complex --n 5 --q 2 --slow --format dot", false);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("graph close_complex {"));
    assert_eq!(text.lines().filter(|l| l.contains("[label=")).count(), 14);
    assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), 21);
    assert_eq!(text.lines().filter(|l| l.contains("// facet ")).count(), 21);
}

#[test]
fn key_order_is_stable() {
    let text = stdout(&lbuild("sp count-close --n 2 --q 2", false));
    let keys: Vec<&str> = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('"'))
        .filter_map(|l| l.split('"').next())
        .collect();
    assert_eq!(
        keys,
        [
            "schema_version", "family", "command", "n", "q", "precision", "formula", "enumerated", "match",
            "coset_formula", "non_primitive_candidates", "off_type", "ok"
        ]
    );
}

#[test]
fn repeated_runs_are_identical() {
    let a = lbuild("sl multiplicity --n 4 --q 2 --sample 5 --seed 9", false);
    let b = lbuild("sl multiplicity --n 4 --q 2 --sample 5 --seed 9", false);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn infeasible_sizes_exit_2() {
    assert_eq!(lbuild("sl count-close --n 6 --q 2", false).status.code(), Some(2));
    assert_eq!(lbuild("sp count-close --n 3 --q 2", false).status.code(), Some(2));
    assert_eq!(lbuild("sl count-close --n 3 --q 6", false).status.code(), Some(2));
    assert_eq!(lbuild("sl count-close --n 3 --q 2 --format dot", false).status.code(), Some(2));
    assert_eq!(lbuild("sl lift --n 3 --q 2", false).status.code(), Some(2));
}

#[test]
fn injected_fault_exits_1_with_counterexample() {
    for cmd in [
        "sl count-close --n 3 --q 2",
        "sp count-chambers --n 2 --q 2",
        "sl multiplicity --n 4 --q 2 --sample 3",
        "sp thickness --n 2 --q 2",
        "sp lift --n 2 --q 2",
        "sp classify --n 2 --q 2 --vertices 5 --elements 5",
        "sl verify-iso --n 4 --q 2 --sample 2",
    ] {
        let out = lbuild(cmd, true);
        assert_eq!(out.status.code(), Some(1), "{cmd}");
        let v = json(&out);
        assert_eq!(v["ok"], false, "{cmd}");
        assert!(v["counterexample"].is_object(), "{cmd}");
        assert_eq!(lbuild(cmd, false).status.code(), Some(0), "{cmd}");
    }
}

#[test]
fn table_rows() {
    let text = stdout(&lbuild("sl table --n-from 3 --n-to 4 --q 2 --enumerate --format csv", false));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,n,q,r,omega,m,q_r,r_prev_omega,relation_ok,r_enumerated,omega_enumerated");
    assert_eq!(lines[1], "sl,3,2,21,42,1,42,42,true,21,42");
    assert_eq!(lines[2], "sl,4,2,315,210,3,630,630,true,315,210");
    let text = stdout(&lbuild("sp table --n-from 2 --n-to 3 --q 2 --format csv", false));
    assert!(text.contains("sp,2,2,45,30,3,90,90,true,,"));
    assert!(text.contains("sp,3,2,2835,126,45,5670,5670,true,,"));
    let empty = stdout(&lbuild("sl table --n-from 5 --n-to 4 --format csv", false));
    assert_eq!(empty.lines().count(), 1);
}
