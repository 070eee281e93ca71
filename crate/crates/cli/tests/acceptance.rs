//! Acceptance criteria, run through the `lbuild` binary. Prints one line per
//! criterion and exits non-zero if any fails.

use std::process::Command;
use std::time::Instant;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_lbuild");

struct Run {
    stdout: String,
    json: Value,
    code: i32,
    secs: f64,
}

/// Invocations made so far, replayed with one thread for determinism.
struct Harness {
    log: Vec<(Vec<String>, String)>,
}

impl Harness {
    fn run(&mut self, args: &str) -> Run {
        let args: Vec<String> = args.split_whitespace().map(String::from).collect();
        let run = invoke(&args, 8);
        self.log.push((args, run.stdout.clone()));
        run
    }
}

fn invoke(args: &[String], threads: usize) -> Run {
    let start = Instant::now();
    let out = Command::new(BIN)
        .args(args)
        .env("THREADS", threads.to_string())
        .env_remove("LBUILD_INJECT_FAULT")
        .output()
        .expect("lbuild runs");
    let secs = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        stdout,
        json,
        code: out.status.code().unwrap_or(-1),
        secs,
    }
}

/// Failures collected for one criterion.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
}

impl Check {
    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.failures.push(what.into());
        }
    }

    fn expect_eq(&mut self, got: &Value, want: u64, what: &str) {
        if got.as_u64() != Some(want) {
            self.failures.push(format!("{what}: got {got}, want {want}"));
        }
    }

    fn ok_run(&mut self, run: &Run, what: &str) {
        self.expect(run.code == 0, format!("{what}: exit code {}", run.code));
        self.expect(run.json["ok"] == Value::Bool(true), format!("{what}: report not ok"));
    }
}

fn complete_flags(m: u32, q: u64) -> u64 {
    (1..=m).map(|i| (q.pow(i) - 1) / (q - 1)).product()
}

fn slow(n: usize, q: u64, family: &str) -> &'static str {
    let is_slow = match family {
        "sl" => (n, q) == (5, 2) || (n, q) == (4, 3),
        _ => (n, q) == (3, 2),
    };
    if is_slow {
        " --slow"
    } else {
        ""
    }
}

fn criterion_1(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, q, omega) in [(3, 2, 42), (3, 3, 156), (4, 2, 210), (4, 3, 1560), (5, 2, 930)] {
        let what = format!("sl n={n} q={q}");
        let r = h.run(&format!("sl count-close --n {n} --q {q}{}", slow(n, q, "sl")));
        c.ok_run(&r, &what);
        c.expect_eq(&r.json["enumerated"], omega, &what);
        let expected = (q.pow(n as u32) - 1) * (q.pow(n as u32 - 1) - 1) * q / ((q - 1) * (q - 1));
        c.expect_eq(&r.json["formula"], expected, &what);
        let limit = if slow(n, q, "sl").is_empty() { 60.0 } else { 600.0 };
        c.expect(r.secs <= limit, format!("{what}: took {:.1} s", r.secs));
    }
    c
}

fn criterion_2(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for n in [3, 4] {
        for q in [2, 3] {
            let what = format!("sl n={n} q={q}");
            let r = h.run(&format!("sl verify-relation --n {n} --q {q}{}", slow(n, q, "sl")));
            c.ok_run(&r, &what);
            let e = &r.json["by_enumeration"];
            c.expect(e["holds"] == Value::Bool(true), format!("{what}: relation fails on enumeration"));
            c.expect(e["lhs"] == e["rhs"], format!("{what}: lhs {} rhs {}", e["lhs"], e["rhs"]));
            c.expect_eq(&e["r"], complete_flags(n as u32, q), &what);
        }
    }
    for n in 3..=8 {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let what = format!("sl n={n} q={q} formula");
            let r = h.run(&format!("sl verify-relation --n {n} --q {q} --formula-only"));
            c.ok_run(&r, &what);
            c.expect(r.json["relation_holds"] == Value::Bool(true), what);
        }
    }
    c
}

fn criterion_3(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, q, m) in [(4, 2, 3), (5, 2, 21), (4, 3, 4)] {
        let what = format!("sl n={n} q={q}");
        c.expect_eq(&Value::from(complete_flags(n as u32 - 2, q)), m, &what);
        let r = h.run(&format!("sl multiplicity --n {n} --q {q} --sample 20 --seed 11{}", slow(n, q, "sl")));
        c.ok_run(&r, &what);
        let rows = r.json["rows"].as_array().cloned().unwrap_or_default();
        c.expect(rows.len() == 20, format!("{what}: {} sampled pairs", rows.len()));
        for row in &rows {
            c.expect_eq(&row["multiplicity"], m, &what);
        }
        c.expect_eq(&r.json["galleries"], complete_flags(n as u32, q) * q, &what);
    }
    c
}

fn criterion_4(h: &mut Harness) -> Check {
    let mut c = Check::default();
    let cases = [
        ("sl", 4, 2, 3, 3),
        ("sl", 5, 2, 14, 21),
        ("sl", 4, 3, 4, 4),
        ("sp", 2, 2, 3, 3),
        ("sp", 2, 3, 4, 4),
        ("sp", 3, 2, 30, 45),
    ];
    for (family, n, q, vertices, facets) in cases {
        let what = format!("{family} n={n} q={q}");
        let r = h.run(&format!("{family} verify-iso --n {n} --q {q} --sample 20 --seed 5{}", slow(n, q, family)));
        c.ok_run(&r, &what);
        let rows = r.json["rows"].as_array().cloned().unwrap_or_default();
        c.expect(!rows.is_empty(), format!("{what}: no pairs checked"));
        for row in &rows {
            c.expect(row["iso"] == Value::Bool(true), format!("{what}: pair {} not isomorphic", row["index"]));
            c.expect_eq(&row["vertices"], vertices, &what);
            c.expect_eq(&row["facets"], facets, &what);
            c.expect_eq(&row["target_vertices"], vertices, &what);
            c.expect_eq(&row["target_facets"], facets, &what);
        }
    }
    c
}

fn criterion_5(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, q, r_n) in [(2, 2, 45), (2, 3, 160), (3, 2, 2835)] {
        let what = format!("sp n={n} q={q}");
        let r = h.run(&format!("sp count-chambers --n {n} --q {q}{}", slow(n, q, "sp")));
        c.ok_run(&r, &what);
        c.expect_eq(&r.json["enumerated"], r_n, &what);
    }
    c
}

fn criterion_6(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, q, omega) in [(2u32, 2u64, 30), (2, 3, 120), (3, 2, 126)] {
        let what = format!("sp n={n} q={q}");
        let r = h.run(&format!("sp count-close --n {n} --q {q}{}", slow(n as usize, q, "sp")));
        c.ok_run(&r, &what);
        c.expect_eq(&r.json["enumerated"], omega, &what);
        c.expect_eq(&r.json["coset_formula"], (q.pow(2 * n) - 1) * q / (q - 1), &what);
    }
    c
}

fn criterion_7(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let what = format!("sp n={n} q={q}");
        let r = h.run(&format!("sp verify-relation --n {n} --q {q}{}", slow(n, q, "sp")));
        c.ok_run(&r, &what);
        let e = &r.json["by_enumeration"];
        c.expect(e["holds"] == Value::Bool(true), format!("{what}: relation fails on enumeration"));
        if n == 2 {
            c.expect_eq(&e["r_prev"], q + 1, &what);
        }
    }
    c
}

fn criterion_8(h: &mut Harness) -> Check {
    let mut c = Check::default();
    let cases = [
        ("sl", 3, 2),
        ("sl", 3, 3),
        ("sl", 4, 2),
        ("sl", 4, 3),
        ("sl", 5, 2),
        ("sp", 2, 2),
        ("sp", 2, 3),
        ("sp", 3, 2),
    ];
    for (family, n, q) in cases {
        let what = format!("{family} n={n} q={q}");
        let r = h.run(&format!("{family} thickness --n {n} --q {q}{}", slow(n, q, family)));
        c.ok_run(&r, &what);
        c.expect(
            r.json["enumerated"] == Value::from(vec![q + 1]),
            format!("{what}: panel counts {}", r.json["enumerated"]),
        );
    }
    c
}

fn criterion_9(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, q) in [(2, 2), (3, 2), (2, 3)] {
        let what = format!("sp n={n} q={q}");
        let r = h.run(&format!("sp classify --n {n} --q {q} --vertices 100 --elements 100 --seed 3"));
        c.ok_run(&r, &what);
        c.expect_eq(&r.json["vertices_agreeing"], n + 1 + 100, &what);
        c.expect_eq(&r.json["elements_agreeing"], 100, &what);
    }
    c
}

fn criterion_10(h: &mut Harness) -> Check {
    let mut c = Check::default();
    for (n, chambers) in [(2u64, 8u64), (3, 48)] {
        let what = format!("sp n={n} q=2");
        let r = h.run(&format!("sp lift --n {n} --q 2"));
        c.ok_run(&r, &what);
        c.expect_eq(&r.json["chambers"], chambers, &what);
        c.expect_eq(&r.json["verified"], chambers * (n + 2), &what);
        let cases: Vec<String> = r.json["rows"]
            .as_array()
            .map(|rows| rows.iter().map(|x| x["case"].as_str().unwrap_or("").to_string()).collect())
            .unwrap_or_default();
        for case in ["j = 0", "j = n", "C = C'"] {
            c.expect(cases.iter().any(|x| x == case), format!("{what}: case {case} not exercised"));
        }
        c.expect(cases.iter().any(|x| x.starts_with("0 < j")), format!("{what}: middle case not exercised"));
    }
    c
}

fn criterion_11(h: &Harness) -> Check {
    let mut c = Check::default();
    for (args, out8) in &h.log {
        let out1 = invoke(args, 1).stdout;
        c.expect(&out1 == out8, format!("`lbuild {}` differs between 1 and 8 threads", args.join(" ")));
    }
    c
}

fn main() {
    let mut h = Harness { log: Vec::new() };
    let criteria: Vec<(&str, Check)> = vec![
        ("close-vertex counts against the formula", criterion_1(&mut h)),
        ("SL chamber/close-vertex relation", criterion_2(&mut h)),
        ("SL gallery multiplicity", criterion_3(&mut h)),
        ("close complexes against spherical buildings", criterion_4(&mut h)),
        ("Sp chamber count", criterion_5(&mut h)),
        ("Sp close count", criterion_6(&mut h)),
        ("Sp chamber/close-vertex relation", criterion_7(&mut h)),
        ("thickness", criterion_8(&mut h)),
        ("type and special classification", criterion_9(&mut h)),
        ("gallery lift", criterion_10(&mut h)),
    ];
    let determinism = criterion_11(&h);
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().chain([("determinism across thread counts", determinism)].iter()).enumerate() {
        let status = if check.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {name}", i + 1);
        for f in &check.failures {
            println!("    {f}");
        }
        failed += usize::from(!check.failures.is_empty());
    }
    println!("{} invocations replayed for determinism", h.log.len());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
