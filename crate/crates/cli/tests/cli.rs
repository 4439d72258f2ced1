use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use xcsp::formula::{parse_instance, Graph, Instance};
use xcsp::infpath::{is_looping_walk, walk_lambda};
use xcsp::oracle::decide;
use xcsp::reductions::{validate_cycle_lift, validate_k2n_lift};

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(sub)
}

fn fixture(name: &str) -> String {
    dir("fixtures").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    fs::read_to_string(dir("golden").join(name)).expect("golden file")
}

fn xcsp(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_xcsp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .expect("piped")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn load(name: &str) -> Instance {
    parse_instance(&fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

struct SolveCase {
    args: Vec<String>,
    stdout: String,
    exit: i32,
}

fn solve_cases() -> Vec<SolveCase> {
    golden("solve.tsv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let template = if dir("fixtures").join(f[1]).exists() {
                fixture(f[1])
            } else {
                f[1].to_string()
            };
            let mut args = vec![
                "solve".into(),
                fixture(f[0]),
                "-t".into(),
                template,
                "-m".into(),
                f[2].into(),
            ];
            if f[3] != "-" {
                args.extend(["--budget".into(), f[3].into()]);
            }
            SolveCase {
                args,
                stdout: if f[4] == "-" {
                    String::new()
                } else {
                    format!("{}\n", f[4])
                },
                exit: f[5].parse().unwrap(),
            }
        })
        .collect()
}

#[test]
fn solve_matches_golden_table() {
    let cases = solve_cases();
    assert!(cases.len() >= 20);
    for c in &cases {
        let args: Vec<&str> = c.args.iter().map(String::as_str).collect();
        let o = xcsp(&args, "");
        assert_eq!(o.status.code(), Some(c.exit), "{args:?}: {}", stderr(&o));
        assert_eq!(stdout(&o), c.stdout, "{args:?}");
    }
}

/// Every decided row gives the oracle's answer.
#[test]
fn decided_rows_agree_with_oracle() {
    for c in solve_cases().iter().filter(|c| c.exit == 0) {
        let mut args: Vec<&str> = c.args.iter().map(String::as_str).collect();
        let m = args.iter().position(|&a| a == "-m").unwrap();
        args[m + 1] = "oracle";
        let o = xcsp(&args, "");
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), c.stdout, "{args:?}");
    }
}

#[test]
fn walk_certificate_rescores() {
    let o = xcsp(&["solve", &fixture("walk.inst"), "-t", "infpath"], "");
    assert_eq!(stdout(&o), "NO\n");
    let err = stderr(&o);
    let line = err
        .lines()
        .find_map(|l| l.strip_prefix("certificate: bad walk "))
        .expect("bad walk");
    let names = line.split_whitespace().next().unwrap();
    let inst = load("walk.inst");
    let walk: Vec<usize> = names
        .split(',')
        .map(|n| inst.index_of(n).unwrap())
        .collect();
    assert_eq!(walk.first(), Some(&inst.index_of("v1").unwrap()));
    assert_eq!(walk.last(), Some(&inst.index_of("v2").unwrap()));
    assert!(is_looping_walk(&inst, &walk));
    let v = *walk.last().unwrap();
    assert!(walk_lambda(&inst, &walk).unwrap() <= inst.count(v) as i64 - 2);
}

#[test]
fn solve_reports_method_and_certificates() {
    let method = |args: &[&str]| {
        let o = xcsp(args, "");
        stderr(&o)
            .lines()
            .find_map(|l| l.strip_prefix("method: ").map(str::to_string))
            .unwrap()
    };
    let tri = fixture("triangle.inst");
    let walk = fixture("walk.inst");
    let edge = fixture("one_edge.inst");
    assert_eq!(method(&["solve", &tri, "-t", "k4"]), "k4");
    assert_eq!(method(&["solve", &walk, "-t", "infpath"]), "infpath");
    assert_eq!(method(&["solve", &walk, "-t", "path7"]), "finpath");
    assert_eq!(method(&["solve", &walk, "-t", "5:0-1,1-2,3-4"]), "forest");
    assert_eq!(method(&["solve", &walk, "-t", "p10"]), "small");
    assert_eq!(method(&["solve", &walk, "-t", "p100"]), "oracle");
    assert_eq!(
        method(&["solve", &walk, "-t", "4:3-3,3-0,3-1,3-2,0-1,1-2"]),
        "dominating"
    );
    assert_eq!(method(&["solve", &edge, "-t", "k3"]), "oracle");

    let o = xcsp(&["solve", &tri, "-t", "infpath"], "");
    assert!(stderr(&o).contains("certificate: odd closed walk"));
    let o = xcsp(&["solve", &edge, "-t", "p100", "-m", "p100"], "");
    assert!(stderr(&o).contains("warning:"));
}

#[test]
fn k4_violation_is_named() {
    // An all-∃≥2 K4: the last variable has one value left, not two.
    let path = std::env::temp_dir().join(format!("xcsp-k4-{}.inst", std::process::id()));
    fs::write(
        &path,
        "var a 2\nvar b 2\nvar c 2\nvar d 2\nedge a b\nedge a c\nedge a d\nedge b c\nedge b d\nedge c d\n",
    )
    .unwrap();
    let o = xcsp(&["solve", path.to_str().unwrap(), "-t", "k4"], "");
    fs::remove_file(&path).ok();
    let inst = Instance::from_counts(
        &[2, 2, 2, 2],
        &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    );
    assert!(!decide(&inst, &Graph::complete(4)).unwrap());
    assert_eq!(stdout(&o), "NO\n");
    assert!(
        stderr(&o).contains("certificate: R+ holds"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn classify_matches_golden() {
    for line in golden("classify.txt").lines() {
        let f: Vec<&str> = line.split('\t').collect();
        let o = xcsp(&["classify", "-t", f[0], "-q", f[1]], "");
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), format!("{}\n", f[2]));
    }
    let o = xcsp(&["classify", "-t", "k4", "-q", "2,x"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gadgets_match_golden_and_validate() {
    let src = load("one_edge.inst");
    for (kind, param, file, tmpl) in [
        ("k2n", 3, "gadget_k2n_edge.inst", Graph::complete(6)),
        ("cycle", 3, "gadget_cycle_edge.inst", Graph::cycle(6)),
    ] {
        let o = xcsp(
            &[
                "gadget",
                kind,
                &fixture("one_edge.inst"),
                "-p",
                &param.to_string(),
            ],
            "",
        );
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert_eq!(text, golden(file));
        let out = parse_instance(&text).unwrap();
        match kind {
            "k2n" => validate_k2n_lift(&src, param, &out).unwrap(),
            _ => validate_cycle_lift(&src, param, &out).unwrap(),
        }
        assert!(decide(&out, &tmpl).unwrap());
    }
}

#[test]
fn lifted_universal_pair_stays_false() {
    let o = xcsp(
        &["gadget", "k2n", &fixture("universal_pair.inst"), "-p", "3"],
        "",
    );
    let out = parse_instance(&stdout(&o)).unwrap();
    assert!(!decide(&load("universal_pair.inst"), &Graph::complete(3)).unwrap());
    assert!(!decide(&out, &Graph::complete(6)).unwrap());
    let o = xcsp(
        &["gadget", "k2n", &fixture("universal_edge.inst"), "-p", "3"],
        "",
    );
    let out = parse_instance(&stdout(&o)).unwrap();
    assert!(decide(&out, &Graph::complete(6)).unwrap());
}

#[test]
fn gadget_rejects_bad_parameter() {
    let o = xcsp(&["gadget", "k2n", &fixture("one_edge.inst"), "-p", "2"], "");
    assert_eq!(o.status.code(), Some(3));
    let o = xcsp(
        &["gadget", "cycle", &fixture("triangle.inst"), "-p", "3"],
        "",
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn engine_games_match_golden() {
    for (inst, tmpl, file, last) in [
        (
            "walk.inst",
            "infpath",
            "play_walk_infpath.txt",
            "Adversary wins",
        ),
        ("triangle.inst", "k4", "play_triangle_k4.txt", "Prover wins"),
        (
            "triangle.inst",
            "k3",
            "play_triangle_k3.txt",
            "Adversary wins",
        ),
    ] {
        let o = xcsp(&["play", &fixture(inst), "-t", tmpl], "");
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert_eq!(text, golden(file));
        assert_eq!(text.lines().last(), Some(last));
    }
}

#[test]
fn human_adversary_is_reprompted() {
    let o = xcsp(
        &[
            "play",
            &fixture("triangle.inst"),
            "-t",
            "k4",
            "-s",
            "adversary",
        ],
        "7\n1\n2\n3\n",
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("play_triangle_k4_human_adversary.txt"));
    assert!(stderr(&o).contains("`7` was not offered, try again"));
}

#[test]
fn human_prover_is_reprompted() {
    let o = xcsp(
        &[
            "play",
            &fixture("triangle.inst"),
            "-t",
            "k4",
            "-s",
            "prover",
        ],
        "0\n0 0\n0 9\n0 1\n1 2\n2 3\n",
    );
    assert_eq!(o.status.code(), Some(0));
    let err = stderr(&o);
    assert!(err.contains("need exactly 2 value(s), got 1"));
    assert!(err.contains("values must be distinct"));
    assert!(err.contains("unknown value in `0 9`"));
    assert_eq!(stdout(&o).lines().last(), Some("Prover wins"));
}

#[test]
fn human_prover_can_lose_on_the_path() {
    // Offering 0 for v1 and then far values breaks the atom v1 - v9.
    let o = xcsp(
        &[
            "play",
            &fixture("walk.inst"),
            "-t",
            "infpath",
            "-s",
            "prover",
        ],
        "0\n0 2\n1 3\n0 2\n1\n0 2\n1\n0\n5 7\n",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("which is not an edge"));
    assert_eq!(out.lines().last(), Some("Adversary wins"));
}

#[test]
fn play_input_ending_early_is_a_parse_error() {
    let o = xcsp(
        &[
            "play",
            &fixture("triangle.inst"),
            "-t",
            "k4",
            "-s",
            "prover",
        ],
        "0 1\n",
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn selftest_single_criterion() {
    let o = xcsp(&["selftest", "--criterion", "6"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("criterion 6 PASS"));
    let o = xcsp(&["selftest", "--criterion", "42"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_agrees_everywhere() {
    let o = xcsp(&["bench", "--sizes", "4,5", "--per", "25"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.ends_with("all")));
}
