use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use fragdec_core::decide::Witness;
use fragdec_core::{EvidenceReport, Verdict};

fn fragdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fragdec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> (EvidenceReport, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = fragdec(&full);
    let r = EvidenceReport::from_json(&stdout(&out))
        .unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)));
    (r, code(&out))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fragdec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path)
        .unwrap()
        .write_all(contents.as_bytes())
        .unwrap();
    path
}

#[test]
fn bs1_counterexample_exits_one_with_witness() {
    let (r, c) = report(&[
        "decide",
        "--regex",
        "(aa)*ab(bb)*",
        "--fragment",
        "BS1[<,MOD]",
    ]);
    assert_eq!(c, 1);
    assert_eq!(r.verdict, Verdict::NotDefinable);
    assert_eq!(r.stability_index, 4);
    assert_eq!(r.modulus, Some(8));
    let Some(Witness::Path {
        lhs, rhs, category, ..
    }) = &r.witness
    else {
        panic!("missing path witness")
    };
    assert_eq!(category, "C_8");
    assert_eq!((lhs.label.as_str(), rhs.label.as_str()), ("aabb", "ab"));
}

#[test]
fn definable_exits_zero() {
    let (r, c) = report(&[
        "decide",
        "--regex",
        "((a|b)(a|b))*a(a|b)*",
        "--fragment",
        "FO[<,MOD]",
    ]);
    assert_eq!((r.verdict, c), (Verdict::Definable, 0));
    let (r, c) = report(&[
        "decide",
        "--regex",
        "(b*ab*a)*b*",
        "--fragment",
        "FO[<,MOD]",
    ]);
    assert_eq!((r.verdict, c), (Verdict::NotDefinable, 1));
}

#[test]
fn analyze_is_informational() {
    let (r, c) = report(&["analyze", "--regex", "(aa)*ab(bb)*"]);
    assert_eq!(c, 0);
    assert_eq!(r.verdict, Verdict::Informational);
    assert_eq!(r.sizes["syntactic_monoid"], 10);
    assert_eq!(r.sizes["stable_monoid"], 6);
    assert!(!r.identities.is_empty());
}

#[test]
fn reduce_exits_two_and_emits_an_automaton() {
    let (r, c) = report(&["reduce", "--regex", "(aa)*ab(bb)*"]);
    assert_eq!(c, 2);
    assert_eq!(r.verdict, Verdict::ReducedInstanceEmitted);
    let dfa = r.reduced_instance.expect("automaton text");
    assert!(dfa.starts_with("alphabet:"));
    let path = temp_file("reduced.dfa", &dfa);
    let (again, c) = report(&["analyze", "--dfa", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(again.verdict, Verdict::Informational);
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "decide",
        "--regex",
        "(a|b)*ab(a|b)*",
        "--fragment",
        "FO2[Reg]",
        "--format",
        "json",
    ];
    let first = stdout(&fragdec(&args));
    let second = stdout(&fragdec(&args));
    assert_eq!(first, second);
    let parsed = EvidenceReport::from_json(&first).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&parsed.to_json()).unwrap();
    assert_eq!(
        reparsed,
        serde_json::from_str::<serde_json::Value>(&first).unwrap()
    );
}

#[test]
fn batch_keeps_input_order() {
    let path = temp_file("batch.txt", "(a|b)*\n(b*ab*a)*b*\n((\n(aa)*b\n");
    let out = fragdec(&[
        "decide",
        "--batch",
        path.to_str().unwrap(),
        "--fragment",
        "FO[<,MOD]",
    ]);
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let inputs: Vec<&str> = lines.iter().map(|v| v["input"].as_str().unwrap()).collect();
    assert_eq!(inputs, ["(a|b)*", "(b*ab*a)*b*", "((", "(aa)*b"]);
    assert_eq!(lines[0]["verdict"], "definable");
    assert_eq!(lines[1]["verdict"], "not_definable");
    assert!(lines[2]["error"].is_string());
    assert_eq!(lines[3]["verdict"], "definable");
    assert_eq!(code(&out), 3);
}

#[test]
fn formula_eval_and_transform() {
    let f = "(and (letter-min a 0) (letter-min a 1))";
    let out = fragdec(&["formula", "eval", "--formula", f, "--word", "aab"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("true"));
    let out = fragdec(&["formula", "eval", "--formula", f, "--word", "ab"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("false"));

    let out = fragdec(&[
        "formula",
        "transform",
        "--op",
        "mod-to-letters",
        "--formula",
        "(exists x (and (letter a x) (mod 0 2 x)))",
        "--modulus",
        "2",
        "--alphabet",
        "ab",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "(exists x (letter a@0 x))");
}

#[test]
fn path_equation_file() {
    let eqs = temp_file(
        "knast.txt",
        "vertices: p q\nedge: m1 p q\nedge: m2 q p\nedge: m3 p q\nedge: m4 q p\n\
         equation: (m1 m2)^w (m3 m4)^w = (m1 m2)^w m1 m4 (m3 m4)^w\n",
    );
    let (r, c) = report(&[
        "decide",
        "--regex",
        "(aa)*ab(bb)*",
        "--fragment",
        "FO[=,MOD]",
        "--equations",
        eqs.to_str().unwrap(),
    ]);
    assert_eq!((r.verdict, c), (Verdict::NotDefinable, 1));
    let out = fragdec(&[
        "decide",
        "--regex",
        "a",
        "--fragment",
        "FO[<,MOD]",
        "--equations",
        eqs.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&fragdec(&["decide", "--regex", "a"])), 64);
    assert_eq!(
        code(&fragdec(&["decide", "--regex", "a", "--fragment", "MSO"])),
        3
    );
    assert_eq!(
        code(&fragdec(&["analyze", "--dfa", "/nonexistent/language.dfa"])),
        5
    );
    assert_eq!(
        code(&fragdec(&[
            "analyze",
            "--regex",
            "(a|b)*ab(a|b)*",
            "--max-monoid",
            "2"
        ])),
        4
    );
    assert_eq!(code(&fragdec(&["--version"])), 0);
    assert_eq!(code(&fragdec(&["--help"])), 0);
}

#[test]
fn text_output_through_a_pipe() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fragdec"))
        .args(["analyze", "--regex", "(aa)*ab(bb)*"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut text = String::new();
    std::io::Read::read_to_string(child.stdout.as_mut().unwrap(), &mut text).unwrap();
    assert!(child.wait().unwrap().success());
    assert!(text.contains("stability index: 4"));
}
