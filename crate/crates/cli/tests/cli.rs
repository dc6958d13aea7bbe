use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::io::Write;

use grepair::codec::{write_container, Container};
use grepair::fixtures::intro_grammar;
use grepair::LabelDictionary;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grepair"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Last stderr line of a compress run, as key=value pairs.
fn report(o: &Output) -> BTreeMap<String, String> {
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().last().unwrap();
    line.split_whitespace()
        .map(|kv| {
            let (k, v) = kv.split_once('=').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn compress_text(dir: &Path, text: &str, extra: &[&str]) -> (PathBuf, Output) {
    let out = dir.join("g.grg");
    let mut args = vec!["compress", "-", "-o", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run_stdin(&args, text);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    (out, o)
}

fn lines(s: &str) -> BTreeSet<String> {
    s.lines().map(str::to_string).collect()
}

#[test]
fn string_path_queries() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["gen", "sgraph", &"a".repeat(40)]));
    let (c, _) = compress_text(dir.path(), &text, &[]);
    let c = c.to_str().unwrap();
    assert_eq!(stdout(&run(&["query", "reach", c, "0", "40"])), "true\n");
    assert_eq!(stdout(&run(&["query", "reach", c, "40", "0"])), "false\n");
    assert_eq!(stdout(&run(&["query", "rpq", c, "(aaaaa)*", "0", "40"])), "true\n");
    assert_eq!(stdout(&run(&["query", "rpq", c, "(aaaaa)*", "0", "39"])), "false\n");
    assert_eq!(stdout(&run(&["query", "rpq", c, "a*b"])), "false\n");
    assert_eq!(stdout(&run(&["query", "rpq", c, "aaa"])), "true\n");
    assert_eq!(stdout(&run(&["neighbors", c, "7", "--direction", "in"])), "6\n");
}

#[test]
fn copies_compress_well() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["gen", "copies", "64"]));
    let (_, o) = compress_text(dir.path(), &text, &["--max-rank", "4", "--order", "fp", "--quiet"]);
    let r = report(&o);
    let ratio: f64 = r["ratio"].parse().unwrap();
    assert!(ratio < 0.25, "{r:?}");
    assert_eq!(r["edges"], "320");
    for key in ["nodes", "grammar_size", "rules", "height", "bpe", "classes", "compress_ms"] {
        assert!(r.contains_key(key), "{key}");
    }
}

#[test]
fn roundtrip_through_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let families: Vec<Vec<&str>> = vec![
        vec!["grid", "3"],
        vec!["tf", "4"],
        vec!["tn", "4"],
        vec!["comb", "2", "3"],
        vec!["copies", "8"],
        vec!["sgraph", "abcabcab"],
        vec!["tgraph", "f(a,g(a,b),h(c))"],
    ];
    for f in families {
        let mut args = vec!["gen"];
        args.extend(&f);
        let text = stdout(&run(&args));
        for order in ["nat", "bfs", "fp0", "fp"] {
            let (c, _) = compress_text(dir.path(), &text, &["--order", order, "--quiet"]);
            let back = stdout(&run(&["decompress", c.to_str().unwrap(), "--sort"]));
            assert_eq!(lines(&back), lines(&text), "{f:?} {order}");
            let mut sorted: Vec<&str> = back.lines().collect();
            sorted.sort_unstable();
            assert_eq!(back.lines().collect::<Vec<_>>(), sorted);
        }
    }
}

#[test]
fn compression_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["gen", "tf", "5"]));
    let (c, _) = compress_text(dir.path(), &text, &[]);
    let first = std::fs::read(&c).unwrap();
    let (c, _) = compress_text(dir.path(), &text, &[]);
    assert_eq!(std::fs::read(&c).unwrap(), first);
}

#[test]
fn stats_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&["gen", "grid", "3"]));
    let (c, _) = compress_text(dir.path(), &text, &["--no-prune", "--no-virtual-pass"]);
    let out = stdout(&run(&["stats", c.to_str().unwrap()]));
    let kv: BTreeMap<&str, &str> = out.trim().split(' ').map(|kv| kv.split_once('=').unwrap()).collect();
    assert_eq!(kv["nodes"], "24");
    assert_eq!(kv["edges"], "37");
    assert_eq!(kv["mapping"], "true");
    assert!(kv["classes"].parse::<usize>().unwrap() >= 1);
}

#[test]
fn intro_grammar_neighbors() {
    let dir = tempfile::tempdir().unwrap();
    let mut labels = LabelDictionary::new();
    labels.intern("a");
    labels.intern("b");
    let bytes = write_container(&Container { grammar: intro_grammar(), labels, mapping: None }).unwrap();
    let path = dir.path().join("intro.grg");
    std::fs::write(&path, bytes).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&run(&["neighbors", p, "1", "--direction", "out"])), "3,4,5\n");
    assert_eq!(stdout(&run(&["neighbors", p, "2", "--direction", "in"])), "3,4,5\n");
    assert_eq!(stdout(&run(&["query", "rpq", p, "ab", "1", "2"])), "true\n");
    let o = run(&["decompress", p]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no node mapping"));
    assert_eq!(lines(&stdout(&o)), lines("1 3 a\n3 2 b\n1 4 a\n4 2 b\n1 5 a\n5 2 b\n"));
}

#[test]
fn names_and_raw_ids() {
    let dir = tempfile::tempdir().unwrap();
    let (c, _) = compress_text(dir.path(), "x y\ny z\nz w\n", &[]);
    let c = c.to_str().unwrap();
    assert_eq!(stdout(&run(&["query", "reach", c, "x", "w"])), "true\n");
    assert_eq!(stdout(&run(&["neighbors", c, "y"])), "z\n");
    // raw ids are canonical ids of the derived graph
    let raw = stdout(&run(&["--raw", "neighbors", c, "1"]));
    assert!(raw.trim().parse::<u64>().is_ok() || raw.trim().is_empty());
    assert_eq!(run(&["query", "reach", c, "nope", "x"]).status.code(), Some(6));
}

#[test]
fn exit_codes() {
    assert_eq!(run_stdin(&["compress", "-", "-o", "/dev/null"], "a b c d e\n").status.code(), Some(3));
    assert_eq!(run_stdin(&["compress", "-", "-o", "/dev/null"], "a a\n").status.code(), Some(3));
    assert_eq!(run_stdin(&["compress", "-", "-o", "/dev/null", "--max-rank", "1"], "a b\n").status.code(), Some(2));
    assert_eq!(run(&["stats", "/nonexistent/file"]).status.code(), Some(4));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.grg");
    std::fs::write(&bad, b"GRG1\x01\xff\x00garbage").unwrap();
    assert_eq!(run(&["stats", bad.to_str().unwrap()]).status.code(), Some(5));
    std::fs::write(&bad, b"nope").unwrap();
    assert_eq!(run(&["decompress", bad.to_str().unwrap()]).status.code(), Some(5));
    let (c, _) = compress_text(dir.path(), "a b x\n", &[]);
    assert_eq!(run(&["query", "rpq", c.to_str().unwrap(), "(x", "a", "b"]).status.code(), Some(6));
    assert_eq!(run(&["query", "rpq", c.to_str().unwrap(), "x", "a"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
