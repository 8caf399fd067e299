//! End-to-end runs of the `sic` binary on the shipped fixtures.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}.net", env!("CARGO_MANIFEST_DIR"))
}

fn sic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sic")).args(args).output().expect("run sic")
}

fn sic_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn sic");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn reduce_wire_is_cut_free() {
    let o = sic(&["reduce", &fixture("wire")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("wire free.1 free.2;"));
    assert!(out.ends_with("# status: CutFree\n"));
}

#[test]
fn reduce_fig4_exhausts_budget() {
    let o = sic(&["reduce", &fixture("fig4"), "--budget", "20"]);
    assert!(stdout(&o).ends_with("# status: BudgetExhausted\n"));
}

#[test]
fn reduce_loop_with_eps_is_empty() {
    let o = sic(&["reduce", &fixture("loop"), "--eps"]);
    let out = stdout(&o);
    let net = sic_core::parse::parse_net(&out).unwrap();
    assert!(sic_core::alpha_eq(&net, &sic_core::Net::empty()));
}

#[test]
fn reduce_strategies_parse() {
    for s in ["full-parallel", "leftmost", "random:7"] {
        assert!(sic(&["reduce", &fixture("fig1"), "--strategy", s]).status.success(), "{s}");
    }
    assert_eq!(sic(&["reduce", &fixture("fig1"), "--strategy", "bogus"]).status.code(), Some(1));
}

#[test]
fn eq_examples() {
    let v = json(&sic(&["eq", &fixture("wire"), &fixture("iota"), "--mode", "ax", "--depth", "5"]));
    assert_eq!(v["verdict"], "EqualUpTo");
    assert_eq!(v["depth"], 5);
    let v = json(&sic(&["eq", &fixture("wire"), &fixture("iota"), "--mode", "fin-ax"]));
    assert_eq!(v["verdict"], "Distinguished");
    assert!(v["witness"].as_str().unwrap().starts_with("net test"));
    let v = json(&sic(&["eq", &fixture("wire"), &fixture("eps2"), "--mode", "ax"]));
    assert_eq!(v["verdict"], "Distinguished");
    assert_eq!(v["depth"], 0);
    let v = json(&sic(&["eq", &fixture("fig12_mu"), &fixture("fig12_nu"), "--mode", "visible"]));
    assert_eq!(v["verdict"], "Distinguished");
    let v = json(&sic(&["eq", &fixture("pingpong_1"), &fixture("pingpong_2"), "--mode", "beta-eps", "--budget", "6"]));
    assert_eq!(v["verdict"], "Inconclusive");
}

#[test]
fn exit_codes() {
    assert_eq!(sic(&["eq", &fixture("wire"), &fixture("fig4")]).status.code(), Some(4));
    let o = sic_stdin(&["parse", "-"], "net x { interface 1; }");
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = sic_stdin(&["parse", "-"], "net x { interface 0; cell a: eps; cell b: eps; wire a.p b.p; wire a.p b.p; }");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dot_output() {
    let d = stdout(&sic(&["dot", &fixture("wire")]));
    assert_eq!(d.matches("[shape=plaintext").count(), 2);
    assert_eq!(d.matches(" -- ").count(), 1);
    let d = stdout(&sic(&["dot", &fixture("fig1")]));
    assert_eq!(d.matches("shape=record").count(), 11);
    assert!(d.contains("●"));
}

#[test]
fn reduce_output_pipes_into_dot_and_parse() {
    let r = stdout(&sic(&["reduce", &fixture("fig1")]));
    let d1 = sic_stdin(&["dot", "-"], &r);
    let d2 = sic_stdin(&["dot", "-"], &r);
    assert!(d1.status.success());
    assert_eq!(d1.stdout, d2.stdout);
    let p = stdout(&sic_stdin(&["parse", "-"], &r));
    assert_eq!(stdout(&sic_stdin(&["parse", "-"], &p)), p);
}

#[test]
fn analyses_emit_json() {
    let v = json(&sic(&["obs", &fixture("fig4")]));
    assert_eq!(v["addresses"].as_array().unwrap().len(), 1);
    assert_eq!(v["observability"], "ImmediatelyObservable");
    let v = json(&sic(&["obs", &fixture("iota"), "--budget", "10"]));
    assert_eq!(v["observability"], "Observable");
    let v = json(&sic(&["ed", &fixture("iota"), "--budget", "10", "--depth", "3"]));
    assert!(v["truncation"]["pairs"].is_array());
    let v = json(&sic(&["goi", &fixture("fig1")]));
    assert_eq!(v["interface"], 7);
    let v = json(&sic(&["trace", &fixture("parallelizer"), "--feedback", "5:6"]));
    assert_eq!(v["complete"], true);
}

#[test]
fn corpus_listing() {
    let names = stdout(&sic(&["corpus"]));
    for n in ["fig1", "fig4", "iota", "wire"] {
        assert!(names.lines().any(|l| l == n));
    }
    let src = stdout(&sic(&["corpus", "iota"]));
    assert!(sic_core::parse::parse_net(&src).is_ok());
    assert_eq!(sic(&["corpus", "nope"]).status.code(), Some(1));
}
