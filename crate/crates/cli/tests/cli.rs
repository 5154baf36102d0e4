use std::path::{Path, PathBuf};

use regulus_cli::{run_with, EXIT_BUDGET, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("regulus").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(!out.is_empty(), "no output for {args:?}: {err}");
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn emit(dir: &Path, name: &str) -> PathBuf {
    let (code, v) = json(&["corpus", "emit", name, "--dir", dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    PathBuf::from(v["written"].as_str().unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn corpus_list_names_every_fixture() {
    let (code, v) = json(&["corpus", "list"]);
    assert_eq!(code, EXIT_OK);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, regulus::corpus::names());
}

#[test]
fn corpus_emit_round_trips_to_stdout() {
    let (code, v) = json(&["corpus", "emit", "c2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
    let (code, _, err) = run(&["corpus", "emit", "nope"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("nope"));
}

#[test]
fn z7_has_no_planar_cover_at_fibre_one() {
    let dir = tempfile::tempdir().unwrap();
    let z7 = emit(dir.path(), "z7-123");
    let (code, v) = json(&["genus", "language", s(&z7), "--n", "0", "--max-fiber", "1"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["result"], "no_within_bounds");
}

#[test]
fn minimize_unrolled_z6() {
    let dir = tempfile::tempdir().unwrap();
    let a = emit(dir.path(), "z6-unrolled12");
    let (code, v) = json(&["auto", "minimize", s(&a)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["automaton"]["vertices"].as_array().unwrap().len(), 6);
}

#[test]
fn emulator_but_not_cover() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit(dir.path(), "loop2-to-loop1");
    assert_eq!(json(&["emu", "check", s(&m)]).0, EXIT_OK);
    let (code, v) = json(&["emu", "check-cover", s(&m)]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["cover"], false);
    assert!(v["violation"].as_str().is_some());
}

#[test]
fn undirected_morphisms_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit(dir.path(), "path-4-over-3");
    assert_eq!(json(&["emu", "check", s(&m)]).0, EXIT_OK);
    assert_eq!(json(&["emu", "check-cover", s(&m)]).0, EXIT_NEGATIVE);
}

#[test]
fn graph_functors() {
    let dir = tempfile::tempdir().unwrap();
    let g = emit(dir.path(), "op-example");
    let (_, v) = json(&["graph", "excise", s(&g)]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
    let (_, v) = json(&["graph", "op", s(&g)]);
    let e = v["edges"].as_array().unwrap().iter().find(|e| e["id"] == "e").unwrap().clone();
    assert_eq!((e["src"].as_str(), e["dst"].as_str()), (Some("w"), Some("v")));
    let (_, v) = json(&["graph", "forget", s(&g)]);
    assert!(v["edges"].as_array().unwrap().iter().all(|e| e["ends"].is_array()));
    let par = emit(dir.path(), "par2");
    let (_, v) = json(&["graph", "simplify", s(&par)]);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 1);
    let (_, v) = json(&["graph", "reach", s(&g)]);
    assert_eq!(v["reachable"].as_array().unwrap().len(), 2);
}

#[test]
fn contract_a_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = emit(dir.path(), "c2");
    let (code, v) = json(&["graph", "contract", s(&g), "--cycle", "ab,ba"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(v["edges"].as_array().unwrap().len(), 0);
    assert_eq!(run(&["graph", "contract", s(&g), "--cycle", "ab"]).0, EXIT_INPUT);
}

#[test]
fn bidirect_and_pullback() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(dir.path(), "u.json", r#"{"vertices":["a","b"],"edges":[{"id":"e","ends":["a","b"]}]}"#);
    let (_, v) = json(&["graph", "bidirect", s(&u)]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 2);
    let m = emit(dir.path(), "loop2-to-loop1");
    let (code, v) = json(&["graph", "pullback", s(&m), s(&m)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn automaton_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let z6 = emit(dir.path(), "z6");
    assert_eq!(json(&["auto", "accept", s(&z6), "1 5"]).0, EXIT_OK);
    let (code, v) = json(&["auto", "accept", s(&z6), "1 4"]);
    assert_eq!((code, v["accepted"].as_bool()), (EXIT_NEGATIVE, Some(false)));
    let (_, v) = json(&["auto", "sample", s(&z6), "--max-length", "1"]);
    let words: Vec<&str> = v["words"].as_array().unwrap().iter().map(|w| w.as_str().unwrap()).collect();
    assert_eq!(words, ["", "0"]);
    let (_, v) = json(&["auto", "graph", s(&z6)]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 36);
    let unrolled = emit(dir.path(), "z6-unrolled12");
    assert_eq!(json(&["auto", "equal", s(&z6), s(&unrolled)]).0, EXIT_OK);
    let z7 = emit(dir.path(), "z7-123");
    let (code, v) = json(&["auto", "equal", s(&z6), s(&z7)]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(v["counterexample"].is_string());
    let abc = emit(dir.path(), "abc-mod7");
    let (_, v) = json(&["auto", "complete", s(&abc)]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 17);
}

#[test]
fn automaton_from_identity_cover() {
    let dir = tempfile::tempdir().unwrap();
    let z6 = emit(dir.path(), "z6");
    let (_, g) = json(&["auto", "graph", s(&z6)]);
    let g = regulus::format::parse::<regulus::format::GraphDoc>(&g.to_string()).unwrap().to_digraph().unwrap();
    let id = regulus::digraph::GraphMorphism::identity(&regulus::digraph::excise(&g));
    let cover = write(dir.path(), "id.json", &regulus::format::to_pretty(&regulus::format::morphism_doc(&id)));
    let (code, v) = json(&["auto", "from-cover", s(&z6), s(&cover)]);
    assert_eq!(code, EXIT_OK, "{v}");
    let built = write(dir.path(), "built.json", &v["automaton"].to_string());
    assert_eq!(json(&["auto", "equal", s(&z6), s(&built)]).0, EXIT_OK);
}

#[test]
fn semi_automaton_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let g = emit(dir.path(), "c2");
    let (_, v) = json(&["sa", "tautological", s(&g)]);
    assert_eq!(v["alphabet"].as_array().unwrap().len(), 2);
    let z6 = emit(dir.path(), "z6");
    let (code, v) = json(&["sa", "relabel", s(&z6), "--map", "0=x,1=x,2=x,3=x,4=x,5=x"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["semi_automaton"]["alphabet"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["sa", "relabel", s(&z6), "--map", "0x"]).0, EXIT_INPUT);
}

#[test]
fn relation_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let loop2 = emit(dir.path(), "loop2");
    let (code, max) = json(&["rel", "max", s(&loop2)]);
    assert_eq!(code, EXIT_OK);
    let max = write(dir.path(), "max.json", &max.to_string());
    assert_eq!(json(&["rel", "check", s(&loop2), s(&max)]).0, EXIT_OK);
    let (_, q) = json(&["rel", "quotient", s(&loop2), s(&max)]);
    assert_eq!(q["graph"]["edges"].as_array().unwrap().len(), 1);
    let id = write(dir.path(), "id.json", r#"{"vertex_classes":[["u"]],"edge_classes":[["a"],["b"]]}"#);
    let (_, j) = json(&["rel", "join", s(&loop2), s(&id), s(&max)]);
    assert_eq!(j["edge_classes"].as_array().unwrap().len(), 1);
    let (_, m) = json(&["rel", "meet", s(&loop2), s(&id), s(&max)]);
    assert_eq!(m["edge_classes"].as_array().unwrap().len(), 2);

    let p2 = emit(dir.path(), "p2");
    let bad = write(dir.path(), "bad.json", r#"{"vertex_classes":[["x","z"],["y"]],"edge_classes":[]}"#);
    assert_eq!(run(&["rel", "check", s(&p2), s(&bad)]).0, EXIT_INPUT);
    let bad = write(dir.path(), "bad2.json", r#"{"vertex_classes":[["x","z"],["y"]],"edge_classes":[["xy"],["yz"]]}"#);
    let (code, v) = json(&["rel", "check", s(&p2), s(&bad)]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["automatic"], false);
    let (_, v) = json(&["rel", "final-systems", s(&p2)]);
    assert_eq!(v["cardinality"], 1);

    let m = emit(dir.path(), "loop2-to-loop1");
    let (_, v) = json(&["rel", "canonical", s(&m)]);
    assert_eq!(v["edge_classes"].as_array().unwrap().len(), 1);
    let (_, v) = json(&["rel", "factorize", s(&m)]);
    assert!(v["iota"]["p"].is_object());
}

#[test]
fn mn_refinement_from_finals() {
    let dir = tempfile::tempdir().unwrap();
    let unrolled = emit(dir.path(), "z6-unrolled12");
    let (code, v) = json(&["rel", "mn", s(&unrolled)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["vertex_classes"].as_array().unwrap().len(), 6);
    let (_, v) = json(&["rel", "mn", s(&unrolled), "--finals", "0e;0o"]);
    assert_eq!(v["vertex_classes"].as_array().unwrap().len(), 12);
}

#[test]
fn search_and_verify_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let g = emit(dir.path(), "c2");
    let (code, v) = json(&["emu", "search", s(&g), "--n", "0", "--max-fiber", "2"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"], "found");
    let cert = write(dir.path(), "cert.json", &v["certificate"].to_string());
    assert_eq!(json(&["emu", "verify-cert", s(&cert)]).0, EXIT_OK);
    let mut tampered = v["certificate"].clone();
    tampered["genus"] = serde_json::json!(3);
    let cert = write(dir.path(), "bad.json", &tampered.to_string());
    assert_eq!(json(&["emu", "verify-cert", s(&cert)]).0, EXIT_NEGATIVE);
}

#[test]
fn extract_and_extend() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit(dir.path(), "extraction");
    let (code, v) = json(&["emu", "extract", s(&m)]);
    assert_eq!(code, EXIT_OK);
    let cover = write(dir.path(), "cover.json", &v.to_string());
    assert_eq!(json(&["emu", "check-cover", s(&cover)]).0, EXIT_OK);
}

#[test]
fn genus_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let k5 = write(dir.path(), "k5.json", &k(5));
    let (code, v) = json(&["genus", "exact", s(&k5)]);
    assert_eq!((code, v["genus"].as_u64()), (EXIT_OK, Some(1)));
    let (code, v) = json(&["genus", "planar", s(&k5)]);
    assert_eq!((code, v["planar"].as_bool()), (EXIT_NEGATIVE, Some(false)));
    let (_, v) = json(&["genus", "lower-bound", s(&k5), "--girth", "3"]);
    assert_eq!(v["lower_bound"], 1);
    let (_, v) = json(&["genus", "exact", s(&k5), "--lower-bound-only"]);
    assert_eq!(v["lower_bound"], 1);
    assert_eq!(run(&["genus", "lower-bound", s(&k5), "--girth", "4"]).0, EXIT_INPUT);
    let (_, v) = json(&["genus", "formula", "--m", "2", "--faces", "3:2,6:1"]);
    assert!(v["value"].is_string());
    let g = emit(dir.path(), "op-example");
    let (code, v) = json(&["genus", "invariance", s(&g)]);
    assert_eq!((code, v["holds"].as_bool()), (EXIT_OK, Some(true)));
}

#[test]
fn budget_exceeded_maps_to_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let k8 = write(dir.path(), "k8.json", &k(8));
    std::env::set_var("REGULUS_BUDGET", "10");
    let (code, _, err) = run(&["genus", "exact", s(&k8)]);
    std::env::remove_var("REGULUS_BUDGET");
    assert_eq!(code, EXIT_BUDGET, "{err}");
}

#[test]
fn bad_input_maps_to_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let junk = write(dir.path(), "junk.json", "{ not json");
    assert_eq!(run(&["graph", "excise", s(&junk)]).0, EXIT_INPUT);
    let extra = write(dir.path(), "extra.json", r#"{"vertices":[],"edges":[],"colour":1}"#);
    assert_eq!(run(&["graph", "excise", s(&extra)]).0, EXIT_INPUT);
    assert_eq!(run(&["graph", "excise", "/does/not/exist"]).0, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn output_file_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let g = emit(dir.path(), "c2");
    let out = dir.path().join("out.json");
    let (code, stdout, _) = run(&["graph", "op", s(&g), "-o", s(&out), "--dot"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("\"vertices\""));
    assert!(std::fs::read_to_string(out.with_extension("dot")).unwrap().starts_with("digraph"));
}

fn k(n: usize) -> String {
    let vertices: Vec<String> = (0..n).map(|i| format!("\"{i}\"")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push(format!("{{\"id\":\"{i}-{j}\",\"ends\":[\"{i}\",\"{j}\"]}}"));
        }
    }
    format!("{{\"vertices\":[{}],\"edges\":[{}]}}", vertices.join(","), edges.join(","))
}
