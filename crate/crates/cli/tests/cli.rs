use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quark::synth;
use tempfile::TempDir;

const TOY: &str = "1 3\n1 4\n1 5\n1 6\n3 4\n3 5\n4 5\n6 4\n";

fn quark_cmd(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quark"));
    cmd.args(args).env_remove("QUARK_THREADS");
    if let Some(n) = threads {
        cmd.env("QUARK_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = quark_cmd(args, None);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn toy_decomposition_table() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "toy.txt", TOY);
    let csv = ok(&["decompose", "--graph", s(&g), "--motif", "acyclic", "--m", "edge"]);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(csv.lines().next(), Some("src,dst,kind,K"));
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let expect = if r[0] == "6" || r[1] == "6" { "1" } else { "2" };
        assert_eq!(r[3], expect, "{r:?}");
    }
    assert!(rows.iter().any(|r| r[..4] == ["4", "5", "uni", "2"]));

    let csv = ok(&["decompose", "--graph", s(&g), "--motif", "acyclic", "--role-aware"]);
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "src,dst,kind,K,K_1,K_2,K_3");
    assert_eq!(csv.lines().filter(|l| l.starts_with("# K_")).count(), 3);
    let multi: Vec<String> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .filter(|l| l.split(',').skip(4).filter(|k| *k != "0").count() >= 2)
        .map(|l| l.split(',').take(2).collect::<Vec<_>>().join("-"))
        .collect();
    assert_eq!(multi, ["1-4", "3-4", "3-5"]);
}

#[test]
fn toy_forest_json() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "toy.txt", TOY);
    let out = dir.path().join("forest.json");
    let part = dir.path().join("part.csv");
    ok(&["build", "--graph", s(&g), "--motif", "acyclic", "--out", s(&out), "--assign", "largest", "--partition", s(&part)]);
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["max_k"], 2);
    let quarks = doc["quarks"].as_array().unwrap();
    assert_eq!(quarks.len(), 2);
    assert_eq!(quarks[1]["k"], 2);
    assert_eq!(quarks[1]["parent"], 0);
    assert_eq!(quarks[1]["nodes"], serde_json::json!(["1", "3", "4", "5"]));
    assert_eq!(doc["leaves"], serde_json::json!([1]));
    assert_eq!(std::fs::read_to_string(&part).unwrap(), "node,quark\n1,0\n3,0\n4,0\n5,0\n6,0\n");

    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("forest.json.manifest.json")).unwrap()).unwrap();
    let t = &manifest["timings"];
    let parts: f64 = ["load_s", "count_s", "peel_s", "build_s", "metrics_s"].iter().map(|k| t[k].as_f64().unwrap()).sum();
    assert!((parts - t["total_s"].as_f64().unwrap()).abs() < 1e-6);
    assert_eq!(manifest["counts"]["quarks"], 2);
    assert_eq!(manifest["config"]["motif"], "acyclic");

    let csv = ok(&["metrics", "--graph", s(&g), "--motif", "acyclic", "--forest", s(&out)]);
    assert_eq!(csv, "id,k,nodes,avg_motif_degree,motif_conductance,edge_density\n0,1,5,1,,0.8\n1,2,4,1,1,1\n");

    let truth = write(&dir, "truth.txt", "1 a\n3 a\n4 a\n5 a\n6 a\n");
    let scores = ok(&["metrics", "--graph", s(&g), "--motif", "acyclic", "--forest", s(&out), "--truth", s(&truth)]);
    let scores: serde_json::Value = serde_json::from_str(&scores).unwrap();
    assert_eq!(scores["scores"]["purity"], 1.0);
    assert_eq!(scores["scores"]["shared"], 5);
}

#[test]
fn toy_roles() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "toy.txt", TOY);
    let rq = dir.path().join("rq.json");
    let csv = ok(&["roles", "--graph", s(&g), "--motif", "acyclic", "--level", "1", "--quarks", s(&rq)]);
    assert!(csv.lines().any(|l| l == "node,dominant,orbit_0,orbit_1,orbit_2"));
    // node 1 is always the source of its acyclic triangles
    assert!(csv.lines().any(|l| l == "1,0,1,0,0"));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&rq).unwrap()).unwrap();
    assert_eq!(doc["quarks"].as_array().unwrap().len(), 3);
}

fn random_graph(dir: &TempDir) -> PathBuf {
    let g = synth::random_directed(30, 0.25, 0.2, 7);
    write(dir, "random.txt", &g.to_edge_list())
}

#[test]
fn outputs_do_not_depend_on_worker_count() {
    let dir = TempDir::new().unwrap();
    let g = random_graph(&dir);
    let forest = dir.path().join("f.json");
    ok(&["build", "--graph", s(&g), "--motif", "cycle+", "--out", s(&forest)]);
    let runs: Vec<Vec<&str>> = vec![
        vec!["count", "--graph", s(&g), "--motif", "all", "--max-k"],
        vec!["decompose", "--graph", s(&g), "--motif", "acyclic", "--role-aware"],
        vec!["decompose", "--graph", s(&g), "--motif", "cycle", "--m", "node"],
        vec!["build", "--graph", s(&g), "--motif", "out+"],
        vec!["metrics", "--graph", s(&g), "--motif", "cycle+", "--forest", s(&forest)],
        vec!["roles", "--graph", s(&g), "--motif", "cycle+"],
        vec!["verify", "--graph", s(&g), "--motif", "in+", "--shuffles", "3"],
    ];
    for args in runs {
        let base = quark_cmd(&args, Some(1));
        assert!(base.status.success(), "{args:?}");
        for threads in [1, 2, 4] {
            let again = quark_cmd(&args, Some(threads));
            assert_eq!(again.stdout, base.stdout, "{args:?} with {threads} threads");
        }
    }
}

#[test]
fn verify_passes_on_random_graph() {
    let dir = TempDir::new().unwrap();
    let g = random_graph(&dir);
    let out = ok(&["verify", "--graph", s(&g), "--motif", "cycle+", "--m", "edge", "--seed", "7"]);
    assert_eq!(out, "ok (edge, cycle+)\n");
    let out = ok(&["verify", "--graph", s(&g), "--motif", "all"]);
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn signed_and_labeled_modes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "s.txt", "a b +1\nb c -1\na c +\nc d -\nb d +1\n");
    let csv = ok(&["count", "--graph", s(&g), "--mode", "signed", "--motif", "all"]);
    assert_eq!(csv.lines().count(), 13);
    let total: u64 = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 2);
    let csv = ok(&["decompose", "--graph", s(&g), "--mode", "signed", "--motif", "acyclic++-c"]);
    assert!(csv.lines().nth(1).unwrap().split(',').nth(2).is_some_and(|k| k == "+" || k == "-"));

    let g = write(&dir, "u.txt", "1 2\n2 3\n1 3\n3 4\n1 4\n2 4\n4 5\n");
    let labels = write(&dir, "l.txt", "1 F\n2 F\n3 M\n4 M\n5 F\n");
    let base = ["--graph", s(&g), "--mode", "labeled", "--labels", s(&labels)];
    let csv = ok(&[&["count"][..], &base, &["--motif", "tri:FFM"]].concat());
    assert_eq!(csv.lines().nth(1).unwrap(), "tri:FFM,2,2,6");
    let csv = ok(&[&["count"][..], &base, &["--motif", "all"]].concat());
    // vanilla tri, vanilla clique4, 4 triangle and 5 clique label multisets
    assert_eq!(csv.lines().count(), 12);
    assert!(csv.lines().any(|l| l == "tri,4,2,12"));
    let filtered = ok(&[&["decompose"][..], &base, &["--motif", "tri:FFM", "--filter-labels"]].concat());
    let full = ok(&[&["decompose"][..], &base, &["--motif", "tri:FFM"]].concat());
    let nonzero = |csv: &str| csv.lines().filter(|l| !l.ends_with(",0")).map(String::from).collect::<Vec<_>>();
    assert_eq!(nonzero(&filtered), nonzero(&full));
    let metrics_forest = dir.path().join("lf.json");
    ok(&[&["build"][..], &base, &["--motif", "tri", "--out", s(&metrics_forest)]].concat());
    let csv = ok(&[&["metrics"][..], &base, &["--motif", "tri", "--forest", s(&metrics_forest)]].concat());
    assert!(csv.starts_with("id,k,nodes,avg_motif_degree,motif_conductance,edge_density,ratio_F,ratio_M\n"));
}

fn code(args: &[&str]) -> i32 {
    quark_cmd(args, None).status.code().unwrap()
}

#[test]
fn exit_codes_are_distinct() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "toy.txt", TOY);
    let bad = write(&dir, "bad.txt", "1 2\nonly\n");
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&["count", "--graph", s(&bad), "--motif", "cycle"]), 65);
    assert_eq!(code(&["count", "--graph", s(&missing), "--motif", "cycle"]), 66);
    assert_eq!(code(&["count", "--graph", s(&g), "--motif", "bogus"]), 78);
    assert_eq!(code(&["count", "--graph", s(&g), "--motif", "cycle+--"]), 78);
    assert_eq!(code(&["count", "--graph", s(&g), "--motif", "clique4", "--m", "edge", "--mode", "labeled"]), 78);
    assert_eq!(code(&["decompose", "--graph", s(&g), "--motif", "all"]), 78);
    assert_eq!(code(&["count", "--graph", s(&g)]), 2);
    // a bad motif is reported even when the input is missing
    assert_eq!(code(&["count", "--graph", s(&missing), "--motif", "bogus"]), 78);
    let forest = write(&dir, "f.json", "{not json");
    assert_eq!(code(&["metrics", "--graph", s(&g), "--motif", "acyclic", "--forest", s(&forest)]), 65);
}
