use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use champ::envelope::geometry::shared_border_length;
use champ::envelope::Point;
use champ::io::DomainDocument;
use champ::similarity::ami;
use champ::Partition;
use tempfile::TempDir;

const TWO_TRIANGLES: &str = "a b\nb c\na c\nc d\nd e\ne f\nd f\n";

fn champ(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_champ"))
        .args(args)
        .env_remove("CHAMP_THREADS")
        .output()
        .expect("binary runs")
}

fn champ_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_champ"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Work {
    dir: TempDir,
}

impl Work {
    fn new() -> Work {
        Work { dir: TempDir::new().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn s(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn write(&self, name: &str, text: &str) -> String {
        fs::write(self.path(name), text).unwrap();
        self.s(name)
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path(name)).unwrap()
    }
}

fn sweep_triangles(w: &Work, out: &str, seed: &str) -> Output {
    let net = w.write("net.txt", TWO_TRIANGLES);
    champ(&["sweep", "--network", &net, "--gamma-range", "0", "4", "--runs", "300", "--seed", seed, "--out", &w.s(out)])
}

/// Two layers of a 6-actor network with two triangles, the second layer
/// moving actor `c` to the other triangle, coupled by identity edges.
fn multilayer_text() -> String {
    let mut s = String::new();
    let layer0 = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)];
    let layer1 = [(0, 1), (3, 4), (4, 5), (3, 5), (2, 3), (2, 4), (1, 5)];
    for (l, edges) in [(0, &layer0), (1, &layer1)] {
        for &(i, j) in edges.iter() {
            s.push_str(&format!("{i} {l} {j} {l} 1 intra\n"));
        }
    }
    for a in 0..6 {
        s.push_str(&format!("{a} 0 {a} 1 1 inter\n"));
    }
    s
}

#[test]
fn sweep_writes_one_line_per_run_and_reports_unique_count() {
    let w = Work::new();
    let o = sweep_triangles(&w, "ens.jsonl", "7");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(w.read("ens.jsonl").lines().count(), 300);
    let out = stdout(&o);
    assert!(out.contains("unique partitions:"), "{out}");
    assert!(out.contains("elapsed:"), "{out}");
    for line in w.read("ens.jsonl").lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["gamma"].is_f64() && v["seed"].is_u64() && v["labels"].as_array().unwrap().len() == 6);
    }
}

#[test]
fn usage_errors_exit_2() {
    let w = Work::new();
    let net = w.write("net.txt", TWO_TRIANGLES);
    let ml = w.write("ml.txt", &multilayer_text());
    let out = w.s("x");

    let o = champ(&["sweep", "--network", &net, "--gamma-range", "0", "4", "--runs", "0", "--out", &out]);
    assert_eq!(code(&o), 2);

    let o = champ(&["sweep", "--multilayer", &ml, "--gamma-range", "0", "4", "--runs", "5", "--out", &out]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--omega-range"), "{}", stderr(&o));

    let o = champ(&["sweep", "--network", &net, "--gamma-range", "3", "1", "--runs", "5", "--out", &out]);
    assert_eq!(code(&o), 2);

    let o = champ(&["sweep", "--network", &net, "--runs", "5", "--out", &out]);
    assert_eq!(code(&o), 2);

    let o = champ(&["prune", "--network", &w.s("missing.txt"), "--ensemble", &out, "--gamma-range", "0", "1", "--out", &out]);
    assert_eq!(code(&o), 2);

    let o = champ(&["frobnicate"]);
    assert_eq!(code(&o), 2);

    let o = champ_env(&["sweep", "--network", &net, "--gamma-range", "0", "4", "--runs", "5", "--out", &out], "CHAMP_THREADS", "zero");
    assert_eq!(code(&o), 2);
    assert!(!Path::new(&out).exists());
}

#[test]
fn runtime_errors_exit_1() {
    let w = Work::new();
    let net = w.write("net.txt", TWO_TRIANGLES);
    let bad = w.write("bad.jsonl", "{\"gamma\":1.0,\"omega\":null,\"seed\":1,\"labels\":[0,0,0]}\n");
    let o = champ(&["prune", "--network", &net, "--ensemble", &bad, "--gamma-range", "0", "4", "--out", &w.s("d.json")]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("length mismatch"), "{}", stderr(&o));

    let garbled = w.write("garbled.jsonl", "not json\n");
    let o = champ(&["coeffs", "--network", &net, "--ensemble", &garbled]);
    assert_eq!(code(&o), 1);

    let empty = w.write("empty.jsonl", "");
    let o = champ(&["prune", "--network", &net, "--ensemble", &empty, "--gamma-range", "0", "4", "--out", &w.s("d.json")]);
    assert_eq!(code(&o), 1);
}

#[test]
fn sweep_and_prune_are_byte_deterministic() {
    let w = Work::new();
    assert_eq!(code(&sweep_triangles(&w, "a.jsonl", "11")), 0);
    assert_eq!(code(&sweep_triangles(&w, "b.jsonl", "11")), 0);
    assert_eq!(w.read("a.jsonl"), w.read("b.jsonl"));

    let net = w.s("net.txt");
    let threads = ["1", "4"];
    for (t, name) in threads.iter().zip(["t1.jsonl", "t4.jsonl"]) {
        let o = champ_env(
            &["sweep", "--network", &net, "--gamma-range", "0", "4", "--runs", "300", "--seed", "11", "--out", &w.s(name)],
            "CHAMP_THREADS",
            t,
        );
        assert_eq!(code(&o), 0);
    }
    assert_eq!(w.read("t1.jsonl"), w.read("a.jsonl"));
    assert_eq!(w.read("t4.jsonl"), w.read("a.jsonl"));

    let mut lines: Vec<&str> = Vec::new();
    let text = w.read("a.jsonl");
    lines.extend(text.lines());
    lines.reverse();
    lines.rotate_left(37);
    let shuffled = w.write("shuffled.jsonl", &(lines.join("\n") + "\n"));

    for (ens, out) in [(w.s("a.jsonl"), "d1.json"), (shuffled, "d2.json")] {
        let o = champ(&["prune", "--network", &net, "--ensemble", &ens, "--gamma-range", "0", "4", "--out", &w.s(out), "--svg", &w.s(&format!("{out}.svg"))]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(w.read("d1.json"), w.read("d2.json"));
    assert_eq!(w.read("d1.json.svg"), w.read("d2.json.svg"));
}

#[test]
fn coefficient_table_prunes_like_the_ensemble() {
    let w = Work::new();
    assert_eq!(code(&sweep_triangles(&w, "e.jsonl", "5")), 0);
    let net = w.s("net.txt");
    let o = champ(&["coeffs", "--network", &net, "--ensemble", &w.s("e.jsonl"), "--out", &w.s("c.csv")]);
    assert_eq!(code(&o), 0);
    assert!(w.read("c.csv").starts_with("partition_id,a_hat,p_hat,c_hat,n_communities,n_communities_ge5\n"));

    let via_ens = champ(&["prune", "--network", &net, "--ensemble", &w.s("e.jsonl"), "--gamma-range", "0", "4", "--out", &w.s("a.json")]);
    let via_csv = champ(&["prune", "--coeffs", &w.s("c.csv"), "--gamma-range", "0", "4", "--out", &w.s("b.json")]);
    assert_eq!(code(&via_ens), 0);
    assert_eq!(code(&via_csv), 0);
    assert_eq!(w.read("a.json"), w.read("b.json"));
}

#[test]
fn single_partition_covers_the_whole_range() {
    let w = Work::new();
    let net = w.write("net.txt", TWO_TRIANGLES);
    let ens = w.write("one.jsonl", "{\"gamma\":1.0,\"omega\":null,\"seed\":1,\"labels\":[0,0,0,1,1,1]}\n");
    let o = champ(&["prune", "--network", &net, "--ensemble", &ens, "--gamma-range", "0.5", "3", "--out", &w.s("d.json")]);
    assert_eq!(code(&o), 0);
    let doc = DomainDocument::from_json(&w.read("d.json")).unwrap();
    assert_eq!(doc.domains.len(), 1);
    assert_eq!(doc.domains[0].interval, Some([0.5, 3.0]));
    assert!(doc.transitions.is_empty());

    let o = champ(&["analyze", "--network", &net, "--ensemble", &ens, "--domains", &w.s("d.json"), "--ami-matrix", &w.s("m.csv")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(w.read("m.csv"), "partition_id,0\n0,1\n");
}

#[test]
fn two_d_toy_from_coefficients() {
    let w = Work::new();
    let csv = w.write(
        "c.csv",
        "partition_id,a_hat,p_hat,c_hat,n_communities,n_communities_ge5\n1,10,10,0,1,1\n2,6,2,0,3,0\n3,8,6,4,2,0\n",
    );
    let o = champ(&["prune", "--coeffs", &csv, "--mode", "2d", "--gamma-range", "0", "2", "--omega-range", "0", "2", "--out", &w.s("d.json"), "--svg", &w.s("d.svg")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = DomainDocument::from_json(&w.read("d.json")).unwrap();
    assert!(doc.is_2d());
    let areas: Vec<(usize, f64)> = doc.domains.iter().map(|d| (d.partition_id, d.extent)).collect();
    let expected = [(1, 0.125), (2, 1.125), (3, 2.75)];
    assert_eq!(areas.len(), 3);
    for ((id, area), (eid, earea)) in areas.iter().zip(expected) {
        assert_eq!(*id, eid);
        assert!((area - earea).abs() < 1e-12, "{id}: {area}");
    }
    assert!(doc.outside_box.is_empty());
    assert!(w.read("d.svg").starts_with("<svg") || w.read("d.svg").starts_with("<?xml"));

    let o = champ(&["prune", "--coeffs", &csv, "--mode", "2d", "--gamma-range", "0", "2", "--out", &w.s("d.json")]);
    assert_eq!(code(&o), 2);
    let o = champ(&["prune", "--coeffs", &csv, "--mode", "2d", "--gamma-range", "0", "2", "--omega-range", "0", "2", "--out", &w.s("d.json"), "--svg", &w.s("x.svg"), "--color-key", "neighbor-ami"]);
    assert_eq!(code(&o), 2);
}

fn weighted_neighbor_ami(doc: &DomainDocument, parts: &[Partition]) -> Vec<Option<f64>> {
    let polys: Vec<Vec<Point>> = doc
        .domains
        .iter()
        .map(|d| d.polygon.as_ref().unwrap().iter().map(|&[x, y]| Point::new(x, y)).collect())
        .collect();
    (0..polys.len())
        .map(|i| {
            let (mut s, mut wsum) = (0.0, 0.0);
            for j in 0..polys.len() {
                if i == j {
                    continue;
                }
                let len = shared_border_length(&polys[i], &polys[j], 1e-9);
                if len > 1e-9 {
                    s += len * ami(&parts[i], &parts[j]).unwrap();
                    wsum += len;
                }
            }
            (wsum > 0.0).then(|| s / wsum)
        })
        .collect()
}

#[test]
fn multilayer_pipeline_annotates_domains() {
    let w = Work::new();
    let ml = w.write("ml.txt", &multilayer_text());
    let meta = w.write("meta.txt", "0 a\n1 a\n2 a\n3 b\n4 b\n5 b\n0 1 a\n1 1 a\n2 1 b\n3 1 b\n4 1 b\n5 1 a\n");
    let ens = w.s("ens.jsonl");
    let o = champ(&["sweep", "--multilayer", &ml, "--gamma-range", "0", "2", "--omega-range", "0", "2", "--grid", "10", "10", "--runs", "400", "--seed", "2", "--out", &ens]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(w.read("ens.jsonl").lines().count(), 400);

    let o = champ(&["prune", "--multilayer", &ml, "--ensemble", &ens, "--gamma-range", "0", "2", "--omega-range", "0", "2", "--out", &w.s("d.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let raw = w.read("d.json");
    assert!(raw.contains("\"polygon\"") && raw.contains("\"outside_box\""));

    let o = champ(&["analyze", "--multilayer", &ml, "--ensemble", &ens, "--domains", &w.s("d.json"), "--svg", &w.s("m.svg"), "--color-key", "metadata-ami"]);
    assert_eq!(code(&o), 2, "metadata color key without metadata");

    let o = champ(&[
        "analyze", "--multilayer", &ml, "--ensemble", &ens, "--domains", &w.s("d.json"), "--metadata", &meta,
        "--out", &w.s("a.json"), "--ami-matrix", &w.s("m.csv"), "--scatter", &w.s("s.csv"),
        "--svg", &w.s("n.svg"), "--color-key", "neighbor-ami",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = DomainDocument::from_json(&w.read("a.json")).unwrap();
    assert!(doc.domains.iter().all(|d| d.metadata_ami.is_some()));

    let records = champ::io::parse_ensemble(&w.read("ens.jsonl"), "ens").unwrap();
    let mut unique: Vec<Vec<usize>> = records.iter().map(|r| Partition::new(r.labels.clone()).into_labels()).collect();
    unique.sort();
    unique.dedup();
    let parts: Vec<Partition> = doc.domains.iter().map(|d| Partition::new(unique[d.partition_id].clone())).collect();
    let expected = weighted_neighbor_ami(&doc, &parts);
    for (d, e) in doc.domains.iter().zip(expected) {
        match (d.neighbor_ami, e) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12, "{a} vs {b}"),
            (a, b) => assert_eq!(a, b),
        }
    }

    assert_eq!(w.read("s.csv").lines().count(), 401);
    let m = w.read("m.csv");
    assert_eq!(m.lines().count(), doc.domains.len() + 1);
}

#[test]
fn oracle_enumerates_small_networks() {
    let w = Work::new();
    let net = w.write("net.txt", TWO_TRIANGLES);
    let o = champ(&["oracle", "--network", &net, "--gamma-range", "0", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("partitions: 203") && out.contains("mismatches: 0"), "{out}");

    let csv = w.write(
        "c.csv",
        "partition_id,a_hat,p_hat,c_hat,n_communities,n_communities_ge5\n1,10,10,0,1,1\n2,6,2,0,3,0\n3,8,6,4,2,0\n",
    );
    let o = champ(&["oracle", "--coeffs", &csv, "--gamma-range", "0", "2", "--omega-range", "0", "2", "--samples", "50"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}
