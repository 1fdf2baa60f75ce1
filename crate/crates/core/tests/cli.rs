use std::path::Path;
use std::process::{Command, Output};

use qdiff::algorithms::Trace;

fn qdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bell_prints_probabilities_and_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bell.json");
    let o = qdiff(&["bell", "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "probs = [0.5, 0, 0, 0.5]");
    let trace = Trace::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(trace.experiment, "bell");
    assert_eq!(trace.summary(), stdout(&o).trim());
}

#[test]
fn grad_check_reports_small_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gc.json");
    let o = qdiff(&["grad-check", "--seed", "11", "-o", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let trace = Trace::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(trace.final_cost() < 1e-6);
    assert_eq!(trace.final_record.extra["n_tapes"], 50);
}

#[test]
fn vqe_reaches_ground_energy_and_summary_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("vqe.json");
    let o = qdiff(&[
        "vqe",
        "--iterations",
        "300",
        "--restarts",
        "5",
        "--seed",
        "7",
        "-o",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let trace = Trace::from_json(&text).unwrap();
    assert!((trace.final_cost() + 1.23).abs() <= 1e-3, "{}", trace.final_cost());
    assert_eq!(trace.final_record.restart_costs.len(), 5);
    assert_eq!(trace.iterations.len(), 301);
    assert_eq!(trace.summary(), stdout(&o).trim());
    assert_eq!(trace.to_json().unwrap().trim_end(), text.trim_end());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qdiff(&["teleport"]).status.code(), Some(2));
    assert_eq!(qdiff(&["bell", "--optimizer", "sgd"]).status.code(), Some(2));
    // flag the experiment would ignore
    let o = qdiff(&["bell", "--iterations", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let line: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(line["error"], "validation");
}

#[test]
fn runtime_errors_exit_one_with_json_line() {
    let o = qdiff(&["bell", "-o", "/nonexistent-dir/out.json"]);
    assert_eq!(o.status.code(), Some(1));
    let line: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(line["error"], "io");
    assert!(line["message"].as_str().unwrap().contains("/nonexistent-dir/out.json"));

    let o = qdiff(&["kernel", "--input", "/nonexistent-dir/data.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent-dir/data.csv"));
}

#[test]
fn kernel_from_csv_writes_gram_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.csv");
    std::fs::write(&input, "a,b,junk\n0.1,2.0,x\n,1.0,y\n0.9,NA,z\n0.5,0.5,w\n").unwrap();
    let k_path = dir.path().join("k.csv");
    let out = dir.path().join("k.json");
    let o = qdiff(&[
        "kernel",
        "--input",
        path_str(&input),
        "--features",
        "a,b",
        "--scale",
        "--kernel-output",
        path_str(&k_path),
        "-o",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let k: Vec<Vec<f64>> = std::fs::read_to_string(&k_path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(k.len(), 4);
    for i in 0..4 {
        assert_eq!(k[i].len(), 4);
        assert!((k[i][i] - 1.0).abs() < 1e-12 || k[i][i] >= 0.25);
        for j in 0..4 {
            assert_eq!(k[i][j], k[j][i]);
        }
    }
}

#[test]
fn kernel_rejects_unknown_feature_column() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("points.csv");
    std::fs::write(&input, "a,b\n0.1,2.0\n").unwrap();
    let o = qdiff(&["kernel", "--input", path_str(&input), "--features", "a,c"]);
    assert_eq!(o.status.code(), Some(1));
    let line: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(line["error"], "schema");
}

#[test]
fn hybrid_trains_on_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("train.csv");
    let mut csv = String::from("f0,f1,f2,f3,f4,f5,f6,f7,label\n");
    for r in 0..12 {
        let row: Vec<String> = (0..8).map(|c| format!("{}", ((r * 7 + c * 3) % 11) as f64 / 10.0)).collect();
        csv.push_str(&format!("{},{}\n", row.join(","), r % 2));
    }
    std::fs::write(&input, csv).unwrap();
    let out = dir.path().join("h.json");
    let o = qdiff(&[
        "hybrid",
        "--input",
        path_str(&input),
        "--iterations",
        "3",
        "-o",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let trace = Trace::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(trace.iterations.len(), 4);
    assert!(trace.final_record.extra.contains_key("accuracy"));
}

#[test]
fn circuit_file_runs_and_checks_gradients() {
    let dir = tempfile::tempdir().unwrap();
    let circ = dir.path().join("c.qc");
    std::fs::write(
        &circ,
        "QUBITS 2\nPARAMS 2\nRY 0 $0\nCNOT 0,1\nRX 1 2*$1\nMEASURE expval Z(0)*Z(1)\n",
    )
    .unwrap();
    let o = qdiff(&["bell", "--circuit", path_str(&circ), "--params", "0.4,-1.2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // Z0·Z1 is invariant under the CNOT, so only the RX angle matters
    let expected = 2.4f64.cos();
    let printed: f64 = stdout(&o)
        .split(" = ")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((printed - expected).abs() < 1e-8, "{}", stdout(&o));

    let o = qdiff(&["grad-check", "--circuit", path_str(&circ), "--params", "0.4,-1.2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    std::fs::write(&circ, "QUBITS 2\nFOO 0\nMEASURE probs 0\n").unwrap();
    let o = qdiff(&["bell", "--circuit", path_str(&circ)]);
    assert_eq!(o.status.code(), Some(1));
    let line: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(line["error"], "parse");
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = qdiff(&["portfolio", "--shots", "2000", "--seed", "5", "--iterations", "20", "-o", path_str(p)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
