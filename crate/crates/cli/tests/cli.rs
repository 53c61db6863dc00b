use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn netf(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netf"))
        .args(args)
        .current_dir(dir)
        .env_remove("NETF_THREADS")
        .output()
        .expect("spawn netf")
}

fn ok(args: &[&str], dir: &Path) -> Output {
    let out = netf(args, dir);
    assert!(
        out.status.success(),
        "netf {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_writes_labelled_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "generate", "--preset", "ar1_pos", "--n", "2", "--length", "100", "--out", "a.csv",
        ],
        dir.path(),
    );
    let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "AR(1)0.5");
        assert_eq!(fields.len(), 101);
    }
    let manifest = json(&dir.path().join("a.csv.manifest.json"));
    assert_eq!(manifest["command"], "generate");
    assert_eq!(manifest["parameters"]["seed"], 0);
    assert_eq!(manifest["parameters"]["models"][0]["spec"]["kind"], "ar");
}

#[test]
fn generate_all_presets_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        [
            "generate", "--preset", "all", "--n", "3", "--length", "50", "--seed", "7", "--out",
            out,
        ]
    };
    ok(&args("x.csv"), dir.path());
    ok(&args("y.csv"), dir.path());
    let x = fs::read_to_string(dir.path().join("x.csv")).unwrap();
    let y = fs::read_to_string(dir.path().join("y.csv")).unwrap();
    assert_eq!(x, y);
    assert_eq!(x.lines().count(), 33);
    let labels: std::collections::BTreeSet<&str> =
        x.lines().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(labels.len(), 11);
}

#[test]
fn generate_rejects_unknown_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = netf(
        &["generate", "--preset", "nope", "--out", "a.csv"],
        dir.path(),
    );
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn features_subset_and_graph_export() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "generate", "--preset", "wn,inar", "--n", "2", "--length", "80", "--out", "d.csv",
        ],
        dir.path(),
    );

    let out = ok(
        &[
            "features",
            "--input",
            "d.csv",
            "--labels",
            "--mappings",
            "qg",
            "--eta",
            "10",
        ],
        dir.path(),
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "id,label,qg_k,qg_d,qg_S,qg_C,qg_Q");
    for line in lines.by_ref() {
        assert_eq!(line.split(',').count(), 7);
    }

    ok(
        &[
            "features",
            "--input",
            "d.csv",
            "--labels",
            "--out",
            "f.csv",
            "--export-graphs",
            "graphs",
        ],
        dir.path(),
    );
    let header = fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert_eq!(header.lines().next().unwrap().split(',').count(), 17);
    let mut files: Vec<String> = fs::read_dir(dir.path().join("graphs"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files.len(), 4 * 3);
    assert!(files.contains(&"row0_wnvg.edges".to_string()));
    let edges = fs::read_to_string(dir.path().join("graphs/row3_qg.edges")).unwrap();
    assert!(edges.starts_with("# directed nodes=50"));
    assert!(dir.path().join("f.csv.manifest.json").exists());
}

#[test]
fn features_thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "generate", "--preset", "all", "--n", "1", "--length", "120", "--out", "d.csv",
        ],
        dir.path(),
    );
    let one = ok(
        &["--threads", "1", "features", "--input", "d.csv", "--labels"],
        dir.path(),
    )
    .stdout;
    let two = ok(
        &["--threads", "2", "features", "--input", "d.csv", "--labels"],
        dir.path(),
    )
    .stdout;
    assert_eq!(one, two);
}

#[test]
fn pipeline_is_deterministic_and_eval_matches() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let pipeline = |tag: &str| {
        let data = format!("d{tag}.csv");
        let feats = format!("f{tag}.csv");
        let report = format!("r{tag}.json");
        let assign = format!("a{tag}.csv");
        ok(
            &[
                "generate", "--preset", "all", "--n", "4", "--length", "200", "--seed", "11",
                "--out", &data,
            ],
            p,
        );
        ok(
            &["features", "--input", &data, "--labels", "--out", &feats],
            p,
        );
        ok(
            &[
                "cluster",
                "--input",
                &feats,
                "--k",
                "11",
                "--repetitions",
                "3",
                "--seed",
                "5",
                "--report",
                &report,
                "--assignments",
                &assign,
            ],
            p,
        );
        (fs::read_to_string(p.join(&report)).unwrap(), assign)
    };
    let (r1, a1) = pipeline("1");
    let (r2, _) = pipeline("2");
    assert_eq!(r1, r2);

    let report: serde_json::Value = serde_json::from_str(&r1).unwrap();
    assert_eq!(report["k"], 11);
    assert_eq!(report["per_repetition"].as_array().unwrap().len(), 3);
    assert!(report["ari"].as_f64().unwrap() > 0.0);
    assert!(report["nmi"].as_f64().unwrap() > 0.0);
    assert!(report["as"].as_f64().is_some());
    assert_eq!(report["explained_variance"].as_array().unwrap().len(), 15);

    let out = ok(&["eval", "--pred", &a1, "--truth", &a1], p);
    let e: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(e["ari"], 1.0);
    assert_eq!(e["nmi"], 1.0);
}

#[test]
fn cluster_select_k_and_pcs() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    ok(
        &[
            "generate",
            "--preset",
            "wn,arima,inar",
            "--n",
            "6",
            "--length",
            "200",
            "--out",
            "d.csv",
        ],
        p,
    );
    ok(
        &["features", "--input", "d.csv", "--labels", "--out", "f.csv"],
        p,
    );
    let out = ok(
        &[
            "cluster",
            "--input",
            "f.csv",
            "--select-k",
            "2:5",
            "--metric",
            "as",
            "--pcs",
            "2",
            "--repetitions",
            "2",
        ],
        p,
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let k = report["k"].as_u64().unwrap();
    assert!((2..=5).contains(&k));
    assert_eq!(report["selection"]["k"].as_u64().unwrap(), k);
    assert_eq!(report["selection"]["scores"].as_array().unwrap().len(), 4);
    assert_eq!(report["components"], 2);
}

#[test]
fn cluster_label_metric_without_labels_fails() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    ok(
        &[
            "generate", "--preset", "wn,inar", "--n", "4", "--length", "100", "--out", "d.csv",
        ],
        p,
    );
    // Drop the label column.
    let text = fs::read_to_string(p.join("d.csv")).unwrap();
    let unlabelled: String = text
        .lines()
        .map(|l| format!("{}\n", l.split_once(',').unwrap().1))
        .collect();
    fs::write(p.join("u.csv"), unlabelled).unwrap();
    ok(&["features", "--input", "u.csv", "--out", "f.csv"], p);
    let out = netf(
        &[
            "cluster",
            "--input",
            "f.csv",
            "--select-k",
            "2:3",
            "--metric",
            "ari",
        ],
        p,
    );
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    let out = netf(
        &[
            "cluster",
            "--input",
            "f.csv",
            "--k",
            "2",
            "--select-k",
            "2:3",
        ],
        p,
    );
    assert!(!out.status.success());
}

#[test]
fn eval_known_pair_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    fs::write(p.join("pred.csv"), "id,cluster\na,0\nb,0\nc,1\nd,1\n").unwrap();
    fs::write(p.join("truth.csv"), "id,label\nd,y\nc,y\nb,y\na,x\n").unwrap();
    let out = ok(&["eval", "--pred", "pred.csv", "--truth", "truth.csv"], p);
    let e: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // Pair counts: n11 = 1, n10 = 1, n01 = 2, n00 = 2.
    let (n11, n10, n01, n00) = (1.0, 1.0, 2.0, 2.0);
    let oracle =
        2.0 * (n11 * n00 - n10 * n01) / ((n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00));
    assert!((e["ari"].as_f64().unwrap() - oracle).abs() < 1e-12);

    fs::write(p.join("other.csv"), "id,cluster\nw,0\nx,0\ny,1\nz,1\n").unwrap();
    let out = netf(&["eval", "--pred", "pred.csv", "--truth", "other.csv"], p);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("id mismatch"));
}
