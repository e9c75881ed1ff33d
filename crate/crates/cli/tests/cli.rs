//! End-to-end tests of the `masskit` binary: exit codes, help surface,
//! schema checks, double-run byte determinism and golden-file regression
//! on committed fixtures.
//!
//! Regenerate the golden files with:
//! `MASSKIT_BLESS=1 cargo test -p masskit-cli --test cli`

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_masskit")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn run_ok(dir: &Path, args: &[&str]) {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "masskit {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compares a produced file against its committed golden copy, or
/// rewrites the golden copy when MASSKIT_BLESS is set.
fn check_golden(produced: &Path, name: &str) {
    let golden = golden_dir().join(name);
    let actual = std::fs::read(produced).expect("produced file exists");
    if std::env::var_os("MASSKIT_BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&golden, &actual).unwrap();
        return;
    }
    let expected = std::fs::read(&golden)
        .unwrap_or_else(|_| panic!("golden file {name} missing; run with MASSKIT_BLESS=1"));
    assert_eq!(
        actual,
        expected,
        "{name} drifted from the committed golden copy"
    );
}

/// Runs the full pipeline once into `dir` with fixed seeds. Returns the
/// list of (relative path, golden name) pairs it produced.
fn run_pipeline(dir: &Path) -> Vec<(PathBuf, &'static str)> {
    let p = |s: &str| dir.join(s).to_string_lossy().into_owned();

    run_ok(dir, &["synth", "shapes", "--n", "120", "--seed", "7", "--out-dir", &p("shapes")]);
    run_ok(
        dir,
        &[
            "extract", "shapes", "--manifest", &p("shapes/manifest.json"),
            "--out", &p("features.csv"), "--label", "diagnosis",
        ],
    );
    run_ok(
        dir,
        &[
            "synth", "experts", "--k", "5", "--trials", "1000", "--seed", "3",
            "--out", &p("votes.csv"), "--competencies-out", &p("competencies.json"),
        ],
    );
    run_ok(
        dir,
        &[
            "combine", "--votes", &p("votes.csv"), "--competencies", &p("competencies.json"),
            "--check-bayes", "--out-json", &p("combine.json"), "--out-csv", &p("combine.csv"),
        ],
    );
    run_ok(
        dir,
        &[
            "synth", "textures", "--class", "malignant_like", "--size", "64",
            "--seed", "5", "--out", &p("texture.pgm"),
        ],
    );
    run_ok(
        dir,
        &[
            "extract", "texture", "--image", &p("texture.pgm"), "--box-size", "20",
            "--out", &p("texmap.csv"), "--aggregate", &p("texagg.csv"),
            "--curves", &p("texcurves.csv"), "--label", "malignant",
        ],
    );
    run_ok(
        dir,
        &[
            "analyze", "rank", "--features", &p("features.csv"),
            "--out-json", &p("rank.json"), "--out-csv", &p("rank.csv"),
        ],
    );
    run_ok(
        dir,
        &[
            "analyze", "manova", "--features", &p("features.csv"),
            "--columns", "raw_roughness_index,raw_circularity,raw_area_ratio",
            "--out-json", &p("manova.json"),
        ],
    );
    run_ok(
        dir,
        &[
            "analyze", "fractal", "--features", &p("features.csv"),
            "--out-json", &p("fractal.json"), "--out-csv", &p("fractal.csv"),
        ],
    );
    run_ok(
        dir,
        &[
            "train-eval", "--features", &p("features.csv"), "--classifier", "lda",
            "--seed", "11", "--out-report", &p("eval.json"),
            "--out-model", &p("model.json"), "--out-roc", &p("roc"),
        ],
    );

    vec![
        (dir.join("shapes/manifest.json"), "manifest.json"),
        (dir.join("shapes/contour_00000.csv"), "contour_00000.csv"),
        (dir.join("features.csv"), "features.csv"),
        (dir.join("votes.csv"), "votes.csv"),
        (dir.join("competencies.json"), "competencies.json"),
        (dir.join("combine.json"), "combine.json"),
        (dir.join("combine.csv"), "combine.csv"),
        (dir.join("texture.pgm"), "texture.pgm"),
        (dir.join("texmap.csv"), "texmap.csv"),
        (dir.join("texagg.csv"), "texagg.csv"),
        (dir.join("texcurves.csv"), "texcurves.csv"),
        (dir.join("rank.json"), "rank.json"),
        (dir.join("rank.csv"), "rank.csv"),
        (dir.join("manova.json"), "manova.json"),
        (dir.join("fractal.json"), "fractal.json"),
        (dir.join("fractal.csv"), "fractal.csv"),
        (dir.join("eval.json"), "eval.json"),
        (dir.join("model.json"), "model.json"),
        (dir.join("roc_rep0.csv"), "roc_rep0.csv"),
    ]
}

#[test]
fn pipeline_outputs_match_goldens_and_reruns() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("run1");
    std::fs::create_dir_all(&first).unwrap();
    let outputs = run_pipeline(&first);
    for (path, name) in &outputs {
        check_golden(path, name);
    }

    // byte-reproducibility across two runs on the same platform
    let second = tmp.path().join("run2");
    std::fs::create_dir_all(&second).unwrap();
    let outputs2 = run_pipeline(&second);
    for ((a, name), (b, _)) in outputs.iter().zip(&outputs2) {
        let x = std::fs::read(a).unwrap();
        let y = std::fs::read(b).unwrap();
        assert_eq!(x, y, "{name} differs between identical runs");
    }
}

#[test]
fn votes_csv_shape_matches_spec_example() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("v.csv");
    run_ok(
        tmp.path(),
        &[
            "synth", "experts", "--k", "5", "--trials", "1000", "--seed", "3",
            "--out", out.to_str().unwrap(),
        ],
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1001); // header + 1000 rows
    assert_eq!(lines[0], "expert_1,expert_2,expert_3,expert_4,expert_5,truth");
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
}

#[test]
fn texture_tiling_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |s: &str| tmp.path().join(s).to_string_lossy().into_owned();
    run_ok(
        tmp.path(),
        &["synth", "textures", "--class", "benign_like", "--size", "100", "--seed", "2", "--out", &p("t.pgm")],
    );
    run_ok(
        tmp.path(),
        &["extract", "texture", "--image", &p("t.pgm"), "--box-size", "50", "--out", &p("m50.csv")],
    );
    run_ok(
        tmp.path(),
        &["extract", "texture", "--image", &p("t.pgm"), "--box-size", "20", "--out", &p("m20.csv")],
    );
    let rows = |name: &str| {
        std::fs::read_to_string(tmp.path().join(name))
            .unwrap()
            .lines()
            .count()
            - 1
    };
    assert_eq!(rows("m50.csv"), 4);
    assert_eq!(rows("m20.csv"), 25);
    // both files carry the 20-function bank plus box metadata
    for name in ["m50.csv", "m20.csv"] {
        let text = std::fs::read_to_string(tmp.path().join(name)).unwrap();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("box_x,box_y,fo_mean,"));
        assert_eq!(header.split(',').count(), 22);
    }
}

#[test]
fn single_contour_descriptor_has_49_columns() {
    let tmp = tempfile::tempdir().unwrap();
    // 64-gon approximating the unit circle
    let mut csv = String::new();
    for i in 0..64 {
        let t = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
        csv.push_str(&format!("{},{}\n", t.cos(), t.sin()));
    }
    let contour = tmp.path().join("circle.csv");
    std::fs::write(&contour, csv).unwrap();
    let out = tmp.path().join("f.csv");
    run_ok(
        tmp.path(),
        &[
            "extract", "shapes", "--contour", contour.to_str().unwrap(),
            "--out", out.to_str().unwrap(),
        ],
    );
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 49);
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // near-circular contour: raw roughness ≈ 0
    let idx = header.iter().position(|h| *h == "raw_roughness_index").unwrap();
    assert!(row[idx].abs() < 1e-3, "roughness {}", row[idx]);
}

#[test]
fn carrier_dumps_and_decision_matrix() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |s: &str| tmp.path().join(s).to_string_lossy().into_owned();
    // star-shaped contour fixture
    let mut csv = String::new();
    for i in 0..256 {
        let t = 2.0 * std::f64::consts::PI * i as f64 / 256.0;
        let r = 5.0 * (1.0 + 0.2 * (4.0 * t).sin());
        csv.push_str(&format!("{},{}\n", r * t.cos(), r * t.sin()));
    }
    std::fs::write(tmp.path().join("star.csv"), csv).unwrap();
    run_ok(
        tmp.path(),
        &[
            "extract", "shapes", "--contour", &p("star.csv"), "--out", &p("f.csv"),
            "--carriers-out", &p("carriers"),
        ],
    );
    let lines = |name: &str| {
        std::fs::read_to_string(tmp.path().join(name))
            .unwrap()
            .lines()
            .count()
    };
    assert_eq!(lines("carriers/raw.csv"), 256);
    assert_eq!(lines("carriers/dft_envelope.csv"), 129);
    assert_eq!(lines("carriers/dwt_d1.csv"), 128);
    assert_eq!(lines("carriers/dwt_a4.csv"), 16);

    // per-rule decision matrix from combine
    run_ok(
        tmp.path(),
        &[
            "synth", "experts", "--k", "3", "--trials", "50", "--seed", "8",
            "--out", &p("v.csv"),
        ],
    );
    run_ok(
        tmp.path(),
        &[
            "combine", "--votes", &p("v.csv"), "--out-json", &p("c.json"),
            "--out-csv", &p("c.csv"), "--out-decisions", &p("d.csv"),
        ],
    );
    let text = std::fs::read_to_string(tmp.path().join("d.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "wmr_direct,wmr_odds,wmr_logodds,majority,max,min,median,average,weighted_average,truth"
    );
    assert_eq!(lines.count(), 50);
}

#[test]
fn exit_codes_follow_convention() {
    let tmp = tempfile::tempdir().unwrap();
    // missing required --n: argument error, exit 2 with usage text
    let out = run_in(tmp.path(), &["synth", "shapes", "--seed", "1", "--out-dir", "x"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--n"), "{stderr}");

    // malformed input file: runtime error, exit 1, message names the path
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "0,0\n1,oops\n2,2\n").unwrap();
    let out = run_in(
        tmp.path(),
        &[
            "extract", "shapes", "--contour", bad.to_str().unwrap(),
            "--out", tmp.path().join("o.csv").to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.csv"), "{stderr}");
    assert!(stderr.contains(":2"), "{stderr}");

    // unknown flag rejected
    let out = run_in(tmp.path(), &["synth", "shapes", "--n", "1", "--seed", "1", "--out-dir", "x", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_surface_exists_for_every_subcommand() {
    for args in [
        vec!["--help"],
        vec!["synth", "--help"],
        vec!["synth", "shapes", "--help"],
        vec!["synth", "experts", "--help"],
        vec!["synth", "textures", "--help"],
        vec!["extract", "--help"],
        vec!["extract", "shapes", "--help"],
        vec!["extract", "texture", "--help"],
        vec!["analyze", "--help"],
        vec!["analyze", "rank", "--help"],
        vec!["analyze", "manova", "--help"],
        vec!["analyze", "fractal", "--help"],
        vec!["train-eval", "--help"],
        vec!["combine", "--help"],
    ] {
        let out = Command::new(bin()).args(&args).output().unwrap();
        assert!(out.status.success(), "{args:?}");
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("Usage:"), "{args:?}: {text}");
    }
}

#[test]
fn single_expert_combine_degenerates_to_that_expert() {
    let tmp = tempfile::tempdir().unwrap();
    let votes = tmp.path().join("one.csv");
    std::fs::write(
        &votes,
        "expert_1,truth\n1,1\n-1,-1\n1,-1\n-1,-1\n1,1\n",
    )
    .unwrap();
    let json = tmp.path().join("r.json");
    let csv = tmp.path().join("r.csv");
    run_ok(
        tmp.path(),
        &[
            "combine", "--votes", votes.to_str().unwrap(),
            "--out-json", json.to_str().unwrap(), "--out-csv", csv.to_str().unwrap(),
        ],
    );
    // the lone expert is right on 4 of 5 rows; every rule must match that
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let acc: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((acc - 0.8).abs() < 1e-12, "{line}");
    }
}

#[test]
fn model_file_round_trips_through_cli_format() {
    let tmp = tempfile::tempdir().unwrap();
    let p = |s: &str| tmp.path().join(s).to_string_lossy().into_owned();
    run_ok(tmp.path(), &["synth", "shapes", "--n", "60", "--seed", "21", "--out-dir", &p("s")]);
    run_ok(
        tmp.path(),
        &[
            "extract", "shapes", "--manifest", &p("s/manifest.json"),
            "--out", &p("f.csv"), "--label", "diagnosis",
        ],
    );
    run_ok(
        tmp.path(),
        &[
            "train-eval", "--features", &p("f.csv"), "--classifier", "knn", "--k", "3",
            "--seed", "2", "--out-report", &p("r.json"), "--out-model", &p("m.json"),
        ],
    );
    let model = masskit_cli::model::model_from_json(&tmp.path().join("m.json")).unwrap();
    assert_eq!(model.columns().len(), 49);
}
