//! End-to-end tests of the `permsep` binary: exit codes, golden CSV/JSON
//! schemas, and the documented interface behaviors.

use std::path::Path;
use std::process::{Command, Output};

use permsep_core::synth::{gen_sources, SourceKind, SynthSpec};
use permsep_core::wav::write_wav_pcm16;

fn permsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permsep"))
        .args(args)
        .output()
        .expect("failed to spawn permsep")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn json_of(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(output)).expect("stdout is not JSON")
}

fn write_scene(dir: &Path, seed: u64, n: usize) {
    std::fs::create_dir_all(dir).unwrap();
    let sources = gen_sources(&SynthSpec::new(n, 512, SourceKind::Sinusoid, seed)).unwrap();
    for (i, signal) in sources.signals().iter().enumerate() {
        write_wav_pcm16(&dir.join(format!("src{i}.wav")), signal, 8000).unwrap();
    }
}

#[test]
fn help_exits_zero_and_lists_subcommands() {
    let out = permsep(&["--help"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for sub in ["bench", "train", "compare", "eval", "assign"] {
        assert!(text.contains(sub), "help does not mention {sub}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(permsep(&["--bogus-flag"]).status.code(), Some(1));
    assert_eq!(permsep(&["train", "--loss", "nonsense"]).status.code(), Some(1));
    assert_eq!(permsep(&[]).status.code(), Some(1));
}

#[test]
fn assign_solves_a_cost_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let cost = dir.path().join("cost.csv");
    std::fs::write(&cost, "0.0,1.0\n1.0,0.0\n").unwrap();
    let out = permsep(&["assign", "--cost", cost.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "assign");
    assert_eq!(doc["permutation"], serde_json::json!([0, 1]));
    assert_eq!(doc["total_cost"], serde_json::json!(0.0));
}

#[test]
fn assign_methods_agree_on_easy_instances() {
    let dir = tempfile::tempdir().unwrap();
    let cost = dir.path().join("cost.csv");
    std::fs::write(&cost, "0.0,9.0,9.0\n9.0,9.0,0.0\n9.0,0.0,9.0\n").unwrap();
    let mut permutations = Vec::new();
    for method in ["hungarian", "exhaustive", "sinkhorn"] {
        let out = permsep(&[
            "assign",
            "--cost",
            cost.to_str().unwrap(),
            "--method",
            method,
            "--json",
        ]);
        assert!(out.status.success(), "{method} failed");
        permutations.push(json_of(&out)["permutation"].clone());
    }
    assert_eq!(permutations[0], serde_json::json!([0, 2, 1]));
    assert_eq!(permutations[0], permutations[1]);
    assert_eq!(permutations[0], permutations[2]);
}

#[test]
fn assign_data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    std::fs::write(&ragged, "0.0,1.0\n1.0\n").unwrap();
    assert_eq!(
        permsep(&["assign", "--cost", ragged.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let garbage = dir.path().join("garbage.csv");
    std::fs::write(&garbage, "0.0,abc\n1.0,0.0\n").unwrap();
    assert_eq!(
        permsep(&["assign", "--cost", garbage.to_str().unwrap()]).status.code(),
        Some(2)
    );

    assert_eq!(
        permsep(&["assign", "--cost", "/nonexistent/cost.csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn assign_exhaustive_guard_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cost = dir.path().join("big.csv");
    let n = 11;
    let row = vec!["1.0"; n].join(",");
    let body = vec![row; n].join("\n");
    std::fs::write(&cost, body).unwrap();
    let out = permsep(&[
        "assign",
        "--cost",
        cost.to_str().unwrap(),
        "--method",
        "exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn train_divergence_exits_three() {
    let out = permsep(&[
        "train",
        "-n",
        "2",
        "--length",
        "64",
        "--kind",
        "noise",
        "--steps",
        "10",
        "--optimizer",
        "gradient-descent",
        "--learning-rate",
        "1e300",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn golden_csv_headers_are_stable() {
    let dir = tempfile::tempdir().unwrap();

    let bench_csv = dir.path().join("bench.csv");
    let out = permsep(&[
        "bench",
        "--sizes",
        "2,3",
        "--length",
        "32",
        "--trials",
        "1",
        "--csv",
        bench_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&bench_csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,method,phase,mean_time_s,std_time_s,trials"
    );

    let train_csv = dir.path().join("train.csv");
    let out = permsep(&[
        "train",
        "-n",
        "2",
        "--length",
        "256",
        "--steps",
        "20",
        "--log-every",
        "10",
        "--csv",
        train_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&train_csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "step,loss,opt_perm_si_sdr_db,auc_sdr,collapse_rate"
    );
    // step 0, 10, and the final step 20.
    assert_eq!(text.lines().count(), 1 + 3);

    let compare_csv = dir.path().join("compare.csv");
    let out = permsep(&[
        "compare",
        "-n",
        "2",
        "--length",
        "256",
        "--steps",
        "20",
        "--csv",
        compare_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&compare_csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "method,final_loss,opt_perm_si_sdr_db,auc_sdr,collapse_rate,wall_time_s"
    );
    assert_eq!(text.lines().count(), 1 + 3);

    let assign_csv = dir.path().join("assign.csv");
    let cost = dir.path().join("cost.csv");
    std::fs::write(&cost, "0.0,1.0\n1.0,0.0\n").unwrap();
    let out = permsep(&[
        "assign",
        "--cost",
        cost.to_str().unwrap(),
        "--csv",
        assign_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&assign_csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "target,prediction,pair_cost");
}

#[test]
fn csv_floats_carry_nine_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cost = dir.path().join("cost.csv");
    std::fs::write(&cost, "0.123456789123,1.0\n1.0,0.5\n").unwrap();
    let assign_csv = dir.path().join("assign.csv");
    let out = permsep(&[
        "assign",
        "--cost",
        cost.to_str().unwrap(),
        "--csv",
        assign_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&assign_csv).unwrap();
    assert!(
        text.contains("1.23456789e-1"),
        "nine significant digits expected, got: {text}"
    );
}

#[test]
fn eval_identity_directories_hit_the_cap() {
    let dir = tempfile::tempdir().unwrap();
    for scene in ["scene_a", "scene_b"] {
        write_scene(&dir.path().join("refs").join(scene), scene.len() as u64, 3);
        write_scene(&dir.path().join("ests").join(scene), scene.len() as u64, 3);
    }
    let eval_csv = dir.path().join("eval.csv");
    let out = permsep(&[
        "eval",
        "--refs",
        dir.path().join("refs").to_str().unwrap(),
        "--ests",
        dir.path().join("ests").to_str().unwrap(),
        "--json",
        "--csv",
        eval_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["mean_si_sdr_db"], serde_json::json!(30.0));
    assert_eq!(doc["mean_auc"], serde_json::json!(1.0));
    assert_eq!(doc["scenes"].as_array().unwrap().len(), 2);

    let text = std::fs::read_to_string(&eval_csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "scene,n_sources,opt_perm_si_sdr_db,auc_sdr"
    );
}

#[test]
fn eval_count_mismatch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_scene(&dir.path().join("refs").join("one"), 1, 2);
    write_scene(&dir.path().join("refs").join("two"), 2, 2);
    write_scene(&dir.path().join("ests").join("one"), 1, 2);
    let out = permsep(&[
        "eval",
        "--refs",
        dir.path().join("refs").to_str().unwrap(),
        "--ests",
        dir.path().join("ests").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_rejects_stereo_files_as_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    write_scene(&dir.path().join("refs"), 5, 1);
    let ests = dir.path().join("ests");
    std::fs::create_dir_all(&ests).unwrap();
    // Hand-build a stereo PCM16 file.
    let mut bytes = Vec::new();
    bytes.extend_from_slice(b"RIFF");
    bytes.extend_from_slice(&(36u32 + 8).to_le_bytes());
    bytes.extend_from_slice(b"WAVE");
    bytes.extend_from_slice(b"fmt ");
    bytes.extend_from_slice(&16u32.to_le_bytes());
    bytes.extend_from_slice(&1u16.to_le_bytes());
    bytes.extend_from_slice(&2u16.to_le_bytes()); // stereo
    bytes.extend_from_slice(&8000u32.to_le_bytes());
    bytes.extend_from_slice(&32000u32.to_le_bytes());
    bytes.extend_from_slice(&4u16.to_le_bytes());
    bytes.extend_from_slice(&16u16.to_le_bytes());
    bytes.extend_from_slice(b"data");
    bytes.extend_from_slice(&8u32.to_le_bytes());
    bytes.extend_from_slice(&[0u8; 8]);
    std::fs::write(ests.join("src0.wav"), bytes).unwrap();
    let out = permsep(&[
        "eval",
        "--refs",
        dir.path().join("refs").to_str().unwrap(),
        "--ests",
        ests.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("channel"), "stderr: {stderr}");
}

#[test]
fn bench_json_reports_slopes_and_rows() {
    let out = permsep(&[
        "bench",
        "--sizes",
        "2,3,4,5",
        "--length",
        "32",
        "--trials",
        "1",
        "--json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "bench");
    // 4 sizes x 4 methods x 3 phases.
    assert_eq!(doc["rows"].as_array().unwrap().len(), 48);
    assert!(!doc["slopes"].as_array().unwrap().is_empty());
}

#[test]
fn bench_svg_is_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("bench.svg");
    let out = permsep(&[
        "bench",
        "--sizes",
        "2,3",
        "--length",
        "32",
        "--trials",
        "1",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.contains("polyline"));
    assert!(text.trim_end().ends_with("</svg>"));
}

#[test]
fn train_json_envelope_is_complete() {
    let out = permsep(&[
        "train",
        "--loss",
        "mcl",
        "-n",
        "2",
        "--length",
        "256",
        "--steps",
        "40",
        "--log-every",
        "20",
        "--seed",
        "3",
        "--json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "train");
    assert_eq!(doc["loss"], "mcl");
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
    assert!(doc["final"]["opt_perm_si_sdr_db"].is_number());
    assert_eq!(doc["final"]["permutation"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_json_lists_all_methods() {
    let out = permsep(&[
        "compare",
        "-n",
        "2",
        "--length",
        "256",
        "--steps",
        "30",
        "--json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    let rows = doc["rows"].as_array().unwrap();
    let methods: Vec<&str> = rows.iter().map(|r| r["method"].as_str().unwrap()).collect();
    assert_eq!(methods, vec!["pit-hungarian", "sinkpit", "mcl"]);
}

#[test]
fn seed_changes_bench_workload_deterministically() {
    let run = |seed: &str| {
        let out = permsep(&[
            "bench", "--sizes", "2,3", "--length", "32", "--trials", "1", "--seed", seed,
            "--json",
        ]);
        assert!(out.status.success());
        json_of(&out)["rows"].as_array().unwrap().len()
    };
    // Timing varies run to run; the schema and row count must not.
    assert_eq!(run("0"), run("1"));
}
