use std::path::Path;
use std::process::Command;

use rootclust::analysis::RootSet;
use rootclust::functions::FuncExpr;
use rootclust::instances;
use rootclust::kernel::{ComplexBox, ComplexDyadic, Dyadic};
use rootclust_cli::commands::AnalysisReport;
use rootclust_cli::instance::InstanceSpec;
use rootclust_cli::report::RunReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rootclust"))
}

fn square(w: i64) -> ComplexBox {
    ComplexBox::new(ComplexDyadic::zero(), Dyadic::from_i64(w))
}

fn write_json<T: serde::Serialize>(path: &Path, v: &T) {
    std::fs::write(path, serde_json::to_string(v).unwrap()).unwrap();
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn cluster_reports_discs_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    let inst = instances::double_zero_and_one();
    let input = dir.path().join("in.json");
    let roots = dir.path().join("roots.json");
    let output = dir.path().join("out.json");
    write_json(&input, &InstanceSpec::new(inst.f.clone(), &square(8), 3));
    write_json(&roots, &inst.roots);
    let (code, _) = run(&[
        "cluster",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--roots",
        roots.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&output).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.isolating_system.len(), 1);
    assert_eq!(report.isolating_system[0].k, 3);
    assert!(report.verification.unwrap().all_passed());
    assert!(report.theory.is_some());
    assert!(report.error.is_none());
}

#[test]
fn exp_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    let tree = dir.path().join("tree.csv");
    write_json(&input, &InstanceSpec::new(FuncExpr::Exp, &square(4), 0));
    let (code, _) = run(&[
        "cluster",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--dump-tree",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&output).unwrap();
    let report: RunReport = serde_json::from_str(&text).unwrap();
    assert!(report.isolating_system.is_empty());
    let stats = report.stats.as_ref().unwrap();
    assert_eq!(stats.leaf_counts.included, 0);
    assert_eq!(stats.tree_size, 1 + 4 * stats.leaf_counts.split);
    assert_eq!(rootclust_cli::report::to_sorted_json(&report), text);
    let csv = std::fs::read_to_string(&tree).unwrap();
    assert!(csv.starts_with("center_re,center_im,width,depth,status\n"));
    assert_eq!(csv.lines().count() as u64, stats.tree_size + 1);
}

#[test]
fn bad_input_and_run_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let out = dir.path().join("out.json");
    std::fs::write(&bad, "{\"function\": ").unwrap();
    let (code, err) = run(&[
        "cluster",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));

    let input = dir.path().join("in.json");
    write_json(&input, &InstanceSpec::new(FuncExpr::Exp, &square(8), 0));
    let (code, _) = run(&[
        "cluster",
        "--input",
        input.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--max-depth",
        "1",
    ]);
    assert_eq!(code, 2);
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.error.unwrap().contains("depth"));

    let (code, _) = run(&[
        "bench",
        "no-such-suite",
        "--output",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
}

#[test]
fn analyze_reports_partitions_and_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let inst = instances::pow_minus_two(2);
    let input = dir.path().join("in.json");
    let roots = dir.path().join("roots.json");
    let out = dir.path().join("out.json");
    write_json(&input, &InstanceSpec::new(inst.f.clone(), &square(8), 2));
    write_json(&roots, &inst.roots);
    let args = [
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--roots",
        roots.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ];
    assert_eq!(run(&args).0, 0);
    let report: AnalysisReport =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.singletons.len(), 2);
    assert_eq!(report.s0.len(), 1);
    assert!((report.theory_singletons.unwrap().tree_bound - 10.0).abs() < 1e-9);
    let m = report.measured.unwrap();
    assert!(m.tree_ratio_singletons.is_some());

    // one root short of the degree
    let short = RootSet {
        roots: inst.roots.roots[..1].to_vec(),
    };
    write_json(&roots, &short);
    assert_eq!(run(&args).0, 2);

    // exp with a blank roots file
    write_json(&input, &InstanceSpec::new(FuncExpr::Exp, &square(4), 0));
    std::fs::write(&roots, "").unwrap();
    assert_eq!(run(&args).0, 0);
    let report: AnalysisReport =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.s0.is_empty() && report.theory.is_none());
}

#[test]
fn bench_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&[
        "bench",
        "exp-area",
        "--output",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("exp-area.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(
        rows.next().unwrap(),
        "instance,d,mahler,width,tree_size,max_bits,bound,ratio"
    );
    assert_eq!(rows.count(), 3);
    assert!(dir.path().join("exp-area-summary.json").exists());
}
