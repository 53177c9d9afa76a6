//! Benchmark suites mirroring the experiments: each writes one CSV row per
//! run and a JSON summary of named checks.

use std::path::Path;
use std::str::FromStr;

use rootclust::analysis::{bounds_for_partition, singleton_partition};
use rootclust::clusterer::{
    cluster, verify_isolating_system, BoxStatus, ClusterOptions, ClusterRun,
};
use rootclust::functions::FuncExpr;
use rootclust::instances::{self, Instance};
use rootclust::kernel::{ComplexBox, ComplexDyadic, Dyadic};
use serde::{Deserialize, Serialize};

use crate::exit;
use crate::report::to_sorted_json;

/// Constant of the integer-polynomial tree bound check.
pub const TREE_CONSTANT: f64 = 64.0;
/// Constant of the linear precision check `max_bits <= C t`.
pub const PRECISION_CONSTANT: u32 = 32;
pub const AREA_RATIO: (f64, f64) = (3.0, 5.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    PolyCorrectness,
    PolyBounds,
    ExpArea,
    SinHalfplane,
    PrecisionScaling,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::PolyCorrectness,
        Suite::PolyBounds,
        Suite::ExpArea,
        Suite::SinHalfplane,
        Suite::PrecisionScaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PolyCorrectness => "poly-correctness",
            Suite::PolyBounds => "poly-bounds",
            Suite::ExpArea => "exp-area",
            Suite::SinHalfplane => "sin-halfplane",
            Suite::PrecisionScaling => "precision-scaling",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub d: Option<usize>,
    pub mahler: Option<f64>,
    pub width: f64,
    pub tree_size: u64,
    pub max_bits: u32,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub rows: Vec<BenchRow>,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn square(cx: i64, cy: i64, w: i64) -> ComplexBox {
    ComplexBox::new(ComplexDyadic::from_i64(cx, cy), Dyadic::from_i64(w))
}

fn options(threads: usize, record_tree: bool) -> ClusterOptions {
    ClusterOptions {
        threads,
        record_tree,
        ..ClusterOptions::default()
    }
}

fn row(name: &str, f: &FuncExpr, b0: &ComplexBox, run: &ClusterRun) -> BenchRow {
    BenchRow {
        instance: name.to_string(),
        d: f.degree(),
        mahler: None,
        width: b0.width.to_f64(),
        tree_size: run.stats.tree_size,
        max_bits: run.stats.max_bits,
        bound: None,
        ratio: None,
    }
}

fn poly_correctness(res: &mut SuiteResult, threads: usize) -> Result<(), String> {
    let b0 = square(0, 0, 8);
    for inst in instances::correctness_suite() {
        let n0 = inst.f.degree().expect("polynomial") as u32;
        let run = cluster(&inst.f, &b0, n0, &options(threads, false)).map_err(|e| e.to_string())?;
        let report = verify_isolating_system(&run.system, &inst.roots, &b0);
        let failed: Vec<&str> = report
            .conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        res.check(
            &inst.name,
            failed.is_empty(),
            format!("failed conditions: {failed:?}"),
        );
        res.rows.push(row(&inst.name, &inst.f, &b0, &run));
    }
    Ok(())
}

/// The integer-coefficient suite `z^d - 2` and `prod (z - i)`.
pub fn integer_suite() -> Vec<Instance> {
    let mut v: Vec<Instance> = [2, 4, 8].map(instances::pow_minus_two).into();
    v.push(instances::consecutive(3));
    v.push(instances::consecutive(5));
    v
}

/// `B_0 = square(0, 4 ceil(M))` for the integer suite. `M` is an integer
/// there, so the enclosure midpoint is rounded up.
pub fn bounds_box(mahler: f64) -> ComplexBox {
    let m = mahler.ceil() as i64;
    square(0, 0, 4 * m)
}

fn poly_bounds(res: &mut SuiteResult, threads: usize) -> Result<(), String> {
    for inst in integer_suite() {
        let d = inst.f.degree().expect("polynomial");
        let m = rootclust::analysis::mahler(&inst.f, &inst.roots, 64).map_err(|e| e.to_string())?;
        let b0 = bounds_box(m.midpoint().to_f64());
        let parts = singleton_partition(&inst.roots, &b0).map_err(|e| e.to_string())?;
        let t =
            bounds_for_partition(&inst.f, &inst.roots, &b0, &parts).map_err(|e| e.to_string())?;
        let run =
            cluster(&inst.f, &b0, d as u32, &options(threads, false)).map_err(|e| e.to_string())?;
        let mut r = row(&inst.name, &inst.f, &b0, &run);
        r.mahler = Some(t.mahler_f64);
        r.bound = Some(t.intpoly_bound);
        r.ratio = Some(run.stats.tree_size as f64 / t.intpoly_bound);
        res.check(
            &inst.name,
            run.stats.tree_size as f64 <= TREE_CONSTANT * t.intpoly_bound,
            format!(
                "tree_size {} vs {TREE_CONSTANT} * {:.3}",
                run.stats.tree_size, t.intpoly_bound
            ),
        );
        res.rows.push(r);
    }
    Ok(())
}

/// Exclusion-only runs on growing boxes: checks that every leaf is
/// excluded, leaf radii stay in `(1/4, 2)` as required, and the area law.
fn exclusion_runs(
    res: &mut SuiteResult,
    f: &FuncExpr,
    boxes: &[ComplexBox],
    threads: usize,
    need_large_leaf: bool,
) -> Result<(), String> {
    let two = Dyadic::from_i64(2);
    let quarter = Dyadic::from_parts(1, -2);
    let mut prev: Option<u64> = None;
    for b0 in boxes {
        let run = cluster(f, b0, 0, &options(threads, true)).map_err(|e| e.to_string())?;
        let tree = run.tree.as_ref().expect("tree recorded");
        let leaves: Vec<&ComplexBox> = tree
            .iter()
            .filter(|n| n.status != BoxStatus::Split)
            .map(|n| &n.bx)
            .collect();
        let w = b0.width.to_f64();
        let all_excluded = run.system.pairs.is_empty()
            && tree
                .iter()
                .all(|n| !matches!(n.status, BoxStatus::Included(_)));
        res.check(
            format!("width {w}: only exclusions"),
            all_excluded,
            format!("{} discs", run.system.pairs.len()),
        );
        let max_r = leaves
            .iter()
            .map(|b| b.radius_upper())
            .max()
            .expect("at least one leaf");
        res.check(
            format!("width {w}: leaf radius < 2"),
            max_r < two,
            format!("largest leaf radius {}", max_r.to_f64()),
        );
        if need_large_leaf {
            res.check(
                format!("width {w}: some leaf radius > 1/4"),
                max_r > quarter,
                format!("largest leaf radius {}", max_r.to_f64()),
            );
        }
        let mut r = row(&format!("{w}"), f, b0, &run);
        if let Some(p) = prev {
            let ratio = run.stats.tree_size as f64 / p as f64;
            r.ratio = Some(ratio);
            res.check(
                format!("width {w}: area ratio"),
                (AREA_RATIO.0..=AREA_RATIO.1).contains(&ratio),
                format!("{ratio:.3}"),
            );
        }
        prev = Some(run.stats.tree_size);
        res.rows.push(r);
    }
    Ok(())
}

fn precision_scaling(res: &mut SuiteResult, threads: usize) -> Result<(), String> {
    let b0 = square(0, 0, 8);
    let mut last = 0;
    for t in [4, 6, 8, 10, 12] {
        let inst = instances::close_pair(t);
        let run = cluster(&inst.f, &b0, 2, &options(threads, false)).map_err(|e| e.to_string())?;
        let bits = run.stats.max_bits;
        let bound = PRECISION_CONSTANT * t as u32;
        res.check(
            format!("t={t}: nondecreasing"),
            bits >= last,
            format!("{bits} after {last}"),
        );
        res.check(
            format!("t={t}: max_bits <= {bound}"),
            bits <= bound,
            format!("{bits}"),
        );
        last = bits;
        let mut r = row(&inst.name, &inst.f, &b0, &run);
        r.bound = Some(bound as f64);
        r.ratio = Some(bits as f64 / t as f64);
        res.rows.push(r);
    }
    Ok(())
}

pub fn run_suite(suite: Suite, threads: usize) -> Result<SuiteResult, String> {
    let mut res = SuiteResult {
        suite: suite.name().to_string(),
        rows: Vec::new(),
        checks: Vec::new(),
    };
    match suite {
        Suite::PolyCorrectness => poly_correctness(&mut res, threads)?,
        Suite::PolyBounds => poly_bounds(&mut res, threads)?,
        Suite::ExpArea => {
            let boxes = [2, 4, 8].map(|w| square(0, 0, w));
            exclusion_runs(&mut res, &FuncExpr::Exp, &boxes, threads, true)?
        }
        Suite::SinHalfplane => {
            let boxes = [4, 8].map(|w| square(0, 16, w));
            exclusion_runs(&mut res, &FuncExpr::Sin, &boxes, threads, false)?
        }
        Suite::PrecisionScaling => precision_scaling(&mut res, threads)?,
    }
    Ok(res)
}

fn rows_csv(rows: &[BenchRow]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

/// `rootclust bench`: writes `<suite>.csv` and `<suite>-summary.json`.
pub fn cmd_bench(suite: &str, out_dir: &Path, threads: usize) -> i32 {
    let suite = match suite.parse::<Suite>() {
        Ok(s) => s,
        Err(e) => {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            eprintln!("error: {e}; expected one of {}", names.join(", "));
            return exit::PARSE;
        }
    };
    let res = match run_suite(suite, threads) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::RUN;
        }
    };
    let written = std::fs::create_dir_all(out_dir)
        .map_err(|e| e.to_string())
        .and_then(|_| {
            let csv = rows_csv(&res.rows)?;
            std::fs::write(out_dir.join(format!("{}.csv", suite.name())), csv)
                .map_err(|e| e.to_string())?;
            std::fs::write(
                out_dir.join(format!("{}-summary.json", suite.name())),
                to_sorted_json(&res),
            )
            .map_err(|e| e.to_string())
        });
    if let Err(e) = written {
        eprintln!("error: {}: {e}", out_dir.display());
        return exit::RUN;
    }
    for c in &res.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} {} ({})", suite.name(), c.name, c.detail);
    }
    if res.passed() {
        exit::OK
    } else {
        exit::SUITE_FAILED
    }
}
