use std::path::{Path, PathBuf};

use rootclust::analysis::{
    bounds_for_partition, build_s0, predicted_bounds, singleton_partition, ClusterGeometry,
    RootSet, TheoryBounds,
};
use rootclust::clusterer::{
    cluster, tree_csv, verify_isolating_system, ClusterOptions, ClusterRun,
};
use serde::{Deserialize, Serialize};

use crate::exit;
use crate::instance::{load_roots, InstanceSpec};
use crate::report::{to_sorted_json, RunReport};

/// Command-line overrides of the instance file's `options`.
#[derive(Clone, Debug, Default)]
pub struct RunFlags {
    pub max_depth: Option<u32>,
    pub iteration_cap: Option<u32>,
    pub threads: Option<usize>,
    pub dump_tree: Option<PathBuf>,
}

impl RunFlags {
    fn options(&self, spec: &InstanceSpec) -> (ClusterOptions, Option<PathBuf>) {
        let mut opts = ClusterOptions::default();
        let o = &spec.options;
        if let Some(d) = self.max_depth.or(o.max_depth) {
            opts.max_depth = d;
        }
        if let Some(c) = self.iteration_cap.or(o.iteration_cap) {
            opts.iteration_cap = c;
        }
        if let Some(t) = self.threads.or(o.threads) {
            opts.threads = t.max(1);
        }
        let dump = self
            .dump_tree
            .clone()
            .or_else(|| o.dump_tree.as_ref().map(PathBuf::from));
        opts.record_tree = dump.is_some();
        (opts, dump)
    }
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(spec: &InstanceSpec, flags: &RunFlags) -> Result<ClusterRun, String> {
    let (opts, dump) = flags.options(spec);
    let out =
        cluster(&spec.function, &spec.bx.to_box(), spec.n0, &opts).map_err(|e| e.to_string())?;
    if let (Some(path), Some(tree)) = (dump, &out.tree) {
        write(&path, &tree_csv(tree))?;
    }
    Ok(out)
}

/// `rootclust cluster`.
pub fn cmd_cluster(input: &Path, output: &Path, roots: Option<&Path>, flags: &RunFlags) -> i32 {
    let spec = match InstanceSpec::load(input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::PARSE;
        }
    };
    let roots = match roots.map(load_roots).transpose() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::PARSE;
        }
    };
    let mut report = RunReport::new(spec.clone());
    let mut code = exit::OK;
    match run(&spec, flags) {
        Ok(out) => {
            report.set_system(&out.system);
            if let Some(roots) = &roots {
                let b0 = spec.bx.to_box();
                report.verification = Some(verify_isolating_system(&out.system, roots, &b0));
                if spec.function.is_poly() && !roots.is_empty() {
                    match predicted_bounds(&spec.function, roots, &b0) {
                        Ok(t) => report.theory = Some(t),
                        Err(e) => eprintln!("warning: theory bounds unavailable: {e}"),
                    }
                }
            }
            report.stats = Some(out.stats);
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.error = Some(e);
            code = exit::RUN;
        }
    }
    if let Err(e) = write(output, &to_sorted_json(&report)) {
        eprintln!("error: {e}");
        return exit::RUN;
    }
    code
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub tree_size: u64,
    pub max_bits: u32,
    pub discs: usize,
    /// `tree_size / tree_bound` for `S_0`.
    pub tree_ratio: Option<f64>,
    /// `tree_size / tree_bound` for the singleton partition.
    pub tree_ratio_singletons: Option<f64>,
    pub intpoly_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub instance: InstanceSpec,
    pub s0: Vec<ClusterGeometry>,
    pub singletons: Vec<ClusterGeometry>,
    pub theory: Option<TheoryBounds>,
    pub theory_singletons: Option<TheoryBounds>,
    pub measured: Option<Measured>,
    pub error: Option<String>,
}

fn ratio(n: u64, bound: f64) -> Option<f64> {
    (bound > 0.0).then(|| n as f64 / bound)
}

fn analyze(
    spec: &InstanceSpec,
    roots: &RootSet,
    flags: &RunFlags,
) -> Result<AnalysisReport, String> {
    let mut report = AnalysisReport {
        instance: spec.clone(),
        s0: Vec::new(),
        singletons: Vec::new(),
        theory: None,
        theory_singletons: None,
        measured: None,
        error: None,
    };
    let f = &spec.function;
    let Some(d) = f.degree() else {
        if roots.is_empty() {
            return Ok(report);
        }
        return Err("cluster analysis needs a polynomial".into());
    };
    if roots.count() != d {
        return Err(format!(
            "roots file lists {} roots, polynomial degree is {d}",
            roots.count()
        ));
    }
    let b0 = spec.bx.to_box();
    let err = |e: rootclust::Error| e.to_string();
    report.s0 = build_s0(roots, &b0).map_err(err)?;
    report.singletons = singleton_partition(roots, &b0).map_err(err)?;
    let theory = bounds_for_partition(f, roots, &b0, &report.s0).map_err(err)?;
    let single = bounds_for_partition(f, roots, &b0, &report.singletons).map_err(err)?;
    match run(spec, flags) {
        Ok(out) => {
            let n = out.stats.tree_size;
            report.measured = Some(Measured {
                tree_size: n,
                max_bits: out.stats.max_bits,
                discs: out.system.pairs.len(),
                tree_ratio: ratio(n, theory.tree_bound),
                tree_ratio_singletons: ratio(n, single.tree_bound),
                intpoly_ratio: ratio(n, theory.intpoly_bound),
            });
        }
        Err(e) => report.error = Some(e),
    }
    report.theory = Some(theory);
    report.theory_singletons = Some(single);
    Ok(report)
}

/// `rootclust analyze`.
pub fn cmd_analyze(input: &Path, roots: &Path, output: &Path, flags: &RunFlags) -> i32 {
    let loaded = InstanceSpec::load(input).and_then(|s| Ok((s, load_roots(roots)?)));
    let (spec, roots) = match loaded {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::PARSE;
        }
    };
    match analyze(&spec, &roots, flags) {
        Ok(report) => {
            if let Err(e) = write(output, &to_sorted_json(&report)) {
                eprintln!("error: {e}");
                return exit::RUN;
            }
            if let Some(e) = &report.error {
                eprintln!("error: {e}");
                return exit::RUN;
            }
            exit::OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit::RUN
        }
    }
}
