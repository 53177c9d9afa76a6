//! Soft root clustering driver.
//!
//! Phase 1 runs a breadth-first subdivision of `B_0`: each box gets
//! [`first_c`]; inclusion boxes become candidate pairs `(B, k)`, exclusion
//! boxes are dropped and unresolved boxes are split into four. Boxes of one
//! level are independent, so a level can be processed in parallel; results
//! are merged in BFS order, which keeps the output identical for any thread
//! count. Phase 2 scans the candidates in discovery order and keeps those
//! whose disc does not meet an already accepted disc.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::RootSet;
use crate::error::{Error, Result};
use crate::functions::FuncExpr;
use crate::kernel::{discs_intersect, ComplexBox, Disc, Dyadic};
use crate::pellet::{first_c, FirstC, FirstCResult, C1_HAT};
use crate::soft_compare::DEFAULT_ITERATION_CAP;

pub const DEFAULT_MAX_DEPTH: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterOptions {
    pub max_depth: u32,
    pub iteration_cap: u32,
    /// Worker threads for phase 1; 1 runs inline.
    pub threads: usize,
    /// Keep one [`TreeNode`] per processed box.
    pub record_tree: bool,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        ClusterOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            iteration_cap: DEFAULT_ITERATION_CAP,
            threads: 1,
            record_tree: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPair {
    #[serde(rename = "box")]
    pub bx: ComplexBox,
    pub k: u32,
    /// Disc of `c k B`: center `m(B)`, radius `radius_upper(c k B)`.
    pub disc: Disc,
    pub depth: u32,
    pub discovery_index: u64,
}

impl ComponentPair {
    pub fn new(bx: ComplexBox, k: u32, depth: u32, discovery_index: u64) -> Self {
        let disc = bx.scale(&Dyadic::from_i64(C1_HAT * k as i64)).disc_of();
        ComponentPair {
            bx,
            k,
            disc,
            depth,
            discovery_index,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatingSystem {
    pub pairs: Vec<ComponentPair>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafCounts {
    pub excluded: u64,
    pub included: u64,
    /// Internal nodes: boxes that were split.
    pub split: u64,
}

/// Precision used by one soft comparison, tagged by box depth and `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitRecord {
    pub depth: u32,
    pub k: u32,
    pub bits: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionStats {
    pub tree_size: u64,
    pub leaf_counts: LeafCounts,
    pub max_depth: u32,
    pub min_leaf_width: Option<Dyadic>,
    pub max_bits: u32,
    /// bits -> number of soft comparisons that stopped there.
    pub bits_histogram: BTreeMap<u32, u64>,
    pub bit_log: Vec<BitRecord>,
    /// Inclusion pairs dropped in phase 2.
    pub conflicts_dropped: u64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxStatus {
    Excluded,
    Included(u32),
    Split,
}

impl BoxStatus {
    pub fn label(&self) -> String {
        match self {
            BoxStatus::Excluded => "excluded".into(),
            BoxStatus::Included(k) => format!("included:{k}"),
            BoxStatus::Split => "split".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    #[serde(rename = "box")]
    pub bx: ComplexBox,
    pub depth: u32,
    pub status: BoxStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRun {
    pub system: IsolatingSystem,
    pub stats: SubdivisionStats,
    pub tree: Option<Vec<TreeNode>>,
}

impl SubdivisionStats {
    fn record(&mut self, depth: u32, res: &FirstCResult) {
        for c in &res.calls {
            self.max_bits = self.max_bits.max(c.bits_used);
            *self.bits_histogram.entry(c.bits_used).or_insert(0) += 1;
            self.bit_log.push(BitRecord {
                depth,
                k: c.k,
                bits: c.bits_used,
            });
        }
    }

    fn leaf(&mut self, width: &Dyadic) {
        if self.min_leaf_width.as_ref().is_none_or(|w| width < w) {
            self.min_leaf_width = Some(width.clone());
        }
    }
}

fn run_level(
    f: &FuncExpr,
    level: &[(ComplexBox, u32)],
    n0: u32,
    cap: u32,
    pool: Option<&rayon::ThreadPool>,
) -> Vec<Result<FirstCResult>> {
    let eval = |(b, _): &(ComplexBox, u32)| first_c(f, b, n0, cap);
    match pool {
        Some(pool) => pool.install(|| level.par_iter().map(eval).collect()),
        None => level.iter().map(eval).collect(),
    }
}

/// Runs the clustering algorithm on `f` in `b0` with root bound `n0`.
pub fn cluster(
    f: &FuncExpr,
    b0: &ComplexBox,
    n0: u32,
    opts: &ClusterOptions,
) -> Result<ClusterRun> {
    f.validate()?;
    let start = Instant::now();
    let pool = if opts.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut stats = SubdivisionStats::default();
    let mut tree = opts.record_tree.then(Vec::new);
    let mut candidates = Vec::new();
    let mut level = vec![(b0.clone(), 0u32)];
    let mut index: u64 = 0;

    while !level.is_empty() {
        let results = run_level(f, &level, n0, opts.iteration_cap, pool.as_ref());
        let mut next = Vec::new();
        for ((b, depth), res) in level.into_iter().zip(results) {
            let res = res?;
            stats.tree_size += 1;
            stats.max_depth = stats.max_depth.max(depth);
            stats.record(depth, &res);
            let status = match res.outcome {
                FirstC::Exclude => {
                    stats.leaf_counts.excluded += 1;
                    stats.leaf(b.width());
                    BoxStatus::Excluded
                }
                FirstC::Include(k) => {
                    stats.leaf_counts.included += 1;
                    stats.leaf(b.width());
                    candidates.push(ComponentPair::new(b.clone(), k, depth, index));
                    BoxStatus::Included(k)
                }
                FirstC::Unresolved => {
                    if depth >= opts.max_depth {
                        return Err(Error::DepthExceeded {
                            depth: opts.max_depth,
                            offending: Box::new(b),
                        });
                    }
                    stats.leaf_counts.split += 1;
                    next.extend(b.subdivide4().into_iter().map(|c| (c, depth + 1)));
                    BoxStatus::Split
                }
            };
            if let Some(t) = tree.as_mut() {
                t.push(TreeNode {
                    bx: b,
                    depth,
                    status,
                });
            }
            index += 1;
        }
        level = next;
    }

    let mut system = IsolatingSystem::default();
    for pair in candidates {
        if system
            .pairs
            .iter()
            .any(|p| discs_intersect(&p.disc, &pair.disc))
        {
            stats.conflicts_dropped += 1;
        } else {
            system.pairs.push(pair);
        }
    }
    stats.wall_time = start.elapsed();
    Ok(ClusterRun {
        system,
        stats,
        tree,
    })
}

/// CSV with one row per processed box, in BFS order.
pub fn tree_csv(nodes: &[TreeNode]) -> String {
    let mut out = String::from("center_re,center_im,width,depth,status\n");
    for n in nodes {
        let (re, im) = n.bx.center.to_f64();
        writeln!(
            out,
            "{re},{im},{},{},{}",
            n.bx.width.to_f64(),
            n.depth,
            n.status.label()
        )
        .expect("writing to a string");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub conditions: Vec<ConditionResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

/// Roots in a disc counted with multiplicity; `None` if some root enclosure
/// straddles the boundary.
fn count_in(disc: &Disc, roots: &RootSet) -> Option<u32> {
    let mut n = 0;
    for r in &roots.roots {
        if disc.contains_enclosure(&r.location)? {
            n += r.multiplicity
        }
    }
    Some(n)
}

fn condition(name: &str, counterexamples: Vec<String>) -> ConditionResult {
    ConditionResult {
        name: name.into(),
        passed: counterexamples.is_empty(),
        counterexamples,
    }
}

/// Checks an isolating system against known roots: centers in `B_0`, each
/// `D` and `3D` hold the same `k` roots, every root in `B_0` is covered,
/// covered roots lie in `2 B_0`, and discs are pairwise disjoint.
pub fn verify_isolating_system(
    sys: &IsolatingSystem,
    roots: &RootSet,
    b0: &ComplexBox,
) -> VerificationReport {
    let three = Dyadic::from_i64(3);
    let two_b0 = b0.scale(&Dyadic::from_i64(2));
    let describe = |i: usize| {
        let (re, im) = sys.pairs[i].disc.center.to_f64();
        format!(
            "disc {i} at ({re}, {im}) r={}",
            sys.pairs[i].disc.radius.to_f64()
        )
    };
    let root_name = |j: usize| {
        let (re, im) = roots.roots[j].location.midpoint().to_f64();
        format!("root {j} near ({re}, {im})")
    };

    let centers = (0..sys.pairs.len())
        .filter(|&i| !b0.contains_point(&sys.pairs[i].disc.center))
        .map(|i| format!("{} has center outside B0", describe(i)))
        .collect();

    let mut isolating = Vec::new();
    for (i, p) in sys.pairs.iter().enumerate() {
        let inner = count_in(&p.disc, roots);
        let outer = count_in(&p.disc.scale(&three), roots);
        match (inner, outer) {
            (Some(a), Some(b)) if a == b && a == p.k => {}
            (a, b) => isolating.push(format!(
                "{}: k={}, roots in D={a:?}, in 3D={b:?}",
                describe(i),
                p.k
            )),
        }
    }

    let mut coverage = Vec::new();
    let mut inside_2b0 = Vec::new();
    for (j, r) in roots.roots.iter().enumerate() {
        let covering: Vec<Option<bool>> = sys
            .pairs
            .iter()
            .map(|p| p.disc.contains_enclosure(&r.location))
            .collect();
        if b0.contains_enclosure(&r.location) != Some(false) && !covering.contains(&Some(true)) {
            coverage.push(format!("{} is not covered", root_name(j)));
        }
        if covering.iter().any(|c| *c != Some(false))
            && two_b0.contains_enclosure(&r.location) != Some(true)
        {
            inside_2b0.push(format!("{} lies in a disc but outside 2B0", root_name(j)));
        }
    }

    let mut disjoint = Vec::new();
    for i in 0..sys.pairs.len() {
        for j in i + 1..sys.pairs.len() {
            if discs_intersect(&sys.pairs[i].disc, &sys.pairs[j].disc) {
                disjoint.push(format!("{} meets {}", describe(i), describe(j)));
            }
        }
    }

    VerificationReport {
        conditions: vec![
            condition("centers_in_b0", centers),
            condition("isolating", isolating),
            condition("coverage", coverage),
            condition("roots_in_2b0", inside_2b0),
            condition("pairwise_disjoint", disjoint),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::kernel::ComplexDyadic;

    fn square(w: i64) -> ComplexBox {
        ComplexBox::new(ComplexDyadic::zero(), Dyadic::from_i64(w))
    }

    #[test]
    fn linear_function() {
        let inst = instances::linear();
        let run = cluster(&inst.f, &square(4), 1, &ClusterOptions::default()).unwrap();
        assert_eq!(run.system.pairs.len(), 1);
        assert_eq!(run.system.pairs[0].k, 1);
        assert!(run.system.pairs[0]
            .disc
            .contains_point(&ComplexDyadic::zero()));
        assert!(run.stats.tree_size <= 100);
        assert!(verify_isolating_system(&run.system, &inst.roots, &square(4)).all_passed());
    }

    #[test]
    fn double_root_and_simple_root() {
        let inst = instances::double_zero_and_one();
        let run = cluster(&inst.f, &square(8), 3, &ClusterOptions::default()).unwrap();
        // the leading term already dominates on 3 c1 B0, so the whole box
        // is one inclusion box holding all three roots
        assert_eq!(run.stats.tree_size, 1);
        assert_eq!(run.system.pairs.len(), 1);
        assert_eq!(run.system.pairs[0].k, 3);
        let report = verify_isolating_system(&run.system, &inst.roots, &square(8));
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn exp_is_excluded_everywhere() {
        let run = cluster(&FuncExpr::Exp, &square(4), 0, &ClusterOptions::default()).unwrap();
        assert!(run.system.pairs.is_empty());
        assert_eq!(run.stats.leaf_counts.included, 0);
        assert_eq!(run.stats.tree_size, 1 + 4 * run.stats.leaf_counts.split);
        assert_eq!(
            run.stats.leaf_counts.excluded + run.stats.leaf_counts.split,
            run.stats.tree_size
        );
        let w = run.stats.min_leaf_width.unwrap();
        assert!(w < Dyadic::from_i64(2) && w.is_positive());
    }

    #[test]
    fn depth_limit_reports_box() {
        let opts = ClusterOptions {
            max_depth: 1,
            ..ClusterOptions::default()
        };
        let err = cluster(&FuncExpr::Exp, &square(8), 0, &opts).unwrap_err();
        assert!(matches!(err, Error::DepthExceeded { depth: 1, .. }));
    }

    fn pair_at(re: i64, radius: Dyadic, k: u32) -> ComponentPair {
        let bx = ComplexBox::new(ComplexDyadic::from_i64(re, 0), Dyadic::one());
        ComponentPair {
            disc: Disc::new(bx.center.clone(), radius),
            bx,
            k,
            depth: 0,
            discovery_index: 0,
        }
    }

    #[test]
    fn verification_catches_tangent_discs() {
        let roots = RootSet::exact(&[
            (ComplexDyadic::from_i64(-1, 0), 1),
            (ComplexDyadic::from_i64(1, 0), 1),
        ])
        .unwrap();
        let sys = IsolatingSystem {
            pairs: vec![pair_at(-1, Dyadic::one(), 1), pair_at(1, Dyadic::one(), 1)],
        };
        let report = verify_isolating_system(&sys, &roots, &square(8));
        assert!(!report.condition("pairwise_disjoint").unwrap().passed);
    }

    #[test]
    fn verification_catches_non_isolating_disc() {
        let roots = RootSet::exact(&[
            (ComplexDyadic::from_i64(0, 0), 1),
            (ComplexDyadic::from_i64(2, 0), 1),
        ])
        .unwrap();
        let sys = IsolatingSystem {
            pairs: vec![pair_at(0, Dyadic::one(), 1)],
        };
        let report = verify_isolating_system(&sys, &roots, &square(8));
        assert!(!report.condition("isolating").unwrap().passed);
        assert!(!report.condition("coverage").unwrap().passed);
        assert!(report.condition("pairwise_disjoint").unwrap().passed);
    }
}
