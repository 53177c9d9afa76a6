use rootclust::analysis::TheoryBounds;
use rootclust::clusterer::{ComponentPair, IsolatingSystem, SubdivisionStats, VerificationReport};
use rootclust::kernel::{ComplexDyadic, Dyadic};
use serde::{Deserialize, Serialize};

use crate::instance::InstanceSpec;

/// 17 significant digits.
pub fn display(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscReport {
    pub center: ComplexDyadic,
    pub radius: Dyadic,
    pub k: u32,
    pub depth: u32,
    pub box_width: Dyadic,
    pub center_display: [String; 2],
    pub radius_display: String,
}

impl DiscReport {
    pub fn from_pair(p: &ComponentPair) -> Self {
        let (re, im) = p.disc.center.to_f64();
        DiscReport {
            center: p.disc.center.clone(),
            radius: p.disc.radius.clone(),
            k: p.k,
            depth: p.depth,
            box_width: p.bx.width.clone(),
            center_display: [display(re), display(im)],
            radius_display: display(p.disc.radius.to_f64()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: InstanceSpec,
    pub isolating_system: Vec<DiscReport>,
    pub stats: Option<SubdivisionStats>,
    pub theory: Option<TheoryBounds>,
    pub verification: Option<VerificationReport>,
    pub error: Option<String>,
}

impl RunReport {
    pub fn new(instance: InstanceSpec) -> Self {
        RunReport {
            instance,
            isolating_system: Vec::new(),
            stats: None,
            theory: None,
            verification: None,
            error: None,
        }
    }

    pub fn set_system(&mut self, sys: &IsolatingSystem) {
        self.isolating_system = sys.pairs.iter().map(DiscReport::from_pair).collect();
    }
}

/// Pretty JSON with keys sorted at every level.
pub fn to_sorted_json<T: Serialize>(v: &T) -> String {
    // serde_json's default map is ordered by key
    let value = serde_json::to_value(v).expect("report types serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}
