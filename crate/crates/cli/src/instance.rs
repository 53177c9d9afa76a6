use std::path::Path;

use rootclust::analysis::RootSet;
use rootclust::functions::FuncExpr;
use rootclust::kernel::{ComplexBox, ComplexDyadic, Dyadic};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub center: [Dyadic; 2],
    pub width: Dyadic,
}

impl BoxSpec {
    pub fn to_box(&self) -> ComplexBox {
        let [re, im] = self.center.clone();
        ComplexBox::new(ComplexDyadic::new(re, im), self.width.clone())
    }

    pub fn from_box(b: &ComplexBox) -> Self {
        BoxSpec {
            center: [b.center.re.clone(), b.center.im.clone()],
            width: b.width.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iteration_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_tree: Option<String>,
}

/// Contents of an `--input` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub function: FuncExpr,
    #[serde(rename = "box")]
    pub bx: BoxSpec,
    pub n0: u32,
    #[serde(default)]
    pub options: InstanceOptions,
}

impl InstanceSpec {
    pub fn new(function: FuncExpr, b: &ComplexBox, n0: u32) -> Self {
        InstanceSpec {
            function,
            bx: BoxSpec::from_box(b),
            n0,
            options: InstanceOptions::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let spec: InstanceSpec = serde_json::from_str(text).map_err(|e| e.to_string())?;
        spec.function.validate().map_err(|e| e.to_string())?;
        if !spec.bx.width.is_positive() {
            return Err("box width must be positive".into());
        }
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = read(path)?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Reads a roots file; a blank file is the empty root set.
pub fn load_roots(path: &Path) -> Result<RootSet, String> {
    let text = read(path)?;
    if text.trim().is_empty() {
        return Ok(RootSet { roots: Vec::new() });
    }
    let set: RootSet =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    set.validate()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(set)
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}
