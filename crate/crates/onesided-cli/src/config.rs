//! Resolved run description, serializable so runs can be recorded and
//! replayed.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Tau,
    SandwichStep,
    Approximate,
    Oracle,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Everything a run depends on; identical configs produce identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub k_values: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub panels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<String>,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn new(command: CommandKind, format: OutputFormat) -> Self {
        Self {
            command,
            function: None,
            weight: None,
            k_values: Vec::new(),
            y: None,
            delta: None,
            p: 1.0,
            grid_n: None,
            panels: None,
            nodes: None,
            output: None,
            format,
            seed: None,
        }
    }
}

/// Parses `--k`: a single integer, an inclusive range `a..b` (or `a..=b`),
/// or a comma-separated list.
pub fn parse_k_values(spec: &str) -> Result<Vec<usize>, String> {
    let parse_one = |s: &str| -> Result<usize, String> {
        s.trim().parse::<usize>().map_err(|_| format!("bad degree '{}'", s.trim()))
    };
    let mut out = Vec::new();
    for part in spec.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let lo = parse_one(a)?;
            let hi = parse_one(b.strip_prefix('=').unwrap_or(b))?;
            if hi < lo {
                return Err(format!("empty degree range '{part}'"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(parse_one(part)?);
        }
    }
    if out.is_empty() {
        return Err("no degrees given".into());
    }
    Ok(out)
}
