//! One function per subcommand; each builds its `RunConfig`, does the work,
//! and renders a table.

use onesided::moduli::{averaged_modulus, ModulusConfig};
use onesided::operators::{composite_majorant, composite_minorant};
use onesided::oracle::{best_onesided, best_twosided};
use onesided::sandwich::{
    build_step_sandwich, default_cert_nodes, reflect_pair, step_gap_bound, DEFAULT_SAFETY,
};
use onesided::verify::{
    default_suite, reports_to_csv, reports_to_json, run_theorem_suite, SuiteMember,
};
use onesided::{weighted_norm, QuadConfig, WeightedSpace};

use crate::config::{CommandKind, OutputFormat, RunConfig};
use crate::output::Table;
use crate::registry::{resolve_function, resolve_weight};

/// Command failures split by exit code: usage errors exit 2, runtime errors
/// and failed verification exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn runtime(e: onesided::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

/// What a runner hands back to `main` for delivery.
#[derive(Debug)]
pub struct Outcome {
    pub config: RunConfig,
    /// Rendered table, written to `--out` or stdout.
    pub rendered: String,
    /// Bare values printed to stdout regardless of `--out` (the tau command
    /// promises its value on stdout).
    pub bare_lines: Vec<String>,
    /// Failed checks; nonzero turns into exit code 1.
    pub failures: usize,
}

impl Outcome {
    fn new(config: RunConfig, rendered: String) -> Self {
        Self { config, rendered, bare_lines: Vec::new(), failures: 0 }
    }
}

pub struct SpaceArgs<'a> {
    pub weight: Option<&'a str>,
    pub p: f64,
    pub panels: Option<usize>,
    pub nodes: Option<usize>,
}

/// Space for a run: explicit `--weight` wins, otherwise the registry
/// member's natural weight, otherwise unit.
fn build_space(member: &SuiteMember, args: &SpaceArgs) -> Result<WeightedSpace, CliError> {
    let mut quad = QuadConfig::default();
    if let Some(panels) = args.panels {
        quad.panels = panels;
    }
    if let Some(nodes) = args.nodes {
        quad.nodes_per_panel = nodes;
    }
    let space = match args.weight {
        Some(spec) => match resolve_weight(spec).map_err(CliError::Usage)? {
            Some(weight) => WeightedSpace::new(args.p, weight, quad),
            None => WeightedSpace::unweighted(args.p, quad),
        },
        None => match &member.space_override {
            Some(natural) => {
                let natural = natural.clone();
                WeightedSpace::new(args.p, move |x| natural.weight(x), quad)
            }
            None => WeightedSpace::unweighted(args.p, quad),
        },
    };
    space.map_err(runtime)
}

pub fn parse_deltas(spec: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let value: f64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad delta '{}'", part.trim())))?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(CliError::Usage(format!("delta must be positive, got {value}")));
        }
        out.push(value);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
pub fn run_tau(
    function: &str,
    order: usize,
    deltas: &[f64],
    space_args: &SpaceArgs,
    format: OutputFormat,
    out: Option<&str>,
    seed: Option<u64>,
) -> Result<Outcome, CliError> {
    let member = resolve_function(function).map_err(CliError::Usage)?;
    let space = build_space(&member, space_args)?;
    if order == 0 {
        return Err(CliError::Usage("difference order k must be at least 1".into()));
    }
    let cfg = ModulusConfig::new(order);
    let mut table = Table::new(vec!["function", "k", "delta", "p", "tau"]);
    let mut bare = Vec::new();
    for &delta in deltas {
        let tau = averaged_modulus(&member.model, delta, &cfg, &space).map_err(runtime)?;
        table.push(vec![
            function.into(),
            order.into(),
            delta.into(),
            space.p.into(),
            tau.into(),
        ]);
        bare.push(format!("{tau}"));
    }
    let mut config = RunConfig::new(CommandKind::Tau, format);
    config.function = Some(function.to_string());
    config.weight = space_args.weight.map(str::to_string);
    config.k_values = vec![order];
    config.delta = deltas.first().copied();
    config.p = space_args.p;
    config.panels = space_args.panels;
    config.nodes = space_args.nodes;
    config.output = out.map(str::to_string);
    config.seed = seed;
    let mut outcome = Outcome::new(config, table.render(format));
    outcome.bare_lines = bare;
    Ok(outcome)
}

pub fn run_sandwich_step(
    k_values: &[usize],
    cert_nodes: Option<usize>,
    safety: Option<f64>,
    format: OutputFormat,
    out: Option<&str>,
    seed: Option<u64>,
) -> Result<Outcome, CliError> {
    let mut table = Table::new(vec!["k", "gap", "bound"]);
    for &k in k_values {
        let nodes = cert_nodes.unwrap_or_else(|| default_cert_nodes(k));
        let pair = build_step_sandwich(k, nodes, safety.unwrap_or(DEFAULT_SAFETY))
            .map_err(runtime)?;
        table.push(vec![k.into(), pair.gap().into(), step_gap_bound(k).into()]);
    }
    let mut config = RunConfig::new(CommandKind::SandwichStep, format);
    config.k_values = k_values.to_vec();
    config.nodes = cert_nodes;
    config.output = out.map(str::to_string);
    config.seed = seed;
    Ok(Outcome::new(config, table.render(format)))
}

#[allow(clippy::too_many_arguments)]
pub fn run_approximate(
    function: &str,
    k_values: &[usize],
    y_flag: Option<f64>,
    space_args: &SpaceArgs,
    format: OutputFormat,
    out: Option<&str>,
    seed: Option<u64>,
) -> Result<Outcome, CliError> {
    let member = resolve_function(function).map_err(CliError::Usage)?;
    let space = build_space(&member, space_args)?;
    let quad = space.quad;
    let cfg = ModulusConfig::new(1);
    let mut table = Table::new(vec![
        "function",
        "k",
        "y",
        "p",
        "pair_gap",
        "lower_error",
        "upper_error",
        "tau",
    ]);
    for &k in k_values {
        if k < 2 {
            return Err(CliError::Usage(format!("approximation degree must be >= 2, got {k}")));
        }
        let y = y_flag.unwrap_or(1.0 / k as f64);
        if !(y > 0.0 && y < 1.0) {
            return Err(CliError::Usage(format!("y must lie strictly inside (0, 1), got {y}")));
        }
        let pair = build_step_sandwich(k, default_cert_nodes(k), DEFAULT_SAFETY)
            .map_err(runtime)?;
        let reflected = reflect_pair(&pair).map_err(runtime)?;
        let lower = composite_minorant(&member.model, &reflected, y, &cfg, &quad).map_err(runtime)?;
        let upper = composite_majorant(&member.model, &reflected, y, &cfg, &quad).map_err(runtime)?;
        let pair_gap = weighted_norm(
            |x| upper.eval(x).unwrap_or(f64::NAN) - lower.eval(x).unwrap_or(f64::NAN),
            &space,
        )
        .map_err(runtime)?;
        let model = &member.model;
        let lower_error =
            weighted_norm(|x| model.eval(x) - lower.eval(x).unwrap_or(f64::NAN), &space)
                .map_err(runtime)?;
        let upper_error =
            weighted_norm(|x| model.eval(x) - upper.eval(x).unwrap_or(f64::NAN), &space)
                .map_err(runtime)?;
        let tau = averaged_modulus(model, y, &cfg, &space).map_err(runtime)?;
        table.push(vec![
            function.into(),
            k.into(),
            y.into(),
            space.p.into(),
            pair_gap.into(),
            lower_error.into(),
            upper_error.into(),
            tau.into(),
        ]);
    }
    let mut config = RunConfig::new(CommandKind::Approximate, format);
    config.function = Some(function.to_string());
    config.weight = space_args.weight.map(str::to_string);
    config.k_values = k_values.to_vec();
    config.y = y_flag;
    config.p = space_args.p;
    config.panels = space_args.panels;
    config.nodes = space_args.nodes;
    config.output = out.map(str::to_string);
    config.seed = seed;
    Ok(Outcome::new(config, table.render(format)))
}

#[allow(clippy::too_many_arguments)]
pub fn run_oracle(
    function: &str,
    k_values: &[usize],
    grid_n: usize,
    space_args: &SpaceArgs,
    format: OutputFormat,
    out: Option<&str>,
    seed: Option<u64>,
) -> Result<Outcome, CliError> {
    let member = resolve_function(function).map_err(CliError::Usage)?;
    let space = build_space(&member, space_args)?;
    let mut table =
        Table::new(vec!["function", "k", "p", "grid_n", "onesided", "twosided"]);
    for &k in k_values {
        let enclosed = best_onesided(&member.model, k, &space, grid_n).map_err(runtime)?;
        let fitted = best_twosided(&member.model, k, &space, grid_n).map_err(runtime)?;
        table.push(vec![
            function.into(),
            k.into(),
            space.p.into(),
            enclosed.grid_n.into(),
            enclosed.value.into(),
            fitted.value.into(),
        ]);
    }
    let mut config = RunConfig::new(CommandKind::Oracle, format);
    config.function = Some(function.to_string());
    config.weight = space_args.weight.map(str::to_string);
    config.k_values = k_values.to_vec();
    config.p = space_args.p;
    config.grid_n = Some(grid_n);
    config.panels = space_args.panels;
    config.nodes = space_args.nodes;
    config.output = out.map(str::to_string);
    config.seed = seed;
    Ok(Outcome::new(config, table.render(format)))
}

pub fn run_verify(
    suite: &str,
    k_values: &[usize],
    format: OutputFormat,
    out: Option<&str>,
    seed: Option<u64>,
) -> Result<Outcome, CliError> {
    if suite != "default" {
        return Err(CliError::Usage(format!("unknown suite '{suite}' (only 'default' exists)")));
    }
    let members = default_suite().map_err(runtime)?;
    let space = WeightedSpace::unweighted(1.0, QuadConfig::default()).map_err(runtime)?;
    let reports = run_theorem_suite(&members, k_values, &space);
    let failures = reports.iter().filter(|r| !r.pass).count();
    let rendered = match format {
        OutputFormat::Csv => reports_to_csv(&reports),
        OutputFormat::Json => reports_to_json(&reports).map_err(runtime)?,
    };
    let mut config = RunConfig::new(CommandKind::Verify, format);
    config.k_values = k_values.to_vec();
    config.output = out.map(str::to_string);
    config.seed = seed;
    let mut outcome = Outcome::new(config, rendered);
    outcome.failures = failures;
    Ok(outcome)
}
