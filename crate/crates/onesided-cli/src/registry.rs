//! Built-in functions and weights, addressable by id, plus expression
//! fallbacks for everything else.

use onesided::verify::{default_suite, SuiteMember};
use onesided::FunctionModel;

use crate::expr::Expr;

/// Ids of the built-in functions, in registry order.
pub const FUNCTION_IDS: [&str; 6] = ["constant", "identity", "abs03", "sin10", "exp", "singular"];

/// Ids of the built-in weights.
pub const WEIGHT_IDS: [&str; 2] = ["unit", "invsqrt"];

/// Boxed weight function, ready to hand to a weighted space.
pub type WeightFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Resolves `--fn`: a registry id first, otherwise an expression in `x`.
///
/// Registry members keep their natural space (the singular power comes with
/// the square-root weight) and their analytic derivatives; expression
/// functions fall back to numeric differentiation and the unit weight.
pub fn resolve_function(spec: &str) -> Result<SuiteMember, String> {
    let suite = default_suite().map_err(|e| format!("registry construction failed: {e}"))?;
    if let Some(member) = suite.into_iter().find(|m| m.model.name() == spec) {
        return Ok(member);
    }
    if spec.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !spec.contains('(') {
        // Looks like an id, not an expression: misspelled ids should say so
        // instead of producing a cryptic parse error.
        if spec != "x" {
            return Err(format!(
                "unknown function id '{spec}' (known: {}); pass an expression in x instead",
                FUNCTION_IDS.join(", ")
            ));
        }
    }
    let parsed = Expr::parse(spec).map_err(|e| format!("cannot parse expression: {e}"))?;
    let name = spec.to_string();
    Ok(SuiteMember {
        model: FunctionModel::new(name, move |x| parsed.eval(x)),
        space_override: None,
        absolutely_continuous: true,
    })
}

/// Resolves `--weight`: `unit`, a registry id, or an expression in `x`.
pub fn resolve_weight(spec: &str) -> Result<Option<WeightFn>, String> {
    match spec {
        "unit" => Ok(None),
        "invsqrt" => Ok(Some(Box::new(|x: f64| x.powf(-0.5)))),
        other => {
            let parsed = Expr::parse(other).map_err(|e| {
                format!(
                    "cannot parse weight expression: {e} (known weight ids: {})",
                    WEIGHT_IDS.join(", ")
                )
            })?;
            Ok(Some(Box::new(move |x| parsed.eval(x))))
        }
    }
}
