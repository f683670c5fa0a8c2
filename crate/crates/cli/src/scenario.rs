//! Scenario files: a JSON document naming a suite and overriding its inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lie_semigroup::{Axis, Expr};
use serde::Deserialize;

use crate::error::CliError;

/// Default seed for every randomized sample.
pub const DEFAULT_SEED: u64 = 42;

/// One sampling axis as written in a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn axis(&self) -> Result<Axis, lie_semigroup::Error> {
        Axis::new(self.lo, self.hi, self.count)
    }
}

/// Raw scenario document.
///
/// Keys of `expressions`, `grids` and `tolerances` name inputs declared by
/// the suite. When the suite is `all`, keys take the form `suite:name`.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub suite: Option<String>,
    #[serde(default)]
    pub expressions: BTreeMap<String, String>,
    #[serde(default)]
    pub grids: BTreeMap<String, GridSpec>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Scenario, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_json(&text)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

/// Inputs a suite accepts, with their defaults.
#[derive(Debug, Clone, Copy)]
pub struct Inputs {
    pub expressions: &'static [(&'static str, &'static str)],
    pub grids: &'static [(&'static str, GridSpec)],
    pub tolerances: &'static [(&'static str, f64)],
}

/// Validated inputs handed to a suite.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub seed: u64,
    expressions: BTreeMap<&'static str, (String, Expr)>,
    grids: BTreeMap<&'static str, Axis>,
    tolerances: BTreeMap<&'static str, f64>,
}

fn lookup<'a, V>(map: &'a BTreeMap<String, V>, suite: &str, name: &str, qualified_only: bool) -> Option<&'a V> {
    map.get(&format!("{suite}:{name}"))
        .or_else(|| if qualified_only { None } else { map.get(name) })
}

/// Keys of `map` that name no declared input of any selected suite.
fn unknown_keys<V>(map: &BTreeMap<String, V>, known: &[(&str, &str)], qualified_only: bool) -> Vec<String> {
    map.keys()
        .filter(|k| {
            !known.iter().any(|(suite, name)| {
                *k == &format!("{suite}:{name}") || (!qualified_only && *k == name)
            })
        })
        .cloned()
        .collect()
}

/// Checks that every override names a declared input of one of `suites`.
pub fn check_names(scenario: &Scenario, suites: &[(&str, Inputs)], qualified_only: bool) -> Result<(), CliError> {
    let collect = |f: fn(&Inputs) -> Vec<&'static str>| -> Vec<(&str, &str)> {
        suites
            .iter()
            .flat_map(|(s, i)| f(i).into_iter().map(move |n| (*s, n)))
            .collect()
    };
    let exprs = collect(|i| i.expressions.iter().map(|e| e.0).collect());
    let grids = collect(|i| i.grids.iter().map(|e| e.0).collect());
    let tols = collect(|i| i.tolerances.iter().map(|e| e.0).collect());
    let mut bad = unknown_keys(&scenario.expressions, &exprs, qualified_only);
    bad.extend(unknown_keys(&scenario.grids, &grids, qualified_only));
    bad.extend(unknown_keys(&scenario.tolerances, &tols, qualified_only));
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Config(format!("unknown scenario name(s): {}", bad.join(", "))))
    }
}

/// Resolves the inputs of `suite`, parsing expressions and building axes.
pub fn resolve(scenario: &Scenario, suite: &str, inputs: &Inputs, qualified_only: bool) -> Result<Resolved, CliError> {
    let mut expressions = BTreeMap::new();
    for (name, default) in inputs.expressions {
        let text = lookup(&scenario.expressions, suite, name, qualified_only)
            .cloned()
            .unwrap_or_else(|| default.to_string());
        let expr: Expr = text
            .parse()
            .map_err(|e| CliError::Config(format!("expression `{name}` = \"{text}\": {e}")))?;
        expressions.insert(*name, (text, expr));
    }
    let mut grids = BTreeMap::new();
    for (name, default) in inputs.grids {
        let spec = lookup(&scenario.grids, suite, name, qualified_only).unwrap_or(default);
        let axis = spec
            .axis()
            .map_err(|e| CliError::Config(format!("grid `{name}`: {e}")))?;
        grids.insert(*name, axis);
    }
    let mut tolerances = BTreeMap::new();
    for (name, default) in inputs.tolerances {
        let tol = *lookup(&scenario.tolerances, suite, name, qualified_only).unwrap_or(default);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tolerance `{name}` must be positive and finite, got {tol}")));
        }
        tolerances.insert(*name, tol);
    }
    Ok(Resolved {
        seed: scenario.seed(),
        expressions,
        grids,
        tolerances,
    })
}

impl Resolved {
    /// Source text of a declared expression.
    pub fn text(&self, name: &str) -> &str {
        &self.expressions[name].0
    }

    pub fn expr(&self, name: &str) -> &Expr {
        &self.expressions[name].1
    }

    pub fn axis(&self, name: &str) -> Axis {
        self.grids[name]
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INPUTS: Inputs = Inputs {
        expressions: &[("action", "y")],
        grids: &[("y", GridSpec { lo: -1.0, hi: 1.0, count: 3 })],
        tolerances: &[("identity", 1e-12)],
    };

    #[test]
    fn defaults_and_overrides() {
        let s = Scenario::from_json(r#"{"grids": {"y": {"lo": 0, "hi": 2, "count": 5}}}"#).unwrap();
        let r = resolve(&s, "identity", &INPUTS, false).unwrap();
        assert_eq!(r.text("action"), "y");
        assert_eq!(r.axis("y").count, 5);
        assert_eq!(r.tol("identity"), 1e-12);
        assert_eq!(r.seed, DEFAULT_SEED);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Scenario::from_json(r#"{"sweet": "identity"}"#).is_err());
        let s = Scenario::from_json(r#"{"tolerances": {"identity": 0}}"#).unwrap();
        assert!(resolve(&s, "identity", &INPUTS, false).is_err());
        let s = Scenario::from_json(r#"{"expressions": {"action": "y +"}}"#).unwrap();
        let msg = resolve(&s, "identity", &INPUTS, false).unwrap_err().to_string();
        assert!(msg.contains("byte"), "{msg}");
        let s = Scenario::from_json(r#"{"grids": {"z": {"lo": 0, "hi": 1, "count": 2}}}"#).unwrap();
        assert!(check_names(&s, &[("identity", INPUTS)], false).is_err());
        let s = Scenario::from_json(r#"{"grids": {"y": {"lo": 1, "hi": 0, "count": 2}}}"#).unwrap();
        assert!(resolve(&s, "identity", &INPUTS, false).is_err());
    }

    #[test]
    fn qualified_names() {
        let s = Scenario::from_json(r#"{"tolerances": {"identity:identity": 1e-3, "identity": 1}}"#).unwrap();
        assert_eq!(resolve(&s, "identity", &INPUTS, false).unwrap().tol("identity"), 1e-3);
        let s = Scenario::from_json(r#"{"tolerances": {"identity": 1}}"#).unwrap();
        assert!(check_names(&s, &[("identity", INPUTS)], true).is_err());
    }
}
