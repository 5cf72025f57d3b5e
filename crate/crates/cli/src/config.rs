//! Scenario configuration: a JSON document plus `--set key=value` overrides.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use tdme_core::solvers::TimeGrid;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Example1,
    Example2,
    Example3,
    Example4,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Auto,
    Volterra,
    Laplace,
    Series,
    Local,
}

/// Named real parameters. Unset values are filled from scenario defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t1: Option<f64>,
    /// Constant dephasing rates replacing the default `(1, 1, −tanh t)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f0: Option<f64>,
    /// Decay rate of the memory profile `f₀ μ e^{−μt}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Relaxation family `λ_k = p_k + (1 − p_k) e^{−r_k t}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Scenario,
    #[serde(default)]
    parameters: Parameters,
    #[serde(default)]
    engine: Engine,
    #[serde(default)]
    output: OutputPaths,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub engine: Engine,
    pub parameters: Parameters,
    #[serde(skip_serializing_if = "is_default_output")]
    pub output: OutputPaths,
}

fn is_default_output(o: &OutputPaths) -> bool {
    o == &OutputPaths::default()
}

impl ScenarioConfig {
    pub fn grid(&self) -> TimeGrid {
        TimeGrid::new(self.t_end(), self.n_steps()).expect("validated grid")
    }

    pub fn t_end(&self) -> f64 {
        self.parameters.t_end.expect("filled")
    }

    pub fn n_steps(&self) -> usize {
        self.parameters.n_steps.expect("filled")
    }

    pub fn stride(&self) -> usize {
        self.parameters.stride.expect("filled")
    }

    pub fn tol(&self) -> f64 {
        self.parameters.tol.expect("filled")
    }

    /// The α values of the sweep, in configuration order.
    pub fn alphas(&self) -> Vec<f64> {
        match (&self.parameters.alpha_list, self.parameters.alpha) {
            (Some(list), _) => list.clone(),
            (None, Some(a)) => vec![a],
            (None, None) => Vec::new(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.parameters.n_max.unwrap_or(50)
    }

    pub fn series_tol(&self) -> f64 {
        self.parameters.series_tol.unwrap_or(1e-10)
    }
}

const TOP_LEVEL: [&str; 4] = ["scenario", "parameters", "engine", "output"];

/// Applies `key=value` overrides. Bare keys address `parameters`; values are
/// read as JSON when possible and as strings otherwise.
pub fn apply_overrides(doc: &mut Value, overrides: &[String]) -> Result<(), CliError> {
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override `{item}` is not of the form key=value")))?;
        let mut path: Vec<&str> = key.trim().split('.').collect();
        if path.iter().any(|p| p.is_empty()) {
            return Err(CliError::Config(format!("override key `{key}` is malformed")));
        }
        if !TOP_LEVEL.contains(&path[0]) {
            path.insert(0, "parameters");
        }
        let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
        let mut node = &mut *doc;
        for segment in &path[..path.len() - 1] {
            let map = node
                .as_object_mut()
                .ok_or_else(|| CliError::Config(format!("override `{key}`: `{segment}` is not an object")))?;
            node = map.entry(segment.to_string()).or_insert_with(|| Value::Object(Default::default()));
        }
        node.as_object_mut()
            .ok_or_else(|| CliError::Config(format!("override `{key}` does not address an object field")))?
            .insert(path[path.len() - 1].to_string(), value);
    }
    Ok(())
}

/// Parses a configuration document, applies overrides, validates it and fills defaults.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let mut doc: Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed configuration: {e}")))?;
    if !doc.is_object() {
        return Err(CliError::Config("configuration must be a JSON object".into()));
    }
    apply_overrides(&mut doc, overrides)?;
    let raw: RawConfig = serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Config(e.into_inner().to_string())
        } else {
            CliError::Config(format!("{path}: {}", e.into_inner()))
        }
    })?;
    validate(raw)
}

fn in_unit_interval(a: f64) -> bool {
    a > 0.0 && a <= 1.0
}

fn validate(raw: RawConfig) -> Result<ScenarioConfig, CliError> {
    let RawConfig {
        scenario,
        mut parameters,
        engine,
        output,
    } = raw;
    let p = &mut parameters;
    let mut errors: Vec<String> = Vec::new();

    let required: &[(&str, Option<f64>)] = match scenario {
        Scenario::Example1 | Scenario::Example4 => &[],
        Scenario::Example2 => &[("gamma", p.gamma), ("alpha", p.alpha)],
        Scenario::Example3 => &[("a1", p.a1), ("a2", p.a2), ("a3", p.a3), ("f0", p.f0)],
        Scenario::Custom => &[
            ("p1", p.p1),
            ("p2", p.p2),
            ("p3", p.p3),
            ("r1", p.r1),
            ("r2", p.r2),
            ("r3", p.r3),
        ],
    };
    let missing: Vec<String> = required
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|(name, _)| format!("parameters.{name}"))
        .collect();
    if !missing.is_empty() {
        errors.push(format!(
            "scenario {} is missing required fields: {}",
            scenario_name(scenario),
            missing.join(", ")
        ));
    }
    if matches!(scenario, Scenario::Example3 | Scenario::Custom) && p.alpha.is_none() && p.alpha_list.is_none() {
        errors.push("parameters.alpha: required (or parameters.alpha_list)".into());
    }
    if p.alpha.is_some() && p.alpha_list.is_some() {
        errors.push("parameters.alpha_list: give either alpha or alpha_list, not both".into());
    }
    if scenario == Scenario::Example2 && p.alpha_list.is_some() {
        errors.push("parameters.alpha_list: example2 takes a single parameters.alpha".into());
    }
    if let Some(a) = p.alpha {
        if !in_unit_interval(a) {
            errors.push(format!("parameters.alpha: must lie in (0, 1], got {a}"));
        }
    }
    if let Some(list) = &p.alpha_list {
        if list.is_empty() {
            errors.push("parameters.alpha_list: must not be empty".into());
        }
        for (i, a) in list.iter().enumerate() {
            if !in_unit_interval(*a) {
                errors.push(format!("parameters.alpha_list[{i}]: must lie in (0, 1], got {a}"));
            }
        }
    }

    let positive = |name: &str, v: Option<f64>, errors: &mut Vec<String>| {
        if let Some(v) = v {
            if !(v > 0.0 && v.is_finite()) {
                errors.push(format!("parameters.{name}: must be positive, got {v}"));
            }
        }
    };
    for (name, v) in [
        ("gamma", p.gamma),
        ("t_end", p.t_end),
        ("h", p.h),
        ("tol", p.tol),
        ("a1", p.a1),
        ("a2", p.a2),
        ("a3", p.a3),
        ("mu", p.mu),
        ("r1", p.r1),
        ("r2", p.r2),
        ("r3", p.r3),
        ("series_tol", p.series_tol),
    ] {
        positive(name, v, &mut errors);
    }
    if let Some(f0) = p.f0 {
        if !(f0 >= 0.0 && f0.is_finite()) {
            errors.push(format!("parameters.f0: must be nonnegative, got {f0}"));
        }
    }
    if let Some(t1) = p.t1 {
        if !(t1 >= 0.0 && t1.is_finite()) {
            errors.push(format!("parameters.t1: must be nonnegative, got {t1}"));
        }
    }
    if p.stride == Some(0) {
        errors.push("parameters.stride: must be positive".into());
    }
    let rates = [p.g1, p.g2, p.g3];
    if rates.iter().any(Option::is_some) && !rates.iter().all(Option::is_some) {
        errors.push("parameters.g1, parameters.g2, parameters.g3: give all three constant rates or none".into());
    }

    let supported: &[Engine] = match scenario {
        Scenario::Example1 => &[Engine::Auto, Engine::Local],
        Scenario::Example2 | Scenario::Example3 | Scenario::Example4 => {
            &[Engine::Auto, Engine::Volterra, Engine::Laplace, Engine::Series]
        }
        Scenario::Custom => &[Engine::Auto, Engine::Laplace],
    };
    if !supported.contains(&engine) {
        errors.push(format!(
            "engine: {} is not available for {}",
            engine_name(engine),
            scenario_name(scenario)
        ));
    }
    let engine = match (engine, scenario) {
        (Engine::Auto, Scenario::Example1) => Engine::Local,
        (Engine::Auto, Scenario::Example2) => Engine::Volterra,
        (Engine::Auto, _) => Engine::Laplace,
        (e, _) => e,
    };

    // grid defaults: the figure-4 grid for example4, h = 1e−3 on [0, 10] otherwise
    let (default_t_end, default_h) = match scenario {
        Scenario::Example4 => (5.0, 0.01),
        _ => (10.0, 1e-3),
    };
    let t_end = p.t_end.unwrap_or(default_t_end);
    let n_steps = match (p.n_steps, p.h) {
        (Some(n), Some(h)) => {
            if (t_end / n as f64 - h).abs() > 1e-9 * h {
                errors.push(format!(
                    "parameters.h: {h} conflicts with t_end / n_steps = {}",
                    t_end / n as f64
                ));
            }
            n
        }
        (Some(n), None) => n,
        (None, h) => (t_end / h.unwrap_or(default_h)).round() as usize,
    };
    if n_steps < 10 {
        errors.push(format!("parameters.n_steps: must be at least 10, got {n_steps}"));
    }
    if scenario == Scenario::Example4 && p.alpha.is_none() && p.alpha_list.is_none() {
        p.alpha_list = Some((1..=9).map(|i| i as f64 / 10.0).collect());
    }
    if scenario == Scenario::Example1 && p.alpha.is_none() && p.alpha_list.is_none() {
        p.alpha_list = Some(vec![1.0]);
    }
    if scenario == Scenario::Example1 {
        let t1 = *p.t1.get_or_insert(1.0);
        if t1 > t_end {
            errors.push(format!("parameters.t1: {t1} lies beyond t_end = {t_end}"));
        }
    }
    if scenario == Scenario::Example3 {
        p.mu.get_or_insert(1.0);
    }

    if !errors.is_empty() {
        return Err(CliError::Config(errors.join("; ")));
    }
    p.t_end = Some(t_end);
    p.n_steps = Some(n_steps);
    p.h = Some(t_end / n_steps as f64);
    p.stride.get_or_insert(10);
    p.tol.get_or_insert(1e-9);
    if matches!(engine, Engine::Series) {
        p.n_max.get_or_insert(50);
        p.series_tol.get_or_insert(1e-10);
    }
    Ok(ScenarioConfig {
        scenario,
        engine,
        parameters,
        output,
    })
}

pub fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::Example1 => "example1",
        Scenario::Example2 => "example2",
        Scenario::Example3 => "example3",
        Scenario::Example4 => "example4",
        Scenario::Custom => "custom",
    }
}

pub fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Auto => "auto",
        Engine::Volterra => "volterra",
        Engine::Laplace => "laplace",
        Engine::Series => "series",
        Engine::Local => "local",
    }
}
