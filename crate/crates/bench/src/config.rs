//! Experiment configuration in a flat `key = value` text format.
//!
//! ```text
//! # comment
//! environment = NoisyPointWalker
//! algorithms = [NSGA2, SPEA2, GA]
//! pop_size = 50
//! rnsga2_reference_points = [[0, 1], [1, 0]]
//! ```
//!
//! Values are bare scalars or bracketed, comma-separated lists. Everything
//! after `#` is ignored. Keys may appear once; unknown keys are errors.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use morl_core::algorithms::{AlgorithmConfig, AlgorithmKind, Bounds, OperatorParams};
use morl_core::env::{EnvKind, EnvSpec};
use morl_core::policy::PolicySpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    /// 1-based line of the offending entry; `None` for missing keys.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "config line {line}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub environment: EnvKind,
    pub sigma: Option<f64>,
    pub horizon: Option<usize>,
    pub hidden: [usize; 3],
    pub algorithms: Vec<AlgorithmKind>,
    pub pop_size: usize,
    pub generations: usize,
    pub n_episodes: usize,
    pub n_runs: usize,
    pub master_seed: u64,
    pub output: Option<String>,
    pub params: OperatorParams,
}

impl ExperimentConfig {
    /// A config with every default applied.
    pub fn new(environment: EnvKind, algorithms: Vec<AlgorithmKind>) -> Self {
        ExperimentConfig {
            environment,
            sigma: None,
            horizon: None,
            hidden: [4, 4, 4],
            algorithms,
            pop_size: 50,
            generations: 25,
            n_episodes: 5,
            n_runs: 10,
            master_seed: 0,
            output: None,
            params: OperatorParams::default(),
        }
    }

    pub fn env_spec(&self) -> morl_core::Result<EnvSpec> {
        let mut env = EnvSpec::new(self.environment);
        if let Some(sigma) = self.sigma {
            env = env.with_sigma(sigma)?;
        }
        if let Some(horizon) = self.horizon {
            env = env.with_horizon(horizon)?;
        }
        Ok(env)
    }

    pub fn policy_spec(&self) -> morl_core::Result<PolicySpec> {
        let env = EnvSpec::new(self.environment);
        PolicySpec::new(env.obs_dim, self.hidden, env.action_dim)
    }

    pub fn algorithm_config(&self, kind: AlgorithmKind) -> AlgorithmConfig {
        AlgorithmConfig {
            kind,
            pop_size: self.pop_size,
            params: self.params.clone(),
        }
    }

    /// Canonical text form; parsing it gives back an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("environment", self.environment.name().to_string());
        if let Some(sigma) = self.sigma {
            put("sigma", sigma.to_string());
        }
        if let Some(h) = self.horizon {
            put("horizon", h.to_string());
        }
        put("n_layer1", self.hidden[0].to_string());
        put("n_layer2", self.hidden[1].to_string());
        put("n_layer3", self.hidden[2].to_string());
        let names: Vec<&str> = self.algorithms.iter().map(|a| a.name()).collect();
        put("algorithms", format!("[{}]", names.join(", ")));
        put("pop_size", self.pop_size.to_string());
        put("generations", self.generations.to_string());
        put("n_episodes", self.n_episodes.to_string());
        put("n_runs", self.n_runs.to_string());
        put("master_seed", self.master_seed.to_string());
        if let Some(out) = &self.output {
            put("output", out.clone());
        }
        put("gene_lower", p.bounds.lower.to_string());
        put("gene_upper", p.bounds.upper.to_string());
        put("sbx_eta", p.sbx_eta.to_string());
        put("sbx_prob", p.sbx_prob.to_string());
        put("sbx_gene_prob", p.sbx_gene_prob.to_string());
        put("pm_eta", p.pm_eta.to_string());
        if let Some(pm) = p.pm_prob {
            put("pm_prob", pm.to_string());
        }
        put("de_f", p.de_f.to_string());
        put("de_cr", p.de_cr.to_string());
        put("pso_w", p.pso_w.to_string());
        put("pso_c1", p.pso_c1.to_string());
        put("pso_c2", p.pso_c2.to_string());
        put("rnsga2_epsilon", p.rnsga2_epsilon.to_string());
        if let Some(points) = &p.rnsga2_reference_points {
            let rows: Vec<String> = points
                .iter()
                .map(|r| {
                    let xs: Vec<String> = r.iter().map(f64::to_string).collect();
                    format!("[{}]", xs.join(", "))
                })
                .collect();
            put("rnsga2_reference_points", format!("[{}]", rows.join(", ")));
        }
        s
    }
}

impl FromStr for ExperimentConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        parse_config(text)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Scalar(String),
    List(Vec<Value>),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn value(&mut self) -> Result<Value, ConfigError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with('[') {
            self.pos += 1;
            let mut items = Vec::new();
            self.skip_ws();
            if self.text[self.pos..].starts_with(']') {
                self.pos += 1;
                return Ok(Value::List(items));
            }
            loop {
                items.push(self.value()?);
                self.skip_ws();
                let rest = &self.text[self.pos..];
                if rest.starts_with(',') {
                    self.pos += 1;
                } else if rest.starts_with(']') {
                    self.pos += 1;
                    return Ok(Value::List(items));
                } else {
                    return Err(err(self.line, "expected `,` or `]` in list"));
                }
            }
        }
        let rest = &self.text[self.pos..];
        let end = rest.find([',', '[', ']']).unwrap_or(rest.len());
        let token = rest[..end].trim();
        if token.is_empty() {
            return Err(err(self.line, "missing value"));
        }
        self.pos += end;
        Ok(Value::Scalar(token.to_string()))
    }
}

fn parse_value(text: &str, line: usize) -> Result<Value, ConfigError> {
    let mut c = Cursor { text, pos: 0, line };
    let v = c.value()?;
    c.skip_ws();
    if c.pos != text.len() {
        return Err(err(line, format!("unexpected trailing text `{}`", &text[c.pos..])));
    }
    Ok(v)
}

const KEYS: &[&str] = &[
    "environment",
    "sigma",
    "horizon",
    "n_layer1",
    "n_layer2",
    "n_layer3",
    "algorithms",
    "pop_size",
    "generations",
    "n_episodes",
    "n_runs",
    "master_seed",
    "output",
    "gene_lower",
    "gene_upper",
    "sbx_eta",
    "sbx_prob",
    "sbx_gene_prob",
    "pm_eta",
    "pm_prob",
    "de_f",
    "de_cr",
    "pso_w",
    "pso_c1",
    "pso_c2",
    "rnsga2_epsilon",
    "rnsga2_reference_points",
];

struct Entries(BTreeMap<String, (usize, Value)>);

impl Entries {
    fn scalar(&self, key: &str) -> Result<Option<(usize, &str)>, ConfigError> {
        match self.0.get(key) {
            None => Ok(None),
            Some((line, Value::Scalar(s))) => Ok(Some((*line, s.as_str()))),
            Some((line, Value::List(_))) => Err(err(*line, format!("`{key}` expects a single value"))),
        }
    }

    fn parsed<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<(usize, T)>, ConfigError> {
        match self.scalar(key)? {
            None => Ok(None),
            Some((line, s)) => s
                .parse()
                .map(|v| Some((line, v)))
                .map_err(|_| err(line, format!("`{key}` expects {what}, got `{s}`"))),
        }
    }

    fn positive(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.parsed::<usize>(key, "a positive integer")? {
            None => Ok(default),
            Some((line, 0)) => Err(err(line, format!("`{key}` must be positive"))),
            Some((_, v)) => Ok(v),
        }
    }

    fn real(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.parsed::<f64>(key, "a number")?.map_or(default, |(_, v)| v))
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.0.get(key).map(|(l, _)| *l)
    }
}

/// Parses and validates a configuration, applying defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, "expected `key = value`"))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(err(line, format!("unknown key `{key}`")));
        }
        if let Some((first, _)) = entries.get(key) {
            return Err(err(line, format!("duplicate key `{key}` (first set on line {first})")));
        }
        entries.insert(key.to_string(), (line, parse_value(value.trim(), line)?));
    }
    let e = Entries(entries);

    let missing = |key: &str| ConfigError {
        line: None,
        message: format!("missing required key `{key}`"),
    };
    let (env_line, env_name) = e.scalar("environment")?.ok_or_else(|| missing("environment"))?;
    let environment: EnvKind = env_name
        .parse()
        .map_err(|_| err(env_line, format!("unknown environment `{env_name}`")))?;

    let (alg_line, alg_value) = e.0.get("algorithms").ok_or_else(|| missing("algorithms"))?;
    let items = match alg_value {
        Value::List(items) => items.clone(),
        single @ Value::Scalar(_) => vec![single.clone()],
    };
    let mut algorithms = Vec::new();
    for item in items {
        let Value::Scalar(name) = item else {
            return Err(err(*alg_line, "algorithm names must be plain values"));
        };
        let kind: AlgorithmKind = name
            .parse()
            .map_err(|_| err(*alg_line, format!("unknown algorithm `{name}`")))?;
        if algorithms.contains(&kind) {
            return Err(err(*alg_line, format!("algorithm `{name}` listed twice")));
        }
        algorithms.push(kind);
    }
    if algorithms.is_empty() {
        return Err(err(*alg_line, "at least one algorithm is required"));
    }

    let mut cfg = ExperimentConfig::new(environment, algorithms);
    let defaults = cfg.clone();
    cfg.sigma = e.parsed::<f64>("sigma", "a number")?.map(|(_, v)| v);
    cfg.horizon = match e.parsed::<usize>("horizon", "a positive integer")? {
        Some((line, 0)) => return Err(err(line, "`horizon` must be positive")),
        other => other.map(|(_, v)| v),
    };
    cfg.hidden = [
        e.positive("n_layer1", defaults.hidden[0])?,
        e.positive("n_layer2", defaults.hidden[1])?,
        e.positive("n_layer3", defaults.hidden[2])?,
    ];
    cfg.pop_size = e.positive("pop_size", defaults.pop_size)?;
    cfg.generations = e.positive("generations", defaults.generations)?;
    cfg.n_episodes = e.positive("n_episodes", defaults.n_episodes)?;
    cfg.n_runs = e.positive("n_runs", defaults.n_runs)?;
    cfg.master_seed = e
        .parsed::<u64>("master_seed", "an unsigned integer")?
        .map_or(defaults.master_seed, |(_, v)| v);
    cfg.output = e.scalar("output")?.map(|(_, s)| s.to_string());

    let d = &defaults.params;
    let p = &mut cfg.params;
    p.bounds = Bounds {
        lower: e.real("gene_lower", d.bounds.lower)?,
        upper: e.real("gene_upper", d.bounds.upper)?,
    };
    p.sbx_eta = e.real("sbx_eta", d.sbx_eta)?;
    p.sbx_prob = e.real("sbx_prob", d.sbx_prob)?;
    p.sbx_gene_prob = e.real("sbx_gene_prob", d.sbx_gene_prob)?;
    p.pm_eta = e.real("pm_eta", d.pm_eta)?;
    p.pm_prob = e.parsed::<f64>("pm_prob", "a number")?.map(|(_, v)| v);
    p.de_f = e.real("de_f", d.de_f)?;
    p.de_cr = e.real("de_cr", d.de_cr)?;
    p.pso_w = e.real("pso_w", d.pso_w)?;
    p.pso_c1 = e.real("pso_c1", d.pso_c1)?;
    p.pso_c2 = e.real("pso_c2", d.pso_c2)?;
    p.rnsga2_epsilon = e.real("rnsga2_epsilon", d.rnsga2_epsilon)?;
    if let Some((line, value)) = e.0.get("rnsga2_reference_points") {
        p.rnsga2_reference_points = Some(reference_points(value, *line)?);
    }

    // core errors name the offending parameter; map it back to its line
    let line_of = |key: &str| e.line(key).unwrap_or(*alg_line);
    let line_of_error = |error: &morl_core::Error, fallback: &str| match error {
        morl_core::Error::InvalidParameter { name, .. } if e.line(name).is_some() => line_of(name),
        _ => line_of(fallback),
    };
    if let Err(error) = cfg.env_spec() {
        return Err(err(line_of_error(&error, "sigma"), error.to_string()));
    }
    for &kind in &cfg.algorithms {
        if let Err(error) = cfg.algorithm_config(kind).validate() {
            return Err(err(line_of_error(&error, "gene_lower"), format!("{kind}: {error}")));
        }
    }
    if let Some(points) = &cfg.params.rnsga2_reference_points {
        let k = EnvSpec::new(environment).objectives;
        if points.is_empty() || points.iter().any(|r| r.len() != k) {
            return Err(err(
                line_of("rnsga2_reference_points"),
                format!("reference points need {k} coordinates each"),
            ));
        }
    }
    Ok(cfg)
}

fn reference_points(value: &Value, line: usize) -> Result<Vec<Vec<f64>>, ConfigError> {
    let shape = || err(line, "`rnsga2_reference_points` expects a list of lists of numbers");
    let Value::List(rows) = value else { return Err(shape()) };
    rows.iter()
        .map(|row| {
            let Value::List(xs) = row else { return Err(shape()) };
            xs.iter()
                .map(|x| match x {
                    Value::Scalar(s) => s.parse::<f64>().map_err(|_| shape()),
                    Value::List(_) => Err(shape()),
                })
                .collect()
        })
        .collect()
}
