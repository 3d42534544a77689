//! Scenario files: named operators, states, context seeds, propositions
//! and queries, plus the optional config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use tq_core::context::generate_context;
use tq_core::{Complex, Context, Matrix, Operator, StateVector, Tolerances};

use crate::CliError;

/// A matrix or vector entry: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for Complex {
    fn from(e: Entry) -> Complex {
        match e {
            Entry::Real(x) => Complex::new(x, 0.0),
            Entry::Complex([re, im]) => Complex::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Pullback,
    Daseinised,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Pullback => "pullback",
            Route::Daseinised => "daseinised",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProposition {
    operator: String,
    window: [f64; 2],
    #[serde(default = "default_route")]
    route: Route,
}

fn default_route() -> Route {
    Route::Daseinised
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuery {
    state: String,
    proposition: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    dim: usize,
    #[serde(default)]
    operators: BTreeMap<String, Vec<Vec<Entry>>>,
    #[serde(default)]
    states: BTreeMap<String, Vec<Entry>>,
    #[serde(default)]
    contexts: Vec<Vec<String>>,
    #[serde(default)]
    propositions: BTreeMap<String, RawProposition>,
    #[serde(default)]
    queries: Vec<RawQuery>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposition {
    pub operator: String,
    pub lower: f64,
    pub upper: f64,
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub state: String,
    pub proposition: String,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dim: usize,
    pub operators: BTreeMap<String, Operator>,
    pub states: BTreeMap<String, StateVector>,
    pub seeds: Vec<Vec<String>>,
    /// The context generated by each seed.
    pub contexts: Vec<Context>,
    pub propositions: BTreeMap<String, Proposition>,
    pub queries: Vec<Query>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// One context per seed, generated from the seed's operators.
fn seed_contexts(
    seeds: &[Vec<String>],
    operators: &BTreeMap<String, Operator>,
    tol: &Tolerances,
) -> Result<Vec<Context>, CliError> {
    seeds
        .iter()
        .enumerate()
        .map(|(i, seed)| {
            let ops: Vec<Operator> = seed.iter().map(|n| operators[n].clone()).collect();
            generate_context(&ops, tol).map_err(|e| match e {
                tq_core::Error::NonCommuting { first, second, norm } => invalid(format!(
                    "context seed {i}: operators '{}' and '{}' do not commute (|[A,B]| = {norm:.3e})",
                    seed[first], seed[second]
                )),
                other => invalid(format!("context seed {i}: {other}")),
            })
        })
        .collect()
}

pub fn load_scenario(path: &Path, tol: &Tolerances) -> Result<Scenario, CliError> {
    let text = read(path)?;
    Scenario::from_json(path, &text, tol)
}

impl Scenario {
    pub fn from_json(path: &Path, text: &str, tol: &Tolerances) -> Result<Self, CliError> {
        let raw: RawScenario = parse(path, text)?;
        Self::validate(raw, tol)
    }

    fn validate(raw: RawScenario, tol: &Tolerances) -> Result<Self, CliError> {
        let dim = raw.dim;
        if dim < 2 {
            return Err(invalid(format!("dim must be at least 2, got {dim}")));
        }

        let mut operators = BTreeMap::new();
        for (name, rows) in raw.operators {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(invalid(format!("operator '{name}' is not a {dim}x{dim} matrix")));
            }
            let rows = rows.into_iter().map(|r| r.into_iter().map(Complex::from).collect()).collect();
            let m = Matrix::from_rows(rows).map_err(|e| invalid(format!("operator '{name}': {e}")))?;
            let op = Operator::new(m, tol).map_err(|e| invalid(format!("operator '{name}': {e}")))?;
            operators.insert(name, op);
        }

        let mut states = BTreeMap::new();
        for (name, amps) in raw.states {
            if amps.len() != dim {
                return Err(invalid(format!("state '{name}' has {} amplitudes, expected {dim}", amps.len())));
            }
            let amps = amps.into_iter().map(Complex::from).collect();
            let psi = StateVector::new(amps, tol).map_err(|e| invalid(format!("state '{name}': {e}")))?;
            states.insert(name, psi);
        }

        for (i, seed) in raw.contexts.iter().enumerate() {
            if seed.is_empty() {
                return Err(invalid(format!("context seed {i} is empty")));
            }
            for name in seed {
                if !operators.contains_key(name) {
                    return Err(invalid(format!("context seed {i}: unknown operator '{name}'")));
                }
            }
        }
        let contexts = seed_contexts(&raw.contexts, &operators, tol)?;

        let mut propositions = BTreeMap::new();
        for (name, p) in raw.propositions {
            if !operators.contains_key(&p.operator) {
                return Err(invalid(format!("proposition '{name}': unknown operator '{}'", p.operator)));
            }
            let [lower, upper] = p.window;
            if lower.partial_cmp(&upper).is_none_or(|o| o.is_gt()) {
                return Err(invalid(format!("proposition '{name}': empty window [{lower}, {upper}]")));
            }
            propositions.insert(name, Proposition { operator: p.operator, lower, upper, route: p.route });
        }

        let mut queries = Vec::new();
        for q in raw.queries {
            if !states.contains_key(&q.state) {
                return Err(invalid(format!("query: unknown state '{}'", q.state)));
            }
            if !propositions.contains_key(&q.proposition) {
                return Err(invalid(format!("query: unknown proposition '{}'", q.proposition)));
            }
            queries.push(Query { state: q.state, proposition: q.proposition });
        }

        Ok(Scenario { dim, operators, states, seeds: raw.contexts, contexts, propositions, queries })
    }

    pub fn operator(&self, name: &str) -> Result<&Operator, CliError> {
        self.operators.get(name).ok_or_else(|| invalid(format!("unknown operator '{name}'")))
    }

    pub fn state(&self, name: &str) -> Result<&StateVector, CliError> {
        self.states.get(name).ok_or_else(|| invalid(format!("unknown state '{name}'")))
    }

    pub fn proposition(&self, name: &str) -> Result<&Proposition, CliError> {
        self.propositions.get(name).ok_or_else(|| invalid(format!("unknown proposition '{name}'")))
    }
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub herm: Option<f64>,
    pub proj: Option<f64>,
    pub psd: Option<f64>,
    pub cluster: Option<f64>,
    pub recon: Option<f64>,
    pub norm: Option<f64>,
}

/// Contents of `--config`. Every field is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
    pub leaf_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tolerances: Tolerances,
    pub leaf_budget: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), leaf_budget: tq_core::ks::DEFAULT_LEAF_BUDGET }
    }
}

impl Config {
    /// Defaults, then the config file, then command-line flags.
    pub fn resolve(file: Option<&Path>, tol_flag: Option<f64>, budget_flag: Option<u64>) -> Result<Self, CliError> {
        let mut config = Config::default();
        if let Some(path) = file {
            let parsed: ConfigFile = parse(path, &read(path)?)?;
            let t = &mut config.tolerances;
            let o = parsed.tolerances;
            for (slot, value) in [
                (&mut t.herm, o.herm),
                (&mut t.proj, o.proj),
                (&mut t.psd, o.psd),
                (&mut t.cluster, o.cluster),
                (&mut t.recon, o.recon),
                (&mut t.norm, o.norm),
            ] {
                if let Some(v) = value {
                    *slot = v;
                }
            }
            if let Some(b) = parsed.leaf_budget {
                config.leaf_budget = b;
            }
        }
        if let Some(eps) = tol_flag {
            config.tolerances = Tolerances::uniform(eps);
        }
        if let Some(b) = budget_flag {
            config.leaf_budget = b;
        }
        let t = &config.tolerances;
        if [t.herm, t.proj, t.psd, t.cluster, t.recon, t.norm].iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(invalid("tolerances must be positive and finite"));
        }
        if config.leaf_budget == 0 {
            return Err(invalid("leaf budget must be positive"));
        }
        Ok(config)
    }
}
