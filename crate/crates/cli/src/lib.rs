//! Scenario-driven front end for `tq-core`: load a scenario, run one
//! subcommand over its context poset, and emit a deterministic report.

pub mod report;
pub mod scenario;

use std::collections::BTreeSet;

use thiserror::Error;

use tq_core::ks::{find_global_section, SearchOutcome};
use tq_core::quantity::{compare_propositions, daseinised_proposition, pullback_proposition, QuantityArrow};
use tq_core::truth::{truth_object, valuate};
use tq_core::{AtomSet, ContextId, ContextPoset, GelfandPoint, IntervalWindow, OmegaElement};

use report::{
    AtomReport, ComparisonReport, ContextReport, DaseinisationReport, DaseinisationRow, KsReport, KsVerdict, PairRow,
    PosetReport, QuantityReport, Report, StageReport, ToleranceReport, TruthReport, Verdict,
};
pub use scenario::{load_scenario, Config, Route, Scenario};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: parse error: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("computation failed: {0}")]
    Compute(#[from] tq_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Validation(_) => 1,
            CliError::Compute(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Build the context poset and list its contexts and order
    Contexts,
    /// Inner and outer daseinisation of an operator at every context
    Daseinise { operator: String },
    /// Order-preserving/-reversing pair of an operator at a point `V<id>:<atom>`
    Quantity { operator: String, point: String },
    /// Truth value of a proposition in a state (all scenario queries if omitted)
    Truth {
        #[arg(requires = "proposition")]
        state: Option<String>,
        proposition: Option<String>,
    },
    /// Search for a global section of the spectral presheaf
    Ks,
    /// Compare the pullback and daseinised routes for a proposition
    Compare { proposition: String },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Contexts => "contexts",
            Command::Daseinise { .. } => "daseinise",
            Command::Quantity { .. } => "quantity",
            Command::Truth { .. } => "truth",
            Command::Ks => "ks",
            Command::Compare { .. } => "compare",
        }
    }
}

/// Exit status for a successful run: 3 when the section search ran out of
/// budget, 0 otherwise.
pub fn exit_code(report: &Report) -> u8 {
    match &report.ks {
        Some(k) if k.verdict == KsVerdict::Inconclusive => 3,
        _ => 0,
    }
}

fn atoms(set: AtomSet) -> Vec<usize> {
    set.iter().collect()
}

fn poset_report(poset: &ContextPoset) -> PosetReport {
    let contexts = poset
        .ids()
        .map(|v| {
            let c = &poset.contexts()[v.0];
            let atoms = c
                .atoms()
                .iter()
                .map(|q| {
                    let dim = q.dim();
                    let matrix = (0..dim)
                        .map(|i| (0..dim).map(|j| {
                            let z = q.get(i, j);
                            [z.re, z.im]
                        }).collect())
                        .collect();
                    AtomReport { rank: q.rank(), matrix }
                })
                .collect();
            let below = poset.down_set(v).iter().filter(|&&w| w != v).map(|w| w.0).collect();
            ContextReport { id: v.0, atoms, below }
        })
        .collect();
    let edges = poset.order_pairs().into_iter().map(|(sub, sup)| [sub.0, sup.0]).collect();
    let maximal = poset.maximal().into_iter().map(|v| v.0).collect();
    PosetReport { contexts, edges, maximal }
}

fn parse_point(poset: &ContextPoset, text: &str) -> Result<GelfandPoint, CliError> {
    let bad = || CliError::Validation(format!("point '{text}' is not of the form V<id>:<atom>"));
    let (v, atom) = text.split_once(':').ok_or_else(bad)?;
    let v = v.strip_prefix('V').unwrap_or(v);
    let context = ContextId(v.parse().map_err(|_| bad())?);
    let atom: usize = atom.parse().map_err(|_| bad())?;
    let len = poset.context(context)?.len();
    if atom >= len {
        return Err(tq_core::Error::AtomOutOfRange { context, index: atom }.into());
    }
    Ok(GelfandPoint { context, atom })
}

fn window(lower: f64, upper: f64) -> Result<IntervalWindow, CliError> {
    Ok(IntervalWindow::new(lower, upper)?)
}

fn truth_report(scenario: &Scenario, poset: &ContextPoset, state: &str, prop_name: &str) -> Result<TruthReport, CliError> {
    let psi = scenario.state(state)?;
    let prop = scenario.proposition(prop_name)?;
    let a = scenario.operator(&prop.operator)?;
    let w = window(prop.lower, prop.upper)?;
    let subobject = match prop.route {
        Route::Pullback => pullback_proposition(poset, a, &w)?,
        Route::Daseinised => daseinised_proposition(poset, a, &w)?,
    };
    let value = valuate(&subobject, &truth_object(psi, poset)?)?;
    let stages = poset
        .ids()
        .map(|v| {
            let s = value.sieve(v);
            StageReport { context: v.0, sieve: s.members.iter().map(|w| w.0).collect(), degree: s.degree(poset) }
        })
        .collect();
    let verdict = if value == OmegaElement::totally_true(poset) {
        Verdict::TotallyTrue
    } else if value == OmegaElement::totally_false(poset) {
        Verdict::TotallyFalse
    } else {
        Verdict::Intermediate
    };
    Ok(TruthReport {
        state: state.to_string(),
        proposition: prop_name.to_string(),
        route: prop.route.as_str().to_string(),
        proposition_atoms: subobject.components().iter().map(|&s| atoms(s)).collect(),
        stages,
        verdict,
    })
}

pub fn run(command: &Command, scenario: &Scenario, config: &Config) -> Result<Report, CliError> {
    let tol = &config.tolerances;
    let poset = ContextPoset::build(&scenario.contexts, tol)?;

    let mut warnings = Vec::new();
    if scenario.dim == 2 {
        warnings.push("dimension 2: Kochen-Specker obstructions need dimension 3 or more".to_string());
    }
    if poset.is_empty() {
        warnings.push("no context seeds: the poset is empty".to_string());
    }

    let mut report = Report {
        command: command.name().to_string(),
        dim: scenario.dim,
        tolerances: ToleranceReport {
            herm: tol.herm,
            proj: tol.proj,
            psd: tol.psd,
            cluster: tol.cluster,
            recon: tol.recon,
            norm: tol.norm,
        },
        poset: poset_report(&poset),
        daseinisation: Vec::new(),
        quantity: None,
        truth: Vec::new(),
        ks: None,
        comparisons: Vec::new(),
        warnings,
    };

    match command {
        Command::Contexts => {}
        Command::Daseinise { operator } => {
            let table = tq_core::daseinisation::daseinise(&poset, scenario.operator(operator)?)?;
            let contexts = poset
                .ids()
                .map(|v| DaseinisationRow { context: v.0, inner: table.inner[v.0].clone(), outer: table.outer[v.0].clone() })
                .collect();
            report.daseinisation.push(DaseinisationReport { operator: operator.clone(), spectrum: table.spectrum, contexts });
        }
        Command::Quantity { operator, point } => {
            let p = parse_point(&poset, point)?;
            let arrow = QuantityArrow::new(&poset, scenario.operator(operator)?)?;
            let pair = arrow.pair(p)?;
            let mut rows = Vec::new();
            for &sub in poset.down_set(p.context) {
                let q = tq_core::presheaf::restrict_point(&poset, p, sub)?;
                rows.push(PairRow { context: sub.0, atom: q.atom, mu: pair.mu[&sub], nu: pair.nu[&sub] });
            }
            let mut natural = true;
            for (sub, sup) in poset.order_pairs() {
                natural &= arrow.is_natural(sup, sub)?;
            }
            report.quantity =
                Some(QuantityReport { operator: operator.clone(), context: p.context.0, atom: p.atom, pair: rows, natural });
        }
        Command::Truth { state, proposition } => {
            let queries: Vec<(String, String)> = match (state, proposition) {
                (Some(s), Some(p)) => vec![(s.clone(), p.clone())],
                _ => scenario.queries.iter().map(|q| (q.state.clone(), q.proposition.clone())).collect(),
            };
            if queries.is_empty() {
                return Err(CliError::Validation("no queries: pass <state> <proposition> or list queries".into()));
            }
            for (s, p) in &queries {
                report.truth.push(truth_report(scenario, &poset, s, p)?);
            }
        }
        Command::Ks => {
            let outcome = find_global_section(&poset, config.leaf_budget)?;
            let leaves = outcome.leaves();
            let (verdict, section) = match outcome {
                SearchOutcome::Found { section, .. } => (KsVerdict::Found, Some(section.atoms().to_vec())),
                SearchOutcome::None { .. } => (KsVerdict::None, None),
                SearchOutcome::Inconclusive { .. } => (KsVerdict::Inconclusive, None),
            };
            report.ks = Some(KsReport {
                exhaustive: verdict != KsVerdict::Inconclusive,
                verdict,
                leaves,
                leaf_budget: config.leaf_budget,
                section,
            });
        }
        Command::Compare { proposition } => {
            let prop = scenario.proposition(proposition)?;
            let a = scenario.operator(&prop.operator)?;
            let cmp = compare_propositions(&poset, a, &window(prop.lower, prop.upper)?)?;
            let as_lists = |s: &tq_core::ClopenSubobject| s.components().iter().map(|&c| atoms(c)).collect();
            let disagreements: BTreeSet<usize> = cmp.disagreements.iter().map(|v| v.0).collect();
            report.comparisons.push(ComparisonReport {
                proposition: proposition.clone(),
                operator: prop.operator.clone(),
                window: [prop.lower, prop.upper],
                pullback: as_lists(&cmp.pullback),
                daseinised: as_lists(&cmp.daseinised),
                disagreements: disagreements.into_iter().collect(),
            });
        }
    }
    Ok(report)
}
