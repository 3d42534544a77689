//! Structured report emitted by every subcommand, and its text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceReport {
    pub herm: f64,
    pub proj: f64,
    pub psd: f64,
    pub cluster: f64,
    pub recon: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub rank: usize,
    /// Row-major entries as `[re, im]`.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextReport {
    pub id: usize,
    pub atoms: Vec<AtomReport>,
    /// Ids of the contexts strictly below this one.
    pub below: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosetReport {
    pub contexts: Vec<ContextReport>,
    /// Strict order relations as `[sub, sup]`.
    pub edges: Vec<[usize; 2]>,
    pub maximal: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaseinisationRow {
    pub context: usize,
    /// Value of the inner daseinisation on each atom.
    pub inner: Vec<f64>,
    /// Value of the outer daseinisation on each atom.
    pub outer: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaseinisationReport {
    pub operator: String,
    pub spectrum: Vec<f64>,
    pub contexts: Vec<DaseinisationRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub context: usize,
    /// The point restricted to this context.
    pub atom: usize,
    pub mu: f64,
    pub nu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityReport {
    pub operator: String,
    pub context: usize,
    pub atom: usize,
    pub pair: Vec<PairRow>,
    /// Naturality holds on every order edge of the poset.
    pub natural: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub context: usize,
    pub sieve: Vec<usize>,
    /// `|sieve| / |down set|`, for reading only.
    pub degree: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    TotallyTrue,
    TotallyFalse,
    Intermediate,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::TotallyTrue => "totally true",
            Verdict::TotallyFalse => "totally false",
            Verdict::Intermediate => "intermediate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthReport {
    pub state: String,
    pub proposition: String,
    pub route: String,
    /// Atoms of the proposition's clopen subobject, per context.
    pub proposition_atoms: Vec<Vec<usize>>,
    pub stages: Vec<StageReport>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KsVerdict {
    Found,
    None,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub verdict: KsVerdict,
    /// True when the whole search space was covered.
    pub exhaustive: bool,
    pub leaves: u64,
    pub leaf_budget: u64,
    /// Chosen atom per context when a section was found.
    pub section: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub proposition: String,
    pub operator: String,
    pub window: [f64; 2],
    pub pullback: Vec<Vec<usize>>,
    pub daseinised: Vec<Vec<usize>>,
    pub disagreements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub dim: usize,
    pub tolerances: ToleranceReport,
    pub poset: PosetReport,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub daseinisation: Vec<DaseinisationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<QuantityReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub truth: Vec<TruthReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comparisons: Vec<ComparisonReport>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "command: {}", self.command);
        for warning in &self.warnings {
            let _ = writeln!(w, "warning: {warning}");
        }
        let _ = writeln!(
            w,
            "poset: {} contexts, {} order edges, maximal {}",
            self.poset.contexts.len(),
            self.poset.edges.len(),
            ids(&self.poset.maximal)
        );
        if self.command == "contexts" {
            for c in &self.poset.contexts {
                let names: Vec<String> = c.atoms.iter().map(describe_atom).collect();
                let _ = writeln!(w, "  V{}: {{{}}}, below {}", c.id, names.join(", "), ids(&c.below));
            }
        }
        for d in &self.daseinisation {
            let _ = writeln!(w, "daseinisation of {} (spectrum {})", d.operator, floats(&d.spectrum));
            for row in &d.contexts {
                let _ = writeln!(w, "  V{}: inner {}  outer {}", row.context, floats(&row.inner), floats(&row.outer));
            }
        }
        if let Some(q) = &self.quantity {
            let _ = writeln!(w, "quantity {} at V{}:{} (natural: {})", q.operator, q.context, q.atom, q.natural);
            for row in &q.pair {
                let _ = writeln!(w, "  V{} atom {}: mu {} nu {}", row.context, row.atom, num(row.mu), num(row.nu));
            }
        }
        for t in &self.truth {
            let _ = writeln!(w, "truth of {} in {} ({} route): {}", t.proposition, t.state, t.route, t.verdict.label());
            for s in &t.stages {
                let _ = writeln!(w, "  V{}: sieve {} degree {:.3}", s.context, ids(&s.sieve), s.degree);
            }
        }
        if let Some(k) = &self.ks {
            let _ = writeln!(
                w,
                "global section: {:?} after {} leaves (budget {}, exhaustive: {})",
                k.verdict, k.leaves, k.leaf_budget, k.exhaustive
            );
            if let Some(section) = &k.section {
                let _ = writeln!(w, "  atoms {:?}", section);
            }
        }
        for c in &self.comparisons {
            let _ = writeln!(w, "compare {} ({} in [{}, {}])", c.proposition, c.operator, num(c.window[0]), num(c.window[1]));
            for (v, (p, d)) in c.pullback.iter().zip(&c.daseinised).enumerate() {
                let mark = if p == d { "" } else { "  differs" };
                let _ = writeln!(w, "  V{v}: pullback {p:?} daseinised {d:?}{mark}");
            }
        }
        out
    }
}

/// `E11+E33` for a diagonal 0/1 atom, `rank-k` otherwise.
fn describe_atom(a: &AtomReport) -> String {
    let close = |z: &[f64; 2], x: f64| (z[0] - x).abs() < 1e-9 && z[1].abs() < 1e-9;
    let mut support = Vec::new();
    for (i, row) in a.matrix.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if i == j && close(z, 1.0) {
                support.push(format!("E{0}{0}", i + 1));
            } else if !close(z, 0.0) {
                return format!("rank-{}", a.rank);
            }
        }
    }
    support.join("+")
}

fn ids(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|i| format!("V{i}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn num(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

fn floats(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}
