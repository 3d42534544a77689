//! The presheaf of order-preserving/-reversing pairs, the arrow it receives
//! from the spectral presheaf for each self-adjoint operator, and the two
//! ways of turning "A ∈ Δ" into a clopen subobject.

use std::collections::BTreeMap;

use crate::context::{ContextId, ContextPoset};
use crate::daseinisation::{outer_atoms, DaseinisationTable};
use crate::linalg::{hermitian_eig, Operator, Projection, Tolerances};
use crate::presheaf::{restrict_point, spectrum, AtomSet, ClopenSubobject, GelfandPoint};
use crate::{Error, Real, Result};

/// `(mu, nu)` over `down(base)`: `mu` order-preserving, `nu` order-reversing,
/// `mu <= nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderPair<T> {
    pub base: ContextId,
    pub mu: BTreeMap<ContextId, T>,
    pub nu: BTreeMap<ContextId, T>,
}

impl<T: Real> OrderPair<T> {
    /// Checks domain, monotonicity of both functions and `mu <= nu`.
    pub fn is_valid(&self, poset: &ContextPoset<T>, slack: T) -> bool {
        let down = poset.down_set(self.base);
        if self.mu.len() != down.len() || self.nu.len() != down.len() {
            return false;
        }
        down.iter().all(|&v| {
            let (Some(&mu_v), Some(&nu_v)) = (self.mu.get(&v), self.nu.get(&v)) else {
                return false;
            };
            mu_v <= nu_v + slack
                && poset.down_set(v).iter().all(|w| self.mu[w] <= mu_v + slack && self.nu[w] + slack >= nu_v)
        })
    }

    /// The interval `[mu(V'), nu(V')]`.
    pub fn interval(&self, v: ContextId) -> Option<(T, T)> {
        Some((*self.mu.get(&v)?, *self.nu.get(&v)?))
    }
}

/// Truncate the domain to `down(sub)`.
pub fn restrict_pair<T: Real>(poset: &ContextPoset<T>, pair: &OrderPair<T>, sub: ContextId) -> Result<OrderPair<T>> {
    poset.check(sub)?;
    if !poset.leq(sub, pair.base) {
        return Err(Error::NotASubcontext { sub, sup: pair.base });
    }
    let keep = |m: &BTreeMap<ContextId, T>| m.iter().filter(|(v, _)| poset.leq(**v, sub)).map(|(&v, &x)| (v, x)).collect();
    Ok(OrderPair { base: sub, mu: keep(&pair.mu), nu: keep(&pair.nu) })
}

/// Closed interval `[lower, upper]`, used both as `Δ` and as the constant
/// window defining a subobject of the value presheaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalWindow<T> {
    lower: T,
    upper: T,
}

impl<T: Real> IntervalWindow<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if lower.partial_cmp(&upper).is_none_or(|o| o.is_gt()) {
            return Err(Error::EmptyWindow { lower: lower.to_f64_lossy(), upper: upper.to_f64_lossy() });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn contains(&self, x: T, slack: T) -> bool {
        self.lower <= x + slack && x <= self.upper + slack
    }

    /// Membership of a pair in the window subobject at its base:
    /// `lower <= mu(V')` and `nu(V') <= upper` for all `V' <= base`.
    pub fn admits(&self, pair: &OrderPair<T>, slack: T) -> bool {
        pair.mu.values().all(|&m| self.lower <= m + slack) && pair.nu.values().all(|&n| n <= self.upper + slack)
    }
}

pub fn interval_subobject<T: Real>(lower: T, upper: T) -> Result<IntervalWindow<T>> {
    IntervalWindow::new(lower, upper)
}

fn value_slack<T: Real>(tol: &Tolerances, scale: T) -> T {
    T::of(tol.cluster) * (T::one() + scale.abs())
}

/// The natural transformation from the spectral presheaf to the value
/// presheaf induced by a self-adjoint operator.
pub struct QuantityArrow<'a, T> {
    poset: &'a ContextPoset<T>,
    table: DaseinisationTable<T>,
}

impl<'a, T: Real> QuantityArrow<'a, T> {
    pub fn new(poset: &'a ContextPoset<T>, a: &Operator<T>) -> Result<Self> {
        Ok(Self { poset, table: DaseinisationTable::new(poset, a)? })
    }

    pub fn table(&self) -> &DaseinisationTable<T> {
        &self.table
    }

    pub fn slack(&self) -> T {
        let scale = self.table.spectrum.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        value_slack(self.poset.tolerances(), scale)
    }

    /// `mu(V') = lambda|V'(inner(A)_V')`, `nu(V') = lambda|V'(outer(A)_V')`.
    pub fn pair(&self, p: GelfandPoint) -> Result<OrderPair<T>> {
        let mut mu = BTreeMap::new();
        let mut nu = BTreeMap::new();
        for &sub in self.poset.down_set(p.context) {
            let q = restrict_point(self.poset, p, sub)?;
            mu.insert(sub, self.table.inner[sub.0][q.atom]);
            nu.insert(sub, self.table.outer[sub.0][q.atom]);
        }
        Ok(OrderPair { base: p.context, mu, nu })
    }

    /// Commuting square for `sub <= v`, checked on every point of `v`.
    pub fn is_natural(&self, v: ContextId, sub: ContextId) -> Result<bool> {
        for p in spectrum(self.poset, v)? {
            let down = restrict_pair(self.poset, &self.pair(p)?, sub)?;
            let across = self.pair(restrict_point(self.poset, p, sub)?)?;
            if down != across {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn quantity_pair<T: Real>(poset: &ContextPoset<T>, a: &Operator<T>, p: GelfandPoint) -> Result<OrderPair<T>> {
    QuantityArrow::new(poset, a)?.pair(p)
}

pub fn naturality_check<T: Real>(poset: &ContextPoset<T>, a: &Operator<T>, v: ContextId, sub: ContextId) -> Result<bool> {
    QuantityArrow::new(poset, a)?.is_natural(v, sub)
}

/// Pullback of a window subobject along the operator's arrow:
/// `S(V) = {lambda : pair(lambda) admitted by the window}`.
pub fn pullback_proposition<T: Real>(
    poset: &ContextPoset<T>,
    a: &Operator<T>,
    w: &IntervalWindow<T>,
) -> Result<ClopenSubobject> {
    let arrow = QuantityArrow::new(poset, a)?;
    let slack = arrow.slack();
    let mut components = Vec::with_capacity(poset.len());
    for v in poset.ids() {
        let mut set = AtomSet::empty();
        for p in spectrum(poset, v)? {
            if w.admits(&arrow.pair(p)?, slack) {
                set.insert(p.atom);
            }
        }
        components.push(set);
    }
    ClopenSubobject::new(poset, components)
}

/// `E[A ∈ Δ]`: sum of eigenprojections with eigenvalue in the window.
pub fn spectral_window_projection<T: Real>(a: &Operator<T>, w: &IntervalWindow<T>, tol: &Tolerances) -> Result<Projection<T>> {
    let spectral = hermitian_eig(a, tol)?;
    let scale = spectral.eigenvalues.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    let slack = value_slack(tol, scale);
    let selected = spectral
        .eigenvalues
        .iter()
        .zip(&spectral.projections)
        .filter(|(&l, _)| w.contains(l, slack))
        .map(|(_, p)| p);
    Ok(Projection::orthogonal_sum(a.dim(), selected))
}

/// `S(V)` = clopen set of the outer daseinisation of `E[A ∈ Δ]` to `V`.
pub fn daseinised_proposition<T: Real>(
    poset: &ContextPoset<T>,
    a: &Operator<T>,
    w: &IntervalWindow<T>,
) -> Result<ClopenSubobject> {
    let e = spectral_window_projection(a, w, poset.tolerances())?;
    projection_subobject(poset, &e)
}

/// The subobject `V -> S_{outer(P)_V}` of an arbitrary projection.
pub fn projection_subobject<T: Real>(poset: &ContextPoset<T>, p: &Projection<T>) -> Result<ClopenSubobject> {
    let components = poset
        .contexts()
        .iter()
        .map(|v| outer_atoms(p, v, poset.tolerances()))
        .collect::<Result<Vec<_>>>()?;
    ClopenSubobject::new(poset, components)
}

/// Restriction maps the component at `V` onto (not merely into) the
/// component at every `V' <= V`.
pub fn is_optimal<T: Real>(poset: &ContextPoset<T>, s: &ClopenSubobject) -> bool {
    poset.ids().all(|v| {
        poset.down_set(v).iter().all(|&sub| {
            poset.restrict_set(s.components()[v.0], v, sub).map(|img| img == s.components()[sub.0]).unwrap_or(false)
        })
    })
}

/// Per-context outcome of the two proposition constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionComparison {
    pub pullback: ClopenSubobject,
    pub daseinised: ClopenSubobject,
    pub disagreements: Vec<ContextId>,
}

impl PropositionComparison {
    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

pub fn compare_propositions<T: Real>(
    poset: &ContextPoset<T>,
    a: &Operator<T>,
    w: &IntervalWindow<T>,
) -> Result<PropositionComparison> {
    let pullback = pullback_proposition(poset, a, w)?;
    let daseinised = daseinised_proposition(poset, a, w)?;
    let disagreements = poset
        .ids()
        .filter(|v| pullback.components()[v.0] != daseinised.components()[v.0])
        .collect();
    Ok(PropositionComparison { pullback, daseinised, disagreements })
}
