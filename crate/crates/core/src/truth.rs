//! Truth objects of pure states and sieve-valued truth values of
//! propositions.

use std::collections::BTreeSet;

use crate::context::{ContextId, ContextPoset};
use crate::daseinisation::outer_atoms;
use crate::linalg::{expectation, is_positive_semidefinite, Projection, StateVector, Tolerances};
use crate::presheaf::{AtomSet, ClopenSubobject, ClopenSubset, OmegaElement, Sieve};
use crate::{Error, Real, Result};

/// `T^psi`, stored as the per-context threshold `outer(P_psi)_V`. A clopen
/// set `S` of `V` is a member iff it contains the threshold's atoms.
#[derive(Debug, Clone)]
pub struct TruthObject<'a, T> {
    poset: &'a ContextPoset<T>,
    psi: StateVector<T>,
    thresholds: Vec<AtomSet>,
}

impl<'a, T: Real> TruthObject<'a, T> {
    pub fn new(psi: &StateVector<T>, poset: &'a ContextPoset<T>) -> Result<Self> {
        let tol = poset.tolerances();
        let psi = StateVector::new(psi.amplitudes().to_vec(), tol)?;
        if let Some(dim) = poset.dim() {
            if dim != psi.dim() {
                return Err(Error::DimensionMismatch { expected: dim, found: psi.dim() });
            }
        }
        let ray = psi.projector();
        let thresholds = poset
            .contexts()
            .iter()
            .map(|v| outer_atoms(&ray, v, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { poset, psi, thresholds })
    }

    pub fn poset(&self) -> &'a ContextPoset<T> {
        self.poset
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.psi
    }

    pub fn threshold_atoms(&self, v: ContextId) -> Result<AtomSet> {
        self.thresholds.get(v.0).copied().ok_or(Error::UnknownContext(v))
    }

    /// `outer(P_psi)_V`.
    pub fn threshold(&self, v: ContextId) -> Result<Projection<T>> {
        Ok(self.poset.context(v)?.projection_of(self.threshold_atoms(v)?))
    }

    /// `S ∈ T^psi_V`.
    pub fn member(&self, s: &ClopenSubset) -> Result<bool> {
        Ok(self.threshold_atoms(s.context)?.is_subset(s.atoms))
    }

    /// The four equivalent membership tests: `<psi|P_S|psi> = 1`,
    /// `P_S >= P_psi`, `P_S >= outer(P_psi)_V`, `S ⊇ S_outer(P_psi)_V`.
    pub fn member_characterisations(&self, s: &ClopenSubset) -> Result<[bool; 4]> {
        let tol = self.poset.tolerances();
        let ps = s.projection(self.poset)?;
        let by_expectation = expectation(&self.psi, ps.operator(), tol)? >= T::one() - T::of(tol.norm);
        let by_ray = is_positive_semidefinite(&ps.difference(self.psi.projector().operator()), tol);
        let by_threshold = is_positive_semidefinite(&ps.difference(self.threshold(s.context)?.operator()), tol);
        Ok([by_expectation, by_ray, by_threshold, self.member(s)?])
    }

    /// Every member of `T^psi_V` (all supersets of the threshold).
    pub fn members_at(&self, v: ContextId) -> Result<Vec<AtomSet>> {
        let len = self.poset.context(v)?.len();
        let threshold = self.threshold_atoms(v)?;
        Ok(AtomSet::all_subsets(len).filter(|s| threshold.is_subset(*s)).collect())
    }
}

pub fn truth_object<'a, T: Real>(psi: &StateVector<T>, poset: &'a ContextPoset<T>) -> Result<TruthObject<'a, T>> {
    TruthObject::new(psi, poset)
}

pub fn member<T: Real>(t: &TruthObject<'_, T>, s: &ClopenSubset) -> Result<bool> {
    t.member(s)
}

/// Outcome of checking the filter `{P : P >= P_psi}` on a finite family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterReport {
    /// Indices of family members lying in the filter.
    pub members: Vec<usize>,
    pub non_members: Vec<usize>,
    /// Every family projection above a member is a member.
    pub upward_closed: bool,
    /// Products of commuting members are members.
    pub meet_closed: bool,
    /// The zero projection is never a member.
    pub proper: bool,
    /// Per context: `T^psi_V` equals the filter intersected with `P(V)`.
    pub context_agreement: Option<bool>,
}

impl FilterReport {
    pub fn holds(&self) -> bool {
        self.upward_closed && self.meet_closed && self.proper && self.context_agreement.unwrap_or(true)
    }
}

fn in_filter<T: Real>(p: &Projection<T>, ray: &Projection<T>, tol: &Tolerances) -> bool {
    is_positive_semidefinite(&p.difference(ray.operator()), tol)
}

pub fn bvn_filter_check<T: Real>(
    psi: &StateVector<T>,
    projections: &[Projection<T>],
    poset: Option<&ContextPoset<T>>,
    tol: &Tolerances,
) -> Result<FilterReport> {
    let psi = StateVector::new(psi.amplitudes().to_vec(), tol)?;
    if let Some(bad) = projections.iter().find(|p| p.dim() != psi.dim()) {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: bad.dim() });
    }
    let ray = psi.projector();
    let flags: Vec<bool> = projections.iter().map(|p| in_filter(p, &ray, tol)).collect();
    let (members, non_members): (Vec<usize>, Vec<usize>) = (0..projections.len()).partition(|&i| flags[i]);

    let upward_closed = members.iter().all(|&i| {
        projections
            .iter()
            .enumerate()
            .all(|(j, q)| flags[j] || !projections[i].is_below(q, tol))
    });
    let eps = T::of(tol.proj);
    let meet_closed = members.iter().all(|&i| {
        members.iter().all(|&j| {
            let (p, q) = (&projections[i], &projections[j]);
            if p.commutator(q).max_abs() > eps {
                return true;
            }
            in_filter(&Projection::from_hermitian(p.matrix() * q.matrix()), &ray, tol)
        })
    });
    let proper = !in_filter(&Projection::zero(psi.dim()), &ray, tol);

    let context_agreement = match poset {
        None => None,
        Some(poset) => {
            let t = TruthObject::new(&psi, poset)?;
            let mut agree = true;
            for v in poset.ids() {
                let c = poset.context(v)?;
                for atoms in AtomSet::all_subsets(c.len()) {
                    let set = ClopenSubset { context: v, atoms };
                    agree &= t.member(&set)? == in_filter(&c.projection_of(atoms), &ray, tol);
                }
            }
            Some(agree)
        }
    };

    Ok(FilterReport { members, non_members, upward_closed, meet_closed, proper, context_agreement })
}

/// `v(S ∈ T^psi)_V = {V' <= V : S(V') ∈ T^psi_V'}` at every stage.
///
/// The result is checked to be a sieve at each stage and a compatible
/// family; inputs that break the subobject condition can fail this and
/// yield [`Error::NotASieve`].
pub fn valuate<T: Real>(s: &ClopenSubobject, t: &TruthObject<'_, T>) -> Result<OmegaElement> {
    let poset = t.poset();
    if s.poset_fingerprint() != poset.fingerprint() || s.components().len() != poset.len() {
        return Err(Error::PosetMismatch);
    }
    let accepted: Vec<bool> = poset.ids().map(|v| t.member(&s.at(v))).collect::<Result<_>>()?;
    let sieves: Vec<Sieve> = poset
        .ids()
        .map(|v| Sieve {
            base: v,
            members: poset.down_set(v).iter().copied().filter(|w| accepted[w.0]).collect::<BTreeSet<_>>(),
        })
        .collect();
    for s in &sieves {
        if !s.is_valid(poset) {
            return Err(Error::NotASieve(s.base));
        }
    }
    OmegaElement::new(poset, sieves)
}

/// `(totally true, totally false)`.
pub fn truth_constants<T: Real>(poset: &ContextPoset<T>) -> Result<(OmegaElement, OmegaElement)> {
    if poset.is_empty() {
        return Err(Error::EmptyPoset);
    }
    Ok((OmegaElement::totally_true(poset), OmegaElement::totally_false(poset)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TruthOrdering {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Stage-wise sieve inclusion.
pub fn compare_truth_values(v1: &OmegaElement, v2: &OmegaElement) -> Result<TruthOrdering> {
    if v1.poset_fingerprint() != v2.poset_fingerprint() || v1.sieves().len() != v2.sieves().len() {
        return Err(Error::PosetMismatch);
    }
    let pairs = || v1.sieves().iter().zip(v2.sieves());
    let below = pairs().all(|(a, b)| a.members.is_subset(&b.members));
    let above = pairs().all(|(a, b)| b.members.is_subset(&a.members));
    Ok(match (below, above) {
        (true, true) => TruthOrdering::Equal,
        (true, false) => TruthOrdering::Less,
        (false, true) => TruthOrdering::Greater,
        (false, false) => TruthOrdering::Incomparable,
    })
}
