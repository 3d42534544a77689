//! The spectral presheaf over a context poset, its clopen subobjects, sieves
//! and global elements of the subobject classifier.
//!
//! In finite dimensions the Gel'fand spectrum of a context is its set of
//! atoms: the character at atom `q` sends `A = sum_i a_i q_i` to `a_q`.
//! Restriction to a coarser context sends an atom to the block containing it.

use std::collections::BTreeSet;
use std::fmt;

use crate::context::{ContextId, ContextPoset};
use crate::heyting::{HeytingAlgebra, HeytingOp};
use crate::linalg::{Operator, Projection};
use crate::{Error, Real, Result};

/// Subset of the atoms of one context, as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AtomSet(u64);

impl AtomSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub fn full(len: usize) -> Self {
        if len >= 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << len) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Self(1 << i)
    }

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Every subset of `{0, .., len-1}`.
    pub fn all_subsets(len: usize) -> impl Iterator<Item = AtomSet> {
        (0..(1u64 << len)).map(AtomSet)
    }
}

impl FromIterator<usize> for AtomSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = AtomSet::empty();
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A pure state of a context: the character attached to one atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GelfandPoint {
    pub context: ContextId,
    pub atom: usize,
}

impl fmt::Display for GelfandPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.context, self.atom)
    }
}

pub fn spectrum<T: Real>(poset: &ContextPoset<T>, v: ContextId) -> Result<Vec<GelfandPoint>> {
    let context = poset.context(v)?;
    Ok((0..context.len()).map(|atom| GelfandPoint { context: v, atom }).collect())
}

fn check_point<T: Real>(poset: &ContextPoset<T>, p: GelfandPoint) -> Result<()> {
    let len = poset.context(p.context)?.len();
    if p.atom >= len {
        return Err(Error::AtomOutOfRange { context: p.context, index: p.atom });
    }
    Ok(())
}

/// `lambda -> lambda|_{V'}`.
pub fn restrict_point<T: Real>(poset: &ContextPoset<T>, p: GelfandPoint, sub: ContextId) -> Result<GelfandPoint> {
    check_point(poset, p)?;
    let map = poset.restriction_map(sub, p.context)?;
    Ok(GelfandPoint { context: sub, atom: map[p.atom] })
}

/// Gel'fand transform: the eigenvalue of `a` on the point's atom.
pub fn evaluate<T: Real>(poset: &ContextPoset<T>, p: GelfandPoint, a: &Operator<T>) -> Result<T> {
    check_point(poset, p)?;
    let context = poset.context(p.context)?;
    let values = context
        .algebra_values(a, poset.tolerances())
        .ok_or(Error::NotInAlgebra(p.context))?;
    Ok(values[p.atom])
}

/// A clopen subset of one context's spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClopenSubset {
    pub context: ContextId,
    pub atoms: AtomSet,
}

impl ClopenSubset {
    /// `P_S`: the sum of the atoms in the subset.
    pub fn projection<T: Real>(&self, poset: &ContextPoset<T>) -> Result<Projection<T>> {
        let context = poset.context(self.context)?;
        if !self.atoms.is_subset(context.all_atoms()) {
            return Err(Error::AtomOutOfRange { context: self.context, index: context.len() });
        }
        Ok(context.projection_of(self.atoms))
    }

    /// `S_P`: the atoms supporting a projection of the context's algebra.
    pub fn from_projection<T: Real>(poset: &ContextPoset<T>, v: ContextId, p: &Projection<T>) -> Result<Self> {
        let atoms = poset
            .context(v)?
            .atom_set_of(p, poset.tolerances())
            .ok_or(Error::NotInAlgebra(v))?;
        Ok(Self { context: v, atoms })
    }
}

/// Subfunctor test: every point of `S(V)` restricts into `S(V')`.
pub fn is_subobject<T: Real>(family: &[AtomSet], poset: &ContextPoset<T>) -> bool {
    first_subobject_violation(family, poset).is_none()
}

fn first_subobject_violation<T: Real>(family: &[AtomSet], poset: &ContextPoset<T>) -> Option<(ContextId, ContextId)> {
    if family.len() != poset.len() {
        return Some((ContextId(family.len()), ContextId(family.len())));
    }
    for sup in poset.ids() {
        for &sub in poset.down_set(sup) {
            let image = poset.restrict_set(family[sup.0], sup, sub).ok()?;
            if !image.is_subset(family[sub.0]) {
                return Some((sup, sub));
            }
        }
    }
    None
}

/// A clopen subobject of the spectral presheaf: one atom set per context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClopenSubobject {
    poset: u64,
    components: Vec<AtomSet>,
}

impl ClopenSubobject {
    pub fn new<T: Real>(poset: &ContextPoset<T>, components: Vec<AtomSet>) -> Result<Self> {
        if let Some((sup, sub)) = first_subobject_violation(&components, poset) {
            return Err(Error::NotASubobject { sup, sub });
        }
        Ok(Self { poset: poset.fingerprint(), components })
    }

    /// Wraps a family without the subfunctor check. Consumers that rely on
    /// the condition (e.g. truth valuation) re-verify what they need.
    pub fn from_family_unchecked<T: Real>(poset: &ContextPoset<T>, components: Vec<AtomSet>) -> Self {
        Self { poset: poset.fingerprint(), components }
    }

    pub fn top<T: Real>(poset: &ContextPoset<T>) -> Self {
        let components = poset.contexts().iter().map(|c| c.all_atoms()).collect();
        Self { poset: poset.fingerprint(), components }
    }

    pub fn bottom<T: Real>(poset: &ContextPoset<T>) -> Self {
        Self { poset: poset.fingerprint(), components: vec![AtomSet::empty(); poset.len()] }
    }

    pub fn components(&self) -> &[AtomSet] {
        &self.components
    }

    pub fn at(&self, v: ContextId) -> ClopenSubset {
        ClopenSubset { context: v, atoms: self.components[v.0] }
    }

    pub fn poset_fingerprint(&self) -> u64 {
        self.poset
    }

    pub fn is_subobject_of(&self, other: &Self) -> bool {
        self.components.iter().zip(&other.components).all(|(a, b)| a.is_subset(*b))
    }
}

/// A downward closed set of subcontexts of `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sieve {
    pub base: ContextId,
    pub members: BTreeSet<ContextId>,
}

impl Sieve {
    pub fn new<T: Real>(poset: &ContextPoset<T>, base: ContextId, members: BTreeSet<ContextId>) -> Result<Self> {
        let sieve = Self { base, members };
        if !sieve.is_valid(poset) {
            return Err(Error::NotASieve(base));
        }
        Ok(sieve)
    }

    pub fn maximal<T: Real>(poset: &ContextPoset<T>, base: ContextId) -> Self {
        Self { base, members: poset.down_set(base).iter().copied().collect() }
    }

    pub fn empty(base: ContextId) -> Self {
        Self { base, members: BTreeSet::new() }
    }

    pub fn contains(&self, v: ContextId) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_maximal<T: Real>(&self, poset: &ContextPoset<T>) -> bool {
        self.members.len() == poset.down_set(self.base).len()
    }

    /// Members lie below the base and the set is downward closed.
    pub fn is_valid<T: Real>(&self, poset: &ContextPoset<T>) -> bool {
        if poset.check(self.base).is_err() {
            return false;
        }
        self.members.iter().all(|&m| {
            poset.leq(m, self.base) && poset.down_set(m).iter().all(|d| self.members.contains(d))
        })
    }

    /// `|sieve| / |down(base)|`, for display only.
    pub fn degree<T: Real>(&self, poset: &ContextPoset<T>) -> f64 {
        self.members.len() as f64 / poset.down_set(self.base).len() as f64
    }
}

/// Pullback along `V' <= V`: `sieve ∩ down(V')`.
pub fn pullback_sieve<T: Real>(poset: &ContextPoset<T>, s: &Sieve, sub: ContextId) -> Result<Sieve> {
    poset.check(sub)?;
    poset.check(s.base)?;
    if !poset.leq(sub, s.base) {
        return Err(Error::NotASubcontext { sub, sup: s.base });
    }
    let members = s.members.iter().copied().filter(|&m| poset.leq(m, sub)).collect();
    Ok(Sieve { base: sub, members })
}

/// Global element of the subobject classifier: a compatible family of
/// sieves, one per context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaElement {
    poset: u64,
    sieves: Vec<Sieve>,
}

impl OmegaElement {
    pub fn new<T: Real>(poset: &ContextPoset<T>, sieves: Vec<Sieve>) -> Result<Self> {
        if sieves.len() != poset.len() {
            return Err(Error::PosetMismatch);
        }
        for (v, s) in poset.ids().zip(&sieves) {
            if s.base != v || !s.is_valid(poset) {
                return Err(Error::NotASieve(v));
            }
        }
        let element = Self { poset: poset.fingerprint(), sieves };
        if let Some((sup, sub)) = element.first_incompatibility(poset) {
            return Err(Error::IncompatibleSieves { sup, sub });
        }
        Ok(element)
    }

    /// The element whose sieve at `V` is `down ∩ down(V)`; `down` must be
    /// downward closed in the poset.
    pub fn from_down_set<T: Real>(poset: &ContextPoset<T>, down: &BTreeSet<ContextId>) -> Result<Self> {
        let sieves = poset
            .ids()
            .map(|v| Sieve {
                base: v,
                members: poset.down_set(v).iter().copied().filter(|m| down.contains(m)).collect(),
            })
            .collect();
        Self::new(poset, sieves)
    }

    pub fn totally_true<T: Real>(poset: &ContextPoset<T>) -> Self {
        Self { poset: poset.fingerprint(), sieves: poset.ids().map(|v| Sieve::maximal(poset, v)).collect() }
    }

    pub fn totally_false<T: Real>(poset: &ContextPoset<T>) -> Self {
        Self { poset: poset.fingerprint(), sieves: poset.ids().map(Sieve::empty).collect() }
    }

    pub fn sieves(&self) -> &[Sieve] {
        &self.sieves
    }

    pub fn sieve(&self, v: ContextId) -> &Sieve {
        &self.sieves[v.0]
    }

    pub fn poset_fingerprint(&self) -> u64 {
        self.poset
    }

    /// `sieve(V') = sieve(V) ∩ down(V')` for every `V' <= V`.
    pub fn is_compatible<T: Real>(&self, poset: &ContextPoset<T>) -> bool {
        self.first_incompatibility(poset).is_none()
    }

    fn first_incompatibility<T: Real>(&self, poset: &ContextPoset<T>) -> Option<(ContextId, ContextId)> {
        for sup in poset.ids() {
            for &sub in poset.down_set(sup) {
                let pulled = pullback_sieve(poset, &self.sieves[sup.0], sub).ok()?;
                if pulled != self.sieves[sub.0] {
                    return Some((sup, sub));
                }
            }
        }
        None
    }
}

/// Heyting algebra of sieves on one base context.
pub struct SieveLattice<'a, T> {
    poset: &'a ContextPoset<T>,
    base: ContextId,
}

impl<'a, T: Real> SieveLattice<'a, T> {
    pub fn new(poset: &'a ContextPoset<T>, base: ContextId) -> Result<Self> {
        poset.check(base)?;
        Ok(Self { poset, base })
    }

    /// Every sieve on the base (downward closed subsets of `down(base)`).
    /// Exponential in `|down(base)|`; meant for small posets.
    pub fn all_sieves(&self) -> Vec<Sieve> {
        let down = self.poset.down_set(self.base);
        assert!(down.len() < 32, "too many subcontexts to enumerate sieves");
        (0..(1u64 << down.len()))
            .map(|mask| Sieve {
                base: self.base,
                members: down.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect(),
            })
            .filter(|s| s.is_valid(self.poset))
            .collect()
    }
}

impl<T: Real> HeytingAlgebra for SieveLattice<'_, T> {
    type Elem = Sieve;

    fn top(&self) -> Sieve {
        Sieve::maximal(self.poset, self.base)
    }

    fn bottom(&self) -> Sieve {
        Sieve::empty(self.base)
    }

    fn meet(&self, a: &Sieve, b: &Sieve) -> Sieve {
        Sieve { base: self.base, members: a.members.intersection(&b.members).copied().collect() }
    }

    fn join(&self, a: &Sieve, b: &Sieve) -> Sieve {
        Sieve { base: self.base, members: a.members.union(&b.members).copied().collect() }
    }

    /// `{V' <= base : down(V') ∩ a ⊆ b}`.
    fn implies(&self, a: &Sieve, b: &Sieve) -> Sieve {
        let members = self
            .poset
            .down_set(self.base)
            .iter()
            .copied()
            .filter(|&v| {
                self.poset.down_set(v).iter().all(|w| !a.members.contains(w) || b.members.contains(w))
            })
            .collect();
        Sieve { base: self.base, members }
    }

    fn leq(&self, a: &Sieve, b: &Sieve) -> bool {
        a.members.is_subset(&b.members)
    }
}

pub fn heyting_on_sieves<T: Real>(poset: &ContextPoset<T>, op: HeytingOp, a: &Sieve, b: &Sieve) -> Result<Sieve> {
    if op != HeytingOp::Not && a.base != b.base {
        return Err(Error::BaseMismatch(a.base, b.base));
    }
    let lattice = SieveLattice::new(poset, a.base)?;
    Ok(op.apply(&lattice, a, b))
}

/// Heyting algebra of clopen subobjects of the spectral presheaf.
pub struct SubobjectLattice<'a, T> {
    poset: &'a ContextPoset<T>,
}

impl<'a, T: Real> SubobjectLattice<'a, T> {
    pub fn new(poset: &'a ContextPoset<T>) -> Self {
        Self { poset }
    }
}

impl<T: Real> HeytingAlgebra for SubobjectLattice<'_, T> {
    type Elem = ClopenSubobject;

    fn top(&self) -> ClopenSubobject {
        ClopenSubobject::top(self.poset)
    }

    fn bottom(&self) -> ClopenSubobject {
        ClopenSubobject::bottom(self.poset)
    }

    fn meet(&self, a: &ClopenSubobject, b: &ClopenSubobject) -> ClopenSubobject {
        let components = a.components.iter().zip(&b.components).map(|(x, y)| x.intersection(*y)).collect();
        ClopenSubobject { poset: a.poset, components }
    }

    fn join(&self, a: &ClopenSubobject, b: &ClopenSubobject) -> ClopenSubobject {
        let components = a.components.iter().zip(&b.components).map(|(x, y)| x.union(*y)).collect();
        ClopenSubobject { poset: a.poset, components }
    }

    /// Stage-wise: `lambda ∈ (a => b)(V)` iff for all `V' <= V`,
    /// `lambda|V' ∈ a(V')` implies `lambda|V' ∈ b(V')`.
    fn implies(&self, a: &ClopenSubobject, b: &ClopenSubobject) -> ClopenSubobject {
        let poset = self.poset;
        let components = poset
            .ids()
            .map(|v| {
                let len = poset.contexts()[v.0].len();
                (0..len)
                    .filter(|&atom| {
                        poset.down_set(v).iter().all(|&sub| {
                            let map = poset.restriction_map(sub, v).expect("sub in down set");
                            let image = map[atom];
                            !a.components[sub.0].contains(image) || b.components[sub.0].contains(image)
                        })
                    })
                    .collect()
            })
            .collect();
        ClopenSubobject { poset: a.poset, components }
    }

    fn leq(&self, a: &ClopenSubobject, b: &ClopenSubobject) -> bool {
        a.is_subobject_of(b)
    }
}

pub fn heyting_on_subobjects<T: Real>(
    poset: &ContextPoset<T>,
    op: HeytingOp,
    a: &ClopenSubobject,
    b: &ClopenSubobject,
) -> Result<ClopenSubobject> {
    let fp = poset.fingerprint();
    if a.poset != fp || b.poset != fp || a.components.len() != poset.len() || b.components.len() != poset.len() {
        return Err(Error::PosetMismatch);
    }
    Ok(op.apply(&SubobjectLattice::new(poset), a, b))
}

/// Heyting algebra of global elements of the subobject classifier.
pub struct OmegaLattice<'a, T> {
    poset: &'a ContextPoset<T>,
}

impl<'a, T: Real> OmegaLattice<'a, T> {
    pub fn new(poset: &'a ContextPoset<T>) -> Self {
        Self { poset }
    }

    /// Every global element; these correspond to downward closed subsets of
    /// the whole poset. Exponential; meant for small posets.
    pub fn all_elements(&self) -> Vec<OmegaElement> {
        let n = self.poset.len();
        assert!(n < 32, "poset too large to enumerate global elements");
        (0..(1u64 << n))
            .filter_map(|mask| {
                let set: BTreeSet<ContextId> =
                    self.poset.ids().filter(|v| mask & (1 << v.0) != 0).collect();
                let closed = set.iter().all(|&v| self.poset.down_set(v).iter().all(|d| set.contains(d)));
                closed.then(|| OmegaElement::from_down_set(self.poset, &set).expect("down-closed"))
            })
            .collect()
    }

    fn stagewise(&self, a: &OmegaElement, b: &OmegaElement, op: HeytingOp) -> OmegaElement {
        let sieves = self
            .poset
            .ids()
            .map(|v| {
                let lattice = SieveLattice { poset: self.poset, base: v };
                op.apply(&lattice, a.sieve(v), b.sieve(v))
            })
            .collect();
        OmegaElement { poset: a.poset, sieves }
    }
}

impl<T: Real> HeytingAlgebra for OmegaLattice<'_, T> {
    type Elem = OmegaElement;

    fn top(&self) -> OmegaElement {
        OmegaElement::totally_true(self.poset)
    }

    fn bottom(&self) -> OmegaElement {
        OmegaElement::totally_false(self.poset)
    }

    fn meet(&self, a: &OmegaElement, b: &OmegaElement) -> OmegaElement {
        self.stagewise(a, b, HeytingOp::Meet)
    }

    fn join(&self, a: &OmegaElement, b: &OmegaElement) -> OmegaElement {
        self.stagewise(a, b, HeytingOp::Join)
    }

    fn implies(&self, a: &OmegaElement, b: &OmegaElement) -> OmegaElement {
        self.stagewise(a, b, HeytingOp::Implies)
    }

    fn leq(&self, a: &OmegaElement, b: &OmegaElement) -> bool {
        a.sieves.iter().zip(&b.sieves).all(|(x, y)| x.members.is_subset(&y.members))
    }
}

pub fn heyting_on_omega<T: Real>(
    poset: &ContextPoset<T>,
    op: HeytingOp,
    a: &OmegaElement,
    b: &OmegaElement,
) -> Result<OmegaElement> {
    let fp = poset.fingerprint();
    if a.poset != fp || b.poset != fp || a.sieves.len() != poset.len() || b.sieves.len() != poset.len() {
        return Err(Error::PosetMismatch);
    }
    Ok(op.apply(&OmegaLattice::new(poset), a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Context;
    use crate::linalg::Tolerances;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag_poset() -> ContextPoset<f64> {
        let v = Context::from_basis_partition(3, &[&[0], &[1], &[2]], &tol()).unwrap();
        ContextPoset::build(&[v], &tol()).unwrap()
    }

    fn id_of(poset: &ContextPoset<f64>, blocks: &[&[usize]]) -> ContextId {
        poset.id_of(&Context::from_basis_partition(3, blocks, &tol()).unwrap()).unwrap()
    }

    fn atom(poset: &ContextPoset<f64>, v: ContextId, basis: &[usize]) -> usize {
        poset.context(v).unwrap().atom_index(&Projection::basis(3, basis), &tol()).unwrap()
    }

    #[test]
    fn spectrum_and_evaluation() {
        let poset = diag_poset();
        let top = id_of(&poset, &[&[0], &[1], &[2]]);
        let points = spectrum(&poset, top).unwrap();
        assert_eq!(points.len(), 3);
        let e33 = GelfandPoint { context: top, atom: atom(&poset, top, &[2]) };
        assert_eq!(evaluate(&poset, e33, &Operator::diag(&[1.0, 2.0, 3.0])).unwrap(), 3.0);
        for p in &points {
            let own = poset.context(top).unwrap().atom(p.atom).operator().clone();
            assert!((evaluate(&poset, *p, &own).unwrap() - 1.0).abs() < 1e-12);
            for q in points.iter().filter(|q| q != &p) {
                let other = poset.context(top).unwrap().atom(q.atom).operator().clone();
                assert!(evaluate(&poset, *p, &other).unwrap().abs() < 1e-12);
            }
        }
        let coarse = id_of(&poset, &[&[0, 1], &[2]]);
        let block = GelfandPoint { context: coarse, atom: atom(&poset, coarse, &[0, 1]) };
        assert_eq!(evaluate(&poset, block, &Operator::diag(&[4.0, 4.0, 7.0])).unwrap(), 4.0);
        assert_eq!(
            evaluate(&poset, block, &Operator::diag(&[1.0, 2.0, 3.0])),
            Err(Error::NotInAlgebra(coarse))
        );
        assert_eq!(spectrum(&poset, ContextId(9)), Err(Error::UnknownContext(ContextId(9))));
    }

    #[test]
    fn evaluation_is_multiplicative() {
        let poset = diag_poset();
        let top = ContextId(0);
        let a = Operator::diag(&[1.5, -2.0, 3.0]);
        let b = Operator::diag(&[4.0, 0.5, -1.0]);
        let ab = Operator::from_hermitian(a.matrix() * b.matrix());
        for p in spectrum(&poset, top).unwrap() {
            let lhs = evaluate(&poset, p, &ab).unwrap();
            let rhs = evaluate(&poset, p, &a).unwrap() * evaluate(&poset, p, &b).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn restriction_of_points() {
        let poset = diag_poset();
        let top = ContextId(0);
        let coarse = id_of(&poset, &[&[0, 1], &[2]]);
        let p = GelfandPoint { context: top, atom: atom(&poset, top, &[1]) };
        assert_eq!(restrict_point(&poset, p, top).unwrap(), p);
        let r = restrict_point(&poset, p, coarse).unwrap();
        assert_eq!(r, GelfandPoint { context: coarse, atom: atom(&poset, coarse, &[0, 1]) });
        let other = id_of(&poset, &[&[0, 2], &[1]]);
        assert_eq!(
            restrict_point(&poset, r, other),
            Err(Error::NotASubcontext { sub: other, sup: coarse })
        );
    }

    #[test]
    fn clopen_projection_examples() {
        let poset = diag_poset();
        let top = ContextId(0);
        let empty = ClopenSubset { context: top, atoms: AtomSet::empty() };
        assert!(empty.projection(&poset).unwrap().is_zero(&tol()));
        let full = ClopenSubset { context: top, atoms: AtomSet::full(3) };
        assert!(full.projection(&poset).unwrap().approx_eq(&Projection::identity(3), &tol()));
        let s = ClopenSubset {
            context: top,
            atoms: [atom(&poset, top, &[0]), atom(&poset, top, &[2])].into_iter().collect(),
        };
        let p = s.projection(&poset).unwrap();
        assert!(p.approx_eq(&Projection::basis(3, &[0, 2]), &tol()));
        assert_eq!(ClopenSubset::from_projection(&poset, top, &p).unwrap(), s);
        let ray = Projection::ray(&[1.0, 1.0, 0.0].map(|x| num_complex::Complex::new(x, 0.0)));
        assert_eq!(ClopenSubset::from_projection(&poset, top, &ray), Err(Error::NotInAlgebra(top)));
    }

    #[test]
    fn subobject_condition() {
        let poset = diag_poset();
        let full: Vec<_> = poset.contexts().iter().map(|c| c.all_atoms()).collect();
        assert!(is_subobject(&full, &poset));
        assert!(is_subobject(&[AtomSet::empty(); 4], &poset));
        let coarse = id_of(&poset, &[&[0, 1], &[2]]);
        let mut family = vec![AtomSet::empty(); 4];
        family[0] = AtomSet::singleton(atom(&poset, ContextId(0), &[0]));
        assert!(!is_subobject(&family, &poset));
        family[coarse.0] = AtomSet::singleton(atom(&poset, coarse, &[0, 1]));
        assert!(!is_subobject(&family, &poset));
        for v in poset.ids().skip(1) {
            let image = poset.restrict_set(family[0], ContextId(0), v).unwrap();
            family[v.0] = image;
        }
        assert!(is_subobject(&family, &poset));
        assert!(ClopenSubobject::new(&poset, family).is_ok());
    }

    #[test]
    fn sieve_pullbacks() {
        let poset = diag_poset();
        let top = ContextId(0);
        let sub = ContextId(2);
        let max = Sieve::maximal(&poset, top);
        assert_eq!(pullback_sieve(&poset, &max, sub).unwrap(), Sieve::maximal(&poset, sub));
        assert_eq!(pullback_sieve(&poset, &Sieve::empty(top), sub).unwrap(), Sieve::empty(sub));
        let single = Sieve::new(&poset, top, [sub].into_iter().collect()).unwrap();
        assert_eq!(pullback_sieve(&poset, &single, sub).unwrap().members, [sub].into_iter().collect());
        assert!(matches!(pullback_sieve(&poset, &single, ContextId(1)).map(|s| s.len()), Ok(0)));
        let sieve_on_sub = Sieve::maximal(&poset, sub);
        assert_eq!(
            pullback_sieve(&poset, &sieve_on_sub, top),
            Err(Error::NotASubcontext { sub: top, sup: sub })
        );
    }

    #[test]
    fn sieve_validation() {
        let poset = diag_poset();
        let top = ContextId(0);
        assert_eq!(Sieve::new(&poset, top, [top].into_iter().collect()), Err(Error::NotASieve(top)));
        assert_eq!(
            Sieve::new(&poset, ContextId(1), [ContextId(2)].into_iter().collect()),
            Err(Error::NotASieve(ContextId(1)))
        );
    }

    #[test]
    fn excluded_middle_fails_on_sieves() {
        let poset = diag_poset();
        let top = ContextId(0);
        let lattice = SieveLattice::new(&poset, top).unwrap();
        let a = Sieve::new(&poset, top, [ContextId(1)].into_iter().collect()).unwrap();
        let not_a = lattice.neg(&a);
        assert_eq!(not_a.members, [ContextId(2), ContextId(3)].into_iter().collect());
        let lem = lattice.join(&a, &not_a);
        assert_ne!(lem, lattice.top());
        assert!(!lem.contains(top));
        assert!(lattice.meet(&a, &not_a).is_empty());
        assert!(lattice.leq(&a, &lattice.neg(&not_a)));
    }

    #[test]
    fn sieve_operations_reject_mixed_bases() {
        let poset = diag_poset();
        let a = Sieve::maximal(&poset, ContextId(0));
        let b = Sieve::maximal(&poset, ContextId(1));
        assert_eq!(
            heyting_on_sieves(&poset, HeytingOp::Meet, &a, &b),
            Err(Error::BaseMismatch(ContextId(0), ContextId(1)))
        );
    }

    #[test]
    fn subobject_operations() {
        let poset = diag_poset();
        let lattice = SubobjectLattice::new(&poset);
        let top = lattice.top();
        let mut family = vec![AtomSet::singleton(atom(&poset, ContextId(0), &[0]))];
        for v in poset.ids().skip(1) {
            family.push(poset.restrict_set(family[0], ContextId(0), v).unwrap());
        }
        let a = ClopenSubobject::new(&poset, family).unwrap();
        assert_eq!(lattice.meet(&a, &a), a);
        assert_eq!(lattice.join(&a, &a), a);
        assert_eq!(lattice.implies(&top, &a), a);
        let nn = lattice.neg(&lattice.neg(&a));
        assert!(a.is_subobject_of(&nn));
        for op in [HeytingOp::Meet, HeytingOp::Join, HeytingOp::Implies, HeytingOp::Not] {
            let r = heyting_on_subobjects(&poset, op, &a, &top).unwrap();
            assert!(is_subobject(r.components(), &poset));
        }
    }

    #[test]
    fn omega_operations() {
        let poset = diag_poset();
        let lattice = OmegaLattice::new(&poset);
        let all = lattice.all_elements();
        for v in &all {
            assert!(v.is_compatible(&poset));
            assert_eq!(&lattice.meet(&lattice.top(), v), v);
            assert_eq!(&lattice.join(&lattice.bottom(), v), v);
        }
        for a in &all {
            for b in &all {
                for op in [HeytingOp::Meet, HeytingOp::Join, HeytingOp::Implies, HeytingOp::Not] {
                    assert!(heyting_on_omega(&poset, op, a, b).unwrap().is_compatible(&poset));
                }
            }
        }
        let other = ContextPoset::<f64>::build(
            &[Context::from_basis_partition(2, &[&[0], &[1]], &tol()).unwrap()],
            &tol(),
        )
        .unwrap();
        let foreign = OmegaElement::totally_true(&other);
        assert_eq!(
            heyting_on_omega(&poset, HeytingOp::Meet, &all[0], &foreign),
            Err(Error::PosetMismatch)
        );
    }
}
