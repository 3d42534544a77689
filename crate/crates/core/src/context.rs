//! Abelian subalgebras of `M_n(C)` as atomic orthogonal decompositions, and
//! the finite poset of contexts ordered by inclusion.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_complex::Complex;

use crate::linalg::{hermitian_eig, Matrix, Operator, Projection, Tolerances};
use crate::presheaf::AtomSet;
use crate::{Error, Real, Result};

/// Stable index of a context inside a [`ContextPoset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextId(pub usize);

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.0)
    }
}

/// Largest number of atoms a context may have (atom sets are `u64` masks).
pub const MAX_ATOMS: usize = 64;

const KEY_GRID: f64 = 1e6;

/// Canonical ordering key: atoms sorted by rank, then by their entries
/// rounded to a `1e-6` grid (descending, so `e1` sorts before `e2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextKey(Vec<AtomKey>);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct AtomKey {
    rank: usize,
    entries: Vec<(i64, i64)>,
}

impl Ord for AtomKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank.cmp(&other.rank).then_with(|| Reverse(&self.entries).cmp(&Reverse(&other.entries)))
    }
}

impl PartialOrd for AtomKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ContextKey {
    /// More atoms first, then atom keys lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.len().cmp(&self.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ContextKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn atom_key<T: Real>(p: &Projection<T>) -> AtomKey {
    let round = |x: T| {
        let r = (x.to_f64_lossy() * KEY_GRID).round() as i64;
        if r == 0 {
            0
        } else {
            r
        }
    };
    AtomKey { rank: p.rank(), entries: p.entries().iter().map(|z| (round(z.re), round(z.im))).collect() }
}

/// A non-trivial abelian subalgebra, given by its atoms (minimal
/// projections). Atoms are kept in canonical order.
#[derive(Debug, Clone)]
pub struct Context<T> {
    atoms: Vec<Projection<T>>,
    key: ContextKey,
}

impl<T: Real> Context<T> {
    pub fn new(atoms: Vec<Projection<T>>, tol: &Tolerances) -> Result<Self> {
        if atoms.len() < 2 {
            return Err(Error::TrivialAlgebra);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::InvalidContext(format!("more than {MAX_ATOMS} atoms")));
        }
        let dim = atoms[0].dim();
        if let Some(bad) = atoms.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        let eps = T::of(tol.proj);
        for (i, a) in atoms.iter().enumerate() {
            if a.is_zero(tol) {
                return Err(Error::InvalidContext(format!("atom {i} is zero")));
            }
            for b in &atoms[i + 1..] {
                if a.overlap(b) > eps {
                    return Err(Error::InvalidContext("atoms are not mutually orthogonal".into()));
                }
            }
        }
        let sum = Projection::orthogonal_sum(dim, &atoms);
        if (sum.matrix() - &Matrix::identity(dim)).max_abs() > eps {
            return Err(Error::InvalidContext("atoms do not sum to the identity".into()));
        }
        Ok(Self::from_atoms_unchecked(atoms))
    }

    fn from_atoms_unchecked(atoms: Vec<Projection<T>>) -> Self {
        let mut keyed: Vec<_> = atoms.into_iter().map(|a| (atom_key(&a), a)).collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        let (keys, atoms): (Vec<_>, Vec<_>) = keyed.into_iter().unzip();
        Self { atoms, key: ContextKey(keys) }
    }

    /// Diagonal context whose atoms are the coordinate projections of the
    /// given blocks of basis indices.
    pub fn from_basis_partition(dim: usize, blocks: &[&[usize]], tol: &Tolerances) -> Result<Self> {
        let atoms = blocks.iter().map(|b| Projection::basis(dim, b)).collect();
        Self::new(atoms, tol)
    }

    /// Maximal context of an orthonormal basis (vectors normalised here).
    pub fn from_basis(vectors: &[Vec<Complex<T>>], tol: &Tolerances) -> Result<Self> {
        Self::new(vectors.iter().map(|v| Projection::ray(v)).collect(), tol)
    }

    pub fn atoms(&self) -> &[Projection<T>] {
        &self.atoms
    }

    pub fn atom(&self, index: usize) -> &Projection<T> {
        &self.atoms[index]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn key(&self) -> &ContextKey {
        &self.key
    }

    pub fn all_atoms(&self) -> AtomSet {
        AtomSet::full(self.len())
    }

    pub fn atom_index(&self, p: &Projection<T>, tol: &Tolerances) -> Option<usize> {
        self.atoms.iter().position(|a| a.approx_eq(p, tol))
    }

    /// Same atom set up to tolerance.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerances) -> bool {
        self.len() == other.len()
            && self.dim() == other.dim()
            && self.atoms.iter().all(|a| other.atoms.iter().any(|b| a.approx_eq(b, tol)))
    }

    /// Coefficients of `op` on the atoms, if `op` lies in this algebra.
    pub fn algebra_values(&self, op: &Operator<T>, tol: &Tolerances) -> Option<Vec<T>> {
        if op.dim() != self.dim() {
            return None;
        }
        let values: Vec<T> =
            self.atoms.iter().map(|q| q.trace_product(op).re / q.trace().re).collect();
        let rebuilt = self.element(&values);
        let slack = T::of(tol.recon) * (T::one() + op.frobenius_norm());
        ((op.matrix() - rebuilt.matrix()).frobenius_norm() <= slack).then_some(values)
    }

    /// `sum_i values[i] * atom_i`.
    pub fn element(&self, values: &[T]) -> Operator<T> {
        let m = self.atoms.iter().zip(values).fold(Matrix::zeros(self.dim()), |acc, (q, &v)| {
            &acc + &q.scale(v)
        });
        Operator::from_hermitian(m)
    }

    pub fn projection_of(&self, set: AtomSet) -> Projection<T> {
        Projection::orthogonal_sum(self.dim(), set.iter().map(|i| &self.atoms[i]))
    }

    /// Inverse of [`Context::projection_of`]: the atoms supporting `p`, if
    /// `p` lies in the projection lattice of this algebra.
    pub fn atom_set_of(&self, p: &Projection<T>, tol: &Tolerances) -> Option<AtomSet> {
        let eps = T::of(tol.proj);
        let mut set = AtomSet::empty();
        for (i, q) in self.atoms.iter().enumerate() {
            let overlap = q.overlap(p);
            if q.trace().re - overlap <= eps {
                set.insert(i);
            } else if overlap > eps {
                return None;
            }
        }
        self.projection_of(set).approx_eq(p, tol).then_some(set)
    }

    /// Coarsening whose atoms are block sums of this context's atoms.
    pub fn coarsen(&self, blocks: &[Vec<usize>]) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::TrivialAlgebra);
        }
        let atoms = blocks
            .iter()
            .map(|b| Projection::orthogonal_sum(self.dim(), b.iter().map(|&i| &self.atoms[i])))
            .collect();
        Ok(Self::from_atoms_unchecked(atoms))
    }

    /// Every non-trivial subalgebra: one per partition of the atoms into at
    /// least two blocks, this context included.
    pub fn subcontexts(&self) -> Vec<Self> {
        set_partitions(self.len())
            .into_iter()
            .filter(|p| p.len() >= 2)
            .map(|p| self.coarsen(&p).expect("at least two blocks"))
            .collect()
    }
}

/// All set partitions of `{0, .., n-1}`, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn grow(i: usize, n: usize, rgs: &mut Vec<usize>, blocks: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            let mut partition = vec![Vec::new(); blocks];
            for (elem, &b) in rgs.iter().enumerate() {
                partition[b].push(elem);
            }
            out.push(partition);
            return;
        }
        for b in 0..=blocks {
            rgs.push(b);
            grow(i + 1, n, rgs, blocks.max(b + 1), out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    grow(0, n, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// The joint eigenspace decomposition of pairwise commuting operators.
pub fn generate_context<T: Real>(ops: &[Operator<T>], tol: &Tolerances) -> Result<Context<T>> {
    let first = ops.first().ok_or(Error::TrivialAlgebra)?;
    let dim = first.dim();
    for (i, a) in ops.iter().enumerate() {
        if a.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
        }
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            let norm = a.commutator(b).max_abs();
            if norm > T::of(tol.herm) * (T::one() + a.max_abs() * b.max_abs()) {
                return Err(Error::NonCommuting { first: i, second: j, norm: norm.to_f64_lossy() });
            }
        }
    }

    let mut atoms = vec![Projection::identity(dim)];
    for op in ops {
        let spectral = hermitian_eig(op, tol)?;
        let mut refined = Vec::new();
        for a in &atoms {
            for p in &spectral.projections {
                let piece = Projection::from_hermitian(a.matrix() * p.matrix());
                if piece.trace().re > T::of(0.5) {
                    refined.push(piece);
                }
            }
        }
        atoms = refined;
    }
    Context::new(atoms, tol)
}

/// For each atom of `sup`, the index of the unique atom of `sub` above it.
/// `None` unless `sub` is a coarsening of `sup`.
pub fn coarsening_map<T: Real>(sub: &Context<T>, sup: &Context<T>, tol: &Tolerances) -> Option<Vec<usize>> {
    let mut map = Vec::with_capacity(sup.len());
    for q in sup.atoms() {
        let mut above = sub.atoms().iter().enumerate().filter(|(_, big)| q.is_below(big, tol));
        let (index, _) = above.next()?;
        if above.next().is_some() {
            return None;
        }
        map.push(index);
    }
    Some(map)
}

pub fn is_subcontext<T: Real>(sub: &Context<T>, sup: &Context<T>, tol: &Tolerances) -> Result<bool> {
    if sub.dim() != sup.dim() {
        return Err(Error::DimensionMismatch { expected: sup.dim(), found: sub.dim() });
    }
    Ok(coarsening_map(sub, sup, tol).is_some())
}

/// Finite poset of contexts: the subcontext closure of a list of seeds.
///
/// Contexts are sorted by [`ContextKey`], so ids do not depend on seed order.
#[derive(Debug, Clone)]
pub struct ContextPoset<T> {
    contexts: Vec<Context<T>>,
    /// `leq[a][b]` iff context `a` is a subalgebra of context `b`.
    leq: Vec<Vec<bool>>,
    down: Vec<Vec<ContextId>>,
    restrictions: HashMap<(ContextId, ContextId), Vec<usize>>,
    tol: Tolerances,
    fingerprint: u64,
}

impl<T: Real> ContextPoset<T> {
    pub fn build(seeds: &[Context<T>], tol: &Tolerances) -> Result<Self> {
        if let Some(first) = seeds.first() {
            if let Some(bad) = seeds.iter().find(|s| s.dim() != first.dim()) {
                return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
            }
        }
        let mut contexts: Vec<Context<T>> = Vec::new();
        for seed in seeds {
            for sub in seed.subcontexts() {
                if !contexts.iter().any(|c| c.approx_eq(&sub, tol)) {
                    contexts.push(sub);
                }
            }
        }
        contexts.sort_by(|a, b| a.key().cmp(b.key()));

        let n = contexts.len();
        let mut leq = vec![vec![false; n]; n];
        let mut restrictions = HashMap::new();
        for (i, sub) in contexts.iter().enumerate() {
            for (j, sup) in contexts.iter().enumerate() {
                if sub.len() > sup.len() {
                    continue;
                }
                if let Some(map) = coarsening_map(sub, sup, tol) {
                    leq[i][j] = true;
                    restrictions.insert((ContextId(i), ContextId(j)), map);
                }
            }
        }
        let down = (0..n)
            .map(|j| (0..n).filter(|&i| leq[i][j]).map(ContextId).collect())
            .collect();

        let mut hasher = DefaultHasher::new();
        for c in &contexts {
            c.key().hash(&mut hasher);
        }
        leq.hash(&mut hasher);

        Ok(Self { contexts, leq, down, restrictions, tol: *tol, fingerprint: hasher.finish() })
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.contexts.first().map(Context::dim)
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Hash of canonical keys and order; equal for posets built from the
    /// same seeds in any order.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn ids(&self) -> impl Iterator<Item = ContextId> + '_ {
        (0..self.contexts.len()).map(ContextId)
    }

    pub fn contexts(&self) -> &[Context<T>] {
        &self.contexts
    }

    pub fn context(&self, id: ContextId) -> Result<&Context<T>> {
        self.contexts.get(id.0).ok_or(Error::UnknownContext(id))
    }

    pub fn check(&self, id: ContextId) -> Result<()> {
        self.context(id).map(|_| ())
    }

    pub fn id_of(&self, context: &Context<T>) -> Option<ContextId> {
        self.contexts.iter().position(|c| c.approx_eq(context, &self.tol)).map(ContextId)
    }

    /// `sub` is a subalgebra of `sup` (reflexive).
    pub fn leq(&self, sub: ContextId, sup: ContextId) -> bool {
        self.leq.get(sub.0).and_then(|row| row.get(sup.0)).copied().unwrap_or(false)
    }

    /// `down(V)`: every context of the poset contained in `V`, `V` included.
    pub fn down_set(&self, id: ContextId) -> &[ContextId] {
        &self.down[id.0]
    }

    /// Strict order relation as `(sub, sup)` pairs.
    pub fn order_pairs(&self) -> Vec<(ContextId, ContextId)> {
        let mut pairs = Vec::new();
        for sup in self.ids() {
            for &sub in self.down_set(sup) {
                if sub != sup {
                    pairs.push((sub, sup));
                }
            }
        }
        pairs
    }

    /// Contexts not strictly contained in another member.
    pub fn maximal(&self) -> Vec<ContextId> {
        self.ids().filter(|&v| self.ids().all(|w| w == v || !self.leq(v, w))).collect()
    }

    /// Atom-of-`sup` to atom-of-`sub` map for `sub <= sup`.
    pub fn restriction_map(&self, sub: ContextId, sup: ContextId) -> Result<&[usize]> {
        self.check(sub)?;
        self.check(sup)?;
        self.restrictions
            .get(&(sub, sup))
            .map(Vec::as_slice)
            .ok_or(Error::NotASubcontext { sub, sup })
    }

    /// Image of an atom set of `sup` in `sub`.
    pub fn restrict_set(&self, set: AtomSet, sup: ContextId, sub: ContextId) -> Result<AtomSet> {
        let map = self.restriction_map(sub, sup)?;
        Ok(set.iter().map(|i| map[i]).collect())
    }
}

pub fn build_poset<T: Real>(seeds: &[Context<T>], tol: &Tolerances) -> Result<ContextPoset<T>> {
    ContextPoset::build(seeds, tol)
}

pub fn subcontexts<T: Real>(v: &Context<T>) -> Vec<Context<T>> {
    v.subcontexts()
}
