//! Global sections of the spectral presheaf and the Kochen-Specker search.

use crate::context::{Context, ContextId, ContextPoset};
use crate::linalg::{Operator, Tolerances};
use crate::presheaf::GelfandPoint;
use crate::{Error, Real, Result};

use num_complex::Complex;

/// One atom per context, compatible with every restriction map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobalSection {
    atoms: Vec<usize>,
}

impl GlobalSection {
    pub fn new<T: Real>(poset: &ContextPoset<T>, atoms: Vec<usize>) -> Result<Self> {
        if atoms.len() != poset.len() {
            return Err(Error::PosetMismatch);
        }
        for v in poset.ids() {
            let len = poset.context(v)?.len();
            if atoms[v.0] >= len {
                return Err(Error::AtomOutOfRange { context: v, index: atoms[v.0] });
            }
        }
        let section = Self { atoms };
        if let Some((sub, sup)) = section.first_violation(poset) {
            return Err(Error::IncompatibleSection { sup, sub });
        }
        Ok(section)
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn point(&self, v: ContextId) -> GelfandPoint {
        GelfandPoint { context: v, atom: self.atoms[v.0] }
    }

    pub fn points(&self) -> impl Iterator<Item = GelfandPoint> + '_ {
        (0..self.atoms.len()).map(|i| self.point(ContextId(i)))
    }

    fn first_violation<T: Real>(&self, poset: &ContextPoset<T>) -> Option<(ContextId, ContextId)> {
        poset.order_pairs().into_iter().find(|&(sub, sup)| {
            poset.restriction_map(sub, sup).map(|m| m[self.atoms[sup.0]] != self.atoms[sub.0]).unwrap_or(true)
        })
    }

    pub fn is_compatible<T: Real>(&self, poset: &ContextPoset<T>) -> bool {
        self.atoms.len() == poset.len() && self.first_violation(poset).is_none()
    }
}

pub const DEFAULT_LEAF_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { section: GlobalSection, leaves: u64 },
    /// The search space was exhausted.
    None { leaves: u64 },
    /// The leaf budget ran out first.
    Inconclusive { leaves: u64 },
}

impl SearchOutcome {
    pub fn leaves(&self) -> u64 {
        match self {
            SearchOutcome::Found { leaves, .. } | SearchOutcome::None { leaves } | SearchOutcome::Inconclusive { leaves } => {
                *leaves
            }
        }
    }

    pub fn section(&self) -> Option<&GlobalSection> {
        match self {
            SearchOutcome::Found { section, .. } => Some(section),
            _ => None,
        }
    }
}

struct Search<'p, T> {
    poset: &'p ContextPoset<T>,
    maximal: Vec<ContextId>,
    assigned: Vec<Option<usize>>,
    chosen: Vec<Option<usize>>,
    leaves: u64,
    budget: u64,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl<T: Real> Search<'_, T> {
    fn fits(&self, m: ContextId, atom: usize) -> bool {
        self.poset.down_set(m).iter().all(|&w| {
            let image = self.poset.restriction_map(w, m).expect("down set has restriction maps")[atom];
            self.assigned[w.0].is_none_or(|x| x == image)
        })
    }

    fn candidates(&self, m: ContextId) -> Vec<usize> {
        let len = self.poset.contexts()[m.0].len();
        (0..len).filter(|&a| self.fits(m, a)).collect()
    }

    /// Assigns `atom` on `down(m)`, returning the contexts newly fixed.
    fn assign(&mut self, m: ContextId, atom: usize) -> Vec<ContextId> {
        let mut fixed = Vec::new();
        for &w in self.poset.down_set(m) {
            if self.assigned[w.0].is_none() {
                let image = self.poset.restriction_map(w, m).expect("down set has restriction maps")[atom];
                self.assigned[w.0] = Some(image);
                fixed.push(w);
            }
        }
        fixed
    }

    fn run(&mut self) -> Step {
        // Most constrained open maximal context; an empty candidate list is a
        // dead end, a single candidate a forced move.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (i, &m) in self.maximal.iter().enumerate() {
            if self.chosen[i].is_some() {
                continue;
            }
            let cands = self.candidates(m);
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                let dead = cands.is_empty();
                best = Some((i, cands));
                if dead {
                    break;
                }
            }
        }
        let Some((i, cands)) = best else {
            self.leaves += 1;
            return Step::Found;
        };
        if cands.is_empty() {
            self.leaves += 1;
            return if self.leaves >= self.budget { Step::OutOfBudget } else { Step::Exhausted };
        }
        let m = self.maximal[i];
        for atom in cands {
            let fixed = self.assign(m, atom);
            self.chosen[i] = Some(atom);
            match self.run() {
                Step::Exhausted => {}
                other => return other,
            }
            self.chosen[i] = None;
            for w in fixed {
                self.assigned[w.0] = None;
            }
        }
        Step::Exhausted
    }
}

/// Backtracking search over the maximal contexts for a global section.
pub fn find_global_section<T: Real>(poset: &ContextPoset<T>, leaf_budget: u64) -> Result<SearchOutcome> {
    if poset.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let maximal = poset.maximal();
    let mut search = Search {
        poset,
        chosen: vec![None; maximal.len()],
        maximal,
        assigned: vec![None; poset.len()],
        leaves: 0,
        budget: leaf_budget.max(1),
    };
    Ok(match search.run() {
        Step::Found => {
            let atoms = search.assigned.iter().map(|a| a.expect("every context lies below a maximal one")).collect();
            SearchOutcome::Found { section: GlobalSection::new(poset, atoms)?, leaves: search.leaves }
        }
        Step::Exhausted => SearchOutcome::None { leaves: search.leaves },
        Step::OutOfBudget => SearchOutcome::Inconclusive { leaves: search.leaves },
    })
}

/// Reads off the value a section assigns to each operator: the eigenvalue
/// on the chosen atom of any context whose algebra contains it.
pub fn section_to_valuation<T: Real>(
    poset: &ContextPoset<T>,
    section: &GlobalSection,
    ops: &[Operator<T>],
) -> Result<Vec<T>> {
    if section.atoms.len() != poset.len() {
        return Err(Error::PosetMismatch);
    }
    if let Some((sub, sup)) = section.first_violation(poset) {
        return Err(Error::IncompatibleSection { sup, sub });
    }
    let tol = poset.tolerances();
    ops.iter()
        .enumerate()
        .map(|(i, op)| {
            let mut value: Option<T> = None;
            for v in poset.ids() {
                let Some(values) = poset.contexts()[v.0].algebra_values(op, tol) else {
                    continue;
                };
                let x = values[section.atoms[v.0]];
                match value {
                    None => value = Some(x),
                    Some(y) => {
                        let slack = T::of(tol.cluster) * (T::one() + x.abs().max(y.abs()));
                        if (x - y).abs() > slack {
                            return Err(Error::InconsistentSection(i));
                        }
                    }
                }
            }
            value.ok_or(Error::OperatorNotCovered(i))
        })
        .collect()
}

/// The 18 rays in dimension 4, grouped into the 9 orthogonal bases in which
/// each ray appears exactly twice. Entries are unnormalised.
pub fn eighteen_ray_bases() -> Vec<[[f64; 4]; 4]> {
    vec![
        [[0., 0., 0., 1.], [0., 0., 1., 0.], [1., 1., 0., 0.], [1., -1., 0., 0.]],
        [[0., 0., 0., 1.], [0., 1., 0., 0.], [1., 0., 1., 0.], [1., 0., -1., 0.]],
        [[1., -1., 1., -1.], [1., -1., -1., 1.], [1., 1., 0., 0.], [0., 0., 1., 1.]],
        [[1., -1., 1., -1.], [1., 1., 1., 1.], [1., 0., -1., 0.], [0., 1., 0., -1.]],
        [[0., 0., 1., 0.], [0., 1., 0., 0.], [1., 0., 0., 1.], [1., 0., 0., -1.]],
        [[1., -1., -1., 1.], [1., 1., 1., 1.], [1., 0., 0., -1.], [0., 1., -1., 0.]],
        [[1., 1., -1., 1.], [1., 1., 1., -1.], [1., -1., 0., 0.], [0., 0., 1., 1.]],
        [[1., 1., -1., 1.], [-1., 1., 1., 1.], [1., 0., 1., 0.], [0., 1., 0., -1.]],
        [[1., 1., 1., -1.], [-1., 1., 1., 1.], [1., 0., 0., 1.], [0., 1., -1., 0.]],
    ]
}

/// The nine maximal contexts of the 18-ray configuration.
pub fn eighteen_ray_contexts<T: Real>(tol: &Tolerances) -> Result<Vec<Context<T>>> {
    eighteen_ray_bases()
        .iter()
        .map(|basis| {
            let vectors: Vec<Vec<Complex<T>>> =
                basis.iter().map(|r| r.iter().map(|&x| Complex::new(T::of(x), T::zero())).collect()).collect();
            Context::from_basis(&vectors, tol)
        })
        .collect()
}
