//! Inner and outer daseinisation of projections and self-adjoint operators.
//!
//! For a projection `P` and context `V` with atoms `q`:
//! the outer daseinisation is the sum of atoms with `qP != 0`, the inner one
//! the sum of atoms with `q <= P`.
//!
//! Self-adjoint operators go through their spectral families on the finite
//! grid `sp(A)`. The outer daseinisation has spectral family
//! `lambda -> inner(E^A_lambda)`, the inner one
//! `lambda -> meet_{mu > lambda} outer(E^A_mu)`, which on a step function is
//! `outer(E^A_lambda)` again (right continuity).

use crate::context::{Context, ContextPoset};
use crate::linalg::{spectral_family, Operator, Projection, SpectralFamily, Tolerances};
use crate::presheaf::AtomSet;
use crate::{Error, Real, Result};

fn check_dim<T: Real>(dim: usize, v: &Context<T>) -> Result<()> {
    if dim != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), found: dim });
    }
    Ok(())
}

/// Atoms of the smallest projection of `V` above `p`.
pub fn outer_atoms<T: Real>(p: &Projection<T>, v: &Context<T>, tol: &Tolerances) -> Result<AtomSet> {
    check_dim(p.dim(), v)?;
    let eps = T::of(tol.proj);
    Ok(v.atoms().iter().enumerate().filter(|(_, q)| q.overlap(p) > eps).map(|(i, _)| i).collect())
}

/// Atoms of the largest projection of `V` below `p`.
pub fn inner_atoms<T: Real>(p: &Projection<T>, v: &Context<T>, tol: &Tolerances) -> Result<AtomSet> {
    check_dim(p.dim(), v)?;
    Ok(v.atoms().iter().enumerate().filter(|(_, q)| q.is_below(p, tol)).map(|(i, _)| i).collect())
}

pub fn outer_projection<T: Real>(p: &Projection<T>, v: &Context<T>, tol: &Tolerances) -> Result<Projection<T>> {
    Ok(v.projection_of(outer_atoms(p, v, tol)?))
}

pub fn inner_projection<T: Real>(p: &Projection<T>, v: &Context<T>, tol: &Tolerances) -> Result<Projection<T>> {
    Ok(v.projection_of(inner_atoms(p, v, tol)?))
}

/// Atom values of a context element given its spectral family as atom sets
/// on the threshold grid: each atom takes the first threshold whose step
/// contains it.
fn values_from_steps<T: Real>(thresholds: &[T], steps: &[AtomSet], atoms: usize) -> Vec<T> {
    (0..atoms)
        .map(|q| {
            let k = steps.iter().position(|s| s.contains(q)).unwrap_or(steps.len() - 1);
            thresholds[k]
        })
        .collect()
}

fn family_steps<T: Real>(
    family: &SpectralFamily<T>,
    v: &Context<T>,
    tol: &Tolerances,
    transfer: fn(&Projection<T>, &Context<T>, &Tolerances) -> Result<AtomSet>,
) -> Result<Vec<AtomSet>> {
    let last = family.steps.len() - 1;
    family
        .steps
        .iter()
        .enumerate()
        .map(|(k, e)| if k == last { Ok(v.all_atoms()) } else { transfer(e, v, tol) })
        .collect()
}

/// Atom values of `delta^o(A)_V`.
pub fn outer_values<T: Real>(a: &Operator<T>, v: &Context<T>, tol: &Tolerances) -> Result<Vec<T>> {
    check_dim(a.dim(), v)?;
    let family = spectral_family(a, tol)?;
    let steps = family_steps(&family, v, tol, inner_atoms)?;
    Ok(values_from_steps(&family.thresholds, &steps, v.len()))
}

/// Atom values of `delta^i(A)_V`.
pub fn inner_values<T: Real>(a: &Operator<T>, v: &Context<T>, tol: &Tolerances) -> Result<Vec<T>> {
    check_dim(a.dim(), v)?;
    let family = spectral_family(a, tol)?;
    let steps = family_steps(&family, v, tol, outer_atoms)?;
    Ok(values_from_steps(&family.thresholds, &steps, v.len()))
}

/// Smallest element of `V_sa` spectrally above `a`.
pub fn outer_sa<T: Real>(a: &Operator<T>, v: &Context<T>, tol: &Tolerances) -> Result<Operator<T>> {
    Ok(v.element(&outer_values(a, v, tol)?))
}

/// Largest element of `V_sa` spectrally below `a`.
pub fn inner_sa<T: Real>(a: &Operator<T>, v: &Context<T>, tol: &Tolerances) -> Result<Operator<T>> {
    Ok(v.element(&inner_values(a, v, tol)?))
}

/// Inner and outer daseinisation of one operator at every context of a
/// poset, as atom values indexed by context id.
#[derive(Debug, Clone, PartialEq)]
pub struct DaseinisationTable<T> {
    pub spectrum: Vec<T>,
    pub inner: Vec<Vec<T>>,
    pub outer: Vec<Vec<T>>,
}

impl<T: Real> DaseinisationTable<T> {
    pub fn new(poset: &ContextPoset<T>, a: &Operator<T>) -> Result<Self> {
        let tol = poset.tolerances();
        if let Some(dim) = poset.dim() {
            if dim != a.dim() {
                return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
            }
        }
        let family = spectral_family(a, tol)?;
        let mut inner = Vec::with_capacity(poset.len());
        let mut outer = Vec::with_capacity(poset.len());
        for v in poset.contexts() {
            let up = family_steps(&family, v, tol, inner_atoms)?;
            let down = family_steps(&family, v, tol, outer_atoms)?;
            outer.push(values_from_steps(&family.thresholds, &up, v.len()));
            inner.push(values_from_steps(&family.thresholds, &down, v.len()));
        }
        Ok(Self { spectrum: family.thresholds, inner, outer })
    }
}

pub fn daseinise<T: Real>(poset: &ContextPoset<T>, a: &Operator<T>) -> Result<DaseinisationTable<T>> {
    DaseinisationTable::new(poset, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_positive_semidefinite, Matrix};
    use num_complex::Complex;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag3() -> Context<f64> {
        Context::from_basis_partition(3, &[&[0], &[1], &[2]], &tol()).unwrap()
    }

    fn example() -> Operator<f64> {
        Operator::from_real_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 5.0]], &tol())
            .unwrap()
    }

    fn plus_ray() -> Projection<f64> {
        Projection::ray(&[Complex::new(1.0, 0.0), Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)])
    }

    /// Every projection of the diagonal context: 2^3 coordinate sums.
    fn all_diag_projections() -> Vec<Projection<f64>> {
        AtomSet::all_subsets(3).map(|s| diag3().projection_of(s)).collect()
    }

    fn close(a: &Matrix<f64>, b: &Matrix<f64>) -> bool {
        (a - b).max_abs() < 1e-12
    }

    #[test]
    fn projection_already_in_context() {
        let t = tol();
        let p = Projection::basis(3, &[0, 2]);
        assert!(close(outer_projection(&p, &diag3(), &t).unwrap().matrix(), p.matrix()));
        assert!(close(inner_projection(&p, &diag3(), &t).unwrap().matrix(), p.matrix()));
    }

    #[test]
    fn outer_projection_is_smallest_above() {
        let t = tol();
        let p = plus_ray();
        let oracle = all_diag_projections()
            .into_iter()
            .filter(|q| (&(q.matrix() * p.matrix()) - p.matrix()).max_abs() < 1e-12)
            .min_by_key(|q| q.rank())
            .unwrap();
        let got = outer_projection(&p, &diag3(), &t).unwrap();
        assert!(close(got.matrix(), oracle.matrix()));
        assert!(close(got.matrix(), Projection::basis(3, &[0, 1]).matrix()));
        assert!(outer_projection(&Projection::zero(3), &diag3(), &t).unwrap().is_zero(&t));
    }

    #[test]
    fn inner_projection_is_largest_below() {
        let t = tol();
        let p = plus_ray();
        let oracle = all_diag_projections()
            .into_iter()
            .filter(|q| (&(p.matrix() * q.matrix()) - q.matrix()).max_abs() < 1e-12)
            .max_by_key(|q| q.rank())
            .unwrap();
        let got = inner_projection(&p, &diag3(), &t).unwrap();
        assert!(close(got.matrix(), oracle.matrix()));
        assert!(got.is_zero(&t));
        let id = inner_projection(&Projection::identity(3), &diag3(), &t).unwrap();
        assert!(close(id.matrix(), &Matrix::identity(3)));
    }

    #[test]
    fn self_adjoint_examples() {
        let t = tol();
        let a = example();
        let outer = outer_sa(&a, &diag3(), &t).unwrap();
        let inner = inner_sa(&a, &diag3(), &t).unwrap();
        assert!(close(outer.matrix(), Operator::diag(&[2.0, 2.0, 5.0]).matrix()));
        assert!(close(inner.matrix(), Operator::diag(&[0.0, 0.0, 5.0]).matrix()));
        assert!(is_positive_semidefinite(&outer.difference(&a), &t));
        assert!(is_positive_semidefinite(&a.difference(&inner), &t));

        let in_algebra = Operator::diag(&[3.0, -1.0, 3.0]);
        assert!(close(outer_sa(&in_algebra, &diag3(), &t).unwrap().matrix(), in_algebra.matrix()));
        assert!(close(inner_sa(&in_algebra, &diag3(), &t).unwrap().matrix(), in_algebra.matrix()));
    }

    #[test]
    fn projections_agree_with_operator_route() {
        let t = tol();
        let p = plus_ray();
        let v = diag3();
        assert!(close(
            outer_sa(p.operator(), &v, &t).unwrap().matrix(),
            outer_projection(&p, &v, &t).unwrap().matrix()
        ));
        assert!(close(
            inner_sa(p.operator(), &v, &t).unwrap().matrix(),
            inner_projection(&p, &v, &t).unwrap().matrix()
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let t = tol();
        assert!(matches!(
            outer_projection(&Projection::<f64>::identity(2), &diag3(), &t),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(inner_sa(&Operator::diag(&[1.0, 2.0]), &diag3(), &t), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn table_over_poset() {
        let t = tol();
        let poset = ContextPoset::build(&[diag3()], &t).unwrap();
        let table = daseinise(&poset, &example()).unwrap();
        assert_eq!(table.inner.len(), 4);
        for v in poset.ids() {
            let c = poset.context(v).unwrap();
            assert_eq!(table.outer[v.0], outer_values(&example(), c, &t).unwrap());
            assert_eq!(table.inner[v.0], inner_values(&example(), c, &t).unwrap());
        }
    }
}
