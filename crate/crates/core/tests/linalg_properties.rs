use proptest::prelude::*;

use tq_core::linalg::{hermitian_eig, is_positive_semidefinite, spectral_family, spectral_leq};
use tq_core::{Complex, Matrix, Operator, Projection, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn hermitian(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), dim * dim).prop_map(move |raw| {
        let m = Matrix::from_fn(dim, |i, j| Complex::new(raw[i * dim + j].0, raw[i * dim + j].1));
        Operator::new(m.hermitian_part(), &tol()).unwrap()
    })
}

fn any_hermitian() -> impl Strategy<Value = Operator> {
    (1usize..=6).prop_flat_map(hermitian)
}

/// Few distinct integer eigenvalues in a random basis, so spectral-order
/// comparisons are not all trivially false.
fn low_rank_family(dim: usize) -> impl Strategy<Value = Vec<Operator>> {
    let diag = prop::collection::vec(prop::collection::vec(-2i32..=2, dim), 3);
    let angle = 0.0..std::f64::consts::PI;
    (diag, angle).prop_map(move |(ds, theta)| {
        let (c, s) = (theta.cos(), theta.sin());
        let u = Matrix::from_fn(dim, |i, j| match (i, j) {
            (0, 0) | (1, 1) => Complex::new(c, 0.0),
            (0, 1) => Complex::new(-s, 0.0),
            (1, 0) => Complex::new(s, 0.0),
            _ if i == j => Complex::new(1.0, 0.0),
            _ => Complex::new(0.0, 0.0),
        });
        ds.iter()
            .map(|d| {
                let values: Vec<f64> = d.iter().map(|&x| x as f64).collect();
                let m = &(&u * &Matrix::diag(&values)) * &u.adjoint();
                Operator::new(m.hermitian_part(), &tol()).unwrap()
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigendecomposition_reconstructs(a in any_hermitian()) {
        let t = tol();
        let spectral = hermitian_eig(&a, &t).unwrap();
        let err = (&spectral.reconstruct() - a.matrix()).max_abs();
        prop_assert!(err <= 1e-8 * (1.0 + a.norm()), "reconstruction error {err}");
        prop_assert!(spectral.eigenvalues.windows(2).all(|w| w[0] < w[1]));
        let total: usize = spectral.projections.iter().map(|p| p.rank()).sum();
        prop_assert_eq!(total, a.dim());
        for (i, p) in spectral.projections.iter().enumerate() {
            for q in &spectral.projections[i + 1..] {
                prop_assert!((p.matrix() * q.matrix()).max_abs() < 1e-8);
            }
        }
    }

    #[test]
    fn diagonal_eigenvalues_match_sorted_entries(values in prop::collection::vec(-5i32..=5, 1..=6)) {
        let diag: Vec<f64> = values.iter().map(|&x| x as f64).collect();
        let spectral = hermitian_eig(&Operator::diag(&diag), &tol()).unwrap();
        let mut expected = diag.clone();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        expected.dedup();
        prop_assert_eq!(spectral.eigenvalues.len(), expected.len());
        for (got, want) in spectral.eigenvalues.iter().zip(&expected) {
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_family_is_increasing_and_ends_at_identity(a in any_hermitian()) {
        let t = tol();
        let family = spectral_family(&a, &t).unwrap();
        for w in family.steps.windows(2) {
            prop_assert!(w[0].is_below(&w[1], &t));
        }
        prop_assert!(family.steps.last().unwrap().approx_eq(&Projection::identity(a.dim()), &t));
    }

    #[test]
    fn spectral_order_is_a_partial_order(ops in (2usize..=4).prop_flat_map(low_rank_family)) {
        let t = tol();
        let (a, b, c) = (&ops[0], &ops[1], &ops[2]);
        prop_assert!(spectral_leq(a, a, &t).unwrap());
        if spectral_leq(a, b, &t).unwrap() && spectral_leq(b, a, &t).unwrap() {
            prop_assert!((a.matrix() - b.matrix()).max_abs() < 1e-8);
        }
        if spectral_leq(a, b, &t).unwrap() && spectral_leq(b, c, &t).unwrap() {
            prop_assert!(spectral_leq(a, c, &t).unwrap());
        }
        // Spectral order refines to the psd order.
        if spectral_leq(a, b, &t).unwrap() {
            prop_assert!(is_positive_semidefinite(&b.difference(a), &t));
        }
    }

    #[test]
    fn spectral_order_matches_psd_on_commuting_diagonals(
        x in prop::collection::vec(-3i32..=3, 1..=5),
        shift in prop::collection::vec(0i32..=2, 5),
    ) {
        let t = tol();
        let a: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let b: Vec<f64> = a.iter().zip(&shift).map(|(v, &s)| v + s as f64).collect();
        prop_assert!(spectral_leq(&Operator::diag(&a), &Operator::diag(&b), &t).unwrap());
        let strict = b.iter().zip(&a).any(|(p, q)| p > q);
        prop_assert_eq!(spectral_leq(&Operator::diag(&b), &Operator::diag(&a), &t).unwrap(), !strict);
    }

    #[test]
    fn ray_projection_is_idempotent(v in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..=6)) {
        prop_assume!(v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3);
        let amps: Vec<Complex> = v.iter().map(|&(a, b)| Complex::new(a, b)).collect();
        let p = Projection::ray(&amps);
        prop_assert!((&(p.matrix() * p.matrix()) - p.matrix()).max_abs() < 1e-12);
        prop_assert_eq!(p.rank(), 1);
        prop_assert!(Projection::new(p.matrix().clone(), &tol()).is_ok());
    }
}

#[test]
fn single_precision_pipeline() {
    let t = Tolerances::uniform(1e-5);
    let a = tq_core::linalg::Operator::<f32>::from_real_rows(
        &[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 5.0]],
        &t,
    )
    .unwrap();
    let spectral = hermitian_eig(&a, &t).unwrap();
    assert_eq!(spectral.eigenvalues.len(), 3);
    assert!((spectral.eigenvalues[1] - 2.0).abs() < 1e-5);
    assert!((&spectral.reconstruct() - a.matrix()).max_abs() < 1e-5);
}
