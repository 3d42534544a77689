//! Small dense complex Hermitian linear algebra.
//!
//! Matrices here are tiny (dimension well below 10), so everything is plain
//! row-major storage and O(n^3) loops. The eigensolver is cyclic complex
//! Jacobi, which is accurate to a few ulps on matrices of this size.

use std::fmt;
use std::ops::{Add, Deref, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::{Error, Real, Result};

/// Numerical tolerances shared by every module.
///
/// All values are absolute except `cluster`, which is scaled by
/// `1 + ||op||` when eigenvalues are merged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity check on matrix entries.
    pub herm: f64,
    /// Projection identities (idempotence, orthogonality, containment).
    /// Containment tests compare squared Frobenius norms against this.
    pub proj: f64,
    /// Smallest eigenvalue still accepted as non-negative.
    pub psd: f64,
    /// Relative eigenvalue clustering width.
    pub cluster: f64,
    /// Reconstruction of an operator from spectral data.
    pub recon: f64,
    /// Unit norm of state vectors and "expectation = 1".
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::uniform(1e-9)
    }
}

impl Tolerances {
    pub fn uniform(eps: f64) -> Self {
        Self { herm: eps, proj: eps, psd: eps, cluster: eps, recon: eps, norm: eps }
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim.max(1)) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.4?}{:+.4?}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::NotSquare);
        }
        Ok(Self { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect()).collect(),
        )
    }

    pub fn diag(values: &[T]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                Complex::new(values[i], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// `v v^H`.
    pub fn outer(v: &[Complex<T>]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex<T>) {
        self.data[i * self.dim + j] = z;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        let n = self.dim;
        let mut acc = Complex::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + self.get(i, k) * other.get(k, i);
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn scale(&self, s: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Complex::zero(), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// `(M + M^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::of(0.5);
        Self::from_fn(self.dim, |i, j| (self.get(i, j) + self.get(j, i).conj()) * half)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

/// Self-adjoint operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T>(Matrix<T>);

impl<T: Real> Operator<T> {
    pub fn new(m: Matrix<T>, tol: &Tolerances) -> Result<Self> {
        let deviation = m.hermitian_deviation();
        if deviation > T::of(tol.herm) {
            return Err(Error::NonHermitian { deviation: deviation.to_f64_lossy() });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Symmetrises without checking; for matrices Hermitian by construction.
    pub(crate) fn from_hermitian(m: Matrix<T>) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_real_rows(rows: &[Vec<T>], tol: &Tolerances) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?, tol)
    }

    pub fn diag(values: &[T]) -> Self {
        Self(Matrix::diag(values))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Matrix::identity(dim))
    }

    pub fn zero(dim: usize) -> Self {
        Self(Matrix::zeros(dim))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_hermitian(&self.0 - &other.0)
    }

    /// Largest absolute eigenvalue (operator norm).
    pub fn norm(&self) -> T {
        let (values, _) = jacobi_eigen(&self.0);
        values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}

impl<T> Deref for Operator<T> {
    type Target = Matrix<T>;
    fn deref(&self) -> &Matrix<T> {
        &self.0
    }
}

/// Orthogonal projection: Hermitian and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T>(Operator<T>);

impl<T: Real> Projection<T> {
    pub fn new(m: Matrix<T>, tol: &Tolerances) -> Result<Self> {
        let op = Operator::new(m, tol)?;
        let deviation = (&(&op.0 * &op.0) - &op.0).max_abs();
        if deviation > T::of(tol.proj) {
            return Err(Error::NotAProjection { deviation: deviation.to_f64_lossy() });
        }
        Ok(Self(op))
    }

    pub(crate) fn from_hermitian(m: Matrix<T>) -> Self {
        Self(Operator::from_hermitian(m))
    }

    pub fn zero(dim: usize) -> Self {
        Self(Operator::zero(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(Operator::identity(dim))
    }

    /// Diagonal projection onto the given basis indices.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut values = vec![T::zero(); dim];
        for &i in indices {
            values[i] = T::one();
        }
        Self(Operator::diag(&values))
    }

    /// Projection onto the ray spanned by `v` (normalised internally).
    pub fn ray(v: &[Complex<T>]) -> Self {
        let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        let unit: Vec<_> = v.iter().map(|z| z / norm).collect();
        Self::from_hermitian(Matrix::outer(&unit))
    }

    pub fn operator(&self) -> &Operator<T> {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.trace().re.round().to_usize().unwrap_or(0)
    }

    pub fn complement(&self) -> Self {
        Self::from_hermitian(&Matrix::identity(self.dim()) - self.matrix())
    }

    /// Sum of mutually orthogonal projections.
    pub fn orthogonal_sum<'a>(dim: usize, parts: impl IntoIterator<Item = &'a Projection<T>>) -> Self {
        let sum = parts.into_iter().fold(Matrix::zeros(dim), |acc, p| &acc + p.matrix());
        Self::from_hermitian(sum)
    }

    /// Squared Frobenius norm of `self * other`, i.e. `tr(self other)` for
    /// projections. Zero iff the ranges are orthogonal.
    pub fn overlap(&self, other: &Self) -> T {
        self.trace_product(other).re.max(T::zero())
    }

    /// `self <= other`, tested as `||self - other self||_F^2 <= tol`.
    pub fn is_below(&self, other: &Self, tol: &Tolerances) -> bool {
        self.trace().re - self.overlap(other) <= T::of(tol.proj)
    }

    pub fn is_zero(&self, tol: &Tolerances) -> bool {
        self.trace().re <= T::of(tol.proj)
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerances) -> bool {
        let d = (self.matrix() - other.matrix()).frobenius_norm();
        d * d <= T::of(tol.proj)
    }
}

impl<T> Deref for Projection<T> {
    type Target = Operator<T>;
    fn deref(&self) -> &Operator<T> {
        &self.0
    }
}

/// Normalised pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>, tol: &Tolerances) -> Result<Self> {
        let norm = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if amplitudes.is_empty() || (norm - T::one()).abs() > T::of(tol.norm) {
            return Err(Error::NotNormalised { norm: norm.to_f64_lossy() });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Panics on the zero vector.
    pub fn normalised(amplitudes: Vec<Complex<T>>) -> Self {
        let norm = amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        assert!(norm > T::zero(), "cannot normalise the zero vector");
        Self { amplitudes: amplitudes.into_iter().map(|z| z / norm).collect() }
    }

    pub fn from_real(amplitudes: &[T]) -> Self {
        Self::normalised(amplitudes.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `P_psi`, the projection onto the ray of the state.
    pub fn projector(&self) -> Projection<T> {
        Projection::from_hermitian(Matrix::outer(&self.amplitudes))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    /// Distinct eigenvalues, strictly increasing.
    pub eigenvalues: Vec<T>,
    /// Eigenprojections aligned with `eigenvalues`.
    pub projections: Vec<Projection<T>>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn reconstruct(&self) -> Matrix<T> {
        let dim = self.projections[0].dim();
        self.eigenvalues
            .iter()
            .zip(&self.projections)
            .fold(Matrix::zeros(dim), |acc, (&l, p)| &acc + &p.scale(l))
    }
}

/// Right-continuous step function `lambda -> E_lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFamily<T> {
    pub thresholds: Vec<T>,
    pub steps: Vec<Projection<T>>,
}

impl<T: Real> SpectralFamily<T> {
    pub fn dim(&self) -> usize {
        self.steps[0].dim()
    }

    /// Index of the last threshold `<= lambda + slack`.
    pub fn step_index(&self, lambda: T, slack: T) -> Option<usize> {
        self.thresholds.iter().rposition(|&t| t <= lambda + slack)
    }

    pub fn at(&self, lambda: T, slack: T) -> Projection<T> {
        match self.step_index(lambda, slack) {
            Some(k) => self.steps[k].clone(),
            None => Projection::zero(self.dim()),
        }
    }
}

/// Cyclic complex Jacobi. Returns unsorted eigenvalues and the unitary whose
/// columns are the matching eigenvectors.
pub(crate) fn jacobi_eigen<T: Real>(m: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();

    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + a.get(i, j).norm_sqr();
                }
            }
        }
        if off.sqrt() <= eps * scale || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= eps * eps * scale {
                    continue;
                }
                // Phase e^{-i phi} on column q makes a_pq real, then a real
                // Jacobi rotation annihilates it.
                let w = apq / r;
                let theta = (a.get(q, q).re - a.get(p, p).re) / (r + r);
                let t = {
                    let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                    if theta < T::zero() {
                        -T::one() / denom
                    } else {
                        T::one() / denom
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let wc = w.conj();

                for k in 0..n {
                    let xp = a.get(k, p);
                    let xq = a.get(k, q);
                    a.set(k, p, xp * c - xq * wc * s);
                    a.set(k, q, xp * s + xq * wc * c);
                }
                for k in 0..n {
                    let xp = a.get(p, k);
                    let xq = a.get(q, k);
                    a.set(p, k, xp * c - xq * w * s);
                    a.set(q, k, xp * s + xq * w * c);
                }
                a.set(p, q, Complex::zero());
                a.set(q, p, Complex::zero());
                for k in 0..n {
                    let xp = v.get(k, p);
                    let xq = v.get(k, q);
                    v.set(k, p, xp * c - xq * wc * s);
                    v.set(k, q, xp * s + xq * wc * c);
                }
            }
        }
    }
    ((0..n).map(|i| a.get(i, i).re).collect(), v)
}

/// Eigendecomposition with eigenvalues closer than
/// `tol.cluster * (1 + ||op||)` merged into one eigenprojection.
pub fn hermitian_eig<T: Real>(op: &Operator<T>, tol: &Tolerances) -> Result<SpectralDecomposition<T>> {
    let deviation = op.hermitian_deviation();
    if deviation > T::of(tol.herm) {
        return Err(Error::NonHermitian { deviation: deviation.to_f64_lossy() });
    }
    let n = op.dim();
    let (values, vectors) = jacobi_eigen(op.matrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));

    let spread = values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let width = T::of(tol.cluster) * (T::one() + spread);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(last) if values[i] - values[*last.last().unwrap()] <= width => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut projections = Vec::with_capacity(clusters.len());
    for cluster in clusters {
        let mean = cluster.iter().fold(T::zero(), |acc, &i| acc + values[i]) / T::of(cluster.len() as f64);
        let mut proj = Matrix::zeros(n);
        for &i in &cluster {
            let column: Vec<_> = (0..n).map(|k| vectors.get(k, i)).collect();
            proj = &proj + &Matrix::outer(&column);
        }
        eigenvalues.push(mean);
        projections.push(Projection::from_hermitian(proj));
    }
    Ok(SpectralDecomposition { eigenvalues, projections })
}

pub fn spectral_family<T: Real>(op: &Operator<T>, tol: &Tolerances) -> Result<SpectralFamily<T>> {
    let SpectralDecomposition { eigenvalues, projections } = hermitian_eig(op, tol)?;
    let n = op.dim();
    let mut steps = Vec::with_capacity(projections.len());
    let mut acc = Matrix::zeros(n);
    for (k, p) in projections.iter().enumerate() {
        acc = &acc + p.matrix();
        if k + 1 == projections.len() {
            steps.push(Projection::identity(n));
        } else {
            steps.push(Projection::from_hermitian(acc.clone()));
        }
    }
    Ok(SpectralFamily { thresholds: eigenvalues, steps })
}

pub fn is_positive_semidefinite<T: Real>(op: &Operator<T>, tol: &Tolerances) -> bool {
    let (values, _) = jacobi_eigen(op.matrix());
    values.iter().all(|&v| v >= -T::of(tol.psd))
}

/// `a <=_s b`: `E^a_lambda - E^b_lambda` is psd at every threshold of
/// either operator.
pub fn spectral_leq<T: Real>(a: &Operator<T>, b: &Operator<T>, tol: &Tolerances) -> Result<bool> {
    a.check_dim(b)?;
    let fa = spectral_family(a, tol)?;
    let fb = spectral_family(b, tol)?;
    let spread = a.max_abs().max(b.max_abs()) * T::of(a.dim() as f64);
    let slack = T::of(tol.cluster) * (T::one() + spread);
    for &lambda in fa.thresholds.iter().chain(&fb.thresholds) {
        let ea = fa.at(lambda, slack);
        let eb = fb.at(lambda, slack);
        if !is_positive_semidefinite(&ea.difference(&eb), tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `<psi| op |psi>`.
pub fn expectation<T: Real>(psi: &StateVector<T>, op: &Operator<T>, tol: &Tolerances) -> Result<T> {
    if psi.dim() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: psi.dim() });
    }
    let image = op.apply(psi.amplitudes());
    let value = psi
        .amplitudes()
        .iter()
        .zip(&image)
        .fold(Complex::zero(), |acc: Complex<T>, (x, y)| acc + x.conj() * y);
    if value.im.abs() > T::of(tol.herm) * (T::one() + op.max_abs()) {
        return Err(Error::NonHermitian { deviation: value.im.to_f64_lossy() });
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn example() -> Operator<f64> {
        Operator::from_real_rows(
            &[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 5.0]],
            &tol(),
        )
        .unwrap()
    }

    fn close(a: &Matrix<f64>, b: &Matrix<f64>, eps: f64) -> bool {
        (a - b).max_abs() <= eps
    }

    #[test]
    fn diagonal_eigendecomposition() {
        let d = hermitian_eig(&Operator::diag(&[1.0, 2.0, 3.0]), &tol()).unwrap();
        assert_eq!(d.eigenvalues.len(), 3);
        for (k, (&l, p)) in d.eigenvalues.iter().zip(&d.projections).enumerate() {
            assert!((l - (k + 1) as f64).abs() < 1e-12);
            assert!(close(p.matrix(), Projection::<f64>::basis(3, &[k]).matrix(), 1e-12));
        }
    }

    #[test]
    fn identity_has_one_eigenvalue() {
        let d = hermitian_eig(&Operator::<f64>::identity(3), &tol()).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0]);
        assert!(close(d.projections[0].matrix(), &Matrix::identity(3), 1e-12));
    }

    #[test]
    fn non_diagonal_example() {
        let a = example();
        let d = hermitian_eig(&a, &tol()).unwrap();
        let expected = [0.0, 2.0, 5.0];
        assert_eq!(d.eigenvalues.len(), 3);
        for (l, e) in d.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-12);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rays = [
            Projection::ray(&[Complex::new(s, 0.0), Complex::new(-s, 0.0), Complex::zero()]),
            Projection::ray(&[Complex::new(s, 0.0), Complex::new(s, 0.0), Complex::zero()]),
            Projection::basis(3, &[2]),
        ];
        for (p, r) in d.projections.iter().zip(&rays) {
            assert!(close(p.matrix(), r.matrix(), 1e-12));
            assert!(close(&(p.matrix() * p.matrix()), p.matrix(), 1e-12));
            assert_eq!(p.rank(), 1);
        }
        assert!(close(&d.reconstruct(), a.matrix(), 1e-12));
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        let m = Matrix::from_rows(vec![
            vec![one * 2.0, one - i, i * 0.5],
            vec![one + i, one * -1.0, one * 3.0],
            vec![-i * 0.5, one * 3.0, Complex::zero()],
        ])
        .unwrap();
        let op = Operator::new(m.clone(), &tol()).unwrap();
        let d = hermitian_eig(&op, &tol()).unwrap();
        assert!(close(&d.reconstruct(), &m, 1e-12));
        for w in d.eigenvalues.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(Operator::new(m, &tol()), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn spectral_family_examples() {
        let f = spectral_family(&Operator::diag(&[1.0, 2.0, 3.0]), &tol()).unwrap();
        assert_eq!(f.thresholds.len(), 3);
        assert!(close(f.steps[0].matrix(), Projection::<f64>::basis(3, &[0]).matrix(), 1e-12));
        assert!(close(f.steps[1].matrix(), Projection::<f64>::basis(3, &[0, 1]).matrix(), 1e-12));
        assert!(close(f.steps[2].matrix(), &Matrix::identity(3), 0.0));
        assert!(f.at(0.5, 0.0).is_zero(&tol()));

        let p = Projection::<f64>::basis(3, &[1]);
        let f = spectral_family(p.operator(), &tol()).unwrap();
        assert!((f.thresholds[0]).abs() < 1e-12 && (f.thresholds[1] - 1.0).abs() < 1e-12);
        assert!(close(f.steps[0].matrix(), p.complement().matrix(), 1e-12));

        let f = spectral_family(&Operator::<f64>::identity(2), &tol()).unwrap();
        assert_eq!(f.thresholds, vec![1.0]);
    }

    #[test]
    fn spectral_order_examples() {
        let t = tol();
        assert!(spectral_leq(&Operator::diag(&[1.0, 2.0]), &Operator::diag(&[1.0, 2.0]), &t).unwrap());
        assert!(spectral_leq(&Operator::diag(&[0.0, 0.0, 5.0]), &example(), &t).unwrap());
        assert!(!spectral_leq(&example(), &Operator::diag(&[0.0, 0.0, 5.0]), &t).unwrap());
        assert!(spectral_leq(&example(), &Operator::diag(&[2.0, 2.0, 5.0]), &t).unwrap());
        assert!(matches!(
            spectral_leq(&Operator::diag(&[1.0]), &Operator::diag(&[1.0, 2.0]), &t),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psd_examples() {
        let t = tol();
        assert!(is_positive_semidefinite(&Operator::<f64>::zero(3), &t));
        assert!(!is_positive_semidefinite(&Operator::diag(&[1.0, -1.0]), &t));
        let m = Operator::from_real_rows(&[vec![1.0, -1.0, 0.0], vec![-1.0, 1.0, 0.0], vec![0.0; 3]], &t).unwrap();
        assert!(is_positive_semidefinite(&m, &t));
    }

    #[test]
    fn expectation_examples() {
        let t = tol();
        let e1 = StateVector::<f64>::basis(3, 0);
        assert!((expectation(&e1, &Operator::diag(&[1.0, 2.0, 3.0]), &t).unwrap() - 1.0).abs() < 1e-15);
        let plus = StateVector::from_real(&[1.0, 1.0, 0.0]);
        let e11 = Projection::<f64>::basis(3, &[0]);
        assert!((expectation(&plus, e11.operator(), &t).unwrap() - 0.5).abs() < 1e-15);
        let e3 = StateVector::<f64>::basis(3, 2);
        assert!((expectation(&e3, &example(), &t).unwrap() - 5.0).abs() < 1e-15);
        assert!(matches!(
            expectation(&StateVector::<f64>::basis(2, 0), &example(), &t),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_must_be_normalised() {
        let v = vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        assert!(matches!(StateVector::new(v, &tol()), Err(Error::NotNormalised { .. })));
    }

    #[test]
    fn works_in_single_precision() {
        let t = Tolerances::uniform(1e-4);
        let a = Operator::<f32>::from_real_rows(
            &[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 5.0]],
            &t,
        )
        .unwrap();
        let d = hermitian_eig(&a, &t).unwrap();
        assert_eq!(d.eigenvalues.len(), 3);
        assert!((&d.reconstruct() - a.matrix()).max_abs() < 1e-5);
    }
}
