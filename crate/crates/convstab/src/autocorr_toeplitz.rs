//! Hermitian Toeplitz matrices generated by autocorrelations, their
//! trigonometric symbol and smallest-eigenvalue bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse_seq::SupportSet;

const HERMITIAN_TOL: f64 = 1e-12;

/// Hermitian Toeplitz matrix with entries (i,j) = b_{j−i}, where
/// b_k = Σ_l conj(a_l) a_{l+k} is the autocorrelation of a generator a and
/// b_{−k} = conj(b_k) is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrToeplitz {
    n: usize,
    autocorr: Vec<Complex64>,
    generator: Option<Vec<Complex64>>,
}

/// Real Fourier coefficients of the symbol, μ_k = 2 Re b_k, ν_k = −2 Im b_k
/// for k = 1..n−1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolCoefficients {
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    autocorr: Vec<(f64, f64)>,
}

/// Autocorrelation b_0..b_{n−1} of a dense complex vector; out-of-range
/// terms are zero.
pub fn autocorrelation(a: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() {
        return Err(Error::EmptySequence);
    }
    let n = a.len();
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for l in 0..n - k {
            s += a[l].conj() * a[l + k];
        }
        b.push(s);
    }
    Ok(b)
}

impl AutocorrToeplitz {
    /// Builds the matrix from a dense generator.
    pub fn from_generator(a: &[Complex64]) -> Result<Self> {
        let autocorr = autocorrelation(a)?;
        Ok(Self {
            n: a.len(),
            autocorr,
            generator: Some(a.to_vec()),
        })
    }

    /// Builds the matrix from stored autocorrelations (b_0 must be real).
    pub fn from_autocorr(autocorr: Vec<Complex64>) -> Result<Self> {
        if autocorr.is_empty() {
            return Err(Error::EmptySequence);
        }
        if autocorr[0].im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidInput("b_0 must be real".into()));
        }
        for b in &autocorr {
            if !b.re.is_finite() || !b.im.is_finite() {
                return Err(Error::InvalidInput("non-finite autocorrelation".into()));
            }
        }
        Ok(Self {
            n: autocorr.len(),
            autocorr,
            generator: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn autocorr(&self) -> &[Complex64] {
        &self.autocorr
    }

    pub fn generator(&self) -> Option<&[Complex64]> {
        self.generator.as_deref()
    }

    /// Matrix entry (i, j) = b_{i−j} with b_{−k} = conj(b_k), oriented so
    /// that x†Bx equals the squared convolution norm.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            self.autocorr[i - j]
        } else {
            self.autocorr[j - i].conj()
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j))
    }

    pub fn symbol_coefficients(&self) -> SymbolCoefficients {
        SymbolCoefficients {
            mu: self.autocorr[1..].iter().map(|b| 2.0 * b.re).collect(),
            nu: self.autocorr[1..].iter().map(|b| -2.0 * b.im).collect(),
        }
    }

    /// Evaluates the symbol b(ω) = Σ_{k=−(n−1)}^{n−1} b_k e^{ikω}.
    ///
    /// The two-sided sum is real by Hermitian symmetry; the imaginary
    /// residue is checked against 1e-12.
    pub fn symbol_eval(&self, omega: f64) -> f64 {
        let mut s = Complex64::new(self.autocorr[0].re, 0.0);
        for (k, &b) in self.autocorr.iter().enumerate().skip(1) {
            let phase = Complex64::from_polar(1.0, k as f64 * omega);
            s += b * phase + b.conj() * phase.conj();
        }
        debug_assert!(s.im.abs() < 1e-12, "symbol imaginary residue {}", s.im);
        s.re
    }

    /// Minimum of the symbol over a uniform grid on [0, 2π).
    ///
    /// Grid evaluation, not root-finding: the symbol is a trigonometric
    /// polynomial of order n−1 and the grid must satisfy grid_size ≥ 2n.
    pub fn symbol_min(&self, grid_size: usize) -> Result<f64> {
        if grid_size < 2 * self.n {
            return Err(Error::GridTooCoarse {
                need: 2 * self.n,
                got: grid_size,
            });
        }
        let step = 2.0 * std::f64::consts::PI / grid_size as f64;
        let min = (0..grid_size)
            .map(|i| self.symbol_eval(i as f64 * step))
            .fold(f64::INFINITY, f64::min);
        Ok(min)
    }

    /// Principal submatrix on the index set I ⊆ {0..n−1}.
    pub fn principal_submatrix(&self, indices: &SupportSet) -> Result<DMatrix<Complex64>> {
        let idx = indices.elements();
        for &i in idx {
            if i < 0 || i as usize >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
        }
        Ok(DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            self.entry(idx[r] as usize, idx[c] as usize)
        }))
    }

    /// Real quadratic form ⟨x, Bx⟩.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            for j in 0..self.n {
                s += x[i].conj() * self.entry(i, j) * x[j];
            }
        }
        debug_assert!(
            s.im.abs() < 1e-12 * s.re.abs().max(1.0),
            "quadratic form imaginary residue {}",
            s.im
        );
        Ok(s.re)
    }

    /// Smallest eigenvalue with a unit eigenvector witness.
    pub fn smallest_eigenvalue(&self) -> Result<(f64, Vec<Complex64>)> {
        let (lambda, v) = smallest_eigenpair(&self.to_dense())?;
        Ok((lambda, v.iter().copied().collect()))
    }

    /// Two-sided autocorrelation power sum S = b_0² + 2 Σ_{k≥1} |b_k|².
    pub fn autocorr_power_sum(&self) -> f64 {
        let b0 = self.autocorr[0].re;
        b0 * b0
            + 2.0
                * self.autocorr[1..]
                    .iter()
                    .map(|b| b.norm_sqr())
                    .sum::<f64>()
    }

    /// Determinant-based lower bound on the smallest eigenvalue,
    /// |det B| / (√n · S^{(n−1)/2}).
    pub fn det_eigen_lower_bound(&self) -> f64 {
        let det = self.to_dense().determinant().norm();
        let s = self.autocorr_power_sum();
        det / ((self.n as f64).sqrt() * s.powf((self.n as f64 - 1.0) / 2.0))
    }

    pub fn to_json(&self) -> String {
        let repr = MatrixJson {
            n: self.n,
            autocorr: self.autocorr.iter().map(|b| (b.re, b.im)).collect(),
        };
        serde_json::to_string(&repr).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let repr: MatrixJson = serde_json::from_str(s)?;
        if repr.autocorr.len() != repr.n {
            return Err(Error::LengthMismatch {
                expected: repr.n,
                got: repr.autocorr.len(),
            });
        }
        Self::from_autocorr(
            repr.autocorr
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

/// Largest deviation of a square matrix from its conjugate transpose.
pub fn hermitian_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Smallest eigenvalue and unit eigenvector of a Hermitian matrix.
///
/// Full diagonalization; the matrices here are tiny. Rejects non-Hermitian
/// input (asymmetry above 1e-12) and non-square input.
pub fn smallest_eigenpair(m: &DMatrix<Complex64>) -> Result<(f64, DVector<Complex64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::LengthMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.is_empty() {
        return Err(Error::EmptySequence);
    }
    let asym = hermitian_asymmetry(m);
    if asym > HERMITIAN_TOL {
        return Err(Error::NonHermitian {
            asymmetry: asym,
            tol: HERMITIAN_TOL,
        });
    }
    // Average out the sub-tolerance asymmetry so the decomposition sees an
    // exactly Hermitian matrix.
    let h = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * Complex64::new(0.5, 0.0)
    });
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut best = 0usize;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    let lambda = eig.eigenvalues[best];
    let mut v = eig.eigenvectors.column(best).into_owned();
    let norm = v.norm();
    if norm > 0.0 {
        v /= Complex64::new(norm, 0.0);
    }
    Ok((lambda, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn half_pair() -> Vec<Complex64> {
        let r = 1.0 / 2f64.sqrt();
        vec![cv(r), cv(r)]
    }

    fn spaced_triple() -> Vec<Complex64> {
        let r = 1.0 / 2f64.sqrt();
        vec![cv(r), cv(0.0), cv(r)]
    }

    #[test]
    fn autocorrelation_examples() {
        let b = autocorrelation(&half_pair()).unwrap();
        assert!((b[0] - cv(1.0)).norm() < 1e-15);
        assert!((b[1] - cv(0.5)).norm() < 1e-15);

        let b = autocorrelation(&spaced_triple()).unwrap();
        assert!((b[0] - cv(1.0)).norm() < 1e-15);
        assert!(b[1].norm() < 1e-15);
        assert!((b[2] - cv(0.5)).norm() < 1e-15);

        let b = autocorrelation(&[cv(1.0)]).unwrap();
        assert_eq!(b, vec![cv(1.0)]);
    }

    #[test]
    fn build_matrix_examples() {
        let m = AutocorrToeplitz::from_generator(&half_pair())
            .unwrap()
            .to_dense();
        assert!((m[(0, 0)] - cv(1.0)).norm() < 1e-15);
        assert!((m[(0, 1)] - cv(0.5)).norm() < 1e-15);
        assert!((m[(1, 0)] - cv(0.5)).norm() < 1e-15);
        assert!((m[(1, 1)] - cv(1.0)).norm() < 1e-15);

        let delta: Vec<_> = std::iter::once(cv(1.0))
            .chain(std::iter::repeat_n(cv(0.0), 4))
            .collect();
        let id = AutocorrToeplitz::from_generator(&delta).unwrap().to_dense();
        assert_eq!(id, DMatrix::identity(5, 5));
    }

    #[test]
    fn symbol_examples() {
        let b = AutocorrToeplitz::from_generator(&half_pair()).unwrap();
        assert!((b.symbol_eval(0.0) - 2.0).abs() < 1e-14);
        assert!(b.symbol_eval(std::f64::consts::PI).abs() < 1e-14);

        let delta = AutocorrToeplitz::from_generator(&[cv(1.0), cv(0.0), cv(0.0)]).unwrap();
        for w in [0.0, 1.0, 2.5, 6.0] {
            assert!((delta.symbol_eval(w) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn symbol_min_examples() {
        let b = AutocorrToeplitz::from_generator(&half_pair()).unwrap();
        let min = b.symbol_min(4096).unwrap();
        assert!(min.abs() < 1e-9);
        assert!(min >= -1e-9);

        let delta = AutocorrToeplitz::from_generator(&[cv(1.0), cv(0.0)]).unwrap();
        assert!((delta.symbol_min(4096).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(
            b.symbol_min(3),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn smallest_eigenvalue_examples() {
        let b = AutocorrToeplitz::from_generator(&half_pair()).unwrap();
        let (lambda, v) = b.smallest_eigenvalue().unwrap();
        assert!((lambda - 0.5).abs() < 1e-12);
        // Witness spans (1,-1)/sqrt(2) up to phase.
        assert!((v[0].norm() - 1.0 / 2f64.sqrt()).abs() < 1e-10);
        assert!((v[0] + v[1]).norm() < 1e-10);

        let id = AutocorrToeplitz::from_autocorr(vec![cv(1.0), cv(0.0), cv(0.0)]).unwrap();
        assert!((id.smallest_eigenvalue().unwrap().0 - 1.0).abs() < 1e-12);

        let b3 = AutocorrToeplitz::from_generator(&spaced_triple()).unwrap();
        assert!((b3.smallest_eigenvalue().unwrap().0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn eigen_residual_is_tight() {
        let b = AutocorrToeplitz::from_generator(&[
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.1, 0.6),
            Complex64::new(0.5, -0.4),
            Complex64::new(0.2, 0.1),
        ])
        .unwrap();
        let m = b.to_dense();
        let (lambda, v) = smallest_eigenpair(&m).unwrap();
        let residual = (&m * &v - &v * Complex64::new(lambda, 0.0)).norm();
        assert!(residual <= 1e-10, "residual {residual}");
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::from_element(2, 2, cv(1.0));
        m[(0, 1)] = Complex64::new(0.0, 0.5);
        m[(1, 0)] = Complex64::new(0.0, 0.5); // conj would be -0.5i
        assert!(matches!(
            smallest_eigenpair(&m),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn principal_submatrix_examples() {
        let b = AutocorrToeplitz::from_generator(&spaced_triple()).unwrap();
        let full = b
            .principal_submatrix(&SupportSet::new(vec![0, 1, 2]).unwrap())
            .unwrap();
        assert_eq!(full, b.to_dense());

        let corner = b
            .principal_submatrix(&SupportSet::new(vec![0]).unwrap())
            .unwrap();
        assert!((corner[(0, 0)] - cv(1.0)).norm() < 1e-15);

        let skip = b
            .principal_submatrix(&SupportSet::new(vec![0, 2]).unwrap())
            .unwrap();
        assert!((skip[(0, 1)] - cv(0.5)).norm() < 1e-15);
        assert!((skip[(1, 0)] - cv(0.5)).norm() < 1e-15);

        assert!(b
            .principal_submatrix(&SupportSet::new(vec![0, 3]).unwrap())
            .is_err());
    }

    #[test]
    fn quadratic_form_examples() {
        let b = AutocorrToeplitz::from_generator(&half_pair()).unwrap();
        let e0 = [cv(1.0), cv(0.0)];
        assert!((b.quadratic_form(&e0).unwrap() - 1.0).abs() < 1e-14);

        let r = 1.0 / 2f64.sqrt();
        let w = [cv(r), cv(-r)];
        assert!((b.quadratic_form(&w).unwrap() - 0.5).abs() < 1e-14);

        assert!(b.quadratic_form(&[cv(1.0)]).is_err());
    }

    #[test]
    fn det_bound_examples() {
        let b = AutocorrToeplitz::from_generator(&half_pair()).unwrap();
        // det = 3/4, S = 3/2, bound = (3/4)/(sqrt(2) sqrt(3/2))
        let expected = 0.75 / (2f64.sqrt() * 1.5f64.sqrt());
        let bound = b.det_eigen_lower_bound();
        assert!((bound - expected).abs() < 1e-12);
        assert!((bound - 0.4330).abs() < 1e-4);
        assert!(bound <= b.smallest_eigenvalue().unwrap().0 + 1e-10);

        let delta: Vec<_> = std::iter::once(cv(1.0))
            .chain(std::iter::repeat_n(cv(0.0), 3))
            .collect();
        let id = AutocorrToeplitz::from_generator(&delta).unwrap();
        assert!((id.det_eigen_lower_bound() - 0.5).abs() < 1e-12); // 1/sqrt(4)
        assert!(id.autocorr_power_sum() < 2.0 * 4.0);
    }

    #[test]
    fn json_roundtrip() {
        let b = AutocorrToeplitz::from_generator(&spaced_triple()).unwrap();
        let back = AutocorrToeplitz::from_json(&b.to_json()).unwrap();
        assert_eq!(back.autocorr(), b.autocorr());
        assert_eq!(back.dim(), b.dim());
    }
}
