//! Linear maps on `B(H)` in the column-stacking vectorization.
//!
//! An operator `X` on a `d`-dimensional space is flattened as
//! `vec(X)[i + d*j] = X[i, j]`, so `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. Every
//! dynamical map, generator and kernel in the crate is stored as a
//! [`Superoperator`] in this basis.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Reciprocal condition number below which a map counts as non-invertible.
pub const EPS_SINGULAR: f64 = 1e-12;

/// Default tolerance for Choi-positivity tests in dimension `dim`.
pub fn default_cp_tol(dim: usize) -> f64 {
    1e-9 * dim as f64
}

const HERMITICITY_TOL: f64 = 1e-9;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The three Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli_matrices() -> [CMatrix; 3] {
    let zero = c(0.0);
    let one = c(1.0);
    let i = Complex64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
        CMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
        CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
    ]
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

fn vectorize(x: &CMatrix) -> nalgebra::DVector<Complex64> {
    // nalgebra stores column-major, which is exactly column stacking.
    nalgebra::DVector::from_column_slice(x.as_slice())
}

fn unvectorize(v: &[Complex64], dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    entries: CMatrix,
}

impl DensityOperator {
    pub fn new(entries: CMatrix, tol: f64) -> Result<Self> {
        let d = entries.nrows();
        if entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.ncols(),
            });
        }
        let deviation = max_abs(&(&entries - entries.adjoint()));
        if deviation > tol {
            return Err(Error::InvalidParameter(format!(
                "density operator not Hermitian (deviation {deviation:.3e})"
            )));
        }
        let trace = entries.trace();
        if (trace - c(1.0)).norm() > tol {
            return Err(Error::InvalidParameter(format!(
                "density operator trace {trace} differs from 1"
            )));
        }
        let hermitian = (&entries + entries.adjoint()) * c(0.5);
        let min = SymmetricEigen::new(hermitian)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min < -tol {
            return Err(Error::InvalidParameter(format!(
                "density operator has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }
}

/// Outcome of a complete-positivity test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
}

/// A linear map on `d × d` operators, stored as a `d² × d²` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("superoperator entry".into()));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::zeros(dim * dim, dim * dim),
        }
    }

    /// Builds the map from its action on operators, one matrix unit at a time.
    pub fn from_action(dim: usize, action: impl Fn(&CMatrix) -> CMatrix) -> Self {
        let n = dim * dim;
        let mut matrix = CMatrix::zeros(n, n);
        for j in 0..dim {
            for i in 0..dim {
                let mut unit = CMatrix::zeros(dim, dim);
                unit[(i, j)] = c(1.0);
                let image = action(&unit);
                matrix.set_column(i + dim * j, &vectorize(&image));
            }
        }
        Self { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.nrows() != self.dim || x.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.nrows(),
            });
        }
        let image = &self.matrix * vectorize(x);
        Ok(unvectorize(image.as_slice(), self.dim))
    }

    pub fn apply_state(&self, rho: &DensityOperator) -> Result<CMatrix> {
        self.apply(rho.entries())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            matrix: &self.matrix * c(factor),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Superoperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Reciprocal condition number in the spectral norm.
    pub fn reciprocal_condition(&self) -> f64 {
        let sv = self.matrix.clone().singular_values();
        let max = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
        let min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if max == 0.0 {
            0.0
        } else {
            min / max
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let rcond = self.reciprocal_condition();
        if !(rcond >= EPS_SINGULAR) {
            return Err(Error::SingularMap { rcond });
        }
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::SingularMap { rcond })?;
        Ok(Self {
            dim: self.dim,
            matrix: inv,
        })
    }

    /// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)`; its trace is `d` for trace-preserving maps.
    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let n = d * d;
        let mut entries = CMatrix::zeros(n, n);
        for i in 0..d {
            for j in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        entries[(i * d + a, j * d + b)] = self.matrix[(a + d * b, i + d * j)];
                    }
                }
            }
        }
        ChoiMatrix { dim: d, entries }
    }

    pub fn is_completely_positive(&self, tol: f64) -> Result<CpReport> {
        let min_eigenvalue = self.choi().min_eigenvalue()?;
        Ok(CpReport {
            is_cp: min_eigenvalue >= -tol,
            min_eigenvalue,
        })
    }

    /// Checks `tr Φ(E_ij) = δ_ij` on all matrix units.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let d = self.dim;
        (0..d).all(|i| {
            (0..d).all(|j| {
                let col = i + d * j;
                let trace: Complex64 = (0..d).map(|a| self.matrix[(a + d * a, col)]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                (trace - c(expected)).norm() <= tol
            })
        })
    }

    /// Reads back `λ_k = ½ tr(σ_k Φ(σ_k))` from a qubit map.
    pub fn pauli_eigenvalues(&self) -> Result<PauliEigenvalues> {
        if self.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim,
            });
        }
        let sigma = pauli_matrices();
        let mut lambda = [0.0; 3];
        for (k, s) in sigma.iter().enumerate() {
            let image = self.apply(s)?;
            lambda[k] = 0.5 * (s * image).trace().re;
        }
        Ok(PauliEigenvalues(lambda))
    }

    /// Largest entrywise deviation from a map that is diagonal in the Pauli basis
    /// with unit action on the identity.
    pub fn pauli_diagonal_residual(&self) -> Result<f64> {
        let lambda = self.pauli_eigenvalues()?;
        Ok(self.max_abs_diff(&pauli_map_from_eigenvalues(lambda)))
    }

    pub fn max_abs_diff(&self, other: &Superoperator) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// Induced 1-norm (maximum absolute column sum) of the matrix.
    pub fn one_norm(&self) -> f64 {
        self.matrix
            .column_iter()
            .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Choi matrix of a map in dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    entries: CMatrix,
}

impl ChoiMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    /// Ascending eigenvalues. Fails when the matrix is not Hermitian.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let deviation = self.hermiticity_deviation();
        let scale = max_abs(&self.entries).max(1.0);
        if deviation > HERMITICITY_TOL * scale {
            return Err(Error::NonHermitianChoi { deviation });
        }
        let hermitian = (&self.entries + self.entries.adjoint()) * c(0.5);
        let mut values: Vec<f64> = SymmetricEigen::new(hermitian)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }
}

/// Eigenvalues `(λ₁, λ₂, λ₃)` of a unital qubit Pauli map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliEigenvalues(pub [f64; 3]);

impl PauliEigenvalues {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        Self([l1, l2, l3])
    }

    pub fn identity() -> Self {
        Self([1.0; 3])
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    /// Elementwise product: the eigenvalues of the composed map.
    pub fn compose(&self, other: &PauliEigenvalues) -> Self {
        Self([
            self.0[0] * other.0[0],
            self.0[1] * other.0[1],
            self.0[2] * other.0[2],
        ])
    }

    /// Choi eigenvalues in trace-2 normalization, i.e. twice the Pauli
    /// probabilities `¼(1 ± λ₁ ± λ₂ ± λ₃)`.
    pub fn choi_eigenvalues(&self) -> [f64; 4] {
        let [l1, l2, l3] = self.0;
        [
            0.5 * (1.0 + l1 + l2 + l3),
            0.5 * (1.0 + l1 - l2 - l3),
            0.5 * (1.0 - l1 + l2 - l3),
            0.5 * (1.0 - l1 - l2 + l3),
        ]
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        self.choi_eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |a, &b| a.max(b.abs()))
    }

    pub fn to_superop(&self) -> Superoperator {
        pauli_map_from_eigenvalues(*self)
    }
}

/// `ϱ ↦ ½(tr ϱ · I + Σ λ_k tr(σ_k ϱ) σ_k)`.
pub fn pauli_map_from_eigenvalues(lambda: PauliEigenvalues) -> Superoperator {
    let sigma = pauli_matrices();
    Superoperator::from_action(2, |x| {
        let mut out = CMatrix::identity(2, 2) * (x.trace() * 0.5);
        for (k, s) in sigma.iter().enumerate() {
            let coeff = (s * x).trace() * 0.5 * lambda.0[k];
            out += s * coeff;
        }
        out
    })
}

/// Complete positivity of a Pauli map via its four Choi eigenvalues.
pub fn fujiwara_algoet_check(lambda: PauliEigenvalues, tol: f64) -> bool {
    lambda.min_choi_eigenvalue() >= -tol
}

/// Positivity of a Pauli map: every `|λ_k| ≤ 1`.
pub fn is_positive_pauli(lambda: PauliEigenvalues, tol: f64) -> bool {
    lambda.max_abs() <= 1.0 + tol
}
