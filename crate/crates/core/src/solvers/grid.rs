use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::superop::{PauliEigenvalues, Superoperator};

/// Uniform grid `t_i = i·h`, `i = 0..=n_steps`, with `h = t_end / n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
        }
        if n_steps == 0 {
            return Err(Error::InvalidParameter("n_steps must be positive".into()));
        }
        Ok(Self { t_end, n_steps })
    }

    /// Grid with step as close to `h` as an integer step count allows.
    pub fn with_step(t_end: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {h}")));
        }
        Self::new(t_end, (t_end / h).round().max(1.0) as usize)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.n_steps as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        if i == self.n_steps {
            self.t_end
        } else {
            self.t_end * i as f64 / self.n_steps as f64
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.time(i))
    }

    /// Index of the grid point at `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let x = t / self.step();
        let i = x.round();
        if i < 0.0 || i > self.n_steps as f64 || (x - i).abs() > 1e-6 {
            None
        } else {
            Some(i as usize)
        }
    }
}

/// Samples of a dynamical map on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub enum Samples {
    General(Vec<Superoperator>),
    Pauli(Vec<PauliEigenvalues>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    General,
    Pauli,
}

const INITIAL_IDENTITY_TOL: f64 = 1e-12;
const PAULI_READBACK_TOL: f64 = 1e-9;

/// A dynamical map sampled on a grid, starting from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct MapTrajectory {
    grid: TimeGrid,
    samples: Samples,
}

impl MapTrajectory {
    pub fn new(grid: TimeGrid, samples: Samples) -> Result<Self> {
        let (len, initial_residual) = match &samples {
            Samples::General(v) => (
                v.len(),
                v.first()
                    .map(|s| s.max_abs_diff(&Superoperator::identity(s.dim())))
                    .unwrap_or(f64::INFINITY),
            ),
            Samples::Pauli(v) => (
                v.len(),
                v.first()
                    .map(|l| l.0.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max))
                    .unwrap_or(f64::INFINITY),
            ),
        };
        if len != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: len,
            });
        }
        if initial_residual > INITIAL_IDENTITY_TOL {
            return Err(Error::InvalidParameter(format!(
                "trajectory must start at the identity (residual {initial_residual:.3e})"
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn pauli(grid: TimeGrid, samples: Vec<PauliEigenvalues>) -> Result<Self> {
        Self::new(grid, Samples::Pauli(samples))
    }

    pub fn general(grid: TimeGrid, samples: Vec<Superoperator>) -> Result<Self> {
        Self::new(grid, Samples::General(samples))
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    pub fn representation(&self) -> Representation {
        match self.samples {
            Samples::General(_) => Representation::General,
            Samples::Pauli(_) => Representation::Pauli,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.samples {
            Samples::General(v) => v[0].dim(),
            Samples::Pauli(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn superop_at(&self, i: usize) -> Superoperator {
        match &self.samples {
            Samples::General(v) => v[i].clone(),
            Samples::Pauli(v) => v[i].to_superop(),
        }
    }

    /// Pauli eigenvalues of every sample. General samples are read back and
    /// must be diagonal in the Pauli basis.
    pub fn pauli_samples(&self) -> Result<Vec<PauliEigenvalues>> {
        match &self.samples {
            Samples::Pauli(v) => Ok(v.clone()),
            Samples::General(v) => v
                .iter()
                .map(|s| {
                    let residual = s.pauli_diagonal_residual()?;
                    if residual > PAULI_READBACK_TOL {
                        return Err(Error::InvalidParameter(format!(
                            "map is not a Pauli map (residual {residual:.3e})"
                        )));
                    }
                    s.pauli_eigenvalues()
                })
                .collect(),
        }
    }

    /// Converts a general trajectory to the Pauli fast path when possible.
    pub fn to_pauli(&self) -> Result<Self> {
        Self::pauli(self.grid, self.pauli_samples()?)
    }

    pub fn to_general(&self) -> Self {
        let samples = (0..self.len()).map(|i| self.superop_at(i)).collect();
        Self {
            grid: self.grid,
            samples: Samples::General(samples),
        }
    }

    /// Time series of `λ_k` (`k` in `0..3`).
    pub fn component(&self, k: usize) -> Result<Vec<f64>> {
        Ok(self.pauli_samples()?.iter().map(|l| l.0[k]).collect())
    }

    /// Largest deviation between two trajectories on the same grid.
    pub fn max_abs_diff(&self, other: &MapTrajectory) -> f64 {
        match (&self.samples, &other.samples) {
            (Samples::Pauli(a), Samples::Pauli(b)) => a
                .iter()
                .zip(b)
                .flat_map(|(x, y)| (0..3).map(move |k| (x.0[k] - y.0[k]).abs()))
                .fold(0.0, f64::max),
            _ => (0..self.len().min(other.len()))
                .map(|i| self.superop_at(i).max_abs_diff(&other.superop_at(i)))
                .fold(0.0, f64::max),
        }
    }
}
