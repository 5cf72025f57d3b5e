//! Divisibility of sampled dynamical maps: intermediate maps, CP and P
//! divisibility checks, the step-deformation witness and the resulting
//! Markovianity classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{TimeDeformation, TimeLocalGenerator};
use crate::solvers::algebra::derivative;
use crate::solvers::{propagate_local, MapTrajectory, Samples, TimeGrid};
use crate::superop::{PauliEigenvalues, Superoperator, EPS_SINGULAR};

fn grid_index(grid: &TimeGrid, t: f64) -> Result<usize> {
    grid.index_of(t).ok_or(Error::OutOfRange {
        t,
        min: 0.0,
        max: grid.t_end(),
    })
}

fn pauli_ratio(later: &PauliEigenvalues, earlier: &PauliEigenvalues) -> Result<PauliEigenvalues> {
    let smallest = earlier.0.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if smallest < EPS_SINGULAR {
        return Err(Error::SingularMap { rcond: smallest });
    }
    Ok(PauliEigenvalues([0, 1, 2].map(|k| later.0[k] / earlier.0[k])))
}

/// `V(t₂, t₁) = Φ(t₂) Φ(t₁)⁻¹` for grid times `t₂ ≥ t₁`.
pub fn intermediate_map(traj: &MapTrajectory, t1: f64, t2: f64) -> Result<Superoperator> {
    if t2 < t1 {
        return Err(Error::InvalidParameter(format!("need t2 >= t1, got t1 = {t1}, t2 = {t2}")));
    }
    let (i1, i2) = (grid_index(traj.grid(), t1)?, grid_index(traj.grid(), t2)?);
    match traj.samples() {
        Samples::Pauli(v) => Ok(pauli_ratio(&v[i2], &v[i1])?.to_superop()),
        Samples::General(v) => v[i2].compose(&v[i1].inverse()?),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpDivisibilityReport {
    pub cp_divisible: bool,
    pub worst_pair: (f64, f64),
    pub min_choi_eigenvalue: f64,
    pub pairs_checked: usize,
}

/// Checks `V(t₂, t₁)` for every pair of grid points that are multiples of
/// `stride`, with `t₂ > t₁`. Choi eigenvalues use trace `d` normalization.
pub fn cp_divisibility_report(traj: &MapTrajectory, stride: usize, tol: f64) -> Result<CpDivisibilityReport> {
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be positive".into()));
    }
    let grid = *traj.grid();
    let n = grid.n_steps();
    let starts: Vec<usize> = (0..n).step_by(stride).collect();

    // (min eigenvalue, i1, i2, pairs) for each starting point
    let per_start: Result<Vec<(f64, usize, usize, usize)>> = match traj.samples() {
        Samples::Pauli(v) => starts
            .par_iter()
            .map(|&i1| {
                let mut best = (f64::INFINITY, i1, i1, 0);
                for i2 in (i1 + stride..=n).step_by(stride) {
                    let m = pauli_ratio(&v[i2], &v[i1])?.min_choi_eigenvalue();
                    if m < best.0 {
                        best = (m, i1, i2, best.3);
                    }
                    best.3 += 1;
                }
                Ok(best)
            })
            .collect(),
        Samples::General(v) => starts
            .par_iter()
            .map(|&i1| {
                let inverse = v[i1].inverse()?;
                let mut best = (f64::INFINITY, i1, i1, 0);
                for i2 in (i1 + stride..=n).step_by(stride) {
                    let m = v[i2].compose(&inverse)?.choi().min_eigenvalue()?;
                    if m < best.0 {
                        best = (m, i1, i2, best.3);
                    }
                    best.3 += 1;
                }
                Ok(best)
            })
            .collect(),
    };

    let mut min = f64::INFINITY;
    let mut pair = (0, 0);
    let mut pairs_checked = 0;
    for (m, i1, i2, count) in per_start? {
        pairs_checked += count;
        if m < min {
            min = m;
            pair = (i1, i2);
        }
    }
    if pairs_checked == 0 {
        return Err(Error::InvalidParameter(format!("stride {stride} leaves no pairs on a grid of {n} steps")));
    }
    Ok(CpDivisibilityReport {
        cp_divisible: min >= -tol,
        worst_pair: (grid.time(pair.0), grid.time(pair.1)),
        min_choi_eigenvalue: min,
        pairs_checked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PViolation {
    /// 1-based Pauli component.
    pub component: usize,
    pub t: f64,
    pub derivative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PDivisibilityReport {
    pub p_divisible: bool,
    pub violations: Vec<PViolation>,
}

/// Flags grid times where `d|λ_k|/dt > tol · max(1, |λ_k|)`, ordered by
/// component and then time.
pub fn p_divisibility_pauli(lambda: &[PauliEigenvalues], grid: &TimeGrid, tol: f64) -> Result<PDivisibilityReport> {
    if lambda.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            found: lambda.len(),
        });
    }
    let mut violations = Vec::new();
    for k in 0..3 {
        let magnitude: Vec<f64> = lambda.iter().map(|l| l.0[k].abs()).collect();
        let slope = derivative(&magnitude, grid.step());
        for (i, (&d, &m)) in slope.iter().zip(&magnitude).enumerate() {
            if d > tol * m.max(1.0) {
                violations.push(PViolation {
                    component: k + 1,
                    t: grid.time(i),
                    derivative: d,
                });
            }
        }
    }
    Ok(PDivisibilityReport {
        p_divisible: violations.is_empty(),
        violations,
    })
}

/// Earliest sample with `max_k |λ_k| > 1 + tol`, i.e. a map that is not even positive.
pub fn first_positivity_violation(lambda: &[PauliEigenvalues], grid: &TimeGrid, tol: f64) -> Option<(f64, PauliEigenvalues)> {
    lambda
        .iter()
        .enumerate()
        .find(|(_, l)| l.max_abs() > 1.0 + tol)
        .map(|(i, l)| (grid.time(i), *l))
}

#[derive(Debug, Clone, Serialize)]
pub struct StepWitness {
    pub t1: f64,
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
    pub worst_time: f64,
    pub final_min_choi_eigenvalue: f64,
    /// Largest deviation between the step-deformed samples and `Φ(t)Φ(t₁)⁻¹`.
    pub consistency_residual: f64,
    /// Largest deviation from the identity for `t ≤ t₁`.
    pub pre_step_residual: f64,
    #[serde(skip)]
    pub deformed: MapTrajectory,
}

impl StepWitness {
    /// Minimum Choi eigenvalue of the deformed map at grid time `t`.
    pub fn min_choi_at(&self, t: f64) -> Result<f64> {
        let i = grid_index(self.deformed.grid(), t)?;
        self.deformed.superop_at(i).choi().min_eigenvalue()
    }
}

/// Propagates the generator switched on at `t₁` and checks the result is a
/// channel at every grid time. A failure certifies CP indivisibility.
pub fn step_deformation_witness(gen: &TimeLocalGenerator, t1: f64, grid: &TimeGrid, tol: f64) -> Result<StepWitness> {
    let i1 = grid_index(grid, t1)?;
    let deformed = propagate_local(gen, &TimeDeformation::step(t1)?, grid)?;
    let original = propagate_local(gen, &TimeDeformation::Uniform(1.0), grid)?;
    let identity = Superoperator::identity(gen.dim());

    let pre_step_residual = (0..=i1)
        .map(|i| deformed.superop_at(i).max_abs_diff(&identity))
        .fold(0.0, f64::max);
    let inverse = original.superop_at(i1).inverse()?;

    let rows: Result<Vec<(f64, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let sample = deformed.superop_at(i);
            let min = sample.choi().min_eigenvalue()?;
            let residual = if i >= i1 {
                sample.max_abs_diff(&original.superop_at(i).compose(&inverse)?)
            } else {
                0.0
            };
            Ok((min, residual))
        })
        .collect();
    let rows = rows?;

    let mut worst = (f64::INFINITY, 0);
    let mut consistency_residual = 0.0_f64;
    for (i, (min, residual)) in rows.iter().enumerate() {
        if *min < worst.0 {
            worst = (*min, i);
        }
        consistency_residual = consistency_residual.max(*residual);
    }
    Ok(StepWitness {
        t1: grid.time(i1),
        is_cp: worst.0 >= -tol,
        min_choi_eigenvalue: worst.0,
        worst_time: grid.time(worst.1),
        final_min_choi_eigenvalue: rows[rows.len() - 1].0,
        consistency_residual,
        pre_step_residual,
        deformed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    CpDivisible,
    WeaklyNonMarkovian,
    EssentiallyNonMarkovian,
    InconclusiveNoninvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub stride: usize,
    pub cp_tol: f64,
    pub fd_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            stride: 10,
            cp_tol: 1e-9,
            fd_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub classification: Classification,
    pub worst_pair: Option<(f64, f64)>,
    pub min_choi_eigenvalue: Option<f64>,
    pub pairs_checked: usize,
    /// False for trajectories that are not Pauli maps, where only CP
    /// divisibility is examined and `WEAKLY_NON_MARKOVIAN` means "at least weakly".
    pub p_divisibility_assessed: bool,
    pub p_violations: Vec<PViolation>,
    pub singular_at: Option<f64>,
    pub tolerances: ClassifyOptions,
}

/// Three-way taxonomy: CP divisible, CP indivisible but P divisible, or P indivisible.
pub fn classify_dynamics(traj: &MapTrajectory, options: &ClassifyOptions) -> DivisibilityReport {
    let pauli = traj.pauli_samples().ok();
    let p_report = pauli
        .as_ref()
        .and_then(|l| p_divisibility_pauli(l, traj.grid(), options.fd_tol).ok());
    let mut report = DivisibilityReport {
        classification: Classification::InconclusiveNoninvertible,
        worst_pair: None,
        min_choi_eigenvalue: None,
        pairs_checked: 0,
        p_divisibility_assessed: p_report.is_some(),
        p_violations: p_report.as_ref().map(|r| r.violations.clone()).unwrap_or_default(),
        singular_at: None,
        tolerances: *options,
    };

    let source = match &pauli {
        Some(l) => MapTrajectory::pauli(*traj.grid(), l.clone()),
        None => Ok(traj.clone()),
    };
    let cp = source.and_then(|t| cp_divisibility_report(&t, options.stride, options.cp_tol));
    match cp {
        Err(Error::SingularMap { .. }) => {
            report.singular_at = first_singular_time(traj);
        }
        Err(_) => {}
        Ok(cp) => {
            report.worst_pair = Some(cp.worst_pair);
            report.min_choi_eigenvalue = Some(cp.min_choi_eigenvalue);
            report.pairs_checked = cp.pairs_checked;
            report.classification = if !report.p_violations.is_empty() {
                Classification::EssentiallyNonMarkovian
            } else if cp.cp_divisible {
                Classification::CpDivisible
            } else {
                Classification::WeaklyNonMarkovian
            };
        }
    }
    report
}

fn first_singular_time(traj: &MapTrajectory) -> Option<f64> {
    (0..traj.len())
        .find(|&i| traj.superop_at(i).reciprocal_condition() < EPS_SINGULAR)
        .map(|i| traj.grid().time(i))
}
