//! Uniform dilation of a convolution-governed map through repeated
//! convolutions of its derivative:
//!
//! ```text
//! dΦ̃/dt = α² Σ_n (α² − 1)ⁿ D^{∗(n+1)},        D = dΦ/dt
//! Φ̃     = Φ + Σ_{n≥1} (α² − 1)ⁿ (D^{∗n} ∗ Φ)
//! ```
//!
//! Both expansions converge when `‖(1 − α²) D_s‖ < 1` on the sampled `s`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::algebra::{convolve, cumulative_integral, derivative, Element};
use super::grid::{MapTrajectory, Samples, TimeGrid};
use super::laplace::S_MIN;
use crate::error::{Error, Result};
use crate::superop::{CMatrix, PauliEigenvalues, Superoperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub satisfied: bool,
    /// Largest sampled `(1 − α²)‖D_s‖`.
    pub worst_ratio: f64,
    pub worst_s: (f64, f64),
    pub samples_checked: usize,
}

#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub trajectory: MapTrajectory,
    /// Highest power of `(α² − 1)` included.
    pub n_used: usize,
    pub last_term_norm: f64,
    pub validity: ValidityReport,
}

impl SeriesResult {
    /// The trajectory, or [`Error::ValidityViolated`] when the expansion is
    /// not guaranteed to converge.
    pub fn trusted(self) -> Result<MapTrajectory> {
        if self.validity.satisfied {
            Ok(self.trajectory)
        } else {
            Err(Error::ValidityViolated {
                worst: self.validity.worst_ratio,
            })
        }
    }
}

/// Points where the norm condition is enforced: the real ray
/// `s_min·2^j`, `j = 0..=20`, and the vertical line `Re s = 1` at
/// `Im s = 2^j`, `j = −2..=6`.
pub fn validity_sample_points() -> Vec<Complex64> {
    let ray = (0..=20).map(|j| Complex64::new(S_MIN * 2f64.powi(j), 0.0));
    let line = (-2..=6).map(|j| Complex64::new(1.0, 2f64.powi(j)));
    ray.chain(line).collect()
}

fn truncated_laplace<T: Element + Scalable>(samples: &[T], h: f64, s: Complex64) -> T::Transform {
    let n = samples.len();
    let mut acc = T::transform_zero(&samples[0]);
    for (i, v) in samples.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        T::transform_add(&mut acc, (-s * (i as f64 * h)).exp() * w, v);
    }
    acc
}

/// Hooks for transforming samples into the `s` domain.
pub(crate) trait Scalable {
    type Transform;
    fn transform_zero(like: &Self) -> Self::Transform;
    fn transform_add(acc: &mut Self::Transform, w: Complex64, x: &Self);
    fn transform_norm(t: &Self::Transform) -> f64;
}

impl Scalable for f64 {
    type Transform = Complex64;
    fn transform_zero(_: &Self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn transform_add(acc: &mut Complex64, w: Complex64, x: &f64) {
        *acc += w * x;
    }
    fn transform_norm(t: &Complex64) -> f64 {
        t.norm()
    }
}

impl Scalable for CMatrix {
    type Transform = CMatrix;
    fn transform_zero(like: &CMatrix) -> CMatrix {
        like.zero_like()
    }
    fn transform_add(acc: &mut CMatrix, w: Complex64, x: &CMatrix) {
        *acc += x * w;
    }
    fn transform_norm(t: &CMatrix) -> f64 {
        t.column_iter()
            .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn validity_for<T: Element + Scalable>(derivs: &[Vec<T>], h: f64, alpha: f64) -> ValidityReport {
    let factor = 1.0 - alpha * alpha;
    let points = validity_sample_points();
    let mut worst_ratio = 0.0_f64;
    let mut worst_s = (points[0].re, points[0].im);
    for d in derivs {
        for s in &points {
            let ratio = factor * T::transform_norm(&truncated_laplace(d, h, *s));
            if ratio > worst_ratio {
                worst_ratio = ratio;
                worst_s = (s.re, s.im);
            }
        }
    }
    ValidityReport {
        satisfied: worst_ratio < 1.0,
        worst_ratio,
        worst_s,
        samples_checked: points.len() * derivs.len(),
    }
}

enum Expansion {
    Derivative,
    Map,
}

fn sup_norm<T: Element>(v: &[T]) -> f64 {
    v.iter().map(Element::sup_norm).fold(0.0, f64::max)
}

/// Returns the deformed samples, the number of terms, and the last term norm.
fn expand<T: Element>(phi: &[T], d: &[T], h: f64, alpha: f64, n_max: usize, tol: f64, kind: &Expansion) -> (Vec<T>, usize, f64) {
    let a2 = alpha * alpha;
    let ratio = a2 - 1.0;
    let identity = phi[0].clone();
    // term_n = D^{∗(n+1)} for the derivative form, D^{∗n} ∗ Φ for the map form
    let mut term: Vec<T> = match kind {
        Expansion::Derivative => d.to_vec(),
        Expansion::Map => phi.to_vec(),
    };
    let lead = match kind {
        Expansion::Derivative => a2,
        Expansion::Map => 1.0,
    };
    let mut acc: Vec<T> = term
        .iter()
        .map(|x| {
            let mut y = x.zero_like();
            y.add_scaled(lead, x);
            y
        })
        .collect();
    let mut n_used = 0;
    let mut last_norm = lead.abs() * sup_norm(&term);
    let mut coeff = lead;
    for n in 1..=n_max {
        coeff *= ratio;
        if coeff == 0.0 {
            last_norm = 0.0;
            break;
        }
        term = convolve(d, &term, h);
        let norm = coeff.abs() * sup_norm(&term);
        for (a, x) in acc.iter_mut().zip(&term) {
            a.add_scaled(coeff, x);
        }
        n_used = n;
        last_norm = norm;
        if norm < tol {
            break;
        }
    }
    let out = match kind {
        Expansion::Derivative => cumulative_integral(&identity, &acc, h),
        Expansion::Map => acc,
    };
    (out, n_used, last_norm)
}

fn run_series(traj: &MapTrajectory, alpha: f64, n_max: usize, tol: f64, kind: Expansion) -> Result<SeriesResult> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let grid: TimeGrid = *traj.grid();
    if grid.len() < 3 {
        return Err(Error::InvalidParameter("series needs at least three grid points".into()));
    }
    let h = grid.step();
    match traj.samples() {
        Samples::Pauli(samples) => {
            let comps: Vec<Vec<f64>> = (0..3).map(|k| samples.iter().map(|l| l.0[k]).collect()).collect();
            let derivs: Vec<Vec<f64>> = comps.iter().map(|c| derivative(c, h)).collect();
            let validity = validity_for(&derivs, h, alpha);
            if alpha == 1.0 {
                return Ok(SeriesResult {
                    trajectory: traj.clone(),
                    n_used: 0,
                    last_term_norm: 0.0,
                    validity,
                });
            }
            let mut outs = Vec::with_capacity(3);
            let mut n_used = 0;
            let mut last = 0.0_f64;
            for (c, d) in comps.iter().zip(&derivs) {
                let (out, n, norm) = expand(c, d, h, alpha, n_max, tol, &kind);
                n_used = n_used.max(n);
                last = last.max(norm);
                outs.push(out);
            }
            let samples = (0..grid.len())
                .map(|i| PauliEigenvalues([outs[0][i], outs[1][i], outs[2][i]]))
                .collect();
            Ok(SeriesResult {
                trajectory: MapTrajectory::pauli(grid, samples)?,
                n_used,
                last_term_norm: last,
                validity,
            })
        }
        Samples::General(samples) => {
            let dim = samples[0].dim();
            let mats: Vec<CMatrix> = samples.iter().map(|s| s.matrix().clone()).collect();
            let d = derivative(&mats, h);
            let validity = validity_for(std::slice::from_ref(&d), h, alpha);
            if alpha == 1.0 {
                return Ok(SeriesResult {
                    trajectory: traj.clone(),
                    n_used: 0,
                    last_term_norm: 0.0,
                    validity,
                });
            }
            let (out, n_used, last) = expand(&mats, &d, h, alpha, n_max, tol, &kind);
            let samples: Result<Vec<Superoperator>> = out.into_iter().map(|m| Superoperator::new(dim, m)).collect();
            Ok(SeriesResult {
                trajectory: MapTrajectory::general(grid, samples?)?,
                n_used,
                last_term_norm: last,
                validity,
            })
        }
    }
}

/// Deformed map via the series for `dΦ̃/dt`, integrated cumulatively from `Id`.
pub fn deformed_derivative_series(traj: &MapTrajectory, alpha: f64, n_max: usize, tol: f64) -> Result<SeriesResult> {
    run_series(traj, alpha, n_max, tol, Expansion::Derivative)
}

/// Deformed map via the series for `Φ̃` itself.
pub fn deformed_map_series(traj: &MapTrajectory, alpha: f64, n_max: usize, tol: f64) -> Result<SeriesResult> {
    run_series(traj, alpha, n_max, tol, Expansion::Map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::dephasing_sin_lambda;

    fn example2(grid: &TimeGrid) -> MapTrajectory {
        let samples = grid
            .times()
            .map(|t| {
                let l = dephasing_sin_lambda(1.0, 1.0, t);
                PauliEigenvalues([l, l, 1.0])
            })
            .collect();
        MapTrajectory::pauli(*grid, samples).unwrap()
    }

    #[test]
    fn unit_alpha_is_identity_operation() {
        let grid = TimeGrid::new(5.0, 500).unwrap();
        let traj = example2(&grid);
        let r = deformed_derivative_series(&traj, 1.0, 50, 1e-10).unwrap();
        assert_eq!(r.n_used, 0);
        assert_eq!(r.trajectory, traj);
        let r = deformed_map_series(&traj, 1.0, 50, 1e-10).unwrap();
        assert_eq!(r.trajectory, traj);
    }

    #[test]
    fn series_match_closed_form_on_coarse_grid() {
        let grid = TimeGrid::new(10.0, 2000).unwrap();
        let traj = example2(&grid);
        let alpha = 0.9;
        let a = deformed_derivative_series(&traj, alpha, 50, 1e-10).unwrap();
        let b = deformed_map_series(&traj, alpha, 50, 1e-10).unwrap();
        assert!(a.validity.satisfied && b.validity.satisfied);
        let la = a.trajectory.pauli_samples().unwrap();
        let lb = b.trajectory.pauli_samples().unwrap();
        for (i, t) in grid.times().enumerate() {
            let exact = dephasing_sin_lambda(1.0, alpha, t);
            assert!((la[i].0[0] - exact).abs() < 1e-4);
            assert!((lb[i].0[0] - exact).abs() < 1e-4);
            assert!((la[i].0[2] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let traj = example2(&grid);
        assert!(deformed_map_series(&traj, 1.5, 5, 1e-10).is_err());
        assert!(deformed_map_series(&traj, 0.0, 5, 1e-10).is_err());
    }

    #[test]
    fn violated_precondition_is_flagged() {
        // A growing component pushes (1 − α²)|D_s| above one on the real ray.
        let grid = TimeGrid::new(2.0, 400).unwrap();
        let samples = grid
            .times()
            .map(|t| {
                let l = (3.0 * t).exp();
                PauliEigenvalues([l, 1.0, 1.0])
            })
            .collect();
        let traj = MapTrajectory::pauli(grid, samples).unwrap();
        let r = deformed_map_series(&traj, 0.3, 5, 1e-10).unwrap();
        assert!(!r.validity.satisfied);
        assert!(matches!(r.trusted(), Err(Error::ValidityViolated { .. })));
    }
}
