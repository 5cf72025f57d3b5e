//! Predictor–corrector solver for `dΦ/dt = D Φ(t) + ∫₀ᵗ K(t − u) Φ(u) du`.
//!
//! `D` is the coefficient of the δ-part of the kernel; the memory integral
//! uses the composite trapezoid over all earlier samples, so a run costs
//! `O(n_steps²)` kernel applications.

use rayon::prelude::*;

use super::algebra::Element;
use super::grid::{MapTrajectory, TimeGrid};
use crate::error::{Error, Result};
use crate::kernels::{MemoryKernel, PauliKernel};
use crate::superop::{PauliEigenvalues, Superoperator};

/// Explicit Euler predictor followed by one trapezoidal corrector pass.
fn heun<T: Element>(local: &T, table: &[T], h: f64, y0: T) -> Vec<T> {
    let n_steps = table.len() - 1;
    let mut y: Vec<T> = Vec::with_capacity(n_steps + 1);
    y.push(y0);
    let zero = y[0].zero_like();

    // history(n) = ½K(t_n)y₀ + Σ_{j=1}^{n−1} K(t_n − t_j) y_j
    let history = |y: &[T], n: usize| -> T {
        let mut acc = zero.clone();
        if n == 0 {
            return acc;
        }
        acc.add_product(0.5, &table[n], &y[0]);
        for j in 1..n {
            acc.add_product(1.0, &table[n - j], &y[j]);
        }
        acc
    };
    let rate = |state: &T, hist: &T, n: usize| -> T {
        let mut f = zero.clone();
        f.add_product(1.0, local, state);
        if n > 0 {
            f.add_scaled(h, hist);
            f.add_product(0.5 * h, &table[0], state);
        }
        f
    };

    let mut hist = zero.clone();
    for n in 0..n_steps {
        let f_n = rate(&y[n], &hist, n);
        let mut predictor = y[n].clone();
        predictor.add_scaled(h, &f_n);

        let next_hist = history(&y, n + 1);
        let f_pred = rate(&predictor, &next_hist, n + 1);
        let mut next = y[n].clone();
        next.add_scaled(0.5 * h, &f_n);
        next.add_scaled(0.5 * h, &f_pred);
        y.push(next);
        hist = next_hist;
    }
    y
}

fn check_table(values: &[f64]) -> Result<()> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("kernel sample at lag index {i}")));
    }
    Ok(())
}

/// Solves the Pauli-diagonal convolution equation component by component.
pub fn propagate_volterra(kernel: &PauliKernel, grid: &TimeGrid) -> Result<MapTrajectory> {
    let h = grid.step();
    let components: Result<Vec<Vec<f64>>> = (0..3)
        .into_par_iter()
        .map(|k| {
            let table: Vec<f64> = (0..grid.len())
                .into_par_iter()
                .map(|j| kernel.regular_value(k, grid.time(j)))
                .collect();
            check_table(&table)?;
            let y = heun(&kernel.local()[k], &table, h, 1.0);
            check_table(&y)?;
            Ok(y)
        })
        .collect();
    let components = components?;
    let samples = (0..grid.len())
        .map(|i| PauliEigenvalues([components[0][i], components[1][i], components[2][i]]))
        .collect();
    MapTrajectory::pauli(*grid, samples)
}

/// Solves the convolution equation for a general superoperator-valued kernel.
pub fn propagate_volterra_general(kernel: &MemoryKernel, grid: &TimeGrid) -> Result<MapTrajectory> {
    let h = grid.step();
    let d = kernel.dim();
    let table: Vec<_> = (0..grid.len())
        .into_par_iter()
        .map(|j| kernel.regular_value(grid.time(j)).into_matrix())
        .collect();
    for m in &table {
        check_table(&m.iter().flat_map(|z| [z.re, z.im]).collect::<Vec<_>>())?;
    }
    let local = kernel.local().matrix().clone();
    let y = heun(&local, &table, h, Superoperator::identity(d).into_matrix());
    let samples: Result<Vec<_>> = y.into_iter().map(|m| Superoperator::new(d, m)).collect();
    MapTrajectory::general(*grid, samples?)
}
