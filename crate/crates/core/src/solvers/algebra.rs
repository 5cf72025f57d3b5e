//! Minimal linear-algebra surface shared by the scalar (Pauli) and matrix
//! (general superoperator) paths of the convolution solvers.

use num_complex::Complex64;

use crate::superop::CMatrix;

pub(crate) trait Element: Clone + Send + Sync {
    fn zero_like(&self) -> Self;
    /// `self += w · x`
    fn add_scaled(&mut self, w: f64, x: &Self);
    /// `self += w · a · b`
    fn add_product(&mut self, w: f64, a: &Self, b: &Self);
    fn sup_norm(&self) -> f64;
}

impl Element for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }

    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += w * x;
    }

    fn add_product(&mut self, w: f64, a: &Self, b: &Self) {
        *self += w * a * b;
    }

    fn sup_norm(&self) -> f64 {
        self.abs()
    }
}

impl Element for CMatrix {
    fn zero_like(&self) -> Self {
        CMatrix::zeros(self.nrows(), self.ncols())
    }

    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += x * Complex64::new(w, 0.0);
    }

    fn add_product(&mut self, w: f64, a: &Self, b: &Self) {
        self.gemm(Complex64::new(w, 0.0), a, b, Complex64::new(1.0, 0.0));
    }

    fn sup_norm(&self) -> f64 {
        self.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

/// Trapezoidal convolution `(a ∗ b)(t_n) = ∫₀^{t_n} a(t_n − u) b(u) du` on a
/// uniform grid with step `h`.
pub(crate) fn convolve<T: Element>(a: &[T], b: &[T], h: f64) -> Vec<T> {
    use rayon::prelude::*;
    let zero = a[0].zero_like();
    (0..a.len())
        .into_par_iter()
        .map(|n| {
            let mut acc = zero.clone();
            if n == 0 {
                return acc;
            }
            acc.add_product(0.5 * h, &a[n], &b[0]);
            for j in 1..n {
                acc.add_product(h, &a[n - j], &b[j]);
            }
            acc.add_product(0.5 * h, &a[0], &b[n]);
            acc
        })
        .collect()
}

/// Second-order finite-difference derivative on a uniform grid.
pub(crate) fn derivative<T: Element>(y: &[T], h: f64) -> Vec<T> {
    let n = y.len();
    assert!(n >= 3, "derivative needs at least three samples");
    let mut out = Vec::with_capacity(n);
    let mut first = y[0].zero_like();
    first.add_scaled(-1.5 / h, &y[0]);
    first.add_scaled(2.0 / h, &y[1]);
    first.add_scaled(-0.5 / h, &y[2]);
    out.push(first);
    for i in 1..n - 1 {
        let mut d = y[i].zero_like();
        d.add_scaled(0.5 / h, &y[i + 1]);
        d.add_scaled(-0.5 / h, &y[i - 1]);
        out.push(d);
    }
    let mut last = y[0].zero_like();
    last.add_scaled(1.5 / h, &y[n - 1]);
    last.add_scaled(-2.0 / h, &y[n - 2]);
    last.add_scaled(0.5 / h, &y[n - 3]);
    out.push(last);
    out
}

/// Cumulative trapezoid `y_n = y₀ + ∫₀^{t_n} f`.
pub(crate) fn cumulative_integral<T: Element>(initial: &T, f: &[T], h: f64) -> Vec<T> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = initial.clone();
    out.push(acc.clone());
    for i in 1..f.len() {
        acc.add_scaled(0.5 * h, &f[i - 1]);
        acc.add_scaled(0.5 * h, &f[i]);
        out.push(acc.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn convolution_of_exponentials() {
        // (e^{-t} ∗ e^{-2t})(t) = e^{-t} − e^{-2t}
        let h = 1e-3;
        let a: Vec<f64> = (0..=2000).map(|i| (-(i as f64) * h).exp()).collect();
        let b: Vec<f64> = (0..=2000).map(|i| (-2.0 * i as f64 * h).exp()).collect();
        let conv = convolve(&a, &b, h);
        let t: f64 = 2.0;
        assert_abs_diff_eq!(conv[2000], (-t).exp() - (-2.0 * t).exp(), epsilon = 1e-6);
    }

    #[test]
    fn derivative_and_integral_are_second_order() {
        let h = 1e-2;
        let y: Vec<f64> = (0..=100).map(|i| (i as f64 * h).sin()).collect();
        let d = derivative(&y, h);
        for (i, v) in d.iter().enumerate() {
            assert_abs_diff_eq!(*v, (i as f64 * h).cos(), epsilon = 1e-4);
        }
        let back = cumulative_integral(&0.0, &d, h);
        assert_abs_diff_eq!(back[100], 1.0_f64.sin(), epsilon = 1e-4);
    }
}
