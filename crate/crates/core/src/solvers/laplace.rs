//! Forward Laplace transforms, fixed-Talbot inversion and limit extrapolation.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{MapTrajectory, TimeGrid};
use super::quadrature::integrate;
use crate::error::{Error, Result};
use crate::superop::PauliEigenvalues;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type LaplaceFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Lower bound on `Re(s)` for numerical forward transforms.
pub const S_MIN: f64 = 1e-3;
/// Number of Talbot contour nodes.
pub const TALBOT_NODES: usize = 64;

const TAIL_TARGET: f64 = 1e-12;
const MAX_HORIZON: f64 = 1e7;

pub fn laplace_fn(f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> LaplaceFn {
    Arc::new(f)
}

pub fn scalar_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ScalarFn {
    Arc::new(f)
}

/// A real function of time with an optional closed-form Laplace transform.
#[derive(Clone)]
pub struct TimeFunction {
    eval: ScalarFn,
    closed_form: Option<LaplaceFn>,
}

impl TimeFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            closed_form: None,
        }
    }

    pub fn from_parts(eval: ScalarFn, closed_form: Option<LaplaceFn>) -> Self {
        Self { eval, closed_form }
    }

    pub fn with_laplace(mut self, transform: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.closed_form = Some(Arc::new(transform));
        self
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn closed_form(&self) -> Option<&LaplaceFn> {
        self.closed_form.as_ref()
    }
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeFunction")
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceValue {
    pub value: Complex64,
    /// Bound on the neglected tail; zero for closed forms.
    pub tail_bound: f64,
}

/// `∫₀^∞ f(t) e^{−st} dt`, closed form when registered, else adaptive quadrature
/// over doubling intervals until the tail bound drops below `1e−12`.
pub fn laplace_forward(f: &TimeFunction, s: Complex64) -> Result<LaplaceValue> {
    if let Some(closed) = &f.closed_form {
        return Ok(LaplaceValue {
            value: closed(s),
            tail_bound: 0.0,
        });
    }
    numeric_laplace(&*f.eval, s)
}

pub(crate) fn numeric_laplace(f: &(dyn Fn(f64) -> f64 + Send + Sync), s: Complex64) -> Result<LaplaceValue> {
    if s.re < S_MIN {
        return Err(Error::InvalidParameter(format!(
            "Re(s) = {} below the contour floor {S_MIN}",
            s.re
        )));
    }
    let integrand = |t: f64| (-s * t).exp() * f(t);
    let mut total = Complex64::new(0.0, 0.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut tail_bound = f64::INFINITY;
    while lo < MAX_HORIZON {
        let (piece, _) = integrate(&integrand, lo, hi, TAIL_TARGET * 0.1);
        total += piece;
        let envelope = (0..=32)
            .map(|i| f(lo + (hi - lo) * i as f64 / 32.0).abs())
            .fold(0.0, f64::max);
        tail_bound = envelope * (-s.re * hi).exp() / s.re;
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Quadrature { tail_bound });
        }
        if tail_bound < TAIL_TARGET {
            return Ok(LaplaceValue {
                value: total,
                tail_bound,
            });
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Quadrature { tail_bound })
}

/// Fixed-Talbot inversion with [`TALBOT_NODES`] nodes and contour scale `r = M/(5t)`.
pub fn laplace_invert<F>(transform: F, t: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Inversion(format!(
            "inversion requires t > 0 (got {t}); use the known initial value"
        )));
    }
    let m = TALBOT_NODES;
    let r = m as f64 / (5.0 * t);
    let mut sum = 0.5 * (transform(Complex64::new(r, 0.0)) * (r * t).exp()).re;
    for k in 1..m {
        let theta = k as f64 * PI / m as f64;
        let cot = 1.0 / theta.tan();
        let s = Complex64::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - 1.0) * cot;
        let term = (s * t).exp() * transform(s) * Complex64::new(1.0, sigma);
        sum += term.re;
    }
    let value = r / m as f64 * sum;
    if !value.is_finite() {
        return Err(Error::Inversion(format!("non-finite contour sum at t = {t}")));
    }
    Ok(value)
}

/// Contour nodes used by [`laplace_invert`] at time `t`.
pub fn talbot_nodes(t: f64) -> Vec<Complex64> {
    let m = TALBOT_NODES;
    let r = m as f64 / (5.0 * t);
    std::iter::once(Complex64::new(r, 0.0))
        .chain((1..m).map(|k| {
            let theta = k as f64 * PI / m as f64;
            Complex64::new(r * theta / theta.tan(), r * theta)
        }))
        .collect()
}

/// Richardson extrapolation to `x → 0` of samples taken at `x₀, x₀/2, x₀/4, …`,
/// assuming an expansion in integer powers of `x`. Returns the value and the
/// difference between the two highest-order estimates.
pub fn richardson(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    let mut table = vec![samples.to_vec()];
    for m in 1..n {
        let prev = &table[m - 1];
        let factor = 2f64.powi(m as i32);
        let next: Vec<f64> = (1..prev.len())
            .map(|j| (factor * prev[j] - prev[j - 1]) / (factor - 1.0))
            .collect();
        table.push(next);
    }
    let best = table[n - 1][0];
    let previous = if n >= 2 { *table[n - 2].last().unwrap() } else { best };
    (best, (best - previous).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error_estimate: f64,
}

const FINAL_VALUE_TOL: f64 = 1e-7;

/// `lim_{t→∞} f(t) = lim_{s→0} s F(s)`, by Richardson extrapolation of
/// `s F(s)` at `s = 10⁻³·2^{−j}`, `j = 0..=6`.
pub fn final_value<F>(transform: F) -> Result<Extrapolated>
where
    F: Fn(Complex64) -> Complex64,
{
    let samples: Vec<f64> = (0..=6)
        .map(|j| {
            let s = 1e-3 * 2f64.powi(-j);
            (transform(Complex64::new(s, 0.0)) * s).re
        })
        .collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Extrapolation { estimate: f64::NAN });
    }
    let (value, error_estimate) = richardson(&samples);
    if error_estimate > FINAL_VALUE_TOL * value.abs().max(1.0) {
        return Err(Error::Extrapolation {
            estimate: error_estimate,
        });
    }
    Ok(Extrapolated { value, error_estimate })
}

/// `lim_{s→∞} g(s)` from samples at `s₀·2^j`, `j = 0..=6`, extrapolated in `1/s`.
pub fn limit_at_infinity<G>(g: G, s0: f64) -> Extrapolated
where
    G: Fn(Complex64) -> Complex64,
{
    let samples: Vec<f64> = (0..=6)
        .map(|j| g(Complex64::new(s0 * 2f64.powi(j), 0.0)).re)
        .collect();
    let (value, error_estimate) = richardson(&samples);
    Extrapolated { value, error_estimate }
}

/// Uniform dilation of a Pauli map given by its Laplace data:
/// `(λ̃_k)_s = 1/(s − α²(s − 1/(λ_k)_s))`, inverted pointwise on the grid.
pub fn deform_pauli_via_laplace(
    lambda_s: &[LaplaceFn; 3],
    alpha: f64,
    grid: &TimeGrid,
) -> Result<MapTrajectory> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let a2 = alpha * alpha;
    let deformed: Vec<LaplaceFn> = lambda_s
        .iter()
        .map(|f| {
            let f = f.clone();
            laplace_fn(move |s| 1.0 / (s - a2 * (s - 1.0 / f(s))))
        })
        .collect();
    let samples: Result<Vec<PauliEigenvalues>> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return Ok(PauliEigenvalues::identity());
            }
            let t = grid.time(i);
            Ok(PauliEigenvalues([
                laplace_invert(&*deformed[0], t)?,
                laplace_invert(&*deformed[1], t)?,
                laplace_invert(&*deformed[2], t)?,
            ]))
        })
        .collect();
    MapTrajectory::pauli(*grid, samples?)
}

/// Inverts Pauli Laplace data without deformation.
pub fn invert_pauli_laplace(lambda_s: &[LaplaceFn; 3], grid: &TimeGrid) -> Result<MapTrajectory> {
    deform_pauli_via_laplace(lambda_s, 1.0, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cs(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn forward_examples() {
        let one = TimeFunction::new(|_| 1.0);
        for s in [0.5, 1.0, 3.0] {
            let v = laplace_forward(&one, cs(s)).unwrap();
            assert_abs_diff_eq!(v.value.re, 1.0 / s, epsilon = 1e-11);
            assert!(v.tail_bound < 1e-12);
        }
        let dephasing = TimeFunction::new(|t| 1.0 - 2.0 * t * (-t).exp());
        let v = laplace_forward(&dephasing, cs(1.0)).unwrap();
        assert_abs_diff_eq!(v.value.re, 0.5, epsilon = 1e-11);

        let decay = TimeFunction::new(|t| (-2.0 * t).exp()).with_laplace(|s| 1.0 / (s + 2.0));
        let v = laplace_forward(&decay, cs(2.0)).unwrap();
        assert_eq!(v.value.re, 0.25);
        assert_eq!(v.tail_bound, 0.0);
        let numeric = laplace_forward(&TimeFunction::new(|t| (-2.0 * t).exp()), cs(2.0)).unwrap();
        assert_abs_diff_eq!(numeric.value.re, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn forward_rejects_small_real_part() {
        let one = TimeFunction::new(|_| 1.0);
        assert!(laplace_forward(&one, cs(1e-4)).is_err());
    }

    #[test]
    fn forward_at_complex_argument() {
        let f = TimeFunction::new(|t| t * (-t).exp());
        let s = Complex64::new(0.5, 2.0);
        let v = laplace_forward(&f, s).unwrap();
        let exact = 1.0 / ((s + 1.0) * (s + 1.0));
        assert!((v.value - exact).norm() < 1e-11);
    }

    #[test]
    fn talbot_examples() {
        assert_abs_diff_eq!(laplace_invert(|s| 1.0 / s, 1.0).unwrap(), 1.0, epsilon = 1e-10);
        let v = laplace_invert(|s| 1.0 / ((s + 1.0) * (s + 1.0)), 1.0).unwrap();
        assert_abs_diff_eq!(v, (-1.0_f64).exp(), epsilon = 1e-10);
        let a2 = 0.25;
        let v = laplace_invert(|s| (s + 1.0) / (s * (s + 1.0 + a2)), 2.0).unwrap();
        let exact = (1.0 + a2 * (-(1.0 + a2) * 2.0_f64).exp()) / (1.0 + a2);
        assert_abs_diff_eq!(v, exact, epsilon = 1e-10);
        assert_abs_diff_eq!(v, 0.816417, epsilon = 1e-6);
    }

    #[test]
    fn talbot_rejects_nonpositive_time() {
        assert!(matches!(laplace_invert(|s| 1.0 / s, 0.0), Err(Error::Inversion(_))));
    }

    #[test]
    fn final_value_examples() {
        assert_abs_diff_eq!(final_value(|s| 1.0 / s).unwrap().value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(final_value(|s| 1.0 / (s + 2.0)).unwrap().value, 0.0, epsilon = 1e-12);
        let (a, f0, alpha) = (1.0, 0.9, 0.5);
        let v = final_value(|s: Complex64| {
            let fs = f0 / (s + 1.0);
            1.0 / (s * (1.0 + alpha * alpha * fs / (a - fs)))
        })
        .unwrap();
        assert_abs_diff_eq!(v.value, 1.0 / (1.0 + alpha * alpha * f0 / (a - f0)), epsilon = 1e-9);
        assert_abs_diff_eq!(v.value, 0.307692, epsilon = 1e-6);
    }

    #[test]
    fn final_value_detects_divergence() {
        // s F(s) = 1/s grows without bound.
        assert!(final_value(|s| 1.0 / (s * s)).is_err());
    }

    #[test]
    fn limit_at_infinity_of_rational() {
        let lim = limit_at_infinity(|s| (3.0 * s + 1.0) / (s + 2.0), 10.0);
        assert_abs_diff_eq!(lim.value, 3.0, epsilon = 1e-9);
    }
}
