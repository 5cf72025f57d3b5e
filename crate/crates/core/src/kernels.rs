//! Time-translation-invariant memory kernels `K(t − t′)` split into a
//! δ-coefficient and a smooth part, with optional closed-form Laplace data.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::{laplace_fn, laplace_invert, limit_at_infinity, numeric_laplace, scalar_fn, LaplaceFn, ScalarFn};
use crate::superop::{c, pauli_matrices, CMatrix, Superoperator};

/// Operations shared by both kernel representations.
pub trait Kernel: Sized {
    type Laplace;

    /// Uniform dilation `K → α² K`.
    fn deform(&self, alpha: f64) -> Result<Self>;

    /// `K_s`: closed form when registered, otherwise the δ-part plus a
    /// quadrature of the smooth part.
    fn laplace(&self, s: Complex64) -> Result<Self::Laplace>;
}

pub fn deform_kernel<K: Kernel>(kernel: &K, alpha: f64) -> Result<K> {
    kernel.deform(alpha)
}

pub fn kernel_laplace<K: Kernel>(kernel: &K, s: Complex64) -> Result<K::Laplace> {
    kernel.laplace(s)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// Kernel diagonal in the Pauli basis, `K(t)[ϱ] = ½ Σ_k ϰ_k(t) σ_k tr(σ_k ϱ)`,
/// with `ϰ_k(t) = local_k δ(t) + regular_k(t)`.
#[derive(Clone)]
pub struct PauliKernel {
    local: [f64; 3],
    regular: [ScalarFn; 3],
    laplace: Option<[LaplaceFn; 3]>,
}

impl fmt::Debug for PauliKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PauliKernel")
            .field("local", &self.local)
            .field("closed_form_laplace", &self.laplace.is_some())
            .finish()
    }
}

impl PauliKernel {
    pub fn new(local: [f64; 3], regular: [ScalarFn; 3], laplace: Option<[LaplaceFn; 3]>) -> Self {
        Self { local, regular, laplace }
    }

    pub fn zero() -> Self {
        Self::local_only([0.0; 3])
    }

    /// A purely instantaneous kernel (semigroup dynamics).
    pub fn local_only(local: [f64; 3]) -> Self {
        let zero = scalar_fn(|_| 0.0);
        let laplace = local.map(|v| laplace_fn(move |_| Complex64::new(v, 0.0)));
        Self {
            local,
            regular: [zero.clone(), zero.clone(), zero],
            laplace: Some(laplace),
        }
    }

    pub fn local(&self) -> &[f64; 3] {
        &self.local
    }

    pub fn regular_value(&self, k: usize, t: f64) -> f64 {
        (self.regular[k])(t)
    }

    pub fn regular(&self) -> &[ScalarFn; 3] {
        &self.regular
    }

    pub fn closed_form_laplace(&self) -> Option<&[LaplaceFn; 3]> {
        self.laplace.as_ref()
    }

    /// The same kernel as a superoperator-valued [`MemoryKernel`].
    pub fn to_memory_kernel(&self) -> MemoryKernel {
        let local = pauli_diagonal(self.local);
        let regular = self.regular.clone();
        let laplace = self.laplace.clone().map(|fs| {
            Arc::new(move |s: Complex64| pauli_diagonal_complex([fs[0](s), fs[1](s), fs[2](s)]))
                as Arc<dyn Fn(Complex64) -> Superoperator + Send + Sync>
        });
        MemoryKernel {
            dim: 2,
            local,
            regular: Arc::new(move |t| pauli_diagonal([regular[0](t), regular[1](t), regular[2](t)])),
            laplace,
        }
    }
}

impl Kernel for PauliKernel {
    type Laplace = [Complex64; 3];

    fn deform(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha == 1.0 {
            return Ok(self.clone());
        }
        let a2 = alpha * alpha;
        let regular = self.regular.clone().map(|f| scalar_fn(move |t| a2 * f(t)));
        let laplace = self
            .laplace
            .clone()
            .map(|fs| fs.map(|f| laplace_fn(move |s| a2 * f(s))));
        Ok(Self {
            local: self.local.map(|v| a2 * v),
            regular,
            laplace,
        })
    }

    fn laplace(&self, s: Complex64) -> Result<[Complex64; 3]> {
        if let Some(fs) = &self.laplace {
            return Ok([fs[0](s), fs[1](s), fs[2](s)]);
        }
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            let f = self.regular[k].clone();
            out[k] = self.local[k] + numeric_laplace(&*f, s)?.value;
        }
        Ok(out)
    }
}

/// `X ↦ ½ Σ_k κ_k tr(σ_k X) σ_k` (annihilates the identity component).
fn pauli_diagonal_complex(kappa: [Complex64; 3]) -> Superoperator {
    let sigma = pauli_matrices();
    Superoperator::from_action(2, |x| {
        let mut out = CMatrix::zeros(2, 2);
        for (k, s) in sigma.iter().enumerate() {
            out += s * ((s * x).trace() * 0.5 * kappa[k]);
        }
        out
    })
}

fn pauli_diagonal(kappa: [f64; 3]) -> Superoperator {
    pauli_diagonal_complex(kappa.map(c))
}

pub type SuperopFn = Arc<dyn Fn(f64) -> Superoperator + Send + Sync>;
pub type SuperopLaplaceFn = Arc<dyn Fn(Complex64) -> Superoperator + Send + Sync>;

/// General kernel `K(τ) = local · δ(τ) + regular(τ)`.
#[derive(Clone)]
pub struct MemoryKernel {
    dim: usize,
    local: Superoperator,
    regular: SuperopFn,
    laplace: Option<SuperopLaplaceFn>,
}

impl fmt::Debug for MemoryKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MemoryKernel")
            .field("dim", &self.dim)
            .field("local", &self.local)
            .field("closed_form_laplace", &self.laplace.is_some())
            .finish()
    }
}

impl MemoryKernel {
    pub fn new(local: Superoperator, regular: SuperopFn, laplace: Option<SuperopLaplaceFn>) -> Self {
        Self {
            dim: local.dim(),
            local,
            regular,
            laplace,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn local(&self) -> &Superoperator {
        &self.local
    }

    pub fn regular_value(&self, t: f64) -> Superoperator {
        (self.regular)(t)
    }
}

impl Kernel for MemoryKernel {
    type Laplace = Superoperator;

    fn deform(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha == 1.0 {
            return Ok(self.clone());
        }
        let a2 = alpha * alpha;
        let regular = self.regular.clone();
        let laplace = self.laplace.clone().map(|f| {
            Arc::new(move |s: Complex64| f(s).scale(a2)) as SuperopLaplaceFn
        });
        Ok(Self {
            dim: self.dim,
            local: self.local.scale(a2),
            regular: Arc::new(move |t| regular(t).scale(a2)),
            laplace,
        })
    }

    fn laplace(&self, s: Complex64) -> Result<Superoperator> {
        if let Some(f) = &self.laplace {
            return Ok(f(s));
        }
        let n = self.dim * self.dim;
        let mut m = self.local.matrix().clone();
        for row in 0..n {
            for col in 0..n {
                let regular = self.regular.clone();
                let re = numeric_laplace(&move |t: f64| regular(t).matrix()[(row, col)].re, s)?;
                let regular = self.regular.clone();
                let im = numeric_laplace(&move |t: f64| regular(t).matrix()[(row, col)].im, s)?;
                m[(row, col)] += re.value + Complex64::new(0.0, 1.0) * im.value;
            }
        }
        Superoperator::new(self.dim, m)
    }
}

/// `(Γ δ(τ) − Γ² sin Γτ) (σ_z ϱ σ_z − ϱ)`: pure dephasing with
/// `λ₁ = λ₂ = 1 − 2Γt e^{−Γt}` and `λ₃ = 1`.
pub fn dephasing_sin_kernel(gamma: f64) -> Result<PauliKernel> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let regular = scalar_fn(move |t| 2.0 * gamma * gamma * (gamma * t).sin());
    let laplace = laplace_fn(move |s| -2.0 * gamma + 2.0 * gamma.powi(3) / (s * s + gamma * gamma));
    Ok(PauliKernel {
        local: [-2.0 * gamma, -2.0 * gamma, 0.0],
        regular: [regular.clone(), regular, scalar_fn(|_| 0.0)],
        laplace: Some([laplace.clone(), laplace, laplace_fn(|_| Complex64::new(0.0, 0.0))]),
    })
}

/// `λ̃₁(t)` for the dephasing-sine kernel dilated by `α ∈ (0, 1]`:
/// `1 − 2α² e^{−α²Γt} sin(√(1−α⁴) Γt)/√(1−α⁴)`, tending to `1 − 2Γt e^{−Γt}` at `α = 1`.
pub fn dephasing_sin_lambda(gamma: f64, alpha: f64, t: f64) -> f64 {
    let a2 = alpha * alpha;
    let w = (1.0 - a2 * a2).max(0.0).sqrt();
    let damping = (-a2 * gamma * t).exp();
    let oscillation = if w * gamma * t < 1e-8 {
        gamma * t
    } else {
        (w * gamma * t).sin() / w
    };
    1.0 - 2.0 * a2 * damping * oscillation
}

/// Laplace data of the dephasing-sine map: `(λ₁)_s = 1/s − 2Γ/(s+Γ)²`, `(λ₃)_s = 1/s`.
pub fn dephasing_sin_map_laplace(gamma: f64) -> [LaplaceFn; 3] {
    let l1 = laplace_fn(move |s| 1.0 / s - 2.0 * gamma / ((s + gamma) * (s + gamma)));
    [l1.clone(), l1, laplace_fn(|s| 1.0 / s)]
}

/// Laplace data of the eternally non-Markovian map with rates `(1, 1, −tanh t)`:
/// `λ₁ = λ₂ = (1 + e^{−2t})/2`, `λ₃ = e^{−2t}`.
pub fn eternal_map_laplace() -> [LaplaceFn; 3] {
    let l1 = laplace_fn(|s| 0.5 * (1.0 / s + 1.0 / (s + 2.0)));
    [l1.clone(), l1, laplace_fn(|s| 1.0 / (s + 2.0))]
}

/// Uniformly dilated eigenvalues of the eternal map:
/// `λ̃₁ = λ̃₂ = (1 + α² e^{−(1+α²)t})/(1 + α²)`, `λ̃₃ = e^{−2α²t}`.
pub fn eternal_deformed_lambda(alpha: f64, t: f64) -> [f64; 3] {
    let a2 = alpha * alpha;
    let l1 = (1.0 + a2 * (-(1.0 + a2) * t).exp()) / (1.0 + a2);
    [l1, l1, (-2.0 * a2 * t).exp()]
}

/// Nonnegative memory profile `f(t) = f₀ μ e^{−μt}` with total mass `f₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialProfile {
    pub f0: f64,
    pub rate: f64,
}

impl ExponentialProfile {
    /// `f(t) = f₀ e^{−t}`.
    pub fn unit_rate(f0: f64) -> Self {
        Self { f0, rate: 1.0 }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.f0 * self.rate * (-self.rate * t).exp()
    }

    pub fn laplace(&self, s: Complex64) -> Complex64 {
        self.f0 * self.rate / (s + self.rate)
    }

    /// `∫₀ᵗ f`
    pub fn cumulative(&self, t: f64) -> f64 {
        -self.f0 * (-self.rate * t).exp_m1()
    }

    pub fn mass(&self) -> f64 {
        self.f0
    }
}

/// Parameters of the kernel family `(ϰ_k)_s = −s f_s/(a_k − f_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NalezytyParams {
    pub a: [f64; 3],
    pub profile: ExponentialProfile,
}

impl NalezytyParams {
    pub fn new(a: [f64; 3], f0: f64) -> Self {
        Self {
            a,
            profile: ExponentialProfile::unit_rate(f0),
        }
    }

    /// Violated admissibility conditions, empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let a = self.a;
        if a.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            out.push(format!("a_k must be positive, got {a:?}"));
            return out;
        }
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            if 1.0 / a[i] + 1.0 / a[j] < 1.0 / a[k] {
                out.push(format!(
                    "triangle inequality 1/a{} + 1/a{} >= 1/a{} fails ({:.6} < {:.6})",
                    i + 1,
                    j + 1,
                    k + 1,
                    1.0 / a[i] + 1.0 / a[j],
                    1.0 / a[k]
                ));
            }
        }
        let p = self.profile;
        if !(p.f0 >= 0.0 && p.rate > 0.0 && p.f0.is_finite() && p.rate.is_finite()) {
            out.push(format!("memory profile must be nonnegative, got f0 = {}, rate = {}", p.f0, p.rate));
        }
        let bound = 4.0 / (1.0 / a[0] + 1.0 / a[1] + 1.0 / a[2]);
        if p.f0 > bound {
            out.push(format!("f0 <= 4/(1/a1 + 1/a2 + 1/a3) fails ({} > {bound:.6})", p.f0));
        }
        out
    }

    /// `λ_k(t) = 1 − a_k⁻¹ ∫₀ᵗ f`
    pub fn predicted_eigenvalues(&self, t: f64) -> [f64; 3] {
        let cumulative = self.profile.cumulative(t);
        self.a.map(|a| 1.0 - cumulative / a)
    }

    /// `(λ_k)_s = (1 − f_s/a_k)/s`
    pub fn map_laplace(&self) -> [LaplaceFn; 3] {
        let p = self.profile;
        self.a.map(|a| laplace_fn(move |s| (1.0 - p.laplace(s) / a) / s))
    }

    /// `(λ̃_k)_s = 1/(s(1 + α² f_s/(a_k − f_s)))`
    pub fn deformed_map_laplace(&self, alpha: f64) -> [LaplaceFn; 3] {
        let p = self.profile;
        let a2 = alpha * alpha;
        self.a.map(|a| {
            laplace_fn(move |s| {
                let fs = p.laplace(s);
                1.0 / (s * (1.0 + a2 * fs / (a - fs)))
            })
        })
    }

    /// `lim_{t→∞} λ̃_k = 1/(1 + α² f₀/(a_k − f₀))`
    pub fn deformed_limit(&self, alpha: f64) -> [f64; 3] {
        let f0 = self.profile.mass();
        self.a.map(|a| 1.0 / (1.0 + alpha * alpha * f0 / (a - f0)))
    }
}

/// Time-domain smooth part recovered from Laplace data by Talbot inversion,
/// with the value at zero from the initial-value theorem.
fn regular_from_laplace(transform: LaplaceFn, local: f64) -> ScalarFn {
    let shifted = laplace_fn(move |s| transform(s) - local);
    let at_zero = {
        let shifted = shifted.clone();
        limit_at_infinity(move |s| s * shifted(s), 16.0).value
    };
    scalar_fn(move |t| {
        if t <= 0.0 {
            at_zero
        } else {
            laplace_invert(&*shifted, t).unwrap_or(f64::NAN)
        }
    })
}

fn kernel_from_laplace(kappa: [LaplaceFn; 3]) -> PauliKernel {
    let local = kappa.clone().map(|f| limit_at_infinity(move |s| f(s), 16.0).value);
    let regular = [0, 1, 2].map(|k| regular_from_laplace(kappa[k].clone(), local[k]));
    PauliKernel {
        local,
        regular,
        laplace: Some(kappa),
    }
}

/// Kernel with `(ϰ_k)_s = −s f_s/(a_k − f_s)`; its map is `λ_k = 1 − a_k⁻¹∫₀ᵗ f`.
pub fn nalezyty_kernel(params: &NalezytyParams) -> Result<PauliKernel> {
    let violations = params.violations();
    if !violations.is_empty() {
        return Err(Error::InvalidParams(violations.join("; ")));
    }
    let p = params.profile;
    let kappa = params.a.map(|a| {
        laplace_fn(move |s| {
            let fs = p.laplace(s);
            -s * fs / (a - fs)
        })
    });
    Ok(kernel_from_laplace(kappa))
}

/// Kernel generating a Pauli map from its Laplace data: `(ϰ_k)_s = s − 1/(λ_k)_s`.
pub fn pauli_kernel_from_map_laplace(lambda_s: &[LaplaceFn; 3]) -> Result<PauliKernel> {
    let probes = [1e-3, 0.1, 1.0, 10.0, 100.0].map(|x| Complex64::new(x, 0.0));
    for (k, f) in lambda_s.iter().enumerate() {
        for s in probes {
            let v = f(s);
            if !(v.norm() > 1e-300) || !v.re.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "(lambda_{})_s vanishes or is not finite at s = {}",
                    k + 1,
                    s.re
                )));
            }
        }
    }
    let kappa = lambda_s.clone().map(|f| laplace_fn(move |s| s - 1.0 / f(s)));
    Ok(kernel_from_laplace(kappa))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NalezytyReport {
    pub valid: bool,
    pub violations: Vec<String>,
    pub p_divisible: bool,
    pub cp_divisible: bool,
}

/// Admissibility, P divisibility (`f₀ ≤ a_min`) and CP divisibility
/// (`(a₂−f₀)⁻¹ + (a₃−f₀)⁻¹ ≥ (a₁−f₀)⁻¹` with `a₁ ≤ a₂ ≤ a₃`).
pub fn validate_nalezyty(params: &NalezytyParams) -> NalezytyReport {
    let violations = params.violations();
    let f0 = params.profile.mass();
    let mut a = params.a;
    a.sort_by(f64::total_cmp);
    let p_divisible = f0 <= a[0];
    let cp_divisible = f0 < a[0] && 1.0 / (a[1] - f0) + 1.0 / (a[2] - f0) >= 1.0 / (a[0] - f0);
    NalezytyReport {
        valid: violations.is_empty(),
        violations,
        p_divisible,
        cp_divisible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{propagate_volterra, TimeGrid};
    use approx::assert_abs_diff_eq;

    fn cs(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn dephasing_sin_closed_forms() {
        let k = dephasing_sin_kernel(1.0).unwrap();
        let ks = k.laplace(cs(1.0)).unwrap();
        assert_abs_diff_eq!(ks[0].re, -1.0, epsilon = 1e-15);
        assert_eq!(ks[2].re, 0.0);
        // min of 1 − 2te^{−t} is 1 − 2/e at t = 1
        assert_abs_diff_eq!(dephasing_sin_lambda(1.0, 1.0, 1.0), 1.0 - 2.0 / std::f64::consts::E, epsilon = 1e-15);
        assert_abs_diff_eq!(dephasing_sin_lambda(1.0, 1.0, 1.0), 0.26424, epsilon = 1e-5);
        assert!(dephasing_sin_kernel(0.0).is_err());
    }

    #[test]
    fn numeric_laplace_of_smooth_part_matches_closed_form() {
        let k = dephasing_sin_kernel(1.5).unwrap();
        let numeric = PauliKernel::new(*k.local(), k.regular().clone(), None);
        for s in [cs(0.7), Complex64::new(2.0, 1.0)] {
            let a = k.laplace(s).unwrap();
            let b = numeric.laplace(s).unwrap();
            for i in 0..3 {
                assert!((a[i] - b[i]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn kernel_laplace_tends_to_local_part() {
        let k = dephasing_sin_kernel(1.0).unwrap();
        let far = k.laplace(cs(1e8)).unwrap();
        assert_abs_diff_eq!(far[0].re, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn deformation_scales_every_part() {
        let k = dephasing_sin_kernel(1.0).unwrap();
        let same = deform_kernel(&k, 1.0).unwrap();
        assert_eq!(same.local(), k.local());
        for i in 0..3 {
            assert!(Arc::ptr_eq(&same.regular()[i], &k.regular()[i]));
        }
        let alpha: f64 = 0.6;
        let a2 = alpha * alpha;
        let d = deform_kernel(&k, alpha).unwrap();
        for s in [cs(0.3), Complex64::new(1.0, 2.0)] {
            let lhs = d.laplace(s).unwrap();
            let rhs = k.laplace(s).unwrap();
            for i in 0..3 {
                assert_eq!(lhs[i], a2 * rhs[i]);
            }
            let expected = a2 * (-2.0 + 2.0 / (s * s + 1.0));
            assert!((lhs[0] - expected).norm() < 1e-15);
        }
        assert_eq!(d.regular_value(0, 0.4), a2 * k.regular_value(0, 0.4));
        assert!(deform_kernel(&k, 0.0).is_err());
    }

    #[test]
    fn memory_kernel_deformation_matches_pauli() {
        let k = dephasing_sin_kernel(1.0).unwrap();
        let mk = k.to_memory_kernel();
        let d = deform_kernel(&mk, 0.5).unwrap();
        let expected = deform_kernel(&k, 0.5).unwrap().to_memory_kernel();
        assert!(d.local().max_abs_diff(expected.local()) < 1e-15);
        assert!(d.regular_value(0.7).max_abs_diff(&expected.regular_value(0.7)) < 1e-15);
        let s = Complex64::new(0.5, 0.5);
        assert!(d.laplace(s).unwrap().max_abs_diff(&expected.laplace(s).unwrap()) < 1e-15);
    }

    #[test]
    fn nalezyty_validation() {
        let ok = NalezytyParams::new([1.0, 1.8, 1.8], 0.9);
        assert!(ok.violations().is_empty());
        let bad = NalezytyParams::new([1.0, 2.0, 3.0], 0.9);
        let v = bad.violations();
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("triangle"));
        assert!(matches!(nalezyty_kernel(&bad), Err(Error::InvalidParams(_))));
        let too_heavy = NalezytyParams::new([1.0, 1.0, 1.0], 1.5);
        assert!(too_heavy.violations()[0].contains("f0"));

        let lim = ok.predicted_eigenvalues(1e3);
        assert_abs_diff_eq!(lim[0], 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(lim[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(lim[2], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn nalezyty_laplace_value() {
        let k = nalezyty_kernel(&NalezytyParams::new([1.0, 1.8, 1.8], 0.9)).unwrap();
        let ks = k.laplace(cs(1.0)).unwrap();
        assert_abs_diff_eq!(ks[0].re, -0.45 / 0.55, epsilon = 1e-12);
        assert_abs_diff_eq!(ks[0].re, -0.8182, epsilon = 1e-4);
        // s → ∞ leaves −f₀μ/a_k
        assert_abs_diff_eq!(k.local()[0], -0.9, epsilon = 1e-8);
        assert_abs_diff_eq!(k.local()[1], -0.5, epsilon = 1e-8);
        // regular part (f₀/a)(1 − f₀/a) e^{−(1 − f₀/a)t}
        let c1 = 1.0 - 0.9;
        for t in [0.0, 0.5, 3.0] {
            assert_abs_diff_eq!(k.regular_value(0, t), 0.9 * c1 * (-c1 * t).exp(), epsilon = 1e-8);
        }
    }

    #[test]
    fn nalezyty_reports() {
        let r = validate_nalezyty(&NalezytyParams::new([1.0, 1.8, 1.8], 0.15));
        assert!(r.valid && r.p_divisible && r.cp_divisible);
        let r = validate_nalezyty(&NalezytyParams::new([1.0, 1.8, 1.8], 0.9));
        assert!(r.valid && r.p_divisible && !r.cp_divisible);
        let r = validate_nalezyty(&NalezytyParams::new([1.0, 1.0, 1.0], 1.2));
        assert!(r.valid && !r.p_divisible && !r.cp_divisible);
        // CP boundary at f0 = 0.2
        assert!(validate_nalezyty(&NalezytyParams::new([1.0, 1.8, 1.8], 0.199)).cp_divisible);
        assert!(!validate_nalezyty(&NalezytyParams::new([1.0, 1.8, 1.8], 0.201)).cp_divisible);
    }

    #[test]
    fn kernels_from_map_laplace() {
        let identity = [0, 1, 2].map(|_| laplace_fn(|s| 1.0 / s));
        let k = pauli_kernel_from_map_laplace(&identity).unwrap();
        assert_abs_diff_eq!(k.laplace(cs(2.0)).unwrap()[0].re, 0.0, epsilon = 1e-15);

        let decay = [0, 1, 2].map(|_| laplace_fn(|s| 1.0 / (s + 0.7)));
        let k = pauli_kernel_from_map_laplace(&decay).unwrap();
        assert_abs_diff_eq!(k.laplace(cs(2.0)).unwrap()[0].re, -0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(k.local()[0], -0.7, epsilon = 1e-9);
        assert_abs_diff_eq!(k.regular_value(0, 1.0), 0.0, epsilon = 1e-9);

        let k = pauli_kernel_from_map_laplace(&eternal_map_laplace()).unwrap();
        for s in [cs(0.5), Complex64::new(1.0, 3.0)] {
            let ks = k.laplace(s).unwrap();
            assert!((ks[0] + s / (s + 1.0)).norm() < 1e-12);
            assert!((ks[2] + 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn eternal_kernel_solves_back_to_its_map() {
        let k = pauli_kernel_from_map_laplace(&eternal_map_laplace()).unwrap();
        let grid = TimeGrid::new(5.0, 1000).unwrap();
        let traj = propagate_volterra(&k, &grid).unwrap();
        for (t, l) in grid.times().zip(traj.pauli_samples().unwrap()) {
            let exact = eternal_deformed_lambda(1.0, t);
            for i in 0..3 {
                assert!((l.0[i] - exact[i]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn vanishing_map_laplace_is_rejected() {
        let bad = [laplace_fn(|_| Complex64::new(0.0, 0.0)), laplace_fn(|s| 1.0 / s), laplace_fn(|s| 1.0 / s)];
        assert!(pauli_kernel_from_map_laplace(&bad).is_err());
    }
}
