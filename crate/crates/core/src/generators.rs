//! Time-local generators in GKSL form and time deformations `τ(t) = ∫₀ᵗ α`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::TimeGrid;
use crate::superop::{c, pauli_matrices, CMatrix, PauliEigenvalues, Superoperator};

const TABLE_SLACK: f64 = 1e-12;

/// Piecewise-linear table on strictly increasing abscissae starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::InvalidParameter(
                "table needs at least two points and matching lengths".into(),
            ));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidParameter("table must start at t = 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("table times must be strictly increasing".into()));
        }
        if values.iter().chain(&times).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("table entry".into()));
        }
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }

    fn check(&self, t: f64) -> Result<f64> {
        let max = self.t_max();
        if t < -TABLE_SLACK || t > max * (1.0 + TABLE_SLACK) + TABLE_SLACK {
            return Err(Error::OutOfRange { t, min: 0.0, max });
        }
        Ok(t.clamp(0.0, max))
    }

    fn segment(&self, t: f64) -> usize {
        let idx = self.times.partition_point(|&x| x <= t);
        idx.saturating_sub(1).min(self.times.len() - 2)
    }

    pub fn interpolate(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        let i = self.segment(t);
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let w = (t - t0) / (t1 - t0);
        Ok(self.values[i] * (1.0 - w) + self.values[i + 1] * w)
    }

    /// Exact integral of the interpolant over `[0, t]`.
    pub fn integral(&self, t: f64) -> Result<f64> {
        let t = self.check(t)?;
        let i = self.segment(t);
        let mut total = 0.0;
        for k in 0..i {
            total += 0.5 * (self.values[k] + self.values[k + 1]) * (self.times[k + 1] - self.times[k]);
        }
        let end = self.interpolate(t)?;
        total += 0.5 * (self.values[i] + end) * (t - self.times[i]);
        Ok(total)
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

fn ln_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// A decoherence rate `γ(t)`. Closed-form variants carry exact antiderivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateFunction {
    Constant(f64),
    /// `amplitude · tanh(t)`
    Tanh { amplitude: f64 },
    /// `amplitude · sin(frequency · t)`
    Sin { amplitude: f64, frequency: f64 },
    Tabulated(Table),
    Sum(Vec<RateFunction>),
}

impl RateFunction {
    pub fn neg_tanh() -> Self {
        Self::Tanh { amplitude: -1.0 }
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        match self {
            Self::Constant(v) => Ok(*v),
            Self::Tanh { amplitude } => Ok(amplitude * t.tanh()),
            Self::Sin { amplitude, frequency } => Ok(amplitude * (frequency * t).sin()),
            Self::Tabulated(table) => table.interpolate(t),
            Self::Sum(parts) => parts.iter().map(|p| p.value(t)).sum(),
        }
    }

    /// `∫₀ᵗ γ(u) du`
    pub fn integral(&self, t: f64) -> Result<f64> {
        match self {
            Self::Constant(v) => Ok(v * t),
            Self::Tanh { amplitude } => Ok(amplitude * ln_cosh(t)),
            Self::Sin { amplitude, frequency } => {
                if *frequency == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(amplitude * (1.0 - (frequency * t).cos()) / frequency)
                }
            }
            Self::Tabulated(table) => table.integral(t),
            Self::Sum(parts) => parts.iter().map(|p| p.integral(t)).sum(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Self::Constant(v) => Self::Constant(v * factor),
            Self::Tanh { amplitude } => Self::Tanh {
                amplitude: amplitude * factor,
            },
            Self::Sin { amplitude, frequency } => Self::Sin {
                amplitude: amplitude * factor,
                frequency: *frequency,
            },
            Self::Tabulated(table) => Self::Tabulated(table.scaled(factor)),
            Self::Sum(parts) => Self::Sum(parts.iter().map(|p| p.scaled(factor)).collect()),
        }
    }
}

/// Which one-sided value to use at a discontinuity of `α(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `α(t)`, right-continuous.
    Right,
    /// `lim α(u)` as `u → t⁻`.
    Left,
}

/// Local time stretching `α(t) ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDeformation {
    Uniform(f64),
    /// `α = 0` on `[0, t₁)`, `α = 1` afterwards.
    Step(f64),
    Tabulated(Table),
}

impl TimeDeformation {
    pub fn uniform(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        Ok(Self::Uniform(alpha))
    }

    pub fn step(t1: f64) -> Result<Self> {
        if !(t1 >= 0.0 && t1.is_finite()) {
            return Err(Error::InvalidParameter(format!("step time must be >= 0, got {t1}")));
        }
        Ok(Self::Step(t1))
    }

    pub fn tabulated(times: Vec<f64>, alphas: Vec<f64>) -> Result<Self> {
        if let Some(a) = alphas.iter().find(|a| **a < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tabulated alpha must be >= 0, got {a}"
            )));
        }
        Ok(Self::Tabulated(Table::new(times, alphas)?))
    }

    pub fn alpha(&self, t: f64) -> Result<f64> {
        self.alpha_sided(t, Side::Right)
    }

    pub fn alpha_sided(&self, t: f64, side: Side) -> Result<f64> {
        match self {
            Self::Uniform(a) => Ok(*a),
            Self::Step(t1) => {
                let on = match side {
                    Side::Right => t >= *t1,
                    Side::Left => t > *t1,
                };
                Ok(if on { 1.0 } else { 0.0 })
            }
            Self::Tabulated(table) => table.interpolate(t),
        }
    }

    /// `τ(t) = ∫₀ᵗ α`
    pub fn tau(&self, t: f64) -> Result<f64> {
        match self {
            Self::Uniform(a) => Ok(a * t),
            Self::Step(t1) => Ok((t - t1).max(0.0)),
            Self::Tabulated(table) => table.integral(t),
        }
    }
}

pub fn tau_of(def: &TimeDeformation, t: f64) -> Result<f64> {
    def.tau(t)
}

/// Operator-valued function of time.
#[derive(Clone)]
pub enum MatrixFn {
    Constant(CMatrix),
    Dynamic(Arc<dyn Fn(f64) -> CMatrix + Send + Sync>),
}

impl MatrixFn {
    pub fn dynamic(f: impl Fn(f64) -> CMatrix + Send + Sync + 'static) -> Self {
        Self::Dynamic(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> CMatrix {
        match self {
            Self::Constant(m) => m.clone(),
            Self::Dynamic(f) => f(t),
        }
    }
}

impl fmt::Debug for MatrixFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(m) => f.debug_tuple("Constant").field(m).finish(),
            Self::Dynamic(_) => f.write_str("Dynamic(..)"),
        }
    }
}

/// A dissipative channel `γ(t) (A ϱ A† − ½{A†A, ϱ})`.
#[derive(Debug, Clone)]
pub struct Channel {
    pub operator: MatrixFn,
    pub rate: RateFunction,
}

/// `L(t)[ϱ] = −i[H(t), ϱ] + Σ_k γ_k(t)(A_k ϱ A_k† − ½{A_k†A_k, ϱ})`, optionally
/// multiplied by a product of time deformations.
#[derive(Debug, Clone)]
pub struct TimeLocalGenerator {
    dim: usize,
    hamiltonian: Option<MatrixFn>,
    channels: Vec<Channel>,
    deformations: Vec<TimeDeformation>,
}

const HERMITIAN_TOL: f64 = 1e-10;

impl TimeLocalGenerator {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            hamiltonian: None,
            channels: Vec::new(),
            deformations: Vec::new(),
        }
    }

    pub fn with_hamiltonian(mut self, h: MatrixFn) -> Self {
        self.hamiltonian = Some(h);
        self
    }

    pub fn with_channel(mut self, operator: MatrixFn, rate: RateFunction) -> Self {
        self.channels.push(Channel { operator, rate });
        self
    }

    /// `L(t)[ϱ] = ½ Σ_i γ_i(t)(σ_i ϱ σ_i − ϱ)`.
    pub fn pauli_dephasing(rates: [RateFunction; 3]) -> Self {
        let sigma = pauli_matrices();
        let mut gen = Self::new(2);
        for (s, rate) in sigma.into_iter().zip(rates) {
            gen = gen.with_channel(MatrixFn::Constant(s), rate.scaled(0.5));
        }
        gen
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn deformations(&self) -> &[TimeDeformation] {
        &self.deformations
    }

    pub fn time_scale(&self, t: f64, side: Side) -> Result<f64> {
        self.deformations
            .iter()
            .try_fold(1.0, |acc, d| Ok(acc * d.alpha_sided(t, side)?))
    }

    /// Effective rate of channel `k` at `t`, including any deformation factor.
    pub fn rate(&self, k: usize, t: f64) -> Result<f64> {
        Ok(self.time_scale(t, Side::Right)? * self.channels[k].rate.value(t)?)
    }

    pub fn superop(&self, t: f64) -> Result<Superoperator> {
        self.superop_sided(t, Side::Right)
    }

    pub fn superop_sided(&self, t: f64, side: Side) -> Result<Superoperator> {
        let base = self.undeformed_superop(t)?;
        if self.deformations.is_empty() {
            return Ok(base);
        }
        let scale = self.time_scale(t, side)?;
        Ok(base.scale(scale))
    }

    fn undeformed_superop(&self, t: f64) -> Result<Superoperator> {
        let d = self.dim;
        let eye = CMatrix::identity(d, d);
        let mut m = CMatrix::zeros(d * d, d * d);
        if let Some(h) = &self.hamiltonian {
            let h = h.at(t);
            self.check_shape(&h)?;
            let deviation = (&h - h.adjoint()).iter().fold(0.0_f64, |a, z| a.max(z.norm()));
            if deviation > HERMITIAN_TOL {
                return Err(Error::InvalidParameter(format!(
                    "Hamiltonian not Hermitian at t = {t} (deviation {deviation:.3e})"
                )));
            }
            let minus_i = num_complex::Complex64::new(0.0, -1.0);
            m += (eye.kronecker(&h) - h.transpose().kronecker(&eye)) * minus_i;
        }
        for ch in &self.channels {
            let gamma = ch.rate.value(t)?;
            if gamma == 0.0 {
                continue;
            }
            let a = ch.operator.at(t);
            self.check_shape(&a)?;
            let ada = a.adjoint() * &a;
            let jump = a.conjugate().kronecker(&a);
            let anti = eye.kronecker(&ada) + ada.transpose().kronecker(&eye);
            m += (jump - anti * c(0.5)) * c(gamma);
        }
        Superoperator::new(d, m)
    }

    fn check_shape(&self, m: &CMatrix) -> Result<()> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.nrows(),
            });
        }
        Ok(())
    }
}

pub fn generator_superop(gen: &TimeLocalGenerator, t: f64) -> Result<Superoperator> {
    gen.superop(t)
}

/// `α(t) L(t)`: scales the Hamiltonian and every rate by `α(t)`.
pub fn deform_generator(gen: &TimeLocalGenerator, def: &TimeDeformation) -> TimeLocalGenerator {
    let mut out = gen.clone();
    out.deformations.push(def.clone());
    out
}

/// Rates `(1, 1, −tanh t)`: CP for all times yet CP-indivisible at every instant.
pub fn eternal_non_markovian_rates() -> [RateFunction; 3] {
    [
        RateFunction::Constant(1.0),
        RateFunction::Constant(1.0),
        RateFunction::neg_tanh(),
    ]
}

/// Closed-form eigenvalues of the commuting Pauli dephasing generator:
/// `λ_k(t) = exp(−∫₀ᵗ (γ_i + γ_j))` with `{i, j, k}` distinct.
pub fn pauli_dephasing_eigenvalues(
    rates: &[RateFunction; 3],
    grid: &TimeGrid,
) -> Result<Vec<PauliEigenvalues>> {
    grid.times()
        .map(|t| {
            let g = [rates[0].integral(t)?, rates[1].integral(t)?, rates[2].integral(t)?];
            Ok(PauliEigenvalues::new(
                (-(g[1] + g[2])).exp(),
                (-(g[0] + g[2])).exp(),
                (-(g[0] + g[1])).exp(),
            ))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateViolation {
    /// Zero-based channel index.
    pub channel: usize,
    pub t: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateWitness {
    pub nonnegative: bool,
    pub first_violation: Option<RateViolation>,
}

/// Scans the given GKSL rates for the earliest negative value on the grid.
pub fn rates_nonneg_witness(
    gen: &TimeLocalGenerator,
    grid: &TimeGrid,
    tol: f64,
) -> Result<RateWitness> {
    for t in grid.times() {
        for k in 0..gen.channels.len() {
            let rate = gen.rate(k, t)?;
            if rate < -tol {
                return Ok(RateWitness {
                    nonnegative: false,
                    first_violation: Some(RateViolation { channel: k, t, rate }),
                });
            }
        }
    }
    Ok(RateWitness {
        nonnegative: true,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn pauli_action(op: &Superoperator) -> [Complex64; 3] {
        let sigma = pauli_matrices();
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            out[k] = (&sigma[k] * op.apply(&sigma[k]).unwrap()).trace() * 0.5;
        }
        out
    }

    #[test]
    fn eternal_generator_at_zero() {
        let gen = TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates());
        let l = gen.superop(0.0).unwrap();
        let diag = pauli_action(&l);
        assert_abs_diff_eq!(diag[0].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(diag[1].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(diag[2].re, -2.0, epsilon = 1e-15);
        // Id + L is Pauli diagonal exactly when L is
        let shifted = Superoperator::new(2, Superoperator::identity(2).matrix() + l.matrix()).unwrap();
        assert!(shifted.pauli_diagonal_residual().unwrap() < 1e-15);
    }

    #[test]
    fn empty_generator_is_zero() {
        let gen = TimeLocalGenerator::new(2);
        assert_eq!(gen.superop(0.7).unwrap(), Superoperator::zeros(2));
    }

    #[test]
    fn commutator_spectrum_is_imaginary() {
        let h = &pauli_matrices()[2] * c(0.5);
        let gen = TimeLocalGenerator::new(2).with_hamiltonian(MatrixFn::Constant(h));
        let l = gen.superop(3.0).unwrap();
        let mut eig: Vec<Complex64> = l
            .matrix()
            .clone()
            .schur()
            .eigenvalues()
            .unwrap()
            .iter()
            .copied()
            .collect();
        eig.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!(eig.iter().all(|z| z.re.abs() < 1e-15));
        let im: Vec<f64> = eig.iter().map(|z| z.im).collect();
        for (got, want) in im.iter().zip([-1.0, 0.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn generator_annihilates_trace() {
        let h = MatrixFn::dynamic(|t| &pauli_matrices()[0] * c(t.cos()));
        let lowering = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let gen = TimeLocalGenerator::new(2)
            .with_hamiltonian(h)
            .with_channel(MatrixFn::Constant(lowering), RateFunction::Sin {
                amplitude: 0.7,
                frequency: 1.3,
            })
            .with_channel(MatrixFn::Constant(pauli_matrices()[2].clone()), RateFunction::neg_tanh());
        for t in [0.0, 0.4, 2.5] {
            let l = gen.superop(t).unwrap();
            for j in 0..2 {
                for i in 0..2 {
                    let col = i + 2 * j;
                    let tr = l.matrix()[(0, col)] + l.matrix()[(3, col)];
                    assert!(tr.norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn deformation_scales_generator() {
        let gen = TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates());
        let same = deform_generator(&gen, &TimeDeformation::uniform(1.0).unwrap());
        assert_eq!(same.superop(0.8).unwrap(), gen.superop(0.8).unwrap());

        let half = deform_generator(&gen, &TimeDeformation::uniform(0.5).unwrap());
        assert_eq!(half.superop(0.8).unwrap(), gen.superop(0.8).unwrap().scale(0.5));
        for k in 0..3 {
            assert_eq!(half.rate(k, 0.8).unwrap(), 0.5 * gen.rate(k, 0.8).unwrap());
        }

        let step = deform_generator(&gen, &TimeDeformation::step(1.0).unwrap());
        assert_eq!(step.superop(0.5).unwrap(), Superoperator::zeros(2));
        assert_eq!(step.superop(1.0).unwrap(), gen.superop(1.0).unwrap());
        assert_eq!(step.superop_sided(1.0, Side::Left).unwrap(), Superoperator::zeros(2));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(TimeDeformation::uniform(0.5).unwrap().tau(2.0).unwrap(), 1.0);
        assert_eq!(TimeDeformation::step(1.0).unwrap().tau(3.0).unwrap(), 2.0);
        assert_eq!(TimeDeformation::step(1.0).unwrap().tau(0.5).unwrap(), 0.0);
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let def = TimeDeformation::tabulated(times.clone(), vec![1.0; times.len()]).unwrap();
        for t in [0.0, 0.1, 1.3, 4.9, 5.0] {
            assert_abs_diff_eq!(def.tau(t).unwrap(), t, epsilon = 1e-14);
        }
        assert!(matches!(def.tau(5.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn tabulated_deformation_rejects_negative_alpha() {
        assert!(TimeDeformation::tabulated(vec![0.0, 1.0], vec![1.0, -0.1]).is_err());
        assert!(TimeDeformation::uniform(-1.0).is_err());
    }

    #[test]
    fn tau_is_nondecreasing() {
        let def = TimeDeformation::tabulated(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 2.0, 0.0, 0.5]).unwrap();
        let mut prev = 0.0;
        for i in 0..=300 {
            let tau = def.tau(i as f64 * 0.01).unwrap();
            assert!(tau >= prev);
            prev = tau;
        }
        assert_abs_diff_eq!(def.tau(3.0).unwrap(), 1.0 + 1.0 + 0.25, epsilon = 1e-14);
    }

    #[test]
    fn eternal_eigenvalues_closed_form() {
        let grid = TimeGrid::new(5.0, 50).unwrap();
        let lam = pauli_dephasing_eigenvalues(&eternal_non_markovian_rates(), &grid).unwrap();
        for (t, l) in grid.times().zip(&lam) {
            let expected = 0.5 * (1.0 + (-2.0 * t).exp());
            assert_abs_diff_eq!(l.0[0], expected, epsilon = 1e-14);
            assert_abs_diff_eq!(l.0[1], expected, epsilon = 1e-14);
            assert_abs_diff_eq!(l.0[2], (-2.0 * t).exp(), epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_and_constant_rate_eigenvalues() {
        let grid = TimeGrid::new(1.0, 4).unwrap();
        let zero = [0.0, 0.0, 0.0].map(RateFunction::Constant);
        for l in pauli_dephasing_eigenvalues(&zero, &grid).unwrap() {
            assert_eq!(l, PauliEigenvalues::identity());
        }
        let ones = [1.0, 1.0, 1.0].map(RateFunction::Constant);
        let lam = pauli_dephasing_eigenvalues(&ones, &grid).unwrap();
        for k in 0..3 {
            assert_abs_diff_eq!(lam[4].0[k], (-2.0_f64).exp(), epsilon = 1e-15);
        }
    }

    #[test]
    fn rate_witness_examples() {
        let grid = TimeGrid::new(2.0, 200).unwrap();
        let eternal = TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates());
        let w = rates_nonneg_witness(&eternal, &grid, 1e-9).unwrap();
        assert!(!w.nonnegative);
        let v = w.first_violation.unwrap();
        assert_eq!(v.channel, 2);
        assert_eq!(v.t, grid.time(1));

        let ones = TimeLocalGenerator::pauli_dephasing([1.0, 1.0, 1.0].map(RateFunction::Constant));
        assert!(rates_nonneg_witness(&ones, &grid, 1e-9).unwrap().nonnegative);

        let sine = TimeLocalGenerator::pauli_dephasing([
            RateFunction::Constant(1.0),
            RateFunction::Constant(1.0),
            RateFunction::Sin { amplitude: 1.0, frequency: 1.0 },
        ]);
        let pi = std::f64::consts::PI;
        let short = TimeGrid::new(pi, 100).unwrap();
        assert!(rates_nonneg_witness(&sine, &short, 1e-9).unwrap().nonnegative);
        let long = TimeGrid::new(1.5 * pi, 150).unwrap();
        let w = rates_nonneg_witness(&sine, &long, 1e-9).unwrap();
        assert!(!w.nonnegative);
        assert!(w.first_violation.unwrap().t > pi);
    }

    #[test]
    fn tabulated_rate_out_of_range() {
        let rate = RateFunction::Tabulated(Table::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap());
        assert_abs_diff_eq!(rate.value(0.5).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rate.integral(1.0).unwrap(), 1.5, epsilon = 1e-15);
        let gen = TimeLocalGenerator::pauli_dephasing([rate.clone(), rate.clone(), rate]);
        assert!(matches!(gen.superop(1.5), Err(Error::OutOfRange { .. })));
    }
}
