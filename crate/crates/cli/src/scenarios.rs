//! Scenario catalogue: builds the maps for each scenario, cross-checks them
//! against closed forms and assembles the run record.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use tdme_core::divisibility::{
    classify_dynamics, first_positivity_violation, step_deformation_witness, Classification, ClassifyOptions,
    DivisibilityReport, PViolation, StepWitness,
};
use tdme_core::generators::{
    eternal_non_markovian_rates, pauli_dephasing_eigenvalues, rates_nonneg_witness, RateFunction, RateWitness,
    TimeDeformation, TimeLocalGenerator,
};
use tdme_core::kernels::{
    deform_kernel, dephasing_sin_kernel, dephasing_sin_lambda, dephasing_sin_map_laplace, eternal_deformed_lambda,
    eternal_map_laplace, nalezyty_kernel, pauli_kernel_from_map_laplace, validate_nalezyty, ExponentialProfile,
    NalezytyParams, NalezytyReport, PauliKernel,
};
use tdme_core::solvers::{
    deform_pauli_via_laplace, deformed_map_series, final_value, invert_pauli_laplace, laplace_fn,
    propagate_local, propagate_volterra, LaplaceFn, MapTrajectory, TimeGrid,
};
use tdme_core::PauliEigenvalues;

use crate::config::{Engine, Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::record::{GridInfo, OracleCheck, RunRecord, ARTIFACT, VERSION};

const ORACLE_TOL_LAPLACE: f64 = 1e-6;
const ORACLE_TOL_GRID: f64 = 1e-4;
const SHOWN_VIOLATIONS: usize = 5;

/// The undeformed map and one deformed map per α, in configuration order.
pub struct Sweep {
    pub original: MapTrajectory,
    pub deformed: Vec<(f64, MapTrajectory)>,
}

/// Classification report trimmed for output: violations are counted and
/// only the earliest few are listed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationSummary {
    pub classification: Classification,
    pub worst_pair: Option<(f64, f64)>,
    pub min_choi_eigenvalue: Option<f64>,
    pub pairs_checked: usize,
    pub p_divisibility_assessed: bool,
    pub p_violation_count: usize,
    pub first_p_violations: Vec<PViolation>,
    pub singular_at: Option<f64>,
    pub tolerances: ClassifyOptions,
}

impl From<DivisibilityReport> for ClassificationSummary {
    fn from(r: DivisibilityReport) -> Self {
        Self {
            classification: r.classification,
            worst_pair: r.worst_pair,
            min_choi_eigenvalue: r.min_choi_eigenvalue,
            pairs_checked: r.pairs_checked,
            p_divisibility_assessed: r.p_divisibility_assessed,
            p_violation_count: r.p_violations.len(),
            first_p_violations: r.p_violations.into_iter().take(SHOWN_VIOLATIONS).collect(),
            singular_at: r.singular_at,
            tolerances: r.tolerances,
        }
    }
}

fn classify_options(cfg: &ScenarioConfig) -> ClassifyOptions {
    ClassifyOptions {
        stride: cfg.stride(),
        cp_tol: cfg.tol(),
        ..Default::default()
    }
}

pub fn classify(cfg: &ScenarioConfig, traj: &MapTrajectory) -> ClassificationSummary {
    classify_dynamics(traj, &classify_options(cfg)).into()
}

// ---------------------------------------------------------------------------
// map sources

fn example1_rates(cfg: &ScenarioConfig) -> [RateFunction; 3] {
    let p = &cfg.parameters;
    match (p.g1, p.g2, p.g3) {
        (Some(a), Some(b), Some(c)) => [a, b, c].map(RateFunction::Constant),
        _ => eternal_non_markovian_rates(),
    }
}

fn example1_generator(cfg: &ScenarioConfig) -> TimeLocalGenerator {
    TimeLocalGenerator::pauli_dephasing(example1_rates(cfg))
}

fn nalezyty_params(cfg: &ScenarioConfig) -> Result<NalezytyParams, CliError> {
    let p = &cfg.parameters;
    let params = NalezytyParams {
        a: [p.a1, p.a2, p.a3].map(|v| v.expect("validated")),
        profile: ExponentialProfile {
            f0: p.f0.expect("validated"),
            rate: p.mu.unwrap_or(1.0),
        },
    };
    let violations = params.violations();
    if !violations.is_empty() {
        return Err(CliError::Config(format!("parameters: {}", violations.join("; "))));
    }
    Ok(params)
}

fn relaxation(cfg: &ScenarioConfig) -> ([f64; 3], [f64; 3]) {
    let p = &cfg.parameters;
    (
        [p.p1, p.p2, p.p3].map(|v| v.expect("validated")),
        [p.r1, p.r2, p.r3].map(|v| v.expect("validated")),
    )
}

fn relaxation_lambda(plateau: [f64; 3], rate: [f64; 3], t: f64) -> [f64; 3] {
    [0, 1, 2].map(|k| plateau[k] + (1.0 - plateau[k]) * (-rate[k] * t).exp())
}

fn relaxation_laplace(plateau: [f64; 3], rate: [f64; 3]) -> [LaplaceFn; 3] {
    [0, 1, 2].map(|k| {
        let (p, r) = (plateau[k], rate[k]);
        laplace_fn(move |s| p / s + (1.0 - p) / (s + r))
    })
}

/// Laplace data of the undeformed Pauli map for memory-kernel scenarios.
fn map_laplace(cfg: &ScenarioConfig) -> Result<[LaplaceFn; 3], CliError> {
    Ok(match cfg.scenario {
        Scenario::Example2 => dephasing_sin_map_laplace(cfg.parameters.gamma.expect("validated")),
        Scenario::Example3 => nalezyty_params(cfg)?.map_laplace(),
        Scenario::Example4 => eternal_map_laplace(),
        Scenario::Custom => {
            let (p, r) = relaxation(cfg);
            relaxation_laplace(p, r)
        }
        Scenario::Example1 => unreachable!("time-local scenario"),
    })
}

fn memory_kernel(cfg: &ScenarioConfig) -> Result<PauliKernel, CliError> {
    Ok(match cfg.scenario {
        Scenario::Example2 => dephasing_sin_kernel(cfg.parameters.gamma.expect("validated"))?,
        Scenario::Example3 => nalezyty_kernel(&nalezyty_params(cfg)?)?,
        _ => pauli_kernel_from_map_laplace(&map_laplace(cfg)?)?,
    })
}

/// Deformation of `λ_s`: `1/(s − α²(s − 1/λ_s))`.
fn deformed_laplace(lambda_s: &[LaplaceFn; 3], alpha: f64) -> [LaplaceFn; 3] {
    let a2 = alpha * alpha;
    lambda_s.clone().map(|f| laplace_fn(move |s| 1.0 / (s - a2 * (s - 1.0 / f(s)))))
}

/// Propagates the original and every deformed map with the configured engine.
pub fn sweep(cfg: &ScenarioConfig) -> Result<Sweep, CliError> {
    let grid = cfg.grid();
    let alphas = cfg.alphas();
    let run_alphas = |f: &(dyn Fn(f64) -> Result<MapTrajectory, CliError> + Sync)| {
        alphas
            .par_iter()
            .map(|&a| f(a).map(|traj| (a, traj)))
            .collect::<Result<Vec<_>, CliError>>()
    };

    match cfg.engine {
        Engine::Local => {
            let gen = example1_generator(cfg);
            let original = propagate_local(&gen, &TimeDeformation::Uniform(1.0), &grid)?;
            let deformed = run_alphas(&|a| Ok(propagate_local(&gen, &TimeDeformation::uniform(a)?, &grid)?))?;
            Ok(Sweep { original, deformed })
        }
        Engine::Laplace => {
            let lambda_s = map_laplace(cfg)?;
            let original = invert_pauli_laplace(&lambda_s, &grid)?;
            let deformed = run_alphas(&|a| Ok(deform_pauli_via_laplace(&lambda_s, a, &grid)?))?;
            Ok(Sweep { original, deformed })
        }
        Engine::Volterra => {
            let kernel = memory_kernel(cfg)?;
            let original = propagate_volterra(&kernel, &grid)?;
            let deformed = run_alphas(&|a| Ok(propagate_volterra(&deform_kernel(&kernel, a)?, &grid)?))?;
            Ok(Sweep { original, deformed })
        }
        Engine::Series => {
            let original = propagate_volterra(&memory_kernel(cfg)?, &grid)?;
            let (n_max, tol) = (cfg.n_max(), cfg.series_tol());
            let deformed = run_alphas(&|a| Ok(deformed_map_series(&original, a, n_max, tol)?.trusted()?))?;
            Ok(Sweep { original, deformed })
        }
        Engine::Auto => unreachable!("resolved during validation"),
    }
}

// ---------------------------------------------------------------------------
// helpers

fn pauli(traj: &MapTrajectory) -> Result<Vec<PauliEigenvalues>, CliError> {
    Ok(traj.pauli_samples()?)
}

fn max_deviation(grid: &TimeGrid, samples: &[PauliEigenvalues], exact: impl Fn(f64) -> [f64; 3]) -> f64 {
    grid.times()
        .zip(samples)
        .map(|(t, l)| {
            let e = exact(t);
            (0..3).map(|k| (l.0[k] - e[k]).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) })
}

fn engine_tol(engine: Engine) -> f64 {
    if engine == Engine::Laplace {
        ORACLE_TOL_LAPLACE
    } else {
        ORACLE_TOL_GRID
    }
}

fn long_rows(grid: &TimeGrid, sweep: &[(f64, Vec<PauliEigenvalues>)], row: impl Fn(f64, f64, &PauliEigenvalues) -> Vec<f64>) -> Vec<Vec<f64>> {
    let mut rows = Vec::with_capacity(grid.len() * sweep.len());
    for (i, t) in grid.times().enumerate() {
        for (alpha, samples) in sweep {
            rows.push(row(t, *alpha, &samples[i]));
        }
    }
    rows
}

fn min_choi(samples: &[PauliEigenvalues], grid: &TimeGrid) -> (f64, f64) {
    samples
        .iter()
        .zip(grid.times())
        .map(|(l, t)| (l.min_choi_eigenvalue(), t))
        .fold((f64::INFINITY, 0.0), |best, x| if x.0 < best.0 { x } else { best })
}

fn first_choi_violation(samples: &[PauliEigenvalues], grid: &TimeGrid, tol: f64) -> Option<f64> {
    samples
        .iter()
        .zip(grid.times())
        .find(|(l, _)| l.min_choi_eigenvalue() < -tol)
        .map(|(_, t)| t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Violation {
    t: f64,
    lambda: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct Extremum {
    value: f64,
    t: f64,
}

fn final_limits(lambda_s: &[LaplaceFn; 3]) -> Result<[f64; 3], CliError> {
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = final_value(&*lambda_s[k])?.value;
    }
    Ok(out)
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

// ---------------------------------------------------------------------------
// scenarios

/// Columns, rows, report and oracle checks of one scenario run.
type Outcome = (Vec<String>, Vec<Vec<f64>>, Value, Vec<OracleCheck>);

#[derive(Serialize)]
struct Example1Report {
    rates_witness: RateWitness,
    original_classification: ClassificationSummary,
    step_witness: StepWitness,
}

fn run_example1(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid();
    let gen = example1_generator(cfg);
    let rates = example1_rates(cfg);
    let sweep = sweep(cfg)?;
    let mut oracles = Vec::new();
    let mut samples = Vec::new();
    for (alpha, traj) in &sweep.deformed {
        let lambda = pauli(traj)?;
        // uniform dilation of a time-local map resamples it at αt
        let scaled = TimeGrid::new(alpha * grid.t_end(), grid.n_steps())?;
        let exact = pauli_dephasing_eigenvalues(&rates, &scaled)?;
        let dev = lambda
            .iter()
            .zip(&exact)
            .map(|(a, b)| (0..3).map(|k| (a.0[k] - b.0[k]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        oracles.push(OracleCheck::new(format!("lambda(alpha={alpha}) vs closed form"), dev, ORACLE_TOL_LAPLACE));
        samples.push((*alpha, lambda));
    }
    let rows = long_rows(&grid, &samples, |t, a, l| vec![t, a, l.0[0], l.0[1], l.0[2]]);
    let t1 = cfg.parameters.t1.expect("filled");
    let report = Example1Report {
        rates_witness: rates_nonneg_witness(&gen, &grid, cfg.tol())?,
        original_classification: classify(cfg, &sweep.original),
        step_witness: step_deformation_witness(&gen, t1, &grid, cfg.tol())?,
    };
    let columns = ["t", "alpha", "lambda1", "lambda2", "lambda3"];
    Ok((columns.map(String::from).to_vec(), rows, to_value(report), oracles))
}

#[derive(Serialize)]
struct Example2Report {
    deformed_max: Extremum,
    deformed_positive: bool,
    first_violation: Option<Violation>,
    original_p_divisible: bool,
    original_classification: ClassificationSummary,
}

fn run_example2(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid();
    let gamma = cfg.parameters.gamma.expect("validated");
    let alpha = cfg.alphas()[0];
    let sweep = sweep(cfg)?;
    let original = pauli(&sweep.original)?;
    let deformed = pauli(&sweep.deformed[0].1)?;

    let tol = ORACLE_TOL_GRID;
    let closed = |a: f64| move |t: f64| [dephasing_sin_lambda(gamma, a, t), dephasing_sin_lambda(gamma, a, t), 1.0];
    let oracles = vec![
        OracleCheck::new("original lambda vs closed form", max_deviation(&grid, &original, closed(1.0)), tol),
        OracleCheck::new("deformed lambda vs closed form", max_deviation(&grid, &deformed, closed(alpha)), tol),
    ];

    let rows: Vec<Vec<f64>> = grid
        .times()
        .zip(original.iter().zip(&deformed))
        .map(|(t, (o, d))| vec![t, o.0[0], d.0[0]])
        .collect();
    let deformed_max = grid
        .times()
        .zip(&deformed)
        .map(|(t, l)| Extremum { value: l.0[0], t })
        .fold(Extremum { value: f64::NEG_INFINITY, t: 0.0 }, |m, x| if x.value > m.value { x } else { m });
    let first_violation = first_positivity_violation(&deformed, &grid, cfg.tol()).map(|(t, l)| Violation { t, lambda: l.0 });
    let classification = classify(cfg, &sweep.original);
    let report = Example2Report {
        deformed_max,
        deformed_positive: first_violation.is_none(),
        first_violation,
        original_p_divisible: classification.p_divisibility_assessed && classification.p_violation_count == 0,
        original_classification: classification,
    };
    let columns = ["t", "lambda1_original", "lambda1_deformed"];
    Ok((columns.map(String::from).to_vec(), rows, to_value(report), oracles))
}

#[derive(Serialize)]
struct DeformedSummary {
    alpha: f64,
    limit: [f64; 3],
    min_choi_eigenvalue: Extremum,
    first_choi_violation: Option<f64>,
    first_positivity_violation: Option<Violation>,
}

#[derive(Serialize)]
struct Example3Report {
    parameters: NalezytyReport,
    original_classification: ClassificationSummary,
    deformed: Vec<DeformedSummary>,
}

fn run_example3(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid();
    let params = nalezyty_params(cfg)?;
    let sweep = sweep(cfg)?;
    let tol = engine_tol(cfg.engine);
    let original = pauli(&sweep.original)?;
    let mut oracles = vec![OracleCheck::new(
        "original lambda vs 1 - F(t)/a",
        max_deviation(&grid, &original, |t| params.predicted_eigenvalues(t)),
        tol,
    )];

    let lambda_s = params.map_laplace();
    let mut samples = Vec::new();
    let mut deformed = Vec::new();
    for (alpha, traj) in &sweep.deformed {
        let lambda = pauli(traj)?;
        let direct = invert_pauli_laplace(&params.deformed_map_laplace(*alpha), &grid)?;
        let direct = direct.pauli_samples()?;
        let dev = lambda
            .iter()
            .zip(&direct)
            .map(|(a, b)| (0..3).map(|k| (a.0[k] - b.0[k]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        oracles.push(OracleCheck::new(format!("deformed lambda(alpha={alpha}) vs closed-form transform"), dev, tol));

        let limit = final_limits(&deformed_laplace(&lambda_s, *alpha))?;
        let expected = params.deformed_limit(*alpha);
        let limit_dev = (0..3).map(|k| (limit[k] - expected[k]).abs()).fold(0.0, f64::max);
        oracles.push(OracleCheck::new(format!("limit(alpha={alpha}) vs closed form"), limit_dev, ORACLE_TOL_LAPLACE));

        let (value, t) = min_choi(&lambda, &grid);
        deformed.push(DeformedSummary {
            alpha: *alpha,
            limit,
            min_choi_eigenvalue: Extremum { value, t },
            first_choi_violation: first_choi_violation(&lambda, &grid, cfg.tol()),
            first_positivity_violation: first_positivity_violation(&lambda, &grid, cfg.tol())
                .map(|(t, l)| Violation { t, lambda: l.0 }),
        });
        samples.push((*alpha, lambda));
    }
    let rows = long_rows(&grid, &samples, |t, a, l| vec![t, a, l.0[0], l.0[1], l.0[2]]);
    let report = Example3Report {
        parameters: validate_nalezyty(&params),
        original_classification: classify(cfg, &sweep.original),
        deformed,
    };
    let columns = ["t", "alpha", "lambda1", "lambda2", "lambda3"];
    Ok((columns.map(String::from).to_vec(), rows, to_value(report), oracles))
}

#[derive(Serialize)]
struct EllSummary {
    alpha: f64,
    ell_at_zero: f64,
    ell_positive: bool,
    ell_at_end: f64,
    ell_limit: f64,
    first_fa_violation: Option<f64>,
    min_choi_eigenvalue: Extremum,
}

#[derive(Serialize)]
struct Example4Report {
    original_classification: ClassificationSummary,
    sweep: Vec<EllSummary>,
}

fn ell(l: &PauliEigenvalues) -> f64 {
    l.0[0] + l.0[1] - l.0[2] - 1.0
}

fn run_example4(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid();
    let sweep = sweep(cfg)?;
    let tol = engine_tol(cfg.engine);
    let lambda_s = eternal_map_laplace();
    let mut oracles = Vec::new();
    let mut samples = Vec::new();
    let mut summaries = Vec::new();
    for (alpha, traj) in &sweep.deformed {
        let lambda = pauli(traj)?;
        let dev = max_deviation(&grid, &lambda, |t| eternal_deformed_lambda(*alpha, t));
        oracles.push(OracleCheck::new(format!("lambda(alpha={alpha}) vs closed form"), dev, tol));

        let limits = final_limits(&deformed_laplace(&lambda_s, *alpha))?;
        let ell_limit = limits[0] + limits[1] - limits[2] - 1.0;
        let a2 = alpha * alpha;
        oracles.push(OracleCheck::new(
            format!("ell limit(alpha={alpha}) vs (1-a^2)/(1+a^2)"),
            (ell_limit - (1.0 - a2) / (1.0 + a2)).abs(),
            ORACLE_TOL_LAPLACE,
        ));

        let (value, t) = min_choi(&lambda, &grid);
        summaries.push(EllSummary {
            alpha: *alpha,
            ell_at_zero: ell(&lambda[0]),
            ell_positive: lambda[1..].iter().all(|l| ell(l) > 0.0),
            ell_at_end: ell(&lambda[lambda.len() - 1]),
            ell_limit,
            first_fa_violation: first_choi_violation(&lambda, &grid, cfg.tol()),
            min_choi_eigenvalue: Extremum { value, t },
        });
        samples.push((*alpha, lambda));
    }
    let rows = long_rows(&grid, &samples, |t, a, l| vec![t, a, ell(l)]);
    let report = Example4Report {
        original_classification: classify(cfg, &sweep.original),
        sweep: summaries,
    };
    Ok((["t", "alpha", "ell"].map(String::from).to_vec(), rows, to_value(report), oracles))
}

#[derive(Serialize)]
struct CustomReport {
    original_classification: ClassificationSummary,
    deformed: Vec<DeformedSummary>,
}

fn run_custom(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid();
    let (plateau, rate) = relaxation(cfg);
    let sweep = sweep(cfg)?;
    let original = pauli(&sweep.original)?;
    let oracles = vec![OracleCheck::new(
        "undeformed lambda vs closed form",
        max_deviation(&grid, &original, |t| relaxation_lambda(plateau, rate, t)),
        ORACLE_TOL_LAPLACE,
    )];
    let lambda_s = relaxation_laplace(plateau, rate);
    let mut samples = Vec::new();
    let mut deformed = Vec::new();
    for (alpha, traj) in &sweep.deformed {
        let lambda = pauli(traj)?;
        let (value, t) = min_choi(&lambda, &grid);
        deformed.push(DeformedSummary {
            alpha: *alpha,
            limit: final_limits(&deformed_laplace(&lambda_s, *alpha))?,
            min_choi_eigenvalue: Extremum { value, t },
            first_choi_violation: first_choi_violation(&lambda, &grid, cfg.tol()),
            first_positivity_violation: first_positivity_violation(&lambda, &grid, cfg.tol())
                .map(|(t, l)| Violation { t, lambda: l.0 }),
        });
        samples.push((*alpha, lambda));
    }
    let rows = long_rows(&grid, &samples, |t, a, l| vec![t, a, l.0[0], l.0[1], l.0[2]]);
    let report = CustomReport {
        original_classification: classify(cfg, &sweep.original),
        deformed,
    };
    let columns = ["t", "alpha", "lambda1", "lambda2", "lambda3"];
    Ok((columns.map(String::from).to_vec(), rows, to_value(report), oracles))
}

/// Runs a validated scenario. Oracle failures are recorded, not raised.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunRecord, CliError> {
    let (columns, rows, report, oracles) = match cfg.scenario {
        Scenario::Example1 => run_example1(cfg)?,
        Scenario::Example2 => run_example2(cfg)?,
        Scenario::Example3 => run_example3(cfg)?,
        Scenario::Example4 => run_example4(cfg)?,
        Scenario::Custom => run_custom(cfg)?,
    };
    let p = &cfg.parameters;
    Ok(RunRecord {
        artifact: ARTIFACT.into(),
        version: VERSION.into(),
        label: (cfg.scenario == Scenario::Custom).then(|| "EXPLORATORY".to_string()),
        config: cfg.clone(),
        grid: GridInfo {
            t_end: cfg.t_end(),
            n_steps: cfg.n_steps(),
            h: p.h.expect("filled"),
        },
        columns,
        rows,
        report,
        oracles,
    })
}

/// Step-deformation witness for the time-local scenario.
pub fn step_witness(cfg: &ScenarioConfig, t1: f64) -> Result<StepWitness, CliError> {
    if cfg.scenario != Scenario::Example1 {
        return Err(CliError::Config(
            "scenario: the step witness needs a time-local generator (example1)".into(),
        ));
    }
    let grid = cfg.grid();
    if grid.index_of(t1).is_none() {
        return Err(CliError::Config(format!("--t1: {t1} is not a grid point of [0, {}]", grid.t_end())));
    }
    Ok(step_deformation_witness(&example1_generator(cfg), t1, &grid, cfg.tol())?)
}

#[derive(Debug, Clone, Serialize)]
pub struct DeformedClassification {
    pub alpha: f64,
    #[serde(flatten)]
    pub summary: ClassificationSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutput {
    pub scenario: Scenario,
    pub engine: Engine,
    pub original: ClassificationSummary,
    pub deformed: Vec<DeformedClassification>,
}

/// Classifies the original dynamics and every deformed map of the sweep.
pub fn classify_scenario(cfg: &ScenarioConfig) -> Result<ClassifyOutput, CliError> {
    let sweep = sweep(cfg)?;
    let deformed = sweep
        .deformed
        .par_iter()
        .map(|(alpha, traj)| DeformedClassification {
            alpha: *alpha,
            summary: classify(cfg, traj),
        })
        .collect();
    Ok(ClassifyOutput {
        scenario: cfg.scenario,
        engine: cfg.engine,
        original: classify(cfg, &sweep.original),
        deformed,
    })
}
