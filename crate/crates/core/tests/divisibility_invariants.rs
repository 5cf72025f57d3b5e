use nalgebra::DMatrix;
use num_complex::Complex64;

use tdme_core::divisibility::{
    classify_dynamics, cp_divisibility_report, first_positivity_violation, p_divisibility_pauli,
    step_deformation_witness, Classification, ClassifyOptions,
};
use tdme_core::generators::{
    eternal_non_markovian_rates, pauli_dephasing_eigenvalues, MatrixFn, RateFunction, TimeDeformation,
    TimeLocalGenerator,
};
use tdme_core::kernels::{
    deform_kernel, dephasing_sin_kernel, eternal_map_laplace, nalezyty_kernel, pauli_kernel_from_map_laplace,
    NalezytyParams, PauliKernel,
};
use tdme_core::solvers::{deformed_map_series, propagate_local, propagate_volterra, MapTrajectory, TimeGrid};
use tdme_core::superop::pauli_matrices;

fn builtin_generators() -> Vec<TimeLocalGenerator> {
    let lowering = DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
    );
    vec![
        TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates()),
        TimeLocalGenerator::pauli_dephasing([1.0, 1.0, 1.0].map(RateFunction::Constant)),
        TimeLocalGenerator::new(2)
            .with_hamiltonian(MatrixFn::Constant(&pauli_matrices()[0] * Complex64::new(0.5, 0.0)))
            .with_channel(MatrixFn::Constant(lowering), RateFunction::Sin { amplitude: 1.0, frequency: 1.5 }),
    ]
}

#[test]
fn step_witness_agrees_with_intermediate_maps() {
    let grid = TimeGrid::new(4.0, 4000).unwrap();
    for gen in builtin_generators() {
        for t1 in [0.5, 1.0, 2.0] {
            let w = step_deformation_witness(&gen, t1, &grid, 1e-9).unwrap();
            // solver tolerance is ~1e−12 at this step; allow ten times the acceptance bound
            assert!(w.consistency_residual < 1e-9, "{}", w.consistency_residual);
            assert_eq!(w.pre_step_residual, 0.0);
        }
    }
}

#[test]
fn refining_the_stride_never_looks_more_markovian() {
    let grid = TimeGrid::new(6.0, 1200).unwrap();
    for gen in builtin_generators() {
        let traj = propagate_local(&gen, &TimeDeformation::Uniform(1.0), &grid).unwrap();
        let mut previous: Option<f64> = None;
        let mut previous_class: Option<Classification> = None;
        for stride in [40, 20, 10, 5] {
            let r = cp_divisibility_report(&traj, stride, 1e-9).unwrap();
            if let Some(p) = previous {
                assert!(r.min_choi_eigenvalue <= p);
            }
            previous = Some(r.min_choi_eigenvalue);
            let class = classify_dynamics(&traj, &ClassifyOptions { stride, ..Default::default() }).classification;
            if previous_class == Some(Classification::WeaklyNonMarkovian) {
                assert_ne!(class, Classification::CpDivisible);
            }
            previous_class = Some(class);
        }
    }
}

fn pauli_scenarios() -> Vec<(PauliKernel, TimeGrid)> {
    let grid = TimeGrid::new(10.0, 2000).unwrap();
    vec![
        (dephasing_sin_kernel(1.0).unwrap(), grid),
        (dephasing_sin_kernel(2.0).unwrap(), grid),
        (pauli_kernel_from_map_laplace(&eternal_map_laplace()).unwrap(), grid),
        (nalezyty_kernel(&NalezytyParams::new([1.0, 1.8, 1.8], 0.15)).unwrap(), grid),
        (nalezyty_kernel(&NalezytyParams::new([1.0, 1.8, 1.8], 0.9)).unwrap(), grid),
        (nalezyty_kernel(&NalezytyParams::new([1.0, 1.0, 1.0], 1.2)).unwrap(), grid),
    ]
}

#[test]
fn cp_divisibility_implies_p_divisibility() {
    for (kernel, grid) in pauli_scenarios() {
        let traj = propagate_volterra(&kernel, &grid).unwrap();
        let cp = cp_divisibility_report(&traj, 10, 1e-9).unwrap();
        let p = p_divisibility_pauli(&traj.pauli_samples().unwrap(), &grid, 1e-6).unwrap();
        if cp.cp_divisible {
            assert!(p.p_divisible);
        }
        let report = classify_dynamics(&traj, &ClassifyOptions::default());
        if report.classification == Classification::EssentiallyNonMarkovian {
            assert!(!report.p_violations.is_empty());
        }
    }
}

#[test]
fn deformed_non_positivity_implies_original_p_indivisibility() {
    let mut witnessed = 0;
    for (kernel, grid) in pauli_scenarios() {
        let original = propagate_volterra(&kernel, &grid).unwrap();
        let lambda = original.pauli_samples().unwrap();
        for alpha in [0.3, 0.5, 0.7, 0.9] {
            let deformed = propagate_volterra(&deform_kernel(&kernel, alpha).unwrap(), &grid).unwrap();
            let broken = first_positivity_violation(&deformed.pauli_samples().unwrap(), &grid, 1e-9);
            let valid = deformed_map_series(&original, alpha, 0, 1.0).unwrap().validity.satisfied;
            if broken.is_some() && valid {
                witnessed += 1;
                assert!(!p_divisibility_pauli(&lambda, &grid, 1e-6).unwrap().p_divisible);
            }
        }
    }
    assert!(witnessed > 0, "no scenario exercised the witness");
}

#[test]
fn nonnegative_p_divisible_eigenvalues_are_nonincreasing() {
    let grid = TimeGrid::new(5.0, 1000).unwrap();
    let lambda = pauli_dephasing_eigenvalues(&eternal_non_markovian_rates(), &grid).unwrap();
    assert!(p_divisibility_pauli(&lambda, &grid, 1e-6).unwrap().p_divisible);
    assert!(lambda.iter().all(|l| l.0.iter().all(|v| *v >= 0.0)));
    for w in lambda.windows(2) {
        for k in 0..3 {
            assert!(w[1].0[k] <= w[0].0[k]);
        }
    }
}

#[test]
fn general_trajectory_without_pauli_structure_is_not_p_assessed() {
    let gen = builtin_generators().pop().unwrap();
    let grid = TimeGrid::new(6.0, 600).unwrap();
    let traj = propagate_local(&gen, &TimeDeformation::Uniform(1.0), &grid).unwrap();
    let report = classify_dynamics(&traj, &ClassifyOptions::default());
    assert!(!report.p_divisibility_assessed);
    // sin rate turns negative on (2π/3, 4π/3)
    assert_eq!(report.classification, Classification::WeaklyNonMarkovian);
    let pauli = MapTrajectory::pauli(grid, vec![tdme_core::PauliEigenvalues::identity(); grid.len()]).unwrap();
    assert!(classify_dynamics(&pauli, &ClassifyOptions::default()).p_divisibility_assessed);
}
