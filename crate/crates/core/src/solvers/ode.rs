use crate::error::Result;
use crate::generators::{deform_generator, Side, TimeDeformation, TimeLocalGenerator};
use crate::superop::{c, Superoperator};

use super::grid::{MapTrajectory, TimeGrid};

/// Solves `dΦ/dt = α(t) L(t) Φ`, `Φ(0) = Id`, with classical fixed-step RK4.
///
/// The stage at the end of each step uses the left limit of `α`, so a step
/// deformation switching on at a grid point leaves earlier samples untouched.
pub fn propagate_local(
    gen: &TimeLocalGenerator,
    def: &TimeDeformation,
    grid: &TimeGrid,
) -> Result<MapTrajectory> {
    let deformed = deform_generator(gen, def);
    let d = gen.dim();
    let h = grid.step();
    let mut phi = Superoperator::identity(d).into_matrix();
    let mut samples = Vec::with_capacity(grid.len());
    samples.push(Superoperator::identity(d));
    for n in 0..grid.n_steps() {
        let t = grid.time(n);
        let l1 = deformed.superop_sided(t, Side::Right)?.into_matrix();
        let l2 = deformed.superop_sided(t + 0.5 * h, Side::Right)?.into_matrix();
        let l4 = deformed.superop_sided(grid.time(n + 1), Side::Left)?.into_matrix();
        let k1 = &l1 * &phi;
        let k2 = &l2 * (&phi + &k1 * c(0.5 * h));
        let k3 = &l2 * (&phi + &k2 * c(0.5 * h));
        let k4 = &l4 * (&phi + &k3 * c(h));
        phi += (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0);
        samples.push(Superoperator::new(d, phi.clone())?);
    }
    MapTrajectory::general(*grid, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{eternal_non_markovian_rates, pauli_dephasing_eigenvalues};
    use approx::assert_abs_diff_eq;

    #[test]
    fn eternal_dynamics_matches_closed_form() {
        let gen = TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates());
        let grid = TimeGrid::new(1.0, 1000).unwrap();
        let traj = propagate_local(&gen, &TimeDeformation::Uniform(1.0), &grid).unwrap();
        let lam = traj.pauli_samples().unwrap();
        let exact = pauli_dephasing_eigenvalues(&eternal_non_markovian_rates(), &grid).unwrap();
        assert_abs_diff_eq!(lam[1000].0[0], 0.5 * (1.0 + (-2.0_f64).exp()), epsilon = 1e-12);
        assert_abs_diff_eq!(lam[1000].0[0], 0.56767, epsilon = 1e-5);
        for (a, b) in lam.iter().zip(&exact) {
            for k in 0..3 {
                assert_abs_diff_eq!(a.0[k], b.0[k], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn samples_are_trace_preserving() {
        let gen = TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates());
        let grid = TimeGrid::new(3.0, 300).unwrap();
        let traj = propagate_local(&gen, &TimeDeformation::Uniform(0.7), &grid).unwrap();
        for i in 0..traj.len() {
            assert!(traj.superop_at(i).is_trace_preserving(1e-8));
        }
    }

    #[test]
    fn step_deformation_freezes_initial_segment() {
        let gen = TimeLocalGenerator::pauli_dephasing(eternal_non_markovian_rates());
        let grid = TimeGrid::new(2.0, 200).unwrap();
        let traj = propagate_local(&gen, &TimeDeformation::Step(1.0), &grid).unwrap();
        let id = Superoperator::identity(2);
        for i in 0..=100 {
            assert_eq!(traj.superop_at(i), id);
        }
        assert!(traj.superop_at(101).max_abs_diff(&id) > 1e-3);
    }

    #[test]
    fn uniform_deformation_of_time_dependent_rates_is_a_power() {
        // Commuting generator: deformed eigenvalues are λ_k(t)^α.
        let rates = eternal_non_markovian_rates();
        let gen = TimeLocalGenerator::pauli_dephasing(rates.clone());
        let grid = TimeGrid::new(2.0, 400).unwrap();
        let alpha = 0.6;
        let traj = propagate_local(&gen, &TimeDeformation::Uniform(alpha), &grid).unwrap();
        let exact = pauli_dephasing_eigenvalues(&rates, &grid).unwrap();
        for (a, b) in traj.pauli_samples().unwrap().iter().zip(&exact) {
            for k in 0..3 {
                assert_abs_diff_eq!(a.0[k], b.0[k].powf(alpha), epsilon = 1e-10);
            }
        }
    }
}
