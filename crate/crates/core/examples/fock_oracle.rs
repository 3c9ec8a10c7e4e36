//! Truncated Fock-space check of the channel: evolve qubit and mode with the
//! exact unitary, trace out the mode and compare with the analytic channel.
//!
//! cargo run --example fock_oracle

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use udw_coherence::oracle::{
    brute_force_powers, haar_qubit, ConvergedOracle, ModeState, DEFAULT_SEED,
};
use udw_coherence::{apply_channel, cohering_power, decohering_power, ChannelKernel};

fn main() -> udw_coherence::Result<()> {
    let oracle = ConvergedOracle::new(96);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);

    let states = [
        ModeState::CoherentVec {
            alpha: Complex64::new(0.7, 0.4),
        },
        ModeState::CoherentVec {
            alpha: Complex64::new(-1.5, 1.0),
        },
        ModeState::ThermalDiag { nbar: 0.8 },
    ];
    for state in &states {
        for s in [0.3, 0.9] {
            let rho = haar_qubit(&mut rng);
            let phase = 0.25;
            let z = oracle.displacement_expectation(state, s)?;
            let k = ChannelKernel::new(z, phase)?;
            let joint = oracle.joint_evolution(&rho, state, s / 2.0, phase)?;
            println!(
                "{state:?} s={s}: z = {z:.6}, |joint - channel| = {:.2e}",
                joint.max_abs_diff(&apply_channel(&k, &rho))
            );
            let p = brute_force_powers(&k, 4000, DEFAULT_SEED);
            println!(
                "    sampled powers C = {:.8} D = {:.8}; analytic C = {:.8} D = {:.8}",
                p.cohering,
                p.decohering,
                cohering_power(&k),
                decohering_power(&k)
            );
        }
    }
    Ok(())
}
