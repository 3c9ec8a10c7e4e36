//! The qubit channel for a given kernel: action on states, Choi spectrum,
//! powers and the frozen-coherence input.
//!
//! cargo run --example channel_basics

use std::f64::consts::PI;

use num_complex::Complex64;
use udw_coherence::quantum::choi_eigenvalues;
use udw_coherence::{
    apply_channel, cohering_power, decohering_power, l1_coherence, remaining_coherence,
    ChannelKernel, MaxCoherentQubit, QubitState,
};

fn main() -> udw_coherence::Result<()> {
    let phase = 0.4;
    let k = ChannelKernel::new(Complex64::from_polar(0.8, 0.6), phase)?;
    println!("z = {:.6}, phase = {phase}", k.z());
    println!("cohering power   |Im z|   = {:.6}", cohering_power(&k));
    println!("decohering power 1-|Re z| = {:.6}", decohering_power(&k));
    println!("Choi eigenvalues {:?}", choi_eigenvalues(&k));

    let out = apply_channel(&k, &QubitState::ground());
    println!(
        "\nground state -> rho_ge = {:.6}, C = {:.6}",
        out.rho_ge(),
        l1_coherence(&out)
    );

    println!("\n{:>8} {:>12}", "theta", "remaining");
    for i in 0..=8 {
        let theta = phase + PI * i as f64 / 8.0;
        println!("{theta:>8.4} {:>12.8}", remaining_coherence(&k, theta));
    }

    let frozen = apply_channel(&k, &MaxCoherentQubit::new(phase).state());
    println!(
        "\ninput at theta = phase keeps C = {:.15}",
        l1_coherence(&frozen)
    );
    Ok(())
}
