//! Cohering power against field mass for several couplings, and recovering
//! the mass from a measured value.
//!
//! cargo run --example mass_inference

use udw_coherence::field::{strictly_monotone, DetectorConfig, FieldModel};
use udw_coherence::Error;

fn main() -> udw_coherence::Result<()> {
    let model = FieldModel::default();
    let energy = 1.0;
    let couplings = [0.2, 1.0, 2.0, 5.0];
    let masses: Vec<f64> = (0..25).map(|i| 0.1 + 9.9 * i as f64 / 24.0).collect();

    print!("{:>8}", "m/Omega");
    for l in couplings {
        print!(" {:>12}", format!("lO={l}"));
    }
    println!();
    let mut curves = vec![Vec::new(); couplings.len()];
    for &m in &masses {
        print!("{m:>8.3}");
        for (j, &l) in couplings.iter().enumerate() {
            let det = DetectorConfig::new(1.0, 1.0, 0.0, l)?;
            let c = model.coherent_cohering_power(&det, m, energy, true)?;
            curves[j].push(c);
            print!(" {c:>12.6}");
        }
        println!();
    }
    for (l, c) in couplings.iter().zip(&curves) {
        println!(
            "lambda*Omega = {l}: monotone on grid = {}",
            strictly_monotone(c)
        );
    }

    println!();
    for l in couplings {
        let det = DetectorConfig::new(1.0, 1.0, 0.0, l)?;
        let m_true = 1.7;
        let measured = model.coherent_cohering_power(&det, m_true, energy, true)?;
        match model.infer_mass(measured, &det, energy, (0.1, 10.0)) {
            Ok(found) => println!(
                "lambda*Omega = {l}: C = {measured:.6} -> m = {:.10} (true {m_true})",
                found.mass
            ),
            Err(e @ Error::NotMonotone { .. }) => println!("lambda*Omega = {l}: refused, {e}"),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
