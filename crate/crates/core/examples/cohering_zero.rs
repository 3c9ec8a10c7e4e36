//! Undamped cohering power |sin(4 lambda Re<a>)| against detector radius and
//! the radii where it vanishes exactly.
//!
//! cargo run --example cohering_zero

use udw_coherence::field::{compton_wavelength, DetectorConfig, FieldModel};

fn main() -> udw_coherence::Result<()> {
    let model = FieldModel::default();
    let mass = 1.0;
    let lc = compton_wavelength(mass);
    let det = DetectorConfig::new(1.0, lc, 0.0, lc)?;

    println!("{:>12} {:>12} {:>12}", "R/lambda_C", "undamped", "damped");
    let radii: Vec<f64> = (0..=40).map(|i| 0.01 * 1.15f64.powi(i)).collect();
    for r in &radii {
        let d = DetectorConfig {
            radius: r * lc,
            ..det
        };
        println!(
            "{r:>12.5} {:>12.6} {:>12.3e}",
            model.coherent_cohering_power(&d, mass, mass, false)?,
            model.coherent_cohering_power(&d, mass, mass, true)?
        );
    }

    let zero = model.find_cohering_zero(&det, mass, mass, (0.1 * lc, 2.0 * lc))?;
    println!(
        "\nzero at R/lambda_C = {:.12}: 4 lambda Re<a> = {} pi (residue {:.1e}), cohering power {:.1e}",
        zero.radius / lc,
        zero.order,
        zero.phase_residue,
        zero.cohering_power
    );
    Ok(())
}
