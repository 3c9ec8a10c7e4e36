//! Decohering power of a thermal field against detector radius and
//! temperature.
//!
//! cargo run --example thermal_decoherence

use udw_coherence::field::{DetectorConfig, FieldModel};
use udw_coherence::{cohering_power, decohering_power};

fn main() -> udw_coherence::Result<()> {
    let model = FieldModel::default();
    let lambda = 2.0;
    let masses = [0.1, 0.5, 1.0, 2.0];

    println!("decohering power vs R*Omega at beta*Omega = 1");
    print!("{:>8}", "R*Omega");
    for m in masses {
        print!(" {:>10}", format!("m={m}"));
    }
    println!();
    for i in 0..12 {
        let r = 0.25 * 1.3f64.powi(i);
        let det = DetectorConfig::new(1.0, r, 0.0, lambda)?;
        print!("{r:>8.3}");
        for m in masses {
            print!(
                " {:>10.6}",
                decohering_power(&model.kernel_thermal(&det, m, 1.0)?)
            );
        }
        println!();
    }

    println!("\ndecohering power vs temperature at R*Omega = 1");
    let det = DetectorConfig::new(1.0, 1.0, 0.0, lambda)?;
    for i in 0..12 {
        let t = 0.1 * 1.5f64.powi(i);
        let k = model.kernel_thermal(&det, 0.5, 1.0 / t)?;
        println!(
            "T/Omega = {t:>8.4}  D = {:.6}  C = {}",
            decohering_power(&k),
            cohering_power(&k)
        );
    }
    Ok(())
}
