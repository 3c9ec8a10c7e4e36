//! Cohering power of a coherent field over (E/m, R/lambda_C) for three
//! couplings, written as CSV files.
//!
//! cargo run --example coherent_surface -- [out_dir] [steps]

use std::path::PathBuf;

use udw_coherence::field::FieldModel;
use udw_coherence::groups::{ParameterSet, E_OVER_M, LAMBDA_OVER_COMPTON, R_OVER_COMPTON};
use udw_coherence::sweep::{run_sweep, Axis, Format, Quantity, SweepSpec};

fn main() -> udw_coherence::Result<()> {
    let mut args = std::env::args().skip(1);
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let steps: usize = args.next().map(|s| s.parse().expect("steps")).unwrap_or(50);
    let model = FieldModel::default();

    for lambda in [0.2, 1.0, 5.0] {
        let spec = SweepSpec {
            quantity: Quantity::CoheringCoherent,
            axes: vec![
                Axis::linear(E_OVER_M, 0.1, 10.0, steps),
                Axis::linear(R_OVER_COMPTON, 0.01, 5.0, steps),
            ],
            fixed: ParameterSet::new().with(LAMBDA_OVER_COMPTON, lambda),
            output: None,
            format: Format::Csv,
        };
        let table = run_sweep(&spec, &model, 0)?;
        let values = table.column(0);
        let (imax, max) =
            values.iter().enumerate().fold(
                (0, 0.0),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
        let at = &table.rows[imax].coords;
        let path = out_dir.join(format!("cohering_surface_lambda{lambda}.csv"));
        std::fs::write(&path, table.to_csv())?;
        println!(
            "lambda/lambda_C = {lambda}: max {max:.4} at E/m = {:.3}, R/lambda_C = {:.3} -> {}",
            at[0],
            at[1],
            path.display()
        );
    }
    Ok(())
}
