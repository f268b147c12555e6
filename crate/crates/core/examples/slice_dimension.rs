//! Box-counting estimate of a stable slice of a Smale–Williams type solenoid.
use solenoid_dim::boxdim::{slice_dimension, ScaleLadder};
use solenoid_dim::presets;
use solenoid_dim::symbolic::DEFAULT_WORD_BUDGET;

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::smale_williams(0.2, 0.1);
    let report = slice_dimension(&spec, &[0.0], 12, &ScaleLadder::default(), DEFAULT_WORD_BUDGET)?;
    report.write_csv(std::io::stdout().lock())?;
    println!("# predicted = {}", 2f64.ln() / -0.2f64.ln());
    Ok(())
}
