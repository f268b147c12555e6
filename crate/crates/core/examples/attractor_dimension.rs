//! Box-counting estimate of the whole attractor over a 2^-10 base grid;
//! the prediction is 1 + d0.
use solenoid_dim::boxdim::{attractor_dimension, ScaleLadder};
use solenoid_dim::presets;
use solenoid_dim::symbolic::DEFAULT_WORD_BUDGET;

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::smale_williams(0.2, 0.1);
    let report = attractor_dimension(&spec, 10, 1024, &ScaleLadder::default(), DEFAULT_WORD_BUDGET)?;
    report.write_csv(std::io::stdout().lock())?;
    println!("# predicted = {}", 1.0 + 2f64.ln() / -0.2f64.ln());
    Ok(())
}
