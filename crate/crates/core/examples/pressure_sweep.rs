//! Pressure approximants P_n(s) with their anchor brackets, as CSV.
use solenoid_dim::presets;
use solenoid_dim::symbolic::DEFAULT_WORD_BUDGET;
use solenoid_dim::thermo::{write_pressure_csv, CylinderSums};

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::variable_rate(0.2, 0.05);
    let sums = CylinderSums::new(&spec, 12, DEFAULT_WORD_BUDGET)?;
    let rows: Vec<_> = (0..=20).map(|i| sums.pressure(0.05 * i as f64)).collect();
    write_pressure_csv(std::io::stdout().lock(), &rows)
}
