//! Finite-depth exponents d(x, m) approaching the Bowen root.
use solenoid_dim::presets;
use solenoid_dim::thermo::{bowen_root, finite_m_exponent};

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::variable_rate(0.2, 0.05);
    let d0 = bowen_root(&spec, 1e-12, 16)?.d0;
    println!("d0 (depth 16) = {d0:.10}");
    for x in [0.0, 0.5] {
        for m in [2, 4, 6, 8, 10, 12] {
            let t = finite_m_exponent(&spec, &[x], m, 1e-12)?;
            println!("x = {x}  m = {m:>2}  d(x,m) = {t:.10}  gap {:+.2e}", t - d0);
        }
    }
    Ok(())
}
