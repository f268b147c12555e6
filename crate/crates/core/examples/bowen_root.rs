//! Predicted slice dimension d₀ from Bowen's equation, compared with the
//! closed form log N / -log λ when the rate is constant.
use solenoid_dim::presets;
use solenoid_dim::thermo::bowen_root;

fn main() -> solenoid_dim::Result<()> {
    for lambda in [0.05, 0.1, 0.2, 0.25, 0.4] {
        let r = bowen_root(&presets::interval_constant(lambda), 1e-12, 14)?;
        let exact = 2f64.ln() / -lambda.ln();
        println!("λ = {lambda:<4}  d0 = {:.12}  closed form {exact:.12}", r.d0);
    }
    let spec = presets::variable_rate(0.2, 0.05);
    for n in [8, 12, 16] {
        let r = bowen_root(&spec, 1e-12, n)?;
        println!("λ(x) = 0.2 + 0.05 cos 2πx, depth {n:>2}: d0 = {:.12}", r.d0);
    }
    Ok(())
}
