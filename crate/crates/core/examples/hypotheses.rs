//! Rate bounds and hypothesis checks for a few constant-rate solenoids.
use solenoid_dim::model::check_hypotheses;
use solenoid_dim::presets;

fn main() -> solenoid_dim::Result<()> {
    for lambda in [0.02, 0.05, 0.1, 0.2] {
        let spec = presets::interval_constant(lambda);
        let b = spec.rate_bounds();
        let h = check_hypotheses(b, spec.l(), spec.p())?;
        println!(
            "λ = {lambda:<5} T*(i) {:<5} T*(ii) {:<5} (rhs {:.6}) E* {:<5} μ-interval {:?}",
            h.tstar_first_ok, h.tstar_second_ok, h.tstar_second_rhs, h.estar_ok, h.mu_interval
        );
    }
    Ok(())
}
