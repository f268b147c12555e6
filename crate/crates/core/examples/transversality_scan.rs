//! Near-overlap scan over a two-dimensional base with a planar fiber.
use solenoid_dim::presets;
use solenoid_dim::transversality::{overlap_scan, ScanOptions};

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::planar_mixing(0.05, 0.3);
    for depth in [2, 3] {
        let opts = ScanOptions {
            depth,
            grid_cells: 32,
            ..ScanOptions::default()
        };
        let r = overlap_scan(&spec, &opts)?;
        println!(
            "depth {depth}: δ₁ = {:.2e}, {} near-overlaps, min margin {:?}, verdict {}",
            r.delta1,
            r.candidates.len(),
            r.min_margin,
            r.verdict
        );
    }
    Ok(())
}
