//! A solenoid whose attractor is a graph: slices collapse to points, the
//! attractor has dimension 1 and transversality fails everywhere.
use solenoid_dim::boxdim::{attractor_dimension, slice_dimension, ScaleLadder};
use solenoid_dim::presets;
use solenoid_dim::symbolic::DEFAULT_WORD_BUDGET;
use solenoid_dim::transversality::{overlap_scan, ScanOptions};

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::graph_attractor(0.2, 0.3);
    let ladder = ScaleLadder::default();
    let slice = slice_dimension(&spec, &[0.3], 12, &ladder, DEFAULT_WORD_BUDGET)?;
    println!("slice: {} distinct point(s), slope {}", slice.distinct_points, slice.fit.slope);
    let attr = attractor_dimension(&spec, 10, 1024, &ladder, DEFAULT_WORD_BUDGET)?;
    println!("attractor slope {:.4}", attr.fit.slope);
    for depth in [4, 8] {
        let opts = ScanOptions {
            depth,
            grid_cells: 64,
            ..ScanOptions::default()
        };
        let scan = overlap_scan(&spec, &opts)?;
        println!("depth {depth}: {} ({} near-overlaps)", scan.verdict, scan.candidates.len());
    }
    Ok(())
}
