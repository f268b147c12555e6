//! Writes a slice cloud as CSV next to its metadata sidecar.
//!
//! Usage: `cargo run --example export_cloud -- <out-dir>`
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use solenoid_dim::manifold::slice_cloud;
use solenoid_dim::presets;

fn main() -> solenoid_dim::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let spec = presets::rotating(0.1, 0.03, 0.2);
    let cloud = slice_cloud(&spec, &[0.25], 10, 1 << 12)?;
    cloud.write_csv(BufWriter::new(File::create(dir.join("slice.csv"))?), spec.p())?;
    cloud.write_metadata(File::create(dir.join("slice.meta"))?)?;
    println!("{} points, resolution {:.2e}", cloud.len(), cloud.resolution);
    Ok(())
}
