//! Loads a spec file, prints its canonical form and hash.
//!
//! Usage: `cargo run --example spec_file -- crates/core/fixtures/sw_02.cfg`
use solenoid_dim::config::{load_spec, to_config_string};

fn main() -> solenoid_dim::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sw_02.cfg").to_string()
    });
    let spec = load_spec(path.as_ref())?;
    print!("{}", to_config_string(&spec));
    println!("# hash {}", spec.hash());
    Ok(())
}
