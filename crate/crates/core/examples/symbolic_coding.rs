//! Words, inverse branches and cylinder points over M = diag(2, 3).
use solenoid_dim::presets;
use solenoid_dim::symbolic::{branch_orbit, cylinder, enumerate_words, iterate_base};
use solenoid_dim::Word;

fn main() -> solenoid_dim::Result<()> {
    let spec = presets::linear(&[2, 3], 0.1, 1);
    let x = [0.3, 0.6];
    let w = Word::checked(vec![5, 0, 3], spec.degree())?;
    for (i, xi) in branch_orbit(spec.base(), &w, &x).iter().enumerate() {
        println!("x_{} = {xi:?}", i + 1);
    }
    let c = cylinder(&spec, &w, &x)?;
    println!("cylinder point {:?}, diameter {:.4}", c.anchor, c.diameter);
    println!("back to x: {:?}", iterate_base(&spec, &c.anchor, w.len()));
    println!("{} words of length 2", enumerate_words(&spec, 2, 1 << 10)?.len());
    Ok(())
}
