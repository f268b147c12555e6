//! Singular values and the surjectivity margin of small wide matrices.
use solenoid_dim::linalg::{singular_values, smallest_singular_value, Matrix};

fn main() -> solenoid_dim::Result<()> {
    let shear = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]])?;
    println!("shear: {:?}", singular_values(&shear)?.values());
    let wide = Matrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 1.0, -1.0]])?;
    println!("wide margin: {}", smallest_singular_value(&wide)?);
    let rank_one = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]])?;
    println!("rank one margin: {:.2e}", smallest_singular_value(&rank_one)?);
    Ok(())
}
