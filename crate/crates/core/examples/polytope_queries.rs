//! Membership, relative interior and essential support of a point set.
use num_rational::BigRational;
use polystab::polytope::{origin, PointSet};

fn main() -> polystab::error::Result<()> {
    let s = PointSet::new(2, vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, 3]])?;
    let half = BigRational::new(1.into(), 2.into());
    println!("0 in conv: {}", s.contains(&origin(2))?);
    println!("0 in relint: {}", s.in_relative_interior(&origin(2))?);
    println!("(1/2, 0) in conv: {}", s.contains(&[half, BigRational::from_integer(0.into())])?);
    println!("affine dimension: {}", s.affine_dimension());
    println!("essential support: {:?}", s.essential_support()?);
    Ok(())
}
