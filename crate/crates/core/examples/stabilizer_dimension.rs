//! Stabilizer dimensions by the Lie algebra and by Groebner bases.
use polystab::field::FieldSpec;
use polystab::groebner::{groebner_stabilizer_dim, lie_stabilizer_dim, stabilizer_dim, GroebnerLimits};
use polystab::parse::parse;

fn main() -> polystab::error::Result<()> {
    let limits = GroebnerLimits::default();
    let q = FieldSpec::rationals();
    for src in ["x1*x2*x3", "x1^3 + x2^3 + x3^3"] {
        let f = parse(src, 3, q)?;
        println!(
            "{src}: lie {} groebner {}",
            lie_stabilizer_dim(&f)?,
            groebner_stabilizer_dim(&f, limits)?
        );
    }
    let f = parse("x1*x2*x3", 3, FieldSpec::new(3)?)?;
    println!("x1*x2*x3 over F_3: {:?}", stabilizer_dim(&f, limits)?);
    Ok(())
}
