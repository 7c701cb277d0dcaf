//! Entirely-even forms are decided by their Newton polytope.
use polystab::classify::{classify_entirely_even, ClassifyOptions};
use polystab::field::FieldSpec;
use polystab::parse::parse;

fn main() -> polystab::error::Result<()> {
    let q = FieldSpec::rationals();
    for src in ["x1^2*x2^2 + x3^4", "x1^2*x2^2*x3^2", "x1^4 + x2^4 + x3^4", "x1^4*x2^2"] {
        let v = classify_entirely_even(&parse(src, 3, q)?, &ClassifyOptions::default())?;
        println!("{src}: {} ({})", v.class, v.certificate.kind());
    }
    Ok(())
}
