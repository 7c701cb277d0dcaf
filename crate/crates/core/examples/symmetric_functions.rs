//! Symmetric-function bases, D, and skew tableau counts.
use polystab::field::FieldSpec;
use polystab::symfun::{d_op, d_schur_expand, schur, schur_expand, skew_syt_count, Partition, SkewShape};

fn main() -> polystab::error::Result<()> {
    let q = FieldSpec::rationals();
    let shape: Partition = "2,1".parse()?;
    let s21 = schur(&shape, 3, q);
    println!("s(2,1) in 3 variables: {s21}");
    println!("D s(2,1): {}", d_op(&s21));
    let expansion: Vec<String> = schur_expand(&d_op(&s21))?
        .into_iter()
        .map(|(p, c)| format!("{c}*s{p}"))
        .collect();
    println!("D s(2,1) in the Schur basis: {}", expansion.join(" + "));
    let d4: Vec<String> = d_schur_expand(&shape, 4)?.into_iter().map(|(p, c)| format!("{c}*s{p}")).collect();
    println!("D s(2,1) in 4 variables: {}", d4.join(" + "));
    for (outer, inner) in [("2,1", ""), ("3,2,1", "1"), ("4,3,2", "2,1")] {
        let s = SkewShape::new(outer.parse()?, inner.parse()?)?;
        println!("SYT({outer} / {inner}) = {}", skew_syt_count(&s));
    }
    Ok(())
}
