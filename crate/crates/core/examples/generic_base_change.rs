//! Polynomials with a formal parameter and their exceptional values.
use polystab::field::FieldSpec;
use polystab::param::GenericBaseChange;
use polystab::parse::parse;

fn main() -> polystab::error::Result<()> {
    let q = FieldSpec::rationals();
    // x1 -> x1 - a*x2 in the ring k[x1, x2, a].
    let images = vec![parse("x1 - x3*x2", 3, q)?, parse("x2", 3, q)?];
    let g = GenericBaseChange::new(2, vec!["a".into()], images)?;
    println!("unipotent: {}", g.is_unipotent());
    let f = parse("x1^2 + x1*x2", 2, q)?;
    for (m, c) in g.apply(&f)?.coefficients() {
        println!("{:?}: {c} factors {:?}", m.exponents(), c.factors());
    }
    Ok(())
}
