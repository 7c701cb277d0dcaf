//! Parse expressions and symmetric-function macros, then print them.
use polystab::field::FieldSpec;
use polystab::parse::parse;
use polystab::poly::TermOrder;

fn main() -> polystab::error::Result<()> {
    let q = FieldSpec::rationals();
    let f5 = FieldSpec::new(5)?;
    let names = ["x", "y", "z"];
    for (src, field) in [("h3", q), ("e{2,1} - 3*p3", q), ("(x1 - x2)^5", f5), ("1/2*x1^2 + x2*x3", q)] {
        let f = parse(src, 3, field)?;
        println!("{src:>16} over {field}: {}", f.to_string_with(&names, TermOrder::Lex));
    }
    Ok(())
}
