//! Closed-orbit lemma checks for the cubic and tensor families.
use polystab::family::{verify_cubic_lemmas, verify_tensor_lemmas, FamilyReport};
use polystab::field::FieldSpec;

fn show(r: &FamilyReport) {
    println!("{} n={} char={}", r.family, r.n, r.characteristic);
    for c in &r.checks {
        println!("  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.lemma, c.detail);
    }
    for e in r.exceptional.iter().take(3) {
        println!("  exceptional: component {} {} coefficient {} factors {:?}", e.component, e.monomial, e.coefficient, e.factors);
    }
}

fn main() -> polystab::error::Result<()> {
    show(&verify_cubic_lemmas(2, FieldSpec::new(7)?)?);
    show(&verify_tensor_lemmas(1, FieldSpec::rationals())?);
    Ok(())
}
