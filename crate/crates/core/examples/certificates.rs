//! Emit a certificate document, serialize it, and re-verify it from JSON.
use polystab::cli::{check_document, classify_input, CertificateDocument};
use polystab::field::FieldSpec;
use polystab::groebner::GroebnerLimits;

fn main() -> polystab::error::Result<()> {
    let doc = classify_input("h3", 3, FieldSpec::new(5)?, GroebnerLimits::default())?;
    let text = serde_json::to_string_pretty(&doc).expect("serializes");
    println!("{text}");
    let back: CertificateDocument = serde_json::from_str(&text).expect("round trip");
    check_document(&back)?;
    println!("re-verified: {} ({})", back.class, back.certificate.kind());
    Ok(())
}
