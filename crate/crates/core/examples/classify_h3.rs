//! h3(x, y, z) across characteristics, with the certificate kind per row.
use polystab::cli::run_appendix;
use polystab::groebner::GroebnerLimits;

fn main() -> polystab::error::Result<()> {
    for row in run_appendix(GroebnerLimits::default())? {
        println!(
            "char {:>2}: {:<26} {:<13} groebner {}",
            row.char,
            row.class.as_str(),
            row.document.certificate.kind(),
            row.document.decisions.groebner_invoked
        );
    }
    Ok(())
}
