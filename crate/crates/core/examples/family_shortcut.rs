//! e, h, p and Schur families: shortcut criterion against the general algorithm.
use polystab::classify::{classify_family, ClassifyOptions};
use polystab::field::FieldSpec;
use polystab::symfun::{partitions_of, BasisKind};

fn main() -> polystab::error::Result<()> {
    let q = FieldSpec::rationals();
    let opts = ClassifyOptions::default();
    for kind in [BasisKind::Elementary, BasisKind::Homogeneous, BasisKind::PowerSum, BasisKind::Schur] {
        for shape in partitions_of(4) {
            let v = classify_family(kind, &shape, 5, q, &opts)?;
            println!("{}{shape} n=5: {} via {} ({})", kind.symbol(), v.verdict.class, v.path, v.criterion);
        }
    }
    Ok(())
}
