//! Hilbert-Mumford trichotomy for torus weights, and Newton polytopes.
use polystab::field::FieldSpec;
use polystab::parse::parse;
use polystab::torus::{ess_indices, newton_classify, torus_classify, WeightSystem, WeightedVector};

fn main() -> polystab::error::Result<()> {
    let ws = WeightSystem::new(1, vec![vec![1], vec![-1], vec![2]])?;
    for support in [vec![0, 1, 2], vec![0, 2], vec![2, 1]] {
        let v = WeightedVector::new(ws.clone(), support.iter().copied().collect())?;
        println!("support {support:?}: {} ess {:?}", torus_classify(&v)?, ess_indices(&v)?);
    }
    let q = FieldSpec::rationals();
    for src in ["x1*x2*x3", "x1^3 + x2^3 + x3^3", "x1^2*x2 + x1*x2*x3", "x1^3"] {
        println!("{src}: {}", newton_classify(&parse(src, 3, q)?)?);
    }
    Ok(())
}
