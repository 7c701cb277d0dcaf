//! Exact rational simplex: maximize x + y subject to x + 2y <= 4, 3x + y <= 6.
use polystab::lp::{rat, Constraint, LinearProgram, Relation};

fn main() -> polystab::error::Result<()> {
    let mut lp = LinearProgram::new(2);
    lp.add_constraint(Constraint::new(vec![rat(1), rat(2)], Relation::Le, rat(4)))?;
    lp.add_constraint(Constraint::new(vec![rat(3), rat(1)], Relation::Le, rat(6)))?;
    lp.maximize(vec![rat(1), rat(1)])?;
    let r = lp.solve()?;
    let w: Vec<String> = r.witness.iter().map(|v| v.to_string()).collect();
    println!("status {:?}, optimum {:?} at ({})", r.status, r.objective.map(|v| v.to_string()), w.join(", "));
    Ok(())
}
