//! The README walk-through: verify the bipartite relation on a member of
//! the saturating family and run the entanglement witness on it.

use wehrlab::{optimal_sequence_state, verify_bipartite, witness, StateDescriptor};

fn main() -> wehrlab::Result<()> {
    // A two-mode state from the saturating family: S(A|B) ≈ -2 at a = 1000.
    let state = optimal_sequence_state(-2.0, 1000.0, 1)?;

    let record = verify_bipartite(
        &state,
        &["A"],
        &["B"],
        StateDescriptor::new("optimal-sequence", 1).with_s(-2.0).with_a(1000.0),
    )?;
    assert!(record.pass && record.gap >= 0.0);
    println!(
        "S(A|B) = {:.6}, S(Z|B) = {:.6}, bound = {:.6}, gap = {:+.3e}",
        record.s_ab_cond, record.s_z_given_b, record.bound, record.gap
    );

    // Negative conditional entropy drives S(Z|B) below ln 2: entangled.
    let report = witness(&state, &["A"], &["B"])?;
    println!("{:?}: S(Z|B) = {:.6}", report.verdict, report.s_z_given_b);
    Ok(())
}
