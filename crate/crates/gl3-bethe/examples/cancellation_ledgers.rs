//! Term-by-term bookkeeping behind the action covariance of the two-factor
//! expansion.
//!
//! Acting with `T_13(z)` (and, much more intricately, `T_12(z)`) on the
//! expanded vector produces cross-term blocks from the entrywise product
//! `T_ij = Σ_k T⁽²⁾_ik T⁽¹⁾_kj`. Each block either matches an expansion-side
//! block directly or cancels against partners. The ledgers materialize every
//! block as an exact vector and check each identity separately.

use gl3_bethe::bethe::BetheIndex;
use gl3_bethe::composite::{split_monodromy, t12_ledger_terms, t12_ledger_checks, t13_ledger, SplitSpec};
use gl3_bethe::ratfun::{int, rat};

fn main() -> gl3_bethe::Result<()> {
    let spec = SplitSpec::new(
        vec![int(0), int(10), int(20)],
        1,
        [int(2), int(3), int(5)],
        [int(7), int(1), int(2)],
        int(1),
    )?;
    let pair = split_monodromy(&spec)?;
    let idx = BetheIndex::new(vec![int(2)], vec![int(5)])?;
    let z = rat(-7, 3);

    println!("T_13(z) ledger at (a,b)=(1,1), z={z}:");
    for check in t13_ledger(&pair, &idx, &z)? {
        println!("  {:<28} {}", check.label, check.verdict);
        assert!(check.verdict.is_pass());
    }

    // The T_12 ledger carries five expansion blocks against 6+8+5 = 19
    // cross-term slots; five match directly, the rest cancel in pairs and
    // triples via the two- and three-term kernel identities.
    let terms = t12_ledger_terms(&pair, &idx, &z)?;
    let slots: usize = terms.e.iter().map(|row| row.len()).sum();
    println!("\nT_12(z) ledger, {slots} cross-term slots:");
    for check in t12_ledger_checks(&terms) {
        println!("  {:<28} {}", check.label, check.verdict);
        assert!(check.verdict.is_pass());
    }
    Ok(())
}
