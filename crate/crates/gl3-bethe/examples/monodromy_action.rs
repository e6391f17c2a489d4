//! Act with monodromy entries on concrete states.
//!
//! First the textbook single-site values, then the seven entry-action
//! expansions `T_ij(z)/λ_2(z) · B(ū; v̄)` on a twisted two-site chain,
//! verified against direct matrix application.

use gl3_bethe::actions::{action_terms, verify_action, Action};
use gl3_bethe::bethe::BetheIndex;
use gl3_bethe::ratfun::{int, rat, Scalar};
use gl3_bethe::rep::{ChainSpec, MonodromyRep, StateVector};

fn show(label: &str, v: &StateVector) {
    let entries: Vec<String> = v.iter().map(|(i, c)| format!("{c}·e{i}")).collect();
    println!("{label} = {}", if entries.is_empty() { "0".into() } else { entries.join(" + ") });
}

fn main() -> gl3_bethe::Result<()> {
    // One untwisted site at xi = 0, c = 1, probed at u = 2:
    // the creation entry T_12 populates e1, the diagonal T_11 scales |0>.
    let site = MonodromyRep::chain(&ChainSpec::new(
        vec![int(0)],
        [int(1), int(1), int(1)],
        int(1),
    )?);
    let z = int(2);
    let t12 = site.monodromy(1, 2, &z)?.apply(&site.vacuum());
    let t11 = site.monodromy(1, 1, &z)?.apply(&site.vacuum());
    show("T_12(2)|0>", &t12);
    show("T_11(2)|0>", &t11);
    assert_eq!(t12, StateVector::basis(3, 1, rat(1, 2)));
    assert_eq!(t11, StateVector::basis(3, 0, rat(3, 2)));

    // A twisted two-site chain and an off-shell vector with one parameter in
    // each family. Every entry action expands into named groups of vectors
    // with kernel coefficients; all seven must match the matrix action.
    let rep = MonodromyRep::chain(&ChainSpec::new(
        vec![int(0), int(10)],
        [int(2), int(3), int(5)],
        int(1),
    )?);
    let idx = BetheIndex::new(vec![rat(7, 2)], vec![int(-4)])?;
    let z: Scalar = rat(1, 3);
    println!("\nacting on B(u=7/2; v=-4) at z = {z}:");
    for action in Action::ALL {
        let groups = if action == Action::T32 && idx.b() == 0 {
            vec![]
        } else {
            action_terms(&rep, action, &idx, &z)?
        };
        let shape: Vec<String> = groups
            .iter()
            .map(|g| format!("{}×{}", g.terms.len(), g.label))
            .collect();
        let verdict = verify_action(&rep, action, &idx, &z)?;
        println!("  {}: [{}] -> {}", action.label(), shape.join(", "), verdict);
        assert!(verdict.is_pass());
    }
    Ok(())
}
