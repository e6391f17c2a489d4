//! Refine a cut into three parts: the expansion does not care how the parts
//! are grouped. For every weak composition L = L1 + L2 + L3 of a three-site
//! chain, expanding over ((1·2)·3) and over (1·(2·3)) must both reproduce the
//! unsplit vector.

use gl3_bethe::bethe::BetheIndex;
use gl3_bethe::composite::{verify_triple_associativity, TripleSplitSpec};
use gl3_bethe::ratfun::{int, rat};

fn main() -> gl3_bethe::Result<()> {
    let xi = vec![int(0), int(10), int(20)];
    let twists = [
        [int(2), int(3), int(5)],
        [int(7), int(1), int(2)],
        [int(1), int(4), int(3)],
    ];
    let idx = BetheIndex::new(vec![int(2), rat(7, 2)], vec![int(5)])?;

    for p in 0..=3usize {
        for q in p..=3usize {
            let spec = TripleSplitSpec::new(xi.clone(), (p, q), twists.clone(), int(1))?;
            let verdict = verify_triple_associativity(&spec, &idx)?;
            println!(
                "parts of sizes ({}, {}, {}): {}",
                p,
                q - p,
                3 - q,
                verdict
            );
            assert!(verdict.is_pass());
        }
    }
    Ok(())
}
