//! Two roads to the same off-shell vector.
//!
//! The closed construction sums `K(v̄_I|ū_I) · weights · T_13 T_12 T_23 |0>`
//! over bipartitions of both families; the recursive construction peels one
//! `ū`-parameter at a time. They are computed by entirely separate code paths
//! and must agree exactly.

use gl3_bethe::bethe::{bethe_vector_fresh, bethe_vector_recursive, BetheIndex};
use gl3_bethe::ratfun::{int, rat};
use gl3_bethe::rep::{compare_vectors, ChainSpec, MonodromyRep};

fn main() -> gl3_bethe::Result<()> {
    let rep = MonodromyRep::chain(&ChainSpec::new(
        vec![int(0), int(10), int(20)],
        [int(2), int(3), int(5)],
        int(1),
    )?);

    for (u, v) in [
        (vec![int(2)], vec![]),
        (vec![int(2), rat(7, 2)], vec![int(5)]),
        (vec![int(2), rat(7, 2)], vec![int(5), int(17)]),
    ] {
        let idx = BetheIndex::new(u, v)?;
        let closed = bethe_vector_fresh(&rep, &idx)?;
        let peeled = bethe_vector_recursive(&rep, &idx)?;
        println!(
            "(a,b)=({},{}): closed support {} states, recursion support {} states, {}",
            idx.a(),
            idx.b(),
            closed.support_len(),
            peeled.support_len(),
            compare_vectors(&closed, &peeled)
        );
    }
    Ok(())
}
