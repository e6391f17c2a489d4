//! Weight vectors: the pole-free normalization and its coproduct.
//!
//! `w(ū; v̄) = B(ū; v̄) · f(v̄, ū) λ₂(ū) λ₂(v̄)` clears every denominator the
//! partition sum carries, and under a chain split it obeys a coproduct whose
//! partition weight Φ has both a closed form and a colored-ordering rule.

use gl3_bethe::bethe::BetheIndex;
use gl3_bethe::composite::{
    color_weight_phi, color_weight_phi_general, split_monodromy, verify_weight_coproduct,
    weight_vector, SplitSpec,
};
use gl3_bethe::ratfun::{int, rat};
use gl3_bethe::rep::{ChainSpec, MonodromyRep};

fn main() -> gl3_bethe::Result<()> {
    let k = gl3_bethe::ratfun::Kernel::new(int(1))?;

    // The two Φ evaluations agree on any split of the families.
    let (u_i, u_ii) = (vec![int(2)], vec![rat(7, 2)]);
    let (v_i, v_ii) = (vec![int(5)], vec![int(17)]);
    let closed = color_weight_phi(&k, &u_i, &u_ii, &v_i, &v_ii)?;
    let colored = color_weight_phi_general(&k, &u_i, &u_ii, &v_i, &v_ii)?;
    println!("phi closed form      = {closed}");
    println!("phi colored ordering = {colored}");
    assert_eq!(closed, colored);

    // A weight vector on a single chain; note the integer-friendly entries
    // compared with the raw partition sum.
    let rep = MonodromyRep::chain(&ChainSpec::new(
        vec![int(0), int(10)],
        [int(2), int(3), int(5)],
        int(1),
    )?);
    let idx = BetheIndex::new(vec![int(2)], vec![int(5)])?;
    let w = weight_vector(&rep, &idx)?;
    println!("w(2; 5) supported on {} of {} basis states", w.support_len(), w.dim());

    // And the coproduct across a cut.
    let spec = SplitSpec::new(
        vec![int(0), int(10)],
        1,
        [int(2), int(3), int(5)],
        [int(7), int(1), int(2)],
        int(1),
    )?;
    let pair = split_monodromy(&spec)?;
    println!("coproduct: {}", verify_weight_coproduct(&pair, &idx)?);
    Ok(())
}
