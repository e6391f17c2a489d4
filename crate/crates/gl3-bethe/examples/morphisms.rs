//! Two symmetries of the creation polynomial.
//!
//! Transposition reverses the factor string and swaps each entry's indices;
//! it relates column vectors to row (dual) vectors, but only on chains whose
//! monodromy realizes `T_ij(u)ᵀ` as a similarity transform of the site-reversed
//! chain — true untwisted, false for unequal twist components, and the check
//! honestly reports `skipped` in the latter case. Reflection maps
//! `T_ij(w) ↦ T_{4−j,4−i}(−w)` preserving order and survives any twist.

use gl3_bethe::bethe::{
    apply_morphism, creation_polynomial, verify_reflect_morphism, verify_transpose_morphism,
    BetheIndex, Morphism,
};
use gl3_bethe::ratfun::{int, rat};
use gl3_bethe::rep::{ChainSpec, MonodromyRep};

fn main() -> gl3_bethe::Result<()> {
    let k = gl3_bethe::ratfun::Kernel::new(int(1))?;
    let idx = BetheIndex::new(vec![int(2)], vec![int(5)])?;

    let poly = creation_polynomial(&k, &idx)?;
    let transposed = apply_morphism(Morphism::Transpose, &poly);
    let reflected = apply_morphism(Morphism::Reflect, &poly);
    println!("creation polynomial at (1,1): {} monomials", poly.len());
    println!("  transposed first factor rows/cols swapped: {} monomials", transposed.len());
    println!("  reflected arguments negated:               {} monomials", reflected.len());
    // Both maps are involutive on the polynomial.
    assert_eq!(poly.len(), apply_morphism(Morphism::Transpose, &transposed).len());

    let untwisted = MonodromyRep::chain(&ChainSpec::new(
        vec![int(0), int(10)],
        [int(1), int(1), int(1)],
        int(1),
    )?);
    let twisted = MonodromyRep::chain(&ChainSpec::new(
        vec![int(0), int(10)],
        [int(2), int(3), int(5)],
        int(1),
    )?);

    println!("transpose symmetry, untwisted: {}", verify_transpose_morphism(&untwisted, &idx)?);
    println!("transpose symmetry, twisted:   {}", verify_transpose_morphism(&twisted, &idx)?);

    // Reflection needs the negated parameters generic too; (2; 5) against
    // xi = (0, 10) is fine, and the identity holds even with the twist on.
    let refl_idx = BetheIndex::new(vec![int(2)], vec![rat(13, 2)])?;
    println!("reflect symmetry, twisted:     {}", verify_reflect_morphism(&twisted, &refl_idx)?);
    Ok(())
}
