//! Exact rational scalars and the two-point kernels `g` and `f`.
//!
//! All model data lives in `Q`: [`Scalar`] is an arbitrary-precision rational,
//! always in lowest terms with positive denominator. The building blocks of
//! every formula in this crate are the kernels
//!
//! ```text
//! g(x, y) = c / (x − y),        f(x, y) = 1 + g(x, y) = (x − y + c) / (x − y),
//! ```
//!
//! where `c` is the fixed nonzero model constant carried by a [`Kernel`].
//! Set-valued shorthand is multiplicative: `f(x̄, ȳ)` is the product of
//! `f(x, y)` over all pairs, and an empty product is 1.
//!
//! Genericity: most constructions require that pairwise differences of
//! parameters stay off `{0, +c, −c}` — otherwise a kernel value hits a pole or
//! a zero that the formulas divide by. [`Kernel::genericity_check`] enforces
//! the strict form of this; deliberate coincidences between the two Bethe
//! parameter families are handled separately (see [`crate::bethe`]).

use crate::{Error, Result};
use num::{BigRational, Zero};

/// Exact rational scalar. Lowest terms and positive denominator are invariants
/// maintained by the underlying rational type.
pub type Scalar = BigRational;

/// Shorthand for an integer scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Shorthand for the rational `num/den`. Panics on a zero denominator, so it
/// is meant for literals in tests and examples.
#[track_caller]
pub fn rat(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "rat(): zero denominator");
    Scalar::new(num.into(), den.into())
}

/// Parse a scalar from `"num/den"` or plain integer form, e.g. `"-3/7"`, `"5"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    s.parse::<Scalar>()
        .map_err(|e| Error::Config(format!("cannot parse rational `{s}`: {e}")))
}

/// Check that `elems` are pairwise distinct; `label` names the set in errors.
pub fn ensure_distinct(label: &str, elems: &[Scalar]) -> Result<()> {
    for (i, x) in elems.iter().enumerate() {
        if elems[i + 1..].contains(x) {
            return Err(Error::DegenerateSet {
                label: label.to_string(),
                value: x.clone(),
            });
        }
    }
    Ok(())
}

/// A labeled set of pairwise distinct rational parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub label: String,
    pub elems: Vec<Scalar>,
}

impl ParamSet {
    pub fn new(label: impl Into<String>, elems: Vec<Scalar>) -> Result<Self> {
        let label = label.into();
        ensure_distinct(&label, &elems)?;
        Ok(ParamSet { label, elems })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// The rational two-point kernel pair `(g, f)` at a fixed model constant `c ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    c: Scalar,
}

impl Kernel {
    pub fn new(c: Scalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroModelConstant);
        }
        Ok(Kernel { c })
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    /// `g(x, y) = c / (x − y)`. Errors with [`Error::Pole`] when `x = y`.
    pub fn g(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        let d = x - y;
        if d.is_zero() {
            return Err(Error::Pole(x.clone()));
        }
        Ok(&self.c / d)
    }

    /// `f(x, y) = (x − y + c) / (x − y)`. Errors with [`Error::Pole`] when `x = y`.
    pub fn f(&self, x: &Scalar, y: &Scalar) -> Result<Scalar> {
        let d = x - y;
        if d.is_zero() {
            return Err(Error::Pole(x.clone()));
        }
        Ok((&d + &self.c) / d)
    }

    /// Product `∏_{x ∈ xs} ∏_{y ∈ ys} g(x, y)`; empty product is 1.
    pub fn g_prod(&self, xs: &[Scalar], ys: &[Scalar]) -> Result<Scalar> {
        let mut acc = int(1);
        for x in xs {
            for y in ys {
                acc *= self.g(x, y)?;
            }
        }
        Ok(acc)
    }

    /// Product `∏_{x ∈ xs} ∏_{y ∈ ys} f(x, y)`; empty product is 1.
    pub fn f_prod(&self, xs: &[Scalar], ys: &[Scalar]) -> Result<Scalar> {
        let mut acc = int(1);
        for x in xs {
            for y in ys {
                acc *= self.f(x, y)?;
            }
        }
        Ok(acc)
    }

    /// `∏_{x ∈ xs} f(x, y)` — set against a point.
    pub fn f_set_pt(&self, xs: &[Scalar], y: &Scalar) -> Result<Scalar> {
        self.f_prod(xs, std::slice::from_ref(y))
    }

    /// `∏_{y ∈ ys} f(x, y)` — point against a set.
    pub fn f_pt_set(&self, x: &Scalar, ys: &[Scalar]) -> Result<Scalar> {
        self.f_prod(std::slice::from_ref(x), ys)
    }

    /// Is `d` one of the forbidden differences `{0, +c, −c}`?
    pub fn is_forbidden_difference(&self, d: &Scalar) -> bool {
        d.is_zero() || *d == self.c || *d == -self.c.clone()
    }

    /// Strict joint genericity: every pairwise difference within the
    /// concatenation of the given groups must avoid `{0, +c, −c}`.
    pub fn genericity_check(&self, groups: &[&[Scalar]]) -> Result<()> {
        let all: Vec<&Scalar> = groups.iter().flat_map(|s| s.iter()).collect();
        for (i, x) in all.iter().enumerate() {
            for y in &all[i + 1..] {
                let d = *x - *y;
                if self.is_forbidden_difference(&d) {
                    return Err(Error::Genericity {
                        x: (*x).clone(),
                        y: (*y).clone(),
                        diff: d,
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k1() -> Kernel {
        Kernel::new(int(1)).unwrap()
    }

    #[test]
    fn kernel_rejects_zero_constant() {
        assert!(matches!(Kernel::new(int(0)), Err(Error::ZeroModelConstant)));
    }

    #[test]
    fn g_and_f_at_simple_points() {
        let k = k1();
        // g(2,0) = 1/2, f(2,0) = 3/2
        assert_eq!(k.g(&int(2), &int(0)).unwrap(), rat(1, 2));
        assert_eq!(k.f(&int(2), &int(0)).unwrap(), rat(3, 2));
        // antisymmetry of g
        assert_eq!(k.g(&int(0), &int(2)).unwrap(), rat(-1, 2));
        // f at difference −c is zero
        assert_eq!(k.f(&int(0), &int(1)).unwrap(), int(0));
        // pole
        assert!(matches!(k.g(&int(3), &int(3)), Err(Error::Pole(_))));
        assert!(matches!(k.f(&int(3), &int(3)), Err(Error::Pole(_))));
    }

    #[test]
    fn set_products_match_elementwise_oracle() {
        let k = k1();
        let xs = [int(4), int(6)];
        let ys = [int(1)];
        // oracle: explicit loop
        let mut want = int(1);
        for x in &xs {
            for y in &ys {
                want *= k.f(x, y).unwrap();
            }
        }
        let got = k.f_prod(&xs, &ys).unwrap();
        assert_eq!(got, want);
        // frozen value: f(4,1)·f(6,1) = (4/3)·(6/5) = 8/5
        assert_eq!(got, rat(8, 5));
        // empty products are 1
        assert_eq!(k.f_prod(&[], &ys).unwrap(), int(1));
        assert_eq!(k.g_prod(&xs, &[]).unwrap(), int(1));
    }

    #[test]
    fn genericity_check_flags_each_forbidden_difference() {
        let k = k1();
        k.genericity_check(&[&[int(0), int(2)], &[int(5)]]).unwrap();
        // difference 0
        assert!(k.genericity_check(&[&[int(2)], &[int(2)]]).is_err());
        // difference +c
        assert!(k.genericity_check(&[&[int(3), int(2)]]).is_err());
        // difference −c
        assert!(k.genericity_check(&[&[int(2), int(3)]]).is_err());
    }

    #[test]
    fn param_set_rejects_repeats() {
        assert!(ParamSet::new("xs", vec![int(1), int(2)]).is_ok());
        assert!(matches!(
            ParamSet::new("xs", vec![int(1), int(1)]),
            Err(Error::DegenerateSet { .. })
        ));
    }

    #[test]
    fn parse_scalar_roundtrips() {
        assert_eq!(parse_scalar("-3/7").unwrap(), rat(-3, 7));
        assert_eq!(parse_scalar("5").unwrap(), int(5));
        assert_eq!(parse_scalar(" 10/4 ").unwrap(), rat(5, 2));
        assert!(parse_scalar("x").is_err());
        // display form parses back
        let v = rat(-9, 12);
        assert_eq!(parse_scalar(&v.to_string()).unwrap(), v);
    }

    // Small rational strategy that keeps arithmetic fast and avoids huge terms.
    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn prop_f_is_one_plus_g(x in arb_scalar(), y in arb_scalar()) {
            let k = k1();
            prop_assume!(x != y);
            let g = k.g(&x, &y).unwrap();
            let f = k.f(&x, &y).unwrap();
            prop_assert_eq!(f, g + int(1));
        }

        #[test]
        fn prop_g_antisymmetric(x in arb_scalar(), y in arb_scalar()) {
            let k = k1();
            prop_assume!(x != y);
            let gxy = k.g(&x, &y).unwrap();
            let gyx = k.g(&y, &x).unwrap();
            prop_assert_eq!(gxy + gyx, int(0));
        }

        // g(z,v)g(v,u) + g(u,z)g(v,u) + g(z,v)g(u,z) = 0 — the three-term
        // kernel identity behind every triple cancellation in the ledgers.
        #[test]
        fn prop_three_term_identity(z in arb_scalar(), v in arb_scalar(), u in arb_scalar()) {
            let k = k1();
            prop_assume!(z != v && v != u && z != u);
            let gzv = k.g(&z, &v).unwrap();
            let gvu = k.g(&v, &u).unwrap();
            let guz = k.g(&u, &z).unwrap();
            prop_assert_eq!(&gzv * &gvu + &guz * &gvu + &gzv * &guz, int(0));
        }

        #[test]
        fn prop_set_product_factorizes(xs in prop::collection::vec(arb_scalar(), 0..4),
                                       ys in prop::collection::vec(arb_scalar(), 0..4)) {
            let k = k1();
            for x in &xs { for y in &ys { prop_assume!(x != y); } }
            let whole = k.f_prod(&xs, &ys).unwrap();
            let mut split = int(1);
            for x in &xs {
                split *= k.f_pt_set(x, &ys).unwrap();
            }
            prop_assert_eq!(whole, split);
        }
    }
}
