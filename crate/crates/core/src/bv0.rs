//! The isomorphism `A₁ → bv₀`, `e_n ↦ e_1 + … + e_n`, i.e. `(Ta)_k = Σ_{i≥k} a_i`.
//!
//! Under `T` the min-product becomes the coordinatewise product, because
//! suffix sums satisfy `S_k(ab) = S_k(a)·S_k(b)`.

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::Q;
use crate::seq::{min_product, weight_of, FinSeq};

/// A finitely supported element of `bv₀`, multiplied coordinatewise.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BvSeq(FinSeq);

impl BvSeq {
    pub fn new(entries: FinSeq) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &FinSeq {
        &self.0
    }

    pub fn get(&self, k: usize) -> Q {
        self.0.get(k)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        FinSeq::from_json(s).map(Self)
    }

    /// Coordinatewise product.
    pub fn pointwise(&self, other: &BvSeq) -> BvSeq {
        let pairs = self
            .0
            .iter()
            .filter_map(|(k, x)| {
                let y = other.get(k);
                (!y.is_zero()).then(|| (k, x * y))
            });
        BvSeq(FinSeq::from_pairs(pairs).expect("indices come from a valid sequence"))
    }
}

pub fn to_bv0(a: &FinSeq) -> BvSeq {
    let mut acc = Q::zero();
    let mut out = Vec::new();
    let mut entries = a.iter().rev().peekable();
    for k in (1..=a.max_index()).rev() {
        if let Some((_, c)) = entries.next_if(|&(i, _)| i == k) {
            acc += c;
        }
        if !acc.is_zero() {
            out.push((k, acc.clone()));
        }
    }
    BvSeq(FinSeq::from_pairs(out).expect("indices start at 1"))
}

/// `a_k = x_k − x_{k+1}`.
pub fn from_bv0(x: &BvSeq) -> FinSeq {
    let pairs = (1..=x.0.max_index()).map(|k| (k, x.get(k) - x.get(k + 1)));
    FinSeq::from_pairs(pairs).expect("indices start at 1")
}

/// Total variation `Σ_{k≥1} |x_k − x_{k+1}|`.
pub fn bv_norm(x: &BvSeq) -> Q {
    (1..=x.0.max_index())
        .map(|k| (x.get(k) - x.get(k + 1)).abs())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativeCheck {
    /// `T(ab)`.
    pub image_of_product: BvSeq,
    /// `T(a) ⊙ T(b)`.
    pub product_of_images: BvSeq,
    pub passed: bool,
}

pub fn check_multiplicative(a: &FinSeq, b: &FinSeq) -> MultiplicativeCheck {
    let lhs = to_bv0(&min_product(a, b));
    let rhs = to_bv0(a).pointwise(&to_bv0(b));
    let passed = lhs == rhs;
    MultiplicativeCheck { image_of_product: lhs, product_of_images: rhs, passed }
}

/// Smallest and largest `bv_norm(T a) / w(a)` over the nonzero samples.
pub fn norm_ratio_range<'a, I>(samples: I) -> Option<(Q, Q)>
where
    I: IntoIterator<Item = &'a FinSeq>,
{
    samples
        .into_iter()
        .filter(|a| !a.is_zero())
        .map(|a| bv_norm(&to_bv0(a)) / weight_of(a))
        .fold(None, |acc, r| match acc {
            None => Some((r.clone(), r)),
            Some((lo, hi)) => Some((lo.min(r.clone()), hi.max(r))),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};
    use proptest::prelude::*;

    fn e(i: usize) -> FinSeq {
        FinSeq::basis(i).unwrap()
    }

    fn bv(pairs: &[(usize, i64)]) -> BvSeq {
        BvSeq::new(FinSeq::from_pairs(pairs.iter().map(|&(i, c)| (i, q(c)))).unwrap())
    }

    #[test]
    fn transform_examples() {
        assert_eq!(to_bv0(&e(3)), bv(&[(1, 1), (2, 1), (3, 1)]));
        assert_eq!(to_bv0(&(&e(1) - &e(2))), bv(&[(2, -1)]));
        assert!(to_bv0(&FinSeq::zero()).is_zero());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(from_bv0(&bv(&[(1, 1), (2, 1), (3, 1)])), e(3));
        assert!(from_bv0(&BvSeq::default()).is_zero());
    }

    #[test]
    fn norm_examples() {
        for n in 1..=100 {
            assert_eq!(bv_norm(&to_bv0(&e(n))), q(1));
        }
        assert_eq!(bv_norm(&BvSeq::default()), q(0));
        assert_eq!(bv_norm(&bv(&[(2, -1)])), q(2));
    }

    #[test]
    fn multiplicative_examples() {
        let c = check_multiplicative(&e(2), &e(3));
        assert!(c.passed);
        assert_eq!(c.image_of_product, bv(&[(1, 1), (2, 1)]));
        let c = check_multiplicative(&FinSeq::zero(), &e(3));
        assert!(c.passed && c.image_of_product.is_zero());
    }

    #[test]
    fn ratio_range() {
        let samples = [e(3), &e(1) - &e(2), FinSeq::zero()];
        let (lo, hi) = norm_ratio_range(samples.iter()).unwrap();
        assert!(lo <= hi);
        assert!(norm_ratio_range([FinSeq::zero()].iter()).is_none());
    }

    fn arb_seq() -> impl Strategy<Value = FinSeq> {
        prop::collection::vec((1usize..=30, -9i64..=9, 1i64..=5), 0..10).prop_map(|v| {
            FinSeq::from_pairs(v.into_iter().map(|(i, n, d)| (i, q_frac(n, d)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn roundtrip(a in arb_seq()) {
            prop_assert_eq!(from_bv0(&to_bv0(&a)), a.clone());
            let x = BvSeq::new(a);
            prop_assert_eq!(to_bv0(&from_bv0(&x)), x);
        }

        #[test]
        fn intertwines_products(a in arb_seq(), b in arb_seq()) {
            prop_assert!(check_multiplicative(&a, &b).passed);
        }

        #[test]
        fn linear(a in arb_seq(), b in arb_seq(), n in -4i64..=4) {
            let c = q(n);
            let lhs = to_bv0(&(&a.scale(&c) + &b));
            let ta = to_bv0(&a);
            let rhs = BvSeq::new(&ta.entries().scale(&c) + to_bv0(&b).entries());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
