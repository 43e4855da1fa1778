//! The counterexample family: a diagonal enumeration `φ: N² → N`, the
//! matrices `α^(k)` and the weights `p^(k)_n = α^(k)_{φ⁻¹(n)}`.
//!
//! `φ` walks the anti-diagonals `i + j = 2, 3, ...` in order and, within
//! one anti-diagonal, by increasing `i`. Only the between-diagonal order
//! matters for the construction; the within-diagonal order fixes the numeric
//! indices and is recorded as [`PHI_CONVENTION`] in every report.

use num::integer::Roots;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::weights::Weight;

pub const PHI_CONVENTION: &str = "anti-diagonals in order of i+j; increasing i within a diagonal";

fn check_index(i: usize) -> Result<()> {
    if i == 0 {
        Err(Error::InvalidIndex(0))
    } else {
        Ok(())
    }
}

/// `T(m) = m(m+1)/2`.
fn triangular(m: usize) -> Result<usize> {
    m.checked_mul(m + 1).map(|x| x / 2).ok_or(Error::IndexOverflow)
}

/// `φ(i, j) = (d−2)(d−1)/2 + i` with `d = i + j`.
pub fn phi(i: usize, j: usize) -> Result<usize> {
    check_index(i)?;
    check_index(j)?;
    let d = i.checked_add(j).ok_or(Error::IndexOverflow)?;
    triangular(d - 2)?.checked_add(i).ok_or(Error::IndexOverflow)
}

pub fn phi_inv(n: usize) -> Result<(usize, usize)> {
    check_index(n)?;
    // Smallest t with T(t) >= n; then n lies on diagonal d = t + 1.
    let n128 = n as u128;
    let mut t = ((8 * n128 + 1).sqrt() - 1) / 2;
    while t * (t + 1) / 2 < n128 {
        t += 1;
    }
    while t > 1 && (t - 1) * t / 2 >= n128 {
        t -= 1;
    }
    let t = t as usize;
    let i = n - triangular(t - 1)?;
    Ok((i, t + 1 - i))
}

/// `α^(k)_{ij}`: `i·j` when `i ≤ k`, otherwise `i`.
pub fn alpha(k: usize, i: usize, j: usize) -> Result<usize> {
    check_index(k)?;
    check_index(i)?;
    check_index(j)?;
    if i <= k {
        i.checked_mul(j).ok_or(Error::IndexOverflow)
    } else {
        Ok(i)
    }
}

/// `p^(k)`. Values are positive integers, nondecreasing in `k`.
pub fn cex_weight(k: usize) -> Result<Weight> {
    check_index(k)?;
    Ok(Weight::cex(k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsequenceWitness {
    pub k: usize,
    /// `φ(k+1, j)` for `j = 1..=count`, strictly increasing.
    pub indices: Vec<usize>,
    /// `p^(k)` on `indices`; all equal to `k + 1`.
    #[serde(with = "crate::rational::serde_q_vec")]
    pub values: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub bound: Q,
    pub constant: bool,
}

/// Row `k+1` of `α^(k)` is constant `k+1`, which gives `p^(k)` a bounded
/// subsequence.
pub fn bounded_subsequence_witness(k: usize, count: usize) -> Result<SubsequenceWitness> {
    check_index(count)?;
    let w = cex_weight(k)?;
    let indices = (1..=count)
        .map(|j| phi(k + 1, j))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<Q> = indices.iter().map(|&n| w.eval(n)).collect();
    let bound = Q::from_integer((k + 1).into());
    let constant = values.iter().all(|v| *v == bound);
    Ok(SubsequenceWitness { k, indices, values, bound, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn phi_examples() {
        assert_eq!(phi(1, 1), Ok(1));
        assert_eq!(phi(2, 1), Ok(3));
        assert_eq!(phi(3, 4), Ok(18));
        assert_eq!(phi(0, 1), Err(Error::InvalidIndex(0)));
        assert_eq!(phi(usize::MAX, 1), Err(Error::IndexOverflow));
    }

    #[test]
    fn phi_inv_examples() {
        assert_eq!(phi_inv(1), Ok((1, 1)));
        assert_eq!(phi_inv(6), Ok((3, 1)));
        assert_eq!(phi_inv(4), Ok((1, 3)));
        assert_eq!(phi_inv(0), Err(Error::InvalidIndex(0)));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(2, 1, 5), Ok(5));
        assert_eq!(alpha(2, 3, 5), Ok(3));
        assert_eq!(alpha(4, 5, 9), Ok(5));
        assert!(alpha(0, 1, 1).is_err());
    }

    #[test]
    fn weight_prefix() {
        let w = cex_weight(1).unwrap();
        let prefix: Vec<Q> = (1..=6).map(|n| w.eval(n)).collect();
        assert_eq!(prefix, [1, 2, 2, 3, 2, 3].map(q).to_vec());
        for k in 1..=6 {
            let w = cex_weight(k).unwrap();
            for j in 1..=30 {
                assert_eq!(w.eval(phi(k + 1, j).unwrap()), q(k as i64 + 1));
            }
        }
        assert!(cex_weight(0).is_err());
    }

    #[test]
    fn witnesses() {
        let w = bounded_subsequence_witness(1, 3).unwrap();
        assert_eq!(w.indices, vec![3, 5, 8]);
        assert_eq!(w.values, vec![q(2), q(2), q(2)]);
        assert!(w.constant);
        let w = bounded_subsequence_witness(2, 1).unwrap();
        assert_eq!(w.indices, vec![6]);
        assert_eq!(w.values, vec![q(3)]);
        for k in 1..=8 {
            let w = bounded_subsequence_witness(k, 50).unwrap();
            assert!(w.constant);
            assert!(w.indices.windows(2).all(|p| p[0] < p[1]));
        }
        assert!(bounded_subsequence_witness(1, 0).is_err());
    }

    #[test]
    fn phi_is_a_bijection_on_a_prefix() {
        for n in 1..=10_000 {
            let (i, j) = phi_inv(n).unwrap();
            assert_eq!(phi(i, j), Ok(n));
        }
    }

    #[test]
    fn phi_respects_diagonal_order() {
        let mut pts = Vec::new();
        for d in 2..=60 {
            for i in 1..d {
                pts.push((d, phi(i, d - i).unwrap()));
            }
        }
        let mut max_prev = 0;
        let mut cur_d = 2;
        let mut max_cur = 0;
        for (d, n) in pts {
            if d != cur_d {
                max_prev = max_cur;
                cur_d = d;
            }
            assert!(n > max_prev);
            max_cur = max_cur.max(n);
        }
    }

    #[test]
    fn family_is_monotone_and_legal() {
        let ws: Vec<Weight> = (1..=9).map(|k| cex_weight(k).unwrap()).collect();
        let pre: Vec<_> = ws.iter().map(|w| w.prefix(10_000)).collect();
        for k in 0..8 {
            for (lo, hi) in pre[k][..10_000].iter().zip(&pre[k + 1][..10_000]) {
                assert!(lo <= hi);
                assert!(*lo >= q(1));
            }
        }
    }

    #[test]
    fn first_row_is_unbounded() {
        for k in 1..=8 {
            let w = cex_weight(k).unwrap();
            for j in 1..=100 {
                assert_eq!(w.eval(phi(1, j).unwrap()), q(j as i64));
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip(i in 1usize..1_000_000, j in 1usize..1_000_000) {
            prop_assert_eq!(phi_inv(phi(i, j).unwrap()).unwrap(), (i, j));
        }
    }
}
