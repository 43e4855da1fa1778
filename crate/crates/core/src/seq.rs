//! Finitely supported sequences under the min-product.
//!
//! Elements are stored sparsely as `index -> coefficient` with indices
//! starting at 1 and no explicit zeros, so derived equality is mathematical
//! equality.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FinSeq {
    entries: BTreeMap<usize, Q>,
}

impl FinSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis vector `e_i`.
    pub fn basis(i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidIndex(0));
        }
        let mut entries = BTreeMap::new();
        entries.insert(i, Q::from_integer(1.into()));
        Ok(Self { entries })
    }

    /// Builds a sequence from `(index, coefficient)` pairs. Repeated indices
    /// are summed and zeros dropped.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Q)>,
    {
        let mut out = Self::zero();
        for (i, c) in pairs {
            if i == 0 {
                return Err(Error::InvalidIndex(0));
            }
            out.add_at(i, c);
        }
        Ok(out)
    }

    fn add_at(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(i) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, i: usize) -> Q {
        self.entries.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, &Q)> + '_ {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    /// Largest index in the support, 0 for the zero sequence.
    pub fn max_index(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|(&i, c)| (i, c * s)).collect(),
        }
    }

    /// `S_k(x) = Σ_{j≥k} x_j`.
    pub fn suffix_sum(&self, k: usize) -> Q {
        self.entries.range(k..).map(|(_, c)| c).sum()
    }

    /// Coefficients with index `<= m`.
    pub fn truncate(&self, m: usize) -> Self {
        Self {
            entries: self.entries.range(..=m).map(|(&i, c)| (i, c.clone())).collect(),
        }
    }
}

/// Coefficientwise linear combination `Σ c·x`.
pub fn lin_comb<'a, I>(terms: I) -> FinSeq
where
    I: IntoIterator<Item = (&'a Q, &'a FinSeq)>,
{
    let mut out = FinSeq::zero();
    for (c, x) in terms {
        if c.is_zero() {
            continue;
        }
        for (i, v) in x.iter() {
            out.add_at(i, c * v);
        }
    }
    out
}

/// The product extending `e_i e_j = e_min(i,j)` bilinearly.
///
/// Uses `(ab)_k = a_k b_k + a_k S_{>k}(b) + b_k S_{>k}(a)`, sweeping the union
/// of supports from the top while carrying both strict suffix sums.
pub fn min_product(a: &FinSeq, b: &FinSeq) -> FinSeq {
    if a.is_zero() || b.is_zero() {
        return FinSeq::zero();
    }
    let mut idx: Vec<usize> = a.entries.keys().chain(b.entries.keys()).copied().collect();
    idx.sort_unstable();
    idx.dedup();

    let mut tail_a = Q::zero();
    let mut tail_b = Q::zero();
    let mut out = BTreeMap::new();
    for &k in idx.iter().rev() {
        let ak = a.get(k);
        let bk = b.get(k);
        let ck = &ak * &bk + &ak * &tail_b + &bk * &tail_a;
        if !ck.is_zero() {
            out.insert(k, ck);
        }
        tail_a += ak;
        tail_b += bk;
    }
    FinSeq { entries: out }
}

/// Direct double sum over support pairs; the reference for [`min_product`].
pub fn brute_product(a: &FinSeq, b: &FinSeq) -> FinSeq {
    let mut out = FinSeq::zero();
    for (i, ai) in a.iter() {
        for (j, bj) in b.iter() {
            out.add_at(i.min(j), ai * bj);
        }
    }
    out
}

/// `w(a) = Σ |a_i|`.
pub fn weight_of(a: &FinSeq) -> Q {
    a.entries.values().map(|c| c.abs()).sum()
}

/// `ℓ(a)`, the first index carrying a nonzero coefficient.
pub fn leading_index(a: &FinSeq) -> Result<usize> {
    a.entries.keys().next().copied().ok_or(Error::ZeroElement)
}

impl Add for &FinSeq {
    type Output = FinSeq;
    fn add(self, rhs: &FinSeq) -> FinSeq {
        let mut out = self.clone();
        for (i, c) in rhs.iter() {
            out.add_at(i, c.clone());
        }
        out
    }
}

impl Sub for &FinSeq {
    type Output = FinSeq;
    fn sub(self, rhs: &FinSeq) -> FinSeq {
        let mut out = self.clone();
        for (i, c) in rhs.iter() {
            out.add_at(i, -c.clone());
        }
        out
    }
}

impl Neg for &FinSeq {
    type Output = FinSeq;
    fn neg(self) -> FinSeq {
        FinSeq {
            entries: self.entries.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }
}

impl Mul for &FinSeq {
    type Output = FinSeq;
    fn mul(self, rhs: &FinSeq) -> FinSeq {
        min_product(self, rhs)
    }
}

impl fmt::Debug for FinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(i, c)| (i, format_q(c))))
            .finish()
    }
}

// JSON form: [[index, "num/den"], ...], strictly increasing, nonzero.
impl Serialize for FinSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.entries.len()))?;
        for (i, c) in &self.entries {
            seq.serialize_element(&(i, format_q(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for FinSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<(u64, String)> = Vec::deserialize(d)?;
        let mut entries = BTreeMap::new();
        let mut prev = 0u64;
        for (i, c) in raw {
            if i == 0 {
                return Err(D::Error::custom("indices start at 1"));
            }
            if i <= prev {
                return Err(D::Error::custom("indices must be strictly increasing"));
            }
            prev = i;
            let c = parse_q(&c).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("explicit zero coefficient at index {i}")));
            }
            let i = usize::try_from(i).map_err(D::Error::custom)?;
            entries.insert(i, c);
        }
        Ok(FinSeq { entries })
    }
}

impl FinSeq {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("sequence: {e}")))
    }
}

/// An element `(s, a)` of the unitization `A₊`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitalElement {
    #[serde(with = "crate::rational::serde_q")]
    pub scalar: Q,
    pub part: FinSeq,
}

impl UnitalElement {
    pub fn new(scalar: Q, part: FinSeq) -> Self {
        Self { scalar, part }
    }

    pub fn one() -> Self {
        Self::new(Q::from_integer(1.into()), FinSeq::zero())
    }

    /// The embedding `a ↦ (0, a)`.
    pub fn embed(a: FinSeq) -> Self {
        Self::new(Q::zero(), a)
    }
}

/// `(s,a)(t,b) = (st, sb + ta + ab)`.
pub fn unital_product(x: &UnitalElement, y: &UnitalElement) -> UnitalElement {
    let ab = min_product(&x.part, &y.part);
    let one = Q::from_integer(1.into());
    let part = lin_comb([(&x.scalar, &y.part), (&y.scalar, &x.part), (&one, &ab)]);
    UnitalElement::new(&x.scalar * &y.scalar, part)
}
