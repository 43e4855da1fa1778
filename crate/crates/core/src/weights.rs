//! Weight sequences, Köthe sets and the weighted ℓ¹ seminorms `‖a‖_p = Σ |a_i| p_i`.
//!
//! A weight is a total function on the positive integers. Universally
//! quantified conditions (`p_i ≥ 1`, pointwise order, directedness) can only
//! be checked on a finite prefix, so every such verdict carries the horizon
//! it was checked up to.

use std::fmt;
use std::sync::{Arc, RwLock};

use num::{One, Signed};
use serde::Serialize;

use crate::cex;
use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, Q};
use crate::seq::FinSeq;

/// Default horizon for finite checks when `KOTHE_HORIZON` is unset.
pub const DEFAULT_HORIZON: usize = 10_000;

#[derive(Clone)]
enum Rule {
    Const(Q),
    /// Listed prefix, then `tail` forever.
    List { values: Vec<Q>, tail: Q },
    /// The counterexample weight `p^(k)`.
    Cex(usize),
    /// `p_n = n`.
    Index,
}

struct Inner {
    rule: Rule,
    descriptor: String,
    cache: RwLock<Arc<Vec<Q>>>,
}

/// A weight sequence `p = (p_1, p_2, ...)`. Cheap to clone; clones share the
/// prefix cache.
#[derive(Clone)]
pub struct Weight {
    inner: Arc<Inner>,
}

impl Weight {
    fn from_rule(rule: Rule) -> Self {
        let descriptor = match &rule {
            Rule::Const(c) => format!("const:{}", format_q(c)),
            Rule::List { values, tail } => {
                let items: Vec<String> = values.iter().map(format_q).collect();
                format!(
                    "list:{};tail={}",
                    serde_json::to_string(&items).expect("strings serialize"),
                    format_q(tail)
                )
            }
            Rule::Cex(k) => format!("cex:{k}"),
            Rule::Index => "index".to_string(),
        };
        Self {
            inner: Arc::new(Inner {
                rule,
                descriptor,
                cache: RwLock::new(Arc::new(Vec::new())),
            }),
        }
    }

    pub fn constant(c: Q) -> Self {
        Self::from_rule(Rule::Const(c))
    }

    /// The constant weight 1, whose seminorm is the mass `w`.
    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn list(values: Vec<Q>, tail: Q) -> Self {
        Self::from_rule(Rule::List { values, tail })
    }

    /// `p^(k)`; see [`crate::cex::cex_weight`].
    pub(crate) fn cex(k: usize) -> Self {
        Self::from_rule(Rule::Cex(k))
    }

    /// `p_n = n`, a weight with no bounded subsequence.
    pub fn index() -> Self {
        Self::from_rule(Rule::Index)
    }

    /// Parses `const:<q>`, `list:<json array>[;tail=<q>]`, `cex:<k>` or `index`.
    /// A list without a tail continues with 1.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |msg: &str| Error::Parse(format!("weight {spec:?}: {msg}"));
        if spec == "index" {
            return Ok(Self::index());
        }
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<args>"))?;
        match kind {
            "const" => Ok(Self::constant(parse_q(body)?)),
            "cex" => {
                let body = body.strip_prefix("k=").unwrap_or(body);
                let k: usize = body.trim().parse().map_err(|_| bad("k must be a positive integer"))?;
                if k == 0 {
                    return Err(bad("k must be a positive integer"));
                }
                Ok(Self::cex(k))
            }
            "list" => {
                let (arr, tail) = match body.rsplit_once(";tail=") {
                    Some((arr, tail)) => (arr, parse_q(tail)?),
                    None => (body, Q::one()),
                };
                let raw: Vec<serde_json::Value> =
                    serde_json::from_str(arr).map_err(|e| bad(&e.to_string()))?;
                let values = raw
                    .iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => parse_q(s),
                        serde_json::Value::Number(n) if n.is_i64() => parse_q(&n.to_string()),
                        _ => Err(bad("list entries must be integers or \"num/den\" strings")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::list(values, tail))
            }
            _ => Err(bad("unknown weight kind")),
        }
    }

    pub fn descriptor(&self) -> &str {
        &self.inner.descriptor
    }

    /// `p_i`. Panics if `i == 0`.
    pub fn eval(&self, i: usize) -> Q {
        assert!(i >= 1, "weights are indexed from 1");
        {
            let cache = self.inner.cache.read().expect("weight cache poisoned");
            if let Some(v) = cache.get(i - 1) {
                return v.clone();
            }
        }
        self.compute(i)
    }

    fn compute(&self, i: usize) -> Q {
        match &self.inner.rule {
            Rule::Const(c) => c.clone(),
            Rule::List { values, tail } => values.get(i - 1).unwrap_or(tail).clone(),
            Rule::Cex(k) => {
                let (r, c) = cex::phi_inv(i).expect("index is positive");
                Q::from_integer(cex::alpha(*k, r, c).expect("indices are positive").into())
            }
            Rule::Index => Q::from_integer(i.into()),
        }
    }

    /// `p_1, ..., p_horizon` (the returned vector may be longer). Filling is
    /// idempotent, so concurrent callers at worst duplicate work.
    pub fn prefix(&self, horizon: usize) -> Arc<Vec<Q>> {
        {
            let cache = self.inner.cache.read().expect("weight cache poisoned");
            if cache.len() >= horizon {
                return Arc::clone(&cache);
            }
        }
        let mut cache = self.inner.cache.write().expect("weight cache poisoned");
        if cache.len() < horizon {
            let mut grown = Vec::with_capacity(horizon);
            grown.extend(cache.iter().cloned());
            for i in grown.len() + 1..=horizon {
                grown.push(self.compute(i));
            }
            *cache = Arc::new(grown);
        }
        Arc::clone(&cache)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.descriptor())
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.descriptor())
    }
}

/// `‖a‖_p = Σ_{i∈supp a} |a_i| p_i`.
pub fn seminorm(a: &FinSeq, p: &Weight) -> Q {
    a.iter().map(|(i, c)| c.abs() * p.eval(i)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeOneVerdict {
    pub weight: String,
    pub horizon: usize,
    pub passed: bool,
    /// First index with `p_i < 1`.
    pub first_violation: Option<usize>,
}

pub fn check_ge_one(p: &Weight, horizon: usize) -> GeOneVerdict {
    let one = Q::one();
    let prefix = p.prefix(horizon);
    let first_violation = prefix[..horizon]
        .iter()
        .position(|v| *v < one)
        .map(|i| i + 1);
    GeOneVerdict {
        weight: p.descriptor().to_string(),
        horizon,
        passed: first_violation.is_none(),
        first_violation,
    }
}

/// Pointwise order of two weights on `1..=horizon`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightOrder {
    Equal,
    /// `p_i ≤ q_i` everywhere, strictly somewhere.
    Below,
    /// `q_i ≤ p_i` everywhere, strictly somewhere.
    Above,
    Incomparable,
}

pub fn compare_weights(p: &Weight, q: &Weight, horizon: usize) -> WeightOrder {
    let (pp, qq) = (p.prefix(horizon), q.prefix(horizon));
    let (mut some_less, mut some_greater) = (false, false);
    for (a, b) in pp[..horizon].iter().zip(&qq[..horizon]) {
        match a.cmp(b) {
            std::cmp::Ordering::Less => some_less = true,
            std::cmp::Ordering::Greater => some_greater = true,
            std::cmp::Ordering::Equal => {}
        }
        if some_less && some_greater {
            return WeightOrder::Incomparable;
        }
    }
    match (some_less, some_greater) {
        (false, false) => WeightOrder::Equal,
        (true, false) => WeightOrder::Below,
        (false, true) => WeightOrder::Above,
        (true, true) => WeightOrder::Incomparable,
    }
}

/// An ordered finite family of weights together with the horizon used for
/// its finite checks.
#[derive(Clone, Debug, Serialize)]
pub struct KotheSet {
    pub members: Vec<Weight>,
    pub horizon: usize,
}

impl KotheSet {
    pub fn new(members: Vec<Weight>, horizon: usize) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("a Köthe set needs at least one weight".into()));
        }
        if horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(Self { members, horizon })
    }

    /// `{p^(1), ..., p^(kmax)}`.
    pub fn cex_family(kmax: usize, horizon: usize) -> Result<Self> {
        Self::new((1..=kmax).map(Weight::cex).collect(), horizon)
    }

    /// Accepts `{"weights": [...], "horizon": N}` or a bare array of weight
    /// specs, in which case `default_horizon` is used.
    pub fn parse(json: &str, default_horizon: usize) -> Result<Self> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Full { weights: Vec<String>, horizon: Option<usize> },
            Bare(Vec<String>),
        }
        let raw: Raw = serde_json::from_str(json)
            .map_err(|e| Error::Parse(format!("Köthe set: {e}")))?;
        let (specs, horizon) = match raw {
            Raw::Full { weights, horizon } => (weights, horizon.unwrap_or(default_horizon)),
            Raw::Bare(weights) => (weights, default_horizon),
        };
        let members = specs.iter().map(|s| Weight::parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(members, horizon)
    }

    pub fn find(&self, descriptor: &str) -> Option<&Weight> {
        self.members.iter().find(|w| w.descriptor() == descriptor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub p: String,
    pub q: String,
    /// First member `r` with `r ≥ max(p, q)` on the horizon.
    pub witness: Option<String>,
    /// For failed pairs: each candidate and the first index where it falls
    /// below `max(p, q)`.
    pub failures: Vec<(String, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedVerdict {
    pub horizon: usize,
    pub passed: bool,
    pub pairs: Vec<PairWitness>,
}

/// Looks for a majorant of every unordered pair of members.
pub fn check_directed(set: &KotheSet) -> DirectedVerdict {
    let h = set.horizon;
    let prefixes: Vec<Arc<Vec<Q>>> = set.members.iter().map(|w| w.prefix(h)).collect();
    let mut pairs = Vec::new();
    for a in 0..set.members.len() {
        for b in a + 1..set.members.len() {
            let (pa, pb) = (&prefixes[a][..h], &prefixes[b][..h]);
            let first_bad = |r: &[Q]| {
                (0..h)
                    .find(|&i| r[i] < pa[i] || r[i] < pb[i])
                    .map(|i| i + 1)
            };
            let mut failures = Vec::new();
            let mut witness = None;
            for (c, r) in prefixes.iter().enumerate() {
                match first_bad(&r[..h]) {
                    None => {
                        witness = Some(set.members[c].descriptor().to_string());
                        break;
                    }
                    Some(i) => failures.push((set.members[c].descriptor().to_string(), i)),
                }
            }
            if witness.is_some() {
                failures.clear();
            }
            pairs.push(PairWitness {
                p: set.members[a].descriptor().to_string(),
                q: set.members[b].descriptor().to_string(),
                witness,
                failures,
            });
        }
    }
    DirectedVerdict {
        horizon: h,
        passed: pairs.iter().all(|p| p.witness.is_some()),
        pairs,
    }
}

/// Smallest horizon covering both supports, at least 1.
pub fn covering_horizon(a: &FinSeq, b: &FinSeq) -> usize {
    a.max_index().max(b.max_index()).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};
    use crate::seq::min_product;
    use proptest::prelude::*;

    fn e(i: usize) -> FinSeq {
        FinSeq::basis(i).unwrap()
    }

    fn linear() -> Weight {
        Weight::index()
    }

    #[test]
    fn seminorm_examples() {
        assert_eq!(seminorm(&e(5), &Weight::one()), q(1));
        let a = FinSeq::from_pairs([(1, q(1)), (2, q(-2)), (3, q(3))]).unwrap();
        assert_eq!(seminorm(&a, &linear()), q(14));
        // 18 = φ(3,4), α^(2)_{3,4} = 3
        assert_eq!(seminorm(&e(18), &Weight::cex(2)), q(3));
    }

    #[test]
    fn ge_one_checks() {
        assert!(check_ge_one(&Weight::one(), 100).passed);
        assert!(check_ge_one(&Weight::cex(3), 1000).passed);
        let v = check_ge_one(&Weight::list(vec![q(1), q_frac(1, 2)], q(1)), 2);
        assert!(!v.passed);
        assert_eq!(v.first_violation, Some(2));
    }

    #[test]
    fn comparisons() {
        assert_eq!(compare_weights(&Weight::one(), &Weight::cex(1), 50), WeightOrder::Below);
        assert_eq!(compare_weights(&Weight::cex(2), &Weight::cex(3), 500), WeightOrder::Below);
        assert_eq!(compare_weights(&Weight::cex(3), &Weight::cex(2), 500), WeightOrder::Above);
        assert_eq!(compare_weights(&Weight::one(), &Weight::one(), 10), WeightOrder::Equal);
        let p = Weight::list(vec![q(1), q(5)], q(1));
        let r = Weight::list(vec![q(5), q(1)], q(1));
        assert_eq!(compare_weights(&p, &r, 3), WeightOrder::Incomparable);
    }

    #[test]
    fn directedness() {
        let set = KotheSet::cex_family(3, 300).unwrap();
        let v = check_directed(&set);
        assert!(v.passed);
        assert_eq!(v.pairs[0].witness.as_deref(), Some("cex:2"));

        assert!(check_directed(&KotheSet::new(vec![Weight::one()], 10).unwrap()).passed);

        let p = Weight::list(vec![q(1), q(5), q(1)], q(1));
        let r = Weight::list(vec![q(1), q(1), q(5)], q(1));
        let v = check_directed(&KotheSet::new(vec![p, r], 5).unwrap());
        assert!(!v.passed);
        assert_eq!(v.pairs[0].failures, vec![("list:[\"1/1\",\"5/1\",\"1/1\"];tail=1/1".into(), 3), ("list:[\"1/1\",\"1/1\",\"5/1\"];tail=1/1".into(), 2)]);
    }

    #[test]
    fn parse_specs() {
        assert_eq!(Weight::parse("const:1").unwrap().descriptor(), "const:1/1");
        assert_eq!(Weight::parse("cex:k=3").unwrap(), Weight::cex(3));
        assert_eq!(Weight::parse("cex:3").unwrap().descriptor(), "cex:3");
        let l = Weight::parse(r#"list:[1,"1/2"];tail=4"#).unwrap();
        assert_eq!(l.eval(2), q_frac(1, 2));
        assert_eq!(l.eval(9), q(4));
        assert_eq!(Weight::parse("list:[2]").unwrap().eval(5), q(1));
        assert!(Weight::parse("cex:0").is_err());
        assert!(Weight::parse("bogus:1").is_err());
        assert!(Weight::parse("const:1/0").is_err());

        let set = KotheSet::parse(r#"{"weights":["cex:1","const:1"],"horizon":77}"#, 5).unwrap();
        assert_eq!(set.horizon, 77);
        assert_eq!(set.members.len(), 2);
        assert_eq!(KotheSet::parse(r#"["cex:1"]"#, 5).unwrap().horizon, 5);
        assert!(KotheSet::parse("[]", 5).is_err());
    }

    #[test]
    fn cache_and_direct_evaluation_agree() {
        let w = Weight::cex(4);
        let direct: Vec<Q> = (1..=200).map(|i| w.eval(i)).collect();
        let pre = w.prefix(200);
        assert_eq!(&pre[..200], &direct[..]);
        assert_eq!(w.eval(150), direct[149]);
    }

    #[test]
    fn concurrent_prefix_fill() {
        let w = Weight::cex(5);
        let lens: Vec<usize> = std::thread::scope(|s| {
            let hs: Vec<_> = (1..=8).map(|t| {
                let w = w.clone();
                s.spawn(move || w.prefix(t * 300).len())
            }).collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (t, len) in lens.into_iter().enumerate() {
            assert!(len >= (t + 1) * 300);
        }
        assert_eq!(w.eval(2400), Weight::cex(5).eval(2400));
    }

    fn arb_seq() -> impl Strategy<Value = FinSeq> {
        prop::collection::vec((1usize..=40, -9i64..=9, 1i64..=4), 0..8).prop_map(|v| {
            FinSeq::from_pairs(v.into_iter().map(|(i, n, d)| (i, q_frac(n, d)))).unwrap()
        })
    }

    fn arb_weight() -> impl Strategy<Value = Weight> {
        prop_oneof![
            Just(Weight::one()),
            (1usize..=6).prop_map(Weight::cex),
            Just(Weight::index()),
            prop::collection::vec((1i64..=9, 1i64..=3), 1..40).prop_map(|v| {
                Weight::list(v.into_iter().map(|(n, d)| q(1) + q_frac(n, d)).collect(), q(2))
            }),
        ]
    }

    proptest! {
        #[test]
        fn submultiplicative(a in arb_seq(), b in arb_seq(), p in arb_weight()) {
            prop_assert!(check_ge_one(&p, covering_horizon(&a, &b)).passed);
            let lhs = seminorm(&min_product(&a, &b), &p);
            prop_assert!(lhs <= seminorm(&a, &p) * seminorm(&b, &p));
        }

        #[test]
        fn monotone_in_weight(a in arb_seq(), k in 1usize..6) {
            prop_assert!(seminorm(&a, &Weight::cex(k)) <= seminorm(&a, &Weight::cex(k + 1)));
        }

        #[test]
        fn constant_one_is_mass(a in arb_seq()) {
            prop_assert_eq!(seminorm(&a, &Weight::one()), crate::seq::weight_of(&a));
        }

        #[test]
        fn seminorm_axioms(a in arb_seq(), b in arb_seq(), n in -5i64..=5, p in arb_weight()) {
            let c = q(n);
            prop_assert_eq!(seminorm(&a.scale(&c), &p), c.abs() * seminorm(&a, &p));
            prop_assert!(seminorm(&(&a + &b), &p) <= seminorm(&a, &p) + seminorm(&b, &p));
        }
    }
}
