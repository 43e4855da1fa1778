//! Approximate-identity witnesses in seminorm form.
//!
//! A witness for a finite test family `F`, a seminorm `‖·‖_p` and a
//! tolerance `eps` is an element `b` with `‖a − ab‖_p ≤ eps` for all `a ∈ F`.
//! A locally bounded witness additionally satisfies `‖b‖_p ≤ C_p` in the same
//! seminorm; a bounded witness satisfies `‖b‖_μ ≤ C_μ` for every member `μ`
//! of the family at once.
//!
//! Tolerances are closed (`≤ eps`), so `eps = 0` asks for exact identities.
//! Candidates are the basis vectors `e_n`, searched over an explicit window.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cex::{cex_weight, phi};
use crate::error::{Error, Result};
use crate::rational::{format_q, Q};
use crate::seq::{min_product, FinSeq};
use crate::weights::{seminorm, KotheSet, Weight};

/// `‖a − ab‖_p`.
pub fn ai_defect(a: &FinSeq, b: &FinSeq, p: &Weight) -> Q {
    seminorm(&(a - &min_product(a, b)), p)
}

/// Closed form of `ai_defect(a, e_n, p)`:
/// `p_n·|Σ_{i>n} a_i| + Σ_{i>n} p_i·|a_i|`.
pub fn tail_defect_formula(a: &FinSeq, n: usize, p: &Weight) -> Result<Q> {
    if n == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let tail = a.suffix_sum(n + 1);
    let spread: Q = a
        .iter()
        .filter(|&(i, _)| i > n)
        .map(|(i, c)| c.abs() * p.eval(i))
        .sum();
    Ok(p.eval(n) * tail.abs() + spread)
}

fn max_support(family: &[FinSeq]) -> usize {
    family.iter().map(FinSeq::max_index).max().unwrap_or(0)
}

fn require_nonnegative(eps: &Q) -> Result<()> {
    if eps.is_negative() {
        return Err(Error::InvalidArgument(format!("eps must be >= 0, got {}", format_q(eps))));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AiWitness {
    pub weight: String,
    pub test: Vec<FinSeq>,
    pub b: FinSeq,
    #[serde(with = "crate::rational::serde_q")]
    pub eps: Q,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub defects: Vec<Q>,
    pub passed: bool,
}

pub fn check_ai_witness(family: &[FinSeq], b: &FinSeq, p: &Weight, eps: &Q) -> Result<AiWitness> {
    require_nonnegative(eps)?;
    let defects: Vec<Q> = family.iter().map(|a| ai_defect(a, b, p)).collect();
    let passed = defects.iter().all(|d| d <= eps);
    Ok(AiWitness {
        weight: p.descriptor().to_string(),
        test: family.to_vec(),
        b: b.clone(),
        eps: eps.clone(),
        defects,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LbaiCheck {
    pub ai: AiWitness,
    #[serde(with = "crate::rational::serde_q")]
    pub norm: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub bound: Q,
    pub bound_ok: bool,
    pub passed: bool,
}

/// Defect condition plus `‖b‖_p ≤ C`, in the same seminorm only.
pub fn check_lbai_witness(
    family: &[FinSeq],
    b: &FinSeq,
    p: &Weight,
    eps: &Q,
    bound: &Q,
) -> Result<LbaiCheck> {
    if !bound.is_positive() {
        return Err(Error::InvalidArgument("bound C must be positive".into()));
    }
    let ai = check_ai_witness(family, b, p, eps)?;
    let norm = seminorm(b, p);
    let bound_ok = norm <= *bound;
    let passed = ai.passed && bound_ok;
    Ok(LbaiCheck { ai, norm, bound: bound.clone(), bound_ok, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaiLevel {
    pub weight: String,
    #[serde(with = "crate::rational::serde_q")]
    pub eps: Q,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub defects: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub norm: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub bound: Q,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaiCheck {
    pub test: Vec<FinSeq>,
    pub b: FinSeq,
    pub levels: Vec<BaiLevel>,
    pub passed: bool,
}

/// Defect condition for each member under its own tolerance, and
/// `‖b‖_μ ≤ C_μ` for every member `μ` simultaneously.
pub fn check_bai_witness(
    family: &[FinSeq],
    b: &FinSeq,
    set: &KotheSet,
    eps: &BTreeMap<String, Q>,
    bounds: &BTreeMap<String, Q>,
) -> Result<BaiCheck> {
    let mut levels = Vec::with_capacity(set.members.len());
    for w in &set.members {
        let d = w.descriptor();
        let bound = bounds.get(d).ok_or_else(|| Error::MissingBound(d.to_string()))?;
        let e = eps.get(d).ok_or_else(|| Error::MissingEps(d.to_string()))?;
        let lb = check_lbai_witness(family, b, w, e, bound)?;
        levels.push(BaiLevel {
            weight: d.to_string(),
            eps: e.clone(),
            defects: lb.ai.defects,
            norm: lb.norm,
            bound: lb.bound,
            passed: lb.passed,
        });
    }
    let passed = levels.iter().all(|l| l.passed);
    Ok(BaiCheck { test: family.to_vec(), b: b.clone(), levels, passed })
}

/// Same tolerance for every member.
pub fn uniform_eps(set: &KotheSet, eps: &Q) -> BTreeMap<String, Q> {
    set.members
        .iter()
        .map(|w| (w.descriptor().to_string(), eps.clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LbaiElement {
    pub k: usize,
    /// `n = φ(k+1, j)`.
    pub n: usize,
    pub j: usize,
    pub b: FinSeq,
    pub check: LbaiCheck,
}

/// `e_n` with `n = φ(k+1, j)` for the least `j` putting `n` past every
/// support index of `F`. Under `p^(k)` it has norm `k+1` and exact defect 0.
pub fn construct_lbai_element(family: &[FinSeq], k: usize) -> Result<LbaiElement> {
    let p = cex_weight(k)?;
    let m = max_support(family);
    let mut j = 1;
    let n = loop {
        let n = phi(k + 1, j)?;
        if n > m {
            break n;
        }
        j += 1;
    };
    let b = FinSeq::basis(n)?;
    let bound = Q::from_integer((k + 1).into());
    let check = check_lbai_witness(family, &b, &p, &Q::zero(), &bound)?;
    Ok(LbaiElement { k, n, j, b, check })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservedSup {
    pub weight: String,
    #[serde(with = "crate::rational::serde_q")]
    pub sup: Q,
    /// Position (in the common index list) where the running sup last grew.
    pub last_increase: usize,
    /// The sup stopped growing in the first half of the inspected indices.
    pub settled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaiNet {
    pub horizon: usize,
    pub inspected: usize,
    pub observed: Vec<ObservedSup>,
    pub n: usize,
    pub check: BaiCheck,
    /// Check passed and every observed sup settled within the horizon.
    pub certified: bool,
}

/// Picks `b = e_n` with `n` the first common index past the supports of `F`
/// and takes `C_μ` as the sup of `μ` over the common indices up to the
/// horizon.
pub fn construct_bai_net(common: &[usize], family: &[FinSeq], set: &KotheSet) -> Result<BaiNet> {
    if common.windows(2).any(|w| w[0] >= w[1]) || common.first() == Some(&0) {
        return Err(Error::InvalidArgument(
            "common indices must be positive and strictly increasing".into(),
        ));
    }
    let h = set.horizon;
    let within: Vec<usize> = common.iter().copied().take_while(|&n| n <= h).collect();
    let m = max_support(family);
    let n = *within.iter().find(|&&n| n > m).ok_or_else(|| {
        Error::Refusal(format!("no common index in (.., {h}] exceeds support bound {m}"))
    })?;

    let mut observed = Vec::with_capacity(set.members.len());
    let mut bounds = BTreeMap::new();
    for w in &set.members {
        let mut sup = Q::zero();
        let mut last_increase = 0;
        for (pos, &i) in within.iter().enumerate() {
            let v = w.eval(i);
            if v > sup {
                sup = v;
                last_increase = pos;
            }
        }
        bounds.insert(w.descriptor().to_string(), sup.clone());
        observed.push(ObservedSup {
            weight: w.descriptor().to_string(),
            sup,
            last_increase,
            settled: 2 * (last_increase + 1) <= within.len(),
        });
    }
    let b = FinSeq::basis(n)?;
    let check = check_bai_witness(family, &b, set, &uniform_eps(set, &Q::zero()), &bounds)?;
    let certified = check.passed && observed.iter().all(|o| o.settled);
    Ok(BaiNet { horizon: h, inspected: within.len(), observed, n, check, certified })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelResult {
    pub weight: String,
    /// Best candidate index, if any candidate met the tolerance.
    pub n: Option<usize>,
    #[serde(with = "crate::rational::serde_q_opt")]
    pub bound: Option<Q>,
    #[serde(with = "crate::rational::serde_q_opt")]
    pub max_defect: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerLevelReport {
    pub horizon: usize,
    /// Candidates were `e_n` for `n ≤ max_support(F) + window`.
    pub search_limit: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub eps: Q,
    pub levels: Vec<LevelResult>,
    pub all_found: bool,
}

/// For each member weight independently, the candidate `e_n` meeting the
/// tolerance with the least norm (ties to the least `n`). The resulting
/// constants `{C_p}` are the per-level bounds of a locally bounded a.i.
pub fn per_level_report(set: &KotheSet, family: &[FinSeq], eps: &Q, window: usize) -> Result<PerLevelReport> {
    require_nonnegative(eps)?;
    let limit = max_support(family) + window;
    let levels: Vec<LevelResult> = set
        .members
        .par_iter()
        .map(|p| best_level_candidate(p, family, eps, limit))
        .collect();
    let all_found = levels.iter().all(|l| l.n.is_some());
    Ok(PerLevelReport { horizon: set.horizon, search_limit: limit, eps: eps.clone(), levels, all_found })
}

fn max_defect_for(family: &[FinSeq], n: usize, p: &Weight) -> Q {
    family
        .iter()
        .map(|a| tail_defect_formula(a, n, p).expect("n >= 1"))
        .max()
        .unwrap_or_else(Q::zero)
}

fn best_level_candidate(p: &Weight, family: &[FinSeq], eps: &Q, limit: usize) -> LevelResult {
    let mut best: Option<(usize, Q, Q)> = None;
    for n in 1..=limit {
        let norm = p.eval(n);
        if matches!(&best, Some((_, b, _)) if norm >= *b) {
            continue;
        }
        let d = max_defect_for(family, n, p);
        if d <= *eps {
            best = Some((n, norm, d));
        }
    }
    LevelResult {
        weight: p.descriptor().to_string(),
        n: best.as_ref().map(|b| b.0),
        bound: best.as_ref().map(|b| b.1.clone()),
        max_defect: best.map(|b| b.2),
    }
}

/// First candidate `e_n`, `n ≤ limit`, meeting the tolerance under `p`.
pub fn first_ai_candidate(p: &Weight, family: &[FinSeq], eps: &Q, window: usize) -> Result<AiWitness> {
    require_nonnegative(eps)?;
    let limit = max_support(family) + window;
    let n = (1..=limit)
        .find(|&n| max_defect_for(family, n, p) <= *eps)
        .ok_or_else(|| Error::Refusal(format!("no e_n with n <= {limit} meets the tolerance")))?;
    check_ai_witness(family, &FinSeq::basis(n)?, p, eps)
}

/// A single candidate `e_n` good for every member at once. With `bounds`,
/// the first candidate meeting them; otherwise the one with the least total
/// norm, whose norms are then reported as the bounds.
pub fn search_bai_candidate(
    set: &KotheSet,
    family: &[FinSeq],
    eps: &Q,
    bounds: Option<&BTreeMap<String, Q>>,
    window: usize,
) -> Result<BaiCheck> {
    require_nonnegative(eps)?;
    if let Some(bounds) = bounds {
        for w in &set.members {
            if !bounds.contains_key(w.descriptor()) {
                return Err(Error::MissingBound(w.descriptor().to_string()));
            }
        }
    }
    let limit = max_support(family) + window;
    let eps_map = uniform_eps(set, eps);
    let mut best: Option<(usize, Q)> = None;
    for n in 1..=limit {
        if !set.members.iter().all(|w| max_defect_for(family, n, w) <= *eps) {
            continue;
        }
        match bounds {
            Some(bounds) => {
                let fits = set
                    .members
                    .iter()
                    .all(|w| w.eval(n) <= bounds[w.descriptor()]);
                if fits {
                    return check_bai_witness(family, &FinSeq::basis(n)?, set, &eps_map, bounds);
                }
            }
            None => {
                let total: Q = set.members.iter().map(|w| w.eval(n)).sum();
                if best.as_ref().is_none_or(|(_, t)| total < *t) {
                    best = Some((n, total));
                }
            }
        }
    }
    match best {
        Some((n, _)) => {
            let observed = set
                .members
                .iter()
                .map(|w| (w.descriptor().to_string(), w.eval(n)))
                .collect();
            check_bai_witness(family, &FinSeq::basis(n)?, set, &eps_map, &observed)
        }
        None => Err(Error::Refusal(format!(
            "no single e_n with n <= {limit} meets the tolerance and bounds for every weight"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LbaiRecord {
    pub test: Vec<FinSeq>,
    #[serde(with = "crate::rational::serde_q")]
    pub eps: Q,
    pub b: FinSeq,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub defects: Vec<Q>,
    #[serde(with = "crate::rational::serde_q")]
    pub norm: Q,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LbaiLevel {
    pub weight: String,
    #[serde(with = "crate::rational::serde_q")]
    pub bound: Q,
    pub records: Vec<LbaiRecord>,
}

/// Per-weight constants `C_p` with one witness per requested `(F, eps)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LbaiCertificate {
    pub horizon: usize,
    pub levels: Vec<LbaiLevel>,
    pub passed: bool,
}

impl LbaiCertificate {
    /// Re-runs every recorded check from the stored fields.
    pub fn recheck(&self, set: &KotheSet) -> Result<bool> {
        for level in &self.levels {
            let w = set
                .find(&level.weight)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown weight {}", level.weight)))?;
            for r in &level.records {
                if !check_lbai_witness(&r.test, &r.b, w, &r.eps, &level.bound)?.passed {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds the certificate for the counterexample weights `p^(1..=kmax)` with
/// `C_k = k + 1`, one exact (`eps = 0`) witness per test family.
pub fn cex_lbai_certificate(kmax: usize, families: &[Vec<FinSeq>], horizon: usize) -> Result<LbaiCertificate> {
    let levels = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let mut records = Vec::with_capacity(families.len());
            for f in families {
                let el = construct_lbai_element(f, k)?;
                records.push(LbaiRecord {
                    test: f.clone(),
                    eps: Q::zero(),
                    b: el.b,
                    defects: el.check.ai.defects,
                    norm: el.check.norm,
                    passed: el.check.passed,
                });
            }
            Ok(LbaiLevel {
                weight: cex_weight(k)?.descriptor().to_string(),
                bound: Q::from_integer((k + 1).into()),
                records,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = levels.iter().all(|l| l.records.iter().all(|r| r.passed));
    Ok(LbaiCertificate { horizon, levels, passed })
}

/// Bounded-witness certificate: one `b` per test family satisfying every
/// bound in `C_family`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaiCertificate {
    pub bounds: BTreeMap<String, String>,
    pub records: Vec<BaiCheck>,
    pub passed: bool,
}

impl BaiCertificate {
    pub fn new(bounds: &BTreeMap<String, Q>, records: Vec<BaiCheck>) -> Self {
        let passed = records.iter().all(|r| r.passed);
        Self {
            bounds: bounds.iter().map(|(k, v)| (k.clone(), format_q(v))).collect(),
            records,
            passed,
        }
    }
}

/// `a = Σ_{i≤m} r^i e_i`.
pub fn geometric_truncation(ratio: &Q, m: usize) -> FinSeq {
    let mut c = ratio.clone();
    let mut pairs = Vec::with_capacity(m);
    for i in 1..=m {
        pairs.push((i, c.clone()));
        c *= ratio;
    }
    FinSeq::from_pairs(pairs).expect("indices start at 1")
}

/// Exact defects `‖a − a e_n‖_p` for `n = 1..=n_max`.
pub fn truncation_sweep(a: &FinSeq, p: &Weight, n_max: usize) -> Vec<(usize, Q)> {
    (1..=n_max)
        .map(|n| (n, ai_defect(a, &FinSeq::basis(n).expect("n >= 1"), p)))
        .collect()
}
