//! Exact lower bounds for the norms of sequences satisfying the necessary
//! condition for a bounded approximate identity in the counterexample algebra.
//!
//! Any bounded b.a.i. would give a bounded sequence `x_n` whose support moves
//! off to infinity while its mass `w(x_n)` stays above some `δ > 0`. For a
//! support region (diagonals `i + j ≥ D`, or indices `n ≥ m`) and the weights
//! `p^(1..=K)`, the least possible value of `max_k ‖x‖_{p^(k)}` over `x` with
//! mass `δ` is the minimax linear program
//!
//! ```text
//! min t   s.t.   Σ_n p^(k)_n x_n ≤ t  (k = 1..K),   Σ_n x_n = δ,   x ≥ 0,
//! ```
//!
//! solved here exactly. Restricting to `x ≥ 0` loses nothing: `w` and every
//! `‖·‖_p` see only `|x_n|`. The optimum grows without bound as `D` and `K`
//! grow together, so no bound `M` is compatible with the condition.

use num::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cex::{cex_weight, phi, phi_inv, PHI_CONVENTION};
use crate::error::{Error, Result};
use crate::rational::{ceil_to_u64, format_q, Q};
use crate::seq::{weight_of, FinSeq};
use crate::simplex::{self, StandardLp};
use crate::weights::Weight;

pub const NONNEGATIVITY_NOTE: &str =
    "x >= 0 is lossless: mass and every weighted norm depend only on |x_n|";

/// Widening steps tried when the window is too narrow to certify the
/// optimum over the full support region.
const MAX_WIDENINGS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Window {
    /// Every coordinate on the anti-diagonals `from..=to`; region `i + j ≥ from`.
    Diagonals { from: usize, to: usize },
    /// Indices `from..=to`; region `n ≥ from`.
    IndexRange { from: usize, to: usize },
    /// A fixed coordinate set that is itself the whole region.
    Explicit { coordinates: Vec<usize> },
}

impl Window {
    pub fn coordinates(&self) -> Result<Vec<usize>> {
        match self {
            Window::Diagonals { from, to } => {
                if *from < 2 || to < from {
                    return Ok(Vec::new());
                }
                let first = phi(1, from - 1)?;
                let last = phi(to - 1, 1)?;
                Ok((first..=last).collect())
            }
            Window::IndexRange { from, to } => Ok((*from.max(&1)..=*to).collect()),
            Window::Explicit { coordinates } => {
                let mut c = coordinates.clone();
                c.sort_unstable();
                c.dedup();
                Ok(c)
            }
        }
    }

    fn widened(&self) -> Option<Window> {
        match self {
            Window::Diagonals { from, to } => Some(Window::Diagonals { from: *from, to: to + 1 }),
            Window::IndexRange { from, to } => {
                let (i, j) = phi_inv(*to).ok()?;
                let end = phi(i + j, 1).ok()?;
                Some(Window::IndexRange { from: *from, to: end })
            }
            Window::Explicit { .. } => None,
        }
    }
}

fn diagonal_of(n: usize) -> Result<usize> {
    phi_inv(n).map(|(i, j)| i + j)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundInstance {
    #[serde(with = "crate::rational::serde_q")]
    pub delta: Q,
    pub start_diagonal: usize,
    pub kmax: usize,
    pub window: Window,
}

impl LowerBoundInstance {
    pub fn new(delta: Q, start_diagonal: usize, kmax: usize, window: Window) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::InvalidArgument(format!("delta must be > 0, got {}", format_q(&delta))));
        }
        if kmax == 0 {
            return Err(Error::InvalidArgument("kmax must be >= 1".into()));
        }
        if start_diagonal < 2 {
            return Err(Error::InvalidArgument("start diagonal must be >= 2".into()));
        }
        let coords = window.coordinates()?;
        if coords.is_empty() {
            return Err(Error::EmptyWindow);
        }
        for &n in &coords {
            if n == 0 || diagonal_of(n)? < start_diagonal {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {n} lies below diagonal {start_diagonal}"
                )));
            }
        }
        Ok(Self { delta, start_diagonal, kmax, window })
    }

    /// Full anti-diagonals `d..=dmax`.
    pub fn diagonals(delta: Q, d: usize, dmax: usize, kmax: usize) -> Result<Self> {
        Self::new(delta, d, kmax, Window::Diagonals { from: d, to: dmax })
    }

    /// Indices `m..=mmax`; the start diagonal is that of `m`.
    pub fn index_range(delta: Q, m: usize, mmax: usize, kmax: usize) -> Result<Self> {
        let d = diagonal_of(m.max(1))?;
        Self::new(delta, d, kmax, Window::IndexRange { from: m, to: mmax })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub nonnegative: bool,
    pub inside_window: bool,
    pub mass_is_delta: bool,
    pub value_attained: bool,
    pub duals_feasible: bool,
    pub strong_duality: bool,
    /// `L ≥ δ · min_n max_k p^(k)_n` by enumeration over the window.
    pub enumeration_bound_holds: bool,
    #[serde(with = "crate::rational::serde_q")]
    pub enumeration_bound: Q,
    /// Omitted coordinates of the region cannot improve on `L`.
    pub region_covered: bool,
}

impl Verification {
    pub fn all(&self) -> bool {
        self.nonnegative
            && self.inside_window
            && self.mass_is_delta
            && self.value_attained
            && self.duals_feasible
            && self.strong_duality
            && self.enumeration_bound_holds
            && self.region_covered
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBoundCertificate {
    pub instance: LowerBoundInstance,
    /// The window actually solved (wider than requested if widening was
    /// needed).
    pub solved_window: Window,
    pub columns: usize,
    pub pivots: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
    pub optimizer: FinSeq,
    /// `‖x*‖_{p^(k)}` for `k = 1..=K`.
    #[serde(with = "crate::rational::serde_q_vec")]
    pub norms: Vec<Q>,
    /// `k` with `‖x*‖_{p^(k)} = L`.
    pub active_weights: Vec<usize>,
    /// Convex weights `y_k ≥ 0` on the norm constraints.
    #[serde(with = "crate::rational::serde_q_vec")]
    pub dual_weights: Vec<Q>,
    /// Multiplier `z` of the mass constraint; `L = δ z`.
    #[serde(with = "crate::rational::serde_q")]
    pub dual_mass: Q,
    #[serde(with = "crate::rational::serde_q_opt")]
    pub closed_form: Option<Q>,
    pub matches_closed_form: Option<bool>,
    pub verification: Verification,
    pub certified: bool,
    pub phi_convention: &'static str,
    pub note: &'static str,
}

/// `δ · min(K+1, D−1)`: the minimax over the region `i + j ≥ D`.
///
/// Lower bound: `max_k ⟨p^(k), x⟩ ≥ ⟨p^(K), x⟩ ≥ δ · min_{i+j≥D} α^(K)_{ij}`
/// and that minimum is `min(K+1, D−1)`. Upper bound: all mass at
/// `(K+1, max(1, D−K−1))` costs `K+1` under every `k ≤ K`, all mass at
/// `(1, D−1)` costs `D−1`.
pub fn closed_form_bound(delta: &Q, d: usize, kmax: usize) -> Result<Q> {
    if d < 3 {
        return Err(Error::InvalidArgument("closed form needs D >= 3".into()));
    }
    if kmax == 0 {
        return Err(Error::InvalidArgument("K must be >= 1".into()));
    }
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be > 0".into()));
    }
    Ok(delta * Q::from_integer((kmax + 1).min(d - 1).into()))
}

struct Solved {
    window: Window,
    coords: Vec<usize>,
    costs: Vec<Vec<Q>>,
    x: Vec<Q>,
    value: Q,
    y: Vec<Q>,
    z: Q,
    pivots: usize,
}

fn solve_window(instance: &LowerBoundInstance, window: &Window, weights: &[Weight]) -> Result<Solved> {
    let coords = window.coordinates()?;
    if coords.is_empty() {
        return Err(Error::EmptyWindow);
    }
    let kk = weights.len();
    let nn = coords.len();
    let costs: Vec<Vec<Q>> = weights
        .iter()
        .map(|w| coords.iter().map(|&n| w.eval(n)).collect())
        .collect();

    // Columns: x_1..x_N, t, s_1..s_K.
    let width = nn + 1 + kk;
    let mut a = Vec::with_capacity(kk + 1);
    for (k, row_costs) in costs.iter().enumerate() {
        let mut row = vec![Q::zero(); width];
        row[..nn].clone_from_slice(row_costs);
        row[nn] = -Q::one();
        row[nn + 1 + k] = Q::one();
        a.push(row);
    }
    let mut mass = vec![Q::zero(); width];
    for v in mass.iter_mut().take(nn) {
        *v = Q::one();
    }
    a.push(mass);
    let mut b = vec![Q::zero(); kk];
    b.push(instance.delta.clone());
    let mut c = vec![Q::zero(); width];
    c[nn] = Q::one();

    let sol = simplex::solve(&StandardLp { a, b, c })?;
    let y = sol.duals[..kk].iter().map(|u| -u).collect();
    let z = sol.duals[kk].clone();
    Ok(Solved {
        window: window.clone(),
        coords,
        costs,
        x: sol.x[..nn].to_vec(),
        value: sol.value,
        y,
        z,
        pivots: sol.pivots,
    })
}

/// Dual cost `Σ_k y_k p^(k)_n`.
fn dual_cost(y: &[Q], weights: &[Weight], n: usize) -> Q {
    y.iter().zip(weights).map(|(yk, w)| yk * w.eval(n)).sum()
}

/// Checks that every coordinate of the region outside the window has dual
/// cost at least `z`, which makes `(y, z)` dual feasible for the whole region.
///
/// For fixed row `i` the omitted coordinates form a tail `j ≥ j0(i)` and the
/// dual cost is nondecreasing in `j`, so only `(i, j0(i))` needs checking.
/// For `i > K` every `α^(k)_{ij} = i`, so the dual cost is `i·Σy`, which
/// settles all rows past `max(K+1, z/Σy)`.
fn region_covered(window: &Window, y: &[Q], z: &Q, weights: &[Weight]) -> Result<bool> {
    if !z.is_positive() {
        return Ok(true);
    }
    let ysum: Q = y.iter().sum();
    if !ysum.is_positive() {
        return Ok(false);
    }
    let row_limit = (weights.len() + 1).max(ceil_to_u64(&(z / &ysum)).unwrap_or(u64::MAX) as usize);
    let first_omitted = |i: usize| -> Result<usize> {
        match window {
            Window::Diagonals { to, .. } => Ok((to + 1).saturating_sub(i).max(1)),
            Window::IndexRange { to, .. } => {
                let dt = diagonal_of((*to).max(1))?;
                let mut j = dt.saturating_sub(i).max(1);
                while phi(i, j)? <= *to {
                    j += 1;
                }
                Ok(j)
            }
            Window::Explicit { .. } => unreachable!(),
        }
    };
    match window {
        Window::Explicit { .. } => Ok(true),
        _ => {
            for i in 1..=row_limit {
                let n = phi(i, first_omitted(i)?)?;
                if dual_cost(y, weights, n) < *z {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn verify(instance: &LowerBoundInstance, s: &Solved, weights: &[Weight]) -> Result<Verification> {
    let zero = Q::zero();
    let nonnegative = s.x.iter().all(|v| *v >= zero);
    let optimizer = optimizer_seq(s)?;
    let coords = &s.coords;
    let inside_window = optimizer.iter().all(|(n, _)| coords.binary_search(&n).is_ok());
    let mass_is_delta = weight_of(&optimizer) == instance.delta;
    let norms = norms_of(&optimizer, weights);
    let value_attained = norms.iter().max() == Some(&s.value);

    let ysum: Q = s.y.iter().sum();
    let per_column_ok = (0..coords.len()).all(|c| {
        let cost: Q = s.y.iter().zip(&s.costs).map(|(yk, row)| yk * &row[c]).sum();
        cost >= s.z
    });
    let duals_feasible = s.y.iter().all(|v| *v >= zero) && ysum <= Q::one() && per_column_ok;
    let strong_duality = &instance.delta * &s.z == s.value;

    let enumeration_bound = &instance.delta
        * (0..coords.len())
            .map(|c| s.costs.iter().map(|row| row[c].clone()).max().expect("K >= 1"))
            .min()
            .expect("window nonempty");
    let enumeration_bound_holds = s.value >= enumeration_bound;
    let region_covered = region_covered(&s.window, &s.y, &s.z, weights)?;

    Ok(Verification {
        nonnegative,
        inside_window,
        mass_is_delta,
        value_attained,
        duals_feasible,
        strong_duality,
        enumeration_bound_holds,
        enumeration_bound,
        region_covered,
    })
}

fn optimizer_seq(s: &Solved) -> Result<FinSeq> {
    FinSeq::from_pairs(s.coords.iter().copied().zip(s.x.iter().cloned()))
}

fn norms_of(x: &FinSeq, weights: &[Weight]) -> Vec<Q> {
    weights.iter().map(|w| crate::weights::seminorm(x, w)).collect()
}

/// Solves the minimax program exactly and certifies the optimum with the
/// dual multipliers. The window is widened while omitted coordinates could
/// still undercut the reported value.
pub fn solve_minimax(instance: &LowerBoundInstance) -> Result<LowerBoundCertificate> {
    let weights: Vec<Weight> = (1..=instance.kmax)
        .map(cex_weight)
        .collect::<Result<Vec<_>>>()?;
    let mut window = instance.window.clone();
    let mut widenings = 0;
    let (solved, verification) = loop {
        let s = solve_window(instance, &window, &weights)?;
        let v = verify(instance, &s, &weights)?;
        if v.region_covered || widenings >= MAX_WIDENINGS {
            break (s, v);
        }
        match window.widened() {
            Some(w) => window = w,
            None => break (s, v),
        }
        widenings += 1;
    };

    let optimizer = optimizer_seq(&solved)?;
    let norms = norms_of(&optimizer, &weights);
    let active_weights = norms
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == solved.value)
        .map(|(k, _)| k + 1)
        .collect();
    let closed_form = match instance.window {
        Window::Diagonals { from, .. } if from >= 3 => {
            Some(closed_form_bound(&instance.delta, from, instance.kmax)?)
        }
        _ => None,
    };
    let matches_closed_form = closed_form.as_ref().map(|c| *c == solved.value);
    let certified = verification.all();
    Ok(LowerBoundCertificate {
        instance: instance.clone(),
        solved_window: solved.window.clone(),
        columns: solved.coords.len(),
        pivots: solved.pivots,
        value: solved.value.clone(),
        optimizer,
        norms,
        active_weights,
        dual_weights: solved.y.clone(),
        dual_mass: solved.z.clone(),
        closed_form,
        matches_closed_form,
        verification,
        certified,
        phi_convention: PHI_CONVENTION,
        note: NONNEGATIVITY_NOTE,
    })
}

/// How many weights enter the program at start diagonal `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "k")]
pub enum KRule {
    /// `K = D`.
    Diagonal,
    Const(usize),
}

impl KRule {
    pub fn apply(&self, d: usize) -> usize {
        match self {
            KRule::Diagonal => d,
            KRule::Const(k) => *k,
        }
    }

    /// `D` or `const:K`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "D" {
            return Ok(KRule::Diagonal);
        }
        let k = s
            .strip_prefix("const:")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::Parse(format!("K rule {s:?}: expected D or const:<K>")))?;
        Ok(KRule::Const(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub diagonal: usize,
    pub kmax: usize,
    #[serde(with = "crate::rational::serde_q")]
    pub value: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub closed_form: Q,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCertificate {
    #[serde(with = "crate::rational::serde_q")]
    pub delta: Q,
    pub k_rule: KRule,
    /// Each window spans diagonals `D..=D + span`.
    pub span: usize,
    pub rows: Vec<GrowthRow>,
    pub nondecreasing: bool,
    pub strictly_increasing: bool,
    pub meets_closed_form: bool,
    pub all_certified: bool,
    pub passed: bool,
    /// No sequence with mass `≥ δ` beyond the last diagonal has all norms
    /// below this value.
    #[serde(with = "crate::rational::serde_q")]
    pub sup_lower_bound: Q,
    pub phi_convention: &'static str,
}

/// Solves the program for every `D` in `diagonals` (in parallel) and checks
/// that `L(D)` is nondecreasing and at least `δ·min(K(D)+1, D−1)`.
pub fn growth_certificate(delta: &Q, diagonals: &[usize], rule: KRule, span: usize) -> Result<GrowthCertificate> {
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be > 0".into()));
    }
    if diagonals.is_empty() || diagonals.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("diagonal list must be nonempty and increasing".into()));
    }
    let rows = diagonals
        .par_iter()
        .map(|&d| {
            let k = rule.apply(d);
            let inst = LowerBoundInstance::diagonals(delta.clone(), d, d + span, k)?;
            let cert = solve_minimax(&inst)?;
            Ok(GrowthRow {
                diagonal: d,
                kmax: k,
                value: cert.value,
                closed_form: closed_form_bound(delta, d, k)?,
                certified: cert.certified,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let nondecreasing = rows.windows(2).all(|w| w[0].value <= w[1].value);
    let strictly_increasing = rows.windows(2).all(|w| w[0].value < w[1].value);
    let meets_closed_form = rows.iter().all(|r| r.value >= r.closed_form);
    let all_certified = rows.iter().all(|r| r.certified);
    let sup_lower_bound = rows.iter().map(|r| r.value.clone()).max().unwrap_or_else(Q::zero);
    Ok(GrowthCertificate {
        delta: delta.clone(),
        k_rule: rule,
        span,
        passed: nondecreasing && meets_closed_form && all_certified,
        rows,
        nondecreasing,
        strictly_increasing,
        meets_closed_form,
        all_certified,
        sup_lower_bound,
        phi_convention: PHI_CONVENTION,
    })
}
