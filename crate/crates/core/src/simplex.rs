//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Solves `min cᵀx  s.t.  A x = b, x ≥ 0`. Artificial columns start as the
//! identity, so at termination they hold `B⁻¹` and the row duals are
//! `yᵀ = c_Bᵀ B⁻¹`.

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

pub(crate) struct StandardLp {
    pub a: Vec<Vec<Q>>,
    pub b: Vec<Q>,
    pub c: Vec<Q>,
}

#[derive(Debug)]
pub(crate) struct LpSolution {
    pub x: Vec<Q>,
    pub value: Q,
    /// One multiplier per equality row, for the rows as given (before any
    /// sign normalisation).
    pub duals: Vec<Q>,
    pub pivots: usize,
}

struct Tableau {
    m: usize,
    n: usize,
    /// `m` rows of `n + m` columns (structural, then artificial) plus rhs.
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Q {
        &self.rows[r][self.n + self.m]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let width = self.n + self.m + 1;
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (rr, row) in self.rows.iter_mut().enumerate() {
            if rr == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in 0..width {
                if !pivot_row[c].is_zero() {
                    row[c] -= &f * &pivot_row[c];
                }
            }
        }
        self.basis[r] = col;
        self.pivots += 1;
    }

    /// Minimises `cost` over columns `< allowed`, from the current basis.
    fn optimize(&mut self, cost: &[Q], allowed: usize) -> Result<()> {
        loop {
            // reduced costs d_j = c_j − Σ_r c_{B_r} T[r][j]
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for r in 0..self.m {
                    let t = &self.rows[r][j];
                    if !t.is_zero() {
                        d -= &cost[self.basis[r]] * t;
                    }
                }
                d.is_negative()
            });
            let Some(col) = entering else { return Ok(()) };

            let mut leave: Option<(usize, Q)> = None;
            for r in 0..self.m {
                let t = &self.rows[r][col];
                if !t.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / t;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else { return Err(Error::Unbounded) };
            self.pivot(r, col);
        }
    }
}

pub(crate) fn solve(lp: &StandardLp) -> Result<LpSolution> {
    let m = lp.b.len();
    let n = lp.c.len();
    assert!(lp.a.len() == m && lp.a.iter().all(|row| row.len() == n));

    // Flip rows so that b ≥ 0.
    let signs: Vec<bool> = lp.b.iter().map(|v| v.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    for (r, (coeffs, flip)) in lp.a.iter().zip(&signs).enumerate() {
        let signed = |v: &Q| if *flip { -v.clone() } else { v.clone() };
        let mut row: Vec<Q> = Vec::with_capacity(n + m + 1);
        row.extend(coeffs.iter().map(signed));
        row.extend((0..m).map(|rr| if rr == r { Q::from_integer(1.into()) } else { Q::zero() }));
        row.push(signed(&lp.b[r]));
        rows.push(row);
    }
    let mut t = Tableau { m, n, rows, basis: (n..n + m).collect(), pivots: 0 };

    // Phase 1: minimise the sum of artificials.
    let mut phase1 = vec![Q::zero(); n + m];
    for c in phase1.iter_mut().skip(n) {
        *c = Q::from_integer(1.into());
    }
    t.optimize(&phase1, n + m)?;
    if (0..m).any(|r| t.basis[r] >= n && t.rhs(r).is_positive()) {
        return Err(Error::Infeasible);
    }
    // Drive zero-level artificials out where a structural pivot exists; rows
    // with none are redundant and keep their artificial at 0.
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(col) = (0..n).find(|&j| !t.rows[r][j].is_zero() && !t.basis.contains(&j)) {
                t.pivot(r, col);
            }
        }
    }

    // Phase 2: artificials are barred from re-entering.
    let mut cost = lp.c.clone();
    cost.extend(std::iter::repeat_n(Q::zero(), m));
    t.optimize(&cost, n)?;

    let mut x = vec![Q::zero(); n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs(r).clone();
        }
    }
    let value: Q = x.iter().zip(&lp.c).map(|(xi, ci)| xi * ci).sum();
    let duals = (0..m)
        .map(|i| {
            let y: Q = (0..m).map(|r| &cost[t.basis[r]] * &t.rows[r][n + i]).sum();
            if signs[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    Ok(LpSolution { x, value, duals, pivots: t.pivots })
}
