//! Basis pursuit and the Monte-Carlo recovery harness.
//!
//! `min ‖x‖₁ s.t. Φx = y` is solved as the linear program
//! `min Σ(u+v) s.t. Φ(u−v) = y, u, v ≥ 0` with a two-phase revised primal
//! simplex. Pricing is Dantzig's largest-coefficient rule; after a run of
//! degenerate pivots the solver switches to Bland's rule, which cannot
//! cycle, and switches back once the objective moves again.

use std::borrow::Cow;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{MascError, Result};
use crate::linalg::{Entries, RealMatrix};
use crate::masc::ExtremePoint;
use crate::rng::{sparse_signal, stream};
use crate::support::SupportSet;

/// Pivot and reduced-cost tolerance.
pub const PIVOT_TOL: f64 = 1e-9;
/// Default ℓ2 success threshold of a recovery trial.
pub const DEFAULT_SUCCESS_TOL: f64 = 1e-6;

const DEGENERATE_RUN: usize = 50;

/// Measurement matrix and observation `y = Φx̄`.
#[derive(Clone, Debug)]
pub struct RecoveryProblem {
    measurement: RealMatrix,
    observed: Vec<f64>,
}

impl RecoveryProblem {
    pub fn new(measurement: &RealMatrix, observed: Vec<f64>) -> Result<Self> {
        if observed.len() != measurement.rows() {
            return Err(MascError::input(format!(
                "observation has length {}, matrix has {} rows",
                observed.len(),
                measurement.rows()
            )));
        }
        if observed.iter().any(|v| !v.is_finite()) {
            return Err(MascError::input("non-finite observation"));
        }
        Ok(RecoveryProblem { measurement: measurement.to_float_mode(), observed })
    }

    /// The problem whose observation is `Φx̄`.
    pub fn from_signal(measurement: &RealMatrix, x_bar: &[f64]) -> Result<Self> {
        check_signal(measurement, x_bar)?;
        let phi = measurement.to_float_mode();
        let y = phi.mul_vec_f64(x_bar);
        Ok(RecoveryProblem { measurement: phi, observed: y })
    }

    pub fn measurement(&self) -> &RealMatrix {
        &self.measurement
    }

    pub fn observed(&self) -> &[f64] {
        &self.observed
    }
}

fn check_signal(phi: &RealMatrix, x: &[f64]) -> Result<()> {
    if x.len() != phi.cols() {
        return Err(MascError::input(format!("signal has length {}, matrix has {} columns", x.len(), phi.cols())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(MascError::input("non-finite signal entry"));
    }
    Ok(())
}

fn dense(phi: &RealMatrix) -> Cow<'_, [f64]> {
    match phi.entries() {
        Entries::Float(v) => Cow::Borrowed(v),
        Entries::Exact(_) => Cow::Owned(phi.to_f64()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    /// Optimal, but some nonbasic column has zero reduced cost, so other
    /// optimal vertices may exist.
    PossiblyNonUnique,
}

#[derive(Clone, Debug)]
pub struct BpSolution {
    pub x: Vec<f64>,
    pub status: LpStatus,
    pub pivots: usize,
}

pub fn basis_pursuit(p: &RecoveryProblem) -> Result<BpSolution> {
    let phi = &p.measurement;
    solve_bp(phi.rows(), phi.cols(), &dense(phi), &p.observed)
}

/// Revised simplex over the split-variable problem. Column `j < n` is `u_j`,
/// `n ≤ j < 2n` is `v_{j−n}`, and `2n + i` is the artificial of row `i`.
/// The basis inverse is kept explicitly, updated by rank-one eta steps and
/// rebuilt from the original data every `REINVERT` pivots; the basic
/// solution is always recomputed as `B⁻¹y`, so tableau drift never builds up.
struct Simplex<'a> {
    n: usize,
    phi: &'a [f64],
    /// Active original rows; redundant ones are dropped after phase 1.
    rows: Vec<usize>,
    /// Row signs making `y ≥ 0`.
    sign: Vec<f64>,
    y: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    since_reinvert: usize,
    pivots: usize,
}

const REINVERT: usize = 32;

impl Simplex<'_> {
    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Column `j` restricted to the active rows.
    fn column(&self, j: usize) -> Vec<f64> {
        let n = self.n;
        self.rows
            .iter()
            .map(|&i| {
                if j < n {
                    self.sign[i] * self.phi[i * n + j]
                } else if j < 2 * n {
                    -self.sign[i] * self.phi[i * n + j - n]
                } else if j - 2 * n == i {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn rhs(&self) -> Vec<f64> {
        self.rows.iter().map(|&i| self.sign[i] * self.y[i]).collect()
    }

    /// Rebuilds `B⁻¹` by Gauss–Jordan elimination with partial pivoting.
    fn reinvert(&mut self) -> Result<()> {
        let m = self.m();
        let cols: Vec<Vec<f64>> = self.basis.iter().map(|&j| self.column(j)).collect();
        let mut a = vec![0.0; m * m];
        for (c, col) in cols.iter().enumerate() {
            for r in 0..m {
                a[r * m + c] = col[r];
            }
        }
        let mut inv = vec![0.0; m * m];
        (0..m).for_each(|i| inv[i * m + i] = 1.0);
        for c in 0..m {
            let p = (c..m).max_by(|&x, &y| a[x * m + c].abs().total_cmp(&a[y * m + c].abs())).unwrap_or(c);
            if a[p * m + c].abs() < 1e-13 {
                return Err(MascError::Numerical("basis matrix became singular".into()));
            }
            if p != c {
                for j in 0..m {
                    a.swap(p * m + j, c * m + j);
                    inv.swap(p * m + j, c * m + j);
                }
            }
            let piv = a[c * m + c];
            for j in 0..m {
                a[c * m + j] /= piv;
                inv[c * m + j] /= piv;
            }
            for r in 0..m {
                let f = a[r * m + c];
                if r != c && f != 0.0 {
                    for j in 0..m {
                        a[r * m + j] -= f * a[c * m + j];
                        inv[r * m + j] -= f * inv[c * m + j];
                    }
                }
            }
        }
        self.binv = inv;
        self.since_reinvert = 0;
        Ok(())
    }

    fn solve(&self, v: &[f64]) -> Vec<f64> {
        let m = self.m();
        (0..m).map(|r| (0..m).map(|k| self.binv[r * m + k] * v[k]).sum()).collect()
    }

    /// `cᵀB⁻¹`.
    fn solve_transposed(&self, c: &[f64]) -> Vec<f64> {
        let m = self.m();
        let mut out = vec![0.0; m];
        for (r, &cr) in c.iter().enumerate() {
            if cr != 0.0 {
                for k in 0..m {
                    out[k] += cr * self.binv[r * m + k];
                }
            }
        }
        out
    }

    fn pivot(&mut self, r: usize, q: usize, d: &[f64]) -> Result<()> {
        self.basis[r] = q;
        self.pivots += 1;
        self.since_reinvert += 1;
        if self.since_reinvert >= REINVERT {
            return self.reinvert();
        }
        let m = self.m();
        let piv = d[r];
        let prow: Vec<f64> = (0..m).map(|k| self.binv[r * m + k] / piv).collect();
        for i in 0..m {
            let f = d[i];
            if i != r && f != 0.0 {
                for k in 0..m {
                    self.binv[i * m + k] -= f * prow[k];
                }
            }
        }
        self.binv[r * m..(r + 1) * m].copy_from_slice(&prow);
        Ok(())
    }

    /// Two-pass Harris ratio test: the step is bounded with a small
    /// feasibility slack, then the largest pivot within that step leaves.
    /// Preferring large pivots keeps `B⁻¹` well conditioned. In Bland mode
    /// the slack is zero and ties go to the lowest basic index.
    fn harris_ratio(&self, x_b: &[f64], dir: &[f64], bland: bool) -> Option<(usize, f64)> {
        let scale = dir.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let tol = PIVOT_TOL * scale;
        let slack = if bland { 0.0 } else { 1e-9 };
        let theta = (0..dir.len())
            .filter(|&r| dir[r] > tol)
            .map(|r| (x_b[r].max(0.0) + slack) / dir[r])
            .min_by(f64::total_cmp)?;
        let eligible = (0..dir.len()).filter(|&r| dir[r] > tol && x_b[r].max(0.0) / dir[r] <= theta);
        let r = if bland {
            eligible.min_by_key(|&r| self.basis[r])?
        } else {
            eligible.max_by(|&a, &b| dir[a].total_cmp(&dir[b]))?
        };
        Some((r, x_b[r].max(0.0) / dir[r]))
    }

    /// Reduced costs of the structural columns for costs `c_B` on the basis
    /// and `cost` on every structural column.
    fn reduced_costs(&self, cost: f64, c_b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let pi = self.solve_transposed(c_b);
        let mut g = vec![0.0; n];
        for (k, &i) in self.rows.iter().enumerate() {
            let w = pi[k] * self.sign[i];
            if w != 0.0 {
                for j in 0..n {
                    g[j] += w * self.phi[i * n + j];
                }
            }
        }
        let mut d = vec![0.0; 2 * n];
        for j in 0..n {
            d[j] = cost - g[j];
            d[n + j] = cost + g[j];
        }
        d
    }

    /// Runs pivots until no structural column prices out; `artificial_cost`
    /// selects phase 1 (cost on artificials) or phase 2 (cost on structurals).
    fn optimize(&mut self, phase_one: bool, max_iter: usize) -> Result<Vec<f64>> {
        let n = self.n;
        let feasible_tol = 1e-12 * (1.0 + self.rhs().iter().sum::<f64>());
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            let c_b: Vec<f64> = self.basis.iter().map(|&j| if (j >= 2 * n) == phase_one { 1.0 } else { 0.0 }).collect();
            let d = self.reduced_costs(if phase_one { 0.0 } else { 1.0 }, &c_b);
            let bland = degenerate >= DEGENERATE_RUN;
            let candidates = (0..2 * n).filter(|&j| d[j] < -PIVOT_TOL);
            let entering = if bland { candidates.min() } else { candidates.min_by(|&a, &b| d[a].total_cmp(&d[b])) };
            let Some(q) = entering else {
                return Ok(d);
            };
            let x_b = self.solve(&self.rhs());
            if phase_one && x_b.iter().zip(&c_b).map(|(x, c)| x * c).sum::<f64>() <= feasible_tol {
                return Ok(d);
            }
            let dir = self.solve(&self.column(q));
            let Some((r, ratio)) = self.harris_ratio(&x_b, &dir, bland) else {
                // a bounded LP has no ray; blame the factorization and retry once
                if self.since_reinvert > 0 {
                    self.reinvert()?;
                    continue;
                }
                return Err(MascError::Numerical("basis pursuit LP reported unbounded".into()));
            };
            degenerate = if ratio <= 1e-12 { degenerate + 1 } else { 0 };
            self.pivot(r, q, &dir)?;
        }
        Err(MascError::Numerical(format!("simplex did not converge within {max_iter} pivots")))
    }
}

fn solve_bp(m: usize, n: usize, phi: &[f64], y: &[f64]) -> Result<BpSolution> {
    let sign: Vec<f64> = y.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut lp = Simplex {
        n,
        phi,
        rows: (0..m).collect(),
        sign,
        y: y.to_vec(),
        basis: (2 * n..2 * n + m).collect(),
        binv: Vec::new(),
        since_reinvert: 0,
        pivots: 0,
    };
    lp.reinvert()?;
    let max_iter = 20 * (m + 2 * n) + 1000;
    lp.optimize(true, max_iter)?;

    let y_scale = 1.0 + y.iter().map(|v| v.abs()).sum::<f64>();
    let x_b = lp.solve(&lp.rhs());
    let infeas: f64 = lp.basis.iter().zip(&x_b).filter(|(j, _)| **j >= 2 * n).map(|(_, v)| v.abs()).sum();
    if infeas > 1e-9 * y_scale {
        return Err(MascError::Infeasible { residual: infeas });
    }
    // drive remaining artificials out of the basis, or drop their rows
    while let Some(r) = lp.basis.iter().position(|&j| j >= 2 * n) {
        let mut unit = vec![0.0; lp.m()];
        unit[r] = 1.0;
        let rho = lp.solve_transposed(&unit);
        let best = (0..2 * n)
            .filter(|j| !lp.basis.contains(j))
            .map(|j| (j, lp.column(j).iter().zip(&rho).map(|(a, b)| a * b).sum::<f64>()))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()));
        match best {
            Some((j, v)) if v.abs() > PIVOT_TOL => {
                let dir = lp.solve(&lp.column(j));
                lp.pivot(r, j, &dir)?;
            }
            _ => {
                let row = lp.basis[r] - 2 * n;
                lp.basis.remove(r);
                lp.rows.retain(|&i| i != row);
                lp.reinvert()?;
            }
        }
    }

    let d = lp.optimize(false, max_iter)?;
    let x_b = if lp.m() > 0 { lp.solve(&lp.rhs()) } else { Vec::new() };
    let status = if (0..2 * n).any(|j| !lp.basis.contains(&j) && d[j].abs() < PIVOT_TOL) {
        LpStatus::PossiblyNonUnique
    } else {
        LpStatus::Optimal
    };
    let mut x = vec![0.0; n];
    for (&j, v) in lp.basis.iter().zip(x_b) {
        if j < n {
            x[j] += v;
        } else {
            x[j - n] -= v;
        }
    }
    Ok(BpSolution { x, status, pivots: lp.pivots })
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Solves basis pursuit for `y = Φx̄` and reports whether `x̄` came back
/// within `tol` in ℓ2.
pub fn recovery_trial(phi: &RealMatrix, x_bar: &[f64], tol: f64) -> Result<bool> {
    check_signal(phi, x_bar)?;
    let data = dense(phi);
    Ok(trial_on(phi.rows(), phi.cols(), &data, x_bar, tol)?.0)
}

fn trial_on(m: usize, n: usize, phi: &[f64], x_bar: &[f64], tol: f64) -> Result<(bool, BpSolution)> {
    let y: Vec<f64> = (0..m).map(|i| (0..n).map(|j| phi[i * n + j] * x_bar[j]).sum()).collect();
    let sol = solve_bp(m, n, phi, &y)?;
    Ok((l2_dist(&sol.x, x_bar) <= tol, sol))
}

/// Sparsity, trial count, seed and success threshold of a Monte-Carlo run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialConfig {
    pub sparsity: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

impl TrialConfig {
    pub fn new(sparsity: usize, trials: u64, seed: u64) -> Self {
        TrialConfig { sparsity, trials, seed, tol: DEFAULT_SUCCESS_TOL }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.sparsity == 0 || self.sparsity > n {
            return Err(MascError::input(format!("sparsity {} outside 1..={n}", self.sparsity)));
        }
        if !(self.tol > 0.0) {
            return Err(MascError::input("success tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateResult {
    pub successes: u64,
    pub trials: u64,
}

impl RateResult {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.successes as f64 / self.trials as f64
    }
}

/// Fraction of random unit-norm `s`-sparse signals recovered. Trial `t` draws
/// from stream `(seed, t)`, so the result does not depend on scheduling.
pub fn recovery_rate(phi: &RealMatrix, cfg: &TrialConfig) -> Result<RateResult> {
    let n = phi.cols();
    cfg.validate(n)?;
    let data = dense(phi);
    let m = phi.rows();
    let ok = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let x = sparse_signal(&mut stream(cfg.seed, t), n, cfg.sparsity);
            trial_on(m, n, &data, &x, cfg.tol).map(|r| r.0)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(RateResult { successes: ok.iter().filter(|&&b| b).count() as u64, trials: cfg.trials })
}

/// Naive upper bound on the maximal recoverable sparsity level: starting at
/// `n`, lower `s` until all `k` random `s`-sparse signals are recovered.
/// Sample `j` at level `s` uses stream `(seed, (s << 32) | j)`.
pub fn mrsl_naive(phi: &RealMatrix, k: u64, seed: u64) -> Result<usize> {
    mrsl_naive_from(phi, k, seed, phi.cols())
}

/// As [`mrsl_naive`] but starting the descent at `start` instead of `n`.
/// Starting at `n` is the literal procedure; any start at or above the
/// true answer returns the same value.
pub fn mrsl_naive_from(phi: &RealMatrix, k: u64, seed: u64, start: usize) -> Result<usize> {
    if k == 0 {
        return Err(MascError::input("sampling size must be at least 1"));
    }
    let n = phi.cols();
    let data = dense(phi);
    let m = phi.rows();
    for s in (1..=start.min(n)).rev() {
        let failure = (0..k).into_par_iter().map(|j| {
            let x = sparse_signal(&mut stream(seed, ((s as u64) << 32) | j), n, s);
            trial_on(m, n, &data, &x, DEFAULT_SUCCESS_TOL).map(|r| r.0)
        });
        let failed = failure.find_any(|r| !matches!(r, Ok(true)));
        match failed {
            None => return Ok(s),
            Some(Err(e)) => return Err(e),
            Some(Ok(_)) => {}
        }
    }
    Ok(0)
}

/// A signal supported in `S` whose recovery must fail or tie, built from a
/// nullspace vector `z` with `‖z_S‖₁ ≥ ‖z_{Sᶜ}‖₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    /// Supported in `S`.
    pub x_bar: Vec<BigRational>,
    /// Same measurements as `x_bar`, no larger ℓ1 norm, different vector.
    pub x_alt: Vec<BigRational>,
}

impl Counterexample {
    pub fn x_bar_f64(&self) -> Vec<f64> {
        self.x_bar.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// `‖x_alt‖₁ == ‖x_bar‖₁` exactly, i.e. recovery is a tie at best.
    pub fn is_tie(&self) -> bool {
        let l1 = |v: &[BigRational]| v.iter().map(|q| q.abs()).sum::<BigRational>();
        l1(&self.x_alt) == l1(&self.x_bar)
    }
}

/// With `a = z` on `S` and `b = −z` off `S`, take `c = a` on `supp(a)` and
/// `1` on the rest of `S`. Then `x̄ = c + a` and `x' = c + b` share
/// measurements (they differ by `z`) and `‖x'‖₁ ≤ ‖x̄‖₁`.
pub fn witness_counterexample(z: &ExtremePoint, s: &SupportSet) -> Counterexample {
    let n = z.vector().len();
    let one = BigRational::from_integer(1.into());
    let mut x_bar = vec![BigRational::zero(); n];
    let mut x_alt = vec![BigRational::zero(); n];
    for i in 0..n {
        let zi = &z.vector()[i];
        if s.contains(i) {
            let c = if zi.is_zero() { one.clone() } else { zi.clone() };
            x_bar[i] = &c + zi;
            x_alt[i] = c;
        } else {
            x_alt[i] = -zi;
        }
    }
    Counterexample { x_bar, x_alt }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, e: &[i64]) -> RealMatrix {
        RealMatrix::from_integers(rows, cols, e).unwrap()
    }

    fn triangle() -> RealMatrix {
        mat(3, 3, &[1, 0, 1, -1, 1, 0, 0, -1, -1])
    }

    #[test]
    fn zero_observation_gives_zero() {
        let p = RecoveryProblem::new(&triangle(), vec![0.0; 3]).unwrap();
        let s = basis_pursuit(&p).unwrap();
        assert!(s.x.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn identity_returns_observation() {
        let id = mat(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let p = RecoveryProblem::new(&id, vec![0.5, -2.0, 3.0]).unwrap();
        let s = basis_pursuit(&p).unwrap();
        assert!(l2_dist(&s.x, &[0.5, -2.0, 3.0]) < 1e-12);
        assert_eq!(s.status, LpStatus::Optimal);
    }

    #[test]
    fn triangle_recovers_single_edge() {
        let mut x = vec![0.0; 3];
        x[0] = 0.8;
        let p = RecoveryProblem::from_signal(&triangle(), &x).unwrap();
        let s = basis_pursuit(&p).unwrap();
        assert!(l2_dist(&s.x, &x) < 1e-6, "{:?}", s.x);
        for i in 0..3 {
            for sign in [1.0, -1.0] {
                let mut x = vec![0.0; 3];
                x[i] = sign;
                assert!(recovery_trial(&triangle(), &x, 1e-6).unwrap());
            }
        }
    }

    #[test]
    fn alternating_row_fails_some_one_sparse_signal() {
        let phi = mat(1, 3, &[1, -1, 1]);
        let mut failures = 0;
        for i in 0..3 {
            for sign in [1.0, -1.0] {
                let mut x = vec![0.0; 3];
                x[i] = sign;
                if !recovery_trial(&phi, &x, 1e-6).unwrap() {
                    failures += 1;
                }
            }
        }
        assert!(failures > 0);
    }

    #[test]
    fn inconsistent_observation_is_infeasible() {
        let phi = mat(2, 2, &[1, 1, 1, 1]);
        let p = RecoveryProblem::new(&phi, vec![1.0, 2.0]).unwrap();
        assert!(matches!(basis_pursuit(&p), Err(MascError::Infeasible { .. })));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // rows 2 and 3 repeat row 1
        let phi = mat(3, 4, &[1, 2, 0, 1, 1, 2, 0, 1, 2, 4, 0, 2]);
        let x = [0.0, 0.0, 0.0, 1.5];
        let p = RecoveryProblem::from_signal(&phi, &x).unwrap();
        let s = basis_pursuit(&p).unwrap();
        let y = phi.mul_vec_f64(&s.x);
        assert!(l2_dist(&y, p.observed()) < 1e-9);
        assert!(s.x.iter().map(|v| v.abs()).sum::<f64>() <= 1.5 + 1e-9);
    }

    #[test]
    fn rate_is_reproducible() {
        let cfg = TrialConfig::new(1, 40, 9);
        let a = recovery_rate(&triangle(), &cfg).unwrap();
        assert_eq!(a, recovery_rate(&triangle(), &cfg).unwrap());
        assert_eq!(a.rate(), 1.0);
        assert!(recovery_rate(&triangle(), &TrialConfig::new(0, 1, 0)).is_err());
    }

    #[test]
    fn naive_bound_on_identity_is_n() {
        let id = mat(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(mrsl_naive(&id, 10, 1).unwrap(), 3);
        assert!(mrsl_naive(&triangle(), 50, 1).unwrap() >= 1);
    }
}
