//! Partial DFT matrices of prime order acting on real signals.
//!
//! For prime `n` every square minor of the DFT matrix is nonzero, so every
//! `Γ` with `|Γ| = |Ω|+1` carries exactly one nullspace direction `ν`, whose
//! entries have moduli `|det F_{Ω,Γ∖{k}}|`. A support `S` is recoverable iff
//! for every such `Γ` the weights on `S ∩ Γ` sum to less than those on
//! `Sᶜ ∩ Γ`. For contiguous symmetric `Ω = {0..m̄} ∪ {n−m̄..n−1}` the same
//! weights are proportional to `1/|f′_Γ(ξᵏ)|` and to `|f_{Γᶜ}(ξᵏ)|` with
//! `f_Γ(z) = ∏_{l∈Γ}(z − ξˡ)`, which are far cheaper to evaluate.
//!
//! Weights are handled in log space and rescaled to a maximum of 1, so large
//! minors and long products neither overflow nor underflow.

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{MascError, Result};
use crate::linalg::{unity_root, RealMatrix};
use crate::masc::{Margin, MembershipOracle, MembershipVerdict, Witness};
use crate::rng::{binomial, sample_subset, stream};
use crate::support::SupportSet;

/// Relative half-width of the band in which weight comparisons count as ties.
pub const TIE_BAND: f64 = 1e-9;
/// Default cap on the number of `Γ` sets visited exhaustively.
pub const DEFAULT_GAMMA_CAP: u64 = 1_000_000;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime dimension and conjugate-symmetric set of measured frequencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDftSpec {
    n: usize,
    omega: SupportSet,
    raw_omega: SupportSet,
    mbar: Option<usize>,
}

impl PartialDftSpec {
    /// The contiguous set `{0..m̄} ∪ {n−m̄..n−1}`.
    pub fn contiguous(n: usize, mbar: usize) -> Result<Self> {
        if mbar == 0 || 2 * mbar + 3 > n {
            return Err(MascError::input(format!("m̄ = {mbar} needs 1 ≤ m̄ ≤ (n−3)/2 for n = {n}")));
        }
        let omega: Vec<usize> = (0..=mbar).chain(n - mbar..n).collect();
        symmetrize_omega(n, &omega)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &SupportSet {
        &self.omega
    }

    /// The set as given, before symmetrization.
    pub fn raw_omega(&self) -> &SupportSet {
        &self.raw_omega
    }

    pub fn mbar(&self) -> Option<usize> {
        self.mbar
    }

    /// `|Ω| + 1`, the size of every minimal support.
    pub fn gamma_size(&self) -> usize {
        self.omega.len() + 1
    }

    /// No nonzero real signal is invisible to the measurements.
    pub fn is_trivial(&self) -> bool {
        self.omega.len() == self.n
    }

    /// Number of `Γ` sets.
    pub fn gamma_count(&self) -> BigUint {
        binomial(self.n, self.gamma_size())
    }

    /// Real matrix with the same real nullspace: one row `Re F_k` for `k = 0`
    /// and the pair `Re F_k`, `Im F_k` for each conjugate pair `{k, n−k}`,
    /// scaled by `1/√n`. It has exactly `|Ω|` independent rows.
    pub fn realified_matrix(&self) -> Result<RealMatrix> {
        let n = self.n;
        let scale = 1.0 / (n as f64).sqrt();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for &k in self.omega.indices().iter().filter(|&&k| 2 * k <= n) {
            let z: Vec<Complex64> = (0..n).map(|j| unity_root(n, k * j % n)).collect();
            rows.push(z.iter().map(|c| c.re * scale).collect());
            if k != 0 && 2 * k != n {
                rows.push(z.iter().map(|c| c.im * scale).collect());
            }
        }
        let m = rows.len();
        RealMatrix::from_f64(m, n, rows.concat())
    }
}

/// Closes `Ω` under `k ↦ n−k` and detects the contiguous shape.
pub fn symmetrize_omega(n: usize, raw: &[usize]) -> Result<PartialDftSpec> {
    if !is_prime(n) {
        return Err(MascError::input(format!("n = {n} is not prime")));
    }
    if raw.is_empty() {
        return Err(MascError::input("Ω must be non-empty"));
    }
    let raw_set: Vec<usize> = raw.iter().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let raw_omega = SupportSet::new(n, raw_set)?;
    let closed: std::collections::BTreeSet<usize> =
        raw_omega.indices().iter().flat_map(|&k| [k, (n - k) % n]).collect();
    let omega = SupportSet::new(n, closed)?;
    let q = omega.len();
    let mbar = (q % 2 == 1 && q >= 3 && q + 2 <= n)
        .then_some((q - 1) / 2)
        .filter(|&m| omega.indices().iter().copied().eq((0..=m).chain(n - m..n)));
    Ok(PartialDftSpec { n, omega, raw_omega, mbar })
}

/// `f_Γ(z) = ∏_{l∈Γ} (z − ξˡ)`.
pub fn f_gamma_at(n: usize, gamma: &SupportSet, z: Complex64) -> Complex64 {
    gamma.indices().iter().map(|&l| z - unity_root(n, l)).product()
}

/// `f_Γ(ξᵏ)`, evaluated directly.
pub fn f_gamma_eval(spec: &PartialDftSpec, gamma: &SupportSet, k: usize) -> Complex64 {
    f_gamma_at(spec.n, gamma, unity_root(spec.n, k))
}

/// How the per-`Γ` weights are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMethod {
    /// `|det F_{Ω,Γ∖{k}}|`; valid for any symmetric `Ω`.
    Determinant,
    /// `1/|f′_Γ(ξᵏ)|`; contiguous `Ω` only.
    FPrime,
    /// `|f_{Γᶜ}(ξᵏ)|`; contiguous `Ω` only.
    FComplement,
}

impl WeightMethod {
    /// The cheapest valid method for `spec`.
    pub fn default_for(spec: &PartialDftSpec) -> Self {
        if spec.mbar.is_some() {
            WeightMethod::FComplement
        } else {
            WeightMethod::Determinant
        }
    }
}

/// Positive weights of the indices of `Γ`, rescaled so the largest is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaWeights {
    pub gamma: SupportSet,
    /// `weights[t]` belongs to `gamma.indices()[t]`.
    pub weights: Vec<f64>,
}

impl GammaWeights {
    fn from_logs(gamma: SupportSet, logs: Vec<f64>) -> Result<Self> {
        if logs.iter().any(|l| !l.is_finite()) {
            return Err(MascError::Numerical(format!("degenerate weight on Γ = {gamma}")));
        }
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights = logs.iter().map(|l| (l - top).exp()).collect();
        Ok(GammaWeights { gamma, weights })
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `ln |ξᵃ − ξᵇ|` indexed by `(a − b) mod n`; entry 0 is `−∞`.
fn log_chord_table(n: usize) -> Vec<f64> {
    (0..n)
        .map(|d| {
            let d = d.min(n - d);
            (2.0 * (std::f64::consts::PI * d as f64 / n as f64).sin()).ln()
        })
        .collect()
}

/// `ln|det|` and the phase of the determinant, by LU with partial pivoting.
fn log_det(mut a: Vec<Complex64>, k: usize) -> Option<(f64, Complex64)> {
    let mut log_abs = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for c in 0..k {
        let p = (c..k).max_by(|&x, &y| a[x * k + c].norm().total_cmp(&a[y * k + c].norm()))?;
        let piv = a[p * k + c];
        if piv.norm() == 0.0 {
            return None;
        }
        if p != c {
            for j in 0..k {
                a.swap(p * k + j, c * k + j);
            }
            phase = -phase;
        }
        log_abs += piv.norm().ln();
        phase *= piv / piv.norm();
        for i in (c + 1)..k {
            let f = a[i * k + c] / piv;
            for j in (c + 1)..k {
                let t = a[c * k + j];
                a[i * k + j] -= f * t;
            }
        }
    }
    Some((log_abs, phase))
}

fn minor_entries(spec: &PartialDftSpec, cols: impl Iterator<Item = usize> + Clone) -> Vec<Complex64> {
    let n = spec.n;
    spec.omega.indices().iter().flat_map(|&r| cols.clone().map(move |c| unity_root(n, r * c % n))).collect()
}

/// Signed minors `(−1)^t det F_{Ω,Γ∖{Γ_t}}` as (log-modulus, phase) pairs.
fn signed_minors(spec: &PartialDftSpec, gamma: &SupportSet) -> Result<Vec<(f64, Complex64)>> {
    let g = gamma.indices();
    let q = spec.omega.len();
    (0..g.len())
        .map(|t| {
            let cols = g.iter().enumerate().filter(move |(s, _)| *s != t).map(|(_, &c)| c);
            let (l, ph) = log_det(minor_entries(spec, cols), q)
                .ok_or_else(|| MascError::Numerical(format!("singular minor on Γ = {gamma}")))?;
            Ok((l, if t % 2 == 1 { -ph } else { ph }))
        })
        .collect()
}

fn check_gamma(spec: &PartialDftSpec, gamma: &SupportSet) -> Result<()> {
    if gamma.ambient_dim() != spec.n || gamma.len() != spec.gamma_size() {
        return Err(MascError::input(format!("Γ must be a subset of 0..{} with {} elements", spec.n, spec.gamma_size())));
    }
    Ok(())
}

pub fn gamma_weights(spec: &PartialDftSpec, gamma: &SupportSet, method: WeightMethod) -> Result<GammaWeights> {
    check_gamma(spec, gamma)?;
    let table = log_chord_table(spec.n);
    gamma_weights_with(spec, gamma, method, &table)
}

fn gamma_weights_with(spec: &PartialDftSpec, gamma: &SupportSet, method: WeightMethod, table: &[f64]) -> Result<GammaWeights> {
    let n = spec.n;
    if method != WeightMethod::Determinant && spec.mbar.is_none() {
        return Err(MascError::usage("polynomial weights need a contiguous Ω = {0..m̄} ∪ {n−m̄..n−1}"));
    }
    let g = gamma.indices();
    let logs: Vec<f64> = match method {
        WeightMethod::Determinant => signed_minors(spec, gamma)?.into_iter().map(|(l, _)| l).collect(),
        WeightMethod::FPrime => g
            .iter()
            .map(|&k| -g.iter().filter(|&&l| l != k).map(|&l| table[(k + n - l) % n]).sum::<f64>())
            .collect(),
        WeightMethod::FComplement => {
            let comp = gamma.complement();
            g.iter().map(|&k| comp.indices().iter().map(|&l| table[(k + n - l) % n]).sum()).collect()
        }
    };
    GammaWeights::from_logs(gamma.clone(), logs)
}

/// The real unit-ℓ1 nullspace vector supported on `Γ`, embedded in `ℝⁿ`
/// with its first nonzero entry positive.
pub fn nullspace_vector_nu(spec: &PartialDftSpec, gamma: &SupportSet) -> Result<Vec<f64>> {
    check_gamma(spec, gamma)?;
    let minors = signed_minors(spec, gamma)?;
    let top = minors.iter().map(|m| m.0).fold(f64::NEG_INFINITY, f64::max);
    let nu: Vec<Complex64> = minors.iter().map(|(l, ph)| ph * (l - top).exp()).collect();
    // ν is a complex multiple of a real vector: keep whichever part is larger
    let re: Vec<f64> = nu.iter().map(|z| z.re).collect();
    let im: Vec<f64> = nu.iter().map(|z| z.im).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let (nr, ni) = (norm(&re), norm(&im));
    let (part, size) = if nr >= ni { (re, nr) } else { (im, ni) };
    if size < 1e-9 {
        return Err(MascError::Numerical(format!("nullspace vector on Γ = {gamma} has no usable real part")));
    }
    let sign = if part[0] < 0.0 { -1.0 } else { 1.0 };
    let mut out = vec![0.0; spec.n];
    for (&i, v) in gamma.indices().iter().zip(part) {
        out[i] = sign * v / size;
    }
    Ok(out)
}

/// Closed-form sparsity guarantee from the coherence of `[I F_n]`:
/// every `s < n / (2(n − |Ω|))` is uniformly recoverable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceBound {
    pub bound: BigRational,
    /// Largest integer strictly below `bound`.
    pub s_guaranteed: usize,
}

pub fn coherence_lower_bound(spec: &PartialDftSpec) -> Result<CoherenceBound> {
    if spec.mbar.is_none() {
        return Err(MascError::usage("the coherence bound needs a contiguous Ω = {0..m̄} ∪ {n−m̄..n−1}"));
    }
    let n = spec.n;
    let bound = BigRational::new(n.into(), (2 * (n - spec.omega.len())).into());
    let ceil = bound.ceil().to_integer();
    let s_guaranteed = usize::try_from(ceil - 1).unwrap_or(0);
    Ok(CoherenceBound { bound, s_guaranteed })
}

/// Largest `t` such that the `t` heaviest indices of `Γ` carry strictly less
/// than half the weight (outside the tie band).
pub fn s_max_gamma(w: &GammaWeights) -> usize {
    let mut ws = w.weights.clone();
    ws.sort_unstable_by(|a, b| b.total_cmp(a));
    let total: f64 = ws.iter().sum();
    let limit = total - TIE_BAND * total;
    let mut prefix = 0.0;
    let mut t = 0;
    for x in ws {
        prefix += x;
        if 2.0 * prefix < limit {
            t += 1;
        } else {
            break;
        }
    }
    t
}

/// `min_Γ s_max_gamma` over every `Γ`; refuses more than `cap` sets.
pub fn s_max_exact(spec: &PartialDftSpec, cap: u64) -> Result<usize> {
    if spec.is_trivial() {
        return Ok(spec.n);
    }
    let count = spec.gamma_count();
    if count > BigUint::from(cap) {
        return Err(MascError::Budget {
            what: "exact maximal recoverable sparsity",
            count: count.to_string(),
            cap,
            hint: "use the sampled estimate",
        });
    }
    let method = WeightMethod::default_for(spec);
    let table = log_chord_table(spec.n);
    let per = all_gammas(spec)
        .into_par_iter()
        .map(|g| gamma_weights_with(spec, &g, method, &table).map(|w| s_max_gamma(&w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(per.into_iter().min().unwrap_or(spec.n))
}

fn all_gammas(spec: &PartialDftSpec) -> Vec<SupportSet> {
    let n = spec.n;
    (0..n).combinations(spec.gamma_size()).map(|c| SupportSet::from_sorted_unchecked(n, c)).collect()
}

/// The first `size` distinct sets in the sequence where draw `i` is a uniform
/// `Γ` from stream `(seed, i)`. Samples of different sizes with the same seed
/// are therefore nested.
pub fn sample_gammas(spec: &PartialDftSpec, size: usize, seed: u64) -> Vec<SupportSet> {
    let n = spec.n;
    let k = spec.gamma_size();
    let available = u64::try_from(spec.gamma_count()).unwrap_or(u64::MAX);
    let size = (size as u64).min(available) as usize;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(size);
    let mut i = 0u64;
    while out.len() < size {
        let g = sample_subset(&mut stream(seed, i), n, k);
        i += 1;
        if seen.insert(g.clone()) {
            out.push(SupportSet::from_sorted_unchecked(n, g));
        }
    }
    out
}

/// `min_Γ s_max_gamma` over a seeded sample of `Γ`; an upper bound on the
/// exact value.
pub fn s_max_sampled(spec: &PartialDftSpec, sample_size: usize, seed: u64) -> Result<usize> {
    if sample_size == 0 {
        return Err(MascError::input("sample size must be at least 1"));
    }
    if spec.is_trivial() {
        return Ok(spec.n);
    }
    let method = WeightMethod::default_for(spec);
    let table = log_chord_table(spec.n);
    let per = sample_gammas(spec, sample_size, seed)
        .into_par_iter()
        .map(|g| gamma_weights_with(spec, &g, method, &table).map(|w| s_max_gamma(&w)))
        .collect::<Result<Vec<_>>>()?;
    Ok(per.into_iter().min().unwrap_or(spec.n))
}

/// Which `Γ` sets a [`DftOracle`] checks.
#[derive(Clone, Copy, Debug)]
pub enum GammaMode {
    /// All of them, refusing more than `cap`.
    Exhaustive { cap: u64 },
    /// A seeded sample; acceptances are then one-sided.
    Sampled { samples: usize, seed: u64 },
}

/// Membership oracle with precomputed weights for every checked `Γ`.
#[derive(Clone, Debug)]
pub struct DftOracle {
    spec: PartialDftSpec,
    complete: bool,
    weights: Vec<GammaWeights>,
    /// Row `k` holds the weights of `Γ_k` spread over `0..n`, zero off `Γ_k`.
    dense: Vec<f64>,
    totals: Vec<f64>,
}

impl DftOracle {
    pub fn new(spec: &PartialDftSpec) -> Result<Self> {
        Self::with_options(spec, WeightMethod::default_for(spec), GammaMode::Exhaustive { cap: DEFAULT_GAMMA_CAP })
    }

    pub fn with_options(spec: &PartialDftSpec, method: WeightMethod, mode: GammaMode) -> Result<Self> {
        if spec.is_trivial() {
            return Ok(DftOracle { spec: spec.clone(), complete: true, weights: Vec::new(), dense: Vec::new(), totals: Vec::new() });
        }
        let (gammas, complete) = match mode {
            GammaMode::Exhaustive { cap } => {
                let count = spec.gamma_count();
                if count > BigUint::from(cap) {
                    return Err(MascError::Budget {
                        what: "exhaustive Γ scan",
                        count: count.to_string(),
                        cap,
                        hint: "use sampled mode, which can only certify non-membership",
                    });
                }
                (all_gammas(spec), true)
            }
            GammaMode::Sampled { samples, seed } => {
                if samples == 0 {
                    return Err(MascError::input("sample size must be at least 1"));
                }
                let g = sample_gammas(spec, samples, seed);
                let complete = BigUint::from(g.len()) == spec.gamma_count();
                (g, complete)
            }
        };
        let table = log_chord_table(spec.n);
        let weights = gammas
            .into_par_iter()
            .map(|g| gamma_weights_with(spec, &g, method, &table))
            .collect::<Result<Vec<GammaWeights>>>()?;
        let n = spec.n;
        let mut dense = vec![0.0; weights.len() * n];
        for (k, w) in weights.iter().enumerate() {
            for (&i, &v) in w.gamma.indices().iter().zip(&w.weights) {
                dense[k * n + i] = v;
            }
        }
        let totals = weights.iter().map(GammaWeights::total).collect();
        Ok(DftOracle { spec: spec.clone(), complete, weights, dense, totals })
    }

    pub fn spec(&self) -> &PartialDftSpec {
        &self.spec
    }

    pub fn weights(&self) -> &[GammaWeights] {
        &self.weights
    }
}

impl MembershipOracle for DftOracle {
    fn ambient_dim(&self) -> usize {
        self.spec.n
    }

    fn contains(&self, s: &SupportSet) -> Result<MembershipVerdict> {
        let n = self.spec.n;
        if s.ambient_dim() != n {
            return Err(MascError::input(format!("support lives in dimension {}, not {n}", s.ambient_dim())));
        }
        let mut worst: Option<(f64, usize)> = None;
        let mut out = false;
        let mut tie = false;
        for (k, &total) in self.totals.iter().enumerate() {
            let row = &self.dense[k * n..(k + 1) * n];
            let mass: f64 = s.indices().iter().map(|&i| row[i]).sum();
            let gap = total - 2.0 * mass;
            if gap.abs() <= TIE_BAND * total {
                tie = true;
            } else if gap < 0.0 {
                out = true;
            }
            let ratio = mass / total;
            if worst.is_none_or(|(r, _)| ratio > r) {
                worst = Some((ratio, k));
            }
        }
        let Some((ratio, k)) = worst else {
            return Ok(MembershipVerdict {
                decided: true,
                in_masc: true,
                complete: self.complete,
                margin: Margin::Float(0.5),
                witness: None,
                worst_gamma: None,
            });
        };
        let gamma = self.weights[k].gamma.clone();
        let decided = out || !tie;
        let in_masc = !out && !tie;
        let witness = if in_masc {
            None
        } else {
            let vector = nullspace_vector_nu(&self.spec, &gamma)?;
            Some(Witness::Approximate { support: gamma.clone(), vector })
        };
        Ok(MembershipVerdict {
            decided,
            in_masc,
            complete: self.complete || !in_masc,
            margin: Margin::Float(0.5 - ratio),
            witness,
            worst_gamma: Some(gamma),
        })
    }

    fn decide(&self, s: &SupportSet) -> Result<Option<bool>> {
        let n = self.spec.n;
        if s.ambient_dim() != n {
            return Err(MascError::input(format!("support lives in dimension {}, not {n}", s.ambient_dim())));
        }
        let mut tie = false;
        for (k, &total) in self.totals.iter().enumerate() {
            let row = &self.dense[k * n..(k + 1) * n];
            let gap = total - 2.0 * s.indices().iter().map(|&i| row[i]).sum::<f64>();
            if gap.abs() <= TIE_BAND * total {
                tie = true;
            } else if gap < 0.0 {
                return Ok(Some(false));
            }
        }
        Ok(if tie { None } else { Some(true) })
    }
}

/// Exhaustive verdict with the default weight method.
pub fn masc_contains_dft(spec: &PartialDftSpec, s: &SupportSet) -> Result<MembershipVerdict> {
    DftOracle::new(spec)?.contains(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> SupportSet {
        SupportSet::new(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn primes() {
        let p: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(symmetrize_omega(12, &[0]).is_err());
    }

    #[test]
    fn symmetrization() {
        let s = symmetrize_omega(11, &[0, 2, 4, 7, 9]).unwrap();
        assert_eq!(s.omega().indices(), &[0, 2, 4, 7, 9]);
        assert_eq!(s.mbar(), None);
        assert_eq!(symmetrize_omega(7, &[1]).unwrap().omega().indices(), &[1, 6]);
        let c = symmetrize_omega(19, &(0..=7).chain(12..19).collect::<Vec<_>>()).unwrap();
        assert_eq!(c.mbar(), Some(7));
        assert_eq!(c.omega().len(), 15);
        assert_eq!(PartialDftSpec::contiguous(19, 7).unwrap(), c);
        assert!(PartialDftSpec::contiguous(19, 9).is_err());
    }

    #[test]
    fn nu_for_constant_row() {
        let s = symmetrize_omega(3, &[0]).unwrap();
        let nu = nullspace_vector_nu(&s, &set(3, &[0, 1])).unwrap();
        assert!((nu[0] - 0.5).abs() < 1e-12 && (nu[1] + 0.5).abs() < 1e-12 && nu[2] == 0.0);
    }

    #[test]
    fn f_gamma_basics() {
        let s = symmetrize_omega(7, &[0]).unwrap();
        let g = set(7, &[1, 3, 4]);
        for k in g.indices() {
            assert!(f_gamma_eval(&s, &g, *k).norm() <= 1e-12 * 3.0);
        }
        let all = SupportSet::full(7);
        let v = f_gamma_at(7, &all, Complex64::new(2.0, 0.0));
        assert!((v - Complex64::new(127.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn polynomial_weights_need_contiguous_omega() {
        let s = symmetrize_omega(11, &[0, 2, 4, 7, 9]).unwrap();
        let g = set(11, &[0, 1, 2, 3, 4, 5]);
        assert!(matches!(gamma_weights(&s, &g, WeightMethod::FPrime), Err(MascError::Usage(_))));
        assert!(coherence_lower_bound(&s).is_err());
    }

    #[test]
    fn three_methods_agree_on_contiguous_omega() {
        let s = PartialDftSpec::contiguous(13, 3).unwrap();
        for g in sample_gammas(&s, 20, 3) {
            let d = gamma_weights(&s, &g, WeightMethod::Determinant).unwrap();
            let p = gamma_weights(&s, &g, WeightMethod::FPrime).unwrap();
            let c = gamma_weights(&s, &g, WeightMethod::FComplement).unwrap();
            for t in 0..g.len() {
                assert!((d.weights[t] - p.weights[t]).abs() < 1e-9, "{g}");
                assert!((d.weights[t] - c.weights[t]).abs() < 1e-9, "{g}");
            }
        }
    }

    #[test]
    fn uniform_weights_strict_half() {
        for t in 1..6 {
            let w = GammaWeights { gamma: SupportSet::full(2 * t), weights: vec![1.0; 2 * t] };
            assert_eq!(s_max_gamma(&w), t - 1);
        }
    }

    #[test]
    fn coherence_bound_values() {
        let b = coherence_lower_bound(&PartialDftSpec::contiguous(19, 7).unwrap()).unwrap();
        assert_eq!(b.bound, BigRational::new(19.into(), 8.into()));
        assert_eq!(b.s_guaranteed, 2);
        // |Ω| = n − 2 gives n/4
        let b = coherence_lower_bound(&PartialDftSpec::contiguous(13, 5).unwrap()).unwrap();
        assert_eq!(b.bound, BigRational::new(13.into(), 4.into()));
        assert_eq!(b.s_guaranteed, 3);
    }

    #[test]
    fn realified_matrix_has_omega_rows() {
        let s = symmetrize_omega(11, &[0, 2, 4, 7, 9]).unwrap();
        let m = s.realified_matrix().unwrap();
        assert_eq!(m.rows(), 5);
        assert_eq!(m.rank(), 5);
    }

    #[test]
    fn nested_samples() {
        let s = PartialDftSpec::contiguous(19, 7).unwrap();
        let a = sample_gammas(&s, 50, 4);
        let b = sample_gammas(&s, 200, 4);
        assert_eq!(&b[..50], &a[..]);
        assert_eq!(sample_gammas(&s, 5000, 4).len(), 969);
    }
}
