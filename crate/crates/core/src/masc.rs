//! Matrix-agnostic recoverability certification.
//!
//! The unit-ℓ1 cross-section of a nullspace `V` is a polytope whose vertices
//! are exactly the unit-ℓ1 vectors of minimal support in `V`. A support `S`
//! is always recovered by ℓ1-minimization iff every such vertex `z` puts less
//! than half of its mass on `S`. Everything here is exact: vertices are found
//! by scanning candidate supports in rational arithmetic, and membership is
//! decided by integer comparisons (with a float pre-filter that only ever
//! short-circuits clear-cut cases).

use std::collections::HashSet;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{MascError, Result};
use crate::linalg::text::rational_string;
use crate::linalg::NullspaceBasis;
use crate::rng::{binomial, sample_subset, stream};
use crate::support::{SimplicialComplexSummary, SupportSet};

/// Default cap on the number of candidate supports visited by the scan.
pub const DEFAULT_SCAN_CAP: u64 = 10_000_000;
/// Default cap on the ambient dimension for full family enumeration.
pub const DEFAULT_MAX_ENUM_DIM: usize = 24;

/// A vertex of `null(Φ) ∩ B₁`: a unit-ℓ1 nullspace vector of minimal support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremePoint {
    vector: Vec<BigRational>,
    support: SupportSet,
    sign_vector: Vec<i8>,
}

impl ExtremePoint {
    /// Normalizes a nonzero integer direction to unit ℓ1 norm.
    pub(crate) fn from_direction(v: &[BigInt]) -> Self {
        let l1: BigInt = v.iter().map(|x| x.abs()).sum();
        debug_assert!(!l1.is_zero());
        let vector = v.iter().map(|x| BigRational::new(x.clone(), l1.clone())).collect();
        let support = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        let sign_vector = v.iter().map(|x| x.signum().to_i8().unwrap_or(0)).collect();
        ExtremePoint { vector, support: SupportSet::from_sorted_unchecked(v.len(), support), sign_vector }
    }

    pub fn vector(&self) -> &[BigRational] {
        &self.vector
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn sign_vector(&self) -> &[i8] {
        &self.sign_vector
    }

    pub fn negated(&self) -> ExtremePoint {
        ExtremePoint {
            vector: self.vector.iter().map(|q| -q).collect(),
            support: self.support.clone(),
            sign_vector: self.sign_vector.iter().map(|s| -s).collect(),
        }
    }

    /// `‖z_S‖₁`.
    pub fn mass_on(&self, s: &SupportSet) -> BigRational {
        s.indices().iter().map(|&i| self.vector[i].abs()).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.vector.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
    }

    fn to_json(&self) -> Value {
        json!({
            "support": self.support,
            "vector": self.vector.iter().map(rational_string).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Maximum number of candidate supports the scan may visit.
    pub cap: u64,
    /// Return both `z` and `−z` instead of one representative per pair.
    pub include_antipodes: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { cap: DEFAULT_SCAN_CAP, include_antipodes: false }
    }
}

/// Number of supports of size `1..=r+1` the scan visits.
pub fn scan_candidate_count(b: &NullspaceBasis) -> BigUint {
    let n = b.ambient_dim();
    let top = (b.codimension() + 1).min(n);
    (1..=top).map(|k| binomial(n, k)).sum()
}

/// All extreme points of `null(Φ) ∩ B₁`, one per antipodal pair (the one
/// whose first nonzero entry is positive), sorted by support.
pub fn enumerate_extreme_points(b: &NullspaceBasis) -> Result<Vec<ExtremePoint>> {
    enumerate_extreme_points_with(b, ScanOptions::default())
}

pub fn enumerate_extreme_points_with(b: &NullspaceBasis, opts: ScanOptions) -> Result<Vec<ExtremePoint>> {
    if b.is_trivial() {
        return Ok(Vec::new());
    }
    let n = b.ambient_dim();
    let count = scan_candidate_count(b);
    if count > BigUint::from(opts.cap) {
        return Err(MascError::Budget {
            what: "extreme point scan",
            count: count.to_string(),
            cap: opts.cap,
            hint: "too large for exact enumeration; use the graph or dft module",
        });
    }
    let top = (b.codimension() + 1).min(n);
    let mut points: Vec<ExtremePoint> = (1..=top)
        .flat_map(|k| (0..n).map(move |first| (k, first)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(k, first)| {
            // supports of size k whose smallest index is `first`
            ((first + 1)..n).combinations(k - 1).filter_map(move |rest| {
                let mut gamma = Vec::with_capacity(k);
                gamma.push(first);
                gamma.extend(rest);
                minimal_direction(b, &gamma)
            })
        })
        .collect();
    points.sort_by(|a, b| a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support)));
    if opts.include_antipodes {
        points = points.into_iter().flat_map(|p| [p.negated(), p]).collect();
        points.sort_by(|a, b| {
            a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support)).then_with(|| b.vector.cmp(&a.vector))
        });
    }
    Ok(points)
}

fn minimal_direction(b: &NullspaceBasis, gamma: &[usize]) -> Option<ExtremePoint> {
    let mut vs = b.restricted_null_vectors(gamma);
    if vs.len() != 1 || vs[0].iter().any(Zero::is_zero) {
        return None;
    }
    let local = vs.pop()?;
    let mut full = vec![BigInt::zero(); b.ambient_dim()];
    for (&i, v) in gamma.iter().zip(local) {
        full[i] = v;
    }
    Some(ExtremePoint::from_direction(&full))
}

/// Gap between 1/2 and the worst mass a witness puts on `S`.
#[derive(Clone, Debug, PartialEq)]
pub enum Margin {
    Exact(BigRational),
    Float(f64),
}

impl Margin {
    pub fn to_f64(&self) -> f64 {
        match self {
            Margin::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Margin::Float(x) => *x,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Margin::Exact(q) => Value::String(rational_string(q)),
            Margin::Float(x) => json!(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Exact(ExtremePoint),
    /// A unit-ℓ1 nullspace vector computed in floating point.
    Approximate { support: SupportSet, vector: Vec<f64> },
}

impl Witness {
    pub fn support(&self) -> &SupportSet {
        match self {
            Witness::Exact(z) => z.support(),
            Witness::Approximate { support, .. } => support,
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Witness::Exact(z) => z.to_f64(),
            Witness::Approximate { vector, .. } => vector.clone(),
        }
    }
}

/// Answer of a membership oracle.
///
/// `decided == false` marks a numerical boundary case (a tie within
/// tolerance); such verdicts report `in_masc == false`.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub decided: bool,
    pub in_masc: bool,
    /// `false` when only a sample of witnesses was checked: a rejection is
    /// still a certificate, an acceptance is not.
    pub complete: bool,
    pub margin: Margin,
    pub witness: Option<Witness>,
    /// Support of the worst witness (the Γ achieving the margin), if any.
    pub worst_gamma: Option<SupportSet>,
}

impl MembershipVerdict {
    /// `"in"`, `"out"` or `"boundary"`.
    pub fn label(&self) -> &'static str {
        match (self.decided, self.in_masc) {
            (false, _) => "boundary",
            (true, true) => "in",
            (true, false) => "out",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "verdict": self.label(),
            "complete": self.complete,
            "margin": self.margin.to_json(),
            "worst_gamma": self.worst_gamma,
        });
        if let Some(w) = &self.witness {
            v["witness"] = match w {
                Witness::Exact(z) => z.to_json(),
                Witness::Approximate { support, vector } => json!({ "support": support, "vector": vector }),
            };
        }
        v
    }
}

/// Anything that can decide whether a support belongs to the MASC.
pub trait MembershipOracle: Sync {
    fn ambient_dim(&self) -> usize;
    fn contains(&self, s: &SupportSet) -> Result<MembershipVerdict>;

    /// `Some(true)` for a decided member, `Some(false)` for a decided
    /// non-member, `None` at the boundary. Skips witness construction where
    /// an implementation can.
    fn decide(&self, s: &SupportSet) -> Result<Option<bool>> {
        let v = self.contains(s)?;
        Ok(v.decided.then_some(v.in_masc))
    }
}

/// An extreme point with integer data for fast exact mass comparisons:
/// `z = v / ‖v‖₁` with `v` primitive.
#[derive(Clone, Debug)]
struct Prepared {
    idx: Vec<usize>,
    abs: Vec<BigInt>,
    l1: BigInt,
    abs_f: Vec<f64>,
    l1_f: f64,
}

impl Prepared {
    fn new(z: &ExtremePoint) -> Self {
        let idx = z.support.indices().to_vec();
        let lcm = idx.iter().fold(BigInt::from(1), |acc, &i| num_integer::Integer::lcm(&acc, z.vector[i].denom()));
        let abs: Vec<BigInt> = idx.iter().map(|&i| (z.vector[i].numer() * (&lcm / z.vector[i].denom())).abs()).collect();
        let l1: BigInt = abs.iter().sum();
        let abs_f = abs.iter().map(|a| a.to_f64().unwrap_or(f64::INFINITY)).collect();
        let l1_f = l1.to_f64().unwrap_or(f64::INFINITY);
        Prepared { idx, abs, l1, abs_f, l1_f }
    }

    fn ratio_f(&self, mask: &[bool]) -> f64 {
        let s: f64 = self.idx.iter().zip(&self.abs_f).filter(|(i, _)| mask[**i]).map(|(_, a)| a).sum();
        s / self.l1_f
    }

    fn ratio(&self, mask: &[bool]) -> BigRational {
        let s: BigInt = self.idx.iter().zip(&self.abs).filter(|(i, _)| mask[**i]).map(|(_, a)| a.clone()).sum();
        BigRational::new(s, self.l1.clone())
    }
}

/// Exact membership oracle over a precomputed list of extreme points.
#[derive(Clone, Debug)]
pub struct GenericOracle {
    n: usize,
    points: Vec<ExtremePoint>,
    prepared: Vec<Prepared>,
}

impl GenericOracle {
    pub fn new(b: &NullspaceBasis) -> Result<Self> {
        Self::with_options(b, ScanOptions::default())
    }

    pub fn with_options(b: &NullspaceBasis, opts: ScanOptions) -> Result<Self> {
        let points = enumerate_extreme_points_with(b, ScanOptions { include_antipodes: false, ..opts })?;
        Ok(Self::from_points(b.ambient_dim(), points))
    }

    /// Uses caller-supplied extreme points (antipodes may be included or not).
    pub fn from_points(n: usize, points: Vec<ExtremePoint>) -> Self {
        let prepared = points.iter().map(Prepared::new).collect();
        GenericOracle { n, points, prepared }
    }

    pub fn points(&self) -> &[ExtremePoint] {
        &self.points
    }

    /// Largest `‖z_S‖₁` over all extreme points together with its maximizer.
    fn worst(&self, s: &SupportSet) -> Option<(BigRational, usize)> {
        let mut mask = vec![false; self.n];
        s.indices().iter().for_each(|&i| mask[i] = true);
        let ratios: Vec<f64> = self.prepared.iter().map(|p| p.ratio_f(&mask)).collect();
        let fmax = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // float error is ~1e-15 relative; anything this close is settled exactly
        let mut best: Option<(BigRational, usize)> = None;
        for (k, &r) in ratios.iter().enumerate() {
            if r >= fmax - 1e-9 {
                let exact = self.prepared[k].ratio(&mask);
                if best.as_ref().is_none_or(|(b, _)| exact > *b) {
                    best = Some((exact, k));
                }
            }
        }
        best
    }
}

impl MembershipOracle for GenericOracle {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn contains(&self, s: &SupportSet) -> Result<MembershipVerdict> {
        if s.ambient_dim() != self.n {
            return Err(MascError::input(format!(
                "support lives in dimension {}, matrix has {} columns",
                s.ambient_dim(),
                self.n
            )));
        }
        let half = BigRational::new(1.into(), 2.into());
        let Some((mass, k)) = self.worst(s) else {
            return Ok(MembershipVerdict {
                decided: true,
                in_masc: true,
                complete: true,
                margin: Margin::Exact(half),
                witness: None,
                worst_gamma: None,
            });
        };
        let in_masc = mass < half;
        let z = &self.points[k];
        Ok(MembershipVerdict {
            decided: true,
            in_masc,
            complete: true,
            margin: Margin::Exact(half - mass),
            witness: (!in_masc).then(|| Witness::Exact(z.clone())),
            worst_gamma: Some(z.support.clone()),
        })
    }
}

/// Decides `S ∈ MASC(Φ)` from the nullspace basis, enumerating extreme points
/// unless they are supplied.
pub fn masc_contains(b: &NullspaceBasis, s: &SupportSet, pts: Option<&[ExtremePoint]>) -> Result<MembershipVerdict> {
    let oracle = match pts {
        Some(p) => GenericOracle::from_points(b.ambient_dim(), p.to_vec()),
        None => GenericOracle::new(b)?,
    };
    oracle.contains(s)
}

/// `max_z` of the sum of the `s` largest `|z_i|`; 0 for a trivial nullspace.
pub fn nullspace_constant(s: usize, b: &NullspaceBasis) -> Result<BigRational> {
    let pts = enumerate_extreme_points(b)?;
    nullspace_constant_from_points(s, b.ambient_dim(), &pts)
}

pub fn nullspace_constant_from_points(s: usize, n: usize, pts: &[ExtremePoint]) -> Result<BigRational> {
    if s == 0 || s > n {
        return Err(MascError::input(format!("sparsity {s} outside 1..={n}")));
    }
    Ok(pts
        .iter()
        .map(|z| {
            let mut a: Vec<BigRational> = z.vector.iter().map(|q| q.abs()).collect();
            a.sort_unstable_by(|x, y| y.cmp(x));
            a.into_iter().take(s).sum::<BigRational>()
        })
        .max()
        .unwrap_or_else(BigRational::zero))
}

/// Outcome of a generalized nullspace property check over a family.
#[derive(Clone, Debug)]
pub struct GnupReport {
    pub holds: bool,
    /// The family member with the smallest margin, and its verdict.
    pub worst: Option<(SupportSet, MembershipVerdict)>,
}

pub fn gnup_holds(b: &NullspaceBasis, family: &[SupportSet]) -> Result<GnupReport> {
    gnup_holds_with(&GenericOracle::new(b)?, family)
}

pub fn gnup_holds_with<O: MembershipOracle>(oracle: &O, family: &[SupportSet]) -> Result<GnupReport> {
    if family.is_empty() {
        return Err(MascError::usage("the support family must be non-empty"));
    }
    let verdicts = family.par_iter().map(|s| oracle.contains(s)).collect::<Result<Vec<_>>>()?;
    let holds = verdicts.iter().all(|v| v.decided && v.in_masc);
    let worst = family
        .iter()
        .zip(verdicts)
        .min_by(|a, b| a.1.margin.to_f64().total_cmp(&b.1.margin.to_f64()))
        .map(|(s, v)| (s.clone(), v));
    Ok(GnupReport { holds, worst })
}

/// The MASC of `Φ` truncated at cardinality `max_card`.
pub fn masc_enumerate(b: &NullspaceBasis, max_card: usize) -> Result<SimplicialComplexSummary> {
    masc_enumerate_with(b, max_card, DEFAULT_MAX_ENUM_DIM)
}

pub fn masc_enumerate_with(b: &NullspaceBasis, max_card: usize, max_dim: usize) -> Result<SimplicialComplexSummary> {
    let n = b.ambient_dim();
    check_enum_dim(n, max_dim)?;
    if b.is_trivial() {
        let top = SupportSet::full(n);
        let faces = if max_card >= n {
            vec![top]
        } else {
            top.indices().iter().copied().combinations(max_card).map(|c| SupportSet::from_sorted_unchecked(n, c)).collect()
        };
        return Ok(SimplicialComplexSummary::from_faces(n, faces));
    }
    enumerate_family(&GenericOracle::new(b)?, max_card, max_dim)
}

fn check_enum_dim(n: usize, max_dim: usize) -> Result<()> {
    if n > max_dim.min(63) {
        return Err(MascError::Budget {
            what: "MASC enumeration",
            count: format!("n = {n}"),
            cap: max_dim.min(63) as u64,
            hint: "query individual supports with the membership oracle instead",
        });
    }
    Ok(())
}

/// Breadth-first enumeration of the family accepted by `oracle`, pruning every
/// superset of a rejected set. Boundary verdicts count as rejections.
pub fn enumerate_family<O: MembershipOracle>(oracle: &O, max_card: usize, max_dim: usize) -> Result<SimplicialComplexSummary> {
    let n = oracle.ambient_dim();
    check_enum_dim(n, max_dim)?;
    let mut level: Vec<u64> = vec![0];
    let mut maximal: Vec<u64> = Vec::new();
    for _ in 1..=max_card.min(n) {
        let accepted: HashSet<u64> = level.iter().copied().collect();
        // candidates: extend by an index above the current maximum, keep those
        // whose every (k-1)-subset was accepted
        let candidates: Vec<u64> = level
            .iter()
            .flat_map(|&m| {
                let start = if m == 0 { 0 } else { 64 - m.leading_zeros() as usize };
                (start..n).map(move |i| m | (1u64 << i))
            })
            .filter(|&c| (0..n).filter(|&i| c >> i & 1 == 1).all(|i| accepted.contains(&(c & !(1u64 << i)))))
            .collect();
        let keep = candidates
            .par_iter()
            .map(|&c| oracle.decide(&SupportSet::from_mask(n, c)).map(|v| v == Some(true)))
            .collect::<Result<Vec<bool>>>()?;
        let next: Vec<u64> = candidates.into_iter().zip(keep).filter(|(_, ok)| *ok).map(|(c, _)| c).collect();
        let mut covered: HashSet<u64> = HashSet::new();
        for &c in &next {
            for i in (0..n).filter(|&i| c >> i & 1 == 1) {
                covered.insert(c & !(1u64 << i));
            }
        }
        maximal.extend(level.iter().copied().filter(|m| !covered.contains(m)));
        level = next;
        if level.is_empty() {
            break;
        }
    }
    maximal.extend(level);
    let faces = maximal.into_iter().map(|m| SupportSet::from_mask(n, m)).collect();
    Ok(SimplicialComplexSummary::from_faces(n, faces))
}

/// How [`recoverable_fraction`] visits supports.
#[derive(Clone, Copy, Debug)]
pub enum FractionMode {
    /// Every `s`-subset, refusing more than `cap` of them.
    Exact { cap: u64 },
    /// `trials` uniform `s`-subsets drawn from stream `(seed, trial)`.
    Sampled { trials: u64, seed: u64 },
}

/// Fraction of `s`-supports inside the MASC, a lower bound on the probability
/// that a random `s`-sparse signal is recovered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub hits: u64,
    pub total: u64,
}

impl Fraction {
    pub fn value(&self) -> f64 {
        self.hits as f64 / self.total as f64
    }
}

pub fn recoverable_fraction<O: MembershipOracle>(oracle: &O, s: usize, mode: FractionMode) -> Result<Fraction> {
    let n = oracle.ambient_dim();
    if s == 0 || s > n {
        return Err(MascError::input(format!("sparsity {s} outside 1..={n}")));
    }
    let hit = |set: SupportSet| oracle.decide(&set).map(|v| v == Some(true));
    let flags: Vec<bool> = match mode {
        FractionMode::Exact { cap } => {
            let total = binomial(n, s);
            if total > BigUint::from(cap) {
                return Err(MascError::Budget {
                    what: "exact recoverable fraction",
                    count: total.to_string(),
                    cap,
                    hint: "use sampled mode",
                });
            }
            (0..n)
                .combinations(s)
                .collect::<Vec<_>>()
                .into_par_iter()
                .map(|c| hit(SupportSet::from_sorted_unchecked(n, c)))
                .collect::<Result<_>>()?
        }
        FractionMode::Sampled { trials, seed } => {
            if trials == 0 {
                return Err(MascError::input("sampled mode needs at least one trial"));
            }
            (0..trials)
                .into_par_iter()
                .map(|t| hit(SupportSet::from_sorted_unchecked(n, sample_subset(&mut stream(seed, t), n, s))))
                .collect::<Result<_>>()?
        }
    };
    let hits = flags.iter().filter(|&&f| f).count() as u64;
    Ok(Fraction { hits, total: flags.len() as u64 })
}
