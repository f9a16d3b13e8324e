//! Independent brute-force oracles. None of these call into the library's
//! enumeration code; they only share its input types.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Unique solution of `a z = b` over the rationals, or `None` when the
/// system is singular or inconsistent.
pub fn solve_unique(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>, n: usize) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let mut r = 0;
    for c in 0..n {
        let p = (r..rows).find(|&i| !a[i][c].is_zero())?;
        a.swap(r, p);
        b.swap(r, p);
        let inv = BigRational::one() / a[r][c].clone();
        for j in 0..n {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
                let v = &b[r] * &f;
                b[i] -= v;
            }
        }
        r += 1;
    }
    // leftover rows must read 0 = 0
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(b[..n].to_vec())
}

fn sign(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Extreme points of `null(Φ) ∩ B₁` by trying every sign vector
/// `σ ∈ {−1, 0, 1}ⁿ`: `z` is extreme iff it is the unique solution of
/// `Φz = 0`, `z_i = 0` where `σ_i = 0`, `σᵀz = 1`, and `sign(z) = σ`.
pub fn extreme_points_by_signs(phi: &[Vec<i64>], n: usize) -> BTreeSet<Vec<BigRational>> {
    let mut found = BTreeSet::new();
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut sigma = vec![0i8; n];
        let mut c = code;
        for s in sigma.iter_mut() {
            *s = (c % 3) as i8 - 1;
            c /= 3;
        }
        if sigma.iter().all(|&s| s == 0) {
            continue;
        }
        let mut a: Vec<Vec<BigRational>> = phi.iter().map(|row| row.iter().map(|&v| q(v)).collect()).collect();
        let mut b = vec![BigRational::zero(); a.len()];
        for i in 0..n {
            if sigma[i] == 0 {
                let mut e = vec![BigRational::zero(); n];
                e[i] = BigRational::one();
                a.push(e);
                b.push(BigRational::zero());
            }
        }
        a.push(sigma.iter().map(|&s| q(s as i64)).collect());
        b.push(BigRational::one());
        if let Some(z) = solve_unique(a, b, n) {
            if z.iter().map(sign).eq(sigma.iter().copied()) {
                found.insert(z);
            }
        }
    }
    found
}

/// `max_z max_{|S| = s} ‖z_S‖₁` over the given points.
pub fn nsc_from_points(points: &BTreeSet<Vec<BigRational>>, s: usize) -> BigRational {
    points
        .iter()
        .map(|z| {
            let mut mags: Vec<BigRational> = z.iter().map(|v| v.abs()).collect();
            mags.sort_by(|a, b| b.cmp(a));
            mags.into_iter().take(s).sum::<BigRational>()
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// `S` is in the MASC iff every extreme point puts `ℓ1` mass `< 1/2` on `S`.
pub fn in_masc_by_points(points: &BTreeSet<Vec<BigRational>>, s: &[usize]) -> bool {
    points.iter().all(|z| s.iter().map(|&i| z[i].abs()).sum::<BigRational>() < half())
}

/// Every simple cycle of an undirected simple graph as a sorted edge list,
/// found by testing all edge subsets: a subset is a simple cycle iff it is
/// connected and every vertex it touches has degree exactly 2.
pub fn cycles_by_subsets(vertices: usize, edges: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
    let m = edges.len();
    assert!(m <= 20, "subset oracle is exponential");
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        if chosen.len() < 3 {
            continue;
        }
        let mut deg = vec![0; vertices];
        for &e in &chosen {
            deg[edges[e].0] += 1;
            deg[edges[e].1] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        // connectivity by repeated relaxation from the first vertex
        let mut seen = vec![false; vertices];
        seen[edges[chosen[0]].0] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for &e in &chosen {
                let (a, b) = edges[e];
                if seen[a] != seen[b] {
                    seen[a] = true;
                    seen[b] = true;
                    grew = true;
                }
            }
        }
        if chosen.iter().all(|&e| seen[edges[e].0]) {
            out.insert(chosen);
        }
    }
    out
}

/// Small deterministic generator so oracle fixtures do not depend on the
/// library's RNG helpers.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, k: u64) -> u64 {
        self.next() % k
    }
}

/// A random connected simple graph with `vertices` vertices and at most
/// `max_edges` edges: a random spanning tree plus random chords, each edge
/// with a random orientation.
pub fn random_connected_graph(rng: &mut SplitMix, vertices: usize, max_edges: usize) -> Vec<(usize, usize)> {
    assert!(vertices >= 2 && max_edges >= vertices - 1);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let has = |edges: &[(usize, usize)], a: usize, b: usize| edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
    for v in 1..vertices {
        let u = rng.below(v as u64) as usize;
        edges.push(if rng.below(2) == 0 { (u, v) } else { (v, u) });
    }
    let target = vertices - 1 + rng.below((max_edges - vertices + 2) as u64) as usize;
    let mut attempts = 0;
    while edges.len() < target && attempts < 200 {
        attempts += 1;
        let a = rng.below(vertices as u64) as usize;
        let b = rng.below(vertices as u64) as usize;
        if a != b && !has(&edges, a, b) {
            edges.push((a, b));
        }
    }
    edges
}
