//! Real matrices and exact nullspace computation.
//!
//! Nullspaces are always computed exactly. Float entries are converted to the
//! rational number they represent (every finite `f64` is a dyadic rational),
//! rows are cleared of denominators, and the integer matrix is reduced by
//! fraction-free Gauss–Jordan elimination, so no intermediate value is ever
//! rounded and no gcd is taken inside the elimination loop.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{MascError, Result};

/// Entry storage of a [`RealMatrix`].
#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Dense row-major real matrix, either exact (rationals) or double precision.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl RealMatrix {
    pub fn from_rationals(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        check_shape(rows, cols, entries.len())?;
        Ok(RealMatrix { rows, cols, entries: Entries::Exact(entries) })
    }

    pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let entries = entries.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        Self::from_rationals(rows, cols, entries)
    }

    pub fn from_f64(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols, entries.len())?;
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(MascError::input(format!("non-finite matrix entry {bad}")));
        }
        Ok(RealMatrix { rows, cols, entries: Entries::Float(entries) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    /// Entry `(i, j)` as an exact rational (floats convert without rounding).
    pub fn rational(&self, i: usize, j: usize) -> BigRational {
        match &self.entries {
            Entries::Exact(v) => v[i * self.cols + j].clone(),
            Entries::Float(v) => {
                BigRational::from_f64(v[i * self.cols + j]).expect("entries are finite")
            }
        }
    }

    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        match &self.entries {
            Entries::Exact(v) => v[i * self.cols + j].to_f64().unwrap_or(f64::NAN),
            Entries::Float(v) => v[i * self.cols + j],
        }
    }

    /// Row-major copy in double precision.
    pub fn to_f64(&self) -> Vec<f64> {
        match &self.entries {
            Entries::Float(v) => v.clone(),
            Entries::Exact(v) => v.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }

    /// Same matrix in float mode.
    pub fn to_float_mode(&self) -> RealMatrix {
        RealMatrix { rows: self.rows, cols: self.cols, entries: Entries::Float(self.to_f64()) }
    }

    pub fn mul_vec_f64(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get_f64(i, j) * x[j]).sum())
            .collect()
    }

    pub fn mul_vec_rational(&self, x: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !x[j].is_zero())
                    .fold(BigRational::zero(), |acc, j| acc + self.rational(i, j) * &x[j])
            })
            .collect()
    }

    /// Rows scaled to primitive integer vectors (same row space).
    pub(crate) fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row: Vec<BigRational> = (0..self.cols).map(|j| self.rational(i, j)).collect();
                clear_denominators(&row)
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        Reduction::new(self.integer_rows(), self.cols).rank()
    }
}

fn check_shape(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(MascError::input("matrix must have at least one row and one column"));
    }
    if rows * cols != len {
        return Err(MascError::input(format!(
            "{rows}x{cols} matrix needs {} entries, got {len}",
            rows * cols
        )));
    }
    Ok(())
}

/// Multiplies a rational vector by the lcm of its denominators and divides by
/// the gcd of the result, giving a primitive integer vector on the same ray.
pub(crate) fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    make_primitive(ints)
}

pub(crate) fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
    v
}

/// Result of fraction-free Gauss–Jordan elimination on an integer matrix.
///
/// After reduction every pivot equals `pivot_value` and every pivot column is
/// zero outside its pivot row, i.e. the leading block is `pivot_value · I`.
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub pivot_value: BigInt,
    pub cols: usize,
}

impl Reduction {
    pub fn new(mut a: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let m = a.len();
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let (head, tail) = a.split_at_mut(r);
            let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
            let piv = pivot_row[c].clone();
            for row in head.iter_mut().chain(rest.iter_mut()) {
                let f = std::mem::take(&mut row[c]);
                for j in 0..cols {
                    if j == c {
                        continue;
                    }
                    let mut v = &piv * &row[j];
                    if !f.is_zero() && !pivot_row[j].is_zero() {
                        v -= &f * &pivot_row[j];
                    }
                    if !prev.is_one() {
                        debug_assert!((&v % &prev).is_zero(), "fraction-free step must divide exactly");
                        v /= &prev;
                    }
                    row[j] = v;
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        Reduction { rows: a, pivots, pivot_value: prev, cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Integer basis of the nullspace, one primitive vector per free column.
    pub fn null_vectors(&self) -> Vec<Vec<BigInt>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![BigInt::zero(); self.cols];
                v[f] = self.pivot_value.clone();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                let mut v = make_primitive(v);
                if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                v
            })
            .collect()
    }
}

/// Exact basis of `{x : Φx = 0}` with the data needed to restrict it to
/// coordinate subspaces.
#[derive(Clone, Debug)]
pub struct NullspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<BigRational>>,
    /// Integer rows spanning the orthogonal complement (the row space of Φ).
    constraints: Vec<Vec<BigInt>>,
}

impl NullspaceBasis {
    /// Builds a basis object from explicit spanning vectors, which must be
    /// linearly independent.
    pub fn from_vectors(n: usize, vectors: Vec<Vec<BigRational>>) -> Result<Self> {
        if n == 0 {
            return Err(MascError::input("ambient dimension must be positive"));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(MascError::input("basis vector length differs from ambient dimension"));
        }
        let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| clear_denominators(v)).collect();
        let red = Reduction::new(rows, n);
        if red.rank() != vectors.len() {
            return Err(MascError::input("basis vectors are linearly dependent"));
        }
        let constraints = Reduction::new(red.null_vectors(), n).rows;
        Ok(NullspaceBasis { ambient_dim: n, vectors, constraints })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vectors(&self) -> &[Vec<BigRational>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// `n − dim`; equals the rank of the source matrix.
    pub fn codimension(&self) -> usize {
        self.ambient_dim - self.vectors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Exact membership test.
    pub fn contains(&self, v: &[BigRational]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let ints = clear_denominators(v);
        self.constraints.iter().all(|row| {
            row.iter().zip(&ints).fold(BigInt::zero(), |acc, (a, b)| acc + a * b).is_zero()
        })
    }

    /// Nullspace vectors supported inside `cols`, as an integer basis over the
    /// restricted coordinates (in the order of `cols`).
    pub(crate) fn restricted_null_vectors(&self, cols: &[usize]) -> Vec<Vec<BigInt>> {
        let sub: Vec<Vec<BigInt>> = self
            .constraints
            .iter()
            .map(|row| cols.iter().map(|&j| row[j].clone()).collect())
            .collect();
        if sub.is_empty() {
            // no constraints: every coordinate vector is in the space
            return (0..cols.len())
                .map(|i| (0..cols.len()).map(|j| BigInt::from((i == j) as i32)).collect())
                .collect();
        }
        Reduction::new(sub, cols.len()).null_vectors()
    }
}

/// Exact rational basis of the nullspace of `phi`, derived from its reduced
/// row echelon form. The basis is empty when `phi` has full column rank.
pub fn nullspace_basis(phi: &RealMatrix) -> Result<NullspaceBasis> {
    let red = Reduction::new(phi.integer_rows(), phi.cols);
    let vectors = red
        .null_vectors()
        .into_iter()
        .map(|v| v.into_iter().map(BigRational::from_integer).collect())
        .collect();
    Ok(NullspaceBasis { ambient_dim: phi.cols, vectors, constraints: red.rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rank_one_row() {
        let phi = RealMatrix::from_integers(1, 3, &[1, 1, 1]).unwrap();
        let b = nullspace_basis(&phi).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.codimension(), 1);
        for v in b.vectors() {
            assert!(phi.mul_vec_rational(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn directed_triangle_spans_signed_cycle() {
        // 0→1, 1→2, 2→0
        let phi = RealMatrix::from_integers(3, 3, &[-1, 0, 1, 1, -1, 0, 0, 1, -1]).unwrap();
        let b = nullspace_basis(&phi).unwrap();
        assert_eq!(b.dim(), 1);
        let v = &b.vectors()[0];
        assert!(v.iter().all(|x| x == &v[0]));
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let phi = RealMatrix::from_integers(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        let b = nullspace_basis(&phi).unwrap();
        assert!(b.is_trivial());
        assert_eq!(b.codimension(), 3);
    }

    #[test]
    fn rejects_non_finite_and_bad_shapes() {
        assert!(RealMatrix::from_f64(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(RealMatrix::from_f64(1, 2, vec![1.0, f64::INFINITY]).is_err());
        assert!(RealMatrix::from_integers(2, 2, &[1, 2, 3]).is_err());
        assert!(RealMatrix::from_integers(0, 2, &[]).is_err());
    }

    #[test]
    fn rational_entries_and_dependent_rows() {
        let e = vec![q(1, 2), q(1, 3), q(0, 1), q(1, 1), q(2, 3), q(0, 1)];
        let phi = RealMatrix::from_rationals(2, 3, e).unwrap();
        let b = nullspace_basis(&phi).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(phi.rank(), 1);
        for v in b.vectors() {
            assert!(b.contains(v));
            assert!(phi.mul_vec_rational(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn from_vectors_round_trips_constraints() {
        let phi = RealMatrix::from_integers(2, 4, &[1, 2, 0, -1, 0, 1, 1, 3]).unwrap();
        let b = nullspace_basis(&phi).unwrap();
        let again = NullspaceBasis::from_vectors(4, b.vectors().to_vec()).unwrap();
        assert_eq!(again.codimension(), 2);
        let probe: Vec<BigRational> = [1, 0, 0, 0].iter().map(|&x| q(x, 1)).collect();
        assert!(!again.contains(&probe));
        for v in b.vectors() {
            assert!(again.contains(v));
        }
        let dep = vec![b.vectors()[0].clone(), b.vectors()[0].clone()];
        assert!(NullspaceBasis::from_vectors(4, dep).is_err());
    }

    #[test]
    fn float_entries_are_treated_exactly() {
        let phi = RealMatrix::from_f64(1, 2, vec![0.1, 0.2]).unwrap();
        let b = nullspace_basis(&phi).unwrap();
        assert_eq!(b.dim(), 1);
        assert!(phi.mul_vec_rational(&b.vectors()[0]).iter().all(Zero::is_zero));
    }
}
