use num_complex::Complex64;

use crate::error::{MascError, Result};

/// Relative threshold below which a determinant is reported as numerically zero.
pub const DET_ZERO_TOL: f64 = 1e-10;

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(MascError::input(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MascError::input("non-finite complex entry"));
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Product with the conjugate transpose of `other`.
    pub fn mul_adjoint(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = Vec::with_capacity(self.rows * other.rows);
        for i in 0..self.rows {
            for k in 0..other.rows {
                out.push((0..self.cols).map(|j| self.get(i, j) * other.get(k, j).conj()).sum());
            }
        }
        ComplexMatrix { rows: self.rows, cols: other.rows, entries: out }
    }
}

/// Determinant of a square submatrix together with a numerical-zero flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinorDet {
    pub value: Complex64,
    /// `|value| <= 1e-10 · (max |entry|)^k`; for prime-order DFT minors this
    /// signals ill-conditioning rather than a true zero.
    pub numerically_zero: bool,
}

/// Determinant of `M[row_idx, col_idx]` by LU factorisation with partial pivoting.
pub fn complex_minor_det(m: &ComplexMatrix, row_idx: &[usize], col_idx: &[usize]) -> Result<MinorDet> {
    let k = row_idx.len();
    if k != col_idx.len() {
        return Err(MascError::input(format!(
            "minor needs as many rows as columns ({k} vs {})",
            col_idx.len()
        )));
    }
    if k > m.rows.min(m.cols) {
        return Err(MascError::input("minor larger than the matrix"));
    }
    if let Some(&bad) = row_idx.iter().find(|&&i| i >= m.rows) {
        return Err(MascError::input(format!("row index {bad} out of range")));
    }
    if let Some(&bad) = col_idx.iter().find(|&&j| j >= m.cols) {
        return Err(MascError::input(format!("column index {bad} out of range")));
    }
    let mut a: Vec<Complex64> = row_idx
        .iter()
        .flat_map(|&i| col_idx.iter().map(move |&j| m.get(i, j)))
        .collect();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let value = lu_det(&mut a, k);
    let numerically_zero = value.norm() <= DET_ZERO_TOL * scale.powi(k as i32);
    Ok(MinorDet { value, numerically_zero })
}

/// In-place LU determinant of a row-major `k × k` buffer.
pub(crate) fn lu_det(a: &mut [Complex64], k: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..k {
        let p = (c..k)
            .max_by(|&x, &y| a[x * k + c].norm().total_cmp(&a[y * k + c].norm()))
            .expect("non-empty pivot range");
        if a[p * k + c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            for j in 0..k {
                a.swap(p * k + j, c * k + j);
            }
            det = -det;
        }
        let piv = a[c * k + c];
        det *= piv;
        for i in (c + 1)..k {
            let f = a[i * k + c] / piv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in (c + 1)..k {
                let t = a[c * k + j];
                a[i * k + j] -= f * t;
            }
        }
    }
    det
}

/// `ξ^k` for `ξ = e^{−2πi/n}`, evaluated from the reduced angle of each power.
/// Conjugate powers `k` and `n−k` come out as exact conjugates.
pub fn unity_root(n: usize, k: usize) -> Complex64 {
    let r = k % n;
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * r == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 2 * r > n {
        return unity_root(n, n - r).conj();
    }
    let theta = -2.0 * std::f64::consts::PI * r as f64 / n as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// The unitary `n × n` DFT matrix with entries `ξ^{kl} / √n`.
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(MascError::input("DFT dimension must be positive"));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let entries = (0..n)
        .flat_map(|k| (0..n).map(move |l| unity_root(n, (k * l) % n) * scale))
        .collect();
    ComplexMatrix::new(n, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_minors_are_one() {
        for k in 1..6 {
            let mut e = vec![c(0.0, 0.0); k * k];
            for i in 0..k {
                e[i * k + i] = c(1.0, 0.0);
            }
            let m = ComplexMatrix::new(k, k, e).unwrap();
            let idx: Vec<usize> = (0..k).collect();
            let d = complex_minor_det(&m, &idx, &idx).unwrap();
            assert!((d.value - c(1.0, 0.0)).norm() < 1e-15);
            assert!(!d.numerically_zero);
        }
    }

    #[test]
    fn two_by_two_dft_has_determinant_minus_one() {
        let f = dft_matrix(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((f.get(0, 0) - c(h, 0.0)).norm() < 1e-15);
        assert!((f.get(1, 1) - c(-h, 0.0)).norm() < 1e-15);
        let d = complex_minor_det(&f, &[0, 1], &[0, 1]).unwrap();
        assert!((d.value - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn conjugate_powers_are_exact_conjugates() {
        for n in [5, 11, 19, 61] {
            for k in 0..n {
                assert_eq!(unity_root(n, k), unity_root(n, n - k).conj());
            }
        }
    }

    #[test]
    fn dft_of_one() {
        let f = dft_matrix(1).unwrap();
        assert_eq!(f.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn dft_is_unitary_with_unit_rows() {
        for n in [2, 3, 7, 16, 31, 64] {
            let f = dft_matrix(n).unwrap();
            let p = f.mul_adjoint(&f);
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((p.get(i, j) - c(want, 0.0)).norm() < 1e-12, "n={n} ({i},{j})");
                }
                let row: f64 = (0..n).map(|j| f.get(i, j).norm_sqr()).sum::<f64>().sqrt();
                assert!((row - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn prime_dft_minors_are_nonzero() {
        let n = 11;
        let f = dft_matrix(n).unwrap();
        let rows = [0, 2, 4, 7, 9];
        for cols in [[0, 1, 2, 3, 4], [1, 3, 5, 8, 10], [0, 5, 6, 7, 8]] {
            let d = complex_minor_det(&f, &rows, &cols).unwrap();
            assert!(d.value.norm() > 0.0 && !d.numerically_zero);
        }
    }

    #[test]
    fn repeated_rows_give_numerical_zero() {
        let f = dft_matrix(7).unwrap();
        let d = complex_minor_det(&f, &[1, 3, 1], &[0, 2, 5]).unwrap();
        assert!(d.numerically_zero);
        assert!(d.value.norm() <= 1e-10 * (1.0 / 7f64.sqrt()).powi(3));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let f = dft_matrix(3).unwrap();
        assert!(complex_minor_det(&f, &[0, 1], &[0]).is_err());
        assert!(complex_minor_det(&f, &[0, 1, 2, 0], &[0, 1, 2, 0]).is_err());
    }
}
