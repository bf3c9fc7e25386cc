//! Dense complex matrices at desk scale (dimension ≤ 64).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::{Error, Result};

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `e^{iθ}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Build from row-major data; panics if the length does not match.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(*x, 0.0);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[&[Complex64]]) -> Self {
        let c = columns.len();
        let r = columns.first().map_or(0, |col| col.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = *x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(k);
                let start = i * out.cols;
                for (o, b) in out.data[start..start + other.cols].iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entry magnitude off the diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    m = m.max(self[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// `‖A†A − 1‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint().matmul(self);
        p.sub(&CMatrix::identity(self.cols)).max_abs()
    }

    /// `‖AB − BA‖_F`.
    pub fn commutator_norm(&self, other: &CMatrix) -> f64 {
        self.matmul(other).sub(&other.matmul(self)).frobenius_norm()
    }

    /// Maximum entrywise distance.
    pub fn max_distance(&self, other: &CMatrix) -> f64 {
        self.sub(other).max_abs()
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap();
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f == ZERO {
                    continue;
                }
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] -= f * v;
                }
            }
        }
        det
    }

    /// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi sweeps.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert!(self.is_square(), "eigenvalues of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum();
            let scale: f64 = a.data.iter().map(|x| x.norm_sqr()).sum();
            if off <= 1e-30 * scale.max(1e-300) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag < 1e-300 {
                        continue;
                    }
                    // Phase-rotate so the (p, q) entry is real, then a real Jacobi step.
                    let phase = apq / mag;
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let theta = 0.5 * libm::atan2(2.0 * mag, aqq - app);
                    let (c, s) = (libm::cos(theta), libm::sin(theta));
                    // Columns: p' = c p − s e^{-iφ} q, q' = s e^{iφ} p + c q
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c - akq * phase.conj() * s;
                        a[(k, q)] = akp * phase * s + akq * c;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * c - aqk * phase * s;
                        a[(q, k)] = apk * phase.conj() * s + aqk * c;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        let gram = self.adjoint().matmul(self);
        let top = gram.hermitian_eigenvalues().last().copied().unwrap_or(0.0);
        libm::sqrt(top.max(0.0))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Default tolerance on `U†U = 1`.
pub const UNITARY_TOL: f64 = 1e-10;

/// A square matrix known to be unitary within [`UNITARY_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct SquareUnitary(CMatrix);

impl SquareUnitary {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, UNITARY_TOL)
    }

    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonUnitary(f64::INFINITY));
        }
        let dev = m.unitarity_deviation();
        if dev.is_nan() || dev > tol {
            return Err(Error::NonUnitary(dev));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    /// Wrap without checking; the caller guarantees unitarity by construction.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> SquareUnitary {
        Self(self.0.adjoint())
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &SquareUnitary) -> SquareUnitary {
        Self(self.0.matmul(&other.0))
    }
}

/// Compare two matrices up to one global phase.
///
/// The phase is fixed by the largest-magnitude entry of `expected`; returns the
/// maximum entrywise deviation after alignment.
pub fn distance_up_to_phase(actual: &CMatrix, expected: &CMatrix) -> f64 {
    assert_eq!((actual.rows(), actual.cols()), (expected.rows(), expected.cols()));
    let (idx, _) = expected
        .data()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .unwrap_or((0, &ZERO));
    let e = expected.data()[idx];
    let a = actual.data()[idx];
    if e.norm() == 0.0 || a.norm() == 0.0 {
        return actual.max_distance(expected);
    }
    let phase = (e / a) / (e / a).norm();
    actual.scale(phase).max_distance(expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn determinant_small() {
        let m = CMatrix::from_rows(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(4.0, -1.0)]);
        // (1+i)(4−i) − 2·3i = 5 + 3i − 6i
        let d = m.determinant();
        assert!((d - c(5.0, -3.0)).norm() < 1e-14);
        assert!((CMatrix::identity(5).determinant() - ONE).norm() < 1e-15);
        let singular = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(singular.determinant().norm() < 1e-14);
    }

    #[test]
    fn hermitian_spectrum() {
        // Pauli-y has eigenvalues ±1
        let y = CMatrix::from_rows(2, 2, vec![ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]);
        let ev = y.hermitian_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);

        let h = CMatrix::from_rows(
            3,
            3,
            vec![
                c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.5),
                c(1.0, -1.0), c(3.0, 0.0), c(-1.0, 0.0),
                c(0.0, -0.5), c(-1.0, 0.0), c(1.0, 0.0),
            ],
        );
        let ev = h.hermitian_eigenvalues();
        // trace and det are preserved
        assert!((ev.iter().sum::<f64>() - 6.0).abs() < 1e-12);
        let prod: f64 = ev.iter().product();
        assert!((prod - h.determinant().re).abs() < 1e-10);
    }

    #[test]
    fn spectral_norm_of_rectangular() {
        let m = CMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 4.0], &[0.0, 0.0]]);
        assert!((m.spectral_norm() - 4.0).abs() < 1e-12);
        assert_eq!(CMatrix::zeros(3, 2).spectral_norm(), 0.0);
    }

    #[test]
    fn unitary_check() {
        let h = 1.0 / libm::sqrt(2.0);
        let had = CMatrix::from_real_rows(&[&[h, h], &[h, -h]]);
        assert!(SquareUnitary::new(had).is_ok());
        let bad = CMatrix::from_real_rows(&[&[1.0, 0.1], &[0.0, 1.0]]);
        assert!(matches!(SquareUnitary::new(bad), Err(Error::NonUnitary(_))));
    }

    #[test]
    fn global_phase_comparison() {
        let a = CMatrix::from_diagonal(&[ONE, cis(0.3)]);
        let b = a.scale(cis(1.7));
        assert!(distance_up_to_phase(&b, &a) < 1e-15);
        let other = CMatrix::from_diagonal(&[ONE, cis(0.4)]);
        assert!(distance_up_to_phase(&other, &a) > 0.05);
    }
}
