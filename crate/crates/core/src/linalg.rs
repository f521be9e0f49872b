//! Small dense complex linear algebra: Jacobi eigen/singular solvers and orthonormalization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 60;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        CMatrix { rows: rows.len(), cols, data: rows.concat() }
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(self.rows, cols.len(), |i, k| self[(i, cols[k])])
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `A* A`.
    pub fn gram(&self) -> CMatrix {
        self.adjoint().matmul(self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `{"rows", "cols", "re", "im"}` with nested row arrays.
    pub fn to_json_repr(&self) -> MatrixJson {
        let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..self.rows).map(|i| (0..self.cols).map(|j| f(&self[(i, j)])).collect()).collect()
        };
        MatrixJson { rows: self.rows, cols: self.cols, re: part(|z| z.re), im: part(|z| z.im) }
    }

    pub fn from_json_repr(repr: &MatrixJson) -> Result<Self> {
        let ok_shape = |m: &Vec<Vec<f64>>| m.len() == repr.rows && m.iter().all(|r| r.len() == repr.cols);
        if !ok_shape(&repr.re) || !ok_shape(&repr.im) {
            return Err(Error::DimensionMismatch { rows: repr.rows, cols: repr.cols });
        }
        Ok(CMatrix::from_fn(repr.rows, repr.cols, |i, j| Complex64::new(repr.re[i][j], repr.im[i][j])))
    }

    /// Row-major interleaved little-endian `f64` pairs `(re, im)`; no header.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.data.len() * 16);
        for z in &self.data {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
        out
    }

    pub fn from_le_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != rows * cols * 16 {
            return Err(Error::DimensionMismatch { rows, cols });
        }
        let data = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Ok(CMatrix { rows, cols, data })
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations, ascending.
///
/// Stops once the off-diagonal Frobenius norm is at most `1e-14 * ‖H‖_F`.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { rows: h.rows, cols: h.cols });
    }
    if !h.is_finite() {
        return Err(Error::NonFinite { context: "hermitian matrix" });
    }
    let n = h.rows;
    let mut a = h.clone();
    let tol = 1e-14 * h.frobenius_norm();
    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut converged = off(&a) <= tol;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate_hermitian(&mut a, p, q);
            }
        }
        sweeps += 1;
        converged = off(&a) <= tol;
    }
    if !converged {
        return Err(Error::NotConverged { what: "hermitian Jacobi", iterations: MAX_SWEEPS });
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn rotate_hermitian(a: &mut CMatrix, p: usize, q: usize) {
    let n = a.rows;
    let c = a[(p, q)];
    let mag = c.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Phase-align the pair, then apply the real symmetric rotation.
    let phase = c / mag;
    let zeta = (aqq - app) / (2.0 * mag);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;
    let e = phase.conj();
    // U = diag(1, e) · [[cs, sn], [-sn, cs]] on coordinates (p, q).
    let (u_pp, u_pq, u_qp, u_qq) = (Complex64::new(cs, 0.0), Complex64::new(sn, 0.0), -e * sn, e * cs);
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let np = arp * u_pp + arq * u_qp;
        let nq = arp * u_pq + arq * u_qq;
        a[(r, p)] = np;
        a[(r, q)] = nq;
        a[(p, r)] = np.conj();
        a[(q, r)] = nq.conj();
    }
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
}

/// Singular values by one-sided (Hestenes) Jacobi orthogonalization of the columns, descending.
///
/// Works on any `rows × cols` matrix and returns `cols` values. Small singular values keep
/// absolute accuracy near `ε · σ_max`, unlike eigenvalues of `A* A`.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite { context: "matrix entries" });
    }
    let (rows, n) = (m.rows, m.cols);
    // Column-major working copy.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    // Rounding in a length-`rows` inner product is about `rows · ε` relative; below an absolute
    // floor tied to `‖M‖_F²` a pair counts as orthogonal.
    let rel_tol = f64::EPSILON * (rows.max(1) as f64);
    let abs_tol = f64::EPSILON * f64::EPSILON * m.frobenius_norm().powi(2);
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        converged = true;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= abs_tol || g <= rel_tol * (alpha * beta).sqrt() {
                    continue;
                }
                converged = false;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cp, cq) = split_pair(&mut cols, p, q);
                for i in 0..rows {
                    let x = cp[i];
                    let y = cq[i] * phase.conj();
                    cp[i] = x * c - y * s;
                    cq[i] = (x * s + y * c) * phase;
                }
            }
        }
        sweeps += 1;
    }
    if !converged {
        return Err(Error::NotConverged { what: "one-sided Jacobi", iterations: MAX_SWEEPS });
    }
    let mut values: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

fn split_pair<T>(v: &mut [T], p: usize, q: usize) -> (&mut T, &mut T) {
    debug_assert!(p < q);
    let (lo, hi) = v.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

/// Orthonormal basis of the column span by twice-iterated modified Gram–Schmidt.
///
/// A column whose residual falls below `1e-10` of its norm is reported as rank deficient.
pub fn orthonormal_columns(m: &CMatrix) -> std::result::Result<Vec<Vec<Complex64>>, usize> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m.cols);
    for j in 0..m.cols {
        let mut v = m.column(j);
        let norm0 = norm(&v);
        for _ in 0..2 {
            for b in &basis {
                let proj: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let nv = norm(&v);
        if norm0 == 0.0 || nv <= 1e-10 * norm0 {
            return Err(j);
        }
        basis.push(v.into_iter().map(|z| z / nv).collect());
    }
    Ok(basis)
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_hermitian() {
        let h = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(1.0, -1.0), c(2.0, 0.0)]]);
        let ev = hermitian_eigenvalues(&h).unwrap();
        let r2 = 2f64.sqrt();
        assert!((ev[0] - (2.0 - r2)).abs() < 1e-14);
        assert!((ev[1] - (2.0 + r2)).abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_examples() {
        let h = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(-1.0, 0.0)]]);
        let s = singular_values(&h).unwrap();
        assert!(s.iter().all(|x| (x - 2f64.sqrt()).abs() < 1e-15));
        let ones = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]]);
        let s = singular_values(&ones).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-15 && s[1] == 0.0);
    }

    #[test]
    fn rectangular_singular_values() {
        // Columns (1, 0, 0) and (1, 1, 0): Gram [[1,1],[1,2]], eigenvalues (3 ± √5)/2.
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0); 2]]);
        let s = singular_values(&m).unwrap();
        let r5 = 5f64.sqrt();
        assert!((s[0] * s[0] - (3.0 + r5) / 2.0).abs() < 1e-14);
        assert!((s[1] * s[1] - (3.0 - r5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_finite_rejected() {
        let m = CMatrix::from_rows(&[vec![c(f64::NAN, 0.0)]]);
        assert!(matches!(singular_values(&m), Err(Error::NonFinite { .. })));
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn rank_deficiency_reported() {
        let m = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(1.0, 0.0), c(2.0, 0.0)]]);
        assert_eq!(orthonormal_columns(&m), Err(1));
    }

    #[test]
    fn binary_and_json_round_trip() {
        let m = CMatrix::from_rows(&[vec![c(1.0, -0.5), c(0.25, 3.0)], vec![c(-1.0, 0.0), c(0.0, 1e-300)]]);
        assert_eq!(CMatrix::from_le_bytes(2, 2, &m.to_le_bytes()).unwrap(), m);
        assert_eq!(&m.to_le_bytes()[..8], &1.0f64.to_le_bytes());
        assert_eq!(CMatrix::from_json_repr(&m.to_json_repr()).unwrap(), m);
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = CMatrix> {
        (1..=max).prop_flat_map(|n| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
                .prop_map(move |v| CMatrix::from_fn(n, n, |i, j| c(v[i * n + j].0, v[i * n + j].1)))
        })
    }

    proptest! {
        #[test]
        fn svd_matches_gram_eigenvalues(m in arb_matrix(7)) {
            let s = singular_values(&m).unwrap();
            let mut ev = hermitian_eigenvalues(&m.gram()).unwrap();
            ev.reverse();
            for (si, li) in s.iter().zip(&ev) {
                prop_assert!((si * si - li).abs() < 1e-10 * (1.0 + li.abs()));
            }
        }

        #[test]
        fn orthonormal_basis_is_orthonormal(m in arb_matrix(6)) {
            if let Ok(q) = orthonormal_columns(&m) {
                for i in 0..q.len() {
                    for j in 0..q.len() {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        prop_assert!((inner(&q[i], &q[j]) - c(expect, 0.0)).norm() < 1e-10);
                    }
                }
            }
        }
    }
}
