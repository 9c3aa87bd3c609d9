//! Exact integer matrices and Hermite normal forms.

use serde::{Deserialize, Serialize};

use crate::decompose::Matrix;
use crate::error::{Error, Result};

/// An `n × n` integer matrix of determinant one, stored row-major.
///
/// Serializes as the list of its rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntegerMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    /// Checked constructor: `data` is row-major and the determinant must be
    /// exactly one.
    pub fn new(n: usize, data: Vec<i64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: data.len(),
            });
        }
        let m = Self { n, data };
        let det = m.determinant();
        if det != 1 {
            return Err(Error::NotUnimodular(det as f64));
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "matrix rows must form a square".into(),
            ));
        }
        Self::new(n, rows.concat())
    }

    /// No determinant check; callers guarantee `det = ±1` as appropriate.
    pub(crate) fn from_raw(n: usize, data: Vec<i64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { n, data }
    }

    /// `I + k·e_{ij}` for `i ≠ j` (zero-based).
    pub fn elementary(n: usize, i: usize, j: usize, k: i64) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { index: i.max(j), n });
        }
        if i == j {
            return Err(Error::InvalidArgument(
                "elementary matrix needs i != j".into(),
            ));
        }
        let mut m = Self::identity(n);
        m.data[i * n + j] = k;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub(crate) fn from_columns(cols: &[Vec<i64>]) -> Self {
        let n = cols.len();
        let mut data = vec![0; n * n];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                data[i * n + j] = c[i];
            }
        }
        Self { n, data }
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Exact determinant (fraction-free Gaussian elimination).
    pub fn determinant(&self) -> i128 {
        let m: Vec<Vec<i128>> = self
            .data
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        bareiss_det(m).expect("determinant overflow")
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s: i128 = (0..n)
                    .map(|k| self.get(i, k) as i128 * other.get(k, j) as i128)
                    .sum();
                data[i * n + j] = i64::try_from(s)
                    .map_err(|_| Error::Resource("integer matrix entry overflow".into()))?;
            }
        }
        Ok(Self { n, data })
    }

    /// `E_{ij}(k) · self`, i.e. row `i` += `k`·row `j`. `None` on overflow.
    pub fn left_elementary(&self, i: usize, j: usize, k: i64) -> Option<Self> {
        let n = self.n;
        let mut data = self.data.clone();
        for c in 0..n {
            let add = k.checked_mul(self.data[j * n + c])?;
            data[i * n + c] = data[i * n + c].checked_add(add)?;
        }
        Some(Self { n, data })
    }

    /// Exact inverse. For determinant one this is the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        if n == 1 {
            return Ok(self.clone());
        }
        let det = self.determinant();
        if det.abs() != 1 {
            return Err(Error::NotUnimodular(det as f64));
        }
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                // inv[i][j] = (-1)^{i+j} det(minor without row j, column i) / det
                let minor: Vec<Vec<i128>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != i)
                            .map(|c| self.get(r, c) as i128)
                            .collect()
                    })
                    .collect();
                let cof = bareiss_det(minor)
                    .ok_or_else(|| Error::Resource("integer overflow in inverse".into()))?;
                let signed = if (i + j) % 2 == 0 { cof } else { -cof };
                data[i * n + j] = i64::try_from(signed * det)
                    .map_err(|_| Error::Resource("integer overflow in inverse".into()))?;
            }
        }
        Ok(Self { n, data })
    }

    pub fn to_f64(&self) -> Matrix {
        Matrix::from_row_iterator(self.n, self.n, self.data.iter().map(|&x| x as f64))
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntegerMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_rows(&rows)
    }
}

impl From<IntegerMatrix> for Vec<Vec<i64>> {
    fn from(m: IntegerMatrix) -> Self {
        m.rows()
    }
}

/// Fraction-free determinant; `None` on `i128` overflow.
pub(crate) fn bareiss_det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon
/// form with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped, so the result is a basis.
pub fn hermite_rows(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| a[i][col] != 0)
                .min_by_key(|&i| a[i][col].abs());
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if a[i][col] != 0 {
                    let q = a[i][col].div_euclid(a[r][col]);
                    let pr = a[r].clone();
                    a[i].iter_mut().zip(&pr).for_each(|(x, y)| *x -= q * y);
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
        }
        let pr = a[r].clone();
        for i in 0..r {
            let q = a[i][col].div_euclid(pr[col]);
            a[i].iter_mut().zip(&pr).for_each(|(x, y)| *x -= q * y);
        }
        r += 1;
    }
    a.truncate(r);
    a.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| i64::try_from(x).expect("Hermite form entry overflow"))
                .collect()
        })
        .collect()
}

/// Reduces `v` modulo the lattice with row-style Hermite basis `hnf`.
pub(crate) fn reduce_mod_hermite(v: &[i64], hnf: &[Vec<i64>]) -> Vec<i64> {
    let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in hnf {
        let (c, d) = row
            .iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(c, &d)| (c, d as i128))
            .expect("Hermite rows are nonzero");
        let q = v[c].div_euclid(d);
        if q != 0 {
            v.iter_mut()
                .zip(row)
                .for_each(|(x, &y)| *x -= q * y as i128);
        }
    }
    v.into_iter()
        .map(|x| i64::try_from(x).expect("reduction overflow"))
        .collect()
}

/// `gcd` of all maximal minors of the `n × p` matrix with the given columns;
/// the columns span a primitive sublattice iff this is one.
pub(crate) fn minors_gcd(cols: &[Vec<i64>]) -> i128 {
    let p = cols.len();
    let n = cols.first().map_or(0, |c| c.len());
    let mut g = 0i128;
    let mut rows: Vec<usize> = (0..p).collect();
    loop {
        let m: Vec<Vec<i128>> = rows
            .iter()
            .map(|&r| cols.iter().map(|c| c[r] as i128).collect())
            .collect();
        g = gcd(g, bareiss_det(m).expect("minor overflow"));
        if g == 1 {
            return 1;
        }
        // next combination of p rows out of n
        let mut i = p;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if rows[i] < n - p + i {
                rows[i] += 1;
                for k in i + 1..p {
                    rows[k] = rows[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Exact determinant of the Gram matrix of `cols`, `None` on overflow.
pub(crate) fn gram_det(cols: &[Vec<i64>]) -> Option<i128> {
    let p = cols.len();
    let mut g = vec![vec![0i128; p]; p];
    for a in 0..p {
        for b in a..p {
            let mut s = 0i128;
            for (x, y) in cols[a].iter().zip(&cols[b]) {
                s = s.checked_add((*x as i128).checked_mul(*y as i128)?)?;
            }
            g[a][b] = s;
            g[b][a] = s;
        }
    }
    bareiss_det(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = IntegerMatrix::from_rows(&[vec![2, 3, 1], vec![1, 2, 1], vec![0, 0, 1]]).unwrap();
        assert_eq!(m.determinant(), 1);
        let inv = m.inverse().unwrap();
        assert_eq!(m.checked_mul(&inv).unwrap(), IntegerMatrix::identity(3));
        assert!(IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn elementary_left_action() {
        let g = IntegerMatrix::from_rows(&[vec![1, 2], vec![3, 7]]).unwrap();
        let e = IntegerMatrix::elementary(2, 0, 1, -1).unwrap();
        assert_eq!(
            g.left_elementary(0, 1, -1).unwrap(),
            e.checked_mul(&g).unwrap()
        );
    }

    #[test]
    fn hermite_of_known_lattices() {
        assert_eq!(hermite_rows(&[vec![1, 0]]), vec![vec![1, 0]]);
        assert_eq!(hermite_rows(&[vec![-1, -1]]), vec![vec![1, 1]]);
        // Z(2,4) + Z(1,3) = Z(1,1) + Z(0,2)
        assert_eq!(
            hermite_rows(&[vec![2, 4], vec![1, 3]]),
            vec![vec![1, 1], vec![0, 2]]
        );
        assert_eq!(
            hermite_rows(&[vec![1, 2, 3], vec![2, 4, 6]]),
            vec![vec![1, 2, 3]]
        );
    }

    #[test]
    fn reduction_is_canonical() {
        let h = hermite_rows(&[vec![1, 1, 0], vec![0, 2, 1]]);
        let v = vec![5, -3, 7];
        let w: Vec<i64> = v
            .iter()
            .zip(&[3 * 1 + 0, 3 * 1 - 2 * 2, -2])
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(reduce_mod_hermite(&v, &h), reduce_mod_hermite(&w, &h));
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(12, 18), (-7, 3), (0, 5), (5, 0), (-4, -6)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    fn primitive_sublattices() {
        assert_eq!(minors_gcd(&[vec![1, 1, 0]]), 1);
        assert_eq!(minors_gcd(&[vec![2, 4, 0]]), 2);
        assert_eq!(minors_gcd(&[vec![1, 0, 0], vec![0, 2, 0]]), 2);
        assert_eq!(minors_gcd(&[vec![1, 0, 0], vec![1, 1, 5]]), 1);
    }
}
