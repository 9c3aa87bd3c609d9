//! Iwasawa, Langlands and block-Cartan factorizations of `g ∈ SL_N(R)`
//! relative to a partition, and the height of `g·U·K/K` above the base
//! point.
//!
//! The five-factor frame is `g = k · exp(a_M) · c · exp(b) · u` with
//! `k ∈ SO_N`, `a_M` in the closed chamber of the block-traceless diagonal,
//! `c` block orthogonal, `b` constant on blocks and `u` block unipotent.
//!
//! Chamber convention: inside each block the entries of `a_M` are weakly
//! decreasing, so every factor `sinh(aᵢ - aⱼ)` with `i < j` of the Haar
//! density is nonnegative. Only `‖a_M‖` enters the height.

use nalgebra::{DMatrix, SVD};

use crate::algebra::{CartanVector, Partition};
use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

/// Determinant tolerance for group elements.
pub const DET_TOL: f64 = 1e-9;

/// Householder QR with the diagonal of `R` forced positive.
pub fn qr_positive(g: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.ncols(),
        });
    }
    let mut r = g.clone();
    let mut q = Matrix::identity(n, n);
    let mut v = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let vnorm2: f64 = (k..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        for j in k..n {
            let s: f64 = (k..n).map(|i| v[i] * r[(i, j)]).sum();
            for i in k..n {
                r[(i, j)] -= beta * s * v[i];
            }
        }
        for i in 0..n {
            let s: f64 = (k..n).map(|j| q[(i, j)] * v[j]).sum();
            for j in k..n {
                q[(i, j)] -= beta * s * v[j];
            }
        }
        for i in k + 1..n {
            r[(i, k)] = 0.0;
        }
    }
    let scale = g.amax().max(f64::MIN_POSITIVE);
    for i in 0..n {
        if r[(i, i)].abs() <= 1e-13 * scale {
            return Err(Error::Singular);
        }
        if r[(i, i)] < 0.0 {
            for j in 0..n {
                r[(i, j)] = -r[(i, j)];
                q[(j, i)] = -q[(j, i)];
            }
        }
    }
    Ok((q, r))
}

/// `g = (q·m) · exp(b) · u` with `q·m ∈ K·M`, `b` constant on blocks and `u`
/// block unipotent.
#[derive(Clone, Debug)]
pub struct LanglandsFactors {
    pub q: Matrix,
    /// Block diagonal, each block upper triangular with determinant one.
    pub m: Matrix,
    pub b: CartanVector,
    pub u: Matrix,
}

impl LanglandsFactors {
    pub fn km(&self) -> Matrix {
        &self.q * &self.m
    }

    pub fn reconstruct(&self) -> Matrix {
        self.km() * Matrix::from_diagonal(&self.b.exp_diagonal().into()) * &self.u
    }
}

pub fn langlands_decompose(g: &Matrix, partition: &Partition) -> Result<LanglandsFactors> {
    let n = partition.n();
    if g.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.nrows(),
        });
    }
    let (q, r) = qr_positive(g)?;
    let log_det: f64 = (0..n).map(|i| r[(i, i)].ln()).sum();
    if log_det.abs() > DET_TOL || q.determinant() < 0.0 {
        return Err(Error::NotUnimodular(g.determinant()));
    }

    let mut b = vec![0.0; n];
    let mut m = Matrix::zeros(n, n);
    let mut u = Matrix::identity(n, n);
    for block in partition.blocks() {
        let s = block.start;
        let len = block.len();
        let bk = block.clone().map(|i| r[(i, i)].ln()).sum::<f64>() / len as f64;
        b[block.clone()].iter_mut().for_each(|x| *x = bk);

        let lam = r.view((s, s), (len, len)).into_owned();
        let lam_inv = lam
            .clone()
            .solve_upper_triangular(&Matrix::identity(len, len))
            .ok_or(Error::Singular)?;
        let scale = (-bk).exp();
        m.view_mut((s, s), (len, len)).copy_from(&(lam * scale));

        let tail = n - block.end;
        if tail > 0 {
            let rest = r.view((s, block.end), (len, tail)).into_owned();
            u.view_mut((s, block.end), (len, tail))
                .copy_from(&(lam_inv * rest));
        }
    }
    // Block sums of ln r_ii are only traceless up to rounding.
    let b = CartanVector::project(b);
    Ok(LanglandsFactors { q, m, b, u })
}

/// Per-block singular value factorization `m = c₁ · exp(a_M) · c₂`.
#[derive(Clone, Debug)]
pub struct BlockCartan {
    pub c1: Matrix,
    pub a_m: CartanVector,
    pub c2: Matrix,
}

fn check_block_det(mk: &Matrix) -> Result<()> {
    let det = mk.determinant();
    if (det - 1.0).abs() > DET_TOL.max(1e-12 * mk.norm().powi(mk.nrows() as i32)) {
        return Err(Error::NotUnimodular(det));
    }
    Ok(())
}

pub fn block_cartan(m: &Matrix, partition: &Partition) -> Result<BlockCartan> {
    let n = partition.n();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.nrows(),
        });
    }
    let mut c1 = Matrix::identity(n, n);
    let mut c2 = Matrix::identity(n, n);
    let mut a = vec![0.0; n];
    for block in partition.blocks() {
        let s = block.start;
        let len = block.len();
        let mk = m.view((s, s), (len, len)).into_owned();
        check_block_det(&mk)?;
        if len == 1 {
            continue;
        }
        let svd = SVD::new(mk, true, true);
        let mut uu = svd.u.ok_or(Error::Singular)?;
        let mut vt = svd.v_t.ok_or(Error::Singular)?;
        let sv = svd.singular_values;

        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]));
        let mut u_sorted = Matrix::zeros(len, len);
        let mut vt_sorted = Matrix::zeros(len, len);
        for (dst, &src) in order.iter().enumerate() {
            u_sorted.set_column(dst, &uu.column(src));
            vt_sorted.set_row(dst, &vt.row(src));
            a[s + dst] = sv[src].ln();
        }
        uu = u_sorted;
        vt = vt_sorted;
        if uu.determinant() < 0.0 {
            let last = len - 1;
            uu.column_mut(last).neg_mut();
            vt.row_mut(last).neg_mut();
        }
        c1.view_mut((s, s), (len, len)).copy_from(&uu);
        c2.view_mut((s, s), (len, len)).copy_from(&vt);
    }
    Ok(BlockCartan {
        c1,
        a_m: CartanVector::project(a),
        c2,
    })
}

/// The five factors `g = k · exp(a_M) · c · exp(b) · u`.
#[derive(Clone, Debug)]
pub struct HorocycleFrame {
    pub k: Matrix,
    pub a_m: CartanVector,
    pub c: Matrix,
    pub b: CartanVector,
    pub u: Matrix,
}

impl HorocycleFrame {
    pub fn reconstruct(&self) -> Matrix {
        let a = Matrix::from_diagonal(&self.a_m.exp_diagonal().into());
        let b = Matrix::from_diagonal(&self.b.exp_diagonal().into());
        &self.k * a * &self.c * b * &self.u
    }

    /// `‖a_M + b‖ = √(‖a_M‖² + ‖b‖²)`.
    pub fn height(&self) -> f64 {
        (&self.a_m + &self.b).norm()
    }
}

pub fn frame(g: &Matrix, partition: &Partition) -> Result<HorocycleFrame> {
    let lf = langlands_decompose(g, partition)?;
    let bc = block_cartan(&lf.m, partition)?;
    Ok(HorocycleFrame {
        k: &lf.q * &bc.c1,
        a_m: bc.a_m,
        c: bc.c2,
        b: lf.b,
        u: lf.u,
    })
}

/// Distance from the base point to the horocycle `g·U·K/K`, together with the
/// frame it was read from.
pub fn height(g: &Matrix, partition: &Partition) -> Result<(f64, HorocycleFrame)> {
    let f = frame(g, partition)?;
    Ok((f.height(), f))
}

/// Height without building the orthogonal factors.
pub fn height_value(g: &Matrix, partition: &Partition) -> Result<f64> {
    let lf = langlands_decompose(g, partition)?;
    let mut sq = lf.b.dot(&lf.b);
    for block in partition.blocks() {
        let len = block.len();
        if len == 1 {
            continue;
        }
        let mk =
            lf.m.view((block.start, block.start), (len, len))
                .into_owned();
        check_block_det(&mk)?;
        let logs: Vec<f64> = mk.singular_values().iter().map(|s| s.ln()).collect();
        let mean = logs.iter().sum::<f64>() / len as f64;
        sq += logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>();
    }
    Ok(sq.sqrt())
}

/// `‖A‖_F`.
pub fn frobenius(a: &Matrix) -> f64 {
    a.norm()
}
