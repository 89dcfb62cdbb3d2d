//! Dense complex linear algebra helpers shared by the other modules.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Tensor products use the
//! Kronecker convention where slot 1 is the left factor, so the basis vector
//! `v_i ⊗ v_j` sits at index `i·ℓ + j`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(entries: &[C64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron3(a: &CMat, b: &CMat, c: &CMat) -> CMat {
    a.kronecker(b).kronecker(c)
}

/// Integer power, negative exponents through the inverse.
pub fn mat_pow(a: &CMat, k: i64) -> Result<CMat> {
    let base = if k < 0 { inverse(a)? } else { a.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = identity(a.nrows());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    Ok(acc)
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularParameter("matrix is not invertible".into()))
}

pub fn det(a: &CMat) -> C64 {
    a.clone().lu().determinant()
}

pub fn fro(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `‖a − b‖ / max(‖b‖, tiny)` in the Frobenius norm.
pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    fro(&(a - b)) / fro(b).max(f64::MIN_POSITIVE)
}

/// Distance of `a` from the nearest scalar matrix, relative to its size.
pub fn off_scalar(a: &CMat) -> (C64, f64) {
    let n = a.nrows();
    let s = a.trace() / n as f64;
    let dev = fro(&(a - identity(n) * s));
    (s, dev / fro(a).max(f64::MIN_POSITIVE))
}

/// Frobenius inner product `⟨a, b⟩ = Σ conj(a_ij) b_ij`.
pub fn inner(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Permutation swapping tensor slots 2 and 3 of `(C^ℓ)^{⊗3}`.
pub fn swap23(ell: usize) -> CMat {
    let n = ell * ell * ell;
    let mut p = CMat::zeros(n, n);
    for i in 0..ell {
        for j in 0..ell {
            for k in 0..ell {
                p[(i * ell * ell + k * ell + j, i * ell * ell + j * ell + k)] = ONE;
            }
        }
    }
    p
}

/// Two-slot operator placed on slots (1,2), (2,3) or (1,3) of a triple product.
pub fn embed(r: &CMat, ell: usize, slots: (usize, usize)) -> Result<CMat> {
    let id = identity(ell);
    match slots {
        (1, 2) => Ok(kron(r, &id)),
        (2, 3) => Ok(kron(&id, r)),
        (1, 3) => {
            let p = swap23(ell);
            Ok(&p * kron(r, &id) * p.transpose())
        }
        other => Err(Error::InvalidInput(format!("unsupported slot pair {other:?}"))),
    }
}

/// Numerical nullspace data of a (possibly tall) linear map.
#[derive(Debug, Clone)]
pub struct NullspaceInfo {
    /// Singular values in ascending order; the smallest is re-measured as `‖A v‖`.
    pub sigmas: Vec<f64>,
    /// Right singular vector for the smallest singular value.
    pub vector: Vec<C64>,
    /// Number of singular values below `rel_tol · σ_max`.
    pub dim: usize,
}

impl NullspaceInfo {
    pub fn sigma_max(&self) -> f64 {
        self.sigmas.last().copied().unwrap_or(0.0)
    }

    /// Ratio of the second smallest to the smallest singular value.
    pub fn gap(&self) -> f64 {
        match self.sigmas.as_slice() {
            [a, b, ..] => b / a.max(f64::MIN_POSITIVE),
            _ => f64::INFINITY,
        }
    }
}

/// Sparse column-major operator, used for the intertwining systems.
#[derive(Debug, Clone, Default)]
pub struct SparseCols {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, C64)>>,
}

impl SparseCols {
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![ZERO; self.nrows];
        for (col, &xv) in self.cols.iter().zip(x) {
            for &(r, v) in col {
                y[r] += v * xv;
            }
        }
        y
    }

    /// Gram matrix `AᴴA`, accumulated row by row.
    pub fn gram(&self) -> CMat {
        let n = self.cols.len();
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                rows[r].push((j, v));
            }
        }
        let mut g = CMat::zeros(n, n);
        for row in &rows {
            for &(a, va) in row {
                for &(b, vb) in row {
                    g[(a, b)] += va.conj() * vb;
                }
            }
        }
        g
    }

    pub fn nullspace(&self, rel_tol: f64) -> NullspaceInfo {
        let n = self.cols.len();
        if n == 0 {
            return NullspaceInfo { sigmas: vec![], vector: vec![], dim: 0 };
        }
        let g = self.gram();
        let eig = nalgebra::SymmetricEigen::new(g);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut sigmas: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0).sqrt()).collect();
        let v: Vec<C64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
        let av = self.apply(&v);
        sigmas[0] = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let smax = sigmas.last().copied().unwrap_or(0.0);
        let dim = sigmas.iter().filter(|&&s| s < rel_tol * smax).count();
        NullspaceInfo { sigmas, vector: v, dim }
    }
}

/// Format a complex number as `re±imi`.
pub fn fmt_c64(z: C64) -> String {
    let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) { '-' } else { '+' };
    format!("{:e}{}{:e}i", z.re, sign, z.im.abs())
}

pub fn parse_c64(s: &str) -> Result<C64> {
    let s = s.trim();
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| Error::Parse(format!("missing imaginary unit in {s:?}")))?;
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let k = split.ok_or_else(|| Error::Parse(format!("cannot split {s:?}")))?;
    let re: f64 = body[..k].parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    let im: f64 = body[k..].parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(C64::new(re, im))
}

/// Write a matrix as TSV: one header line, then one comma-separated row per line.
pub fn to_tsv(header: &str, m: &CMat) -> String {
    let mut out = format!("# {header}\n");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_c64(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse the output of [`to_tsv`], returning the header (without `# `) and the matrix.
pub fn from_tsv(text: &str) -> Result<(String, CMat)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| Error::Parse("missing header line".into()))?
        .to_string();
    let mut rows = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let row = line.split(',').map(parse_c64).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Parse("ragged rows".into()));
    }
    Ok((header, CMat::from_fn(n, m, |i, j| rows[i][j])))
}
