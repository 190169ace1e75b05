//! The real wedge square at truncation `n`, the `J∘` involution, and the
//! curvature operator as a quadratic form and as a dense matrix.
//!
//! Basis layout: every `∂x_i∧∂x_j` (`i<j`, lexicographic), then every
//! `∂x_i∧∂y_j` (row-major), then every `∂y_i∧∂y_j` (`i<j`).

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WpError};
use crate::tensor::TensorCache;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WedgeLabel {
    Xx { i: u32, j: u32 },
    Xy { i: u32, j: u32 },
    Yy { i: u32, j: u32 },
}

impl std::fmt::Display for WedgeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Xx { i, j } => write!(f, "x{i}^x{j}"),
            Self::Xy { i, j } => write!(f, "x{i}^y{j}"),
            Self::Yy { i, j } => write!(f, "y{i}^y{j}"),
        }
    }
}

pub fn wedge_dimension(n: usize) -> usize {
    n * (2 * n - 1)
}

pub fn wedge_labels(n: usize) -> Vec<WedgeLabel> {
    let n32 = n as u32;
    let pairs = || (1..=n32).flat_map(move |i| (i + 1..=n32).map(move |j| (i, j)));
    let mut out: Vec<WedgeLabel> = pairs().map(|(i, j)| WedgeLabel::Xx { i, j }).collect();
    out.extend((1..=n32).flat_map(|i| (1..=n32).map(move |j| WedgeLabel::Xy { i, j })));
    out.extend(pairs().map(|(i, j)| WedgeLabel::Yy { i, j }));
    out
}

/// Position of the pair `i<j` (1-based) in the strict upper triangle.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeVector {
    pub n: usize,
    /// `∂x_i∧∂x_j`, `i<j`
    pub a: Vec<f64>,
    /// `∂x_i∧∂y_j`, row-major `n × n`
    pub b: Vec<f64>,
    /// `∂y_i∧∂y_j`, `i<j`
    pub c: Vec<f64>,
}

impl WedgeVector {
    pub fn zeros(n: usize) -> Self {
        let p = n * n.saturating_sub(1) / 2;
        Self { n, a: vec![0.0; p], b: vec![0.0; n * n], c: vec![0.0; p] }
    }

    pub fn dimension(&self) -> usize {
        wedge_dimension(self.n)
    }

    pub fn from_flat(n: usize, v: &[f64]) -> Result<Self> {
        if v.len() != wedge_dimension(n) {
            return Err(WpError::Domain(format!("expected {} coefficients, got {}", wedge_dimension(n), v.len())));
        }
        let p = n * n.saturating_sub(1) / 2;
        Ok(Self { n, a: v[..p].to_vec(), b: v[p..p + n * n].to_vec(), c: v[p + n * n..].to_vec() })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.a.clone();
        v.extend(&self.b);
        v.extend(&self.c);
        v
    }

    pub fn basis(n: usize, alpha: usize) -> Result<Self> {
        let mut v = vec![0.0; wedge_dimension(n)];
        *v.get_mut(alpha).ok_or_else(|| WpError::Domain(format!("basis index {alpha} out of range")))? = 1.0;
        Self::from_flat(n, &v)
    }

    pub fn unit(n: usize, label: WedgeLabel) -> Result<Self> {
        let alpha = wedge_labels(n)
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| WpError::Domain(format!("{label} is not a basis element at truncation {n}")))?;
        Self::basis(n, alpha)
    }

    pub fn a_at(&self, i: usize, j: usize) -> f64 {
        self.a[pair_index(self.n, i, j)]
    }

    pub fn c_at(&self, i: usize, j: usize) -> f64 {
        self.c[pair_index(self.n, i, j)]
    }

    pub fn b_at(&self, i: usize, j: usize) -> f64 {
        self.b[(i - 1) * self.n + (j - 1)]
    }

    pub fn norm_sq(&self) -> f64 {
        self.to_flat().iter().map(|x| x * x).sum()
    }

    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(WpError::TruncationMismatch(self.n, other.n));
        }
        let v: Vec<f64> = self.to_flat().iter().zip(other.to_flat()).map(|(x, y)| x + s * y).collect();
        Self::from_flat(self.n, &v)
    }

    pub fn scale(&self, s: f64) -> Self {
        let v: Vec<f64> = self.to_flat().iter().map(|x| s * x).collect();
        Self::from_flat(self.n, &v).expect("same layout")
    }
}

/// Euclidean pairing in which the three blocks are mutually orthogonal
/// and each basis bivector has unit length.
pub fn wedge_inner(u: &WedgeVector, v: &WedgeVector) -> Result<f64> {
    if u.n != v.n {
        return Err(WpError::TruncationMismatch(u.n, v.n));
    }
    Ok(u.to_flat().iter().zip(v.to_flat()).map(|(x, y)| x * y).sum())
}

/// `J∘`: `x∧x ↔ y∧y`, `∂x_i∧∂y_j ↦ ∂x_j∧∂y_i`.
pub fn j_action(v: &WedgeVector) -> WedgeVector {
    let n = v.n;
    let mut b = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            b[j * n + i] = v.b[i * n + j];
        }
    }
    WedgeVector { n, a: v.c.clone(), b, c: v.a.clone() }
}

/// Coefficient matrices entering the quadratic form: `d_ij = a_ij + c_ij`
/// on `i<j` (zero elsewhere) and the full `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedForm {
    pub n: usize,
    pub d: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

pub fn reduce_to_ab(v: &WedgeVector) -> ReducedForm {
    let n = v.n;
    let mut d = DMatrix::zeros(n, n);
    for i in 1..=n {
        for j in i + 1..=n {
            d[(i - 1, j - 1)] = v.a_at(i, j) + v.c_at(i, j);
        }
    }
    let b = DMatrix::from_row_slice(n, n, &v.b);
    ReducedForm { n, d, b }
}

fn nonzeros(m: &DMatrix<f64>) -> Vec<(u32, u32, f64)> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                out.push((i as u32 + 1, j as u32 + 1, v));
            }
        }
    }
    out
}

/// `Q̃(A+B, A+B)` from tensor entries.
///
/// The `A`-`B` cross term carries a factor `-i` in front of a real sum
/// that must vanish for the form to be real; it is evaluated and checked.
pub fn quadratic_form(r: &ReducedForm, cache: &TensorCache) -> Result<f64> {
    let t = |i: u32, j: u32, k: u32, l: u32| cache.require([i, j, k, l]);
    let dn = nonzeros(&r.d);
    let bn = nonzeros(&r.b);

    let mut qa = 0.0;
    for &(i, j, x) in &dn {
        for &(k, l, y) in &dn {
            let w = t(i, j, k, l)? - t(i, j, l, k)? - t(j, i, k, l)? + t(j, i, l, k)? + 2.0 * t(i, l, k, j)?
                - 2.0 * t(i, k, l, j)?;
            qa += x * y * w;
        }
    }
    let mut qb = 0.0;
    for &(i, j, x) in &bn {
        for &(k, l, y) in &bn {
            let w = t(i, j, k, l)? + t(i, j, l, k)? + t(j, i, k, l)? + t(j, i, l, k)? + 2.0 * t(i, l, k, j)?
                + 2.0 * t(i, k, l, j)?;
            qb -= x * y * w;
        }
    }
    let mut cross = 0.0;
    let mut scale = 0.0;
    for &(i, j, x) in &dn {
        for &(k, l, y) in &bn {
            let terms = [
                -t(i, j, k, l)?,
                -t(i, l, k, j)?,
                -t(i, j, l, k)?,
                -t(i, k, l, j)?,
                t(j, i, k, l)?,
                t(j, l, k, i)?,
                t(j, i, l, k)?,
                t(j, k, l, i)?,
            ];
            cross += x * y * terms.iter().sum::<f64>();
            scale += (x * y).abs() * terms.iter().map(|v| v.abs()).sum::<f64>();
        }
    }
    if cross.abs() > 1e-12 * scale.max(1.0) {
        return Err(WpError::NonReal { index: [0; 4], residue: cross.abs() });
    }
    // Q̃(A,B) = -i · cross has zero real part
    Ok(qa + qb)
}

pub fn wedge_quadratic_form(v: &WedgeVector, cache: &TensorCache) -> Result<f64> {
    quadratic_form(&reduce_to_ab(v), cache)
}

/// Polarized bilinear form `¼[q(u+v) - q(u-v)]`.
pub fn wedge_bilinear_form(u: &WedgeVector, v: &WedgeVector, cache: &TensorCache) -> Result<f64> {
    let plus = wedge_quadratic_form(&u.axpy(1.0, v)?, cache)?;
    let minus = wedge_quadratic_form(&u.axpy(-1.0, v)?, cache)?;
    Ok(0.25 * (plus - minus))
}

/// Dense symmetric matrix of `Q̃` in the wedge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub n: usize,
    pub matrix: DMatrix<f64>,
    pub labels: Vec<WedgeLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSidecar {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub dimension: usize,
    pub basis: Vec<IndexedLabel>,
    pub tensor_hash: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedLabel {
    pub index: usize,
    #[serde(flatten)]
    pub label: WedgeLabel,
}

pub const OPERATOR_FORMAT: &str = "wp-operator";

/// Sidecar path: `<csv path>.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

impl OperatorMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn form(&self, v: &[f64]) -> f64 {
        let x = DVector::from_column_slice(v);
        (x.transpose() * &self.matrix * &x)[(0, 0)]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn sidecar(&self, tensor_hash: Option<String>) -> OperatorSidecar {
        OperatorSidecar {
            format: OPERATOR_FORMAT.into(),
            version: 1,
            n: self.n,
            dimension: self.dimension(),
            basis: self.labels.iter().enumerate().map(|(index, &label)| IndexedLabel { index, label }).collect(),
            tensor_hash,
        }
    }

    /// Writes the CSV and its JSON sidecar.
    pub fn save(&self, csv: &Path, tensor_hash: Option<String>) -> Result<()> {
        if let Some(dir) = csv.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(csv, self.to_csv())?;
        fs::write(sidecar_path(csv), serde_json::to_string_pretty(&self.sidecar(tensor_hash))?)?;
        Ok(())
    }

    pub fn load(csv: &Path) -> Result<Self> {
        let origin = csv.display().to_string();
        let bad = |message: String| WpError::Format { path: origin.clone(), message };
        let side: OperatorSidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(csv))?)?;
        if side.format != OPERATOR_FORMAT {
            return Err(bad(format!("sidecar format {}", side.format)));
        }
        let text = fs::read_to_string(csv)?;
        let mut values = Vec::new();
        for (r, line) in text.lines().filter(|l| !l.is_empty()).enumerate() {
            for cell in line.split(',') {
                values.push(cell.trim().parse::<f64>().map_err(|e| bad(format!("row {r}: {e}")))?);
            }
        }
        let dim = side.dimension;
        if values.len() != dim * dim {
            return Err(bad(format!("expected {} values, found {}", dim * dim, values.len())));
        }
        Ok(Self {
            n: side.n,
            matrix: DMatrix::from_row_slice(dim, dim, &values),
            labels: side.basis.into_iter().map(|l| l.label).collect(),
        })
    }
}

/// Matrix via literal polarization of [`quadratic_form`], columns in
/// parallel.
pub fn assemble_matrix(n: usize, cache: &TensorCache) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(WpError::Domain("truncation must be >= 1".into()));
    }
    let dim = wedge_dimension(n);
    let basis: Vec<WedgeVector> = (0..dim).map(|a| WedgeVector::basis(n, a)).collect::<Result<_>>()?;
    let diag: Vec<f64> = basis.par_iter().map(|e| wedge_quadratic_form(e, cache)).collect::<Result<_>>()?;
    let columns: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|beta| {
            (0..beta)
                .map(|alpha| wedge_bilinear_form(&basis[alpha], &basis[beta], cache))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(dim, dim);
    for beta in 0..dim {
        m[(beta, beta)] = diag[beta];
        for (alpha, v) in columns[beta].iter().enumerate() {
            m[(alpha, beta)] = *v;
            m[(beta, alpha)] = *v;
        }
    }
    Ok(OperatorMatrix { n, matrix: m, labels: wedge_labels(n) })
}

/// `A_i = 2^{-i/2} Σ_{k=2^i}^{2^{i+1}-1} ∂x_k∧∂y_k`.
pub fn a_vector(i: u32, n: usize) -> Result<WedgeVector> {
    let need = (1usize << (i + 1)) - 1;
    if n < need {
        return Err(WpError::TruncationTooSmall { have: n, need });
    }
    let mut v = WedgeVector::zeros(n);
    let s = 2f64.powf(-0.5 * i as f64);
    for k in (1usize << i)..=need {
        v.b[(k - 1) * n + (k - 1)] = s;
    }
    Ok(v)
}
