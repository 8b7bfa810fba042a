//! Labeled square matrices with exact entries, and the matrix kernel:
//! submatrix extraction, determinant, rank and Pfaffian.
//!
//! Determinants over the rationals use fraction-free (Bareiss) elimination on
//! a common-denominator integer lift; over GF(p) plain elimination. The
//! Pfaffian expands along the first row, which is fine for the desk scale
//! this crate targets (n <= 16).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::subsets;

/// A square matrix with rows and columns indexed by an ordered label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    spec: FieldSpec,
    labels: Vec<String>,
    entries: Vec<FieldElement>, // row-major
}

impl Matrix {
    pub fn new(spec: FieldSpec, labels: Vec<String>, entries: Vec<FieldElement>) -> Result<Self> {
        let n = labels.len();
        if entries.len() != n * n {
            return Err(Error::NotSquare {
                rows: if n == 0 { entries.len() } else { entries.len() / n },
                cols: n,
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] {
                    return Err(Error::LabelClash(labels[i].clone()));
                }
            }
        }
        for e in &entries {
            if e.spec() != spec {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(Matrix { spec, labels, entries })
    }

    /// Builds an n x n matrix from a function of (row, col).
    pub fn from_fn(
        spec: FieldSpec,
        labels: Vec<String>,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Result<Self> {
        let n = labels.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix::new(spec, labels, entries)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> &FieldElement {
        &self.entries[row * self.n() + col]
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn full_mask(&self) -> u32 {
        subsets::full_mask(self.n())
    }

    pub fn labels_for(&self, mask: u32) -> Vec<String> {
        subsets::indices(mask)
            .into_iter()
            .map(|i| self.labels[i].clone())
            .collect()
    }

    pub fn mask_of_labels(&self, labels: &[String]) -> Result<u32> {
        let mut mask = 0u32;
        for l in labels {
            mask |= 1 << self.label_index(l)?;
        }
        Ok(mask)
    }

    /// The principal submatrix A[X]; label order is inherited.
    pub fn principal(&self, mask: u32) -> Matrix {
        let idx = subsets::indices(mask & self.full_mask());
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &i in &idx {
            for &j in &idx {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { spec: self.spec, labels, entries }
    }

    /// The rectangular submatrix A[X, Y] with row indices in `rows` and
    /// column indices in `cols`.
    pub fn block(&self, rows: u32, cols: u32) -> Block {
        let ri = subsets::indices(rows & self.full_mask());
        let ci = subsets::indices(cols & self.full_mask());
        let mut entries = Vec::with_capacity(ri.len() * ci.len());
        for &i in &ri {
            for &j in &ci {
                entries.push(self.get(i, j).clone());
            }
        }
        Block {
            spec: self.spec,
            rows: ri.len(),
            cols: ci.len(),
            entries,
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.labels.clone(), |i, j| self.get(j, i).clone())
            .expect("transpose preserves shape")
    }

    pub fn is_skew(&self) -> bool {
        self.skew_violation().is_none()
    }

    /// First position breaking a_ii = 0 or a_ij = -a_ji, if any.
    pub fn skew_violation(&self) -> Option<(usize, usize)> {
        let n = self.n();
        for i in 0..n {
            if !self.get(i, i).is_zero() {
                return Some((i, i));
            }
            for j in i + 1..n {
                if *self.get(i, j) != -self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Whether all off-diagonal entries are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub dense: bool,
    /// First off-diagonal zero in row-major order, when present.
    pub zero_pair: Option<(String, String)>,
}

pub fn density_report(m: &Matrix) -> DensityReport {
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            if i != j && m.get(i, j).is_zero() {
                return DensityReport {
                    dense: false,
                    zero_pair: Some((m.labels()[i].clone(), m.labels()[j].clone())),
                };
            }
        }
    }
    DensityReport { dense: true, zero_pair: None }
}

/// A skew-symmetric matrix: zero diagonal and a_ij = -a_ji, validated at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if let Some((i, j)) = m.skew_violation() {
            return Err(Error::SkewViolation {
                row: m.labels()[i].clone(),
                col: m.labels()[j].clone(),
            });
        }
        Ok(SkewMatrix(m))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Principal submatrices of skew matrices stay skew.
    pub fn principal(&self, mask: u32) -> SkewMatrix {
        SkewMatrix(self.0.principal(mask))
    }

    pub fn transpose(&self) -> SkewMatrix {
        SkewMatrix(self.0.transpose())
    }
}

impl std::ops::Deref for SkewMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// A rectangular block extracted from a labeled matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl Block {
    pub fn new(spec: FieldSpec, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Block { spec, rows, cols, entries }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact rank by elimination over the field.
    pub fn rank(&self) -> usize {
        let mut work = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let at = |w: &Vec<FieldElement>, i: usize, j: usize| w[i * cols + j].clone();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pivot_row) = (r..rows).find(|&i| !at(&work, i, c).is_zero()) else {
                continue;
            };
            if pivot_row != r {
                for j in 0..cols {
                    work.swap(r * cols + j, pivot_row * cols + j);
                }
            }
            let pivot = at(&work, r, c);
            for i in r + 1..rows {
                let head = at(&work, i, c);
                if head.is_zero() {
                    continue;
                }
                let factor = &head / &pivot;
                for j in c..cols {
                    let v = at(&work, i, j);
                    work[i * cols + j] = &v - &(&factor * &at(&work, r, j));
                }
            }
            r += 1;
        }
        r
    }
}

pub fn rank(m: &Matrix) -> usize {
    m.block(m.full_mask(), m.full_mask()).rank()
}

/// Exact determinant. The empty matrix has determinant 1.
pub fn determinant(m: &Matrix) -> FieldElement {
    match m.spec() {
        FieldSpec::Rationals => det_bareiss_rational(m),
        FieldSpec::Prime(p) => det_prime(m, p),
    }
}

fn det_bareiss_rational(m: &Matrix) -> FieldElement {
    let n = m.n();
    let spec = m.spec();
    if n == 0 {
        return spec.one();
    }
    // Common-denominator integer lift.
    let mut den = BigInt::one();
    for i in 0..n {
        for j in 0..n {
            let FieldElement::Rational(r) = m.get(i, j) else { unreachable!() };
            den = den.lcm(r.denom());
        }
    }
    let mut g: Vec<BigInt> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let FieldElement::Rational(r) = m.get(i, j) else { unreachable!() };
            g.push(r.numer() * (&den / r.denom()));
        }
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if g[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !g[i * n + k].is_zero()) else {
                return spec.zero();
            };
            for j in 0..n {
                g.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &g[i * n + j] * &g[k * n + k] - &g[i * n + k] * &g[k * n + j];
                g[i * n + j] = num / &prev; // exact by Bareiss
            }
        }
        prev = g[k * n + k].clone();
    }
    let mut det_lift = g[(n - 1) * n + (n - 1)].clone();
    if sign < 0 {
        det_lift = -det_lift;
    }
    let mut scale = BigInt::one();
    for _ in 0..n {
        scale *= &den;
    }
    FieldElement::Rational(BigRational::new(det_lift, scale))
}

fn det_prime(m: &Matrix, p: u64) -> FieldElement {
    let n = m.n();
    let spec = m.spec();
    if n == 0 {
        return spec.one();
    }
    let mut g: Vec<u64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let FieldElement::Prime { value, .. } = m.get(i, j) else { unreachable!() };
            g.push(*value);
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let mut det = 1u64;
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&i| g[i * n + k] != 0) else {
            return spec.zero();
        };
        if pivot_row != k {
            for j in 0..n {
                g.swap(k * n + j, pivot_row * n + j);
            }
            det = p - det;
        }
        let pivot = g[k * n + k];
        det = mul(det, pivot);
        let inv = pow(pivot, p - 2);
        for i in k + 1..n {
            if g[i * n + k] == 0 {
                continue;
            }
            let factor = mul(g[i * n + k], inv);
            for j in k..n {
                let sub = mul(factor, g[k * n + j]);
                g[i * n + j] = (g[i * n + j] + p - sub) % p;
            }
        }
    }
    FieldElement::Prime { modulus: p, value: det % p }
}

/// Pfaffian by expansion along the first row. Odd order returns 0 by
/// convention; pf(A)^2 = det(A) for even order.
pub fn pfaffian(a: &SkewMatrix) -> FieldElement {
    let n = a.n();
    let spec = a.spec();
    if n % 2 == 1 {
        return spec.zero();
    }
    let idx: Vec<usize> = (0..n).collect();
    pf_rec(a.matrix(), &idx)
}

fn pf_rec(m: &Matrix, idx: &[usize]) -> FieldElement {
    let spec = m.spec();
    if idx.is_empty() {
        return spec.one();
    }
    let i0 = idx[0];
    let mut acc = spec.zero();
    for (t, &j) in idx[1..].iter().enumerate() {
        let a0j = m.get(i0, j);
        if a0j.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .copied()
            .filter(|&x| x != j)
            .collect();
        let term = a0j * &pf_rec(m, &rest);
        acc = if t % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Label appended by [`extend_infinity`].
pub const INFINITY_LABEL: &str = "∞";

/// The extension A^inf: one extra label with a row of 1s and a column of -1s.
pub fn extend_infinity(a: &SkewMatrix) -> Result<SkewMatrix> {
    if a.labels().iter().any(|l| l == INFINITY_LABEL) {
        return Err(Error::LabelClash(INFINITY_LABEL.to_string()));
    }
    let n = a.n();
    let spec = a.spec();
    let mut labels = a.labels().to_vec();
    labels.push(INFINITY_LABEL.to_string());
    let one = spec.one();
    let minus_one = -spec.one();
    let m = Matrix::from_fn(spec, labels, |i, j| {
        if i < n && j < n {
            a.get(i, j).clone()
        } else if i == j {
            spec.zero()
        } else if i == n {
            one.clone()
        } else {
            minus_one.clone()
        }
    })?;
    SkewMatrix::new(m)
}

/// Convenience labels "1", "2", .., "n".
pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}
