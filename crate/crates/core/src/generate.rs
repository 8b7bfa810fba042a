//! Matrix generators: the two cycle families, random dense skew matrices,
//! the flip construction on a subset, and sign-congruence application.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{default_labels, Matrix, SkewMatrix};
use crate::subsets;
use crate::witness::Witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleVariant {
    A,
    B,
}

/// The skew cycle family: a_{i,i+1} = -a_{i+1,i} = 1 along the cycle, with
/// corner a_{n,1} = 1 for variant A and b_{n,1} = -1 for variant B. Entries
/// live in the rationals. Requires even n >= 6.
pub fn gen_skew_cycle(n: usize, variant: CycleVariant) -> Result<SkewMatrix> {
    if n < 6 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "skew cycle needs an even order >= 6, got {n}"
        )));
    }
    let spec = FieldSpec::Rationals;
    let corner = match variant {
        CycleVariant::A => 1,
        CycleVariant::B => -1,
    };
    let m = Matrix::from_fn(spec, default_labels(n), |i, j| {
        if j == i + 1 {
            spec.from_i64(1)
        } else if i == j + 1 {
            spec.from_i64(-1)
        } else if i == n - 1 && j == 0 {
            spec.from_i64(corner)
        } else if i == 0 && j == n - 1 {
            spec.from_i64(-corner)
        } else {
            spec.zero()
        }
    })?;
    SkewMatrix::new(m)
}

/// The symmetric cycle family: a_{i,i+1} = a_{i+1,i} = 1 along the cycle,
/// with corner +1 for variant A and -1 for variant B. Requires n >= 4.
pub fn gen_sym_cycle(n: usize, variant: CycleVariant) -> Result<Matrix> {
    if n < 4 {
        return Err(Error::Domain(format!(
            "symmetric cycle needs order >= 4, got {n}"
        )));
    }
    let spec = FieldSpec::Rationals;
    let corner = match variant {
        CycleVariant::A => 1,
        CycleVariant::B => -1,
    };
    Matrix::from_fn(spec, default_labels(n), |i, j| {
        if j == i + 1 || i == j + 1 {
            spec.from_i64(1)
        } else if (i == n - 1 && j == 0) || (i == 0 && j == n - 1) {
            spec.from_i64(corner)
        } else {
            spec.zero()
        }
    })
}

/// The splitmix64 generator. Fixed here so golden fixtures are portable.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

/// A random dense skew-symmetric matrix, deterministic in the seed.
///
/// Upper-triangle entries are drawn row by row (i < j in row-major order)
/// by rejection sampling of nonzero values: over GF(p) a draw is reduced
/// mod p and redrawn while zero; over the rationals a draw is reduced to an
/// integer in [-10, 10] and redrawn while zero.
pub fn gen_random_dense(spec: FieldSpec, n: usize, seed: u64) -> SkewMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut draw = || loop {
        let r = rng.next_u64();
        let v = match spec {
            FieldSpec::Prime(p) => spec.from_i64((r % p) as i64),
            FieldSpec::Rationals => spec.from_i64((r % 21) as i64 - 10),
        };
        if !v.is_zero() {
            return v;
        }
    };
    let mut entries = vec![spec.zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = draw();
            entries[i * n + j] = v.clone();
            entries[j * n + i] = -v;
        }
    }
    let m = Matrix::new(spec, default_labels(n), entries).expect("generated grid is square");
    SkewMatrix::new(m).expect("generated grid is skew")
}

/// Negates every entry with both indices in X; entries with at most one
/// index in X are kept. The result is skew-symmetric.
pub fn flip_on_set(a: &SkewMatrix, mask: u32) -> SkewMatrix {
    let spec = a.spec();
    let m = Matrix::from_fn(spec, a.labels().to_vec(), |i, j| {
        let e = a.get(i, j);
        if subsets::contains(mask, i) && subsets::contains(mask, j) {
            -e
        } else {
            e.clone()
        }
    })
    .expect("flip preserves shape");
    SkewMatrix::new(m).expect("flip preserves skewness")
}

/// Computes DAD for the witness sign diagonal, transposing afterwards when
/// the witness claims Bᵗ = DAD.
pub fn apply_witness(a: &SkewMatrix, w: &Witness) -> Result<SkewMatrix> {
    let signs: Vec<i8> = a
        .labels()
        .iter()
        .map(|l| {
            w.sign(l)
                .ok_or_else(|| Error::Precondition(format!("witness has no sign for label `{l}`")))
        })
        .collect::<Result<_>>()?;
    let spec = a.spec();
    let m = Matrix::from_fn(spec, a.labels().to_vec(), |i, j| {
        let e = a.get(i, j);
        if signs[i] * signs[j] == 1 {
            e.clone()
        } else {
            -e
        }
    })?;
    let dad = SkewMatrix::new(m)?;
    Ok(if w.transposed() { dad.transpose() } else { dad })
}
