//! Shared helpers for the integration suites: independent determinant
//! oracle, fixture builders, and deterministic random constructions.

#![allow(dead_code)]

use skewminor::{
    default_labels, FieldElement, FieldSpec, Matrix, SkewMatrix, SplitMix64, Witness,
};

/// Laplace-expansion determinant, independent of the library's elimination
/// code paths.
pub fn naive_det(m: &Matrix) -> FieldElement {
    fn go(spec: FieldSpec, n: usize, e: &[FieldElement]) -> FieldElement {
        if n == 0 {
            return spec.one();
        }
        let mut acc = spec.zero();
        for j in 0..n {
            if e[j].is_zero() {
                continue;
            }
            let sub: Vec<FieldElement> = (1..n)
                .flat_map(|r| (0..n).filter(|&c| c != j).map(move |c| e[r * n + c].clone()))
                .collect();
            let term = &e[j] * &go(spec, n - 1, &sub);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    go(m.spec(), m.n(), &entries_of(m))
}

fn entries_of(m: &Matrix) -> Vec<FieldElement> {
    let n = m.n();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| m.get(i, j).clone()))
        .collect()
}

/// Skew matrix with default labels from the upper-triangle entries listed
/// row by row.
pub fn skew_from_upper(spec: FieldSpec, n: usize, upper: &[i64]) -> SkewMatrix {
    assert_eq!(upper.len(), n * (n - 1) / 2);
    let mut it = upper.iter();
    let mut entries = vec![spec.zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = spec.from_i64(*it.next().unwrap());
            entries[i * n + j] = v.clone();
            entries[j * n + i] = -v;
        }
    }
    SkewMatrix::new(Matrix::new(spec, default_labels(n), entries).unwrap()).unwrap()
}

/// Dense skew matrix with all upper entries in {-1, 1}, drawn from the rng.
pub fn random_sign_skew(spec: FieldSpec, n: usize, rng: &mut SplitMix64) -> SkewMatrix {
    let upper: Vec<i64> = (0..n * (n - 1) / 2)
        .map(|_| if rng.next_u64() & 1 == 0 { 1 } else { -1 })
        .collect();
    skew_from_upper(spec, n, &upper)
}

/// Random witness with a fair transpose coin.
pub fn random_witness(labels: &[String], rng: &mut SplitMix64) -> Witness {
    let signs: Vec<i8> = (0..labels.len())
        .map(|_| if rng.next_u64() & 1 == 0 { 1 } else { -1 })
        .collect();
    let transposed = rng.next_u64() & 1 == 0;
    Witness::from_signs(labels, &signs, transposed).unwrap()
}

fn draw_nonzero(spec: FieldSpec, rng: &mut SplitMix64) -> FieldElement {
    loop {
        let r = rng.next_u64();
        let v = match spec {
            FieldSpec::Prime(p) => spec.from_i64((r % p) as i64),
            FieldSpec::Rationals => spec.from_i64((r % 21) as i64 - 10),
        };
        if !v.is_zero() {
            return v;
        }
    }
}

/// Dense skew matrix that is HL-decomposable by construction: the block on
/// the first `k` labels and the block on the rest are random dense skew,
/// and the cross block is the rank-1 outer product of nonzero vectors.
/// Returns the matrix together with the planted HL-clan mask.
pub fn planted_hl_decomposable(
    spec: FieldSpec,
    n: usize,
    k: usize,
    rng: &mut SplitMix64,
) -> (SkewMatrix, u32) {
    assert!(k >= 2 && k + 2 <= n);
    let r: Vec<FieldElement> = (0..k).map(|_| draw_nonzero(spec, rng)).collect();
    let c: Vec<FieldElement> = (0..n - k).map(|_| draw_nonzero(spec, rng)).collect();
    let mut entries = vec![spec.zero(); n * n];
    let mut put = |i: usize, j: usize, v: FieldElement| {
        entries[j * n + i] = -&v;
        entries[i * n + j] = v;
    };
    for i in 0..n {
        for j in i + 1..n {
            let v = if j < k || i >= k {
                draw_nonzero(spec, rng)
            } else {
                &r[i] * &c[j - k]
            };
            put(i, j, v);
        }
    }
    let m = Matrix::new(spec, default_labels(n), entries).unwrap();
    (SkewMatrix::new(m).unwrap(), (1u32 << k) - 1)
}

/// Skew matrix on `inner + outer` labels whose first `inner` labels form a
/// clan with every subset of it a clan: the upper triangle inside the clan
/// is the constant `alpha`, and each outside label sees the whole clan with
/// one value.
pub fn planted_clan_matrix(
    spec: FieldSpec,
    inner: usize,
    outer: usize,
    rng: &mut SplitMix64,
) -> (SkewMatrix, u32) {
    let n = inner + outer;
    let alpha = draw_nonzero(spec, rng);
    let mut entries = vec![spec.zero(); n * n];
    let mut put = |i: usize, j: usize, v: FieldElement| {
        entries[j * n + i] = -&v;
        entries[i * n + j] = v;
    };
    let cross: Vec<FieldElement> = (0..outer).map(|_| draw_nonzero(spec, rng)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let v = if j < inner {
                alpha.clone()
            } else if i < inner {
                cross[j - inner].clone()
            } else {
                draw_nonzero(spec, rng)
            };
            put(i, j, v);
        }
    }
    let m = Matrix::new(spec, default_labels(n), entries).unwrap();
    (SkewMatrix::new(m).unwrap(), (1u32 << inner) - 1)
}

/// All subset masks that are clans of `m`.
pub fn all_clans(m: &Matrix) -> Vec<u32> {
    (0..=m.full_mask())
        .filter(|&x| skewminor::is_clan(m, x))
        .collect()
}
