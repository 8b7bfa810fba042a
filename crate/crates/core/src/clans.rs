//! Clan and HL-clan machinery: detection, closures, clan-partitions,
//! separability and HL-indecomposability.
//!
//! Separability and HL-indecomposability sweep subsets exhaustively
//! (2^(n-1) candidates anchored at the minimum label); the documented
//! ceiling is n <= 22. Clan closure is the polynomial fast path.

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::{Matrix, SkewMatrix};
use crate::subsets;

/// Documented ceiling for the exhaustive subset sweeps in this module.
pub const CLAN_SWEEP_LIMIT: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClanKind {
    Clan,
    HlClan,
    ClanPartition,
    Indecomposable,
    HlIndecomposable,
    Separable,
    Inseparable,
}

/// A found clan / HL-clan / clan-partition, or a certificate of
/// indecomposability. Subsets are bitmasks over the matrix label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClanReport {
    pub kind: ClanKind,
    pub subset: Option<u32>,
    pub partition: Option<(u32, u32)>,
    /// The constant between the two parts of a clan-partition.
    pub constant: Option<FieldElement>,
}

impl ClanReport {
    fn verdict(kind: ClanKind) -> Self {
        ClanReport { kind, subset: None, partition: None, constant: None }
    }

    fn found(kind: ClanKind, subset: u32) -> Self {
        ClanReport { kind, subset: Some(subset), partition: None, constant: None }
    }
}

/// Trivial in the clan sense: the empty set, singletons and V.
pub fn clan_is_trivial(n: usize, mask: u32) -> bool {
    let size = mask.count_ones() as usize;
    size <= 1 || size == n
}

/// Trivial in the HL-clan sense: additionally the complements of singletons.
pub fn hl_clan_is_trivial(n: usize, mask: u32) -> bool {
    let size = mask.count_ones() as usize;
    size <= 1 || size + 1 >= n
}

/// True iff every label outside X sees all of X identically, in both the
/// row and the column direction.
pub fn is_clan(m: &Matrix, mask: u32) -> bool {
    let n = m.n();
    let mask = mask & m.full_mask();
    let inside = subsets::indices(mask);
    if inside.len() <= 1 || inside.len() == n {
        return true;
    }
    let i0 = inside[0];
    for x in 0..n {
        if subsets::contains(mask, x) {
            continue;
        }
        for &i in &inside[1..] {
            if m.get(x, i) != m.get(x, i0) || m.get(i, x) != m.get(i0, x) {
                return false;
            }
        }
    }
    true
}

/// The smallest clan containing S: grow by adding any outside label that
/// distinguishes two current members, until a fixpoint.
pub fn clan_closure(m: &Matrix, seed: u32) -> u32 {
    let n = m.n();
    let mut c = seed & m.full_mask();
    loop {
        let inside = subsets::indices(c);
        let mut grew = false;
        for x in 0..n {
            if subsets::contains(c, x) {
                continue;
            }
            let i0 = inside[0];
            let distinguishes = inside[1..].iter().any(|&i| {
                m.get(x, i) != m.get(x, i0) || m.get(i, x) != m.get(i0, x)
            });
            if distinguishes {
                c |= 1 << x;
                grew = true;
            }
        }
        if !grew {
            return c;
        }
    }
}

/// First nontrivial clan in enumeration order, found through pair closures,
/// or an indecomposability verdict. Any nontrivial clan contains a pair
/// whose closure stays inside it, so the pair sweep is complete.
pub fn find_nontrivial_clan(m: &Matrix) -> ClanReport {
    let n = m.n();
    let full = m.full_mask();
    for pair in subsets::masks_of_size(n, 2) {
        let c = clan_closure(m, pair);
        if c != full {
            return ClanReport::found(ClanKind::Clan, c);
        }
    }
    ClanReport::verdict(ClanKind::Indecomposable)
}

/// True iff both A[X, V\X] and A[V\X, X] have rank at most 1. For skew
/// matrices only one side is checked (the other is its negated transpose).
pub fn is_hl_clan(m: &Matrix, mask: u32) -> bool {
    is_hl_clan_inner(m, mask, m.is_skew())
}

fn is_hl_clan_inner(m: &Matrix, mask: u32, skew: bool) -> bool {
    let n = m.n();
    let mask = mask & m.full_mask();
    let size = mask.count_ones() as usize;
    if size <= 1 || size + 1 >= n {
        return true;
    }
    let comp = m.full_mask() & !mask;
    if m.block(mask, comp).rank() > 1 {
        return false;
    }
    skew || m.block(comp, mask).rank() <= 1
}

/// First nontrivial HL-clan in (size, lexicographic) order among subsets
/// containing the minimum label, or an HL-indecomposability verdict.
/// Matrices with fewer than 4 labels are vacuously HL-indecomposable.
pub fn hl_indecomposable(m: &Matrix) -> ClanReport {
    let n = m.n();
    if n < 4 {
        return ClanReport::verdict(ClanKind::HlIndecomposable);
    }
    let skew = m.is_skew();
    for mask in subsets::masks_containing_zero(n, 2..=n - 2) {
        if is_hl_clan_inner(m, mask, skew) {
            return ClanReport::found(ClanKind::HlClan, mask);
        }
    }
    ClanReport::verdict(ClanKind::HlIndecomposable)
}

/// Searches for a clan whose complement is also a clan. Partitions into
/// two trivial clans count, so every 3x3 matrix is separable.
pub fn is_separable(a: &SkewMatrix) -> ClanReport {
    let m = a.matrix();
    let n = m.n();
    if n < 2 {
        return ClanReport::verdict(ClanKind::Inseparable);
    }
    let full = m.full_mask();
    for mask in subsets::masks_containing_zero(n, 1..=n - 1) {
        let comp = full & !mask;
        if is_clan(m, mask) && is_clan(m, comp) {
            let x0 = subsets::indices(mask)[0];
            let y0 = subsets::indices(comp)[0];
            return ClanReport {
                kind: ClanKind::Separable,
                subset: None,
                partition: Some((mask, comp)),
                constant: Some(m.get(x0, y0).clone()),
            };
        }
    }
    ClanReport::verdict(ClanKind::Inseparable)
}

/// Some label x with A[V\{x}] still inseparable, searched in label order.
/// Requires |V| >= 5 and an inseparable input.
pub fn peel_inseparable(a: &SkewMatrix) -> Result<String> {
    let n = a.n();
    if n < 5 {
        return Err(Error::Precondition(format!(
            "peeling needs at least 5 labels, got {n}"
        )));
    }
    if is_separable(a).kind == ClanKind::Separable {
        return Err(Error::Precondition("matrix is separable".into()));
    }
    let full = a.full_mask();
    for x in 0..n {
        let sub = a.principal(full & !(1 << x));
        if is_separable(&sub).kind == ClanKind::Inseparable {
            return Ok(a.labels()[x].clone());
        }
    }
    Err(Error::Domain(
        "no peelable label found; input violates the inseparability hypothesis".into(),
    ))
}

/// Irreducibility in the classical sense: A[X, V\X] and A[V\X, X] are
/// nonzero for every proper nonempty X. Exposed for completeness; no
/// algorithm in this crate depends on it.
pub fn is_irreducible(m: &Matrix) -> Result<bool> {
    let n = m.n();
    if n > CLAN_SWEEP_LIMIT {
        return Err(Error::TooLarge { n, limit: CLAN_SWEEP_LIMIT });
    }
    if n < 2 {
        return Ok(true);
    }
    let full = m.full_mask();
    for mask in subsets::masks_containing_zero(n, 1..=n - 1) {
        let comp = full & !mask;
        if m.block(mask, comp).is_zero() || m.block(comp, mask).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::matrix::default_labels;

    fn skew_from_upper(spec: FieldSpec, n: usize, upper: &[i64]) -> SkewMatrix {
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

    #[test]
    fn trivial_clans() {
        let a = skew_from_upper(FieldSpec::Rationals, 3, &[1, 2, 3]);
        assert!(is_clan(a.matrix(), 0));
        assert!(is_clan(a.matrix(), 0b010));
        assert!(is_clan(a.matrix(), 0b111));
    }

    #[test]
    fn planted_clan_detected() {
        // a12 = a13 = 1, a23 = 5: {2,3} is a clan
        let a = skew_from_upper(FieldSpec::Rationals, 3, &[1, 1, 5]);
        assert!(is_clan(a.matrix(), 0b110));
        // a12 = 1, a13 = 2: label 1 distinguishes {2,3}
        let b = skew_from_upper(FieldSpec::Rationals, 3, &[1, 2, 3]);
        assert!(!is_clan(b.matrix(), 0b110));
    }

    #[test]
    fn closure_cases() {
        let planted = skew_from_upper(FieldSpec::Rationals, 3, &[1, 1, 5]);
        assert_eq!(clan_closure(planted.matrix(), 0b100), 0b100);
        assert_eq!(clan_closure(planted.matrix(), 0b110), 0b110);
        let generic = skew_from_upper(FieldSpec::Rationals, 3, &[1, 2, 3]);
        assert_eq!(clan_closure(generic.matrix(), 0b110), 0b111);
    }

    #[test]
    fn nontrivial_clan_search() {
        let planted = skew_from_upper(FieldSpec::Rationals, 3, &[1, 1, 5]);
        let rep = find_nontrivial_clan(planted.matrix());
        assert_eq!(rep.kind, ClanKind::Clan);
        assert_eq!(rep.subset, Some(0b110));

        let generic = skew_from_upper(FieldSpec::Rationals, 3, &[1, 2, 3]);
        assert_eq!(
            find_nontrivial_clan(generic.matrix()).kind,
            ClanKind::Indecomposable
        );

        // constant first row: {2,3,4} is a clan
        let constant_row = skew_from_upper(FieldSpec::Rationals, 4, &[1, 1, 1, 2, 3, 4]);
        let rep = find_nontrivial_clan(constant_row.matrix());
        assert_eq!(rep.kind, ClanKind::Clan);
        assert_eq!(rep.subset, Some(0b1110));
    }

    #[test]
    fn hl_clan_cases() {
        let a = skew_from_upper(FieldSpec::Rationals, 4, &[1, 1, 1, 1, 2, 3]);
        for mask in [0u32, 0b0001, 0b0111, 0b1111] {
            assert!(is_hl_clan(a.matrix(), mask));
        }
        // A[{1,2},{3,4}] = [[1,1],[1,2]] has rank 2
        let spec = FieldSpec::Rationals;
        let mut entries = vec![spec.zero(); 16];
        let put = |e: &mut Vec<FieldElement>, i: usize, j: usize, v: i64| {
            e[i * 4 + j] = spec.from_i64(v);
            e[j * 4 + i] = spec.from_i64(-v);
        };
        put(&mut entries, 0, 1, 5);
        put(&mut entries, 0, 2, 1);
        put(&mut entries, 0, 3, 1);
        put(&mut entries, 1, 2, 1);
        put(&mut entries, 1, 3, 2);
        put(&mut entries, 2, 3, 7);
        let m = SkewMatrix::new(Matrix::new(spec, default_labels(4), entries).unwrap()).unwrap();
        assert!(!is_hl_clan(m.matrix(), 0b0011));
        // every clan is an HL-clan
        let planted = skew_from_upper(spec, 3, &[1, 1, 5]);
        assert!(is_hl_clan(planted.matrix(), 0b110));
    }

    #[test]
    fn hl_indecomposable_fixture() {
        // the witness-module fixture: dense, all balanced splits rank 2
        let a = skew_from_upper(FieldSpec::Rationals, 4, &[1, 1, 1, 1, 2, 3]);
        assert_eq!(hl_indecomposable(a.matrix()).kind, ClanKind::HlIndecomposable);

        // planted rank-1 cross block: a_xy = r_x c_y
        let spec = FieldSpec::Rationals;
        let r = [1i64, 2];
        let c = [3i64, 1];
        let mut entries = vec![spec.zero(); 16];
        for (xi, x) in [0usize, 1].iter().enumerate() {
            for (yi, y) in [2usize, 3].iter().enumerate() {
                entries[x * 4 + y] = spec.from_i64(r[xi] * c[yi]);
                entries[y * 4 + x] = spec.from_i64(-(r[xi] * c[yi]));
            }
        }
        entries[1] = spec.from_i64(4);
        entries[4] = spec.from_i64(-4);
        entries[2 * 4 + 3] = spec.from_i64(5);
        entries[3 * 4 + 2] = spec.from_i64(-5);
        let m = SkewMatrix::new(Matrix::new(spec, default_labels(4), entries).unwrap()).unwrap();
        let rep = hl_indecomposable(m.matrix());
        assert_eq!(rep.kind, ClanKind::HlClan);
        assert_eq!(rep.subset, Some(0b0011));
    }

    #[test]
    fn separability_cases() {
        let spec = FieldSpec::Rationals;
        let all_ones = skew_from_upper(spec, 4, &[1, 1, 1, 1, 1, 1]);
        let rep = is_separable(&all_ones);
        assert_eq!(rep.kind, ClanKind::Separable);
        let (x, y) = rep.partition.unwrap();
        assert!(is_clan(all_ones.matrix(), x) && is_clan(all_ones.matrix(), y));
        assert_eq!(rep.constant, Some(spec.one()));

        let generic = skew_from_upper(spec, 3, &[1, 2, 3]);
        assert_eq!(is_separable(&generic).kind, ClanKind::Inseparable);

        // constant row u makes {u} and its complement a clan-partition
        let constant_row = skew_from_upper(spec, 4, &[1, 1, 1, 2, 3, 4]);
        let rep = is_separable(&constant_row);
        assert_eq!(rep.kind, ClanKind::Separable);
        assert_eq!(rep.partition, Some((0b0001, 0b1110)));
    }

    #[test]
    fn peeling() {
        let spec = FieldSpec::prime(7).unwrap();
        let mut seed = 0u64;
        let a = loop {
            seed += 1;
            let cand = crate::generate::gen_random_dense(spec, 6, seed);
            if is_separable(&cand).kind == ClanKind::Inseparable {
                break cand;
            }
        };
        let x = peel_inseparable(&a).unwrap();
        let idx = a.label_index(&x).unwrap();
        let sub = a.principal(a.full_mask() & !(1 << idx));
        assert_eq!(is_separable(&sub).kind, ClanKind::Inseparable);

        let separable = skew_from_upper(FieldSpec::Rationals, 5, &[1, 1, 1, 1, 2, 3, 4, 5, 6, 7]);
        assert!(matches!(
            peel_inseparable(&separable).unwrap_err(),
            Error::Precondition(_)
        ));
    }

    #[test]
    fn irreducibility_predicate() {
        let spec = FieldSpec::Rationals;
        let dense = skew_from_upper(spec, 3, &[1, 2, 3]);
        assert!(is_irreducible(dense.matrix()).unwrap());
        let zero = Matrix::new(spec, default_labels(3), vec![spec.zero(); 9]).unwrap();
        assert!(!is_irreducible(&zero).unwrap());
    }
}
