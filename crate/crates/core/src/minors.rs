//! Principal-minor tables, (<=k)-HL-equivalence and the Wesp criterion.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{density_report, determinant, Matrix, SkewMatrix};
use crate::subsets;

/// Principal unimodularity sweeps refuse above this size.
pub const PU_SWEEP_LIMIT: usize = 20;

/// det(A[X]) for every subset X of size at most `max_order`, keyed by
/// bitmask over the label order. Entries are stored in the canonical
/// (size, lexicographic) enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorTable {
    spec: FieldSpec,
    labels: Vec<String>,
    max_order: usize,
    entries: Vec<(u32, FieldElement)>,
}

impl MinorTable {
    /// Builds a table from (mask, value) pairs; reorders into enumeration
    /// order and checks totality on subsets of size <= max_order.
    pub fn from_entries(
        spec: FieldSpec,
        labels: Vec<String>,
        max_order: usize,
        mut raw: Vec<(u32, FieldElement)>,
    ) -> Result<Self> {
        let n = labels.len();
        if max_order > n {
            return Err(Error::Domain(format!(
                "max_order {max_order} exceeds label count {n}"
            )));
        }
        for (_, v) in &raw {
            if v.spec() != spec {
                return Err(Error::SpecMismatch);
            }
        }
        raw.sort_by_key(|(m, _)| *m);
        raw.dedup_by(|a, b| a.0 == b.0);
        let mut entries = Vec::new();
        for mask in subsets::masks_up_to(n, max_order) {
            match raw.binary_search_by_key(&mask, |(m, _)| *m) {
                Ok(i) => entries.push(raw[i].clone()),
                Err(_) => {
                    return Err(Error::Parse(format!(
                        "minor table is missing subset of size {}",
                        mask.count_ones()
                    )))
                }
            }
        }
        let table = MinorTable { spec, labels, max_order, entries };
        if !table.get(0).expect("empty subset present").is_one() {
            return Err(Error::Parse("entry for the empty subset must be 1".into()));
        }
        Ok(table)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Entries in enumeration order.
    pub fn entries(&self) -> &[(u32, FieldElement)] {
        &self.entries
    }

    pub fn get(&self, mask: u32) -> Option<&FieldElement> {
        self.entries
            .iter()
            .find(|(m, _)| *m == mask)
            .map(|(_, v)| v)
    }
}

/// det(A[X]) for all |X| <= k, in (size, lexicographic) order.
pub fn principal_minors(a: &Matrix, k: usize) -> MinorTable {
    principal_minors_with_threads(a, k, 1)
}

/// Same as [`principal_minors`], fanning the subset sweep out over
/// `threads` workers. The merge is deterministic: results are reassembled
/// in enumeration order regardless of worker count.
pub fn principal_minors_with_threads(a: &Matrix, k: usize, threads: usize) -> MinorTable {
    let n = a.n();
    let k = k.min(n);
    let masks: Vec<u32> = subsets::masks_up_to(n, k).collect();
    let values: Vec<FieldElement> = if threads <= 1 || masks.len() < 64 {
        masks.iter().map(|&m| determinant(&a.principal(m))).collect()
    } else {
        let chunk = masks.len().div_ceil(threads);
        let mut out: Vec<Vec<FieldElement>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = masks
                .chunks(chunk)
                .map(|ms| scope.spawn(move || ms.iter().map(|&m| determinant(&a.principal(m))).collect::<Vec<_>>()))
                .collect();
            for h in handles {
                out.push(h.join().expect("minor sweep worker"));
            }
        });
        out.into_iter().flatten().collect()
    };
    MinorTable {
        spec: a.spec(),
        labels: a.labels().to_vec(),
        max_order: k,
        entries: masks.into_iter().zip(values).collect(),
    }
}

/// Outcome of a (<=k)-HL-equivalence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// First subset (in enumeration order) where the minors differ.
    pub witness_subset: Option<u32>,
    pub order_checked: usize,
}

/// Are all principal minors of order <= k equal? Short-circuits on the
/// first mismatch.
pub fn hl_equivalent(a: &Matrix, b: &Matrix, k: usize) -> Result<EquivalenceVerdict> {
    check_compatible(a, b)?;
    let n = a.n();
    if k > n {
        return Err(Error::Domain(format!("order {k} exceeds matrix size {n}")));
    }
    for mask in subsets::masks_up_to(n, k) {
        if determinant(&a.principal(mask)) != determinant(&b.principal(mask)) {
            return Ok(EquivalenceVerdict {
                equivalent: false,
                witness_subset: Some(mask),
                order_checked: k,
            });
        }
    }
    Ok(EquivalenceVerdict {
        equivalent: true,
        witness_subset: None,
        order_checked: k,
    })
}

/// Full-comparison diagnostic variant: every differing subset of size <= k,
/// in enumeration order.
pub fn hl_mismatches(a: &Matrix, b: &Matrix, k: usize) -> Result<Vec<u32>> {
    check_compatible(a, b)?;
    Ok(subsets::masks_up_to(a.n(), k.min(a.n()))
        .filter(|&m| determinant(&a.principal(m)) != determinant(&b.principal(m)))
        .collect())
}

fn check_compatible(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.spec() != b.spec() {
        return Err(Error::SpecMismatch);
    }
    if a.labels() != b.labels() {
        return Err(Error::Domain("matrices have different label sets".into()));
    }
    Ok(())
}

fn is_sign_entry(e: &FieldElement) -> bool {
    let spec = e.spec();
    e.is_zero() || e.is_one() || *e == -spec.one()
}

/// True iff every principal minor, over all orders, lies in {-1, 0, 1}.
/// Entries must already lie in {-1, 0, 1}; n is capped at 20.
pub fn is_principally_unimodular(a: &Matrix) -> Result<bool> {
    let n = a.n();
    if n > PU_SWEEP_LIMIT {
        return Err(Error::TooLarge { n, limit: PU_SWEEP_LIMIT });
    }
    for i in 0..n {
        for j in 0..n {
            if !is_sign_entry(a.get(i, j)) {
                return Err(Error::NotSignMatrix);
            }
        }
    }
    for mask in subsets::masks_up_to(n, n) {
        if !is_sign_entry(&determinant(&a.principal(mask))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Wesp's criterion for dense skew sign matrices: every size-4 principal
/// minor equals 1. Vacuously true below n = 4.
pub fn wesp_check(a: &SkewMatrix) -> Result<bool> {
    let rep = density_report(a.matrix());
    if let Some((row, col)) = rep.zero_pair {
        return Err(Error::NotDense { row, col });
    }
    let n = a.n();
    for i in 0..n {
        for j in 0..n {
            if !is_sign_entry(a.get(i, j)) {
                return Err(Error::NotSignMatrix);
            }
        }
    }
    let one = a.spec().one();
    for mask in subsets::masks_of_size(n, 4) {
        if determinant(&a.principal(mask)) != one {
            return Ok(false);
        }
    }
    Ok(true)
}
