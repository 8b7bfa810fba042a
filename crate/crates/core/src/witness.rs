//! Sign-diagonal witness machinery: the E/D equivalence relations, witness
//! recovery for dense HL-indecomposable skew matrices, the decision
//! procedure for diagonal similarity up to transposition, and matrix
//! reconstruction from order-<=4 principal minors.

use std::collections::BTreeMap;

use crate::clans::{hl_indecomposable, is_clan, ClanKind};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::generate::apply_witness;
use crate::matrix::{
    density_report, determinant, extend_infinity, Matrix, SkewMatrix,
};
use crate::minors::{hl_equivalent, MinorTable};
use crate::subsets;

/// A sign vector plus a transposed flag, asserting B = DAD (transposed
/// false) or Bᵗ = DAD (transposed true) with D = diag(signs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    signs: BTreeMap<String, i8>,
    transposed: bool,
}

impl Witness {
    pub fn new(signs: BTreeMap<String, i8>, transposed: bool) -> Result<Self> {
        for (l, s) in &signs {
            if *s != 1 && *s != -1 {
                return Err(Error::Domain(format!(
                    "sign for label `{l}` must be -1 or +1, got {s}"
                )));
            }
        }
        Ok(Witness { signs, transposed })
    }

    pub fn from_signs(labels: &[String], signs: &[i8], transposed: bool) -> Result<Self> {
        assert_eq!(labels.len(), signs.len());
        Witness::new(
            labels.iter().cloned().zip(signs.iter().copied()).collect(),
            transposed,
        )
    }

    pub fn sign(&self, label: &str) -> Option<i8> {
        self.signs.get(label).copied()
    }

    pub fn signs(&self) -> &BTreeMap<String, i8> {
        &self.signs
    }

    pub fn transposed(&self) -> bool {
        self.transposed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationMode {
    /// Edges where a_xy = b_xy.
    E,
    /// Edges where a_xy = -b_xy; identical to E between A and Bᵗ.
    D,
}

/// Equivalence classes of E_{A,B} or D_{A,B}, as label masks sorted by
/// minimum element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPartition {
    pub mode: RelationMode,
    pub classes: Vec<u32>,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb.max(ra)] = rb.min(ra);
        }
    }
}

/// Connected components of the chosen edge relation between two dense
/// skew matrices that agree entrywise up to sign.
pub fn equivalence_classes(
    a: &SkewMatrix,
    b: &SkewMatrix,
    mode: RelationMode,
) -> Result<SignPartition> {
    check_pair(a, b)?;
    require_dense(a)?;
    require_dense(b)?;
    let n = a.n();
    let mut dsu = Dsu::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let av = a.get(i, j);
            let bv = b.get(i, j);
            let (same, negated) = (av == bv, *av == -bv);
            if !same && !negated {
                return Err(Error::HypothesisViolation {
                    row: a.labels()[i].clone(),
                    col: a.labels()[j].clone(),
                });
            }
            let joined = match mode {
                RelationMode::E => same,
                RelationMode::D => negated,
            };
            if joined {
                dsu.union(i, j);
            }
        }
    }
    let mut classes: BTreeMap<usize, u32> = BTreeMap::new();
    for i in 0..n {
        let root = dsu.find(i);
        *classes.entry(root).or_insert(0) |= 1 << i;
    }
    Ok(SignPartition {
        mode,
        classes: classes.into_values().collect(),
    })
}

/// Checks that every E-class and every D-class is a clan of both matrices,
/// after verifying that the extended matrices are (<=4)-HL-equivalent.
pub fn check_lopez(a: &SkewMatrix, b: &SkewMatrix) -> Result<bool> {
    check_pair(a, b)?;
    if a.n() < 3 {
        return Err(Error::Precondition(format!(
            "need at least 3 labels, got {}",
            a.n()
        )));
    }
    let ea = extend_infinity(a)?;
    let eb = extend_infinity(b)?;
    let verdict = hl_equivalent(ea.matrix(), eb.matrix(), 4)?;
    if !verdict.equivalent {
        return Err(Error::Precondition(format!(
            "extended matrices are not (<=4)-HL-equivalent; differing subset {:?}",
            ea.labels_for(verdict.witness_subset.unwrap_or(0))
        )));
    }
    for mode in [RelationMode::E, RelationMode::D] {
        let partition = equivalence_classes(a, b, mode)?;
        for class in partition.classes {
            if !is_clan(a.matrix(), class) || !is_clan(b.matrix(), class) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Recovers the sign-diagonal witness relating a dense HL-indecomposable
/// A to B: normalizes both matrices against the anchor row
/// (the minimum label), decides the equal-vs-transposed branch globally,
/// reads the signs off the anchor row, and verifies the result against B.
pub fn recover_witness(a: &SkewMatrix, b: &SkewMatrix, verify_input: bool) -> Result<Witness> {
    check_pair(a, b)?;
    let n = a.n();
    if n < 4 {
        return Err(Error::Precondition(format!(
            "witness recovery needs at least 4 labels, got {n}"
        )));
    }
    require_dense(a)?;
    let hl = hl_indecomposable(a.matrix());
    if hl.kind == ClanKind::HlClan {
        return Err(Error::HlDecomposable(
            a.labels_for(hl.subset.expect("HL-clan certificate")),
        ));
    }
    if verify_input {
        let verdict = hl_equivalent(a.matrix(), b.matrix(), 4)?;
        if !verdict.equivalent {
            return Err(Error::Precondition(format!(
                "inputs are not (<=4)-HL-equivalent; differing subset {:?}",
                a.labels_for(verdict.witness_subset.unwrap_or(0))
            )));
        }
    }

    // Anchor row: b_uz must be a_uz up to sign.
    let u = 0usize;
    for z in 1..n {
        let (av, bv) = (a.get(u, z), b.get(u, z));
        if av != bv && *av != -bv {
            return Err(Error::HypothesisViolation {
                row: a.labels()[u].clone(),
                col: a.labels()[z].clone(),
            });
        }
    }

    // Normalized entries off the anchor; equivalent to conjugating by
    // diag(1, 1/a_uz) resp. diag(1, 1/b_uz).
    let normalized = |m: &SkewMatrix, j: usize, k: usize| -> FieldElement {
        m.get(j, k) / &(m.get(u, j) * m.get(u, k))
    };
    let mut branch: Option<bool> = None; // false: equal, true: transposed
    for j in 1..n {
        for k in j + 1..n {
            let na = normalized(a, j, k);
            let nb = normalized(b, j, k);
            let vote = if na == nb {
                false
            } else if na == -&nb {
                true
            } else {
                return Err(Error::HypothesisViolation {
                    row: a.labels()[j].clone(),
                    col: a.labels()[k].clone(),
                });
            };
            match branch {
                None => branch = Some(vote),
                Some(prev) if prev != vote => {
                    return Err(Error::Precondition(format!(
                        "normalized matrices are neither equal nor transposed; mixed verdict at ({}, {})",
                        a.labels()[j], a.labels()[k]
                    )))
                }
                _ => {}
            }
        }
    }
    let transposed = branch.expect("n >= 4 guarantees at least one off-anchor pair");

    let mut signs: BTreeMap<String, i8> = BTreeMap::new();
    signs.insert(a.labels()[u].clone(), 1);
    for z in 1..n {
        let ratio = b.get(u, z) / a.get(u, z);
        let positive = ratio.is_one();
        let sign = if transposed { !positive } else { positive };
        signs.insert(a.labels()[z].clone(), if sign { 1 } else { -1 });
    }
    let witness = Witness::new(signs, transposed)?;

    // Unconditional O(n^2) verification of the recovered witness.
    let image = apply_witness(a, &witness)?;
    if &image != b {
        let (i, j) = first_difference(image.matrix(), b.matrix())
            .expect("unequal matrices differ somewhere");
        return Err(Error::VerificationFailed {
            row: a.labels()[i].clone(),
            col: a.labels()[j].clone(),
        });
    }
    Ok(witness)
}

/// Decides whether B = DAD or Bᵗ = DAD for some ±1 diagonal D. A must be
/// dense; the sign of every d_z is then forced by the anchor row, so only
/// the two transposition branches are tried.
pub fn diag_similar_up_to_transposition(
    a: &SkewMatrix,
    b: &SkewMatrix,
) -> Result<Option<Witness>> {
    check_pair(a, b)?;
    require_dense(a)?;
    let n = a.n();
    if n == 0 {
        return Ok(Some(Witness::new(BTreeMap::new(), false)?));
    }
    'branch: for transposed in [false, true] {
        let target = if transposed { b.transpose() } else { b.clone() };
        let mut signs: Vec<i8> = vec![1; n];
        for z in 1..n {
            let ratio = target.get(0, z) / a.get(0, z);
            if ratio.is_one() {
                signs[z] = 1;
            } else if ratio == -a.spec().one() {
                signs[z] = -1;
            } else {
                continue 'branch;
            }
        }
        let ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let expect = if signs[i] * signs[j] == 1 {
                    a.get(i, j).clone()
                } else {
                    -a.get(i, j)
                };
                target.get(i, j) == &expect
            })
        });
        if ok {
            return Ok(Some(Witness::from_signs(a.labels(), &signs, transposed)?));
        }
    }
    Ok(None)
}

/// Rebuilds skew matrices from a table of principal minors of order <= 4.
///
/// The gauge is fixed by giving the anchor row the canonical square roots
/// of its order-2 minors; remaining signs are found by backtracking against
/// the order-4 minors through the anchor and validated against the rest.
/// Returns every consistent gauge-fixed matrix.
pub fn reconstruct_from_minors(
    table: &MinorTable,
    spec: FieldSpec,
) -> Result<Vec<SkewMatrix>> {
    if table.spec() != spec {
        return Err(Error::SpecMismatch);
    }
    if table.max_order() < 4.min(table.labels().len()) {
        return Err(Error::Domain(format!(
            "reconstruction needs minors up to order 4, table has {}",
            table.max_order()
        )));
    }
    let labels = table.labels().to_vec();
    let n = labels.len();
    let labels_for = |mask: u32| -> Vec<String> {
        subsets::indices(mask)
            .into_iter()
            .map(|i| labels[i].clone())
            .collect()
    };

    // Odd-order minors of a skew matrix vanish.
    for (mask, value) in table.entries() {
        if mask.count_ones() % 2 == 1 && !value.is_zero() {
            return Err(Error::OddMinorNonzero(labels_for(*mask)));
        }
    }

    // Order-2 minors give the entry magnitudes: det(A[{j,k}]) = a_jk^2.
    let mut magnitude = vec![spec.zero(); n * n];
    for j in 0..n {
        for k in j + 1..n {
            let mask = (1u32 << j) | (1 << k);
            let minor = table.get(mask).expect("table is total on order 2");
            if minor.is_zero() {
                return Err(Error::ZeroPairMinor(labels_for(mask)));
            }
            let root = minor
                .canonical_sqrt()
                .ok_or_else(|| Error::NonSquareMinor(labels_for(mask)))?;
            magnitude[j * n + k] = root;
        }
    }

    if n < 2 {
        let m = Matrix::new(spec, labels, vec![spec.zero(); n * n])?;
        return Ok(vec![SkewMatrix::new(m)?]);
    }

    // Unknown signs for pairs avoiding the anchor, in lexicographic order.
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();
    let pair_pos: BTreeMap<(usize, usize), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();

    // Constraints from 4-subsets through the anchor; each becomes checkable
    // once its last pair variable is assigned.
    struct AnchorConstraint {
        mask: u32,
        pair_vars: [usize; 3],
        ready_at: usize,
    }
    let mut constraints: Vec<AnchorConstraint> = Vec::new();
    for j in 1..n {
        for k in j + 1..n {
            for l in k + 1..n {
                let vars = [
                    pair_pos[&(j, k)],
                    pair_pos[&(j, l)],
                    pair_pos[&(k, l)],
                ];
                constraints.push(AnchorConstraint {
                    mask: 1 | (1 << j) | (1 << k) | (1 << l),
                    pair_vars: vars,
                    ready_at: *vars.iter().max().expect("three vars"),
                });
            }
        }
    }

    let build = |eps: &[i8]| -> SkewMatrix {
        let mut entries = vec![spec.zero(); n * n];
        for j in 0..n {
            for k in j + 1..n {
                let mag = magnitude[j * n + k].clone();
                let v = if j == 0 || eps[pair_pos[&(j, k)]] == 1 {
                    mag
                } else {
                    -mag
                };
                entries[j * n + k] = v.clone();
                entries[k * n + j] = -v;
            }
        }
        let m = Matrix::new(spec, labels.clone(), entries).expect("square by construction");
        SkewMatrix::new(m).expect("skew by construction")
    };

    // pf(A[{u,j,k,l}]) in terms of the anchor row and the sign variables.
    let anchor_pf = |eps: &[i8], c: &AnchorConstraint| -> FieldElement {
        let idx = subsets::indices(c.mask);
        let (j, k, l) = (idx[1], idx[2], idx[3]);
        let signed = |j: usize, k: usize| -> FieldElement {
            let mag = &magnitude[j * n + k];
            if j == 0 || eps[pair_pos[&(j, k)]] == 1 {
                mag.clone()
            } else {
                -mag
            }
        };
        let t1 = &signed(0, j) * &signed(k, l);
        let t2 = &signed(0, k) * &signed(j, l);
        let t3 = &signed(0, l) * &signed(j, k);
        &(&t1 - &t2) + &t3
    };

    let mut eps: Vec<i8> = vec![1; pairs.len()];
    let mut solutions: Vec<SkewMatrix> = Vec::new();
    let mut violated: Option<u32> = None;

    // Validators: every table entry of even order >= 4 not already used as
    // an anchor constraint.
    let validators: Vec<(u32, FieldElement)> = table
        .entries()
        .iter()
        .filter(|(m, _)| {
            let size = m.count_ones();
            size >= 4 && size % 2 == 0 && !(size == 4 && m & 1 == 1)
        })
        .cloned()
        .collect();

    fn search(
        depth: usize,
        eps: &mut Vec<i8>,
        pairs_len: usize,
        constraints: &[AnchorConstraint],
        table: &MinorTable,
        anchor_pf: &dyn Fn(&[i8], &AnchorConstraint) -> FieldElement,
        build: &dyn Fn(&[i8]) -> SkewMatrix,
        validators: &[(u32, FieldElement)],
        solutions: &mut Vec<SkewMatrix>,
        violated: &mut Option<u32>,
    ) {
        if depth == pairs_len {
            let candidate = build(eps);
            for (mask, expect) in validators {
                if &determinant(&candidate.principal(*mask)) != expect {
                    violated.get_or_insert(*mask);
                    return;
                }
            }
            solutions.push(candidate);
            return;
        }
        'sign: for s in [1i8, -1] {
            eps[depth] = s;
            for c in constraints.iter().filter(|c| c.ready_at == depth) {
                debug_assert!(c.pair_vars.iter().all(|&v| v <= depth));
                let pf = anchor_pf(eps, c);
                let expect = table.get(c.mask).expect("table is total on order 4");
                if &(&pf * &pf) != expect {
                    violated.get_or_insert(c.mask);
                    continue 'sign;
                }
            }
            search(
                depth + 1,
                eps,
                pairs_len,
                constraints,
                table,
                anchor_pf,
                build,
                validators,
                solutions,
                violated,
            );
        }
    }

    search(
        0,
        &mut eps,
        pairs.len(),
        &constraints,
        table,
        &anchor_pf,
        &build,
        &validators,
        &mut solutions,
        &mut violated,
    );

    if solutions.is_empty() {
        return Err(Error::Inconsistent(labels_for(violated.unwrap_or(0))));
    }
    Ok(solutions)
}

fn check_pair(a: &SkewMatrix, b: &SkewMatrix) -> Result<()> {
    if a.spec() != b.spec() {
        return Err(Error::SpecMismatch);
    }
    if a.labels() != b.labels() {
        return Err(Error::Domain("matrices have different label sets".into()));
    }
    Ok(())
}

fn require_dense(a: &SkewMatrix) -> Result<()> {
    if let Some((row, col)) = density_report(a.matrix()).zero_pair {
        return Err(Error::NotDense { row, col });
    }
    Ok(())
}

fn first_difference(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    let n = a.n();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| a.get(i, j) != b.get(i, j))
}
