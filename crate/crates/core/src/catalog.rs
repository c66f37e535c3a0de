//! Named matrices, switching equivalence, submatrix search and the
//! knottability filters.
//!
//! A [`ContainmentWitness`] describes how a target `T` of order `k` sits in a
//! larger Seidel matrix `M`:
//!
//! ```text
//! T[i][j] = s[perm[i]] * s[perm[j]] * M[subset[perm[i]]][subset[perm[j]]]
//! ```
//!
//! `subset` is ascending, `switch_signs` is indexed like `subset`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog_data as data;
use crate::error::{Error, Result};
use crate::geometry::{Configuration, EllipticCylinder, OrientedLine};
use crate::invariants::{det_exact, switch_row_positive};
use crate::matrix::IntegerMatrix;
use crate::topomatrix::{chirality_matrix, ring_matrix, RingMatrix, SeidelMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Chirality,
    Ring,
    /// Integer data that is neither; kept as printed.
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMatrix {
    pub name: &'static str,
    pub kind: MatrixKind,
    pub matrix: IntegerMatrix,
    pub source: &'static str,
}

impl NamedMatrix {
    pub fn seidel(&self) -> Result<SeidelMatrix> {
        SeidelMatrix::new(self.matrix.clone())
    }

    pub fn ring(&self) -> Result<RingMatrix> {
        RingMatrix::new(self.matrix.clone())
    }
}

fn entry<const N: usize>(
    name: &'static str,
    kind: MatrixKind,
    rows: &[[i64; N]; N],
    source: &'static str,
) -> NamedMatrix {
    let matrix = IntegerMatrix::from_rows(rows).expect("square table");
    NamedMatrix { name, kind, matrix, source }
}

/// All built-in matrices, in a fixed order.
pub fn named_matrices() -> Vec<NamedMatrix> {
    use MatrixKind::*;
    vec![
        entry("K5", Chirality, &data::K5, "complete graph on five vertices; forbidden for mutual tangency"),
        entry("P250", Chirality, &data::P250, "extreme order-7 matrix of determinant 250; forbidden"),
        entry("R7", Ring, &data::R7, "ring matrix of the seven equal round cylinders"),
        entry("P7", Chirality, &data::P7, "chirality matrix of the seven equal round cylinders"),
        entry("Q7", Integer, &data::Q7, "Q matrix of P7"),
        entry("M11", Chirality, &data::M11, "order-11 matrix of determinant 57122 free of K5 and P250"),
        entry("P1625", Chirality, &data::P1625, "order-8 submatrix of M11 with determinant 1625"),
        entry("P1625-block", Chirality, &data::P1625_BLOCK, "P1625 switched and permuted into C4 block form"),
        entry("Pm125", Chirality, &data::PM125, "extreme order-6 matrix of determinant -125"),
        entry("R6a", Ring, &data::R6A, "ring matrix shared by the two knottable 6-crosses"),
        entry("R6b", Ring, &data::R6B, "ring matrix of the fully entangled C3 6-cross"),
        entry("R8", Ring, &data::R8, "ring matrix of the C4 8-cross"),
        entry("P9", Chirality, &data::P9, "chirality matrix of a 9-knot"),
        entry("R9", Ring, &data::R9, "ring matrix of a 9-knot"),
        entry("P10", Integer, &data::P10, "chirality matrix of the 10-knot as printed (not symmetric)"),
        entry("R10", Ring, &data::R10, "ring matrix of the 10-knot as printed"),
    ]
}

/// Case-insensitive lookup by name.
pub fn lookup(name: &str) -> Result<NamedMatrix> {
    named_matrices()
        .into_iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

/// The published ten-knot of elliptic cylinders.
pub fn ten_knot() -> Configuration {
    let cyls = data::TEN_KNOT_LINES
        .iter()
        .zip(data::TEN_KNOT_AXES.iter())
        .map(|(l, ab)| {
            EllipticCylinder::new(OrientedLine::new(l[0], l[1], l[2], l[3]), l[4], ab[0], ab[1])
                .expect("valid table row")
        })
        .collect();
    Configuration::new(cyls, "10-knot").expect("ten cylinders")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentWitness {
    pub subset: Vec<usize>,
    pub switch_signs: Vec<i64>,
    pub permutation: Vec<usize>,
}

impl ContainmentWitness {
    /// The submatrix of `m` this witness describes, after switching and
    /// permutation.
    pub fn apply(&self, m: &IntegerMatrix) -> IntegerMatrix {
        let (s, p, sub) = (&self.switch_signs, &self.permutation, &self.subset);
        IntegerMatrix::from_fn(p.len(), |i, j| s[p[i]] * s[p[j]] * m.get(sub[p[i]], sub[p[j]]))
    }

    pub fn verifies(&self, m: &IntegerMatrix, target: &IntegerMatrix) -> bool {
        self.apply(m) == *target
    }
}

/// For each vertex, the number of vertex pairs completing a triangle with
/// positive product. Invariant under switching and relabelling once sorted.
fn triangle_profile(p: &SeidelMatrix) -> Vec<usize> {
    let n = p.order();
    let mut counts = vec![0usize; n];
    for (i, j, k) in (0..n).tuple_combinations() {
        if p.get(i, j) * p.get(j, k) * p.get(k, i) > 0 {
            counts[i] += 1;
            counts[j] += 1;
            counts[k] += 1;
        }
    }
    counts.sort_unstable();
    counts
}

/// Find `perm` with `perm[0] = a0` and `b[i][j] = a[perm[i]][perm[j]]`.
fn isomorphism(a: &SeidelMatrix, b: &SeidelMatrix, a0: usize) -> Option<Vec<usize>> {
    let n = a.order();
    let deg = |m: &SeidelMatrix, i: usize| (0..n).filter(|&j| m.get(i, j) > 0).count();
    let da: Vec<usize> = (0..n).map(|i| deg(a, i)).collect();
    let db: Vec<usize> = (0..n).map(|i| deg(b, i)).collect();
    if da[a0] != db[0] {
        return None;
    }
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    perm[0] = a0;
    used[a0] = true;

    fn extend(
        pos: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        a: &SeidelMatrix,
        b: &SeidelMatrix,
        da: &[usize],
        db: &[usize],
    ) -> bool {
        let n = perm.len();
        if pos == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || da[cand] != db[pos] {
                continue;
            }
            if (0..pos).any(|q| a.get(cand, perm[q]) != b.get(pos, q)) {
                continue;
            }
            perm[pos] = cand;
            used[cand] = true;
            if extend(pos + 1, perm, used, a, b, da, db) {
                return true;
            }
            used[cand] = false;
        }
        false
    }

    extend(1, &mut perm, &mut used, a, b, &da, &db).then_some(perm)
}

/// Signs that make row `i` of `p` all `+1`.
fn positive_row_signs(p: &SeidelMatrix, i: usize) -> Vec<i64> {
    (0..p.order()).map(|k| if k == i { 1 } else { p.get(i, k) }).collect()
}

/// Witness for `D * perm(A) * D = B` over the full index set of `A`.
pub fn switching_equivalent(a: &SeidelMatrix, b: &SeidelMatrix) -> Option<ContainmentWitness> {
    let n = a.order();
    if n != b.order() {
        return None;
    }
    if n == 0 {
        return Some(ContainmentWitness { subset: vec![], switch_signs: vec![], permutation: vec![] });
    }
    if det_exact(a) != det_exact(b) || triangle_profile(a) != triangle_profile(b) {
        return None;
    }
    let b_norm = switch_row_positive(b, 0);
    let db = positive_row_signs(b, 0);
    for a0 in 0..n {
        let a_norm = switch_row_positive(a, a0);
        if let Some(perm) = isomorphism(&a_norm, &b_norm, a0) {
            let da = positive_row_signs(a, a0);
            let mut signs = vec![0i64; n];
            for i in 0..n {
                signs[perm[i]] = da[perm[i]] * db[i];
            }
            return Some(ContainmentWitness { subset: (0..n).collect(), switch_signs: signs, permutation: perm });
        }
    }
    None
}

/// `Some(c)` when `t` is switching-equivalent to `c * (J - I)`.
fn complete_class(t: &SeidelMatrix) -> Option<i64> {
    let n = t.order();
    if n < 2 {
        return Some(1);
    }
    [1, -1].into_iter().find(|&c| consistent_with_complete(t, &(0..n).collect::<Vec<_>>(), c))
}

/// With `d_0 = 1` and `d_j = c * M[s_0][s_j]`, every switched entry on the
/// subset equals `c`.
fn consistent_with_complete(m: &IntegerMatrix, subset: &[usize], c: i64) -> bool {
    let d: Vec<i64> =
        subset.iter().enumerate().map(|(j, &s)| if j == 0 { 1 } else { c * m.get(subset[0], s) }).collect();
    subset.iter().enumerate().tuple_combinations().all(|((i, &si), (j, &sj))| d[i] * d[j] * m.get(si, sj) == c)
}

fn complete_witness(m: &IntegerMatrix, subset: Vec<usize>, target: &SeidelMatrix, c: i64) -> ContainmentWitness {
    // Switch the subset to c * (J - I), then map onto the target, which is
    // itself a switching of c * (J - I).
    let k = subset.len();
    let d: Vec<i64> = (0..k).map(|j| if j == 0 { 1 } else { c * m.get(subset[0], subset[j]) }).collect();
    let t_signs: Vec<i64> = (0..k).map(|j| if j == 0 { 1 } else { c * target.get(0, j) }).collect();
    // target = T_d * (c K) * T_d, so target[i][j] = t_i t_j d_i d_j M[..]
    let switch_signs = (0..k).map(|j| d[j] * t_signs[j]).collect();
    ContainmentWitness { subset, switch_signs, permutation: (0..k).collect() }
}

/// All `k`-subsets, lexicographic.
fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(k)
}

fn check_order(m: &SeidelMatrix, t: &SeidelMatrix) -> Result<()> {
    if t.order() > m.order() {
        return Err(Error::OrderError { target: t.order(), matrix: m.order() });
    }
    Ok(())
}

fn witness_on(
    m: &SeidelMatrix,
    t: &SeidelMatrix,
    subset: Vec<usize>,
    class: Option<i64>,
) -> Option<ContainmentWitness> {
    if let Some(c) = class {
        return consistent_with_complete(m, &subset, c).then(|| complete_witness(m, subset, t, c));
    }
    let sub = m.submatrix(&subset);
    switching_equivalent(&sub, t).map(|w| ContainmentWitness { subset, ..w })
}

/// First subset (lexicographic) of `m` whose principal submatrix is
/// switching-equivalent to `t`.
pub fn contains_submatrix(m: &SeidelMatrix, t: &SeidelMatrix) -> Result<Option<ContainmentWitness>> {
    check_order(m, t)?;
    let class = complete_class(t);
    let found = subsets(m.order(), t.order())
        .collect::<Vec<_>>()
        .into_par_iter()
        .find_map_first(|s| witness_on(m, t, s, class));
    Ok(found)
}

/// Every subset of `m` carrying a copy of `t`, one witness per subset.
pub fn all_occurrences(m: &SeidelMatrix, t: &SeidelMatrix) -> Result<Vec<ContainmentWitness>> {
    check_order(m, t)?;
    let class = complete_class(t);
    Ok(subsets(m.order(), t.order())
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|s| witness_on(m, t, s, class))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K5Witness {
    pub witness: ContainmentWitness,
    /// `+1` for K5, `-1` for its mirror.
    pub sign: i64,
}

/// A K5 or mirrored K5 inside any Seidel matrix of order at least 19.
///
/// Row 0 is switched positive; among the remaining 18 or more vertices a
/// 4-clique of equal signs must exist since R(4,4) = 18. A `+1` clique
/// closes a K5 with vertex 0, a `-1` clique a mirrored K5 once vertex 0 is
/// switched.
///
/// # Panics
/// If the order is below 19 or no clique is found; the latter cannot happen
/// for a valid Seidel matrix.
pub fn find_k5(m: &SeidelMatrix) -> K5Witness {
    let n = m.order();
    assert!(n >= 19, "find_k5 needs order >= 19, got {n}");
    let a = switch_row_positive(m, 0);
    let base = positive_row_signs(m, 0);
    for sign in [1i64, -1] {
        if let Some(clique) = mono_clique(&a, sign, 4) {
            let subset: Vec<usize> = std::iter::once(0).chain(clique).collect();
            let mut switch_signs: Vec<i64> = subset.iter().map(|&v| base[v]).collect();
            if sign < 0 {
                switch_signs[0] = -switch_signs[0];
            }
            let witness = ContainmentWitness { subset, switch_signs, permutation: (0..5).collect() };
            debug_assert!(witness.verifies(m, &SeidelMatrix::complete(5).scaled(sign)));
            return K5Witness { witness, sign };
        }
    }
    panic!("no monochromatic 4-clique in an order-{n} Seidel matrix");
}

/// Vertices `1..n` forming a clique of size `k` whose entries all equal `sign`.
fn mono_clique(a: &SeidelMatrix, sign: i64, k: usize) -> Option<Vec<usize>> {
    fn grow(a: &SeidelMatrix, sign: i64, k: usize, cur: &mut Vec<usize>, cands: &[usize]) -> bool {
        if cur.len() == k {
            return true;
        }
        for (idx, &v) in cands.iter().enumerate() {
            let next: Vec<usize> = cands[idx + 1..].iter().copied().filter(|&w| a.get(v, w) == sign).collect();
            if next.len() + cur.len() + 1 < k {
                continue;
            }
            cur.push(v);
            if grow(a, sign, k, cur, &next) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let cands: Vec<usize> = (1..a.order()).collect();
    let mut cur = Vec::with_capacity(k);
    grow(a, sign, k, &mut cur, &cands).then_some(cur)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Possible,
    /// A 4-subset whose own ring matrix has two or more entangled lines.
    Forbidden4cross {
        subset: Vec<usize>,
    },
    /// A 5-subset whose own ring matrix vanishes. Subset ring matrices are
    /// recomputed on the sub-configuration, not sliced from the full one.
    ForbiddenFree5cross {
        subset: Vec<usize>,
    },
    ForbiddenSubmatrix {
        name: String,
        witness: ContainmentWitness,
    },
}

impl Verdict {
    pub fn is_possible(&self) -> bool {
        matches!(self, Verdict::Possible)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Possible => write!(f, "possible"),
            Verdict::Forbidden4cross { subset } => write!(f, "forbidden_4cross {subset:?}"),
            Verdict::ForbiddenFree5cross { subset } => write!(f, "forbidden_free5cross {subset:?}"),
            Verdict::ForbiddenSubmatrix { name, witness } => {
                write!(f, "forbidden_submatrix {name} {:?}", witness.subset)
            }
        }
    }
}

/// Forbidden chirality submatrices: K5 and P250 with their mirrors.
pub fn forbidden_submatrix(p: &SeidelMatrix) -> Option<(String, ContainmentWitness)> {
    let k5 = SeidelMatrix::complete(5);
    let p250 = lookup("P250").and_then(|m| m.seidel()).expect("built-in");
    let targets = [("K5", k5.clone()), ("-K5", k5.mirrored()), ("P250", p250.clone()), ("-P250", p250.mirrored())];
    targets
        .into_iter()
        .filter(|(_, t)| t.order() <= p.order())
        .find_map(|(name, t)| contains_submatrix(p, &t).ok().flatten().map(|w| (name.to_string(), w)))
}

/// Apply the forbiddance criteria in order: forbidden submatrices, 4-crosses
/// with two rings, free 5-crosses. The first hit (lexicographic subset) wins.
pub fn knottability_filter(config: &Configuration) -> Result<Verdict> {
    config.check_nondegenerate()?;
    let n = config.len();
    let p = chirality_matrix(config)?;
    if let Some((name, witness)) = forbidden_submatrix(&p) {
        return Ok(Verdict::ForbiddenSubmatrix { name, witness });
    }
    if n >= 4 {
        let hits = subsets(n, 4)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|s| ring_matrix(&config.subset(&s)).map(|r| (r.entangled_lines().len() >= 2).then_some(s)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(subset) = hits.into_iter().flatten().next() {
            return Ok(Verdict::Forbidden4cross { subset });
        }
    }
    if n >= 5 {
        let hits = subsets(n, 5)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|s| ring_matrix(&config.subset(&s)).map(|r| r.is_zero().then_some(s)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(subset) = hits.into_iter().flatten().next() {
            return Ok(Verdict::ForbiddenFree5cross { subset });
        }
    }
    Ok(Verdict::Possible)
}
