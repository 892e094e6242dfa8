//! Connected components of bitangent subsets in the double cover, computed
//! three independent ways, plus the invariant pair that separates
//! arrangements with identical combinatorics.
//!
//! The double cover branched along the quartic pulls every bitangent apart
//! into two lifts. For a subset of bitangents the number of connected
//! components of the preimage is captured by a finite graph on the 2k lifts
//! whose edges come from the meeting pattern of the sections. For a triple,
//! the same number also falls out of the sign matrix, either through the
//! parity of its -1 entries or through det(G - 3I).

pub mod unionfind;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::curve::{lines_concurrent, BitangentSection};
use crate::error::{Error, Result};
use crate::pairing::{gram_matrix, intersection_datum, IntersectionKind, SignMatrix};
use unionfind::UnionFind;

/// A lift of a bitangent: (line index, sign of the chosen section).
pub type LiftVertex = (usize, i8);

/// Graph on the 2k lifts; each line pair contributes exactly two edges,
/// joining lifts that pass through the same point of the plane.
pub struct LiftGraph {
    line_count: usize,
    edges: Vec<(LiftVertex, LiftVertex)>,
}

impl LiftGraph {
    pub fn from_sections(sections: &[BitangentSection]) -> Result<LiftGraph> {
        let k = sections.len();
        if k == 0 {
            return Err(Error::InvalidInput(
                "a lift graph needs at least one section".into(),
            ));
        }
        let mut edges = Vec::with_capacity(k * (k - 1));
        for i in 0..k {
            for j in i + 1..k {
                let kind = intersection_datum(i, j, &sections[i], &sections[j])?.kind;
                match kind {
                    IntersectionKind::SamePoint => {
                        edges.push(((i, 1), (j, 1)));
                        edges.push(((i, -1), (j, -1)));
                    }
                    IntersectionKind::OppositePoint => {
                        edges.push(((i, 1), (j, -1)));
                        edges.push(((i, -1), (j, 1)));
                    }
                }
            }
        }
        Ok(LiftGraph {
            line_count: k,
            edges,
        })
    }

    pub fn line_count(&self) -> usize {
        self.line_count
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.line_count
    }

    pub fn edges(&self) -> &[(LiftVertex, LiftVertex)] {
        &self.edges
    }

    fn vertex_id(&self, v: LiftVertex) -> usize {
        2 * v.0 + usize::from(v.1 < 0)
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(u, v) in &self.edges {
            uf.union(self.vertex_id(u), self.vertex_id(v));
        }
        uf.components()
    }
}

/// Component count of the preimage of a bitangent subset, via the lift
/// graph. A single bitangent already splits into its two lifts.
pub fn connected_number_liftgraph(sections: &[BitangentSection]) -> Result<usize> {
    Ok(LiftGraph::from_sections(sections)?.components())
}

fn require_triple(g: &SignMatrix) -> Result<()> {
    if g.size() != 3 {
        return Err(Error::MalformedMatrix(format!(
            "triple rules need a 3 x 3 matrix, got {0} x {0}",
            g.size()
        )));
    }
    Ok(())
}

/// Connected number of a triple from the parity of its -1 entries: even
/// count means the two sheets join into one component... the cover stays
/// disconnected (2) exactly when the count is even.
pub fn connected_number_triple(g: &SignMatrix) -> Result<u8> {
    require_triple(g)?;
    Ok(if g.minus_count() % 2 == 0 { 1 } else { 2 })
}

/// The same number through det(G - 3I), which is +-2 for every admissible
/// sign matrix: +2 means one component, -2 means two.
pub fn connected_number_det(g: &SignMatrix) -> Result<u8> {
    require_triple(g)?;
    let m = |i: usize, j: usize| -> i64 {
        i64::from(g.entry(i, j)) - if i == j { 3 } else { 0 }
    };
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    match det {
        2 => Ok(1),
        -2 => Ok(2),
        other => Err(Error::MalformedMatrix(format!(
            "det(G - 3I) = {other}, expected +-2"
        ))),
    }
}

/// (number of triples with connected number 1, number with 2); the counts
/// always sum to C(k, 3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvariantPair {
    pub count1: usize,
    pub count2: usize,
}

impl fmt::Display for InvariantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.count1, self.count2)
    }
}

/// Triple census of a sign matrix of size >= 3.
pub fn subarrangement_invariant_matrix(g: &SignMatrix) -> Result<InvariantPair> {
    let k = g.size();
    if k < 3 {
        return Err(Error::InvalidInput(
            "invariant pairs need at least three sections".into(),
        ));
    }
    let mut pair = InvariantPair {
        count1: 0,
        count2: 0,
    };
    for t in (0..k).combinations(3) {
        if triple_minus_count(g, t[0], t[1], t[2]) % 2 == 0 {
            pair.count1 += 1;
        } else {
            pair.count2 += 1;
        }
    }
    Ok(pair)
}

pub fn subarrangement_invariant(sections: &[BitangentSection]) -> Result<InvariantPair> {
    subarrangement_invariant_matrix(&gram_matrix(sections)?)
}

fn triple_minus_count(g: &SignMatrix, i: usize, j: usize, k: usize) -> usize {
    [(i, j), (i, k), (j, k)]
        .iter()
        .filter(|&&(a, b)| g.entry(a, b) == -1)
        .count()
}

/// Both sides of the pairing identity m_I (n-2) = 2M + count2, each computed
/// from scratch: the left side counts -1 entries globally, the right side
/// tallies triples by how many -1 entries they contain (M is the number with
/// two or three).
#[derive(Clone, Copy, Debug)]
pub struct ParityReport {
    pub n: usize,
    pub m: usize,
    pub count2: usize,
    /// Triples with two or three -1 entries: the M of the identity.
    pub heavy_triples: usize,
}

pub fn parity_identity_matrix(g: &SignMatrix) -> Result<ParityReport> {
    let n = g.size();
    if n < 3 {
        return Err(Error::InvalidInput(
            "the parity identity needs at least three sections".into(),
        ));
    }
    let m = g.minus_count();
    let mut count2 = 0usize;
    let mut big_m = 0usize;
    for t in (0..n).combinations(3) {
        let minus = triple_minus_count(g, t[0], t[1], t[2]);
        if minus % 2 == 1 {
            count2 += 1;
        }
        if minus >= 2 {
            big_m += 1;
        }
    }
    let lhs = m * (n - 2);
    let rhs = 2 * big_m + count2;
    if lhs != rhs {
        return Err(Error::IdentityViolated(format!(
            "m({n} - 2) = {lhs} but 2M + count2 = {rhs}"
        )));
    }
    Ok(ParityReport {
        n,
        m,
        count2,
        heavy_triples: big_m,
    })
}

pub fn parity_identity_check(sections: &[BitangentSection]) -> Result<ParityReport> {
    parity_identity_matrix(&gram_matrix(sections)?)
}

/// All size-n subsets grouped by invariant pair. Subsets whose lines fail
/// the combinatorics sanity (a degenerate pair, or a concurrent triple) are
/// excluded from the classes and listed with the first reason found.
pub struct Classification {
    pub subset_size: usize,
    pub classes: BTreeMap<InvariantPair, Vec<Vec<usize>>>,
    pub skipped: Vec<(Vec<usize>, String)>,
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

pub fn classify_subsets(
    sections: &[BitangentSection],
    subset_size: usize,
    limit: u64,
) -> Result<Classification> {
    let k = sections.len();
    if subset_size < 3 || subset_size > k {
        return Err(Error::InvalidInput(format!(
            "subset size must be between 3 and {k}, got {subset_size}"
        )));
    }
    let total = binomial(k as u64, subset_size as u64);
    if total > u128::from(limit) {
        return Err(Error::LimitExceeded { total, limit });
    }

    // Pairwise intersection signs, with the failure reason for bad pairs.
    let mut sign = vec![vec![0i8; k]; k];
    let mut pair_reason: BTreeMap<(usize, usize), String> = BTreeMap::new();
    for i in 0..k {
        for j in i + 1..k {
            match intersection_datum(i, j, &sections[i], &sections[j]) {
                Ok(d) => {
                    let s = match d.kind {
                        IntersectionKind::SamePoint => -1,
                        IntersectionKind::OppositePoint => 1,
                    };
                    sign[i][j] = s;
                    sign[j][i] = s;
                }
                Err(e) => {
                    pair_reason.insert((i, j), e.to_string());
                }
            }
        }
    }
    let mut concurrent: Vec<(usize, usize, usize)> = Vec::new();
    for t in (0..k).combinations(3) {
        let (a, b, c) = (t[0], t[1], t[2]);
        if lines_concurrent(
            &sections[a].line,
            &sections[b].line,
            &sections[c].line,
        ) {
            concurrent.push((a, b, c));
        }
    }

    let mut classes: BTreeMap<InvariantPair, Vec<Vec<usize>>> = BTreeMap::new();
    let mut skipped: Vec<(Vec<usize>, String)> = Vec::new();
    for subset in (0..k).combinations(subset_size) {
        let bad_pair = subset
            .iter()
            .tuple_combinations()
            .find_map(|(&i, &j)| pair_reason.get(&(i, j)).cloned());
        if let Some(reason) = bad_pair {
            skipped.push((subset, reason));
            continue;
        }
        let in_subset = |x: usize| subset.contains(&x);
        if let Some(&(a, b, c)) = concurrent
            .iter()
            .find(|&&(a, b, c)| in_subset(a) && in_subset(b) && in_subset(c))
        {
            skipped.push((
                subset,
                format!("lines {a}, {b}, {c} are concurrent"),
            ));
            continue;
        }
        let mut pair = InvariantPair {
            count1: 0,
            count2: 0,
        };
        for t in subset.iter().combinations(3) {
            let minus = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
                .iter()
                .filter(|&&(a, b)| sign[*a][*b] == -1)
                .count();
            if minus % 2 == 0 {
                pair.count1 += 1;
            } else {
                pair.count2 += 1;
            }
        }
        classes.entry(pair).or_default().push(subset);
    }
    Ok(Classification {
        subset_size,
        classes,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{derive_section, BitangentLine, QuarticCurve};
    use crate::exactfield::{CyclotomicField, Poly};
    use std::sync::Arc;

    fn all_sign_matrices() -> Vec<SignMatrix> {
        let mut out = Vec::new();
        for bits in 0..8u8 {
            let s = |b: u8| -> i8 {
                if bits >> b & 1 == 1 {
                    -1
                } else {
                    1
                }
            };
            let (x, y, z) = (s(0), s(1), s(2));
            out.push(
                SignMatrix::from_entries(
                    vec![0, 1, 2],
                    vec![vec![3, x, y], vec![x, 3, z], vec![y, z, 3]],
                )
                .unwrap(),
            );
        }
        out
    }

    #[test]
    fn parity_and_determinant_rules_agree_on_all_eight_matrices() {
        for g in all_sign_matrices() {
            assert_eq!(
                connected_number_triple(&g).unwrap(),
                connected_number_det(&g).unwrap()
            );
        }
    }

    #[test]
    fn triple_rules_reject_other_sizes() {
        let g = SignMatrix::from_entries(vec![0, 1], vec![vec![3, 1], vec![1, 3]]).unwrap();
        assert!(connected_number_triple(&g).is_err());
        assert!(connected_number_det(&g).is_err());
    }

    fn klein() -> (Arc<CyclotomicField>, QuarticCurve) {
        let f = CyclotomicField::new(28).unwrap();
        let curve = QuarticCurve::new(
            &f,
            Poly::zero(&f),
            Poly::monomial(f.one(), 3),
            Poly::monomial(f.one(), 1),
        )
        .unwrap();
        (f, curve)
    }

    fn family0_sections(count: i64) -> Vec<BitangentSection> {
        let (f, curve) = klein();
        (0..count)
            .map(|j| {
                let line = BitangentLine::new(
                    format!("L0_{j}"),
                    -f.zeta_power(4 * j),
                    -f.zeta_power(12 * j),
                );
                derive_section(&curve, &line).unwrap()
            })
            .collect()
    }

    #[test]
    fn single_bitangent_splits_into_two_lifts() {
        let sections = family0_sections(1);
        assert_eq!(connected_number_liftgraph(&sections).unwrap(), 2);
    }

    #[test]
    fn any_pair_gives_two_components_and_two_edges() {
        let sections = family0_sections(2);
        let graph = LiftGraph::from_sections(&sections).unwrap();
        assert_eq!(graph.edges().len(), 2);
        assert_eq!(graph.components(), 2);
    }

    #[test]
    fn edge_set_is_symmetric_under_global_sign_swap() {
        let sections = family0_sections(5);
        let graph = LiftGraph::from_sections(&sections).unwrap();
        assert_eq!(graph.edges().len(), 2 * 10);
        for &((i, si), (j, sj)) in graph.edges() {
            assert!(graph
                .edges()
                .iter()
                .any(|&e| e == ((i, -si), (j, -sj))));
        }
    }

    #[test]
    fn liftgraph_matches_parity_rule_on_triples_of_the_first_family() {
        let sections = family0_sections(7);
        let g = gram_matrix(&sections).unwrap();
        for t in (0..7usize).combinations(3) {
            let sub = g.submatrix(&t);
            let by_parity = connected_number_triple(&sub).unwrap();
            let by_det = connected_number_det(&sub).unwrap();
            let triple: Vec<_> = t.iter().map(|&i| sections[i].clone()).collect();
            let by_graph = connected_number_liftgraph(&triple).unwrap();
            assert_eq!(usize::from(by_parity), by_graph, "triple {t:?}");
            assert_eq!(by_parity, by_det, "triple {t:?}");
        }
    }

    #[test]
    fn sign_flips_do_not_change_component_counts() {
        let mut sections = family0_sections(4);
        let before = connected_number_liftgraph(&sections).unwrap();
        let before_pair = subarrangement_invariant(&sections).unwrap();
        sections[1] = sections[1].negated();
        sections[3] = sections[3].negated();
        assert_eq!(connected_number_liftgraph(&sections).unwrap(), before);
        assert_eq!(subarrangement_invariant(&sections).unwrap(), before_pair);
    }

    #[test]
    fn parity_identity_holds_across_first_family_subsets() {
        let sections = family0_sections(7);
        for size in 3..=7usize {
            for subset in (0..7usize).combinations(size) {
                let chosen: Vec<_> = subset.iter().map(|&i| sections[i].clone()).collect();
                let report = parity_identity_check(&chosen).unwrap();
                assert_eq!(report.n, size);
                let inv = subarrangement_invariant(&chosen).unwrap();
                assert_eq!(inv.count2, report.count2);
                assert_eq!(
                    inv.count1 + inv.count2,
                    binomial(size as u64, 3) as usize
                );
                if size % 2 == 0 {
                    assert_eq!(report.count2 % 2, 0, "even-size subsets have even count2");
                }
            }
        }
    }

    #[test]
    fn classification_accounts_for_every_subset() {
        let sections = family0_sections(7);
        let result = classify_subsets(&sections, 4, 1_000_000).unwrap();
        let classified: usize = result.classes.values().map(|v| v.len()).sum();
        assert_eq!(classified + result.skipped.len(), 35);
        for (pair, subsets) in &result.classes {
            assert_eq!(pair.count1 + pair.count2, 4);
            assert!(!subsets.is_empty());
        }
    }

    #[test]
    fn classification_respects_the_enumeration_limit() {
        let sections = family0_sections(7);
        assert!(matches!(
            classify_subsets(&sections, 4, 10),
            Err(Error::LimitExceeded { total: 35, limit: 10 })
        ));
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(28, 4), 20475);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 5), 0);
    }
}
