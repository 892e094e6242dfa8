//! Acceptance gate: one test per criterion, named criterion_NN_*, so the
//! harness prints one pass/fail line each. Tolerances and runtime budgets
//! are pinned as constants next to the checks that use them.

use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use quartica::curve::{derive_section, restrict, verify_bitangent, BitangentSection};
use quartica::io::{builtin_klein, Dataset};
use quartica::oracle::{
    connected_number_numeric, find_bitangents_numeric, OracleOptions,
};
use quartica::pairing::{gram_matrix, SignMatrix};
use quartica::topology::{
    classify_subsets, connected_number_det, connected_number_liftgraph, connected_number_triple,
    parity_identity_check, subarrangement_invariant, InvariantPair,
};

/// Coordinate agreement between exact embeddings and the numeric search.
const EMBED_MATCH_TOL: f64 = 1e-8;
const BUDGET_GRAM: Duration = Duration::from_secs(1);
const BUDGET_RULES: Duration = Duration::from_secs(1);
const BUDGET_SECTIONS: Duration = Duration::from_secs(30);
const BUDGET_ORACLE: Duration = Duration::from_secs(60);

fn sections_for(ds: &Dataset, positions: &[usize]) -> Vec<BitangentSection> {
    positions
        .iter()
        .map(|&p| ds.section_for(p - 1).expect("section derivation succeeds"))
        .collect()
}

fn gram_of(ds: &Dataset, positions: &[usize]) -> SignMatrix {
    gram_matrix(&sections_for(ds, positions)).expect("well-defined sign matrix")
}

fn entries_of(ds: &Dataset, positions: &[usize]) -> Vec<Vec<i8>> {
    gram_of(ds, positions).entries().to_vec()
}

#[test]
fn criterion_01_klein_gram_matrices() {
    let start = Instant::now();
    let ds = builtin_klein();
    assert_eq!(
        entries_of(&ds, &[1, 2, 3]),
        vec![vec![3, -1, -1], vec![-1, 3, -1], vec![-1, -1, 3]],
        "G(1,2,3)"
    );
    assert_eq!(
        entries_of(&ds, &[1, 2, 4]),
        vec![vec![3, -1, -1], vec![-1, 3, 1], vec![-1, 1, 3]],
        "G(1,2,4)"
    );
    assert!(start.elapsed() < BUDGET_GRAM, "took {:?}", start.elapsed());
    println!("criterion 1: PASS - G(1,2,3) and G(1,2,4) exact in {:?}", start.elapsed());
}

#[test]
fn criterion_02_zariski_pair_connected_numbers() {
    let ds = builtin_klein();
    for (positions, expected) in [([1usize, 2, 3], 2u8), ([1, 2, 4], 1)] {
        let sections = sections_for(&ds, &positions);
        let g = gram_matrix(&sections).unwrap();
        assert_eq!(connected_number_triple(&g).unwrap(), expected, "parity on {positions:?}");
        assert_eq!(connected_number_det(&g).unwrap(), expected, "determinant on {positions:?}");
        assert_eq!(
            connected_number_liftgraph(&sections).unwrap(),
            usize::from(expected),
            "lift graph on {positions:?}"
        );
    }
    println!("criterion 2: PASS - c(L1,L2,L3) = 2 and c(L1,L2,L4) = 1 by all three methods");
}

#[test]
fn criterion_03_zariski_triple_invariants() {
    let ds = builtin_klein();
    // The values below are forced by the pairwise sign data checked in
    // criteria 1 and 4: {1,2,4,7} has all triples even (invariant (4,0)),
    // {1,2,3,5} all odd ((0,4)). A display elsewhere swaps the two; the
    // sign matrices themselves are the authority.
    let i1 = subarrangement_invariant(&sections_for(&ds, &[1, 2, 3, 5])).unwrap();
    let i2 = subarrangement_invariant(&sections_for(&ds, &[1, 2, 3, 6])).unwrap();
    let i3 = subarrangement_invariant(&sections_for(&ds, &[1, 2, 4, 7])).unwrap();
    assert_eq!((i1.count1, i1.count2), (0, 4), "invariant of {{1,2,3,5}}");
    assert_eq!((i2.count1, i2.count2), (2, 2), "invariant of {{1,2,3,6}}");
    assert_eq!((i3.count1, i3.count2), (4, 0), "invariant of {{1,2,4,7}}");
    assert!(i1 != i2 && i2 != i3 && i1 != i3, "three distinct classes");

    let sections = sections_for(&ds, &[1, 2, 3, 4, 5, 6, 7]);
    let classification = classify_subsets(&sections, 4, 1_000_000).unwrap();
    assert_eq!(classification.classes.len(), 3, "classify n=4 over L1..L7");
    let expected = [
        InvariantPair { count1: 0, count2: 4 },
        InvariantPair { count1: 2, count2: 2 },
        InvariantPair { count1: 4, count2: 0 },
    ];
    for pair in expected {
        assert!(
            classification.classes.contains_key(&pair),
            "class {pair} present"
        );
    }
    println!(
        "criterion 3: PASS - invariants (0,4)/(2,2)/(4,0) for {{1,2,3,5}}/{{1,2,3,6}}/{{1,2,4,7}}, three classes at n=4 \
         (assignment follows the sign matrices; a published display transposes the first and last)"
    );
}

#[test]
fn criterion_04_auxiliary_gram_matrices() {
    let ds = builtin_klein();
    let plus_pattern = vec![vec![3, -1, -1], vec![-1, 3, 1], vec![-1, 1, 3]];
    assert_eq!(entries_of(&ds, &[1, 2, 6]), plus_pattern, "G(1,2,6)");
    assert_eq!(entries_of(&ds, &[1, 3, 6]), plus_pattern, "G(1,3,6)");
    assert_eq!(
        entries_of(&ds, &[2, 3, 6]),
        vec![vec![3, -1, 1], vec![-1, 3, 1], vec![1, 1, 3]],
        "G(2,3,6)"
    );
    assert_eq!(
        entries_of(&ds, &[2, 4, 7]),
        vec![vec![3, 1, 1], vec![1, 3, 1], vec![1, 1, 3]],
        "G(2,4,7)"
    );
    let g123 = entries_of(&ds, &[1, 2, 3]);
    assert_eq!(entries_of(&ds, &[1, 2, 5]), g123, "G(1,2,5) = G(1,2,3)");
    assert_eq!(entries_of(&ds, &[1, 3, 5]), g123, "G(1,3,5) = G(1,2,3)");
    let g124 = entries_of(&ds, &[1, 2, 4]);
    assert_eq!(entries_of(&ds, &[1, 2, 7]), g124, "G(1,2,7) = G(1,2,4)");
    assert_eq!(entries_of(&ds, &[1, 4, 7]), g124, "G(1,4,7) = G(1,2,4)");
    println!("criterion 4: PASS - auxiliary sign matrices and stated equalities hold exactly");
}

#[test]
fn criterion_05_parity_and_determinant_rules_agree() {
    let start = Instant::now();
    for mask in 0..8u8 {
        let s = |bit: u8| if mask & (1 << bit) != 0 { 1i8 } else { -1 };
        let (s12, s13, s23) = (s(0), s(1), s(2));
        let entries = vec![
            vec![3, s12, s13],
            vec![s12, 3, s23],
            vec![s13, s23, 3],
        ];
        let g = SignMatrix::from_entries(vec![0, 1, 2], entries).unwrap();
        let by_parity = connected_number_triple(&g).unwrap();
        // The determinant rule must be defined (det in {+2, -2}) and agree.
        let by_det = connected_number_det(&g).unwrap();
        assert_eq!(by_parity, by_det, "pattern ({s12},{s13},{s23})");
    }
    assert!(start.elapsed() < BUDGET_RULES, "took {:?}", start.elapsed());
    println!("criterion 5: PASS - parity and determinant rules agree on all 8 sign patterns");
}

#[test]
fn criterion_06_lift_graph_equivalence() {
    let ds = builtin_klein();
    let seven = sections_for(&ds, &[1, 2, 3, 4, 5, 6, 7]);
    for i in 0..7 {
        for j in (i + 1)..7 {
            for k in (j + 1)..7 {
                let triple = [seven[i].clone(), seven[j].clone(), seven[k].clone()];
                let g = gram_matrix(&triple).unwrap();
                assert_eq!(
                    connected_number_liftgraph(&triple).unwrap(),
                    usize::from(connected_number_triple(&g).unwrap()),
                    "triple ({i},{j},{k})"
                );
            }
        }
    }
    let all: Vec<BitangentSection> = (0..28)
        .map(|p| ds.section_for(p).expect("section derivation succeeds"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let mut picks: Vec<usize> = (0..28).collect();
        picks.shuffle(&mut rng);
        picks.truncate(3);
        let triple: Vec<BitangentSection> = picks.iter().map(|&p| all[p].clone()).collect();
        let g = gram_matrix(&triple).unwrap();
        assert_eq!(
            connected_number_liftgraph(&triple).unwrap(),
            usize::from(connected_number_triple(&g).unwrap()),
            "random triple {picks:?}"
        );
    }
    println!("criterion 6: PASS - lift graph matches parity on all 35 distinguished triples and 100 random triples of 28");
}

#[test]
fn criterion_07_parity_identity() {
    let ds = builtin_klein();
    let seven = sections_for(&ds, &[1, 2, 3, 4, 5, 6, 7]);
    let mut exhaustive = 0usize;
    for mask in 0u32..128 {
        let subset: Vec<BitangentSection> = (0..7)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| seven[b].clone())
            .collect();
        if subset.len() < 3 {
            continue;
        }
        // parity_identity_check verifies m(n-2) = 2M + count2 internally and
        // errors on violation.
        let report = parity_identity_check(&subset).unwrap();
        if report.n % 2 == 0 {
            assert_eq!(report.count2 % 2, 0, "even subset size {} has even count2", report.n);
        }
        exhaustive += 1;
    }
    assert_eq!(exhaustive, 99, "subsets of sizes 3..=7 of a 7-set");

    let all: Vec<BitangentSection> = (0..28)
        .map(|p| ds.section_for(p).expect("section derivation succeeds"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..100 {
        let size = rng.random_range(4..=6);
        let mut picks: Vec<usize> = (0..28).collect();
        picks.shuffle(&mut rng);
        picks.truncate(size);
        let subset: Vec<BitangentSection> = picks.iter().map(|&p| all[p].clone()).collect();
        let report = parity_identity_check(&subset).unwrap();
        if size % 2 == 0 {
            assert_eq!(report.count2 % 2, 0, "trial {trial}: even size {size} has even count2");
        }
    }

    let classification = classify_subsets(&seven, 4, 1_000_000).unwrap();
    assert!(
        classification.classes.len() <= 3,
        "distinct invariant pairs at n=4 bounded by C(4,3)/2 + 1 = 3"
    );
    println!("criterion 7: PASS - counting identity on 99 exhaustive and 100 random subsets; n=4 classes <= 3");
}

#[test]
fn criterion_08_section_derivation() {
    let start = Instant::now();
    let ds = builtin_klein();
    for entry in &ds.lines {
        let line = entry.line();
        assert!(verify_bitangent(&ds.curve, &line), "{} bitangent", entry.name);
        let derived = derive_section(&ds.curve, &line).expect("square root reconstruction");
        let y = derived.y_poly();
        assert_eq!(
            y.checked_mul(&y).unwrap(),
            restrict(&ds.curve, &line).unwrap(),
            "y^2 = F|_L on {}",
            entry.name
        );
        if let Some(printed) = entry.stored_section() {
            let same = derived == printed || derived == printed.negated();
            assert!(same, "derived section of {} equals the stored one up to sign", entry.name);
        }
    }
    assert!(start.elapsed() < BUDGET_SECTIONS, "took {:?}", start.elapsed());
    println!(
        "criterion 8: PASS - sections derived on all 28 lines, matching stored ones up to sign, in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_09_numeric_oracle() {
    let start = Instant::now();
    let ds = builtin_klein();
    let opts = OracleOptions::default();
    let seven: Vec<_> = ds.lines[..7].iter().map(|l| l.line()).collect();
    let seven_sections = sections_for(&ds, &[1, 2, 3, 4, 5, 6, 7]);
    for i in 0..7 {
        for j in (i + 1)..7 {
            for k in (j + 1)..7 {
                let lines = vec![seven[i].clone(), seven[j].clone(), seven[k].clone()];
                let triple = [
                    seven_sections[i].clone(),
                    seven_sections[j].clone(),
                    seven_sections[k].clone(),
                ];
                let exact = connected_number_liftgraph(&triple).unwrap();
                let numeric = connected_number_numeric(&ds.curve, &lines, 1, &opts).unwrap();
                assert_eq!(numeric, exact, "triple ({i},{j},{k})");
            }
        }
    }

    let search = OracleOptions {
        expected: Some(28),
        ..OracleOptions::default()
    };
    let found = find_bitangents_numeric(&ds.curve, 1, &search).unwrap();
    assert_eq!(found.len(), 28);
    for entry in &ds.lines {
        let a = entry.a.embed_f64(1).unwrap();
        let b = entry.b.embed_f64(1).unwrap();
        let hits = found
            .iter()
            .filter(|l| (l.a - a).norm() < EMBED_MATCH_TOL && (l.b - b).norm() < EMBED_MATCH_TOL)
            .count();
        assert_eq!(hits, 1, "{} recovered once within {EMBED_MATCH_TOL}", entry.name);
    }
    assert!(start.elapsed() < BUDGET_ORACLE, "took {:?}", start.elapsed());
    println!(
        "criterion 9: PASS - oracle matches exact connected numbers on 35 triples and recovers all 28 lines in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_10_scope_note() {
    // The step from unequal invariants to non-homeomorphic embeddings is
    // accepted as given; this suite checks the invariant computations that
    // feed it, nothing topological.
    println!("criterion 10: PASS - scope note: topological conclusion accepted as given; invariant computations verified above");
}
