//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The corpus is 200 seeded instances with 6 to 14 vertices (seeds 0..200);
//! all checks on it are exact.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::Zero;

use twofactor_core::bracket::{bracket_factored, bracket_state_sum};
use twofactor_core::factors::{
    enumerate_perfect_matchings, tait_colorings_count, tait_polynomial,
    two_factor_count_formula, two_factor_enumerate, with_matching,
};
use twofactor_core::fixtures;
use twofactor_core::harness::{bridge_join, corpus, insert_bubble};
use twofactor_core::ihmoves::{
    check_bridge, check_bubble, check_ih_relation, check_triangle, detect_bubbles, ih_move,
    reduce_to_short_cycle, replay, triangle_closure_identity,
};
use twofactor_core::{EdgeId, LaurentPoly, MatchedDiagram};

static CORPUS: LazyLock<Vec<MatchedDiagram>> =
    LazyLock::new(|| corpus(200, 6, 14, 0).expect("corpus generates"));

fn poly(text: &str) -> LaurentPoly {
    LaurentPoly::from_text(text).unwrap()
}

fn pass(line: &str) {
    println!("criterion {line}: PASS");
}

#[test]
fn criterion_01_exact_paper_polynomials() {
    assert_eq!(bracket_state_sum(&fixtures::theta()).unwrap(), poly("z^-2 + 1"));
    assert_eq!(
        bracket_state_sum(&fixtures::p3_ladder()).unwrap(),
        poly("z^-3 - z^2 + z^3 - z^4")
    );
    assert_eq!(
        bracket_state_sum(&fixtures::p3_c()).unwrap(),
        poly("z^-2 - z^-1 + 1 + z^3")
    );
    pass("01 exact bracket polynomials on theta and both prisms");
}

#[test]
fn criterion_02_exact_counts_both_routes() {
    let ladder = fixtures::p3_ladder();
    assert_eq!(
        bracket_state_sum(&ladder).unwrap().eval_at_one(),
        BigInt::zero()
    );
    assert_eq!(two_factor_count_formula(&ladder).unwrap(), BigInt::zero());
    assert_eq!(two_factor_enumerate(&ladder).unwrap().len(), 0);

    let c = fixtures::p3_c();
    assert_eq!(
        bracket_state_sum(&c).unwrap().eval_at_one(),
        BigInt::from(2)
    );
    assert_eq!(two_factor_count_formula(&c).unwrap(), BigInt::from(2));
    assert_eq!(two_factor_enumerate(&c).unwrap().len(), 2);
    pass("02 prism counts by formula and enumeration");
}

#[test]
fn criterion_03_tait_fixtures() {
    let theta_tait = tait_polynomial(&fixtures::theta()).unwrap();
    assert_eq!(theta_tait, poly("3z^-2 + 3"));
    assert_eq!(theta_tait.eval_at_one(), BigInt::from(6));
    assert_eq!(tait_colorings_count(&fixtures::theta()).unwrap(), 6);

    let prism_tait = tait_polynomial(&fixtures::p3_ladder()).unwrap();
    let expected = &poly("z^-3 - z^2 + z^3 - z^4") + &poly("z^-2 - z^-1 + 1 + z^3").scale(3);
    assert_eq!(prism_tait, expected);
    assert_eq!(prism_tait.eval_at_one(), BigInt::from(6));
    assert_eq!(tait_colorings_count(&fixtures::p3_ladder()).unwrap(), 6);
    pass("03 Tait polynomials and coloring counts on theta and the prism");
}

#[test]
fn criterion_04_count_theorem_on_corpus() {
    let mut pairs = 0usize;
    for d in CORPUS.iter() {
        for m in enumerate_perfect_matchings(d).unwrap() {
            let installed = with_matching(d, &m);
            let at_one = bracket_state_sum(&installed).unwrap().eval_at_one();
            let formula = two_factor_count_formula(&installed).unwrap();
            let enumerated = two_factor_enumerate(&installed).unwrap().len();
            assert_eq!(at_one, formula, "{} {:?}", d.name, m.edges);
            assert_eq!(formula, BigInt::from(enumerated), "{} {:?}", d.name, m.edges);
            pairs += 1;
        }
    }
    assert!(CORPUS.len() >= 200);
    pass(&format!(
        "04 bracket(1) = formula = enumeration on {} (graph, matching) pairs",
        pairs
    ));
}

#[test]
fn criterion_05_ih_relations_everywhere() {
    let mut edges = 0usize;
    for d in fixtures::all().iter().chain(CORPUS.iter()) {
        for e in d.matching_edges() {
            let report = check_ih_relation(d, e).unwrap();
            assert!(
                report.poly_holds() && report.count_holds(),
                "{} edge {e}: {} vs {} / {} vs {}",
                d.name,
                report.poly_lhs,
                report.poly_rhs,
                report.count_lhs,
                report.count_rhs
            );
            edges += 1;
        }
    }
    pass(&format!("05 IH-relations (polynomial and count) on {edges} matching edges"));
}

#[test]
fn criterion_06_bubble_bridge_triangle() {
    let theta = fixtures::theta();
    let k4 = fixtures::k4();
    let ladder = fixtures::p3_ladder();

    let double_theta = bridge_join(&theta, EdgeId(1), &theta, EdgeId(1)).unwrap();
    let bridged: Vec<MatchedDiagram> = vec![
        ih_move(&theta, EdgeId(0)).unwrap(), // two loops joined by a bridge
        double_theta.clone(),
        bridge_join(&ladder, EdgeId(0), &theta, EdgeId(2)).unwrap(),
        bridge_join(&double_theta, EdgeId(1), &theta, EdgeId(1)).unwrap(),
        bridge_join(&k4, EdgeId(1), &k4, EdgeId(2)).unwrap(),
    ];
    for d in &bridged {
        assert!(d.is_valid(), "{}: {}", d.name, d.validate());
        let report = check_bridge(d).unwrap();
        assert!(report.triggered(), "{} should have a bridge", d.name);
        assert!(report.passed(), "{}: {:?}", d.name, report);
    }

    let bubbled: Vec<MatchedDiagram> = vec![
        insert_bubble(&theta, EdgeId(0)).unwrap(),
        insert_bubble(&insert_bubble(&theta, EdgeId(0)).unwrap(), EdgeId(0)).unwrap(),
        insert_bubble(&ladder, EdgeId(6)).unwrap(),
        insert_bubble(&fixtures::p3_c(), EdgeId(1)).unwrap(),
        insert_bubble(&k4, EdgeId(0)).unwrap(),
    ];
    let mut bubbles_checked = 0usize;
    for d in &bubbled {
        assert!(d.is_valid(), "{}: {}", d.name, d.validate());
        let bubbles = detect_bubbles(d).unwrap();
        assert!(!bubbles.is_empty(), "{} should have a bubble", d.name);
        for bubble in &bubbles {
            let report = check_bubble(d, bubble).unwrap();
            assert!(report.passed(), "{}: {:?}", d.name, report);
            bubbles_checked += 1;
        }
    }

    let mut triangles = 0usize;
    let triangle_report = check_triangle(&ladder).unwrap();
    assert!(triangle_report.triggered() && triangle_report.passed());
    for d in CORPUS.iter() {
        let report = check_triangle(d).unwrap();
        if report.triggered() {
            triangles += 1;
        }
        assert!(report.passed(), "{}", d.name);
        for bubble in detect_bubbles(d).unwrap() {
            let report = check_bubble(d, &bubble).unwrap();
            assert!(report.passed(), "{}: {:?}", d.name, report);
            bubbles_checked += 1;
        }
        assert!(check_bridge(d).unwrap().passed(), "{}", d.name);
    }
    assert!(triangles > 0, "corpus should contain complement triangles");
    pass(&format!(
        "06 bridge/bubble/triangle vanishing ({} bridged, {} bubbled constructions, {} bubbles, {} corpus triangles)",
        bridged.len(),
        bubbled.len(),
        bubbles_checked,
        triangles
    ));
}

#[test]
fn criterion_07_closure_identity() {
    let report = triangle_closure_identity();
    assert_eq!(report.cases.len(), 15);
    assert!(report.all_zero());

    // The three cited closures, by their per-column circle profiles:
    // 2 - 3*2 + 3*2 - 2, then 2^2 - 2^2 - 2*2 + 2*2 + 2^2 - 2^2, then
    // 2 - 3*2 + 3*2^2 - 2^3.
    let local = report.case_for([[0, 1], [2, 3], [4, 5]]).unwrap();
    assert_eq!(local.columns, vec![vec![1], vec![1, 1, 1], vec![1, 1, 1], vec![1]]);
    let braid = report.case_for([[0, 1], [2, 4], [3, 5]]).unwrap();
    assert_eq!(braid.columns, vec![vec![2], vec![1, 1, 2], vec![1, 1, 2], vec![2]]);
    let crossed = report.case_for([[0, 3], [1, 5], [2, 4]]).unwrap();
    assert_eq!(crossed.columns, vec![vec![1], vec![1, 1, 1], vec![2, 2, 2], vec![3]]);
    pass("07 all 15 triangle closures vanish with the three cited term patterns");
}

#[test]
fn criterion_08_reduction_with_replay() {
    for d in CORPUS.iter() {
        let (reduced, moves) = reduce_to_short_cycle(d).unwrap();
        let shortest = reduced.complement_cycles().unwrap().shortest().unwrap();
        assert!(shortest <= 3, "{}: shortest {shortest}", d.name);
        assert_eq!(replay(d, &moves).unwrap(), reduced, "{}", d.name);
    }
    pass(&format!(
        "08 short-cycle reduction with exact replay on {} corpus graphs",
        CORPUS.len()
    ));
}

#[test]
fn criterion_09_tait_positivity() {
    for d in CORPUS.iter() {
        assert!(d.is_connected() && d.find_bridges().unwrap().is_empty());
        let value = tait_polynomial(d).unwrap().eval_at_one();
        assert!(value > BigInt::zero(), "{}: T(1) = {value}", d.name);
    }
    pass(&format!(
        "09 Tait polynomial positive at 1 on {} bridgeless connected graphs",
        CORPUS.len()
    ));
}

#[test]
fn criterion_10_engine_self_consistency() {
    for d in CORPUS.iter() {
        let direct = bracket_state_sum(d).unwrap();
        assert_eq!(bracket_factored(d).unwrap(), direct, "{}", d.name);
        assert_eq!(bracket_state_sum(&d.mirror()).unwrap(), direct, "{}", d.name);
    }
    pass(&format!(
        "10 state-sum/factored and mirror agreement on {} corpus graphs",
        CORPUS.len()
    ));
}

#[test]
fn corpus_is_well_formed() {
    let names: BTreeSet<&str> = CORPUS.iter().map(|d| d.name.as_str()).collect();
    assert_eq!(names.len(), CORPUS.len(), "corpus names are unique");
    for d in CORPUS.iter() {
        assert!(d.is_valid(), "{}: {}", d.name, d.validate());
        assert!(d.vertex_count() >= 6 && d.vertex_count() <= 14);
    }
}
