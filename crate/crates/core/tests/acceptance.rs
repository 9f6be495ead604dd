//! Acceptance suite for the whole pipeline. Each test checks one release
//! criterion end to end and prints a single `acceptance N: PASS` line with
//! the measured runtime; criteria with a runtime budget assert it.

use std::time::{Duration, Instant};

use arrowpoly::atoms::{
    atom_characteristics, minimality_certificate, span_bound_check, thickness_bound_check,
    virtual_crossing_lower_bound, Verdict,
};
use arrowpoly::calibrate::{calibrate, calibration_is_unique};
use arrowpoly::corpus::{corpus, corpus_diagram, kishino_arrow_polynomial, CLASSICAL};
use arrowpoly::cube::{build_cube, BifurcationCube, EdgeKind};
use arrowpoly::homology::{euler_reconstruct, homology_of, BettiEntry};
use arrowpoly::khovanov::{
    build_complex, dprime_complement_check, verify_d_squared, GradingSystem,
};
use arrowpoly::moves::random_equivalent;
use arrowpoly::statesum::{bracket_oracle, StateSelector, SIGMA};
use arrowpoly::{
    arrow_polynomial, flat_specialization, normalized_arrow_polynomial, ArrowMonomial,
    ArrowPolynomial, LaurentPoly,
};

const SYSTEMS: [GradingSystem; 3] = [
    GradingSystem::Plain,
    GradingSystem::Dotted,
    GradingSystem::Full,
];

fn cube_of(name: &str) -> BifurcationCube {
    let d = corpus_diagram(name).expect("corpus name");
    build_cube(&d).expect("corpus diagram fits in the cube")
}

fn assert_budget(what: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, over the {budget:?} budget"
    );
}

fn report(n: u32, elapsed: Duration, detail: &str) {
    println!(
        "acceptance {n}: PASS ({detail}, {} ms)",
        elapsed.as_millis()
    );
}

/// Criterion 1: the Kishino knot evaluates to its known arrow polynomial,
/// exactly and in under a second.
#[test]
fn criterion_01_kishino_golden_value() {
    let start = Instant::now();
    let d = corpus_diagram("kishino").unwrap();
    let p = arrow_polynomial(&d);
    let elapsed = start.elapsed();
    assert_eq!(p, kishino_arrow_polynomial());
    assert_budget("kishino arrow polynomial", elapsed, Duration::from_secs(1));
    report(1, elapsed, "arrow polynomial matches the golden value");
}

/// Criterion 2: the flat specialization of the Kishino knot is
/// 3 + 2*K2 - 4*K1^2, exactly.
#[test]
fn criterion_02_kishino_flat_value() {
    let start = Instant::now();
    let d = corpus_diagram("kishino").unwrap();
    let mut expected = ArrowPolynomial::zero();
    expected.add_term(ArrowMonomial::one(), &LaurentPoly::monomial(0, 3));
    expected.add_term(ArrowMonomial::k(2), &LaurentPoly::monomial(0, 2));
    expected.add_term(ArrowMonomial::k_pow(1, 2), &LaurentPoly::monomial(0, -4));
    assert_eq!(flat_specialization(&d), expected);
    report(
        2,
        start.elapsed(),
        "flat polynomial matches the golden value",
    );
}

/// Criterion 3: on every corpus diagram, sending every K_n to 1 in the
/// arrow polynomial reproduces an independent bracket state sum that never
/// looks at cusps.
#[test]
fn criterion_03_bracket_consistency() {
    let start = Instant::now();
    let mut checked = 0;
    for (name, d) in corpus() {
        assert!(d.crossing_count() <= 14, "{name} exceeds the size gate");
        assert_eq!(
            arrow_polynomial(&d).specialize_k_unity(),
            bracket_oracle(&d),
            "bracket mismatch on {name}"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert_budget("bracket consistency", elapsed, Duration::from_secs(60));
    report(
        3,
        elapsed,
        &format!("{checked} diagrams agree with the bracket oracle"),
    );
}

/// Criterion 4: the differential squares to zero in every grading system,
/// and every entry dropped by the graded projection moves the grading the
/// way a complement entry must.
#[test]
fn criterion_04_differential_laws() {
    let start = Instant::now();
    let mut complexes = 0;
    for (name, d) in corpus() {
        assert!(d.crossing_count() <= 12, "{name} exceeds the size gate");
        let cube = build_cube(&d).unwrap();
        for system in SYSTEMS {
            let c = build_complex(&cube, system).unwrap();
            let diff = verify_d_squared(&c);
            assert!(
                diff.d_squared_zero && diff.d_prime_squared_zero,
                "differential law fails on {name} under {system:?}: {:?}",
                diff.failure
            );
            let comp = dprime_complement_check(&c);
            assert!(
                comp.ok,
                "complement structure fails on {name} under {system:?}: {:?}",
                comp.failure
            );
            complexes += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_budget("differential laws", elapsed, Duration::from_secs(120));
    report(
        4,
        elapsed,
        &format!("{complexes} complexes satisfy both laws"),
    );
}

/// Criterion 5: the graded Euler characteristic of the full complex
/// reconstructs (-A^2 - A^-2) times the arrow polynomial, exactly.
#[test]
fn criterion_05_euler_reconstruction() {
    let start = Instant::now();
    let d_poly = ArrowPolynomial::from_laurent(LaurentPoly::d());
    let mut checked = 0;
    for (name, d) in corpus() {
        let cube = build_cube(&d).unwrap();
        let c = build_complex(&cube, GradingSystem::Full).unwrap();
        assert_eq!(
            euler_reconstruct(&c, &d).unwrap(),
            &d_poly * &arrow_polynomial(&d),
            "Euler reconstruction fails on {name}"
        );
        checked += 1;
    }
    report(
        5,
        start.elapsed(),
        &format!("{checked} diagrams reconstruct the state sum"),
    );
}

/// Criterion 6: fifty seeded Reidemeister walks per corpus diagram leave
/// the normalized polynomial and all three normalized Betti tables
/// unchanged.
#[test]
fn criterion_06_move_invariance() {
    let start = Instant::now();
    let mut walks = 0;
    for (di, (name, d)) in corpus().into_iter().enumerate() {
        assert!(d.crossing_count() <= 10, "{name} exceeds the size gate");
        let base_w = normalized_arrow_polynomial(&d);
        let base_cube = build_cube(&d).unwrap();
        let base_tables: Vec<Vec<BettiEntry>> = SYSTEMS
            .iter()
            .map(|&system| homology_of(&base_cube, system, true).unwrap().entries)
            .collect();
        for k in 0..50 {
            let seed = di as u64 * 1000 + k;
            let (moved, trace) = random_equivalent(&d, 4, seed);
            assert!(moved.crossing_count() <= 14, "walk left {name} too large");
            assert_eq!(
                normalized_arrow_polynomial(&moved),
                base_w,
                "normalized polynomial changed on {name}, seed {seed}, {} moves",
                trace.steps.len()
            );
            let cube = build_cube(&moved).unwrap();
            for (system, base) in SYSTEMS.iter().zip(&base_tables) {
                let table = homology_of(&cube, *system, true).unwrap();
                assert_eq!(
                    &table.entries,
                    base,
                    "{system:?} Betti table changed on {name}, seed {seed}, {} moves",
                    trace.steps.len()
                );
            }
            walks += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_budget("move invariance", elapsed, Duration::from_secs(600));
    report(
        6,
        elapsed,
        &format!("{walks} walks preserve polynomial and homology"),
    );
}

/// Criterion 7: across every merge edge the arrow numbers satisfy
/// result in {|p - q|, p + q}, and both merge and split edges are additive
/// mod 2.
#[test]
fn criterion_07_additivity_laws() {
    let start = Instant::now();
    let mut edges = 0;
    for (name, d) in corpus() {
        let cube = build_cube(&d).unwrap();
        for e in cube.edges() {
            let src = cube.state_arrows(e.source);
            let tgt = cube.state_arrows(e.target);
            match e.kind {
                EdgeKind::Merge21 => {
                    let p = src[e.source_loops[0] as usize] as i32;
                    let q = src[e.source_loops[1] as usize] as i32;
                    let r = tgt[e.target_loops[0] as usize] as i32;
                    assert!(
                        r == (p - q).abs() || r == p + q,
                        "merge on {name} gives {r} from {p} and {q}"
                    );
                    assert_eq!((p + q) % 2, r % 2, "merge parity fails on {name}");
                }
                EdgeKind::Split12 => {
                    let p = src[e.source_loops[0] as usize] as i32;
                    let q = tgt[e.target_loops[0] as usize] as i32;
                    let r = tgt[e.target_loops[1] as usize] as i32;
                    assert_eq!(
                        p.rem_euclid(2),
                        (q + r).rem_euclid(2),
                        "split parity fails on {name}"
                    );
                }
                EdgeKind::Single11 => continue,
            }
            edges += 1;
        }
    }
    report(
        7,
        start.elapsed(),
        &format!("{edges} bifurcation edges are additive"),
    );
}

/// Criterion 8: the homology bounds behave as published: the virtual
/// crossing lower bounds of the Kishino knot and the virtual trefoil are 2
/// and 1, the span and thickness bounds hold wherever the atom genus is
/// defined, and the standard trefoil diagram is certified minimal.
#[test]
fn criterion_08_bounds() {
    let start = Instant::now();
    for (name, expected) in [("kishino", 2), ("virtual_trefoil", 1)] {
        let table = homology_of(&cube_of(name), GradingSystem::Full, true).unwrap();
        assert_eq!(
            virtual_crossing_lower_bound(&table),
            expected,
            "virtual crossing bound on {name}"
        );
    }
    let mut bounded = 0;
    for (name, d) in corpus() {
        let info = atom_characteristics(&d).unwrap();
        if info.genus.is_none() {
            continue;
        }
        for check in [
            span_bound_check(&d).unwrap(),
            thickness_bound_check(&d).unwrap(),
        ] {
            assert!(check.applicable, "bound inapplicable on {name}");
            assert!(
                check.holds,
                "bound violated on {name}: {} > {}",
                check.value, check.bound
            );
        }
        bounded += 1;
    }
    let trefoil = corpus_diagram("trefoil").unwrap();
    let cert = minimality_certificate(&trefoil).unwrap();
    assert_eq!(
        cert.verdict,
        Verdict::Minimal,
        "trefoil certificate: {}",
        cert.evidence
    );
    report(
        8,
        start.elapsed(),
        &format!("bounds hold on {bounded} genus-defined diagrams"),
    );
}

/// Criterion 9: classical diagrams degenerate completely: every loop of
/// every state has arrow number zero, and the full-system homology matches
/// the plain system bucket for bucket.
#[test]
fn criterion_09_classical_degeneration() {
    let start = Instant::now();
    for &name in CLASSICAL {
        let cube = cube_of(name);
        for word in 0..cube.state_count() as u32 {
            let s = StateSelector { word };
            assert!(
                cube.state_arrows(s).iter().all(|&a| a == 0),
                "nonzero arrow number on {name}, state {word}"
            );
        }
        let plain = homology_of(&cube, GradingSystem::Plain, true).unwrap();
        let full = homology_of(&cube, GradingSystem::Full, true).unwrap();
        let projected: Vec<(i32, i32, u64)> = full
            .entries
            .iter()
            .map(|e| {
                assert!(e.multi.is_empty(), "nonempty multi grading on {name}");
                assert!(e.vect.is_empty(), "nonzero vector grading on {name}");
                (e.i, e.j, e.dim)
            })
            .collect();
        let base: Vec<(i32, i32, u64)> = plain.entries.iter().map(|e| (e.i, e.j, e.dim)).collect();
        assert_eq!(projected, base, "full and plain homology differ on {name}");
    }
    report(
        9,
        start.elapsed(),
        &format!("{} classical diagrams degenerate", CLASSICAL.len()),
    );
}

/// Criterion 10: calibration selects the shipped side table uniquely up to
/// the global left-right reflection.
#[test]
fn criterion_10_calibration_uniqueness() {
    let start = Instant::now();
    assert!(
        calibration_is_unique(),
        "calibration survivors are not a reflection pair"
    );
    assert_eq!(
        calibrate(),
        vec![SIGMA.reflected(), SIGMA],
        "calibration does not select the shipped table"
    );
    report(10, start.elapsed(), "side table unique up to reflection");
}
