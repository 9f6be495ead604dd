//! Selects the cusp side table empirically.
//!
//! The side of a cusp is a geometric fact about smoothed crossings that a
//! Gauss-code implementation cannot read off a figure, so the table is
//! pinned by elimination: of the 256 possible tables, keep those that (a)
//! give every classical corpus diagram all-zero arrow numbers in every
//! state, (b) reproduce the published Kishino polynomial, and (c) leave the
//! arrow polynomial unchanged under seeded R2/R3 walks. Exactly one table
//! survives up to the harmless global L/R reflection, and [`SIGMA`] is its
//! canonical representative.

use crate::corpus::{corpus_diagram, kishino_arrow_polynomial, CLASSICAL};
use crate::knotio::random_diagram;
use crate::moves::{random_equivalent_filtered, MoveFilter};
use crate::statesum::{
    arrow_polynomial_with_table, SigmaTable, StateSelector, TraceBuf, Tracer, SIGMA,
};

fn classical_degeneration_holds(table: SigmaTable) -> bool {
    CLASSICAL.iter().all(|name| {
        let d = corpus_diagram(name).expect("bundled diagram");
        let tracer = Tracer::new(&d);
        let mut buf = TraceBuf::default();
        (0..1u32 << d.crossing_count()).all(|word| {
            tracer.trace_into(StateSelector { word }, table, &mut buf);
            buf.arrows.iter().all(|&a| a == 0)
        })
    })
}

fn kishino_value_holds(table: SigmaTable) -> bool {
    let d = corpus_diagram("kishino").expect("bundled diagram");
    arrow_polynomial_with_table(&d, table) == kishino_arrow_polynomial()
}

fn move_invariance_holds(table: SigmaTable) -> bool {
    let filter = MoveFilter {
        r1: false,
        r2: true,
        r3: true,
    };
    let mut diagrams = vec![
        corpus_diagram("virtual_trefoil").expect("bundled diagram"),
        corpus_diagram("kishino").expect("bundled diagram"),
    ];
    for seed in 0..4 {
        diagrams.push(random_diagram(4, 1, 0, seed));
    }
    diagrams.iter().all(|d| {
        let before = arrow_polynomial_with_table(d, table);
        (0..3u64).all(|seed| {
            let (moved, _) = random_equivalent_filtered(d, 3, seed, filter);
            arrow_polynomial_with_table(&moved, table) == before
        })
    })
}

/// Every table passing all three filters, in ascending byte order.
pub fn calibrate() -> Vec<SigmaTable> {
    (0..=255u8)
        .map(SigmaTable)
        .filter(|&t| classical_degeneration_holds(t))
        .filter(|&t| kishino_value_holds(t))
        .filter(|&t| move_invariance_holds(t))
        .collect()
}

/// True iff calibration selects exactly [`SIGMA`] and its reflection.
pub fn calibration_is_unique() -> bool {
    let mut expected = vec![SIGMA, SIGMA.reflected()];
    expected.sort_by_key(|t| t.0);
    calibrate() == expected
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_selects_sigma_up_to_reflection() {
        let survivors = calibrate();
        assert_eq!(
            survivors,
            vec![SIGMA.reflected(), SIGMA],
            "survivor set changed; the side table constant is wrong"
        );
        assert!(calibration_is_unique());
    }

    #[test]
    fn sigma_letters_are_role_independent() {
        use crate::knotio::{Role, Sign};
        use crate::statesum::CuspRole;
        for sign in [Sign::Plus, Sign::Minus] {
            for entry in [Role::Over, Role::Under] {
                assert_eq!(
                    SIGMA.letter(sign, CuspRole::InIn, entry),
                    SIGMA.letter(sign, CuspRole::OutOut, entry)
                );
            }
        }
    }
}
