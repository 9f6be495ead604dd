//! Regenerates the bundled corpus codes by exhaustive search.
//!
//! Enumerates every signed Gauss code with four crossings on one component
//! and prints those whose arrow polynomial matches the published Kishino
//! value, plus the classical figure-eight candidates (target bracket with
//! zero arrow numbers everywhere). Run with --release; takes a few minutes.

use arrowpoly::knotio::{Passage, Role, Sign, VirtualLinkDiagram};
use arrowpoly::poly::{ArrowMonomial, ArrowPolynomial, LaurentPoly};
use arrowpoly::statesum::{arrow_polynomial, resolve_state, StateSelector};
use itertools::Itertools;
use std::collections::BTreeSet;

fn kishino_target() -> ArrowPolynomial {
    // 1 + A^4 + A^-4 - d^2 K1^2 + 2 K2 with d = -A^2 - A^-2.
    let mut t = ArrowPolynomial::from_laurent(LaurentPoly::from_terms(&[(4, 1), (0, 1), (-4, 1)]));
    let d2 = &LaurentPoly::d() * &LaurentPoly::d();
    t.add_term(ArrowMonomial::k_pow(1, 2), &-&d2);
    t.add_term(ArrowMonomial::k(2), &LaurentPoly::from_terms(&[(0, 2)]));
    t
}

fn figure_eight_target() -> LaurentPoly {
    LaurentPoly::from_terms(&[(8, 1), (4, -1), (0, 1), (-4, -1), (-8, 1)])
}

fn all_arrows_zero(d: &VirtualLinkDiagram) -> bool {
    let n = d.crossing_count();
    (0..1u32 << n).all(|word| {
        resolve_state(d, StateSelector { word })
            .loops
            .iter()
            .all(|l| l.arrow_number == 0)
    })
}

fn main() {
    let slots: Vec<(u32, Role)> = (1..=4)
        .flat_map(|id| [(id, Role::Over), (id, Role::Under)])
        .collect();
    let kishino = kishino_target();
    let fig8 = figure_eight_target();
    let mut kishino_hits: BTreeSet<String> = BTreeSet::new();
    let mut fig8_hits: BTreeSet<String> = BTreeSet::new();
    for perm in slots.iter().permutations(slots.len()) {
        for mask in 0..16u32 {
            let passages: Vec<Passage> = perm
                .iter()
                .map(|&&(id, role)| Passage {
                    id,
                    role,
                    sign: if mask >> (id - 1) & 1 == 1 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    },
                })
                .collect();
            let d = VirtualLinkDiagram::new(vec![passages], 0).normalized();
            let text = d.to_string();
            if kishino_hits.contains(&text) || fig8_hits.contains(&text) {
                continue;
            }
            let p = arrow_polynomial(&d);
            if p == kishino {
                kishino_hits.insert(text);
            } else if p.specialize_k_unity() == fig8 && d.writhe() == 0 && all_arrows_zero(&d) {
                fig8_hits.insert(text);
            }
        }
    }
    println!("kishino candidates: {}", kishino_hits.len());
    for (i, hit) in kishino_hits.iter().enumerate().take(10) {
        let d = arrowpoly::parse_gauss_code(hit).unwrap();
        println!("  [{i}] {hit}   writhe {}", d.writhe());
    }
    if let Some(first) = kishino_hits.iter().next() {
        println!("frozen kishino: {first}");
    }
    println!("figure-eight candidates: {}", fig8_hits.len());
    for (i, hit) in fig8_hits.iter().enumerate().take(10) {
        println!("  [{i}] {hit}");
    }
    if let Some(first) = fig8_hits.iter().next() {
        println!("frozen figure-eight: {first}");
    }
}
