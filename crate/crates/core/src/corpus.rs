//! Bundled example diagrams used by tests, benchmarks, and the CLI.

use crate::knotio::{parse_gauss_code, VirtualLinkDiagram};
use crate::poly::{ArrowMonomial, ArrowPolynomial, LaurentPoly};

/// A named corpus member with its raw Gauss code text.
pub struct CorpusEntry {
    pub name: &'static str,
    pub code: &'static str,
}

/// Every bundled diagram, smallest first.
pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "unknot",
        code: include_str!("../corpus/unknot.gc"),
    },
    CorpusEntry {
        name: "kink_positive",
        code: include_str!("../corpus/kink_positive.gc"),
    },
    CorpusEntry {
        name: "kink_negative",
        code: include_str!("../corpus/kink_negative.gc"),
    },
    CorpusEntry {
        name: "hopf",
        code: include_str!("../corpus/hopf.gc"),
    },
    CorpusEntry {
        name: "virtual_trefoil",
        code: include_str!("../corpus/virtual_trefoil.gc"),
    },
    CorpusEntry {
        name: "trefoil",
        code: include_str!("../corpus/trefoil.gc"),
    },
    CorpusEntry {
        name: "figure_eight",
        code: include_str!("../corpus/figure_eight.gc"),
    },
    CorpusEntry {
        name: "kishino",
        code: include_str!("../corpus/kishino.gc"),
    },
];

/// Members that are classical diagrams: every state loop of every one of
/// them has arrow number zero.
pub const CLASSICAL: &[&str] = &[
    "unknot",
    "kink_positive",
    "kink_negative",
    "hopf",
    "trefoil",
    "figure_eight",
];

/// The published arrow polynomial of the Kishino diagram:
/// `1 + A^4 + A^-4 - d^2 K1^2 + 2 K2` with `d = -A^2 - A^-2`.
pub fn kishino_arrow_polynomial() -> ArrowPolynomial {
    let mut p = ArrowPolynomial::from_laurent(LaurentPoly::from_terms(&[(4, 1), (0, 1), (-4, 1)]));
    let d2 = &LaurentPoly::d() * &LaurentPoly::d();
    p.add_term(ArrowMonomial::k_pow(1, 2), &-&d2);
    p.add_term(ArrowMonomial::k(2), &LaurentPoly::from_terms(&[(0, 2)]));
    p
}

/// Parses one bundled diagram by name.
pub fn corpus_diagram(name: &str) -> Option<VirtualLinkDiagram> {
    let entry = CORPUS.iter().find(|e| e.name == name)?;
    Some(parse_gauss_code(entry.code).expect("bundled codes parse"))
}

/// Parses the whole corpus in order.
pub fn corpus() -> Vec<(&'static str, VirtualLinkDiagram)> {
    CORPUS
        .iter()
        .map(|e| {
            (
                e.name,
                parse_gauss_code(e.code).expect("bundled codes parse"),
            )
        })
        .collect()
}
