//! Atom characteristics of a diagram and the derived bounds: the virtual
//! crossing number lower bound, the span bound, the thickness bound, and the
//! minimality certificate built from them.
//!
//! The atom of a diagram is the closed surface assembled from the A-state
//! and B-state loops as faces over the crossing frame. Only its Euler
//! characteristic and orientability are needed here, and both fall out of
//! the bifurcation cube.

use crate::cube::{build_cube, BifurcationCube, CubeError};
use crate::homology::{homology_of, thickness, BettiTable, HomologyError};
use crate::khovanov::GradingSystem;
use crate::knotio::VirtualLinkDiagram;
use crate::statesum::{arrow_polynomial, StateSelector};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AtomError {
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Surface data of the atom of a diagram.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct AtomInfo {
    pub crossings: usize,
    /// Faces minus edges plus vertices: loops of the two extreme states
    /// minus the crossing count.
    pub euler_characteristic: i64,
    /// True iff no smoothing flip anywhere in the cube preserves the loop
    /// count.
    pub orientable: bool,
    /// Genus of the atom surface, when it is defined.
    pub genus: Option<u32>,
    /// Why the genus is undefined, when it is.
    pub genus_undefined_reason: Option<String>,
}

/// True for the one-component zero-crossing unknot, whose atom is a sphere
/// even though its shadow has no crossings to connect.
fn is_plain_unknot(d: &VirtualLinkDiagram) -> bool {
    d.crossing_count() == 0 && d.zero_crossing_unknots() == 1
}

/// Computes the atom data of a diagram.
pub fn atom_characteristics(d: &VirtualLinkDiagram) -> Result<AtomInfo, AtomError> {
    let cube = build_cube(d)?;
    Ok(atom_characteristics_from_cube(d, &cube))
}

fn atom_characteristics_from_cube(d: &VirtualLinkDiagram, cube: &BifurcationCube) -> AtomInfo {
    let n = cube.crossing_count();
    if is_plain_unknot(d) {
        return AtomInfo {
            crossings: 0,
            euler_characteristic: 2,
            orientable: true,
            genus: Some(0),
            genus_undefined_reason: None,
        };
    }
    let all_a = StateSelector::all_a();
    let all_b = StateSelector::all_b(n);
    let chi = cube.gamma(all_a) as i64 + cube.gamma(all_b) as i64 - n as i64;
    let mut orientable = true;
    'scan: for word in 0..1u64 << n {
        let s = StateSelector { word: word as u32 };
        for c in 1..=n as u32 {
            if !s.is_b(c) && cube.gamma(s.flipped(c)) == cube.gamma(s) {
                orientable = false;
                break 'scan;
            }
        }
    }
    let (genus, reason) = if !orientable {
        (None, Some("atom is non-orientable".to_string()))
    } else if !d.shadow_connected() {
        (None, Some("shadow is disconnected".to_string()))
    } else if chi > 2 || (2 - chi) % 2 != 0 {
        (None, Some(format!("unexpected characteristic {chi}")))
    } else {
        (Some(((2 - chi) / 2) as u32), None)
    };
    AtomInfo {
        crossings: n,
        euler_characteristic: chi,
        orientable,
        genus,
        genus_undefined_reason: reason,
    }
}

/// One inequality check against an atom-derived bound.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct BoundReport {
    pub applicable: bool,
    /// Why the bound does not apply, when it does not.
    pub reason: Option<String>,
    pub value: i64,
    pub bound: i64,
    pub holds: bool,
    pub tight: bool,
}

impl BoundReport {
    fn not_applicable(reason: String) -> Self {
        BoundReport {
            applicable: false,
            reason: Some(reason),
            value: 0,
            bound: 0,
            holds: false,
            tight: false,
        }
    }

    fn check(value: i64, bound: i64) -> Self {
        BoundReport {
            applicable: true,
            reason: None,
            value,
            bound,
            holds: value <= bound,
            tight: value == bound,
        }
    }
}

fn genus_or_reason(info: &AtomInfo) -> Result<u32, String> {
    match info.genus {
        Some(g) => Ok(g),
        None => Err(info
            .genus_undefined_reason
            .clone()
            .unwrap_or_else(|| "genus undefined".to_string())),
    }
}

/// Checks the A-span of the arrow polynomial against 4n - 4g.
pub fn span_bound_check(d: &VirtualLinkDiagram) -> Result<BoundReport, AtomError> {
    let info = atom_characteristics(d)?;
    let g = match genus_or_reason(&info) {
        Ok(g) => g,
        Err(reason) => return Ok(BoundReport::not_applicable(reason)),
    };
    let span = arrow_polynomial(d).a_span().unwrap_or(0);
    Ok(BoundReport::check(
        span,
        4 * d.crossing_count() as i64 - 4 * g as i64,
    ))
}

/// Checks homological thickness against 2 + g, on the (i, j) projection of
/// the fully graded table.
pub fn thickness_bound_check(d: &VirtualLinkDiagram) -> Result<BoundReport, AtomError> {
    let cube = build_cube(d)?;
    let info = atom_characteristics_from_cube(d, &cube);
    let g = match genus_or_reason(&info) {
        Ok(g) => g,
        Err(reason) => return Ok(BoundReport::not_applicable(reason)),
    };
    let table = homology_of(&cube, GradingSystem::Full, true)?;
    let value = thickness(&table).map(i64::from).unwrap_or(0);
    Ok(BoundReport::check(value, 2 + g as i64))
}

/// The largest total arrow weight visible in fully graded homology: a lower
/// bound for the virtual crossing number of the underlying knot.
pub fn virtual_crossing_lower_bound(t: &BettiTable) -> u32 {
    t.entries
        .iter()
        .map(|e| e.multi.iter().map(|&a| a as u32).sum())
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Minimal,
    Inconclusive,
}

/// Outcome of the minimality test: both bounds tight certifies that no
/// diagram of the same knot has fewer crossings.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct MinimalityReport {
    pub verdict: Verdict,
    pub evidence: String,
    pub span: BoundReport,
    pub thickness: BoundReport,
}

/// Certifies crossing-minimality when the span and thickness bounds are
/// both attained.
pub fn minimality_certificate(d: &VirtualLinkDiagram) -> Result<MinimalityReport, AtomError> {
    let span = span_bound_check(d)?;
    let thick = thickness_bound_check(d)?;
    let (verdict, evidence) = if !span.applicable {
        (
            Verdict::Inconclusive,
            format!(
                "bounds not applicable: {}",
                span.reason.as_deref().unwrap_or("unknown")
            ),
        )
    } else if span.tight && thick.tight {
        (
            Verdict::Minimal,
            format!(
                "span {} attains 4n - 4g = {} and thickness {} attains 2 + g = {}",
                span.value, span.bound, thick.value, thick.bound
            ),
        )
    } else if !span.tight {
        (
            Verdict::Inconclusive,
            format!("span {} is below the bound {}", span.value, span.bound),
        )
    } else {
        (
            Verdict::Inconclusive,
            format!(
                "thickness {} is below the bound {}",
                thick.value, thick.bound
            ),
        )
    };
    Ok(MinimalityReport {
        verdict,
        evidence,
        span,
        thickness: thick,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{corpus_diagram, CLASSICAL};
    use crate::homology::homology_of;
    use crate::knotio::parse_gauss_code;

    fn info(name: &str) -> AtomInfo {
        atom_characteristics(&corpus_diagram(name).unwrap()).unwrap()
    }

    #[test]
    fn trefoil_atom_is_a_sphere() {
        let a = info("trefoil");
        assert_eq!(a.euler_characteristic, 2);
        assert!(a.orientable);
        assert_eq!(a.genus, Some(0));
    }

    #[test]
    fn kink_atom_is_a_sphere() {
        let a = info("kink_positive");
        assert_eq!(a.crossings, 1);
        assert_eq!(a.euler_characteristic, 2);
        assert_eq!(a.genus, Some(0));
    }

    #[test]
    fn unknot_atom_uses_the_sphere_convention() {
        let a = info("unknot");
        assert_eq!(a.euler_characteristic, 2);
        assert!(a.orientable);
        assert_eq!(a.genus, Some(0));
    }

    #[test]
    fn virtual_diagrams_have_non_orientable_atoms() {
        for name in ["virtual_trefoil", "kishino"] {
            let a = info(name);
            assert!(!a.orientable, "{name}");
            assert_eq!(a.genus, None, "{name}");
            assert!(a
                .genus_undefined_reason
                .as_deref()
                .unwrap()
                .contains("non-orientable"));
        }
    }

    #[test]
    fn disconnected_shadows_have_undefined_genus() {
        let d = parse_gauss_code("()\n()").unwrap();
        let a = atom_characteristics(&d).unwrap();
        assert_eq!(a.genus, None);
        assert!(a
            .genus_undefined_reason
            .as_deref()
            .unwrap()
            .contains("disconnected"));
    }

    #[test]
    fn classical_corpus_satisfies_both_bounds() {
        for name in CLASSICAL {
            let d = corpus_diagram(name).unwrap();
            let span = span_bound_check(&d).unwrap();
            let thick = thickness_bound_check(&d).unwrap();
            assert!(span.applicable && span.holds, "{name}: {span:?}");
            assert!(thick.applicable && thick.holds, "{name}: {thick:?}");
        }
    }

    #[test]
    fn virtual_crossing_bounds_from_homology() {
        let cases = [("kishino", 2), ("virtual_trefoil", 1), ("trefoil", 0)];
        for (name, expected) in cases {
            let d = corpus_diagram(name).unwrap();
            let cube = crate::cube::build_cube(&d).unwrap();
            let t = homology_of(&cube, GradingSystem::Full, true).unwrap();
            assert_eq!(virtual_crossing_lower_bound(&t), expected, "{name}");
        }
    }

    #[test]
    fn trefoil_is_certified_minimal() {
        let d = corpus_diagram("trefoil").unwrap();
        let report = minimality_certificate(&d).unwrap();
        assert_eq!(report.verdict, Verdict::Minimal);
        assert!(report.span.tight && report.thickness.tight);
    }

    #[test]
    fn figure_eight_is_certified_minimal() {
        let d = corpus_diagram("figure_eight").unwrap();
        let report = minimality_certificate(&d).unwrap();
        assert_eq!(report.verdict, Verdict::Minimal);
    }

    #[test]
    fn kinked_unknot_is_inconclusive() {
        let d = corpus_diagram("kink_positive").unwrap();
        let report = minimality_certificate(&d).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report.evidence.contains("span 0 is below the bound 4"));
    }

    #[test]
    fn kishino_certificate_reports_the_non_orientable_atom() {
        let d = corpus_diagram("kishino").unwrap();
        let report = minimality_certificate(&d).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert!(report.evidence.contains("non-orientable"));
    }

    #[test]
    fn zero_crossing_unknot_is_certified_minimal() {
        let d = corpus_diagram("unknot").unwrap();
        let report = minimality_certificate(&d).unwrap();
        assert_eq!(report.verdict, Verdict::Minimal);
        assert_eq!(report.span.value, 0);
        assert_eq!(report.thickness.value, 2);
    }
}
