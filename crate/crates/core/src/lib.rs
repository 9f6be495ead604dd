//! Arrow polynomial of virtual knot and link diagrams and its Khovanov-type
//! categorification over the two-element field.
//!
//! The pipeline runs from signed Gauss codes ([`knotio`]) through state
//! resolution with cusp tracking ([`statesum`]), the bifurcation cube
//! ([`cube`]), enhanced-state chain complexes with plain, dotted, and full
//! gradings ([`khovanov`]), GF(2) homology ([`homology`]), and the atom-based
//! diagram bounds ([`atoms`]). Reidemeister rewriting for empirical
//! invariance testing lives in [`moves`].

pub mod atoms;
pub mod calibrate;
pub mod corpus;
pub mod cube;
pub mod f2;
pub mod homology;
pub mod khovanov;
pub mod knotio;
pub mod moves;
pub mod poly;
pub mod statesum;

pub use knotio::{parse_gauss_code, VirtualLinkDiagram};
pub use poly::{ArrowMonomial, ArrowPolynomial, LaurentPoly};
pub use statesum::{
    arrow_polynomial, bracket_polynomial, flat_specialization, normalized_arrow_polynomial,
    resolve_state, StateResolution, StateSelector,
};
