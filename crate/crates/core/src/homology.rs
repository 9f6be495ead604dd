//! GF(2) homology of the categorified complex: graded Betti tables, the
//! graded Euler characteristic, and homological thickness.
//!
//! Homology is taken over the grading-preserving differential d', bucket by
//! bucket, so ranks never mix generators with different grading keys.

use crate::cube::{build_cube, BifurcationCube};
use crate::f2::{f2_rank, F2Matrix};
use crate::khovanov::{ChainComplex, ComplexError, GradingSystem};
use crate::knotio::VirtualLinkDiagram;
use crate::poly::{ArrowMonomial, ArrowPolynomial, LaurentPoly};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("operation requires the full grading system, complex uses {0:?}")]
    WrongSystem(GradingSystem),
    #[error("homology is empty, no diagonals to measure")]
    EmptyTable,
    #[error("differential does not square to zero at degree {degree}, homology is undefined")]
    IllFormed { degree: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Grading location of one homology bucket. `g` is populated only under the
/// dotted system; `multi` and `vect` only under the full system.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, serde::Serialize)]
pub struct BettiEntry {
    pub i: i32,
    pub j: i32,
    pub g: Option<i32>,
    pub multi: Vec<u16>,
    pub vect: Vec<(u32, i32)>,
    pub dim: u64,
}

/// Nonzero homology dimensions, sorted by grading location.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct BettiTable {
    pub system: GradingSystem,
    pub normalized: bool,
    pub n_pos: usize,
    pub n_neg: usize,
    pub entries: Vec<BettiEntry>,
}

impl BettiTable {
    pub fn total_dim(&self) -> u64 {
        self.entries.iter().map(|e| e.dim).sum()
    }

    pub fn dim_at(&self, i: i32, j: i32) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.i == i && e.j == j)
            .map(|e| e.dim)
            .sum()
    }
}

/// Computes the Betti table of the complex over d'. Normalization shifts the
/// homological grading by -n_neg and the quantum grading by n_pos - 2 n_neg;
/// the dotted, multiple, and vector gradings are never shifted. Fails on an
/// ill-formed complex, one whose incoming image escapes the kernel inside
/// some grading bucket.
pub fn betti_table(c: &ChainComplex, normalized: bool) -> Result<BettiTable, HomologyError> {
    let n = c.crossing_count();
    let (n_pos, n_neg) = c.crossing_signs();
    let mut bucket_pos: Vec<Vec<u32>> = Vec::with_capacity(n + 1);
    let mut bucket_size: Vec<HashMap<u32, u32>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut sizes: HashMap<u32, u32> = HashMap::new();
        let mut pos = Vec::with_capacity(c.dim(i));
        for idx in 0..c.dim(i) {
            let counter = sizes.entry(c.key_id(i, idx)).or_insert(0);
            pos.push(*counter);
            *counter += 1;
        }
        bucket_pos.push(pos);
        bucket_size.push(sizes);
    }
    let mut ranks: Vec<HashMap<u32, usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut by_key: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
        for &(s, t) in c.diff_prime(i) {
            let key = c.key_id(i, s as usize);
            debug_assert_eq!(key, c.key_id(i + 1, t as usize));
            by_key
                .entry(key)
                .or_default()
                .push((bucket_pos[i][s as usize], bucket_pos[i + 1][t as usize]));
        }
        let mut rank_of: HashMap<u32, usize> = HashMap::new();
        for (key, entries) in by_key {
            let rows = bucket_size[i][&key] as usize;
            let cols = bucket_size[i + 1][&key] as usize;
            let mut m = F2Matrix::zero(rows, cols);
            for (r, col) in entries {
                m.flip(r as usize, col as usize);
            }
            rank_of.insert(key, f2_rank(&m));
        }
        ranks.push(rank_of);
    }
    let mut entries = Vec::new();
    for i in 0..=n {
        for (&key, &size) in &bucket_size[i] {
            let rank_out = if i < n {
                ranks[i].get(&key).copied().unwrap_or(0)
            } else {
                0
            };
            let rank_in = if i > 0 {
                ranks[i - 1].get(&key).copied().unwrap_or(0)
            } else {
                0
            };
            let dim = (size as u64)
                .checked_sub(rank_out as u64 + rank_in as u64)
                .ok_or(HomologyError::IllFormed { degree: i })?;
            if dim == 0 {
                continue;
            }
            let gk = c.key_by_id(key);
            let (shift_i, shift_j) = if normalized {
                (-(n_neg as i32), n_pos as i32 - 2 * n_neg as i32)
            } else {
                (0, 0)
            };
            entries.push(BettiEntry {
                i: i as i32 + shift_i,
                j: gk.j + shift_j,
                g: match c.system() {
                    GradingSystem::Dotted => Some(gk.g),
                    _ => None,
                },
                multi: gk.multi.clone(),
                vect: gk.vect.clone(),
                dim,
            });
        }
    }
    entries.sort();
    Ok(BettiTable {
        system: c.system(),
        normalized,
        n_pos,
        n_neg,
        entries,
    })
}

/// Reconstructs the arrow polynomial times d from the chain dimensions of
/// the full-graded complex of `d`: A^n sum of (-1)^i dim q^j K-monomial
/// with q = -A^-2, over the unnormalized gradings. The K-monomial keeps
/// arrow multiplicities, which the set-valued grading key drops, so the
/// exponents are read off each generator's state.
pub fn euler_reconstruct(
    c: &ChainComplex,
    d: &VirtualLinkDiagram,
) -> Result<ArrowPolynomial, HomologyError> {
    if c.system() != GradingSystem::Full {
        return Err(HomologyError::WrongSystem(c.system()));
    }
    let cube = build_cube(d).expect("the complex was built from this diagram");
    assert_eq!(
        cube.crossing_count(),
        c.crossing_count(),
        "diagram does not match the complex"
    );
    let n = c.crossing_count();
    let mut acc = ArrowPolynomial::zero();
    for i in 0..=n {
        let mut terms: HashMap<(u32, i32), i64> = HashMap::new();
        for idx in 0..c.dim(i) {
            let gen = c.generator(i, idx);
            let j = c.quantum_grading(i, idx);
            let sign = if (i as i32 + j).rem_euclid(2) == 0 {
                1
            } else {
                -1
            };
            *terms.entry((gen.state.word, j)).or_insert(0) += sign;
        }
        for ((word, j), coeff) in terms {
            if coeff == 0 {
                continue;
            }
            let arrows = cube.state_arrows(crate::statesum::StateSelector { word });
            let mon = ArrowMonomial::from_arrow_numbers(
                arrows.iter().filter(|&&a| a > 0).map(|&a| a as u32),
            );
            acc.add_term(mon, &LaurentPoly::monomial(n as i64 - 2 * j as i64, coeff));
        }
    }
    Ok(acc)
}

/// Homological thickness: the even-step count between the extreme occupied
/// diagonals j - 2i, gradings beyond (i, j) forgotten. Diagonals of a
/// classical diagram share parity; loop-preserving smoothings of virtual
/// diagrams can mix parities, so the width is floored.
pub fn thickness(t: &BettiTable) -> Result<u32, HomologyError> {
    let diagonals: Vec<i32> = t.entries.iter().map(|e| e.j - 2 * e.i).collect();
    let max = *diagonals.iter().max().ok_or(HomologyError::EmptyTable)?;
    let min = *diagonals.iter().min().ok_or(HomologyError::EmptyTable)?;
    Ok(((max - min) / 2 + 1) as u32)
}

/// Convenience: cube, complex, and Betti table in one call.
pub fn homology_of(
    cube: &BifurcationCube,
    system: GradingSystem,
    normalized: bool,
) -> Result<BettiTable, HomologyError> {
    let c = crate::khovanov::build_complex(cube, system)?;
    betti_table(&c, normalized)
}
