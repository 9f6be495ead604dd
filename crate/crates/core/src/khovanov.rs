//! The GF(2) chain complex on enhanced states, with three grading systems:
//! Plain (quantum grading only), Dotted (quantum plus the dotted grading g),
//! and Full (quantum plus the multiple and vector gradings).
//!
//! The differential d sums over cube edges: merges apply m, splits apply
//! the coproduct, 1-to-1 edges contribute zero, and untouched loops keep
//! their labels. The categorified differential d' keeps only the entries
//! that preserve the selected grading key; homology is taken over d'.

use crate::cube::{BifurcationCube, CubeEdge, EdgeKind, NO_SOURCE};
use crate::statesum::StateSelector;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

/// Largest diagram the complex will materialize.
pub const MAX_COMPLEX_CROSSINGS: usize = 14;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("diagram has {n} crossings, complex limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("state has {loops} loops, label words are limited to 31")]
    TooManyLoops { loops: usize },
}

/// Loop label of an enhanced state.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Label {
    One,
    X,
}

/// The multiplication m on a 2-to-1 merge; `None` is the zero element.
pub fn merge_labels(a: Label, b: Label) -> Option<Label> {
    match (a, b) {
        (Label::One, Label::One) => Some(Label::One),
        (Label::X, Label::X) => None,
        _ => Some(Label::X),
    }
}

/// The coproduct on a 1-to-2 split: the F2 sum of the returned pairs.
pub fn split_label(a: Label) -> &'static [(Label, Label)] {
    match a {
        Label::One => &[(Label::One, Label::X), (Label::X, Label::One)],
        Label::X => &[(Label::X, Label::X)],
    }
}

/// A state with one label per loop. Loop order is the cube's traced order
/// followed by the crossing-free unknot components; bit l set means loop l
/// carries X.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnhancedState {
    pub state: StateSelector,
    pub labels: u32,
}

impl EnhancedState {
    pub fn label(&self, l: usize) -> Label {
        if self.labels >> l & 1 == 1 {
            Label::X
        } else {
            Label::One
        }
    }
}

/// All five gradings of an enhanced state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradingVector {
    /// Homological grading, the number of B-smoothings.
    pub i: i32,
    /// Quantum grading, `i` plus (loops labelled One minus loops labelled X).
    pub j: i32,
    /// Dotted grading, X minus One counted over odd-arrow loops.
    pub g: i32,
    /// Distinct nonzero arrow numbers of the state, sorted.
    pub multi: Vec<u16>,
    /// Sparse vector grading: slot k collects loops of arrow number
    /// 2^(k-1) times odd, X as +1 and One as -1.
    pub vect: Vec<(u32, i32)>,
}

/// Which gradings the differential must preserve.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradingSystem {
    Plain,
    Dotted,
    Full,
}

fn vect_slot(arrow: u16) -> u32 {
    debug_assert!(arrow > 0);
    (arrow as u32).trailing_zeros() + 1
}

/// Computes the full grading vector of an enhanced state.
pub fn gradings(cube: &BifurcationCube, s: &EnhancedState) -> GradingVector {
    let arrows = cube.state_arrows(s.state);
    let total = arrows.len() + cube.unknot_loops();
    let i = s.state.count_b() as i32;
    let x_count = (s.labels & ((1u32 << total) - 1)).count_ones() as i32;
    let j = i + total as i32 - 2 * x_count;
    let mut g = 0i32;
    let mut vect_map: std::collections::BTreeMap<u32, i32> = Default::default();
    for (l, &a) in arrows.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let delta = if s.labels >> l & 1 == 1 { 1 } else { -1 };
        if a % 2 == 1 {
            g += delta;
        }
        *vect_map.entry(vect_slot(a)).or_insert(0) += delta;
    }
    vect_map.retain(|_, v| *v != 0);
    GradingVector {
        i,
        j,
        g,
        multi: cube.state_labels(s.state),
        vect: vect_map.into_iter().collect(),
    }
}

/// Interned bucket key; the parts not used by a system stay empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GradingKey {
    pub j: i32,
    pub g: i32,
    pub multi: Vec<u16>,
    pub vect: Vec<(u32, i32)>,
}

struct Gen {
    state: u32,
    labels: u32,
    j: i32,
    key: u32,
}

struct Degree {
    gens: Vec<Gen>,
    /// Selector word to first generator index; a state's generators are
    /// consecutive, ordered by label word.
    state_first: HashMap<u32, u32>,
    /// Entries of d to the next degree, sorted by source index.
    diff: Vec<(u32, u32)>,
    /// The grading-preserving subset of `diff`.
    diff_prime: Vec<(u32, u32)>,
}

/// The chain complex of a diagram under one grading system.
pub struct ChainComplex {
    system: GradingSystem,
    n: usize,
    n_pos: usize,
    n_neg: usize,
    degrees: Vec<Degree>,
    keys: Vec<GradingKey>,
}

/// Builds the complex: bases ordered lexicographically by (selector word,
/// label word), d over every cube edge, and d' by grading filtration.
pub fn build_complex(
    cube: &BifurcationCube,
    system: GradingSystem,
) -> Result<ChainComplex, ComplexError> {
    let n = cube.crossing_count();
    if n > MAX_COMPLEX_CROSSINGS {
        return Err(ComplexError::TooLarge {
            n,
            limit: MAX_COMPLEX_CROSSINGS,
        });
    }
    let unknots = cube.unknot_loops();
    let mut keys: Vec<GradingKey> = Vec::new();
    let mut key_ids: HashMap<GradingKey, u32> = HashMap::new();
    let mut intern = |k: GradingKey| -> u32 {
        if let Some(&id) = key_ids.get(&k) {
            return id;
        }
        let id = keys.len() as u32;
        keys.push(k.clone());
        key_ids.insert(k, id);
        id
    };
    let mut degrees: Vec<Degree> = (0..=n)
        .map(|_| Degree {
            gens: Vec::new(),
            state_first: HashMap::new(),
            diff: Vec::new(),
            diff_prime: Vec::new(),
        })
        .collect();
    for word in 0..1u64 << n {
        let s = StateSelector { word: word as u32 };
        let arrows = cube.state_arrows(s);
        let total = arrows.len() + unknots;
        if total > 31 {
            return Err(ComplexError::TooManyLoops { loops: total });
        }
        let deg = &mut degrees[s.count_b() as usize];
        deg.state_first.insert(s.word, deg.gens.len() as u32);
        let i = s.count_b() as i32;
        let multi = cube.state_labels(s);
        for labels in 0..1u32 << total {
            let j = i + total as i32 - 2 * labels.count_ones() as i32;
            let key = match system {
                GradingSystem::Plain => GradingKey {
                    j,
                    ..Default::default()
                },
                GradingSystem::Dotted => {
                    let mut g = 0i32;
                    for (l, &a) in arrows.iter().enumerate() {
                        if a % 2 == 1 {
                            g += if labels >> l & 1 == 1 { 1 } else { -1 };
                        }
                    }
                    GradingKey {
                        j,
                        g,
                        ..Default::default()
                    }
                }
                GradingSystem::Full => {
                    let mut vect_map: std::collections::BTreeMap<u32, i32> = Default::default();
                    for (l, &a) in arrows.iter().enumerate() {
                        if a > 0 {
                            let delta = if labels >> l & 1 == 1 { 1 } else { -1 };
                            *vect_map.entry(vect_slot(a)).or_insert(0) += delta;
                        }
                    }
                    vect_map.retain(|_, v| *v != 0);
                    GradingKey {
                        j,
                        g: 0,
                        multi: multi.clone(),
                        vect: vect_map.into_iter().collect(),
                    }
                }
            };
            deg.gens.push(Gen {
                state: s.word,
                labels,
                j,
                key: intern(key),
            });
        }
    }
    for i in 0..n {
        let mut entries: Vec<(u32, u32)> = Vec::new();
        let (lower, upper) = {
            let (a, b) = degrees.split_at(i + 1);
            (&a[i], &b[0])
        };
        for (&state_word, &first) in &lower.state_first {
            let source = StateSelector { word: state_word };
            let src_traced = cube.traced_loops(source);
            let total = src_traced + unknots;
            for c in 1..=n as u32 {
                if source.is_b(c) {
                    continue;
                }
                let e = cube.edge(source, c);
                let tgt_traced = cube.traced_loops(e.target);
                let tgt_first = upper.state_first[&e.target.word];
                for labels in 0..1u32 << total {
                    let src_idx = first + labels;
                    for tgt_labels in transport(&e, labels, src_traced, tgt_traced, unknots) {
                        let dst_idx = tgt_first + tgt_labels;
                        debug_assert_eq!(
                            lower.gens[src_idx as usize].j, upper.gens[dst_idx as usize].j,
                            "differential must preserve j"
                        );
                        entries.push((src_idx, dst_idx));
                    }
                }
            }
        }
        entries.sort_unstable();
        let prime: Vec<(u32, u32)> = entries
            .iter()
            .copied()
            .filter(|&(s, t)| {
                degrees[i].gens[s as usize].key == degrees[i + 1].gens[t as usize].key
            })
            .collect();
        degrees[i].diff = entries;
        degrees[i].diff_prime = prime;
    }
    let (n_pos, n_neg) = cube.crossing_signs();
    Ok(ChainComplex {
        system,
        n,
        n_pos,
        n_neg,
        degrees,
        keys,
    })
}

/// Label transport along one edge: zero, one, or two target label words.
fn transport(
    e: &CubeEdge,
    src_labels: u32,
    src_traced: usize,
    tgt_traced: usize,
    unknots: usize,
) -> Vec<u32> {
    let mut base = 0u32;
    for (t, &s) in e.correspondence.iter().enumerate() {
        if s != NO_SOURCE {
            base |= (src_labels >> s & 1) << t;
        }
    }
    if unknots > 0 {
        let mask = (1u32 << unknots) - 1;
        base |= (src_labels >> src_traced & mask) << tgt_traced;
    }
    match e.kind {
        EdgeKind::Single11 => Vec::new(),
        EdgeKind::Merge21 => {
            let a = src_labels >> e.source_loops[0] & 1;
            let b = src_labels >> e.source_loops[1] & 1;
            if a & b == 1 {
                Vec::new()
            } else {
                vec![base | (a | b) << e.target_loops[0]]
            }
        }
        EdgeKind::Split12 => {
            let a = src_labels >> e.source_loops[0] & 1;
            let (t1, t2) = (e.target_loops[0], e.target_loops[1]);
            if a == 1 {
                vec![base | 1 << t1 | 1 << t2]
            } else {
                vec![base | 1 << t1, base | 1 << t2]
            }
        }
    }
}

impl ChainComplex {
    pub fn system(&self) -> GradingSystem {
        self.system
    }

    pub fn crossing_count(&self) -> usize {
        self.n
    }

    /// Positive and negative classical crossing counts, for normalization.
    pub fn crossing_signs(&self) -> (usize, usize) {
        (self.n_pos, self.n_neg)
    }

    /// Generator count at homological degree i.
    pub fn dim(&self, i: usize) -> usize {
        self.degrees[i].gens.len()
    }

    pub fn generator(&self, i: usize, idx: usize) -> EnhancedState {
        let gen = &self.degrees[i].gens[idx];
        EnhancedState {
            state: StateSelector { word: gen.state },
            labels: gen.labels,
        }
    }

    pub fn quantum_grading(&self, i: usize, idx: usize) -> i32 {
        self.degrees[i].gens[idx].j
    }

    pub fn key_of(&self, i: usize, idx: usize) -> &GradingKey {
        &self.keys[self.degrees[i].gens[idx].key as usize]
    }

    pub(crate) fn key_id(&self, i: usize, idx: usize) -> u32 {
        self.degrees[i].gens[idx].key
    }

    pub(crate) fn key_by_id(&self, id: u32) -> &GradingKey {
        &self.keys[id as usize]
    }

    /// Entries of d from degree i to i+1, sorted by source index.
    pub fn diff(&self, i: usize) -> &[(u32, u32)] {
        &self.degrees[i].diff
    }

    /// Entries of the grading-preserving d'.
    pub fn diff_prime(&self, i: usize) -> &[(u32, u32)] {
        &self.degrees[i].diff_prime
    }

    /// Per degree, the nonzero entries of d' with basis legends.
    pub fn dump_matrices(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            writeln!(out, "degree {i}: {} -> {}", self.dim(i), self.dim(i + 1))
                .expect("write to string");
            for &(s, t) in self.diff_prime(i) {
                let (a, b) = (
                    self.generator(i, s as usize),
                    self.generator(i + 1, t as usize),
                );
                writeln!(
                    out,
                    "  ({s}, {t})  state {:b} labels {:b} -> state {:b} labels {:b}",
                    a.state.word, a.labels, b.state.word, b.labels
                )
                .expect("write to string");
            }
        }
        out
    }
}

/// Result of the differential-law checks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DifferentialReport {
    pub d_squared_zero: bool,
    pub d_prime_squared_zero: bool,
    pub failure: Option<String>,
}

fn squares_to_zero(c: &ChainComplex, prime: bool) -> Option<String> {
    for i in 0..c.n.saturating_sub(1) {
        let first = if prime { c.diff_prime(i) } else { c.diff(i) };
        let second = if prime {
            c.diff_prime(i + 1)
        } else {
            c.diff(i + 1)
        };
        let mut second_of: Vec<Vec<u32>> = vec![Vec::new(); c.dim(i + 1)];
        for &(s, t) in second {
            second_of[s as usize].push(t);
        }
        let mut scratch: Vec<u32> = Vec::new();
        let mut k = 0;
        while k < first.len() {
            let src = first[k].0;
            scratch.clear();
            while k < first.len() && first[k].0 == src {
                scratch.extend_from_slice(&second_of[first[k].1 as usize]);
                k += 1;
            }
            scratch.sort_unstable();
            let mut m = 0;
            while m < scratch.len() {
                let run = scratch[m..]
                    .iter()
                    .take_while(|&&x| x == scratch[m])
                    .count();
                if run % 2 == 1 {
                    return Some(format!(
                        "degree {i} source {src}: face pairing fails at target {}",
                        scratch[m]
                    ));
                }
                m += run;
            }
        }
    }
    None
}

/// Checks d^2 = 0 and (d')^2 = 0, reporting the first offending face.
pub fn verify_d_squared(c: &ChainComplex) -> DifferentialReport {
    let d_fail = squares_to_zero(c, false);
    let p_fail = squares_to_zero(c, true);
    DifferentialReport {
        d_squared_zero: d_fail.is_none(),
        d_prime_squared_zero: p_fail.is_none(),
        failure: d_fail.or(p_fail),
    }
}

/// Result of the d'' = d - d' structure check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplementReport {
    pub ok: bool,
    pub entries_checked: usize,
    pub failure: Option<String>,
}

/// Verifies the dropped entries: under Dotted each strictly increases g;
/// under Full each changes multi, or keeps multi and raises exactly one
/// vector slot by 2.
pub fn dprime_complement_check(c: &ChainComplex) -> ComplementReport {
    let mut checked = 0;
    for i in 0..c.n {
        let prime: std::collections::HashSet<(u32, u32)> =
            c.diff_prime(i).iter().copied().collect();
        for &(s, t) in c.diff(i) {
            if prime.contains(&(s, t)) {
                continue;
            }
            checked += 1;
            let src = c.key_of(i, s as usize);
            let dst = c.key_of(i + 1, t as usize);
            let ok = match c.system {
                GradingSystem::Plain => false,
                GradingSystem::Dotted => dst.g > src.g,
                GradingSystem::Full => {
                    if dst.multi != src.multi {
                        true
                    } else {
                        vect_raises_one_slot_by_two(&src.vect, &dst.vect)
                    }
                }
            };
            if !ok {
                return ComplementReport {
                    ok: false,
                    entries_checked: checked,
                    failure: Some(format!("degree {i} entry ({s}, {t}): {src:?} -> {dst:?}")),
                };
            }
        }
    }
    ComplementReport {
        ok: true,
        entries_checked: checked,
        failure: None,
    }
}

fn vect_raises_one_slot_by_two(src: &[(u32, i32)], dst: &[(u32, i32)]) -> bool {
    let mut deltas: std::collections::BTreeMap<u32, i32> = Default::default();
    for &(k, v) in dst {
        *deltas.entry(k).or_insert(0) += v;
    }
    for &(k, v) in src {
        *deltas.entry(k).or_insert(0) -= v;
    }
    deltas.retain(|_, v| *v != 0);
    deltas.len() == 1 && deltas.values().all(|&v| v == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{corpus, corpus_diagram};
    use crate::cube::build_cube;
    use crate::knotio::parse_gauss_code;

    fn complex_of(code: &str, system: GradingSystem) -> ChainComplex {
        let d = parse_gauss_code(code).unwrap();
        build_complex(&build_cube(&d).unwrap(), system).unwrap()
    }

    #[test]
    fn merge_and_split_follow_the_frobenius_table() {
        use Label::{One, X};
        assert_eq!(merge_labels(One, One), Some(One));
        assert_eq!(merge_labels(One, X), Some(X));
        assert_eq!(merge_labels(X, One), Some(X));
        assert_eq!(merge_labels(X, X), None);
        assert_eq!(split_label(One), &[(One, X), (X, One)]);
        assert_eq!(split_label(X), &[(X, X)]);
    }

    #[test]
    fn unknot_complex_has_two_generators_and_zero_differential() {
        let c = complex_of("()", GradingSystem::Plain);
        assert_eq!(c.dim(0), 2);
        let js: Vec<i32> = (0..2).map(|k| c.quantum_grading(0, k)).collect();
        assert_eq!(js, vec![1, -1]);
    }

    #[test]
    fn positive_kink_complex_dimensions_and_rank() {
        let c = complex_of("O1+ U1+", GradingSystem::Plain);
        assert_eq!(c.dim(0), 4);
        assert_eq!(c.dim(1), 2);
        let mut m = crate::f2::F2Matrix::zero(c.dim(0), c.dim(1));
        for &(s, t) in c.diff(0) {
            m.flip(s as usize, t as usize);
        }
        assert_eq!(crate::f2::f2_rank(&m), 2);
    }

    #[test]
    fn grading_vector_matches_worked_example() {
        // A split link with a state carrying loops of arrow numbers 1 and 2:
        // labelling the arrow-2 loop X and the arrow-1 loop One (all other
        // loops One) gives vect slots (1: -1, 2: +1) and g = -1.
        let d = parse_gauss_code("O1+ O2- U1+ O3+ U2- O4- U3+ U4-\nO5+ O6+ U5+ U6+").unwrap();
        let cube = build_cube(&d).unwrap();
        let s = (0..64u32)
            .map(|word| StateSelector { word })
            .find(|&s| cube.state_labels(s) == vec![1, 2])
            .expect("a state with arrows {1, 2} exists");
        let arrows = cube.state_arrows(s);
        let arrow2 = arrows.iter().position(|&a| a == 2).unwrap();
        let gv = gradings(
            &cube,
            &EnhancedState {
                state: s,
                labels: 1 << arrow2,
            },
        );
        assert_eq!(gv.g, -1);
        assert_eq!(gv.vect, vec![(1, -1), (2, 1)]);
        assert_eq!(gv.multi, vec![1, 2]);
    }

    #[test]
    fn quantum_grading_follows_b_count_plus_lambda() {
        let d = corpus_diagram("virtual_trefoil").unwrap();
        let cube = build_cube(&d).unwrap();
        // All-B state of the virtual trefoil has two loops; labels (One, X)
        // give j = 2 + (1 - 1) = 2.
        let s = EnhancedState {
            state: StateSelector { word: 3 },
            labels: 0b10,
        };
        assert_eq!(gradings(&cube, &s).j, 2);
    }

    #[test]
    fn parity_invariant_holds_for_every_generator() {
        for (name, d) in corpus() {
            let cube = build_cube(&d).unwrap();
            let c = build_complex(&cube, GradingSystem::Plain).unwrap();
            for i in 0..=c.crossing_count() {
                for idx in 0..c.dim(i) {
                    let s = c.generator(i, idx);
                    let gamma = cube.gamma(s.state) as i32;
                    let j = c.quantum_grading(i, idx);
                    assert_eq!(
                        (j - i as i32 - gamma).rem_euclid(2),
                        0,
                        "{name} degree {i} generator {idx}"
                    );
                }
            }
        }
    }

    #[test]
    fn basis_count_is_two_to_the_gamma_per_state() {
        for (name, d) in corpus() {
            let cube = build_cube(&d).unwrap();
            let c = build_complex(&cube, GradingSystem::Plain).unwrap();
            let n = c.crossing_count();
            for i in 0..=n {
                let expected: usize = (0..1u64 << n)
                    .map(|w| StateSelector { word: w as u32 })
                    .filter(|s| s.count_b() as usize == i)
                    .map(|s| 1usize << cube.gamma(s))
                    .sum();
                assert_eq!(c.dim(i), expected, "{name} degree {i}");
            }
        }
    }

    #[test]
    fn differential_laws_hold_on_the_corpus() {
        for (name, d) in corpus() {
            let cube = build_cube(&d).unwrap();
            for system in [
                GradingSystem::Plain,
                GradingSystem::Dotted,
                GradingSystem::Full,
            ] {
                let c = build_complex(&cube, system).unwrap();
                let report = verify_d_squared(&c);
                assert!(
                    report.d_squared_zero && report.d_prime_squared_zero,
                    "{name} {system:?}: {:?}",
                    report.failure
                );
            }
        }
    }

    #[test]
    fn complement_entries_respect_grading_structure() {
        for (name, d) in corpus() {
            let cube = build_cube(&d).unwrap();
            for system in [GradingSystem::Dotted, GradingSystem::Full] {
                let c = build_complex(&cube, system).unwrap();
                let report = dprime_complement_check(&c);
                assert!(report.ok, "{name} {system:?}: {:?}", report.failure);
            }
        }
    }

    #[test]
    fn classical_diagrams_have_no_complement_entries() {
        for name in crate::corpus::CLASSICAL {
            let d = corpus_diagram(name).unwrap();
            let cube = build_cube(&d).unwrap();
            let c = build_complex(&cube, GradingSystem::Full).unwrap();
            let report = dprime_complement_check(&c);
            assert!(report.ok && report.entries_checked == 0, "{name}");
        }
    }

    #[test]
    fn corrupted_side_table_breaks_the_differential_laws() {
        use crate::statesum::SigmaTable;
        // 0x25 differs from the calibrated table in one negative-sign entry.
        let d = corpus_diagram("kishino").unwrap();
        let cube = crate::cube::build_cube_with_table(&d, SigmaTable(0x25)).unwrap();
        let c = build_complex(&cube, GradingSystem::Full).unwrap();
        let report = verify_d_squared(&c);
        let complement = dprime_complement_check(&c);
        assert!(
            !report.d_prime_squared_zero || !complement.ok,
            "corrupting the table should violate some law"
        );
    }

    #[test]
    fn plain_system_keeps_every_differential_entry() {
        for (_, d) in corpus() {
            let cube = build_cube(&d).unwrap();
            let c = build_complex(&cube, GradingSystem::Plain).unwrap();
            for i in 0..c.crossing_count() {
                assert_eq!(c.diff(i), c.diff_prime(i));
            }
        }
    }

    #[test]
    fn oversized_diagrams_are_rejected() {
        let d = crate::knotio::random_diagram(MAX_COMPLEX_CROSSINGS + 1, 1, 0, 3);
        let cube = build_cube(&d).unwrap();
        assert!(matches!(
            build_complex(&cube, GradingSystem::Plain),
            Err(ComplexError::TooLarge { .. })
        ));
    }
}
