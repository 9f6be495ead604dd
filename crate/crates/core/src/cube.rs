//! The bifurcation cube: every state resolution of a diagram, with edges
//! (one A-smoothed crossing flipped to B) classified as 2-to-1 merges,
//! 1-to-2 splits, or 1-to-1 resmoothings, plus the loop correspondence
//! needed to transport labels along an edge.
//!
//! Loop data is stored flat: per state, the loop index of every arc and the
//! arrow number of every traced loop. Edges are derived on demand from the
//! two endpoint states, so the cube costs O(2^n * n) memory.

use crate::knotio::VirtualLinkDiagram;
use crate::statesum::{SigmaTable, StateSelector, TraceBuf, Tracer, SIGMA};
use thiserror::Error;

/// Largest diagram the cube will materialize.
pub const MAX_CUBE_CROSSINGS: usize = 20;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CubeError {
    #[error("diagram has {n} crossings, cube limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// How the loop set changes across an edge.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    Merge21,
    Split12,
    Single11,
}

/// Marker for a target loop created by the bifurcation itself.
pub const NO_SOURCE: u8 = u8::MAX;

/// One cube edge: flipping `crossing` from A to B in `source`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubeEdge {
    pub source: StateSelector,
    pub target: StateSelector,
    pub crossing: u32,
    pub kind: EdgeKind,
    /// Traced source loops incident to the flipped crossing (one or two).
    pub source_loops: Vec<u8>,
    /// Traced target loops incident to the flipped crossing (one or two).
    pub target_loops: Vec<u8>,
    /// For every traced target loop, the source loop with the same arc set,
    /// or [`NO_SOURCE`] for the loops in `target_loops`.
    pub correspondence: Vec<u8>,
}

/// All 2^n resolved states of a diagram.
pub struct BifurcationCube {
    n: usize,
    arcs: usize,
    unknots: usize,
    tracer: Tracer,
    /// Loop index of every arc, `states * arcs` flat.
    loop_of_arc: Vec<u8>,
    /// Arrow numbers of traced loops, all states concatenated.
    arrows: Vec<u16>,
    /// Per-state offsets into `arrows`, length `2^n + 1`.
    offsets: Vec<u32>,
}

/// Resolves every state of the diagram.
pub fn build_cube(d: &VirtualLinkDiagram) -> Result<BifurcationCube, CubeError> {
    build_cube_with_table(d, SIGMA)
}

pub(crate) fn build_cube_with_table(
    d: &VirtualLinkDiagram,
    table: SigmaTable,
) -> Result<BifurcationCube, CubeError> {
    let report = d.validate();
    assert!(report.ok(), "invalid diagram: {:?}", report.issues);
    let n = d.crossing_count();
    if n > MAX_CUBE_CROSSINGS {
        return Err(CubeError::TooLarge {
            n,
            limit: MAX_CUBE_CROSSINGS,
        });
    }
    let tracer = Tracer::new(d);
    let arcs = tracer.arcs;
    let states = 1usize << n;
    let mut loop_of_arc = Vec::with_capacity(states * arcs);
    let mut arrows = Vec::new();
    let mut offsets = Vec::with_capacity(states + 1);
    offsets.push(0u32);
    let mut buf = TraceBuf::default();
    for word in 0..states as u64 {
        tracer.trace_into(StateSelector { word: word as u32 }, table, &mut buf);
        loop_of_arc.extend_from_slice(&buf.loop_of_arc);
        arrows.extend_from_slice(&buf.arrows);
        offsets.push(arrows.len() as u32);
    }
    Ok(BifurcationCube {
        n,
        arcs,
        unknots: d.zero_crossing_unknots(),
        tracer,
        loop_of_arc,
        arrows,
        offsets,
    })
}

impl BifurcationCube {
    pub fn crossing_count(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        1 << self.n
    }

    /// Crossing-free unknot components, present as extra loops (arrow 0) in
    /// every state but absent from the traced arrays.
    pub fn unknot_loops(&self) -> usize {
        self.unknots
    }

    /// Arrow numbers of the traced loops of a state.
    pub fn state_arrows(&self, s: StateSelector) -> &[u16] {
        let w = s.word as usize;
        &self.arrows[self.offsets[w] as usize..self.offsets[w + 1] as usize]
    }

    /// Loop index of every arc in a state.
    pub fn loop_of_arc(&self, s: StateSelector) -> &[u8] {
        let w = s.word as usize;
        &self.loop_of_arc[w * self.arcs..(w + 1) * self.arcs]
    }

    /// Traced loop count of a state.
    pub fn traced_loops(&self, s: StateSelector) -> usize {
        self.state_arrows(s).len()
    }

    /// Total loop count of a state, unknot components included.
    pub fn gamma(&self, s: StateSelector) -> u32 {
        (self.traced_loops(s) + self.unknots) as u32
    }

    /// Positive and negative classical crossing counts of the diagram.
    pub fn crossing_signs(&self) -> (usize, usize) {
        let pos = self.tracer.positive_count();
        (pos, self.n - pos)
    }

    /// The multiple grading of a state: the set of its nonzero arrow
    /// numbers, sorted. Multiplicities are dropped; keeping them breaks
    /// the differential on faces where a zero-arrow loop splits into two
    /// loops whose arrow number repeats an existing one.
    pub fn state_labels(&self, s: StateSelector) -> Vec<u16> {
        let mut labels: Vec<u16> = self
            .state_arrows(s)
            .iter()
            .copied()
            .filter(|&a| a > 0)
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Traced loops of `state` incident to the crossing, sorted and
    /// deduplicated.
    fn incident_loops(&self, s: StateSelector, crossing: u32) -> Vec<u8> {
        let map = self.loop_of_arc(s);
        let mut loops: Vec<u8> = self
            .tracer
            .incident_arcs(crossing)
            .into_iter()
            .map(|a| map[a as usize])
            .collect();
        loops.sort_unstable();
        loops.dedup();
        loops
    }

    /// The edge flipping `crossing` from A to B in `source`.
    pub fn edge(&self, source: StateSelector, crossing: u32) -> CubeEdge {
        assert!(
            !source.is_b(crossing),
            "crossing {crossing} is already B-smoothed"
        );
        let target = StateSelector {
            word: source.word | 1 << (crossing - 1),
        };
        let source_loops = self.incident_loops(source, crossing);
        let target_loops = self.incident_loops(target, crossing);
        let (src_count, tgt_count) = (self.traced_loops(source), self.traced_loops(target));
        let kind = if tgt_count + 1 == src_count {
            EdgeKind::Merge21
        } else if tgt_count == src_count + 1 {
            EdgeKind::Split12
        } else {
            debug_assert_eq!(tgt_count, src_count);
            debug_assert_eq!(source_loops.len(), 1);
            debug_assert_eq!(target_loops.len(), 1);
            EdgeKind::Single11
        };
        let src_map = self.loop_of_arc(source);
        let tgt_map = self.loop_of_arc(target);
        let mut first_arc = vec![u32::MAX; tgt_count];
        for arc in (0..self.arcs as u32).rev() {
            first_arc[tgt_map[arc as usize] as usize] = arc;
        }
        let correspondence: Vec<u8> = (0..tgt_count as u8)
            .map(|t| {
                if target_loops.contains(&t) {
                    NO_SOURCE
                } else {
                    src_map[first_arc[t as usize] as usize]
                }
            })
            .collect();
        CubeEdge {
            source,
            target,
            crossing,
            kind,
            source_loops,
            target_loops,
            correspondence,
        }
    }

    /// Iterates every edge of the cube, `n * 2^(n-1)` in total, in
    /// increasing (source word, crossing) order.
    pub fn edges(&self) -> impl Iterator<Item = CubeEdge> + '_ {
        (0..self.state_count() as u32).flat_map(move |word| {
            let source = StateSelector { word };
            (1..=self.n as u32)
                .filter(move |&c| !source.is_b(c))
                .map(move |c| self.edge(source, c))
        })
    }

    /// One line per state, then one per edge.
    pub fn dump(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let width = self.n.max(1);
        for word in 0..self.state_count() as u32 {
            let s = StateSelector { word };
            writeln!(
                out,
                "state {word:0width$b}: gamma {} labels {:?}",
                self.gamma(s),
                self.state_labels(s)
            )
            .expect("write to string");
        }
        for e in self.edges() {
            writeln!(
                out,
                "edge {:0width$b} -> {:0width$b} crossing {}: {:?}",
                e.source.word, e.target.word, e.crossing, e.kind
            )
            .expect("write to string");
        }
        out
    }
}
