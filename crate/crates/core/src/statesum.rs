//! State resolution: smoothing a diagram at every crossing, tracing the
//! resulting loops with their cusp words, and assembling the bracket and
//! arrow polynomials by full state enumeration.
//!
//! A positive crossing smoothed A (or a negative one smoothed B) is the
//! oriented smoothing and joins over-in to under-out and under-in to
//! over-out. The other choice is the disoriented smoothing: it joins the two
//! incoming ends (an in-in cusp) and the two outgoing ends (an out-out
//! cusp), reversing traversal direction at each. Every cusp carries a side
//! letter L or R given by the calibrated table [`SIGMA`].

use crate::knotio::{Role, Sign, VirtualLinkDiagram};
use crate::poly::{ArrowMonomial, ArrowPolynomial, LaurentPoly};

/// Smoothing choice for every crossing, packed into a word: bit `c-1` set
/// means crossing `c` takes the B-smoothing.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateSelector {
    pub word: u32,
}

impl StateSelector {
    pub fn all_a() -> Self {
        Self { word: 0 }
    }

    pub fn all_b(n: usize) -> Self {
        Self {
            word: (1u32 << n) - 1,
        }
    }

    /// True iff crossing `id` (1-based) is B-smoothed.
    pub fn is_b(self, id: u32) -> bool {
        self.word >> (id - 1) & 1 == 1
    }

    pub fn count_b(self) -> u32 {
        self.word.count_ones()
    }

    /// The selector with crossing `id` (1-based) switched to the other
    /// smoothing.
    pub fn flipped(self, id: u32) -> Self {
        Self {
            word: self.word ^ 1 << (id - 1),
        }
    }
}

/// Side letter of a cusp relative to loop traversal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CuspLetter {
    L,
    R,
}

impl CuspLetter {
    pub fn other(self) -> Self {
        match self {
            CuspLetter::L => CuspLetter::R,
            CuspLetter::R => CuspLetter::L,
        }
    }
}

/// Which pair of strand ends a disoriented smoothing joins.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CuspRole {
    InIn,
    OutOut,
}

/// Cyclic word of cusp side letters along one state loop.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CuspWord {
    pub letters: Vec<CuspLetter>,
}

/// Cusp side table: one letter per (sign, cusp role, entry strand), packed
/// into eight bits. Bit index = 4*(sign is -) + 2*(role is out-out) +
/// (entry is under); a set bit means R.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SigmaTable(pub u8);

impl SigmaTable {
    pub fn letter(self, sign: Sign, role: CuspRole, entry: Role) -> CuspLetter {
        let idx = (sign == Sign::Minus) as u8 * 4
            + (role == CuspRole::OutOut) as u8 * 2
            + (entry == Role::Under) as u8;
        if self.0 >> idx & 1 == 1 {
            CuspLetter::R
        } else {
            CuspLetter::L
        }
    }

    /// The globally mirrored table (every L swapped with R).
    pub fn reflected(self) -> Self {
        Self(self.0 ^ 0xFF)
    }
}

/// The calibrated side table; the calibrate module verifies that it is the
/// unique table (up to global reflection) consistent with classical
/// degeneration and move invariance.
pub const SIGMA: SigmaTable = SigmaTable(0xA5);

/// One loop of a resolved state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LoopData {
    pub cusp_word: CuspWord,
    pub arrow_number: u32,
    /// Sorted crossing ids the loop passes through.
    pub crossings: Vec<u32>,
}

/// A fully resolved state: its loops, smoothing counts, and loop count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateResolution {
    pub loops: Vec<LoopData>,
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
}

/// Arrow number of a cyclic cusp word: cyclically adjacent equal letters
/// cancel until none remain; the arrow number is half the reduced length.
/// Panics on odd-length words, which indicate a tracing bug.
pub fn arrow_number(w: &CuspWord) -> u32 {
    arrow_number_of(&w.letters)
}

fn arrow_number_of(letters: &[CuspLetter]) -> u32 {
    assert!(
        letters.len().is_multiple_of(2),
        "cusp words have even length"
    );
    let mut stack: Vec<CuspLetter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    // A linearly reduced even word alternates and its ends differ, so it is
    // already cyclically reduced; trim defensively anyway.
    let mut lo = 0;
    let mut hi = stack.len();
    while hi - lo >= 2 && stack[lo] == stack[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    ((hi - lo) / 2) as u32
}

/// Flattened passage tables for loop tracing. Passages are indexed 0..2n in
/// component order; arc `p` runs from the exit of passage `p` to the entry
/// of the following passage.
pub(crate) struct Tracer {
    next: Vec<u32>,
    prev: Vec<u32>,
    crossing: Vec<u32>,
    role: Vec<Role>,
    partner: Vec<u32>,
    positive: Vec<bool>,
    sign: Vec<Sign>,
    /// Passage ids of each crossing, over first.
    pids: Vec<[u32; 2]>,
    pub(crate) arcs: usize,
    pub(crate) unknots: usize,
    pub(crate) n: usize,
}

impl Tracer {
    /// Positive classical crossing count.
    pub(crate) fn positive_count(&self) -> usize {
        self.positive.iter().filter(|&&p| p).count()
    }
}

/// One traversal step: `(next arc, next direction, cusp emitted)`.
type Step = (u32, bool, Option<(Sign, CuspRole, Role)>);

/// Reusable buffers for the compact tracer.
#[derive(Default)]
pub(crate) struct TraceBuf {
    /// Loop index of every arc.
    pub loop_of_arc: Vec<u8>,
    /// Arrow number per traced loop.
    pub arrows: Vec<u16>,
    letters: Vec<CuspLetter>,
    visited: Vec<bool>,
}

impl Tracer {
    pub(crate) fn new(d: &VirtualLinkDiagram) -> Self {
        let n = d.crossing_count();
        let total = 2 * n;
        let mut next = vec![0u32; total];
        let mut prev = vec![0u32; total];
        let mut crossing = vec![0u32; total];
        let mut role = vec![Role::Over; total];
        let mut partner = vec![u32::MAX; total];
        let mut positive = vec![false; n];
        let mut sign = vec![Sign::Plus; n];
        let mut pid = 0usize;
        let mut first_of = vec![[u32::MAX; 2]; n];
        for comp in d.components() {
            let start = pid;
            for p in comp {
                let c = (p.id - 1) as usize;
                crossing[pid] = c as u32;
                role[pid] = p.role;
                positive[c] = p.sign.is_positive();
                sign[c] = p.sign;
                let slot = (p.role == Role::Under) as usize;
                assert!(first_of[c][slot] == u32::MAX, "duplicate passage role");
                first_of[c][slot] = pid as u32;
                next[pid] = if pid + 1 < start + comp.len() {
                    pid as u32 + 1
                } else {
                    start as u32
                };
                prev[pid] = if pid > start {
                    pid as u32 - 1
                } else {
                    (start + comp.len() - 1) as u32
                };
                pid += 1;
            }
        }
        for &[over, under] in first_of.iter().take(n) {
            assert!(over != u32::MAX && under != u32::MAX, "unpaired crossing");
            partner[over as usize] = under;
            partner[under as usize] = over;
        }
        Self {
            next,
            prev,
            crossing,
            role,
            partner,
            positive,
            sign,
            pids: first_of,
            arcs: total,
            unknots: d.zero_crossing_unknots(),
            n,
        }
    }

    /// The arcs touching the four ports of a crossing, deduplicated: the
    /// arcs leaving each passage and the arcs arriving at each.
    pub(crate) fn incident_arcs(&self, crossing: u32) -> Vec<u32> {
        let [over, under] = self.pids[(crossing - 1) as usize];
        let mut arcs = vec![
            over,
            self.prev[over as usize],
            under,
            self.prev[under as usize],
        ];
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }

    fn oriented(&self, c: usize, sel: StateSelector) -> bool {
        self.positive[c] ^ sel.is_b(c as u32 + 1)
    }

    /// Follows one traversal step from arc `arc` in direction `fwd`.
    fn step(&self, arc: u32, fwd: bool, sel: StateSelector) -> Step {
        if fwd {
            // Arrive at the entry port of the next passage.
            let q = self.next[arc as usize] as usize;
            let c = self.crossing[q] as usize;
            let q2 = self.partner[q] as usize;
            if self.oriented(c, sel) {
                (q2 as u32, true, None)
            } else {
                (
                    self.prev[q2],
                    false,
                    Some((self.sign[c], CuspRole::InIn, self.role[q])),
                )
            }
        } else {
            // Arrive at the exit port of passage `arc` itself.
            let q = arc as usize;
            let c = self.crossing[q] as usize;
            let q2 = self.partner[q] as usize;
            if self.oriented(c, sel) {
                (self.prev[q2], false, None)
            } else {
                (
                    q2 as u32,
                    true,
                    Some((self.sign[c], CuspRole::OutOut, self.role[q])),
                )
            }
        }
    }

    /// Traces every loop of a state, filling `buf.loop_of_arc` and
    /// `buf.arrows`. Crossing-free unknot components are not included.
    pub(crate) fn trace_into(&self, sel: StateSelector, table: SigmaTable, buf: &mut TraceBuf) {
        buf.loop_of_arc.clear();
        buf.loop_of_arc.resize(self.arcs, u8::MAX);
        buf.visited.clear();
        buf.visited.resize(self.arcs, false);
        buf.arrows.clear();
        for start in 0..self.arcs as u32 {
            if buf.visited[start as usize] {
                continue;
            }
            let loop_idx = buf.arrows.len();
            assert!(loop_idx < u8::MAX as usize, "loop index overflow");
            buf.letters.clear();
            let mut arc = start;
            let mut fwd = true;
            loop {
                debug_assert!(!buf.visited[arc as usize] || (arc == start && fwd));
                buf.visited[arc as usize] = true;
                buf.loop_of_arc[arc as usize] = loop_idx as u8;
                let (next_arc, next_fwd, cusp) = self.step(arc, fwd, sel);
                if let Some((sign, role, entry)) = cusp {
                    buf.letters.push(table.letter(sign, role, entry));
                }
                arc = next_arc;
                fwd = next_fwd;
                if arc == start && fwd {
                    break;
                }
            }
            buf.arrows.push(arrow_number_of(&buf.letters) as u16);
        }
    }

    /// Total loop count of a state, including crossing-free unknots.
    pub(crate) fn gamma(&self, buf: &TraceBuf) -> u32 {
        (buf.arrows.len() + self.unknots) as u32
    }
}

fn assert_valid(d: &VirtualLinkDiagram) {
    let report = d.validate();
    assert!(report.ok(), "invalid diagram: {:?}", report.issues);
}

/// Resolves one state into loops with cusp words and arrow numbers.
/// Requires a valid diagram and a selector covering all its crossings.
pub fn resolve_state(d: &VirtualLinkDiagram, sel: StateSelector) -> StateResolution {
    resolve_state_with_table(d, sel, SIGMA)
}

pub(crate) fn resolve_state_with_table(
    d: &VirtualLinkDiagram,
    sel: StateSelector,
    table: SigmaTable,
) -> StateResolution {
    assert_valid(d);
    let tracer = Tracer::new(d);
    let n = tracer.n;
    assert!(
        sel.word < (1u64 << n) as u32 || n == 0 && sel.word == 0,
        "selector exceeds crossing count"
    );
    let mut visited = vec![false; tracer.arcs];
    let mut loops = Vec::new();
    for start in 0..tracer.arcs as u32 {
        if visited[start as usize] {
            continue;
        }
        let mut letters = Vec::new();
        let mut crossings = Vec::new();
        let mut arc = start;
        let mut fwd = true;
        loop {
            visited[arc as usize] = true;
            let q = if fwd { tracer.next[arc as usize] } else { arc };
            crossings.push(tracer.crossing[q as usize] + 1);
            let (next_arc, next_fwd, cusp) = tracer.step(arc, fwd, sel);
            if let Some((sign, role, entry)) = cusp {
                letters.push(table.letter(sign, role, entry));
            }
            arc = next_arc;
            fwd = next_fwd;
            if arc == start && fwd {
                break;
            }
        }
        crossings.sort_unstable();
        crossings.dedup();
        let cusp_word = CuspWord { letters };
        let arrow_number = arrow_number(&cusp_word);
        loops.push(LoopData {
            cusp_word,
            arrow_number,
            crossings,
        });
    }
    for _ in 0..d.zero_crossing_unknots() {
        loops.push(LoopData {
            cusp_word: CuspWord::default(),
            arrow_number: 0,
            crossings: Vec::new(),
        });
    }
    let beta = sel.count_b();
    StateResolution {
        alpha: n as u32 - beta,
        beta,
        gamma: loops.len() as u32,
        loops,
    }
}

/// Powers of the loop value `d`, grown on demand.
struct DPowers {
    pows: Vec<LaurentPoly>,
}

impl DPowers {
    fn new() -> Self {
        Self {
            pows: vec![LaurentPoly::one()],
        }
    }

    fn get(&mut self, k: usize) -> &LaurentPoly {
        while self.pows.len() <= k {
            let next = self.pows.last().expect("nonempty") * &LaurentPoly::d();
            self.pows.push(next);
        }
        &self.pows[k]
    }
}

/// The arrow polynomial: the sum over all states of
/// `A^(alpha-beta) * d^(gamma-1) * prod K_n(c)` over loops with positive
/// arrow number, where `d = -A^2 - A^-2`.
pub fn arrow_polynomial(d: &VirtualLinkDiagram) -> ArrowPolynomial {
    arrow_polynomial_with_table(d, SIGMA)
}

pub(crate) fn arrow_polynomial_with_table(
    d: &VirtualLinkDiagram,
    table: SigmaTable,
) -> ArrowPolynomial {
    assert_valid(d);
    let tracer = Tracer::new(d);
    let n = tracer.n;
    assert!(n <= 28, "state enumeration limited to 28 crossings");
    let mut dpow = DPowers::new();
    let mut buf = TraceBuf::default();
    let mut acc = ArrowPolynomial::zero();
    for word in 0..1u64 << n {
        let sel = StateSelector { word: word as u32 };
        tracer.trace_into(sel, table, &mut buf);
        let gamma = tracer.gamma(&buf);
        debug_assert!(gamma >= 1);
        let beta = sel.count_b() as i64;
        let a_exp = n as i64 - 2 * beta;
        let mon = ArrowMonomial::from_arrow_numbers(buf.arrows.iter().map(|&a| a as u32));
        let coeff = dpow.get(gamma as usize - 1) * &LaurentPoly::a(a_exp);
        acc.add_term(mon, &coeff);
    }
    acc
}

/// `W[K] = (-A^3)^(-writhe) * <K>_A`; invariant under all moves.
pub fn normalized_arrow_polynomial(d: &VirtualLinkDiagram) -> ArrowPolynomial {
    let wr = d.writhe();
    let sign = if wr.rem_euclid(2) == 0 { 1 } else { -1 };
    let factor = LaurentPoly::monomial(-3 * wr, sign);
    &arrow_polynomial(d) * &ArrowPolynomial::from_laurent(factor)
}

/// The bracket polynomial: the arrow polynomial with every `K_n = 1`.
pub fn bracket_polynomial(d: &VirtualLinkDiagram) -> LaurentPoly {
    arrow_polynomial(d).specialize_k_unity()
}

/// `F[K] = <K>_A at A = 1` (so `d = -2`); a flat virtual link invariant.
pub fn flat_specialization(d: &VirtualLinkDiagram) -> ArrowPolynomial {
    arrow_polynomial(d).specialize_a_one()
}

/// Independent bracket state sum that never looks at cusps: loops are
/// counted by union-find over strand-end ports. Used to cross-check the
/// tracing machinery.
pub fn bracket_oracle(d: &VirtualLinkDiagram) -> LaurentPoly {
    assert_valid(d);
    let tracer = Tracer::new(d);
    let n = tracer.n;
    assert!(n <= 28, "state enumeration limited to 28 crossings");
    // Ports: 2p = entry of passage p, 2p+1 = exit of passage p.
    fn find(dsu: &mut [u32], x: u32) -> u32 {
        let mut root = x;
        while dsu[root as usize] != root {
            root = dsu[root as usize];
        }
        let mut cur = x;
        while dsu[cur as usize] != root {
            let next = dsu[cur as usize];
            dsu[cur as usize] = root;
            cur = next;
        }
        root
    }
    fn union(dsu: &mut [u32], a: u32, b: u32) {
        let (ra, rb) = (find(dsu, a), find(dsu, b));
        dsu[ra as usize] = rb;
    }
    let mut dpow = DPowers::new();
    let mut acc = LaurentPoly::zero();
    for word in 0..1u64 << n {
        let sel = StateSelector { word: word as u32 };
        let mut dsu: Vec<u32> = (0..2 * tracer.arcs as u32).collect();
        for p in 0..tracer.arcs as u32 {
            union(&mut dsu, 2 * p + 1, 2 * tracer.next[p as usize]);
        }
        for c in 0..n as u32 {
            let [over, under] = tracer.pids[c as usize];
            if tracer.oriented(c as usize, sel) {
                union(&mut dsu, 2 * over, 2 * under + 1);
                union(&mut dsu, 2 * under, 2 * over + 1);
            } else {
                union(&mut dsu, 2 * over, 2 * under);
                union(&mut dsu, 2 * over + 1, 2 * under + 1);
            }
        }
        let mut gamma = (0..2 * tracer.arcs as u32)
            .filter(|&x| find(&mut dsu, x) == x)
            .count();
        gamma += tracer.unknots;
        if tracer.arcs == 0 {
            gamma = tracer.unknots;
        }
        let beta = sel.count_b() as i64;
        let coeff = dpow.get(gamma - 1) * &LaurentPoly::a(n as i64 - 2 * beta);
        acc = &acc + &coeff;
    }
    acc
}
