//! Reidemeister rewrites on Gauss codes: kink insertion and removal (R1),
//! cancelling-pair insertion and removal (R2), and the triangle slide (R3),
//! plus a seeded random walk producing provably equivalent diagrams.
//!
//! Detour (virtual) moves are identities on Gauss codes, so R2 insertions
//! are unconstrained: any two gaps can be joined in either relative
//! orientation. R3 is different: its three crossings already exist, so the
//! corner orders and signs must form a coherent planar triangle; the
//! realizability predicate below was validated by exhaustive polynomial
//! scans (see the ignored `r3_scan_truth_table` test).

use crate::knotio::{Passage, Role, Sign, VirtualLinkDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard ceiling on crossing count during random walks.
pub const MAX_WALK_CROSSINGS: usize = 12;

/// Why a move could not be applied.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("invalid move site: {0}")]
    InvalidSite(String),
}

fn bad(msg: impl Into<String>) -> MoveError {
    MoveError::InvalidSite(msg.into())
}

/// A gap between consecutive passages: new material is inserted before the
/// passage at index `gap` (so `gap = 0` prepends and `gap = len` appends).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GapSite {
    pub component: usize,
    pub gap: usize,
}

/// Insertion target for R1: a gap, or a crossing-free unknot component.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum InsertSite {
    Gap(GapSite),
    UnknotComponent,
}

/// The position of a passage within a component.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PassageSite {
    pub component: usize,
    pub position: usize,
}

/// An R3 triangle, addressed by the first position of each cyclically
/// adjacent corner pair: the two overcrossings of the sliding strand, the
/// mixed over/under corner, and the two undercrossings.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TriangleSite {
    pub over_corner: PassageSite,
    pub mixed_corner: PassageSite,
    pub under_corner: PassageSite,
}

/// One recorded move application.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Move {
    R1Insert {
        site: InsertSite,
        sign: Sign,
        over_first: bool,
    },
    R1Remove {
        site: PassageSite,
    },
    R2Insert {
        over: GapSite,
        under: GapSite,
        parallel: bool,
    },
    R2Remove {
        over: PassageSite,
        under: PassageSite,
    },
    R3 {
        site: TriangleSite,
    },
}

/// A replayable move sequence.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct MoveTrace {
    pub steps: Vec<Move>,
}

/// Which move families a random walk may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MoveFilter {
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
}

impl Default for MoveFilter {
    fn default() -> Self {
        Self {
            r1: true,
            r2: true,
            r3: true,
        }
    }
}

fn component(d: &VirtualLinkDiagram, c: usize) -> Result<&Vec<Passage>, MoveError> {
    d.components()
        .get(c)
        .ok_or_else(|| bad(format!("no component {c}")))
}

/// Resolves a corner pair: the passages at `position` and its cyclic
/// successor.
fn corner(d: &VirtualLinkDiagram, site: PassageSite) -> Result<(Passage, Passage), MoveError> {
    let comp = component(d, site.component)?;
    if comp.len() < 2 {
        return Err(bad("component too short for an adjacent pair"));
    }
    if site.position >= comp.len() {
        return Err(bad(format!("no passage at position {}", site.position)));
    }
    let succ = (site.position + 1) % comp.len();
    Ok((comp[site.position], comp[succ]))
}

/// Inserts a kink with a fresh crossing id at the site; the writhe changes
/// by the given sign.
pub fn apply_r1(
    d: &VirtualLinkDiagram,
    site: InsertSite,
    sign: Sign,
    over_first: bool,
) -> Result<VirtualLinkDiagram, MoveError> {
    let mut out = d.clone();
    let id = d.crossing_count() as u32 + 1;
    let (first, second) = if over_first {
        (Role::Over, Role::Under)
    } else {
        (Role::Under, Role::Over)
    };
    match site {
        InsertSite::UnknotComponent => {
            if out.zero_crossing_unknots == 0 {
                return Err(bad("no crossing-free unknot component"));
            }
            out.zero_crossing_unknots -= 1;
            out.components.push(vec![
                Passage::new(id, first, sign),
                Passage::new(id, second, sign),
            ]);
        }
        InsertSite::Gap(g) => {
            let len = component(d, g.component)?.len();
            if g.gap > len {
                return Err(bad(format!("gap {} out of range", g.gap)));
            }
            let comp = &mut out.components[g.component];
            comp.insert(g.gap, Passage::new(id, second, sign));
            comp.insert(g.gap, Passage::new(id, first, sign));
        }
    }
    Ok(out.normalized())
}

/// Removes the kink whose two passages sit at the site and its cyclic
/// successor.
pub fn remove_r1(
    d: &VirtualLinkDiagram,
    site: PassageSite,
) -> Result<VirtualLinkDiagram, MoveError> {
    let (p, q) = corner(d, site)?;
    if p.id != q.id {
        return Err(bad("adjacent passages belong to different crossings"));
    }
    let mut out = d.clone();
    let comp = &mut out.components[site.component];
    let succ = (site.position + 1) % comp.len();
    let (hi, lo) = if site.position > succ {
        (site.position, succ)
    } else {
        (succ, site.position)
    };
    comp.remove(hi);
    comp.remove(lo);
    if comp.is_empty() {
        out.components.remove(site.component);
        out.zero_crossing_unknots += 1;
    }
    Ok(out.normalized())
}

/// R2 insertion patterns, one strand crossing over the other twice with
/// cancelling signs. `parallel` selects the relative orientation.
fn r2_patterns(a: u32, b: u32, parallel: bool) -> ([Passage; 2], [Passage; 2]) {
    use Role::{Over, Under};
    use Sign::{Minus, Plus};
    if parallel {
        (
            [Passage::new(a, Over, Plus), Passage::new(b, Over, Minus)],
            [Passage::new(a, Under, Plus), Passage::new(b, Under, Minus)],
        )
    } else {
        (
            [Passage::new(a, Over, Minus), Passage::new(b, Over, Plus)],
            [Passage::new(b, Under, Plus), Passage::new(a, Under, Minus)],
        )
    }
}

/// Pushes one strand over another, inserting two fresh crossings of
/// opposite signs; the writhe is unchanged.
pub fn apply_r2(
    d: &VirtualLinkDiagram,
    over: GapSite,
    under: GapSite,
    parallel: bool,
) -> Result<VirtualLinkDiagram, MoveError> {
    let n = d.crossing_count() as u32;
    let (over_part, under_part) = r2_patterns(n + 1, n + 2, parallel);
    if over.gap > component(d, over.component)?.len() {
        return Err(bad(format!("over gap {} out of range", over.gap)));
    }
    if under.gap > component(d, under.component)?.len() {
        return Err(bad(format!("under gap {} out of range", under.gap)));
    }
    let mut out = d.clone();
    let insert_pair = |comp: &mut Vec<Passage>, gap: usize, pair: [Passage; 2]| {
        comp.insert(gap, pair[1]);
        comp.insert(gap, pair[0]);
    };
    if over.component == under.component {
        let comp = &mut out.components[over.component];
        let shifted = if under.gap >= over.gap {
            under.gap + 2
        } else {
            under.gap
        };
        insert_pair(comp, over.gap, over_part);
        insert_pair(comp, shifted, under_part);
    } else {
        insert_pair(&mut out.components[over.component], over.gap, over_part);
        insert_pair(&mut out.components[under.component], under.gap, under_part);
    }
    Ok(out.normalized())
}

/// Removes a cancelling pair: an adjacent over-over pair and an adjacent
/// under-under pair of the same two crossings with opposite signs.
pub fn remove_r2(
    d: &VirtualLinkDiagram,
    over: PassageSite,
    under: PassageSite,
) -> Result<VirtualLinkDiagram, MoveError> {
    let (o1, o2) = corner(d, over)?;
    let (u1, u2) = corner(d, under)?;
    if o1.role != Role::Over || o2.role != Role::Over {
        return Err(bad("over corner is not an over-over pair"));
    }
    if u1.role != Role::Under || u2.role != Role::Under {
        return Err(bad("under corner is not an under-under pair"));
    }
    if o1.id == o2.id {
        return Err(bad("over pair passes one crossing twice"));
    }
    let mut over_ids = [o1.id, o2.id];
    let mut under_ids = [u1.id, u2.id];
    over_ids.sort_unstable();
    under_ids.sort_unstable();
    if over_ids != under_ids {
        return Err(bad("over and under pairs involve different crossings"));
    }
    if o1.sign == o2.sign {
        return Err(bad("cancelling pair needs opposite signs"));
    }
    let mut removals: Vec<(usize, usize)> = Vec::new();
    for site in [over, under] {
        let len = d.components()[site.component].len();
        removals.push((site.component, site.position));
        removals.push((site.component, (site.position + 1) % len));
    }
    removals.sort_unstable();
    removals.dedup();
    if removals.len() != 4 {
        return Err(bad("over and under corners overlap"));
    }
    let mut out = d.clone();
    for &(c, p) in removals.iter().rev() {
        out.components[c].remove(p);
    }
    for c in (0..out.components.len()).rev() {
        if out.components[c].is_empty() {
            out.components.remove(c);
            out.zero_crossing_unknots += 1;
        }
    }
    Ok(out.normalized())
}

/// Sign and corner-order realizability of an R3 triangle. Orders enter
/// through three parity flags; flipping any corner flips two of the
/// effective signs, so the predicate is stable under replaying the move.
fn r3_realizable(sx: Sign, sy: Sign, sz: Sign, ft: bool, fm: bool, fb: bool) -> bool {
    let ex = sx.is_positive() ^ (fm ^ fb);
    let ey = sy.is_positive() ^ (ft ^ fm);
    let ez = sz.is_positive() ^ (ft ^ fb);
    ey == ez && ex != ey
}

struct TriangleData {
    x: u32,
    y: u32,
    z: u32,
    sx: Sign,
    sy: Sign,
    sz: Sign,
    ft: bool,
    fm: bool,
    fb: bool,
}

fn resolve_triangle(d: &VirtualLinkDiagram, site: TriangleSite) -> Result<TriangleData, MoveError> {
    let (t1, t2) = corner(d, site.over_corner)?;
    let (m1, m2) = corner(d, site.mixed_corner)?;
    let (b1, b2) = corner(d, site.under_corner)?;
    if t1.role != Role::Over || t2.role != Role::Over || t1.id == t2.id {
        return Err(bad("over corner is not an over-over pair"));
    }
    if b1.role != Role::Under || b2.role != Role::Under || b1.id == b2.id {
        return Err(bad("under corner is not an under-under pair"));
    }
    let (mo, mu) = match (m1.role, m2.role) {
        (Role::Over, Role::Under) => (m1, m2),
        (Role::Under, Role::Over) => (m2, m1),
        _ => return Err(bad("mixed corner is not an over/under pair")),
    };
    let top = [t1.id, t2.id];
    let bottom = [b1.id, b2.id];
    let shared: Vec<u32> = top.iter().copied().filter(|i| bottom.contains(i)).collect();
    if shared.len() != 1 {
        return Err(bad(
            "over and under corners must share exactly one crossing",
        ));
    }
    let z = shared[0];
    let y = if t1.id == z { t2.id } else { t1.id };
    let x = if b1.id == z { b2.id } else { b1.id };
    if x == y || mo.id != x || mu.id != y {
        return Err(bad("mixed corner does not close the triangle"));
    }
    let mut positions: Vec<(usize, usize)> = Vec::new();
    for site in [site.over_corner, site.mixed_corner, site.under_corner] {
        let len = d.components()[site.component].len();
        positions.push((site.component, site.position));
        positions.push((site.component, (site.position + 1) % len));
    }
    positions.sort_unstable();
    positions.dedup();
    if positions.len() != 6 {
        return Err(bad("triangle corners overlap"));
    }
    Ok(TriangleData {
        x,
        y,
        z,
        sx: mo.sign,
        sy: mu.sign,
        sz: if t1.id == z { t1.sign } else { t2.sign },
        ft: t1.id != y,
        fm: m1.role != Role::Over,
        fb: b1.id != x,
    })
}

fn swap_corner(out: &mut VirtualLinkDiagram, site: PassageSite) {
    let comp = &mut out.components[site.component];
    let succ = (site.position + 1) % comp.len();
    comp.swap(site.position, succ);
}

fn apply_r3_swaps(d: &VirtualLinkDiagram, site: TriangleSite) -> VirtualLinkDiagram {
    let mut out = d.clone();
    swap_corner(&mut out, site.over_corner);
    swap_corner(&mut out, site.mixed_corner);
    swap_corner(&mut out, site.under_corner);
    out.normalized()
}

/// Slides the strand crossing over the triangle to the other side: each
/// corner pair reverses while ids, roles and signs stay fixed.
pub fn apply_r3(
    d: &VirtualLinkDiagram,
    site: TriangleSite,
) -> Result<VirtualLinkDiagram, MoveError> {
    let t = resolve_triangle(d, site)?;
    if !r3_realizable(t.sx, t.sy, t.sz, t.ft, t.fm, t.fb) {
        return Err(bad("signs do not form a realizable triangle"));
    }
    let _ = (t.x, t.y, t.z);
    Ok(apply_r3_swaps(d, site))
}

/// Applies one recorded move.
pub fn apply_move(d: &VirtualLinkDiagram, m: &Move) -> Result<VirtualLinkDiagram, MoveError> {
    match *m {
        Move::R1Insert {
            site,
            sign,
            over_first,
        } => apply_r1(d, site, sign, over_first),
        Move::R1Remove { site } => remove_r1(d, site),
        Move::R2Insert {
            over,
            under,
            parallel,
        } => apply_r2(d, over, under, parallel),
        Move::R2Remove { over, under } => remove_r2(d, over, under),
        Move::R3 { site } => apply_r3(d, site),
    }
}

/// Replays a trace from its source diagram.
pub fn replay(d: &VirtualLinkDiagram, trace: &MoveTrace) -> Result<VirtualLinkDiagram, MoveError> {
    let mut cur = d.clone();
    for step in &trace.steps {
        cur = apply_move(&cur, step)?;
    }
    Ok(cur)
}

/// All kink removal sites.
pub fn find_r1_removals(d: &VirtualLinkDiagram) -> Vec<PassageSite> {
    let mut sites = Vec::new();
    for (c, comp) in d.components().iter().enumerate() {
        if comp.len() < 2 {
            continue;
        }
        for p in 0..comp.len() {
            if comp.len() == 2 && p == 1 {
                continue;
            }
            if comp[p].id == comp[(p + 1) % comp.len()].id {
                sites.push(PassageSite {
                    component: c,
                    position: p,
                });
            }
        }
    }
    sites
}

/// Adjacent same-role pairs of two distinct crossings, keyed for joining.
fn adjacent_pairs(d: &VirtualLinkDiagram) -> Vec<(PassageSite, Passage, Passage)> {
    let mut pairs = Vec::new();
    for (c, comp) in d.components().iter().enumerate() {
        if comp.len() < 2 {
            continue;
        }
        for p in 0..comp.len() {
            if comp.len() == 2 && p == 1 {
                continue;
            }
            let (a, b) = (comp[p], comp[(p + 1) % comp.len()]);
            if a.id != b.id {
                pairs.push((
                    PassageSite {
                        component: c,
                        position: p,
                    },
                    a,
                    b,
                ));
            }
        }
    }
    pairs
}

/// All cancelling-pair removal sites.
pub fn find_r2_removals(d: &VirtualLinkDiagram) -> Vec<(PassageSite, PassageSite)> {
    let pairs = adjacent_pairs(d);
    let mut sites = Vec::new();
    for (over_site, o1, o2) in &pairs {
        if o1.role != Role::Over || o2.role != Role::Over || o1.sign == o2.sign {
            continue;
        }
        for (under_site, u1, u2) in &pairs {
            if u1.role != Role::Under || u2.role != Role::Under {
                continue;
            }
            let mut over_ids = [o1.id, o2.id];
            let mut under_ids = [u1.id, u2.id];
            over_ids.sort_unstable();
            under_ids.sort_unstable();
            if over_ids == under_ids {
                sites.push((*over_site, *under_site));
            }
        }
    }
    sites
}

/// All realizable R3 triangles.
pub fn find_r3_sites(d: &VirtualLinkDiagram) -> Vec<TriangleSite> {
    find_r3_sites_inner(d, true)
}

/// Structurally well-formed triangles regardless of sign realizability;
/// used by the calibration scans.
#[cfg(test)]
pub(crate) fn find_r3_sites_structural(d: &VirtualLinkDiagram) -> Vec<TriangleSite> {
    find_r3_sites_inner(d, false)
}

fn find_r3_sites_inner(d: &VirtualLinkDiagram, check_signs: bool) -> Vec<TriangleSite> {
    let pairs = adjacent_pairs(d);
    let mut sites = Vec::new();
    for (t_site, t1, t2) in &pairs {
        if t1.role != Role::Over || t2.role != Role::Over {
            continue;
        }
        for (b_site, b1, b2) in &pairs {
            if b1.role != Role::Under || b2.role != Role::Under {
                continue;
            }
            for (m_site, m1, m2) in &pairs {
                if m1.role == m2.role {
                    continue;
                }
                let site = TriangleSite {
                    over_corner: *t_site,
                    mixed_corner: *m_site,
                    under_corner: *b_site,
                };
                let Ok(t) = resolve_triangle(d, site) else {
                    continue;
                };
                if !check_signs || r3_realizable(t.sx, t.sy, t.sz, t.ft, t.fm, t.fb) {
                    sites.push(site);
                }
            }
        }
    }
    sites
}

/// All insertion gaps, plus the unknot target when one exists.
pub fn find_r1_insertions(d: &VirtualLinkDiagram) -> Vec<InsertSite> {
    let mut sites: Vec<InsertSite> = all_gaps(d).into_iter().map(InsertSite::Gap).collect();
    if d.zero_crossing_unknots() > 0 {
        sites.push(InsertSite::UnknotComponent);
    }
    sites
}

fn all_gaps(d: &VirtualLinkDiagram) -> Vec<GapSite> {
    let mut gaps = Vec::new();
    for (c, comp) in d.components().iter().enumerate() {
        for g in 0..comp.len() {
            gaps.push(GapSite {
                component: c,
                gap: g,
            });
        }
    }
    gaps
}

/// Deterministic random walk through equivalent diagrams. Removals and
/// slides are preferred over insertions, and insertions stop at
/// [`MAX_WALK_CROSSINGS`], so walks stay small.
pub fn random_equivalent(
    d: &VirtualLinkDiagram,
    move_count: usize,
    seed: u64,
) -> (VirtualLinkDiagram, MoveTrace) {
    random_equivalent_filtered(d, move_count, seed, MoveFilter::default())
}

/// Random walk restricted to the allowed move families.
pub fn random_equivalent_filtered(
    d: &VirtualLinkDiagram,
    move_count: usize,
    seed: u64,
    filter: MoveFilter,
) -> (VirtualLinkDiagram, MoveTrace) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut steps = Vec::new();
    for _ in 0..move_count {
        let n = cur.crossing_count();
        let mut groups: Vec<(u32, Vec<Move>)> = Vec::new();
        if filter.r1 {
            let removals: Vec<Move> = find_r1_removals(&cur)
                .into_iter()
                .map(|site| Move::R1Remove { site })
                .collect();
            if !removals.is_empty() {
                groups.push((4, removals));
            }
        }
        if filter.r2 {
            let removals: Vec<Move> = find_r2_removals(&cur)
                .into_iter()
                .map(|(over, under)| Move::R2Remove { over, under })
                .collect();
            if !removals.is_empty() {
                groups.push((4, removals));
            }
        }
        if filter.r3 {
            let slides: Vec<Move> = find_r3_sites(&cur)
                .into_iter()
                .map(|site| Move::R3 { site })
                .collect();
            if !slides.is_empty() {
                groups.push((3, slides));
            }
        }
        if filter.r1 && n < MAX_WALK_CROSSINGS {
            let inserts: Vec<Move> = find_r1_insertions(&cur)
                .into_iter()
                .map(|site| Move::R1Insert {
                    site,
                    sign: if rng.gen::<bool>() {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    },
                    over_first: rng.gen::<bool>(),
                })
                .collect();
            if !inserts.is_empty() {
                groups.push((1, inserts));
            }
        }
        if filter.r2 && n + 2 <= MAX_WALK_CROSSINGS {
            let gaps = all_gaps(&cur);
            if !gaps.is_empty() {
                let over = gaps[rng.gen_range(0..gaps.len())];
                let under = gaps[rng.gen_range(0..gaps.len())];
                groups.push((
                    1,
                    vec![Move::R2Insert {
                        over,
                        under,
                        parallel: rng.gen::<bool>(),
                    }],
                ));
            }
        }
        if groups.is_empty() {
            break;
        }
        let total: u32 = groups.iter().map(|(w, _)| w).sum();
        let mut pick = rng.gen_range(0..total);
        let mut chosen = None;
        for (w, moves) in &groups {
            if pick < *w {
                chosen = Some(moves);
                break;
            }
            pick -= w;
        }
        let moves = chosen.expect("weighted choice lands in a group");
        let m = moves[rng.gen_range(0..moves.len())];
        cur = apply_move(&cur, &m).expect("enumerated moves apply");
        steps.push(m);
    }
    (cur, MoveTrace { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus;
    use crate::knotio::{parse_gauss_code, random_diagram};
    use crate::poly::{ArrowPolynomial, LaurentPoly};
    use crate::statesum::{arrow_polynomial, normalized_arrow_polynomial};
    use proptest::prelude::*;

    fn parse(code: &str) -> VirtualLinkDiagram {
        parse_gauss_code(code).unwrap()
    }

    #[test]
    fn r1_on_unknot_gives_kink() {
        let d = parse("()");
        let kinked = apply_r1(&d, InsertSite::UnknotComponent, Sign::Plus, true).unwrap();
        assert_eq!(kinked.to_string(), "O1+ U1+");
        let back = remove_r1(
            &kinked,
            PassageSite {
                component: 0,
                position: 0,
            },
        )
        .unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn r1_changes_writhe_by_sign() {
        let d = parse("O1+ O2+ U1+ U2+");
        for (sign, delta) in [(Sign::Plus, 1), (Sign::Minus, -1)] {
            let site = InsertSite::Gap(GapSite {
                component: 0,
                gap: 2,
            });
            let moved = apply_r1(&d, site, sign, false).unwrap();
            assert_eq!(moved.writhe(), d.writhe() + delta);
            assert_eq!(moved.crossing_count(), 3);
        }
    }

    #[test]
    fn r1_multiplies_arrow_polynomial_by_kink_factor() {
        let d = parse("O1+ O2+ U1+ U2+");
        for (sign, exp) in [(Sign::Plus, 3), (Sign::Minus, -3)] {
            let site = InsertSite::Gap(GapSite {
                component: 0,
                gap: 1,
            });
            let moved = apply_r1(&d, site, sign, true).unwrap();
            let factor = ArrowPolynomial::from_laurent(LaurentPoly::monomial(exp, -1));
            assert_eq!(arrow_polynomial(&moved), &arrow_polynomial(&d) * &factor);
        }
    }

    #[test]
    fn r2_preserves_arrow_polynomial_at_every_gap_pair() {
        for code in ["O1+ U1+", "O1+ O2+ U1+ U2+", "O1+ U2+\nO2+ U1+"] {
            let d = parse(code);
            let before = arrow_polynomial(&d);
            for over in all_gaps(&d) {
                for under in all_gaps(&d) {
                    for parallel in [true, false] {
                        let moved = apply_r2(&d, over, under, parallel).unwrap();
                        assert_eq!(moved.crossing_count(), d.crossing_count() + 2);
                        assert_eq!(moved.writhe(), d.writhe());
                        assert_eq!(
                            arrow_polynomial(&moved),
                            before,
                            "{code} over {over:?} under {under:?} parallel {parallel}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn r2_insert_then_remove_restores_original() {
        let d = parse("O1+ O2+ U1+ U2+");
        for parallel in [true, false] {
            let over = GapSite {
                component: 0,
                gap: 1,
            };
            let under = GapSite {
                component: 0,
                gap: 3,
            };
            let moved = apply_r2(&d, over, under, parallel).unwrap();
            let restored = find_r2_removals(&moved)
                .into_iter()
                .filter_map(|(o, u)| remove_r2(&moved, o, u).ok())
                .find(|r| *r == d);
            assert!(restored.is_some(), "parallel {parallel}");
        }
    }

    #[test]
    fn r2_removal_across_components_leaves_unknots() {
        let d = parse("O1+ O2-\nU1+ U2-");
        let sites = find_r2_removals(&d);
        assert!(!sites.is_empty());
        let (over, under) = sites[0];
        let removed = remove_r2(&d, over, under).unwrap();
        assert_eq!(removed, parse("()\n()"));
    }

    #[test]
    fn trefoil_has_no_r3_sites() {
        assert!(find_r3_sites_structural(&parse("O1+ U2+ O3+ U1+ O2+ U3+")).is_empty());
    }

    #[test]
    fn r3_preserves_arrow_polynomial_and_is_an_involution() {
        let mut tried = 0;
        for seed in 0..400u64 {
            let d = random_diagram(3 + (seed % 4) as usize, 1, 0, seed);
            for site in find_r3_sites(&d) {
                let moved = apply_r3(&d, site).unwrap();
                assert_eq!(
                    arrow_polynomial(&moved),
                    arrow_polynomial(&d),
                    "seed {seed}"
                );
                assert_eq!(moved.writhe(), d.writhe());
                assert_eq!(
                    apply_r3(&moved, site).unwrap(),
                    d.normalized(),
                    "seed {seed}"
                );
                tried += 1;
            }
        }
        assert!(tried > 20, "scan found only {tried} realizable triangles");
    }

    #[test]
    fn unrealizable_r3_sites_are_rejected() {
        let mut rejected = 0;
        for seed in 0..200u64 {
            let d = random_diagram(3 + (seed % 4) as usize, 1, 0, seed);
            for site in find_r3_sites_structural(&d) {
                if apply_r3(&d, site).is_err() {
                    rejected += 1;
                }
            }
        }
        assert!(rejected > 20, "scan rejected only {rejected} triangles");
    }

    #[test]
    fn random_equivalent_is_deterministic_and_replayable() {
        let d = parse("O1+ O2+ U1+ U2+");
        let (a, trace_a) = random_equivalent(&d, 6, 99);
        let (b, trace_b) = random_equivalent(&d, 6, 99);
        assert_eq!(a, b);
        assert_eq!(trace_a, trace_b);
        assert_eq!(replay(&d, &trace_a).unwrap(), a);
        let (c, _) = random_equivalent(&d, 6, 100);
        let _ = c;
        let (e, trace_e) = random_equivalent(&d, 0, 7);
        assert_eq!(e, d);
        assert!(trace_e.steps.is_empty());
    }

    #[test]
    fn random_equivalent_respects_size_cap() {
        for (name, d) in corpus() {
            for seed in 0..5u64 {
                let (moved, _) = random_equivalent(&d, 12, seed);
                assert!(
                    moved.crossing_count() <= MAX_WALK_CROSSINGS,
                    "{name} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn random_equivalent_preserves_normalized_arrow_polynomial() {
        for (name, d) in corpus() {
            let before = normalized_arrow_polynomial(&d);
            for seed in 0..3u64 {
                let (moved, trace) = random_equivalent(&d, 4, seed);
                assert_eq!(
                    normalized_arrow_polynomial(&moved),
                    before,
                    "{name} seed {seed} trace {trace:?}"
                );
            }
        }
    }

    #[test]
    fn move_trace_round_trips_through_json() {
        let d = parse("O1+ O2+ U1+ U2+");
        let (_, trace) = random_equivalent(&d, 5, 42);
        let json = serde_json::to_string(&trace).unwrap();
        let back: MoveTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(trace, back);
    }

    /// Regeneration tool for the R3 realizability predicate: tabulates
    /// polynomial preservation over every sign/order combination and fails
    /// on any disagreement with `r3_realizable`. Run with
    /// `cargo test -p arrowpoly --release -- --ignored r3_scan --nocapture`.
    #[test]
    #[ignore]
    fn r3_scan_truth_table() {
        use std::collections::BTreeMap;
        type SiteShape = (i8, i8, i8, bool, bool, bool);
        let mut table: BTreeMap<SiteShape, (u64, u64)> = BTreeMap::new();
        for seed in 0..4000u64 {
            let d = random_diagram(3 + (seed % 5) as usize, 1 + (seed % 2) as usize, 0, seed);
            let before = arrow_polynomial(&d);
            for site in find_r3_sites_structural(&d) {
                let t = resolve_triangle(&d, site).unwrap();
                let moved = apply_r3_swaps(&d, site);
                let preserved = arrow_polynomial(&moved) == before;
                let key = (
                    t.sx.value() as i8,
                    t.sy.value() as i8,
                    t.sz.value() as i8,
                    t.ft,
                    t.fm,
                    t.fb,
                );
                let entry = table.entry(key).or_insert((0, 0));
                if preserved {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        let mut mismatches = 0;
        for (&(sx, sy, sz, ft, fm, fb), &(kept, broken)) in &table {
            let sign = |v: i8| if v > 0 { Sign::Plus } else { Sign::Minus };
            let predicted = r3_realizable(sign(sx), sign(sy), sign(sz), ft, fm, fb);
            let observed_valid = broken == 0;
            println!(
                "sx {sx:+} sy {sy:+} sz {sz:+} ft {ft:5} fm {fm:5} fb {fb:5}  kept {kept:6} broken {broken:6}  predicted {predicted}"
            );
            if predicted != observed_valid {
                mismatches += 1;
            }
        }
        assert_eq!(mismatches, 0, "predicate disagrees with the scan");
    }

    proptest! {
        #[test]
        fn moves_preserve_validity(n in 1usize..5, seed in any::<u64>(), steps in 0usize..8) {
            let d = random_diagram(n, 1, 0, seed);
            let (moved, trace) = random_equivalent(&d, steps, seed);
            prop_assert!(moved.validate().ok());
            prop_assert_eq!(replay(&d, &trace).unwrap(), moved);
        }
    }
}
