//! Signed Gauss codes for virtual link diagrams: parsing, validation,
//! serialization, and elementary diagram statistics.
//!
//! Virtual crossings are never represented; a signed Gauss code determines a
//! virtual link up to detour moves, and all downstream computation is
//! combinatorial.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Role of a passage through a classical crossing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn other(self) -> Self {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }

    fn letter(self) -> char {
        match self {
            Role::Over => 'O',
            Role::Under => 'U',
        }
    }
}

/// Crossing sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Plus
    }

    fn glyph(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> serde::Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match i64::deserialize(d)? {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!(
                "sign must be 1 or -1, got {other}"
            ))),
        }
    }
}

/// One passage of a strand through a classical crossing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Passage {
    pub id: u32,
    pub role: Role,
    pub sign: Sign,
}

impl Passage {
    pub fn new(id: u32, role: Role, sign: Sign) -> Self {
        Self { id, role, sign }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.role.letter(), self.id, self.sign.glyph())
    }
}

/// Virtual link diagram given as a signed Gauss code: one cyclic passage
/// sequence per component, plus a count of crossing-free unknot components.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct VirtualLinkDiagram {
    pub(crate) components: Vec<Vec<Passage>>,
    pub(crate) zero_crossing_unknots: usize,
}

/// Output format for [`VirtualLinkDiagram::serialize`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
}

/// Parse or semantic failure, with source location where applicable.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("crossing {id}: {msg}")]
    Semantic { id: u32, msg: String },
}

/// Machine-readable validation issue category.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum IssueCode {
    EmptyDiagram,
    EmptyComponent,
    InvalidId,
    RoleImbalance,
    SignMismatch,
    WrongPassageCount,
    NonContiguousIds,
}

/// A single validation finding.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ValidationIssue {
    pub code: IssueCode,
    pub message: String,
    pub location: String,
}

/// Result of [`VirtualLinkDiagram::validate`]; `ok()` iff no issues.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, code: IssueCode, message: impl Into<String>, location: impl Into<String>) {
        self.issues.push(ValidationIssue {
            code,
            message: message.into(),
            location: location.into(),
        });
    }
}

/// Parses the text grammar: one component per line, `#` starts a comment,
/// a component is `()` or whitespace-separated passages like `O1+ U2-`.
/// The result is normalized: crossing ids are renumbered `1..n` in first-
/// appearance order.
pub fn parse_gauss_code(text: &str) -> Result<VirtualLinkDiagram, ParseError> {
    let mut components = Vec::new();
    let mut unknots = 0;
    for (line_idx, raw) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if line.trim() == "()" {
            unknots += 1;
            continue;
        }
        let mut passages = Vec::new();
        let mut col = 0;
        for token in line.split_whitespace() {
            col = line[col..].find(token).map(|off| col + off).unwrap_or(col);
            passages.push(parse_passage(token, line_no, col + 1)?);
            col += token.len();
        }
        components.push(passages);
    }
    let diagram = VirtualLinkDiagram {
        components,
        zero_crossing_unknots: unknots,
    };
    check_pairing(&diagram)?;
    Ok(diagram.normalized())
}

fn parse_passage(token: &str, line: usize, col: usize) -> Result<Passage, ParseError> {
    let syntax = |msg: &str| ParseError::Syntax {
        line,
        col,
        msg: msg.to_string(),
    };
    let mut chars = token.chars();
    let role = match chars.next() {
        Some('O') => Role::Over,
        Some('U') => Role::Under,
        _ => return Err(syntax("expected passage starting with 'O' or 'U'")),
    };
    let body = chars.as_str();
    let Some(sign_char) = body.chars().last() else {
        return Err(syntax("missing crossing id and sign"));
    };
    let sign = match sign_char {
        '+' => Sign::Plus,
        '-' => Sign::Minus,
        _ => return Err(syntax("expected trailing '+' or '-'")),
    };
    let digits = &body[..body.len() - 1];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax("expected a decimal crossing id"));
    }
    let id: u32 = digits
        .parse()
        .map_err(|_| syntax("crossing id out of range"))?;
    if id == 0 {
        return Err(syntax("crossing ids start at 1"));
    }
    Ok(Passage::new(id, role, sign))
}

fn check_pairing(d: &VirtualLinkDiagram) -> Result<(), ParseError> {
    let mut seen: BTreeMap<u32, Vec<Passage>> = BTreeMap::new();
    for p in d.passages() {
        seen.entry(p.id).or_default().push(p);
    }
    for (id, ps) in seen {
        let semantic = |msg: String| ParseError::Semantic { id, msg };
        if ps.len() != 2 {
            return Err(semantic(format!(
                "appears {} times, expected exactly 2",
                ps.len()
            )));
        }
        if ps[0].role == ps[1].role {
            return Err(semantic(format!(
                "has two {:?} passages, expected one Over and one Under",
                ps[0].role
            )));
        }
        if ps[0].sign != ps[1].sign {
            return Err(semantic("passages disagree on the sign".to_string()));
        }
    }
    Ok(())
}

impl VirtualLinkDiagram {
    /// Builds a diagram without checking invariants; see [`Self::validate`].
    pub fn new(components: Vec<Vec<Passage>>, zero_crossing_unknots: usize) -> Self {
        Self {
            components,
            zero_crossing_unknots,
        }
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn zero_crossing_unknots(&self) -> usize {
        self.zero_crossing_unknots
    }

    /// Number of classical crossings.
    pub fn crossing_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All passages in component order.
    pub fn passages(&self) -> impl Iterator<Item = Passage> + '_ {
        self.components.iter().flatten().copied()
    }

    /// Sign of a crossing id; `None` if the id is absent.
    pub fn sign_of(&self, id: u32) -> Option<Sign> {
        self.passages().find(|p| p.id == id).map(|p| p.sign)
    }

    /// Counts of positive and negative crossings `(n_plus, n_minus)`.
    pub fn crossing_signs(&self) -> (usize, usize) {
        let mut plus = 0;
        let mut minus = 0;
        for p in self.passages().filter(|p| p.role == Role::Over) {
            match p.sign {
                Sign::Plus => plus += 1,
                Sign::Minus => minus += 1,
            }
        }
        (plus, minus)
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        let (plus, minus) = self.crossing_signs();
        plus as i64 - minus as i64
    }

    /// Renumbers crossing ids to `1..n` in first-appearance order.
    pub fn normalized(&self) -> Self {
        let mut renumber: BTreeMap<u32, u32> = BTreeMap::new();
        let mut components = self.components.clone();
        for comp in &mut components {
            for p in comp.iter_mut() {
                let next = renumber.len() as u32 + 1;
                p.id = *renumber.entry(p.id).or_insert(next);
            }
        }
        Self {
            components,
            zero_crossing_unknots: self.zero_crossing_unknots,
        }
    }

    /// Checks the diagram invariants and reports every violation.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.components.is_empty() && self.zero_crossing_unknots == 0 {
            report.push(
                IssueCode::EmptyDiagram,
                "diagram has no components",
                "diagram",
            );
            return report;
        }
        for (ci, comp) in self.components.iter().enumerate() {
            if comp.is_empty() {
                report.push(
                    IssueCode::EmptyComponent,
                    "component has no passages",
                    format!("component {}", ci + 1),
                );
            }
        }
        let mut by_id: BTreeMap<u32, Vec<Passage>> = BTreeMap::new();
        for p in self.passages() {
            if p.id == 0 {
                report.push(IssueCode::InvalidId, "crossing ids start at 1", "diagram");
                return report;
            }
            by_id.entry(p.id).or_default().push(p);
        }
        for (&id, ps) in &by_id {
            let loc = format!("crossing {id}");
            if ps.len() != 2 {
                report.push(
                    IssueCode::WrongPassageCount,
                    format!("appears {} times, expected exactly 2", ps.len()),
                    loc,
                );
                continue;
            }
            if ps[0].role == ps[1].role {
                report.push(
                    IssueCode::RoleImbalance,
                    format!("has two {:?} passages", ps[0].role),
                    loc.clone(),
                );
            }
            if ps[0].sign != ps[1].sign {
                report.push(
                    IssueCode::SignMismatch,
                    "passages disagree on the sign",
                    loc,
                );
            }
        }
        let n = by_id.len() as u32;
        if by_id.keys().next_back().copied().unwrap_or(0) != n {
            report.push(
                IssueCode::NonContiguousIds,
                format!("crossing ids are not contiguous 1..{n}"),
                "diagram",
            );
        }
        report
    }

    /// True iff the 4-valent shadow (vertices = crossings, edges = arcs) is
    /// connected and every link component carries at least one crossing.
    pub fn shadow_connected(&self) -> bool {
        let n = self.crossing_count();
        if n == 0 || self.zero_crossing_unknots > 0 {
            return false;
        }
        let mut dsu: Vec<u32> = (0..n as u32 + 1).collect();
        fn find(dsu: &mut Vec<u32>, x: u32) -> u32 {
            if dsu[x as usize] != x {
                let root = find(dsu, dsu[x as usize]);
                dsu[x as usize] = root;
            }
            dsu[x as usize]
        }
        for comp in &self.components {
            for (a, b) in comp
                .iter()
                .zip(comp.iter().cycle().skip(1))
                .take(comp.len())
            {
                let (ra, rb) = (find(&mut dsu, a.id), find(&mut dsu, b.id));
                dsu[ra as usize] = rb;
            }
        }
        let root = find(&mut dsu, 1);
        (2..=n as u32).all(|id| find(&mut dsu, id) == root)
    }

    /// Renders the diagram in the requested format. Text output round-trips
    /// through [`parse_gauss_code`] for normalized diagrams.
    pub fn serialize(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_string(),
            Format::Json => serde_json::to_string(self).expect("diagram serializes"),
        }
    }
}

impl fmt::Display for VirtualLinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines = Vec::new();
        for comp in &self.components {
            lines.push(
                comp.iter()
                    .map(Passage::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            );
        }
        for _ in 0..self.zero_crossing_unknots {
            lines.push("()".to_string());
        }
        write!(f, "{}", lines.join("\n"))
    }
}

/// Generates a uniformly random valid diagram: `n` crossings spread over
/// `components` strands plus `unknots` crossing-free components.
/// Deterministic for a fixed seed; the result is normalized.
pub fn random_diagram(
    n: usize,
    components: usize,
    unknots: usize,
    seed: u64,
) -> VirtualLinkDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n == 0 {
        return VirtualLinkDiagram::new(vec![], unknots);
    }
    let components = components.clamp(1, n);
    let mut slots: Vec<(u32, Role)> = (1..=n as u32)
        .flat_map(|id| [(id, Role::Over), (id, Role::Under)])
        .collect();
    slots.shuffle(&mut rng);
    let signs: Vec<Sign> = (0..n)
        .map(|_| {
            if rng.gen::<bool>() {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect();
    // Split 2n slots into the requested number of nonempty parts.
    let mut cuts: Vec<usize> = (1..2 * n).collect();
    cuts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(components - 1).collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(2 * n);
    let comps = cuts
        .windows(2)
        .map(|w| {
            slots[w[0]..w[1]]
                .iter()
                .map(|&(id, role)| Passage::new(id, role, signs[id as usize - 1]))
                .collect()
        })
        .collect();
    VirtualLinkDiagram::new(comps, unknots).normalized()
}
