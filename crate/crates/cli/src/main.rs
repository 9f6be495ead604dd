//! Command-line front end for the arrow polynomial pipeline: invariant
//! evaluation, graded homology with differential checks, move-invariance
//! verification, atom bounds, and corpus management.
//!
//! Exit codes: 0 success, 1 input error, 2 resource limit exceeded,
//! 3 property-check failure. Identical invocations produce byte-identical
//! output.

use arrowpoly::atoms::{
    atom_characteristics, minimality_certificate, span_bound_check, thickness_bound_check,
    virtual_crossing_lower_bound, AtomError, BoundReport,
};
use arrowpoly::corpus::{corpus_diagram, CORPUS};
use arrowpoly::cube::{build_cube, CubeError};
use arrowpoly::homology::{betti_table, euler_reconstruct, thickness, BettiTable, HomologyError};
use arrowpoly::khovanov::{
    build_complex, dprime_complement_check, verify_d_squared, ComplexError, GradingSystem,
};
use arrowpoly::knotio::random_diagram;
use arrowpoly::moves::{random_equivalent_filtered, MoveFilter, MAX_WALK_CROSSINGS};
use arrowpoly::poly::LaurentPoly;
use arrowpoly::{
    arrow_polynomial, bracket_polynomial, flat_specialization, normalized_arrow_polynomial,
    parse_gauss_code, ArrowPolynomial, VirtualLinkDiagram,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fmt::Write as _;
use std::io::{ErrorKind, Read, Write};
use std::process::ExitCode;

/// Crossing cap for plain state sums; past this the enumeration is too slow
/// to be useful from the command line.
const MAX_COMPUTE_CROSSINGS: usize = 24;

#[derive(Parser)]
#[command(
    name = "arrowpoly",
    version,
    about = "Arrow polynomial and GF(2) categorification of virtual link diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate polynomial invariants of a diagram.
    Compute(ComputeArgs),
    /// Compute graded GF(2) homology and run the differential checks.
    Homology(HomologyArgs),
    /// Check invariance across seeded random Reidemeister walks.
    Verify(VerifyArgs),
    /// Report atom characteristics and the derived bounds.
    Bounds(BoundsArgs),
    /// List bundled diagrams, or print one as a signed Gauss code.
    Corpus(CorpusArgs),
    /// Generate a seeded random diagram as a signed Gauss code.
    Gen(GenArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Gauss code file, "-" for stdin, or "corpus:NAME" for a bundled
    /// diagram.
    input: Option<String>,
    /// Inline signed Gauss code instead of a file.
    #[arg(long, conflicts_with = "input")]
    code: Option<String>,
    /// Emit one JSON document instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Invariant {
    /// The arrow polynomial.
    Arrow,
    /// The bracket polynomial, arrows forgotten.
    Bracket,
    /// The writhe-normalized arrow polynomial.
    Normalized,
    /// The flat specialization at A = 1, d = -2.
    Flat,
    /// All four invariants.
    All,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Invariant::Arrow)]
    invariant: Invariant,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Grading {
    Plain,
    Dotted,
    Full,
}

impl From<Grading> for GradingSystem {
    fn from(g: Grading) -> Self {
        match g {
            Grading::Plain => GradingSystem::Plain,
            Grading::Dotted => GradingSystem::Dotted,
            Grading::Full => GradingSystem::Full,
        }
    }
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Grading::Full)]
    grading: Grading,
    /// Report unnormalized gradings (no writhe shift).
    #[arg(long)]
    raw: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MoveKind {
    R1,
    R2,
    R3,
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MoveKind::R1 => "r1",
            MoveKind::R2 => "r2",
            MoveKind::R3 => "r3",
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Move kinds the random walks may use.
    #[arg(long, value_delimiter = ',', default_values_t = [MoveKind::R1, MoveKind::R2, MoveKind::R3])]
    moves: Vec<MoveKind>,
    /// Number of independent random walks.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Moves per walk.
    #[arg(long, default_value_t = 4)]
    length: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct CorpusArgs {
    /// Bundled diagram to print; omit to list all of them.
    name: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    crossings: usize,
    #[arg(long, default_value_t = 1)]
    components: usize,
    #[arg(long, default_value_t = 0)]
    unknots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failures with their process exit codes.
enum AppError {
    /// Unreadable, unparseable, or invalid input: exit 1.
    Input(String),
    /// Diagram exceeds a size limit: exit 2.
    Limit(String),
    /// A verified property failed to hold: exit 3.
    Check(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Input(_) => 1,
            AppError::Limit(_) => 2,
            AppError::Check(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Input(m) | AppError::Limit(m) | AppError::Check(m) => m,
        }
    }
}

impl From<CubeError> for AppError {
    fn from(e: CubeError) -> Self {
        AppError::Limit(e.to_string())
    }
}

impl From<ComplexError> for AppError {
    fn from(e: ComplexError) -> Self {
        AppError::Limit(e.to_string())
    }
}

impl From<HomologyError> for AppError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Complex(inner) => AppError::Limit(inner.to_string()),
            other => AppError::Check(other.to_string()),
        }
    }
}

impl From<AtomError> for AppError {
    fn from(e: AtomError) -> Self {
        match e {
            AtomError::Cube(inner) => AppError::Limit(inner.to_string()),
            AtomError::Homology(inner) => AppError::from(inner),
        }
    }
}

/// Rendered output of a command, plus the first property-check failure when
/// one occurred; the output still prints before the failure exits with 3.
struct CmdOutput {
    stdout: String,
    check_error: Option<String>,
}

impl CmdOutput {
    fn ok(stdout: String) -> Self {
        CmdOutput {
            stdout,
            check_error: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not input errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Homology(args) => cmd_homology(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Corpus(args) => cmd_corpus(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(out) => {
            // A closed pipe downstream is not this process's failure.
            if let Err(e) = std::io::stdout().write_all(out.stdout.as_bytes()) {
                if e.kind() != ErrorKind::BrokenPipe {
                    eprintln!("error: stdout: {e}");
                    return ExitCode::from(1);
                }
            }
            match out.check_error {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    let failure = AppError::Check(msg);
                    eprintln!("error: {}", failure.message());
                    ExitCode::from(failure.exit_code())
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Resolves the input source to a parsed, validated diagram.
fn load(args: &InputArgs) -> Result<(String, VirtualLinkDiagram), AppError> {
    let (label, text) = if let Some(code) = &args.code {
        ("inline".to_string(), code.clone())
    } else {
        match args.input.as_deref() {
            None => {
                return Err(AppError::Input(
                    "no input: pass a file, \"-\", \"corpus:NAME\", or --code".to_string(),
                ))
            }
            Some("-") => {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| AppError::Input(format!("stdin: {e}")))?;
                ("stdin".to_string(), text)
            }
            Some(name) if name.starts_with("corpus:") => {
                let key = &name["corpus:".len()..];
                let entry = CORPUS
                    .iter()
                    .find(|e| e.name == key)
                    .ok_or_else(|| AppError::Input(format!("unknown corpus diagram {key:?}")))?;
                (name.to_string(), entry.code.to_string())
            }
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| AppError::Input(format!("{path}: {e}")))?;
                (path.to_string(), text)
            }
        }
    };
    let diagram = parse_gauss_code(&text).map_err(|e| AppError::Input(e.to_string()))?;
    let report = diagram.validate();
    if !report.ok() {
        return Err(AppError::Input(format!(
            "invalid diagram: {}",
            report
                .issues
                .iter()
                .map(|issue| format!("{} ({})", issue.message, issue.location))
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    Ok((label, diagram))
}

fn count_noun(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("{n} {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn summary(label: &str, d: &VirtualLinkDiagram) -> String {
    format!(
        "{label}: {}, writhe {}, {}",
        count_noun(d.crossing_count(), "crossing"),
        d.writhe(),
        count_noun(
            d.components().len() + d.zero_crossing_unknots(),
            "component"
        )
    )
}

fn input_json(label: &str, d: &VirtualLinkDiagram) -> serde_json::Value {
    json!({
        "source": label,
        "code": d.to_string(),
        "crossings": d.crossing_count(),
        "writhe": d.writhe(),
        "components": d.components().len() + d.zero_crossing_unknots(),
    })
}

fn render_json(doc: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
    text.push('\n');
    text
}

fn cmd_compute(args: ComputeArgs) -> Result<CmdOutput, AppError> {
    let (label, d) = load(&args.input)?;
    if d.crossing_count() > MAX_COMPUTE_CROSSINGS {
        return Err(AppError::Limit(format!(
            "diagram has {}, state sums are limited to {MAX_COMPUTE_CROSSINGS} crossings",
            count_noun(d.crossing_count(), "crossing")
        )));
    }
    let wanted = |inv: Invariant| args.invariant == inv || args.invariant == Invariant::All;
    let mut values: Vec<(&str, String)> = Vec::new();
    if wanted(Invariant::Arrow) {
        values.push(("arrow", arrow_polynomial(&d).to_string()));
    }
    if wanted(Invariant::Bracket) {
        values.push(("bracket", bracket_polynomial(&d).to_string()));
    }
    if wanted(Invariant::Normalized) {
        values.push(("normalized", normalized_arrow_polynomial(&d).to_string()));
    }
    if wanted(Invariant::Flat) {
        values.push(("flat", flat_specialization(&d).to_string()));
    }
    let stdout = if args.input.json {
        let mut results = serde_json::Map::new();
        for (name, value) in &values {
            results.insert((*name).to_string(), json!(value));
        }
        render_json(&json!({
            "command": "compute",
            "input": input_json(&label, &d),
            "results": results,
        }))
    } else {
        let mut out = String::new();
        writeln!(out, "{}", summary(&label, &d)).expect("write to string");
        for (name, value) in &values {
            writeln!(out, "{name} = {value}").expect("write to string");
        }
        out
    };
    Ok(CmdOutput::ok(stdout))
}

fn render_betti(t: &BettiTable) -> String {
    let mut out = String::new();
    for e in &t.entries {
        write!(out, "  i={} j={}", e.i, e.j).expect("write to string");
        if let Some(g) = e.g {
            write!(out, " g={g}").expect("write to string");
        }
        if !e.multi.is_empty() {
            write!(out, " multi={:?}", e.multi).expect("write to string");
        }
        if !e.vect.is_empty() {
            let slots: Vec<String> = e.vect.iter().map(|(k, v)| format!("{k}:{v:+}")).collect();
            write!(out, " vect=[{}]", slots.join(", ")).expect("write to string");
        }
        writeln!(out, " dim={}", e.dim).expect("write to string");
    }
    out
}

fn cmd_homology(args: HomologyArgs) -> Result<CmdOutput, AppError> {
    let (label, d) = load(&args.input)?;
    let system: GradingSystem = args.grading.into();
    let cube = build_cube(&d)?;
    let complex = build_complex(&cube, system)?;
    let table = betti_table(&complex, !args.raw)?;
    let differential = verify_d_squared(&complex);
    let complement = dprime_complement_check(&complex);
    let full_complex;
    let full = if system == GradingSystem::Full {
        &complex
    } else {
        full_complex = build_complex(&cube, GradingSystem::Full)?;
        &full_complex
    };
    let euler = euler_reconstruct(full, &d).expect("full system");
    let expected = &ArrowPolynomial::from_laurent(LaurentPoly::d()) * &arrow_polynomial(&d);
    let euler_ok = euler == expected;
    let d_ok = differential.d_squared_zero && differential.d_prime_squared_zero;
    let thick = thickness(&table).ok();
    let stdout = if args.input.json {
        render_json(&json!({
            "command": "homology",
            "input": input_json(&label, &d),
            "config": { "grading": system, "normalized": !args.raw },
            "results": {
                "betti": serde_json::to_value(&table).expect("table serializes"),
                "thickness": thick,
            },
            "checks": {
                "d_squared": d_ok,
                "complement_structure": complement.ok,
                "euler_reconstruction": euler_ok,
            },
        }))
    } else {
        let mut out = String::new();
        writeln!(out, "{}", summary(&label, &d)).expect("write to string");
        writeln!(
            out,
            "homology over GF(2), {:?} grading, {}:",
            system,
            if args.raw {
                "unnormalized"
            } else {
                "normalized"
            }
        )
        .expect("write to string");
        out.push_str(&render_betti(&table));
        match thick {
            Some(t) => writeln!(out, "thickness = {t}").expect("write to string"),
            None => {
                writeln!(out, "thickness undefined: homology is empty").expect("write to string")
            }
        }
        writeln!(out, "d_squared: {}", if d_ok { "PASS" } else { "FAIL" })
            .expect("write to string");
        writeln!(
            out,
            "complement_structure: {}",
            if complement.ok { "PASS" } else { "FAIL" }
        )
        .expect("write to string");
        writeln!(
            out,
            "euler_reconstruction: {}",
            if euler_ok { "PASS" } else { "FAIL" }
        )
        .expect("write to string");
        out
    };
    let check_error = if !d_ok {
        Some(format!(
            "differential law failed: {}",
            differential.failure.as_deref().unwrap_or("unknown")
        ))
    } else if !complement.ok {
        Some(format!(
            "complement structure failed: {}",
            complement.failure.as_deref().unwrap_or("unknown")
        ))
    } else if !euler_ok {
        Some("Euler reconstruction does not match the arrow polynomial".to_string())
    } else {
        None
    };
    Ok(CmdOutput {
        stdout,
        check_error,
    })
}

fn betti_entries(d: &VirtualLinkDiagram, system: GradingSystem) -> Result<BettiTable, AppError> {
    let cube = build_cube(d)?;
    let complex = build_complex(&cube, system)?;
    Ok(betti_table(&complex, true)?)
}

fn cmd_verify(args: VerifyArgs) -> Result<CmdOutput, AppError> {
    let (label, d) = load(&args.input)?;
    if d.crossing_count() > MAX_WALK_CROSSINGS {
        return Err(AppError::Limit(format!(
            "diagram has {}, random walks are limited to {MAX_WALK_CROSSINGS} crossings",
            count_noun(d.crossing_count(), "crossing")
        )));
    }
    let filter = MoveFilter {
        r1: args.moves.contains(&MoveKind::R1),
        r2: args.moves.contains(&MoveKind::R2),
        r3: args.moves.contains(&MoveKind::R3),
    };
    let systems = [
        GradingSystem::Plain,
        GradingSystem::Dotted,
        GradingSystem::Full,
    ];
    let base_w = normalized_arrow_polynomial(&d);
    let base_betti: Vec<BettiTable> = systems
        .iter()
        .map(|&s| betti_entries(&d, s))
        .collect::<Result<_, _>>()?;
    let mut lines = Vec::new();
    let mut walks = Vec::new();
    let mut failures = 0usize;
    for k in 0..args.count {
        let seed = args.seed + k as u64;
        let (moved, trace) = random_equivalent_filtered(&d, args.length, seed, filter);
        let w_ok = normalized_arrow_polynomial(&moved) == base_w;
        let mut betti_ok = [false; 3];
        for (slot, &system) in systems.iter().enumerate() {
            let table = betti_entries(&moved, system)?;
            betti_ok[slot] = table.entries == base_betti[slot].entries;
        }
        let ok = w_ok && betti_ok.iter().all(|&b| b);
        if !ok {
            failures += 1;
        }
        lines.push(format!(
            "walk {k} (seed {seed}, {} moves, {}): {}",
            trace.steps.len(),
            count_noun(moved.crossing_count(), "crossing"),
            if ok { "PASS" } else { "FAIL" }
        ));
        walks.push(json!({
            "seed": seed,
            "moves_applied": trace.steps.len(),
            "crossings": moved.crossing_count(),
            "normalized_arrow_unchanged": w_ok,
            "betti_unchanged": {
                "plain": betti_ok[0],
                "dotted": betti_ok[1],
                "full": betti_ok[2],
            },
        }));
    }
    let pass = failures == 0;
    let stdout = if args.input.json {
        render_json(&json!({
            "command": "verify",
            "input": input_json(&label, &d),
            "config": {
                "moves": { "r1": filter.r1, "r2": filter.r2, "r3": filter.r3 },
                "count": args.count,
                "length": args.length,
                "seed": args.seed,
            },
            "results": { "walks": walks },
            "checks": { "invariance": pass },
        }))
    } else {
        let mut out = String::new();
        writeln!(out, "{}", summary(&label, &d)).expect("write to string");
        for line in &lines {
            writeln!(out, "{line}").expect("write to string");
        }
        writeln!(
            out,
            "verify: {} ({}/{} walks unchanged)",
            if pass { "PASS" } else { "FAIL" },
            args.count - failures,
            args.count
        )
        .expect("write to string");
        out
    };
    let check_error =
        (!pass).then(|| format!("{failures} of {} walks changed an invariant", args.count));
    Ok(CmdOutput {
        stdout,
        check_error,
    })
}

fn render_bound(name: &str, b: &BoundReport) -> String {
    if !b.applicable {
        return format!(
            "{name}: not applicable ({})",
            b.reason.as_deref().unwrap_or("unknown")
        );
    }
    format!(
        "{name}: {} <= {} ({}{})",
        b.value,
        b.bound,
        if b.holds { "holds" } else { "VIOLATED" },
        if b.tight { ", tight" } else { "" }
    )
}

fn cmd_bounds(args: BoundsArgs) -> Result<CmdOutput, AppError> {
    let (label, d) = load(&args.input)?;
    let atom = atom_characteristics(&d)?;
    let table = betti_entries(&d, GradingSystem::Full)?;
    let vc = virtual_crossing_lower_bound(&table);
    let span = span_bound_check(&d)?;
    let thick = thickness_bound_check(&d)?;
    let minimal = minimality_certificate(&d)?;
    let stdout = if args.input.json {
        render_json(&json!({
            "command": "bounds",
            "input": input_json(&label, &d),
            "results": {
                "atom": serde_json::to_value(&atom).expect("atom serializes"),
                "virtual_crossing_lower_bound": vc,
                "span": serde_json::to_value(&span).expect("span serializes"),
                "thickness": serde_json::to_value(&thick).expect("thickness serializes"),
                "minimality": serde_json::to_value(&minimal).expect("minimality serializes"),
            },
        }))
    } else {
        let mut out = String::new();
        writeln!(out, "{}", summary(&label, &d)).expect("write to string");
        write!(
            out,
            "atom: chi={}, {}",
            atom.euler_characteristic,
            if atom.orientable {
                "orientable"
            } else {
                "non-orientable"
            }
        )
        .expect("write to string");
        match atom.genus {
            Some(g) => writeln!(out, ", genus {g}").expect("write to string"),
            None => writeln!(
                out,
                ", genus undefined ({})",
                atom.genus_undefined_reason.as_deref().unwrap_or("unknown")
            )
            .expect("write to string"),
        }
        writeln!(out, "virtual_crossing_lower_bound = {vc}").expect("write to string");
        writeln!(out, "{}", render_bound("span", &span)).expect("write to string");
        writeln!(out, "{}", render_bound("thickness", &thick)).expect("write to string");
        writeln!(
            out,
            "minimality: {:?} ({})",
            minimal.verdict, minimal.evidence
        )
        .expect("write to string");
        out
    };
    let mut check_error = None;
    for (name, b) in [("span", &span), ("thickness", &thick)] {
        if b.applicable && !b.holds {
            check_error = Some(format!("{name} bound violated: {} > {}", b.value, b.bound));
            break;
        }
    }
    Ok(CmdOutput {
        stdout,
        check_error,
    })
}

fn cmd_corpus(args: CorpusArgs) -> Result<CmdOutput, AppError> {
    let stdout = match args.name {
        None => {
            let mut out = String::new();
            for entry in CORPUS {
                let d = corpus_diagram(entry.name).expect("bundled diagram parses");
                writeln!(
                    out,
                    "{:<16} {}, writhe {}",
                    entry.name,
                    count_noun(d.crossing_count(), "crossing"),
                    d.writhe()
                )
                .expect("write to string");
            }
            out
        }
        Some(name) => {
            let entry = CORPUS
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| AppError::Input(format!("unknown corpus diagram {name:?}")))?;
            entry.code.to_string()
        }
    };
    Ok(CmdOutput::ok(stdout))
}

fn cmd_gen(args: GenArgs) -> Result<CmdOutput, AppError> {
    let d = random_diagram(args.crossings, args.components, args.unknots, args.seed);
    Ok(CmdOutput::ok(format!("{d}\n")))
}
