use crate::report::{digest, ExitClass, Report};
use clap::{Args, Parser, Subcommand, ValueEnum};
use peirce_coord::commrel::format::{parse_commrel_unchecked, write_commrel};
use peirce_coord::commrel::{check_firm_rel, check_idempotent_rel, check_k_linear, check_reduced_rel, extract, CommRelData};
use peirce_coord::coordinatize::{
    connecting_hom, firm_coordinatize, reduced_coordinatize, CoordError, CoordinatizationResult, FirmOptions, Mode,
};
use peirce_coord::corpus::{standard_corpus, vector_morita_ring};
use peirce_coord::peirce::format::{parse_ring_unchecked, write_ring, FormatError};
use peirce_coord::peirce::{check_predicates, grouped_mat_ring, mat_ring, FinRing, PeirceError, PeirceRing};
use peirce_coord::quasigroup::DEFAULT_SIZE_BOUND;
use peirce_coord::suite::{timed, verify_lemmas, Status, SuiteOptions};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "peirce-coord", version, about = "Build, check and reconstruct Peirce-decomposed finite rings")]
#[command(args_conflicts_with_subcommands = true, arg_required_else_help = true)]
pub struct Cli {
    /// Write the standard corpus of ring files into DIR and exit.
    #[arg(long, value_name = "DIR")]
    pub seed_corpus: Option<PathBuf>,
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Global {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Omit the timestamp and wall times so that reports are reproducible.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a ring file. Prints it to stdout unless -o is given.
    Build {
        #[command(subcommand)]
        kind: BuildKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Check a ring or commutator-relations file against every predicate.
    Check { input: PathBuf },
    /// Write the commutator relations of a ring. Prints them unless -o is given.
    Extract {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rebuild a ring from a commutator-relations file.
    Coordinatize {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: CliMode,
        /// Where to write the rebuilt ring.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extract, rebuild and compare with the input ring.
    Roundtrip {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: CliMode,
    },
    /// Run every structural check on a ring.
    VerifyLemmas {
        input: PathBuf,
        /// Largest group enumerated by the group-theoretic checks.
        #[arg(long, default_value_t = DEFAULT_SIZE_BOUND)]
        size_bound: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    /// Matrices of size RANK over Z/MODULUS with the diagonal decomposition.
    Mat { rank: usize, modulus: i64 },
    /// Matrices of size SIZE grouped by a partition such as `1|2|3|45` or `1|2,3`.
    Grouped { size: usize, modulus: i64, partition: String },
    /// The ring (S P; Q Z/MODULUS) for row and column vectors of length K.
    Morita { k: usize, modulus: i64 },
    /// Re-emit an existing ring file in canonical form.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliMode {
    Firm,
    Reduced,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Self {
        match m {
            CliMode::Firm => Mode::Firm,
            CliMode::Reduced => Mode::Reduced,
        }
    }
}

/// What the process prints and returns.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
pub struct CliError {
    pub class: ExitClass,
    pub message: String,
}

impl CliError {
    fn new(class: ExitClass, message: impl Into<String>) -> Self {
        Self {
            class,
            message: message.into(),
        }
    }
}

type CliResult = Result<Output, CliError>;

pub fn run(cli: Cli) -> Output {
    let g = cli.global;
    let result = match (cli.seed_corpus, cli.command) {
        (Some(dir), _) => seed_corpus(&dir, g),
        (None, Some(Command::Build { kind, output })) => build(kind, output.as_deref(), g),
        (None, Some(Command::Check { input })) => check(&input, g),
        (None, Some(Command::Extract { input, output })) => extract_cmd(&input, output.as_deref(), g),
        (None, Some(Command::Coordinatize { input, mode, output })) => coordinatize(&input, mode.into(), output.as_deref(), g),
        (None, Some(Command::Roundtrip { input, mode })) => roundtrip(&input, mode.into(), g),
        (None, Some(Command::VerifyLemmas { input, size_bound })) => verify(&input, size_bound, g),
        (None, None) => Err(CliError::new(ExitClass::Precondition, "no command given")),
    };
    result.unwrap_or_else(|e| Output {
        stdout: String::new(),
        stderr: format!("error: {}\n", e.message),
        code: e.class.code(),
    })
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::new(ExitClass::Io, format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<(Vec<u8>, String), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::new(ExitClass::Precondition, format!("{} is not UTF-8", path.display())))?;
    Ok((bytes, text))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::new(ExitClass::Io, format!("cannot write {}: {e}", path.display())))
}

fn malformed(path: &Path, e: FormatError) -> CliError {
    CliError::new(ExitClass::Precondition, format!("{}: {e}", path.display()))
}

fn invalid(e: PeirceError) -> CliError {
    CliError::new(ExitClass::Precondition, format!("invalid parameters: {e}"))
}

fn finish(report: Report, g: Global) -> CliResult {
    Ok(Output {
        stdout: report.render(g.json),
        stderr: String::new(),
        code: report.exit_code,
    })
}

fn orders(r: &PeirceRing) -> String {
    r.block_orders()
        .iter()
        .map(|row| row.iter().map(u128::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(" | ")
}

fn diagonal_orders(r: &PeirceRing) -> String {
    (0..r.rank()).map(|s| r.block(s, s).order().to_string()).collect::<Vec<_>>().join(",")
}

fn ring_facts(report: &mut Report, r: &PeirceRing) {
    report.fact("rank", r.rank());
    report.fact("modulus", r.modulus());
    report.fact("order", r.order());
    report.fact("block orders", orders(r));
}

/// 1-based parts separated by `|`; within a part, indices are separated by
/// commas or, when there are none, written as single digits.
pub fn parse_partition(s: &str, size: usize) -> Result<Vec<Vec<usize>>, CliError> {
    let bad = |m: String| CliError::new(ExitClass::Precondition, format!("invalid parameters: partition `{s}`: {m}"));
    let mut parts = Vec::new();
    let mut seen = vec![false; size];
    for p in s.split('|') {
        let tokens: Vec<String> = if p.contains(',') {
            p.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            p.trim().chars().map(String::from).collect()
        };
        if tokens.is_empty() {
            return Err(bad("empty part".into()));
        }
        let mut part = Vec::new();
        for t in tokens {
            let a: usize = t.parse().map_err(|_| bad(format!("`{t}` is not an index")))?;
            if a == 0 || a > size {
                return Err(bad(format!("index {a} outside 1..={size}")));
            }
            if std::mem::replace(&mut seen[a - 1], true) {
                return Err(bad(format!("index {a} repeated")));
            }
            part.push(a - 1);
        }
        parts.push(part);
    }
    if let Some(a) = seen.iter().position(|&x| !x) {
        return Err(bad(format!("index {} missing", a + 1)));
    }
    Ok(parts)
}

fn modulus_ok(n: i64) -> Result<(), CliError> {
    if n < 2 {
        return Err(invalid(PeirceError::InvalidModulus(n)));
    }
    Ok(())
}

fn build(kind: BuildKind, output: Option<&Path>, g: Global) -> CliResult {
    let (params, ring) = match kind {
        BuildKind::Mat { rank, modulus } => {
            modulus_ok(modulus)?;
            (format!("mat {rank} {modulus}"), mat_ring(rank, &FinRing::cyclic(modulus)).map_err(invalid)?)
        }
        BuildKind::Grouped { size, modulus, partition } => {
            modulus_ok(modulus)?;
            let parts = parse_partition(&partition, size)?;
            (
                format!("grouped {size} {modulus} {partition}"),
                grouped_mat_ring(size, modulus, &parts).map_err(invalid)?,
            )
        }
        BuildKind::Morita { k, modulus } => {
            modulus_ok(modulus)?;
            (format!("morita {k} {modulus}"), vector_morita_ring(k, modulus).map_err(invalid)?)
        }
        BuildKind::File { path } => {
            let (_, text) = read_text(&path)?;
            let r = parse_ring_unchecked(&text).map_err(|e| malformed(&path, e))?;
            if let Some(w) = r.associativity_failure() {
                return Err(CliError::new(ExitClass::MathFailure, format!("not associative: {w:?}")));
            }
            (text, r)
        }
    };
    let text = write_ring(&ring);
    let Some(out) = output else {
        return Ok(Output {
            stdout: text,
            ..Output::default()
        });
    };
    write(out, &text)?;
    let mut report = Report::new("build", params.as_bytes(), !g.no_timestamp);
    ring_facts(&mut report, &ring);
    report.fact("output", digest(text.as_bytes()));
    finish(report, g)
}

/// Parses a ring without trusting its table and records associativity as
/// the first check.
fn load_ring(path: &Path, report: &mut Report) -> Result<Option<PeirceRing>, CliError> {
    let (_, text) = read_text(path)?;
    let r = parse_ring_unchecked(&text).map_err(|e| malformed(path, e))?;
    ring_facts(report, &r);
    let c = timed("associativity", || match r.associativity_failure() {
        None => (Status::Pass, "all generator triples".into(), None),
        Some((blocks, gens)) => (
            Status::Fail,
            "multiplication table".into(),
            Some(format!("blocks {blocks:?}, generators {gens:?}")),
        ),
    });
    let ok = c.status == Status::Pass;
    report.check(c, ExitClass::MathFailure);
    Ok(ok.then_some(r))
}

fn load_commrel(path: &Path, report: &mut Report) -> Result<Option<CommRelData>, CliError> {
    let (_, text) = read_text(path)?;
    let d = parse_commrel_unchecked(&text).map_err(|e| malformed(path, e))?;
    report.fact("rank", d.rank());
    report.fact("modulus", d.modulus());
    let c = timed("associativity", || match d.associativity_failure() {
        None => (Status::Pass, "all A3 generator triples".into(), None),
        Some((idx, gens)) => (
            Status::Fail,
            "commutator maps".into(),
            Some(format!("indices {idx:?}, generators {gens:?}")),
        ),
    });
    let ok = c.status == Status::Pass;
    report.check(c, ExitClass::MathFailure);
    Ok(ok.then_some(d))
}

fn predicate_check<E: std::fmt::Debug>(name: &'static str, what: &str, r: Result<(), E>) -> peirce_coord::suite::Check {
    let what = what.to_string();
    timed(name, move || match r {
        Ok(()) => (Status::Pass, what, None),
        Err(w) => (Status::Fail, what, Some(format!("{w:?}"))),
    })
}

fn relation_checks(report: &mut Report, d: &CommRelData) {
    report.check(
        predicate_check("k-linear", "every root module is a K-module", check_k_linear(d)),
        ExitClass::MathFailure,
    );
    report.check(
        predicate_check("idempotent-relations", "brackets generate", check_idempotent_rel(d)),
        ExitClass::MathFailure,
    );
    report.check(
        predicate_check("firm-relations", "kernel equals image on every A3 basis", check_firm_rel(d)),
        ExitClass::MathFailure,
    );
    report.check(
        predicate_check("reduced-relations", "no nonzero centralizing elements", check_reduced_rel(d)),
        ExitClass::MathFailure,
    );
}

fn is_commrel(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("commrel"))
}

fn check(input: &Path, g: Global) -> CliResult {
    let bytes = read(input)?;
    let mut report = Report::new("check", &bytes, !g.no_timestamp);
    if is_commrel(&String::from_utf8_lossy(&bytes)) {
        report.fact("kind", "commrel");
        if let Some(d) = load_commrel(input, &mut report)? {
            relation_checks(&mut report, &d);
        }
        return finish(report, g);
    }
    report.fact("kind", "ring");
    if let Some(r) = load_ring(input, &mut report)? {
        let rep = check_predicates(&r);
        report.check(
            predicate_check("idempotent", "R_ij R_jk = R_ik", rep.idempotent),
            ExitClass::MathFailure,
        );
        report.check(
            predicate_check("firm", "R_ij (x)_{R_jj} R_jk -> R_ik bijective", rep.firm),
            ExitClass::MathFailure,
        );
        report.check(
            predicate_check("reduced", "idempotent with zero annihilator", rep.reduced),
            ExitClass::MathFailure,
        );
        report.check(
            predicate_check("k-linear", "extracted root modules are K-modules", check_k_linear(&extract(&r))),
            ExitClass::MathFailure,
        );
    }
    finish(report, g)
}

fn extract_cmd(input: &Path, output: Option<&Path>, g: Global) -> CliResult {
    let bytes = read(input)?;
    let mut report = Report::new("extract", &bytes, !g.no_timestamp);
    let Some(r) = load_ring(input, &mut report)? else {
        return finish(report, g);
    };
    let d = extract(&r);
    let text = write_commrel(&d);
    let Some(out) = output else {
        return Ok(Output {
            stdout: text,
            ..Output::default()
        });
    };
    write(out, &text)?;
    report.fact("output", digest(text.as_bytes()));
    report.check(
        predicate_check("k-linear", "every root module is a K-module", check_k_linear(&d)),
        ExitClass::MathFailure,
    );
    finish(report, g)
}

fn error_class(e: &CoordError) -> ExitClass {
    match e {
        CoordError::PreconditionFailed(_) => ExitClass::Precondition,
        CoordError::Relations(_) => ExitClass::MathFailure,
        CoordError::IndexClash(..)
        | CoordError::NotWellDefined(_)
        | CoordError::InjectivityFailure(_)
        | CoordError::NotHomomorphism { .. }
        | CoordError::Peirce(_)
        | CoordError::Linalg(_) => ExitClass::InternalAlarm,
    }
}

fn certificate(report: &mut Report, name: &'static str, detail: String, failure: Option<String>) {
    let c = timed(name, || match failure {
        None => (Status::Pass, detail, None),
        Some(w) => (Status::Fail, detail, Some(w)),
    });
    report.check(c, ExitClass::InternalAlarm);
}

/// Checks the preconditions, runs the construction and records its
/// certificates. Returns the result only if every step passed.
fn reconstruct(report: &mut Report, d: &CommRelData, mode: Mode) -> Option<CoordinatizationResult> {
    report.fact("mode", mode.name());
    if d.rank() < 4 {
        let c = timed("rank", || (Status::Fail, "rank >= 4 required".into(), Some(format!("rank {}", d.rank()))));
        report.check(c, ExitClass::Precondition);
        return None;
    }
    report.check(
        predicate_check("k-linear", "every root module is a K-module", check_k_linear(d)),
        ExitClass::MathFailure,
    );
    let rel = match mode {
        Mode::Firm => predicate_check("firm-relations", "kernel equals image on every A3 basis", check_firm_rel(d)),
        Mode::Reduced => predicate_check("reduced-relations", "no nonzero centralizing elements", check_reduced_rel(d)),
    };
    report.check(rel, ExitClass::MathFailure);
    if report.failed() {
        return None;
    }
    let start = Instant::now();
    let built = match mode {
        Mode::Firm => firm_coordinatize(d, FirmOptions::default()),
        Mode::Reduced => reduced_coordinatize(d),
    };
    let out = match built {
        Ok(o) => o,
        Err(e) => {
            report.fail("construction", mode.name(), e.to_string(), error_class(&e), start.elapsed());
            return None;
        }
    };
    report.pass("construction", format!("{} mode", mode.name()), start.elapsed());
    report.fact("diagonal orders", diagonal_orders(&out.ring));
    match mode {
        Mode::Firm => {
            let bad = out.r_cons.iter().find(|c| !c.bijective);
            certificate(
                report,
                "pairwise-presentations",
                format!(
                    "{} of {} two-summand presentations of R_ss bijective",
                    out.r_cons.iter().filter(|c| c.bijective).count(),
                    out.r_cons.len()
                ),
                bad.map(|c| format!("s={}, i={}, j={}", c.s + 1, c.i + 1, c.j + 1)),
            );
        }
        Mode::Reduced => {
            let n = out.r_gen.len();
            let span = out.r_gen.iter().find(|c| !c.span_equal);
            certificate(
                report,
                "span-equality",
                format!("one pair (i, j) spans R_ss for all {n} diagonal indices"),
                span.map(|c| format!("s={}", c.s + 1)),
            );
            let inj = out
                .r_gen
                .iter()
                .find_map(|c| c.injective.iter().find(|(_, ok)| !ok).map(|(i, _)| (c.s, *i)));
            certificate(
                report,
                "factor-injectivity",
                "each projection End(U_is)^op x End(U_si) is injective on R_ss".into(),
                inj.map(|(s, i)| format!("s={}, i={}", s + 1, i + 1)),
            );
            let closed = out.r_gen.iter().find(|c| !c.closed);
            certificate(
                report,
                "span-closure",
                "products of span elements stay in the span".into(),
                closed.map(|c| format!("s={}", c.s + 1)),
            );
        }
    }
    let ass = out.lemma_ass.patterns.iter().find(|p| p.failure.is_some());
    certificate(
        report,
        "associativity-patterns",
        format!("{} index patterns", out.lemma_ass.patterns.len()),
        ass.map(|p| format!("pattern {:?}: {:?}", p.pattern, p.failure)),
    );
    let pred = &out.predicates;
    let mode_ok = match mode {
        Mode::Firm => pred.firm.as_ref().err().map(|w| format!("{w:?}")),
        Mode::Reduced => pred.reduced.as_ref().err().map(|w| format!("{w:?}")),
    };
    certificate(
        report,
        "output-predicate",
        format!("rebuilt decomposition is {}", mode.name()),
        mode_ok.or_else(|| pred.idempotent.as_ref().err().map(|w| format!("{w:?}"))),
    );
    (!report.failed()).then_some(out)
}

fn coordinatize(input: &Path, mode: Mode, output: Option<&Path>, g: Global) -> CliResult {
    let bytes = read(input)?;
    let mut report = Report::new("coordinatize", &bytes, !g.no_timestamp);
    let Some(d) = load_commrel(input, &mut report)? else {
        return finish(report, g);
    };
    if let Some(out) = reconstruct(&mut report, &d, mode) {
        if let Some(path) = output {
            let text = write_ring(&out.ring);
            write(path, &text)?;
            report.fact("output", digest(text.as_bytes()));
        }
    }
    finish(report, g)
}

fn roundtrip(input: &Path, mode: Mode, g: Global) -> CliResult {
    let bytes = read(input)?;
    let mut report = Report::new("roundtrip", &bytes, !g.no_timestamp);
    let Some(r) = load_ring(input, &mut report)? else {
        return finish(report, g);
    };
    let d = extract(&r);
    let Some(out) = reconstruct(&mut report, &d, mode) else {
        report.fact("isomorphic", false);
        return finish(report, g);
    };
    let start = Instant::now();
    match connecting_hom(&d, &out.ring, &r) {
        Err(e) => {
            report.fact("isomorphic", false);
            report.fail("isomorphism", "connecting homomorphism", e.to_string(), error_class(&e), start.elapsed());
        }
        Ok(c) => {
            report.fact("isomorphic", c.isomorphism);
            if c.isomorphism {
                let detail = format!("blockwise bijective, identity off the diagonal, independent of j = {}", c.independent_of_j);
                report.pass("isomorphism", detail, start.elapsed());
            } else {
                let witness = format!("bijective blocks {:?}", c.bijective);
                report.fail("isomorphism", "connecting homomorphism", witness, ExitClass::MathFailure, start.elapsed());
            }
        }
    }
    finish(report, g)
}

fn verify(input: &Path, size_bound: usize, g: Global) -> CliResult {
    let bytes = read(input)?;
    let mut report = Report::new("verify-lemmas", &bytes, !g.no_timestamp);
    let Some(r) = load_ring(input, &mut report)? else {
        return finish(report, g);
    };
    let opts = SuiteOptions {
        size_bound,
        ..SuiteOptions::default()
    };
    for c in verify_lemmas(&r, &opts) {
        report.check(c, ExitClass::MathFailure);
    }
    finish(report, g)
}

fn seed_corpus(dir: &Path, g: Global) -> CliResult {
    std::fs::create_dir_all(dir).map_err(|e| CliError::new(ExitClass::Io, format!("cannot create {}: {e}", dir.display())))?;
    let corpus = standard_corpus();
    let mut report = Report::new("seed-corpus", b"standard corpus", !g.no_timestamp);
    report.fact("files", corpus.len());
    for e in corpus {
        let text = write_ring(&e.ring);
        write(&dir.join(format!("{}.ring", e.name)), &text)?;
        report.fact(&format!("{}.ring", e.name), digest(text.as_bytes()));
    }
    finish(report, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions() {
        assert_eq!(parse_partition("1|2|3|45", 5).unwrap(), vec![vec![0], vec![1], vec![2], vec![3, 4]]);
        assert_eq!(parse_partition("1,2|3", 3).unwrap(), vec![vec![0, 1], vec![2]]);
        assert!(parse_partition("1|2", 3).is_err());
        assert!(parse_partition("1|1", 2).is_err());
        assert!(parse_partition("1|3", 2).is_err());
        assert!(parse_partition("1||2", 2).is_err());
    }

    #[test]
    fn commrel_header_detection() {
        assert!(is_commrel("# note\ncommrel rank=4 modulus=2\n"));
        assert!(!is_commrel("peirce rank=4 modulus=2\n"));
    }
}
