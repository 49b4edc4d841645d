//! Command-line front end.
//!
//! Exit codes: 0 on success with every verdict true, 1 when a verification
//! fails, 2 on usage or parameter errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{gauss_sum, weil_sum};
use crate::entangle::{BellFile, BellKind, BellReport};
use crate::finitefield::GaloisField;
use crate::galoisring::GaloisRing;
use crate::mub::{mub_field, MubFile, MubReport};
use crate::phase::{phase_statistics, pure_state, PhaseStatistics, PureStateParams};
use crate::states::CLASSIFY_TOL;

/// Environment variable overriding the classification tolerance.
pub const TOLERANCE_ENV: &str = "MUBKIT_TOLERANCE";

#[derive(Debug, Parser)]
#[command(name = "mubkit", version, about = "Mutually unbiased bases over Galois fields and rings")]
pub struct RunConfig {
    /// Classification tolerance; overrides MUBKIT_TOLERANCE.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Element table of GF(p^m): coefficients, discrete log, trace, inverse.
    FieldTable {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Element table of GR(4,m): Teichmüller position, 2-adic digits, Frobenius, trace.
    RingTable {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: TableOutput,
    },
    /// Gauss sums G(ψ_k, κ) for both the trivial and the standard additive character.
    GaussTable {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weil sums of random (or all) monic polynomials against the (d-1)√q bound.
    WeilCheck {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Every monic polynomial of the given degree instead of a sample.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate or verify MUB sets.
    #[command(subcommand)]
    Mub(MubCommand),
    /// Phase distribution, expectation and variance of a pure state.
    PhaseStats(PhaseArgs),
    /// Generate or verify Bell-state families.
    #[command(subcommand)]
    Bell(BellCommand),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

#[derive(Debug, Args)]
pub struct TableOutput {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum MubCommand {
    /// Write the q (or 2^m) bases of one construction to a JSON file.
    Gen {
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Galois-ring construction for m qubits.
        #[arg(long)]
        ring: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every pair of vectors in a MUB file, computational basis included.
    Verify { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Basis index a (canonical element index).
    #[arg(long, default_value_t = 0)]
    pub a: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Real phase slope: u_n = exp(i n β)/√q.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Field-valued slope β ∈ F_q (element index); replaces --beta.
    #[arg(long)]
    pub field_beta: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BellCommand {
    /// Write a full Bell family to a JSON file.
    Gen {
        #[arg(long, value_enum)]
        kind: BellKindArg,
        /// Local dimension for the Fourier family.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check entanglement and overlaps of every state in a Bell file.
    Verify { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BellKindArg {
    Mult,
    Field,
    Ring,
}

enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Parses `args` (program name first) and runs, reading the tolerance
/// override from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_env(args, std::env::var(TOLERANCE_ENV).ok(), out, err)
}

pub fn run_with_env<I, T>(args: I, tolerance_env: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let tolerance = match resolve_tolerance(config.tolerance, tolerance_env) {
        Ok(t) => t,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    match dispatch(config.command, tolerance, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn resolve_tolerance(flag: Option<f64>, env: Option<String>) -> std::result::Result<f64, Failure> {
    let t = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(s)) => {
            s.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("{TOLERANCE_ENV}={s} is not a number")))?
        }
        (None, None) => CLASSIFY_TOL,
    };
    if !(t.is_finite() && t > 0.0) {
        return Err(Failure::Usage(format!("tolerance must be positive, got {t}")));
    }
    Ok(t)
}

fn dispatch(command: Command, tol: f64, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::FieldTable { field, output } => field_table(&field, &output, out),
        Command::RingTable { m, output } => ring_table(m, &output, out),
        Command::GaussTable { field, out: path } => gauss_table(&field, path.as_deref(), out),
        Command::WeilCheck { field, degree, samples, seed, exhaustive, out: path } => {
            weil_check(&field, degree, samples, seed, exhaustive, path.as_deref(), out)
        }
        Command::Mub(MubCommand::Gen { p, m, k, ring, out: path }) => mub_gen(p, m, k, ring, &path, out),
        Command::Mub(MubCommand::Verify { file }) => mub_verify(&file, tol, out, err),
        Command::PhaseStats(args) => phase_stats(&args, out),
        Command::Bell(BellCommand::Gen { kind, q, p, m, out: path }) => bell_gen(kind, q, p, m, &path, out),
        Command::Bell(BellCommand::Verify { file }) => bell_verify(&file, tol, out, err),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Shortest round-trip decimal, with `-0` printed as `0`.
fn num(x: f64) -> String {
    format!("{}", x + 0.0)
}

fn digits(coeffs: &[u32]) -> String {
    coeffs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct FieldRow {
    index: u32,
    coeffs: Vec<u32>,
    dlog: Option<u32>,
    trace: u32,
    inverse: Option<u32>,
}

fn field_table(args: &FieldArgs, output: &TableOutput, out: &mut dyn Write) -> Outcome {
    let f = GaloisField::new(args.p, args.m)?;
    let rows = f
        .elements()
        .into_iter()
        .map(|x| {
            Ok(FieldRow {
                index: x.index(),
                coeffs: f.coeffs(x)?,
                dlog: f.dlog(x).ok(),
                trace: f.trace(x)?,
                inverse: f.inv(x).ok().map(|y| y.index()),
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let text = match output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                field: crate::finitefield::FieldDescriptor,
                rows: &'a [FieldRow],
            }
            to_json(&Table { field: f.descriptor(), rows: &rows })
        }
        Format::Csv => {
            let mut s = String::from("index,coeffs,dlog,trace,inverse\n");
            for r in &rows {
                let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
                writeln!(s, "{},{},{},{},{}", r.index, digits(&r.coeffs), opt(r.dlog), r.trace, opt(r.inverse))
                    .unwrap();
            }
            s
        }
    };
    emit(&text, output.out.as_deref(), out)?;
    Ok(true)
}

#[derive(Serialize)]
struct RingRow {
    index: u32,
    coeffs: Vec<u32>,
    teichmuller: Option<usize>,
    a: usize,
    b: usize,
    frobenius: u32,
    trace: u32,
}

fn ring_table(m: u32, output: &TableOutput, out: &mut dyn Write) -> Outcome {
    let r = GaloisRing::new(m)?;
    let rows = r
        .elements()
        .into_iter()
        .map(|y| {
            let (a, b) = r.decompose(y)?;
            let pos = |x| r.teichmuller_position(x).map(|p| p.expect("decomposition lies in T"));
            Ok(RingRow {
                index: y.index(),
                coeffs: r.coeffs(y)?,
                teichmuller: r.teichmuller_position(y)?,
                a: pos(a)?,
                b: pos(b)?,
                frobenius: r.frobenius(y)?.index(),
                trace: r.trace(y)?,
            })
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let text = match output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                ring: crate::galoisring::RingDescriptor,
                rows: &'a [RingRow],
            }
            to_json(&Table { ring: r.descriptor(), rows: &rows })
        }
        Format::Csv => {
            let mut s = String::from("index,coeffs,teichmuller,a,b,frobenius,trace\n");
            for row in &rows {
                let t = row.teichmuller.map(|x| x.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    row.index,
                    digits(&row.coeffs),
                    t,
                    row.a,
                    row.b,
                    row.frobenius,
                    row.trace
                )
                .unwrap();
            }
            s
        }
    };
    emit(&text, output.out.as_deref(), out)?;
    Ok(true)
}

/// The Gauss-sum table: the trivial additive character block, then the
/// standard one. `ok` is the exact identity check in `Z[ω]`.
pub fn gauss_table_csv(field: &GaloisField) -> (String, bool) {
    let q = field.order();
    let mut s = String::from("q,k,re,im,abs,bound,ok,additive\n");
    let mut all_ok = true;
    for trivial in [true, false] {
        for k in 0..q - 1 {
            let g = gauss_sum(field, k, trivial);
            let ok = match (k == 0, trivial) {
                (true, true) => g.exact.as_integer() == Some(i64::from(q) - 1),
                (true, false) => g.exact.as_integer() == Some(-1),
                (false, true) => g.exact.is_zero(),
                (false, false) => g.exact.norm_sqr().as_integer() == Some(i64::from(q)),
            };
            all_ok &= ok;
            let additive = if trivial { "trivial" } else { "standard" };
            writeln!(
                s,
                "{q},{k},{},{},{},{},{ok},{additive}",
                num(g.value.re),
                num(g.value.im),
                num(g.magnitude),
                num(g.bound.unwrap())
            )
            .unwrap();
        }
    }
    (s, all_ok)
}

fn gauss_table(args: &FieldArgs, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let f = GaloisField::new(args.p, args.m)?;
    let (text, ok) = gauss_table_csv(&f);
    emit(&text, path, out)?;
    Ok(ok)
}

fn weil_check(
    args: &FieldArgs,
    degree: usize,
    samples: usize,
    seed: u64,
    exhaustive: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let f = GaloisField::new(args.p, args.m)?;
    let q = f.order();
    if degree == 0 || degree.is_multiple_of(f.characteristic() as usize) {
        return Err(Failure::Usage(format!(
            "the Weil bound needs a degree d >= 1 not divisible by p = {}, got {degree}",
            f.characteristic()
        )));
    }
    let lower: Vec<Vec<u32>> = if exhaustive {
        let count = u64::from(q)
            .checked_pow(degree as u32)
            .filter(|&c| c <= 1 << 20)
            .ok_or_else(|| Failure::Usage(format!("{q}^{degree} polynomials is too many for --exhaustive")))?;
        (0..count)
            .map(|mut i| {
                (0..degree)
                    .map(|_| {
                        let c = (i % u64::from(q)) as u32;
                        i /= u64::from(q);
                        c
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| (0..degree).map(|_| rng.gen_range(0..q)).collect()).collect()
    };
    let mut s = String::from("q,degree,coeffs,re,im,abs,bound,ok\n");
    let mut all_ok = true;
    for low in lower {
        let mut coeffs = low;
        coeffs.push(1);
        let poly = coeffs.iter().map(|&c| f.element(c)).collect::<crate::Result<Vec<_>>>()?;
        let w = weil_sum(&f, &poly)?;
        all_ok &= w.bound_satisfied;
        writeln!(
            s,
            "{q},{degree},{},{},{},{},{},{}",
            digits(&coeffs),
            num(w.value.re),
            num(w.value.im),
            num(w.magnitude),
            w.bound.map(num).unwrap_or_default(),
            w.bound_satisfied
        )
        .unwrap();
    }
    emit(&s, path, out)?;
    Ok(all_ok)
}

fn mub_gen(p: Option<u32>, m: u32, k: u32, ring: bool, path: &Path, out: &mut dyn Write) -> Outcome {
    let file = if ring {
        if let Some(p) = p.filter(|&p| p != 2) {
            return Err(Failure::Usage(format!("--ring builds GR(4,m) for qubits; --p must be 2, got {p}")));
        }
        MubFile::ring(&GaloisRing::new(m)?, k)?
    } else {
        let p = p.ok_or_else(|| Failure::Usage("--p is required without --ring".into()))?;
        MubFile::field(&GaloisField::new(p, m)?, k)?
    };
    fs::write(path, to_json(&file)).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    writeln!(out, "wrote {} bases of dimension {} to {}", file.bases.len(), file.bases[0].dim(), path.display())?;
    Ok(true)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Human-readable block matrix: `I` for a clean diagonal block, `U` for a
/// clean unbiased block, `!` for a block with offending pairs.
pub fn mub_table(report: &MubReport) -> String {
    let n = report.base_count;
    let mut s = String::new();
    writeln!(s, "{n} bases of dimension {}", report.dim).unwrap();
    for (i, label) in report.labels.iter().enumerate() {
        let cells: String = (0..n)
            .map(|j| match report.pair(i, j) {
                Some(p) if !p.ok => '!',
                _ if i == j => 'I',
                _ => 'U',
            })
            .collect();
        writeln!(s, "{i:>3} {cells}  {label}").unwrap();
    }
    writeln!(s, "max intra-basis deviation {:e}", report.max_intra_deviation).unwrap();
    writeln!(s, "max inter-basis deviation {:e}", report.max_inter_deviation).unwrap();
    for o in report.offending.iter().take(10) {
        writeln!(
            s,
            "offending: basis {} vector {} vs basis {} vector {}: |overlap| {} is {:?}, expected {:?}",
            o.left_basis, o.left_vector, o.right_basis, o.right_vector, o.magnitude, o.class, o.expected
        )
        .unwrap();
    }
    if report.offending.len() > 10 {
        writeln!(s, "... {} offending pairs in total", report.offending.len()).unwrap();
    }
    let verdict = if report.verdict { "complete MUB set" } else { "NOT a complete MUB set" };
    writeln!(s, "verdict: {verdict}").unwrap();
    s
}

fn mub_verify(path: &Path, tol: f64, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let file: MubFile = read_json(path)?;
    let report = file.verify(tol)?;
    out.write_all(to_json(&report).as_bytes())?;
    err.write_all(mub_table(&report).as_bytes())?;
    Ok(report.verdict)
}

#[derive(Serialize)]
struct PhaseOutput {
    field: crate::finitefield::FieldDescriptor,
    a: u32,
    k: u32,
    beta: BetaRecord,
    eigenvalues: Vec<f64>,
    statistics: PhaseStatistics,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum BetaRecord {
    Real(f64),
    Field(u32),
}

fn phase_stats(args: &PhaseArgs, out: &mut dyn Write) -> Outcome {
    let f = GaloisField::new(args.field.p, args.field.m)?;
    let a = f.element(args.a)?;
    let basis = mub_field(&f, a, args.k)?;
    let (params, beta) = match args.field_beta {
        Some(idx) => (PureStateParams::FieldBeta(f.element(idx)?), BetaRecord::Field(idx)),
        None => (PureStateParams::RealBeta(args.beta), BetaRecord::Real(args.beta)),
    };
    let state = pure_state(&f, params)?;
    let eigenvalues = basis.eigenvalues().expect("field bases carry eigenvalues").to_vec();
    let statistics = phase_statistics(&state, &basis, &eigenvalues)?;
    let record =
        PhaseOutput { field: f.descriptor(), a: args.a, k: args.k % (f.order() - 1), beta, eigenvalues, statistics };
    emit(&to_json(&record), args.out.as_deref(), out)?;
    Ok(true)
}

fn bell_gen(
    kind: BellKindArg,
    q: Option<u32>,
    p: Option<u32>,
    m: Option<u32>,
    path: &Path,
    out: &mut dyn Write,
) -> Outcome {
    let need =
        |v: Option<u32>, name: &str| v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this kind")));
    let file = match kind {
        BellKindArg::Mult => {
            let q = match (q, p) {
                (Some(q), _) => q,
                (None, Some(p)) => {
                    p.checked_pow(m.unwrap_or(1)).ok_or_else(|| Failure::Usage("local dimension overflows".into()))?
                }
                (None, None) => return Err(Failure::Usage("--q (or --p/--m) is required for --kind mult".into())),
            };
            if q > 64 {
                return Err(Failure::Usage(format!("local dimension {q} is too large for a full family (max 64)")));
            }
            BellFile::mult(q)?
        }
        BellKindArg::Field => {
            let f = GaloisField::new(need(p, "p")?, m.unwrap_or(1))?;
            if f.order() > 32 {
                return Err(Failure::Usage(format!(
                    "field order {} is too large for a full family (max 32)",
                    f.order()
                )));
            }
            BellFile::field(&f)?
        }
        BellKindArg::Ring => {
            if let Some(p) = p.filter(|&p| p != 2) {
                return Err(Failure::Usage(format!("ring Bell states are for qubits; --p must be 2, got {p}")));
            }
            let m = need(m, "m")?;
            if m > 4 {
                return Err(Failure::Usage(format!("m = {m} is too large for a full family (max 4)")));
            }
            BellFile::ring(&GaloisRing::new(m)?)?
        }
    };
    fs::write(path, to_json(&file)).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    let count: usize = file.family.groups.iter().map(|g| g.bases.iter().map(|b| b.states.len()).sum::<usize>()).sum();
    writeln!(out, "wrote {count} states of local dimension {} to {}", file.family.local_dim, path.display())?;
    Ok(true)
}

pub fn bell_summary(report: &BellReport) -> String {
    let kind = match report.kind {
        BellKind::Mult => "fourier",
        BellKind::Field => "field",
        BellKind::Ring => "ring",
    };
    let mut s = String::new();
    writeln!(s, "{} {kind} Bell states of local dimension {}", report.state_count, report.local_dim).unwrap();
    writeln!(s, "max |trace_2 rho - I/q| {:e}", report.max_entanglement_deviation).unwrap();
    writeln!(s, "max intra-basis deviation {:e}", report.max_intra_deviation).unwrap();
    writeln!(s, "max unbiased deviation {:e}", report.max_unbiased_deviation).unwrap();
    writeln!(s, "max cross-group overlap {:e}", report.max_cross_group_overlap).unwrap();
    for f in report.entanglement_failures.iter().take(10) {
        writeln!(
            s,
            "not maximally entangled: h-group {} basis {} state {} (deviation {:e})",
            f.state.group, f.state.basis, f.state.state, f.deviation
        )
        .unwrap();
    }
    for o in report.offending.iter().take(10) {
        writeln!(
            s,
            "offending: {:?} vs {:?}: |overlap| {} is {:?}, expected {:?}",
            o.left, o.right, o.magnitude, o.class, o.expected
        )
        .unwrap();
    }
    let verdict = if report.verdict { "maximally entangled, structure as expected" } else { "FAILED" };
    writeln!(s, "verdict: {verdict}").unwrap();
    s
}

fn bell_verify(path: &Path, tol: f64, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let file: BellFile = read_json(path)?;
    let report = file.verify(tol);
    out.write_all(to_json(&report).as_bytes())?;
    err.write_all(bell_summary(&report).as_bytes())?;
    Ok(report.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_env(std::iter::once("mubkit").chain(args.iter().copied()), None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gauss_table_first_row() {
        let (code, out, _) = run_capture(&["gauss-table", "--p", "3", "--m", "2"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("q,k,re,im,abs,bound,ok,additive"));
        assert_eq!(lines.next(), Some("9,0,8,0,8,8,true,trivial"));
        assert_eq!(out.lines().count(), 1 + 2 * 8);
        assert!(!out.contains('\r'));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["bogus"]).0, 2);
        assert_eq!(run_capture(&["gauss-table", "--p", "3", "--nope"]).0, 2);
        let (code, _, err) = run_capture(&["mub", "gen", "--p", "2", "--m", "2", "--out", "/dev/null"]);
        assert_eq!(code, 2);
        assert!(err.contains("gcd(2, q) = 2"), "{err}");
        assert_eq!(run_capture(&["field-table", "--p", "4"]).0, 2);
        assert_eq!(run_capture(&["weil-check", "--p", "3", "--degree", "3"]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("gauss-table"));
    }

    #[test]
    fn tolerance_resolution() {
        assert_eq!(resolve_tolerance(None, None).ok(), Some(CLASSIFY_TOL));
        assert_eq!(resolve_tolerance(None, Some("1e-6".into())).ok(), Some(1e-6));
        assert_eq!(resolve_tolerance(Some(1e-3), Some("1e-6".into())).ok(), Some(1e-3));
        assert!(resolve_tolerance(None, Some("abc".into())).is_err());
        assert!(resolve_tolerance(Some(-1.0), None).is_err());
    }

    #[test]
    fn tables() {
        let (code, out, _) = run_capture(&["field-table", "--p", "3", "--m", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("0,0 0,,0,"));
        assert_eq!(out.lines().nth(2), Some("1,1 0,0,2,1"));
        let (code, out, _) = run_capture(&["ring-table", "--m", "2", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 16);
    }

    #[test]
    fn weil_check_is_seeded() {
        let a = run_capture(&["weil-check", "--p", "5", "--m", "2", "--degree", "3", "--samples", "20", "--seed", "7"]);
        let b = run_capture(&["weil-check", "--p", "5", "--m", "2", "--degree", "3", "--samples", "20", "--seed", "7"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert_eq!(a.1.lines().count(), 21);
    }
}
