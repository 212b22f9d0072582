//! Command-line interface: one subcommand per library operation, JSON in,
//! JSON out.
//!
//! Conventions shared by every subcommand:
//!
//! * Document input comes from `--json <STRING>`, `--input <PATH>`
//!   (`-` means stdin), or stdin by default.
//! * The result is one compact JSON document plus a trailing newline, on
//!   stdout or in the `--output` file.
//! * Failures print `{"error": CODE, "detail": MESSAGE}` to stdout and
//!   exit nonzero: code `input` (malformed JSON, unreadable files, bad
//!   rationals) exits 2, everything else (`structural`, `precondition`,
//!   `cap_exceeded`, `overflow`) exits 1. Unknown flags and subcommands
//!   are reported by the argument parser itself, also with exit 2.
//! * Enumeration caps resolve in order: `--cap` flag, `PARCALC_CAP`
//!   environment variable, built-in default.

use crate::covers::{
    boundary_image, enumerate_surface_homs, explicit_nondensity_rep, gamma_index_report,
    kodaira_parshin_admissible, nielsen_classify, riemann_hurwitz_genus, vs_test, CoversError,
    IntMatrixRep, PermGroup,
};
use crate::hnengine::{
    clifford_h0_bound, enumerate_candidate_polygons, hn_constraints_check, rank_chain_certify,
    rr_lower_bound, semistable_forced, EnumerateOptions, HNPolygon, HnError,
    DEFAULT_ENUMERATION_CAP,
};
use crate::parabolic::{
    dual_shell, induced_quotient_structure, induced_sub_structure, serre_twist, tensor_shell,
    weight_shift, ExplicitParabolicBundle, ParabolicError, ParabolicShell, SubbundleDatum,
};
use crate::rational::{parse_rational, rational_to_string, ParseRationalError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "parcalc",
    version,
    about = "Exact calculator for weighted bundle invariants, slope-polygon constraints, and finite-cover bookkeeping"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Inline JSON input document.
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
    /// Read the JSON input document from this file ("-" = stdin).
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct OutArgs {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupName {
    /// Symmetric group on 3 points.
    S3,
    /// Symmetric group on 4 points.
    S4,
    /// Alternating group on 5 points.
    A5,
    /// The one-element group.
    Trivial,
}

impl GroupName {
    fn build(self) -> Result<PermGroup, CliError> {
        Ok(match self {
            GroupName::S3 => PermGroup::symmetric(3)?,
            GroupName::S4 => PermGroup::symmetric(4)?,
            GroupName::A5 => PermGroup::alternating_odd(5)?,
            GroupName::Trivial => PermGroup::trivial(),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Weighted degree of a shell.
    Pardeg {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tensor product of two shells on the same curve: input {"a":..., "b":...}.
    Tensor {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dual shell.
    Dual {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Downward weight shift by a non-negative rational `t`.
    Shift {
        /// Shift amount, e.g. "3/4".
        #[arg(long)]
        t: String,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dualize and twist by the canonical weight of the marked curve.
    SerreTwist {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weighted structure induced on a subbundle: input {"bundle":..., "sub":...}.
    InduceSub {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Weighted structure induced on the quotient: input {"bundle":..., "sub":...}.
    InduceQuot {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Section-count upper bound for a slope polygon with slopes in [0, 2g].
    Clifford {
        /// Genus of the underlying curve.
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Euler-characteristic lower bound deg + (1 - g) rk.
    Rr {
        /// Degree, e.g. "7/2".
        #[arg(long)]
        deg: String,
        #[arg(long)]
        rk: u32,
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Step-by-step certificate for the rank bound rk_v >= g*c - delta.
    RankChain {
        /// Slope of the ambient bundle, e.g. "2" or "5/2".
        #[arg(long)]
        mu_v: String,
        #[arg(long)]
        rk_v: u32,
        /// Slope of the subsheaf (ignored when --rk-u is 0).
        #[arg(long, default_value = "0")]
        mu_u: String,
        #[arg(long, default_value_t = 0)]
        rk_u: u32,
        /// Slack allowed in the section-count comparison.
        #[arg(long, default_value_t = 0)]
        delta: u32,
        #[arg(long)]
        g: u32,
        /// Use the strict slope hypothesis and conclude a strict bound.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Gap and rank-product constraint report for a slope polygon.
    HnCheck {
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Enumerate constraint-passing polygons over a rational slope grid.
    HnEnumerate {
        /// Total rank of the polygons.
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        g: u32,
        /// Largest slope denominator in the grid.
        #[arg(long)]
        denom_bound: u32,
        /// Absolute bound for grid slopes, e.g. "2".
        #[arg(long)]
        slope_bound: String,
        /// Search-space cap (overrides PARCALC_CAP and the default).
        #[arg(long)]
        cap: Option<u64>,
        /// Keep only representatives with degree >= this.
        #[arg(long)]
        min_degree: Option<String>,
        /// Keep only representatives with degree <= this.
        #[arg(long)]
        max_degree: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Whether rank^2 < 4(g + 1) rules out any destabilizing profile.
    SemistableForced {
        #[arg(long)]
        rank: u64,
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Count homomorphisms, surjections, and conjugation classes for a
    /// once-punctured genus-g surface group.
    CoversEnumerate {
        #[arg(long, value_enum)]
        group: GroupName,
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        cap: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List conjugation classes with boundary monodromy and admissibility.
    CoversClassify {
        #[arg(long, value_enum)]
        group: GroupName,
        #[arg(long)]
        genus: u32,
        /// Classify all homomorphisms, not only the surjective ones.
        #[arg(long)]
        include_non_surjective: bool,
        #[arg(long)]
        cap: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Genus of a branched cover from base genus, group order, and
    /// boundary monodromy order.
    CoversRh {
        #[arg(long)]
        g_base: u32,
        #[arg(long)]
        group_order: u64,
        #[arg(long)]
        boundary_order: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Search a matrix representation for words with non-commuting s-th
    /// powers; builds the explicit two-generator family from --g/--n/--rank
    /// or reads a representation document.
    RepVsTest {
        /// Power to raise both word images to.
        #[arg(long)]
        s: u64,
        /// Longest word length to try.
        #[arg(long, default_value_t = 2)]
        word_bound: usize,
        /// Genus for the built-in family (with --n and --rank).
        #[arg(long, requires = "n", requires = "rank")]
        g: Option<u32>,
        /// Punctures for the built-in family.
        #[arg(long, requires = "g")]
        n: Option<u32>,
        /// Matrix rank for the built-in family.
        #[arg(long, requires = "g")]
        rank: Option<u32>,
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

/// A CLI failure: a machine-readable code plus a human-readable detail.
#[derive(Debug)]
pub struct CliError {
    code: &'static str,
    detail: String,
}

impl CliError {
    fn input(detail: impl Into<String>) -> CliError {
        CliError { code: "input", detail: detail.into() }
    }

    pub fn exit_code(&self) -> i32 {
        if self.code == "input" {
            2
        } else {
            1
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::input(e.to_string())
    }
}

impl From<ParseRationalError> for CliError {
    fn from(e: ParseRationalError) -> CliError {
        CliError::input(e.to_string())
    }
}

impl From<ParabolicError> for CliError {
    fn from(e: ParabolicError) -> CliError {
        let code = match e {
            ParabolicError::RankOverflow | ParabolicError::DegreeOverflow => "overflow",
            ParabolicError::CurveMismatch | ParabolicError::NegativeShift { .. } => "precondition",
            _ => "structural",
        };
        CliError { code, detail: e.to_string() }
    }
}

impl From<HnError> for CliError {
    fn from(e: HnError) -> CliError {
        let code = match e {
            HnError::InvalidPolygon { .. } => "structural",
            HnError::SlopeOutOfRange { .. } | HnError::BadBounds { .. } => "precondition",
            HnError::CapExceeded { .. } => "cap_exceeded",
        };
        CliError { code, detail: e.to_string() }
    }
}

impl From<CoversError> for CliError {
    fn from(e: CoversError) -> CliError {
        let code = match e {
            CoversError::ClosureCapExceeded { .. } | CoversError::EnumerationCapExceeded { .. } => {
                "cap_exceeded"
            }
            CoversError::RelatorNotSatisfied { .. }
            | CoversError::BadRamification { .. }
            | CoversError::NonIntegralGenus { .. }
            | CoversError::Unsupported { .. } => "precondition",
            _ => "structural",
        };
        CliError { code, detail: e.to_string() }
    }
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    error: &'a str,
    detail: &'a str,
}

/// Parses the process arguments, runs the selected subcommand, and
/// returns the exit code; errors are printed as JSON envelopes on stdout.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let envelope = ErrorEnvelope { error: e.code, detail: &e.detail };
            let text = serde_json::to_string(&envelope)
                .unwrap_or_else(|_| r#"{"error":"input","detail":"unprintable error"}"#.to_string());
            println!("{text}");
            e.exit_code()
        }
    }
}

fn read_document(io: &IoArgs) -> Result<String, CliError> {
    if let Some(text) = &io.json {
        return Ok(text.clone());
    }
    match io.input.as_deref() {
        Some("-") | None => {
            let mut buffer = String::new();
            std::io::stdin().read_to_string(&mut buffer)?;
            Ok(buffer)
        }
        Some(path) => Ok(std::fs::read_to_string(path)?),
    }
}

fn write_result<T: Serialize>(out: &OutArgs, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Two-stage document parse: JSON syntax errors are `input` failures
/// (exit 2), while a well-formed document that does not describe a valid
/// object — wrong shape or violated invariants — is `structural` (exit 1).
fn parse_doc<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
    serde_json::from_value(value)
        .map_err(|e| CliError { code: "structural", detail: e.to_string() })
}

fn effective_cap(flag: Option<u64>, default: u64) -> u64 {
    flag.or_else(|| std::env::var("PARCALC_CAP").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(default)
}

#[derive(Deserialize)]
struct ShellPair {
    a: ParabolicShell,
    b: ParabolicShell,
}

#[derive(Deserialize)]
struct InduceInput {
    bundle: ExplicitParabolicBundle,
    sub: SubbundleDatum,
}

#[derive(Serialize)]
struct ParDegOut {
    par_deg: String,
}

#[derive(Serialize)]
struct CliffordOut {
    h0_bound: String,
}

#[derive(Serialize)]
struct RrOut {
    rr_lower_bound: String,
}

#[derive(Serialize)]
struct EnumerateOut {
    count: usize,
    polygons: Vec<HNPolygon>,
}

#[derive(Serialize)]
struct ForcedOut {
    forced: bool,
}

#[derive(Serialize)]
struct ClassOut {
    rep: BTreeMap<String, String>,
    size: u64,
    boundary: String,
    admissible: bool,
}

#[derive(Serialize)]
struct ClassifyOut {
    class_count: usize,
    classes: Vec<ClassOut>,
}

#[derive(Serialize)]
struct GenusOut {
    genus: i64,
}

#[derive(Serialize)]
struct WitnessOut {
    witness: Option<[String; 2]>,
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Pardeg { io, out } => {
            let shell: ParabolicShell = parse_doc(&read_document(&io)?)?;
            write_result(&out, &ParDegOut { par_deg: rational_to_string(&shell.par_deg()) })
        }
        Command::Tensor { io, out } => {
            let pair: ShellPair = parse_doc(&read_document(&io)?)?;
            write_result(&out, &tensor_shell(&pair.a, &pair.b)?)
        }
        Command::Dual { io, out } => {
            let shell: ParabolicShell = parse_doc(&read_document(&io)?)?;
            write_result(&out, &dual_shell(&shell)?)
        }
        Command::Shift { t, io, out } => {
            let shell: ParabolicShell = parse_doc(&read_document(&io)?)?;
            let amount = parse_rational(&t)?;
            write_result(&out, &weight_shift(&shell, &amount)?)
        }
        Command::SerreTwist { io, out } => {
            let shell: ParabolicShell = parse_doc(&read_document(&io)?)?;
            write_result(&out, &serre_twist(&shell)?)
        }
        Command::InduceSub { io, out } => {
            let doc: InduceInput = parse_doc(&read_document(&io)?)?;
            write_result(&out, &induced_sub_structure(&doc.bundle, &doc.sub)?)
        }
        Command::InduceQuot { io, out } => {
            let doc: InduceInput = parse_doc(&read_document(&io)?)?;
            write_result(&out, &induced_quotient_structure(&doc.bundle, &doc.sub)?)
        }
        Command::Clifford { g, io, out } => {
            let polygon: HNPolygon = parse_doc(&read_document(&io)?)?;
            let bound = clifford_h0_bound(&polygon, g)?;
            write_result(&out, &CliffordOut { h0_bound: rational_to_string(&bound) })
        }
        Command::Rr { deg, rk, g, out } => {
            let deg = parse_rational(&deg)?;
            let bound = rr_lower_bound(&deg, rk, g);
            write_result(&out, &RrOut { rr_lower_bound: rational_to_string(&bound) })
        }
        Command::RankChain { mu_v, rk_v, mu_u, rk_u, delta, g, strict, out } => {
            let mu_v = parse_rational(&mu_v)?;
            let mu_u = parse_rational(&mu_u)?;
            write_result(&out, &rank_chain_certify(&mu_v, rk_v, &mu_u, rk_u, delta, g, strict))
        }
        Command::HnCheck { g, io, out } => {
            let polygon: HNPolygon = parse_doc(&read_document(&io)?)?;
            write_result(&out, &hn_constraints_check(&polygon, g))
        }
        Command::HnEnumerate {
            rank,
            g,
            denom_bound,
            slope_bound,
            cap,
            min_degree,
            max_degree,
            out,
        } => {
            let slope_bound = parse_rational(&slope_bound)?;
            let degree_window = match (min_degree, max_degree) {
                (None, None) => None,
                (lo, hi) => {
                    let lo = match lo {
                        Some(text) => parse_rational(&text)?,
                        None => -slope_bound.clone() * crate::rational::int(i64::from(rank)),
                    };
                    let hi = match hi {
                        Some(text) => parse_rational(&text)?,
                        None => slope_bound.clone() * crate::rational::int(i64::from(rank)),
                    };
                    Some((lo, hi))
                }
            };
            let opts = EnumerateOptions {
                cap: effective_cap(cap, DEFAULT_ENUMERATION_CAP),
                degree_window,
            };
            let polygons = enumerate_candidate_polygons(rank, g, denom_bound, &slope_bound, &opts)?;
            write_result(&out, &EnumerateOut { count: polygons.len(), polygons })
        }
        Command::SemistableForced { rank, g, out } => {
            write_result(&out, &ForcedOut { forced: semistable_forced(rank, g) })
        }
        Command::CoversEnumerate { group, genus, cap, out } => {
            let group = group.build()?;
            let cap = effective_cap(cap, crate::covers::surface::DEFAULT_HOM_CAP);
            write_result(&out, &gamma_index_report(genus, &group, cap)?)
        }
        Command::CoversClassify { group, genus, include_non_surjective, cap, out } => {
            let group = group.build()?;
            let cap = effective_cap(cap, crate::covers::surface::DEFAULT_HOM_CAP);
            let homs = enumerate_surface_homs(genus, &group, cap)?;
            let classes = nielsen_classify(&group, &homs, !include_non_surjective)?;
            let mut rendered = Vec::with_capacity(classes.len());
            for class in &classes {
                let labels = class.representative.presentation().labels();
                let rep: BTreeMap<String, String> = labels
                    .iter()
                    .zip(class.representative.images())
                    .map(|(label, perm)| (label.clone(), perm.to_string()))
                    .collect();
                let boundary = boundary_image(&class.representative)?;
                rendered.push(ClassOut {
                    rep,
                    size: class.size,
                    boundary: boundary.to_string(),
                    admissible: kodaira_parshin_admissible(&group, &class.representative)?,
                });
            }
            write_result(&out, &ClassifyOut { class_count: rendered.len(), classes: rendered })
        }
        Command::CoversRh { g_base, group_order, boundary_order, out } => {
            let genus = riemann_hurwitz_genus(g_base, group_order, boundary_order)?;
            write_result(&out, &GenusOut { genus })
        }
        Command::RepVsTest { s, word_bound, g, n, rank, io, out } => {
            let rep: IntMatrixRep = match (g, n, rank) {
                (Some(g), Some(n), Some(rank)) => explicit_nondensity_rep(g, n, rank)?,
                (None, None, None) => parse_doc(&read_document(&io)?)?,
                _ => {
                    return Err(CliError::input(
                        "--g, --n, and --rank must be given together (or none, to read a document)",
                    ))
                }
            };
            let witness = vs_test(&rep, s, word_bound)?;
            write_result(&out, &WitnessOut { witness: witness.map(|w| [w.x, w.y]) })
        }
    }
}
