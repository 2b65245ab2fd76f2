//! The `adlv` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 enumeration guard,
//! 3 selfcheck mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;

use adlv_core::adlv::{emptiness_table, Decider, TableDoc, Verdict, VerdictDoc};
use adlv_core::conj::BranchPolicy;
use adlv_core::geom::{BoundaryDoc, ClosureDoc};
use adlv_core::oracle::{selfcheck, OracleReport, DEFAULT_SEED};
use adlv_core::pieces::{PieceSetDoc, PieceSolver};
use adlv_core::{AffineElt, AffineWeylGroup, CartanType, Coweight, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

pub const GUARD_ENV: &str = "ADLV_GUARD_OVERRIDE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliConfig {
    pub type_label: String,
    pub rank: usize,
    pub output_format: Format,
    pub guard_override: bool,
    pub seed: u64,
}

#[derive(Debug, Parser)]
#[command(name = "adlv", version, about = "Emptiness of affine Deligne-Lusztig varieties X_w(1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Cartan type, one of A B C D E F G.
    #[arg(long = "type", default_value = "A")]
    kind: String,
    /// Rank; inferred from the coweight when omitted.
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Lift enumeration guards (same as ADLV_GUARD_OVERRIDE=1).
    #[arg(long)]
    override_guards: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide emptiness of X_w(1) for w = x e^(-lambda) y^-1 or a product word.
    Decide {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// Dominant coweight in fundamental-coweight coordinates.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// Product word such as "s0 s1 t[1,-1]" or a "x=..; y=..; lambda=.." triple.
        #[arg(long, allow_hyphen_values = true)]
        elt: Option<String>,
    },
    /// K-stable pieces meeting K.I w I.
    Pieces {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        elt: String,
        #[arg(long, value_enum, default_value = "smallest")]
        policy: PolicyArg,
    },
    /// G-stable pieces in the boundary of the Steinberg fiber.
    Boundary {
        #[command(flatten)]
        common: Common,
    },
    /// Closure order on G-stable pieces.
    Closure {
        #[command(flatten)]
        common: Common,
    },
    /// Emptiness table over x in W^{I(lambda)} and y in W.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Run the brute-force oracle battery.
    Selfcheck {
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Smallest,
    Largest,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Parses and runs `args` (including the program name).
pub fn run<I, T>(args: I, guard_env: bool) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command, guard_env) {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Output {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Lib(e)) => Output {
            code: if matches!(e, Error::Guard(_)) { EXIT_GUARD } else { EXIT_USAGE },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Number of coordinates in the first `[...]` or `lambda=` value of `text`.
fn infer_rank(text: &str) -> Option<usize> {
    let body = if let Some(start) = text.find('[') {
        let end = text[start..].find(']')? + start;
        &text[start + 1..end]
    } else {
        let start = text.find("lambda=")?;
        text[start + 7..].split(';').next()?
    };
    Some(body.split(',').count())
}

fn config(common: &Common, hint: Option<&str>, default: Format, guard_env: bool) -> Run<CliConfig> {
    let rank = match common.rank {
        Some(r) => r,
        None => hint
            .and_then(infer_rank)
            .ok_or_else(|| Failure::Usage("--rank is required".into()))?,
    };
    Ok(CliConfig {
        type_label: common.kind.clone(),
        rank,
        output_format: common.format.unwrap_or(default),
        guard_override: guard_env || common.override_guards,
        seed: common.seed,
    })
}

fn group(cfg: &CliConfig) -> Run<AffineWeylGroup> {
    let kind: CartanType = cfg.type_label.parse()?;
    Ok(AffineWeylGroup::from_type(kind, cfg.rank)?.with_guard_override(cfg.guard_override))
}

fn allow(cfg: &CliConfig, formats: &[Format]) -> Run<()> {
    if formats.contains(&cfg.output_format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "format {:?} is not available here",
            cfg.output_format
        )))
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable document");
    s.push('\n');
    s
}

fn dispatch(command: Command, guard_env: bool) -> Run<(i32, String)> {
    match command {
        Command::Decide {
            common,
            x,
            y,
            lambda,
            elt,
        } => {
            let hint = match (&lambda, &elt) {
                (Some(l), _) => Some(format!("[{l}]")),
                (None, e) => e.clone(),
            };
            let cfg = config(&common, hint.as_deref(), Format::Json, guard_env)?;
            allow(&cfg, &[Format::Json, Format::Text])?;
            let g = group(&cfg)?;
            let a = decide_input(&g, x, y, lambda, elt)?;
            let v = Decider::new(&g).decide(&a)?;
            Ok((EXIT_OK, render_verdict(&g, &v, cfg.output_format)))
        }
        Command::Pieces { common, elt, policy } => {
            let cfg = config(&common, Some(&elt), Format::Json, guard_env)?;
            allow(&cfg, &[Format::Json, Format::Text])?;
            let g = group(&cfg)?;
            let a = g.parse_any(&elt)?;
            let policy = match policy {
                PolicyArg::Smallest => BranchPolicy::SmallestIndex,
                PolicyArg::Largest => BranchPolicy::LargestIndex,
            };
            let p = PieceSolver::with_policy(&g, policy).kpieces(&a)?;
            let doc = PieceSetDoc::new(&g, &p);
            let out = match cfg.output_format {
                Format::Text => doc.members.iter().map(|m| format!("{m}\n")).collect(),
                _ => json(&doc),
            };
            Ok((EXIT_OK, out))
        }
        Command::Boundary { common } => {
            let cfg = config(&common, None, Format::Json, guard_env)?;
            allow(&cfg, &[Format::Json, Format::Text])?;
            let g = group(&cfg)?;
            let doc = BoundaryDoc::new(g.finite())?;
            let out = match cfg.output_format {
                Format::Text => doc.labels.iter().map(|l| format!("({}, {})\n", l.j, l.w)).collect(),
                _ => json(&doc),
            };
            Ok((EXIT_OK, out))
        }
        Command::Closure { common } => {
            let cfg = config(&common, None, Format::Json, guard_env)?;
            allow(&cfg, &[Format::Json, Format::Dot, Format::Text])?;
            let g = group(&cfg)?;
            let doc = ClosureDoc::new(g.finite())?;
            let out = match cfg.output_format {
                Format::Dot => doc.to_dot(),
                Format::Text => {
                    let mut s = String::new();
                    for [i, j] in &doc.hasse {
                        let (a, b) = (&doc.labels[*i], &doc.labels[*j]);
                        let _ = writeln!(s, "({}, {}) > ({}, {})", a.j, a.w, b.j, b.w);
                    }
                    s
                }
                _ => json(&doc),
            };
            Ok((EXIT_OK, out))
        }
        Command::Table { common, lambda } => {
            let cfg = config(&common, Some(&format!("[{lambda}]")), Format::Csv, guard_env)?;
            allow(&cfg, &[Format::Csv, Format::Json, Format::Text])?;
            let g = group(&cfg)?;
            let lambda = Coweight::parse(&lambda)?;
            let t = emptiness_table(&g, &lambda)?;
            let out = match cfg.output_format {
                Format::Json => json(&TableDoc::new(&g, &t)),
                Format::Text => t.to_csv(&g).replace(',', "\t"),
                _ => t.to_csv(&g),
            };
            Ok((EXIT_OK, out))
        }
        Command::Selfcheck { deep, seed, format } => {
            let reports = selfcheck(deep, seed)?;
            let code = if reports.iter().all(OracleReport::passed) {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            };
            let out = match format.unwrap_or(Format::Text) {
                Format::Json => json(&reports),
                Format::Text => reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{} {} ({} instances, {} mismatches)\n",
                            if r.passed() { "ok  " } else { "FAIL" },
                            r.check_name,
                            r.instance_count,
                            r.mismatches.len()
                        )
                    })
                    .collect(),
                other => return Err(Failure::Usage(format!("format {other:?} is not available here"))),
            };
            Ok((code, out))
        }
    }
}

fn decide_input(
    g: &AffineWeylGroup,
    x: Option<String>,
    y: Option<String>,
    lambda: Option<String>,
    elt: Option<String>,
) -> Run<AffineElt> {
    match (elt, lambda) {
        (Some(e), None) if x.is_none() && y.is_none() => Ok(g.parse_any(&e)?),
        (None, Some(l)) => {
            let fin = g.finite();
            let x = fin.parse_word(x.as_deref().unwrap_or("e"))?;
            let y = fin.parse_word(y.as_deref().unwrap_or("e"))?;
            let lambda = Coweight::parse(&l)?;
            let j = g.root_system().i_lambda(&lambda)?;
            if !fin.is_min_coset_rep(&x, j) {
                return Err(Failure::Usage(format!("x = {} is not in W^{j}", fin.format(&x))));
            }
            Ok(g.compose(&x, &lambda, &y)?)
        }
        _ => Err(Failure::Usage("give either --elt or --lambda with --x/--y".into())),
    }
}

fn render_verdict(g: &AffineWeylGroup, v: &Verdict, format: Format) -> String {
    match format {
        Format::Text => {
            let mut s = format!("status: {}\nrule: {}\nelement: {}\n", v.status, v.rule, v.evidence.element);
            if let Some(nf) = &v.evidence.normal_form {
                let _ = writeln!(s, "normal form: x={}; lambda={}; y={}", nf.x, nf.lambda, nf.y);
            }
            if let Some(p) = &v.evidence.pieces {
                let _ = writeln!(s, "pieces: {}", p.join(" | "));
            }
            s
        }
        _ => json(&VerdictDoc::new(g, v)),
    }
}
