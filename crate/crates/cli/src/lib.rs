//! Argument handling for the `chow-obstruct` binary. [`run`] is pure apart
//! from reading custom-assumption files, so tests drive it directly.

use std::fmt::Write as _;

use chow_obstruct::abelian::AbelianPresentation;
use chow_obstruct::chow::{AmbientSpace, ChowClass};
use chow_obstruct::complement::{closed_form_check, ComplementModel, PushforwardAssumption};
use chow_obstruct::error::Error;
use chow_obstruct::json;
use chow_obstruct::linalg::{smith_normal_form, IntegerMatrix};
use chow_obstruct::obstruction::{classify_all_with_threads, decide, ChernPair};
use chow_obstruct::presets::preset;
use chow_obstruct::steenrod::{sq2, Mod2ChowClass};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub const THREADS_ENV: &str = "CHOW_OBSTRUCT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "chow-obstruct", version, about = "Chow groups of hypersurface complements and the Sq^2 obstruction")]
struct Cli {
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smith normal form of an integer matrix.
    Snf {
        /// JSON matrix, e.g. "[[4,3],[0,4]]".
        #[arg(long)]
        matrix: String,
    },
    /// Structure of Z^n modulo the row span of a relation matrix.
    Group {
        #[arg(long)]
        relations: String,
        /// Comma-separated generator names.
        #[arg(long)]
        names: Option<String>,
    },
    /// Product of two Chow classes.
    Cup {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Degree-j group of the complement, optionally with the image of a class.
    Complement {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        j: u32,
        /// Class on the ambient space to restrict.
        #[arg(long)]
        class: Option<String>,
        /// Work in the group tensored with Z/2.
        #[arg(long)]
        mod2: bool,
    },
    /// Sq^2 of a class reduced mod 2.
    Sq2 {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        class: String,
    },
    /// Verdict for one pair of Chern class lifts.
    Obstruct {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
    },
    /// Verdicts for every pair in the degree 1 and 2 complement groups.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        /// Table format in text mode.
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        format: TableFormat,
    },
    /// Compare computed groups on P^1 x P^3 with the bidegree closed forms.
    ClosedForm {
        #[arg(long)]
        d1: BigInt,
        #[arg(long)]
        d2: BigInt,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
    Json,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Factor dimensions, e.g. "1,3".
    #[arg(long, required_unless_present = "example")]
    ambient: Option<String>,
    /// Hypersurface multidegree, e.g. "3,4".
    #[arg(long, required_unless_present = "example")]
    degree: Option<String>,
    /// naive | even-degree | nori | custom:<file or inline JSON>
    #[arg(long)]
    assumption: Option<String>,
    /// trento[:d] | totaro48 | bidegree34 | nori:d
    #[arg(long, conflicts_with_all = ["ambient", "degree"])]
    example: Option<String>,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Runs one invocation. `argv[0]` is the program name. The thread cap is read
/// from [`THREADS_ENV`].
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let threads = std::env::var(THREADS_ENV).ok();
    run_with_threads(argv, threads.as_deref())
}

pub fn run_with_threads<I, S>(argv: I, threads: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let json_mode = cli.json;
    let threads = match threads.map(str::trim).filter(|s| !s.is_empty()) {
        None => None,
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => {
                return failure(
                    Error::Parse(format!("{THREADS_ENV} must be a positive integer, got `{s}`")),
                    json_mode,
                )
            }
        },
    };
    match execute(cli.command, threads) {
        Ok(out) => Outcome::ok(if json_mode {
            json::render(&out.json) + "\n"
        } else {
            out.text
        }),
        Err(e) => failure(e, json_mode),
    }
}

fn failure(e: Error, json_mode: bool) -> Outcome {
    let code = if e.is_input_error() { 2 } else { 1 };
    if json_mode {
        let body = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
        Outcome {
            code,
            stdout: json::render(&body) + "\n",
            stderr: String::new(),
        }
    } else {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

struct Rendered {
    text: String,
    json: Value,
}

fn load_model(args: &ModelArgs) -> Result<(ComplementModel, PushforwardAssumption), Error> {
    let (model, default) = match &args.example {
        Some(name) => {
            let p = preset(name)?;
            (p.model, p.assumption)
        }
        None => {
            let ambient = args.ambient.as_deref().unwrap_or_default();
            let degree = args.degree.as_deref().unwrap_or_default();
            (ComplementModel::parse(ambient, degree)?, PushforwardAssumption::NaiveDivisor)
        }
    };
    let assumption = match &args.assumption {
        Some(s) => parse_assumption(s, model.ambient())?,
        None => default,
    };
    Ok((model, assumption))
}

fn parse_assumption(s: &str, ambient: &AmbientSpace) -> Result<PushforwardAssumption, Error> {
    match s.trim().strip_prefix("custom:") {
        Some(body) if !body.trim_start().starts_with('{') => {
            let text = std::fs::read_to_string(body)
                .map_err(|e| Error::Parse(format!("cannot read `{body}`: {e}")))?;
            PushforwardAssumption::parse(&format!("custom:{text}"), ambient)
        }
        _ => PushforwardAssumption::parse(s, ambient),
    }
}

fn join(xs: &[BigInt]) -> String {
    let parts: Vec<String> = xs.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn execute(command: Command, threads: Option<usize>) -> Result<Rendered, Error> {
    match command {
        Command::Snf { matrix } => {
            let a = IntegerMatrix::from_json_str(&matrix)?;
            let d = smith_normal_form(&a);
            let diagonal = d.diagonal();
            let text = format!(
                "diagonal: {}\nu: {}\ns: {}\nv: {}\nverified: {}\n",
                join(&diagonal),
                d.u,
                d.s,
                d.v,
                d.verify(&a)
            );
            let json = json!({
                "diagonal": json::integers(&diagonal),
                "u": d.u.to_json(),
                "s": d.s.to_json(),
                "v": d.v.to_json(),
                "verified": d.verify(&a),
            });
            Ok(Rendered { text, json })
        }
        Command::Group { relations, names } => {
            let rel = IntegerMatrix::from_json_str(&relations)?;
            let group = match names {
                Some(n) => AbelianPresentation::new(
                    n.split(',').map(|s| s.trim().to_owned()).collect(),
                    rel,
                )?,
                None => AbelianPresentation::from_relations(rel),
            };
            let factors = group.invariant_factors();
            let order = group.order();
            let text = format!(
                "generators: {}\ninvariant factors: {}\nstructure: {}\norder: {}\n",
                group.generator_names().join(", "),
                join(&factors),
                group.structure(),
                order.as_ref().map_or("infinite".to_owned(), BigInt::to_string),
            );
            let mut json = group.to_json();
            json["invariant_factors"] = json::integers(&factors);
            json["structure"] = Value::String(group.structure());
            json["order"] = order.as_ref().map_or(Value::Null, json::integer);
            Ok(Rendered { text, json })
        }
        Command::Cup { ambient, a, b } => {
            let ambient = AmbientSpace::parse(&ambient)?;
            let a = ChowClass::parse(&a, &ambient, None)?;
            let b = ChowClass::parse(&b, &ambient, None)?;
            let p = a.cup(&b)?;
            let text = format!("{p}\ndegree: {}\ncoords: {}\n", p.degree(), join(&p.coords()));
            let json = json!({
                "product": p.to_string(),
                "degree": p.degree(),
                "coords": json::integers(&p.coords()),
            });
            Ok(Rendered { text, json })
        }
        Command::Complement {
            model,
            j,
            class,
            mod2,
        } => {
            let (model, assumption) = load_model(&model)?;
            let g = if mod2 {
                model.complement_group_mod2(j, &assumption)?
            } else {
                model.complement_group(j, &assumption)?
            };
            let mut text = format!(
                "model: {} with [Z] = {}\ndegree: {j}\nassumption: {}\ngenerators: {}\ninvariant factors: {}\nstructure: {}\ncertificate: {}\n",
                model.ambient(),
                model.z_class(),
                assumption.name(),
                g.group.generator_names().join(", "),
                join(&g.group.invariant_factors()),
                g.group.structure(),
                g.certificate,
            );
            let mut out = g.to_json();
            out["model"] = model.to_json();
            out["degree"] = json!(j);
            out["assumption"] = Value::String(assumption.name().into());
            out["mod2"] = Value::Bool(mod2);
            if let Some(c) = class {
                let c = ChowClass::parse(&c, model.ambient(), Some(j))?;
                let e = if mod2 {
                    model.restrict_mod2(&c, &assumption)?
                } else {
                    model.restrict(&c, &assumption)?
                };
                let _ = writeln!(
                    text,
                    "image of {c}: {} (canonical {}, order {}, {})",
                    join(e.coords()),
                    join(&e.canonical()),
                    e.order(),
                    if e.is_zero() { "zero" } else { "nonzero" },
                );
                out["element"] = e.to_json();
                out["class"] = Value::String(c.to_string());
            }
            Ok(Rendered { text, json: out })
        }
        Command::Sq2 { ambient, class } => {
            let ambient = AmbientSpace::parse(&ambient)?;
            let c = ChowClass::parse(&class, &ambient, None)?;
            let reduced = Mod2ChowClass::from(&c);
            let s = sq2(&reduced);
            let text = format!("Sq^2({reduced}) = {s}\ndegree: {}\n", s.degree());
            let json = json!({
                "class": reduced.to_string(),
                "sq2": s.to_string(),
                "degree": s.degree(),
            });
            Ok(Rendered { text, json })
        }
        Command::Obstruct { model, c1, c2 } => {
            let (model, assumption) = load_model(&model)?;
            let pair = ChernPair::parse(&c1, &c2, model.ambient())?;
            let r = decide(&model, &pair, &assumption)?;
            let j = &r.justification;
            let state = |zero: bool| if zero { "zero" } else { "nonzero" };
            let mut text = format!(
                "c1: {}\nc2: {}\ntheta: {}\nnaive image: {} ({})\ntheta image: {} ({})\nverdict: {}\nassumption: {} ({}, consistent: {})\ndecided by: {}\nlifts determined: {}\ncertificates:\n",
                pair.c1(),
                pair.c2(),
                r.theta_on_y,
                join(&r.naive_image.canonical()),
                state(j.theta_zero_naive),
                join(&r.theta_image.canonical()),
                state(j.theta_zero_assumed),
                r.verdict,
                j.assumption,
                j.containment.as_str(),
                j.assumption_consistent,
                j.decided_by.map_or("nothing", |d| d.as_str()),
                j.lifts_determined,
            );
            for c in &j.certificates {
                let _ = writeln!(text, "  {c}");
            }
            let _ = writeln!(text, "unverified hypotheses: {}", j.unverified_hypotheses.join("; "));
            Ok(Rendered {
                text,
                json: r.to_json(),
            })
        }
        Command::Classify { model, format } => {
            let (model, assumption) = load_model(&model)?;
            let rows = classify_all_with_threads(&model, &assumption, threads)?;
            let json = Value::Array(rows.iter().map(|r| r.to_json()).collect());
            let text = match format {
                TableFormat::Json => json::render(&json) + "\n",
                TableFormat::Tsv => {
                    let mut t = String::from("c1_coords\tc2_coords\tc1\tc2\ttheta\tverdict\n");
                    for r in &rows {
                        let _ = writeln!(
                            t,
                            "{}\t{}\t{}\t{}\t{}\t{}",
                            join(&r.c1_coords),
                            join(&r.c2_coords),
                            r.c1,
                            r.c2,
                            r.theta,
                            r.verdict
                        );
                    }
                    t
                }
            };
            Ok(Rendered { text, json })
        }
        Command::ClosedForm { d1, d2 } => {
            let r = closed_form_check(&d1, &d2)?;
            let text = format!(
                "d1: {}\nd2: {}\ng: {}\nbezout: m = {}, n = {}\ndegree 1: closed form {}, computed {}, matches {} ({})\ndegree 2: closed form {}, computed {}, matches {} ({})\nsnf identity: {} * {} * {} = {}, holds {}\nxi_tau image: {}, order closed form {}, order computed {}\n",
                r.d1,
                r.d2,
                r.g,
                r.m,
                r.n,
                join(&r.degree1_closed_form),
                join(&r.degree1_computed),
                r.degree1_matches(),
                r.degree1_certificate,
                join(&r.degree2_closed_form),
                join(&r.degree2_computed),
                r.degree2_matches(),
                r.degree2_certificate,
                r.identity.left,
                r.identity.matrix,
                r.identity.right,
                r.identity.product,
                r.identity.holds(),
                join(&r.xi_tau_image),
                r.xi_tau_order_closed_form,
                r.xi_tau_order_computed,
            );
            Ok(Rendered {
                text,
                json: r.to_json(),
            })
        }
    }
}
