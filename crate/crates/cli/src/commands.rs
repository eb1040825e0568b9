use clap::{Args, Parser, Subcommand, ValueEnum};
use msset::anodyne::{is_complicial, is_n_complicial, is_saturated};
use msset::filtration::{
    remark_characterization, run_filtration_with, triviality_filtration, Limits,
};
use msset::harness::{run_suites, Corpus, CorpusConfig, SUITES};
use msset::sset::Product;
use serde::Serialize;

use crate::diagram::{find_cell, LatticePath};
use crate::expr::{eval, parse, print, Expr, ParseError};

#[derive(Parser, Debug)]
#[command(
    name = "msset",
    version,
    about = "Marked simplicial sets from the command line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the canonical form of each expression
    Print { exprs: Vec<String> },
    /// Build an object and print its cell and mark counts
    Build {
        expr: String,
        /// Write the object as JSON to this path (`-` for stdout)
        #[arg(long)]
        json: Option<String>,
    },
    /// List the marked cells
    Marks {
        expr: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Truncated recognition checks by lifting
    Check(CheckArgs),
    /// Run certificates and property suites
    #[command(subcommand)]
    Verify(Verify),
    /// Draw a product simplex as a lattice path
    Diagram {
        expr: String,
        /// Cell index or label such as `([0 1 1],[0 0 1])`
        #[arg(long)]
        simplex: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
    },
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub expr: String,
    #[command(flatten)]
    pub mode: CheckMode,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct CheckMode {
    /// Horn and thinness extensions up to dimension D
    #[arg(long, value_name = "D")]
    pub complicial: Option<isize>,
    /// As --complicial, plus left saturation up to L
    #[arg(long, num_args = 2, value_names = ["D", "L"], allow_negative_numbers = true)]
    pub saturated: Option<Vec<isize>>,
    /// Saturated and N-trivial up to dimension D
    #[arg(long = "n-complicial", num_args = 2, value_names = ["N", "D"])]
    pub n_complicial: Option<Vec<isize>>,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// The six-stage filtration of the saturation tensor
    #[command(allow_negative_numbers = true)]
    Filtration {
        ell: isize,
        m: isize,
        /// Print every attaching map instead of the certificate
        #[arg(long)]
        dump: bool,
        #[arg(long, default_value_t = Limits::default().max_ell)]
        max_ell: isize,
        #[arg(long, default_value_t = Limits::default().max_m)]
        max_m: isize,
    },
    /// Realize a triviality tensor by triviality extensions
    #[command(allow_negative_numbers = true)]
    Triviality { p: isize, m: isize, n: isize },
    /// Corpus property suites
    #[command(allow_negative_numbers = true)]
    Suites {
        names: Vec<String>,
        #[arg(long, default_value_t = CorpusConfig::default().max_m)]
        max_m: isize,
        #[arg(long, default_value_t = CorpusConfig::default().max_ell)]
        max_ell: isize,
        #[arg(long, default_value_t = CorpusConfig::default().budget)]
        budget: usize,
        #[arg(long, default_value_t = CorpusConfig::default().pair_cells)]
        pair_cells: usize,
        #[arg(long, default_value_t = CorpusConfig::default().triple_cells)]
        triple_cells: usize,
        /// Only gadgets, no derived objects
        #[arg(long)]
        gadgets_only: bool,
        /// Include wall-clock times in the report
        #[arg(long)]
        timing: bool,
    },
    /// Tensor marks against the degeneracy-index criterion
    #[command(allow_negative_numbers = true)]
    Remark { ell: isize, m: isize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Ascii,
    Svg,
}

/// Result of one invocation: exit code and the text for stdout or stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    end: Option<usize>,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: ErrorBody<'a>,
}

fn error(kind: &str, message: String, span: Option<(usize, usize)>) -> Outcome {
    let body = ErrorObject {
        error: ErrorBody {
            kind,
            message,
            start: span.map(|s| s.0),
            end: span.map(|s| s.1),
        },
    };
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: serde_json::to_string(&body).unwrap() + "\n",
    }
}

impl From<ParseError> for Outcome {
    fn from(e: ParseError) -> Outcome {
        let kind = match e.kind {
            crate::ErrorKind::Syntax => "syntax",
            crate::ErrorKind::Range => "range",
        };
        error(kind, e.message, Some((e.start, e.end)))
    }
}

impl From<msset::Error> for Outcome {
    fn from(e: msset::Error) -> Outcome {
        let kind = match e {
            msset::Error::OutOfRange { .. } => "range",
            _ => "invalid",
        };
        error(kind, e.to_string(), None)
    }
}

fn json(value: &impl Serialize, passed: bool) -> Outcome {
    Outcome {
        code: if passed { 0 } else { 1 },
        stdout: serde_json::to_string_pretty(value).unwrap() + "\n",
        stderr: String::new(),
    }
}

fn text(stdout: String) -> Outcome {
    Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

#[derive(Serialize)]
struct BuildSummary {
    expr: String,
    cells: Vec<usize>,
    marked: Vec<usize>,
}

/// Parses the arguments (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli.command).unwrap_or_else(|e| e),
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                return text(e.to_string());
            }
            let message = e.render().to_string();
            let head: Vec<&str> = message
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            let head = head.join(" ");
            error(
                "usage",
                head.trim_start_matches("error: ").to_string(),
                None,
            )
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, Outcome> {
    Ok(match command {
        Command::Print { exprs } => {
            let mut out = String::new();
            for e in exprs {
                out.push_str(&print(&parse(&e)?));
                out.push('\n');
            }
            text(out)
        }
        Command::Build { expr, json: path } => {
            let e = parse(&expr)?;
            let x = eval(&e)?;
            match path.as_deref() {
                Some("-") => text(serde_json::to_string_pretty(&x.to_json()).unwrap() + "\n"),
                Some(path) => {
                    let body = serde_json::to_string_pretty(&x.to_json()).unwrap() + "\n";
                    std::fs::write(path, body)
                        .map_err(|err| error("io", format!("{path}: {err}"), None))?;
                    summary(&e, &x)
                }
                None => summary(&e, &x),
            }
        }
        Command::Marks { expr, dim } => {
            let x = eval(&parse(&expr)?)?;
            let mut out = String::new();
            for c in x.marked_cells() {
                if dim.is_none_or(|r| x.underlying.dim(c) == r) {
                    out.push_str(x.underlying.label(c));
                    out.push('\n');
                }
            }
            text(out)
        }
        Command::Check(args) => {
            let x = eval(&parse(&args.expr)?)?;
            let mode = args.mode;
            let verdict = if let Some(d) = mode.complicial {
                is_complicial(&x, d)
            } else if let Some(v) = mode.saturated {
                is_saturated(&x, v[0], v[1])
            } else {
                let v = mode.n_complicial.expect("one mode is required");
                is_n_complicial(&x, v[0], v[1])
            };
            json(&verdict, verdict.passed())
        }
        Command::Verify(v) => verify(v)?,
        Command::Diagram {
            expr,
            simplex,
            format,
        } => {
            let e = parse(&expr)?;
            let (a, b, marked) = match &e {
                Expr::Prod(a, b) => (a, b, None),
                Expr::Pretensor(a, b) | Expr::Tensor(a, b) => (a, b, Some(eval(&e)?)),
                _ => {
                    return Err(error(
                        "usage",
                        "diagram needs a prod, pretensor or tensor expression".into(),
                        None,
                    ))
                }
            };
            let (x, y) = (eval(a)?, eval(b)?);
            let p = Product::new(x.underlying.clone(), y.underlying.clone());
            let c = find_cell(&p, &simplex).ok_or_else(|| {
                error("usage", format!("no cell {simplex} in {}", print(&e)), None)
            })?;
            let path = LatticePath::in_product(&p, c);
            match format {
                Format::Svg => text(path.svg()),
                Format::Ascii => {
                    let steps: Vec<&str> = path.steps().iter().map(|s| s.name()).collect();
                    let mut out =
                        format!("simplex: {}\npath: {}\n", p.sset.label(c), steps.join("-"));
                    if let Some(m) = marked {
                        let yes = m.is_cell_marked(c);
                        out.push_str(&format!("marked: {}\n", if yes { "yes" } else { "no" }));
                    }
                    out.push_str(&path.ascii());
                    text(out)
                }
            }
        }
    })
}

fn summary(e: &Expr, x: &msset::marking::MarkedSSet) -> Outcome {
    let s = x.summary();
    json(
        &BuildSummary {
            expr: print(e),
            cells: s.cells,
            marked: s.marked,
        },
        true,
    )
}

fn verify(v: Verify) -> Result<Outcome, Outcome> {
    Ok(match v {
        Verify::Filtration {
            ell,
            m,
            dump,
            max_ell,
            max_m,
        } => {
            let cert = run_filtration_with(ell, m, &Limits { max_ell, max_m })?;
            if dump {
                Outcome {
                    code: if cert.passed { 0 } else { 1 },
                    stdout: cert.dump(),
                    stderr: String::new(),
                }
            } else {
                json(&cert, cert.passed)
            }
        }
        Verify::Triviality { p, m, n } => {
            let cert = triviality_filtration(p, m, n)?;
            json(&cert, cert.passed)
        }
        Verify::Remark { ell, m } => {
            let r = remark_characterization(ell, m)?;
            json(&r, r.passed)
        }
        Verify::Suites {
            names,
            max_m,
            max_ell,
            budget,
            pair_cells,
            triple_cells,
            gadgets_only,
            timing,
        } => {
            let names: Vec<String> = if names.is_empty() {
                SUITES.iter().map(|s| s.to_string()).collect()
            } else {
                names
            };
            let corpus = Corpus::new(&CorpusConfig {
                max_m,
                max_ell,
                budget,
                derived: !gadgets_only,
                pair_cells,
                triple_cells,
            });
            let reports = run_suites(&corpus, &names, timing)?;
            let passed = reports.iter().all(|r| r.ok());
            json(&reports, passed)
        }
    })
}
