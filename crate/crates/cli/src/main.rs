//! `strfmt`: render formats, stringify single values and run conformance
//! corpora from the command line.
//!
//! Exit codes depend only on the error class: 0 success, 1 conformance
//! failures, 2 invalid input (format syntax, tokens, options, corpus
//! syntax or an unreadable corpus), 3 values that do not fit the format
//! (arity, type, empty vector).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use strfmt::conform::{self, Corpus, TokenError};
use strfmt::editdesc::{self, RenderError};
use strfmt::stringify::{self, DefaultRules, Newline, StringifyError};
use strfmt::{BoolStyle, SignMode};

#[derive(Parser)]
#[command(name = "strfmt", version, about = "Fortran-style formatted output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render typed values through a format, e.g. `--fmt "(I0,F6.2)" i:3 r:1.5`
    Render {
        /// Format text, with or without the enclosing parentheses
        #[arg(long = "fmt", allow_hyphen_values = true)]
        format: String,
        /// Record separator emitted for `/`
        #[arg(long, value_enum, default_value_t = NewlineArg::Lf)]
        newline: NewlineArg,
        /// Initial sign mode for non-negative numbers
        #[arg(long, value_enum, default_value_t = SignArg::Ss)]
        sign: SignArg,
        /// Values as `<tag>:<payload>` with tag i, r, b, s or iv
        #[arg(allow_hyphen_values = true)]
        tokens: Vec<String>,
    },
    /// Convert one value to text with its default or an explicit spec
    V2s {
        #[arg(long = "type", value_enum)]
        kind: Kind,
        /// Conversion spec, e.g. `F8.2` or `(SP,I5)`
        #[arg(long, allow_hyphen_values = true)]
        spec: Option<String>,
        /// Logical style: default, word, code or switch
        #[arg(long)]
        bool_style: Option<String>,
        /// The value; integer vectors are comma-separated
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Run a conformance corpus and report every case
    Conform {
        #[arg(long)]
        corpus: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NewlineArg {
    Lf,
    Crlf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Sp,
    Ss,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Int,
    Real,
    Bool,
    Intvec,
}

impl Kind {
    fn tag(self) -> &'static str {
        match self {
            Kind::Int => "i",
            Kind::Real => "r",
            Kind::Bool => "b",
            Kind::Intvec => "iv",
        }
    }
}

/// A failed command: exit status and diagnostic.
struct Failure {
    code: u8,
    message: String,
}

const INVALID_INPUT: u8 = 2;
const VALUE_MISMATCH: u8 = 3;

impl From<editdesc::ParseError> for Failure {
    fn from(e: editdesc::ParseError) -> Self {
        Failure {
            code: INVALID_INPUT,
            message: format!("invalid format: {e}"),
        }
    }
}

impl From<TokenError> for Failure {
    fn from(e: TokenError) -> Self {
        Failure {
            code: INVALID_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        Failure {
            code: VALUE_MISMATCH,
            message: e.to_string(),
        }
    }
}

impl From<StringifyError> for Failure {
    fn from(e: StringifyError) -> Self {
        let code = match e {
            StringifyError::Render(_) | StringifyError::EmptyVector => VALUE_MISMATCH,
            _ => INVALID_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn render(
    format: &str,
    tokens: &[String],
    newline: NewlineArg,
    sign: SignArg,
) -> Result<String, Failure> {
    let fmt = editdesc::parse(format)?;
    let values = tokens
        .iter()
        .map(|t| conform::parse_token(t))
        .collect::<Result<Vec<_>, _>>()?;
    let newline = match newline {
        NewlineArg::Lf => Newline::Lf,
        NewlineArg::Crlf => Newline::Crlf,
    };
    let sign = match sign {
        SignArg::Sp => SignMode::Plus,
        SignArg::Ss => SignMode::Suppress,
    };
    Ok(editdesc::render(&fmt, &values, sign, newline.as_str())?)
}

fn v2s(
    kind: Kind,
    spec: Option<&str>,
    bool_style: Option<&str>,
    value: &str,
) -> Result<String, Failure> {
    let value = conform::parse_token(&format!("{}:{value}", kind.tag()))?;
    let rules = DefaultRules::default();
    if let Some(style) = bool_style {
        let style: BoolStyle = style.parse()?;
        let strfmt::Value::Bool(v) = value else {
            return Err(Failure {
                code: INVALID_INPUT,
                message: "--bool-style applies only to --type bool".into(),
            });
        };
        return Ok(stringify::v2s_bool(v, Some(style), &rules));
    }
    Ok(stringify::v2s(&value, spec, &rules)?)
}

fn conform(path: &PathBuf) -> ExitCode {
    let corpus = std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|text| Corpus::parse(&text).map_err(|e| e.to_string()));
    match corpus {
        Ok(corpus) => {
            let report = corpus.run();
            println!("{report}");
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("strfmt: {}: {e}", path.display());
            ExitCode::from(INVALID_INPUT)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Render {
            format,
            newline,
            sign,
            tokens,
        } => render(format, tokens, *newline, *sign),
        Command::V2s {
            kind,
            spec,
            bool_style,
            value,
        } => v2s(*kind, spec.as_deref(), bool_style.as_deref(), value),
        Command::Conform { corpus } => return conform(corpus),
    };
    match result {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("strfmt: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
