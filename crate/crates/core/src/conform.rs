//! Typed value tokens and golden-corpus conformance runs.
//!
//! A corpus is a UTF-8 text file with one case per line:
//!
//! ```text
//! ('(',I0,',',I0,') = ',F0.3) | i:2 i:3 r:12.345 | (2,3) = 12.345
//! ```
//!
//! The first field is a format, or a `v2s:<type>[:<spec>]` directive that
//! routes the single value through the stringify layer. The second field
//! holds whitespace-separated typed tokens; a payload may be double-quoted
//! (`s:"two words"`). The third field is the expected output, byte-exact
//! after unescaping `\n`, `\r`, `\t` and `\\`. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt;

use crate::editdesc::{self, FormatList, ParseError, SignMode};
use crate::stringify::{self, BoolStyle, DefaultRules, Value, NEWLINE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TokenError {
    #[error("token '{0}' has no '<tag>:' prefix")]
    MissingTag(String),
    #[error("unknown token tag '{0}'")]
    UnknownTag(String),
    #[error("invalid {tag} payload '{payload}'")]
    BadPayload { tag: &'static str, payload: String },
    #[error("unterminated quoted payload")]
    UnterminatedQuote,
}

/// Parses a `<tag>:<payload>` token (`i`, `r`, `b`, `s`, `iv`).
pub fn parse_token(token: &str) -> Result<Value, TokenError> {
    let (tag, payload) = token
        .split_once(':')
        .ok_or_else(|| TokenError::MissingTag(token.to_string()))?;
    let bad = |tag: &'static str| TokenError::BadPayload {
        tag,
        payload: payload.to_string(),
    };
    match tag {
        "i" => payload.parse().map(Value::Int).map_err(|_| bad("integer")),
        "r" => payload.parse().map(Value::Real).map_err(|_| bad("real")),
        "b" => match payload {
            "true" => Ok(Value::Bool(true)),
            "false" => Ok(Value::Bool(false)),
            _ => Err(bad("boolean")),
        },
        "s" => Ok(Value::Text(payload.to_string())),
        "iv" => {
            if payload.is_empty() {
                return Ok(Value::IntVector(Vec::new()));
            }
            payload
                .split(',')
                .map(|p| p.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map(Value::IntVector)
                .map_err(|_| bad("integer vector"))
        }
        other => Err(TokenError::UnknownTag(other.to_string())),
    }
}

/// Splits a values field into raw tokens, honoring `tag:"quoted payload"`.
/// Quoted payloads support `\"`, `\\` and `\n`. Returns the tokens and the
/// unconsumed rest, which starts at the first bare `|` if any.
fn split_tokens(field: &str) -> Result<(Vec<String>, &str), TokenError> {
    let mut tokens = Vec::new();
    let mut chars = field.char_indices().peekable();
    loop {
        while let Some(&(_, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else {
                break;
            }
        }
        let Some(&(start, c)) = chars.peek() else {
            return Ok((tokens, ""));
        };
        if c == '|' {
            return Ok((tokens, &field[start..]));
        }
        let mut token = String::new();
        let mut quoted = false;
        while let Some(&(_, c)) = chars.peek() {
            if quoted {
                chars.next();
                match c {
                    '"' => quoted = false,
                    '\\' => match chars.next() {
                        Some((_, 'n')) => token.push('\n'),
                        Some((_, other)) => token.push(other),
                        None => return Err(TokenError::UnterminatedQuote),
                    },
                    other => token.push(other),
                }
            } else if c.is_whitespace() {
                break;
            } else {
                chars.next();
                if c == '"' && token.ends_with(':') && !token[..token.len() - 1].contains(':') {
                    quoted = true;
                } else {
                    token.push(c);
                }
            }
        }
        if quoted {
            return Err(TokenError::UnterminatedQuote);
        }
        tokens.push(token);
    }
}

/// Parses a whitespace-separated token list.
pub fn parse_tokens(field: &str) -> Result<Vec<Value>, TokenError> {
    let (raw, rest) = split_tokens(field)?;
    if !rest.is_empty() {
        return Err(TokenError::MissingTag(rest.to_string()));
    }
    raw.iter().map(|t| parse_token(t)).collect()
}

/// Which conversion routine a case exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum V2sKind {
    Int,
    Real,
    Bool,
    IntVec,
}

#[derive(Debug, Clone)]
pub enum CaseTarget {
    Format(FormatList),
    V2s { kind: V2sKind, spec: Option<String> },
}

#[derive(Debug, Clone)]
pub struct CorpusCase {
    /// 1-based line number in the corpus file.
    pub line: usize,
    pub source: String,
    pub target: CaseTarget,
    pub values: Vec<Value>,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("corpus line {line}: {reason}")]
pub struct CorpusError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub cases: Vec<CorpusCase>,
}

const SEPARATOR: &str = " | ";

impl Corpus {
    pub fn parse(text: &str) -> Result<Corpus, CorpusError> {
        let mut cases = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            cases.push(parse_case(line, raw)?);
        }
        Ok(Corpus { cases })
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn run(&self) -> Report {
        Report {
            outcomes: self.cases.iter().map(CorpusCase::run).collect(),
        }
    }
}

fn parse_case(line: usize, raw: &str) -> Result<CorpusCase, CorpusError> {
    let err = |reason: String| CorpusError { line, reason };
    let (format_text, rest) = raw
        .split_once(SEPARATOR)
        .ok_or_else(|| err("expected 'format | values | expected'".to_string()))?;
    let (tokens, tail) = split_tokens(rest).map_err(|e| err(e.to_string()))?;
    let expected_raw = if let Some(e) = tail.strip_prefix("| ") {
        e
    } else if tail == "|" {
        ""
    } else {
        return Err(err("missing expected field".to_string()));
    };
    let values = tokens
        .iter()
        .map(|t| parse_token(t))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| err(e.to_string()))?;
    let expected = unescape(expected_raw).map_err(err)?;
    let target = parse_target(format_text.trim()).map_err(err)?;
    if matches!(target, CaseTarget::V2s { .. }) && values.len() != 1 {
        return Err(err(format!(
            "v2s cases take exactly one value, got {}",
            values.len()
        )));
    }
    Ok(CorpusCase {
        line,
        source: raw.to_string(),
        target,
        values,
        expected,
    })
}

fn parse_target(text: &str) -> Result<CaseTarget, String> {
    if let Some(directive) = text.strip_prefix("v2s:") {
        let (kind, spec) = match directive.split_once(':') {
            Some((k, s)) => (k, Some(s.to_string())),
            None => (directive, None),
        };
        let kind = match kind {
            "int" => V2sKind::Int,
            "real" => V2sKind::Real,
            "bool" => V2sKind::Bool,
            "intvec" => V2sKind::IntVec,
            other => return Err(format!("unknown v2s type '{other}'")),
        };
        if let Some(spec) = &spec {
            let check = match kind {
                V2sKind::Bool => spec
                    .parse::<BoolStyle>()
                    .map(|_| ())
                    .map_err(|e| e.to_string()),
                _ => editdesc::parse(spec).map(|_| ()).map_err(|e| e.to_string()),
            };
            check?;
        }
        return Ok(CaseTarget::V2s { kind, spec });
    }
    editdesc::parse(text)
        .map(CaseTarget::Format)
        .map_err(|e: ParseError| format!("invalid format: {e}"))
}

fn unescape(text: &str) -> Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some('t') => out.push('\t'),
            Some('\\') => out.push('\\'),
            Some(other) => return Err(format!("unknown escape '\\{other}'")),
            None => return Err("dangling '\\' at end of line".to_string()),
        }
    }
    Ok(out)
}

/// Inverse of the expected-field unescaping.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

impl CorpusCase {
    /// Produces the actual output for this case.
    pub fn evaluate(&self) -> Result<String, String> {
        let rules = DefaultRules::default();
        match &self.target {
            CaseTarget::Format(fmt) => {
                editdesc::render(fmt, &self.values, SignMode::Suppress, NEWLINE)
                    .map_err(|e| e.to_string())
            }
            CaseTarget::V2s { kind, spec } => {
                let spec = spec.as_deref();
                let value = &self.values[0];
                let result = match (kind, value) {
                    (V2sKind::Int, Value::Int(v)) => stringify::v2s_int(*v, spec, &rules),
                    (V2sKind::Real, Value::Real(v)) => stringify::v2s_real(*v, spec, &rules),
                    (V2sKind::Bool, Value::Bool(v)) => spec
                        .map(str::parse::<BoolStyle>)
                        .transpose()
                        .map(|style| stringify::v2s_bool(*v, style, &rules)),
                    (V2sKind::IntVec, Value::IntVector(v)) => {
                        stringify::v2s_intvec(v, spec, &rules)
                    }
                    (kind, value) => {
                        return Err(format!(
                            "{kind:?} conversion given a {} value",
                            value.kind()
                        ))
                    }
                };
                result.map_err(|e| e.to_string())
            }
        }
    }

    pub fn run(&self) -> CaseOutcome {
        let actual = self.evaluate();
        CaseOutcome {
            line: self.line,
            source: self.source.clone(),
            passed: actual.as_deref() == Ok(self.expected.as_str()),
            expected: self.expected.clone(),
            actual,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub line: usize,
    pub source: String,
    pub passed: bool,
    pub expected: String,
    pub actual: Result<String, String>,
}

impl fmt::Display for CaseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return write!(f, "PASS line {}", self.line);
        }
        write!(f, "FAIL line {}: {}", self.line, self.source)?;
        write!(f, "\n  expected: \"{}\"", escape(&self.expected))?;
        match &self.actual {
            Ok(actual) => write!(f, "\n  actual:   \"{}\"", escape(actual)),
            Err(e) => write!(f, "\n  error:    {e}"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub outcomes: Vec<CaseOutcome>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for outcome in &self.outcomes {
            writeln!(f, "{outcome}")?;
        }
        write!(
            f,
            "{} cases, {} passed, {} failed",
            self.outcomes.len(),
            self.passed(),
            self.failed()
        )
    }
}
