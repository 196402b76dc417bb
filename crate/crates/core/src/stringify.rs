//! Value-to-string conversion (`v2s`).
//!
//! Every conversion goes through an edit descriptor: either the one given
//! explicitly as a spec string (`"F8.2"`, `"SP,I3"`, ...) or the project-wide
//! default held in [`DefaultRules`]. Results never carry leading or trailing
//! blanks; use [`crate::editdesc::render`] directly for width-faithful output.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::editdesc::{
    self, EditDescriptor, ExpDesc, FixedDesc, FormatList, IntDesc, ParseError, RenderError,
    SignMode,
};

/// Line feed, the default line separator.
pub const NEWLINE: &str = "\n";

#[derive(Debug, thiserror::Error)]
pub enum StringifyError {
    #[error("invalid conversion spec: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("cannot stringify an empty vector")]
    EmptyVector,
    #[error("unknown boolean style '{0}' (expected default, word, code or switch)")]
    UnknownBoolStyle(String),
    #[error("unknown newline convention '{0}' (expected lf or crlf)")]
    UnknownNewline(String),
    #[error("default spec {0} does not match the value type")]
    IncompatibleDefault(String),
}

/// Extension point for user-defined types.
pub trait Stringifiable {
    fn to_text(&self) -> String;
}

/// A renderable value.
#[derive(Clone)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
    IntVector(Vec<i64>),
    UserDefined(Arc<dyn Stringifiable + Send + Sync>),
}

impl Value {
    pub fn user<T: Stringifiable + Send + Sync + 'static>(value: T) -> Self {
        Value::UserDefined(Arc::new(value))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Real(_) => "real",
            Value::Bool(_) => "logical",
            Value::Text(_) => "character",
            Value::IntVector(_) => "integer vector",
            Value::UserDefined(_) => "user-defined",
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => f.debug_tuple("Int").field(v).finish(),
            Value::Real(v) => f.debug_tuple("Real").field(v).finish(),
            Value::Bool(v) => f.debug_tuple("Bool").field(v).finish(),
            Value::Text(v) => f.debug_tuple("Text").field(v).finish(),
            Value::IntVector(v) => f.debug_tuple("IntVector").field(v).finish(),
            Value::UserDefined(v) => f.debug_tuple("UserDefined").field(&v.to_text()).finish(),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(v.into())
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Vec<i64>> for Value {
    fn from(v: Vec<i64>) -> Self {
        Value::IntVector(v)
    }
}

/// How logicals are spelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoolStyle {
    /// `T` / `F`
    #[default]
    Default,
    /// `true` / `false`
    Word,
    /// `.true.` / `.false.`
    Code,
    /// `on` / `off`
    Switch,
}

impl BoolStyle {
    pub const ALL: [BoolStyle; 4] = [
        BoolStyle::Default,
        BoolStyle::Word,
        BoolStyle::Code,
        BoolStyle::Switch,
    ];

    /// The (true, false) token pair.
    pub fn tokens(self) -> (&'static str, &'static str) {
        match self {
            BoolStyle::Default => ("T", "F"),
            BoolStyle::Word => ("true", "false"),
            BoolStyle::Code => (".true.", ".false."),
            BoolStyle::Switch => ("on", "off"),
        }
    }

    pub fn render(self, v: bool) -> &'static str {
        let (t, f) = self.tokens();
        if v {
            t
        } else {
            f
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoolStyle::Default => "default",
            BoolStyle::Word => "word",
            BoolStyle::Code => "code",
            BoolStyle::Switch => "switch",
        }
    }
}

impl FromStr for BoolStyle {
    type Err = StringifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoolStyle::ALL
            .into_iter()
            .find(|style| style.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| StringifyError::UnknownBoolStyle(s.to_string()))
    }
}

impl fmt::Display for BoolStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Line separator convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Newline {
    #[default]
    Lf,
    Crlf,
}

impl Newline {
    pub fn as_str(self) -> &'static str {
        match self {
            Newline::Lf => NEWLINE,
            Newline::Crlf => "\r\n",
        }
    }
}

impl FromStr for Newline {
    type Err = StringifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lf" => Ok(Newline::Lf),
            "crlf" => Ok(Newline::Crlf),
            _ => Err(StringifyError::UnknownNewline(s.to_string())),
        }
    }
}

/// Real conversions accept either fixed or exponential notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealDesc {
    Fixed(FixedDesc),
    Exp(ExpDesc),
}

impl RealDesc {
    /// Same descriptor with its field width replaced.
    pub fn with_width(self, width: usize) -> RealDesc {
        match self {
            RealDesc::Fixed(d) => RealDesc::Fixed(FixedDesc { width, ..d }),
            RealDesc::Exp(d) => RealDesc::Exp(ExpDesc {
                width: width.max(1),
                ..d
            }),
        }
    }
}

impl From<RealDesc> for EditDescriptor {
    fn from(d: RealDesc) -> Self {
        match d {
            RealDesc::Fixed(d) => EditDescriptor::Fixed(d),
            RealDesc::Exp(d) => EditDescriptor::Exp(d),
        }
    }
}

/// Project-wide defaults used when no explicit spec is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultRules {
    pub int_spec: IntDesc,
    pub real_spec: RealDesc,
    pub bool_style: BoolStyle,
    pub newline: Newline,
}

impl Default for DefaultRules {
    fn default() -> Self {
        DefaultRules {
            int_spec: IntDesc { width: 0 },
            real_spec: RealDesc::Fixed(FixedDesc {
                width: 0,
                decimals: 6,
            }),
            bool_style: BoolStyle::Default,
            newline: Newline::Lf,
        }
    }
}

impl DefaultRules {
    /// Builds rules from arbitrary descriptors, rejecting type-incompatible
    /// ones (the integer spec must be `I`, the real spec `F` or `E`).
    pub fn new(
        int_spec: EditDescriptor,
        real_spec: EditDescriptor,
        bool_style: BoolStyle,
        newline: Newline,
    ) -> Result<Self, StringifyError> {
        let int_spec = match int_spec {
            EditDescriptor::Int(d) => d,
            other => return Err(StringifyError::IncompatibleDefault(other.to_string())),
        };
        let real_spec = match real_spec {
            EditDescriptor::Fixed(d) => RealDesc::Fixed(d),
            EditDescriptor::Exp(d) => RealDesc::Exp(d),
            other => return Err(StringifyError::IncompatibleDefault(other.to_string())),
        };
        Ok(DefaultRules {
            int_spec,
            real_spec,
            bool_style,
            newline,
        })
    }

    /// Like [`DefaultRules::new`] but from descriptor text such as `"I0"`
    /// and `"E12.4E3"`.
    pub fn from_specs(int_spec: &str, real_spec: &str) -> Result<Self, StringifyError> {
        let single = |text: &str| -> Result<EditDescriptor, StringifyError> {
            let fmt = editdesc::parse(text)?;
            match fmt.items.as_slice() {
                [d] if d.is_data() => Ok(d.clone()),
                _ => Err(StringifyError::IncompatibleDefault(fmt.to_text())),
            }
        };
        DefaultRules::new(
            single(int_spec)?,
            single(real_spec)?,
            BoolStyle::default(),
            Newline::default(),
        )
    }
}

fn trim_blanks(s: &str) -> String {
    s.trim_matches(' ').to_string()
}

fn convert(
    value: Value,
    spec: Option<&str>,
    default: EditDescriptor,
    rules: &DefaultRules,
) -> Result<String, StringifyError> {
    let fmt = match spec {
        Some(text) => editdesc::parse(text)?,
        None => FormatList::new(vec![default]),
    };
    v2s_with(&fmt, value, rules)
}

/// Renders one value through an already-parsed spec and trims blanks.
pub fn v2s_with(
    fmt: &FormatList,
    value: Value,
    rules: &DefaultRules,
) -> Result<String, StringifyError> {
    let text = editdesc::render(fmt, &[value], SignMode::Suppress, rules.newline.as_str())?;
    Ok(trim_blanks(&text))
}

pub fn v2s_int(v: i64, spec: Option<&str>, rules: &DefaultRules) -> Result<String, StringifyError> {
    convert(Value::Int(v), spec, rules.int_spec.into(), rules)
}

pub fn v2s_real(
    v: f64,
    spec: Option<&str>,
    rules: &DefaultRules,
) -> Result<String, StringifyError> {
    convert(Value::Real(v), spec, rules.real_spec.into(), rules)
}

pub fn v2s_bool(v: bool, style: Option<BoolStyle>, rules: &DefaultRules) -> String {
    style.unwrap_or(rules.bool_style).render(v).to_string()
}

/// One `| value |` line per element, joined by the configured newline.
///
/// Elements keep their field padding (only trailing blanks are removed), so
/// an `I2` spec lines the values up in a column.
pub fn v2s_intvec(
    v: &[i64],
    spec: Option<&str>,
    rules: &DefaultRules,
) -> Result<String, StringifyError> {
    if v.is_empty() {
        return Err(StringifyError::EmptyVector);
    }
    let fmt = match spec {
        Some(text) => editdesc::parse(text)?,
        None => FormatList::new(vec![rules.int_spec.into()]),
    };
    let lines = v
        .iter()
        .map(|&element| {
            let field = editdesc::render(
                &fmt,
                &[Value::Int(element)],
                SignMode::Suppress,
                rules.newline.as_str(),
            )?;
            Ok(format!("| {} |", field.trim_end_matches(' ')))
        })
        .collect::<Result<Vec<_>, StringifyError>>()?;
    Ok(lines.join(rules.newline.as_str()))
}

pub fn v2s_user<T: Stringifiable + ?Sized>(v: &T) -> String {
    v.to_text()
}

/// Dispatches on the value's type. For booleans `spec` names a style.
pub fn v2s(
    value: &Value,
    spec: Option<&str>,
    rules: &DefaultRules,
) -> Result<String, StringifyError> {
    match value {
        Value::Int(v) => v2s_int(*v, spec, rules),
        Value::Real(v) => v2s_real(*v, spec, rules),
        Value::Bool(v) => {
            let style = spec.map(str::parse).transpose()?;
            Ok(v2s_bool(*v, style, rules))
        }
        Value::Text(v) => Ok(v.clone()),
        Value::IntVector(v) => v2s_intvec(v, spec, rules),
        Value::UserDefined(v) => Ok(v2s_user(v.as_ref())),
    }
}

/// A point in 3D, shipped as the reference user-defined type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3d {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3d {
    pub const FORMAT: &'static str = "('(',SP,F0.1,', ',SP,F0.1,', ',SP,F0.1,')')";

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3d { x, y, z }
    }
}

impl Stringifiable for Point3d {
    fn to_text(&self) -> String {
        static FORMAT: OnceLock<FormatList> = OnceLock::new();
        let fmt =
            FORMAT.get_or_init(|| editdesc::parse(Self::FORMAT).expect("point format is valid"));
        let values = [
            Value::Real(self.x),
            Value::Real(self.y),
            Value::Real(self.z),
        ];
        editdesc::render(fmt, &values, SignMode::Suppress, NEWLINE)
            .expect("three reals match three F descriptors")
    }
}
