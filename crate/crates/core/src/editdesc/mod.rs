//! Fortran-style format edit descriptors.
//!
//! A format such as `('(',I0,',',I0,') = ',F0.3)` is parsed into a
//! [`FormatList`], which can be rendered against a list of [`Value`]s or
//! serialized back to canonical text.
//!
//! ```
//! use strfmt::editdesc::{parse, render, SignMode};
//! use strfmt::stringify::Value;
//!
//! let fmt = parse("('(',I0,',',I0,') = ',F0.3)").unwrap();
//! let values = [Value::Int(2), Value::Int(3), Value::Real(12.345)];
//! let text = render(&fmt, &values, SignMode::Suppress, "\n").unwrap();
//! assert_eq!(text, "(2,3) = 12.345");
//! ```

mod parse;
mod render;

use std::fmt;

pub use parse::{parse, ParseError, ParseErrorKind};
pub use render::{
    render, render_char, render_exp, render_fixed, render_int, render_logical, RenderError,
};

#[cfg(doc)]
use crate::stringify::Value;

/// Sign display for non-negative numeric output (`SP`, `SS`, `S`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignMode {
    /// `SP`: print `+` for non-negative values.
    Plus,
    /// `SS`: never print `+`.
    #[default]
    Suppress,
    /// `S`: processor default, which is the same as [`SignMode::Suppress`] here.
    ProcessorDefault,
}

impl SignMode {
    pub fn shows_plus(self) -> bool {
        matches!(self, SignMode::Plus)
    }

    fn keyword(self) -> &'static str {
        match self {
            SignMode::Plus => "SP",
            SignMode::Suppress => "SS",
            SignMode::ProcessorDefault => "S",
        }
    }
}

/// `Iw`. Width 0 selects the minimal width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IntDesc {
    pub width: usize,
}

/// `Fw.d`. Width 0 selects the minimal width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedDesc {
    pub width: usize,
    pub decimals: usize,
}

/// `Ew.d` or `Ew.dEe`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExpDesc {
    /// Always at least 1.
    pub width: usize,
    /// Always at least 1.
    pub decimals: usize,
    pub exp_digits: Option<usize>,
}

/// `A` or `Aw`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CharDesc {
    pub width: Option<usize>,
}

/// `Lw`, width at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LogicalDesc {
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditDescriptor {
    Int(IntDesc),
    Fixed(FixedDesc),
    Exp(ExpDesc),
    Char(CharDesc),
    Logical(LogicalDesc),
    SignControl(SignMode),
    /// Literal text, stored unescaped.
    Literal(String),
    /// `/`: ends the current record.
    RecordBreak,
    /// `n( ... )`, with `repeat >= 1` and non-empty `items`.
    Group {
        repeat: usize,
        items: Vec<EditDescriptor>,
    },
}

impl EditDescriptor {
    /// Whether this descriptor consumes a value when rendered.
    pub fn is_data(&self) -> bool {
        matches!(
            self,
            EditDescriptor::Int(_)
                | EditDescriptor::Fixed(_)
                | EditDescriptor::Exp(_)
                | EditDescriptor::Char(_)
                | EditDescriptor::Logical(_)
        )
    }

    /// Number of values consumed after group expansion. Saturates instead of
    /// overflowing for absurd repeat counts.
    pub fn data_count(&self) -> usize {
        match self {
            EditDescriptor::Group { repeat, items } => {
                let inner = items
                    .iter()
                    .fold(0usize, |acc, item| acc.saturating_add(item.data_count()));
                inner.saturating_mul(*repeat)
            }
            d if d.is_data() => 1,
            _ => 0,
        }
    }
}

impl From<IntDesc> for EditDescriptor {
    fn from(d: IntDesc) -> Self {
        EditDescriptor::Int(d)
    }
}

impl From<FixedDesc> for EditDescriptor {
    fn from(d: FixedDesc) -> Self {
        EditDescriptor::Fixed(d)
    }
}

impl From<ExpDesc> for EditDescriptor {
    fn from(d: ExpDesc) -> Self {
        EditDescriptor::Exp(d)
    }
}

impl From<CharDesc> for EditDescriptor {
    fn from(d: CharDesc) -> Self {
        EditDescriptor::Char(d)
    }
}

impl From<LogicalDesc> for EditDescriptor {
    fn from(d: LogicalDesc) -> Self {
        EditDescriptor::Logical(d)
    }
}

impl fmt::Display for EditDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditDescriptor::Int(d) => write!(f, "I{}", d.width),
            EditDescriptor::Fixed(d) => write!(f, "F{}.{}", d.width, d.decimals),
            EditDescriptor::Exp(d) => {
                write!(f, "E{}.{}", d.width, d.decimals)?;
                if let Some(e) = d.exp_digits {
                    write!(f, "E{e}")?;
                }
                Ok(())
            }
            EditDescriptor::Char(CharDesc { width: None }) => f.write_str("A"),
            EditDescriptor::Char(CharDesc { width: Some(w) }) => write!(f, "A{w}"),
            EditDescriptor::Logical(d) => write!(f, "L{}", d.width),
            EditDescriptor::SignControl(mode) => f.write_str(mode.keyword()),
            EditDescriptor::Literal(text) => write!(f, "'{}'", text.replace('\'', "''")),
            EditDescriptor::RecordBreak => f.write_str("/"),
            EditDescriptor::Group { repeat, items } => {
                if *repeat != 1 {
                    write!(f, "{repeat}")?;
                }
                write_items(f, items)
            }
        }
    }
}

fn write_items(f: &mut fmt::Formatter<'_>, items: &[EditDescriptor]) -> fmt::Result {
    f.write_str("(")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str(")")
}

/// A parsed format specification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FormatList {
    pub items: Vec<EditDescriptor>,
}

impl FormatList {
    pub fn new(items: Vec<EditDescriptor>) -> Self {
        FormatList { items }
    }

    /// Number of values a render call must supply.
    pub fn data_count(&self) -> usize {
        self.items
            .iter()
            .fold(0usize, |acc, item| acc.saturating_add(item.data_count()))
    }

    /// Canonical parenthesized text; `parse(&f.to_text())` yields `f` again.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FormatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_items(f, &self.items)
    }
}

impl std::str::FromStr for FormatList {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Free-function form of [`FormatList::to_text`].
pub fn to_text(fmt: &FormatList) -> String {
    fmt.to_text()
}
