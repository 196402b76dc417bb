use super::{
    CharDesc, EditDescriptor, ExpDesc, FixedDesc, FormatList, IntDesc, LogicalDesc, SignMode,
};
use std::borrow::Cow;

use crate::stringify::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("format consumes {expected} value(s) but {supplied} were supplied")]
    Arity { expected: usize, supplied: usize },
    #[error("value {index} ({value}) cannot be rendered with {descriptor}")]
    TypeMismatch {
        index: usize,
        descriptor: String,
        value: &'static str,
    },
}

/// Renders `values` through `fmt`.
///
/// Integer vectors in `values` are expanded element by element before
/// matching against descriptors, so `index` in a type mismatch counts
/// expanded elements. The expanded value count must equal the
/// number of data descriptors after group expansion.
pub fn render(
    fmt: &FormatList,
    values: &[Value],
    sign: SignMode,
    newline: &str,
) -> Result<String, RenderError> {
    let scalars: Vec<Scalar<'_>> = values.iter().flat_map(Scalar::expand).collect();
    let expected = fmt.data_count();
    if expected != scalars.len() {
        return Err(RenderError::Arity {
            expected,
            supplied: scalars.len(),
        });
    }
    let mut state = State {
        scalars: scalars.into_iter().enumerate(),
        sign,
        newline,
        out: String::new(),
    };
    state.items(&fmt.items)?;
    Ok(state.out)
}

enum Scalar<'a> {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(Cow<'a, str>),
}

impl<'a> Scalar<'a> {
    fn expand(value: &'a Value) -> Vec<Scalar<'a>> {
        match value {
            Value::IntVector(v) => v.iter().map(|&i| Scalar::Int(i)).collect(),
            Value::Int(i) => vec![Scalar::Int(*i)],
            Value::Real(r) => vec![Scalar::Real(*r)],
            Value::Bool(b) => vec![Scalar::Bool(*b)],
            Value::Text(s) => vec![Scalar::Text(Cow::Borrowed(s))],
            Value::UserDefined(u) => vec![Scalar::Text(Cow::Owned(u.to_text()))],
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Scalar::Int(_) => "integer",
            Scalar::Real(_) => "real",
            Scalar::Bool(_) => "logical",
            Scalar::Text(_) => "character",
        }
    }
}

struct State<'a, I> {
    scalars: I,
    sign: SignMode,
    newline: &'a str,
    out: String,
}

impl<'a, 'v, I> State<'a, I>
where
    I: Iterator<Item = (usize, Scalar<'v>)>,
{
    fn items(&mut self, items: &[EditDescriptor]) -> Result<(), RenderError> {
        for item in items {
            match item {
                EditDescriptor::Group { repeat, items } => {
                    for _ in 0..*repeat {
                        self.items(items)?;
                    }
                }
                EditDescriptor::SignControl(mode) => self.sign = *mode,
                EditDescriptor::Literal(text) => self.out.push_str(text),
                EditDescriptor::RecordBreak => self.out.push_str(self.newline),
                data => self.data(data)?,
            }
        }
        Ok(())
    }

    fn data(&mut self, desc: &EditDescriptor) -> Result<(), RenderError> {
        let sign = self.sign;
        let (index, scalar) = self
            .scalars
            .next()
            .expect("arity was checked before rendering");
        let text = match (desc, scalar) {
            (EditDescriptor::Int(d), Scalar::Int(v)) => render_int(v, *d, sign),
            (EditDescriptor::Fixed(d), Scalar::Real(v)) => render_fixed(v, *d, sign),
            (EditDescriptor::Exp(d), Scalar::Real(v)) => render_exp(v, *d, sign),
            (EditDescriptor::Logical(d), Scalar::Bool(v)) => render_logical(v, *d),
            (EditDescriptor::Char(d), Scalar::Text(v)) => render_char(&v, *d),
            (desc, scalar) => {
                return Err(RenderError::TypeMismatch {
                    index,
                    descriptor: desc.to_string(),
                    value: scalar.kind(),
                })
            }
        };
        self.out.push_str(&text);
        Ok(())
    }
}

fn fit(body: String, width: usize) -> String {
    let len = body.chars().count();
    if width == 0 || len == width {
        body
    } else if len < width {
        let mut out = " ".repeat(width - len);
        out.push_str(&body);
        out
    } else {
        "*".repeat(width)
    }
}

fn sign_prefix(negative: bool, sign: SignMode) -> &'static str {
    if negative {
        "-"
    } else if sign.shows_plus() {
        "+"
    } else {
        ""
    }
}

/// `Iw`: minimal digits for width 0, otherwise right-justified in `w`
/// columns or `w` asterisks when the number does not fit.
pub fn render_int(v: i64, d: IntDesc, sign: SignMode) -> String {
    let body = format!("{}{}", sign_prefix(v < 0, sign), v.unsigned_abs());
    fit(body, d.width)
}

fn non_finite(v: f64, width: usize, sign: SignMode) -> String {
    let body = if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{}Inf", sign_prefix(v < 0.0, sign))
    };
    fit(body, width)
}

/// `Fw.d`, rounding half-to-even on the exact binary value.
///
/// The optional leading zero of a magnitude below one is kept for width 0
/// and whenever it fits; otherwise it is dropped before falling back to
/// asterisks.
pub fn render_fixed(v: f64, d: FixedDesc, sign: SignMode) -> String {
    if !v.is_finite() {
        return non_finite(v, d.width, sign);
    }
    let prefix = sign_prefix(v.is_sign_negative(), sign);
    let mut digits = format!("{:.*}", d.decimals, v.abs());
    if d.decimals == 0 {
        digits.push('.');
    }
    let full = format!("{prefix}{digits}");
    if d.width == 0 || full.len() <= d.width {
        return fit(full, d.width);
    }
    match digits.strip_prefix("0.") {
        Some(frac) if !frac.is_empty() => fit(format!("{prefix}.{frac}"), d.width),
        _ => "*".repeat(d.width),
    }
}

/// `Ew.d[Ee]` with a `0.ddd` mantissa.
///
/// Without `Ee` the exponent takes the form `E±dd`, or `±ddd` once its
/// magnitude exceeds 99. With `Ee` it is `E±` followed by exactly `e`
/// digits, and an exponent that needs more digits fills the field with
/// asterisks.
pub fn render_exp(v: f64, d: ExpDesc, sign: SignMode) -> String {
    if !v.is_finite() {
        return non_finite(v, d.width, sign);
    }
    let prefix = sign_prefix(v.is_sign_negative(), sign);
    let decimals = d.decimals.max(1);
    let (mantissa, exponent) = if v == 0.0 {
        ("0".repeat(decimals), 0i32)
    } else {
        // d significant digits in scientific form: "1.2345e1"
        let sci = format!("{:.*e}", decimals - 1, v.abs());
        let (m, e) = sci
            .split_once('e')
            .expect("scientific output has an exponent");
        let exp10: i32 = e.parse().expect("exponent is an integer");
        (m.replace('.', ""), exp10 + 1)
    };

    let exp_abs = exponent.unsigned_abs();
    let exp_sign = if exponent < 0 { '-' } else { '+' };
    let exp_text = match d.exp_digits {
        Some(e) => {
            if exp_abs.to_string().len() > e {
                return "*".repeat(d.width);
            }
            format!("E{exp_sign}{exp_abs:0e$}")
        }
        None if exp_abs <= 99 => format!("E{exp_sign}{exp_abs:02}"),
        None if exp_abs <= 999 => format!("{exp_sign}{exp_abs:03}"),
        None => return "*".repeat(d.width),
    };

    let full = format!("{prefix}0.{mantissa}{exp_text}");
    if full.len() <= d.width {
        return fit(full, d.width);
    }
    fit(format!("{prefix}.{mantissa}{exp_text}"), d.width)
}

/// `Lw`: `T` or `F` right-justified.
pub fn render_logical(v: bool, d: LogicalDesc) -> String {
    let letter = if v { "T" } else { "F" };
    fit(letter.to_string(), d.width.max(1))
}

/// `A` copies the text; `Aw` right-justifies shorter text and keeps the
/// leftmost `w` characters of longer text.
pub fn render_char(v: &str, d: CharDesc) -> String {
    match d.width {
        None => v.to_string(),
        Some(w) => {
            let len = v.chars().count();
            if len >= w {
                v.chars().take(w).collect()
            } else {
                format!("{}{v}", " ".repeat(w - len))
            }
        }
    }
}
