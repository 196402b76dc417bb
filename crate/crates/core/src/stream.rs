//! Stream-style message assembly.
//!
//! A [`StreamBuilder`] accumulates text the way `operator<<` does for a C++
//! stream. Values are converted by the [`crate::stringify`] layer, and
//! manipulators such as [`showpos`] or [`setprecision`] change how later
//! values are converted without emitting any text themselves.
//!
//! ```
//! use strfmt::stream::{showpos, StreamBuilder};
//!
//! let msg = StreamBuilder::new() << "Residual after " << 7 << " iterations is " << 0.125;
//! assert_eq!(msg.finish(), "Residual after 7 iterations is 0.125000");
//!
//! let msg = StreamBuilder::new() << showpos() << 5 << " " << -5;
//! assert_eq!(msg.finish(), "+5 -5");
//! ```

use std::fmt;
use std::ops::Shl;

use crate::editdesc::{self, EditDescriptor, FixedDesc, FormatList, IntDesc, SignMode};
use crate::stringify::{self, BoolStyle, DefaultRules, RealDesc, Stringifiable, Value};

/// A stream item that changes conversion state and emits no text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manipulator {
    ShowPos,
    NoShowPos,
    SetPrecision(usize),
    SetWidth(usize),
    BoolAlpha(BoolStyle),
}

impl Manipulator {
    /// What the manipulator contributes to the buffer: always nothing.
    pub fn text(&self) -> &'static str {
        ""
    }
}

pub fn showpos() -> Manipulator {
    Manipulator::ShowPos
}

pub fn noshowpos() -> Manipulator {
    Manipulator::NoShowPos
}

/// Fixed notation with `p` decimals for all later reals.
pub fn setprecision(p: usize) -> Manipulator {
    Manipulator::SetPrecision(p)
}

/// Field width for the next value only. `setw(0)` clears it.
pub fn setw(w: usize) -> Manipulator {
    Manipulator::SetWidth(w)
}

pub fn boolstyle(style: BoolStyle) -> Manipulator {
    Manipulator::BoolAlpha(style)
}

/// Conversion state carried by a stream between appends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamState {
    pub sign: SignMode,
    pub precision: Option<usize>,
    pub width: Option<usize>,
    pub bool_style: BoolStyle,
}

#[derive(Debug, Clone)]
pub struct StreamBuilder {
    buffer: String,
    state: StreamState,
    rules: DefaultRules,
}

impl Default for StreamBuilder {
    fn default() -> Self {
        StreamBuilder::with_rules(DefaultRules::default())
    }
}

impl StreamBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_rules(rules: DefaultRules) -> Self {
        StreamBuilder {
            buffer: String::new(),
            state: StreamBuilder::initial_state(&rules),
            rules,
        }
    }

    /// Starts from explicit state, e.g. to continue a split assembly.
    pub fn with_state(rules: DefaultRules, state: StreamState) -> Self {
        StreamBuilder {
            buffer: String::new(),
            state,
            rules,
        }
    }

    fn initial_state(rules: &DefaultRules) -> StreamState {
        StreamState {
            sign: SignMode::Suppress,
            precision: None,
            width: None,
            bool_style: rules.bool_style,
        }
    }

    pub fn state(&self) -> &StreamState {
        &self.state
    }

    pub fn rules(&self) -> &DefaultRules {
        &self.rules
    }

    pub fn as_str(&self) -> &str {
        &self.buffer
    }

    pub fn finish(self) -> String {
        self.buffer
    }

    /// Clears the buffer and restores the initial conversion state.
    pub fn reset(&mut self) {
        self.buffer.clear();
        self.state = StreamBuilder::initial_state(&self.rules);
    }

    /// Appends any [`StreamItem`]; the method form of `<<`.
    pub fn append<T: StreamItem>(&mut self, item: T) -> &mut Self {
        item.append_to(self);
        self
    }

    pub fn append_text(&mut self, s: &str) -> &mut Self {
        self.buffer.push_str(s);
        self
    }

    /// The integer spec the current state implies, as `v2s` spec text.
    pub fn int_spec(&self) -> String {
        self.int_format().to_text()
    }

    /// The real spec the current state implies, as `v2s` spec text.
    pub fn real_spec(&self) -> String {
        self.real_format().to_text()
    }

    fn int_format(&self) -> FormatList {
        let desc = match self.state.width {
            Some(width) => IntDesc { width },
            None => self.rules.int_spec,
        };
        FormatList::new(vec![
            EditDescriptor::SignControl(self.state.sign),
            desc.into(),
        ])
    }

    fn real_format(&self) -> FormatList {
        let desc = match (self.state.precision, self.state.width) {
            (Some(decimals), width) => RealDesc::Fixed(FixedDesc {
                width: width.unwrap_or(0),
                decimals,
            }),
            (None, Some(width)) => self.rules.real_spec.with_width(width),
            (None, None) => self.rules.real_spec,
        };
        FormatList::new(vec![
            EditDescriptor::SignControl(self.state.sign),
            desc.into(),
        ])
    }

    /// Renders a numeric value: trimmed like `v2s` unless a width override
    /// is active, in which case the raw field is kept.
    fn push_numeric(&mut self, fmt: FormatList, value: Value) {
        const OK: &str = "state-derived descriptors match the value type";
        let text = if self.state.width.take().is_some() {
            editdesc::render(
                &fmt,
                &[value],
                SignMode::Suppress,
                self.rules.newline.as_str(),
            )
            .expect(OK)
        } else {
            stringify::v2s_with(&fmt, value, &self.rules).expect(OK)
        };
        self.buffer.push_str(&text);
    }

    fn push_padded(&mut self, text: &str) {
        if let Some(width) = self.state.width.take() {
            let len = text.chars().count();
            if len < width {
                self.buffer.extend(std::iter::repeat_n(' ', width - len));
            }
        }
        self.buffer.push_str(text);
    }

    pub fn append_int(&mut self, v: i64) -> &mut Self {
        let fmt = self.int_format();
        self.push_numeric(fmt, Value::Int(v));
        self
    }

    pub fn append_real(&mut self, v: f64) -> &mut Self {
        let fmt = self.real_format();
        self.push_numeric(fmt, Value::Real(v));
        self
    }

    pub fn append_bool(&mut self, v: bool) -> &mut Self {
        let text = stringify::v2s_bool(v, Some(self.state.bool_style), &self.rules);
        self.push_padded(&text);
        self
    }

    pub fn append_user<T: Stringifiable + ?Sized>(&mut self, v: &T) -> &mut Self {
        let text = stringify::v2s_user(v);
        self.push_padded(&text);
        self
    }

    pub fn apply(&mut self, m: Manipulator) -> &mut Self {
        match m {
            Manipulator::ShowPos => self.state.sign = SignMode::Plus,
            Manipulator::NoShowPos => self.state.sign = SignMode::Suppress,
            Manipulator::SetPrecision(p) => self.state.precision = Some(p),
            Manipulator::SetWidth(0) => self.state.width = None,
            Manipulator::SetWidth(w) => self.state.width = Some(w),
            Manipulator::BoolAlpha(style) => self.state.bool_style = style,
        }
        self.buffer.push_str(m.text());
        self
    }

    pub fn showpos(&mut self) -> &mut Self {
        self.apply(Manipulator::ShowPos)
    }

    pub fn noshowpos(&mut self) -> &mut Self {
        self.apply(Manipulator::NoShowPos)
    }

    pub fn setprecision(&mut self, p: usize) -> &mut Self {
        self.apply(Manipulator::SetPrecision(p))
    }

    pub fn setw(&mut self, w: usize) -> &mut Self {
        self.apply(Manipulator::SetWidth(w))
    }
}

impl fmt::Display for StreamBuilder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.buffer)
    }
}

/// Anything that can be placed into a [`StreamBuilder`].
pub trait StreamItem {
    fn append_to(self, b: &mut StreamBuilder);
}

impl StreamItem for &str {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_text(self);
    }
}

impl StreamItem for String {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_text(&self);
    }
}

impl StreamItem for &String {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_text(self);
    }
}

impl StreamItem for i64 {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_int(self);
    }
}

impl StreamItem for i32 {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_int(self.into());
    }
}

impl StreamItem for f64 {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_real(self);
    }
}

impl StreamItem for bool {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_bool(self);
    }
}

impl StreamItem for Manipulator {
    fn append_to(self, b: &mut StreamBuilder) {
        b.apply(self);
    }
}

impl<T: Stringifiable + ?Sized> StreamItem for &T {
    fn append_to(self, b: &mut StreamBuilder) {
        b.append_user(self);
    }
}

impl<T: StreamItem> Shl<T> for StreamBuilder {
    type Output = StreamBuilder;

    fn shl(mut self, item: T) -> StreamBuilder {
        item.append_to(&mut self);
        self
    }
}
