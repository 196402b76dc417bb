use super::{
    CharDesc, EditDescriptor, ExpDesc, FixedDesc, FormatList, IntDesc, LogicalDesc, SignMode,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("empty format specification")]
    Empty,
    #[error("unknown edit descriptor '{0}'")]
    UnknownDescriptor(String),
    #[error("missing width for '{0}'")]
    MissingWidth(char),
    #[error("missing decimals for '{0}'")]
    MissingDecimals(char),
    #[error("missing exponent digits after 'E'")]
    MissingExponentDigits,
    #[error("width of '{0}' must be positive")]
    ZeroWidth(char),
    #[error("'E' requires at least one decimal digit")]
    ZeroDecimals,
    #[error("exponent digit count must be positive")]
    ZeroExponentDigits,
    #[error("unbalanced parentheses: missing ')'")]
    MissingCloseParen,
    #[error("unbalanced parentheses: unexpected ')'")]
    UnexpectedCloseParen,
    #[error("unterminated character literal")]
    UnterminatedLiteral,
    #[error("repeat count must be positive")]
    ZeroRepeat,
    #[error("repeat count is not allowed before this item")]
    RepeatNotAllowed,
    #[error("empty group")]
    EmptyGroup,
    #[error("expected an edit descriptor")]
    ExpectedDescriptor,
    #[error("expected ',' or ')'")]
    ExpectedSeparator,
    #[error("unexpected text after closing ')'")]
    TrailingInput,
    #[error("number too large")]
    NumberTooLarge,
}

/// Parse failure. `position` is a character offset into the input text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

/// Parses a format specification.
///
/// Text starting with `(` is a full format; anything else is treated as the
/// body of one, so `F8.2` and `(F8.2)` are equivalent. Blanks outside
/// literals are ignored and letters are case-insensitive.
pub fn parse(spec_text: &str) -> Result<FormatList, ParseError> {
    let chars: Vec<char> = spec_text.chars().collect();
    if chars.iter().all(|c| c.is_whitespace()) {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let first = chars.iter().position(|c| !c.is_whitespace()).unwrap_or(0);
    let mut parser = Parser {
        chars: &chars,
        pos: 0,
    };
    if chars[first] == '(' {
        parser.pos = first + 1;
        let items = parser.list(true, false)?;
        parser.skip_blanks();
        if parser.pos < chars.len() {
            return Err(parser.error(ParseErrorKind::TrailingInput));
        }
        Ok(FormatList { items })
    } else {
        let items = parser.list(false, false)?;
        Ok(FormatList { items })
    }
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.pos, kind)
    }

    fn error_at(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn skip_blanks(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_blanks();
        self.chars.get(self.pos).copied()
    }

    fn peek_upper(&mut self) -> Option<char> {
        self.peek().map(|c| c.to_ascii_uppercase())
    }

    /// Parses items up to (and consuming) the closing `)` when `closed`,
    /// or up to end of input otherwise.
    fn list(&mut self, closed: bool, nested: bool) -> Result<Vec<EditDescriptor>, ParseError> {
        let mut items = Vec::new();
        let mut need_item = false;
        loop {
            match self.peek() {
                None if closed => return Err(self.error(ParseErrorKind::MissingCloseParen)),
                None => {
                    if need_item {
                        return Err(self.error(ParseErrorKind::ExpectedDescriptor));
                    }
                    return Ok(items);
                }
                Some(')') if closed => {
                    if need_item {
                        return Err(self.error(ParseErrorKind::ExpectedDescriptor));
                    }
                    if nested && items.is_empty() {
                        return Err(self.error(ParseErrorKind::EmptyGroup));
                    }
                    self.pos += 1;
                    return Ok(items);
                }
                Some(')') => return Err(self.error(ParseErrorKind::UnexpectedCloseParen)),
                Some(_) => {}
            }

            let item = self.item()?;
            let slash = ends_with_slash(&item);
            items.push(item);

            // Commas are optional around '/'.
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    need_item = true;
                }
                Some('/') => need_item = false,
                Some(_) if slash => need_item = false,
                Some(')') | None => need_item = false,
                Some(_) => return Err(self.error(ParseErrorKind::ExpectedSeparator)),
            }
        }
    }

    fn item(&mut self) -> Result<EditDescriptor, ParseError> {
        let start = self.pos;
        let repeat = match self.peek() {
            Some(c) if c.is_ascii_digit() => Some(self.number()?),
            _ => None,
        };
        if repeat == Some(0) {
            return Err(self.error_at(start, ParseErrorKind::ZeroRepeat));
        }

        let letter_pos = self.pos;
        let Some(c) = self.peek_upper() else {
            return Err(self.error(ParseErrorKind::ExpectedDescriptor));
        };

        let single = match c {
            '(' => {
                self.pos += 1;
                let items = self.list(true, true)?;
                return Ok(EditDescriptor::Group {
                    repeat: repeat.unwrap_or(1),
                    items,
                });
            }
            '\'' | '"' => {
                if repeat.is_some() {
                    return Err(self.error_at(start, ParseErrorKind::RepeatNotAllowed));
                }
                return self.literal(c);
            }
            '/' => {
                self.pos += 1;
                EditDescriptor::RecordBreak
            }
            'S' => {
                if repeat.is_some() {
                    return Err(self.error_at(start, ParseErrorKind::RepeatNotAllowed));
                }
                self.pos += 1;
                let mode = match self.chars.get(self.pos).map(|c| c.to_ascii_uppercase()) {
                    Some('P') => {
                        self.pos += 1;
                        SignMode::Plus
                    }
                    Some('S') => {
                        self.pos += 1;
                        SignMode::Suppress
                    }
                    _ => SignMode::ProcessorDefault,
                };
                return Ok(EditDescriptor::SignControl(mode));
            }
            'I' => {
                self.pos += 1;
                let width = self.required_number('I')?;
                IntDesc { width }.into()
            }
            'F' => {
                self.pos += 1;
                let width = self.required_number('F')?;
                let decimals = self.decimals('F')?;
                FixedDesc { width, decimals }.into()
            }
            'E' => {
                self.pos += 1;
                if let Some(next @ ('S' | 'N')) =
                    self.chars.get(self.pos).map(|c| c.to_ascii_uppercase())
                {
                    return Err(self.error_at(
                        letter_pos,
                        ParseErrorKind::UnknownDescriptor(format!("E{next}")),
                    ));
                }
                let width_pos = self.pos;
                let width = self.required_number('E')?;
                if width == 0 {
                    return Err(self.error_at(width_pos, ParseErrorKind::ZeroWidth('E')));
                }
                let dec_pos = self.pos;
                let decimals = self.decimals('E')?;
                if decimals == 0 {
                    return Err(self.error_at(dec_pos, ParseErrorKind::ZeroDecimals));
                }
                let exp_digits =
                    if self.chars.get(self.pos).map(|c| c.to_ascii_uppercase()) == Some('E') {
                        self.pos += 1;
                        let e_pos = self.pos;
                        match self.chars.get(self.pos) {
                            Some(c) if c.is_ascii_digit() => {}
                            _ => return Err(self.error(ParseErrorKind::MissingExponentDigits)),
                        }
                        let e = self.number()?;
                        if e == 0 {
                            return Err(self.error_at(e_pos, ParseErrorKind::ZeroExponentDigits));
                        }
                        Some(e)
                    } else {
                        None
                    };
                ExpDesc {
                    width,
                    decimals,
                    exp_digits,
                }
                .into()
            }
            'A' => {
                self.pos += 1;
                let width = match self.chars.get(self.pos) {
                    Some(c) if c.is_ascii_digit() => {
                        let w_pos = self.pos;
                        let w = self.number()?;
                        if w == 0 {
                            return Err(self.error_at(w_pos, ParseErrorKind::ZeroWidth('A')));
                        }
                        Some(w)
                    }
                    _ => None,
                };
                CharDesc { width }.into()
            }
            'L' => {
                self.pos += 1;
                let w_pos = self.pos;
                let width = self.required_number('L')?;
                if width == 0 {
                    return Err(self.error_at(w_pos, ParseErrorKind::ZeroWidth('L')));
                }
                LogicalDesc { width }.into()
            }
            c if c.is_ascii_alphabetic() => {
                let name: String = self.chars[self.pos..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphabetic())
                    .map(|c| c.to_ascii_uppercase())
                    .collect();
                return Err(self.error_at(letter_pos, ParseErrorKind::UnknownDescriptor(name)));
            }
            ')' | ',' => return Err(self.error(ParseErrorKind::ExpectedDescriptor)),
            other => {
                return Err(
                    self.error_at(letter_pos, ParseErrorKind::UnknownDescriptor(other.into()))
                )
            }
        };

        Ok(match repeat {
            Some(n) if n > 1 => EditDescriptor::Group {
                repeat: n,
                items: vec![single],
            },
            _ => single,
        })
    }

    fn literal(&mut self, quote: char) -> Result<EditDescriptor, ParseError> {
        let start = self.pos;
        self.pos += 1;
        let mut text = String::new();
        loop {
            match self.chars.get(self.pos) {
                None => return Err(self.error_at(start, ParseErrorKind::UnterminatedLiteral)),
                Some(&c) if c == quote => {
                    if self.chars.get(self.pos + 1) == Some(&quote) {
                        text.push(quote);
                        self.pos += 2;
                    } else {
                        self.pos += 1;
                        return Ok(EditDescriptor::Literal(text));
                    }
                }
                Some(&c) => {
                    text.push(c);
                    self.pos += 1;
                }
            }
        }
    }

    /// Digits immediately following the current position (no blank skipping
    /// between a descriptor letter and its width).
    fn required_number(&mut self, letter: char) -> Result<usize, ParseError> {
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => Err(self.error(ParseErrorKind::MissingWidth(letter))),
        }
    }

    fn decimals(&mut self, letter: char) -> Result<usize, ParseError> {
        if self.chars.get(self.pos) != Some(&'.') {
            return Err(self.error(ParseErrorKind::MissingDecimals(letter)));
        }
        self.pos += 1;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => Err(self.error(ParseErrorKind::MissingDecimals(letter))),
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(d) = self.chars.get(self.pos).and_then(|c| c.to_digit(10)) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d as usize))
                .ok_or_else(|| self.error_at(start, ParseErrorKind::NumberTooLarge))?;
            self.pos += 1;
        }
        Ok(value)
    }
}

fn ends_with_slash(item: &EditDescriptor) -> bool {
    match item {
        EditDescriptor::RecordBreak => true,
        EditDescriptor::Group { items, .. } => {
            items.len() == 1 && matches!(items[0], EditDescriptor::RecordBreak)
        }
        _ => false,
    }
}
