//! Character-level cursor shared by the query and concept parsers.

use crate::error::SyntaxError;

pub(crate) struct Cursor<'a> {
    what: &'static str,
    input: &'a str,
    pos: usize,
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

impl<'a> Cursor<'a> {
    pub fn new(what: &'static str, input: &'a str) -> Self {
        Cursor {
            what,
            input,
            pos: 0,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            what: self.what,
            input: self.input.to_string(),
            offset: self.pos,
            message: message.into(),
        }
    }

    pub fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn peek_second(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().nth(1)
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.rest().chars().next()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |p| format!("`{p}`"));
            Err(self.error(format!("expected `{c}`, found {found}")))
        }
    }

    /// Identifier: letters, digits, `_`, `-`; an inner `.` is accepted when
    /// `dotted` is set and the next character continues the identifier.
    pub fn ident(&mut self, dotted: bool) -> Result<String, SyntaxError> {
        self.skip_ws();
        let mut out = String::new();
        let mut chars = self.rest().char_indices().peekable();
        while let Some((_, c)) = chars.next() {
            let keep = if is_ident_char(c) {
                true
            } else if dotted && c == '.' && !out.is_empty() {
                matches!(chars.peek(), Some((_, n)) if is_ident_char(*n))
            } else {
                false
            };
            if !keep {
                break;
            }
            out.push(c);
        }
        if out.is_empty() || out.starts_with('-') {
            return Err(self.error("expected an identifier"));
        }
        self.pos += out.len();
        Ok(out)
    }

    /// Double-quoted string with `\"` and `\\` escapes.
    pub fn quoted(&mut self) -> Result<String, SyntaxError> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string")),
                Some('"') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some(c) => out.push(c),
                    None => return Err(self.error("unterminated escape")),
                },
                Some(c) => out.push(c),
            }
        }
    }

    pub fn advance(&mut self, bytes: usize) {
        self.pos += bytes;
    }

    /// Consumes characters while `keep` holds, without skipping whitespace
    /// inside the run.
    pub fn take_while(&mut self, keep: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !keep(*c))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += len;
        &rest[..len]
    }
}
