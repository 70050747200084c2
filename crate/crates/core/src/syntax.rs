//! Lexer and token cursor shared by the type and term parsers.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    One,
    Tensor,
    Plus,
    With,
    Lolli,
    LParen,
    RParen,
    LArrow,
    Semi,
    Colon,
    FatArrow,
    Bar,
    Ident(String),
    Chan(u64),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::One => f.write_str("`1`"),
            Tok::Tensor => f.write_str("`(*)`"),
            Tok::Plus => f.write_str("`(+)`"),
            Tok::With => f.write_str("`&`"),
            Tok::Lolli => f.write_str("`-o`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LArrow => f.write_str("`<-`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Chan(c) => write!(f, "`#{c}`"),
        }
    }
}

/// Syntax error with the byte offset and line/column where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
        let before = &src[..offset.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            offset,
            line,
            column,
            message: message.into(),
        }
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if src[i..].starts_with("//") {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let fixed: &[(&str, Tok)] = &[
            ("(*)", Tok::Tensor),
            ("(+)", Tok::Plus),
            ("-o", Tok::Lolli),
            ("<-", Tok::LArrow),
            ("=>", Tok::FatArrow),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("&", Tok::With),
            (";", Tok::Semi),
            (":", Tok::Colon),
            ("|", Tok::Bar),
        ];
        if let Some((s, t)) = fixed.iter().find(|(s, _)| src[i..].starts_with(s)) {
            out.push((t.clone(), start));
            i += s.len();
            continue;
        }
        if c == b'#' {
            i += 1;
            let digits = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[digits..i]
                .parse::<u64>()
                .map_err(|_| ParseError::at(src, start, "expected a channel number after `#`"))?;
            out.push((Tok::Chan(n), start));
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if &src[start..i] == "1" {
                out.push((Tok::One, start));
                continue;
            }
            return Err(ParseError::at(
                src,
                start,
                format!("unexpected number `{}`", &src[start..i]),
            ));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
            {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        }
        let ch = src[i..].chars().next().unwrap_or('?');
        return Err(ParseError::at(
            src,
            start,
            format!("unexpected character `{ch}`"),
        ));
    }
    Ok(out)
}

pub(crate) struct Cursor<'s> {
    src: &'s str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'s> Cursor<'s> {
    pub(crate) fn new(src: &'s str) -> Result<Cursor<'s>, ParseError> {
        Ok(Cursor {
            src,
            toks: lex(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |(_, o)| *o)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, self.offset(), message)
    }

    pub(crate) fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, offset, message)
    }

    pub(crate) fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.to_string()))
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }
}
