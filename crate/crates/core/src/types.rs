//! Session types over `1`, `⊗`, `⊕`, `&` and `⊸`, with an ASCII syntax:
//!
//! ```text
//! T ::= 1 | T (*) T | T (+) T | T & T | T -o T | ( T )
//! ```
//!
//! `-o` binds loosest and associates to the right, `(*)` binds tightest and
//! also associates to the right. `(+)` and `&` sit in between and do not
//! associate: `1 (+) 1 & 1` and `1 (+) 1 (+) 1` need parentheses.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::syntax::{Cursor, ParseError, Tok};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SessionType {
    One,
    Tensor(Box<SessionType>, Box<SessionType>),
    Plus(Box<SessionType>, Box<SessionType>),
    With(Box<SessionType>, Box<SessionType>),
    Lolli(Box<SessionType>, Box<SessionType>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    Tensor,
    Plus,
    With,
    Lolli,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::Tensor,
        Connective::Plus,
        Connective::With,
        Connective::Lolli,
    ];
    /// Selectors and close only: the fragment finite automata can inhabit.
    pub const FRAGMENT: [Connective; 2] = [Connective::Plus, Connective::With];

    pub fn build(self, l: SessionType, r: SessionType) -> SessionType {
        let (l, r) = (Box::new(l), Box::new(r));
        match self {
            Connective::Tensor => SessionType::Tensor(l, r),
            Connective::Plus => SessionType::Plus(l, r),
            Connective::With => SessionType::With(l, r),
            Connective::Lolli => SessionType::Lolli(l, r),
        }
    }
}

impl SessionType {
    pub fn tensor(l: SessionType, r: SessionType) -> SessionType {
        SessionType::Tensor(Box::new(l), Box::new(r))
    }

    pub fn plus(l: SessionType, r: SessionType) -> SessionType {
        SessionType::Plus(Box::new(l), Box::new(r))
    }

    pub fn with(l: SessionType, r: SessionType) -> SessionType {
        SessionType::With(Box::new(l), Box::new(r))
    }

    pub fn lolli(l: SessionType, r: SessionType) -> SessionType {
        SessionType::Lolli(Box::new(l), Box::new(r))
    }

    pub fn children(&self) -> Option<(&SessionType, &SessionType)> {
        match self {
            SessionType::One => None,
            SessionType::Tensor(l, r)
            | SessionType::Plus(l, r)
            | SessionType::With(l, r)
            | SessionType::Lolli(l, r) => Some((l, r)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn contains_lolli(&self) -> bool {
        match self {
            SessionType::One => false,
            SessionType::Lolli(..) => true,
            _ => self
                .children()
                .is_some_and(|(l, r)| l.contains_lolli() || r.contains_lolli()),
        }
    }

    /// Built from `1`, `⊕` and `&` only.
    pub fn in_selection_fragment(&self) -> bool {
        match self {
            SessionType::One => true,
            SessionType::Plus(l, r) | SessionType::With(l, r) => {
                l.in_selection_fragment() && r.in_selection_fragment()
            }
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            SessionType::One => 3,
            SessionType::Tensor(..) => 2,
            SessionType::Plus(..) | SessionType::With(..) => 1,
            SessionType::Lolli(..) => 0,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        let parens = self.precedence() < level;
        if parens {
            f.write_str("(")?;
        }
        match self {
            SessionType::One => f.write_str("1")?,
            SessionType::Tensor(l, r) => {
                l.fmt_at(f, 3)?;
                f.write_str(" (*) ")?;
                r.fmt_at(f, 2)?;
            }
            SessionType::Plus(l, r) | SessionType::With(l, r) => {
                l.fmt_at(f, 2)?;
                f.write_str(if matches!(self, SessionType::Plus(..)) {
                    " (+) "
                } else {
                    " & "
                })?;
                r.fmt_at(f, 2)?;
            }
            SessionType::Lolli(l, r) => {
                l.fmt_at(f, 1)?;
                f.write_str(" -o ")?;
                r.fmt_at(f, 0)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

pub fn print_type(t: &SessionType) -> String {
    t.to_string()
}

pub fn parse_type(src: &str) -> Result<SessionType, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = parse_lolli(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

pub(crate) fn parse_lolli(cur: &mut Cursor<'_>) -> Result<SessionType, ParseError> {
    let left = parse_sum(cur)?;
    if cur.eat(&Tok::Lolli) {
        let right = parse_lolli(cur)?;
        return Ok(SessionType::lolli(left, right));
    }
    Ok(left)
}

fn parse_sum(cur: &mut Cursor<'_>) -> Result<SessionType, ParseError> {
    let left = parse_tensor(cur)?;
    let op = match cur.peek() {
        Some(Tok::Plus) => Connective::Plus,
        Some(Tok::With) => Connective::With,
        _ => return Ok(left),
    };
    cur.bump();
    let right = parse_tensor(cur)?;
    if matches!(cur.peek(), Some(Tok::Plus | Tok::With)) {
        return Err(cur.error("`(+)` and `&` do not associate; add parentheses"));
    }
    Ok(op.build(left, right))
}

fn parse_tensor(cur: &mut Cursor<'_>) -> Result<SessionType, ParseError> {
    let left = parse_atom(cur)?;
    if cur.eat(&Tok::Tensor) {
        let right = parse_tensor(cur)?;
        return Ok(SessionType::tensor(left, right));
    }
    Ok(left)
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<SessionType, ParseError> {
    match cur.peek() {
        Some(Tok::One) => {
            cur.bump();
            Ok(SessionType::One)
        }
        Some(Tok::LParen) => {
            cur.bump();
            let t = parse_lolli(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        _ => Err(cur.unexpected("a type")),
    }
}

impl FromStr for SessionType {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

impl Serialize for SessionType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SessionType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_type(&s).map_err(serde::de::Error::custom)
    }
}

/// Every type with at most `max_size` nodes built from `connectives`.
pub fn enumerate_types(max_size: usize, connectives: &[Connective]) -> Vec<SessionType> {
    let mut by_size: Vec<Vec<SessionType>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1].push(SessionType::One);
    }
    for n in 2..=max_size {
        let mut here = Vec::new();
        for ls in 1..n - 1 {
            let rs = n - 1 - ls;
            for l in &by_size[ls] {
                for r in &by_size[rs] {
                    for c in connectives {
                        here.push(c.build(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_size[n] = here;
    }
    by_size.into_iter().flatten().collect()
}

/// A random type with at most `max_size` nodes.
pub fn random_type<R: Rng + ?Sized>(
    rng: &mut R,
    max_size: usize,
    connectives: &[Connective],
) -> SessionType {
    let max_internal = max_size.saturating_sub(1) / 2;
    let internal = rng.gen_range(0..=max_internal);
    random_type_with(rng, internal, connectives)
}

fn random_type_with<R: Rng + ?Sized>(
    rng: &mut R,
    internal: usize,
    connectives: &[Connective],
) -> SessionType {
    if internal == 0 || connectives.is_empty() {
        return SessionType::One;
    }
    let left = rng.gen_range(0..internal);
    let c = connectives[rng.gen_range(0..connectives.len())];
    c.build(
        random_type_with(rng, left, connectives),
        random_type_with(rng, internal - 1 - left, connectives),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one() -> SessionType {
        SessionType::One
    }

    #[test]
    fn parses_bitflip_protocol() {
        let t = parse_type("(1 (+) 1) & (1 (+) 1)").unwrap();
        assert_eq!(
            t,
            SessionType::with(
                SessionType::plus(one(), one()),
                SessionType::plus(one(), one())
            )
        );
        assert_eq!(print_type(&t), "(1 (+) 1) & (1 (+) 1)");
    }

    #[test]
    fn atom_and_lolli_associativity() {
        assert_eq!(parse_type("1").unwrap(), one());
        assert_eq!(print_type(&one()), "1");
        assert_eq!(
            parse_type("1 -o 1 -o 1").unwrap(),
            SessionType::lolli(one(), SessionType::lolli(one(), one()))
        );
        assert_eq!(
            parse_type("1 (*) 1 (+) 1").unwrap(),
            SessionType::plus(SessionType::tensor(one(), one()), one())
        );
        assert_eq!(
            parse_type("1 (*) 1 (*) 1").unwrap(),
            SessionType::tensor(one(), SessionType::tensor(one(), one()))
        );
    }

    #[test]
    fn mixing_sum_and_with_needs_parentheses() {
        let e = parse_type("1 (+) 1 & 1").unwrap_err();
        assert_eq!(e.offset, 8);
        assert!(parse_type("1 (+) 1 (+) 1").is_err());
        assert!(parse_type("(1 (+) 1) (+) 1").is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_type("1 (*) ").unwrap_err();
        assert_eq!(e.offset, 6);
        let e = parse_type("(1 -o 1").unwrap_err();
        assert_eq!((e.line, e.column), (1, 8));
        let e = parse_type("2").unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(parse_type("").is_err());
        assert!(parse_type("1 1").is_err());
    }

    #[test]
    fn enumeration_counts() {
        // Catalan(k) shapes times 4^k labellings for k internal nodes
        assert_eq!(enumerate_types(1, &Connective::ALL).len(), 1);
        assert_eq!(enumerate_types(3, &Connective::ALL).len(), 1 + 4);
        assert_eq!(enumerate_types(5, &Connective::ALL).len(), 1 + 4 + 2 * 16);
        assert_eq!(enumerate_types(4, &Connective::FRAGMENT).len(), 3);
    }

    pub(crate) fn arb_type(depth: u32) -> impl Strategy<Value = SessionType> {
        Just(SessionType::One).prop_recursive(depth, 256, 2, |inner| {
            (inner.clone(), inner, 0..4usize).prop_map(|(l, r, c)| Connective::ALL[c].build(l, r))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(t in arb_type(8)) {
            let text = print_type(&t);
            prop_assert_eq!(parse_type(&text).unwrap(), t);
        }

        #[test]
        fn serde_round_trip(t in arb_type(6)) {
            let json = serde_json::to_string(&t).unwrap();
            let back: SessionType = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
