use crate::kernel::{ChannelName, Selector};
use crate::syntax::{Cursor, ParseError, Tok};
use crate::types::parse_lolli;

use super::{Sym, Term};

const KEYWORDS: [&str; 6] = ["fwd", "let", "send", "recv", "pi1", "pi2"];

/// Whether `name` can be used as a variable.
pub fn is_valid_var(name: &str) -> bool {
    let mut chars = name.chars();
    let starts_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    starts_ok
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&name)
        && !name.starts_with("send_")
        && !name.starts_with("recv_")
}

/// Parses the surface syntax written by [`super::print_term`].
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(src)?;
    let t = term(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

fn term(cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
    let head = match cur.peek() {
        Some(Tok::LParen) => {
            cur.bump();
            let t = term(cur)?;
            cur.expect(&Tok::RParen)?;
            return Ok(t);
        }
        Some(Tok::Ident(s)) => s.clone(),
        _ => return Err(cur.unexpected("a process term")),
    };
    match head.as_str() {
        "fwd" => {
            cur.bump();
            cur.expect(&Tok::LParen)?;
            cur.expect(&Tok::LArrow)?;
            let s = sym(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(Term::Fwd(s))
        }
        "let" => {
            cur.bump();
            let x = var(cur)?;
            cur.expect(&Tok::Colon)?;
            let ty = parse_lolli(cur)?;
            cur.expect(&Tok::LArrow)?;
            let bound = delimited(cur)?;
            cur.expect(&Tok::Semi)?;
            let body = term(cur)?;
            Ok(Term::let_(&x, ty, bound, body))
        }
        "send" => {
            cur.bump();
            cur.expect(&Tok::LParen)?;
            if cur.eat(&Tok::RParen) {
                return Ok(Term::SendClose);
            }
            if let Some(sel) = selector(cur) {
                cur.expect(&Tok::RParen)?;
                cur.expect(&Tok::Semi)?;
                return Ok(Term::send_sel(sel, term(cur)?));
            }
            let s = sym(cur)?;
            cur.expect(&Tok::RParen)?;
            cur.expect(&Tok::Semi)?;
            Ok(Term::send_chan(s, term(cur)?))
        }
        "recv" => {
            cur.bump();
            cur.expect(&Tok::LParen)?;
            if matches!(cur.peek(), Some(Tok::Ident(s)) if s == "pi1") {
                let (l, r) = cases(cur)?;
                return Ok(Term::recv_case(l, r));
            }
            let x = var(cur)?;
            cur.expect(&Tok::FatArrow)?;
            let m = term(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(Term::recv_chan(&x, m))
        }
        _ if head.starts_with("send_") || head.starts_with("recv_") => {
            cur.bump();
            let on = prefix_sym(cur, &head)?;
            cur.expect(&Tok::LParen)?;
            if head.starts_with("send_") {
                if let Some(sel) = selector(cur) {
                    cur.expect(&Tok::RParen)?;
                    cur.expect(&Tok::Semi)?;
                    return Ok(Term::send_sel_on(on, sel, term(cur)?));
                }
                let s = sym(cur)?;
                cur.expect(&Tok::RParen)?;
                cur.expect(&Tok::Semi)?;
                return Ok(Term::send_chan_on(on, s, term(cur)?));
            }
            if cur.eat(&Tok::RParen) {
                cur.expect(&Tok::Semi)?;
                return Ok(Term::recv_close(on, term(cur)?));
            }
            if matches!(cur.peek(), Some(Tok::Ident(s)) if s == "pi1") {
                let (l, r) = cases(cur)?;
                return Ok(Term::recv_case_on(on, l, r));
            }
            let x = var(cur)?;
            cur.expect(&Tok::FatArrow)?;
            let m = term(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(Term::recv_chan_on(on, &x, m))
        }
        _ => Err(cur.unexpected("a process term")),
    }
}

/// A term that can precede `;` in a `let`: parenthesized or closed by its
/// own parenthesis.
fn delimited(cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
    if cur.peek() == Some(&Tok::LParen) {
        return term(cur);
    }
    let at = cur.offset();
    let t = term(cur)?;
    if !t.self_delimiting() {
        return Err(cur.error_at(at, "the bound term of a `let` must be parenthesized"));
    }
    Ok(t)
}

fn cases(cur: &mut Cursor<'_>) -> Result<(Term, Term), ParseError> {
    expect_word(cur, "pi1")?;
    cur.expect(&Tok::FatArrow)?;
    let l = term(cur)?;
    cur.expect(&Tok::Bar)?;
    expect_word(cur, "pi2")?;
    cur.expect(&Tok::FatArrow)?;
    let r = term(cur)?;
    cur.expect(&Tok::RParen)?;
    Ok((l, r))
}

fn expect_word(cur: &mut Cursor<'_>, w: &str) -> Result<(), ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if s == w => {
            cur.bump();
            Ok(())
        }
        _ => Err(cur.unexpected(&format!("`{w}`"))),
    }
}

fn selector(cur: &mut Cursor<'_>) -> Option<Selector> {
    let sel = match cur.peek() {
        Some(Tok::Ident(s)) if s == "pi1" => Selector::Pi1,
        Some(Tok::Ident(s)) if s == "pi2" => Selector::Pi2,
        _ => return None,
    };
    // `send(pi1)` only when followed by `)`; anything else is a parse error later
    cur.bump();
    Some(sel)
}

fn var(cur: &mut Cursor<'_>) -> Result<String, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if is_valid_var(s) => {
            let s = s.clone();
            cur.bump();
            Ok(s)
        }
        Some(Tok::Ident(s)) => {
            Err(cur.error(format!("`{s}` is reserved and cannot name a variable")))
        }
        _ => Err(cur.unexpected("a variable")),
    }
}

fn sym(cur: &mut Cursor<'_>) -> Result<Sym, ParseError> {
    if let Some(Tok::Chan(c)) = cur.peek() {
        let c = *c;
        cur.bump();
        return Ok(Sym::Chan(ChannelName(c)));
    }
    var(cur).map(Sym::Var)
}

/// The symbol glued to `send_`/`recv_`: either the rest of the identifier
/// or a following `#N` token.
fn prefix_sym(cur: &mut Cursor<'_>, head: &str) -> Result<Sym, ParseError> {
    let rest = &head[5..];
    if rest.is_empty() {
        return match cur.peek() {
            Some(Tok::Chan(c)) => {
                let c = *c;
                cur.bump();
                Ok(Sym::Chan(ChannelName(c)))
            }
            _ => Err(cur.unexpected("a channel after the prefix")),
        };
    }
    if !is_valid_var(rest) {
        return Err(cur.error(format!("`{rest}` is reserved and cannot name a variable")));
    }
    Ok(Sym::Var(rest.to_string()))
}
