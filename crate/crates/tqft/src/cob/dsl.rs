//! Tiny recursive-descent parser for cobordism expressions.
//!
//! Grammar (";" binds looser than "*", both left-associative):
//!   expression ::= tensor ( ";" tensor )*
//!   tensor     ::= atom ( "*" atom )*
//!   atom       ::= "unit" | "counit" | "mult" | "comult" | "id"
//!               | "twist" | "(" expression ")"
//! Whitespace is insignificant.

use super::{CobTerm, Gen, TermView};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok<'a> {
    Name(&'a str),
    Semi,
    Star,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok<'_>)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            ';' => {
                toks.push((i, Tok::Semi));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((start, Tok::Name(&src[start..i])));
            }
            c => {
                return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
            }
        }
    }
    Ok(toks)
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|&(_, t)| t)
    }

    fn next_pos(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |&(p, _)| p)
    }

    fn bump(&mut self) -> Option<(usize, Tok<'a>)> {
        let t = self.toks.get(self.pos).copied();
        self.pos += 1;
        t
    }
}

fn parse_atom(lx: &mut Lexer<'_>) -> Result<CobTerm> {
    let pos = lx.next_pos();
    match lx.bump() {
        Some((_, Tok::Name(n))) => match n {
            "unit" => Ok(CobTerm::gen(Gen::Unit)),
            "counit" => Ok(CobTerm::gen(Gen::Counit)),
            "mult" => Ok(CobTerm::gen(Gen::Mult)),
            "comult" => Ok(CobTerm::gen(Gen::Comult)),
            "id" => Ok(CobTerm::gen(Gen::Id)),
            "twist" => Ok(CobTerm::gen(Gen::Twist)),
            other => Err(Error::Parse { pos, msg: format!("unknown generator {other:?}") }),
        },
        Some((_, Tok::LParen)) => {
            let t = parse_expr(lx)?;
            match lx.bump() {
                Some((_, Tok::RParen)) => Ok(t),
                _ => Err(Error::Parse { pos: lx.next_pos(), msg: "expected ')'".into() }),
            }
        }
        Some((p, t)) => Err(Error::Parse { pos: p, msg: format!("unexpected token {t:?}") }),
        None => Err(Error::Parse { pos, msg: "unexpected end of input".into() }),
    }
}

fn parse_tensor(lx: &mut Lexer<'_>) -> Result<CobTerm> {
    let mut t = parse_atom(lx)?;
    while lx.peek() == Some(Tok::Star) {
        lx.bump();
        let rhs = parse_atom(lx)?;
        t = CobTerm::tensor(t, rhs);
    }
    Ok(t)
}

fn parse_expr(lx: &mut Lexer<'_>) -> Result<CobTerm> {
    let mut t = parse_tensor(lx)?;
    while lx.peek() == Some(Tok::Semi) {
        let (pos, _) = lx.bump().unwrap();
        let rhs = parse_tensor(lx)?;
        t = CobTerm::compose(t, rhs).map_err(|e| Error::Parse {
            pos,
            msg: e.to_string(),
        })?;
    }
    Ok(t)
}

pub fn parse(src: &str) -> Result<CobTerm> {
    let toks = lex(src)?;
    let mut lx = Lexer { src, toks, pos: 0 };
    let t = parse_expr(&mut lx)?;
    if let Some((p, tok)) = lx.bump() {
        return Err(Error::Parse { pos: p, msg: format!("trailing input at {tok:?}") });
    }
    Ok(t)
}

/// Fully parenthesized form; `parse(pretty(t))` rebuilds `t` exactly.
pub fn pretty(t: &CobTerm) -> String {
    match t.view() {
        TermView::Gen(g) => g.name().to_string(),
        TermView::Compose(f, g) => format!("({} ; {})", pretty(f), pretty(g)),
        TermView::Tensor(f, g) => format!("({} * {})", pretty(f), pretty(g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_semi_binds_looser() {
        // "a * b ; c * d" = (a*b) ; (c*d)
        let t = parse("id * id ; mult").unwrap();
        assert_eq!((t.input(), t.output()), (2, 1));
        let u = parse("(id * id) ; mult").unwrap();
        assert_eq!(t, u);
    }

    #[test]
    fn round_trip() {
        for src in [
            "mult",
            "comult ; mult",
            "unit ; comult ; (mult ; counit)",
            "(comult * id) ; (id * mult)",
            "twist ; twist",
        ] {
            let t = parse(src).unwrap();
            let printed = pretty(&t);
            assert_eq!(parse(&printed).unwrap(), t, "{src} -> {printed}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("mult ;"), Err(Error::Parse { .. })));
        assert!(matches!(parse("frob"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(mult"), Err(Error::Parse { .. })));
        assert!(matches!(parse("mult mult"), Err(Error::Parse { .. })));
        assert!(matches!(parse("@"), Err(Error::Parse { .. })));
        // arity mismatch surfaces as a parse-time error with position
        assert!(matches!(parse("mult ; mult"), Err(Error::Parse { .. })));
    }
}
