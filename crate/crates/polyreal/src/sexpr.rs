//! Minimal s-expression reader shared by the term parsers.
//!
//! Supports atoms, parenthesized lists, and `;` line comments. Every node
//! carries the line/column where it started so parse errors can point at
//! the offending token.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sexpr {
    Atom(String, Pos),
    List(Vec<Sexpr>, Pos),
}

impl Sexpr {
    pub fn pos(&self) -> Pos {
        match self {
            Self::Atom(_, p) | Self::List(_, p) => *p,
        }
    }
}

pub(crate) fn err_at(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Parse { msg: msg.into(), line: pos.line, col: pos.col }
}

struct Lexer<'a> {
    src: &'a [u8],
    i: usize,
    line: usize,
    col: usize,
}

#[derive(Debug)]
enum Token {
    LParen(Pos),
    RParen(Pos),
    Atom(String, Pos),
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src: src.as_bytes(), i: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.i)?;
        self.i += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.i).copied()
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b';') => {
                    while let Some(b) = self.bump() {
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        self.skip_trivia();
        let pos = self.pos();
        match self.peek() {
            None => Ok(None),
            Some(b'(') => {
                self.bump();
                Ok(Some(Token::LParen(pos)))
            }
            Some(b')') => {
                self.bump();
                Ok(Some(Token::RParen(pos)))
            }
            Some(_) => {
                let start = self.i;
                while let Some(b) = self.peek() {
                    if b.is_ascii_whitespace() || b == b'(' || b == b')' || b == b';' {
                        break;
                    }
                    self.bump();
                }
                let text = std::str::from_utf8(&self.src[start..self.i])
                    .map_err(|_| err_at(pos, "invalid utf-8 in atom"))?;
                Ok(Some(Token::Atom(text.to_string(), pos)))
            }
        }
    }
}

/// Nesting beyond this depth is rejected; it keeps recursive descent (and
/// every recursive consumer downstream) within stack bounds on hostile
/// input.
const MAX_DEPTH: u32 = 200;

fn parse_expr(lexer: &mut Lexer<'_>, depth: u32) -> Result<Sexpr> {
    if depth > MAX_DEPTH {
        return Err(err_at(lexer.pos(), "nesting too deep"));
    }
    match lexer.next_token()? {
        None => Err(err_at(lexer.pos(), "unexpected end of input")),
        Some(Token::Atom(text, pos)) => Ok(Sexpr::Atom(text, pos)),
        Some(Token::RParen(pos)) => Err(err_at(pos, "unexpected `)`")),
        Some(Token::LParen(pos)) => {
            let mut items = Vec::new();
            loop {
                let save = (lexer.i, lexer.line, lexer.col);
                match lexer.next_token()? {
                    None => return Err(err_at(pos, "unclosed `(`")),
                    Some(Token::RParen(_)) => return Ok(Sexpr::List(items, pos)),
                    Some(_) => {
                        (lexer.i, lexer.line, lexer.col) = save;
                        items.push(parse_expr(lexer, depth + 1)?);
                    }
                }
            }
        }
    }
}

/// Reads exactly one s-expression; trailing content is an error.
pub(crate) fn parse_one(src: &str) -> Result<Sexpr> {
    let mut lexer = Lexer::new(src);
    let expr = parse_expr(&mut lexer, 0)?;
    lexer.skip_trivia();
    if lexer.peek().is_some() {
        return Err(err_at(lexer.pos(), "trailing input after term"));
    }
    Ok(expr)
}
