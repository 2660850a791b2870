//! Recursive-descent parser for `.copat` and `.ccopat` sources.  Binders
//! are tracked with their kind so a covariable in term position (or the
//! reverse) is reported where it occurs.

use std::rc::Rc;

use super::lexer::{lex, Tok, Token};
use super::{Calculus, ParseError};
use crate::syntax::comp::WILDCARD;
use crate::syntax::{CompOption, CompResponse, CompTerm, Frame, MonoOption, MonoTerm, Name, Spine};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Term,
    Co,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<(String, Kind)>,
}

impl Parser {
    fn new(src: &str, calculus: Calculus) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src, calculus)?, pos: 0, scope: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        self.error_found(expected, self.peek().describe())
    }

    fn error_found(&self, expected: &str, found: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, col: t.col, expected: expected.into(), found }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Lower(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.error("a variable")),
        }
    }

    /// A variable occurrence of the given kind.
    fn occurrence(&mut self, x: &str, kind: Kind) -> Result<Name, ParseError> {
        if x == WILDCARD {
            return Err(self.error_found("a variable", "the wildcard `_`".into()));
        }
        let bound = self.scope.iter().rev().find(|(y, _)| y == x).map(|(_, k)| *k);
        match (bound, kind) {
            (Some(Kind::Co), Kind::Term) => {
                Err(self.error_found("a term variable", format!("covariable `{x}`")))
            }
            (Some(Kind::Term), Kind::Co) => {
                Err(self.error_found("a covariable", format!("term variable `{x}`")))
            }
            _ => {
                self.bump();
                Ok(Name::new(x))
            }
        }
    }

    fn eof(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Eof, "end of input")
    }

    // Monolithic calculus.

    fn mono_term(&mut self) -> Result<Rc<MonoTerm>, ParseError> {
        let mut head = self.mono_atom()?;
        loop {
            head = match self.peek().clone() {
                Tok::Lower(_) | Tok::LParen | Tok::Fun => MonoTerm::app(head, self.mono_atom()?),
                Tok::Upper(i) => {
                    self.bump();
                    MonoTerm::idx(head, Name::new(i))
                }
                Tok::Dot => {
                    self.bump();
                    MonoTerm::dot(head)
                }
                _ => return Ok(head),
            };
        }
    }

    fn mono_atom(&mut self) -> Result<Rc<MonoTerm>, ParseError> {
        match self.peek().clone() {
            Tok::Lower(x) => Ok(MonoTerm::var(self.occurrence(&x, Kind::Term)?)),
            Tok::LParen => {
                self.bump();
                let m = self.mono_term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(m)
            }
            Tok::Fun => {
                self.bump();
                self.expect(Tok::LBrace, "`{`")?;
                let mut options = Vec::new();
                if *self.peek() != Tok::RBrace {
                    options.push(self.mono_option()?);
                    while *self.peek() == Tok::Bar {
                        self.bump();
                        options.push(self.mono_option()?);
                    }
                }
                self.expect(Tok::RBrace, "`|` or `}`")?;
                Ok(MonoTerm::obj(options))
            }
            _ => Err(self.error("a term")),
        }
    }

    fn mono_option(&mut self) -> Result<MonoOption, ParseError> {
        let mut frames = Vec::new();
        let mut binders: Vec<String> = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Lower(x) => {
                    if x != WILDCARD && binders.contains(&x) {
                        return Err(self.error_found("a fresh binder", format!("duplicate binder `{x}`")));
                    }
                    self.bump();
                    frames.push(Frame::Arg(Name::new(&x)));
                    binders.push(x);
                }
                Tok::Upper(i) => {
                    self.bump();
                    frames.push(Frame::Idx(Name::new(i)));
                }
                Tok::Arrow => {
                    self.bump();
                    break;
                }
                _ => return Err(self.error("a copattern frame or `->`")),
            }
        }
        let mark = self.scope.len();
        self.scope.extend(binders.into_iter().map(|x| (x, Kind::Term)));
        let rhs = self.mono_term()?;
        self.scope.truncate(mark);
        Ok(MonoOption::new(Spine::from_frames(frames), rhs))
    }

    // Compositional calculus.

    fn response(&mut self) -> Result<Rc<CompResponse>, ParseError> {
        match self.peek().clone() {
            Tok::End => {
                self.bump();
                Ok(CompResponse::end())
            }
            Tok::Lower(k) if matches!(self.peek_at(1), Tok::Eof | Tok::RParen | Tok::RBrace) => {
                Ok(CompResponse::splat(self.occurrence(&k, Kind::Co)?))
            }
            _ => {
                let m = self.comp_term()?;
                self.expect(Tok::Bang, "`!`")?;
                Ok(CompResponse::and_then(m, self.response()?))
            }
        }
    }

    fn comp_term(&mut self) -> Result<Rc<CompTerm>, ParseError> {
        match self.peek() {
            Tok::LBrace => {
                self.bump();
                let o = self.comp_option()?;
                self.expect(Tok::RBrace, "`}`")?;
                self.expect(Tok::Question, "`?`")?;
                Ok(CompTerm::handle(o, self.comp_term()?))
            }
            Tok::Capture => {
                self.bump();
                let k = self.binder()?;
                self.expect(Tok::Arrow, "`->`")?;
                self.scope.push((k.clone(), Kind::Co));
                let r = self.response();
                self.scope.pop();
                Ok(CompTerm::capture(Name::new(k), r?))
            }
            _ => self.comp_chain(),
        }
    }

    fn comp_chain(&mut self) -> Result<Rc<CompTerm>, ParseError> {
        let mut head = self.comp_atom()?;
        loop {
            head = match self.peek().clone() {
                Tok::Lower(_) | Tok::LParen | Tok::Raise => CompTerm::app(head, self.comp_atom()?),
                Tok::Upper(i) => {
                    self.bump();
                    CompTerm::idx(head, Name::new(i))
                }
                Tok::Dot => {
                    self.bump();
                    CompTerm::dot(head)
                }
                _ => return Ok(head),
            };
        }
    }

    fn comp_atom(&mut self) -> Result<Rc<CompTerm>, ParseError> {
        match self.peek().clone() {
            Tok::Lower(x) => Ok(CompTerm::var(self.occurrence(&x, Kind::Term)?)),
            Tok::Raise => {
                self.bump();
                Ok(CompTerm::raise())
            }
            Tok::LParen => {
                self.bump();
                let m = self.comp_term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(m)
            }
            _ => Err(self.error("a term")),
        }
    }

    fn comp_option(&mut self) -> Result<Rc<CompOption>, ParseError> {
        match self.peek().clone() {
            Tok::Lower(x) => {
                self.bump();
                self.expect(Tok::Arrow, "`->`")?;
                self.scope.push((x.clone(), Kind::Term));
                let o = self.comp_option();
                self.scope.pop();
                Ok(CompOption::pop(Name::new(x), o?))
            }
            Tok::Upper(i) => {
                self.bump();
                self.expect(Tok::Arrow, "`->`")?;
                Ok(CompOption::get(Name::new(i), self.comp_option()?))
            }
            Tok::Question => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Arrow, "`->`")?;
                self.scope.push((x.clone(), Kind::Term));
                let m = self.comp_term();
                self.scope.pop();
                Ok(CompOption::done(Name::new(x), m?))
            }
            _ => Err(self.error("a variable, an index or `?`")),
        }
    }
}

pub fn mono(src: &str) -> Result<Rc<MonoTerm>, ParseError> {
    let mut p = Parser::new(src, Calculus::Mono)?;
    let m = p.mono_term()?;
    p.eof()?;
    Ok(m)
}

pub fn comp(src: &str) -> Result<Rc<CompResponse>, ParseError> {
    let mut p = Parser::new(src, Calculus::Comp)?;
    let r = p.response()?;
    p.eof()?;
    Ok(r)
}

pub fn comp_term(src: &str) -> Result<Rc<CompTerm>, ParseError> {
    let mut p = Parser::new(src, Calculus::Comp)?;
    let m = p.comp_term()?;
    p.eof()?;
    Ok(m)
}
