use thiserror::Error;

use super::{name, BaseDecl, Mode, Program, Signature, Term, Type};
use crate::reward::{is_prob, parse_rational, Prob, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semi,
    Arrow,
    Dot,
    Plus,
    EqEq,
    Leq,
    Eq,
    Star,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(r) => format!("`{r}`"),
        Tok::Eof => "end of input".into(),
        other => {
            let s = match other {
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LAngle => "<",
                Tok::RAngle => ">",
                Tok::LBrack => "[",
                Tok::RBrack => "]",
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::Comma => ",",
                Tok::Colon => ":",
                Tok::Semi => ";",
                Tok::Arrow => "->",
                Tok::Dot => ".",
                Tok::Plus => "+",
                Tok::EqEq => "==",
                Tok::Leq => "<=",
                Tok::Eq => "=",
                Tok::Star => "*",
                _ => unreachable!(),
            };
            format!("`{s}`")
        }
    }
}

const KEYWORDS: &[&str] = &[
    "or", "if", "then", "else", "fun", "let", "in", "fst", "snd", "oplus", "tt", "ff", "mode",
    "base", "Bool", "Rew", "Unit",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, at: usize, msg: String) -> ParseError {
        let (line, col) = line_col(self.src, at);
        ParseError { line, col, msg }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        let bytes = self.src.as_bytes();
        loop {
            while self.pos < bytes.len() {
                let c = bytes[self.pos];
                if c.is_ascii_whitespace() {
                    self.pos += 1;
                } else if c == b'#' || (c == b'/' && bytes.get(self.pos + 1) == Some(&b'/')) {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                } else {
                    break;
                }
            }
            let start = self.pos;
            if start >= bytes.len() {
                out.push((Tok::Eof, start));
                return Ok(out);
            }
            let c = bytes[start];
            let next = bytes.get(start + 1).copied();
            let tok = if c.is_ascii_digit() || (c == b'-' && next.is_some_and(|d| d.is_ascii_digit())) {
                self.pos += 1;
                self.digits();
                if bytes.get(self.pos) == Some(&b'/')
                    && bytes.get(self.pos + 1).is_some_and(|d| d.is_ascii_digit())
                {
                    self.pos += 1;
                    self.digits();
                }
                let text = &self.src[start..self.pos];
                let r = parse_rational(text).map_err(|e| self.err(start, e.to_string()))?;
                Tok::Num(r)
            } else if c.is_ascii_alphabetic() || c == b'_' {
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric()
                        || bytes[self.pos] == b'_'
                        || bytes[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            } else {
                let (tok, len) = match (c, next) {
                    (b'-', Some(b'>')) => (Tok::Arrow, 2),
                    (b'<', Some(b'=')) => (Tok::Leq, 2),
                    (b'=', Some(b'=')) => (Tok::EqEq, 2),
                    (b'(', _) => (Tok::LParen, 1),
                    (b')', _) => (Tok::RParen, 1),
                    (b'<', _) => (Tok::LAngle, 1),
                    (b'>', _) => (Tok::RAngle, 1),
                    (b'[', _) => (Tok::LBrack, 1),
                    (b']', _) => (Tok::RBrack, 1),
                    (b'{', _) => (Tok::LBrace, 1),
                    (b'}', _) => (Tok::RBrace, 1),
                    (b',', _) => (Tok::Comma, 1),
                    (b':', _) => (Tok::Colon, 1),
                    (b';', _) => (Tok::Semi, 1),
                    (b'.', _) => (Tok::Dot, 1),
                    (b'+', _) => (Tok::Plus, 1),
                    (b'=', _) => (Tok::Eq, 1),
                    (b'*', _) => (Tok::Star, 1),
                    _ => {
                        let ch = self.src[start..].chars().next().unwrap();
                        return Err(self.err(start, format!("unexpected character `{ch}`")));
                    }
                };
                self.pos += len;
                tok
            };
            out.push((tok, start));
        }
    }

    fn digits(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
    }
}

fn line_col(src: &str, at: usize) -> (usize, usize) {
    let before = &src[..at.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    i: usize,
    sig: Signature,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str, sig: Signature) -> PResult<Self> {
        let toks = Lexer { src, pos: 0 }.tokens()?;
        Ok(Parser { src, toks, i: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.i + 1).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err_here(&self, msg: String) -> ParseError {
        let (line, col) = line_col(self.src, self.toks[self.i].1);
        ParseError { line, col, msg }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {}, found {}", describe(&t), describe(self.peek()))))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.err_here(format!("expected `{kw}`, found {}", describe(self.peek()))))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.err_here(format!("expected identifier, found {}", describe(&t)))),
        }
    }

    fn number(&mut self) -> PResult<Rational> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(r)
            }
            t => Err(self.err_here(format!("expected rational literal, found {}", describe(&t)))),
        }
    }

    fn prob(&mut self) -> PResult<Prob> {
        let p = self.number()?;
        if !is_prob(&p) {
            return Err(self.err_here(format!("probability {p} is outside [0,1]")));
        }
        Ok(p)
    }

    fn eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.err_here(format!("unexpected {} after end of term", describe(self.peek()))))
        }
    }

    // Types: `*` binds tighter than `->`; `->` associates to the right.
    fn ty(&mut self) -> PResult<Type> {
        let lhs = self.ty_prod()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn ty_prod(&mut self) -> PResult<Type> {
        let mut lhs = self.ty_atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.ty_atom()?;
            lhs = Type::prod(lhs, rhs);
        }
        Ok(lhs)
    }

    fn ty_atom(&mut self) -> PResult<Type> {
        match self.bump() {
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "Bool" => Ok(Type::Bool),
                "Rew" => Ok(Type::Rew),
                "Unit" => Ok(Type::Unit),
                _ if self.sig.has_base(&s) => Ok(Type::Base(name(&s))),
                _ => {
                    self.i -= 1;
                    Err(self.err_here(format!("unknown type `{s}`")))
                }
            },
            t => {
                self.i -= 1;
                Err(self.err_here(format!("expected a type, found {}", describe(&t))))
            }
        }
    }

    fn prelude(&mut self) -> PResult<(Mode, bool)> {
        let mut mode = None;
        loop {
            if self.is_kw("mode") && matches!(self.peek2(), Tok::Ident(_)) {
                self.bump();
                let m = match self.bump() {
                    Tok::Ident(s) if s == "rewards" => Mode::Rewards,
                    Tok::Ident(s) if s == "prob" => Mode::Prob,
                    _ => {
                        self.i -= 1;
                        return Err(self.err_here("expected `rewards` or `prob`".into()));
                    }
                };
                if mode.is_some_and(|old| old != m) {
                    return Err(self.err_here("conflicting mode declarations".into()));
                }
                mode = Some(m);
                if *self.peek() == Tok::Semi {
                    self.bump();
                }
            } else if self.is_kw("base") {
                self.bump();
                let bname = self.ident()?;
                if self.sig.has_base(&bname) || ["Bool", "Rew", "Unit"].contains(&bname.as_str()) {
                    return Err(self.err_here(format!("base type `{bname}` declared twice")));
                }
                self.expect(Tok::Eq)?;
                self.expect(Tok::LBrace)?;
                let mut cs = vec![];
                loop {
                    let c = self.ident()?;
                    if self.sig.lookup_constant(&c).is_some() || cs.iter().any(|x: &super::Name| &**x == c) {
                        return Err(self.err_here(format!("constant `{c}` declared twice")));
                    }
                    cs.push(name(&c));
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RBrace)?;
                if *self.peek() == Tok::Semi {
                    self.bump();
                }
                self.sig.bases.push(BaseDecl { name: name(&bname), constants: cs });
            } else {
                return Ok((mode.unwrap_or_default(), mode.is_some()));
            }
        }
    }

    // Precedence, loosest first: if/fun/let, or, +[p], + == <=, `.`, application.
    fn term(&mut self) -> PResult<Term> {
        if self.is_kw("if") || self.is_kw("fun") || self.is_kw("let") {
            return self.binder();
        }
        self.or_level()
    }

    fn binder(&mut self) -> PResult<Term> {
        if self.is_kw("if") {
            self.bump();
            let c = self.term()?;
            self.expect_kw("then")?;
            let t = self.term()?;
            self.expect_kw("else")?;
            let e = self.term()?;
            Ok(Term::ite(c, t, e))
        } else if self.is_kw("fun") {
            self.bump();
            self.expect(Tok::LParen)?;
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Arrow)?;
            let body = self.term()?;
            Ok(Term::lam(&x, ty, body))
        } else {
            self.expect_kw("let")?;
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Eq)?;
            let m = self.term()?;
            self.expect_kw("in")?;
            let n = self.term()?;
            Ok(Term::let_in(&x, ty, m, n))
        }
    }

    fn or_level(&mut self) -> PResult<Term> {
        let mut lhs = self.pchoice_level()?;
        while self.is_kw("or") {
            self.bump();
            let rhs = self.pchoice_level()?;
            lhs = Term::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn pchoice_level(&mut self) -> PResult<Term> {
        let lhs = self.arith_level()?;
        if *self.peek() == Tok::Plus && *self.peek2() == Tok::LBrack {
            self.bump();
            self.bump();
            let p = self.prob()?;
            self.expect(Tok::RBrack)?;
            let rhs = self.pchoice_level()?;
            return Ok(Term::pchoice(p, lhs, rhs));
        }
        Ok(lhs)
    }

    fn arith_level(&mut self) -> PResult<Term> {
        let mut lhs = self.reward_level()?;
        loop {
            match self.peek() {
                Tok::Plus if *self.peek2() != Tok::LBrack => {
                    self.bump();
                    let rhs = self.reward_level()?;
                    lhs = Term::plus(lhs, rhs);
                }
                Tok::EqEq => {
                    self.bump();
                    let rhs = self.reward_level()?;
                    return Ok(Term::eq(lhs, rhs));
                }
                Tok::Leq => {
                    self.bump();
                    let rhs = self.reward_level()?;
                    return Ok(Term::leq(lhs, rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn reward_level(&mut self) -> PResult<Term> {
        let lhs = self.app_level()?;
        if *self.peek() == Tok::Dot {
            self.bump();
            let rhs = self.reward_level()?;
            return Ok(Term::reward(lhs, rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Num(_) | Tok::LParen | Tok::LAngle | Tok::Star => true,
            Tok::Ident(s) => !matches!(s.as_str(), "or" | "then" | "else" | "in"),
            _ => false,
        }
    }

    fn app_level(&mut self) -> PResult<Term> {
        let mut f = self.prefix()?;
        while self.starts_atom() {
            let a = self.prefix()?;
            f = Term::app(f, a);
        }
        Ok(f)
    }

    fn prefix(&mut self) -> PResult<Term> {
        if self.is_kw("fst") {
            self.bump();
            return Ok(Term::fst(self.prefix()?));
        }
        if self.is_kw("snd") {
            self.bump();
            return Ok(Term::snd(self.prefix()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Term::rew(r))
            }
            Tok::Star => {
                self.bump();
                Ok(Term::Star)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RAngle)?;
                Ok(Term::pair(a, b))
            }
            Tok::Ident(s) => match s.as_str() {
                "tt" => {
                    self.bump();
                    Ok(Term::tt())
                }
                "ff" => {
                    self.bump();
                    Ok(Term::ff())
                }
                "if" | "fun" | "let" => self.binder(),
                "oplus" => {
                    self.bump();
                    self.expect(Tok::LBrack)?;
                    let p = self.prob()?;
                    self.expect(Tok::RBrack)?;
                    self.expect(Tok::LParen)?;
                    let a = self.term()?;
                    self.expect(Tok::Comma)?;
                    let b = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::oplus(p, a, b))
                }
                _ => {
                    if let Some(c) = self.sig.lookup_constant(&s) {
                        self.bump();
                        return Ok(Term::Const(c));
                    }
                    let x = self.ident()?;
                    Ok(Term::var(&x))
                }
            },
            t => Err(self.err_here(format!("expected a term, found {}", describe(&t)))),
        }
    }
}

/// Parses a whole source file: optional `mode` and `base` declarations, then one term.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser::new(src, Signature::default())?;
    let (mode, mode_declared) = p.prelude()?;
    let term = p.term()?;
    p.eof()?;
    Ok(Program { mode, mode_declared, sig: p.sig, term })
}

/// Parses a bare term against an existing signature.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, sig.clone())?;
    let t = p.term()?;
    p.eof()?;
    Ok(t)
}

pub fn parse_type(src: &str, sig: &Signature) -> Result<Type, ParseError> {
    let mut p = Parser::new(src, sig.clone())?;
    let t = p.ty()?;
    p.eof()?;
    Ok(t)
}
