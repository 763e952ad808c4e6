//! Recursive-descent parser producing A-normal-form programs.
//!
//! Expression precedence, loosest first: binders (`let`, `\`, `@i.`,
//! `lift`) extend as far right as possible; then `e :: T`; then right-list
//! extension `xs : x` (left-associative); then application; then postfix
//! index application `e @ I`, whose index is read at additive level.

use std::collections::HashSet;

use thiserror::Error;

use super::ast::{ArrowType, CircType, Program, Scheme, Term, Type, Value};
use super::lexer::{tokenize, Pos, Tok, Token};
use crate::circuit::WireType;
use crate::index::{IndexTerm, WireMultiset};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub found: String,
}

const KEYWORDS: [&str; 8] = ["let", "in", "lift", "force", "box", "apply", "return", "fold"];

#[derive(Clone, Debug)]
enum Pat {
    Var(String),
    Tuple(Box<Pat>, Box<Pat>),
}

/// Surface expressions before conversion to A-normal form.
#[derive(Clone, Debug)]
enum Expr {
    Var(String),
    Unit,
    Nil,
    Pair(Box<Expr>, Box<Expr>),
    RCons(Box<Expr>, Box<Expr>),
    Abs(Pat, Type, Box<Expr>),
    Lift(Box<Expr>),
    IndexAbs(String, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Force(Box<Expr>),
    Return(Box<Expr>),
    Let(Pat, Box<Expr>, Box<Expr>),
    Fold(Box<Expr>, Box<Expr>, Box<Expr>),
    Apply(Box<Expr>, Box<Expr>),
    Box(Vec<String>, Type, Box<Expr>),
    IndexApp(Box<Expr>, IndexTerm),
    Annot(Box<Expr>, Type),
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str) -> Self {
        Parser { toks: tokenize(src), at: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            pos: self.toks[self.at].pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&[&t.to_string()])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(x) if !KEYWORDS.contains(&x.as_str()) => {
                self.bump();
                Ok(x)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn nat(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error(&["natural number"]),
        }
    }

    // ---- index terms -------------------------------------------------

    fn index(&mut self) -> PResult<IndexTerm> {
        if let Tok::Ident(x) = self.peek().clone() {
            if matches!(x.as_str(), "sum" | "max" | "seq" | "par") && self.peek_at(1) == &Tok::LBracket {
                self.bump();
                self.bump();
                let i = self.ident()?;
                self.expect(Tok::Less)?;
                let bound = self.index()?;
                self.expect(Tok::RBracket)?;
                let body = self.index()?;
                return Ok(match x.as_str() {
                    "sum" => IndexTerm::sum(&i, bound, body),
                    "max" => IndexTerm::big_max(&i, bound, body),
                    "seq" => IndexTerm::bounded_seq(&i, bound, body),
                    _ => IndexTerm::bounded_par(&i, bound, body),
                });
            }
        }
        self.index_additive()
    }

    fn index_additive(&mut self) -> PResult<IndexTerm> {
        let mut acc = self.index_mult()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = IndexTerm::Plus(Box::new(acc), Box::new(self.index_mult()?));
            } else if self.eat(&Tok::Minus) {
                acc = IndexTerm::Minus(Box::new(acc), Box::new(self.index_mult()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn index_mult(&mut self) -> PResult<IndexTerm> {
        let mut acc = self.index_atom()?;
        while self.eat(&Tok::Star) {
            acc = IndexTerm::Times(Box::new(acc), Box::new(self.index_atom()?));
        }
        Ok(acc)
    }

    fn index_args(&mut self) -> PResult<Vec<IndexTerm>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.index()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(args)
    }

    fn index_binary(&mut self) -> PResult<(IndexTerm, IndexTerm)> {
        let args = self.index_args()?;
        match <[IndexTerm; 2]>::try_from(args) {
            Ok([a, b]) => Ok((a, b)),
            Err(_) => self.error(&["two arguments"]),
        }
    }

    fn wire_type(&mut self) -> PResult<WireType> {
        match self.peek() {
            Tok::Ident(x) if x == "Qubit" => {
                self.bump();
                Ok(WireType::Qubit)
            }
            Tok::Ident(x) if x == "Bit" => {
                self.bump();
                Ok(WireType::Bit)
            }
            _ => self.error(&["`Qubit`", "`Bit`"]),
        }
    }

    fn index_atom(&mut self) -> PResult<IndexTerm> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.bump();
                Ok(IndexTerm::Nat(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.index()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(x) => {
                let call = self.peek_at(1) == &Tok::LParen;
                let bracket = self.peek_at(1) == &Tok::LBracket;
                match x.as_str() {
                    "max" | "seq" | "par" if call => {
                        self.bump();
                        let (a, b) = self.index_binary()?;
                        Ok(match x.as_str() {
                            "max" => IndexTerm::Max(Box::new(a), Box::new(b)),
                            "seq" => IndexTerm::seq(a, b),
                            _ => IndexTerm::par(a, b),
                        })
                    }
                    "empty" => {
                        self.bump();
                        Ok(IndexTerm::Empty)
                    }
                    "wire" if call => {
                        self.bump();
                        self.bump();
                        let w = self.wire_type()?;
                        self.expect(Tok::RParen)?;
                        Ok(IndexTerm::Wire(w))
                    }
                    "id" if bracket => {
                        self.bump();
                        self.bump();
                        let mut ms = WireMultiset::default();
                        if !self.eat(&Tok::RBracket) {
                            loop {
                                ms.add(self.wire_type()?);
                                if self.eat(&Tok::RBracket) {
                                    break;
                                }
                                self.expect(Tok::Comma)?;
                            }
                        }
                        Ok(IndexTerm::Id(ms))
                    }
                    "append" if bracket => {
                        self.bump();
                        self.bump();
                        let g = self.ident()?;
                        self.expect(Tok::RBracket)?;
                        let args = self.index_args()?;
                        match <[IndexTerm; 4]>::try_from(args) {
                            Ok([a, b, c, d]) => Ok(IndexTerm::append(&g, a, b, c, d)),
                            Err(_) => self.error(&["four arguments"]),
                        }
                    }
                    "gate" if bracket => {
                        self.bump();
                        self.bump();
                        let gate = self.ident()?;
                        self.expect(Tok::Comma)?;
                        let pos = self.nat()? as usize;
                        self.expect(Tok::RBracket)?;
                        let args = self.index_args()?;
                        Ok(IndexTerm::GateOp { gate, pos, args })
                    }
                    _ => Ok(IndexTerm::Var(self.ident()?)),
                }
            }
            _ => self.error(&["index term"]),
        }
    }

    // ---- types -------------------------------------------------------

    fn ty(&mut self) -> PResult<Type> {
        if let (Tok::Ident(x), Tok::Arrow) = (self.peek().clone(), self.peek_at(1).clone()) {
            self.bump();
            self.bump();
            let effect = self.opt_bracket_index()?;
            let body = self.ty()?;
            return Ok(Type::IndexAll(x, effect, Box::new(body)));
        }
        let dom = self.ty_atom()?;
        if self.eat(&Tok::Lollipop) {
            let (effect, capture) = if self.eat(&Tok::LBracket) {
                let e = self.index()?;
                let c = if self.eat(&Tok::Comma) { self.ty()? } else { Type::Unit };
                self.expect(Tok::RBracket)?;
                (e, c)
            } else {
                (IndexTerm::Nat(0), Type::Unit)
            };
            let cod = self.ty()?;
            return Ok(Type::Arrow(Box::new(ArrowType { dom, cod, effect, capture, scheme: Scheme::Mono })));
        }
        Ok(dom)
    }

    fn opt_bracket_index(&mut self) -> PResult<IndexTerm> {
        if self.eat(&Tok::LBracket) {
            let e = self.index()?;
            self.expect(Tok::RBracket)?;
            Ok(e)
        } else {
            Ok(IndexTerm::Nat(0))
        }
    }

    fn ty_atom(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::Ident(x) if x == "Qubit" || x == "Bit" => {
                let w = self.wire_type()?;
                let ann = if self.eat(&Tok::LBrace) {
                    let a = self.index()?;
                    self.expect(Tok::RBrace)?;
                    Some(a)
                } else {
                    None
                };
                Ok(Type::Wire(w, ann))
            }
            Tok::Ident(x) if x == "List" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let j = self.ident()?;
                self.expect(Tok::Less)?;
                let n = self.index()?;
                self.expect(Tok::RBracket)?;
                let elem = self.ty_atom()?;
                Ok(Type::List(j, n, Box::new(elem)))
            }
            Tok::Ident(x) if x == "Circ" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let size = self.index()?;
                self.expect(Tok::Semi)?;
                let mut locals = Vec::new();
                while let Tok::Ident(_) = self.peek() {
                    locals.push(self.ident()?);
                }
                self.expect(Tok::RBracket)?;
                self.expect(Tok::LParen)?;
                let input = self.ty()?;
                self.expect(Tok::Comma)?;
                let output = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(Type::Circ(Box::new(CircType { size, locals, input, output })))
            }
            Tok::Bang => {
                self.bump();
                let e = self.opt_bracket_index()?;
                Ok(Type::Bang(e, Box::new(self.ty_atom()?)))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Type::Unit);
                }
                let mut parts = vec![self.ty()?];
                while self.eat(&Tok::Comma) {
                    parts.push(self.ty()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Type::tuple(parts))
            }
            _ => self.error(&["type"]),
        }
    }

    // ---- expressions -------------------------------------------------

    fn pattern(&mut self) -> PResult<Pat> {
        if self.eat(&Tok::LParen) {
            let mut parts = vec![self.pattern()?];
            while self.eat(&Tok::Comma) {
                parts.push(self.pattern()?);
            }
            self.expect(Tok::RParen)?;
            if parts.len() < 2 {
                return Ok(parts.pop().expect("one pattern"));
            }
            let last = parts.pop().expect("non-empty");
            return Ok(parts.into_iter().rev().fold(last, |acc, p| Pat::Tuple(Box::new(p), Box::new(acc))));
        }
        Ok(Pat::Var(self.ident()?))
    }

    fn expr(&mut self) -> PResult<Expr> {
        if self.is_kw("let") {
            self.bump();
            let p = self.pattern()?;
            self.expect(Tok::Equals)?;
            let m = self.expr()?;
            self.expect_kw("in")?;
            let n = self.expr()?;
            return Ok(Expr::Let(p, Box::new(m), Box::new(n)));
        }
        if self.eat(&Tok::Backslash) {
            let mut params = Vec::new();
            loop {
                let p = self.pattern()?;
                self.expect(Tok::DoubleColon)?;
                let t = self.ty()?;
                params.push((p, t));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Dot)?;
            let body = self.expr()?;
            return Ok(params.into_iter().rev().fold(body, |b, (p, t)| Expr::Abs(p, t, Box::new(b))));
        }
        if self.peek() == &Tok::At {
            self.bump();
            let i = self.ident()?;
            self.expect(Tok::Dot)?;
            return Ok(Expr::IndexAbs(i, Box::new(self.expr()?)));
        }
        if self.is_kw("lift") {
            self.bump();
            return Ok(Expr::Lift(Box::new(self.expr()?)));
        }
        let e = self.rcons()?;
        if self.eat(&Tok::DoubleColon) {
            let t = self.ty()?;
            return Ok(Expr::Annot(Box::new(e), t));
        }
        Ok(e)
    }

    fn rcons(&mut self) -> PResult<Expr> {
        let mut acc = self.app()?;
        while self.eat(&Tok::Colon) {
            acc = Expr::RCons(Box::new(acc), Box::new(self.app()?));
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::LBracket => true,
            Tok::Ident(x) => !matches!(x.as_str(), "let" | "in" | "lift" | "force" | "return"),
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Expr> {
        let mut head = if self.is_kw("force") {
            self.bump();
            Expr::Force(Box::new(self.postfix()?))
        } else if self.is_kw("return") {
            self.bump();
            Expr::Return(Box::new(self.postfix()?))
        } else {
            self.postfix()?
        };
        while self.starts_atom() {
            head = Expr::App(Box::new(head), Box::new(self.postfix()?));
        }
        Ok(head)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        while self.eat(&Tok::At) {
            let i = self.index_additive()?;
            e = Expr::IndexApp(Box::new(e), i);
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Expr::Unit);
                }
                let mut parts = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    parts.push(self.expr()?);
                }
                self.expect(Tok::RParen)?;
                let last = parts.pop().expect("non-empty");
                Ok(parts.into_iter().rev().fold(last, |acc, e| Expr::Pair(Box::new(e), Box::new(acc))))
            }
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::RBracket)?;
                Ok(Expr::Nil)
            }
            Tok::Ident(x) if x == "fold" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::Comma)?;
                let c = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Fold(Box::new(a), Box::new(b), Box::new(c)))
            }
            Tok::Ident(x) if x == "apply" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::Apply(Box::new(a), Box::new(b)))
            }
            Tok::Ident(x) if x == "box" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let mut locals = Vec::new();
                while let Tok::Ident(_) = self.peek() {
                    locals.push(self.ident()?);
                }
                self.expect(Tok::Semi)?;
                let t = self.ty()?;
                self.expect(Tok::RBracket)?;
                let v = self.postfix()?;
                Ok(Expr::Box(locals, t, Box::new(v)))
            }
            Tok::Ident(_) => Ok(Expr::Var(self.ident()?)),
            _ => self.error(&["expression"]),
        }
    }
}

/// Conversion of surface expressions into A-normal form.
struct Normalizer {
    taken: HashSet<String>,
    counter: usize,
}

impl Normalizer {
    fn fresh(&mut self, prefix: &str) -> String {
        loop {
            let name = format!("{prefix}{}", self.counter);
            self.counter += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    fn term(&mut self, e: Expr) -> Term {
        let mut binds = Vec::new();
        let t = self.term_in(e, &mut binds);
        wrap(binds, t)
    }

    /// Converts `e` to a term, emitting preparatory bindings into `binds`.
    fn term_in(&mut self, e: Expr, binds: &mut Vec<(String, Term)>) -> Term {
        match e {
            Expr::Let(Pat::Var(x), m, n) => {
                let m = self.term(*m);
                Term::Let(x, Box::new(m), Box::new(self.term(*n)))
            }
            Expr::Let(pat, m, n) => match self.term(*m) {
                Term::Return(v) => self.destructure(pat, v, *n),
                other => {
                    let t = self.fresh("_t");
                    let rest = self.destructure(pat, Value::Var(t.clone()), *n);
                    Term::Let(t, Box::new(other), Box::new(rest))
                }
            },
            Expr::App(f, a) => {
                let f = self.value(*f, binds);
                let a = self.value(*a, binds);
                Term::App(f, a)
            }
            Expr::Force(v) => Term::Force(self.value(*v, binds)),
            Expr::Return(v) => Term::Return(self.value(*v, binds)),
            Expr::Fold(a, b, c) => {
                let a = self.value(*a, binds);
                let b = self.value(*b, binds);
                let c = self.value(*c, binds);
                Term::Fold(a, b, c)
            }
            Expr::Apply(a, b) => {
                let a = self.value(*a, binds);
                let b = self.value(*b, binds);
                Term::Apply(a, b)
            }
            Expr::Box(locals, t, v) => Term::Box(locals, t, self.value(*v, binds)),
            Expr::IndexApp(v, i) => Term::IndexApp(self.value(*v, binds), i),
            Expr::Annot(m, t) => Term::Annot(Box::new(self.term(*m)), t),
            value_form => Term::Return(self.value(value_form, binds)),
        }
    }

    fn destructure(&mut self, pat: Pat, v: Value, body: Expr) -> Term {
        match pat {
            Pat::Var(x) => Term::Let(x, Box::new(Term::Return(v)), Box::new(self.term(body))),
            Pat::Tuple(p, q) => {
                let (x, inner_x) = self.pattern_name(*p);
                let (y, inner_y) = self.pattern_name(*q);
                let mut rest = self.term(body);
                // Nested patterns become further destructurings of the
                // freshly named components, innermost last.
                for (pat, name) in [inner_y, inner_x].into_iter().flatten() {
                    rest = self.destructure_term(pat, Value::Var(name), rest);
                }
                Term::Dest(x, y, v, Box::new(rest))
            }
        }
    }

    fn destructure_term(&mut self, pat: Pat, v: Value, body: Term) -> Term {
        match pat {
            Pat::Var(x) => Term::Let(x, Box::new(Term::Return(v)), Box::new(body)),
            Pat::Tuple(p, q) => {
                let (x, inner_x) = self.pattern_name(*p);
                let (y, inner_y) = self.pattern_name(*q);
                let mut rest = body;
                for (pat, name) in [inner_y, inner_x].into_iter().flatten() {
                    rest = self.destructure_term(pat, Value::Var(name), rest);
                }
                Term::Dest(x, y, v, Box::new(rest))
            }
        }
    }

    /// A variable name for a pattern component, plus the residual pattern
    /// to destructure it with when the component is itself a tuple.
    fn pattern_name(&mut self, p: Pat) -> (String, Option<(Pat, String)>) {
        match p {
            Pat::Var(x) => (x, None),
            tuple => {
                let name = self.fresh("_p");
                (name.clone(), Some((tuple, name)))
            }
        }
    }

    fn value(&mut self, e: Expr, binds: &mut Vec<(String, Term)>) -> Value {
        match e {
            Expr::Var(x) => Value::Var(x),
            Expr::Unit => Value::Unit,
            Expr::Nil => Value::Nil,
            Expr::Pair(a, b) => {
                let a = self.value(*a, binds);
                let b = self.value(*b, binds);
                Value::pair(a, b)
            }
            Expr::RCons(a, b) => {
                let a = self.value(*a, binds);
                let b = self.value(*b, binds);
                Value::rcons(a, b)
            }
            Expr::Abs(Pat::Var(x), t, body) => Value::Abs(x, t, Box::new(self.term(*body))),
            Expr::Abs(pat, t, body) => {
                let p = self.fresh("_p");
                let inner = match pat {
                    Pat::Tuple(..) => self.destructure(pat, Value::Var(p.clone()), *body),
                    Pat::Var(_) => unreachable!("handled above"),
                };
                Value::Abs(p, t, Box::new(inner))
            }
            Expr::Lift(m) => Value::Lift(Box::new(self.term(*m))),
            Expr::IndexAbs(i, m) => Value::IndexAbs(i, Box::new(self.term(*m))),
            computation => {
                let t = self.term_in(computation, binds);
                match t {
                    Term::Return(v) => v,
                    other => {
                        let name = self.fresh("_t");
                        binds.push((name.clone(), other));
                        Value::Var(name)
                    }
                }
            }
        }
    }
}

fn wrap(binds: Vec<(String, Term)>, body: Term) -> Term {
    binds.into_iter().rev().fold(body, |acc, (x, m)| Term::Let(x, Box::new(m), Box::new(acc)))
}

fn collect_idents(src: &str) -> HashSet<String> {
    tokenize(src)
        .into_iter()
        .filter_map(|t| match t.tok {
            Tok::Ident(x) => Some(x),
            _ => None,
        })
        .collect()
}

fn finish<T>(p: &mut Parser, v: T) -> PResult<T> {
    if p.peek() != &Tok::Eof {
        return p.error(&["end of input"]);
    }
    Ok(v)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    let e = finish(&mut p, e)?;
    let mut n = Normalizer { taken: collect_idents(src), counter: 0 };
    Ok(n.term(e))
}

/// Parses a whole source file: a chain of `let` bindings ending in the
/// term under analysis.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    parse_term(src).map(Program::from_term)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src);
    let t = p.ty()?;
    finish(&mut p, t)
}

pub fn parse_index(src: &str) -> Result<IndexTerm, ParseError> {
    let mut p = Parser::new(src);
    let t = p.index()?;
    finish(&mut p, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_with_return() {
        let t = parse_term("\\q::Qubit. return q").unwrap();
        assert_eq!(t, Term::Return(Value::abs("q", Type::qubit(), Term::Return(Value::var("q")))));
    }

    #[test]
    fn fold_with_nil_accumulator() {
        let t = parse_term("fold(f, [], reg)").unwrap();
        assert_eq!(t, Term::Fold(Value::var("f"), Value::Nil, Value::var("reg")));
    }

    #[test]
    fn application_is_named() {
        let t = parse_term("force hadamard trg").unwrap();
        let Term::Let(x, m, n) = t else { panic!("expected let") };
        assert_eq!(*m, Term::Force(Value::var("hadamard")));
        assert_eq!(*n, Term::App(Value::Var(x), Value::var("trg")));
    }

    #[test]
    fn index_application_binds_additively() {
        let t = parse_term("force cR @ m+1-k @ i").unwrap();
        let Term::Let(_, m, _) = t else { panic!() };
        assert_eq!(*m, Term::IndexApp(Value::var("cR"), parse_index("m+1-k").unwrap()));
    }

    #[test]
    fn types_and_indices() {
        let t = parse_type("n ->[0] List[j<n] Qubit{i} -o[n, Qubit] List[j<n] Qubit").unwrap();
        assert!(matches!(t, Type::IndexAll(..)));
        assert_eq!(parse_index("sum[m<n] m+1").unwrap().to_string(), "sum[m<n] m+1");
        assert_eq!(parse_index("n-(m+1)").unwrap().to_string(), "n-(m+1)");
        assert_eq!(parse_index("gate[CR,2](a,b)").unwrap().to_string(), "gate[CR,2](a,b)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_term("let x = in x").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 9 });
        assert!(parse_term("<circuit>").is_err());
    }

    #[test]
    fn temporaries_avoid_source_names() {
        let t = parse_term("let _t0 = f x in force g _t0").unwrap();
        let s = format!("{t:?}");
        assert!(s.contains("_t1"));
    }
}
