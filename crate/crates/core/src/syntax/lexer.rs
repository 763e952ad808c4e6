//! Tokenizer for `.pqr` sources. Comments run from `--` to end of line.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    Backslash,
    Dot,
    DoubleColon,
    Colon,
    Comma,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    At,
    Equals,
    Lollipop,
    Arrow,
    Bang,
    Plus,
    Minus,
    Star,
    Less,
    /// A character that starts no token of the language.
    Unexpected(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "`{x}`"),
            Tok::Nat(n) => return write!(f, "`{n}`"),
            Tok::Unexpected(c) => return write!(f, "`{c}`"),
            Tok::Backslash => "\\",
            Tok::Dot => ".",
            Tok::DoubleColon => "::",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::At => "@",
            Tok::Equals => "=",
            Tok::Lollipop => "-o",
            Tok::Arrow => "->",
            Tok::Bang => "!",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Less => "<",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(src: &str) -> Vec<Token> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize, chars: &[char]| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1, &chars);
            continue;
        }
        if c == '-' && next == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            let text: String = chars[start..i].iter().collect();
            let tok = text.parse().map(Tok::Nat).unwrap_or(Tok::Unexpected(c));
            out.push(Token { tok, pos });
            continue;
        }
        let (tok, len) = match (c, next) {
            (':', Some(':')) => (Tok::DoubleColon, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('-', Some('o')) if !chars.get(i + 2).copied().is_some_and(is_ident_char) => (Tok::Lollipop, 2),
            ('\\', _) => (Tok::Backslash, 1),
            ('.', _) => (Tok::Dot, 1),
            (':', _) => (Tok::Colon, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('@', _) => (Tok::At, 1),
            ('=', _) => (Tok::Equals, 1),
            ('!', _) => (Tok::Bang, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('<', _) => (Tok::Less, 1),
            (other, _) => (Tok::Unexpected(other), 1),
        };
        advance(&mut i, &mut line, &mut col, len, &chars);
        out.push(Token { tok, pos });
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col } });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            toks("a -o b -- note\n n-1 :: x:y"),
            vec![
                Tok::Ident("a".into()),
                Tok::Lollipop,
                Tok::Ident("b".into()),
                Tok::Ident("n".into()),
                Tok::Minus,
                Tok::Nat(1),
                Tok::DoubleColon,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Ident("y".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks("n-out")[1], Tok::Minus);
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("x\n  y");
        assert_eq!(t[1].pos, Pos { line: 2, col: 3 });
    }
}
