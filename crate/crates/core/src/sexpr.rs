//! A small S-expression reader and writer with line/column diagnostics.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexpr {
    Sym(String),
    List(Vec<Sexpr>),
}

impl Sexpr {
    pub fn sym(s: impl Into<String>) -> Sexpr {
        Sexpr::Sym(s.into())
    }

    pub fn list(items: impl IntoIterator<Item = Sexpr>) -> Sexpr {
        Sexpr::List(items.into_iter().collect())
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Sexpr::Sym(s) => Some(s),
            Sexpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items) => Some(items),
            Sexpr::Sym(_) => None,
        }
    }
}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Sym(s) => f.write_str(s),
            Sexpr::List(items) => {
                f.write_str("(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}", it)?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

pub struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    pub fn new(src: &'a str) -> Reader<'a> {
        Reader {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b';') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.pos >= self.src.len()
    }

    pub fn read(&mut self) -> Result<Sexpr, ParseError> {
        self.skip_trivia();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(self.err("unterminated list")),
                        Some(b')') => {
                            self.bump();
                            return Ok(Sexpr::List(items));
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(b')') => Err(self.err("unmatched `)`")),
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b';' {
                        break;
                    }
                    self.bump();
                }
                let text = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| self.err("invalid utf-8 in symbol"))?;
                Ok(Sexpr::sym(text))
            }
        }
    }
}

/// Reads exactly one expression, rejecting trailing input.
pub fn read_one(src: &str) -> Result<Sexpr, ParseError> {
    let mut r = Reader::new(src);
    let s = r.read()?;
    if !r.at_end() {
        return Err(r.err("trailing input after expression"));
    }
    Ok(s)
}

/// Reads all expressions in the input.
pub fn read_all(src: &str) -> Result<Vec<Sexpr>, ParseError> {
    let mut r = Reader::new(src);
    let mut out = Vec::new();
    while !r.at_end() {
        out.push(r.read()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_simple() {
        let s = read_one("(lolli (atom P x) (bang (atom Q)))").unwrap();
        assert_eq!(s.to_string(), "(lolli (atom P x) (bang (atom Q)))");
    }

    #[test]
    fn comments_and_whitespace() {
        let s = read_one("( a ; comment\n b )").unwrap();
        assert_eq!(s, Sexpr::list([Sexpr::sym("a"), Sexpr::sym("b")]));
    }

    #[test]
    fn error_carries_position() {
        let e = read_one("(a\n(b)").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unterminated"));
    }
}
