//! Recursive-descent parser for the equation language.
//!
//! ```text
//! program := ("eq" expr "=" expr ";")+
//! expr    := term (("+" | "-") term)*
//! term    := unary ("*" unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" INT)?
//! atom    := INT | IDENT | "(" expr ")"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use super::poly::{PolyFormula, Polynomial};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(char),
    Unexpected { found: String, expected: String },
    ExponentTooLarge(String),
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::UnknownToken(c) => write!(f, "unknown token {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::ExponentTooLarge(e) => {
                write!(f, "exponent {e} exceeds {MAX_EXPONENT}")
            }
            ParseErrorKind::Empty => write!(f, "no equations"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Eq,
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Assign,
    Semi,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Eq => write!(f, "keyword `eq`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(s) => write!(f, "integer `{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Assign => write!(f, "`=`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next().unwrap();
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            ch
        };
        if ch.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if ch == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        let tok = if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while chars
                .peek()
                .is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_')
            {
                s.push(bump(&mut chars));
            }
            if s == "eq" {
                Tok::Eq
            } else {
                Tok::Ident(s)
            }
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars));
            }
            Tok::Int(s)
        } else {
            bump(&mut chars);
            match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '=' => Tok::Assign,
                ';' => Tok::Semi,
                other => {
                    return Err(ParseError {
                        line: l,
                        col: c,
                        kind: ParseErrorKind::UnknownToken(other),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            col: c,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            kind: ParseErrorKind::Unexpected {
                found: t.tok.to_string(),
                expected: expected.into(),
            },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn var(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    fn program(&mut self) -> Result<Vec<(Polynomial, Polynomial)>, ParseError> {
        let mut eqs = Vec::new();
        while *self.peek() != Tok::End {
            self.expect(Tok::Eq, "`eq`")?;
            let lhs = self.expr()?;
            self.expect(Tok::Assign, "`=`")?;
            let rhs = self.expr()?;
            self.expect(Tok::Semi, "`;`")?;
            eqs.push((lhs, rhs));
        }
        if eqs.is_empty() {
            let t = &self.toks[self.pos];
            return Err(ParseError {
                line: t.line,
                col: t.col,
                kind: ParseErrorKind::Empty,
            });
        }
        Ok(eqs)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if *self.peek() == Tok::Minus {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.pos += 1;
        let Tok::Int(digits) = self.peek().clone() else {
            return Err(self.error("integer exponent"));
        };
        let e = match digits.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => {
                let t = &self.toks[self.pos];
                return Err(ParseError {
                    line: t.line,
                    col: t.col,
                    kind: ParseErrorKind::ExponentTooLarge(digits),
                });
            }
        };
        self.pos += 1;
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.pos += 1;
                Ok(Polynomial::constant(
                    s.parse::<BigInt>().expect("lexed digits"),
                ))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Polynomial::var(self.var(&name)))
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.error("integer, identifier or `(`")),
        }
    }
}

/// Parses a program; variables are listed in order of first mention.
pub fn parse_source(text: &str) -> Result<PolyFormula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        names: Vec::new(),
        index: HashMap::new(),
    };
    let equations = p.program()?;
    Ok(PolyFormula {
        variables: p.names,
        equations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_equation() {
        let f = parse_source("eq x^2 = 2;").unwrap();
        assert_eq!(f.variables, vec!["x"]);
        assert_eq!(f.equations.len(), 1);
        assert_eq!(f.to_string(), "eq x^2 = 2;\n");
    }

    #[test]
    fn worked_example() {
        let f = parse_source("eq u = x*y; eq y = x; eq u = 2;").unwrap();
        assert_eq!(f.variables, vec!["u", "x", "y"]);
        assert_eq!(f.equations.len(), 3);
    }

    #[test]
    fn missing_rhs() {
        let e = parse_source("eq x = ;").unwrap_err();
        assert_eq!((e.line, e.col), (1, 8));
        assert!(matches!(e.kind, ParseErrorKind::Unexpected { .. }));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_source("# header\neq x = 1;\neq y = $;").unwrap_err();
        assert_eq!(
            (e.line, e.col, e.kind),
            (3, 8, ParseErrorKind::UnknownToken('$'))
        );
        assert_eq!(
            parse_source("  # nothing\n").unwrap_err().kind,
            ParseErrorKind::Empty
        );
        assert!(parse_source("eq x = 1").is_err());
        assert!(parse_source("eq x^y = 1;").is_err());
        assert!(matches!(
            parse_source("eq x^99999 = 1;").unwrap_err().kind,
            ParseErrorKind::ExponentTooLarge(_)
        ));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let f = parse_source("eq -x^2 + 3*(y - 1) = 2*-y;").unwrap();
        let (l, r) = &f.equations[0];
        assert_eq!(l.display(&f.variables).to_string(), "-x^2 + 3*y - 3");
        assert_eq!(r.display(&f.variables).to_string(), "-2*y");
    }

    #[test]
    fn eq_is_reserved() {
        assert!(parse_source("eq eq = 1;").is_err());
        assert!(parse_source("eq eqn = 1;").is_ok());
    }
}
