//! Recursive-descent parser for the expression grammar.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := unary ('^' INT)?
//! unary  := '-'? atom
//! atom   := NUMBER | 'i' | 'pi' | 'e' | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! The function set is `exp`, `Log`, `sin`, `cos`, `conj`, `abs`, `re`, `im`.
//! A single-letter identifier equal to the configured variable name is the
//! free variable; any other single-letter identifier is a parameter. There
//! is no implicit multiplication.

use thiserror::Error;

use super::Expr;

/// Parses `source` with `z` as the variable name.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    parse_with_variable(source, "z")
}

/// Parses `source` treating `variable` as the free variable.
pub fn parse_with_variable(source: &str, variable: &str) -> Result<Expr, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        variable,
    };
    let expr = p.expr()?;
    match p.peek().kind {
        TokenKind::End => Ok(expr),
        _ => Err(ParseError {
            offset: p.offset(),
            kind: ParseErrorKind::UnexpectedToken {
                found: p.peek().describe(),
                expected: vec!["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"],
            },
        }),
    }
}

/// Parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("malformed number literal")]
    BadNumber,
    #[error("expected {} but found {found}", expected.join(", "))]
    UnexpectedToken {
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown identifier `{0}` (parameters are single letters)")]
    UnknownIdentifier(String),
    #[error("exponent must be an integer")]
    BadExponent,
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(_) => "NUMBER".into(),
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

use TokenKind as Tk;

impl Token {
    fn describe(&self) -> String {
        self.kind.describe()
    }
}

impl std::ops::Deref for Token {
    type Target = TokenKind;
    fn deref(&self) -> &TokenKind {
        &self.kind
    }
}

fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = source.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let kind = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Tk::Plus,
            b'-' => Tk::Minus,
            b'*' => Tk::Star,
            b'/' => Tk::Slash,
            b'^' => Tk::Caret,
            b'(' => Tk::LParen,
            b')' => Tk::RParen,
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i], b'0'..=b'9' | b'.') {
                    i += 1;
                }
                // Exponent suffix, e.g. 1e-3. Only consumed when digits follow.
                if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &source[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadNumber,
                })?;
                tokens.push(Token {
                    kind: Tk::Number(value),
                    offset: start,
                });
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: Tk::Ident(source[start..i].to_string()),
                    offset: start,
                });
                continue;
            }
            other => {
                return Err(ParseError {
                    offset: i,
                    kind: ParseErrorKind::UnexpectedChar(other as char),
                })
            }
        };
        tokens.push(Token { kind, offset: i });
        i += 1;
    }
    tokens.push(Token {
        kind: Tk::End,
        offset: source.len(),
    });
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    variable: &'a str,
}

const FUNCTIONS: &[&str] = &["exp", "Log", "sin", "cos", "conj", "abs", "re", "im"];

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: &TokenKind, expected: &'static str) -> Result<(), ParseError> {
        if &self.peek().kind == kind {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![expected]))
        }
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::UnexpectedToken {
                found: self.peek().describe(),
                expected,
            },
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match &self.peek().kind {
                Tk::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tk::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match &self.peek().kind {
                Tk::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tk::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek().kind == Tk::Caret {
            self.bump();
            let n = self.integer_exponent()?;
            return Ok(Expr::pow(base, n));
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i32, ParseError> {
        let negative = if self.peek().kind == Tk::Minus {
            self.bump();
            true
        } else {
            false
        };
        let offset = self.offset();
        match self.bump().kind {
            Tk::Number(v) => {
                if v.fract() != 0.0 || v.abs() > i32::MAX as f64 {
                    return Err(ParseError {
                        offset,
                        kind: ParseErrorKind::BadExponent,
                    });
                }
                let n = v as i32;
                Ok(if negative { -n } else { n })
            }
            _ => Err(ParseError {
                offset,
                kind: ParseErrorKind::BadExponent,
            }),
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == Tk::Minus {
            self.bump();
            return Ok(Expr::neg(self.atom()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match &self.peek().kind {
            Tk::Number(_) | Tk::LParen | Tk::Ident(_) => {}
            _ => return Err(self.unexpected(vec!["NUMBER", "IDENT", "'('", "'-'"])),
        }
        match self.bump().kind {
            Tk::Number(v) => Ok(Expr::real(v)),
            Tk::LParen => {
                let inner = self.expr()?;
                self.expect(&Tk::RParen, "')'")?;
                Ok(inner)
            }
            Tk::Ident(name) => {
                if self.peek().kind == Tk::LParen {
                    if !FUNCTIONS.contains(&name.as_str()) {
                        return Err(ParseError {
                            offset,
                            kind: ParseErrorKind::UnknownFunction(name),
                        });
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(&Tk::RParen, "')'")?;
                    return Ok(match name.as_str() {
                        "exp" => Expr::exp(arg),
                        "Log" => Expr::log(arg),
                        "sin" => Expr::sin(arg),
                        "cos" => Expr::cos(arg),
                        "conj" => Expr::Conj(Box::new(arg)),
                        "abs" => Expr::Abs(Box::new(arg)),
                        "re" => Expr::Re(Box::new(arg)),
                        "im" => Expr::Im(Box::new(arg)),
                        _ => unreachable!(),
                    });
                }
                match name.as_str() {
                    "i" => Ok(Expr::lit(0.0, 1.0)),
                    "pi" => Ok(Expr::real(std::f64::consts::PI)),
                    "e" => Ok(Expr::real(std::f64::consts::E)),
                    n if n == self.variable => Ok(Expr::Var),
                    n if n.len() == 1 => Ok(Expr::param(n)),
                    _ => Err(ParseError {
                        offset,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    }),
                }
            }
            _ => unreachable!("filtered above"),
        }
    }
}
