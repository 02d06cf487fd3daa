//! Tokenizer for `.act` source text.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Num;

use crate::diagnostic::Diagnostic;
use crate::span::Span;
use crate::syntax::{IntType, Width};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Contract,
    Constructor,
    Transition,
    Payable,
    Iff,
    Case,
    Creates,
    Updates,
    Returns,
    Ensures,
    Invariants,
    New,
    Value,
    As,
    Pre,
    Post,
    InRange,
    Caller,
    Origin,
    Callvalue,
    This,
    True,
    False,
    Div,
    Mod,
    Exp,
    Mapping,
    Address,
    Bool,
    If,
    Then,
    Else,
    Addr,
    And,
    Or,
    Not,
}

const KEYWORDS: &[(&str, Keyword)] = &[
    ("contract", Keyword::Contract),
    ("constructor", Keyword::Constructor),
    ("transition", Keyword::Transition),
    ("payable", Keyword::Payable),
    ("iff", Keyword::Iff),
    ("case", Keyword::Case),
    ("creates", Keyword::Creates),
    ("updates", Keyword::Updates),
    ("returns", Keyword::Returns),
    ("ensures", Keyword::Ensures),
    ("invariants", Keyword::Invariants),
    ("new", Keyword::New),
    ("value", Keyword::Value),
    ("as", Keyword::As),
    ("pre", Keyword::Pre),
    ("post", Keyword::Post),
    ("inrange", Keyword::InRange),
    ("caller", Keyword::Caller),
    ("origin", Keyword::Origin),
    ("callvalue", Keyword::Callvalue),
    ("this", Keyword::This),
    ("true", Keyword::True),
    ("false", Keyword::False),
    ("div", Keyword::Div),
    ("mod", Keyword::Mod),
    ("exp", Keyword::Exp),
    ("mapping", Keyword::Mapping),
    ("address", Keyword::Address),
    ("bool", Keyword::Bool),
    ("if", Keyword::If),
    ("then", Keyword::Then),
    ("else", Keyword::Else),
    ("addr", Keyword::Addr),
    ("and", Keyword::And),
    ("or", Keyword::Or),
    ("not", Keyword::Not),
];

impl Keyword {
    pub fn lookup(word: &str) -> Option<Keyword> {
        KEYWORDS.iter().find(|(w, _)| *w == word).map(|(_, k)| *k)
    }

    pub fn as_str(self) -> &'static str {
        KEYWORDS.iter().find(|(_, k)| *k == self).unwrap().0
    }
}

/// Whether `word` is reserved and therefore unusable as an identifier.
pub fn is_reserved(word: &str) -> bool {
    Keyword::lookup(word).is_some() || int_type_word(word).is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Assign,
    Dot,
    Arrow,
    Implies,
    EqEq,
    Lt,
    Le,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
}

impl Sym {
    pub fn as_str(self) -> &'static str {
        match self {
            Sym::LParen => "(",
            Sym::RParen => ")",
            Sym::LBrace => "{",
            Sym::RBrace => "}",
            Sym::LBracket => "[",
            Sym::RBracket => "]",
            Sym::Comma => ",",
            Sym::Colon => ":",
            Sym::Assign => ":=",
            Sym::Dot => ".",
            Sym::Arrow => "=>",
            Sym::Implies => "==>",
            Sym::EqEq => "==",
            Sym::Lt => "<",
            Sym::Le => "<=",
            Sym::Ge => ">=",
            Sym::Gt => ">",
            Sym::Plus => "+",
            Sym::Minus => "-",
            Sym::Star => "*",
        }
    }
}

// Longest symbols first so that maximal munch falls out of a linear scan.
const SYMBOLS: &[(&str, Sym)] = &[
    ("==>", Sym::Implies),
    (":=", Sym::Assign),
    ("=>", Sym::Arrow),
    ("==", Sym::EqEq),
    ("<=", Sym::Le),
    (">=", Sym::Ge),
    ("(", Sym::LParen),
    (")", Sym::RParen),
    ("{", Sym::LBrace),
    ("}", Sym::RBrace),
    ("[", Sym::LBracket),
    ("]", Sym::RBracket),
    (",", Sym::Comma),
    (":", Sym::Colon),
    (".", Sym::Dot),
    ("<", Sym::Lt),
    (">", Sym::Gt),
    ("+", Sym::Plus),
    ("-", Sym::Minus),
    ("*", Sym::Star),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Keyword(Keyword),
    /// Lowercase-initial identifier.
    Ident(String),
    /// Uppercase-initial identifier (contract names).
    CapIdent(String),
    Int(BigInt),
    IntType(IntType),
    Sym(Sym),
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => write!(f, "keyword `{}`", k.as_str()),
            TokenKind::Ident(s) => write!(f, "identifier `{}`", s),
            TokenKind::CapIdent(s) => write!(f, "contract name `{}`", s),
            TokenKind::Int(n) => write!(f, "integer `{}`", n),
            TokenKind::IntType(t) => write!(f, "type `{}`", t),
            TokenKind::Sym(s) => write!(f, "`{}`", s.as_str()),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

fn int_type_word(word: &str) -> Option<Result<IntType, ()>> {
    if word == "int" {
        return Some(Ok(IntType::MathInt));
    }
    let (digits, signed) = if let Some(d) = word.strip_prefix("uint") {
        (d, false)
    } else {
        let d = word.strip_prefix("int")?;
        (d, true)
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let w = digits.parse::<u32>().ok().and_then(Width::new);
    Some(match w {
        Some(w) if signed => Ok(IntType::Signed(w)),
        Some(w) => Ok(IntType::Unsigned(w)),
        None => Err(()),
    })
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span::new(self.line, self.col, self.pos, self.pos)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.src[self.pos..].starts_with("//") => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.bump();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self, start: Span) -> Result<TokenKind, Diagnostic> {
        if self.src[self.pos..].starts_with("0x") || self.src[self.pos..].starts_with("0X") {
            self.bump();
            self.bump();
            let digits_start = self.pos;
            while let Some(c) = self.peek() {
                if c.is_ascii_hexdigit() {
                    self.bump();
                } else {
                    break;
                }
            }
            if self.pos == digits_start {
                return Err(match self.peek() {
                    Some(c) => Diagnostic::error(
                        self.here(),
                        format!("unexpected character `{}` in hexadecimal literal", c),
                    ),
                    None => Diagnostic::error(start, "hexadecimal literal has no digits"),
                });
            }
            let digits = &self.src[digits_start..self.pos];
            self.reject_trailing_word()?;
            return Ok(TokenKind::Int(BigInt::from_str_radix(digits, 16).unwrap()));
        }
        let digits_start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.bump();
            } else {
                break;
            }
        }
        let digits = &self.src[digits_start..self.pos];
        self.reject_trailing_word()?;
        Ok(TokenKind::Int(digits.parse().unwrap()))
    }

    fn reject_trailing_word(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == '_' => Err(Diagnostic::error(
                self.here(),
                format!("unexpected character `{}` after integer literal", c),
            )),
            _ => Ok(()),
        }
    }

    fn next_token(&mut self) -> Result<Token, Diagnostic> {
        self.skip_trivia();
        let start = self.here();
        let c = match self.peek() {
            None => {
                return Ok(Token {
                    kind: TokenKind::Eof,
                    lexeme: String::new(),
                    span: start,
                })
            }
            Some(c) => c,
        };
        let kind = if c.is_ascii_digit() {
            self.number(start)?
        } else if c.is_ascii_alphabetic() || c == '_' {
            let w = self.word();
            if let Some(k) = Keyword::lookup(w) {
                TokenKind::Keyword(k)
            } else if let Some(t) = int_type_word(w) {
                match t {
                    Ok(t) => TokenKind::IntType(t),
                    Err(()) => {
                        return Err(Diagnostic::error(
                            start,
                            format!("`{}`: integer widths must be a multiple of 8 between 8 and 256", w),
                        ))
                    }
                }
            } else if c.is_ascii_uppercase() {
                TokenKind::CapIdent(w.to_string())
            } else {
                TokenKind::Ident(w.to_string())
            }
        } else {
            let rest = &self.src[self.pos..];
            match SYMBOLS.iter().find(|(s, _)| rest.starts_with(s)) {
                Some((s, sym)) => {
                    for _ in 0..s.len() {
                        self.bump();
                    }
                    TokenKind::Sym(*sym)
                }
                None => {
                    return Err(Diagnostic::error(
                        start,
                        format!("unexpected character `{}`", c),
                    ))
                }
            }
        };
        let mut span = start;
        span.end = self.pos;
        Ok(Token {
            kind,
            lexeme: self.src[start.start..self.pos].to_string(),
            span,
        })
    }
}

/// Splits `src` into tokens. The final token is always `Eof`.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        let t = lx.next_token()?;
        let eof = t.kind == TokenKind::Eof;
        out.push(t);
        if eof {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn keywords_and_identifiers() {
        assert_eq!(
            kinds("iff Counter count"),
            vec![
                TokenKind::Keyword(Keyword::Iff),
                TokenKind::CapIdent("Counter".into()),
                TokenKind::Ident("count".into()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn maximal_munch_on_arrows() {
        assert_eq!(
            kinds("==> => == := :"),
            vec![
                TokenKind::Sym(Sym::Implies),
                TokenKind::Sym(Sym::Arrow),
                TokenKind::Sym(Sym::EqEq),
                TokenKind::Sym(Sym::Assign),
                TokenKind::Sym(Sym::Colon),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn integer_types() {
        assert_eq!(kinds("uint8")[0], TokenKind::IntType(IntType::uint(8)));
        assert_eq!(kinds("int256")[0], TokenKind::IntType(IntType::sint(256)));
        assert_eq!(kinds("int")[0], TokenKind::IntType(IntType::MathInt));
        assert!(tokenize("uint7").is_err());
        assert!(tokenize("uint264").is_err());
    }

    #[test]
    fn hex_literals() {
        assert_eq!(kinds("0xff")[0], TokenKind::Int(BigInt::from(255)));
        let err = tokenize("0x?").unwrap_err();
        assert_eq!(err.span.col, 3);
        assert!(err.message.contains('?'));
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("// hi\n  x").unwrap();
        assert_eq!(toks[0].span.line, 2);
        assert_eq!(toks[0].span.col, 3);
    }

    #[test]
    fn unknown_character() {
        let err = tokenize("x # y").unwrap_err();
        assert_eq!(err.span.col, 3);
    }
}
