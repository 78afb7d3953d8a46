//! Text syntax for formulas.
//!
//! Precedence, low to high: `->` (right), `-*` (right), `|` (left),
//! `&` (left), `*` (left), `~` (prefix). Keywords `top`, `bot`, `emp`;
//! `T` is accepted as a synonym of `top`. The unicode spellings
//! `⊤ ⊥ ⊤* ¬ ∧ ∨ → ∗ −∗` are lexer synonyms (`⊤*` means `emp` only when
//! the star immediately follows `⊤`).

use crate::formula::Formula;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    Top,
    Bot,
    Emp,
    Not,
    And,
    Or,
    Imp,
    Star,
    Wand,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::Ident(name) => return write!(f, "identifier `{name}`"),
            Token::Top => "`top`",
            Token::Bot => "`bot`",
            Token::Emp => "`emp`",
            Token::Not => "`~`",
            Token::And => "`&`",
            Token::Or => "`|`",
            Token::Imp => "`->`",
            Token::Star => "`*`",
            Token::Wand => "`-*`",
            Token::LParen => "`(`",
            Token::RParen => "`)`",
            Token::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: found {found}, expected {}", expected.join(", "))]
pub struct ParseError {
    /// Byte offset into the input where the offending token starts.
    pub offset: usize,
    pub found: String,
    pub expected: Vec<String>,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn error(&self, found: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.pos,
            found: found.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, prefix: &str) -> bool {
        if self.rest().starts_with(prefix) {
            self.pos += prefix.len();
            true
        } else {
            false
        }
    }

    /// Returns the next token and its starting byte offset.
    fn next_token(&mut self) -> Result<(Token, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.rest().chars().next() else {
            return Ok((Token::Eof, start));
        };
        // Multi-char operators first.
        if self.eat("->") || self.eat("\u{2192}") || self.eat("\u{2212}>") {
            return Ok((Token::Imp, start));
        }
        if self.eat("-*") || self.eat("-\u{2217}") || self.eat("\u{2212}*") || self.eat("\u{2212}\u{2217}") || self.eat("\u{22b8}") {
            return Ok((Token::Wand, start));
        }
        if self.eat("\u{22a4}*") || self.eat("\u{22a4}\u{2217}") {
            return Ok((Token::Emp, start));
        }
        if self.eat("\u{22a4}") {
            return Ok((Token::Top, start));
        }
        if self.eat("\u{22a5}") {
            return Ok((Token::Bot, start));
        }
        if self.eat("~") || self.eat("\u{ac}") {
            return Ok((Token::Not, start));
        }
        if self.eat("&") || self.eat("\u{2227}") {
            return Ok((Token::And, start));
        }
        if self.eat("|") || self.eat("\u{2228}") {
            return Ok((Token::Or, start));
        }
        if self.eat("*") || self.eat("\u{2217}") {
            return Ok((Token::Star, start));
        }
        if self.eat("(") {
            return Ok((Token::LParen, start));
        }
        if self.eat(")") {
            return Ok((Token::RParen, start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let rest = self.rest();
            let end = rest
                .char_indices()
                .find(|&(_, ch)| !(ch.is_ascii_alphanumeric() || ch == '_' || ch == '\''))
                .map_or(rest.len(), |(i, _)| i);
            let word = &rest[..end];
            self.pos += end;
            let tok = match word {
                "top" | "T" => Token::Top,
                "bot" => Token::Bot,
                "emp" => Token::Emp,
                _ => Token::Ident(word.to_owned()),
            };
            return Ok((tok, start));
        }
        Err(self.error(format!("`{c}`"), &["a token"]))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    /// Current lookahead token with its byte offset.
    tok: (Token, usize),
}

const FORMULA_START: &[&str] = &["identifier", "`top`", "`bot`", "`emp`", "`~`", "`(`"];

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let tok = lexer.next_token()?;
        Ok(Parser { lexer, tok })
    }

    fn bump(&mut self) -> Result<Token, ParseError> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.tok, next).0)
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.tok.1,
            found: self.tok.0.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    // imp := wand ('->' imp)?
    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.wand()?;
        if self.tok.0 == Token::Imp {
            self.bump()?;
            let rhs = self.imp()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    // wand := or ('-*' wand)?
    fn wand(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.tok.0 == Token::Wand {
            self.bump()?;
            let rhs = self.wand()?;
            Ok(Formula::wand(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    // or := and ('|' and)*
    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.tok.0 == Token::Or {
            self.bump()?;
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    // and := star ('&' star)*
    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.star()?;
        while self.tok.0 == Token::And {
            self.bump()?;
            let rhs = self.star()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    // star := unary ('*' unary)*
    fn star(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.tok.0 == Token::Star {
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Formula::star(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.tok.0 == Token::Not {
            self.bump()?;
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.tok.0.clone() {
            Token::Ident(name) => {
                self.bump()?;
                Ok(Formula::Atom(name))
            }
            Token::Top => {
                self.bump()?;
                Ok(Formula::Top)
            }
            Token::Bot => {
                self.bump()?;
                Ok(Formula::Bot)
            }
            Token::Emp => {
                self.bump()?;
                Ok(Formula::Emp)
            }
            Token::LParen => {
                self.bump()?;
                let inner = self.imp()?;
                if self.tok.0 != Token::RParen {
                    return Err(self.error(&["`)`", "an operator"]));
                }
                self.bump()?;
                Ok(inner)
            }
            _ => Err(self.error(FORMULA_START)),
        }
    }
}

/// Parse a formula from text.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser::new(text)?;
    let formula = parser.imp()?;
    if parser.tok.0 != Token::Eof {
        return Err(parser.error(&["an operator", "end of input"]));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula as F;

    #[test]
    fn keyword_emp() {
        assert_eq!(parse("emp").unwrap(), F::Emp);
    }

    #[test]
    fn precedence_example() {
        let f = parse("emp & (a * b) -> a").unwrap();
        assert_eq!(
            f,
            F::imp(
                F::and(F::Emp, F::star(F::atom("a"), F::atom("b"))),
                F::atom("a")
            )
        );
        // same tree without the explicit parentheses: * binds tighter than &
        assert_eq!(parse("emp & a * b -> a").unwrap(), f);
    }

    #[test]
    fn rejects_top_star_conjunction() {
        // `top*` lexes as `top` `*`, so the `/\` that follows is garbage.
        let err = parse("top* /\\ (a * b) -> a").unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn wand_is_right_associative() {
        let f = parse("a -* b -* c").unwrap();
        assert_eq!(
            f,
            F::wand(F::atom("a"), F::wand(F::atom("b"), F::atom("c")))
        );
    }

    #[test]
    fn t_is_top_alias() {
        let f = parse("~(T -* ~emp) * ~(T -* ~emp) -> ~(T -* ~emp)").unwrap();
        let part = F::not(F::wand(F::Top, F::not(F::Emp)));
        assert_eq!(
            f,
            F::imp(F::star(part.clone(), part.clone()), part)
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(parse("⊤* ∧ (a ∗ b) → a").unwrap(), parse("emp & (a * b) -> a").unwrap());
        assert_eq!(parse("¬(⊤ −∗ ¬⊤*)").unwrap(), parse("~(top -* ~emp)").unwrap());
    }

    #[test]
    fn error_reports_offset_and_expectations() {
        let err = parse("a & ").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.iter().any(|e| e.contains("identifier")));
        let err = parse("(a").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn primes_allowed_in_identifiers() {
        assert_eq!(parse("a'").unwrap(), F::atom("a'"));
    }
}
