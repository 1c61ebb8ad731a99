//! Concrete-syntax parser.
//!
//! Grammar, loosest to tightest binding: `<->`, `->`, `|`, `&`, `U`, then
//! the unary operators `!`, `X`, `F`, `G`. All binary operators associate to
//! the right. `<->` is desugared at parse time into a conjunction of two
//! implications. `alive` is reserved and rejected as an atom.

use super::{Formula, Prop, RESERVED_ALIVE};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {}, found {found}", expected.join(", "))]
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("{line}:{col}: unknown operator {text:?}")]
    UnknownOperator {
        line: usize,
        col: usize,
        text: String,
    },
    #[error("{line}:{col}: unbalanced parentheses: missing ')'")]
    UnbalancedParens { line: usize, col: usize },
    #[error("{line}:{col}: proposition {RESERVED_ALIVE:?} is reserved")]
    ReservedProposition { line: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Finally,
    Globally,
    Until,
    LParen,
    RParen,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Eof => "end of input".to_string(),
            Tok::True => "'true'".to_string(),
            Tok::False => "'false'".to_string(),
            Tok::Not => "'!'".to_string(),
            Tok::And => "'&'".to_string(),
            Tok::Or => "'|'".to_string(),
            Tok::Implies => "'->'".to_string(),
            Tok::Iff => "'<->'".to_string(),
            Tok::Next => "'X'".to_string(),
            Tok::Finally => "'F'".to_string(),
            Tok::Globally => "'G'".to_string(),
            Tok::Until => "'U'".to_string(),
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            chars: src.char_indices().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let item = self.chars.next();
        if let Some((_, c)) = item {
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        item
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&(start, c)) = self.chars.peek() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '!' => {
                    self.bump();
                    Tok::Not
                }
                '&' => {
                    self.bump();
                    Tok::And
                }
                '|' => {
                    self.bump();
                    Tok::Or
                }
                '-' => {
                    self.bump();
                    match self.chars.peek() {
                        Some((_, '>')) => {
                            self.bump();
                            Tok::Implies
                        }
                        _ => {
                            return Err(ParseError::UnknownOperator {
                                line,
                                col,
                                text: "-".to_string(),
                            })
                        }
                    }
                }
                '<' => {
                    self.bump();
                    let ok = matches!(self.chars.peek(), Some((_, '-')));
                    if ok {
                        self.bump();
                    }
                    match (ok, self.chars.peek()) {
                        (true, Some((_, '>'))) => {
                            self.bump();
                            Tok::Iff
                        }
                        _ => {
                            return Err(ParseError::UnknownOperator {
                                line,
                                col,
                                text: "<".to_string(),
                            })
                        }
                    }
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut end = start + c.len_utf8();
                    self.bump();
                    while let Some(&(i, c)) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            end = i + c.len_utf8();
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match &self.src[start..end] {
                        "true" => Tok::True,
                        "false" => Tok::False,
                        "X" => Tok::Next,
                        "F" => Tok::Finally,
                        "G" => Tok::Globally,
                        "U" => Tok::Until,
                        name => Tok::Ident(name.to_string()),
                    }
                }
                other => {
                    return Err(ParseError::UnknownOperator {
                        line,
                        col,
                        text: other.to_string(),
                    })
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

const OPERAND_STARTS: [&str; 8] = [
    "'true'",
    "'false'",
    "an identifier",
    "'('",
    "'!'",
    "'X'",
    "'F'",
    "'G'",
];

impl Parser {
    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.implies()?;
        if self.peek().0 == Tok::Iff {
            self.advance();
            let right = self.iff()?;
            // a <-> b ; parses as (a -> b) & (b -> a)
            Ok(Formula::and(
                Formula::implies(left.clone(), right.clone()),
                Formula::implies(right, left),
            ))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.peek().0 == Tok::Implies {
            self.advance();
            Ok(Formula::implies(left, self.implies()?))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let left = self.and()?;
        if self.peek().0 == Tok::Or {
            self.advance();
            Ok(Formula::or(left, self.or()?))
        } else {
            Ok(left)
        }
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let left = self.until()?;
        if self.peek().0 == Tok::And {
            self.advance();
            Ok(Formula::and(left, self.and()?))
        } else {
            Ok(left)
        }
    }

    fn until(&mut self) -> Result<Formula, ParseError> {
        let left = self.unary()?;
        if self.peek().0 == Tok::Until {
            self.advance();
            Ok(Formula::until(left, self.until()?))
        } else {
            Ok(left)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().0 {
            Tok::Not => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Next => {
                self.advance();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Finally => {
                self.advance();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Globally => {
                self.advance();
                Ok(Formula::globally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let (tok, line, col) = self.advance();
        match tok {
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::Ident(name) => {
                if name == RESERVED_ALIVE {
                    return Err(ParseError::ReservedProposition { line, col });
                }
                // Lexing guarantees a well-formed identifier.
                Ok(Formula::Atom(Prop::new(&name).expect("lexed identifier")))
            }
            Tok::LParen => {
                let inner = self.iff()?;
                let (tok, line, col) = self.advance();
                if tok == Tok::RParen {
                    Ok(inner)
                } else {
                    Err(ParseError::UnbalancedParens { line, col })
                }
            }
            found => Err(ParseError::Syntax {
                line,
                col,
                found: if found == Tok::Eof {
                    "end of input".to_string()
                } else {
                    found.describe()
                },
                expected: OPERAND_STARTS.to_vec(),
            }),
        }
    }
}

/// Parses concrete syntax into a [`Formula`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.iff()?;
    let (tok, line, col) = p.peek().clone();
    if tok == Tok::Eof {
        Ok(f)
    } else if tok == Tok::RParen {
        Err(ParseError::Syntax {
            line,
            col,
            found: "')'".to_string(),
            expected: vec!["an operator", "end of input"],
        })
    } else {
        Err(ParseError::Syntax {
            line,
            col,
            found: tok.describe(),
            expected: vec!["an operator", "end of input"],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str) -> Formula {
        Formula::atom(name).unwrap()
    }

    #[test]
    fn parse_eventually_conjunction() {
        let f = parse("F (g1 & g2)").unwrap();
        assert_eq!(f, Formula::eventually(Formula::and(atom("g1"), atom("g2"))));
    }

    #[test]
    fn until_is_right_associative() {
        let f = parse("a U b U c").unwrap();
        assert_eq!(
            f,
            Formula::until(atom("a"), Formula::until(atom("b"), atom("c")))
        );
    }

    #[test]
    fn dangling_operator_is_a_syntax_error() {
        let err = parse("X").unwrap_err();
        match err {
            ParseError::Syntax { found, .. } => assert_eq!(found, "end of input"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn errors_carry_position() {
        let err = parse("a &\n& b").unwrap_err();
        match err {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!((line, col), (2, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn unknown_operator() {
        assert!(matches!(
            parse("a + b"),
            Err(ParseError::UnknownOperator { .. })
        ));
        assert!(matches!(
            parse("a - b"),
            Err(ParseError::UnknownOperator { .. })
        ));
    }

    #[test]
    fn unbalanced_parentheses() {
        assert!(matches!(
            parse("(a & b"),
            Err(ParseError::UnbalancedParens { .. })
        ));
        assert!(matches!(parse("a)"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn alive_is_rejected() {
        assert!(matches!(
            parse("F alive"),
            Err(ParseError::ReservedProposition { .. })
        ));
    }

    #[test]
    fn precedence_layers() {
        // & binds tighter than |, U tighter than &, unary tighter than U.
        let f = parse("a | b & c").unwrap();
        assert_eq!(f, Formula::or(atom("a"), Formula::and(atom("b"), atom("c"))));
        let f = parse("a U b & c").unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::until(atom("a"), atom("b")), atom("c"))
        );
        let f = parse("! a U b").unwrap();
        assert_eq!(f, Formula::until(Formula::not(atom("a")), atom("b")));
        let f = parse("a -> b -> c").unwrap();
        assert_eq!(
            f,
            Formula::implies(atom("a"), Formula::implies(atom("b"), atom("c")))
        );
    }

    #[test]
    fn iff_desugars_to_implications() {
        let f = parse("a <-> b").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::implies(atom("a"), atom("b")),
                Formula::implies(atom("b"), atom("a"))
            )
        );
    }

    #[test]
    fn internal_connectives_have_no_syntax() {
        // `R` and `WX` lex as identifiers, which cannot follow a formula.
        assert!(parse("a R b").is_err());
        assert!(parse("WX a").is_ok_and(|f| matches!(f, Formula::Atom(..))) == false);
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse("F(g1&g2)").unwrap(), parse(" F ( g1 & g2 ) ").unwrap());
    }
}
