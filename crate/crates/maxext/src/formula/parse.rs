//! Recursive-descent parser for the formula language.
//!
//! Precedence, loosest to tightest: `<->`, `->`, `or`, `and`, `not`.
//! `->` associates to the right, `<->` to the left. Quantifier bodies are
//! parenthesized: `forall y < 8 . (y in X -> y < 5)`. Terms admit `+` and `*`
//! (with `*` tighter) and parentheses.

use crate::error::{Error, Result};
use crate::finset::parse_set_literal;

use super::{Formula, ParameterTable, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Nat(u64),
    LParen,
    RParen,
    Lt,
    Eq,
    Plus,
    Star,
    Arrow,
    DArrow,
    Dot,
    Forall,
    Exists,
    In,
    And,
    Or,
    Not,
    True,
    False,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Nat(n) => return write!(f, "`{n}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Lt => "`<`",
            Tok::Eq => "`=`",
            Tok::Plus => "`+`",
            Tok::Star => "`*`",
            Tok::Arrow => "`->`",
            Tok::DArrow => "`<->`",
            Tok::Dot => "`.`",
            Tok::Forall => "`forall`",
            Tok::Exists => "`exists`",
            Tok::In => "`in`",
            Tok::And => "`and`",
            Tok::Or => "`or`",
            Tok::Not => "`not`",
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::Eof => "end of input",
        };
        write!(f, "{s}")
    }
}

struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            '(' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::RParen, line: tline, col: tcol });
            }
            '.' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Dot, line: tline, col: tcol });
            }
            '+' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Plus, line: tline, col: tcol });
            }
            '*' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Star, line: tline, col: tcol });
            }
            '=' => {
                bump(&mut chars);
                out.push(Spanned { tok: Tok::Eq, line: tline, col: tcol });
            }
            '<' => {
                bump(&mut chars);
                if chars.peek() == Some(&'-') {
                    bump(&mut chars);
                    if chars.peek() == Some(&'>') {
                        bump(&mut chars);
                        out.push(Spanned { tok: Tok::DArrow, line: tline, col: tcol });
                    } else {
                        return Err(Error::Syntax {
                            line: tline,
                            col: tcol,
                            msg: "expected `<->`".into(),
                        });
                    }
                } else {
                    out.push(Spanned { tok: Tok::Lt, line: tline, col: tcol });
                }
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Spanned { tok: Tok::Arrow, line: tline, col: tcol });
                } else {
                    return Err(Error::Syntax {
                        line: tline,
                        col: tcol,
                        msg: "expected `->`".into(),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    text.push(bump(&mut chars));
                }
                let n: u64 = text.parse().map_err(|_| Error::Syntax {
                    line: tline,
                    col: tcol,
                    msg: format!("number `{text}` out of range"),
                })?;
                out.push(Spanned { tok: Tok::Nat(n), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    text.push(bump(&mut chars));
                }
                let tok = match text.as_str() {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "in" => Tok::In,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(text),
                };
                out.push(Spanned { tok, line: tline, col: tcol });
            }
            other => {
                return Err(Error::Syntax {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: String) -> Error {
        let s = &self.toks[self.pos];
        Error::Syntax { line: s.line, col: s.col, msg }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.err(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.advance();
            let rhs = self.implication()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.advance();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Forall | Tok::Exists => self.quantifier(),
            _ => self.atom(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula> {
        let universal = matches!(self.advance(), Tok::Forall);
        let var = match self.advance() {
            Tok::Ident(name) => name,
            other => return Err(self.err(format!("expected a variable name, found {other}"))),
        };
        if var == "X" {
            return Err(self.err("`X` is the set variable and cannot be quantified".into()));
        }
        if self.scope.contains(&var) {
            return Err(self.err(format!("variable `{var}` is already bound")));
        }
        self.expect(Tok::Lt)?;
        let bound = self.term()?;
        self.expect(Tok::Dot)?;
        self.expect(Tok::LParen)?;
        self.scope.push(var.clone());
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        self.expect(Tok::RParen)?;
        Ok(if universal {
            Formula::Forall(var, bound, Box::new(body))
        } else {
            Formula::Exists(var, bound, Box::new(body))
        })
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::True => {
                self.advance();
                Ok(Formula::True)
            }
            Tok::False => {
                self.advance();
                Ok(Formula::False)
            }
            Tok::LParen => {
                // `(` may open a parenthesized term (as in `(y + 1) * 2 in X`)
                // or a parenthesized formula; try the term reading first.
                let save = self.pos;
                match self.relational() {
                    Ok(f) => Ok(f),
                    Err(_) => {
                        self.pos = save;
                        self.expect(Tok::LParen)?;
                        let f = self.formula()?;
                        self.expect(Tok::RParen)?;
                        Ok(f)
                    }
                }
            }
            Tok::Nat(_) | Tok::Ident(_) => self.relational(),
            other => Err(self.err(format!("expected a formula, found {other}"))),
        }
    }

    fn relational(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.advance() {
            Tok::In => match self.advance() {
                Tok::Ident(name) if name == "X" => Ok(Formula::InSet(lhs)),
                Tok::Ident(name) => Ok(Formula::InParam(name, lhs)),
                other => Err(self.err(format!("expected `X` or a parameter name, found {other}"))),
            },
            Tok::Eq => Ok(Formula::Eq(lhs, self.term()?)),
            Tok::Lt => Ok(Formula::Lt(lhs, self.term()?)),
            other => Err(self.err(format!("expected `in`, `=`, or `<`, found {other}"))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Plus {
            self.advance();
            let rhs = self.factor()?;
            lhs = Term::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Term> {
        let mut lhs = self.primary()?;
        while *self.peek() == Tok::Star {
            self.advance();
            let rhs = self.primary()?;
            lhs = Term::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.advance() {
            Tok::Nat(n) => Ok(Term::Const(n)),
            Tok::Ident(name) => {
                if name == "X" {
                    Err(self.err("`X` is the set variable, not a number term".into()))
                } else {
                    Ok(Term::Var(name))
                }
            }
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.err(format!("expected a term, found {other}"))),
        }
    }
}

/// Parses a bare formula.
pub fn parse(src: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(src)?, pos: 0, scope: Vec::new() };
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

/// Parses a formula document: optional `param NAME = {…}` header lines and
/// `#` comments, followed by one formula (which may span lines). Parameter
/// references in the formula must be declared.
pub fn parse_document(src: &str) -> Result<(Formula, ParameterTable)> {
    let mut params = ParameterTable::new();
    let mut body = String::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("param ") {
            let (name, set) = rest.split_once('=').ok_or_else(|| Error::Syntax {
                line: idx as u32 + 1,
                col: 1,
                msg: "expected `param NAME = {…}`".into(),
            })?;
            params.insert(name.trim(), parse_set_literal(set)?)?;
        } else {
            body.push_str(line);
            body.push('\n');
        }
    }
    if body.trim().is_empty() {
        return Err(Error::InvalidInput("document contains no formula".into()));
    }
    let formula = parse(&body)?;
    for name in formula.param_names() {
        if params.get(&name).is_none() {
            return Err(Error::UnknownParameter(name));
        }
    }
    Ok((formula, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;

    #[test]
    fn parse_examples() {
        let f = parse("forall y < 8 . (y in X -> y < 5)").unwrap();
        match f {
            Formula::Forall(v, Term::Const(8), _) => assert_eq!(v, "y"),
            other => panic!("unexpected {other:?}"),
        }

        assert_eq!(parse("0 in X").unwrap(), Formula::InSet(Term::Const(0)));

        let err = parse("forall y < 3 . (y in X ->").unwrap_err();
        match err {
            Error::Syntax { msg, .. } => assert!(msg.contains("end of input"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence() {
        // not > and > or > -> > <->
        let f = parse("not 0 in X and 1 in X or 2 in X -> 3 in X <-> true").unwrap();
        let printed = f.to_string();
        assert_eq!(
            printed,
            "((((not (0 in X) and 1 in X) or 2 in X) -> 3 in X) <-> true)"
        );
        assert_eq!(parse(&printed).unwrap(), f);
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse("true -> false -> true").unwrap();
        assert_eq!(f.to_string(), "(true -> (false -> true))");
    }

    #[test]
    fn parenthesized_terms() {
        let f = parse("(y + 1) * 2 in X").unwrap();
        assert_eq!(f.to_string(), "((y + 1) * 2) in X");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn rebinding_is_rejected() {
        let err = parse("forall y < 3 . (forall y < 2 . (y in X))").unwrap_err();
        match err {
            Error::Syntax { msg, .. } => assert!(msg.contains("already bound")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn document_with_params() {
        let src = "\
# an example document
param P0 = {1,2,3}

forall y < 4 . (y in X -> y in P0)  # trailing comment
";
        let (f, params) = parse_document(src).unwrap();
        assert_eq!(params.get("P0"), Some(&FinSet::from_elements([1, 2, 3])));
        assert!(f.to_string().contains("in P0"));

        let err = parse_document("0 in P7").unwrap_err();
        assert!(matches!(err, Error::UnknownParameter(_)));

        let err = parse_document("param P0 = {1}\nparam P0 = {2}\ntrue").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn error_positions_are_reported() {
        let err = parse("forall y < 3 .\n(y in X and and)").unwrap_err();
        match err {
            Error::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
