//! S-expression reader with line/column diagnostics.
//!
//! One tiny surface syntax serves every artifact kind: segments, theories,
//! proofs, policies, structures. Atoms are runs of characters other than
//! whitespace, parentheses and the comment introducer `;`, which eats the
//! rest of its line.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexprError {
    #[error("{span}: unbalanced parenthesis: this '(' is never closed")]
    UnclosedParen { span: Span },
    #[error("{span}: unexpected ')'")]
    UnexpectedClose { span: Span },
    #[error("input contains no expression")]
    Empty,
    #[error("{span}: unexpected trailing content")]
    Trailing { span: Span },
}

#[derive(Debug, Clone)]
pub enum Sexpr {
    Atom(String, Span),
    List(Vec<Sexpr>, Span),
}

impl Sexpr {
    pub fn span(&self) -> Span {
        match self {
            Sexpr::Atom(_, s) | Sexpr::List(_, s) => *s,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(a, _) => Some(a),
            Sexpr::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::Atom(..) => None,
            Sexpr::List(items, _) => Some(items),
        }
    }
}

/// Structural equality; spans are bookkeeping, not content.
impl PartialEq for Sexpr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Sexpr::Atom(a, _), Sexpr::Atom(b, _)) => a == b,
            (Sexpr::List(a, _), Sexpr::List(b, _)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Sexpr {}

impl fmt::Display for Sexpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexpr::Atom(a, _) => write!(f, "{a}"),
            Sexpr::List(items, _) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(input: &'a str) -> Self {
        Reader { chars: input.chars().peekable(), line: 1, col: 1 }
    }

    fn here(&self) -> Span {
        Span { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read_expr(&mut self) -> Result<Option<Sexpr>, SexprError> {
        self.skip_trivia();
        let span = self.here();
        match self.chars.peek() {
            None => Ok(None),
            Some(')') => Err(SexprError::UnexpectedClose { span }),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(SexprError::UnclosedParen { span }),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexpr::List(items, span)));
                        }
                        Some(_) => match self.read_expr()? {
                            Some(e) => items.push(e),
                            None => return Err(SexprError::UnclosedParen { span }),
                        },
                    }
                }
            }
            Some(_) => {
                let mut atom = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    self.bump();
                }
                Ok(Some(Sexpr::Atom(atom, span)))
            }
        }
    }
}

/// Parse exactly one expression; trailing content is an error.
pub fn parse_one(input: &str) -> Result<Sexpr, SexprError> {
    let mut reader = Reader::new(input);
    let expr = reader.read_expr()?.ok_or(SexprError::Empty)?;
    reader.skip_trivia();
    if reader.chars.peek().is_some() {
        return Err(SexprError::Trailing { span: reader.here() });
    }
    Ok(expr)
}

/// Parse a whole file: a sequence of expressions.
pub fn parse_many(input: &str) -> Result<Vec<Sexpr>, SexprError> {
    let mut reader = Reader::new(input);
    let mut out = Vec::new();
    while let Some(e) = reader.read_expr()? {
        out.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn atoms_and_lists() {
        let e = parse_one("(linear 5)").unwrap();
        let items = e.list().unwrap();
        assert_eq!(items[0].atom(), Some("linear"));
        assert_eq!(items[1].atom(), Some("5"));
    }

    #[test]
    fn nesting_and_comments() {
        let text = "; a comment\n(shift 10 (linear 5)) ; trailing\n";
        let e = parse_one(text).unwrap();
        assert_eq!(e.to_string(), "(shift 10 (linear 5))");
    }

    #[test]
    fn unbalanced_parenthesis_pinpoints_the_opener() {
        let err = parse_one("(a (b c)").unwrap_err();
        assert_eq!(
            err,
            SexprError::UnclosedParen { span: Span { line: 1, col: 1 } }
        );
        let err = parse_one("\n  )").unwrap_err();
        assert_eq!(
            err,
            SexprError::UnexpectedClose { span: Span { line: 2, col: 3 } }
        );
    }

    #[test]
    fn trailing_content_is_flagged() {
        let err = parse_one("(a) (b)").unwrap_err();
        assert!(matches!(err, SexprError::Trailing { .. }));
        let both = parse_many("(a) (b)").unwrap();
        assert_eq!(both.len(), 2);
    }

    #[test]
    fn printing_normalizes_whitespace() {
        let e = parse_one("(  a\n\tb   (c    d) )").unwrap();
        assert_eq!(e.to_string(), "(a b (c d))");
    }

    fn arbitrary_sexpr() -> impl Strategy<Value = Sexpr> {
        let span = Span { line: 1, col: 1 };
        let atom = "[a-z0-9/?*+-]{1,6}".prop_map(move |s| Sexpr::Atom(s, span));
        atom.prop_recursive(4, 32, 6, move |inner| {
            proptest::collection::vec(inner, 0..5)
                .prop_map(move |items| Sexpr::List(items, span))
        })
    }

    proptest! {
        // print then parse is the identity on structure
        #[test]
        fn print_parse_round_trip(e in arbitrary_sexpr()) {
            let text = e.to_string();
            let back = parse_one(&text).unwrap();
            prop_assert_eq!(back, e);
        }

        // parse then print is whitespace normalization: reparsing the
        // printout changes nothing further
        #[test]
        fn parse_print_is_stable(text in "[a-z0-9() \\n]{0,40}") {
            if let Ok(parsed) = parse_one(&text) {
                let printed = parsed.to_string();
                let reparsed = parse_one(&printed).unwrap();
                prop_assert_eq!(&reparsed, &parsed);
                prop_assert_eq!(reparsed.to_string(), printed);
            }
        }
    }
}
