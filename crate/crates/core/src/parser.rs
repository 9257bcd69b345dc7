//! Line-oriented functional-style text syntax for ELH ontologies.
//!
//! ```text
//! stmt    := "SubClassOf(" concept concept ")" | "SubRoleOf(" role role ")"
//!          | "ClassAssertion(" concept ind ")" | "RoleAssertion(" role ind ind ")"
//! concept := "Top" | "Bottom" | name | "And(" concept concept+ ")" | "Some(" role concept ")"
//! ```
//!
//! One statement per line, '#' starts a line comment, whitespace inside a
//! statement is insignificant. `And`, `Some`, `Top`, `Bottom` are reserved
//! words. Error positions are 1-based (line, column).

use crate::error::{Error, Result};
use crate::ontology::{Axiom, Concept, ConceptName, IndividualName, Ontology, RoleName};

const RESERVED: [&str; 4] = ["Top", "Bottom", "And", "Some"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, column: usize, expected: impl Into<String>) -> Error {
    Error::SyntaxError {
        line,
        column,
        expected: expected.into(),
    }
}

fn tokenize_line(line: &str, line_no: usize) -> Result<Vec<Spanned>> {
    let mut toks = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b'#' => break,
            b' ' | b'\t' | b'\r' => i += 1,
            b'(' => {
                toks.push(Spanned { tok: Tok::LParen, line: line_no, col: i + 1 });
                i += 1;
            }
            b')' => {
                toks.push(Spanned { tok: Tok::RParen, line: line_no, col: i + 1 });
                i += 1;
            }
            _ if b.is_ascii_alphanumeric() || b == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push(Spanned {
                    tok: Tok::Ident(line[start..i].to_string()),
                    line: line_no,
                    col: start + 1,
                });
            }
            _ => return Err(err(line_no, i + 1, "identifier, '(' or ')'")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    eol_col: usize,
}

impl Parser {
    fn for_line(line: &str, line_no: usize) -> Result<Self> {
        Ok(Parser {
            toks: tokenize_line(line, line_no)?,
            pos: 0,
            line: line_no,
            eol_col: line.len() + 1,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.line, self.eol_col),
        }
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_lparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => {
                let (l, c) = self.here();
                Err(err(l, c, "'('"))
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => {
                let (l, c) = self.here();
                Err(err(l, c, "')'"))
            }
        }
    }

    fn expect_name(&mut self, what: &str) -> Result<String> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Spanned { tok: Tok::Ident(s), .. }) => {
                if RESERVED.contains(&s.as_str()) {
                    Err(err(l, c, format!("{what} (found reserved word {s:?})")))
                } else {
                    Ok(s)
                }
            }
            _ => Err(err(l, c, what)),
        }
    }

    fn role(&mut self) -> Result<RoleName> {
        RoleName::new(self.expect_name("role name")?)
    }

    fn individual(&mut self) -> Result<IndividualName> {
        IndividualName::new(self.expect_name("individual name")?)
    }

    fn concept(&mut self) -> Result<Concept> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Spanned { tok: Tok::Ident(s), .. }) => match s.as_str() {
                "Top" => Ok(Concept::Top),
                "Bottom" => Ok(Concept::Bottom),
                "And" => {
                    self.expect_lparen()?;
                    let first = self.concept()?;
                    let mut rest = vec![self.concept()?];
                    while !matches!(self.peek(), Some(Tok::RParen) | None) {
                        rest.push(self.concept()?);
                    }
                    self.expect_rparen()?;
                    // n-ary conjunctions fold to the right
                    let mut acc = rest.pop().expect("at least one");
                    while let Some(c) = rest.pop() {
                        acc = Concept::conj(c, acc);
                    }
                    Ok(Concept::conj(first, acc))
                }
                "Some" => {
                    self.expect_lparen()?;
                    let role = self.role()?;
                    let filler = self.concept()?;
                    self.expect_rparen()?;
                    Ok(Concept::exists(role, filler))
                }
                _ => Ok(Concept::Atomic(ConceptName::new(s)?)),
            },
            _ => Err(err(l, c, "concept")),
        }
    }

    fn statement(&mut self) -> Result<Axiom> {
        let (l, c) = self.here();
        let keyword = match self.bump() {
            Some(Spanned { tok: Tok::Ident(s), .. }) => s,
            _ => {
                return Err(err(
                    l,
                    c,
                    "one of SubClassOf, SubRoleOf, ClassAssertion, RoleAssertion",
                ))
            }
        };
        let ax = match keyword.as_str() {
            "SubClassOf" => {
                self.expect_lparen()?;
                let lhs = self.concept()?;
                let rhs = self.concept()?;
                self.expect_rparen()?;
                Axiom::Ci(lhs, rhs)
            }
            "SubRoleOf" => {
                self.expect_lparen()?;
                let r = self.role()?;
                let s = self.role()?;
                self.expect_rparen()?;
                Axiom::Ri(r, s)
            }
            "ClassAssertion" => {
                self.expect_lparen()?;
                let concept = self.concept()?;
                let ind = self.individual()?;
                self.expect_rparen()?;
                Axiom::ConceptAssertion(concept, ind)
            }
            "RoleAssertion" => {
                self.expect_lparen()?;
                let role = self.role()?;
                let a = self.individual()?;
                let b = self.individual()?;
                self.expect_rparen()?;
                Axiom::RoleAssertion(role, a, b)
            }
            _ => {
                return Err(err(
                    l,
                    c,
                    "one of SubClassOf, SubRoleOf, ClassAssertion, RoleAssertion",
                ))
            }
        };
        if self.pos != self.toks.len() {
            let (l, c) = self.here();
            return Err(err(l, c, "end of statement"));
        }
        Ok(ax)
    }
}

/// Parses one axiom. Rejects Bottom like `parse_ontology`.
pub fn parse_axiom(text: &str) -> Result<Axiom> {
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let mut p = Parser::for_line(l, i + 1).map(Some).transpose()?;
        match &mut p {
            Ok(parser) if parser.toks.is_empty() => None,
            _ => Some(p),
        }
    });
    let first = match lines.next() {
        Some(p) => p?,
        None => return Err(err(1, 1, "a statement")),
    };
    if let Some(extra) = lines.next() {
        let extra = extra?;
        let (l, c) = extra.here();
        return Err(err(l, c, "end of input"));
    }
    let mut parser = first;
    let ax = parser.statement()?;
    if ax.contains_bottom() {
        return Err(Error::BottomNotSupported(ax.to_string()));
    }
    Ok(ax)
}

/// Parses a whole document; duplicate axioms are deduplicated.
pub fn parse_ontology(text: &str) -> Result<Ontology> {
    let mut o = Ontology::new();
    for (i, line) in text.lines().enumerate() {
        let mut parser = Parser::for_line(line, i + 1)?;
        if parser.toks.is_empty() {
            continue;
        }
        o.insert(parser.statement()?);
    }
    o.ensure_bottom_free()?;
    Ok(o)
}

/// Canonical form: one statement per line, sorted lexicographically.
pub fn serialize(o: &Ontology) -> String {
    let mut lines: Vec<String> = o.axioms().map(|ax| ax.to_string()).collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}
