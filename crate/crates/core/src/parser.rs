//! Line-oriented `.onto` reader and writer, plus a reader for the canonical
//! prefix serialization.
//!
//! ```text
//! NAME SUBCLASSOF expr    NAME EQUIV expr     DISJOINT A B
//! SUBROLE r s             TRANSITIVE r        INVERSE r s
//! C(a)                    r(a, b)             a != b
//!
//! expr   := term (OR term)*
//! term   := factor (AND factor)*
//! factor := NAME | TOP | BOT | NOT factor | ( expr )
//!         | SOME r.factor | ALL r.factor | NONVAC r.factor
//!         | ATLEAST INT r.factor | ATMOST INT r.factor | EXACTLY INT r.factor
//! r      := NAME | NAME^-
//! ```
//!
//! Complex left-hand sides (`(A OR B) SUBCLASSOF C`, `(SOME r.A)(x)`) are
//! accepted so that every expression the library can build also survives a
//! render/parse round trip.

use crate::expr::{Axiom, ConceptExpr, Ontology, RoleExpr};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub const NON_SIMPLE_ROLE: &str = "non-simple role in number restriction";

const KEYWORDS: &[&str] = &[
    "SUBCLASSOF",
    "EQUIV",
    "DISJOINT",
    "SUBROLE",
    "TRANSITIVE",
    "INVERSE",
    "AND",
    "OR",
    "NOT",
    "SOME",
    "ALL",
    "ATLEAST",
    "ATMOST",
    "NONVAC",
    "EXACTLY",
    "TOP",
    "BOT",
];

/// True if `name` can be written as a bare identifier in `.onto` files.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_ident_char) && !KEYWORDS.contains(&name)
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == ':'
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Keyword(&'static str),
    Int(u32),
    LParen,
    RParen,
    Dot,
    Comma,
    NotEq,
    InvMark,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("name `{}`", s),
            Tok::Keyword(k) => format!("keyword `{}`", k),
            Tok::Int(n) => format!("number `{}`", n),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::NotEq => "`!=`".into(),
            Tok::InvMark => "`^-`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn lex_line(text: &str, line: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                i += 2;
                Tok::NotEq
            }
            '^' if chars.get(i + 1) == Some(&'-') => {
                i += 2;
                Tok::InvMark
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && is_ident_char(chars[i]) && !chars[i].is_ascii_digit() {
                    return Err(ParseError::new(line, col, "names must not start with a digit"));
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse::<u32>()
                    .map_err(|_| ParseError::new(line, col, "number out of range"))?;
                Tok::Int(n)
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                match KEYWORDS.iter().find(|k| **k == s) {
                    Some(k) => Tok::Keyword(k),
                    None => Tok::Ident(s),
                }
            }
            other => return Err(ParseError::new(line, col, format!("unexpected character `{}`", other))),
        };
        out.push(Spanned { tok, col });
    }
    Ok(out)
}

/// A role occurrence under a number restriction, kept for the simplicity check.
struct CountedUse {
    role: String,
    line: usize,
    col: usize,
}

struct LineParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    eol_col: usize,
    counted: Vec<CountedUse>,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|s| s.col).unwrap_or(self.eol_col)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(format!("expected {}, found {}", wanted, t.describe())),
            None => self.err(format!("expected {}, found end of line", wanted)),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn name(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of line"))
        } else {
            Ok(())
        }
    }

    fn role(&mut self) -> Result<RoleExpr, ParseError> {
        let name = self.name("a role name")?;
        let mut role = RoleExpr::named(name);
        if self.peek() == Some(&Tok::InvMark) {
            self.pos += 1;
            role = role.inverse();
        }
        Ok(role)
    }

    fn expr(&mut self) -> Result<ConceptExpr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Keyword("OR")) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            ConceptExpr::or(terms)
        })
    }

    fn term(&mut self) -> Result<ConceptExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(&Tok::Keyword("AND")) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ConceptExpr::and(factors)
        })
    }

    fn restriction_tail(&mut self, counted: bool) -> Result<(RoleExpr, ConceptExpr), ParseError> {
        let col = self.col();
        let role = self.role()?;
        if counted {
            self.counted.push(CountedUse {
                role: role.name.clone(),
                line: self.line,
                col,
            });
        }
        self.expect(Tok::Dot, "`.` after the role")?;
        let filler = self.factor()?;
        Ok((role, filler))
    }

    fn factor(&mut self) -> Result<ConceptExpr, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Ident(name)) => Ok(ConceptExpr::Atomic(name)),
            Some(Tok::Keyword("TOP")) => Ok(ConceptExpr::Top),
            Some(Tok::Keyword("BOT")) => Ok(ConceptExpr::Bottom),
            Some(Tok::Keyword("NOT")) => Ok(ConceptExpr::not(self.factor()?)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Keyword("SOME")) => {
                let (r, f) = self.restriction_tail(false)?;
                Ok(ConceptExpr::exists(r, f))
            }
            Some(Tok::Keyword("ALL")) => {
                let (r, f) = self.restriction_tail(false)?;
                Ok(ConceptExpr::for_all(r, f))
            }
            Some(Tok::Keyword("NONVAC")) => {
                let (r, f) = self.restriction_tail(false)?;
                Ok(ConceptExpr::non_vacuous(r, f))
            }
            Some(Tok::Keyword(kw @ ("ATLEAST" | "ATMOST" | "EXACTLY"))) => {
                let n_col = self.col();
                let n = self.int()?;
                if n == 0 && kw != "ATMOST" {
                    return Err(ParseError::new(
                        self.line,
                        n_col,
                        format!("{} needs a positive number", kw),
                    ));
                }
                let (r, f) = self.restriction_tail(true)?;
                Ok(match kw {
                    "ATLEAST" => ConceptExpr::at_least(n, r, f),
                    "ATMOST" => ConceptExpr::at_most(n, r, f),
                    _ => ConceptExpr::exactly(n, r, f),
                })
            }
            Some(t) => Err(ParseError::new(
                self.line,
                col,
                format!("expected a concept expression, found {}", t.describe()),
            )),
            None => Err(ParseError::new(
                self.line,
                col,
                "expected a concept expression, found end of line",
            )),
        }
    }

    fn axiom(&mut self) -> Result<Axiom, ParseError> {
        match (self.peek().cloned(), self.peek_at(1).cloned()) {
            (Some(Tok::Keyword("DISJOINT")), _) => {
                self.pos += 1;
                let a = self.name("a concept name")?;
                let b = self.name("a concept name")?;
                self.finish()?;
                Ok(Axiom::disjointness(a, b))
            }
            (Some(Tok::Keyword("SUBROLE")), _) => {
                self.pos += 1;
                let sub = self.role()?;
                let sup = self.role()?;
                self.finish()?;
                Ok(Axiom::SubRole { sub, sup })
            }
            (Some(Tok::Keyword("TRANSITIVE")), _) => {
                self.pos += 1;
                let r = self.name("a role name")?;
                self.finish()?;
                Ok(Axiom::Transitive(r))
            }
            (Some(Tok::Keyword("INVERSE")), _) => {
                self.pos += 1;
                let role = self.name("a role name")?;
                let inverse = self.name("a role name")?;
                self.finish()?;
                Ok(Axiom::Inverse { role, inverse })
            }
            (Some(Tok::Ident(a)), Some(Tok::NotEq)) => {
                self.pos += 2;
                let b = self.name("an individual name")?;
                self.finish()?;
                Ok(Axiom::Inequality(a, b))
            }
            (Some(Tok::Ident(head)), Some(Tok::LParen)) => {
                self.pos += 2;
                let first = self.name("an individual name")?;
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    let second = self.name("an individual name")?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.finish()?;
                    Ok(Axiom::RoleAssertion {
                        role: head,
                        subject: first,
                        object: second,
                    })
                } else {
                    self.expect(Tok::RParen, "`)` or `,`")?;
                    self.finish()?;
                    Ok(Axiom::ConceptAssertion {
                        concept: ConceptExpr::Atomic(head),
                        individual: first,
                    })
                }
            }
            _ => self.class_axiom(),
        }
    }

    fn class_axiom(&mut self) -> Result<Axiom, ParseError> {
        let lhs_col = self.col();
        let lhs = self.expr()?;
        match self.bump() {
            Some(Tok::Keyword("SUBCLASSOF")) => {
                let sup = self.expr()?;
                self.finish()?;
                Ok(Axiom::SubClass { sub: lhs, sup })
            }
            Some(Tok::Keyword("EQUIV")) => {
                if !matches!(lhs, ConceptExpr::Atomic(_) | ConceptExpr::Bottom) {
                    return Err(ParseError::new(
                        self.line,
                        lhs_col,
                        "the left side of EQUIV must be a concept name or BOT",
                    ));
                }
                let rhs = self.expr()?;
                self.finish()?;
                Ok(Axiom::EquivClass { lhs, rhs })
            }
            Some(Tok::LParen) => {
                let individual = self.name("an individual name")?;
                self.expect(Tok::RParen, "`)`")?;
                self.finish()?;
                Ok(Axiom::ConceptAssertion {
                    concept: lhs,
                    individual,
                })
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.unexpected("SUBCLASSOF, EQUIV or an assertion"))
            }
        }
    }
}

/// Parses a whole `.onto` document and validates role simplicity.
pub fn parse_ontology(source: &str) -> Result<Ontology, ParseError> {
    let mut onto = Ontology::default();
    let mut counted: Vec<CountedUse> = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks: &toks,
            pos: 0,
            line,
            eol_col: raw.chars().count() + 1,
            counted: Vec::new(),
        };
        let ax = p.axiom()?;
        counted.append(&mut p.counted);
        onto.add_axiom(ax);
    }
    let non_simple = onto.non_simple_roles();
    if let Some(bad) = counted.iter().find(|u| non_simple.contains(&u.role)) {
        return Err(ParseError::new(bad.line, bad.col, NON_SIMPLE_ROLE));
    }
    Ok(onto)
}

/// Parses a single infix expression (the `expr` production).
pub fn parse_infix_expr(text: &str) -> Result<ConceptExpr, ParseError> {
    let toks = lex_line(text, 1)?;
    let mut p = LineParser {
        toks: &toks,
        pos: 0,
        line: 1,
        eol_col: text.chars().count() + 1,
        counted: Vec::new(),
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Canonical prefix serialization.
pub fn serialize_expr(expr: &ConceptExpr) -> String {
    expr.canonical()
}

fn render_role(r: &RoleExpr) -> String {
    if r.inverted {
        format!("{}^-", r.name)
    } else {
        r.name.clone()
    }
}

/// Infix rendering of an expression in the `.onto` grammar.
pub fn render_expr(expr: &ConceptExpr) -> String {
    match expr {
        ConceptExpr::Or(ops) => ops.iter().map(render_term).collect::<Vec<_>>().join(" OR "),
        _ => render_term(expr),
    }
}

fn render_term(expr: &ConceptExpr) -> String {
    match expr {
        ConceptExpr::And(ops) => ops.iter().map(render_factor).collect::<Vec<_>>().join(" AND "),
        _ => render_factor(expr),
    }
}

fn render_factor(expr: &ConceptExpr) -> String {
    match expr {
        ConceptExpr::Atomic(n) => n.clone(),
        ConceptExpr::Top => "TOP".into(),
        ConceptExpr::Bottom => "BOT".into(),
        ConceptExpr::Not(c) => format!("NOT {}", render_factor(c)),
        ConceptExpr::And(_) | ConceptExpr::Or(_) => format!("({})", render_expr(expr)),
        ConceptExpr::Exists(r, c) => format!("SOME {}.{}", render_role(r), render_factor(c)),
        ConceptExpr::ForAll(r, c) => format!("ALL {}.{}", render_role(r), render_factor(c)),
        ConceptExpr::NonVacuous(r, c) => format!("NONVAC {}.{}", render_role(r), render_factor(c)),
        ConceptExpr::AtLeast(n, r, c) => format!("ATLEAST {} {}.{}", n, render_role(r), render_factor(c)),
        ConceptExpr::AtMost(n, r, c) => format!("ATMOST {} {}.{}", n, render_role(r), render_factor(c)),
        ConceptExpr::Exactly(n, r, c) => format!("EXACTLY {} {}.{}", n, render_role(r), render_factor(c)),
    }
}

/// Renders one axiom as a `.onto` line.
pub fn render_axiom(ax: &Axiom) -> String {
    match ax {
        Axiom::SubClass { sub, sup } => match sub {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => {
                format!("{} SUBCLASSOF {}", render_factor(sub), render_expr(sup))
            }
            _ => format!("({}) SUBCLASSOF {}", render_expr(sub), render_expr(sup)),
        },
        Axiom::EquivClass {
            lhs: ConceptExpr::Bottom,
            rhs: ConceptExpr::And(ops),
        } if ops.len() == 2 && ops.iter().all(|o| o.as_atomic().is_some()) => {
            format!("DISJOINT {} {}", ops[0], ops[1])
        }
        Axiom::EquivClass { lhs, rhs } => format!("{} EQUIV {}", render_factor(lhs), render_expr(rhs)),
        Axiom::SubRole { sub, sup } => format!("SUBROLE {} {}", render_role(sub), render_role(sup)),
        Axiom::Transitive(r) => format!("TRANSITIVE {}", r),
        Axiom::Inverse { role, inverse } => format!("INVERSE {} {}", role, inverse),
        Axiom::ConceptAssertion { concept, individual } => match concept {
            ConceptExpr::Atomic(n) => format!("{}({})", n, individual),
            _ => format!("({})({})", render_expr(concept), individual),
        },
        Axiom::RoleAssertion { role, subject, object } => format!("{}({}, {})", role, subject, object),
        Axiom::Inequality(a, b) => format!("{} != {}", a, b),
    }
}

/// Renders an ontology as a `.onto` document: TBox first, then ABox.
pub fn render_ontology(o: &Ontology) -> String {
    let mut out = String::new();
    for ax in o.axioms() {
        let _ = writeln!(out, "{}", render_axiom(ax));
    }
    out
}

/// Reads the canonical prefix serialization back into an expression.
pub fn parse_canonical(text: &str) -> Result<ConceptExpr, ParseError> {
    let mut p = SexpParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct SexpParser {
    chars: Vec<char>,
    pos: usize,
}

impl SexpParser {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(1, self.pos + 1, message)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && !self.chars[self.pos].is_whitespace()
            && !"()".contains(self.chars[self.pos])
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c)))
        }
    }

    fn peek_open(&mut self) -> bool {
        self.skip_ws();
        self.chars.get(self.pos) == Some(&'(')
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let s = self.atom()?;
        s.parse()
            .map_err(|_| ParseError::new(1, at + 1, format!("expected a number, found `{}`", s)))
    }

    fn role(&mut self) -> Result<RoleExpr, ParseError> {
        if self.peek_open() {
            self.pos += 1;
            let head = self.atom()?;
            if head != "inv" {
                return Err(self.err("expected `inv`"));
            }
            let name = self.atom()?;
            self.eat(')')?;
            Ok(RoleExpr::named(name).inverse())
        } else {
            Ok(RoleExpr::named(self.atom()?))
        }
    }

    fn expr(&mut self) -> Result<ConceptExpr, ParseError> {
        if !self.peek_open() {
            let a = self.atom()?;
            return Ok(match a.as_str() {
                "TOP" => ConceptExpr::Top,
                "BOT" => ConceptExpr::Bottom,
                _ => ConceptExpr::Atomic(a),
            });
        }
        self.pos += 1;
        let head = self.atom()?;
        let e = match head.as_str() {
            "not" => ConceptExpr::not(self.expr()?),
            "and" | "or" => {
                let mut ops = Vec::new();
                loop {
                    self.skip_ws();
                    if self.chars.get(self.pos) == Some(&')') {
                        break;
                    }
                    ops.push(self.expr()?);
                }
                if ops.len() < 2 {
                    return Err(self.err(format!("`{}` needs at least two operands", head)));
                }
                if head == "and" {
                    ConceptExpr::and(ops)
                } else {
                    ConceptExpr::or(ops)
                }
            }
            "some" | "all" | "nonvac" => {
                let r = self.role()?;
                let c = self.expr()?;
                match head.as_str() {
                    "some" => ConceptExpr::exists(r, c),
                    "all" => ConceptExpr::for_all(r, c),
                    _ => ConceptExpr::non_vacuous(r, c),
                }
            }
            "atleast" | "atmost" | "exactly" => {
                let n = self.number()?;
                let r = self.role()?;
                let c = self.expr()?;
                match head.as_str() {
                    "atleast" => ConceptExpr::at_least(n, r, c),
                    "atmost" => ConceptExpr::at_most(n, r, c),
                    _ => ConceptExpr::exactly(n, r, c),
                }
            }
            other => return Err(self.err(format!("unknown constructor `{}`", other))),
        };
        self.eat(')')?;
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equivalence_line() {
        let o = parse_ontology("IIT_MS_Student EQUIV IITStudent AND ATMOST 1 hasAdvisor.TeachingStaff").unwrap();
        assert_eq!(
            o.tbox,
            vec![Axiom::EquivClass {
                lhs: ConceptExpr::atomic("IIT_MS_Student"),
                rhs: ConceptExpr::and([
                    ConceptExpr::atomic("IITStudent"),
                    ConceptExpr::at_most(1, RoleExpr::named("hasAdvisor"), ConceptExpr::atomic("TeachingStaff")),
                ]),
            }]
        );
    }

    #[test]
    fn role_assertion_line() {
        let o = parse_ontology("hasAdvisor(tom, bob)").unwrap();
        assert_eq!(
            o.abox,
            vec![Axiom::RoleAssertion {
                role: "hasAdvisor".into(),
                subject: "tom".into(),
                object: "bob".into()
            }]
        );
    }

    #[test]
    fn empty_file() {
        let o = parse_ontology("").unwrap();
        assert!(o.tbox.is_empty() && o.abox.is_empty());
        assert!(o.concept_names.is_empty() && o.role_names.is_empty() && o.individual_names.is_empty());
    }

    #[test]
    fn comments_and_blank_lines() {
        let o = parse_ontology("# header\n\nA SUBCLASSOF B # trailing\n").unwrap();
        assert_eq!(o.tbox.len(), 1);
    }

    #[test]
    fn precedence_and_binds_tighter() {
        let e = parse_infix_expr("A OR B AND C").unwrap();
        assert_eq!(e.canonical(), "(or (and B C) A)");
        let e = parse_infix_expr("NOT A AND B").unwrap();
        assert_eq!(e.canonical(), "(and (not A) B)");
        let e = parse_infix_expr("SOME r.A AND B").unwrap();
        assert_eq!(e.canonical(), "(and (some r A) B)");
    }

    #[test]
    fn error_position() {
        let err = parse_ontology("A SUBCLASSOF B\nC EQUIV SOME r\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 15);
        let err = parse_ontology("A SUBCLASSOF $").unwrap_err();
        assert_eq!((err.line, err.column), (1, 14));
    }

    #[test]
    fn rejects_zero_atleast() {
        let err = parse_ontology("A SUBCLASSOF ATLEAST 0 r.B").unwrap_err();
        assert_eq!(err.column, 22);
    }

    #[test]
    fn simple_role_violation() {
        let src = "TRANSITIVE partOf\nSUBROLE partOf within\nA SUBCLASSOF ATMOST 2 within.B\n";
        let err = parse_ontology(src).unwrap_err();
        assert_eq!(err.message, NON_SIMPLE_ROLE);
        assert_eq!((err.line, err.column), (3, 23));
    }

    #[test]
    fn serialize_examples() {
        let r = RoleExpr::named("hasAdvisor");
        assert_eq!(
            serialize_expr(&ConceptExpr::exists(r.clone(), ConceptExpr::atomic("Professor"))),
            "(some hasAdvisor Professor)"
        );
        assert_eq!(
            serialize_expr(&ConceptExpr::And(vec![
                ConceptExpr::atomic("B"),
                ConceptExpr::atomic("A")
            ])),
            "(and A B)"
        );
        assert_eq!(
            serialize_expr(&ConceptExpr::non_vacuous(r, ConceptExpr::atomic("TeachingStaff"))),
            "(nonvac hasAdvisor TeachingStaff)"
        );
    }

    #[test]
    fn canonical_round_trip() {
        for s in [
            "(and (not B) A)",
            "(exactly 2 (inv r) (or (not A) B))",
            "(atleast 1 hasAdvisor (and (not Professor) TeachingStaff))",
            "BOT",
        ] {
            assert_eq!(parse_canonical(s).unwrap().canonical(), s);
        }
        assert!(parse_canonical("(and A)").is_err());
        assert!(parse_canonical("(some r A").is_err());
    }

    #[test]
    fn render_round_trip_with_extensions() {
        let src = "\
(A OR B) SUBCLASSOF C
BOT EQUIV A AND B AND C
DISJOINT A B
SUBROLE r^- s
INVERSE r q
(NONVAC r.A AND EXACTLY 2 s.(B OR NOT C))(x)
x != y
";
        let o = parse_ontology(src).unwrap();
        let again = parse_ontology(&render_ontology(&o)).unwrap();
        assert_eq!(o, again);
    }
}
