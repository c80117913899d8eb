//! Concrete syntax for formulas. ASCII and Unicode spellings of each
//! operator are interchangeable.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "∀" | "exists" | "∃") var "." formula
//! iff     := imp (("<=>" | "↔") iff)?
//! imp     := or (("=>" | "⊃" | "→") or)*  |  or (("|>" | "⥽") or)*
//! or      := and (("|" | "∨") and)*
//! and     := unary (("&" | "∧") unary)*
//! unary   := ("~" | "¬" | "[]" | "□" | "<>" | "◇") unary | quant | atom
//! atom    := "(" formula ")" | ident | ident "(" terms ")" | term "=" term
//! ```
//!
//! `=>` and `|>` chains are right-associative and may not be mixed without
//! parentheses.

use std::collections::BTreeMap;
use std::fmt;

use crate::formula::{Formula, NameError, PredName, Term, VarName};

/// Byte range into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }

    /// Renders the input with a caret line under the offending span.
    pub fn display_with_source(&self, source: &str) -> String {
        let prefix = source.get(..self.span.start).unwrap_or(source);
        let width = source
            .get(self.span.start..self.span.end)
            .map_or(1, |s| s.chars().count().max(1));
        format!(
            "{self}\n  {source}\n  {}{}",
            " ".repeat(prefix.chars().count()),
            "^".repeat(width)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    Box,
    Dia,
    And,
    Or,
    Imp,
    Strict,
    Iff,
    Eq,
    LParen,
    RParen,
    Comma,
    Dot,
    Forall,
    Exists,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Not => "`~`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`=>`".into(),
            Tok::Strict => "`|>`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
        }
    }
}

// Longest spellings first so that `<=>` wins over `<>` and `|>` over `|`.
const SYMBOLS: &[(&str, Tok)] = &[
    ("<=>", Tok::Iff),
    ("=>", Tok::Imp),
    ("|>", Tok::Strict),
    ("<>", Tok::Dia),
    ("[]", Tok::Box),
    ("~", Tok::Not),
    ("&", Tok::And),
    ("|", Tok::Or),
    ("=", Tok::Eq),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    (",", Tok::Comma),
    (".", Tok::Dot),
    ("¬", Tok::Not),
    ("□", Tok::Box),
    ("◇", Tok::Dia),
    ("∧", Tok::And),
    ("∨", Tok::Or),
    ("⊃", Tok::Imp),
    ("→", Tok::Imp),
    ("⥽", Tok::Strict),
    ("↔", Tok::Iff),
    ("∀", Tok::Forall),
    ("∃", Tok::Exists),
];

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let mut toks = Vec::new();
    let mut pos = 0;
    'outer: while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().expect("nonempty rest");
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..len];
            let tok = match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word.to_string()),
            };
            toks.push((tok, SourceSpan::new(pos, pos + len)));
            pos += len;
            continue;
        }
        for (spelling, tok) in SYMBOLS {
            if rest.starts_with(spelling) {
                toks.push((tok.clone(), SourceSpan::new(pos, pos + spelling.len())));
                pos += spelling.len();
                continue 'outer;
            }
        }
        return Err(ParseError::new(
            SourceSpan::new(pos, pos + c.len_utf8()),
            format!("unknown token `{c}`"),
        ));
    }
    Ok(toks)
}

/// Parses a single formula.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        arities: BTreeMap::new(),
    };
    let f = p.formula()?;
    if let Some((tok, span)) = p.toks.get(p.pos) {
        let msg = if *tok == Tok::RParen {
            "unbalanced parentheses: unexpected `)`".to_string()
        } else {
            format!("unexpected {} after complete formula", tok.describe())
        };
        return Err(ParseError::new(*span, msg));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    end: usize,
    // Uppercase names seen so far, with whether they carried arguments.
    arities: BTreeMap<String, (bool, SourceSpan)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map_or(SourceSpan::new(self.end, self.end), |(_, s)| *s)
    }

    fn bump(&mut self) -> Option<(Tok, SourceSpan)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((tok, span)) => {
                ParseError::new(*span, format!("expected {what}, found {}", tok.describe()))
            }
            None => ParseError::new(self.span(), format!("expected {what}, found end of input")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let mut operands = vec![self.or()?];
        let mut kind: Option<(Tok, SourceSpan)> = None;
        while let Some(tok @ (Tok::Imp | Tok::Strict)) = self.peek().cloned() {
            let span = self.span();
            match &kind {
                Some((k, first)) if *k != tok => {
                    return Err(ParseError::new(
                        span,
                        format!(
                            "cannot mix `=>` and `|>` without parentheses (first operator at {first})"
                        ),
                    ));
                }
                _ => kind = Some((tok.clone(), span)),
            }
            self.pos += 1;
            operands.push(self.or()?);
        }
        let mut acc = operands.pop().expect("at least one operand");
        while let Some(lhs) = operands.pop() {
            acc = match kind.as_ref().map(|(k, _)| k) {
                Some(Tok::Strict) => Formula::strict_imp(lhs, acc),
                _ => Formula::imp(lhs, acc),
            };
        }
        Ok(acc)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::negation(self.unary()?))
            }
            Some(Tok::Box) => {
                self.pos += 1;
                Ok(Formula::boxed(self.unary()?))
            }
            Some(Tok::Dia) => {
                self.pos += 1;
                Ok(Formula::dia(self.unary()?))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier(),
            _ => self.atom(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let (tok, _) = self.bump().expect("quantifier token");
        let var = match self.bump() {
            Some((Tok::Ident(name), span)) => {
                VarName::new(name).map_err(|e| name_error(span, e))?
            }
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a bound variable"));
            }
        };
        if !self.eat(&Tok::Dot) {
            return Err(self.unexpected("`.` after quantified variable"));
        }
        let body = self.formula()?;
        Ok(if tok == Tok::Forall {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.bump() {
            Some((Tok::LParen, open)) => {
                let f = self.formula()?;
                if !self.eat(&Tok::RParen) {
                    let span = self.span();
                    let found = self
                        .peek()
                        .map_or("end of input".to_string(), Tok::describe);
                    return Err(ParseError::new(
                        span,
                        format!(
                            "unbalanced parentheses: `(` at {open} is not closed (found {found})"
                        ),
                    ));
                }
                Ok(f)
            }
            Some((Tok::Ident(name), span)) => {
                if self.eat(&Tok::LParen) {
                    return self.predicate(name, span);
                }
                if self.eat(&Tok::Eq) {
                    let lhs = Term::parse_name(&name).map_err(|e| name_error(span, e))?;
                    let rhs = self.term()?;
                    return Ok(Formula::Eq(lhs, rhs));
                }
                if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    self.note_uppercase(&name, false, span)?;
                }
                Formula::atom(&name).map_err(|e| name_error(span, e))
            }
            Some((Tok::RParen, span)) => Err(ParseError::new(
                span,
                "unbalanced parentheses: unexpected `)`",
            )),
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a formula"))
            }
        }
    }

    fn predicate(&mut self, name: String, span: SourceSpan) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            return Err(ParseError::new(
                SourceSpan::new(span.start, self.span().end),
                format!(
                    "`{name}()` has an empty argument list; zero-ary atoms take no parentheses"
                ),
            ));
        }
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        if !self.eat(&Tok::RParen) {
            return Err(self.unexpected("`,` or `)` in argument list"));
        }
        if name.starts_with(|c: char| c.is_ascii_uppercase()) {
            self.note_uppercase(&name, true, span)?;
        }
        let pred = PredName::new(name).map_err(|e| name_error(span, e))?;
        Ok(Formula::Pred(pred, args))
    }

    // Scheme variables are zero-ary, so an uppercase name may not appear
    // both bare and applied to arguments.
    fn note_uppercase(
        &mut self,
        name: &str,
        applied: bool,
        span: SourceSpan,
    ) -> Result<(), ParseError> {
        match self.arities.get(name) {
            Some((prev, prev_span)) if *prev != applied => Err(ParseError::new(
                span,
                format!(
                    "`{name}` is used both as a zero-ary scheme variable and with arguments (other use at {prev_span})"
                ),
            )),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(name.to_string(), (applied, span));
                Ok(())
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some((Tok::Ident(name), span)) => {
                Term::parse_name(&name).map_err(|e| name_error(span, e))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a term"))
            }
        }
    }
}

fn name_error(span: SourceSpan, e: NameError) -> ParseError {
    ParseError::new(span, e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{render, Format};
    use crate::testing::arb_formula;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap_or_else(|e| panic!("{}", e.display_with_source(s)))
    }

    fn atom(s: &str) -> Formula {
        Formula::atom(s).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            p("□p => p"),
            Formula::imp(Formula::boxed(atom("p")), atom("p"))
        );
        assert_eq!(
            p("<>g & ~[]q"),
            Formula::and(
                Formula::dia(atom("g")),
                Formula::negation(Formula::boxed(atom("q")))
            )
        );
        let x = || Term::var("x").unwrap();
        assert_eq!(
            p("forall x. P(x) => <>Q(x)"),
            Formula::forall(
                VarName::new("x").unwrap(),
                Formula::imp(
                    Formula::pred("P", vec![x()]).unwrap(),
                    Formula::dia(Formula::pred("Q", vec![x()]).unwrap())
                )
            )
        );
    }

    #[test]
    fn associativity() {
        assert_eq!(p("a & b & c"), p("(a & b) & c"));
        assert_eq!(p("a | b | c"), p("(a | b) | c"));
        assert_eq!(p("a => b => c"), p("a => (b => c)"));
        assert_eq!(p("a |> b |> c"), p("a |> (b |> c)"));
        assert_eq!(p("a <=> b <=> c"), p("a <=> (b <=> c)"));
        assert_eq!(p("a & b | c => d <=> e"), p("(((a & b) | c) => d) <=> e"));
        assert_eq!(
            p("~~[]<>a"),
            Formula::negation(Formula::negation(Formula::boxed(Formula::dia(atom("a")))))
        );
    }

    #[test]
    fn ascii_and_unicode_agree() {
        let pairs = [
            ("~[]p & <>q", "¬□p ∧ ◇q"),
            ("p | q => r", "p ∨ q ⊃ r"),
            ("p => q", "p → q"),
            ("p |> q", "p ⥽ q"),
            ("p <=> q", "p ↔ q"),
            ("forall x. exists y. R(x, y)", "∀x. ∃y. R(x, y)"),
        ];
        for (a, u) in pairs {
            assert_eq!(p(a), p(u), "{a} vs {u}");
        }
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        assert_eq!(
            p("a & forall x. P(x) | b"),
            Formula::and(
                atom("a"),
                Formula::forall(
                    VarName::new("x").unwrap(),
                    Formula::or(
                        Formula::pred("P", vec![Term::var("x").unwrap()]).unwrap(),
                        atom("b")
                    )
                )
            )
        );
    }

    #[test]
    fn equality_atoms() {
        let f = p("~(z = a & w = v)");
        let Formula::Not(inner) = f else { panic!() };
        let Formula::And(l, _) = *inner else { panic!() };
        assert_eq!(
            *l,
            Formula::Eq(Term::var("z").unwrap(), Term::constant("a").unwrap())
        );
    }

    #[test]
    fn errors_carry_spans() {
        let e = parse("p & $").unwrap_err();
        assert_eq!(e.span, SourceSpan::new(4, 5));
        assert!(e.message.contains("unknown token"));

        let e = parse("(p & q").unwrap_err();
        assert!(e.message.contains("unbalanced"), "{e}");
        let e = parse("p & q)").unwrap_err();
        assert!(e.message.contains("unbalanced"), "{e}");
        assert_eq!(e.span, SourceSpan::new(5, 6));

        let e = parse("p => q |> r").unwrap_err();
        assert!(e.message.contains("cannot mix"), "{e}");
        assert_eq!(e.span, SourceSpan::new(7, 9));
        assert!(parse("p |> q => r").is_err());
        assert!(parse("(p => q) |> r").is_ok());

        let e = parse("P & P(x)").unwrap_err();
        assert!(e.message.contains("zero-ary"), "{e}");
        assert!(parse("P()").is_err());
        assert!(parse("forall a. P(a)").is_err());
        assert!(parse("").is_err());
        assert!(parse("forall x P(x)").is_err());
    }

    #[test]
    fn error_spans_respect_char_boundaries() {
        let text = "□p ⊃ §";
        let e = parse(text).unwrap_err();
        assert!(text.is_char_boundary(e.span.start) && text.is_char_boundary(e.span.end));
        assert!(e.display_with_source(text).contains('^'));
    }

    proptest! {
        #[test]
        fn ascii_round_trip(f in arb_formula()) {
            prop_assert_eq!(parse(&render(&f, Format::Ascii)).unwrap(), f);
        }

        #[test]
        fn unicode_round_trip(f in arb_formula()) {
            prop_assert_eq!(parse(&render(&f, Format::Unicode)).unwrap(), f);
        }

        #[test]
        fn parse_is_total(s in "\\PC{0,40}") {
            let _ = parse(&s);
        }

        #[test]
        fn parse_is_total_on_operator_soup(s in "[pqPx() ~&|=><\\[\\].,□◇∀∃¬]{0,30}") {
            if let Err(e) = parse(&s) {
                prop_assert!(e.span.start <= e.span.end && e.span.end <= s.len());
                prop_assert!(s.is_char_boundary(e.span.start) && s.is_char_boundary(e.span.end));
            }
        }
    }
}
