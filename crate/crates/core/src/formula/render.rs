//! Text rendering with minimal parentheses.
//!
//! Precedence, loosest first: quantifiers (body extends to the right as far
//! as possible), `<=>`, `=>`/`|>` (right-associative, never mixed), `|`,
//! `&` (both left-associative), prefix operators, atoms.

use super::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Ascii,
    Unicode,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "unicode" => Ok(Format::Unicode),
            "latex" => Ok(Format::Latex),
            other => Err(format!(
                "unknown format `{other}` (expected ascii, unicode or latex)"
            )),
        }
    }
}

struct Table {
    not: &'static str,
    boxed: &'static str,
    dia: &'static str,
    and: &'static str,
    or: &'static str,
    imp: &'static str,
    iff: &'static str,
    strict: &'static str,
    forall: &'static str,
    exists: &'static str,
}

const ASCII: Table = Table {
    not: "~",
    boxed: "[]",
    dia: "<>",
    and: "&",
    or: "|",
    imp: "=>",
    iff: "<=>",
    strict: "|>",
    forall: "forall ",
    exists: "exists ",
};

const UNICODE: Table = Table {
    not: "¬",
    boxed: "□",
    dia: "◇",
    and: "∧",
    or: "∨",
    imp: "=>",
    iff: "↔",
    strict: "⥽",
    forall: "∀",
    exists: "∃",
};

const LATEX: Table = Table {
    not: "\\neg ",
    boxed: "\\Box ",
    dia: "\\Diamond ",
    and: "\\wedge",
    or: "\\vee",
    imp: "\\supset",
    iff: "\\leftrightarrow",
    strict: "\\strictif",
    forall: "\\forall ",
    exists: "\\exists ",
};

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const PREFIX: u8 = 5;
const ATOM: u8 = 6;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Imp(..) | Formula::StrictImp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(_) | Formula::Box(_) | Formula::Dia(_) => PREFIX,
        _ => ATOM,
    }
}

/// Renders `f`. Ascii and unicode output parse back to `f`.
pub fn render(f: &Formula, format: Format) -> String {
    let table = match format {
        Format::Ascii => &ASCII,
        Format::Unicode => &UNICODE,
        Format::Latex => &LATEX,
    };
    let mut r = Renderer {
        table,
        latex: format == Format::Latex,
        out: String::new(),
    };
    r.formula(f, true);
    r.out
}

struct Renderer {
    table: &'static Table,
    latex: bool,
    out: String,
}

impl Renderer {
    fn ident(&mut self, name: &str) {
        if self.latex {
            self.out.push_str(&name.replace('_', "\\_"));
        } else {
            self.out.push_str(name);
        }
    }

    fn term(&mut self, t: &Term) {
        self.ident(t.name());
    }

    // `tail`: nothing follows this subformula before the end of the
    // enclosing parenthesised group, so a quantifier may print bare.
    fn formula(&mut self, f: &Formula, tail: bool) {
        let t = self.table;
        match f {
            Formula::Prop(p) => self.ident(p.as_str()),
            Formula::Scheme(s) => self.ident(s.as_str()),
            Formula::Pred(p, args) => {
                self.ident(p.as_str());
                self.out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.term(a);
                }
                self.out.push(')');
            }
            Formula::Eq(l, r) => {
                self.term(l);
                self.out.push_str(" = ");
                self.term(r);
            }
            Formula::Not(a) => self.prefix(t.not, a, tail),
            Formula::Box(a) => self.prefix(t.boxed, a, tail),
            Formula::Dia(a) => self.prefix(t.dia, a, tail),
            Formula::And(a, b) => self.binary(f, t.and, a, b, tail),
            Formula::Or(a, b) => self.binary(f, t.or, a, b, tail),
            Formula::Imp(a, b) => self.binary(f, t.imp, a, b, tail),
            Formula::Iff(a, b) => self.binary(f, t.iff, a, b, tail),
            Formula::StrictImp(a, b) => self.binary(f, t.strict, a, b, tail),
            Formula::Forall(x, body) => self.quantifier(t.forall, x.as_str(), body),
            Formula::Exists(x, body) => self.quantifier(t.exists, x.as_str(), body),
        }
    }

    fn prefix(&mut self, op: &str, arg: &Formula, tail: bool) {
        self.out.push_str(op);
        let p = precedence(arg);
        let parens = if p == QUANT { !tail } else { p < PREFIX };
        self.group(arg, parens, tail);
    }

    fn binary(&mut self, node: &Formula, op: &str, a: &Formula, b: &Formula, tail: bool) {
        let p = precedence(node);
        let right_assoc = p <= IMP;
        let pa = precedence(a);
        let left_parens = pa < p || (pa == p && right_assoc);
        let pb = precedence(b);
        let right_parens = if pb == QUANT {
            !tail
        } else {
            pb < p
                || (pb == p
                    && (!right_assoc || std::mem::discriminant(node) != std::mem::discriminant(b)))
        };
        self.group(a, left_parens, false);
        self.out.push(' ');
        self.out.push_str(op);
        self.out.push(' ');
        self.group(b, right_parens, tail);
    }

    fn quantifier(&mut self, op: &str, var: &str, body: &Formula) {
        self.out.push_str(op);
        self.ident(var);
        self.out.push_str(". ");
        self.formula(body, true);
    }

    fn group(&mut self, f: &Formula, parens: bool, tail: bool) {
        if parens {
            self.out.push('(');
            self.formula(f, true);
            self.out.push(')');
        } else {
            self.formula(f, tail);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn r(text: &str, format: Format) -> String {
        render(&parse(text).unwrap(), format)
    }

    #[test]
    fn operator_tables() {
        let g = Formula::prop("g").unwrap();
        assert_eq!(
            render(
                &Formula::imp(Formula::boxed(g.clone()), g.clone()),
                Format::Unicode
            ),
            "□g => g"
        );
        assert_eq!(render(&Formula::dia(g), Format::Ascii), "<>g");
        let p = Formula::scheme("P").unwrap();
        assert_eq!(
            render(
                &Formula::strict_imp(p.clone(), Formula::boxed(p)),
                Format::Latex
            ),
            "P \\strictif \\Box P"
        );
        assert_eq!(r("[]P => P", Format::Latex), "\\Box P \\supset P");
        assert_eq!(r("~<>(P & ~Q)", Format::Unicode), "¬◇(P ∧ ¬Q)");
        assert_eq!(r("P |> Q", Format::Latex), "P \\strictif Q");
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(r("(a & b) & c", Format::Ascii), "a & b & c");
        assert_eq!(r("a & (b & c)", Format::Ascii), "a & (b & c)");
        assert_eq!(r("a => (b => c)", Format::Ascii), "a => b => c");
        assert_eq!(r("(a => b) => c", Format::Ascii), "(a => b) => c");
        assert_eq!(r("a => (b |> c)", Format::Ascii), "a => (b |> c)");
        assert_eq!(r("(a | b) & c", Format::Ascii), "(a | b) & c");
        assert_eq!(r("~(a & b)", Format::Ascii), "~(a & b)");
        assert_eq!(r("[]~<>a", Format::Ascii), "[]~<>a");
    }

    #[test]
    fn quantifier_parentheses() {
        assert_eq!(
            r("(forall x. P(x)) => q", Format::Ascii),
            "(forall x. P(x)) => q"
        );
        assert_eq!(
            r("q => forall x. P(x)", Format::Ascii),
            "q => forall x. P(x)"
        );
        assert_eq!(
            r("(a & forall x. P(x)) | b", Format::Ascii),
            "a & (forall x. P(x)) | b"
        );
        assert_eq!(r("~forall x. P(x) & q", Format::Unicode), "¬∀x. P(x) ∧ q");
        assert_eq!(
            r("(~forall x. P(x)) & q", Format::Ascii),
            "~(forall x. P(x)) & q"
        );
        assert_eq!(r("exists y. x = y", Format::Latex), "\\exists y. x = y");
    }

    #[test]
    fn latex_escapes_underscores() {
        assert_eq!(r("p_1 | q", Format::Latex), "p\\_1 \\vee q");
    }
}
