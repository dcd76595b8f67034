//! Formula syntax: negation normal form, parsing, printing, De Morgan duality.
//!
//! Formulas are built from positive and negative literals `p0, p1, ...` /
//! `p0^, p1^, ...` with the binary connectives `*` (tensor), `@` (par),
//! `&` (with), `+` (plus) and the modal prefixes `!` and `?`. Negation is
//! not a constructor: `dual` computes it, and the surface `^` operator is
//! expanded eagerly at parse time.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A linear logic formula in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    PosLit(u32),
    NegLit(u32),
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    With(Box<Formula>, Box<Formula>),
    Plus(Box<Formula>, Box<Formula>),
    Bang(Box<Formula>),
    WhyNot(Box<Formula>),
}

/// Head modality of a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModalKind {
    Bang,
    WhyNot,
}

/// Result of stripping the maximal uniform modal prefix off a formula.
///
/// `kind` is `None` (and `count` 0) when the formula has no modal head;
/// otherwise `core` is the first subformula whose main connective differs
/// from `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModalPrefix<'a> {
    pub kind: Option<ModalKind>,
    pub count: usize,
    pub core: &'a Formula,
}

impl Formula {
    pub fn pos(i: u32) -> Formula {
        Formula::PosLit(i)
    }

    pub fn neg(i: u32) -> Formula {
        Formula::NegLit(i)
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn with(a: Formula, b: Formula) -> Formula {
        Formula::With(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Formula, b: Formula) -> Formula {
        Formula::Plus(Box::new(a), Box::new(b))
    }

    pub fn bang(a: Formula) -> Formula {
        Formula::Bang(Box::new(a))
    }

    pub fn whynot(a: Formula) -> Formula {
        Formula::WhyNot(Box::new(a))
    }

    /// `n` nested `!` around `self`.
    pub fn bangs(self, n: usize) -> Formula {
        (0..n).fold(self, |f, _| Formula::bang(f))
    }

    /// `n` nested `?` around `self`.
    pub fn whynots(self, n: usize) -> Formula {
        (0..n).fold(self, |f, _| Formula::whynot(f))
    }

    /// Linear negation, by the inductive De Morgan table.
    pub fn dual(&self) -> Formula {
        match self {
            Formula::PosLit(i) => Formula::NegLit(*i),
            Formula::NegLit(i) => Formula::PosLit(*i),
            Formula::Tensor(a, b) => Formula::par(a.dual(), b.dual()),
            Formula::Par(a, b) => Formula::tensor(a.dual(), b.dual()),
            Formula::With(a, b) => Formula::plus(a.dual(), b.dual()),
            Formula::Plus(a, b) => Formula::with(a.dual(), b.dual()),
            Formula::Bang(a) => Formula::whynot(a.dual()),
            Formula::WhyNot(a) => Formula::bang(a.dual()),
        }
    }

    /// Linear implication `a -o b = a^ @ b`.
    pub fn implication(a: Formula, b: Formula) -> Formula {
        Formula::par(a.dual(), b)
    }

    /// Strip the maximal uniform `!` or `?` prefix.
    pub fn modal_prefix(&self) -> ModalPrefix<'_> {
        match self {
            Formula::Bang(_) => {
                let mut core = self;
                let mut count = 0;
                while let Formula::Bang(inner) = core {
                    core = inner;
                    count += 1;
                }
                ModalPrefix { kind: Some(ModalKind::Bang), count, core }
            }
            Formula::WhyNot(_) => {
                let mut core = self;
                let mut count = 0;
                while let Formula::WhyNot(inner) = core {
                    core = inner;
                    count += 1;
                }
                ModalPrefix { kind: Some(ModalKind::WhyNot), count, core }
            }
            _ => ModalPrefix { kind: None, count: 0, core: self },
        }
    }

    pub fn is_bang_headed(&self) -> bool {
        matches!(self, Formula::Bang(_))
    }

    pub fn is_whynot_headed(&self) -> bool {
        matches!(self, Formula::WhyNot(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::PosLit(_) | Formula::NegLit(_))
    }

    /// Number of connective/literal nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::PosLit(_) | Formula::NegLit(_) => 1,
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => 1 + a.size() + b.size(),
            Formula::Bang(a) | Formula::WhyNot(a) => 1 + a.size(),
        }
    }

    /// Indices of literals occurring in the formula.
    pub fn literals(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_literals(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_literals(&self, out: &mut Vec<u32>) {
        match self {
            Formula::PosLit(i) | Formula::NegLit(i) => out.push(*i),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => {
                a.collect_literals(out);
                b.collect_literals(out);
            }
            Formula::Bang(a) | Formula::WhyNot(a) => a.collect_literals(out),
        }
    }
}

// Printing precedence: higher binds tighter. Prefixes and literals are
// "atomic" (5); * 4, @ 3, & 2, + 1.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::PosLit(_) | Formula::NegLit(_) | Formula::Bang(_) | Formula::WhyNot(_) => 5,
        Formula::Tensor(..) => 4,
        Formula::Par(..) => 3,
        Formula::With(..) => 2,
        Formula::Plus(..) => 1,
    }
}

fn fmt_prec(f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(f);
    if p < ctx {
        write!(out, "(")?;
    }
    match f {
        Formula::PosLit(i) => write!(out, "p{i}")?,
        Formula::NegLit(i) => write!(out, "p{i}^")?,
        Formula::Tensor(a, b) => {
            fmt_prec(a, 4, out)?;
            write!(out, " * ")?;
            fmt_prec(b, 5, out)?;
        }
        Formula::Par(a, b) => {
            fmt_prec(a, 3, out)?;
            write!(out, " @ ")?;
            fmt_prec(b, 4, out)?;
        }
        Formula::With(a, b) => {
            fmt_prec(a, 2, out)?;
            write!(out, " & ")?;
            fmt_prec(b, 3, out)?;
        }
        Formula::Plus(a, b) => {
            fmt_prec(a, 1, out)?;
            write!(out, " + ")?;
            fmt_prec(b, 2, out)?;
        }
        Formula::Bang(a) => {
            write!(out, "!")?;
            fmt_prec(a, 5, out)?;
        }
        Formula::WhyNot(a) => {
            write!(out, "?")?;
            fmt_prec(a, 5, out)?;
        }
    }
    if p < ctx {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_prec(self, 0, out)
    }
}

/// A one-sided sequent `|- Γ`; the formula list is ordered and may be empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Sequent {
    pub formulas: Vec<Formula>,
}

impl Sequent {
    pub fn new(formulas: Vec<Formula>) -> Sequent {
        Sequent { formulas }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// Order-forgetting projection; Exchange-equivalence is multiset equality.
    pub fn multiset(&self) -> BTreeMap<Formula, usize> {
        let mut m = BTreeMap::new();
        for f in &self.formulas {
            *m.entry(f.clone()).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "|-")?;
        for (i, f) in self.formulas.iter().enumerate() {
            if i == 0 {
                write!(out, " {f}")?;
            } else {
                write!(out, ", {f}")?;
            }
        }
        Ok(())
    }
}

/// Syntax error with byte position into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser { input: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Lowest precedence: `-o`, right-associative, expanded at parse time.
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.plus_chain()?;
        self.skip_ws();
        if self.input[self.pos..].starts_with(b"-o") {
            self.pos += 2;
            let rhs = self.formula()?;
            Ok(Formula::implication(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn plus_chain(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.with_chain()?;
        while self.eat(b'+') {
            let rhs = self.with_chain()?;
            f = Formula::plus(f, rhs);
        }
        Ok(f)
    }

    fn with_chain(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.par_chain()?;
        while self.eat(b'&') {
            let rhs = self.par_chain()?;
            f = Formula::with(f, rhs);
        }
        Ok(f)
    }

    fn par_chain(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.tensor_chain()?;
        while self.eat(b'@') {
            let rhs = self.tensor_chain()?;
            f = Formula::par(f, rhs);
        }
        Ok(f)
    }

    fn tensor_chain(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(b'*') {
            let rhs = self.unary()?;
            f = Formula::tensor(f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::bang(self.unary()?))
            }
            Some(b'?') => {
                self.pos += 1;
                Ok(Formula::whynot(self.unary()?))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.primary()?;
        while self.eat(b'^') {
            f = f.dual();
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.formula()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(f)
            }
            Some(b'p') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == start {
                    return self.err("expected literal index after 'p'");
                }
                let digits = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                match digits.parse::<u32>() {
                    Ok(i) => Ok(Formula::PosLit(i)),
                    Err(_) => self.err("literal index out of range"),
                }
            }
            Some(c) => self.err(format!("unknown token '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        self.skip_ws();
        if !self.input[self.pos..].starts_with(b"|-") {
            return self.err("expected '|-'");
        }
        self.pos += 2;
        let mut formulas = Vec::new();
        if self.peek().is_none() {
            return Ok(Sequent::new(formulas));
        }
        formulas.push(self.formula()?);
        while self.eat(b',') {
            formulas.push(self.formula()?);
        }
        Ok(Sequent::new(formulas))
    }
}

/// Parse a formula in the ASCII surface grammar.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parse a sequent: `|-` followed by comma-separated formulas (possibly none).
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text);
    let s = p.sequent()?;
    p.expect_end()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("p0 * p1"), Formula::tensor(Formula::pos(0), Formula::pos(1)));
        // surface negation of a compound expands via dual
        assert_eq!(p("(p0 * p1)^"), Formula::par(Formula::neg(0), Formula::neg(1)));
        assert_eq!(p("!p0"), Formula::bang(Formula::pos(0)));
        assert_eq!(p("p3^"), Formula::neg(3));
        assert_eq!(p("!!p0"), Formula::pos(0).bangs(2));
        assert_eq!(p("p0 -o p0"), Formula::par(Formula::neg(0), Formula::pos(0)));
    }

    #[test]
    fn precedence_and_associativity() {
        // * tighter than @ tighter than & tighter than +
        assert_eq!(
            p("p0 + p1 & p2 @ p3 * p4"),
            Formula::plus(
                Formula::pos(0),
                Formula::with(
                    Formula::pos(1),
                    Formula::par(Formula::pos(2), Formula::tensor(Formula::pos(3), Formula::pos(4)))
                )
            )
        );
        // left associativity
        assert_eq!(
            p("p0 * p1 * p2"),
            Formula::tensor(Formula::tensor(Formula::pos(0), Formula::pos(1)), Formula::pos(2))
        );
        // prefix binds tighter than binary
        assert_eq!(p("!p0 * p1"), Formula::tensor(Formula::bang(Formula::pos(0)), Formula::pos(1)));
        // -o is right-associative and lowest
        assert_eq!(
            p("p0 -o p1 -o p2"),
            Formula::implication(
                Formula::pos(0),
                Formula::implication(Formula::pos(1), Formula::pos(2))
            )
        );
    }

    #[test]
    fn print_examples() {
        assert_eq!(Formula::pos(0).bangs(2).to_string(), "!!p0");
        assert_eq!(Formula::par(Formula::neg(0), Formula::pos(0)).to_string(), "p0^ @ p0");
        assert_eq!(Formula::with(Formula::pos(0), Formula::pos(1)).to_string(), "p0 & p1");
        assert_eq!(
            Formula::bang(Formula::tensor(Formula::pos(0), Formula::pos(1))).to_string(),
            "!(p0 * p1)"
        );
    }

    #[test]
    fn dual_table() {
        assert_eq!(Formula::bang(Formula::pos(0)).dual(), Formula::whynot(Formula::neg(0)));
        assert_eq!(
            Formula::with(Formula::pos(0), Formula::pos(1)).dual(),
            Formula::plus(Formula::neg(0), Formula::neg(1))
        );
        assert_eq!(
            Formula::tensor(Formula::pos(0), Formula::pos(1)).dual(),
            Formula::par(Formula::neg(0), Formula::neg(1))
        );
    }

    #[test]
    fn implication_examples() {
        assert_eq!(
            Formula::implication(Formula::pos(0), Formula::pos(0)),
            Formula::par(Formula::neg(0), Formula::pos(0))
        );
        let q = Formula::pos(7);
        assert_eq!(
            Formula::implication(Formula::tensor(Formula::pos(0), Formula::pos(1)), q.clone()),
            Formula::par(Formula::par(Formula::neg(0), Formula::neg(1)), q)
        );
    }

    #[test]
    fn modal_prefix_examples() {
        let f = Formula::pos(0).whynots(2);
        let mp = f.modal_prefix();
        assert_eq!(mp.kind, Some(ModalKind::WhyNot));
        assert_eq!(mp.count, 2);
        assert_eq!(mp.core, &Formula::pos(0));

        let f = Formula::bang(Formula::whynot(Formula::pos(0)));
        let mp = f.modal_prefix();
        assert_eq!(mp.kind, Some(ModalKind::Bang));
        assert_eq!(mp.count, 1);
        assert_eq!(mp.core, &Formula::whynot(Formula::pos(0)));

        let f = Formula::pos(3);
        let mp = f.modal_prefix();
        assert_eq!(mp.kind, None);
        assert_eq!(mp.count, 0);
        assert_eq!(mp.core, &f);
    }

    #[test]
    fn sequent_display_and_parse() {
        let s = parse_sequent("|- ??p0^, !!p0").unwrap();
        assert_eq!(s.formulas.len(), 2);
        assert_eq!(s.formulas[0], Formula::neg(0).whynots(2));
        assert_eq!(s.formulas[1], Formula::pos(0).bangs(2));
        assert_eq!(s.to_string(), "|- ??p0^, !!p0");
        assert_eq!(parse_sequent("|-").unwrap(), Sequent::default());
    }

    #[test]
    fn multiset_examples() {
        let a = parse_sequent("|- p0, p1").unwrap();
        let b = parse_sequent("|- p1, p0").unwrap();
        assert_eq!(a.multiset(), b.multiset());
        let c = parse_sequent("|- p0, p0").unwrap();
        let d = parse_sequent("|- p0").unwrap();
        assert_ne!(c.multiset(), d.multiset());
        assert!(Sequent::default().multiset().is_empty());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_formula("p0 * ").unwrap_err();
        assert!(e.pos >= 4);
        let e = parse_formula("q0").unwrap_err();
        assert_eq!(e.pos, 0);
    }

    pub(crate) fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![(0u32..4).prop_map(Formula::PosLit), (0u32..4).prop_map(Formula::NegLit)];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::par(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::with(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::plus(a, b)),
                inner.clone().prop_map(Formula::bang),
                inner.prop_map(Formula::whynot),
            ]
        })
    }

    proptest! {
        #[test]
        fn dual_is_involutive(f in arb_formula()) {
            prop_assert_eq!(f.dual().dual(), f);
        }

        #[test]
        fn print_parse_roundtrip(f in arb_formula()) {
            prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn implication_then_dual_is_tensor(a in arb_formula(), b in arb_formula()) {
            // dual(a -o b) = a * b^ by symbolic expansion
            prop_assert_eq!(
                Formula::implication(a.clone(), b.clone()).dual(),
                Formula::tensor(a, b.dual())
            );
        }

        #[test]
        fn modal_prefix_core_differs(f in arb_formula()) {
            let mp = f.modal_prefix();
            match mp.kind {
                Some(ModalKind::Bang) => prop_assert!(!mp.core.is_bang_headed()),
                Some(ModalKind::WhyNot) => prop_assert!(!mp.core.is_whynot_headed()),
                None => prop_assert_eq!(mp.core, &f),
            }
        }

        #[test]
        fn dual_commutes_with_modal_prefix(f in arb_formula()) {
            let mp = f.modal_prefix();
            let d = f.dual();
            let dp = d.modal_prefix();
            prop_assert_eq!(dp.count, mp.count);
            match (mp.kind, dp.kind) {
                (None, None) => {}
                (Some(ModalKind::Bang), Some(ModalKind::WhyNot)) => {}
                (Some(ModalKind::WhyNot), Some(ModalKind::Bang)) => {}
                other => prop_assert!(false, "kinds disagree: {:?}", other),
            }
            prop_assert_eq!(dp.core, &mp.core.dual());
        }
    }
}
