//! Textual proof format: nested s-expressions, one node per form.
//!
//! `(rule-name {params} "conclusion" premise*)`, e.g.
//!
//! ```text
//! (nprom :n 2 "|- ??p0^, !!p0"
//!   (nder :n 2 "|- ??p0^, p0"
//!     (id "|- p0^, p0")))
//! ```
//!
//! Conclusions are sequent strings in the formula grammar. Position
//! parameters (`:at`, `:i`/`:j`, `:split`, `:n`) may be omitted where they
//! are inferable from the stored conclusions; the printer always writes
//! them. `;` starts a line comment.

use crate::calculus::{Proof, RuleTag};
use crate::syntax::{parse_sequent, ParseError, Sequent};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    LParen,
    RParen,
    Key(String),
    Num(usize),
    Str(String),
    Sym(String),
}

struct Lexer<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer { input: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn skip_trivia(&mut self) {
        loop {
            while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.input.len() && self.input[self.pos] == b';' {
                while self.pos < self.input.len() && self.input[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn next(&mut self) -> Result<Option<(usize, Token)>, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.input.get(self.pos) else { return Ok(None) };
        let tok = match c {
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'"' => {
                self.pos += 1;
                let s = self.pos;
                while self.pos < self.input.len() && self.input[self.pos] != b'"' {
                    self.pos += 1;
                }
                if self.pos == self.input.len() {
                    return self.err("unterminated string");
                }
                let text = std::str::from_utf8(&self.input[s..self.pos]).unwrap().to_string();
                self.pos += 1;
                Token::Str(text)
            }
            b':' => {
                self.pos += 1;
                let s = self.pos;
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'-')
                {
                    self.pos += 1;
                }
                if self.pos == s {
                    return self.err("expected parameter name after ':'");
                }
                Token::Key(std::str::from_utf8(&self.input[s..self.pos]).unwrap().to_string())
            }
            b'0'..=b'9' => {
                let s = self.pos;
                while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.input[s..self.pos]).unwrap();
                match digits.parse() {
                    Ok(n) => Token::Num(n),
                    Err(_) => return self.err("number out of range"),
                }
            }
            c if c.is_ascii_alphabetic() => {
                let s = self.pos;
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'-')
                {
                    self.pos += 1;
                }
                Token::Sym(std::str::from_utf8(&self.input[s..self.pos]).unwrap().to_string())
            }
            c => return self.err(format!("unexpected character '{}'", c as char)),
        };
        Ok(Some((start, tok)))
    }
}

struct ProofParser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl ProofParser {
    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.here(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn node(&mut self) -> Result<Proof, ParseError> {
        if self.bump() != Some(Token::LParen) {
            return self.err("expected '('");
        }
        let name = match self.bump() {
            Some(Token::Sym(s)) => s,
            _ => return self.err("expected rule name"),
        };
        let mut params: Vec<(String, usize)> = Vec::new();
        while let Some(Token::Key(_)) = self.peek() {
            let Some(Token::Key(k)) = self.bump() else { unreachable!() };
            match self.bump() {
                Some(Token::Num(n)) => params.push((k, n)),
                _ => return self.err(format!("expected number after ':{k}'")),
            }
        }
        let conclusion = match self.bump() {
            Some(Token::Str(s)) => parse_sequent(&s).map_err(|e| ParseError {
                pos: self.here(),
                msg: format!("in conclusion: {}", e.msg),
            })?,
            _ => return self.err("expected conclusion string"),
        };
        let mut premises = Vec::new();
        while self.peek() == Some(&Token::LParen) {
            premises.push(self.node()?);
        }
        if self.bump() != Some(Token::RParen) {
            return self.err("expected ')'");
        }
        let rule = self.resolve_rule(&name, &params, &conclusion, &premises)?;
        Ok(Proof { rule, conclusion, premises })
    }

    fn resolve_rule(
        &self,
        name: &str,
        params: &[(String, usize)],
        conclusion: &Sequent,
        premises: &[Proof],
    ) -> Result<RuleTag, ParseError> {
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| *v);
        let prem = |i: usize| -> Result<&Sequent, ParseError> {
            premises
                .get(i)
                .map(|p| &p.conclusion)
                .ok_or_else(|| ParseError { pos: self.here(), msg: format!("'{name}' needs premise {i}") })
        };
        // First position where the premise and conclusion formulas differ.
        let first_diff = |p: &Sequent| -> Option<usize> {
            (0..p.len().min(conclusion.len()))
                .find(|&k| p.formulas[k] != conclusion.formulas[k])
        };
        let infer_err = |what: &str| ParseError {
            pos: self.here(),
            msg: format!("cannot infer {what} for '{name}'; give it explicitly"),
        };
        match name {
            "id" => Ok(RuleTag::Identity),
            "cut" => {
                let l = prem(0)?;
                let formula = l
                    .formulas
                    .last()
                    .cloned()
                    .ok_or_else(|| ParseError { pos: self.here(), msg: "empty cut premise".into() })?;
                Ok(RuleTag::Cut { formula })
            }
            "exch" => {
                let p = prem(0)?;
                let i = match get("i") {
                    Some(i) => i,
                    None => (0..p.len().saturating_sub(1))
                        .find(|&i| {
                            let mut v = p.formulas.clone();
                            v.swap(i, i + 1);
                            v == conclusion.formulas
                        })
                        .ok_or_else(|| infer_err("position"))?,
                };
                let j = get("j").unwrap_or(i + 1);
                Ok(RuleTag::Exchange { i, j })
            }
            "times" => {
                let l = prem(0)?;
                let split = get("split").unwrap_or(l.len().saturating_sub(1));
                Ok(RuleTag::Times { split })
            }
            "par" => {
                let at = match get("at") {
                    Some(at) => at,
                    None => first_diff(prem(0)?).ok_or_else(|| infer_err("position"))?,
                };
                Ok(RuleTag::Par { at })
            }
            "with" => {
                let at = match get("at") {
                    Some(at) => at,
                    None => first_diff(prem(0)?).ok_or_else(|| infer_err("position"))?,
                };
                Ok(RuleTag::With { at })
            }
            "plus-l" | "plus-r" => {
                let at = match get("at") {
                    Some(at) => at,
                    None => first_diff(prem(0)?).ok_or_else(|| infer_err("position"))?,
                };
                if name == "plus-l" {
                    Ok(RuleTag::PlusLeft { at })
                } else {
                    Ok(RuleTag::PlusRight { at })
                }
            }
            "contr" => {
                let p = prem(0)?;
                let at = match get("at") {
                    Some(at) => at,
                    None => (0..p.len().saturating_sub(1))
                        .find(|&k| {
                            p.formulas[k] == p.formulas[k + 1] && {
                                let mut v = p.formulas[..=k].to_vec();
                                v.extend_from_slice(&p.formulas[k + 2..]);
                                v == conclusion.formulas
                            }
                        })
                        .ok_or_else(|| infer_err("position"))?,
                };
                Ok(RuleTag::Contraction { at })
            }
            "weak" => {
                let p = prem(0)?;
                let at = match get("at") {
                    Some(at) => at,
                    None => (0..conclusion.len())
                        .find(|&k| {
                            let mut v = conclusion.formulas.clone();
                            v.remove(k);
                            v == p.formulas
                        })
                        .ok_or_else(|| infer_err("position"))?,
                };
                let introduced = conclusion
                    .formulas
                    .get(at)
                    .cloned()
                    .ok_or_else(|| infer_err("introduced formula"))?;
                Ok(RuleTag::Weakening { at, introduced })
            }
            "der" | "prom" | "nder" | "nprom" => {
                let p = prem(0)?;
                let at = match get("at") {
                    Some(at) => at,
                    None => first_diff(p).ok_or_else(|| infer_err("position"))?,
                };
                match name {
                    "der" => Ok(RuleTag::Dereliction { at }),
                    "prom" => Ok(RuleTag::Promotion { at }),
                    _ => {
                        let n = match get("n") {
                            Some(n) => n,
                            None => {
                                let before = p
                                    .formulas
                                    .get(at)
                                    .map(|f| f.modal_prefix().count)
                                    .ok_or_else(|| infer_err("block length"))?;
                                let after = conclusion
                                    .formulas
                                    .get(at)
                                    .map(|f| f.modal_prefix().count)
                                    .ok_or_else(|| infer_err("block length"))?;
                                after.saturating_sub(before)
                            }
                        };
                        if name == "nder" {
                            Ok(RuleTag::NDereliction { at, n })
                        } else {
                            Ok(RuleTag::NPromotion { at, n })
                        }
                    }
                }
            }
            _ => self.err(format!("unknown rule name '{name}'")),
        }
    }
}

/// Parse one proof term. The result is structurally well-formed but not yet
/// checked; run [`Proof::check`] to validate it against a system.
pub fn parse_proof(text: &str) -> Result<Proof, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next()? {
        tokens.push(t);
    }
    let end = text.len();
    let mut parser = ProofParser { tokens, pos: 0, end };
    let proof = parser.node()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("trailing input after proof");
    }
    Ok(proof)
}

fn params_of(rule: &RuleTag) -> Vec<(&'static str, usize)> {
    match rule {
        RuleTag::Identity | RuleTag::Cut { .. } => vec![],
        RuleTag::Exchange { i, j } => vec![("i", *i), ("j", *j)],
        RuleTag::Times { split } => vec![("split", *split)],
        RuleTag::Par { at }
        | RuleTag::With { at }
        | RuleTag::PlusLeft { at }
        | RuleTag::PlusRight { at }
        | RuleTag::Contraction { at }
        | RuleTag::Weakening { at, .. }
        | RuleTag::Dereliction { at }
        | RuleTag::Promotion { at } => vec![("at", *at)],
        RuleTag::NDereliction { at, n } | RuleTag::NPromotion { at, n } => {
            vec![("at", *at), ("n", *n)]
        }
    }
}

fn write_node(p: &Proof, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    out.push_str(&pad);
    out.push('(');
    out.push_str(p.rule.name());
    for (k, v) in params_of(&p.rule) {
        out.push_str(&format!(" :{k} {v}"));
    }
    out.push_str(&format!(" \"{}\"", p.conclusion));
    for prem in &p.premises {
        out.push('\n');
        write_node(prem, depth + 1, out);
    }
    out.push(')');
}

/// Render a proof in the s-expression format (round-trips through
/// [`parse_proof`]).
pub fn print_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_node(p, 0, &mut out);
    out
}

fn write_line(p: &Proof, out: &mut String) {
    out.push('(');
    out.push_str(p.rule.name());
    for (k, v) in params_of(&p.rule) {
        out.push_str(&format!(" :{k} {v}"));
    }
    out.push_str(&format!(" \"{}\"", p.conclusion));
    for prem in &p.premises {
        out.push(' ');
        write_line(prem, out);
    }
    out.push(')');
}

/// Single-line rendering, for line-oriented machine output.
pub fn print_proof_line(p: &Proof) -> String {
    let mut out = String::new();
    write_line(p, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::System;
    use crate::syntax::Formula;

    #[test]
    fn parses_spec_example() {
        let text = r#"(nprom :n 2 "|- ??p0^, !!p0" (nder :n 2 "|- ??p0^, p0" (id "|- p0^, p0")))"#;
        let proof = parse_proof(text).unwrap();
        assert!(proof.check(System::idll()).is_ok());
        assert_eq!(proof.rule, RuleTag::NPromotion { at: 1, n: 2 });
        assert_eq!(proof.premises[0].rule, RuleTag::NDereliction { at: 0, n: 2 });
        assert_eq!(proof.conclusion.to_string(), "|- ??p0^, !!p0");
    }

    #[test]
    fn print_parse_roundtrip() {
        let id = Proof::identity(Formula::pos(0));
        let der = Proof::n_dereliction(id, 0, 2).unwrap();
        let prom = Proof::n_promotion(der, 1, 1).unwrap();
        let text = print_proof(&prom);
        let back = parse_proof(&text).unwrap();
        assert_eq!(back, prom);
    }

    #[test]
    fn cut_formula_recovered() {
        let a = Proof::identity(Formula::pos(0));
        let b = Proof::identity(Formula::pos(0));
        let cut = Proof::cut(a, b).unwrap();
        let text = print_proof(&cut);
        let back = parse_proof(&text).unwrap();
        assert_eq!(back, cut);
    }

    #[test]
    fn comments_and_whitespace() {
        let text = "; eta proof\n(nder :n 1 ; block\n  \"|- ?p0, p0^\"\n  (id \"|- p0, p0^\"))";
        let proof = parse_proof(text).unwrap();
        assert!(proof.check(System::idll()).is_ok());
    }

    #[test]
    fn error_position() {
        let err = parse_proof("(id \"|- p0, p0^\"").unwrap_err();
        assert!(err.msg.contains("expected ')'"));
        assert!(parse_proof("(frob \"|- p0\")").is_err());
    }
}
