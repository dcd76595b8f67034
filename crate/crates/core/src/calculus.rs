//! Proof trees for LL and IdLL and a rule-by-rule checker.
//!
//! A proof node stores its rule tag, its full conclusion sequent and its
//! premises; checking is local: every node's conclusion must be exactly the
//! one determined by the rule, its parameters and the premise conclusions.
//!
//! Positions are 0-based. Unary rules act at the explicit position `at`;
//! Cut requires the cut formula final in the left premise and its dual
//! initial in the right premise; Times joins its premises contiguously.
//! Exchange is the adjacent transposition (i, i+1). Callers arrange
//! positions with Exchange.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Formula, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    LL,
    IdLL,
}

impl fmt::Display for Logic {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Logic::LL => write!(out, "ll"),
            Logic::IdLL => write!(out, "idll"),
        }
    }
}

/// Identity axiom scope: arbitrary formulas or literals only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomMode {
    General,
    Atomic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct System {
    pub logic: Logic,
    pub axiom_mode: AxiomMode,
}

impl System {
    pub fn ll() -> System {
        System { logic: Logic::LL, axiom_mode: AxiomMode::General }
    }

    pub fn idll() -> System {
        System { logic: Logic::IdLL, axiom_mode: AxiomMode::General }
    }

    pub fn atomic(self) -> System {
        System { axiom_mode: AxiomMode::Atomic, ..self }
    }
}

/// Rule label with parameters, as stored on each proof node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTag {
    Identity,
    Cut { formula: Formula },
    Exchange { i: usize, j: usize },
    Times { split: usize },
    Par { at: usize },
    With { at: usize },
    PlusLeft { at: usize },
    PlusRight { at: usize },
    Contraction { at: usize },
    Weakening { at: usize, introduced: Formula },
    /// LL only.
    Dereliction { at: usize },
    /// LL only.
    Promotion { at: usize },
    /// IdLL only; n >= 1.
    NDereliction { at: usize, n: usize },
    /// IdLL only; n >= 1.
    NPromotion { at: usize, n: usize },
}

impl RuleTag {
    pub fn name(&self) -> &'static str {
        match self {
            RuleTag::Identity => "id",
            RuleTag::Cut { .. } => "cut",
            RuleTag::Exchange { .. } => "exch",
            RuleTag::Times { .. } => "times",
            RuleTag::Par { .. } => "par",
            RuleTag::With { .. } => "with",
            RuleTag::PlusLeft { .. } => "plus-l",
            RuleTag::PlusRight { .. } => "plus-r",
            RuleTag::Contraction { .. } => "contr",
            RuleTag::Weakening { .. } => "weak",
            RuleTag::Dereliction { .. } => "der",
            RuleTag::Promotion { .. } => "prom",
            RuleTag::NDereliction { .. } => "nder",
            RuleTag::NPromotion { .. } => "nprom",
        }
    }

    fn arity(&self) -> usize {
        match self {
            RuleTag::Identity => 0,
            RuleTag::Cut { .. } | RuleTag::Times { .. } | RuleTag::With { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReasonCode {
    Arity,
    ContextMismatch,
    SideCondition,
    WrongSystem,
    BadParameter,
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReasonCode::Arity => write!(out, "arity"),
            ReasonCode::ContextMismatch => write!(out, "context-mismatch"),
            ReasonCode::SideCondition => write!(out, "side-condition"),
            ReasonCode::WrongSystem => write!(out, "wrong-system"),
            ReasonCode::BadParameter => write!(out, "bad-parameter"),
        }
    }
}

/// Checker rejection: the node path from the root, the violated rule and a
/// reason code (plus a human-readable detail).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule '{rule}' at {}: {reason}: {detail}", path_string(path))]
pub struct RuleError {
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: ReasonCode,
    pub detail: String,
}

pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// A rule-labeled derivation tree with per-node conclusion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proof {
    pub rule: RuleTag,
    pub conclusion: Sequent,
    pub premises: Vec<Proof>,
}

fn fail(rule: &'static str, reason: ReasonCode, detail: impl Into<String>) -> RuleError {
    RuleError { path: Vec::new(), rule, reason, detail: detail.into() }
}

fn replaced(s: &Sequent, at: usize, f: Formula) -> Sequent {
    let mut v = s.formulas.clone();
    v[at] = f;
    Sequent::new(v)
}

impl Proof {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    /// Node count ignoring Exchange plumbing.
    pub fn size_modulo_exchange(&self) -> usize {
        let own = if matches!(self.rule, RuleTag::Exchange { .. }) { 0 } else { 1 };
        own + self.premises.iter().map(Proof::size_modulo_exchange).sum::<usize>()
    }

    pub fn contains_cut(&self) -> bool {
        matches!(self.rule, RuleTag::Cut { .. }) || self.premises.iter().any(Proof::contains_cut)
    }

    /// Check the whole derivation against `sys`. Errors carry the path of
    /// the offending node (premise indices from the root).
    pub fn check(&self, sys: System) -> Result<(), RuleError> {
        for (i, premise) in self.premises.iter().enumerate() {
            premise.check(sys).map_err(|mut e| {
                e.path.insert(0, i);
                e
            })?;
        }
        self.validate_node(Some(sys))
    }

    /// Local validity of this node given its premises' conclusions.
    /// `sys = None` skips system membership and axiom-mode restrictions
    /// (used by the builders, which are system-agnostic).
    pub fn validate_node(&self, sys: Option<System>) -> Result<(), RuleError> {
        let name = self.rule.name();
        if self.premises.len() != self.rule.arity() {
            return Err(fail(
                name,
                ReasonCode::Arity,
                format!("expected {} premises, got {}", self.rule.arity(), self.premises.len()),
            ));
        }
        if let Some(sys) = sys {
            match (&self.rule, sys.logic) {
                (RuleTag::Dereliction { .. } | RuleTag::Promotion { .. }, Logic::IdLL) => {
                    return Err(fail(name, ReasonCode::WrongSystem, "LL-only rule in IdLL"));
                }
                (RuleTag::NDereliction { .. } | RuleTag::NPromotion { .. }, Logic::LL) => {
                    return Err(fail(name, ReasonCode::WrongSystem, "IdLL-only rule in LL"));
                }
                _ => {}
            }
        }
        let expect = |want: Sequent| -> Result<(), RuleError> {
            if self.conclusion == want {
                Ok(())
            } else {
                Err(fail(
                    name,
                    ReasonCode::ContextMismatch,
                    format!("conclusion is '{}', rule determines '{}'", self.conclusion, want),
                ))
            }
        };
        match &self.rule {
            RuleTag::Identity => {
                if self.conclusion.len() != 2 {
                    return Err(fail(name, ReasonCode::ContextMismatch, "identity concludes exactly two formulas"));
                }
                let a = &self.conclusion.formulas[0];
                if self.conclusion.formulas[1] != a.dual() {
                    return Err(fail(
                        name,
                        ReasonCode::ContextMismatch,
                        format!("second formula must be the dual of '{a}'"),
                    ));
                }
                if let Some(sys) = sys {
                    if sys.axiom_mode == AxiomMode::Atomic && !a.is_literal() {
                        return Err(fail(
                            name,
                            ReasonCode::SideCondition,
                            format!("atomic axiom mode requires a literal, got '{a}'"),
                        ));
                    }
                }
                Ok(())
            }
            RuleTag::Cut { formula } => {
                let l = &self.premises[0].conclusion;
                let r = &self.premises[1].conclusion;
                if l.is_empty() || r.is_empty() {
                    return Err(fail(name, ReasonCode::ContextMismatch, "cut premises must be nonempty"));
                }
                if l.formulas.last() != Some(formula) {
                    return Err(fail(
                        name,
                        ReasonCode::ContextMismatch,
                        format!("cut formula '{formula}' is not final in the left premise '{l}'"),
                    ));
                }
                if r.formulas[0] != formula.dual() {
                    return Err(fail(
                        name,
                        ReasonCode::ContextMismatch,
                        format!("'{}' is not initial in the right premise '{r}'", formula.dual()),
                    ));
                }
                let mut v = l.formulas[..l.len() - 1].to_vec();
                v.extend_from_slice(&r.formulas[1..]);
                expect(Sequent::new(v))
            }
            RuleTag::Exchange { i, j } => {
                let p = &self.premises[0].conclusion;
                if *j != i + 1 || *j >= p.len() {
                    return Err(fail(
                        name,
                        ReasonCode::BadParameter,
                        format!("exchange must transpose adjacent positions, got ({i}, {j}) on width {}", p.len()),
                    ));
                }
                let mut v = p.formulas.clone();
                v.swap(*i, *j);
                expect(Sequent::new(v))
            }
            RuleTag::Times { split } => {
                let l = &self.premises[0].conclusion;
                let r = &self.premises[1].conclusion;
                if l.is_empty() || r.is_empty() {
                    return Err(fail(name, ReasonCode::ContextMismatch, "times premises must be nonempty"));
                }
                if *split != l.len() - 1 {
                    return Err(fail(
                        name,
                        ReasonCode::BadParameter,
                        format!("split {split} does not match left premise width {}", l.len()),
                    ));
                }
                let mut v = l.formulas[..l.len() - 1].to_vec();
                v.push(Formula::tensor(l.formulas[l.len() - 1].clone(), r.formulas[0].clone()));
                v.extend_from_slice(&r.formulas[1..]);
                expect(Sequent::new(v))
            }
            RuleTag::Par { at } => {
                let p = &self.premises[0].conclusion;
                if p.len() < 2 || *at > p.len() - 2 {
                    return Err(fail(name, ReasonCode::BadParameter, format!("par position {at} out of range")));
                }
                let mut v = p.formulas[..*at].to_vec();
                v.push(Formula::par(p.formulas[*at].clone(), p.formulas[*at + 1].clone()));
                v.extend_from_slice(&p.formulas[*at + 2..]);
                expect(Sequent::new(v))
            }
            RuleTag::With { at } => {
                let l = &self.premises[0].conclusion;
                let r = &self.premises[1].conclusion;
                if l.len() != r.len() {
                    return Err(fail(name, ReasonCode::ContextMismatch, "with premises have different widths"));
                }
                if *at >= l.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("with position {at} out of range")));
                }
                for k in 0..l.len() {
                    if k != *at && l.formulas[k] != r.formulas[k] {
                        return Err(fail(
                            name,
                            ReasonCode::ContextMismatch,
                            format!("with contexts differ at position {k}"),
                        ));
                    }
                }
                expect(replaced(l, *at, Formula::with(l.formulas[*at].clone(), r.formulas[*at].clone())))
            }
            RuleTag::PlusLeft { at } | RuleTag::PlusRight { at } => {
                let p = &self.premises[0].conclusion;
                if *at >= p.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("plus position {at} out of range")));
                }
                if self.conclusion.len() != p.len() {
                    return Err(fail(name, ReasonCode::ContextMismatch, "plus preserves sequent width"));
                }
                for k in 0..p.len() {
                    if k != *at && self.conclusion.formulas[k] != p.formulas[k] {
                        return Err(fail(name, ReasonCode::ContextMismatch, format!("context differs at position {k}")));
                    }
                }
                match (&self.rule, &self.conclusion.formulas[*at]) {
                    (RuleTag::PlusLeft { .. }, Formula::Plus(a, _)) if **a == p.formulas[*at] => Ok(()),
                    (RuleTag::PlusRight { .. }, Formula::Plus(_, b)) if **b == p.formulas[*at] => Ok(()),
                    _ => Err(fail(
                        name,
                        ReasonCode::ContextMismatch,
                        format!(
                            "conclusion formula '{}' is not a plus over the premise formula '{}'",
                            self.conclusion.formulas[*at], p.formulas[*at]
                        ),
                    )),
                }
            }
            RuleTag::Contraction { at } => {
                let p = &self.premises[0].conclusion;
                if p.len() < 2 || *at > p.len() - 2 {
                    return Err(fail(name, ReasonCode::BadParameter, format!("contraction position {at} out of range")));
                }
                if p.formulas[*at] != p.formulas[*at + 1] {
                    return Err(fail(name, ReasonCode::ContextMismatch, "contracted pair is not two equal formulas"));
                }
                if !p.formulas[*at].is_whynot_headed() {
                    return Err(fail(
                        name,
                        ReasonCode::SideCondition,
                        format!("only ?-formulas contract, got '{}'", p.formulas[*at]),
                    ));
                }
                let mut v = p.formulas[..=*at].to_vec();
                v.extend_from_slice(&p.formulas[*at + 2..]);
                expect(Sequent::new(v))
            }
            RuleTag::Weakening { at, introduced } => {
                let p = &self.premises[0].conclusion;
                if *at > p.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("weakening position {at} out of range")));
                }
                if !introduced.is_whynot_headed() {
                    return Err(fail(
                        name,
                        ReasonCode::SideCondition,
                        format!("weakening introduces ?-formulas, got '{introduced}'"),
                    ));
                }
                let mut v = p.formulas.clone();
                v.insert(*at, introduced.clone());
                expect(Sequent::new(v))
            }
            RuleTag::Dereliction { at } => {
                let p = &self.premises[0].conclusion;
                if *at >= p.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("dereliction position {at} out of range")));
                }
                expect(replaced(p, *at, Formula::whynot(p.formulas[*at].clone())))
            }
            RuleTag::Promotion { at } => {
                let p = &self.premises[0].conclusion;
                if *at >= p.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("promotion position {at} out of range")));
                }
                for (k, f) in p.formulas.iter().enumerate() {
                    if k != *at && !f.is_whynot_headed() {
                        return Err(fail(
                            name,
                            ReasonCode::SideCondition,
                            format!("promotion context formula '{f}' is not ?-headed"),
                        ));
                    }
                }
                expect(replaced(p, *at, Formula::bang(p.formulas[*at].clone())))
            }
            RuleTag::NDereliction { at, n } => {
                let p = &self.premises[0].conclusion;
                if *n == 0 {
                    return Err(fail(name, ReasonCode::BadParameter, "n must be at least 1"));
                }
                if *at >= p.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("n-dereliction position {at} out of range")));
                }
                let a = &p.formulas[*at];
                if a.is_whynot_headed() {
                    return Err(fail(
                        name,
                        ReasonCode::SideCondition,
                        format!("main connective of '{a}' is ?"),
                    ));
                }
                expect(replaced(p, *at, a.clone().whynots(*n)))
            }
            RuleTag::NPromotion { at, n } => {
                let p = &self.premises[0].conclusion;
                if *n == 0 {
                    return Err(fail(name, ReasonCode::BadParameter, "n must be at least 1"));
                }
                if *at >= p.len() {
                    return Err(fail(name, ReasonCode::BadParameter, format!("n-promotion position {at} out of range")));
                }
                let a = &p.formulas[*at];
                if a.is_bang_headed() {
                    return Err(fail(
                        name,
                        ReasonCode::SideCondition,
                        format!("main connective of '{a}' is !"),
                    ));
                }
                for (k, f) in p.formulas.iter().enumerate() {
                    if k != *at && !f.is_whynot_headed() {
                        return Err(fail(
                            name,
                            ReasonCode::SideCondition,
                            format!("promotion context formula '{f}' is not ?-headed"),
                        ));
                    }
                }
                expect(replaced(p, *at, a.clone().bangs(*n)))
            }
        }
    }

    // --- builders -----------------------------------------------------
    //
    // Each computes the unique conclusion and validates the node locally
    // (premises are assumed already checked).

    pub fn identity(a: Formula) -> Proof {
        let conclusion = Sequent::new(vec![a.clone(), a.dual()]);
        Proof { rule: RuleTag::Identity, conclusion, premises: Vec::new() }
    }

    fn built(rule: RuleTag, conclusion: Sequent, premises: Vec<Proof>) -> Result<Proof, RuleError> {
        let p = Proof { rule, conclusion, premises };
        p.validate_node(None)?;
        Ok(p)
    }

    /// Cut on the final formula of `left` against its dual, initial in `right`.
    pub fn cut(left: Proof, right: Proof) -> Result<Proof, RuleError> {
        let formula = left
            .conclusion
            .formulas
            .last()
            .cloned()
            .ok_or_else(|| fail("cut", ReasonCode::ContextMismatch, "left premise is empty"))?;
        if right.conclusion.formulas.first() != Some(&formula.dual()) {
            return Err(fail(
                "cut",
                ReasonCode::ContextMismatch,
                format!(
                    "right premise '{}' does not start with '{}'",
                    right.conclusion,
                    formula.dual()
                ),
            ));
        }
        let mut v = left.conclusion.formulas[..left.conclusion.len() - 1].to_vec();
        v.extend_from_slice(&right.conclusion.formulas[1..]);
        Proof::built(RuleTag::Cut { formula }, Sequent::new(v), vec![left, right])
    }

    /// Swap positions i and i+1.
    pub fn exchange(premise: Proof, i: usize) -> Result<Proof, RuleError> {
        if i + 1 >= premise.conclusion.len() {
            return Err(fail("exch", ReasonCode::BadParameter, format!("position {i} out of range")));
        }
        let mut v = premise.conclusion.formulas.clone();
        v.swap(i, i + 1);
        Proof::built(RuleTag::Exchange { i, j: i + 1 }, Sequent::new(v), vec![premise])
    }

    pub fn times(left: Proof, right: Proof) -> Result<Proof, RuleError> {
        if left.conclusion.is_empty() || right.conclusion.is_empty() {
            return Err(fail("times", ReasonCode::ContextMismatch, "times premises must be nonempty"));
        }
        let split = left.conclusion.len() - 1;
        let mut v = left.conclusion.formulas[..split].to_vec();
        v.push(Formula::tensor(
            left.conclusion.formulas[split].clone(),
            right.conclusion.formulas[0].clone(),
        ));
        v.extend_from_slice(&right.conclusion.formulas[1..]);
        Proof::built(RuleTag::Times { split }, Sequent::new(v), vec![left, right])
    }

    pub fn par(premise: Proof, at: usize) -> Result<Proof, RuleError> {
        let p = &premise.conclusion;
        if p.len() < 2 || at > p.len() - 2 {
            return Err(fail("par", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let mut v = p.formulas[..at].to_vec();
        v.push(Formula::par(p.formulas[at].clone(), p.formulas[at + 1].clone()));
        v.extend_from_slice(&p.formulas[at + 2..]);
        Proof::built(RuleTag::Par { at }, Sequent::new(v), vec![premise])
    }

    pub fn with(left: Proof, right: Proof, at: usize) -> Result<Proof, RuleError> {
        if at >= left.conclusion.len() {
            return Err(fail("with", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion = replaced(
            &left.conclusion,
            at,
            Formula::with(
                left.conclusion.formulas[at].clone(),
                right.conclusion.formulas.get(at).cloned().ok_or_else(|| {
                    fail("with", ReasonCode::ContextMismatch, "with premises have different widths")
                })?,
            ),
        );
        Proof::built(RuleTag::With { at }, conclusion, vec![left, right])
    }

    pub fn plus_left(premise: Proof, at: usize, other: Formula) -> Result<Proof, RuleError> {
        if at >= premise.conclusion.len() {
            return Err(fail("plus-l", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion = replaced(
            &premise.conclusion,
            at,
            Formula::plus(premise.conclusion.formulas[at].clone(), other),
        );
        Proof::built(RuleTag::PlusLeft { at }, conclusion, vec![premise])
    }

    pub fn plus_right(premise: Proof, at: usize, other: Formula) -> Result<Proof, RuleError> {
        if at >= premise.conclusion.len() {
            return Err(fail("plus-r", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion = replaced(
            &premise.conclusion,
            at,
            Formula::plus(other, premise.conclusion.formulas[at].clone()),
        );
        Proof::built(RuleTag::PlusRight { at }, conclusion, vec![premise])
    }

    pub fn contraction(premise: Proof, at: usize) -> Result<Proof, RuleError> {
        let p = &premise.conclusion;
        if p.len() < 2 || at > p.len() - 2 {
            return Err(fail("contr", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let mut v = p.formulas[..=at].to_vec();
        v.extend_from_slice(&p.formulas[at + 2..]);
        Proof::built(RuleTag::Contraction { at }, Sequent::new(v), vec![premise])
    }

    pub fn weakening(premise: Proof, at: usize, introduced: Formula) -> Result<Proof, RuleError> {
        if at > premise.conclusion.len() {
            return Err(fail("weak", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let mut v = premise.conclusion.formulas.clone();
        v.insert(at, introduced.clone());
        Proof::built(RuleTag::Weakening { at, introduced }, Sequent::new(v), vec![premise])
    }

    pub fn dereliction(premise: Proof, at: usize) -> Result<Proof, RuleError> {
        if at >= premise.conclusion.len() {
            return Err(fail("der", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion =
            replaced(&premise.conclusion, at, Formula::whynot(premise.conclusion.formulas[at].clone()));
        Proof::built(RuleTag::Dereliction { at }, conclusion, vec![premise])
    }

    pub fn promotion(premise: Proof, at: usize) -> Result<Proof, RuleError> {
        if at >= premise.conclusion.len() {
            return Err(fail("prom", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion =
            replaced(&premise.conclusion, at, Formula::bang(premise.conclusion.formulas[at].clone()));
        Proof::built(RuleTag::Promotion { at }, conclusion, vec![premise])
    }

    pub fn n_dereliction(premise: Proof, at: usize, n: usize) -> Result<Proof, RuleError> {
        if at >= premise.conclusion.len() {
            return Err(fail("nder", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion =
            replaced(&premise.conclusion, at, premise.conclusion.formulas[at].clone().whynots(n));
        Proof::built(RuleTag::NDereliction { at, n }, conclusion, vec![premise])
    }

    pub fn n_promotion(premise: Proof, at: usize, n: usize) -> Result<Proof, RuleError> {
        if at >= premise.conclusion.len() {
            return Err(fail("nprom", ReasonCode::BadParameter, format!("position {at} out of range")));
        }
        let conclusion =
            replaced(&premise.conclusion, at, premise.conclusion.formulas[at].clone().bangs(n));
        Proof::built(RuleTag::NPromotion { at, n }, conclusion, vec![premise])
    }

    /// Wrap `self` in an Exchange chain so that the new conclusion satisfies
    /// `new[i] = old[perm[i]]`. Occurrence-exact: positions, not values.
    pub fn permute(self, perm: &[usize]) -> Result<Proof, RuleError> {
        let n = self.conclusion.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(fail("exch", ReasonCode::BadParameter, "not a permutation"));
        }
        let mut cur: Vec<usize> = (0..n).collect();
        let mut proof = self;
        for (i, &want) in perm.iter().enumerate() {
            let j = (i..n).find(|&j| cur[j] == want).expect("permutation");
            for k in (i..j).rev() {
                proof = Proof::exchange(proof, k)?;
                cur.swap(k, k + 1);
            }
        }
        Ok(proof)
    }

    /// Wrap `self` in an Exchange chain so the conclusion becomes `target`
    /// (which must be a permutation of the current conclusion).
    ///
    /// Insertion-sort with adjacent transpositions; zero nodes when the
    /// order already matches.
    pub fn reorder(self, target: &Sequent) -> Result<Proof, RuleError> {
        if self.conclusion.multiset() != target.multiset() {
            return Err(fail(
                "exch",
                ReasonCode::ContextMismatch,
                format!("'{}' is not a permutation of '{}'", target, self.conclusion),
            ));
        }
        let mut proof = self;
        for i in 0..target.len() {
            if proof.conclusion.formulas[i] == target.formulas[i] {
                continue;
            }
            let j = (i + 1..proof.conclusion.len())
                .find(|&j| proof.conclusion.formulas[j] == target.formulas[i])
                .expect("multiset equality guarantees a match");
            for k in (i..j).rev() {
                proof = Proof::exchange(proof, k)?;
            }
        }
        Ok(proof)
    }
}

/// Rule identity with positions erased, for Exchange-insensitive comparison.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonRule {
    Identity(Formula),
    Cut(Formula),
    Times(Formula),
    Par(Formula),
    With(Formula),
    PlusLeft(Formula),
    PlusRight(Formula),
    Contraction(Formula),
    Weakening(Formula),
    Dereliction(Formula),
    Promotion(Formula),
    NDereliction(Formula, usize),
    NPromotion(Formula, usize),
}

/// Proof tree modulo Exchange: Exchange nodes deleted, conclusions as
/// multisets, rule parameters reduced to the principal formulas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonProof {
    pub rule: CanonRule,
    pub conclusion: Vec<(Formula, usize)>,
    pub premises: Vec<CanonProof>,
}

pub fn canonicalize(p: &Proof) -> CanonProof {
    if let RuleTag::Exchange { .. } = p.rule {
        return canonicalize(&p.premises[0]);
    }
    let rule = match &p.rule {
        RuleTag::Exchange { .. } => unreachable!("handled above"),
        RuleTag::Identity => {
            let a = p.conclusion.formulas[0].clone();
            CanonRule::Identity(a.clone().min(a.dual()))
        }
        RuleTag::Cut { formula } => CanonRule::Cut(formula.clone().min(formula.dual())),
        RuleTag::Times { split } => CanonRule::Times(p.conclusion.formulas[*split].clone()),
        RuleTag::Par { at } => CanonRule::Par(p.conclusion.formulas[*at].clone()),
        RuleTag::With { at } => CanonRule::With(p.conclusion.formulas[*at].clone()),
        RuleTag::PlusLeft { at } => CanonRule::PlusLeft(p.conclusion.formulas[*at].clone()),
        RuleTag::PlusRight { at } => CanonRule::PlusRight(p.conclusion.formulas[*at].clone()),
        RuleTag::Contraction { at } => CanonRule::Contraction(p.conclusion.formulas[*at].clone()),
        RuleTag::Weakening { introduced, .. } => CanonRule::Weakening(introduced.clone()),
        RuleTag::Dereliction { at } => CanonRule::Dereliction(p.conclusion.formulas[*at].clone()),
        RuleTag::Promotion { at } => CanonRule::Promotion(p.conclusion.formulas[*at].clone()),
        RuleTag::NDereliction { at, n } => {
            CanonRule::NDereliction(p.conclusion.formulas[*at].clone(), *n)
        }
        RuleTag::NPromotion { at, n } => CanonRule::NPromotion(p.conclusion.formulas[*at].clone(), *n),
    };
    CanonProof {
        rule,
        conclusion: p.conclusion.multiset().into_iter().collect(),
        premises: p.premises.iter().map(canonicalize).collect(),
    }
}
