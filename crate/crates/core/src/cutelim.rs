//! Single-step cut reduction and full cut-elimination.
//!
//! The strategy always reduces a topmost Cut (both subproofs cut-free),
//! leftmost first in depth-first order. A reduction step rewrites the Cut
//! subtree into a proof of the *same* conclusion sequent; Exchange nodes
//! above the premises are absorbed and re-emitted as needed, so the rest of
//! the derivation is untouched.
//!
//! `?ⁿ`/`!ⁿ` blocks are treated as single connectives: the n-Promotion vs
//! n-Dereliction case cuts directly on the underlying formula, blocks never
//! split mid-reduction.

use std::fmt;

use thiserror::Error;

use crate::calculus::{Proof, RuleError, RuleTag, System};
use crate::syntax::Formula;

/// One applied reduction: the case label and the tree path of the Cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: String,
    pub path: Vec<usize>,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} @ {}", self.kind, crate::calculus::path_string(&self.path))
    }
}

/// Audit trail of a normalization run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub final_proof: Proof,
}

#[derive(Debug, Clone, Error)]
pub enum CutElimError {
    #[error("proof fails to check: {0}")]
    Check(#[from] RuleError),
    #[error("fuel exhausted after {} steps", trace.steps.len())]
    FuelExhausted { trace: ReductionTrace },
    #[error("internal cut-elimination fault: {0}")]
    Internal(String),
}

fn internal(msg: impl Into<String>) -> CutElimError {
    CutElimError::Internal(msg.into())
}

pub fn is_cut_free(p: &Proof) -> bool {
    !p.contains_cut()
}

/// Fuel bound used by the CLI and the test suites: 2^(proof size).
pub fn default_fuel(p: &Proof) -> u64 {
    1u64 << p.size().min(62)
}

// ---------------------------------------------------------------------
// Occurrence tracking.
//
// Reductions must route each formula occurrence of the Cut conclusion
// `|- Γ, Δ` to its place in the rebuilt proof exactly; with duplicate
// formulas a value-based matching could silently permute equal formulas
// and change the denotation. Slots name the occurrences: G(i) is the i-th
// formula of Γ, D(i) the i-th of Δ, the shaded variants are the second
// copy produced by the contraction case, Tmp tags formulas about to be
// consumed by a Cut.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    G(usize),
    G2(usize),
    D(usize),
    D2(usize),
    Tmp(u8),
}

fn shade(s: Slot) -> Slot {
    match s {
        Slot::G(i) => Slot::G2(i),
        Slot::D(i) => Slot::D2(i),
        other => other,
    }
}

#[derive(Debug, Clone)]
struct Tracked {
    proof: Proof,
    slots: Vec<Slot>,
}

impl Tracked {
    fn new(proof: Proof, slots: Vec<Slot>) -> Result<Tracked, CutElimError> {
        if proof.conclusion.len() != slots.len() {
            return Err(internal(format!(
                "slot vector of length {} for sequent of width {}",
                slots.len(),
                proof.conclusion.len()
            )));
        }
        Ok(Tracked { proof, slots })
    }

    fn pos(&self, s: Slot) -> Result<usize, CutElimError> {
        self.slots
            .iter()
            .position(|&x| x == s)
            .ok_or_else(|| internal(format!("slot {s:?} not present")))
    }

    fn permute(self, perm: &[usize]) -> Result<Tracked, CutElimError> {
        let slots = perm.iter().map(|&i| self.slots[i]).collect();
        let proof = self.proof.permute(perm).map_err(|e| internal(e.to_string()))?;
        Ok(Tracked { proof, slots })
    }

    fn move_to_back(self, idx: usize) -> Result<Tracked, CutElimError> {
        let n = self.slots.len();
        let perm: Vec<usize> = (0..n).filter(|&r| r != idx).chain([idx]).collect();
        self.permute(&perm)
    }

    fn move_to_front(self, idx: usize) -> Result<Tracked, CutElimError> {
        let n = self.slots.len();
        let perm: Vec<usize> = [idx].into_iter().chain((0..n).filter(|&r| r != idx)).collect();
        self.permute(&perm)
    }

    /// Cut the final formula of `left` against the initial one of `right`.
    fn cut(left: Tracked, right: Tracked) -> Result<Tracked, CutElimError> {
        let mut slots = left.slots[..left.slots.len() - 1].to_vec();
        slots.extend_from_slice(&right.slots[1..]);
        let proof = Proof::cut(left.proof, right.proof).map_err(|e| internal(e.to_string()))?;
        Tracked::new(proof, slots)
    }

    fn arrange(self, order: &[Slot]) -> Result<Tracked, CutElimError> {
        let perm = order.iter().map(|&s| self.pos(s)).collect::<Result<Vec<_>, _>>()?;
        self.permute(&perm)
    }
}

// ---------------------------------------------------------------------
// Exchange absorption and case classification.

/// Walk through the Exchange chain at the root. Returns the first
/// non-Exchange descendant and `map` with `map[outer] = core position`.
fn strip_exchanges(p: &Proof) -> (&Proof, Vec<usize>) {
    let mut map: Vec<usize> = (0..p.conclusion.len()).collect();
    let mut cur = p;
    while let RuleTag::Exchange { i, .. } = cur.rule {
        for m in map.iter_mut() {
            if *m == i {
                *m = i + 1;
            } else if *m == i + 1 {
                *m = i;
            }
        }
        cur = &cur.premises[0];
    }
    (cur, map)
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (outer, &core) in map.iter().enumerate() {
        inv[core] = outer;
    }
    inv
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideClass {
    Axiom,
    Principal,
    /// Cut formula is a ?-context formula of a promotion.
    PromContext,
    Commute,
}

fn classify(core: &Proof, k: usize) -> Result<SideClass, CutElimError> {
    Ok(match &core.rule {
        RuleTag::Identity => SideClass::Axiom,
        RuleTag::Times { split } => {
            if k == *split {
                SideClass::Principal
            } else {
                SideClass::Commute
            }
        }
        RuleTag::Par { at }
        | RuleTag::With { at }
        | RuleTag::PlusLeft { at }
        | RuleTag::PlusRight { at }
        | RuleTag::Contraction { at }
        | RuleTag::Weakening { at, .. }
        | RuleTag::Dereliction { at }
        | RuleTag::NDereliction { at, .. } => {
            if k == *at {
                SideClass::Principal
            } else {
                SideClass::Commute
            }
        }
        RuleTag::Promotion { at } | RuleTag::NPromotion { at, .. } => {
            if k == *at {
                SideClass::Principal
            } else {
                SideClass::PromContext
            }
        }
        RuleTag::Cut { .. } => return Err(internal("cut above a topmost cut")),
        RuleTag::Exchange { .. } => return Err(internal("exchange not stripped")),
    })
}

/// Where a premise position of a unary rule sits in its conclusion.
enum PremRole {
    Ctx(usize),
    Principal,
    /// Second element of a merged pair (Par body, Contraction copy).
    Partner,
}

fn premise_role(rule: &RuleTag, r: usize) -> Result<PremRole, CutElimError> {
    Ok(match rule {
        RuleTag::Par { at } | RuleTag::Contraction { at } => {
            if r < *at {
                PremRole::Ctx(r)
            } else if r == *at {
                PremRole::Principal
            } else if r == *at + 1 {
                PremRole::Partner
            } else {
                PremRole::Ctx(r - 1)
            }
        }
        RuleTag::With { at }
        | RuleTag::PlusLeft { at }
        | RuleTag::PlusRight { at }
        | RuleTag::Dereliction { at }
        | RuleTag::Promotion { at }
        | RuleTag::NDereliction { at, .. }
        | RuleTag::NPromotion { at, .. } => {
            if r == *at {
                PremRole::Principal
            } else {
                PremRole::Ctx(r)
            }
        }
        RuleTag::Weakening { at, .. } => PremRole::Ctx(if r >= *at { r + 1 } else { r }),
        _ => return Err(internal(format!("no premise role for rule '{}'", rule.name()))),
    })
}

/// Premise position of the cut formula, for a unary rule whose conclusion
/// holds it at position `k` (non-principal).
fn premise_position(rule: &RuleTag, k: usize) -> Result<usize, CutElimError> {
    Ok(match rule {
        RuleTag::Par { at } | RuleTag::Contraction { at } => {
            if k < *at {
                k
            } else {
                k + 1
            }
        }
        RuleTag::With { .. }
        | RuleTag::PlusLeft { .. }
        | RuleTag::PlusRight { .. }
        | RuleTag::Dereliction { .. }
        | RuleTag::Promotion { .. }
        | RuleTag::NDereliction { .. }
        | RuleTag::NPromotion { .. } => k,
        RuleTag::Weakening { at, .. } => {
            if k > *at {
                k - 1
            } else {
                k
            }
        }
        _ => return Err(internal(format!("no premise position for rule '{}'", rule.name()))),
    })
}

// ---------------------------------------------------------------------
// The reduction proper.

struct CutSite<'a> {
    target: Vec<Slot>,
    conclusion: &'a crate::syntax::Sequent,
    pi1: &'a Proof,
    pi2: &'a Proof,
    core1: &'a Proof,
    core2: &'a Proof,
    /// Cut formula position in core1 / core2 conclusions.
    k1: usize,
    k2: usize,
    inv1: Vec<usize>,
    inv2: Vec<usize>,
    g: usize,
}

impl<'a> CutSite<'a> {
    /// Slot of core1-conclusion position `r`; the cut formula maps to Tmp(100).
    fn slot1(&self, r: usize) -> Slot {
        if self.inv1[r] == self.g {
            Slot::Tmp(100)
        } else {
            Slot::G(self.inv1[r])
        }
    }

    fn slot2(&self, r: usize) -> Slot {
        if self.inv2[r] == 0 {
            Slot::Tmp(101)
        } else {
            Slot::D(self.inv2[r] - 1)
        }
    }

    fn finish(&self, tp: Tracked, label: impl Into<String>) -> Result<(Proof, String), CutElimError> {
        let tp = tp.arrange(&self.target)?;
        if &tp.proof.conclusion != self.conclusion {
            return Err(internal(format!(
                "reduct concludes '{}', expected '{}'",
                tp.proof.conclusion, self.conclusion
            )));
        }
        Ok((tp.proof, label.into()))
    }

    /// Slots of a unary premise of core1's last rule, cut formula (premise
    /// position `kp`) excluded, partner positions sharing the principal slot.
    fn left_premise_slots(&self, kp: usize, len: usize) -> Result<Vec<Slot>, CutElimError> {
        let at = principal_at(&self.core1.rule)?;
        let mut out = Vec::with_capacity(len - 1);
        for r in 0..len {
            if r == kp {
                continue;
            }
            out.push(match premise_role(&self.core1.rule, r)? {
                PremRole::Ctx(c) => self.slot1(c),
                PremRole::Principal | PremRole::Partner => self.slot1(at),
            });
        }
        Ok(out)
    }

    fn right_premise_slots(&self, kp: usize, len: usize) -> Result<Vec<Slot>, CutElimError> {
        let at = principal_at(&self.core2.rule)?;
        let mut out = Vec::with_capacity(len - 1);
        for r in 0..len {
            if r == kp {
                continue;
            }
            out.push(match premise_role(&self.core2.rule, r)? {
                PremRole::Ctx(c) => self.slot2(c),
                PremRole::Principal | PremRole::Partner => self.slot2(at),
            });
        }
        Ok(out)
    }

    /// `Cut(u moved kp->back, pi2)`: conclusion `(u \ kp) ++ Δ`.
    /// `block` lists the slots of u's positions in order, `kp` excluded.
    fn cut_into_left(&self, u: &Proof, kp: usize, block: Vec<Slot>) -> Result<Tracked, CutElimError> {
        let mut slots = block;
        slots.insert(kp, Slot::Tmp(10));
        let left = Tracked::new(u.clone(), slots)?.move_to_back(kp)?;
        let right = Tracked::new(self.pi2.clone(), self.pi2_slots())?;
        Tracked::cut(left, right)
    }

    /// `Cut(pi1, w moved kp->front)`: conclusion `Γ ++ (w \ kp)`.
    fn cut_into_right(&self, w: &Proof, kp: usize, block: Vec<Slot>) -> Result<Tracked, CutElimError> {
        let mut slots = block;
        slots.insert(kp, Slot::Tmp(10));
        let right = Tracked::new(w.clone(), slots)?.move_to_front(kp)?;
        let left = Tracked::new(self.pi1.clone(), self.pi1_slots())?;
        Tracked::cut(left, right)
    }

    fn pi1_slots(&self) -> Vec<Slot> {
        (0..self.g).map(Slot::G).chain([Slot::Tmp(100)]).collect()
    }

    fn pi2_slots(&self) -> Vec<Slot> {
        [Slot::Tmp(101)]
            .into_iter()
            .chain((0..self.pi2.conclusion.len() - 1).map(Slot::D))
            .collect()
    }
}

fn principal_at(rule: &RuleTag) -> Result<usize, CutElimError> {
    Ok(match rule {
        RuleTag::Times { split } => *split,
        RuleTag::Par { at }
        | RuleTag::With { at }
        | RuleTag::PlusLeft { at }
        | RuleTag::PlusRight { at }
        | RuleTag::Contraction { at }
        | RuleTag::Weakening { at, .. }
        | RuleTag::Dereliction { at }
        | RuleTag::Promotion { at }
        | RuleTag::NDereliction { at, .. }
        | RuleTag::NPromotion { at, .. } => *at,
        _ => return Err(internal(format!("rule '{}' has no principal position", rule.name()))),
    })
}

fn rule_err(e: RuleError) -> CutElimError {
    internal(e.to_string())
}

/// Rewrite one topmost Cut node. Returns the replacement proof (same
/// conclusion) and the case label.
fn reduce_cut(cut: &Proof, _sys: System) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Cut { .. } = cut.rule else {
        return Err(internal("reduce_cut on a non-cut node"));
    };
    let pi1 = &cut.premises[0];
    let pi2 = &cut.premises[1];
    let g = pi1.conclusion.len() - 1;
    let d = pi2.conclusion.len() - 1;
    let (core1, map1) = strip_exchanges(pi1);
    let (core2, map2) = strip_exchanges(pi2);
    let site = CutSite {
        target: (0..g).map(Slot::G).chain((0..d).map(Slot::D)).collect(),
        conclusion: &cut.conclusion,
        pi1,
        pi2,
        core1,
        core2,
        k1: map1[g],
        k2: map2[0],
        inv1: invert(&map1),
        inv2: invert(&map2),
        g,
    };
    let class1 = classify(core1, site.k1)?;
    let class2 = classify(core2, site.k2)?;
    match (class1, class2) {
        (SideClass::Axiom, _) => {
            // Γ is the single dual of the cut formula; pi2 already concludes |- Γ, Δ.
            if &pi2.conclusion != site.conclusion {
                return Err(internal("axiom-left conclusion mismatch"));
            }
            Ok((pi2.clone(), "axiom-left".into()))
        }
        (_, SideClass::Axiom) => {
            if &pi1.conclusion != site.conclusion {
                return Err(internal("axiom-right conclusion mismatch"));
            }
            Ok((pi1.clone(), "axiom-right".into()))
        }
        (SideClass::Principal, SideClass::Principal) => principal(&site),
        (SideClass::Commute, _) => commute_left(&site),
        (SideClass::PromContext, SideClass::Principal) => commute_left(&site),
        (SideClass::PromContext, SideClass::Commute) => commute_right(&site),
        (SideClass::Principal, SideClass::Commute | SideClass::PromContext) => commute_right(&site),
        (SideClass::PromContext, SideClass::PromContext) => {
            Err(internal("cut formula is a ?-context formula on both sides"))
        }
    }
}

// --- principal cases --------------------------------------------------

fn principal(site: &CutSite<'_>) -> Result<(Proof, String), CutElimError> {
    use RuleTag::*;
    match (&site.core1.rule, &site.core2.rule) {
        (Times { .. }, Par { .. }) => times_par(site),
        (Par { .. }, Times { .. }) => par_times(site),
        (With { .. }, PlusLeft { .. }) => with_plus(site, true, "with-plus-left"),
        (With { .. }, PlusRight { .. }) => with_plus(site, false, "with-plus-right"),
        (PlusLeft { .. }, With { .. }) => plus_with(site, true, "plus-left-with"),
        (PlusRight { .. }, With { .. }) => plus_with(site, false, "plus-right-with"),
        (NPromotion { n: n1, .. }, NDereliction { n: n2, .. }) => {
            if n1 != n2 {
                return Err(internal("block length mismatch in nprom/nder cut"));
            }
            prom_der(site, "nprom-nder")
        }
        (Promotion { .. }, Dereliction { .. }) => prom_der(site, "prom-der"),
        (NDereliction { n: n1, .. }, NPromotion { n: n2, .. }) => {
            if n1 != n2 {
                return Err(internal("block length mismatch in nder/nprom cut"));
            }
            der_prom(site, "nder-nprom")
        }
        (Dereliction { .. }, Promotion { .. }) => der_prom(site, "der-prom"),
        (NPromotion { .. }, Contraction { .. }) => prom_contr(site, "nprom-contr"),
        (Promotion { .. }, Contraction { .. }) => prom_contr(site, "prom-contr"),
        (Contraction { .. }, NPromotion { .. }) => contr_prom(site, "contr-nprom"),
        (Contraction { .. }, Promotion { .. }) => contr_prom(site, "contr-prom"),
        (NPromotion { .. }, Weakening { .. }) => prom_weak(site, "nprom-weak"),
        (Promotion { .. }, Weakening { .. }) => prom_weak(site, "prom-weak"),
        (Weakening { .. }, NPromotion { .. }) => weak_prom(site, "weak-nprom"),
        (Weakening { .. }, Promotion { .. }) => weak_prom(site, "weak-prom"),
        (a, b) => Err(internal(format!(
            "unmatched principal pair '{}'/'{}'",
            a.name(),
            b.name()
        ))),
    }
}

fn times_par(site: &CutSite<'_>) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Times { split } = site.core1.rule else { unreachable!() };
    let RuleTag::Par { at: at2 } = site.core2.rule else { unreachable!() };
    let u1 = &site.core1.premises[0];
    let u2 = &site.core1.premises[1];
    let w = &site.core2.premises[0];
    let u1_slots: Vec<Slot> = (0..split).map(|r| site.slot1(r)).chain([Slot::Tmp(0)]).collect();
    let u2_slots: Vec<Slot> = [Slot::Tmp(1)]
        .into_iter()
        .chain((1..u2.conclusion.len()).map(|r| site.slot1(split + r)))
        .collect();
    let mut w_slots = Vec::with_capacity(w.conclusion.len());
    for r in 0..w.conclusion.len() {
        w_slots.push(if r == at2 {
            Slot::Tmp(2)
        } else if r == at2 + 1 {
            Slot::Tmp(3)
        } else {
            site.slot2(if r < at2 { r } else { r - 1 })
        });
    }
    let wr = Tracked::new(w.clone(), w_slots)?.move_to_front(at2)?;
    let c1 = Tracked::cut(Tracked::new(u1.clone(), u1_slots)?, wr)?;
    let y_pos = c1.pos(Slot::Tmp(3))?;
    let c1r = c1.move_to_front(y_pos)?;
    let u2r = Tracked::new(u2.clone(), u2_slots)?.move_to_back(0)?;
    let c2 = Tracked::cut(u2r, c1r)?;
    site.finish(c2, "times-par")
}

fn par_times(site: &CutSite<'_>) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Par { at: at1 } = site.core1.rule else { unreachable!() };
    let RuleTag::Times { split: s2 } = site.core2.rule else { unreachable!() };
    let u = &site.core1.premises[0];
    let v1 = &site.core2.premises[0];
    let v2 = &site.core2.premises[1];
    let mut u_slots = Vec::with_capacity(u.conclusion.len());
    for r in 0..u.conclusion.len() {
        u_slots.push(if r == at1 {
            Slot::Tmp(0)
        } else if r == at1 + 1 {
            Slot::Tmp(1)
        } else {
            site.slot1(if r < at1 { r } else { r - 1 })
        });
    }
    let v1_slots: Vec<Slot> = (0..s2).map(|r| site.slot2(r)).chain([Slot::Tmp(2)]).collect();
    let v2_slots: Vec<Slot> = [Slot::Tmp(3)]
        .into_iter()
        .chain((1..v2.conclusion.len()).map(|r| site.slot2(s2 + r)))
        .collect();
    let ur = Tracked::new(u.clone(), u_slots)?.move_to_back(at1)?;
    let v1r = Tracked::new(v1.clone(), v1_slots)?.move_to_front(v1.conclusion.len() - 1)?;
    let c1 = Tracked::cut(ur, v1r)?;
    let y_pos = c1.pos(Slot::Tmp(1))?;
    let c1r = c1.move_to_back(y_pos)?;
    let c2 = Tracked::cut(c1r, Tracked::new(v2.clone(), v2_slots)?)?;
    site.finish(c2, "par-times")
}

fn with_plus(site: &CutSite<'_>, left_branch: bool, label: &str) -> Result<(Proof, String), CutElimError> {
    let u = &site.core1.premises[if left_branch { 0 } else { 1 }];
    let w = &site.core2.premises[0];
    let u_slots: Vec<Slot> = (0..u.conclusion.len()).map(|r| site.slot1(r)).collect();
    let w_slots: Vec<Slot> = (0..w.conclusion.len()).map(|r| site.slot2(r)).collect();
    let ur = Tracked::new(u.clone(), u_slots)?.move_to_back(site.k1)?;
    let wr = Tracked::new(w.clone(), w_slots)?.move_to_front(site.k2)?;
    let c = Tracked::cut(ur, wr)?;
    site.finish(c, label)
}

fn plus_with(site: &CutSite<'_>, left_branch: bool, label: &str) -> Result<(Proof, String), CutElimError> {
    let u = &site.core1.premises[0];
    let w = &site.core2.premises[if left_branch { 0 } else { 1 }];
    let u_slots: Vec<Slot> = (0..u.conclusion.len()).map(|r| site.slot1(r)).collect();
    let w_slots: Vec<Slot> = (0..w.conclusion.len()).map(|r| site.slot2(r)).collect();
    let ur = Tracked::new(u.clone(), u_slots)?.move_to_back(site.k1)?;
    let wr = Tracked::new(w.clone(), w_slots)?.move_to_front(site.k2)?;
    let c = Tracked::cut(ur, wr)?;
    site.finish(c, label)
}

fn prom_der(site: &CutSite<'_>, label: &str) -> Result<(Proof, String), CutElimError> {
    let up = &site.core1.premises[0];
    let ud = &site.core2.premises[0];
    let up_slots: Vec<Slot> = (0..up.conclusion.len()).map(|r| site.slot1(r)).collect();
    let ud_slots: Vec<Slot> = (0..ud.conclusion.len()).map(|r| site.slot2(r)).collect();
    let left = Tracked::new(up.clone(), up_slots)?.move_to_back(site.k1)?;
    let right = Tracked::new(ud.clone(), ud_slots)?.move_to_front(site.k2)?;
    let c = Tracked::cut(left, right)?;
    site.finish(c, label)
}

fn der_prom(site: &CutSite<'_>, label: &str) -> Result<(Proof, String), CutElimError> {
    let ud = &site.core1.premises[0];
    let up = &site.core2.premises[0];
    let ud_slots: Vec<Slot> = (0..ud.conclusion.len()).map(|r| site.slot1(r)).collect();
    let up_slots: Vec<Slot> = (0..up.conclusion.len()).map(|r| site.slot2(r)).collect();
    let left = Tracked::new(ud.clone(), ud_slots)?.move_to_back(site.k1)?;
    let right = Tracked::new(up.clone(), up_slots)?.move_to_front(site.k2)?;
    let c = Tracked::cut(left, right)?;
    site.finish(c, label)
}

/// Promotion (left) against Contraction (right): duplicate the promotion
/// proof, cut both copies, re-contract its ?-context.
fn prom_contr(site: &CutSite<'_>, label: &str) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Contraction { at: ac } = site.core2.rule else { unreachable!() };
    let p = site.core1;
    let w = &site.core2.premises[0];
    let p_slots: Vec<Slot> = (0..p.conclusion.len()).map(|r| site.slot1(r)).collect();
    let p2_slots: Vec<Slot> = (0..p.conclusion.len())
        .map(|r| if r == site.k1 { Slot::Tmp(1) } else { shade(site.slot1(r)) })
        .collect();
    let mut w_slots = Vec::with_capacity(w.conclusion.len());
    for r in 0..w.conclusion.len() {
        w_slots.push(if r == ac {
            Slot::Tmp(2)
        } else if r == ac + 1 {
            Slot::Tmp(3)
        } else {
            site.slot2(if r < ac { r } else { r - 1 })
        });
    }
    let p1 = Tracked::new(p.clone(), p_slots)?.move_to_back(site.k1)?;
    let wr = Tracked::new(w.clone(), w_slots)?.move_to_front(ac)?;
    let c1 = Tracked::cut(p1, wr)?;
    let second = c1.pos(Slot::Tmp(3))?;
    let c1r = c1.move_to_front(second)?;
    let p2 = Tracked::new(p.clone(), p2_slots)?.move_to_back(site.k1)?;
    let c2 = Tracked::cut(p2, c1r)?;
    recontract(site, c2, ContextSide::Left, label)
}

/// Contraction (left) against Promotion (right): mirrored duplication.
fn contr_prom(site: &CutSite<'_>, label: &str) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Contraction { at: ac } = site.core1.rule else { unreachable!() };
    let p = site.core2;
    let w = &site.core1.premises[0];
    let p_slots: Vec<Slot> = (0..p.conclusion.len()).map(|r| site.slot2(r)).collect();
    let p2_slots: Vec<Slot> = (0..p.conclusion.len())
        .map(|r| if r == site.k2 { Slot::Tmp(1) } else { shade(site.slot2(r)) })
        .collect();
    let mut w_slots = Vec::with_capacity(w.conclusion.len());
    for r in 0..w.conclusion.len() {
        w_slots.push(if r == ac {
            Slot::Tmp(2)
        } else if r == ac + 1 {
            Slot::Tmp(3)
        } else {
            site.slot1(if r < ac { r } else { r - 1 })
        });
    }
    let wl = Tracked::new(w.clone(), w_slots)?.move_to_back(ac)?;
    let p1 = Tracked::new(p.clone(), p_slots)?.move_to_front(site.k2)?;
    let c1 = Tracked::cut(wl, p1)?;
    let second = c1.pos(Slot::Tmp(3))?;
    let c1r = c1.move_to_back(second)?;
    let p2 = Tracked::new(p.clone(), p2_slots)?.move_to_front(site.k2)?;
    let c2 = Tracked::cut(c1r, p2)?;
    recontract(site, c2, ContextSide::Right, label)
}

enum ContextSide {
    Left,
    Right,
}

/// Pair up the duplicated promotion context (plain slot, shaded slot),
/// contract each pair, then arrange the target order.
fn recontract(
    site: &CutSite<'_>,
    tp: Tracked,
    side: ContextSide,
    label: &str,
) -> Result<(Proof, String), CutElimError> {
    let (core, k) = match side {
        ContextSide::Left => (site.core1, site.k1),
        ContextSide::Right => (site.core2, site.k2),
    };
    let mut order: Vec<Slot> = Vec::new();
    let mut pairs = 0;
    for r in 0..core.conclusion.len() {
        if r == k {
            continue;
        }
        let s = match side {
            ContextSide::Left => site.slot1(r),
            ContextSide::Right => site.slot2(r),
        };
        order.push(s);
        order.push(shade(s));
        pairs += 1;
    }
    for &s in &tp.slots {
        if !order.contains(&s) {
            order.push(s);
        }
    }
    let mut tp = tp.arrange(&order)?;
    for i in 0..pairs {
        tp.proof = Proof::contraction(tp.proof, i).map_err(rule_err)?;
        tp.slots.remove(i + 1);
    }
    site.finish(tp, label)
}

/// Promotion (left) against Weakening (right): drop the promotion, weaken
/// its ?-context into the weakening premise.
fn prom_weak(site: &CutSite<'_>, label: &str) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Weakening { at: aw, .. } = &site.core2.rule else { unreachable!() };
    let w = &site.core2.premises[0];
    let mut slots = Vec::with_capacity(w.conclusion.len());
    for r in 0..w.conclusion.len() {
        let c = if r >= *aw { r + 1 } else { r };
        slots.push(site.slot2(c));
    }
    let mut tp = Tracked::new(w.clone(), slots)?;
    for r in 0..site.core1.conclusion.len() {
        if r == site.k1 {
            continue;
        }
        let f = site.core1.conclusion.formulas[r].clone();
        let len = tp.proof.conclusion.len();
        tp.proof = Proof::weakening(tp.proof, len, f).map_err(rule_err)?;
        tp.slots.push(site.slot1(r));
    }
    site.finish(tp, label)
}

fn weak_prom(site: &CutSite<'_>, label: &str) -> Result<(Proof, String), CutElimError> {
    let RuleTag::Weakening { at: aw, .. } = &site.core1.rule else { unreachable!() };
    let w = &site.core1.premises[0];
    let mut slots = Vec::with_capacity(w.conclusion.len());
    for r in 0..w.conclusion.len() {
        let c = if r >= *aw { r + 1 } else { r };
        slots.push(site.slot1(c));
    }
    let mut tp = Tracked::new(w.clone(), slots)?;
    for r in 0..site.core2.conclusion.len() {
        if r == site.k2 {
            continue;
        }
        let f = site.core2.conclusion.formulas[r].clone();
        let len = tp.proof.conclusion.len();
        tp.proof = Proof::weakening(tp.proof, len, f).map_err(rule_err)?;
        tp.slots.push(site.slot2(r));
    }
    site.finish(tp, label)
}

// --- commutative cases ------------------------------------------------

fn commute_left(site: &CutSite<'_>) -> Result<(Proof, String), CutElimError> {
    let label = format!("commute-left:{}", site.core1.rule.name());
    if let RuleTag::Times { split } = site.core1.rule {
        let u1 = &site.core1.premises[0];
        let u2 = &site.core1.premises[1];
        if site.k1 < split {
            // cut formula in the left factor's context
            let block: Vec<Slot> = (0..u1.conclusion.len())
                .filter(|&r| r != site.k1)
                .map(|r| if r == split { Slot::Tmp(2) } else { site.slot1(r) })
                .collect();
            let cu = site.cut_into_left(u1, site.k1, block)?;
            let xpos = cu.pos(Slot::Tmp(2))?;
            let cur = cu.move_to_back(xpos)?;
            let mut slots = cur.slots[..cur.slots.len() - 1].to_vec();
            slots.push(site.slot1(split));
            slots.extend((1..u2.conclusion.len()).map(|r| site.slot1(split + r)));
            let proof = Proof::times(cur.proof, u2.clone()).map_err(rule_err)?;
            site.finish(Tracked::new(proof, slots)?, label)
        } else {
            let kp = site.k1 - split;
            let block: Vec<Slot> = (0..u2.conclusion.len())
                .filter(|&r| r != kp)
                .map(|r| if r == 0 { Slot::Tmp(2) } else { site.slot1(split + r) })
                .collect();
            let cu = site.cut_into_left(u2, kp, block)?;
            let mut slots: Vec<Slot> = (0..split).map(|r| site.slot1(r)).collect();
            slots.push(site.slot1(split));
            slots.extend_from_slice(&cu.slots[1..]);
            let proof = Proof::times(u1.clone(), cu.proof).map_err(rule_err)?;
            site.finish(Tracked::new(proof, slots)?, label)
        }
    } else if let RuleTag::With { at } = site.core1.rule {
        let kp = site.k1;
        let u1 = &site.core1.premises[0];
        let u2 = &site.core1.premises[1];
        let block = site.left_premise_slots(kp, u1.conclusion.len())?;
        let cu1 = site.cut_into_left(u1, kp, block.clone())?;
        let cu2 = site.cut_into_left(u2, kp, block)?;
        let at_new = at - usize::from(kp < at);
        let slots = cu1.slots.clone();
        let proof = Proof::with(cu1.proof, cu2.proof, at_new).map_err(rule_err)?;
        site.finish(Tracked::new(proof, slots)?, label)
    } else {
        let rule = site.core1.rule.clone();
        let at = principal_at(&rule)?;
        let u = &site.core1.premises[0];
        let kp = premise_position(&rule, site.k1)?;
        let block = site.left_premise_slots(kp, u.conclusion.len())?;
        let cu = site.cut_into_left(u, kp, block)?;
        let at_new = at - usize::from(kp < at);
        rebuild_unary(site, cu, &rule, at_new, site.core1, ContextSide::Left, label)
    }
}

fn commute_right(site: &CutSite<'_>) -> Result<(Proof, String), CutElimError> {
    let label = format!("commute-right:{}", site.core2.rule.name());
    if let RuleTag::Times { split } = site.core2.rule {
        let w1 = &site.core2.premises[0];
        let w2 = &site.core2.premises[1];
        if site.k2 < split {
            let block: Vec<Slot> = (0..w1.conclusion.len())
                .filter(|&r| r != site.k2)
                .map(|r| if r == split { Slot::Tmp(2) } else { site.slot2(r) })
                .collect();
            let cw = site.cut_into_right(w1, site.k2, block)?;
            // the left factor ends up last already: Γ ++ (Λ₁ \ k2) ++ [X]
            let mut slots = cw.slots[..cw.slots.len() - 1].to_vec();
            slots.push(site.slot2(split));
            slots.extend((1..w2.conclusion.len()).map(|r| site.slot2(split + r)));
            let proof = Proof::times(cw.proof, w2.clone()).map_err(rule_err)?;
            site.finish(Tracked::new(proof, slots)?, label)
        } else {
            let kp = site.k2 - split;
            let block: Vec<Slot> = (0..w2.conclusion.len())
                .filter(|&r| r != kp)
                .map(|r| if r == 0 { Slot::Tmp(2) } else { site.slot2(split + r) })
                .collect();
            let cw = site.cut_into_right(w2, kp, block)?;
            let ypos = cw.pos(Slot::Tmp(2))?;
            let cwr = cw.move_to_front(ypos)?;
            let mut slots: Vec<Slot> = (0..split).map(|r| site.slot2(r)).collect();
            slots.push(site.slot2(split));
            slots.extend_from_slice(&cwr.slots[1..]);
            let proof = Proof::times(w1.clone(), cwr.proof).map_err(rule_err)?;
            site.finish(Tracked::new(proof, slots)?, label)
        }
    } else if let RuleTag::With { at } = site.core2.rule {
        let kp = site.k2;
        let w1 = &site.core2.premises[0];
        let w2 = &site.core2.premises[1];
        let block = site.right_premise_slots(kp, w1.conclusion.len())?;
        let cw1 = site.cut_into_right(w1, kp, block.clone())?;
        let cw2 = site.cut_into_right(w2, kp, block)?;
        let at_new = site.g + at - usize::from(kp < at);
        let slots = cw1.slots.clone();
        let proof = Proof::with(cw1.proof, cw2.proof, at_new).map_err(rule_err)?;
        site.finish(Tracked::new(proof, slots)?, label)
    } else {
        let rule = site.core2.rule.clone();
        let at = principal_at(&rule)?;
        let w = &site.core2.premises[0];
        let kp = premise_position(&rule, site.k2)?;
        let block = site.right_premise_slots(kp, w.conclusion.len())?;
        let cw = site.cut_into_right(w, kp, block)?;
        let at_new = site.g + at - usize::from(kp < at);
        rebuild_unary(site, cw, &rule, at_new, site.core2, ContextSide::Right, label)
    }
}

/// Re-apply a unary rule below the commuted cut.
fn rebuild_unary(
    site: &CutSite<'_>,
    tp: Tracked,
    rule: &RuleTag,
    at: usize,
    core: &Proof,
    side: ContextSide,
    label: String,
) -> Result<(Proof, String), CutElimError> {
    let mut slots = tp.slots;
    let proof = match rule {
        RuleTag::Par { .. } => {
            slots.remove(at + 1);
            Proof::par(tp.proof, at).map_err(rule_err)?
        }
        RuleTag::Contraction { .. } => {
            slots.remove(at + 1);
            Proof::contraction(tp.proof, at).map_err(rule_err)?
        }
        RuleTag::Weakening { at: aw, introduced } => {
            // insert at the end; the final arrangement fixes the order
            let w_slot = match side {
                ContextSide::Left => site.slot1(*aw),
                ContextSide::Right => site.slot2(*aw),
            };
            slots.push(w_slot);
            let len = tp.proof.conclusion.len();
            Proof::weakening(tp.proof, len, introduced.clone()).map_err(rule_err)?
        }
        RuleTag::PlusLeft { at: a0 } => {
            let Formula::Plus(_, other) = &core.conclusion.formulas[*a0] else {
                return Err(internal("plus-left conclusion is not a plus"));
            };
            Proof::plus_left(tp.proof, at, (**other).clone()).map_err(rule_err)?
        }
        RuleTag::PlusRight { at: a0 } => {
            let Formula::Plus(other, _) = &core.conclusion.formulas[*a0] else {
                return Err(internal("plus-right conclusion is not a plus"));
            };
            Proof::plus_right(tp.proof, at, (**other).clone()).map_err(rule_err)?
        }
        RuleTag::Dereliction { .. } => Proof::dereliction(tp.proof, at).map_err(rule_err)?,
        RuleTag::Promotion { .. } => Proof::promotion(tp.proof, at).map_err(rule_err)?,
        RuleTag::NDereliction { n, .. } => Proof::n_dereliction(tp.proof, at, *n).map_err(rule_err)?,
        RuleTag::NPromotion { n, .. } => Proof::n_promotion(tp.proof, at, *n).map_err(rule_err)?,
        other => return Err(internal(format!("cannot rebuild rule '{}'", other.name()))),
    };
    site.finish(Tracked::new(proof, slots)?, label)
}

// ---------------------------------------------------------------------
// Driver.

fn find_topmost_cut(p: &Proof, path: &mut Vec<usize>) -> Option<Vec<usize>> {
    if matches!(p.rule, RuleTag::Cut { .. }) && p.premises.iter().all(|q| !q.contains_cut()) {
        return Some(path.clone());
    }
    for (i, prem) in p.premises.iter().enumerate() {
        path.push(i);
        if let Some(found) = find_topmost_cut(prem, path) {
            return Some(found);
        }
        path.pop();
    }
    None
}

fn subtree<'a>(p: &'a Proof, path: &[usize]) -> &'a Proof {
    path.iter().fold(p, |q, &i| &q.premises[i])
}

fn with_replaced(p: &Proof, path: &[usize], new: Proof) -> Proof {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let mut q = p.clone();
            q.premises[i] = with_replaced(&p.premises[i], rest, new);
            q
        }
    }
}

/// Apply one reduction to the leftmost topmost Cut. `None` when cut-free.
///
/// The proof must be checked; the rewritten subtree concludes the same
/// sequent, so the surrounding derivation still checks afterwards.
pub fn reduce_step(p: &Proof, sys: System) -> Result<Option<(Proof, ReductionStep)>, CutElimError> {
    let Some(path) = find_topmost_cut(p, &mut Vec::new()) else {
        return Ok(None);
    };
    let site = subtree(p, &path);
    let (reduct, kind) = reduce_cut(site, sys)?;
    debug_assert_eq!(reduct.conclusion, site.conclusion);
    let next = with_replaced(p, &path, reduct);
    Ok(Some((next, ReductionStep { kind, path })))
}

/// Eliminate all cuts, recording every step. `fuel` bounds the step count.
pub fn normalize(p: &Proof, sys: System, fuel: u64) -> Result<ReductionTrace, CutElimError> {
    p.check(sys)?;
    let mut current = p.clone();
    let mut steps = Vec::new();
    loop {
        match reduce_step(&current, sys)? {
            None => break,
            Some((next, step)) => {
                if steps.len() as u64 >= fuel {
                    return Err(CutElimError::FuelExhausted {
                        trace: ReductionTrace { steps, final_proof: current },
                    });
                }
                steps.push(step);
                current = next;
            }
        }
    }
    current.check(sys).map_err(|e| internal(format!("normal form fails to check: {e}")))?;
    Ok(ReductionTrace { steps, final_proof: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::canonicalize;
    use crate::syntax::parse_sequent;

    fn p0() -> Formula {
        Formula::pos(0)
    }

    /// Id; n-Der at 0; m-Prom at 1: |- ?ⁿcore, !ᵐcore^
    fn eta(n: usize, m: usize, core: Formula) -> Proof {
        let id = Proof::identity(core);
        let der = Proof::n_dereliction(id, 0, n).unwrap();
        Proof::n_promotion(der, 1, m).unwrap()
    }

    #[test]
    fn axiom_cut_reduces_to_other_premise() {
        let pi = eta(1, 1, p0()); // |- ?p0, !p0^
        let id = Proof::identity(Formula::whynot(p0())); // |- ?p0, !p0^
        let cut = Proof::cut(id, pi.clone()).unwrap();
        assert!(cut.check(System::idll()).is_ok());
        let trace = normalize(&cut, System::idll(), 64).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].kind, "axiom-left");
        assert_eq!(trace.final_proof, pi);
    }

    #[test]
    fn eta_cut_on_single_block_normalizes_to_double_eta() {
        // π₁ |- ??p0, !p0^ ; π₂ |- ?p0, !!p0^ ; cut on !p0^ / ?p0
        let pi1 = eta(2, 1, p0());
        let pi2 = eta(1, 2, p0());
        let cut = Proof::cut(pi1, pi2).unwrap();
        assert_eq!(cut.conclusion, parse_sequent("|- ??p0, !!p0^").unwrap());
        assert!(cut.check(System::idll()).is_ok());
        let trace = normalize(&cut, System::idll(), default_fuel(&cut)).unwrap();
        assert!(is_cut_free(&trace.final_proof));
        assert_eq!(trace.final_proof.conclusion, cut.conclusion);
        assert_eq!(canonicalize(&trace.final_proof), canonicalize(&eta(2, 2, p0())));
    }

    #[test]
    fn eta_cut_on_double_block_normalizes_to_single_eta() {
        // cut on !!p0^ / ??p0: π₂ ends with !!p0^, π₁ starts with ??p0
        let pi1 = eta(2, 1, p0());
        let pi2 = eta(1, 2, p0());
        let cut = Proof::cut(pi2, pi1).unwrap();
        assert_eq!(cut.conclusion, parse_sequent("|- ?p0, !p0^").unwrap());
        assert!(cut.check(System::idll()).is_ok());
        let trace = normalize(&cut, System::idll(), default_fuel(&cut)).unwrap();
        assert!(is_cut_free(&trace.final_proof));
        assert_eq!(canonicalize(&trace.final_proof), canonicalize(&eta(1, 1, p0())));
    }

    #[test]
    fn par_times_principal_with_commutes() {
        // left: |- p0 @ p0^ by par over identity
        let px = Proof::par(Proof::identity(p0()), 0).unwrap();
        // right: |- p0^ * p0, p0, p0^ by times then exchange to the front
        let t = Proof::times(Proof::identity(p0()), Proof::identity(p0())).unwrap();
        assert_eq!(t.conclusion, parse_sequent("|- p0, p0^ * p0, p0^").unwrap());
        let ex = Proof::exchange(t, 0).unwrap();
        let cut = Proof::cut(px, ex).unwrap();
        assert_eq!(cut.conclusion, parse_sequent("|- p0, p0^").unwrap());
        assert!(cut.check(System::ll()).is_ok());

        // step-by-step subject reduction
        let sys = System::ll();
        let mut cur = cut.clone();
        while let Some((next, _step)) = reduce_step(&cur, sys).unwrap() {
            assert!(next.check(sys).is_ok());
            assert_eq!(next.conclusion, cut.conclusion);
            cur = next;
        }
        assert!(is_cut_free(&cur));
    }

    #[test]
    fn promotion_contraction_duplication() {
        // promotion side: |- ?p0, !p0^
        let prom = eta(1, 1, p0());
        // contraction side: |- ?p0, ?p0, p0^ contracted to |- ?p0, p0^
        let id = Proof::identity(p0());
        let der = Proof::n_dereliction(id, 0, 1).unwrap(); // |- ?p0, p0^
        let weak = Proof::weakening(der, 1, Formula::whynot(p0())).unwrap(); // |- ?p0, ?p0, p0^
        let contr = Proof::contraction(weak, 0).unwrap(); // |- ?p0, p0^
        // cut !p0^ (prom side, final) against ?p0 (initial in contr side)
        let cut = Proof::cut(prom, contr).unwrap();
        assert_eq!(cut.conclusion, parse_sequent("|- ?p0, p0^").unwrap());
        assert!(cut.check(System::idll()).is_ok());

        let sys = System::idll();
        let mut cur = cut.clone();
        let mut labels = Vec::new();
        while let Some((next, step)) = reduce_step(&cur, sys).unwrap() {
            assert!(next.check(sys).is_ok(), "after {}", step.kind);
            assert_eq!(next.conclusion.multiset(), cut.conclusion.multiset());
            labels.push(step.kind);
            cur = next;
        }
        assert!(is_cut_free(&cur));
        assert!(labels.iter().any(|l| l == "nprom-contr"), "labels: {labels:?}");
    }

    #[test]
    fn normalize_cut_free_is_noop() {
        let pi = eta(2, 1, p0());
        let trace = normalize(&pi, System::idll(), 16).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_proof, pi);
    }

    #[test]
    fn fuel_exhaustion_reports_trace() {
        let cut = Proof::cut(eta(2, 1, p0()), eta(1, 2, p0())).unwrap();
        match normalize(&cut, System::idll(), 0) {
            Err(CutElimError::FuelExhausted { trace }) => {
                assert!(trace.steps.is_empty());
                assert!(trace.final_proof.contains_cut());
            }
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn normal_forms_are_stable() {
        let cut = Proof::cut(eta(2, 1, p0()), eta(1, 2, p0())).unwrap();
        let trace = normalize(&cut, System::idll(), 64).unwrap();
        let again = normalize(&trace.final_proof, System::idll(), 64).unwrap();
        assert!(again.steps.is_empty());
        assert_eq!(again.final_proof, trace.final_proof);
    }
}
