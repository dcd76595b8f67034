//! Denotations of formulas and checked proofs in finite totality spaces.
//!
//! A sequent `|- A₁,…,Aₖ` denotes the par of the component spaces; a proof
//! denotes a set of k-tuples over the component bases, and that set must be
//! total. Totality is decided without materializing the par-fold: a tuple
//! set is total iff it meets every product of component cototals in exactly
//! one point (the cototals of a par are the products of the component
//! cototals, by tensor biclosure).
//!
//! The clauses are the relational reading: Cut composes, Times pairs, With
//! tags and joins, Weakening spans the whole base of the new coordinate,
//! Contraction diagonalizes, (n-)Dereliction post-composes with the
//! membership relation into cototals, (n-)Promotion maps each context
//! tuple to its slice. Block rules reuse the δ-isomorphisms: the n-step
//! clause is the 1-step clause followed by n-1 wraps.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::calculus::{path_string, Proof, RuleTag, System};
use crate::cutelim::{reduce_step, CutElimError, ReductionStep};
use crate::syntax::Formula;
use crate::totspace::{
    bang, par, plus, tensor, whynot, with, Atom, AtomSet, Caps, SpaceError, TotSpace,
};

/// Assignment of totality spaces to positive literal indices; a negative
/// literal denotes the dual of its positive assignment.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    assignment: BTreeMap<u32, TotSpace>,
}

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    pub fn assign(&mut self, index: u32, space: TotSpace) {
        self.assignment.insert(index, space);
    }

    pub fn get(&self, index: u32) -> Option<&TotSpace> {
        self.assignment.get(&index)
    }

    /// Every listed literal mapped to the discrete n-element space.
    pub fn uniform_discrete(indices: impl IntoIterator<Item = u32>, n: usize) -> Environment {
        let mut env = Environment::new();
        for i in indices {
            env.assign(i, TotSpace::discrete(n));
        }
        env
    }
}

#[derive(Debug, Clone, Error)]
pub enum SemError {
    #[error("{0}")]
    Space(#[from] SpaceError),
    #[error("literal p{0} is not assigned in the environment")]
    UnassignedLiteral(u32),
    #[error("denotation at {path} is not total: {detail}")]
    TotalityViolation { path: String, detail: String },
    #[error("cannot interpret the empty sequent (no par unit in the language)")]
    EmptySequent,
    #[error("reduction failed while checking soundness: {0}")]
    Reduction(String),
}

/// Interpret a formula by structural recursion over the space operations.
pub fn eval_formula(f: &Formula, env: &Environment, caps: Caps) -> Result<TotSpace, SemError> {
    Ok(match f {
        Formula::PosLit(i) => env.get(*i).ok_or(SemError::UnassignedLiteral(*i))?.clone(),
        Formula::NegLit(i) => env.get(*i).ok_or(SemError::UnassignedLiteral(*i))?.dual(caps)?,
        Formula::Tensor(a, b) => {
            tensor(&eval_formula(a, env, caps)?, &eval_formula(b, env, caps)?, caps)?
        }
        Formula::Par(a, b) => par(&eval_formula(a, env, caps)?, &eval_formula(b, env, caps)?, caps)?,
        Formula::With(a, b) => {
            with(&eval_formula(a, env, caps)?, &eval_formula(b, env, caps)?, caps)?
        }
        Formula::Plus(a, b) => {
            plus(&eval_formula(a, env, caps)?, &eval_formula(b, env, caps)?, caps)?
        }
        Formula::Bang(a) => bang(&eval_formula(a, env, caps)?, caps)?,
        Formula::WhyNot(a) => whynot(&eval_formula(a, env, caps)?, caps)?,
    })
}

/// A proof denotation: the per-coordinate component spaces of its
/// conclusion and the tuple set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Denotation {
    pub components: Vec<TotSpace>,
    pub value: BTreeSet<Vec<Atom>>,
}

impl Denotation {
    /// Totality in the par of the components: the value meets every
    /// product of component cototals in exactly one tuple.
    pub fn is_total(&self, caps: Caps) -> Result<bool, SemError> {
        if self.components.is_empty() {
            return Err(SemError::EmptySequent);
        }
        let cototals: Vec<Vec<AtomSet>> = self
            .components
            .iter()
            .map(|c| c.cototals(caps).map(|f| f.into_iter().collect()))
            .collect::<Result<_, _>>()?;
        // a component with no cototals makes the product family empty, so
        // the condition is vacuous
        if cototals.iter().any(|f| f.is_empty()) {
            return Ok(true);
        }
        let mut choice = vec![0usize; cototals.len()];
        loop {
            let hits = self
                .value
                .iter()
                .filter(|t| t.iter().zip(&choice).zip(&cototals).all(|((a, &i), fam)| fam[i].contains(a)))
                .count();
            if hits != 1 {
                return Ok(false);
            }
            // next product of cototals
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(true);
                }
                choice[k] += 1;
                if choice[k] < cototals[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
}

fn wrap(a: Atom, levels: usize) -> Atom {
    (0..levels).fold(a, |x, _| Atom::set([x].into_iter().collect()))
}

struct Interp<'a> {
    env: &'a Environment,
    caps: Caps,
}

impl<'a> Interp<'a> {
    fn node(&self, p: &Proof, path: &mut Vec<usize>) -> Result<Denotation, SemError> {
        let mut prem = Vec::with_capacity(p.premises.len());
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            prem.push(self.node(q, path)?);
            path.pop();
        }
        let components: Vec<TotSpace> = p
            .conclusion
            .formulas
            .iter()
            .map(|f| eval_formula(f, self.env, self.caps))
            .collect::<Result<_, _>>()?;
        let value = self.clause(p, &prem)?;
        let d = Denotation { components, value };
        if !d.is_total(self.caps)? {
            return Err(SemError::TotalityViolation {
                path: path_string(path),
                detail: format!("rule '{}', {} tuples", p.rule.name(), d.value.len()),
            });
        }
        Ok(d)
    }

    fn clause(&self, p: &Proof, prem: &[Denotation]) -> Result<BTreeSet<Vec<Atom>>, SemError> {
        Ok(match &p.rule {
            RuleTag::Identity => {
                let a = eval_formula(&p.conclusion.formulas[0], self.env, self.caps)?;
                a.base.iter().map(|x| vec![x.clone(), x.clone()]).collect()
            }
            RuleTag::Cut { .. } => {
                let v1 = &prem[0].value;
                let v2 = &prem[1].value;
                let mut out = BTreeSet::new();
                for t1 in v1 {
                    let (gamma, x) = t1.split_at(t1.len() - 1);
                    for t2 in v2 {
                        if t2[0] == x[0] {
                            let mut t = gamma.to_vec();
                            t.extend_from_slice(&t2[1..]);
                            out.insert(t);
                        }
                    }
                }
                out
            }
            RuleTag::Exchange { i, .. } => prem[0]
                .value
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.swap(*i, *i + 1);
                    t
                })
                .collect(),
            RuleTag::Times { split } => {
                let mut out = BTreeSet::new();
                for t1 in &prem[0].value {
                    let (gamma, a) = t1.split_at(*split);
                    for t2 in &prem[1].value {
                        let mut t = gamma.to_vec();
                        t.push(Atom::pair(a[0].clone(), t2[0].clone()));
                        t.extend_from_slice(&t2[1..]);
                        out.insert(t);
                    }
                }
                out
            }
            RuleTag::Par { at } => prem[0]
                .value
                .iter()
                .map(|t| {
                    let mut out = t[..*at].to_vec();
                    out.push(Atom::pair(t[*at].clone(), t[*at + 1].clone()));
                    out.extend_from_slice(&t[*at + 2..]);
                    out
                })
                .collect(),
            RuleTag::With { at } => {
                let mut out = BTreeSet::new();
                for t in &prem[0].value {
                    let mut t = t.clone();
                    t[*at] = Atom::inl(t[*at].clone());
                    out.insert(t);
                }
                for t in &prem[1].value {
                    let mut t = t.clone();
                    t[*at] = Atom::inr(t[*at].clone());
                    out.insert(t);
                }
                out
            }
            RuleTag::PlusLeft { at } => prem[0]
                .value
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t[*at] = Atom::inl(t[*at].clone());
                    t
                })
                .collect(),
            RuleTag::PlusRight { at } => prem[0]
                .value
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t[*at] = Atom::inr(t[*at].clone());
                    t
                })
                .collect(),
            RuleTag::Contraction { at } => prem[0]
                .value
                .iter()
                .filter(|t| t[*at] == t[*at + 1])
                .map(|t| {
                    let mut out = t[..=*at].to_vec();
                    out.extend_from_slice(&t[*at + 2..]);
                    out
                })
                .collect(),
            RuleTag::Weakening { at, introduced } => {
                let space = eval_formula(introduced, self.env, self.caps)?;
                let mut out = BTreeSet::new();
                for t in &prem[0].value {
                    for c in &space.base {
                        let mut t2 = t.clone();
                        t2.insert(*at, c.clone());
                        out.insert(t2);
                    }
                }
                out
            }
            RuleTag::Dereliction { at } => self.derelict(p, prem, *at, 1)?,
            RuleTag::NDereliction { at, n } => self.derelict(p, prem, *at, *n)?,
            RuleTag::Promotion { at } => self.promote(p, prem, *at, 1)?,
            RuleTag::NPromotion { at, n } => self.promote(p, prem, *at, *n)?,
        })
    }

    /// Post-compose coordinate `at` with the membership relation into the
    /// cototals of the premise formula's space, then wrap n-1 levels.
    fn derelict(
        &self,
        p: &Proof,
        prem: &[Denotation],
        at: usize,
        n: usize,
    ) -> Result<BTreeSet<Vec<Atom>>, SemError> {
        let a_space = &prem[0].components[at];
        let _ = p;
        let cototals = a_space.cototals(self.caps)?;
        let mut out = BTreeSet::new();
        for t in &prem[0].value {
            for tau in &cototals {
                if tau.contains(&t[at]) {
                    let mut t2 = t.clone();
                    t2[at] = wrap(Atom::set(tau.clone()), n - 1);
                    out.insert(t2);
                }
            }
        }
        Ok(out)
    }

    /// Map each context tuple to its slice (an atom of `!A` when the slice
    /// is total), then wrap n-1 levels. Context tuples not occurring in the
    /// value have the empty slice; they only matter when the empty set is
    /// total (degenerate spaces), in which case they are enumerated too.
    fn promote(
        &self,
        p: &Proof,
        prem: &[Denotation],
        at: usize,
        n: usize,
    ) -> Result<BTreeSet<Vec<Atom>>, SemError> {
        let a_space = &prem[0].components[at];
        let _ = p;
        let mut slices: BTreeMap<Vec<Atom>, AtomSet> = BTreeMap::new();
        for t in &prem[0].value {
            let mut ctx = t.clone();
            let a = ctx.remove(at);
            slices.entry(ctx).or_default().insert(a);
        }
        if a_space.is_total(&AtomSet::new()) {
            let ctx_bases: Vec<Vec<Atom>> = prem[0]
                .components
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != at)
                .map(|(_, c)| c.base.iter().cloned().collect())
                .collect();
            let mut stack: Vec<Vec<Atom>> = vec![Vec::new()];
            for base in &ctx_bases {
                let mut next = Vec::with_capacity(stack.len() * base.len());
                for prefix in &stack {
                    for a in base {
                        let mut t = prefix.clone();
                        t.push(a.clone());
                        next.push(t);
                    }
                }
                stack = next;
            }
            for ctx in stack {
                slices.entry(ctx).or_default();
            }
        }
        let mut out = BTreeSet::new();
        for (ctx, slice) in slices {
            if a_space.is_total(&slice) {
                let mut t = ctx;
                t.insert(at, wrap(Atom::set(slice), n - 1));
                out.insert(t);
            }
        }
        Ok(out)
    }
}

/// Interpret a checked proof. Every node's denotation is verified total;
/// a violation is a hard fault in the semantic clauses, never expected on
/// checked proofs.
pub fn interpret(p: &Proof, env: &Environment, caps: Caps) -> Result<Denotation, SemError> {
    Interp { env, caps }.node(p, &mut Vec::new())
}

/// One soundness failure: which proof/environment, the offending step if
/// any, and the detail.
#[derive(Debug, Clone)]
pub struct SoundnessFailure {
    pub proof: usize,
    pub env: usize,
    pub step: Option<ReductionStep>,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SoundnessReport {
    pub totality_checks: usize,
    pub step_checks: usize,
    pub failures: Vec<SoundnessFailure>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every proof and environment: the denotation is total, and every
/// reduction step preserves it exactly (conclusions are preserved
/// positionally, so no coordinate permutation is needed).
pub fn soundness_suite(
    corpus: &[(Proof, System)],
    envs: &[Environment],
    caps: Caps,
) -> SoundnessReport {
    let mut report = SoundnessReport::default();
    for (pi, (proof, sys)) in corpus.iter().enumerate() {
        for (ei, env) in envs.iter().enumerate() {
            let mut denote = match interpret(proof, env, caps) {
                Ok(d) => {
                    report.totality_checks += 1;
                    d
                }
                Err(e) => {
                    report.failures.push(SoundnessFailure {
                        proof: pi,
                        env: ei,
                        step: None,
                        detail: e.to_string(),
                    });
                    continue;
                }
            };
            let mut current = proof.clone();
            loop {
                match reduce_step(&current, *sys) {
                    Ok(None) => break,
                    Ok(Some((next, step))) => {
                        match interpret(&next, env, caps) {
                            Ok(d) => {
                                report.step_checks += 1;
                                if d.value != denote.value {
                                    report.failures.push(SoundnessFailure {
                                        proof: pi,
                                        env: ei,
                                        step: Some(step.clone()),
                                        detail: format!(
                                            "denotation changed: {} -> {} tuples",
                                            denote.value.len(),
                                            d.value.len()
                                        ),
                                    });
                                }
                                denote = d;
                            }
                            Err(e) => {
                                report.failures.push(SoundnessFailure {
                                    proof: pi,
                                    env: ei,
                                    step: Some(step.clone()),
                                    detail: e.to_string(),
                                });
                                break;
                            }
                        }
                        current = next;
                    }
                    Err(CutElimError::FuelExhausted { .. }) => unreachable!("no fuel in reduce_step"),
                    Err(e) => {
                        report.failures.push(SoundnessFailure {
                            proof: pi,
                            env: ei,
                            step: None,
                            detail: SemError::Reduction(e.to_string()).to_string(),
                        });
                        break;
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::eta_block;
    use crate::totspace::{delta, epsilon, mon, units, Morphism};

    fn caps() -> Caps {
        Caps::default()
    }

    fn env2() -> Environment {
        Environment::uniform_discrete([0, 1], 2)
    }

    fn p0() -> Formula {
        Formula::pos(0)
    }

    #[test]
    fn eval_connectives() {
        let env = env2();
        let a = eval_formula(&p0(), &env, caps()).unwrap();
        assert_eq!(a, TotSpace::discrete(2));
        let t = eval_formula(&Formula::tensor(p0(), Formula::pos(1)), &env, caps()).unwrap();
        assert_eq!(t.totals.len(), 4);
        let (one, ..) = units();
        let _ = one;
        // dual commutes with eval
        for f in [
            p0(),
            Formula::neg(1),
            Formula::tensor(p0(), Formula::pos(1)),
            Formula::par(p0(), Formula::neg(0)),
            Formula::with(p0(), Formula::pos(1)),
            Formula::plus(p0(), Formula::pos(1)),
            Formula::bang(p0()),
            Formula::whynot(Formula::neg(1)),
            Formula::bang(Formula::with(p0(), Formula::pos(1))),
        ] {
            let lhs = eval_formula(&f.dual(), &env, caps()).unwrap();
            let rhs = eval_formula(&f, &env, caps()).unwrap().dual(caps()).unwrap();
            assert_eq!(lhs, rhs, "dual mismatch on {f}");
        }
    }

    #[test]
    fn monoidality_matches_eval() {
        let env = env2();
        let lhs = eval_formula(
            &Formula::bang(Formula::with(p0(), Formula::pos(1))),
            &env,
            caps(),
        )
        .unwrap();
        let rhs = eval_formula(
            &Formula::tensor(Formula::bang(p0()), Formula::bang(Formula::pos(1))),
            &env,
            caps(),
        )
        .unwrap();
        let iso = mon(&TotSpace::discrete(2), &TotSpace::discrete(2), caps()).unwrap();
        assert_eq!(iso.fwd.source, lhs);
        assert_eq!(iso.fwd.target, rhs);
        assert!(iso.holds(caps()).unwrap());
    }

    #[test]
    fn identity_denotes_diagonal() {
        let env = env2();
        let id = Proof::identity(p0());
        let d = interpret(&id, &env, caps()).unwrap();
        assert_eq!(d.value.len(), 2);
        for t in &d.value {
            assert_eq!(t[0], t[1]);
        }
        assert!(d.is_total(caps()).unwrap());
    }

    #[test]
    fn eta_block_denotes_cototal_diagonal() {
        let env = env2();
        let eta = eta_block(1, 1, p0()).unwrap(); // |- ?p0, !p0^
        let d = interpret(&eta, &env, caps()).unwrap();
        // dis2 has one cototal {x0,x1}; the denotation is its diagonal pair
        let cot = TotSpace::discrete(2).cototals(caps()).unwrap();
        let expected: BTreeSet<Vec<Atom>> = cot
            .iter()
            .map(|t| vec![Atom::set(t.clone()), Atom::set(t.clone())])
            .collect();
        assert_eq!(d.value, expected);
    }

    #[test]
    fn dereliction_matches_epsilon() {
        let env = env2();
        let space = TotSpace::discrete(2);
        // Id(p0) then 1-dereliction at coordinate 1 (the p0^ side)
        let id = Proof::identity(p0());
        let der = Proof::n_dereliction(id, 1, 1).unwrap(); // |- p0, ?p0^
        let d = interpret(&der, &env, caps()).unwrap();
        let rel: BTreeSet<(Atom, Atom)> =
            d.value.iter().map(|t| (t[0].clone(), t[1].clone())).collect();
        let eps = epsilon(&space, caps()).unwrap();
        let converse: BTreeSet<(Atom, Atom)> =
            eps.graph.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        assert_eq!(rel, converse);
    }

    #[test]
    fn block_semantics_reuse_delta() {
        let env = env2();
        let space = TotSpace::discrete(2);
        let one_step = {
            let id = Proof::identity(p0());
            let der = Proof::n_dereliction(id, 1, 1).unwrap();
            interpret(&der, &env, caps()).unwrap()
        };
        let two_step = {
            let id = Proof::identity(p0());
            let der = Proof::n_dereliction(id, 1, 2).unwrap();
            interpret(&der, &env, caps()).unwrap()
        };
        // composing the 1-block relation with δ gives the 2-block relation;
        // the ?-coordinate of |- p0, ??p0^ lives on the dual of dis2, whose
        // dual's δ is δ on dis2 itself
        let d = delta(&space, caps()).unwrap();
        let composed: BTreeSet<Vec<Atom>> = one_step
            .value
            .iter()
            .flat_map(|t| {
                d.graph
                    .iter()
                    .filter(move |(x, _)| *x == t[1])
                    .map(move |(_, y)| vec![t[0].clone(), y.clone()])
            })
            .collect();
        assert_eq!(two_step.value, composed);

        // and the same for promotion blocks via δ on the promoted space
        let prom1 = {
            let id = Proof::identity(Formula::neg(0)); // |- p0^, p0
            let der = Proof::n_dereliction(id, 0, 1).unwrap(); // |- ?p0^, p0
            let prom = Proof::n_promotion(der, 1, 1).unwrap(); // |- ?p0^, !p0
            interpret(&prom, &env, caps()).unwrap()
        };
        let prom2 = {
            let id = Proof::identity(Formula::neg(0));
            let der = Proof::n_dereliction(id, 0, 1).unwrap();
            let prom = Proof::n_promotion(der, 1, 2).unwrap(); // |- ?p0^, !!p0
            interpret(&prom, &env, caps()).unwrap()
        };
        let d = delta(&space, caps()).unwrap();
        let composed: BTreeSet<Vec<Atom>> = prom1
            .value
            .iter()
            .flat_map(|t| {
                d.graph
                    .iter()
                    .filter(move |(x, _)| *x == t[1])
                    .map(move |(_, y)| vec![t[0].clone(), y.clone()])
            })
            .collect();
        assert_eq!(prom2.value, composed);
    }

    #[test]
    fn cut_is_relational_composition() {
        let env = env2();
        let pi1 = eta_block(2, 1, p0()).unwrap(); // |- ??p0, !p0^
        let pi2 = eta_block(1, 2, p0()).unwrap(); // |- ?p0, !!p0^
        let cut = Proof::cut(pi1.clone(), pi2.clone()).unwrap();
        let d1 = interpret(&pi1, &env, caps()).unwrap();
        let d2 = interpret(&pi2, &env, caps()).unwrap();
        let dc = interpret(&cut, &env, caps()).unwrap();
        let composed: BTreeSet<Vec<Atom>> = d1
            .value
            .iter()
            .flat_map(|t1| {
                d2.value
                    .iter()
                    .filter(move |t2| t2[0] == t1[1])
                    .map(move |t2| vec![t1[0].clone(), t2[1].clone()])
            })
            .collect();
        assert_eq!(dc.value, composed);
    }

    #[test]
    fn normalization_preserves_denotation() {
        use crate::cutelim::{default_fuel, normalize};
        for n in [2, 3] {
            let env = Environment::uniform_discrete([0], n);
            let pi1 = eta_block(2, 1, p0()).unwrap();
            let pi2 = eta_block(1, 2, p0()).unwrap();
            for cut in [
                Proof::cut(pi1.clone(), pi2.clone()).unwrap(),
                Proof::cut(pi2.clone(), pi1.clone()).unwrap(),
            ] {
                let before = interpret(&cut, &env, caps()).unwrap();
                let trace = normalize(&cut, System::idll(), default_fuel(&cut)).unwrap();
                let after = interpret(&trace.final_proof, &env, caps()).unwrap();
                assert_eq!(before.value, after.value);
            }
        }
    }

    #[test]
    fn eta_cuts_preserve_denotation_over_every_small_space() {
        // both cut orientations, over every totality space with base <= 3
        use crate::cutelim::{default_fuel, normalize};
        use crate::totspace::enumerate_spaces;
        let pi1 = eta_block(2, 1, p0()).unwrap();
        let pi2 = eta_block(1, 2, p0()).unwrap();
        for space in enumerate_spaces(3, caps()).unwrap() {
            let mut env = Environment::new();
            env.assign(0, space.clone());
            for cut in [
                Proof::cut(pi1.clone(), pi2.clone()).unwrap(),
                Proof::cut(pi2.clone(), pi1.clone()).unwrap(),
            ] {
                let before = interpret(&cut, &env, caps())
                    .unwrap_or_else(|e| panic!("cut over {space}: {e}"));
                let trace = normalize(&cut, System::idll(), default_fuel(&cut)).unwrap();
                let after = interpret(&trace.final_proof, &env, caps()).unwrap();
                assert_eq!(before.value, after.value, "over {space}");
            }
        }
    }

    #[test]
    fn eta_denotations_are_mutually_inverse() {
        // |- ??A, !A^ and |- ?A, !!A^ denote relations over shared bases:
        // |!A^| = |?A| (cototals of A) and |??A| = |!!A^| (their singletons).
        // Their two cut composites must be the identity relations.
        let env = env2();
        let d1 = interpret(&eta_block(2, 1, p0()).unwrap(), &env, caps()).unwrap();
        let d2 = interpret(&eta_block(1, 2, p0()).unwrap(), &env, caps()).unwrap();
        assert_eq!(d1.components[1].base, d2.components[0].base);
        assert_eq!(d1.components[0].base, d2.components[1].base);
        let compose = |r1: &BTreeSet<Vec<Atom>>, r2: &BTreeSet<Vec<Atom>>| -> BTreeSet<(Atom, Atom)> {
            r1.iter()
                .flat_map(|t1| {
                    r2.iter()
                        .filter(move |t2| t2[0] == t1[1])
                        .map(move |t2| (t1[0].clone(), t2[1].clone()))
                })
                .collect()
        };
        let big = compose(&d1.value, &d2.value); // |??A| -> |!!A^|
        for (x, y) in &big {
            assert_eq!(x, y);
        }
        assert_eq!(big.len(), d1.components[0].base.len());
        let small = compose(&d2.value, &d1.value); // |?A| -> |!A^|
        for (x, y) in &small {
            assert_eq!(x, y);
        }
        assert_eq!(small.len(), d2.components[0].base.len());
    }

    #[test]
    fn weakening_spans_base() {
        let env = env2();
        let id = Proof::identity(p0());
        let weak = Proof::weakening(id, 2, Formula::whynot(Formula::pos(1))).unwrap();
        let d = interpret(&weak, &env, caps()).unwrap();
        // one new coordinate ranging over the whole |?p1| base
        let wspace = eval_formula(&Formula::whynot(Formula::pos(1)), &env, caps()).unwrap();
        assert_eq!(d.value.len(), 2 * wspace.base.len());
    }

    #[test]
    fn soundness_suite_smoke() {
        let pi1 = eta_block(2, 1, p0()).unwrap();
        let pi2 = eta_block(1, 2, p0()).unwrap();
        let cut = Proof::cut(pi1, pi2).unwrap();
        let corpus = vec![(cut, System::idll())];
        let envs =
            vec![Environment::uniform_discrete([0], 2), Environment::uniform_discrete([0], 3)];
        let report = soundness_suite(&corpus, &envs, caps());
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(report.step_checks > 0);
    }

    #[test]
    fn epsilon_is_adjunction_counit_shape() {
        // epsilon's graph equals the bwd-adjunct of the identity function
        let a = TotSpace::discrete(2);
        let eps = epsilon(&a, caps()).unwrap();
        let expected: BTreeSet<(Atom, Atom)> = a
            .totals
            .iter()
            .flat_map(|t| t.iter().map(move |x| (Atom::set(t.clone()), x.clone())))
            .collect();
        assert_eq!(eps.graph, expected);
        let _ = Morphism::identity(&a, caps()).unwrap();
    }
}
