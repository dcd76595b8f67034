//! Translations between LL and IdLL, bounded provability search, and
//! exhaustive cut-free proof enumeration.
//!
//! The two systems prove the same sequents: n-Dereliction and n-Promotion
//! are admissible in LL as iterated Dereliction/Promotion, and LL's
//! single-step rules are emulated in IdLL by cutting with the block lemmas
//! `|- ?ⁿA, !ᵐA^` (built by [`eta_block`]).
//!
//! Enumeration and search work backward over multiset sequents (proofs are
//! counted modulo Exchange) and materialize concrete checkable proofs by
//! inserting Exchange chains. By default the enumeration universe excludes
//! Weakening and Contraction: with them every provable goal has unboundedly
//! many padded cut-free proofs (weaken a ?-formula, contract it back), so
//! no bounded count could ever be exact. `include_structural` restores
//! them; such counts are always flagged as bounded.

use std::collections::HashMap;

use thiserror::Error;

use crate::calculus::{AxiomMode, Logic, Proof, RuleError, RuleTag, System};
use crate::syntax::{Formula, ModalKind, Sequent};

#[derive(Debug, Clone, Error)]
pub enum BridgeError {
    #[error("{0}")]
    Rule(#[from] RuleError),
    #[error("enumeration requires atomic axiom mode")]
    NeedsAtomicAxioms,
    #[error("goal sequent is empty")]
    EmptyGoal,
}

/// The block lemma proof of `|- ?ⁿcore, !ᵐcore^`: Identity, n-Dereliction,
/// m-Promotion. Fails when `core` is ?-headed (side condition).
pub fn eta_block(n: usize, m: usize, core: Formula) -> Result<Proof, RuleError> {
    let id = Proof::identity(core);
    let der = Proof::n_dereliction(id, 0, n)?;
    Proof::n_promotion(der, 1, m)
}

// ---------------------------------------------------------------------
// Proof translations.

/// Replace every n-Dereliction by n Derelictions and every n-Promotion by
/// n Promotions. The conclusion of every node is preserved.
pub fn idll_to_ll(p: &Proof) -> Result<Proof, RuleError> {
    let premises: Vec<Proof> = p.premises.iter().map(idll_to_ll).collect::<Result<_, _>>()?;
    match &p.rule {
        RuleTag::NDereliction { at, n } => {
            let mut t = premises.into_iter().next().expect("unary rule");
            for _ in 0..*n {
                t = Proof::dereliction(t, *at)?;
            }
            Ok(t)
        }
        RuleTag::NPromotion { at, n } => {
            let mut t = premises.into_iter().next().expect("unary rule");
            for _ in 0..*n {
                t = Proof::promotion(t, *at)?;
            }
            Ok(t)
        }
        rule => {
            let q = Proof { rule: rule.clone(), conclusion: p.conclusion.clone(), premises };
            q.validate_node(None)?;
            Ok(q)
        }
    }
}

/// Replace every LL Dereliction/Promotion by the IdLL counterpart. Steps
/// that stack a modality onto an already-modal formula are emulated by
/// cutting with an [`eta_block`] lemma, so the output may contain Cuts;
/// normalize afterwards if a cut-free proof is wanted.
pub fn ll_to_idll(p: &Proof) -> Result<Proof, RuleError> {
    let premises: Vec<Proof> = p.premises.iter().map(ll_to_idll).collect::<Result<_, _>>()?;
    match &p.rule {
        RuleTag::Dereliction { at } => {
            let t = premises.into_iter().next().expect("unary rule");
            let a = t.conclusion.formulas[*at].clone();
            let mp = a.modal_prefix();
            if mp.kind != Some(ModalKind::WhyNot) {
                return Proof::n_dereliction(t, *at, 1);
            }
            // A = ?ᵏA' with A' not ?-headed; cut with |- !ᵏA'^, ?ᵏ⁺¹A'
            let k = mp.count;
            let core = mp.core.clone();
            let lemma = eta_block(k + 1, k, core)?;
            let lemma = Proof::exchange(lemma, 0)?; // |- !ᵏA'^, ?ᵏ⁺¹A'
            emulate_cut(t, *at, lemma)
        }
        RuleTag::Promotion { at } => {
            let t = premises.into_iter().next().expect("unary rule");
            let a = t.conclusion.formulas[*at].clone();
            let mp = a.modal_prefix();
            if mp.kind != Some(ModalKind::Bang) {
                return Proof::n_promotion(t, *at, 1);
            }
            // A = !ᵏA' with A' not !-headed; cut with |- ?ᵏA'^, !ᵏ⁺¹A'
            let k = mp.count;
            let core = mp.core.dual();
            let lemma = eta_block(k, k + 1, core)?;
            emulate_cut(t, *at, lemma)
        }
        rule => {
            let q = Proof { rule: rule.clone(), conclusion: p.conclusion.clone(), premises };
            q.validate_node(None)?;
            Ok(q)
        }
    }
}

/// Cut the formula at position `at` of `t` against a lemma whose initial
/// formula is its dual, then move the lemma's result back to `at`.
fn emulate_cut(t: Proof, at: usize, lemma: Proof) -> Result<Proof, RuleError> {
    let n = t.conclusion.len();
    let to_back: Vec<usize> = (0..n).filter(|&r| r != at).chain([at]).collect();
    let cut = Proof::cut(t.permute(&to_back)?, lemma)?;
    // conclusion: (Γ \ at) ++ [result]; put the result back at `at`
    let m = cut.conclusion.len();
    let restore: Vec<usize> =
        (0..at).chain([m - 1]).chain(at..m - 1).collect();
    cut.permute(&restore)
}

// ---------------------------------------------------------------------
// Backward rule instances over multiset sequents.

/// A sequent as a sorted multiset.
type Multi = Vec<Formula>;

fn sorted(mut v: Vec<Formula>) -> Multi {
    v.sort();
    v
}

fn remove_one(ms: &[Formula], f: &Formula) -> Multi {
    let mut v = ms.to_vec();
    let i = v.iter().position(|g| g == f).expect("present");
    v.remove(i);
    v
}

/// One backward rule instance applicable to a multiset goal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Instance {
    Identity { formula: Formula },
    Times { tensor: Formula, left_ctx: Multi, right_ctx: Multi },
    Par { par: Formula },
    With { with: Formula },
    PlusLeft { plus: Formula },
    PlusRight { plus: Formula },
    NDer { formula: Formula },
    NProm { formula: Formula },
    Der { formula: Formula },
    Prom { formula: Formula },
    Weak { formula: Formula },
    Contr { formula: Formula },
}

impl Instance {
    fn premises(&self, goal: &[Formula]) -> Vec<Multi> {
        match self {
            Instance::Identity { .. } => vec![],
            Instance::Times { tensor, left_ctx, right_ctx } => {
                let Formula::Tensor(x, y) = tensor else { unreachable!() };
                let mut l = left_ctx.clone();
                l.push((**x).clone());
                let mut r = right_ctx.clone();
                r.push((**y).clone());
                vec![sorted(l), sorted(r)]
            }
            Instance::Par { par } => {
                let Formula::Par(x, y) = par else { unreachable!() };
                let mut m = remove_one(goal, par);
                m.push((**x).clone());
                m.push((**y).clone());
                vec![sorted(m)]
            }
            Instance::With { with } => {
                let Formula::With(x, y) = with else { unreachable!() };
                let rest = remove_one(goal, with);
                let mut l = rest.clone();
                l.push((**x).clone());
                let mut r = rest;
                r.push((**y).clone());
                vec![sorted(l), sorted(r)]
            }
            Instance::PlusLeft { plus } => {
                let Formula::Plus(x, _) = plus else { unreachable!() };
                let mut m = remove_one(goal, plus);
                m.push((**x).clone());
                vec![sorted(m)]
            }
            Instance::PlusRight { plus } => {
                let Formula::Plus(_, y) = plus else { unreachable!() };
                let mut m = remove_one(goal, plus);
                m.push((**y).clone());
                vec![sorted(m)]
            }
            Instance::NDer { formula } | Instance::NProm { formula } => {
                let mut m = remove_one(goal, formula);
                m.push(formula.modal_prefix().core.clone());
                vec![sorted(m)]
            }
            Instance::Der { formula } => {
                let Formula::WhyNot(x) = formula else { unreachable!() };
                let mut m = remove_one(goal, formula);
                m.push((**x).clone());
                vec![sorted(m)]
            }
            Instance::Prom { formula } => {
                let Formula::Bang(x) = formula else { unreachable!() };
                let mut m = remove_one(goal, formula);
                m.push((**x).clone());
                vec![sorted(m)]
            }
            Instance::Weak { formula } => vec![sorted(remove_one(goal, formula))],
            Instance::Contr { formula } => {
                let mut m = goal.to_vec();
                m.push(formula.clone());
                vec![sorted(m)]
            }
        }
    }

    /// Assemble the concrete proof from premise proofs (which conclude
    /// their sorted premise multisets); the result concludes `sorted(goal)`.
    fn materialize(&self, goal: &[Formula], subs: Vec<Proof>) -> Result<Proof, RuleError> {
        let goal_seq = Sequent::new(goal.to_vec());
        let built = match self {
            Instance::Identity { formula } => Proof::identity(formula.clone()),
            Instance::Times { tensor, left_ctx, right_ctx } => {
                let Formula::Tensor(x, y) = tensor else { unreachable!() };
                let mut it = subs.into_iter();
                let (l, r) = (it.next().unwrap(), it.next().unwrap());
                let mut lt = left_ctx.clone();
                lt.push((**x).clone());
                let mut rt = vec![(**y).clone()];
                rt.extend(right_ctx.iter().cloned());
                Proof::times(l.reorder(&Sequent::new(lt))?, r.reorder(&Sequent::new(rt))?)?
            }
            Instance::Par { par } => {
                let Formula::Par(x, y) = par else { unreachable!() };
                let p = subs.into_iter().next().unwrap();
                let mut t = remove_one(goal, par);
                let at = t.len();
                t.push((**x).clone());
                t.push((**y).clone());
                Proof::par(p.reorder(&Sequent::new(t))?, at)?
            }
            Instance::With { with } => {
                let Formula::With(x, y) = with else { unreachable!() };
                let mut it = subs.into_iter();
                let (l, r) = (it.next().unwrap(), it.next().unwrap());
                let rest = remove_one(goal, with);
                let at = rest.len();
                let mut lt = rest.clone();
                lt.push((**x).clone());
                let mut rt = rest;
                rt.push((**y).clone());
                Proof::with(l.reorder(&Sequent::new(lt))?, r.reorder(&Sequent::new(rt))?, at)?
            }
            Instance::PlusLeft { plus } => {
                let Formula::Plus(x, y) = plus else { unreachable!() };
                let p = subs.into_iter().next().unwrap();
                let mut t = remove_one(goal, plus);
                let at = t.len();
                t.push((**x).clone());
                Proof::plus_left(p.reorder(&Sequent::new(t))?, at, (**y).clone())?
            }
            Instance::PlusRight { plus } => {
                let Formula::Plus(x, y) = plus else { unreachable!() };
                let p = subs.into_iter().next().unwrap();
                let mut t = remove_one(goal, plus);
                let at = t.len();
                t.push((**y).clone());
                Proof::plus_right(p.reorder(&Sequent::new(t))?, at, (**x).clone())?
            }
            Instance::NDer { formula } => {
                let p = subs.into_iter().next().unwrap();
                let mp = formula.modal_prefix();
                let mut t = remove_one(goal, formula);
                let at = t.len();
                t.push(mp.core.clone());
                Proof::n_dereliction(p.reorder(&Sequent::new(t))?, at, mp.count)?
            }
            Instance::NProm { formula } => {
                let p = subs.into_iter().next().unwrap();
                let mp = formula.modal_prefix();
                let mut t = remove_one(goal, formula);
                let at = t.len();
                t.push(mp.core.clone());
                Proof::n_promotion(p.reorder(&Sequent::new(t))?, at, mp.count)?
            }
            Instance::Der { formula } => {
                let Formula::WhyNot(x) = formula else { unreachable!() };
                let p = subs.into_iter().next().unwrap();
                let mut t = remove_one(goal, formula);
                let at = t.len();
                t.push((**x).clone());
                Proof::dereliction(p.reorder(&Sequent::new(t))?, at)?
            }
            Instance::Prom { formula } => {
                let Formula::Bang(x) = formula else { unreachable!() };
                let p = subs.into_iter().next().unwrap();
                let mut t = remove_one(goal, formula);
                let at = t.len();
                t.push((**x).clone());
                Proof::promotion(p.reorder(&Sequent::new(t))?, at)?
            }
            Instance::Weak { formula } => {
                let p = subs.into_iter().next().unwrap();
                let at = p.conclusion.len();
                Proof::weakening(p, at, formula.clone())?
            }
            Instance::Contr { formula } => {
                let p = subs.into_iter().next().unwrap();
                let rest = remove_one(goal, formula);
                let at = rest.len();
                let mut t = rest;
                t.push(formula.clone());
                t.push(formula.clone());
                Proof::contraction(p.reorder(&Sequent::new(t))?, at)?
            }
        };
        built.reorder(&goal_seq)
    }
}

/// All multiset splits `(left, right)` of `rest`.
fn splits(rest: &[Formula]) -> Vec<(Multi, Multi)> {
    // group equal formulas, distribute each multiplicity
    let mut groups: Vec<(Formula, usize)> = Vec::new();
    for f in rest {
        match groups.last_mut() {
            Some((g, n)) if g == f => *n += 1,
            _ => groups.push((f.clone(), 1)),
        }
    }
    let mut out: Vec<(Multi, Multi)> = vec![(Vec::new(), Vec::new())];
    for (f, n) in groups {
        let mut next = Vec::with_capacity(out.len() * (n + 1));
        for (l, r) in &out {
            for k in 0..=n {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.extend(std::iter::repeat_n(f.clone(), k));
                r2.extend(std::iter::repeat_n(f.clone(), n - k));
                next.push((l2, r2));
            }
        }
        out = next;
    }
    out
}

fn distinct(ms: &[Formula]) -> Vec<&Formula> {
    let mut out: Vec<&Formula> = Vec::new();
    for f in ms {
        if out.last() != Some(&f) {
            out.push(f);
        }
    }
    out
}

/// Backward instances applicable to a sorted multiset goal.
fn instances(goal: &[Formula], sys: System, structural: bool) -> Vec<Instance> {
    let mut out = Vec::new();
    if goal.len() == 2 && goal[1] == goal[0].dual() {
        let ok = match sys.axiom_mode {
            AxiomMode::Atomic => goal[0].is_literal(),
            AxiomMode::General => true,
        };
        if ok {
            out.push(Instance::Identity { formula: goal[0].clone() });
        }
    }
    for f in distinct(goal) {
        match f {
            Formula::Tensor(..) => {
                let rest = remove_one(goal, f);
                for (l, r) in splits(&rest) {
                    out.push(Instance::Times {
                        tensor: f.clone(),
                        left_ctx: sorted(l),
                        right_ctx: sorted(r),
                    });
                }
            }
            Formula::Par(..) => out.push(Instance::Par { par: f.clone() }),
            Formula::With(..) => out.push(Instance::With { with: f.clone() }),
            Formula::Plus(..) => {
                out.push(Instance::PlusLeft { plus: f.clone() });
                out.push(Instance::PlusRight { plus: f.clone() });
            }
            Formula::WhyNot(..) => {
                match sys.logic {
                    Logic::IdLL => out.push(Instance::NDer { formula: f.clone() }),
                    Logic::LL => out.push(Instance::Der { formula: f.clone() }),
                }
                if structural {
                    out.push(Instance::Weak { formula: f.clone() });
                    out.push(Instance::Contr { formula: f.clone() });
                }
            }
            Formula::Bang(..) => {
                let rest = remove_one(goal, f);
                if rest.iter().all(Formula::is_whynot_headed) {
                    match sys.logic {
                        Logic::IdLL => out.push(Instance::NProm { formula: f.clone() }),
                        Logic::LL => out.push(Instance::Prom { formula: f.clone() }),
                    }
                }
            }
            Formula::PosLit(_) | Formula::NegLit(_) => {}
        }
    }
    out
}

// ---------------------------------------------------------------------
// Exhaustive enumeration.

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub max_nodes: usize,
    /// Include Weakening and Contraction in the backward universe.
    pub include_structural: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { max_nodes: 64, include_structural: false }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub proofs: Vec<Proof>,
    /// True when no part of the search was pruned by the node budget: the
    /// list is the complete count for the rule universe used.
    pub exact: bool,
}

struct Enumerator {
    sys: System,
    structural: bool,
    memo: HashMap<(Multi, usize), (Vec<Proof>, bool)>,
}

impl Enumerator {
    /// All proofs of `goal` (sorted) with at most `budget` non-Exchange
    /// nodes, plus a flag telling whether the budget cut anything off.
    fn run(&mut self, goal: &Multi, budget: usize) -> Result<(Vec<Proof>, bool), RuleError> {
        if budget == 0 {
            return Ok((Vec::new(), true));
        }
        if let Some(hit) = self.memo.get(&(goal.clone(), budget)) {
            return Ok(hit.clone());
        }
        let mut proofs: Vec<Proof> = Vec::new();
        let mut truncated = false;
        for inst in instances(goal, self.sys, self.structural) {
            let premises = inst.premises(goal);
            match premises.len() {
                0 => proofs.push(inst.materialize(goal, vec![])?),
                1 => {
                    let (subs, t) = self.run(&premises[0], budget - 1)?;
                    truncated |= t;
                    for s in subs {
                        proofs.push(inst.materialize(goal, vec![s])?);
                    }
                }
                2 => {
                    if budget < 3 {
                        truncated = true;
                        continue;
                    }
                    let (ls, t) = self.run(&premises[0], budget - 2)?;
                    truncated |= t;
                    for l in ls {
                        let rem = budget - 1 - l.size_modulo_exchange();
                        let (rs, t2) = self.run(&premises[1], rem)?;
                        truncated |= t2;
                        for r in rs {
                            proofs.push(inst.materialize(goal, vec![l.clone(), r])?);
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
        proofs.sort();
        proofs.dedup();
        self.memo.insert((goal.clone(), budget), (proofs.clone(), truncated));
        Ok((proofs, truncated))
    }
}

/// The complete list of cut-free proofs of `goal` with at most
/// `max_nodes` nodes (counted modulo Exchange), enumerated backward over
/// multiset sequents. Requires atomic axiom mode.
pub fn enumerate_cutfree(
    goal: &Sequent,
    sys: System,
    opts: &EnumOptions,
) -> Result<Enumeration, BridgeError> {
    if goal.is_empty() {
        return Err(BridgeError::EmptyGoal);
    }
    if sys.axiom_mode != AxiomMode::Atomic {
        return Err(BridgeError::NeedsAtomicAxioms);
    }
    let ms = sorted(goal.formulas.clone());
    let mut e = Enumerator { sys, structural: opts.include_structural, memo: HashMap::new() };
    let (proofs, truncated) = e.run(&ms, opts.max_nodes)?;
    let proofs = proofs
        .into_iter()
        .map(|p| p.reorder(goal).map_err(BridgeError::from))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Enumeration { proofs, exact: !truncated })
}

// ---------------------------------------------------------------------
// Bounded provability search.

#[derive(Debug, Clone)]
pub struct SearchBounds {
    pub depth: usize,
    pub contraction_per_formula: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { depth: 12, contraction_per_formula: 2 }
    }
}

#[derive(Debug, Clone)]
pub enum Provability {
    Yes(Box<Proof>),
    No,
    Unknown,
}

impl Provability {
    pub fn verdict(&self) -> &'static str {
        match self {
            Provability::Yes(_) => "yes",
            Provability::No => "no",
            Provability::Unknown => "unknown",
        }
    }
}

struct Searcher {
    sys: System,
    bounds: SearchBounds,
    /// True while no branch has been pruned by depth or contraction budget.
    complete: bool,
    /// States already exhausted without a proof, keyed by goal, depth and
    /// contraction usage snapshot; the value tells whether the subtree was
    /// explored completely.
    failed: HashMap<SearchKey, bool>,
}

type SearchKey = (Multi, usize, Vec<(Formula, usize)>);

fn rank(inst: &Instance) -> u8 {
    // invertible and closing rules first, blow-ups last
    match inst {
        Instance::Identity { .. } => 0,
        Instance::Par { .. } => 1,
        Instance::NDer { .. } | Instance::Der { .. } => 2,
        Instance::With { .. } => 3,
        Instance::NProm { .. } | Instance::Prom { .. } => 4,
        Instance::PlusLeft { .. } | Instance::PlusRight { .. } => 5,
        Instance::Times { .. } => 6,
        Instance::Weak { .. } => 7,
        Instance::Contr { .. } => 8,
    }
}

impl Searcher {
    fn dfs(
        &mut self,
        goal: &Multi,
        depth: usize,
        contr: &mut HashMap<Formula, usize>,
    ) -> Result<Option<Proof>, RuleError> {
        if depth == 0 {
            self.complete = false;
            return Ok(None);
        }
        let mut snapshot: Vec<(Formula, usize)> =
            contr.iter().filter(|(_, &u)| u > 0).map(|(f, &u)| (f.clone(), u)).collect();
        snapshot.sort();
        let key = (goal.clone(), depth, snapshot);
        if let Some(&was_complete) = self.failed.get(&key) {
            if !was_complete {
                self.complete = false;
            }
            return Ok(None);
        }
        let complete_before = self.complete;
        self.complete = true;
        let mut insts = instances(goal, self.sys, true);
        insts.sort_by_key(rank);
        for inst in insts {
            if let Instance::Contr { formula } = &inst {
                let used = contr.get(formula).copied().unwrap_or(0);
                if used >= self.bounds.contraction_per_formula {
                    self.complete = false;
                    continue;
                }
                contr.insert(formula.clone(), used + 1);
                let found = self.search_premises(&inst, goal, depth, contr)?;
                *contr.get_mut(formula).unwrap() -= 1;
                if found.is_some() {
                    self.complete &= complete_before;
                    return Ok(found);
                }
            } else if let Some(found) = self.search_premises(&inst, goal, depth, contr)? {
                self.complete &= complete_before;
                return Ok(Some(found));
            }
        }
        self.failed.insert(key, self.complete);
        self.complete &= complete_before;
        Ok(None)
    }

    fn search_premises(
        &mut self,
        inst: &Instance,
        goal: &Multi,
        depth: usize,
        contr: &mut HashMap<Formula, usize>,
    ) -> Result<Option<Proof>, RuleError> {
        let mut subs = Vec::new();
        for premise in inst.premises(goal) {
            match self.dfs(&premise, depth - 1, contr)? {
                Some(p) => subs.push(p),
                None => return Ok(None),
            }
        }
        Ok(Some(inst.materialize(goal, subs)?))
    }
}

/// Backward bounded search. `Yes` carries a checkable witness; `No` is
/// returned only when the whole search space was exhausted without hitting
/// any bound (always the case for exponential-free goals); `Unknown`
/// otherwise.
pub fn provable(goal: &Sequent, sys: System, bounds: &SearchBounds) -> Result<Provability, BridgeError> {
    if goal.is_empty() {
        return Err(BridgeError::EmptyGoal);
    }
    let ms = sorted(goal.formulas.clone());
    let mut s =
        Searcher { sys, bounds: bounds.clone(), complete: true, failed: HashMap::new() };
    let found = s.dfs(&ms, bounds.depth, &mut HashMap::new())?;
    match found {
        Some(p) => Ok(Provability::Yes(Box::new(p.reorder(goal)?))),
        None if s.complete => Ok(Provability::No),
        None => Ok(Provability::Unknown),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::canonicalize;
    use crate::cutelim::{default_fuel, is_cut_free, normalize};
    use crate::syntax::{parse_formula, parse_sequent};

    fn p0() -> Formula {
        Formula::pos(0)
    }

    #[test]
    fn eta_block_examples() {
        let pi1 = eta_block(2, 1, p0()).unwrap();
        assert_eq!(pi1.conclusion, parse_sequent("|- ??p0, !p0^").unwrap());
        assert!(pi1.check(System::idll()).is_ok());

        let pi2 = eta_block(1, 2, p0()).unwrap();
        assert_eq!(pi2.conclusion, parse_sequent("|- ?p0, !!p0^").unwrap());

        let unit = eta_block(1, 1, p0()).unwrap();
        assert_eq!(unit.conclusion, parse_sequent("|- ?p0, !p0^").unwrap());

        // ?-headed cores are rejected
        assert!(eta_block(1, 1, Formula::whynot(p0())).is_err());
        // !-headed cores are fine
        assert!(eta_block(1, 2, Formula::bang(p0())).is_ok());
    }

    #[test]
    fn idll_to_ll_on_pi1() {
        let pi1 = eta_block(2, 1, p0()).unwrap();
        let ll = idll_to_ll(&pi1).unwrap();
        assert_eq!(ll.conclusion, pi1.conclusion);
        assert!(ll.check(System::ll()).is_ok());
        // two derelictions and one promotion
        let mut ders = 0;
        let mut proms = 0;
        fn walk(p: &Proof, ders: &mut usize, proms: &mut usize) {
            match p.rule {
                RuleTag::Dereliction { .. } => *ders += 1,
                RuleTag::Promotion { .. } => *proms += 1,
                _ => {}
            }
            for q in &p.premises {
                walk(q, ders, proms);
            }
        }
        walk(&ll, &mut ders, &mut proms);
        assert_eq!((ders, proms), (2, 1));
    }

    #[test]
    fn idll_to_ll_identity_unchanged() {
        let id = Proof::identity(p0());
        assert_eq!(idll_to_ll(&id).unwrap(), id);
    }

    #[test]
    fn ll_to_idll_single_steps_direct() {
        // Der;Prom proof of |- ?p0^, !p0 maps without cuts
        let id = Proof::identity(Formula::neg(0));
        let der = Proof::dereliction(id, 0).unwrap();
        let prom = Proof::promotion(der, 1).unwrap();
        assert_eq!(prom.conclusion, parse_sequent("|- ?p0^, !p0").unwrap());
        assert!(prom.check(System::ll()).is_ok());

        let idll = ll_to_idll(&prom).unwrap();
        assert_eq!(idll.conclusion, prom.conclusion);
        assert!(idll.check(System::idll()).is_ok());
        assert!(is_cut_free(&idll));
    }

    #[test]
    fn ll_to_idll_stacked_modalities_via_lemmas() {
        // D,D,P,P proof of |- ??p0^, !!p0
        let id = Proof::identity(Formula::neg(0));
        let d1 = Proof::dereliction(id, 0).unwrap();
        let d2 = Proof::dereliction(d1, 0).unwrap();
        let pr1 = Proof::promotion(d2, 1).unwrap();
        let pr2 = Proof::promotion(pr1, 1).unwrap();
        assert_eq!(pr2.conclusion, parse_sequent("|- ??p0^, !!p0").unwrap());
        assert!(pr2.check(System::ll()).is_ok());

        let idll = ll_to_idll(&pr2).unwrap();
        assert_eq!(idll.conclusion, pr2.conclusion);
        assert!(idll.check(System::idll()).is_ok());
        assert!(idll.contains_cut());

        // after normalization it is the 2-Der;2-Prom block proof
        let trace = normalize(&idll, System::idll(), default_fuel(&idll)).unwrap();
        let expect = {
            let id = Proof::identity(Formula::neg(0));
            let der = Proof::n_dereliction(id, 0, 2).unwrap();
            Proof::n_promotion(der, 1, 2).unwrap()
        };
        assert_eq!(canonicalize(&trace.final_proof), canonicalize(&expect));
    }

    #[test]
    fn enumerate_family_counts() {
        let opts = EnumOptions::default();
        let goal = parse_sequent("|- ??p0^, !!p0").unwrap();

        let idll = enumerate_cutfree(&goal, System::idll().atomic(), &opts).unwrap();
        assert!(idll.exact);
        assert_eq!(idll.proofs.len(), 1);

        let ll = enumerate_cutfree(&goal, System::ll().atomic(), &opts).unwrap();
        assert!(ll.exact);
        assert_eq!(ll.proofs.len(), 3);

        for p in idll.proofs.iter() {
            assert!(p.check(System::idll().atomic()).is_ok());
            assert_eq!(p.conclusion, goal);
        }
        for p in ll.proofs.iter() {
            assert!(p.check(System::ll().atomic()).is_ok());
        }
    }

    #[test]
    fn enumerate_atomic_identity() {
        let goal = parse_sequent("|- p0, p0^").unwrap();
        for sys in [System::ll().atomic(), System::idll().atomic()] {
            let e = enumerate_cutfree(&goal, sys, &EnumOptions::default()).unwrap();
            assert_eq!(e.proofs.len(), 1);
            assert!(e.exact);
        }
    }

    #[test]
    fn enumerate_monotone_in_budget() {
        let goal = parse_sequent("|- ??p0^, !!p0").unwrap();
        let small = enumerate_cutfree(
            &goal,
            System::ll().atomic(),
            &EnumOptions { max_nodes: 5, include_structural: false },
        )
        .unwrap();
        let big = enumerate_cutfree(
            &goal,
            System::ll().atomic(),
            &EnumOptions { max_nodes: 64, include_structural: false },
        )
        .unwrap();
        assert!(small.proofs.len() <= big.proofs.len());
        for p in &small.proofs {
            assert!(big.proofs.contains(p));
        }
    }

    #[test]
    fn enumerate_structural_padding_is_bounded() {
        // with Weakening/Contraction the count cannot be exact and exceeds 1
        let goal = parse_sequent("|- ?p0^, !p0").unwrap();
        let e = enumerate_cutfree(
            &goal,
            System::idll().atomic(),
            &EnumOptions { max_nodes: 10, include_structural: true },
        )
        .unwrap();
        assert!(!e.exact);
        assert!(e.proofs.len() > 1, "padded proofs: {}", e.proofs.len());
        for p in &e.proofs {
            assert!(p.check(System::idll().atomic()).is_ok());
        }
    }

    #[test]
    fn enumerate_requires_atomic() {
        let goal = parse_sequent("|- p0, p0^").unwrap();
        assert!(matches!(
            enumerate_cutfree(&goal, System::idll(), &EnumOptions::default()),
            Err(BridgeError::NeedsAtomicAxioms)
        ));
    }

    #[test]
    fn provable_examples() {
        let bounds = SearchBounds::default();
        // eta of axiom
        let g = Sequent::new(vec![parse_formula("p0 @ p0^").unwrap()]);
        for sys in [System::ll().atomic(), System::idll().atomic()] {
            match provable(&g, sys, &bounds).unwrap() {
                Provability::Yes(p) => {
                    assert!(p.check(sys).is_ok());
                    assert_eq!(p.conclusion, g);
                }
                other => panic!("expected yes, got {}", other.verdict()),
            }
        }
        // tensor of two p0: unprovable, exponential-free, decided
        let g = Sequent::new(vec![parse_formula("p0 * p0").unwrap()]);
        for sys in [System::ll().atomic(), System::idll().atomic()] {
            assert!(matches!(provable(&g, sys, &bounds).unwrap(), Provability::No));
        }
        // theorem-1 agreement witness
        let g = parse_sequent("|- ?p0^, !p0").unwrap();
        for sys in [System::ll().atomic(), System::idll().atomic()] {
            assert!(matches!(provable(&g, sys, &bounds).unwrap(), Provability::Yes(_)));
        }
    }
}
