//! Deterministic corpus generators for the test suites and the CLI.
//!
//! Everything is driven by a hand-rolled SplitMix64 so that runs are
//! byte-for-byte reproducible across builds and platforms.
//!
//! Proofs generated for the cut-elimination and soundness suites keep
//! formulas small (at most one binary connective, literal indices 0..=2,
//! modal blocks of length at most 2) so that every subformula's totality
//! space stays within the default caps under 2- and 3-element discrete
//! environments.

use crate::bridge::{eta_block, idll_to_ll};
use crate::calculus::{Logic, Proof, System};
use crate::semantics::Environment;
use crate::syntax::{Formula, Sequent};
use crate::totspace::{Atom, AtomSet, Caps, TotSpace, TotalFamily};

/// SplitMix64: tiny, stable, good enough for corpus generation.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn flip(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

fn literal(rng: &mut Rng) -> Formula {
    let i = rng.below(3) as u32;
    if rng.flip() {
        Formula::pos(i)
    } else {
        Formula::neg(i)
    }
}

/// A random formula with at most `budget` connective nodes and modal
/// blocks of length at most 2. Used for round-trip and search corpora.
pub fn random_formula(rng: &mut Rng, budget: usize) -> Formula {
    if budget == 0 {
        return literal(rng);
    }
    match rng.below(7) {
        0 => literal(rng),
        1 => Formula::tensor(random_formula(rng, budget / 2), random_formula(rng, budget / 2)),
        2 => Formula::par(random_formula(rng, budget / 2), random_formula(rng, budget / 2)),
        3 => Formula::with(random_formula(rng, budget / 2), random_formula(rng, budget / 2)),
        4 => Formula::plus(random_formula(rng, budget / 2), random_formula(rng, budget / 2)),
        5 => {
            let body = random_formula(rng, budget.saturating_sub(1));
            if body.modal_prefix().count >= 2 {
                body
            } else {
                Formula::bang(body)
            }
        }
        _ => {
            let body = random_formula(rng, budget.saturating_sub(1));
            if body.modal_prefix().count >= 2 {
                body
            } else {
                Formula::whynot(body)
            }
        }
    }
}

/// Random sequents for the provability-agreement corpus: exponential
/// depth <= 2, at most 8 connectives across at most 3 formulas. Mixes
/// exponential-free sequents (decidable), provable-by-construction shapes
/// and arbitrary ones.
pub fn random_sequents(seed: u64, count: usize) -> Vec<Sequent> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sequent = match out.len() % 3 {
            // exponential-free: strip modalities by regenerating until clean
            0 => loop {
                let f = random_formula(&mut rng, 4);
                let g = random_formula(&mut rng, 3);
                let s = Sequent::new(vec![f, g]);
                if s.formulas.iter().all(|f| f.literals().len() < 9) && is_exponential_free(&s) {
                    break s;
                }
            },
            // provable by construction: |- F^, F or its par
            1 => {
                let f = random_formula(&mut rng, 3);
                if rng.flip() {
                    Sequent::new(vec![f.dual(), f])
                } else {
                    Sequent::new(vec![Formula::par(f.dual(), f)])
                }
            }
            // arbitrary
            _ => {
                let k = 1 + rng.below(3);
                Sequent::new((0..k).map(|_| random_formula(&mut rng, 3)).collect())
            }
        };
        out.push(sequent);
    }
    out
}

fn is_exponential_free(s: &Sequent) -> bool {
    fn clean(f: &Formula) -> bool {
        match f {
            Formula::PosLit(_) | Formula::NegLit(_) => true,
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => clean(a) && clean(b),
            Formula::Bang(_) | Formula::WhyNot(_) => false,
        }
    }
    s.formulas.iter().all(clean)
}

// ---------------------------------------------------------------------
// Proofs with cuts.

/// Grow a checked proof by a few random rule applications. Formulas are
/// kept flat (binary connectives over literals only) so denotations stay
/// within caps.
fn grow(rng: &mut Rng, sys: System, mut p: Proof, steps: usize) -> Proof {
    for _ in 0..steps {
        if p.size() > 30 {
            break;
        }
        let width = p.conclusion.len();
        let next = match rng.below(8) {
            0 if width >= 2 => Proof::exchange(p.clone(), rng.below(width - 1)),
            1 => {
                // par of two adjacent literals, if any
                let spot = (0..width.saturating_sub(1)).find(|&i| {
                    p.conclusion.formulas[i].is_literal() && p.conclusion.formulas[i + 1].is_literal()
                });
                match spot {
                    Some(i) => Proof::par(p.clone(), i),
                    None => continue,
                }
            }
            2 => {
                let spot = (0..width).find(|&i| p.conclusion.formulas[i].is_literal());
                match spot {
                    Some(i) => Proof::plus_left(p.clone(), i, literal(rng)),
                    None => continue,
                }
            }
            3 => Proof::weakening(
                p.clone(),
                rng.below(width + 1),
                Formula::whynot(literal(rng)),
            ),
            4 => {
                // weaken a duplicate next to an existing ?-formula, contract it back
                let spot = (0..width).find(|&i| p.conclusion.formulas[i].is_whynot_headed());
                match spot {
                    Some(i) => {
                        let f = p.conclusion.formulas[i].clone();
                        Proof::weakening(p.clone(), i + 1, f)
                            .and_then(|q| Proof::contraction(q, i))
                    }
                    None => continue,
                }
            }
            5 => {
                // dereliction over literal cores only: ?F of a wide dual
                // blows the bang cap under 3-element environments
                let spot = (0..width).find(|&i| {
                    let f = &p.conclusion.formulas[i];
                    !f.is_whynot_headed()
                        && f.modal_prefix().count < 2
                        && f.modal_prefix().core.is_literal()
                });
                match spot {
                    Some(i) => match sys.logic {
                        Logic::IdLL => Proof::n_dereliction(p.clone(), i, 1 + rng.below(2)),
                        Logic::LL => Proof::dereliction(p.clone(), i),
                    },
                    None => continue,
                }
            }
            6 => {
                // promotion when the context allows it; only over literal
                // cores, since !A of a wide space blows the bang cap
                let spot = (0..width).find(|&i| {
                    let f = &p.conclusion.formulas[i];
                    !f.is_bang_headed()
                        && f.modal_prefix().count < 2
                        && f.modal_prefix().core.is_literal()
                        && (0..width).all(|k| k == i || p.conclusion.formulas[k].is_whynot_headed())
                });
                match spot {
                    Some(i) => match sys.logic {
                        Logic::IdLL => Proof::n_promotion(p.clone(), i, 1 + rng.below(2)),
                        Logic::LL => Proof::promotion(p.clone(), i),
                    },
                    None => continue,
                }
            }
            _ => {
                let spot = (0..width).find(|&i| p.conclusion.formulas[i].is_literal());
                match spot {
                    Some(i) => Proof::with(p.clone(), p.clone(), i),
                    None => continue,
                }
            }
        };
        if let Ok(q) = next {
            p = q;
        }
    }
    p
}

/// Random extra growth, then LL repair when block rules sneaked in.
fn finish(rng: &mut Rng, sys: System, base: Proof) -> Proof {
    let extra_steps = rng.below(4);
    let grown = grow(rng, sys, base, extra_steps);
    if sys.logic == Logic::LL && grown.check(sys).is_err() {
        idll_to_ll(&grown).unwrap()
    } else {
        grown
    }
}

/// A checked proof of `sys` containing at least one Cut. The shapes are
/// chosen to reach every reduction case: principal pairs for each
/// connective, both exponential orientations, and cuts that must commute
/// over every rule.
fn proof_with_cut(rng: &mut Rng, sys: System) -> Proof {
    let core = literal(rng);
    let base = match rng.below(7) {
        // block lemma against block lemma
        0 => {
            let a = 1 + rng.below(2);
            let b = 1 + rng.below(2);
            let d = 1 + rng.below(2);
            let left = eta_block(a, b, core.clone()).unwrap();
            let right = eta_block(b, d, core.clone()).unwrap();
            Proof::cut(left, right).unwrap()
        }
        // promotion against a contraction of the dual block
        1 => {
            let prom = eta_block(1, 1, core.clone()).unwrap(); // |- ?c, !c^
            let id = Proof::identity(core.clone());
            let der = Proof::n_dereliction(id, 0, 1).unwrap(); // |- ?c, c^
            let weak = Proof::weakening(der, 1, Formula::whynot(core.clone())).unwrap();
            let contr = Proof::contraction(weak, 0).unwrap(); // |- ?c, c^
            Proof::cut(prom, contr).unwrap()
        }
        // additive principal pair, in both orientations
        2 => {
            let with_last = || {
                let w = Proof::with(
                    Proof::identity(core.clone()),
                    Proof::identity(core.clone()),
                    0,
                )
                .unwrap(); // |- c & c, c^
                Proof::exchange(w, 0).unwrap() // |- c^, c & c
            };
            let plus_first = |rng: &mut Rng| {
                let id = Proof::identity(core.dual());
                if rng.flip() {
                    Proof::plus_left(id, 0, core.dual()).unwrap()
                } else {
                    Proof::plus_right(id, 0, core.dual()).unwrap()
                } // |- c^ (+) c^, c
            };
            if rng.flip() {
                Proof::cut(with_last(), plus_first(rng)).unwrap()
            } else {
                // plus on the left, with on the right
                let left = Proof::exchange(plus_first(rng), 0).unwrap(); // |- c, c^ (+) c^
                let right = Proof::with(
                    Proof::identity(core.clone()),
                    Proof::identity(core.clone()),
                    0,
                )
                .unwrap(); // |- c & c, c^
                Proof::cut(left, right).unwrap()
            }
        }
        // multiplicative principal pair, in both orientations
        3 => {
            let d = literal(rng);
            let tens_last = || {
                // |- c, d^, c^ * d
                let t = Proof::times(
                    Proof::identity(core.clone()),
                    Proof::identity(d.clone()),
                )
                .unwrap();
                Proof::exchange(t, 1).unwrap()
            };
            if rng.flip() {
                let right = Proof::par(tens_last(), 0).unwrap(); // |- c @ d^, c^ * d
                Proof::cut(tens_last(), right).unwrap()
            } else {
                // par on the left, tensor on the right
                let left = Proof::exchange(Proof::par(tens_last(), 0).unwrap(), 0).unwrap();
                let t = tens_last(); // |- c, d^, c^ * d
                let t = Proof::exchange(t, 1).unwrap(); // |- c, c^ * d, d^
                let right = Proof::exchange(t, 0).unwrap(); // |- c^ * d, c, d^
                Proof::cut(left, right).unwrap()
            }
        }
        // ?-side rule principal on the left, promotion on the right
        4 => {
            let n = 1 + rng.below(2);
            let flipped = Proof::exchange(Proof::identity(core.clone()), 0).unwrap(); // |- c^, c
            let left = match rng.below(3) {
                0 => Proof::n_dereliction(flipped, 1, n).unwrap(), // |- c^, ?ⁿc
                1 => {
                    let der = Proof::n_dereliction(flipped, 1, n).unwrap();
                    let w =
                        Proof::weakening(der, 2, core.clone().whynots(n)).unwrap();
                    Proof::contraction(w, 1).unwrap() // |- c^, ?ⁿc
                }
                _ => Proof::weakening(flipped, 2, core.clone().whynots(n)).unwrap(), // |- c^, c, ?ⁿc
            };
            let a = 1 + rng.below(2);
            let lemma = eta_block(a, n, core.clone()).unwrap(); // |- ?ᵃc, !ⁿc^
            let right = Proof::exchange(lemma, 0).unwrap(); // |- !ⁿc^, ?ᵃc
            Proof::cut(left, right).unwrap()
        }
        // a cut that must commute over the left premise's last rule
        5 => {
            let a = 1 + rng.below(2);
            let b = 1 + rng.below(2);
            let eta = eta_block(a, b, core.clone()).unwrap(); // |- ?ᵃc, !ᵇc^
            let x = Formula::whynot(literal(rng));
            let left = match rng.below(9) {
                0 => Proof::weakening(eta, 0, x).unwrap(),
                8 => {
                    // dereliction beside the cut formula
                    let flipped = Proof::exchange(Proof::identity(core.clone()), 0).unwrap();
                    let w = Proof::weakening(flipped, 2, core.clone().whynots(a)).unwrap();
                    // |- c^, c, ?ᵃc; derelict the c^ at position 0
                    let der = match sys.logic {
                        Logic::IdLL => Proof::n_dereliction(w, 0, 1).unwrap(),
                        Logic::LL => Proof::dereliction(w, 0).unwrap(),
                    };
                    let lemma = eta_block(1 + rng.below(2), a, core.clone()).unwrap();
                    let right = Proof::exchange(lemma, 0).unwrap(); // |- !ᵃc^, ?ʸc
                    return finish(rng, sys, Proof::cut(der, right).unwrap());
                }
                1 => {
                    let dup = core.clone().whynots(a);
                    let w = Proof::weakening(eta, 1, dup).unwrap();
                    Proof::contraction(w, 0).unwrap()
                }
                2 => {
                    // par over two weakened copies
                    let w = Proof::weakening(eta, 0, x.clone()).unwrap();
                    let w2 = Proof::weakening(w, 1, x).unwrap();
                    Proof::par(w2, 0).unwrap() // |- ?x @ ?x, ?ᵃc, !ᵇc^
                }
                3 => {
                    // cut formula inside the right factor of a times
                    let o = literal(rng);
                    Proof::times(Proof::identity(o), eta).unwrap() // |- o, o^ * ?ᵃc, !ᵇc^
                }
                4 => {
                    // cut formula in the left factor's context, moved last
                    let o = literal(rng);
                    let t = Proof::times(eta, Proof::identity(o)).unwrap(); // |- ?ᵃc, !ᵇc^ * o, o^
                    let t = Proof::exchange(t, 1).unwrap(); // |- ?ᵃc, o^, !ᵇc^ * o
                    // rotate so a block formula is final again: cut on ?ᵃc instead
                    let t = Proof::exchange(t, 0).unwrap(); // |- o^, ?ᵃc, !ᵇc^ * o
                    let t = Proof::exchange(t, 1).unwrap(); // |- o^, !ᵇc^ * o, ?ᵃc
                    // right premise must start with !ᵃc^ and be promotion-principal
                    let lemma = eta_block(1 + rng.below(2), a, core.clone()).unwrap();
                    let right = Proof::exchange(lemma, 0).unwrap(); // |- !ᵃc^, ?ʸc
                    return finish(rng, sys, Proof::cut(t, right).unwrap());
                }
                5 => {
                    let w = Proof::weakening(eta, 1, x).unwrap(); // |- ?ᵃc, ?x, !ᵇc^
                    Proof::with(w.clone(), w, 1).unwrap()
                }
                6 => {
                    let w = Proof::weakening(eta, 1, x).unwrap();
                    let o = literal(rng);
                    if rng.flip() {
                        Proof::plus_left(w, 1, o).unwrap()
                    } else {
                        Proof::plus_right(w, 1, o).unwrap()
                    }
                }
                _ => {
                    // the cut formula is the promotion's own ?-context:
                    // |- !ᵇc^, ?ᵃc cut against a promotion of !ᵃc^
                    let flipped = Proof::exchange(eta, 0).unwrap(); // |- !ᵇc^, ?ᵃc
                    let lemma = eta_block(1 + rng.below(2), a, core.clone()).unwrap();
                    let right = Proof::exchange(lemma, 0).unwrap(); // |- !ᵃc^, ?ʸc
                    return finish(rng, sys, Proof::cut(flipped, right).unwrap());
                }
            };
            let d = 1 + rng.below(2);
            let right = eta_block(b, d, core.clone()).unwrap(); // |- ?ᵇc, !ᵈc^
            Proof::cut(left, right).unwrap()
        }
        // a cut that must commute over the right premise's last rule
        _ => {
            let a = 1 + rng.below(2);
            let left = eta_block(a, 1, core.clone()).unwrap(); // |- ?ᵃc, !c^
            let base = eta_block(1, 1, core.clone()).unwrap(); // |- ?c, !c^
            let x = Formula::whynot(literal(rng));
            let right = match rng.below(6) {
                0 => {
                    let w = Proof::weakening(base, 1, x.clone()).unwrap();
                    let w2 = Proof::weakening(w, 2, x).unwrap();
                    Proof::par(w2, 1).unwrap() // |- ?c, ?x @ ?x, !c^
                }
                1 => {
                    let w = Proof::weakening(base, 1, x.clone()).unwrap();
                    let w2 = Proof::weakening(w, 2, x).unwrap();
                    Proof::contraction(w2, 1).unwrap() // |- ?c, ?x, !c^
                }
                2 => {
                    let w = Proof::weakening(base, 1, x.clone()).unwrap();
                    if rng.flip() {
                        Proof::plus_left(w, 1, literal(rng)).unwrap()
                    } else {
                        Proof::plus_right(w, 1, literal(rng)).unwrap()
                    }
                }
                3 => {
                    let w = Proof::weakening(base, 1, x.clone()).unwrap();
                    Proof::with(w.clone(), w, 1).unwrap()
                }
                4 => {
                    let other = literal(rng);
                    Proof::times(base, Proof::identity(other)).unwrap() // |- ?c, !c^ * o, o^
                }
                _ => {
                    let w = Proof::weakening(base, 1, x.clone()).unwrap();
                    match sys.logic {
                        Logic::IdLL => Proof::n_dereliction(w, 2, 1).unwrap(), // |- ?c, ?x, ?!c^
                        Logic::LL => Proof::dereliction(w, 2).unwrap(),
                    }
                }
            };
            Proof::cut(left, right).unwrap()
        }
    };
    finish(rng, sys, base)
}

/// Checked proofs containing Cuts, alternating between the systems.
/// Every proof checks in its system and has at most 40 nodes.
pub fn cut_corpus(seed: u64, count: usize) -> Vec<(Proof, System)> {
    let mut rng = Rng::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let sys = if out.len() % 2 == 0 { System::idll() } else { System::ll() };
        let p = proof_with_cut(&mut rng, sys);
        if p.check(sys).is_ok() && p.contains_cut() && p.size() <= 40 {
            out.push((p, sys));
        }
    }
    out
}

/// The environments of the semantic soundness suite: all literals mapped
/// to discrete 2-element and 3-element spaces.
pub fn semantic_envs() -> Vec<Environment> {
    vec![
        Environment::uniform_discrete(0..3, 2),
        Environment::uniform_discrete(0..3, 3),
    ]
}

// ---------------------------------------------------------------------
// Random totality spaces.

/// A random proper totality space within caps: bidualize a random family
/// over a small base, retry on degenerate outcomes.
pub fn random_space(rng: &mut Rng, max_base: usize, caps: Caps) -> TotSpace {
    loop {
        let n = 1 + rng.below(max_base);
        let base: AtomSet = (0..n).map(|i| Atom::name(format!("a{i}"))).collect();
        let atoms: Vec<Atom> = base.iter().cloned().collect();
        let mut family = TotalFamily::new();
        for _ in 0..1 + rng.below(3) {
            let mut s = AtomSet::new();
            for a in &atoms {
                if rng.flip() {
                    s.insert(a.clone());
                }
            }
            if !s.is_empty() {
                family.insert(s);
            }
        }
        if family.is_empty() {
            continue;
        }
        let space = TotSpace::new(base, family).biclosure(caps).expect("small base");
        if space.is_proper() {
            return space;
        }
    }
}

pub fn random_spaces(seed: u64, count: usize, max_base: usize, caps: Caps) -> Vec<TotSpace> {
    let mut rng = Rng::new(seed);
    (0..count).map(|_| random_space(&mut rng, max_base, caps)).collect()
}

/// Random formulas for the parse/print round-trip gate.
pub fn roundtrip_formulas(seed: u64, count: usize) -> Vec<Formula> {
    let mut rng = Rng::new(seed);
    (0..count).map(|_| random_formula(&mut rng, 6)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutelim::is_cut_free;

    #[test]
    fn rng_is_deterministic() {
        let a: Vec<u64> = {
            let mut r = Rng::new(7);
            (0..5).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = Rng::new(7);
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn cut_corpus_is_checked_and_cutful() {
        let corpus = cut_corpus(42, 20);
        assert_eq!(corpus.len(), 20);
        for (p, sys) in &corpus {
            assert!(p.check(*sys).is_ok());
            assert!(!is_cut_free(p));
            assert!(p.size() <= 40);
        }
    }

    #[test]
    fn sequent_corpus_shapes() {
        let seqs = random_sequents(3, 30);
        assert_eq!(seqs.len(), 30);
        assert!(seqs.iter().any(is_exponential_free));
        for s in &seqs {
            assert!(!s.is_empty());
        }
    }

    #[test]
    fn random_spaces_are_proper_totality_spaces() {
        let caps = Caps::default();
        for s in random_spaces(11, 10, 4, caps) {
            assert!(s.is_proper());
            assert_eq!(s.biclosure(caps).unwrap().totals, s.totals);
        }
    }

    #[test]
    fn roundtrip_formula_corpus() {
        use crate::syntax::parse_formula;
        for f in roundtrip_formulas(5, 100) {
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
