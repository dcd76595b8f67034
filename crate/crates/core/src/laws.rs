//! Executable law bundles over totality spaces: the structural identities
//! the model promises, run exhaustively with counterexample reporting.
//!
//! Laws whose statement presupposes proper spaces (tensor biclosure and
//! the tensor cardinality) or caps (monoidality needs `!` of the product)
//! are skipped, not failed, outside their scope.

use std::collections::BTreeMap;
use std::fmt;

use crate::totspace::{
    adj_bwd, adj_fwd, bang, bang_fn, bang_top_iso, delta, dis, epsilon, mon, par, plus,
    plus_direct, tensor, units, with, yon, Atom, AtomSet, Caps, FinSet, Iso, Morphism, SpaceError,
    TotSpace,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawOutcome {
    Pass,
    Fail { witness: String },
    Skipped { reason: String },
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub name: String,
    pub outcome: LawOutcome,
}

impl LawReport {
    pub fn failed(&self) -> bool {
        matches!(self.outcome, LawOutcome::Fail { .. })
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            LawOutcome::Pass => write!(out, "{}: pass", self.name),
            LawOutcome::Fail { witness } => write!(out, "{}: FAIL ({witness})", self.name),
            LawOutcome::Skipped { reason } => write!(out, "{}: skipped ({reason})", self.name),
        }
    }
}

fn report(name: impl Into<String>, result: Result<Option<String>, SpaceError>) -> LawReport {
    let name = name.into();
    match result {
        Ok(None) => LawReport { name, outcome: LawOutcome::Pass },
        Ok(Some(witness)) => LawReport { name, outcome: LawOutcome::Fail { witness } },
        Err(SpaceError::CapExceeded { what, size, cap }) => LawReport {
            name,
            outcome: LawOutcome::Skipped { reason: format!("{what}: {size} > {cap}") },
        },
        Err(e) => LawReport { name, outcome: LawOutcome::Fail { witness: e.to_string() } },
    }
}

fn check(cond: bool, witness: impl FnOnce() -> String) -> Option<String> {
    if cond {
        None
    } else {
        Some(witness())
    }
}

/// Proper and covered, with covered dual. Closed under every connective,
/// self-dual, and home to all spaces built from nonempty discrete literal
/// assignments.
pub fn regular(a: &TotSpace, caps: Caps) -> Result<bool, SpaceError> {
    Ok(a.is_proper() && a.is_covered() && a.dual(caps)?.is_covered())
}

/// Laws of a single space: involution, comonad equations, δ isomorphism,
/// idempotence of `!`, and `! = dis ∘ yon`.
pub fn space_laws(a: &TotSpace, caps: Caps) -> Vec<LawReport> {
    let mut out = Vec::new();
    out.push(report("involution", (|| {
        let dd = a.dual(caps)?.dual(caps)?;
        Ok(check(dd == *a, || format!("bidual has {} totals, space {}", dd.totals.len(), a.totals.len())))
    })()));
    out.push(report("bang-is-dis-yon", (|| {
        let ba = bang(a, caps)?;
        Ok(check(ba == dis(&yon(a)), || "bang differs from dis(yon)".to_string()))
    })()));
    out.push(report("counit", (|| {
        let d = delta(a, caps)?;
        let e = epsilon(&bang(a, caps)?, caps)?;
        Ok(check(d.compose(&e, caps)?.is_identity(), || "ε_{!A} ∘ δ ≠ id".to_string()))
    })()));
    out.push(report("bang-counit", (|| {
        let d = delta(a, caps)?;
        let be = bang_fn(&epsilon(a, caps)?, caps)?;
        Ok(check(d.compose(&be, caps)?.is_identity(), || "!ε ∘ δ ≠ id".to_string()))
    })()));
    out.push(report("coassociativity", (|| {
        let d = delta(a, caps)?;
        let bd = bang_fn(&d, caps)?;
        let d_ba = delta(&bang(a, caps)?, caps)?;
        let lhs = d.compose(&bd, caps)?;
        let rhs = d.compose(&d_ba, caps)?;
        Ok(check(lhs == rhs, || "!δ ∘ δ ≠ δ_{!A} ∘ δ".to_string()))
    })()));
    out.push(report("delta-iso", (|| {
        let d = delta(a, caps)?;
        let inv = d.converse(caps)?;
        Ok(check(Iso { fwd: d, bwd: inv }.holds(caps)?, || "δ has no two-sided inverse".to_string()))
    })()));
    out.push(report("bang-idempotent", (|| {
        // !A ≅ !!A via δ, plus the base-level cardinality agreement
        let ba = bang(a, caps)?;
        let bba = bang(&ba, caps)?;
        Ok(check(ba.base.len() == bba.base.len(), || {
            format!("base sizes {} vs {}", ba.base.len(), bba.base.len())
        }))
    })()));
    out
}

/// Laws of a pair: De Morgan for both pairs of connectives, the tensor and
/// product cardinalities, `(A&B)^ = A^ ⊕ B^`, tensor biclosure, and the
/// monoidality isomorphism.
pub fn pair_laws(a: &TotSpace, b: &TotSpace, caps: Caps) -> Vec<LawReport> {
    let mut out = Vec::new();
    out.push(report("de-morgan-tensor", (|| {
        let lhs = tensor(a, b, caps)?.dual(caps)?;
        let rhs = par(&a.dual(caps)?, &b.dual(caps)?, caps)?;
        Ok(check(lhs == rhs, || "(A⊗B)^ ≠ A^⅋B^".to_string()))
    })()));
    out.push(report("de-morgan-with", (|| {
        let lhs = with(a, b, caps)?.dual(caps)?;
        let rhs = plus(&a.dual(caps)?, &b.dual(caps)?, caps)?;
        Ok(check(lhs == rhs, || "(A&B)^ ≠ A^⊕B^".to_string()))
    })()));
    out.push(report("with-cardinality", (|| {
        let w = with(a, b, caps)?;
        Ok(check(w.totals.len() == a.totals.len() * b.totals.len(), || {
            format!("{} ≠ {}·{}", w.totals.len(), a.totals.len(), b.totals.len())
        }))
    })()));
    if a.is_proper() && b.is_proper() {
        out.push(report("tensor-cardinality", (|| {
            let t = tensor(a, b, caps)?;
            Ok(check(t.totals.len() == a.totals.len() * b.totals.len(), || {
                format!("{} ≠ {}·{}", t.totals.len(), a.totals.len(), b.totals.len())
            }))
        })()));
    } else {
        out.push(LawReport {
            name: "tensor-cardinality".into(),
            outcome: LawOutcome::Skipped { reason: "degenerate operand".into() },
        });
    }
    // Tensor biclosure and the direct sum description hold on the regular
    // spaces (covered, with covered dual): the universe every connective
    // preserves and every discrete environment lives in. Off it both fail:
    // atoms in no cototal let the bidual pad totals with junk.
    match (regular(a, caps), regular(b, caps)) {
        (Ok(true), Ok(true)) => {
            out.push(report("tensor-biclosure", (|| {
                let t = tensor(a, b, caps)?;
                let bi = t.biclosure(caps)?;
                Ok(check(bi.totals == t.totals, || {
                    format!("bidual adds {} totals", bi.totals.len() - t.totals.len())
                }))
            })()));
            out.push(report("plus-direct-description", (|| {
                let direct = plus_direct(a, b, caps)?;
                let closed = plus(a, b, caps)?;
                Ok(check(direct == closed, || "closure differs from the direct sum".to_string()))
            })()));
        }
        _ => {
            let reason = "operand not regular (atom in no total or no cototal)".to_string();
            out.push(LawReport {
                name: "tensor-biclosure".into(),
                outcome: LawOutcome::Skipped { reason: reason.clone() },
            });
            out.push(LawReport {
                name: "plus-direct-description".into(),
                outcome: LawOutcome::Skipped { reason },
            });
        }
    }
    out.push(report("monoidality", (|| {
        let iso = mon(a, b, caps)?;
        Ok(check(iso.holds(caps)?, || "!(A&B) ≇ !A⊗!B".to_string()))
    })()));
    if let (Ok(true), Ok(true)) = (regular(a, caps), regular(b, caps)) {
        out.push(report("regularity-preserved", (|| {
            for (name, space) in [
                ("tensor", tensor(a, b, caps)?),
                ("par", par(a, b, caps)?),
                ("with", with(a, b, caps)?),
                ("plus", plus(a, b, caps)?),
                ("bang", bang(a, caps)?),
                ("whynot", crate::totspace::whynot(a, caps)?),
                ("dual", a.dual(caps)?),
            ] {
                if !regular(&space, caps)? {
                    return Ok(Some(format!("{name} of regular spaces is not regular")));
                }
            }
            Ok(None)
        })()));
    }
    out
}

/// Unit laws: `!⊤ ≅ 1`, `⊤^ = 0`, self-duality of the monoidal unit.
pub fn unit_laws(caps: Caps) -> Vec<LawReport> {
    let (one, bot, top, zero) = units();
    let mut out = Vec::new();
    out.push(report("bang-top", (|| {
        Ok(check(bang_top_iso(caps)?.holds(caps)?, || "!⊤ ≇ 1".to_string()))
    })()));
    out.push(report("top-dual-zero", (|| {
        Ok(check(top.dual(caps)? == zero && zero.dual(caps)? == top, || "⊤^ ≠ 0".to_string()))
    })()));
    out.push(report("unit-self-dual", (|| {
        Ok(check(one.dual(caps)? == bot, || "1^ ≠ ⊥".to_string()))
    })()));
    out
}

fn all_functions(s: &FinSet, totals: &[AtomSet]) -> Vec<BTreeMap<Atom, AtomSet>> {
    let elems: Vec<Atom> = s.elements.iter().cloned().collect();
    let mut out: Vec<BTreeMap<Atom, AtomSet>> = vec![BTreeMap::new()];
    for x in elems {
        let mut next = Vec::with_capacity(out.len() * totals.len());
        for f in &out {
            for t in totals {
                let mut f2 = f.clone();
                f2.insert(x.clone(), t.clone());
                next.push(f2);
            }
        }
        out = next;
    }
    out
}

/// The adjunction between `dis` and `yon`: `adj_fwd` and `adj_bwd` are
/// mutually inverse over all functions `S → A_tot` and all morphisms
/// `Dis(S) → A`, and the bijection is natural in the space argument.
pub fn adjunction_laws(s: &FinSet, a: &TotSpace, caps: Caps) -> Vec<LawReport> {
    let mut out = Vec::new();
    let totals: Vec<AtomSet> = a.totals.iter().cloned().collect();
    out.push(report("adjunction-bwd-fwd", (|| {
        for f in all_functions(s, &totals) {
            let phi = adj_bwd(s, a, &f, caps)?;
            if adj_fwd(&phi)? != f {
                return Ok(Some("fwd(bwd(f)) ≠ f".to_string()));
            }
        }
        Ok(None)
    })()));
    out.push(report("adjunction-fwd-bwd", (|| {
        // enumerate every morphism Dis(S) → A as a total of the hom space
        let hom = par(&dis(s).dual(caps)?, a, caps)?;
        for graph_total in &hom.totals {
            let graph: std::collections::BTreeSet<(Atom, Atom)> = graph_total
                .iter()
                .map(|x| match x {
                    Atom::Pair(l, r) => ((**l).clone(), (**r).clone()),
                    _ => unreachable!("hom base is a product"),
                })
                .collect();
            let phi = Morphism::new(dis(s), a.clone(), graph, caps)?;
            let f = adj_fwd(&phi)?;
            if adj_bwd(s, a, &f, caps)? != phi {
                return Ok(Some("bwd(fwd(φ)) ≠ φ".to_string()));
            }
        }
        Ok(None)
    })()));
    out.push(report("adjunction-naturality", (|| {
        // for g : A → A (all endo-morphisms), fwd(φ;g) = fwd(φ);yon(g)
        let hom_a = par(&a.dual(caps)?, a, caps)?;
        let hom_sa = par(&dis(s).dual(caps)?, a, caps)?;
        for g_total in &hom_a.totals {
            let g_graph: std::collections::BTreeSet<(Atom, Atom)> = g_total
                .iter()
                .map(|x| match x {
                    Atom::Pair(l, r) => ((**l).clone(), (**r).clone()),
                    _ => unreachable!(),
                })
                .collect();
            let g = Morphism::new(a.clone(), a.clone(), g_graph, caps)?;
            let yg = crate::totspace::yon_fn(&g, caps)?;
            for phi_total in &hom_sa.totals {
                let phi_graph: std::collections::BTreeSet<(Atom, Atom)> = phi_total
                    .iter()
                    .map(|x| match x {
                        Atom::Pair(l, r) => ((**l).clone(), (**r).clone()),
                        _ => unreachable!(),
                    })
                    .collect();
                let phi = Morphism::new(dis(s), a.clone(), phi_graph, caps)?;
                let lhs = adj_fwd(&phi.compose(&g, caps)?)?;
                let rhs: BTreeMap<Atom, AtomSet> = adj_fwd(&phi)?
                    .into_iter()
                    .map(|(x, t)| {
                        let Atom::Set(img) = &yg[&Atom::set(t)] else { unreachable!() };
                        (x, img.clone())
                    })
                    .collect();
                if lhs != rhs {
                    return Ok(Some("fwd(φ;g) ≠ yon(g) ∘ fwd(φ)".to_string()));
                }
            }
        }
        Ok(None)
    })()));
    out
}

/// Naturality of δ and ε on a given morphism.
pub fn naturality_laws(f: &Morphism, caps: Caps) -> Vec<LawReport> {
    let mut out = Vec::new();
    out.push(report("epsilon-natural", (|| {
        let bf = bang_fn(f, caps)?;
        let lhs = bf.compose(&epsilon(&f.target, caps)?, caps)?;
        let rhs = epsilon(&f.source, caps)?.compose(f, caps)?;
        Ok(check(lhs == rhs, || "ε ∘ !f ≠ f ∘ ε".to_string()))
    })()));
    out.push(report("delta-natural", (|| {
        let bf = bang_fn(f, caps)?;
        let bbf = bang_fn(&bf, caps)?;
        let lhs = bf.compose(&delta(&f.target, caps)?, caps)?;
        let rhs = delta(&f.source, caps)?.compose(&bbf, caps)?;
        Ok(check(lhs == rhs, || "δ ∘ !f ≠ !!f ∘ δ".to_string()))
    })()));
    out
}

/// Composition laws on a triple of composable morphisms.
pub fn composition_laws(f: &Morphism, g: &Morphism, h: &Morphism, caps: Caps) -> Vec<LawReport> {
    vec![
        report("compose-associative", (|| {
            let lhs = f.compose(g, caps)?.compose(h, caps)?;
            let rhs = f.compose(&g.compose(h, caps)?, caps)?;
            Ok(check(lhs == rhs, || "(f;g);h ≠ f;(g;h)".to_string()))
        })()),
        report("identity-unit", (|| {
            let idl = Morphism::identity(&f.source, caps)?;
            let idr = Morphism::identity(&f.target, caps)?;
            Ok(check(
                idl.compose(f, caps)? == *f && f.compose(&idr, caps)? == *f,
                || "identity is not neutral".to_string(),
            ))
        })()),
    ]
}

/// The standard verification bundle: unit laws; single-space laws over the
/// exhaustive family (base up to `max_base`) plus `random_count` random
/// proper spaces; pair laws over all pairs of the base-2 family and
/// `pair_samples` sampled pairs of the full pool; adjunction laws over the
/// small spaces with at most two totals; naturality and composition laws
/// over sample morphisms.
pub fn standard_bundle(
    max_base: usize,
    random_count: usize,
    pair_samples: usize,
    seed: u64,
    caps: Caps,
) -> Result<Vec<LawReport>, SpaceError> {
    use crate::corpus::{random_spaces, Rng};
    use crate::totspace::enumerate_spaces;

    let small = enumerate_spaces(max_base.min(2), caps)?;
    let mut pool = enumerate_spaces(max_base, caps)?;
    pool.extend(random_spaces(seed, random_count, 4, caps));

    let mut out = unit_laws(caps);
    for a in &pool {
        out.extend(space_laws(a, caps));
    }
    for a in &small {
        for b in &small {
            out.extend(pair_laws(a, b, caps));
        }
    }
    let mut rng = Rng::new(seed ^ 0x9e3779b9);
    for _ in 0..pair_samples {
        let a = &pool[rng.below(pool.len())];
        let b = &pool[rng.below(pool.len())];
        out.extend(pair_laws(a, b, caps));
    }
    for a in pool.iter().filter(|a| a.totals.len() <= 2 && a.base.len() <= 2).take(6) {
        for n in [1usize, 2] {
            let s = FinSet {
                elements: (0..n).map(|i| Atom::name(format!("s{i}"))).collect(),
            };
            out.extend(adjunction_laws(&s, a, caps));
        }
    }
    for a in [TotSpace::discrete(2), TotSpace::discrete(3)] {
        let e = epsilon(&a, caps)?;
        let d = delta(&a, caps)?;
        out.extend(naturality_laws(&e, caps));
        out.extend(naturality_laws(&d, caps));
        // δ ; ε_{!A} ; ε_A is a composable triple
        let e_ba = epsilon(&bang(&a, caps)?, caps)?;
        out.extend(composition_laws(&d, &e_ba, &e, caps));
    }
    Ok(out)
}
