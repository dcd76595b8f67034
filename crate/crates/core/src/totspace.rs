//! Finite totality spaces: the *-autonomous structure and the idempotent
//! exponential, computed exhaustively.
//!
//! A pre-totality space is a finite base plus a family of total subsets.
//! Its dual keeps the base and takes as totals every subset meeting each
//! total in exactly one element; a totality space equals its bidual. All
//! duals here are computed by brute-force powerset scan, so the model can
//! serve as an oracle; caps keep that affordable.
//!
//! `!A` has the totals of `A` as its base and all singletons as totals;
//! it is literally `dis(yon(A))`, and `δ : !A → !!A` is an isomorphism.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Base element. Structured labels keep isomorphism witnesses definable by
/// construction: tensor bases hold pairs, additive bases tagged atoms, and
/// `!A` bases hold total sets of `A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Name(String),
    Pair(Box<Atom>, Box<Atom>),
    InL(Box<Atom>),
    InR(Box<Atom>),
    Set(BTreeSet<Atom>),
}

impl Atom {
    pub fn name(s: impl Into<String>) -> Atom {
        Atom::Name(s.into())
    }

    pub fn pair(a: Atom, b: Atom) -> Atom {
        Atom::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(a: Atom) -> Atom {
        Atom::InL(Box::new(a))
    }

    pub fn inr(a: Atom) -> Atom {
        Atom::InR(Box::new(a))
    }

    pub fn set(s: AtomSet) -> Atom {
        Atom::Set(s)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Name(s) => write!(out, "{s}"),
            Atom::Pair(a, b) => write!(out, "({a},{b})"),
            Atom::InL(a) => write!(out, "l.{a}"),
            Atom::InR(a) => write!(out, "r.{a}"),
            Atom::Set(s) => {
                write!(out, "{{")?;
                for (i, a) in s.iter().enumerate() {
                    if i > 0 {
                        write!(out, ",")?;
                    }
                    write!(out, "{a}")?;
                }
                write!(out, "}}")
            }
        }
    }
}

pub type AtomSet = BTreeSet<Atom>;
pub type TotalFamily = BTreeSet<AtomSet>;

/// Enumeration caps: `max_base` bounds powerset scans (dual computation),
/// `max_bang_totals` bounds the base of `!A`.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub max_base: usize,
    pub max_bang_totals: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_base: 16, max_bang_totals: 12 }
    }
}

#[derive(Debug, Clone, Error)]
pub enum SpaceError {
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("family is not biclosed; the bidual has {} totals", bidual.len())]
    NotBiclosed { bidual: TotalFamily },
    #[error("graph is not total in the hom space: {0}")]
    NotTotal(String),
    #[error("morphism endpoints do not match")]
    EndpointMismatch,
    #[error("function is not defined on the whole source")]
    PartialFunction,
}

/// A finite pre-/totality space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TotSpace {
    pub base: AtomSet,
    pub totals: TotalFamily,
}

fn subsets(base: &AtomSet) -> impl Iterator<Item = AtomSet> + '_ {
    let atoms: Vec<&Atom> = base.iter().collect();
    let n = atoms.len();
    (0u32..(1u32 << n)).map(move |mask| {
        atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| (*a).clone())
            .collect()
    })
}

impl TotSpace {
    pub fn new(base: AtomSet, totals: TotalFamily) -> TotSpace {
        TotSpace { base, totals }
    }

    /// Discrete space over named atoms `x0..x{n-1}`.
    pub fn discrete(n: usize) -> TotSpace {
        let base: AtomSet = (0..n).map(|i| Atom::name(format!("x{i}"))).collect();
        dis_set(&base)
    }

    /// A space whose totals are nonempty and do not include the empty set.
    /// Degenerate totality spaces exist (the full powerset and the empty
    /// family); several cardinality laws hold only off them.
    pub fn is_proper(&self) -> bool {
        !self.totals.is_empty() && !self.totals.contains(&AtomSet::new())
    }

    /// Every base atom lies in some total.
    pub fn is_covered(&self) -> bool {
        self.base.iter().all(|a| self.totals.iter().any(|t| t.contains(a)))
    }

    /// The dual: same base, totals are the subsets meeting every total of
    /// `self` in exactly one element. Brute force over the powerset, run
    /// on bitmasks.
    pub fn dual(&self, caps: Caps) -> Result<TotSpace, SpaceError> {
        if self.base.len() > caps.max_base {
            return Err(SpaceError::CapExceeded {
                what: "dual powerset scan",
                size: self.base.len(),
                cap: caps.max_base,
            });
        }
        let atoms: Vec<&Atom> = self.base.iter().collect();
        let index: BTreeMap<&Atom, usize> =
            atoms.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let total_masks: Vec<u32> = self
            .totals
            .iter()
            .map(|t| t.iter().fold(0u32, |m, a| m | (1 << index[a])))
            .collect();
        let mut totals = TotalFamily::new();
        for r in 0u32..(1u32 << atoms.len()) {
            if total_masks.iter().all(|&s| (r & s).count_ones() == 1) {
                totals.insert(
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| r & (1 << i) != 0)
                        .map(|(_, a)| (*a).clone())
                        .collect(),
                );
            }
        }
        Ok(TotSpace { base: self.base.clone(), totals })
    }

    /// Closure under double dual; always a totality space.
    pub fn biclosure(&self, caps: Caps) -> Result<TotSpace, SpaceError> {
        self.dual(caps)?.dual(caps)
    }

    pub fn is_total(&self, set: &AtomSet) -> bool {
        self.totals.contains(set)
    }

    pub fn cototals(&self, caps: Caps) -> Result<TotalFamily, SpaceError> {
        Ok(self.dual(caps)?.totals)
    }
}

// Prints in the space file syntax: an `atoms` line then one `total` line
// per total set.
impl fmt::Display for TotSpace {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "atoms")?;
        for a in &self.base {
            write!(out, " {a}")?;
        }
        for t in &self.totals {
            write!(out, "\ntotal")?;
            for a in t {
                write!(out, " {a}")?;
            }
        }
        Ok(())
    }
}

/// Accept `(base, totals)` only if it is biclosed; otherwise report the
/// bidual's totals so the caller may adopt them.
pub fn make_space(base: AtomSet, totals: TotalFamily, caps: Caps) -> Result<TotSpace, SpaceError> {
    let pre = TotSpace::new(base, totals);
    let bidual = pre.biclosure(caps)?;
    if bidual.totals == pre.totals {
        Ok(pre)
    } else {
        Err(SpaceError::NotBiclosed { bidual: bidual.totals })
    }
}

/// Tensor: base is the cartesian product, totals are the products of
/// totals. Biclosure is a theorem about proper spaces, tested rather than
/// assumed.
pub fn tensor(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    let size = a.base.len() * b.base.len();
    if size > caps.max_base {
        return Err(SpaceError::CapExceeded { what: "tensor base", size, cap: caps.max_base });
    }
    let base: AtomSet = a
        .base
        .iter()
        .flat_map(|x| b.base.iter().map(move |y| Atom::pair(x.clone(), y.clone())))
        .collect();
    let totals: TotalFamily = a
        .totals
        .iter()
        .flat_map(|r| {
            b.totals.iter().map(move |s| {
                r.iter()
                    .flat_map(|x| s.iter().map(move |y| Atom::pair(x.clone(), y.clone())))
                    .collect::<AtomSet>()
            })
        })
        .collect();
    Ok(TotSpace { base, totals })
}

/// Par, defined as the dual of the tensor of the duals.
pub fn par(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    tensor(&a.dual(caps)?, &b.dual(caps)?, caps)?.dual(caps)
}

fn tagged_union_base(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<AtomSet, SpaceError> {
    let size = a.base.len() + b.base.len();
    if size > caps.max_base {
        return Err(SpaceError::CapExceeded { what: "sum base", size, cap: caps.max_base });
    }
    Ok(a.base
        .iter()
        .map(|x| Atom::inl(x.clone()))
        .chain(b.base.iter().map(|y| Atom::inr(y.clone())))
        .collect())
}

fn inl_set(s: &AtomSet) -> AtomSet {
    s.iter().map(|x| Atom::inl(x.clone())).collect()
}

fn inr_set(s: &AtomSet) -> AtomSet {
    s.iter().map(|x| Atom::inr(x.clone())).collect()
}

/// With: totals are disjoint unions of a total of `a` and a total of `b`.
pub fn with(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    let base = tagged_union_base(a, b, caps)?;
    let totals = a
        .totals
        .iter()
        .flat_map(|r| {
            b.totals.iter().map(move |s| {
                let mut u = inl_set(r);
                u.extend(inr_set(s));
                u
            })
        })
        .collect();
    Ok(TotSpace { base, totals })
}

/// Plus, defined as `(A^ & B^)^` so that it is always biclosed and
/// `(A & B)^ = A^ ⊕ B^` holds on the nose.
///
/// On covered spaces (every base atom inside some total) this coincides
/// with the direct description "totals of `A` and totals of `B`"; on
/// spaces with atoms in no total, the dual adds variants extended by such
/// atoms and the direct description is not even biclosed.
pub fn plus(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    with(&a.dual(caps)?, &b.dual(caps)?, caps)?.dual(caps)
}

/// The textbook direct description of `A ⊕ B`; equals [`plus`] on
/// covered spaces, used as its cross-check there.
pub fn plus_direct(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    let base = tagged_union_base(a, b, caps)?;
    let totals = a
        .totals
        .iter()
        .map(inl_set)
        .chain(b.totals.iter().map(inr_set))
        .collect();
    Ok(TotSpace { base, totals })
}

/// `!A`: base is the set of totals of `A`, totals are all singletons.
pub fn bang(a: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    if a.totals.len() > caps.max_bang_totals {
        return Err(SpaceError::CapExceeded {
            what: "bang base (totals of the argument)",
            size: a.totals.len(),
            cap: caps.max_bang_totals,
        });
    }
    let base: AtomSet = a.totals.iter().map(|t| Atom::set(t.clone())).collect();
    let totals: TotalFamily =
        base.iter().map(|x| [x.clone()].into_iter().collect::<AtomSet>()).collect();
    Ok(TotSpace { base, totals })
}

/// `?A = (!A^)^`.
pub fn whynot(a: &TotSpace, caps: Caps) -> Result<TotSpace, SpaceError> {
    bang(&a.dual(caps)?, caps)?.dual(caps)
}

/// Monoidal units and the additive units: `1 = ⊥ = ({*},{{*}})`,
/// `⊤ = (∅,{∅})`, `0 = (∅,∅) = ⊤^`.
pub fn units() -> (TotSpace, TotSpace, TotSpace, TotSpace) {
    let star: AtomSet = [Atom::name("*")].into_iter().collect();
    let one = TotSpace::new(star.clone(), [star].into_iter().collect());
    let bot = one.clone();
    let top = TotSpace::new(AtomSet::new(), [AtomSet::new()].into_iter().collect());
    let zero = TotSpace::new(AtomSet::new(), TotalFamily::new());
    (one, bot, top, zero)
}

// ---------------------------------------------------------------------
// Morphisms.

/// A relation between bases that is a total set of the internal hom
/// `source ⊸ target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: TotSpace,
    pub target: TotSpace,
    pub graph: BTreeSet<(Atom, Atom)>,
}

impl Morphism {
    /// Validates totality in the hom space without materializing it:
    /// the cototals of `A ⊸ B` are the products `s × τ` of a total of `A`
    /// and a cototal of `B`, so the graph must meet each in one point.
    pub fn new(
        source: TotSpace,
        target: TotSpace,
        graph: BTreeSet<(Atom, Atom)>,
        caps: Caps,
    ) -> Result<Morphism, SpaceError> {
        let cototals = target.cototals(caps)?;
        for s in &source.totals {
            for tau in &cototals {
                let hits = graph.iter().filter(|(x, y)| s.contains(x) && tau.contains(y)).count();
                if hits != 1 {
                    return Err(SpaceError::NotTotal(format!(
                        "meets a cototal product in {hits} points"
                    )));
                }
            }
        }
        Ok(Morphism { source, target, graph })
    }

    pub fn identity(a: &TotSpace, caps: Caps) -> Result<Morphism, SpaceError> {
        let graph = a.base.iter().map(|x| (x.clone(), x.clone())).collect();
        Morphism::new(a.clone(), a.clone(), graph, caps)
    }

    pub fn compose(&self, g: &Morphism, caps: Caps) -> Result<Morphism, SpaceError> {
        if self.target != g.source {
            return Err(SpaceError::EndpointMismatch);
        }
        let graph = self
            .graph
            .iter()
            .flat_map(|(x, m)| {
                g.graph
                    .iter()
                    .filter(move |(m2, _)| m2 == m)
                    .map(move |(_, y)| (x.clone(), y.clone()))
            })
            .collect();
        Morphism::new(self.source.clone(), g.target.clone(), graph, caps)
    }

    pub fn converse(&self, caps: Caps) -> Result<Morphism, SpaceError> {
        let graph = self.graph.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        Morphism::new(self.target.clone(), self.source.clone(), graph, caps)
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.graph.len() == self.source.base.len()
            && self.graph.iter().all(|(x, y)| x == y)
    }
}

/// Mutually inverse morphisms: an isomorphism witness.
#[derive(Debug, Clone)]
pub struct Iso {
    pub fwd: Morphism,
    pub bwd: Morphism,
}

impl Iso {
    pub fn holds(&self, caps: Caps) -> Result<bool, SpaceError> {
        Ok(self.fwd.compose(&self.bwd, caps)?.is_identity()
            && self.bwd.compose(&self.fwd, caps)?.is_identity())
    }
}

// ---------------------------------------------------------------------
// The Sets side of the adjunction.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    pub elements: AtomSet,
}

fn dis_set(base: &AtomSet) -> TotSpace {
    let totals = base.iter().map(|x| [x.clone()].into_iter().collect::<AtomSet>()).collect();
    TotSpace { base: base.clone(), totals }
}

/// Discrete space over a finite set: all singletons total.
pub fn dis(s: &FinSet) -> TotSpace {
    dis_set(&s.elements)
}

/// The totals of `A`, as a finite set of `Atom::Set` elements.
pub fn yon(a: &TotSpace) -> FinSet {
    FinSet { elements: a.totals.iter().map(|t| Atom::set(t.clone())).collect() }
}

/// Graph of a function as a morphism of discrete spaces.
pub fn dis_fn(
    s: &FinSet,
    t: &FinSet,
    f: &BTreeMap<Atom, Atom>,
    caps: Caps,
) -> Result<Morphism, SpaceError> {
    if !s.elements.iter().all(|x| f.contains_key(x)) {
        return Err(SpaceError::PartialFunction);
    }
    let graph = s.elements.iter().map(|x| (x.clone(), f[x].clone())).collect();
    Morphism::new(dis(s), dis(t), graph, caps)
}

/// Action of `yon` on a morphism: each total of the source maps to its
/// relational image, a total of the target.
pub fn yon_fn(phi: &Morphism, caps: Caps) -> Result<BTreeMap<Atom, Atom>, SpaceError> {
    let _ = caps;
    let mut map = BTreeMap::new();
    for t in &phi.source.totals {
        let image: AtomSet = phi
            .graph
            .iter()
            .filter(|(x, _)| t.contains(x))
            .map(|(_, y)| y.clone())
            .collect();
        if !phi.target.is_total(&image) {
            return Err(SpaceError::NotTotal("image of a total is not total".into()));
        }
        map.insert(Atom::set(t.clone()), Atom::set(image));
    }
    Ok(map)
}

/// `!` on morphisms: `dis(yon(φ))`.
pub fn bang_fn(phi: &Morphism, caps: Caps) -> Result<Morphism, SpaceError> {
    let map = yon_fn(phi, caps)?;
    dis_fn(&yon(&phi.source), &yon(&phi.target), &map, caps)
}

/// Adjunction, backward direction: a function `f : S → A_tot` becomes the
/// relation `f̂ = {(s,a) | a ∈ f(s)}`, total in `Dis(S) ⊸ A`.
pub fn adj_bwd(
    s: &FinSet,
    a: &TotSpace,
    f: &BTreeMap<Atom, AtomSet>,
    caps: Caps,
) -> Result<Morphism, SpaceError> {
    if !s.elements.iter().all(|x| f.contains_key(x)) {
        return Err(SpaceError::PartialFunction);
    }
    let graph = s
        .elements
        .iter()
        .flat_map(|x| f[x].iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    Morphism::new(dis(s), a.clone(), graph, caps)
}

/// Adjunction, forward direction: slice a morphism `Dis(S) → A` into a
/// function `S → A_tot`. Fails if some slice is not total (then the input
/// was not a valid morphism).
pub fn adj_fwd(phi: &Morphism) -> Result<BTreeMap<Atom, AtomSet>, SpaceError> {
    let mut out = BTreeMap::new();
    for x in &phi.source.base {
        let slice: AtomSet = phi
            .graph
            .iter()
            .filter(|(s, _)| s == x)
            .map(|(_, a)| a.clone())
            .collect();
        if !phi.target.is_total(&slice) {
            return Err(SpaceError::NotTotal(format!("slice at {x} is not total")));
        }
        out.insert(x.clone(), slice);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Comonad structure.

/// `δ : !A → !!A`, sending a total `t` (an atom of `!A`) to `{t}`.
pub fn delta(a: &TotSpace, caps: Caps) -> Result<Morphism, SpaceError> {
    let ba = bang(a, caps)?;
    let bba = bang(&ba, caps)?;
    let graph = a
        .totals
        .iter()
        .map(|t| {
            let x = Atom::set(t.clone());
            let wrapped = Atom::set([x.clone()].into_iter().collect());
            (x, wrapped)
        })
        .collect();
    Morphism::new(ba, bba, graph, caps)
}

/// `ε : !A → A`, the membership relation.
pub fn epsilon(a: &TotSpace, caps: Caps) -> Result<Morphism, SpaceError> {
    let ba = bang(a, caps)?;
    let graph = a
        .totals
        .iter()
        .flat_map(|t| t.iter().map(move |x| (Atom::set(t.clone()), x.clone())))
        .collect();
    Morphism::new(ba, a.clone(), graph, caps)
}

/// Monoidality witness `!(A & B) ≅ !A ⊗ !B`: a total of `A & B` is the
/// tagged union of a total of `A` and a total of `B`, and the map to the
/// pair of its halves is a bijection on bases.
pub fn mon(a: &TotSpace, b: &TotSpace, caps: Caps) -> Result<Iso, SpaceError> {
    let ab = with(a, b, caps)?;
    let lhs = bang(&ab, caps)?;
    let rhs = tensor(&bang(a, caps)?, &bang(b, caps)?, caps)?;
    let mut fwd = BTreeSet::new();
    for u in &ab.totals {
        let r: AtomSet = u
            .iter()
            .filter_map(|x| match x {
                Atom::InL(inner) => Some((**inner).clone()),
                _ => None,
            })
            .collect();
        let s: AtomSet = u
            .iter()
            .filter_map(|x| match x {
                Atom::InR(inner) => Some((**inner).clone()),
                _ => None,
            })
            .collect();
        fwd.insert((Atom::set(u.clone()), Atom::pair(Atom::set(r), Atom::set(s))));
    }
    let bwd = fwd.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    Ok(Iso {
        fwd: Morphism::new(lhs.clone(), rhs.clone(), fwd, caps)?,
        bwd: Morphism::new(rhs, lhs, bwd, caps)?,
    })
}

/// `!⊤ ≅ 1`.
pub fn bang_top_iso(caps: Caps) -> Result<Iso, SpaceError> {
    let (one, _, top, _) = units();
    let btop = bang(&top, caps)?;
    let empty_total = Atom::set(AtomSet::new());
    let star = Atom::name("*");
    let fwd: BTreeSet<(Atom, Atom)> = [(empty_total.clone(), star.clone())].into_iter().collect();
    let bwd = [(star, empty_total)].into_iter().collect();
    Ok(Iso {
        fwd: Morphism::new(btop.clone(), one.clone(), fwd, caps)?,
        bwd: Morphism::new(one, btop, bwd, caps)?,
    })
}

/// All totality spaces over bases `a0..a{n-1}` for every `n <= max_base`:
/// biclose every family of subsets, deduplicate.
pub fn enumerate_spaces(max_base: usize, caps: Caps) -> Result<Vec<TotSpace>, SpaceError> {
    let mut out = Vec::new();
    for n in 0..=max_base {
        let base: AtomSet = (0..n).map(|i| Atom::name(format!("a{i}"))).collect();
        let all: Vec<AtomSet> = subsets(&base).collect();
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << all.len()) {
            let family: TotalFamily = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, s)| s.clone())
                .collect();
            let space = TotSpace::new(base.clone(), family).biclosure(caps)?;
            if seen.insert(space.totals.clone()) {
                out.push(space);
            }
        }
    }
    Ok(out)
}
