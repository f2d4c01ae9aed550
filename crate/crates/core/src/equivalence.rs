//! Bochvar systems `<B, I>` and their correspondence with Bochvar algebras.
//!
//! A system yields the Płonka sum of the quotients `B/[i)` for `i ∈ I`,
//! indexed by `I` with the order reversed, expanded by the unique `J2`
//! that sends a class `x ∈ B/[i)` to the one representative of `x` below
//! `i`. Conversely an algebra yields its bottom fibre together with the
//! elements `J2(1_i)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{enumerate_homs, find_isomorphism, AlgebraError, Elem, FiniteAlgebra, Homomorphism};
use crate::axioms::{axiom_set, check_axiom_set, AxiomSetName};
use crate::boolean::{
    boolean_from_atoms, enumerate_unit_meet_subsemilattices, is_unit_meet_subsemilattice, principal_filter,
    quotient_by_filter, BooleanAlgebra, BooleanError,
};
use crate::plonka::{decompose, plonka_sum, Decomposition, PlonkaError, SemilatticeDirectSystem};
use crate::varieties::{search_j2_tables, J2Search};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("invalid Bochvar system: {0}")]
    InvalidSystem(String),
    #[error("`{algebra}` is not a Bochvar algebra ({label} fails at {at})")]
    NotBochvar { algebra: String, label: String, at: String },
    #[error("in `{algebra}` the Boolean order on generators disagrees with the fibre order: {detail}")]
    OrderDisagreement { algebra: String, detail: String },
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("NO ISOMORPHISM: {0}")]
    NoIsomorphism(String),
    /// A computed object violates a property the construction guarantees.
    #[error("construction defect: {0}")]
    Defect(String),
    #[error(transparent)]
    Boolean(#[from] BooleanError),
    #[error(transparent)]
    Plonka(#[from] PlonkaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Result<T> = std::result::Result<T, EquivalenceError>;

/// A finite Boolean algebra with a meet-subsemilattice containing 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BochvarSystem {
    boolean: BooleanAlgebra,
    subsemilattice: BTreeSet<Elem>,
}

impl BochvarSystem {
    pub fn new(boolean: BooleanAlgebra, subsemilattice: BTreeSet<Elem>) -> Result<Self> {
        if let Some(&e) = subsemilattice.iter().find(|&&e| e >= boolean.size()) {
            return Err(EquivalenceError::InvalidSystem(format!("element index {e} out of range")));
        }
        if !subsemilattice.contains(&boolean.top()) {
            return Err(EquivalenceError::InvalidSystem("subsemilattice does not contain 1".into()));
        }
        if !is_unit_meet_subsemilattice(&boolean, &subsemilattice) {
            return Err(EquivalenceError::InvalidSystem("subsemilattice is not closed under meets".into()));
        }
        Ok(BochvarSystem { boolean, subsemilattice })
    }

    /// Builds a system from element names; `1` is accepted for the top.
    pub fn from_names<S: AsRef<str>>(boolean: BooleanAlgebra, names: &[S]) -> Result<Self> {
        let set = names.iter().map(|n| boolean.element(n.as_ref())).collect::<std::result::Result<_, _>>()?;
        Self::new(boolean, set)
    }

    pub fn boolean(&self) -> &BooleanAlgebra {
        &self.boolean
    }

    pub fn subsemilattice(&self) -> &BTreeSet<Elem> {
        &self.subsemilattice
    }

    pub fn contains(&self, b: Elem) -> bool {
        self.subsemilattice.contains(&b)
    }
}

impl fmt::Display for BochvarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.boolean;
        let names: Vec<&str> = self.subsemilattice.iter().map(|&e| b.name_of(e)).collect();
        write!(f, "<{},{{{}}}>", b.algebra().name(), names.join(","))
    }
}

/// Every system over the powerset algebra on `atoms` atoms named `p`, `q`,
/// `r`, ... in enumeration order.
pub fn enumerate_systems(atoms: usize) -> Vec<BochvarSystem> {
    const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];
    assert!(atoms <= NAMES.len(), "at most {} atoms", NAMES.len());
    let b = boolean_from_atoms(&NAMES[..atoms]).expect("distinct atoms");
    enumerate_unit_meet_subsemilattices(&b)
        .into_iter()
        .map(|set| BochvarSystem::new(b.clone(), set).expect("enumerated sets are valid"))
        .collect()
}

/// A Boolean homomorphism carrying the first subsemilattice into the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemMorphism {
    pub map: Homomorphism,
}

impl SystemMorphism {
    pub fn new(map: Homomorphism) -> Self {
        SystemMorphism { map }
    }

    pub fn validate(&self, src: &BochvarSystem, tgt: &BochvarSystem) -> Result<()> {
        let (a, b) = (src.boolean.algebra(), tgt.boolean.algebra());
        if self.map.map().len() != a.size() || self.map.map().iter().any(|&v| v >= b.size()) {
            return Err(EquivalenceError::NotHomomorphism("map is not total between the carriers".into()));
        }
        if !self.map.is_homomorphism(a, b) {
            return Err(EquivalenceError::NotHomomorphism(self.map.describe(a, b)));
        }
        if let Some(&i) = src.subsemilattice.iter().find(|&&i| !tgt.contains(self.map.apply(i))) {
            return Err(EquivalenceError::NotHomomorphism(format!(
                "{} is sent outside the target subsemilattice",
                src.boolean.name_of(i)
            )));
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SystemMorphism) -> SystemMorphism {
        SystemMorphism { map: self.map.then(&other.map) }
    }
}

/// Every system morphism between two systems, in search order.
pub fn enumerate_system_morphisms(src: &BochvarSystem, tgt: &BochvarSystem) -> Vec<SystemMorphism> {
    enumerate_homs(src.boolean.algebra(), tgt.boolean.algebra())
        .expect("Boolean algebras share a signature")
        .into_iter()
        .map(SystemMorphism::new)
        .filter(|g| g.validate(src, tgt).is_ok())
        .collect()
}

/// The algebra built from a system, with the bookkeeping needed to address
/// its elements as classes `b/[i)`.
#[derive(Debug, Clone)]
pub struct ConstructedAlgebra {
    pub system: BochvarSystem,
    pub algebra: FiniteAlgebra,
    pub decomposition: Decomposition,
    /// Generator `i ∈ I` of each fibre, top first.
    pub generators: Vec<Elem>,
    /// Quotient map `B → B/[i)` for each fibre.
    pub projections: Vec<Homomorphism>,
    /// For each element: its fibre position and least representative in B.
    pub cell_of: Vec<(usize, Elem)>,
}

impl ConstructedAlgebra {
    pub fn position_of(&self, generator: Elem) -> Option<usize> {
        self.generators.iter().position(|&g| g == generator)
    }

    /// The element `b/[generators[pos])`.
    pub fn element_at(&self, pos: usize, b: Elem) -> Elem {
        self.decomposition.global(pos, self.projections[pos].apply(b))
    }
}

/// The Bochvar algebra of a system.
pub fn system_to_algebra(s: &BochvarSystem) -> Result<ConstructedAlgebra> {
    let b = &s.boolean;
    let mut generators: Vec<Elem> = s.subsemilattice.iter().copied().collect();
    generators.sort_by_key(|&g| (std::cmp::Reverse(b.mask(g).count_ones()), g));
    let mut fibres = Vec::new();
    let mut projections = Vec::new();
    for &g in &generators {
        let (q, proj) = quotient_by_filter(b, &principal_filter(b, g)?)?;
        fibres.push(q.with_name(format!("{}/[{})", b.algebra().name(), b.name_of(g))));
        projections.push(proj);
    }
    let n = generators.len();
    let rep = |pos: usize, class: Elem| {
        b.algebra().carrier().find(|&e| projections[pos].apply(e) == class).expect("projections are onto")
    };
    let mut order = Vec::new();
    let mut homs = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && b.leq(generators[j], generators[i]) {
                order.push((i, j));
                let map = fibres[i].carrier().map(|c| projections[j].apply(rep(i, c))).collect();
                homs.insert((i, j), map);
            }
        }
    }
    let index = generators.iter().map(|&g| b.name_of(g).to_string()).collect();
    let system = SemilatticeDirectSystem { index, order, fibres, homs };
    let (reduct, mut decomposition) = plonka_sum(&system)?;
    let mut j2 = Vec::with_capacity(reduct.size());
    let mut cell_of = Vec::with_capacity(reduct.size());
    for x in reduct.carrier() {
        let (pos, class) = (decomposition.fibre_of(x), decomposition.local(x));
        let g = generators[pos];
        let below: Vec<Elem> = b
            .algebra()
            .carrier()
            .filter(|&e| b.leq(e, g) && projections[pos].apply(e) == class)
            .collect();
        if below.len() != 1 {
            return Err(EquivalenceError::Defect(format!(
                "class {} of B/[{}) has {} representatives below the generator",
                reduct.element_name(x),
                b.name_of(g),
                below.len()
            )));
        }
        j2.push(decomposition.global(0, projections[0].apply(below[0])));
        cell_of.push((pos, rep(pos, class)));
    }
    let algebra = reduct.with_j2(j2)?.with_name(format!("A{s}"));
    decomposition.source = algebra.clone();
    Ok(ConstructedAlgebra { system: s.clone(), algebra, decomposition, generators, projections, cell_of })
}

fn require_bochvar(a: &FiniteAlgebra) -> Result<()> {
    if !a.has_j2() {
        return Err(EquivalenceError::NotBochvar { algebra: a.name().into(), label: "J2".into(), at: "missing table".into() });
    }
    let report = check_axiom_set(a, &axiom_set(AxiomSetName::Bca)).expect("J2 present");
    match report.first_failure() {
        None => Ok(()),
        Some(f) => Err(EquivalenceError::NotBochvar {
            algebra: a.name().into(),
            label: f.label.clone(),
            at: f.counterexample.clone().unwrap_or_default(),
        }),
    }
}

/// The system of an algebra, with its decomposition.
#[derive(Debug, Clone)]
pub struct RecoveredSystem {
    pub source: FiniteAlgebra,
    pub system: BochvarSystem,
    pub decomposition: Decomposition,
    /// `J2(1_i)` for every fibre `i`, as an element of the bottom fibre.
    pub generators: Vec<Elem>,
}

impl RecoveredSystem {
    /// The source element corresponding to `b` in the bottom fibre.
    pub fn bottom_global(&self, b: Elem) -> Elem {
        self.decomposition.global(self.decomposition.bottom(), b)
    }

    /// The bottom-fibre element of a source element that lies there.
    pub fn bottom_local(&self, x: Elem) -> Option<Elem> {
        (self.decomposition.fibre_of(x) == self.decomposition.bottom()).then(|| self.decomposition.local(x))
    }
}

/// Bottom fibre plus `K = {J2(1_i)}`. The Boolean order on `K` must be
/// the reverse of the fibre order; a disagreement is reported as an error.
pub fn algebra_to_system(a: &FiniteAlgebra) -> Result<RecoveredSystem> {
    require_bochvar(a)?;
    let d = decompose(a)?;
    let bottom = d.bottom();
    let fibre = d.fibre(bottom);
    let boolean = BooleanAlgebra::from_algebra(&fibre.clone().with_name(format!("B{}", fibre.size())))?;
    let mut generators = Vec::with_capacity(d.fibre_count());
    for i in 0..d.fibre_count() {
        let j = a.j2(d.fibre_top(i)).expect("J2 present");
        if d.fibre_of(j) != bottom {
            return Err(EquivalenceError::Defect(format!("J2({}) leaves the bottom fibre", a.element_name(d.fibre_top(i)))));
        }
        generators.push(d.local(j));
    }
    for i in 0..d.fibre_count() {
        for j in 0..d.fibre_count() {
            if boolean.leq(generators[i], generators[j]) != d.resolved().leq(j, i) {
                return Err(EquivalenceError::OrderDisagreement {
                    algebra: a.name().into(),
                    detail: format!("fibres {} and {}", d.system.index[i], d.system.index[j]),
                });
            }
        }
    }
    let system = BochvarSystem::new(boolean, generators.iter().copied().collect())?;
    Ok(RecoveredSystem { source: a.clone(), system, decomposition: d, generators })
}

/// The canonical map `a ↦ J2 a / [J2(1_i))` for `a` in fibre `i`.
pub fn unit_map(r: &RecoveredSystem, c: &ConstructedAlgebra) -> Homomorphism {
    let a = &r.source;
    let d = &r.decomposition;
    Homomorphism::new(
        a.carrier()
            .map(|x| {
                let pos = c.position_of(r.generators[d.fibre_of(x)]).expect("generator is in I");
                let j = r.bottom_local(a.j2(x).expect("J2 present")).expect("J2 lands in the bottom fibre");
                c.element_at(pos, j)
            })
            .collect(),
    )
}

/// The canonical map from `B` onto the bottom fibre of the recovered
/// system, `b ↦ b/[1)`.
pub fn counit_map(c: &ConstructedAlgebra, r: &RecoveredSystem) -> Homomorphism {
    let top = c.system.boolean.top();
    let pos = c.position_of(top).expect("1 is in I");
    Homomorphism::new(
        c.system
            .boolean
            .algebra()
            .carrier()
            .map(|b| r.bottom_local(c.element_at(pos, b)).expect("B/[1) is the bottom fibre"))
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct AlgebraRoundTrip {
    pub recovered: RecoveredSystem,
    pub constructed: ConstructedAlgebra,
    /// Found by search.
    pub iso: Homomorphism,
    /// The canonical map, checked to be an isomorphism as well.
    pub unit: Homomorphism,
}

fn is_iso(h: &Homomorphism, a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    a.size() == b.size()
        && h.is_injective()
        && h.is_homomorphism(a, b)
        && h.inverse().is_some_and(|inv| inv.is_homomorphism(b, a))
}

/// `a ≅ A_{B_a}`, with the isomorphism found by search.
pub fn roundtrip_algebra(a: &FiniteAlgebra) -> Result<AlgebraRoundTrip> {
    let recovered = algebra_to_system(a)?;
    let constructed = system_to_algebra(&recovered.system)?;
    let iso = find_isomorphism(a, &constructed.algebra)?
        .ok_or_else(|| EquivalenceError::NoIsomorphism(format!("{} and {}", a.name(), constructed.algebra.name())))?;
    let unit = unit_map(&recovered, &constructed);
    if !is_iso(&unit, a, &constructed.algebra) {
        return Err(EquivalenceError::Defect(format!("canonical unit on `{}` is not an isomorphism", a.name())));
    }
    Ok(AlgebraRoundTrip { recovered, constructed, iso, unit })
}

#[derive(Debug, Clone)]
pub struct SystemRoundTrip {
    pub constructed: ConstructedAlgebra,
    pub recovered: RecoveredSystem,
    /// First Boolean isomorphism carrying `I` onto the recovered `K`.
    pub iso: Homomorphism,
    /// The canonical map `b ↦ b/[1)`.
    pub canonical: Homomorphism,
    /// Whether the canonical map sends each `i` to `J2(1_i)`.
    pub canonical_agrees: bool,
}

/// `s ≅ B_{A_s}`, with the isomorphism found by search.
pub fn roundtrip_system(s: &BochvarSystem) -> Result<SystemRoundTrip> {
    let constructed = system_to_algebra(s)?;
    let recovered = algebra_to_system(&constructed.algebra)?;
    let (b1, b2) = (s.boolean.algebra(), recovered.system.boolean.algebra());
    let k = recovered.system.subsemilattice();
    let iso = enumerate_homs(b1, b2)?
        .into_iter()
        .find(|h| {
            is_iso(h, b1, b2) && s.subsemilattice.iter().map(|&i| h.apply(i)).collect::<BTreeSet<_>>() == *k
        })
        .ok_or_else(|| EquivalenceError::NoIsomorphism(format!("{s} and {}", recovered.system)))?;
    let canonical = counit_map(&constructed, &recovered);
    let a = &constructed.algebra;
    let canonical_agrees = is_iso(&canonical, b1, b2)
        && s.subsemilattice.iter().all(|&i| {
            let pos = constructed.position_of(i).expect("generator");
            let top_i = constructed.element_at(pos, s.boolean.top());
            recovered.bottom_local(a.j2(top_i).expect("J2")) == Some(canonical.apply(i))
        });
    Ok(SystemRoundTrip { constructed, recovered, iso, canonical, canonical_agrees })
}

/// The restriction of `f` to the bottom fibres, as a morphism of the
/// recovered systems.
pub fn gamma_morphism(f: &Homomorphism, r1: &RecoveredSystem, r2: &RecoveredSystem) -> Result<SystemMorphism> {
    if f.map().len() != r1.source.size() || !f.is_homomorphism(&r1.source, &r2.source) {
        return Err(EquivalenceError::NotHomomorphism(format!("{} -> {}", r1.source.name(), r2.source.name())));
    }
    let map = r1
        .system
        .boolean
        .algebra()
        .carrier()
        .map(|b| {
            r2.bottom_local(f.apply(r1.bottom_global(b)))
                .ok_or_else(|| EquivalenceError::Defect("image of the bottom fibre leaves the bottom fibre".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let g = SystemMorphism::new(Homomorphism::new(map));
    g.validate(&r1.system, &r2.system).map_err(|e| EquivalenceError::Defect(format!("restriction is not a system morphism: {e}")))?;
    Ok(g)
}

/// `b/[i) ↦ g(b)/[g(i))`.
pub fn xi_morphism(g: &SystemMorphism, c1: &ConstructedAlgebra, c2: &ConstructedAlgebra) -> Result<Homomorphism> {
    g.validate(&c1.system, &c2.system)?;
    let map = c1
        .cell_of
        .iter()
        .map(|&(pos, rep)| {
            let target = c2.position_of(g.map.apply(c1.generators[pos])).expect("validated");
            c2.element_at(target, g.map.apply(rep))
        })
        .collect();
    let h = Homomorphism::new(map);
    if !h.is_homomorphism(&c1.algebra, &c2.algebra) {
        return Err(EquivalenceError::Defect(format!("induced map {} is not a homomorphism", h.describe(&c1.algebra, &c2.algebra))));
    }
    Ok(h)
}

/// Pointwise check of `Ξ(Γ f) ∘ η₁ = η₂ ∘ f` for `f: a1 → a2`.
pub fn algebra_naturality(f: &Homomorphism, a1: &FiniteAlgebra, a2: &FiniteAlgebra) -> Result<bool> {
    let (r1, r2) = (algebra_to_system(a1)?, algebra_to_system(a2)?);
    let (c1, c2) = (system_to_algebra(&r1.system)?, system_to_algebra(&r2.system)?);
    let h = xi_morphism(&gamma_morphism(f, &r1, &r2)?, &c1, &c2)?;
    let (u1, u2) = (unit_map(&r1, &c1), unit_map(&r2, &c2));
    Ok(a1.carrier().all(|x| h.apply(u1.apply(x)) == u2.apply(f.apply(x))))
}

/// Pointwise check of `Γ(Ξ g) ∘ ε₁ = ε₂ ∘ g` for `g: s1 → s2`.
pub fn system_naturality(g: &SystemMorphism, s1: &BochvarSystem, s2: &BochvarSystem) -> Result<bool> {
    let (c1, c2) = (system_to_algebra(s1)?, system_to_algebra(s2)?);
    let (r1, r2) = (algebra_to_system(&c1.algebra)?, algebra_to_system(&c2.algebra)?);
    let back = gamma_morphism(&xi_morphism(g, &c1, &c2)?, &r1, &r2)?;
    let (e1, e2) = (counit_map(&c1, &r1), counit_map(&c2, &r2));
    Ok(s1.boolean.algebra().carrier().all(|b| back.map.apply(e1.apply(b)) == e2.apply(g.map.apply(b))))
}

/// Every `J2` table on the reduct of `a` that satisfies the BCA basis.
pub fn bca_j2_tables(a: &FiniteAlgebra) -> J2Search {
    search_j2_tables(&a.reduct(), AxiomSetName::Bca)
}
