//! Structure theory of the variety generated by Bochvar algebras: forced
//! and searched `J2` tables, the congruences `Θ_a` and the fibre
//! congruence, membership in HS and ISP of the generator, open and dense
//! elements and the embedding into `O(A) × D(A)`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{
    direct_product, enumerate_homs, find_isomorphism, quotient_algebra, subalgebra, subuniverse_generated,
    AlgebraError, Congruence, Elem, FiniteAlgebra, Homomorphism,
};
use crate::axioms::{axiom_set, check_axiom_set, satisfies, AxiomSetName};
use crate::boolean::is_boolean;
use crate::fixtures;
use crate::plonka::{decompose, same_fibre, PlonkaError};
use crate::terms::{parse_identity, valuations, CompiledQuasi, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("bottom fibre of `{algebra}` has {size} elements; the forced rule needs exactly 2")]
    BottomFibreNotTwo { algebra: String, size: usize },
    #[error("`{algebra}` does not satisfy {set} ({label} fails at {at})")]
    Precondition { algebra: String, set: AxiomSetName, label: String, at: String },
    #[error("`{0}` has no J2 table")]
    NoJ2(String),
    #[error("element `{0}` is not in the bottom fibre")]
    NotInBottomFibre(String),
    #[error("`{algebra}` has {size} elements, above the bound {bound}")]
    BoundExceeded { algebra: String, size: usize, bound: usize },
    #[error("`{0}` satisfies neither BA_rel nor SL_rel")]
    NeitherClass(String),
    /// A computed object contradicts a property the theory guarantees.
    #[error("defect in `{algebra}`: {detail}")]
    Defect { algebra: String, detail: String },
    #[error(transparent)]
    Plonka(#[from] PlonkaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Result<T> = std::result::Result<T, VarietyError>;

fn defect(a: &FiniteAlgebra, detail: impl Into<String>) -> VarietyError {
    VarietyError::Defect { algebra: a.name().to_string(), detail: detail.into() }
}

fn require(a: &FiniteAlgebra, set: AxiomSetName) -> Result<()> {
    if set.uses_j() && !a.has_j2() {
        return Err(VarietyError::NoJ2(a.name().to_string()));
    }
    let report = check_axiom_set(a, &axiom_set(set)).expect("J2 presence checked");
    match report.first_failure() {
        None => Ok(()),
        Some(f) => Err(VarietyError::Precondition {
            algebra: a.name().to_string(),
            set,
            label: f.label.clone(),
            at: f.counterexample.clone().unwrap_or_default(),
        }),
    }
}

/// Outcome of the forced `J2` rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JdefOutcome {
    pub algebra: FiniteAlgebra,
    /// First K axiom that fails, with its rendered counterexample.
    pub failure: Option<(String, String)>,
}

impl JdefOutcome {
    pub fn is_k(&self) -> bool {
        self.failure.is_none()
    }
}

/// The `J2` table forced on an IBSL whose bottom fibre is two-element:
/// `J2 a = 1` when `a` is the top of a non-trivial fibre, `0` otherwise.
pub fn jdef_table(a: &FiniteAlgebra) -> Result<Vec<Elem>> {
    let d = decompose(a)?;
    let size = d.members(d.bottom()).len();
    if size != 2 {
        return Err(VarietyError::BottomFibreNotTwo { algebra: a.name().to_string(), size });
    }
    let tops: BTreeSet<Elem> =
        (0..d.fibre_count()).filter(|&i| !d.is_trivial_fibre(i)).map(|i| d.fibre_top(i)).collect();
    Ok(a.carrier().map(|x| if tops.contains(&x) { a.one() } else { a.zero() }).collect())
}

/// Expands `a` by the forced table and checks K1–K12.
pub fn jdef_extension(a: &FiniteAlgebra) -> Result<JdefOutcome> {
    let table = jdef_table(a)?;
    let algebra = a.reduct().with_j2(table)?;
    let report = check_axiom_set(&algebra, &axiom_set(AxiomSetName::K)).expect("J2 present");
    let failure = report.first_failure().map(|f| (f.label.clone(), f.counterexample.clone().unwrap_or_default()));
    Ok(JdefOutcome { algebra, failure })
}

/// Result of an exhaustive `J2` search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct J2Search {
    /// Every satisfying table, in lexicographic order.
    pub tables: Vec<Vec<Elem>>,
    /// Number of tables left after restricting each value to complemented
    /// elements (`c | -c = 1`).
    pub candidate_space: u128,
    /// Complete tables reached by the search.
    pub leaves: usize,
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    set: AxiomSetName,
    items: Vec<CompiledQuasi>,
    candidates: Vec<Vec<Elem>>,
    found: Vec<Vec<Elem>>,
    leaves: usize,
}

impl Search<'_> {
    /// `pending[k]` lists the valuation codes of item `k` not yet decided
    /// by the partial table.
    fn run(&mut self, table: &mut Vec<Option<Elem>>, pending: Vec<Vec<usize>>) {
        let n = self.a.size();
        let mut next = Vec::with_capacity(pending.len());
        {
            let partial = |e: Elem| table[e];
            for (item, codes) in self.items.iter().zip(&pending) {
                let k = item.vars.len();
                let mut keep = Vec::new();
                for &code in codes {
                    let vals = decode(code, n, k);
                    match item.instance(self.a, &partial, &vals) {
                        Some(false) => return,
                        Some(true) => {}
                        None => keep.push(code),
                    }
                }
                next.push(keep);
            }
        }
        let Some(pos) = table.iter().position(Option::is_none) else {
            self.leaves += 1;
            debug_assert!(next.iter().all(Vec::is_empty));
            let full: Vec<Elem> = table.iter().map(|v| v.unwrap()).collect();
            let b = self.a.with_j2(full.clone()).expect("table in range");
            if satisfies(&b, self.set).expect("J2 present") {
                self.found.push(full);
            }
            return;
        };
        for c in self.candidates[pos].clone() {
            table[pos] = Some(c);
            self.run(table, next.clone());
        }
        table[pos] = None;
    }
}

fn decode(mut code: usize, n: usize, k: usize) -> Vec<Elem> {
    let mut vals = vec![0; k];
    for slot in (0..k).rev() {
        vals[slot] = code % n;
        code /= n;
    }
    vals
}

/// All `J2` tables on the reduct of `a` satisfying `set`. Values are first
/// restricted to elements `c` with `c | -c = 1` whenever the catalog
/// contains that constraint on `J2`; the search then assigns values in
/// element order and prunes as soon as some instance is refuted.
pub fn search_j2_tables(a: &FiniteAlgebra, set: AxiomSetName) -> J2Search {
    let a = a.reduct();
    let catalog = axiom_set(set);
    let k9 = parse_identity("J2 x | -J2 x = 1").expect("fixed text");
    let prune = catalog.items.iter().any(|i| i.formula.premises.is_empty() && i.formula.conclusion == k9);
    let candidates: Vec<Vec<Elem>> = a
        .carrier()
        .map(|_| a.carrier().filter(|&c| !prune || a.or(c, a.not(c)) == a.one()).collect())
        .collect();
    let candidate_space = candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    let items: Vec<CompiledQuasi> = catalog.items.iter().map(|i| CompiledQuasi::new(&i.formula)).collect();
    let n = a.size();
    let pending = items.iter().map(|i| (0..n.pow(i.vars.len() as u32)).collect()).collect();
    let mut search = Search { a: &a, set, items, candidates, found: Vec::new(), leaves: 0 };
    search.run(&mut vec![None; n], pending);
    J2Search { tables: search.found, candidate_space, leaves: search.leaves }
}

/// Every `J2` table turning the reduct of `a` into a member of K.
pub fn forbidden_search(a: &FiniteAlgebra) -> J2Search {
    search_j2_tables(a, AxiomSetName::K)
}

fn bottom_fibre_check(a: &FiniteAlgebra, g: Elem) -> Result<()> {
    let d = decompose(a)?;
    if d.fibre_of(g) != d.bottom() {
        return Err(VarietyError::NotInBottomFibre(a.element_name(g).to_string()));
    }
    Ok(())
}

fn labels_of(a: &FiniteAlgebra, related: impl Fn(Elem, Elem) -> bool) -> Result<Congruence> {
    let labels: Vec<usize> = a.carrier().map(|x| a.carrier().find(|&y| related(x, y)).unwrap()).collect();
    for x in a.carrier() {
        for y in a.carrier() {
            if related(x, y) != (labels[x] == labels[y]) {
                return Err(defect(a, "relation is not an equivalence"));
            }
        }
    }
    Ok(Congruence::from_labels(&labels))
}

/// `b Θ_g c` iff `g | b = g | c` and `g | -b = g | -c`, for `g` in the
/// bottom fibre. Compatibility with every operation, `J2` included, is
/// asserted.
pub fn theta_a(a: &FiniteAlgebra, g: Elem) -> Result<Congruence> {
    require(a, AxiomSetName::K)?;
    bottom_fibre_check(a, g)?;
    let c = labels_of(a, |b, c| a.or(g, b) == a.or(g, c) && a.or(g, a.not(b)) == a.or(g, a.not(c)))?;
    if !c.is_compatible(a) {
        return Err(defect(a, format!("Θ_{} is not a congruence", a.element_name(g))));
    }
    Ok(c)
}

/// The partition into Płonka fibres; `J2`-compatibility is asserted.
pub fn fibre_congruence(a: &FiniteAlgebra) -> Result<Congruence> {
    require(a, AxiomSetName::K)?;
    let c = labels_of(a, |x, y| same_fibre(a, x, y))?;
    if !c.is_compatible(a) {
        return Err(defect(a, "fibre partition is not a congruence"));
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HsClass {
    Trivial,
    B2,
    SL2,
    WKe,
    None,
}

/// Which member of HS of the generator `a` is isomorphic to, if any.
/// Algebras without `J2` are compared with the reducts.
pub fn hs_wke_classify(a: &FiniteAlgebra) -> HsClass {
    let members = [
        (HsClass::Trivial, fixtures::trivial_bochvar()),
        (HsClass::B2, fixtures::b2_bochvar()),
        (HsClass::SL2, fixtures::sl2_bochvar()),
        (HsClass::WKe, fixtures::wke()),
    ];
    for (class, m) in members {
        let m = if a.has_j2() { m } else { m.reduct() };
        if matches!(find_isomorphism(a, &m), Ok(Some(_))) {
            return class;
        }
    }
    HsClass::None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IspVerdict {
    pub bca_member: bool,
    /// Homomorphisms into the generator that jointly separate points.
    pub embedding: Option<Vec<Homomorphism>>,
}

impl IspVerdict {
    pub fn agree(&self) -> bool {
        self.bca_member == self.embedding.is_some()
    }
}

/// Checks BCA membership twice: through the axioms and through a
/// separating family of homomorphisms into the generator.
pub fn isp_wke_check(a: &FiniteAlgebra, bound: usize) -> Result<IspVerdict> {
    if a.size() > bound {
        return Err(VarietyError::BoundExceeded { algebra: a.name().to_string(), size: a.size(), bound });
    }
    if !a.has_j2() {
        return Err(VarietyError::NoJ2(a.name().to_string()));
    }
    let bca_member = satisfies(a, AxiomSetName::Bca).expect("J2 present");
    let homs = enumerate_homs(a, &fixtures::wke())?;
    let mut chosen: Vec<Homomorphism> = Vec::new();
    let separated = |chosen: &[Homomorphism], x: Elem, y: Elem| chosen.iter().any(|h| h.apply(x) != h.apply(y));
    for h in homs {
        let new = a.carrier().any(|x| (x + 1..a.size()).any(|y| h.apply(x) != h.apply(y) && !separated(&chosen, x, y)));
        if new {
            chosen.push(h);
        }
    }
    let all = a.carrier().all(|x| (x + 1..a.size()).all(|y| separated(&chosen, x, y)));
    Ok(IspVerdict { bca_member, embedding: all.then_some(chosen) })
}

/// `O(A) = {a : J2 a = a}`, cross-checked against the image of `J2`.
pub fn open_elements(a: &FiniteAlgebra) -> Result<BTreeSet<Elem>> {
    require(a, AxiomSetName::K)?;
    let j = |x: Elem| a.j2(x).unwrap();
    let fixed: BTreeSet<Elem> = a.carrier().filter(|&x| j(x) == x).collect();
    let image: BTreeSet<Elem> = a.carrier().map(j).collect();
    if fixed != image {
        return Err(defect(a, "fixed points of J2 differ from its image"));
    }
    Ok(fixed)
}

/// `D(A) = {a : J2 a = 0}`, cross-checked against the image of `x & -x`.
pub fn dense_elements(a: &FiniteAlgebra) -> Result<BTreeSet<Elem>> {
    require(a, AxiomSetName::K)?;
    let kernel: BTreeSet<Elem> = a.carrier().filter(|&x| a.j2(x).unwrap() == a.zero()).collect();
    let image: BTreeSet<Elem> = a.carrier().map(|x| a.and(x, a.not(x))).collect();
    if kernel != image {
        return Err(defect(a, "J2-kernel of 0 differs from the image of x & -x"));
    }
    Ok(kernel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdDecomposition {
    pub open: Vec<Elem>,
    pub dense: Vec<Elem>,
    /// Subalgebra on `O(A)`.
    pub open_part: FiniteAlgebra,
    /// Semilattice on `D(A)`: restricted `&` and `|`, identity negation,
    /// `0 = 1 = 0^A` and `J2` constantly `0`.
    pub dense_part: FiniteAlgebra,
    pub product: FiniteAlgebra,
    /// `a ↦ <J2 a, a & -a>` into `product`.
    pub embedding: Homomorphism,
    pub onto: bool,
}

/// Embeds a member of V into `O(A) × D(A)`, verifying each step.
pub fn od_embedding(a: &FiniteAlgebra) -> Result<OdDecomposition> {
    require(a, AxiomSetName::V)?;
    let open: Vec<Elem> = open_elements(a)?.into_iter().collect();
    let dense: Vec<Elem> = dense_elements(a)?.into_iter().collect();
    let open_set: BTreeSet<Elem> = open.iter().copied().collect();
    if subuniverse_generated(a, open.iter().copied()) != open_set {
        return Err(defect(a, "O(A) is not a subuniverse"));
    }
    let (open_part, _) = subalgebra(a, &open_set, format!("O({})", a.name()))?;
    if !is_boolean(&open_part) {
        return Err(defect(a, "O(A) is not Boolean"));
    }
    let pos = |set: &[Elem], x: Elem| set.iter().position(|&y| y == x);
    let dpos = |x: Elem| pos(&dense, x).ok_or_else(|| defect(a, "D(A) is not closed"));
    let mut and = Vec::new();
    let mut or = Vec::new();
    for &x in &dense {
        for &y in &dense {
            and.push(dpos(a.and(x, y))?);
            or.push(dpos(a.or(x, y))?);
        }
    }
    let z = dpos(a.zero())?;
    let dense_part = FiniteAlgebra::new(
        format!("D({})", a.name()),
        dense.iter().map(|&x| a.element_name(x).to_string()).collect(),
        and,
        or,
        (0..dense.len()).collect(),
        Some(vec![z; dense.len()]),
        z,
        z,
    )?;
    let theta = Congruence::from_labels(&a.carrier().map(|x| a.and(x, a.not(x))).collect::<Vec<_>>());
    let (quotient, _) = quotient_algebra(a, &theta).map_err(|_| defect(a, "x & -x = y & -y is not a congruence"))?;
    if find_isomorphism(&quotient, &dense_part)?.is_none() {
        return Err(defect(a, "D(A) is not isomorphic to the quotient by x & -x = y & -y"));
    }
    let product = direct_product(&open_part, &dense_part)?;
    let m = dense.len();
    let embedding = Homomorphism::new(
        a.carrier()
            .map(|x| pos(&open, a.j2(x).unwrap()).unwrap() * m + pos(&dense, a.and(x, a.not(x))).unwrap())
            .collect(),
    );
    if !embedding.is_injective() || !embedding.is_homomorphism(a, &product) {
        return Err(defect(a, "x ↦ <J2 x, x & -x> is not an embedding"));
    }
    let onto = embedding.is_surjective_onto(product.size());
    Ok(OdDecomposition { open, dense, open_part, dense_part, product, embedding, onto })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndependenceClass {
    Boolean,
    Semilattice,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceVerdict {
    pub class: IndependenceClass,
    /// First failing valuation as `x=..,y=..`, if any.
    pub failure: Option<String>,
}

impl IndependenceVerdict {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// The term `J2 x | (J2 x & y)`.
pub fn independence_term() -> Term {
    crate::terms::parse_term("J2 x | (J2 x & y)").expect("fixed text")
}

/// Checks `φ(x,y) = x` on BA_rel members and `φ(x,y) = y` on SL_rel
/// members over all pairs.
pub fn independence_check(a: &FiniteAlgebra) -> Result<IndependenceVerdict> {
    if !a.has_j2() {
        return Err(VarietyError::NoJ2(a.name().to_string()));
    }
    let ba = satisfies(a, AxiomSetName::BaRel).expect("J2 present");
    let sl = satisfies(a, AxiomSetName::SlRel).expect("J2 present");
    let class = match (ba, sl) {
        (true, true) => IndependenceClass::Both,
        (true, false) => IndependenceClass::Boolean,
        (false, true) => IndependenceClass::Semilattice,
        (false, false) => return Err(VarietyError::NeitherClass(a.name().to_string())),
    };
    let vars = vec!["x".to_string(), "y".to_string()];
    let phi = crate::terms::Node::compile(&independence_term(), &vars);
    let failure = valuations(a.size(), 2)
        .find(|v| {
            let value = phi.eval(a, v);
            (ba && value != v[0]) || (sl && value != v[1])
        })
        .map(|v| format!("x={},y={}", a.element_name(v[0]), a.element_name(v[1])));
    Ok(IndependenceVerdict { class, failure })
}
