//! Semilattice direct systems, the Płonka sum over them, and the inverse
//! decomposition of an involutive bisemilattice into fibres.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::algebra::{AlgebraError, Elem, FiniteAlgebra, Homomorphism, Violation};
use crate::axioms::{check_axiom_set, axiom_set, AxiomSetName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlonkaError {
    #[error("invalid semilattice direct system: {}", render(.0))]
    InvalidSystem(Vec<Violation>),
    #[error("fibre `{0}` has a J2 table; sums are taken over J2-free fibres")]
    FibreHasJ2(String),
    #[error("`{algebra}` is not an involutive bisemilattice ({label} fails at {at})")]
    NotIbsl { algebra: String, label: String, at: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn render(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Fibres indexed by a finite lower-bounded join-semilattice, with element
/// maps `p_ij` for `i ≤ j`. Only covering pairs need to be supplied in
/// `homs`; longer composites are derived and any supplied ones are checked
/// against them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilatticeDirectSystem {
    pub index: Vec<String>,
    /// Pairs `(i, j)` with `i ≤ j`; closed reflexively and transitively.
    pub order: Vec<(usize, usize)>,
    pub fibres: Vec<FiniteAlgebra>,
    pub homs: BTreeMap<(usize, usize), Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemReport {
    pub violations: Vec<Violation>,
    /// Every `p_ij` is onto.
    pub all_surjective: bool,
    /// Indices `i` whose map `p_{i0 i}` out of the bottom fibre is injective.
    pub injective_from_bottom: Vec<usize>,
}

impl SystemReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Order, joins and every map `p_ij` of a valid system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedSystem {
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    maps: Vec<Vec<Option<Vec<Elem>>>>,
}

impl ResolvedSystem {
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// `p_ij` as a local element map; `None` unless `i ≤ j`.
    pub fn map(&self, i: usize, j: usize) -> Option<&[Elem]> {
        self.maps[i][j].as_deref()
    }
}

fn pair_label(s: &SemilatticeDirectSystem, i: usize, j: usize) -> String {
    format!("{}->{}", s.index[i], s.index[j])
}

/// Checks every invariant and, when all hold, returns the resolved system.
fn resolve(s: &SemilatticeDirectSystem) -> (SystemReport, Option<ResolvedSystem>) {
    let n = s.index.len();
    let mut bad = Vec::new();
    let done = |bad: Vec<Violation>| {
        (SystemReport { violations: bad, all_surjective: false, injective_from_bottom: Vec::new() }, None)
    };
    if n == 0 {
        bad.push(Violation::new("index", "", "index set is empty"));
        return done(bad);
    }
    if s.fibres.len() != n {
        bad.push(Violation::new("fibres", "", format!("expected {n} fibres, found {}", s.fibres.len())));
        return done(bad);
    }
    for (i, f) in s.fibres.iter().enumerate() {
        if !f.same_signature(&s.fibres[0]) {
            bad.push(Violation::new("fibres", &s.index[i], "signature differs from the first fibre"));
        }
    }
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j) in &s.order {
        if i >= n || j >= n {
            bad.push(Violation::new("order", format!("{i},{j}"), "index out of range"));
        } else {
            leq[i][j] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if leq[i][j] && leq[j][i] {
                bad.push(Violation::new("order", pair_label(s, i, j), "order is not antisymmetric"));
            }
        }
    }
    if !bad.is_empty() {
        return done(bad);
    }
    let bottoms: Vec<usize> = (0..n).filter(|&b| (0..n).all(|i| leq[b][i])).collect();
    if bottoms.len() != 1 {
        bad.push(Violation::new("order", "", "index has no least element"));
    }
    let mut join = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let ub: Vec<usize> = (0..n).filter(|&k| leq[i][k] && leq[j][k]).collect();
            match ub.iter().find(|&&k| ub.iter().all(|&u| leq[k][u])) {
                Some(&k) => join[i][j] = k,
                None => bad.push(Violation::new("order", format!("{},{}", s.index[i], s.index[j]), "no least upper bound")),
            }
        }
    }
    for (&(i, j), table) in &s.homs {
        if i >= n || j >= n {
            bad.push(Violation::new("homs", format!("{i}->{j}"), "index out of range"));
            continue;
        }
        let cell = pair_label(s, i, j);
        if !leq[i][j] {
            bad.push(Violation::new("homs", cell, "pair is not related in the index order"));
            continue;
        }
        let (src, tgt) = (&s.fibres[i], &s.fibres[j]);
        if table.len() != src.size() || table.iter().any(|&v| v >= tgt.size()) {
            bad.push(Violation::new("homs", cell, "map is not total into the target fibre"));
        } else if !Homomorphism::new(table.clone()).is_homomorphism(src, tgt) {
            bad.push(Violation::new("homs", cell, "map is not a homomorphism"));
        } else if i == j && *table != (0..src.size()).collect::<Vec<_>>() {
            bad.push(Violation::new("homs", cell, "p_ii is not the identity"));
        }
    }
    if !bad.is_empty() {
        return done(bad);
    }
    // Derive p_ij along supplied edges, comparing every path against the
    // first one that reached j.
    let mut edges: Vec<Vec<(usize, &Vec<Elem>)>> = vec![Vec::new(); n];
    for (&(i, j), t) in &s.homs {
        if i != j {
            edges[i].push((j, t));
        }
    }
    let mut maps: Vec<Vec<Option<Vec<Elem>>>> = vec![vec![None; n]; n];
    for i in 0..n {
        maps[i][i] = Some((0..s.fibres[i].size()).collect());
        let mut queue = VecDeque::from([i]);
        while let Some(j) = queue.pop_front() {
            let pij = maps[i][j].clone().expect("queued with a map");
            for &(k, pjk) in &edges[j] {
                let cand: Vec<Elem> = pij.iter().map(|&e| pjk[e]).collect();
                match &maps[i][k] {
                    None => {
                        maps[i][k] = Some(cand);
                        queue.push_back(k);
                    }
                    Some(prev) if *prev != cand => {
                        bad.push(Violation::new("homs", pair_label(s, i, k), "composites along different paths disagree"));
                    }
                    Some(_) => {}
                }
            }
        }
        for j in 0..n {
            if leq[i][j] && maps[i][j].is_none() {
                bad.push(Violation::new("homs", pair_label(s, i, j), "no homomorphism path for related pair"));
            }
        }
    }
    bad.dedup();
    if !bad.is_empty() {
        return done(bad);
    }
    let bottom = bottoms[0];
    let all_surjective = (0..n).all(|i| {
        (0..n).all(|j| {
            maps[i][j].as_ref().is_none_or(|m| Homomorphism::new(m.clone()).is_surjective_onto(s.fibres[j].size()))
        })
    });
    let injective_from_bottom = (0..n)
        .filter(|&i| Homomorphism::new(maps[bottom][i].clone().unwrap()).is_injective())
        .collect();
    (
        SystemReport { violations: Vec::new(), all_surjective, injective_from_bottom },
        Some(ResolvedSystem { leq, join, bottom, maps }),
    )
}

pub fn validate_system(s: &SemilatticeDirectSystem) -> SystemReport {
    resolve(s).0
}

/// A Płonka decomposition: the source algebra, its direct system and the
/// position of every element in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub source: FiniteAlgebra,
    pub system: SemilatticeDirectSystem,
    resolved: ResolvedSystem,
    fibre_of: Vec<usize>,
    local: Vec<Elem>,
    members: Vec<Vec<Elem>>,
}

impl Decomposition {
    pub fn fibre_count(&self) -> usize {
        self.members.len()
    }

    pub fn resolved(&self) -> &ResolvedSystem {
        &self.resolved
    }

    pub fn fibre_of(&self, e: Elem) -> usize {
        self.fibre_of[e]
    }

    /// Position of `e` inside its fibre.
    pub fn local(&self, e: Elem) -> Elem {
        self.local[e]
    }

    /// Source elements of fibre `i`, in fibre order.
    pub fn members(&self, i: usize) -> &[Elem] {
        &self.members[i]
    }

    pub fn global(&self, i: usize, local: Elem) -> Elem {
        self.members[i][local]
    }

    pub fn fibre(&self, i: usize) -> &FiniteAlgebra {
        &self.system.fibres[i]
    }

    pub fn bottom(&self) -> usize {
        self.resolved.bottom
    }

    /// `1_i`, the top of fibre `i`.
    pub fn fibre_top(&self, i: usize) -> Elem {
        self.global(i, self.fibre(i).one())
    }

    /// `0_i`, the bottom of fibre `i`.
    pub fn fibre_bottom(&self, i: usize) -> Elem {
        self.global(i, self.fibre(i).zero())
    }

    pub fn is_trivial_fibre(&self, i: usize) -> bool {
        self.members[i].len() == 1
    }

    /// The fibre partition as a congruence label vector.
    pub fn fibre_labels(&self) -> &[usize] {
        &self.fibre_of
    }

    /// Map from the carrier of `plonka_sum(&self.system)` to the source.
    pub fn reconstruction_map(&self) -> Homomorphism {
        Homomorphism::new(self.members.iter().flatten().copied().collect())
    }
}

/// The Płonka sum. Elements are named `i:e` and ordered by fibre, then by
/// position inside the fibre; constants come from the bottom fibre.
pub fn plonka_sum(s: &SemilatticeDirectSystem) -> Result<(FiniteAlgebra, Decomposition), PlonkaError> {
    let (report, resolved) = resolve(s);
    let r = resolved.ok_or(PlonkaError::InvalidSystem(report.violations))?;
    if let Some(f) = s.fibres.iter().find(|f| f.has_j2()) {
        return Err(PlonkaError::FibreHasJ2(f.name().to_string()));
    }
    let mut members = Vec::new();
    let mut fibre_of = Vec::new();
    let mut local = Vec::new();
    let mut names = Vec::new();
    for (i, f) in s.fibres.iter().enumerate() {
        let start = fibre_of.len();
        members.push((start..start + f.size()).collect::<Vec<_>>());
        for e in f.carrier() {
            fibre_of.push(i);
            local.push(e);
            names.push(format!("{}:{}", s.index[i], f.element_name(e)));
        }
    }
    let push = |x: Elem, k: usize| r.map(fibre_of[x], k).expect("k above")[local[x]];
    let binary = |x: Elem, y: Elem, op: fn(&FiniteAlgebra, Elem, Elem) -> Elem| {
        let k = r.join(fibre_of[x], fibre_of[y]);
        members[k][op(&s.fibres[k], push(x, k), push(y, k))]
    };
    let b = r.bottom();
    let name = format!("PL({})", s.fibres.iter().map(|f| f.name()).collect::<Vec<_>>().join(","));
    let algebra = FiniteAlgebra::from_fns(
        name,
        names,
        |x, y| binary(x, y, FiniteAlgebra::and),
        |x, y| binary(x, y, FiniteAlgebra::or),
        |x| members[fibre_of[x]][s.fibres[fibre_of[x]].not(local[x])],
        None,
        members[b][s.fibres[b].zero()],
        members[b][s.fibres[b].one()],
    )?;
    let decomposition = Decomposition {
        source: algebra.clone(),
        system: s.clone(),
        resolved: r,
        fibre_of,
        local,
        members,
    };
    Ok((algebra, decomposition))
}

/// `a` and `b` lie in the same fibre iff `a & (a | b) = a` and
/// `b & (b | a) = b`.
pub fn same_fibre(a: &FiniteAlgebra, x: Elem, y: Elem) -> bool {
    a.and(x, a.or(x, y)) == x && a.and(y, a.or(y, x)) == y
}

/// Recovers the Płonka decomposition of the reduct of `a`. Fibres are
/// numbered by least member and named after the name of their top element;
/// every related pair of indices gets an explicit map.
pub fn decompose(a: &FiniteAlgebra) -> Result<Decomposition, PlonkaError> {
    let reduct = a.reduct();
    let report = check_axiom_set(&reduct, &axiom_set(AxiomSetName::Ibsl)).expect("J2-free catalog");
    if let Some(f) = report.first_failure() {
        return Err(PlonkaError::NotIbsl {
            algebra: a.name().to_string(),
            label: f.label.clone(),
            at: f.counterexample.clone().unwrap_or_default(),
        });
    }
    let mut members: Vec<Vec<Elem>> = Vec::new();
    let mut fibre_of = vec![usize::MAX; a.size()];
    for x in a.carrier() {
        if fibre_of[x] != usize::MAX {
            continue;
        }
        let class: Vec<Elem> = a.carrier().filter(|&y| same_fibre(a, x, y)).collect();
        for &y in &class {
            fibre_of[y] = members.len();
        }
        members.push(class);
    }
    let n = members.len();
    let mut local = vec![0; a.size()];
    for m in &members {
        for (k, &x) in m.iter().enumerate() {
            local[x] = k;
        }
    }
    // i ≤ j iff joining an element of A_i with one of A_j lands in A_j.
    let leq = |i: usize, j: usize| fibre_of[a.or(members[i][0], members[j][0])] == j;
    let bottom = (0..n).find(|&i| (0..n).all(|j| leq(i, j))).expect("IBSL has a bottom fibre");
    let p = |x: Elem, j: usize| a.and(x, a.or(x, members[j][0]));
    let (zero, one) = (a.zero(), a.one());
    let mut fibres = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let loc = |x: Elem| local[x];
        let g = |k: Elem| m[k];
        let f = FiniteAlgebra::from_fns(
            format!("{}[{}]", a.name(), i),
            m.iter().map(|&x| a.element_name(x).to_string()).collect(),
            |x, y| loc(a.and(g(x), g(y))),
            |x, y| loc(a.or(g(x), g(y))),
            |x| loc(a.not(g(x))),
            None,
            loc(p(zero, i)),
            loc(p(one, i)),
        )?;
        fibres.push(f);
    }
    let index = (0..n).map(|i| a.element_name(members[i][fibres[i].one()]).to_string()).collect();
    let mut order = Vec::new();
    let mut homs = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) {
                order.push((i, j));
                homs.insert((i, j), members[i].iter().map(|&x| local[p(x, j)]).collect());
            }
        }
    }
    let system = SemilatticeDirectSystem { index, order, fibres, homs };
    let (report, resolved) = resolve(&system);
    let resolved = resolved.ok_or(PlonkaError::InvalidSystem(report.violations))?;
    debug_assert_eq!(resolved.bottom(), bottom);
    Ok(Decomposition { source: a.clone(), system, resolved, fibre_of, local, members })
}

/// Number of elements with `-a = a`.
pub fn count_fixpoints(a: &FiniteAlgebra) -> usize {
    a.carrier().filter(|&x| a.not(x) == x).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{are_isomorphic, direct_product};
    use crate::axioms::satisfies;
    use crate::boolean::is_boolean;
    use crate::fixtures::*;

    #[test]
    fn wk_system_is_valid_and_sums_to_wk() {
        let s = wk_system();
        let r = validate_system(&s);
        assert!(r.is_valid(), "{:?}", r.violations);
        assert!(r.all_surjective);
        assert_eq!(r.injective_from_bottom, vec![0]);
        let (sum, d) = plonka_sum(&s).unwrap();
        assert!(are_isomorphic(&sum, &wk()));
        let (one, k) = (sum.element("o:1").unwrap(), sum.element("k:0").unwrap());
        assert_eq!(sum.or(one, k), k);
        assert_eq!(d.fibre_count(), 2);
    }

    #[test]
    fn forb8_system() {
        let s = crate::fixtures::forb8_system();
        assert!(validate_system(&s).is_valid());
        let a = forb8();
        assert_eq!(a.size(), 7);
        let e = |n: &str| a.element(n).unwrap();
        assert_eq!(a.or(e("i:0"), e("j:1")), e("k:0"));
        assert!(satisfies(&a, AxiomSetName::Sibsl).unwrap());
    }

    #[test]
    fn incompatible_system_reports_one_violation() {
        // Chain o < m < k; the supplied o->k projects onto q while the
        // composite through m projects onto p.
        let s = SemilatticeDirectSystem {
            index: vec!["o".into(), "m".into(), "k".into()],
            order: vec![(0, 1), (1, 2)],
            fibres: vec![b4(), b4(), b2()],
            homs: BTreeMap::from([((0, 1), vec![0, 1, 2, 3]), ((1, 2), vec![0, 1, 0, 1]), ((0, 2), vec![0, 0, 1, 1])]),
        };
        let r = validate_system(&s);
        assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
        assert_eq!(r.violations[0].cell, "o->k");
        let mut ok = s.clone();
        ok.homs.insert((0, 2), vec![0, 1, 0, 1]);
        assert!(validate_system(&ok).is_valid());
    }

    #[test]
    fn shape_violations() {
        let mut s = wk_system();
        s.order.push((1, 0));
        assert!(!validate_system(&s).is_valid());
        let mut s = wk_system();
        s.homs.clear();
        let r = validate_system(&s);
        assert_eq!(r.violations.len(), 1);
        let mut s = wk_system();
        s.homs.insert((0, 1), vec![0]);
        assert!(!validate_system(&s).is_valid());
        // Two incomparable maximal elements: no join.
        let s = SemilatticeDirectSystem {
            index: vec!["o".into(), "a".into(), "b".into()],
            order: vec![(0, 1), (0, 2)],
            fibres: vec![b2(), trivial(), trivial()],
            homs: BTreeMap::from([((0, 1), vec![0, 0]), ((0, 2), vec![0, 0])]),
        };
        let r = validate_system(&s);
        assert!(r.violations.iter().any(|v| v.reason == "no least upper bound"));
    }

    #[test]
    fn single_fibre_sum_is_the_fibre() {
        let s = SemilatticeDirectSystem {
            index: vec!["o".into()],
            order: vec![],
            fibres: vec![b4()],
            homs: BTreeMap::new(),
        };
        let (sum, _) = plonka_sum(&s).unwrap();
        assert!(are_isomorphic(&sum, &b4()));
        assert!(is_boolean(&sum));
    }

    #[test]
    fn sums_reject_j2_fibres() {
        let mut s = wk_system();
        s.fibres[0] = b2_bochvar();
        s.fibres[1] = trivial_bochvar();
        assert!(matches!(plonka_sum(&s), Err(PlonkaError::FibreHasJ2(_))));
    }

    #[test]
    fn decompositions() {
        let d = decompose(&wk()).unwrap();
        assert_eq!(d.fibre_count(), 2);
        let a = wk();
        let half = a.element("half").unwrap();
        assert_eq!(d.members(0), &[0, 2]);
        assert_eq!(d.members(1), &[half]);
        assert_eq!(d.resolved().map(0, 1).unwrap(), &[0, 0]);
        assert_eq!(d.system.index, vec!["1", "half"]);

        assert_eq!(decompose(&b4()).unwrap().fibre_count(), 1);
        let d = decompose(&sl2()).unwrap();
        assert_eq!(d.fibre_count(), 2);
        assert!(d.is_trivial_fibre(0) && d.is_trivial_fibre(1));
        assert_eq!(decompose(&trivial()).unwrap().fibre_count(), 1);
    }

    #[test]
    fn decompose_rejects_non_ibsl() {
        let bad = FiniteAlgebra::new(
            "bad",
            vec!["0".into(), "1".into()],
            vec![0, 0, 0, 1],
            vec![0, 1, 1, 1],
            vec![0, 1],
            None,
            0,
            1,
        )
        .unwrap();
        assert!(matches!(decompose(&bad), Err(PlonkaError::NotIbsl { .. })));
    }

    #[test]
    fn round_trips_on_fixtures() {
        let prod = direct_product(&wk(), &b2()).unwrap();
        for a in [wk(), b4(), sl2(), forb8(), trivial(), prod] {
            let d = decompose(&a).unwrap();
            assert!(validate_system(&d.system).is_valid());
            let (sum, d2) = plonka_sum(&d.system).unwrap();
            let back = d.reconstruction_map();
            assert!(back.is_homomorphism(&sum, &a), "{}", a.name());
            assert!(back.is_injective() && back.is_surjective_onto(a.size()));
            assert_eq!(decompose(&sum).unwrap().fibre_count(), d2.fibre_count());
            for x in a.carrier() {
                for y in a.carrier() {
                    assert_eq!(d.fibre_of(x) == d.fibre_of(y), same_fibre(&a, x, y));
                }
            }
        }
    }

    #[test]
    fn fixpoints() {
        assert_eq!(count_fixpoints(&wk()), 1);
        assert_eq!(count_fixpoints(&b4()), 0);
        assert_eq!(count_fixpoints(&sl2()), 2);
    }
}
