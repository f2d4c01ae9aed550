//! Finite Boolean algebras as powersets of atoms, their filters, the filter
//! congruences `a ~ b iff (-a | b) & (-b | a) ∈ F`, and the unit
//! meet-subsemilattices that make up Bochvar systems.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{quotient_algebra, AlgebraError, Congruence, Elem, FiniteAlgebra, Homomorphism};
use crate::axioms::{check_axiom_set, AxiomSetName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BooleanError {
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("`{0}` is not a Boolean algebra")]
    NotBoolean(String),
    #[error("not a filter: {0}")]
    NotFilter(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A finite Boolean algebra together with its atom structure. Every
/// element corresponds to the set of atoms below it; `mask(e)` encodes that
/// set with bit `k` standing for the `k`-th atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanAlgebra {
    algebra: FiniteAlgebra,
    atoms: Vec<Elem>,
    masks: Vec<u32>,
    by_mask: Vec<Elem>,
}

/// Canonical name of the atom subset `mask`: `0` for the empty set and the
/// atom names joined by `+` otherwise.
fn canonical_name(atoms: &[String], mask: u32) -> String {
    if mask == 0 {
        return "0".into();
    }
    atoms
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, a)| a.as_str())
        .collect::<Vec<_>>()
        .join("+")
}

/// The powerset algebra over `names`, carrier ordered by atom bitmask.
pub fn boolean_from_atoms<S: AsRef<str>>(names: &[S]) -> Result<BooleanAlgebra, BooleanError> {
    let atoms: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
    let mut seen = BTreeSet::new();
    for a in &atoms {
        if !seen.insert(a) {
            return Err(BooleanError::DuplicateAtom(a.clone()));
        }
    }
    let k = atoms.len();
    assert!(k < 16, "too many atoms");
    let n = 1usize << k;
    let full = (n - 1) as u32;
    let name = if k == 0 { "B1".to_string() } else { format!("B{n}") };
    let algebra = FiniteAlgebra::from_fns(
        name,
        (0..n as u32).map(|m| canonical_name(&atoms, m)).collect(),
        |a, b| a & b,
        |a, b| a | b,
        |a| (!(a as u32) & full) as usize,
        None,
        0,
        n - 1,
    )?;
    Ok(BooleanAlgebra {
        algebra,
        atoms: (0..k).map(|i| 1 << i).collect(),
        masks: (0..n as u32).collect(),
        by_mask: (0..n).collect(),
    })
}

/// Exhaustive check of I1–I8 plus `x | -x = 1`.
pub fn is_boolean(a: &FiniteAlgebra) -> bool {
    let ibsl = check_axiom_set(a, &crate::axioms::axiom_set(AxiomSetName::Ibsl)).expect("IBSL is J2-free");
    ibsl.passes() && a.carrier().all(|x| a.or(x, a.not(x)) == a.one())
}

impl BooleanAlgebra {
    /// Reads the atom structure off an algebra that passes [`is_boolean`].
    /// Any `J2` table is dropped.
    pub fn from_algebra(a: &FiniteAlgebra) -> Result<BooleanAlgebra, BooleanError> {
        let a = a.reduct();
        if !is_boolean(&a) {
            return Err(BooleanError::NotBoolean(a.name().to_string()));
        }
        let leq = |x: Elem, y: Elem| a.and(x, y) == x;
        let atoms: Vec<Elem> = a
            .carrier()
            .filter(|&x| x != a.zero() && a.carrier().all(|y| !leq(y, x) || y == x || y == a.zero()))
            .collect();
        let masks: Vec<u32> = a
            .carrier()
            .map(|x| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, &at)| leq(at, x))
                    .fold(0u32, |m, (k, _)| m | 1 << k)
            })
            .collect();
        let mut by_mask = vec![usize::MAX; 1 << atoms.len()];
        for x in a.carrier() {
            let slot = by_mask.get_mut(masks[x] as usize).ok_or_else(|| BooleanError::NotBoolean(a.name().into()))?;
            if *slot != usize::MAX {
                return Err(BooleanError::NotBoolean(a.name().into()));
            }
            *slot = x;
        }
        if by_mask.contains(&usize::MAX) {
            return Err(BooleanError::NotBoolean(a.name().into()));
        }
        Ok(BooleanAlgebra { algebra: a, atoms, masks, by_mask })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn atoms(&self) -> &[Elem] {
        &self.atoms
    }

    pub fn mask(&self, e: Elem) -> u32 {
        self.masks[e]
    }

    pub fn from_mask(&self, m: u32) -> Elem {
        self.by_mask[m as usize]
    }

    pub fn top(&self) -> Elem {
        self.algebra.one()
    }

    pub fn bottom(&self) -> Elem {
        self.algebra.zero()
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.masks[a] & !self.masks[b] == 0
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.algebra.and(a, b)
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.algebra.or(a, b)
    }

    pub fn complement(&self, a: Elem) -> Elem {
        self.algebra.not(a)
    }

    pub fn name_of(&self, e: Elem) -> &str {
        self.algebra.element_name(e)
    }

    /// Looks an element up by name; `1` always names the top.
    pub fn element(&self, name: &str) -> Result<Elem, BooleanError> {
        match self.algebra.element(name) {
            Some(e) => Ok(e),
            None if name == "1" => Ok(self.top()),
            None => Err(BooleanError::UnknownElement(name.to_string())),
        }
    }

    /// Elements of the interval `[0, g]`.
    pub fn down_set(&self, g: Elem) -> Vec<Elem> {
        self.algebra.carrier().filter(|&x| self.leq(x, g)).collect()
    }
}

/// A lattice filter of a Boolean algebra, stored extensionally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    members: BTreeSet<Elem>,
}

impl Filter {
    /// Checks the filter conditions: contains 1, upward closed, closed
    /// under meets.
    pub fn new(b: &BooleanAlgebra, members: BTreeSet<Elem>) -> Result<Filter, BooleanError> {
        let render = || b.algebra.names(members.iter().copied()).join(",");
        if !members.contains(&b.top()) {
            return Err(BooleanError::NotFilter(format!("{{{}}} lacks 1", render())));
        }
        for &x in &members {
            for y in b.algebra.carrier() {
                if b.leq(x, y) && !members.contains(&y) {
                    return Err(BooleanError::NotFilter(format!("{{{}}} is not upward closed", render())));
                }
                if members.contains(&y) && !members.contains(&b.meet(x, y)) {
                    return Err(BooleanError::NotFilter(format!("{{{}}} is not meet closed", render())));
                }
            }
        }
        Ok(Filter { members })
    }

    pub fn members(&self) -> &BTreeSet<Elem> {
        &self.members
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.members.contains(&e)
    }

    /// The least member; finite filters are principal.
    pub fn generator(&self, b: &BooleanAlgebra) -> Elem {
        self.members.iter().fold(b.top(), |acc, &x| b.meet(acc, x))
    }
}

/// `[g) = { x : g <= x }`.
pub fn principal_filter(b: &BooleanAlgebra, g: Elem) -> Result<Filter, BooleanError> {
    if g >= b.size() {
        return Err(BooleanError::UnknownElement(g.to_string()));
    }
    Ok(Filter { members: b.algebra.carrier().filter(|&x| b.leq(g, x)).collect() })
}

/// The congruence relating `a, b` iff `(-a | b) & (-b | a)` lies in `f`.
pub fn filter_congruence(b: &BooleanAlgebra, f: &Filter) -> Result<Congruence, BooleanError> {
    let f = Filter::new(b, f.members.clone())?;
    let a = &b.algebra;
    let biimp = |x: Elem, y: Elem| a.and(a.or(a.not(x), y), a.or(a.not(y), x));
    // Label each element by the least element related to it.
    let labels: Vec<usize> = a
        .carrier()
        .map(|x| a.carrier().find(|&y| f.contains(biimp(x, y))).unwrap())
        .collect();
    let c = Congruence::from_labels(&labels);
    debug_assert!(a.carrier().all(|x| a.carrier().all(|y| c.related(x, y) == f.contains(biimp(x, y)))));
    Ok(c)
}

/// `B/F` with its projection.
pub fn quotient_by_filter(b: &BooleanAlgebra, f: &Filter) -> Result<(FiniteAlgebra, Homomorphism), BooleanError> {
    let c = filter_congruence(b, f)?;
    let (q, proj) = quotient_algebra(&b.algebra, &c)?;
    let gen = f.generator(b);
    Ok((q.with_name(format!("{}/[{})", b.algebra.name(), b.name_of(gen))), proj))
}

/// `1/ker h = { a : h(a) = h(1) }` for a map out of a Boolean algebra.
pub fn kernel_filter(b: &BooleanAlgebra, target: &FiniteAlgebra, h: &Homomorphism) -> Result<Filter, BooleanError> {
    if !h.is_homomorphism(&b.algebra, target) {
        return Err(BooleanError::Algebra(AlgebraError::Precondition(
            "map is not a homomorphism".into(),
        )));
    }
    let top = h.apply(b.top());
    Filter::new(b, b.algebra.carrier().filter(|&x| h.apply(x) == top).collect())
}

/// Whether `set` contains 1 and is closed under meets.
pub fn is_unit_meet_subsemilattice(b: &BooleanAlgebra, set: &BTreeSet<Elem>) -> bool {
    set.contains(&b.top()) && set.iter().all(|&x| set.iter().all(|&y| set.contains(&b.meet(x, y))))
}

/// Every subset containing 1 and closed under meets, ordered by size and
/// then by member list.
pub fn enumerate_unit_meet_subsemilattices(b: &BooleanAlgebra) -> Vec<BTreeSet<Elem>> {
    let others: Vec<Elem> = b.algebra.carrier().filter(|&x| x != b.top()).collect();
    assert!(others.len() < 32, "carrier too large to enumerate subsets");
    let mut out: Vec<BTreeSet<Elem>> = (0u64..1 << others.len())
        .map(|bits| {
            let mut s: BTreeSet<Elem> =
                others.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &e)| e).collect();
            s.insert(b.top());
            s
        })
        .filter(|s| is_unit_meet_subsemilattice(b, s))
        .collect();
    out.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.iter().cmp(q.iter())));
    out
}
