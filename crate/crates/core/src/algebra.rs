//! Finite algebras over the signature `<and, or, not, J2, 0, 1>` given by
//! operation tables, together with the generic machinery built on them:
//! products, subuniverses, homomorphism search and congruences.
//!
//! Elements are addressed by their position in the carrier (`Elem`). The
//! carrier order is the declaration order and every "canonical" choice made
//! in this crate (block names, search branching, valuation order) follows it.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position of an element in the carrier of a [`FiniteAlgebra`].
pub type Elem = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid algebra: {}", render_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("partition is not a congruence of `{0}`")]
    NotCongruence(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// One defect found while validating a table-level description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub table: String,
    pub cell: String,
    pub reason: String,
}

impl Violation {
    pub fn new(table: impl Into<String>, cell: impl Into<String>, reason: impl Into<String>) -> Self {
        Violation { table: table.into(), cell: cell.into(), reason: reason.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cell.is_empty() {
            write!(f, "{}: {}", self.table, self.reason)
        } else {
            write!(f, "{}[{}]: {}", self.table, self.cell, self.reason)
        }
    }
}

/// The basic operations of the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    And,
    Or,
    Not,
    J2,
}

impl Operation {
    pub fn arity(self) -> usize {
        match self {
            Operation::And | Operation::Or => 2,
            Operation::Not | Operation::J2 => 1,
        }
    }
}

/// Name-level description of an algebra, exactly as it appears in algebra
/// files. It may be malformed; [`validate_algebra`] reports what is wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub name: String,
    pub elements: Vec<String>,
    pub ops: OpsSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpsSpec {
    pub zero: String,
    pub one: String,
    pub not: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2: Option<IndexMap<String, String>>,
    pub and: Vec<Vec<String>>,
    pub or: Vec<Vec<String>>,
}

/// Checks every table of `spec` for totality and for cells naming unknown
/// elements. An empty report means [`FiniteAlgebra::from_spec`] succeeds.
pub fn validate_algebra(spec: &AlgebraSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    let known: HashSet<&str> = spec.elements.iter().map(String::as_str).collect();
    if spec.elements.is_empty() {
        out.push(Violation::new("elements", "", "carrier is empty"));
    }
    let mut seen = HashSet::new();
    for e in &spec.elements {
        if !seen.insert(e.as_str()) {
            out.push(Violation::new("elements", e, "duplicate element name"));
        }
    }
    for (label, value) in [("zero", &spec.ops.zero), ("one", &spec.ops.one)] {
        if !known.contains(value.as_str()) {
            out.push(Violation::new(label, "", format!("unknown element `{value}`")));
        }
    }
    let mut unary = vec![("not", &spec.ops.not)];
    if let Some(j2) = &spec.ops.j2 {
        unary.push(("j2", j2));
    }
    for (label, table) in unary {
        for e in &spec.elements {
            match table.get(e) {
                None => out.push(Violation::new(label, e, "missing entry")),
                Some(v) if !known.contains(v.as_str()) => {
                    out.push(Violation::new(label, e, format!("unknown element `{v}`")))
                }
                Some(_) => {}
            }
        }
        for key in table.keys() {
            if !known.contains(key.as_str()) {
                out.push(Violation::new(label, key, "entry for unknown element"));
            }
        }
    }
    let n = spec.elements.len();
    for (label, table) in [("and", &spec.ops.and), ("or", &spec.ops.or)] {
        if table.len() != n {
            out.push(Violation::new(label, "", format!("expected {n} rows, found {}", table.len())));
        }
        for (r, row) in table.iter().enumerate() {
            let row_name = spec.elements.get(r).map(String::as_str).unwrap_or("?");
            if row.len() != n {
                out.push(Violation::new(
                    label,
                    row_name,
                    format!("expected {n} columns, found {}", row.len()),
                ));
            }
            for (c, v) in row.iter().enumerate() {
                if !known.contains(v.as_str()) {
                    let col_name = spec.elements.get(c).map(String::as_str).unwrap_or("?");
                    out.push(Violation::new(
                        label,
                        format!("{row_name},{col_name}"),
                        format!("unknown element `{v}`"),
                    ));
                }
            }
        }
    }
    out
}

/// A finite algebra of type `<2,2,1,(1),0,0>`; the `J2` table is optional and
/// its absence marks a `J2`-free reduct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    elements: Vec<String>,
    and: Vec<Elem>,
    or: Vec<Elem>,
    not: Vec<Elem>,
    j2: Option<Vec<Elem>>,
    zero: Elem,
    one: Elem,
}

impl FiniteAlgebra {
    /// Builds an algebra from row-major index tables.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        and: Vec<Elem>,
        or: Vec<Elem>,
        not: Vec<Elem>,
        j2: Option<Vec<Elem>>,
        zero: Elem,
        one: Elem,
    ) -> Result<Self, AlgebraError> {
        let n = elements.len();
        let mut bad = Vec::new();
        if n == 0 {
            bad.push(Violation::new("elements", "", "carrier is empty"));
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                bad.push(Violation::new("elements", e, "duplicate element name"));
            }
        }
        let mut check = |label: &str, table: &[Elem], len: usize| {
            if table.len() != len {
                bad.push(Violation::new(label, "", format!("expected {len} cells, found {}", table.len())));
            }
            for (i, &v) in table.iter().enumerate() {
                if v >= n {
                    bad.push(Violation::new(label, i.to_string(), format!("index {v} out of range")));
                }
            }
        };
        check("and", &and, n * n);
        check("or", &or, n * n);
        check("not", &not, n);
        if let Some(t) = &j2 {
            check("j2", t, n);
        }
        check("zero", &[zero], 1);
        check("one", &[one], 1);
        if !bad.is_empty() {
            return Err(AlgebraError::Invalid(bad));
        }
        Ok(FiniteAlgebra { name: name.into(), elements, and, or, not, j2, zero, one })
    }

    /// Builds an algebra by tabulating the given functions.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        name: impl Into<String>,
        elements: Vec<String>,
        and: impl Fn(Elem, Elem) -> Elem,
        or: impl Fn(Elem, Elem) -> Elem,
        not: impl Fn(Elem) -> Elem,
        j2: Option<&dyn Fn(Elem) -> Elem>,
        zero: Elem,
        one: Elem,
    ) -> Result<Self, AlgebraError> {
        let n = elements.len();
        let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));
        let and_t = pairs().map(|(a, b)| and(a, b)).collect();
        let or_t = pairs().map(|(a, b)| or(a, b)).collect();
        let not_t = (0..n).map(&not).collect();
        let j2_t = j2.map(|f| (0..n).map(f).collect());
        Self::new(name, elements, and_t, or_t, not_t, j2_t, zero, one)
    }

    pub fn from_spec(spec: &AlgebraSpec) -> Result<Self, AlgebraError> {
        let report = validate_algebra(spec);
        if !report.is_empty() {
            return Err(AlgebraError::Invalid(report));
        }
        let idx = |s: &str| spec.elements.iter().position(|e| e == s).expect("validated");
        let flat = |t: &Vec<Vec<String>>| t.iter().flatten().map(|s| idx(s)).collect::<Vec<_>>();
        let unary = |m: &IndexMap<String, String>| {
            spec.elements.iter().map(|e| idx(&m[e])).collect::<Vec<_>>()
        };
        Self::new(
            spec.name.clone(),
            spec.elements.clone(),
            flat(&spec.ops.and),
            flat(&spec.ops.or),
            unary(&spec.ops.not),
            spec.ops.j2.as_ref().map(unary),
            idx(&spec.ops.zero),
            idx(&spec.ops.one),
        )
    }

    pub fn to_spec(&self) -> AlgebraSpec {
        let nm = |e: Elem| self.elements[e].clone();
        let unary = |t: &[Elem]| {
            self.carrier().map(|e| (nm(e), nm(t[e]))).collect::<IndexMap<_, _>>()
        };
        let binary = |t: &[Elem]| {
            self.carrier()
                .map(|a| self.carrier().map(|b| nm(t[a * self.size() + b])).collect())
                .collect()
        };
        AlgebraSpec {
            name: self.name.clone(),
            elements: self.elements.clone(),
            ops: OpsSpec {
                zero: nm(self.zero),
                one: nm(self.one),
                not: unary(&self.not),
                j2: self.j2.as_deref().map(unary),
                and: binary(&self.and),
                or: binary(&self.or),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn carrier(&self) -> std::ops::Range<Elem> {
        0..self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_name(&self, e: Elem) -> &str {
        &self.elements[e]
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn require(&self, name: &str) -> Result<Elem, AlgebraError> {
        self.element(name).ok_or_else(|| AlgebraError::UnknownElement(name.to_string()))
    }

    pub fn has_j2(&self) -> bool {
        self.j2.is_some()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn and(&self, a: Elem, b: Elem) -> Elem {
        self.and[a * self.size() + b]
    }

    pub fn or(&self, a: Elem, b: Elem) -> Elem {
        self.or[a * self.size() + b]
    }

    pub fn not(&self, a: Elem) -> Elem {
        self.not[a]
    }

    pub fn j2(&self, a: Elem) -> Option<Elem> {
        self.j2.as_ref().map(|t| t[a])
    }

    pub fn j2_table(&self) -> Option<&[Elem]> {
        self.j2.as_deref()
    }

    /// The operations present in this algebra.
    pub fn operations(&self) -> Vec<Operation> {
        let mut ops = vec![Operation::And, Operation::Or, Operation::Not];
        if self.has_j2() {
            ops.push(Operation::J2);
        }
        ops
    }

    pub fn apply(&self, op: Operation, args: &[Elem]) -> Elem {
        match op {
            Operation::And => self.and(args[0], args[1]),
            Operation::Or => self.or(args[0], args[1]),
            Operation::Not => self.not(args[0]),
            Operation::J2 => self.j2(args[0]).expect("algebra has no J2"),
        }
    }

    /// The `J2`-free reduct.
    pub fn reduct(&self) -> FiniteAlgebra {
        FiniteAlgebra { j2: None, ..self.clone() }
    }

    /// The same reduct expanded by the given `J2` table.
    pub fn with_j2(&self, table: Vec<Elem>) -> Result<FiniteAlgebra, AlgebraError> {
        Self::new(
            self.name.clone(),
            self.elements.clone(),
            self.and.clone(),
            self.or.clone(),
            self.not.clone(),
            Some(table),
            self.zero,
            self.one,
        )
    }

    pub fn same_signature(&self, other: &FiniteAlgebra) -> bool {
        self.has_j2() == other.has_j2()
    }

    fn require_same_signature(&self, other: &FiniteAlgebra) -> Result<(), AlgebraError> {
        if self.same_signature(other) {
            Ok(())
        } else {
            Err(AlgebraError::SignatureMismatch(format!(
                "`{}` {} J2 but `{}` {}",
                self.name,
                if self.has_j2() { "has" } else { "lacks" },
                other.name,
                if other.has_j2() { "has" } else { "lacks" },
            )))
        }
    }

    /// Names of the given elements, in the given order.
    pub fn names(&self, set: impl IntoIterator<Item = Elem>) -> Vec<&str> {
        set.into_iter().map(|e| self.element_name(e)).collect()
    }
}

/// Direct product with carrier ordered lexicographically by (left, right)
/// and pair elements named `(a,b)`.
pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
    a.require_same_signature(b)?;
    let m = b.size();
    let split = |e: Elem| (e / m, e % m);
    let join = |x: Elem, y: Elem| x * m + y;
    let elements = a
        .carrier()
        .flat_map(|x| b.carrier().map(move |y| (x, y)))
        .map(|(x, y)| format!("({},{})", a.element_name(x), b.element_name(y)))
        .collect();
    let j2 = |e: Elem| {
        let (x, y) = split(e);
        join(a.j2(x).unwrap(), b.j2(y).unwrap())
    };
    FiniteAlgebra::from_fns(
        format!("{}x{}", a.name(), b.name()),
        elements,
        |p, q| {
            let ((x1, y1), (x2, y2)) = (split(p), split(q));
            join(a.and(x1, x2), b.and(y1, y2))
        },
        |p, q| {
            let ((x1, y1), (x2, y2)) = (split(p), split(q));
            join(a.or(x1, x2), b.or(y1, y2))
        },
        |p| {
            let (x, y) = split(p);
            join(a.not(x), b.not(y))
        },
        if a.has_j2() { Some(&j2) } else { None },
        join(a.zero(), b.zero()),
        join(a.one(), b.one()),
    )
}

/// The two product projections, as element maps.
pub fn product_projections(a: &FiniteAlgebra, b: &FiniteAlgebra) -> (Homomorphism, Homomorphism) {
    let m = b.size();
    let n = a.size() * m;
    (
        Homomorphism::new((0..n).map(|e| e / m).collect()),
        Homomorphism::new((0..n).map(|e| e % m).collect()),
    )
}

/// Least subset containing `seed` and the constants that is closed under
/// every operation.
pub fn subuniverse_generated(a: &FiniteAlgebra, seed: impl IntoIterator<Item = Elem>) -> BTreeSet<Elem> {
    let mut set: BTreeSet<Elem> = seed.into_iter().collect();
    set.insert(a.zero());
    set.insert(a.one());
    loop {
        let mut next = set.clone();
        for &x in &set {
            next.insert(a.not(x));
            if let Some(j) = a.j2(x) {
                next.insert(j);
            }
            for &y in &set {
                next.insert(a.and(x, y));
                next.insert(a.or(x, y));
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// The subalgebra on a closed subset, with element names inherited. Returns
/// the algebra and the inclusion map (local index to source element).
pub fn subalgebra(
    a: &FiniteAlgebra,
    members: &BTreeSet<Elem>,
    name: impl Into<String>,
) -> Result<(FiniteAlgebra, Vec<Elem>), AlgebraError> {
    if subuniverse_generated(a, members.iter().copied()) != *members {
        return Err(AlgebraError::Precondition(format!(
            "{{{}}} is not a subuniverse of `{}`",
            a.names(members.iter().copied()).join(","),
            a.name()
        )));
    }
    let incl: Vec<Elem> = members.iter().copied().collect();
    let local = |e: Elem| incl.iter().position(|&x| x == e).unwrap();
    let j2 = |i: Elem| local(a.j2(incl[i]).unwrap());
    let sub = FiniteAlgebra::from_fns(
        name,
        incl.iter().map(|&e| a.element_name(e).to_string()).collect(),
        |x, y| local(a.and(incl[x], incl[y])),
        |x, y| local(a.or(incl[x], incl[y])),
        |x| local(a.not(incl[x])),
        if a.has_j2() { Some(&j2) } else { None },
        local(a.zero()),
        local(a.one()),
    )?;
    Ok((sub, incl))
}

/// An element map between two algebras. The endpoints are not stored; the
/// checking methods take them explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homomorphism {
    map: Vec<Elem>,
}

impl Homomorphism {
    pub fn new(map: Vec<Elem>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.map[e]
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism { map: self.map.iter().map(|&e| other.map[e]).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<_> = self.map.iter().collect();
        set.len() == self.map.len()
    }

    pub fn is_surjective_onto(&self, target_size: usize) -> bool {
        let set: HashSet<_> = self.map.iter().collect();
        set.len() == target_size
    }

    pub fn inverse(&self) -> Option<Homomorphism> {
        if !self.is_surjective_onto(self.map.len()) {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &e) in self.map.iter().enumerate() {
            inv[e] = i;
        }
        Some(Homomorphism { map: inv })
    }

    /// Exhaustively checks that the map is total and preserves every
    /// operation and constant present in both algebras.
    pub fn is_homomorphism(&self, src: &FiniteAlgebra, tgt: &FiniteAlgebra) -> bool {
        if self.map.len() != src.size() || self.map.iter().any(|&e| e >= tgt.size()) {
            return false;
        }
        if !src.same_signature(tgt) {
            return false;
        }
        let h = |e: Elem| self.map[e];
        if h(src.zero()) != tgt.zero() || h(src.one()) != tgt.one() {
            return false;
        }
        src.carrier().all(|x| {
            h(src.not(x)) == tgt.not(h(x))
                && src.j2(x).is_none_or(|j| Some(h(j)) == tgt.j2(h(x)))
                && src.carrier().all(|y| {
                    h(src.and(x, y)) == tgt.and(h(x), h(y)) && h(src.or(x, y)) == tgt.or(h(x), h(y))
                })
        })
    }

    /// Pairs `source -> target` by element names.
    pub fn describe(&self, src: &FiniteAlgebra, tgt: &FiniteAlgebra) -> String {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &e)| format!("{}->{}", src.element_name(i), tgt.element_name(e)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

struct HomSearch<'a> {
    src: &'a FiniteAlgebra,
    tgt: &'a FiniteAlgebra,
    injective: bool,
    limit: Option<usize>,
    found: Vec<Homomorphism>,
}

impl HomSearch<'_> {
    /// Extends the forced part of a partial map. Returns false on conflict.
    fn propagate(&self, map: &mut [Option<Elem>]) -> bool {
        let (s, t) = (self.src, self.tgt);
        let set = |map: &mut [Option<Elem>], k: Elem, v: Elem| -> Result<bool, ()> {
            match map[k] {
                Some(w) if w == v => Ok(false),
                Some(_) => Err(()),
                None => {
                    map[k] = Some(v);
                    Ok(true)
                }
            }
        };
        loop {
            let mut changed = false;
            let assigned: Vec<(Elem, Elem)> =
                map.iter().enumerate().filter_map(|(k, v)| v.map(|v| (k, v))).collect();
            for &(x, hx) in &assigned {
                let mut forced = vec![(s.not(x), t.not(hx))];
                if let (Some(jx), Some(jh)) = (s.j2(x), t.j2(hx)) {
                    forced.push((jx, jh));
                }
                for &(y, hy) in &assigned {
                    forced.push((s.and(x, y), t.and(hx, hy)));
                    forced.push((s.or(x, y), t.or(hx, hy)));
                }
                for (k, v) in forced {
                    match set(map, k, v) {
                        Ok(c) => changed |= c,
                        Err(()) => return false,
                    }
                }
            }
            if self.injective {
                let mut used = HashSet::new();
                if map.iter().flatten().any(|v| !used.insert(*v)) {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, mut map: Vec<Option<Elem>>) {
        if self.limit.is_some_and(|l| self.found.len() >= l) {
            return;
        }
        if !self.propagate(&mut map) {
            return;
        }
        match map.iter().position(Option::is_none) {
            None => {
                let h = Homomorphism::new(map.into_iter().map(Option::unwrap).collect());
                debug_assert!(h.is_homomorphism(self.src, self.tgt));
                self.found.push(h);
            }
            Some(next) => {
                for v in self.tgt.carrier() {
                    let mut m = map.clone();
                    m[next] = Some(v);
                    self.run(m);
                }
            }
        }
    }
}

fn search_homs(
    src: &FiniteAlgebra,
    tgt: &FiniteAlgebra,
    injective: bool,
    limit: Option<usize>,
) -> Result<Vec<Homomorphism>, AlgebraError> {
    src.require_same_signature(tgt)?;
    let mut map = vec![None; src.size()];
    map[src.zero()] = Some(tgt.zero());
    if map[src.one()].is_some_and(|v| v != tgt.one()) {
        return Ok(Vec::new());
    }
    map[src.one()] = Some(tgt.one());
    let mut search = HomSearch { src, tgt, injective, limit, found: Vec::new() };
    search.run(map);
    Ok(search.found)
}

/// Every homomorphism from `src` to `tgt`, found by backtracking over
/// partial assignments with forced-value propagation. The list is ordered
/// lexicographically by image sequence.
pub fn enumerate_homs(src: &FiniteAlgebra, tgt: &FiniteAlgebra) -> Result<Vec<Homomorphism>, AlgebraError> {
    search_homs(src, tgt, false, None)
}

/// First isomorphism in search order, or `None`.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Homomorphism>, AlgebraError> {
    if a.size() != b.size() {
        return Ok(None);
    }
    let found = search_homs(a, b, true, Some(1))?;
    Ok(found.into_iter().next().filter(|h| {
        h.inverse().is_some_and(|inv| inv.is_homomorphism(b, a))
    }))
}

pub fn are_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    matches!(find_isomorphism(a, b), Ok(Some(_)))
}

/// An equivalence relation on a carrier, stored as canonical block labels:
/// blocks are numbered in order of their least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block_of: Vec<usize>,
}

impl Congruence {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut rename = std::collections::HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = rename.len();
                *rename.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { block_of }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Self, AlgebraError> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(AlgebraError::Precondition("empty block".into()));
            }
            for &e in block {
                if e >= n || labels[e] != usize::MAX {
                    return Err(AlgebraError::Precondition(format!("element {e} misplaced")));
                }
                labels[e] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(AlgebraError::Precondition("blocks do not cover the carrier".into()));
        }
        Ok(Self::from_labels(&labels))
    }

    /// The identity relation.
    pub fn delta(n: usize) -> Self {
        Congruence { block_of: (0..n).collect() }
    }

    /// The total relation.
    pub fn nabla(n: usize) -> Self {
        Congruence { block_of: vec![0; n] }
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, e: Elem) -> usize {
        self.block_of[e]
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in self.block_of.iter().enumerate() {
            out[b].push(e);
        }
        out
    }

    pub fn is_delta(&self) -> bool {
        self.num_blocks() == self.size()
    }

    pub fn is_nabla(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn is_below(&self, other: &Congruence) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| !self.related(a, b) || other.related(a, b)))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let labels: Vec<usize> = (0..self.size())
            .map(|e| self.block_of[e] * (other.size() + 1) + other.block_of[e])
            .collect();
        Congruence::from_labels(&labels)
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for rel in [self, other] {
            for block in rel.blocks() {
                for w in block.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        uf.into_congruence()
    }

    /// Whether every operation of `a` respects the relation.
    pub fn is_compatible(&self, a: &FiniteAlgebra) -> bool {
        if self.size() != a.size() {
            return false;
        }
        let blocks = self.blocks();
        let reps: Vec<Elem> = blocks.iter().map(|b| b[0]).collect();
        // Comparing each element to its block representative suffices.
        a.carrier().all(|x| {
            let rx = reps[self.block_of[x]];
            self.related(a.not(x), a.not(rx))
                && a.j2(x).is_none_or(|j| self.related(j, a.j2(rx).unwrap()))
                && a.carrier().all(|y| {
                    self.related(a.and(x, y), a.and(rx, y))
                        && self.related(a.or(x, y), a.or(rx, y))
                        && self.related(a.and(y, x), a.and(y, rx))
                        && self.related(a.or(y, x), a.or(y, rx))
                })
        })
    }

    /// Blocks rendered with element names, e.g. `{{0,1},{half}}`.
    pub fn render(&self, a: &FiniteAlgebra) -> String {
        let inner: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", a.names(b.iter().copied()).join(",")))
            .collect();
        format!("{{{}}}", inner.join(","))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller index as root so labels stay stable
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_congruence(mut self) -> Congruence {
        let labels: Vec<usize> = (0..self.parent.len()).map(|e| self.find(e)).collect();
        Congruence::from_labels(&labels)
    }
}

/// Least congruence collapsing every listed pair: the pair set is closed
/// under all basic translations `u -> f(.., u, ..)` and the equivalence
/// closure is taken along the way.
pub fn congruence_generated_by(a: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Congruence {
    let mut uf = UnionFind::new(a.size());
    let mut work: Vec<(Elem, Elem)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    while let Some((x, y)) = work.pop() {
        let mut images = vec![(a.not(x), a.not(y))];
        if let (Some(jx), Some(jy)) = (a.j2(x), a.j2(y)) {
            images.push((jx, jy));
        }
        for c in a.carrier() {
            images.push((a.and(x, c), a.and(y, c)));
            images.push((a.and(c, x), a.and(c, y)));
            images.push((a.or(x, c), a.or(y, c)));
            images.push((a.or(c, x), a.or(c, y)));
        }
        for (u, v) in images {
            if uf.union(u, v) {
                work.push((u, v));
            }
        }
    }
    uf.into_congruence()
}

pub fn principal_congruence(a: &FiniteAlgebra, x: Elem, y: Elem) -> Congruence {
    congruence_generated_by(a, &[(x, y)])
}

/// All congruences: the principal ones closed under joins, plus Δ. Sorted
/// by decreasing number of blocks, then by block labels.
pub fn all_congruences(a: &FiniteAlgebra) -> Vec<Congruence> {
    let mut set: BTreeSet<Congruence> = BTreeSet::new();
    set.insert(Congruence::delta(a.size()));
    for x in a.carrier() {
        for y in (x + 1)..a.size() {
            set.insert(principal_congruence(a, x, y));
        }
    }
    let mut frontier: Vec<Congruence> = set.iter().cloned().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<Congruence> = set.iter().cloned().collect();
        let mut next = Vec::new();
        for c in &frontier {
            for d in &snapshot {
                let j = c.join(d);
                if set.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Congruence> = set.into_iter().collect();
    out.sort_by(|p, q| q.num_blocks().cmp(&p.num_blocks()).then_with(|| p.cmp(q)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiVerdict {
    pub irreducible: bool,
    pub monolith: Option<Congruence>,
}

/// Subdirect irreducibility with the monolith as witness. Every non-Δ
/// congruence contains a non-Δ principal one, so the monolith exists iff
/// some principal congruence lies below all the others.
pub fn is_subdirectly_irreducible(a: &FiniteAlgebra) -> Result<SiVerdict, AlgebraError> {
    if a.size() < 2 {
        return Err(AlgebraError::Precondition("the trivial algebra has no monolith".into()));
    }
    let mut principal: Vec<Congruence> = Vec::new();
    for x in a.carrier() {
        for y in (x + 1)..a.size() {
            let c = principal_congruence(a, x, y);
            if !principal.contains(&c) {
                principal.push(c);
            }
        }
    }
    principal.sort_by(|p, q| q.num_blocks().cmp(&p.num_blocks()).then_with(|| p.cmp(q)));
    let monolith = principal
        .iter()
        .find(|c| principal.iter().all(|d| c.is_below(d)))
        .cloned();
    Ok(SiVerdict { irreducible: monolith.is_some(), monolith })
}

/// Quotient by a congruence. Blocks are named after their least member
/// and ordered accordingly; the projection maps each element to its block.
pub fn quotient_algebra(
    a: &FiniteAlgebra,
    c: &Congruence,
) -> Result<(FiniteAlgebra, Homomorphism), AlgebraError> {
    if !c.is_compatible(a) {
        return Err(AlgebraError::NotCongruence(a.name().to_string()));
    }
    let blocks = c.blocks();
    let rep = |b: usize| blocks[b][0];
    let cls = |e: Elem| c.block_of(e);
    let j2 = |b: usize| cls(a.j2(rep(b)).unwrap());
    let q = FiniteAlgebra::from_fns(
        format!("{}/~", a.name()),
        blocks.iter().map(|b| a.element_name(b[0]).to_string()).collect(),
        |x, y| cls(a.and(rep(x), rep(y))),
        |x, y| cls(a.or(rep(x), rep(y))),
        |x| cls(a.not(rep(x))),
        if a.has_j2() { Some(&j2) } else { None },
        cls(a.zero()),
        cls(a.one()),
    )?;
    let proj = Homomorphism::new(a.carrier().map(cls).collect());
    Ok((q, proj))
}

/// The congruence `ker h` of a map out of `a`.
pub fn kernel(a: &FiniteAlgebra, h: &Homomorphism) -> Congruence {
    Congruence::from_labels(&a.carrier().map(|e| h.apply(e)).collect::<Vec<_>>())
}
