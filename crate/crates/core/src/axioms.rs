//! Named axiom catalogs and a classifier.
//!
//! Schemata quantified over `k ∈ {0,1,2}` are expanded into labelled
//! instances: `FG.9.k0`, `FG.9.k1`, ...; the permutation schema of `FG.13`
//! is labelled `FG.13.i0j1k2` and so on, and the pair schema of `FG.15` is
//! expanded over all nine pairs `FG.15.i0k0` to `FG.15.i2k2`.

use std::fmt;
use std::str::FromStr;

use crate::algebra::FiniteAlgebra;
use crate::plonka::{count_fixpoints, decompose};
use crate::terms::{check_quasi_identity, parse_quasi_identity, QuasiIdentity, TermError, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomSetName {
    Fg,
    Bca,
    Ibsl,
    Sibsl,
    K,
    V,
    BaRel,
    SlRel,
}

impl AxiomSetName {
    pub const ALL: [AxiomSetName; 8] = [
        AxiomSetName::Fg,
        AxiomSetName::Bca,
        AxiomSetName::Ibsl,
        AxiomSetName::Sibsl,
        AxiomSetName::K,
        AxiomSetName::V,
        AxiomSetName::BaRel,
        AxiomSetName::SlRel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomSetName::Fg => "FG",
            AxiomSetName::Bca => "BCA",
            AxiomSetName::Ibsl => "IBSL",
            AxiomSetName::Sibsl => "SIBSL",
            AxiomSetName::K => "K",
            AxiomSetName::V => "V",
            AxiomSetName::BaRel => "BA_rel",
            AxiomSetName::SlRel => "SL_rel",
        }
    }

    /// Whether the catalog mentions the external operations.
    pub fn uses_j(self) -> bool {
        !matches!(self, AxiomSetName::Ibsl | AxiomSetName::Sibsl)
    }
}

impl fmt::Display for AxiomSetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom set `{0}` (expected one of FG, BCA, IBSL, SIBSL, K, V, BA, SL)")]
pub struct UnknownAxiomSet(pub String);

impl FromStr for AxiomSetName {
    type Err = UnknownAxiomSet;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "FG" => AxiomSetName::Fg,
            "BCA" => AxiomSetName::Bca,
            "IBSL" => AxiomSetName::Ibsl,
            "SIBSL" => AxiomSetName::Sibsl,
            "K" => AxiomSetName::K,
            "V" => AxiomSetName::V,
            "BA" | "BA_REL" => AxiomSetName::BaRel,
            "SL" | "SL_REL" => AxiomSetName::SlRel,
            _ => return Err(UnknownAxiomSet(s.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomItem {
    pub label: String,
    pub formula: QuasiIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSet {
    pub name: AxiomSetName,
    pub items: Vec<AxiomItem>,
}

impl AxiomSet {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&AxiomItem> {
        self.items.iter().find(|i| i.label == label)
    }
}

type Catalog = Vec<(String, String)>;

fn push(out: &mut Catalog, label: impl Into<String>, text: impl Into<String>) {
    out.push((label.into(), text.into()));
}

const IBSL: [(&str, &str); 8] = [
    ("I1", "x | x = x"),
    ("I2", "x | y = y | x"),
    ("I3", "x | (y | z) = (x | y) | z"),
    ("I4", "--x = x"),
    ("I5", "x & y = -(-x | -y)"),
    ("I6", "x & (-x | y) = x & y"),
    ("I7", "0 | x = x"),
    ("I8", "1 = -0"),
];

const BCA_BASE: [&str; 8] = [
    "x | x = x",
    "x | y = y | x",
    "(x | y) | z = x | (y | z)",
    "x & (y | z) = (x & y) | (x & z)",
    "--x = x",
    "-1 = 0",
    "-(x | y) = -x & -y",
    "0 | x = x",
];

const J2_JOIN: &str = "J2 (x | y) = (J2 x & J2 y) | (J2 x & J2 -y) | (J2 -x & J2 y)";

fn fg() -> Catalog {
    let mut out = Catalog::new();
    for (n, t) in BCA_BASE.iter().enumerate() {
        push(&mut out, format!("FG.{}", n + 1), *t);
    }
    for k in 0..3 {
        push(&mut out, format!("FG.9.k{k}"), format!("J2 J{k} x = J{k} x"));
    }
    for k in 0..3 {
        push(&mut out, format!("FG.10.k{k}"), format!("J0 J{k} x = -J{k} x"));
    }
    for k in 0..3 {
        push(&mut out, format!("FG.11.k{k}"), format!("J1 J{k} x = 0"));
    }
    for k in 0..3 {
        push(&mut out, format!("FG.12.k{k}"), format!("J{k} -x = J{} x", 2 - k));
    }
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        push(&mut out, format!("FG.13.i{i}j{j}k{k}"), format!("J{i} x = -(J{j} x | J{k} x)"));
    }
    for k in 0..3 {
        push(&mut out, format!("FG.14.k{k}"), format!("J{k} x | -J{k} x = 1"));
    }
    for i in 0..3 {
        for k in 0..3 {
            push(&mut out, format!("FG.15.i{i}k{k}"), format!("(J{i} x | J{k} x) & J{i} x = J{i} x"));
        }
    }
    for k in 1..3 {
        push(&mut out, format!("FG.16.k{k}"), format!("x | J{k} x = x"));
    }
    push(&mut out, "FG.17", "J0 (x | y) = J0 x & J0 y");
    push(&mut out, "FG.18", J2_JOIN);
    push(&mut out, "FG.19", "J0 x = J0 y , J1 x = J1 y , J2 x = J2 y => x = y");
    out
}

fn bca() -> Catalog {
    let mut out = Catalog::new();
    for (n, t) in BCA_BASE.iter().enumerate() {
        push(&mut out, format!("BCA.{}", n + 1), *t);
    }
    push(&mut out, "BCA.9", "J0 J2 x = -J2 x");
    push(&mut out, "BCA.10", "J2 x = -(J0 x | J1 x)");
    push(&mut out, "BCA.11", "J2 x | -J2 x = 1");
    push(&mut out, "BCA.12", J2_JOIN);
    push(&mut out, "BCA.13", "J0 x = J0 y , J2 x = J2 y => x = y");
    out
}

fn ibsl() -> Catalog {
    IBSL.iter().map(|(l, t)| (l.to_string(), t.to_string())).collect()
}

fn k() -> Catalog {
    let mut out: Catalog = IBSL.iter().enumerate().map(|(n, (_, t))| (format!("K{}", n + 1), t.to_string())).collect();
    push(&mut out, "K9", "J2 x | -J2 x = 1");
    push(&mut out, "K10", "x | J2 y = x | J2 (x | y)");
    push(&mut out, "K11", "x & J2 x = x");
    push(&mut out, "K12", "J2 (x & -x) = 0");
    out
}

fn catalog(name: AxiomSetName) -> Catalog {
    let extend = |mut base: Catalog, label: &str, text: &str| {
        push(&mut base, label, text);
        base
    };
    match name {
        AxiomSetName::Fg => fg(),
        AxiomSetName::Bca => bca(),
        AxiomSetName::Ibsl => ibsl(),
        AxiomSetName::Sibsl => extend(ibsl(), "SIBSL.fix", "x = -x , y = -y => x = y"),
        AxiomSetName::K => k(),
        AxiomSetName::V => extend(k(), "V.extra", "J2 -x = -J2 x"),
        AxiomSetName::BaRel => extend(k(), "BA.extra", "J2 x = x"),
        AxiomSetName::SlRel => extend(k(), "SL.extra", "J2 x = 1"),
    }
}

/// The fully expanded, parsed catalog.
pub fn axiom_set(name: AxiomSetName) -> AxiomSet {
    let items = catalog(name)
        .into_iter()
        .map(|(label, text)| AxiomItem {
            formula: parse_quasi_identity(&text).unwrap_or_else(|e| panic!("catalog item {label}: {e}")),
            label,
        })
        .collect();
    AxiomSet { name, items }
}

/// The identities that follow from K, labelled `KC.1` to `KC.4`.
pub fn k_consequences() -> Vec<AxiomItem> {
    [
        ("KC.1", "x | J2 x = x"),
        ("KC.2", "x = J2 x | (x & -x)"),
        ("KC.3", "J2 J2 x = J2 x"),
        ("KC.4", "x | -J2 y = x | -J2 (x | y)"),
    ]
    .into_iter()
    .map(|(l, t)| AxiomItem { label: l.into(), formula: parse_quasi_identity(t).expect("catalog") })
    .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemResult {
    pub label: String,
    pub verdict: Verdict,
    /// Counterexample rendered with the algebra's element names.
    pub counterexample: Option<String>,
}

impl ItemResult {
    pub fn holds(&self) -> bool {
        self.verdict.holds()
    }

    /// `LABEL: HOLDS` or `LABEL: FAILS at x=...`.
    pub fn line(&self) -> String {
        match &self.counterexample {
            None => format!("{}: HOLDS", self.label),
            Some(c) => format!("{}: FAILS at {c}", self.label),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub set: AxiomSetName,
    pub algebra: String,
    pub items: Vec<ItemResult>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.items.iter().all(ItemResult::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ItemResult> {
        self.items.iter().filter(|i| !i.holds())
    }

    pub fn first_failure(&self) -> Option<&ItemResult> {
        self.failures().next()
    }

    pub fn lines(&self) -> Vec<String> {
        self.items.iter().map(ItemResult::line).collect()
    }
}

fn check_items<'a>(a: &FiniteAlgebra, items: impl IntoIterator<Item = &'a AxiomItem>) -> Result<Vec<ItemResult>, TermError> {
    items
        .into_iter()
        .map(|item| {
            let verdict = check_quasi_identity(a, &item.formula)?;
            let counterexample = verdict.counterexample().map(|v| v.render(a));
            Ok(ItemResult { label: item.label.clone(), verdict, counterexample })
        })
        .collect()
}

/// One verdict per catalog item, in catalog order.
pub fn check_axiom_set(a: &FiniteAlgebra, s: &AxiomSet) -> Result<AxiomReport, TermError> {
    Ok(AxiomReport { set: s.name, algebra: a.name().to_string(), items: check_items(a, &s.items)? })
}

/// Shorthand for `check_axiom_set(a, &axiom_set(name))?.passes()`.
pub fn satisfies(a: &FiniteAlgebra, name: AxiomSetName) -> Result<bool, TermError> {
    Ok(check_axiom_set(a, &axiom_set(name))?.passes())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub algebra: String,
    pub size: usize,
    /// `None` for catalogs that need `J2` when the algebra has none.
    pub memberships: Vec<(AxiomSetName, Option<bool>)>,
    pub ibsl_reduct: bool,
    pub sibsl_reduct: bool,
    pub fixpoints: usize,
    /// Number of Płonka fibres, when the reduct is an involutive bisemilattice.
    pub fibres: Option<usize>,
    /// Only computed when the algebra passes K.
    pub k_consequences: Option<Vec<ItemResult>>,
}

impl Classification {
    pub fn member(&self, name: AxiomSetName) -> Option<bool> {
        self.memberships.iter().find(|(n, _)| *n == name).and_then(|(_, v)| *v)
    }

    pub fn lines(&self) -> Vec<String> {
        let mark = |v: Option<bool>| match v {
            Some(true) => "yes",
            Some(false) => "no",
            None => "n/a",
        };
        let mut out = vec![format!("algebra: {} ({} elements)", self.algebra, self.size)];
        for (n, v) in &self.memberships {
            out.push(format!("{n}: {}", mark(*v)));
        }
        out.push(format!("IBSL reduct: {}", mark(Some(self.ibsl_reduct))));
        out.push(format!("SIBSL reduct: {}", mark(Some(self.sibsl_reduct))));
        out.push(format!("fixpoints: {}", self.fixpoints));
        match self.fibres {
            Some(n) => out.push(format!("fibres: {n}")),
            None => out.push("fibres: n/a".into()),
        }
        if let Some(items) = &self.k_consequences {
            out.extend(items.iter().map(ItemResult::line));
        }
        out
    }
}

pub fn classify(a: &FiniteAlgebra) -> Classification {
    let memberships = AxiomSetName::ALL
        .iter()
        .map(|&n| (n, satisfies(a, n).ok()))
        .collect::<Vec<_>>();
    let reduct = a.reduct();
    let ibsl_reduct = satisfies(&reduct, AxiomSetName::Ibsl).expect("J2-free catalog");
    let sibsl_reduct = satisfies(&reduct, AxiomSetName::Sibsl).expect("J2-free catalog");
    let fibres = if ibsl_reduct { decompose(&reduct).ok().map(|d| d.fibre_count()) } else { None };
    let in_k = memberships.iter().any(|(n, v)| *n == AxiomSetName::K && *v == Some(true));
    let k_consequences = in_k.then(|| check_items(a, &k_consequences()).expect("algebra has J2"));
    Classification {
        algebra: a.name().to_string(),
        size: a.size(),
        memberships,
        ibsl_reduct,
        sibsl_reduct,
        fixpoints: count_fixpoints(a),
        fibres,
        k_consequences,
    }
}
