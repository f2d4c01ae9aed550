//! A bounded, reproducible collection of small members of the variety
//! generated by Bochvar algebras, closed (within size bounds) under the
//! class operators used by the sweeps.
//!
//! Contents, deduplicated up to isomorphism:
//! * the algebras of all Bochvar systems over Boolean algebras with at most
//!   3 atoms;
//! * every semilattice with zero of size at most 4, as an algebra with
//!   `& = |`, identity negation, `0 = 1` the least element and `J2 = 0`;
//! * pairwise direct products of the above with at most 16 elements;
//! * subalgebras generated by one or two elements and quotients by
//!   principal congruences, of everything above, with at most 12 elements.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::algebra::{
    direct_product, find_isomorphism, principal_congruence, quotient_algebra, subalgebra, subuniverse_generated,
    FiniteAlgebra,
};
use crate::equivalence::{enumerate_systems, system_to_algebra};

pub const MAX_ATOMS: usize = 3;
pub const MAX_SEMILATTICE: usize = 4;
pub const MAX_PRODUCT: usize = 16;
pub const MAX_DERIVED: usize = 12;

/// Commutative idempotent associative tables on `0..n` with `0` as
/// identity, one per isomorphism class.
pub fn semilattices_with_zero(n: usize) -> Vec<FiniteAlgebra> {
    assert!(n >= 1);
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for code in 0..n.pow(pairs.len() as u32) {
        let mut t = vec![0; n * n];
        for x in 0..n {
            t[x * n] = x;
            t[x] = x;
            t[x * n + x] = x;
        }
        let mut c = code;
        for &(i, j) in &pairs {
            t[i * n + j] = c % n;
            t[j * n + i] = c % n;
            c /= n;
        }
        let op = |x: usize, y: usize| t[x * n + y];
        let assoc = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| op(op(x, y), z) == op(x, op(y, z)))));
        if !assoc {
            continue;
        }
        let a = FiniteAlgebra::new(
            format!("SL{n}.{}", out.len()),
            (0..n).map(|x| if x == 0 { "0".to_string() } else { format!("e{x}") }).collect(),
            t.clone(),
            t,
            (0..n).collect(),
            Some(vec![0; n]),
            0,
            0,
        )
        .expect("semilattice tables are well formed");
        if !out.iter().any(|b| find_isomorphism(&a, b).unwrap().is_some()) {
            out.push(a);
        }
    }
    out
}

type Key = (usize, Vec<(usize, usize, bool, bool, bool, bool, bool)>);

fn invariant(a: &FiniteAlgebra) -> Key {
    let mut profile: Vec<_> = a
        .carrier()
        .map(|x| {
            let below = a.carrier().filter(|&y| a.and(x, y) == x).count();
            let above = a.carrier().filter(|&y| a.or(x, y) == x).count();
            let j = a.j2(x);
            (below, above, a.not(x) == x, j == Some(x), j == Some(a.zero()), x == a.zero(), x == a.one())
        })
        .collect();
    profile.sort();
    (a.size(), profile)
}

/// A growing list of algebras that rejects isomorphic copies.
#[derive(Default)]
struct Pool {
    members: Vec<FiniteAlgebra>,
    buckets: HashMap<Key, Vec<usize>>,
}

impl Pool {
    fn insert(&mut self, a: FiniteAlgebra) -> bool {
        let key = invariant(&a);
        let bucket = self.buckets.entry(key).or_default();
        if bucket.iter().any(|&i| find_isomorphism(&a, &self.members[i]).unwrap().is_some()) {
            return false;
        }
        bucket.push(self.members.len());
        self.members.push(a);
        true
    }
}

fn derived(a: &FiniteAlgebra, pool: &mut Pool) {
    let mut seen = std::collections::BTreeSet::new();
    for x in a.carrier() {
        for y in x..a.size() {
            let s = subuniverse_generated(a, [x, y]);
            if s.len() <= MAX_DERIVED && s.len() < a.size() && seen.insert(s.clone()) {
                let names = a.names([x, y]).join(",");
                let (sub, _) = subalgebra(a, &s, format!("Sg[{names}]({})", a.name())).expect("closed set");
                pool.insert(sub);
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for x in a.carrier() {
        for y in x + 1..a.size() {
            let c = principal_congruence(a, x, y);
            if c.num_blocks() <= MAX_DERIVED && seen.insert(c.clone()) {
                let names = a.names([x, y]).join(",");
                let (q, _) = quotient_algebra(a, &c).expect("principal congruence");
                pool.insert(q.with_name(format!("{}/θ({names})", a.name())));
            }
        }
    }
}

fn build() -> Vec<FiniteAlgebra> {
    let mut pool = Pool::default();
    for atoms in 0..=MAX_ATOMS {
        for s in enumerate_systems(atoms) {
            pool.insert(system_to_algebra(&s).expect("systems construct").algebra);
        }
    }
    for n in 1..=MAX_SEMILATTICE {
        for a in semilattices_with_zero(n) {
            pool.insert(a);
        }
    }
    let base: Vec<FiniteAlgebra> = pool.members.iter().filter(|a| a.size() > 1).cloned().collect();
    for (i, a) in base.iter().enumerate() {
        for b in &base[i..] {
            if a.size() * b.size() <= MAX_PRODUCT {
                pool.insert(direct_product(a, b).expect("same signature"));
            }
        }
    }
    let sources = pool.members.clone();
    for a in &sources {
        derived(a, &mut pool);
    }
    pool.members
}

/// The corpus, built once per process.
pub fn k_corpus() -> &'static [FiniteAlgebra] {
    static CORPUS: OnceLock<Vec<FiniteAlgebra>> = OnceLock::new();
    CORPUS.get_or_init(build)
}

/// Members with at most `bound` elements.
pub fn members_up_to(bound: usize) -> impl Iterator<Item = &'static FiniteAlgebra> {
    k_corpus().iter().filter(move |a| a.size() <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{satisfies, AxiomSetName};

    #[test]
    fn semilattice_counts() {
        // Finite join-semilattices with a least element are lattices:
        // 1, 1, 1, 2 of sizes 1 to 4.
        let counts: Vec<usize> = (1..=4).map(|n| semilattices_with_zero(n).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2]);
        assert!(find_isomorphism(&semilattices_with_zero(2)[0], &crate::fixtures::sl2_bochvar()).unwrap().is_some());
    }

    #[test]
    fn corpus_is_large_and_in_k() {
        let corpus = k_corpus();
        assert!(corpus.len() >= 50, "{}", corpus.len());
        for a in corpus {
            assert!(satisfies(a, AxiomSetName::K).unwrap(), "{}", a.name());
        }
        for (i, a) in corpus.iter().enumerate() {
            for b in &corpus[i + 1..] {
                if invariant(a) == invariant(b) {
                    assert!(find_isomorphism(a, b).unwrap().is_none());
                }
            }
        }
    }
}
