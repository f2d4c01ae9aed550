use bochvar_core::algebra::{direct_product, find_isomorphism, FiniteAlgebra};
use bochvar_core::axioms::{satisfies, AxiomSetName};
use bochvar_core::boolean::boolean_from_atoms;
use bochvar_core::corpus::{k_corpus, semilattices_with_zero};
use bochvar_core::fixtures::{b2_bochvar, trivial_bochvar};
use bochvar_core::plonka::decompose;
use bochvar_core::varieties::{dense_elements, od_embedding, open_elements};

fn k_members() -> impl Iterator<Item = &'static FiniteAlgebra> {
    k_corpus().iter().filter(|a| satisfies(a, AxiomSetName::K).unwrap())
}

#[test]
fn nontrivial_fibres_join_to_nontrivial() {
    let mut seen = 0;
    for a in k_members() {
        let d = decompose(&a.reduct()).unwrap();
        if d.members(d.bottom()).len() != 2 {
            continue;
        }
        seen += 1;
        let r = d.resolved();
        let n = d.fibre_count();
        for i in (0..n).filter(|&i| !d.is_trivial_fibre(i)) {
            for j in (0..n).filter(|&j| !d.is_trivial_fibre(j)) {
                assert!(!d.is_trivial_fibre(r.join(i, j)), "{}: {i} v {j}", a.name());
            }
        }
    }
    assert!(seen > 10);
}

#[test]
fn open_and_dense_characterizations() {
    for a in k_members() {
        let j = |x| a.j2(x).unwrap();
        let open: Vec<_> = a.carrier().filter(|&x| j(x) == x).collect();
        let dense: Vec<_> = a.carrier().filter(|&x| j(x) == a.zero()).collect();
        assert_eq!(open_elements(a).unwrap().into_iter().collect::<Vec<_>>(), open);
        assert_eq!(dense_elements(a).unwrap().into_iter().collect::<Vec<_>>(), dense);
    }
}

/// Boolean algebras with `J2 = id` and semilattices with zero whose sizes
/// multiply to `n`.
fn factorizations(n: usize) -> Vec<FiniteAlgebra> {
    let booleans = [trivial_bochvar(), b2_bochvar(), {
        let b = boolean_from_atoms(&["p", "q"]).unwrap().algebra().clone();
        b.with_j2((0..4).collect()).unwrap()
    }];
    let mut out = Vec::new();
    for b in &booleans {
        if !n.is_multiple_of(b.size()) {
            continue;
        }
        for s in semilattices_with_zero(n / b.size()) {
            out.push(direct_product(b, &s).unwrap());
        }
    }
    out
}

#[test]
fn v_members_split_into_boolean_times_semilattice() {
    let mut four = 0;
    for a in k_corpus().iter().filter(|a| satisfies(a, AxiomSetName::V).unwrap()) {
        let od = od_embedding(a).unwrap();
        assert!(od.onto, "{}", a.name());
        if a.size() == 4 {
            four += 1;
            assert!(
                factorizations(4).iter().any(|p| find_isomorphism(a, p).unwrap().is_some()),
                "{} is not B x S",
                a.name()
            );
        }
    }
    assert!(four > 0);
}
