use bochvar_core::algebra::enumerate_homs;
use bochvar_core::equivalence::{
    algebra_naturality, algebra_to_system, enumerate_system_morphisms, enumerate_systems, gamma_morphism,
    system_naturality, system_to_algebra, xi_morphism, BochvarSystem, ConstructedAlgebra, RecoveredSystem,
};

fn systems() -> Vec<BochvarSystem> {
    (0..=2).flat_map(enumerate_systems).collect()
}

#[test]
fn xi_preserves_composition_on_all_small_systems() {
    let systems = systems();
    let built: Vec<ConstructedAlgebra> = systems.iter().map(|s| system_to_algebra(s).unwrap()).collect();
    let mut checked = 0;
    for (i, s1) in systems.iter().enumerate() {
        for (j, s2) in systems.iter().enumerate() {
            for g in enumerate_system_morphisms(s1, s2) {
                let xg = xi_morphism(&g, &built[i], &built[j]).unwrap();
                assert!(xg.is_homomorphism(&built[i].algebra, &built[j].algebra));
                for (k, s3) in systems.iter().enumerate() {
                    for h in enumerate_system_morphisms(s2, s3) {
                        let lhs = xi_morphism(&g.then(&h), &built[i], &built[k]).unwrap();
                        let rhs = xg.then(&xi_morphism(&h, &built[j], &built[k]).unwrap());
                        assert_eq!(lhs, rhs, "{s1} -> {s2} -> {s3}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn gamma_is_functorial_and_natural_on_all_small_algebras() {
    let algebras: Vec<_> = systems().iter().map(|s| system_to_algebra(s).unwrap().algebra).collect();
    let recovered: Vec<RecoveredSystem> = algebras.iter().map(|a| algebra_to_system(a).unwrap()).collect();
    let mut checked = 0;
    for (i, a1) in algebras.iter().enumerate() {
        for (j, a2) in algebras.iter().enumerate() {
            for f in enumerate_homs(a1, a2).unwrap() {
                assert!(algebra_naturality(&f, a1, a2).unwrap(), "{} -> {}", a1.name(), a2.name());
                let gf = gamma_morphism(&f, &recovered[i], &recovered[j]).unwrap();
                gf.validate(&recovered[i].system, &recovered[j].system).unwrap();
                for (k, a3) in algebras.iter().enumerate() {
                    for h in enumerate_homs(a2, a3).unwrap() {
                        let lhs = gamma_morphism(&f.then(&h), &recovered[i], &recovered[k]).unwrap();
                        let rhs = gf.then(&gamma_morphism(&h, &recovered[j], &recovered[k]).unwrap());
                        assert_eq!(lhs, rhs);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn system_naturality_on_all_small_morphisms() {
    let systems = systems();
    for s1 in &systems {
        for s2 in &systems {
            for g in enumerate_system_morphisms(s1, s2) {
                assert!(system_naturality(&g, s1, s2).unwrap(), "{s1} -> {s2}");
            }
        }
    }
}
