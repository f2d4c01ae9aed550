//! Small named algebras used throughout the tests and the CLI.
//!
//! The three-element algebra lists its carrier as `0`, `half`, `1`.

use std::collections::BTreeMap;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::boolean::boolean_from_atoms;
use crate::plonka::{plonka_sum, SemilatticeDirectSystem};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The three-element generator with the external operation `J2`.
pub fn wke() -> FiniteAlgebra {
    const H: Elem = 1;
    let and = vec![0, H, 0, H, H, H, 0, H, 2];
    let or = vec![0, H, 2, H, H, H, 2, H, 2];
    FiniteAlgebra::new("WKe", names(&["0", "half", "1"]), and, or, vec![2, H, 0], Some(vec![0, 0, 2]), 0, 2)
        .expect("WKe tables")
}

/// The `J2`-free reduct of [`wke`].
pub fn wk() -> FiniteAlgebra {
    wke().reduct().with_name("WK")
}

/// Two-element Boolean algebra without `J2`.
pub fn b2() -> FiniteAlgebra {
    FiniteAlgebra::new("B2", names(&["0", "1"]), vec![0, 0, 0, 1], vec![0, 1, 1, 1], vec![1, 0], None, 0, 1)
        .expect("B2 tables")
}

/// [`b2`] with `J2` the identity.
pub fn b2_bochvar() -> FiniteAlgebra {
    b2().with_j2(vec![0, 1]).expect("B2 J2")
}

/// Four-element Boolean algebra over atoms `p`, `q`.
pub fn b4() -> FiniteAlgebra {
    boolean_from_atoms(&["p", "q"]).expect("B4").algebra().clone()
}

/// [`b4`] with `J2` the identity.
pub fn b4_bochvar() -> FiniteAlgebra {
    b4().with_j2(vec![0, 1, 2, 3]).expect("B4 J2")
}

/// Two-element semilattice `{0, e}` with `0` as the `|`-identity, `& = |`,
/// negation the identity and `0 = 1`.
pub fn sl2() -> FiniteAlgebra {
    let join = vec![0, 1, 1, 1];
    FiniteAlgebra::new("SL2", names(&["0", "e"]), join.clone(), join, vec![0, 1], None, 0, 0).expect("SL2 tables")
}

/// [`sl2`] with `J2` constantly `0`.
pub fn sl2_bochvar() -> FiniteAlgebra {
    sl2().with_j2(vec![0, 0]).expect("SL2 J2")
}

pub fn trivial() -> FiniteAlgebra {
    FiniteAlgebra::new("T", names(&["0"]), vec![0], vec![0], vec![0], None, 0, 0).expect("trivial tables")
}

pub fn trivial_bochvar() -> FiniteAlgebra {
    trivial().with_j2(vec![0]).expect("trivial J2")
}

/// Index `o < k` with fibres B2 over `o` and the trivial algebra over `k`.
pub fn wk_system() -> SemilatticeDirectSystem {
    SemilatticeDirectSystem {
        index: names(&["o", "k"]),
        order: vec![(0, 1)],
        fibres: vec![b2(), trivial()],
        homs: BTreeMap::from([((0, 1), vec![0, 0])]),
    }
}

/// Diamond index `o < i, j < k` with fibres B2, B2, B2 and a trivial top
/// fibre; the two middle homs are identities.
pub fn forb8_system() -> SemilatticeDirectSystem {
    SemilatticeDirectSystem {
        index: names(&["o", "i", "j", "k"]),
        order: vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        fibres: vec![b2(), b2(), b2(), trivial()],
        homs: BTreeMap::from([
            ((0, 1), vec![0, 1]),
            ((0, 2), vec![0, 1]),
            ((1, 3), vec![0, 0]),
            ((2, 3), vec![0, 0]),
        ]),
    }
}

/// The Płonka sum over [`forb8_system`], without `J2`.
pub fn forb8() -> FiniteAlgebra {
    plonka_sum(&forb8_system()).expect("FORB8 system").0.with_name("FORB8")
}
