//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bochvar_core::algebra::{all_congruences, direct_product, is_subdirectly_irreducible, Elem, FiniteAlgebra};
use bochvar_core::axioms::{axiom_set, check_axiom_set, k_consequences, satisfies, AxiomSetName};
use bochvar_core::boolean::is_boolean;
use bochvar_core::corpus::{k_corpus, members_up_to};
use bochvar_core::equivalence::{bca_j2_tables, enumerate_systems, roundtrip_algebra, roundtrip_system, system_to_algebra};
use bochvar_core::fixtures::{b2_bochvar, forb8, sl2_bochvar, wk, wke};
use bochvar_core::plonka::decompose;
use bochvar_core::terms::{check_identity, check_quasi_identity, evaluate, parse_identity, parse_term, tautology, Logic, Valuation};
use bochvar_core::varieties::{
    forbidden_search, hs_wke_classify, independence_check, isp_wke_check, jdef_extension, jdef_table, od_embedding,
    theta_a, HsClass, IndependenceClass,
};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn k_members() -> impl Iterator<Item = &'static FiniteAlgebra> {
    k_corpus().iter().filter(|a| satisfies(a, AxiomSetName::K).unwrap())
}

fn c1() -> Outcome {
    let start = Instant::now();
    let a = wke();
    // Rows and columns in the order 0, half, 1.
    let h = 1;
    let not = [2, h, 0];
    let or = [[0, h, 2], [h, h, h], [2, h, 2]];
    let and = [[0, h, 0], [h, h, h], [0, h, 2]];
    let j2 = [0, 0, 2];
    ensure(a.elements() == ["0", "half", "1"], || format!("carrier {:?}", a.elements()))?;
    let t = |s: &str| parse_term(s).unwrap();
    for x in 0..3 {
        let v = Valuation::new(&[("x", x)]);
        ensure(a.not(x) == not[x] && evaluate(&t("-x"), &a, &v).unwrap() == not[x], || format!("not {x}"))?;
        ensure(a.j2(x) == Some(j2[x]) && evaluate(&t("J2 x"), &a, &v).unwrap() == j2[x], || format!("J2 {x}"))?;
        for y in 0..3 {
            let v = Valuation::new(&[("x", x), ("y", y)]);
            ensure(a.and(x, y) == and[x][y] && evaluate(&t("x & y"), &a, &v).unwrap() == and[x][y], || format!("and {x} {y}"))?;
            ensure(a.or(x, y) == or[x][y] && evaluate(&t("x | y"), &a, &v).unwrap() == or[x][y], || format!("or {x} {y}"))?;
        }
    }
    ensure((a.zero(), a.one()) == (0, 2), || "constants".into())?;
    within(start, Duration::from_millis(50))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let a = wke();
    for (set, count) in [(AxiomSetName::Fg, 43), (AxiomSetName::Bca, 13), (AxiomSetName::K, 12)] {
        let r = check_axiom_set(&a, &axiom_set(set)).unwrap();
        ensure(r.items.len() == count, || format!("{set} has {} items", r.items.len()))?;
        ensure(r.passes(), || format!("{set}: {:?}", r.first_failure()))?;
    }
    let fg = axiom_set(AxiomSetName::Fg);
    ensure(fg.items.iter().filter(|i| !i.formula.premises.is_empty()).count() == 1, || "one quasi-identity in FG".into())?;
    for set in [AxiomSetName::Ibsl, AxiomSetName::Sibsl] {
        let r = check_axiom_set(&a.reduct(), &axiom_set(set)).unwrap();
        ensure(r.passes(), || format!("reduct {set}: {:?}", r.first_failure()))?;
    }
    within(start, Duration::from_secs(1))
}

fn c3() -> Outcome {
    let a = wke();
    let v = check_identity(&a, &parse_identity("J2 -x = -J2 x").unwrap()).unwrap();
    let cx = v.counterexample().map(|c| c.render(&a));
    ensure(cx.as_deref() == Some("x=half"), || format!("counterexample {cx:?}"))?;
    let r = check_axiom_set(&a, &axiom_set(AxiomSetName::V)).unwrap();
    let f = r.first_failure().ok_or("WKe passes V")?;
    ensure(f.line() == "V.extra: FAILS at x=half", || f.line())
}

/// Unit meet-subsemilattices of the powerset of `k` atoms as sets of
/// bitmasks, by direct subset enumeration.
fn subsemilattice_oracle(k: usize) -> BTreeSet<BTreeSet<u32>> {
    let n = 1u32 << k;
    let top = n - 1;
    let mut out = BTreeSet::new();
    for choice in 0u64..(1u64 << n) {
        let set: BTreeSet<u32> = (0..n).filter(|m| choice >> m & 1 == 1).collect();
        if set.contains(&top) && set.iter().all(|a| set.iter().all(|b| set.contains(&(a & b)))) {
            out.insert(set);
        }
    }
    out
}

fn c4() -> Outcome {
    let start = Instant::now();
    for k in 0..=3 {
        let systems = enumerate_systems(k);
        let got: BTreeSet<BTreeSet<u32>> = systems
            .iter()
            .map(|s| s.subsemilattice().iter().map(|&e| s.boolean().mask(e)).collect())
            .collect();
        let oracle = subsemilattice_oracle(k);
        ensure(got == oracle && systems.len() == oracle.len(), || {
            format!("{k} atoms: {} systems, oracle {}", systems.len(), oracle.len())
        })?;
        for s in &systems {
            let rt = roundtrip_system(s).map_err(|e| format!("{s}: {e}"))?;
            ensure(rt.canonical_agrees, || format!("{s}: canonical map"))?;
            let a = &rt.constructed.algebra;
            ensure(satisfies(a, AxiomSetName::Bca).unwrap(), || format!("{}: BCA", a.name()))?;
            roundtrip_algebra(a).map_err(|e| format!("{}: {e}", a.name()))?;
        }
    }
    ensure(subsemilattice_oracle(2).len() == 7, || "B4 count".into())?;
    within(start, Duration::from_secs(120))
}

fn c5() -> Outcome {
    let start = Instant::now();
    for k in 0..=2 {
        for s in enumerate_systems(k) {
            let c = system_to_algebra(&s).map_err(|e| e.to_string())?;
            let found = bca_j2_tables(&c.algebra);
            let own = c.algebra.j2_table().unwrap().to_vec();
            ensure(found.tables == vec![own], || format!("{s}: {} tables", found.tables.len()))?;
        }
    }
    within(start, Duration::from_secs(60))
}

fn c6() -> Outcome {
    let start = Instant::now();
    let a = forb8();
    let r = forbidden_search(&a);
    ensure(r.tables.is_empty(), || format!("{} tables", r.tables.len()))?;
    ensure(r.candidate_space <= 256 && r.candidate_space == 1 << a.size(), || format!("space {}", r.candidate_space))?;
    // Independent exhaustion of the pruned space.
    let comp: Vec<Elem> = a.carrier().filter(|&c| a.or(c, a.not(c)) == a.one()).collect();
    let n = a.size();
    for code in 0..comp.len().pow(n as u32) {
        let mut c = code;
        let table: Vec<Elem> = (0..n)
            .map(|_| {
                let v = comp[c % comp.len()];
                c /= comp.len();
                v
            })
            .collect();
        let b = a.with_j2(table).unwrap();
        ensure(!satisfies(&b, AxiomSetName::K).unwrap(), || "a K table exists".into())?;
    }
    within(start, Duration::from_secs(10))
}

fn c7() -> Outcome {
    let out = jdef_extension(&wk()).map_err(|e| e.to_string())?;
    let w = wke();
    ensure(out.is_k() && out.algebra.with_name(w.name()) == w, || "J-def of WK".into())?;
    let mut checked = 0;
    for a in k_corpus() {
        let r = a.reduct();
        let Ok(d) = decompose(&r) else { continue };
        if d.members(d.bottom()).len() != 2 {
            continue;
        }
        let found = forbidden_search(&r);
        if found.tables.is_empty() {
            continue;
        }
        let forced = jdef_table(&r).map_err(|e| e.to_string())?;
        ensure(found.tables == vec![forced], || format!("{}: {} tables", a.name(), found.tables.len()))?;
        checked += 1;
    }
    ensure(checked > 0, || "no corpus algebra exercised".into())
}

fn c8() -> Outcome {
    let corpus = k_corpus();
    ensure(corpus.len() >= 50, || format!("corpus has {} members", corpus.len()))?;
    let mut si = 0;
    for a in corpus.iter().filter(|a| a.size() > 1) {
        if is_subdirectly_irreducible(a).unwrap().irreducible {
            si += 1;
            ensure(hs_wke_classify(a) != HsClass::None, || format!("{} is SI outside HS(WKe)", a.name()))?;
        }
    }
    ensure(si > 0, || "no SI members".into())?;
    let a = wke();
    let mut cons = all_congruences(&a);
    cons.sort_by_key(|c| std::cmp::Reverse(c.num_blocks()));
    let rendered: Vec<String> = cons.iter().map(|c| c.render(&a)).collect();
    ensure(rendered == ["{{0},{half},{1}}", "{{0,1},{half}}", "{{0,half,1}}"], || format!("{rendered:?}"))?;
    ensure(cons.windows(2).all(|w| w[0].is_below(&w[1])), || "not a chain".into())
}

fn c9() -> Outcome {
    let items = k_consequences();
    for a in k_members() {
        for item in &items {
            let v = check_quasi_identity(a, &item.formula).unwrap();
            ensure(v.holds(), || format!("{} fails in {}", item.label, a.name()))?;
        }
    }
    Ok(())
}

fn c10() -> Outcome {
    let start = Instant::now();
    for a in k_members() {
        let d = decompose(&a.reduct()).map_err(|e| e.to_string())?;
        for g in d.members(d.bottom()).iter().copied() {
            let t = theta_a(a, g).map_err(|e| e.to_string())?;
            ensure(t.is_compatible(a), || format!("{}: Θ not compatible", a.name()))?;
            ensure(t.is_delta() == (g == a.zero()), || format!("{}: Θ_{g} = Δ mismatch", a.name()))?;
            let tn = theta_a(a, a.not(g)).map_err(|e| e.to_string())?;
            ensure(t.meet(&tn).is_delta(), || format!("{}: Θ_a ∩ Θ_-a ≠ Δ", a.name()))?;
        }
    }
    within(start, Duration::from_secs(60))
}

fn c11() -> Outcome {
    let mut v_members = 0;
    for a in k_corpus() {
        if satisfies(a, AxiomSetName::V).unwrap() {
            v_members += 1;
            let od = od_embedding(a).map_err(|e| format!("{}: {e}", a.name()))?;
            ensure(od.embedding.is_injective() && od.embedding.is_homomorphism(a, &od.product), || a.name().into())?;
        }
        let ba = satisfies(a, AxiomSetName::BaRel).unwrap();
        let sl = satisfies(a, AxiomSetName::SlRel).unwrap();
        if ba || sl {
            let v = independence_check(a).map_err(|e| e.to_string())?;
            ensure(v.holds(), || format!("{}: {:?}", a.name(), v.failure))?;
            let expected = match (ba, sl) {
                (true, true) => IndependenceClass::Both,
                (true, false) => IndependenceClass::Boolean,
                _ => IndependenceClass::Semilattice,
            };
            ensure(v.class == expected, || a.name().into())?;
            ensure(!ba || is_boolean(a), || format!("{} passes BA_rel but is not Boolean", a.name()))?;
        }
    }
    ensure(v_members > 0, || "no V members".into())?;
    let p = direct_product(&b2_bochvar(), &sl2_bochvar()).unwrap();
    let od = od_embedding(&p).map_err(|e| e.to_string())?;
    ensure(od.onto, || "B2 x SL2 embedding is not onto".into())
}

fn c12() -> Outcome {
    let start = Instant::now();
    for a in members_up_to(8) {
        let v = isp_wke_check(a, 8).map_err(|e| e.to_string())?;
        ensure(v.agree(), || format!("{}: axioms say {}, embedding {}", a.name(), v.bca_member, v.embedding.is_some()))?;
    }
    within(start, Duration::from_secs(120))
}

fn c13() -> Outcome {
    let w = wke();
    let (be, pwke) = (Logic::Be.designated(&w), Logic::PWKe.designated(&w));
    let t = |s: &str| parse_term(s).unwrap();
    ensure(tautology(&t("J2 x | -J2 x"), &be).0, || "J2 x | -J2 x under Be".into())?;
    let (ok, cx) = tautology(&t("x | -x"), &be);
    ensure(!ok && cx.map(|v| v.render(&w)).as_deref() == Some("x=half"), || "x | -x under Be".into())?;
    ensure(tautology(&t("x | -x"), &pwke).0, || "x | -x under PWKe".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("generator tables", c1),
        ("axiom soundness", c2),
        ("separation", c3),
        ("round trips", c4),
        ("J2 uniqueness", c5),
        ("forbidden configuration", c6),
        ("J-def forcing", c7),
        ("subdirect irreducibility", c8),
        ("K consequences", c9),
        ("Θ audit", c10),
        ("BA x SL structure", c11),
        ("quasivariety double-check", c12),
        ("logic sanity", c13),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({took:.2?}): {e}", i + 1);
            }
        }
    }
    println!("corpus: {} algebras", k_corpus().len());
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
