//! `bochvar-lab`: command-line front end for the Bochvar algebra toolkit.
//!
//! Exit status: 0 on success, 1 when a check finds a counterexample or a
//! missing isomorphism, 2 on unreadable or invalid input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use bochvar_core::algebra::{is_subdirectly_irreducible, FiniteAlgebra};
use bochvar_core::axioms::{axiom_set, check_axiom_set, classify, AxiomSetName};
use bochvar_core::equivalence::{
    algebra_to_system, enumerate_systems, roundtrip_algebra, roundtrip_system, system_to_algebra, BochvarSystem,
};
use bochvar_core::io::{self, Document};
use bochvar_core::plonka::{decompose, plonka_sum, validate_system};
use bochvar_core::terms::{check_quasi_identity, parse_quasi_identity, parse_term, tautology, Logic};
use bochvar_core::varieties::{forbidden_search, hs_wke_classify, jdef_extension, HsClass};

#[derive(Parser)]
#[command(name = "bochvar-lab", version, about = "Exhaustive checks on finite Bochvar algebras and systems")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an algebra against an axiom catalog.
    Check {
        algebra: PathBuf,
        /// FG, BCA, IBSL, SIBSL, K, V, BA_rel or SL_rel.
        #[arg(long = "set")]
        set: String,
    },
    /// Check one identity or quasi-identity, e.g. "x & y = y & x".
    Holds { algebra: PathBuf, formula: String },
    /// Report catalog memberships and structural data.
    Classify { algebra: PathBuf },
    /// Build the Płonka sum of a direct-system file.
    Plonka {
        system: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose an involutive bisemilattice into a direct-system file.
    Decompose {
        algebra: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bochvar system to Bochvar algebra.
    Sys2alg {
        system: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bochvar algebra to Bochvar system.
    Alg2sys {
        algebra: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the round trip for an algebra or system file.
    Roundtrip { path: PathBuf },
    /// Enumerate the systems over the Boolean algebra with N atoms and
    /// check each one.
    Enumerate {
        #[arg(long)]
        atoms: usize,
        /// Include every atom count from 0 to N.
        #[arg(long)]
        cumulative: bool,
    },
    /// Decide whether a term is a tautology of the generator.
    Taut {
        term: String,
        /// Be (designated {1}) or PWKe (designated {1, half}).
        #[arg(long, default_value = "Be")]
        logic: String,
    },
    /// Expand an algebra by the forced J2 table and check K.
    Jdef { algebra: PathBuf },
    /// Search every J2 table on an algebra's reduct satisfying K.
    Forbidden { algebra: PathBuf },
}

enum Failure {
    /// Unreadable or invalid input.
    Input(String),
    /// The check ran and answered no; the report is already printed.
    Semantic,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, text: &str, value: Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
        } else {
            print!("{text}");
        }
    }
}

fn read_algebra(path: &Path) -> Result<FiniteAlgebra, Failure> {
    Ok(io::parse_algebra(&io::read_to_string(path)?)?)
}

fn read_system(path: &Path) -> Result<BochvarSystem, Failure> {
    Ok(io::parse_system(&io::read_to_string(path)?)?)
}

/// Writes `contents` to `output` or prints it. With `--json` and no output
/// file the document itself is the machine-readable result.
fn deliver(out: &Out, output: Option<&Path>, contents: &str, summary: String, extra: Value) -> Outcome {
    match output {
        Some(path) => {
            io::write_string(path, contents)?;
            let mut v = extra;
            v["written"] = json!(path.display().to_string());
            out.emit(&format!("{summary}\nwrote {}\n", path.display()), v);
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn cmd_check(out: &Out, path: &Path, set: &str) -> Outcome {
    let name: AxiomSetName = set.parse()?;
    let a = read_algebra(path)?;
    let report = check_axiom_set(&a, &axiom_set(name))?;
    let mut text = String::new();
    for line in report.lines() {
        writeln!(text, "{line}").unwrap();
    }
    let held = report.items.iter().filter(|i| i.holds()).count();
    writeln!(text, "{name}: {held}/{} items hold in {}", report.items.len(), a.name()).unwrap();
    let items: Vec<Value> = report
        .items
        .iter()
        .map(|i| json!({"label": i.label, "holds": i.holds(), "counterexample": i.counterexample}))
        .collect();
    out.emit(&text, json!({"algebra": a.name(), "set": name.as_str(), "passes": report.passes(), "items": items}));
    if report.passes() {
        Ok(())
    } else {
        Err(Failure::Semantic)
    }
}

fn cmd_holds(out: &Out, path: &Path, formula: &str) -> Outcome {
    let a = read_algebra(path)?;
    let q = parse_quasi_identity(formula)?;
    let verdict = check_quasi_identity(&a, &q)?;
    let cx = verdict.counterexample().map(|v| v.render(&a));
    let text = match &cx {
        None => format!("{q}: HOLDS\n"),
        Some(c) => format!("{q}: FAILS at {c}\n"),
    };
    out.emit(&text, json!({"algebra": a.name(), "formula": q.to_string(), "holds": cx.is_none(), "counterexample": cx}));
    if cx.is_none() {
        Ok(())
    } else {
        Err(Failure::Semantic)
    }
}

fn cmd_classify(out: &Out, path: &Path) -> Outcome {
    let a = read_algebra(path)?;
    let c = classify(&a);
    let mut text = c.lines().join("\n");
    text.push('\n');
    let si = match is_subdirectly_irreducible(&a) {
        Ok(v) => Some(v.irreducible),
        Err(_) => None,
    };
    let hs = hs_name(hs_wke_classify(&a));
    writeln!(text, "subdirectly irreducible: {}", si.map_or("n/a", |b| if b { "yes" } else { "no" })).unwrap();
    writeln!(text, "HS(WKe): {}", hs.unwrap_or("no")).unwrap();
    let memberships: serde_json::Map<String, Value> =
        c.memberships.iter().map(|(n, v)| (n.as_str().to_string(), json!(v))).collect();
    out.emit(
        &text,
        json!({
            "algebra": c.algebra,
            "size": c.size,
            "memberships": memberships,
            "ibsl_reduct": c.ibsl_reduct,
            "sibsl_reduct": c.sibsl_reduct,
            "fixpoints": c.fixpoints,
            "fibres": c.fibres,
            "subdirectly_irreducible": si,
            "hs_wke": hs,
        }),
    );
    Ok(())
}

fn hs_name(c: HsClass) -> Option<&'static str> {
    match c {
        HsClass::Trivial => Some("trivial"),
        HsClass::B2 => Some("B2"),
        HsClass::SL2 => Some("SL2"),
        HsClass::WKe => Some("WKe"),
        HsClass::None => None,
    }
}

fn cmd_plonka(out: &Out, path: &Path, output: Option<&Path>) -> Outcome {
    let s = io::parse_direct_system(&io::read_to_string(path)?)?;
    let report = validate_system(&s);
    if !report.is_valid() {
        let list: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::Input(format!("invalid direct system:\n  {}", list.join("\n  "))));
    }
    let (a, _) = plonka_sum(&s)?;
    let summary = format!("{}: {} elements over {} fibres", a.name(), a.size(), s.fibres.len());
    deliver(out, output, &io::algebra_to_json(&a), summary, json!({"algebra": a.name(), "size": a.size()}))
}

fn cmd_decompose(out: &Out, path: &Path, output: Option<&Path>) -> Outcome {
    let a = read_algebra(path)?;
    let d = decompose(&a.reduct())?;
    let summary = format!("{}: {} fibres", a.name(), d.fibre_count());
    deliver(out, output, &io::direct_system_to_json(&d.system), summary, json!({"algebra": a.name(), "fibres": d.fibre_count()}))
}

fn cmd_sys2alg(out: &Out, path: &Path, output: Option<&Path>) -> Outcome {
    let s = read_system(path)?;
    let c = system_to_algebra(&s)?;
    let a = &c.algebra;
    let summary = format!("{s}: {} elements", a.size());
    deliver(out, output, &io::algebra_to_json(a), summary, json!({"system": s.to_string(), "size": a.size()}))
}

fn cmd_alg2sys(out: &Out, path: &Path, output: Option<&Path>) -> Outcome {
    let a = read_algebra(path)?;
    let r = algebra_to_system(&a)?;
    let summary = format!("{}: {}", a.name(), r.system);
    deliver(out, output, &io::system_to_json(&r.system), summary, json!({"algebra": a.name(), "system": r.system.to_string()}))
}

fn cmd_roundtrip(out: &Out, path: &Path) -> Outcome {
    let doc = io::parse_document(&io::read_to_string(path)?)?;
    let result = match doc {
        Document::Algebra(a) => roundtrip_algebra(&a).map(|rt| {
            let target = &rt.constructed.algebra;
            let text = format!(
                "{} ≅ {} via system {}\nisomorphism: {}\n",
                a.name(),
                target.name(),
                rt.recovered.system,
                rt.iso.describe(&a, target)
            );
            (text, json!({"kind": "algebra", "source": a.name(), "system": rt.recovered.system.to_string(), "iso": rt.iso.map()}))
        }),
        Document::System(s) => roundtrip_system(&s).map(|rt| {
            let (b1, b2) = (s.boolean().algebra(), rt.recovered.system.boolean().algebra());
            let text = format!(
                "{s} ≅ {} via algebra {}\nisomorphism: {}\n",
                rt.recovered.system,
                rt.constructed.algebra.name(),
                rt.iso.describe(b1, b2)
            );
            (text, json!({"kind": "system", "source": s.to_string(), "recovered": rt.recovered.system.to_string(), "iso": rt.iso.map()}))
        }),
        Document::DirectSystem(_) => {
            return Err(Failure::Input("round trips take an algebra or a Bochvar system file".into()));
        }
    };
    match result {
        Ok((text, value)) => {
            out.emit(&text, value);
            Ok(())
        }
        Err(e @ bochvar_core::equivalence::EquivalenceError::NoIsomorphism(_)) => {
            out.emit(&format!("{e}\n"), json!({"error": e.to_string()}));
            Err(Failure::Semantic)
        }
        Err(e) => Err(e.into()),
    }
}

const MAX_ATOMS: usize = 3;

fn cmd_enumerate(out: &Out, atoms: usize, cumulative: bool) -> Outcome {
    if atoms > MAX_ATOMS {
        return Err(Failure::Input(format!("--atoms {atoms} exceeds the bound {MAX_ATOMS}")));
    }
    let range = if cumulative { 0..=atoms } else { atoms..=atoms };
    let mut text = String::new();
    let mut rows = Vec::new();
    let (mut total, mut passed) = (0, 0);
    for k in range {
        for s in enumerate_systems(k) {
            total += 1;
            let rt = roundtrip_system(&s);
            let a = rt.as_ref().ok().map(|r| r.constructed.algebra.clone());
            let alg_ok = a.as_ref().is_some_and(|a| roundtrip_algebra(a).is_ok());
            let bca = a.as_ref().is_some_and(|a| check_axiom_set(a, &axiom_set(AxiomSetName::Bca)).is_ok_and(|r| r.passes()));
            let si = a.as_ref().and_then(|a| is_subdirectly_irreducible(a).ok()).is_some_and(|v| v.irreducible);
            let hs = a.as_ref().and_then(|a| hs_name(hs_wke_classify(a)));
            let ok = rt.is_ok() && alg_ok && bca && (!si || hs.is_some());
            passed += usize::from(ok);
            let size = a.as_ref().map_or(0, FiniteAlgebra::size);
            let si_text = if si { format!("SI ({})", hs.unwrap_or("outside HS(WKe)")) } else { "not SI".into() };
            writeln!(text, "{s}: {size} elements, round trips {}, BCA {}, {si_text}", mark(rt.is_ok() && alg_ok), mark(bca)).unwrap();
            rows.push(json!({
                "system": s.to_string(), "size": size, "roundtrip": rt.is_ok() && alg_ok,
                "bca": bca, "si": si, "hs_wke": hs, "pass": ok,
            }));
        }
    }
    writeln!(text, "systems: {total}, passed: {passed}").unwrap();
    out.emit(&text, json!({"systems": total, "passed": passed, "results": rows}));
    if passed == total {
        Ok(())
    } else {
        Err(Failure::Semantic)
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn cmd_taut(out: &Out, term: &str, logic: &str) -> Outcome {
    let logic: Logic = logic.parse()?;
    let t = parse_term(term)?;
    let wke = bochvar_core::fixtures::wke();
    let (ok, cx) = tautology(&t, &logic.designated(&wke));
    let cx = cx.map(|v| v.render(&wke));
    let text = match &cx {
        None => format!("{t}: tautology\n"),
        Some(c) => format!("{t}: not a tautology, fails at {c}\n"),
    };
    out.emit(&text, json!({"term": t.to_string(), "tautology": ok, "counterexample": cx}));
    if ok {
        Ok(())
    } else {
        Err(Failure::Semantic)
    }
}

fn cmd_jdef(out: &Out, path: &Path) -> Outcome {
    let a = read_algebra(path)?;
    let r = jdef_extension(&a)?;
    let j2 = r.algebra.j2_table().expect("expanded");
    let table: Vec<String> =
        a.carrier().map(|x| format!("J2 {} = {}", a.element_name(x), a.element_name(j2[x]))).collect();
    let mut text = table.join("\n");
    text.push('\n');
    match &r.failure {
        None => text.push_str("K: HOLDS\n"),
        Some((label, at)) => writeln!(text, "{label}: FAILS at {at}").unwrap(),
    }
    let names: Vec<&str> = j2.iter().map(|&e| a.element_name(e)).collect();
    out.emit(&text, json!({"algebra": a.name(), "j2": names, "k": r.is_k(), "failure": r.failure}));
    if r.is_k() {
        Ok(())
    } else {
        Err(Failure::Semantic)
    }
}

fn cmd_forbidden(out: &Out, path: &Path) -> Outcome {
    let a = read_algebra(path)?;
    let r = forbidden_search(&a);
    let mut text = format!(
        "{}: {} candidate tables, {} complete tables examined, {} satisfy K\n",
        a.name(),
        r.candidate_space,
        r.leaves,
        r.tables.len()
    );
    let tables: Vec<Vec<&str>> = r.tables.iter().map(|t| t.iter().map(|&e| a.element_name(e)).collect()).collect();
    for t in &tables {
        writeln!(text, "J2 = [{}]", t.join(", ")).unwrap();
    }
    out.emit(
        &text,
        json!({"algebra": a.name(), "candidate_space": r.candidate_space.to_string(), "leaves": r.leaves, "tables": tables}),
    );
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let out = Out { json: cli.json };
    match &cli.command {
        Command::Check { algebra, set } => cmd_check(&out, algebra, set),
        Command::Holds { algebra, formula } => cmd_holds(&out, algebra, formula),
        Command::Classify { algebra } => cmd_classify(&out, algebra),
        Command::Plonka { system, output } => cmd_plonka(&out, system, output.as_deref()),
        Command::Decompose { algebra, output } => cmd_decompose(&out, algebra, output.as_deref()),
        Command::Sys2alg { system, output } => cmd_sys2alg(&out, system, output.as_deref()),
        Command::Alg2sys { algebra, output } => cmd_alg2sys(&out, algebra, output.as_deref()),
        Command::Roundtrip { path } => cmd_roundtrip(&out, path),
        Command::Enumerate { atoms, cumulative } => cmd_enumerate(&out, *atoms, *cumulative),
        Command::Taut { term, logic } => cmd_taut(&out, term, logic),
        Command::Jdef { algebra } => cmd_jdef(&out, algebra),
        Command::Forbidden { algebra } => cmd_forbidden(&out, algebra),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Semantic) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
