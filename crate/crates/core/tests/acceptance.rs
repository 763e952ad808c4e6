//! The acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p pqra --test acceptance`.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{checked, valuation, AstGen};
use pqra::circuit::{
    oracle_depth, oracle_gatecount, oracle_max_depth, oracle_width, random_circuit, teleportation_circuit, Circuit,
    Label,
};
use pqra::harness::{builtin_corpus, run_main, valuation_grid, verify_bounds};
use pqra::index::{evaluate, substitute, Valuation};
use pqra::metrics::{
    profile, validate_cmi_sound, validate_local_coherence, validate_well_behaved, Combine, Profile, Rmi,
};
use pqra::racs::{infer_signature, input_var};
use pqra::syntax::ast::{type_size, wire_content};
use pqra::syntax::parser::{parse_program, parse_term};
use pqra::syntax::pretty::{display_type, program_to_source, term_to_source};

type Criterion = (&'static str, fn());

/// A profile paired with the exact cost it should report at each `n`.
type Expected = (Profile, fn(u64) -> u64);

const CRITERIA: [Criterion; 10] = [
    ("teleportation circuit: 8 gates, width 3, depth 6", teleportation),
    ("dumbNot: width and gate-count types", dumb_not),
    ("iterated dumbNot: constant width, linear gate count, sound for n in 0..=16", iterated_dumb_not),
    ("mapHadamard: exact width and gate count, depth i+1", map_hadamard),
    ("QFT: inferred types and exact measurements for n in 1..=8", qft_global),
    ("QFT under depth: type and per-wire depths 3,4,5", qft_depth),
    ("metric validators accept built-ins and reject a broken interpretation", validators),
    ("random circuits: signatures agree with oracles", random_signatures),
    ("every bundled program is sound under each of its profiles", corpus_soundness),
    ("round-trips, substitution coherence and size of wire content", structural),
];

fn main() -> ExitCode {
    // Keep the report readable: failures are summarized on their own line.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (description, check)) in CRITERIA.iter().enumerate() {
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(()) => println!("criterion {:>2}: PASS — {description}", k + 1),
            Err(e) => {
                failed += 1;
                let why = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2}: FAIL — {description}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn type_string(name: &str, p: Profile) -> String {
    let p = profile(p);
    display_type(&checked(name, p).1.main_type, p)
}

fn teleportation() {
    let c = teleportation_circuit();
    assert_eq!((oracle_gatecount(&c), oracle_width(&c), oracle_max_depth(&c)), (8, 3, 6));
    for (p, expect) in [(Profile::GateCount, 8), (Profile::Width, 3)] {
        let p = profile(p);
        let (prog, typing) = checked("teleport", p);
        let run = run_main(&prog, &typing, p, &Valuation::new()).unwrap();
        assert_eq!((run.bound, p.oracle.measure(&run.circuit)), (expect, expect), "{}", p.name);
    }
    let d = profile(Profile::Depth);
    let (prog, typing) = checked("teleport", d);
    let run = run_main(&prog, &typing, d, &Valuation::new()).unwrap();
    assert_eq!(run.label_depths.iter().map(|x| (x.1, x.2)).collect::<Vec<_>>(), vec![(6, 6)]);
}

fn dumb_not() {
    assert_eq!(type_string("dumbNot", Profile::Width), "Qubit -o[2,0] Qubit");
    assert_eq!(type_string("dumbNot", Profile::GateCount), "Qubit -o[1,0] Qubit");
}

fn iterated_dumb_not() {
    assert_eq!(type_string("iter_dumbNot", Profile::GateCount), "n ->[0,0] Qubit -o[n,0] Qubit");
    let w = profile(Profile::Width);
    let g = profile(Profile::GateCount);
    let (pw, tw) = checked("iter_dumbNot", w);
    let (pg, tg) = checked("iter_dumbNot", g);
    let grid = valuation_grid(&["n"], 0..=16);
    let width = verify_bounds("iter_dumbNot", &pw, &tw, w, &grid).unwrap();
    let count = verify_bounds("iter_dumbNot", &pg, &tg, g, &grid).unwrap();
    assert!(width.all_hold() && count.all_hold());
    for (n, (rw, rg)) in width.rows.iter().zip(&count.rows).enumerate() {
        let n = n as u64;
        assert_eq!((rg.bound, rg.measured), (n, n));
        if n > 0 {
            assert_eq!((rw.bound, rw.measured), (2, 2));
        }
    }
}

fn map_hadamard() {
    for p in [Profile::Width, Profile::GateCount] {
        assert_eq!(type_string("mapHadamard", p), "n ->[0,0] List[j<n] Qubit -o[n,0] List[j<n] Qubit");
        let p = profile(p);
        let (prog, typing) = checked("mapHadamard", p);
        for n in 1..=8 {
            let run = run_main(&prog, &typing, p, &valuation(&[("n", n)])).unwrap();
            assert_eq!((run.bound, p.oracle.measure(&run.circuit)), (n, n));
        }
    }
    assert_eq!(
        type_string("mapHadamard_depth", Profile::Depth),
        "n -> i -> List[j<n] Qubit{i} -o List[j<n] Qubit{i+1}"
    );
    let d = profile(Profile::Depth);
    let (prog, typing) = checked("mapHadamard_depth", d);
    let run = run_main(&prog, &typing, d, &valuation(&[("n", 4), ("i", 0)])).unwrap();
    let zeros: HashMap<Label, u64> = run.circuit.initial().labels().map(|l| (l, 0)).collect();
    let reached = oracle_depth(&run.circuit, &zeros).unwrap();
    for (l, promised, _) in &run.label_depths {
        assert_eq!((*promised, reached[l]), (1, 1));
    }
}

fn qft_global() {
    assert_eq!(type_string("qft", Profile::Width), "n ->[0,0] List[j<n] Qubit -o[n,0] List[j<n] Qubit");
    assert_eq!(
        type_string("qft", Profile::GateCount),
        "n ->[0,0] List[j<n] Qubit -o[sum[m<n] m+1,0] List[j<n] Qubit"
    );
    let formulas: [Expected; 2] = [(Profile::GateCount, |n| n * (n + 1) / 2), (Profile::Width, |n| n)];
    for (p, expect) in formulas {
        let p = profile(p);
        let (prog, typing) = checked("qft", p);
        for n in 1..=8 {
            let run = run_main(&prog, &typing, p, &valuation(&[("n", n)])).unwrap();
            assert_eq!((run.bound, p.oracle.measure(&run.circuit)), (expect(n), expect(n)), "{} n={n}", p.name);
        }
    }
}

fn qft_depth() {
    assert_eq!(type_string("qft_depth", Profile::Depth), "n -> i -> List[j<n] Qubit{i} -o List[j<n] Qubit{i+n+j}");
    let d = profile(Profile::Depth);
    let (prog, typing) = checked("qft_depth", d);
    let run = run_main(&prog, &typing, d, &valuation(&[("n", 3), ("i", 0)])).unwrap();
    let got: Vec<(u64, u64)> = run.label_depths.iter().map(|x| (x.1, x.2)).collect();
    assert_eq!(got, vec![(3, 3), (4, 4), (5, 5)]);
}

fn validators() {
    for p in [Profile::Width, Profile::GateCount] {
        let r = validate_well_behaved(&profile(p).rmi, 32);
        assert!(r.passed(), "{:?}", r.violation);
    }
    for p in [Profile::Width, Profile::GateCount, Profile::TCount, Profile::Qubits, Profile::Bits] {
        let p = profile(p);
        let r = validate_local_coherence(&p.rmi, &p.cmi, 16);
        assert!(r.passed(), "{}: {:?}", p.name, r.violation);
    }
    fn first(a: u64, _: u64) -> u64 {
        a
    }
    let broken = Rmi { seq: Combine::Custom { name: "first", op: first }, ..profile(Profile::Width).rmi };
    let r = validate_well_behaved(&broken, 8);
    let v = r.violation.expect("a first-projection sequence must be rejected");
    assert!(!v.witness.is_empty());
}

fn random_signatures() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let corpus: Vec<Circuit> = (0..200).map(|_| random_circuit(&mut rng, 10)).collect();
    for c in &corpus {
        assert!(c.gates().len() <= 10);
        let sig = infer_signature(c);
        for p in [Profile::Width, Profile::GateCount, Profile::TCount, Profile::Qubits, Profile::Bits] {
            let p = profile(p);
            assert_eq!(evaluate(&sig.global, &Valuation::new(), p).unwrap(), p.oracle.measure(c), "{}", p.name);
        }
    }
    // Depth annotations, against the oracle under sampled input depths.
    let d = profile(Profile::Depth);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for c in &corpus {
        let sig = infer_signature(c);
        for _ in 0..16 {
            let depths: HashMap<Label, u64> =
                c.initial().labels().map(|l| (l, rand::Rng::gen_range(&mut rng, 0..=16))).collect();
            let val: Valuation = sig.input_vars.iter().map(|(l, x)| (x.clone(), depths[l])).collect();
            let reached = oracle_depth(c, &depths).unwrap();
            for (l, _, ann) in sig.outputs.iter() {
                let ann = ann.expect("every output is annotated");
                assert_eq!(evaluate(ann, &val, d).unwrap(), reached[&l]);
            }
        }
        assert!(sig.input_vars.iter().all(|(l, x)| *x == input_var(*l)));
    }
    assert!(validate_cmi_sound(d, &corpus, 16).passed());
}

fn corpus_soundness() {
    let mut reports = 0;
    for prog in builtin_corpus() {
        for p in prog.profiles() {
            let (program, typing) = checked(prog.name, p);
            let report = verify_bounds(prog.name, &program, &typing, p, &valuation_grid(prog.params, 0..=8)).unwrap();
            assert!(report.all_hold(), "{report}");
            reports += 1;
        }
    }
    assert!(reports >= 20);
}

fn structural() {
    for prog in builtin_corpus() {
        let p = parse_program(prog.source).unwrap();
        assert_eq!(parse_program(&program_to_source(&p)).unwrap(), p, "{}", prog.name);
    }
    let mut g = AstGen { rng: ChaCha8Rng::seed_from_u64(500) };
    for _ in 0..500 {
        let t = g.term(5);
        let printed = term_to_source(&t);
        assert_eq!(parse_term(&printed).unwrap(), t, "{printed}");
    }
    // Substitution coherence over index terms drawn from the AST generator.
    let w = profile(Profile::Width);
    let c = profile(Profile::GateCount);
    for _ in 0..1000 {
        let (t, r) = (g.index(3), g.index(2));
        let val = valuation(&[("n", 2), ("m", 3), ("i", 1), ("j", 4)]);
        for p in [w, c] {
            let rv = evaluate(&r, &val, p).unwrap();
            let mut shifted = val.clone();
            shifted.insert("n".into(), rv);
            assert_eq!(evaluate(&substitute(&t, &r, "n"), &val, p), evaluate(&t, &shifted, p), "{t} [{r}/n]");
        }
    }
    for prog in builtin_corpus() {
        for p in prog.profiles().into_iter().filter(|p| !p.is_local()) {
            let t = checked(prog.name, p).1.main_type;
            for val in valuation_grid(&["n"], 0..=4) {
                assert_eq!(evaluate(&type_size(&t), &val, p), evaluate(&type_size(&wire_content(&t)), &val, p));
            }
        }
    }
}
