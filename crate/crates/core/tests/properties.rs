//! Property-based tests of the core invariants.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{arb_index_term, arb_valuation, checked, AstGen, INDEX_VARS};
use pqra::circuit::{random_circuit, Circuit};
use pqra::eval::Machine;
use pqra::harness::{builtin_corpus, run_main, valuation_grid};
use pqra::index::simplify::simplify;
use pqra::index::{evaluate, substitute, IndexTerm, Valuation};
use pqra::metrics::{profile, Profile};
use pqra::racs::infer_signature;
use pqra::syntax::ast::{type_size, wire_content, Type};
use pqra::syntax::parser::{parse_program, parse_term};
use pqra::syntax::pretty::{program_to_source, term_to_source};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Evaluating a substitution equals evaluating under the updated valuation.
    #[test]
    fn substitution_commutes_with_evaluation(
        t in arb_index_term(),
        r in arb_index_term(),
        x in prop::sample::select(&INDEX_VARS[..]),
        v in arb_valuation(),
    ) {
        for p in [Profile::Width, Profile::GateCount] {
            let p = profile(p);
            let Ok(rv) = evaluate(&r, &v, p) else { continue };
            let mut updated = v.clone();
            updated.insert(x.to_string(), rv);
            let direct = evaluate(&substitute(&t, &r, x), &v, p);
            let shifted = evaluate(&t, &updated, p);
            prop_assert_eq!(direct, shifted, "t = {}, r = {}", t, r);
        }
    }

    /// Lowering then simplifying never changes an index's value.
    #[test]
    fn simplification_preserves_values(t in arb_index_term(), v in arb_valuation()) {
        for p in [Profile::Width, Profile::GateCount, Profile::TCount] {
            let p = profile(p);
            let lowered = p.lower(&t).unwrap();
            prop_assert_eq!(evaluate(&t, &v, p).unwrap(), evaluate(&lowered, &v, p).unwrap());
            prop_assert_eq!(evaluate(&simplify(&lowered), &v, p).unwrap(), evaluate(&lowered, &v, p).unwrap());
        }
    }

    /// Signature bounds are exact for the global built-ins on random circuits.
    #[test]
    fn signatures_match_oracles(seed in any::<u64>()) {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), 10);
        let sig = infer_signature(&c);
        for p in [Profile::Width, Profile::GateCount, Profile::TCount, Profile::Qubits, Profile::Bits] {
            let p = profile(p);
            prop_assert_eq!(evaluate(&sig.global, &Valuation::new(), p).unwrap(), p.oracle.measure(&c));
        }
    }

    /// Circuit text serialization round-trips.
    #[test]
    fn circuit_text_round_trips(seed in any::<u64>()) {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), 10);
        prop_assert_eq!(Circuit::from_text(&c.to_text()).unwrap(), c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Printing a syntax tree and parsing it back gives the same tree.
    #[test]
    fn random_terms_round_trip(seed in any::<u64>()) {
        let mut g = AstGen { rng: ChaCha8Rng::seed_from_u64(seed) };
        let t = g.term(5);
        let printed = term_to_source(&t);
        let parsed = parse_term(&printed);
        prop_assert!(parsed.is_ok(), "{printed}: {:?}", parsed.err());
        prop_assert_eq!(parsed.unwrap(), t, "{}", printed);
    }
}

#[test]
fn corpus_programs_round_trip() {
    for prog in builtin_corpus() {
        let p = parse_program(prog.source).unwrap();
        let printed = program_to_source(&p);
        assert_eq!(parse_program(&printed).unwrap(), p, "{}", prog.name);
    }
}

/// Every subterm type of `t`.
fn all_types(t: &Type, out: &mut Vec<Type>) {
    out.push(t.clone());
    match t {
        Type::Bang(_, a) | Type::List(_, _, a) | Type::IndexAll(_, _, a) => all_types(a, out),
        Type::Tensor(a, b) => {
            all_types(a, out);
            all_types(b, out);
        }
        Type::Arrow(f) => {
            all_types(&f.dom, out);
            all_types(&f.cod, out);
            all_types(&f.capture, out);
        }
        Type::Circ(c) => {
            all_types(&c.input, out);
            all_types(&c.output, out);
        }
        Type::Unit | Type::Wire(..) => {}
    }
}

#[test]
fn size_of_wire_content_is_size() {
    let mut checked_types = 0;
    for prog in builtin_corpus() {
        for p in prog.profiles().into_iter().filter(|p| !p.is_local()) {
            let (_, typing) = checked(prog.name, p);
            let mut types = Vec::new();
            all_types(&typing.main_type, &mut types);
            for (_, t, _) in &typing.bindings {
                all_types(t, &mut types);
            }
            for t in &types {
                let names = ["n", "m", "i", "k"];
                for val in valuation_grid(&names, 0..=3) {
                    let direct = evaluate(&type_size(t), &val, p);
                    let via_content = evaluate(&type_size(&wire_content(t)), &val, p);
                    assert_eq!(direct, via_content, "{}: {t:?}", prog.name);
                }
                checked_types += 1;
            }
        }
    }
    assert!(checked_types > 100);
}

#[test]
fn evaluation_is_deterministic_and_append_only() {
    for prog in builtin_corpus() {
        for p in prog.profiles() {
            let (program, typing) = checked(prog.name, p);
            for val in valuation_grid(prog.params, 0..=3) {
                let a = run_main(&program, &typing, p, &val).unwrap();
                let b = run_main(&program, &typing, p, &val).unwrap();
                assert_eq!(a.circuit, b.circuit);
                assert_eq!(a.result, b.result);
            }
        }
    }
    // Appending to a non-empty circuit keeps its gates as a prefix.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let base = random_circuit(&mut rng, 6);
        let mut m = Machine::new(base.clone(), false);
        let src = "let q = force qinit0 () in let q = force hadamard q in force qdiscard q";
        m.eval(&parse_term(src).unwrap()).unwrap();
        assert_eq!(&m.circuit.gates()[..base.gates().len()], base.gates());
        assert_eq!(m.circuit.gates().len(), base.gates().len() + 3);
    }
}

#[test]
fn bounded_sums_have_closed_forms() {
    // sum[m<n] m+1 = n(n+1)/2, checked by brute force.
    let t = IndexTerm::sum("m", IndexTerm::var("n"), IndexTerm::plus(IndexTerm::var("m"), 1.into()));
    for n in 0..20u64 {
        let v = Valuation::from([("n".to_string(), n)]);
        let brute: u64 = (0..n).map(|m| m + 1).sum();
        assert_eq!(evaluate(&t, &v, profile(Profile::GateCount)).unwrap(), brute);
        assert_eq!(brute, n * (n + 1) / 2);
    }
}

#[test]
fn generated_terms_are_nontrivial() {
    let mut g = AstGen { rng: ChaCha8Rng::seed_from_u64(11) };
    let sizes: Vec<usize> = (0..50).map(|_| term_to_source(&g.term(5)).len()).collect();
    assert!(sizes.iter().filter(|s| **s > 40).count() >= 15, "{sizes:?}");
}
