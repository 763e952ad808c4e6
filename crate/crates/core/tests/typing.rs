//! The checker rejects programs whose claims or resource usage are wrong.

mod common;

use pqra::harness::{check_source, corpus_program, HarnessError};
use pqra::index::CheckStrategy;
use pqra::metrics::{profile, MetricProfile, Profile};
use pqra::syntax::pretty::display_type;
use pqra::typeck::{TypeError, TypeErrorKind};

fn check(src: &str, p: &MetricProfile) -> Result<String, TypeError> {
    match check_source(src, p, CheckStrategy::default()) {
        Ok((_, t)) => Ok(display_type(&t.main_type, p)),
        Err(HarnessError::Type(e)) => Err(e),
        Err(other) => panic!("unexpected failure: {other}"),
    }
}

fn depth() -> &'static MetricProfile {
    profile(Profile::Depth)
}

#[test]
fn understated_depth_is_rejected() {
    let src = corpus_program("qft_depth").unwrap().source.replace("Qubit{i+n+j}\n", "Qubit{i+n+j-1}\n");
    let e = check(&src, depth()).unwrap_err();
    assert_eq!(e.binding, "main");
    assert!(matches!(e.kind, TypeErrorKind::Entailment { .. }), "{e}");
}

#[test]
fn overstated_depth_is_accepted() {
    let src = corpus_program("qft_depth").unwrap().source.replace("Qubit{i+n+j}\n", "Qubit{i+2*n+j}\n");
    assert_eq!(check(&src, depth()).unwrap(), "n -> i -> List[j<n] Qubit{i} -o List[j<n] Qubit{i+2*n+j}");
}

#[test]
fn wrong_step_annotation_names_the_binding() {
    // Claiming the rotations leave their controls one layer too shallow.
    let src = corpus_program("qft_depth")
        .unwrap()
        .source
        .replace("(List[j<k] Qubit{i+m+j+1}, Qubit{i+m+k})", "(List[j<k] Qubit{i+m+j}, Qubit{i+m+k})");
    let e = check(&src, depth()).unwrap_err();
    assert_eq!(e.binding, "rotate");
}

#[test]
fn list_lengths_are_checked() {
    let src = "let f = @n. \\reg::List[j<n] Qubit. (reg) :: List[j<n+1] Qubit in f";
    let e = check(src, profile(Profile::Width)).unwrap_err();
    assert_eq!(e.binding, "f");
    assert!(e.to_string().contains("n = n+1") || e.to_string().contains("n+1"), "{e}");
}

#[test]
fn qubits_cannot_be_duplicated_or_dropped() {
    let w = profile(Profile::Width);
    let e = check("let f = \\q::Qubit. force cnot q q in f", w).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::Reused("q".into()));
    let e = check("let f = \\q::Qubit. force qinit0 () in f", w).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::Unused("q".into()));
    let e = check("let q = force qinit0 () in let f = lift force hadamard q in f", w).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::LinearInSuspension("q".into()));
}

#[test]
fn bit_and_qubit_are_distinct() {
    let e = check("let f = \\b::Bit. force hadamard b in f", profile(Profile::Width)).unwrap_err();
    assert!(matches!(e.kind, TypeErrorKind::Mismatch { .. }), "{e}");
}

#[test]
fn unknown_names_are_reported() {
    let e = check("let f = \\q::Qubit. force toffoli q in f", profile(Profile::Width)).unwrap_err();
    assert_eq!(e.kind, TypeErrorKind::Unbound("toffoli".into()));
    assert!(e.to_string().starts_with("error[E001] in `f`"));
}

#[test]
fn annotations_are_checked_against_effects() {
    let w = profile(Profile::Width);
    let ok = "let f = \\q::Qubit. force hadamard q in (f) :: Qubit -o[3] Qubit";
    assert_eq!(check(ok, w).unwrap(), "Qubit -o[3,0] Qubit");
    let bad = "let f = \\q::Qubit. let a = force qinit0 () in let (q, a) = force cnot q a in let u = force qdiscard a in q in (f) :: Qubit -o[1] Qubit";
    assert!(matches!(check(bad, w).unwrap_err().kind, TypeErrorKind::Entailment { .. }));
}

#[test]
fn effects_accumulate_sequentially_for_counts() {
    let g = profile(Profile::GateCount);
    let src = "let f = \\q::Qubit. let q = force hadamard q in let q = force t q in force hadamard q in f";
    assert_eq!(check(src, g).unwrap(), "Qubit -o[3,0] Qubit");
    assert_eq!(check(src, profile(Profile::TCount)).unwrap(), "Qubit -o[1,0] Qubit");
    assert_eq!(check(src, profile(Profile::Width)).unwrap(), "Qubit -o[1,0] Qubit");
}

#[test]
fn boxing_produces_a_sized_circuit() {
    let src = "let c = box[; (Qubit, Qubit)] (lift \\(a, b)::(Qubit, Qubit). force cnot a b) in \
               let f = \\(a, b)::(Qubit, Qubit). apply(c, (a, b)) in f";
    assert_eq!(check(src, profile(Profile::Width)).unwrap(), "(Qubit, Qubit) -o[2,0] (Qubit, Qubit)");
    assert_eq!(check(src, profile(Profile::GateCount)).unwrap(), "(Qubit, Qubit) -o[1,0] (Qubit, Qubit)");
}

#[test]
fn parse_errors_have_positions() {
    match check_source("let x = \\q::Qubit q in x", profile(Profile::Width), CheckStrategy::default()) {
        Err(HarnessError::Parse(e)) => assert_eq!((e.pos.line, e.pos.col), (1, 19)),
        other => panic!("expected a parse error, got {:?}", other.map(|_| ())),
    }
}
