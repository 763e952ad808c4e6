//! Frozen reference values. Numbers quoted from the literature are checked
//! directly; derived numbers are recomputed here by brute force,
//! independently of the library's own oracles.

mod common;

use std::collections::HashMap;

use common::{checked, valuation};
use pqra::circuit::{
    oracle_depth, oracle_gatecount, oracle_max_depth, oracle_width, teleportation_circuit, Circuit, Label,
};
use pqra::harness::run_main;
use pqra::index::Valuation;
use pqra::metrics::{profile, Profile};
use pqra::syntax::pretty::display_type;

/// Gate-by-gate depth replay, written independently of the library.
fn brute_depths(c: &Circuit) -> HashMap<Label, u64> {
    let mut d: HashMap<Label, u64> = c.initial().labels().map(|l| (l, 0)).collect();
    for g in c.gates() {
        let decl = g.gate.decl().unwrap();
        let base = g.inputs.iter().map(|l| d[l]).max().unwrap_or(0);
        let out = if decl.counts_as_gate && !g.inputs.is_empty() { base + 1 } else { base };
        for l in &g.outputs {
            d.insert(*l, out);
        }
    }
    d
}

/// Live wires at their busiest point, by direct simulation.
fn brute_width(c: &Circuit) -> u64 {
    let mut live = c.initial().len() as i64;
    let mut peak = live;
    for g in c.gates() {
        live += g.outputs.len() as i64 - g.inputs.len() as i64;
        peak = peak.max(live);
    }
    peak as u64
}

fn count(c: &Circuit, name: &str) -> usize {
    c.gates().iter().filter(|g| g.gate.name == name).count()
}

#[test]
fn teleportation_golden_numbers() {
    let c = teleportation_circuit();
    assert_eq!(oracle_gatecount(&c), 8);
    assert_eq!(oracle_width(&c), 3);
    assert_eq!(oracle_max_depth(&c), 6);
    assert_eq!(brute_width(&c), 3);
    assert_eq!(brute_depths(&c).values().max().copied(), Some(6));
}

#[test]
fn teleport_program_builds_the_golden_circuit() {
    let (prog, typing) = checked("teleport", profile(Profile::Width));
    let run = run_main(&prog, &typing, profile(Profile::Width), &Valuation::new()).unwrap();
    assert_eq!((oracle_gatecount(&run.circuit), oracle_width(&run.circuit)), (8, 3));
    let out = run.result.to_bundle().unwrap().labels();
    assert_eq!(brute_depths(&run.circuit)[&out[0]], 6);
}

#[test]
fn dumb_not_types_are_exact() {
    let w = profile(Profile::Width);
    let g = profile(Profile::GateCount);
    assert_eq!(display_type(&checked("dumbNot", w).1.main_type, w), "Qubit -o[2,0] Qubit");
    assert_eq!(display_type(&checked("dumbNot", g).1.main_type, g), "Qubit -o[1,0] Qubit");
}

#[test]
fn iteration_counts_and_width() {
    for (p, expect) in [(Profile::GateCount, None), (Profile::Width, Some(2))] {
        let p = profile(p);
        let (prog, typing) = checked("iter_dumbNot", p);
        for n in 0..=16 {
            let run = run_main(&prog, &typing, p, &valuation(&[("n", n)])).unwrap();
            assert_eq!(count(&run.circuit, "CNOT") as u64, n);
            let measured = p.oracle.measure(&run.circuit);
            match expect {
                None => assert_eq!((run.bound, measured), (n, n)),
                Some(w) if n > 0 => assert_eq!((run.bound, measured, brute_width(&run.circuit)), (w, w, w)),
                Some(_) => assert_eq!(measured, 1),
            }
        }
    }
}

#[test]
fn map_hadamard_is_one_layer() {
    for p in [Profile::Width, Profile::GateCount] {
        let p = profile(p);
        let (prog, typing) = checked("mapHadamard", p);
        for n in 1..=8 {
            let run = run_main(&prog, &typing, p, &valuation(&[("n", n)])).unwrap();
            assert_eq!((run.bound, p.oracle.measure(&run.circuit)), (n, n));
        }
    }
    let d = profile(Profile::Depth);
    let (prog, typing) = checked("mapHadamard_depth", d);
    for n in 1..=8 {
        let run = run_main(&prog, &typing, d, &valuation(&[("n", n), ("i", 0)])).unwrap();
        let depths = brute_depths(&run.circuit);
        for (l, promised, reached) in &run.label_depths {
            assert_eq!((*promised, *reached, depths[l]), (1, 1, 1));
        }
        assert_eq!(run.label_depths.len() as u64, n);
    }
}

#[test]
fn qft_gate_census() {
    // The transform uses one Hadamard per qubit and one controlled
    // rotation per pair of qubits: n + n(n-1)/2 = n(n+1)/2 gates.
    let g = profile(Profile::GateCount);
    let w = profile(Profile::Width);
    let (prog_g, typing_g) = checked("qft", g);
    let (prog_w, typing_w) = checked("qft", w);
    for n in 1..=8u64 {
        let val = valuation(&[("n", n)]);
        let run = run_main(&prog_g, &typing_g, g, &val).unwrap();
        assert_eq!(count(&run.circuit, "H") as u64, n);
        assert_eq!(count(&run.circuit, "CR") as u64, n * (n - 1) / 2);
        assert_eq!((run.bound, oracle_gatecount(&run.circuit)), (n * (n + 1) / 2, n * (n + 1) / 2));
        let run = run_main(&prog_w, &typing_w, w, &val).unwrap();
        assert_eq!((run.bound, brute_width(&run.circuit)), (n, n));
    }
}

#[test]
fn qft_rotation_angles_follow_distance() {
    // Within step m, the rotation against control k (counted from the
    // nearest) has parameter m+1-k, so angles range over 2..=m+1.
    let g = profile(Profile::GateCount);
    let (prog, typing) = checked("qft", g);
    let run = run_main(&prog, &typing, g, &valuation(&[("n", 3)])).unwrap();
    let params: Vec<String> = run
        .circuit
        .gates()
        .iter()
        .filter(|gate| gate.gate.name == "CR")
        .map(|gate| gate.gate.to_string())
        .collect();
    let mut sorted = params.clone();
    sorted.sort();
    assert_eq!(sorted, vec!["CR[2]", "CR[2]", "CR[3]"]);
}

#[test]
fn qft_depths_at_three_qubits() {
    let d = profile(Profile::Depth);
    let (prog, typing) = checked("qft_depth", d);
    let run = run_main(&prog, &typing, d, &valuation(&[("n", 3), ("i", 0)])).unwrap();
    let reached: Vec<u64> = run.label_depths.iter().map(|x| x.2).collect();
    assert_eq!(reached, vec![3, 4, 5]);
    let depths = brute_depths(&run.circuit);
    let out = run.result.to_bundle().unwrap().labels();
    assert_eq!(out.iter().map(|l| depths[l]).collect::<Vec<_>>(), vec![3, 4, 5]);
}

#[test]
fn qft_depth_annotations_are_exact_on_a_grid() {
    let d = profile(Profile::Depth);
    let (prog, typing) = checked("qft_depth", d);
    for n in 0..=6u64 {
        for i in 0..=3u64 {
            let run = run_main(&prog, &typing, d, &valuation(&[("n", n), ("i", i)])).unwrap();
            let input_depths: HashMap<Label, u64> = run.circuit.initial().labels().map(|l| (l, i)).collect();
            let reached = oracle_depth(&run.circuit, &input_depths).unwrap();
            let out = run.result.to_bundle().unwrap().labels();
            for (j, l) in out.iter().enumerate() {
                assert_eq!(reached[l], i + n + j as u64, "n={n} i={i} j={j}");
            }
        }
    }
}
