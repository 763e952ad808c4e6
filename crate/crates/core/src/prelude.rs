//! Built-in constants available to every program: one suspended function
//! per primitive gate, plus list utilities.
//!
//! Gate wrappers are ordinary terms around boxed one-gate circuits, so the
//! checker types them like user code; the list utilities are primitives
//! with fixed types.

use std::rc::Rc;

use crate::circuit::{Bundle, Circuit, GateRef, WireType};
use crate::index::{CheckStrategy, IndexTerm};
use crate::metrics::MetricProfile;
use crate::syntax::ast::{BoxedCircuit, Prim, Term, Type, Value};
use crate::typeck::{Checker, TypeError};

/// A boxed circuit consisting of the single gate `g`.
pub fn gate_box(g: GateRef) -> BoxedCircuit {
    let decl = g.decl().expect("prelude gates are registered");
    let (mut circuit, ins) = Circuit::on_wires(decl.inputs);
    let outs = circuit.push_gate(g, &ins).expect("a single gate on fresh wires is well formed");
    BoxedCircuit { input: Bundle::tuple(&ins), circuit, output: Bundle::tuple(&outs) }
}

fn apply_gate(g: GateRef, arg: Value) -> Term {
    Term::Apply(Value::Boxed(Rc::new(gate_box(g))), arg)
}

fn wire(w: WireType, ann: Option<&str>) -> Type {
    Type::wire(w, ann.map(IndexTerm::var))
}

/// `lift \x::w. apply(g, x)`
fn unary(g: &str, w: WireType) -> Value {
    Value::lift(Term::Return(Value::abs("q", wire(w, None), apply_gate(GateRef::new(g), Value::var("q")))))
}

/// `lift \c::w1. \t::w2. apply(g, (c, t))` with optional shared annotation.
fn binary(g: GateRef, w1: WireType, w2: WireType, ann: Option<&str>) -> Value {
    let inner = Value::abs("t", wire(w2, ann), apply_gate(g, Value::pair(Value::var("c"), Value::var("t"))));
    Value::lift(Term::Return(Value::abs("c", wire(w1, ann), Term::Return(inner))))
}

/// `lift \u::(). apply(g, ())`
fn init(g: &str) -> Value {
    Value::lift(Term::Return(Value::abs("u", Type::Unit, apply_gate(GateRef::new(g), Value::Unit))))
}

/// The prelude's names and values. Under the local profile the controlled
/// rotation takes an extra index fixing the depth of both of its inputs.
pub fn prelude_values(local: bool) -> Vec<(&'static str, Value)> {
    use WireType::{Bit, Qubit};
    let rotation = GateRef::with_param("CR", IndexTerm::var("k"));
    let c_r = if local {
        Value::index_abs("k", Term::Return(Value::index_abs("d", Term::Return(binary(rotation, Qubit, Qubit, Some("d"))))))
    } else {
        Value::index_abs("k", Term::Return(binary(rotation, Qubit, Qubit, None)))
    };
    vec![
        ("hadamard", unary("H", Qubit)),
        ("x", unary("X", Qubit)),
        ("z", unary("Z", Qubit)),
        ("t", unary("T", Qubit)),
        ("meas", unary("Meas", Qubit)),
        ("qdiscard", unary("Discard", Qubit)),
        ("cdiscard", unary("CDiscard", Bit)),
        ("qinit0", init("Init0")),
        ("qinit1", init("Init1")),
        ("cnot", binary(GateRef::new("CNOT"), Qubit, Qubit, None)),
        ("cx", binary(GateRef::new("CX_classical"), Bit, Qubit, None)),
        ("cz", binary(GateRef::new("CZ_classical"), Bit, Qubit, None)),
        ("cR", c_r),
        ("qrev", Value::Prim(Prim::Qrev)),
        ("rep", Value::Prim(Prim::Rep)),
    ]
}

/// Prelude names with their types under `p`.
pub fn prelude_types(p: &MetricProfile) -> Result<Vec<(&'static str, Type)>, TypeError> {
    prelude_values(p.is_local())
        .into_iter()
        .map(|(name, v)| {
            let mut c = Checker::new(p, CheckStrategy::default());
            let (t, _) = c.check_closed_term(&Term::Return(v))?;
            Ok((name, t))
        })
        .collect()
}

/// A checker with the prelude in scope.
pub fn checker_with_prelude(p: &MetricProfile, strategy: CheckStrategy) -> Result<Checker<'_>, TypeError> {
    let mut c = Checker::new(p, strategy);
    for (name, t) in prelude_types(p)? {
        c.declare_global(name, t);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{profile, Profile};
    use crate::syntax::pretty::display_type;

    fn type_of(name: &str, p: Profile) -> String {
        let p = profile(p);
        let (_, t) = prelude_types(p).unwrap().into_iter().find(|(n, _)| *n == name).unwrap();
        display_type(&t, p)
    }

    #[test]
    fn gate_wrappers_have_unit_costs() {
        assert_eq!(type_of("hadamard", Profile::Width), "!(Qubit -o[1,0] Qubit)");
        assert_eq!(type_of("hadamard", Profile::GateCount), "!(Qubit -o[1,0] Qubit)");
        assert_eq!(type_of("qinit0", Profile::GateCount), "!(() -o[0,0] Qubit)");
        assert_eq!(type_of("qdiscard", Profile::Width), "!(Qubit -o[1,0] ())");
        assert_eq!(type_of("t", Profile::TCount), "!(Qubit -o[1,0] Qubit)");
        assert_eq!(type_of("hadamard", Profile::TCount), "!(Qubit -o[0,0] Qubit)");
        assert_eq!(
            type_of("cnot", Profile::Width),
            "!(Qubit -o[1,0] Qubit -o[2,1] (Qubit, Qubit))"
        );
        assert_eq!(type_of("qrev", Profile::Width), "n ->[0,0] !(List[j<n] Qubit -o[n,0] List[j<n] Qubit)");
    }

    #[test]
    fn depth_wrappers_increment_annotations() {
        let t = type_of("hadamard", Profile::Depth);
        assert_eq!(t, "!(Qubit{w1} -o Qubit{w1+1})");
        let t = type_of("cR", Profile::Depth);
        assert_eq!(t, "k -> d -> !(Qubit{d} -o Qubit{d} -o (Qubit{d+1}, Qubit{d+1}))");
    }
}
