//! Printers.
//!
//! The source printer emits concrete syntax that parses back to the same
//! tree. The display printer renders inferred types for users: under a
//! global profile every arrow shows `-o[effect,capture-size]` with indices
//! lowered to arithmetic and simplified, and wire annotations are hidden;
//! under the local profile arrows are bare and wire annotations are shown.

use std::fmt::Write as _;

use super::ast::{ArrowType, CircType, Prim, Program, Term, Type, Value};
use crate::index::simplify::simplify;
use crate::index::IndexTerm;
use crate::metrics::MetricProfile;

// ---- indices -----------------------------------------------------------

fn is_bounded(t: &IndexTerm) -> bool {
    matches!(t, IndexTerm::Sum(..) | IndexTerm::BigMax(..) | IndexTerm::BoundedSeq(..) | IndexTerm::BoundedPar(..))
}

/// An index as it must appear after `@`: bounded forms are parenthesized.
pub fn index_operand(t: &IndexTerm) -> String {
    if is_bounded(t) {
        format!("({t})")
    } else {
        t.to_string()
    }
}

// ---- types (source syntax) ----------------------------------------------

pub fn type_to_source(t: &Type) -> String {
    let mut s = String::new();
    write_type(&mut s, t, false);
    s
}

fn needs_parens(t: &Type) -> bool {
    matches!(t, Type::Arrow(_) | Type::IndexAll(..))
}

fn write_type_atom(s: &mut String, t: &Type) {
    if needs_parens(t) {
        s.push('(');
        write_type(s, t, false);
        s.push(')');
    } else {
        write_type(s, t, false);
    }
}

fn write_type(s: &mut String, t: &Type, _nested: bool) {
    match t {
        Type::Unit => s.push_str("()"),
        Type::Wire(w, None) => write!(s, "{w}").unwrap(),
        Type::Wire(w, Some(a)) => write!(s, "{w}{{{a}}}").unwrap(),
        Type::Bang(e, a) => {
            if *e == IndexTerm::Nat(0) {
                s.push('!');
            } else {
                write!(s, "![{e}] ").unwrap();
            }
            write_type_atom(s, a);
        }
        Type::Tensor(a, b) => {
            s.push('(');
            write_type(s, a, false);
            s.push_str(", ");
            write_type(s, b, false);
            s.push(')');
        }
        Type::Arrow(f) => {
            let ArrowType { dom, cod, effect, capture, .. } = &**f;
            write_type_atom(s, dom);
            match (effect, capture) {
                (IndexTerm::Nat(0), Type::Unit) => s.push_str(" -o "),
                (e, Type::Unit) => write!(s, " -o[{e}] ").unwrap(),
                (e, c) => write!(s, " -o[{e}, {}] ", type_to_source(c)).unwrap(),
            }
            write_type(s, cod, false);
        }
        Type::List(j, n, a) => {
            write!(s, "List[{j}<{n}] ").unwrap();
            write_type_atom(s, a);
        }
        Type::Circ(c) => {
            let CircType { size, locals, input, output } = &**c;
            write!(s, "Circ[{size}; {}](", locals.join(" ")).unwrap();
            write_type(s, input, false);
            s.push_str(", ");
            write_type(s, output, false);
            s.push(')');
        }
        Type::IndexAll(i, e, a) => {
            if *e == IndexTerm::Nat(0) {
                write!(s, "{i} -> ").unwrap();
            } else {
                write!(s, "{i} ->[{e}] ").unwrap();
            }
            write_type(s, a, false);
        }
    }
}

// ---- terms (source syntax) ----------------------------------------------

pub fn term_to_source(m: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, m);
    s
}

pub fn value_to_source(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v);
    s
}

pub fn program_to_source(p: &Program) -> String {
    let mut s = String::new();
    for (x, m) in &p.bindings {
        write!(s, "let {x} = ").unwrap();
        write_term(&mut s, m);
        s.push_str(" in\n");
    }
    write_term(&mut s, &p.main);
    s.push('\n');
    s
}

/// Values that can stand as an application argument without parentheses.
fn is_atomic(v: &Value) -> bool {
    matches!(
        v,
        Value::Unit | Value::Var(_) | Value::Nil | Value::Pair(..) | Value::Label(_) | Value::Boxed(_) | Value::Prim(_)
    )
}

fn write_value_atom(s: &mut String, v: &Value) {
    if is_atomic(v) {
        write_value(s, v);
    } else {
        s.push('(');
        write_value(s, v);
        s.push(')');
    }
}

fn write_value(s: &mut String, v: &Value) {
    match v {
        Value::Unit => s.push_str("()"),
        Value::Var(x) => s.push_str(x),
        Value::Label(l) => write!(s, "<{l}>").unwrap(),
        Value::Nil => s.push_str("[]"),
        Value::Pair(a, b) => {
            s.push('(');
            write_value(s, a);
            s.push_str(", ");
            write_value(s, b);
            s.push(')');
        }
        Value::RCons(xs, x) => {
            if matches!(**xs, Value::RCons(..)) || is_atomic(xs) {
                write_value(s, xs);
            } else {
                write_value_atom(s, xs);
            }
            s.push_str(" : ");
            write_value_atom(s, x);
        }
        Value::Abs(x, t, body) => {
            write!(s, "\\{x}::{}. ", type_to_source(t)).unwrap();
            write_term(s, body);
        }
        Value::Lift(m) => {
            s.push_str("lift ");
            write_term(s, m);
        }
        Value::IndexAbs(i, m) => {
            write!(s, "@{i}. ").unwrap();
            write_term(s, m);
        }
        Value::Boxed(b) => write!(s, "<circuit {} -> {}>", b.input, b.output).unwrap(),
        Value::Prim(p) => s.push_str(match p {
            Prim::Rep => "<rep>",
            Prim::Qrev => "<qrev>",
            Prim::QrevFn => "<qrev-fn>",
        }),
    }
}

fn write_term(s: &mut String, m: &Term) {
    match m {
        Term::Return(v) => write_value(s, v),
        Term::App(f, a) => {
            write_value_atom(s, f);
            s.push(' ');
            write_value_atom(s, a);
        }
        Term::Dest(x, y, v, body) => {
            write!(s, "let ({x}, {y}) = ").unwrap();
            write_value(s, v);
            s.push_str(" in ");
            write_term(s, body);
        }
        Term::Force(v) => {
            s.push_str("force ");
            write_value_atom(s, v);
        }
        Term::Box(locals, t, v) => {
            write!(s, "box[{}; {}] ", locals.join(" "), type_to_source(t)).unwrap();
            write_value_atom(s, v);
        }
        Term::Apply(a, b) => {
            s.push_str("apply(");
            write_value(s, a);
            s.push_str(", ");
            write_value(s, b);
            s.push(')');
        }
        Term::Let(x, a, b) => {
            write!(s, "let {x} = ").unwrap();
            write_term(s, a);
            s.push_str(" in ");
            write_term(s, b);
        }
        Term::Fold(a, b, c) => {
            s.push_str("fold(");
            write_value(s, a);
            s.push_str(", ");
            write_value(s, b);
            s.push_str(", ");
            write_value(s, c);
            s.push(')');
        }
        Term::IndexApp(v, i) => {
            write_value_atom(s, v);
            write!(s, " @ {}", index_operand(i)).unwrap();
        }
        Term::Annot(m, t) => {
            s.push('(');
            write_term(s, m);
            write!(s, ") :: {}", type_to_source(t)).unwrap();
        }
    }
}

// ---- display of inferred types ------------------------------------------

/// An index lowered under `p` and simplified; falls back to the raw term
/// when it cannot be lowered.
pub fn display_index(t: &IndexTerm, p: &MetricProfile) -> String {
    match p.lower(t) {
        Ok(l) => simplify(&l).to_string(),
        Err(_) => t.to_string(),
    }
}

pub fn display_type(t: &Type, p: &MetricProfile) -> String {
    let mut s = String::new();
    display_into(&mut s, t, p);
    s
}

fn display_atom(s: &mut String, t: &Type, p: &MetricProfile) {
    if needs_parens(t) {
        s.push('(');
        display_into(s, t, p);
        s.push(')');
    } else {
        display_into(s, t, p);
    }
}

fn display_into(s: &mut String, t: &Type, p: &MetricProfile) {
    let local = p.is_local();
    match t {
        Type::Unit => s.push_str("()"),
        Type::Wire(w, Some(a)) if local => write!(s, "{w}{{{}}}", display_index(a, p)).unwrap(),
        Type::Wire(w, _) => write!(s, "{w}").unwrap(),
        Type::Bang(e, a) => {
            let e = display_index(e, p);
            if local || e == "0" {
                s.push('!');
            } else {
                write!(s, "![{e}] ").unwrap();
            }
            display_atom(s, a, p);
        }
        Type::Tensor(a, b) => {
            s.push('(');
            display_into(s, a, p);
            s.push_str(", ");
            display_into(s, b, p);
            s.push(')');
        }
        Type::Arrow(f) => {
            display_atom(s, &f.dom, p);
            if local {
                s.push_str(" -o ");
            } else {
                let e = display_index(&f.effect, p);
                let c = display_index(&super::ast::type_size(&f.capture), p);
                write!(s, " -o[{e},{c}] ").unwrap();
            }
            display_into(s, &f.cod, p);
        }
        Type::List(j, n, a) => {
            write!(s, "List[{j}<{}] ", simplify(n)).unwrap();
            display_atom(s, a, p);
        }
        Type::Circ(c) => {
            if local {
                s.push_str("Circ(");
            } else {
                write!(s, "Circ[{}](", display_index(&c.size, p)).unwrap();
            }
            display_into(s, &c.input, p);
            s.push_str(", ");
            display_into(s, &c.output, p);
            s.push(')');
        }
        Type::IndexAll(i, e, a) => {
            if local {
                write!(s, "{i} -> ").unwrap();
            } else {
                write!(s, "{i} ->[{},0] ", display_index(e, p)).unwrap();
            }
            display_into(s, a, p);
        }
    }
}
