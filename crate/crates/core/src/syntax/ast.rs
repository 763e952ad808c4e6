//! Types, values, terms and programs of the circuit-description language.
//!
//! Terms are kept in A-normal form: eliminators take values, and every
//! intermediate computation is named by a `let`. The parser performs the
//! conversion, so the surface syntax stays close to ordinary functional code.

use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use crate::circuit::{Bundle, Circuit, Label, WireType};
use crate::index::{free_vars, fresh_name, substitute, IndexTerm, IndexVarSet};

/// How an arrow's wire annotations are instantiated at an application.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Annotations are fixed.
    Mono,
    /// The listed local variables are instantiated per application by
    /// matching the argument's wire annotations against the domain.
    Generic(Vec<String>),
    /// Reverses a list: element `j` of the result carries the annotation
    /// element `n-(j+1)` of the argument had.
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowType {
    pub dom: Type,
    pub cod: Type,
    pub effect: IndexTerm,
    /// Bundle type of the wires captured by the closure.
    pub capture: Type,
    pub scheme: Scheme,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircType {
    pub size: IndexTerm,
    /// Local variables the bundle annotations range over.
    pub locals: Vec<String>,
    pub input: Type,
    pub output: Type,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Unit,
    Wire(WireType, Option<IndexTerm>),
    Bang(IndexTerm, Box<Type>),
    Tensor(Box<Type>, Box<Type>),
    Arrow(Box<ArrowType>),
    List(String, IndexTerm, Box<Type>),
    Circ(Box<CircType>),
    IndexAll(String, IndexTerm, Box<Type>),
}

impl Type {
    pub fn qubit() -> Type {
        Type::Wire(WireType::Qubit, None)
    }

    pub fn bit() -> Type {
        Type::Wire(WireType::Bit, None)
    }

    pub fn wire(w: WireType, ann: Option<IndexTerm>) -> Type {
        Type::Wire(w, ann)
    }

    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn bang(effect: IndexTerm, inner: Type) -> Type {
        Type::Bang(effect, Box::new(inner))
    }

    pub fn list(binder: &str, len: IndexTerm, elem: Type) -> Type {
        Type::List(binder.to_string(), len, Box::new(elem))
    }

    pub fn index_all(binder: &str, effect: IndexTerm, body: Type) -> Type {
        Type::IndexAll(binder.to_string(), effect, Box::new(body))
    }

    pub fn arrow(dom: Type, cod: Type, effect: IndexTerm, capture: Type) -> Type {
        Type::Arrow(Box::new(ArrowType { dom, cod, effect, capture, scheme: Scheme::Mono }))
    }

    /// Right-nested tensor of the given components (`Unit` when empty).
    pub fn tuple(mut parts: Vec<Type>) -> Type {
        match parts.len() {
            0 => Type::Unit,
            1 => parts.pop().expect("one element"),
            _ => {
                let last = parts.pop().expect("non-empty");
                parts.into_iter().rev().fold(last, |acc, t| Type::tensor(t, acc))
            }
        }
    }

    /// Duplicable types: values of these types can be used any number of times.
    pub fn is_param(&self) -> bool {
        match self {
            Type::Unit | Type::Bang(..) | Type::Circ(_) | Type::IndexAll(..) => true,
            Type::Tensor(a, b) => a.is_param() && b.is_param(),
            Type::List(_, _, a) => a.is_param(),
            Type::Wire(..) | Type::Arrow(_) => false,
        }
    }

    /// True for the bundle sublanguage: unit, wires, tensors and lists.
    pub fn is_bundle(&self) -> bool {
        match self {
            Type::Unit | Type::Wire(..) => true,
            Type::Tensor(a, b) => a.is_bundle() && b.is_bundle(),
            Type::List(_, _, a) => a.is_bundle(),
            _ => false,
        }
    }
}

/// Size of the wires held by a value of the type.
pub fn type_size(a: &Type) -> IndexTerm {
    match a {
        Type::Unit | Type::Bang(..) | Type::Circ(_) | Type::IndexAll(..) => IndexTerm::Empty,
        Type::Wire(w, _) => IndexTerm::Wire(*w),
        Type::Tensor(x, y) => IndexTerm::par(type_size(x), type_size(y)),
        Type::List(i, n, x) => IndexTerm::bounded_par(i, n.clone(), type_size(x)),
        Type::Arrow(f) => type_size(&f.capture),
    }
}

/// The bundle type of the wires held by a value of the type.
pub fn wire_content(a: &Type) -> Type {
    match a {
        Type::Unit | Type::Bang(..) | Type::Circ(_) | Type::IndexAll(..) => Type::Unit,
        Type::Wire(..) => a.clone(),
        Type::Tensor(x, y) => Type::tensor(wire_content(x), wire_content(y)),
        Type::List(i, n, x) => Type::list(i, n.clone(), wire_content(x)),
        Type::Arrow(f) => f.capture.clone(),
    }
}

/// Free index variables of a type (binders of lists, quantifiers and
/// circuit locals excluded).
pub fn type_free_vars(a: &Type) -> IndexVarSet {
    let mut out = IndexVarSet::new();
    collect_type_vars(a, &mut out);
    out
}

fn collect_type_vars(a: &Type, out: &mut IndexVarSet) {
    match a {
        Type::Unit => {}
        Type::Wire(_, ann) => {
            if let Some(t) = ann {
                out.extend(free_vars(t));
            }
        }
        Type::Bang(e, x) => {
            out.extend(free_vars(e));
            collect_type_vars(x, out);
        }
        Type::Tensor(x, y) => {
            collect_type_vars(x, out);
            collect_type_vars(y, out);
        }
        Type::Arrow(f) => {
            let mut inner = IndexVarSet::new();
            collect_type_vars(&f.dom, &mut inner);
            collect_type_vars(&f.cod, &mut inner);
            collect_type_vars(&f.capture, &mut inner);
            inner.extend(free_vars(&f.effect));
            if let Scheme::Generic(vs) = &f.scheme {
                for v in vs {
                    inner.remove(v);
                }
            }
            out.extend(inner);
        }
        Type::List(i, n, x) => {
            out.extend(free_vars(n));
            let mut inner = type_free_vars(x);
            inner.remove(i);
            out.extend(inner);
        }
        Type::IndexAll(i, e, x) => {
            let mut inner = type_free_vars(x);
            inner.extend(free_vars(e));
            inner.remove(i);
            out.extend(inner);
        }
        Type::Circ(c) => {
            out.extend(free_vars(&c.size));
            let mut inner = type_free_vars(&c.input);
            inner.extend(type_free_vars(&c.output));
            for v in &c.locals {
                inner.remove(v);
            }
            out.extend(inner);
        }
    }
}

/// Every index variable name occurring in the type, bound or free.
pub fn type_all_vars(a: &Type) -> IndexVarSet {
    let mut out = type_free_vars(a);
    let mut stack = vec![a];
    while let Some(t) = stack.pop() {
        match t {
            Type::List(i, _, x) | Type::IndexAll(i, _, x) => {
                out.insert(i.clone());
                stack.push(x);
            }
            Type::Bang(_, x) => stack.push(x),
            Type::Tensor(x, y) => {
                stack.push(x);
                stack.push(y);
            }
            Type::Arrow(f) => {
                if let Scheme::Generic(vs) = &f.scheme {
                    out.extend(vs.iter().cloned());
                }
                stack.extend([&f.dom, &f.cod, &f.capture]);
            }
            Type::Circ(c) => {
                out.extend(c.locals.iter().cloned());
                stack.extend([&c.input, &c.output]);
            }
            Type::Unit | Type::Wire(..) => {}
        }
    }
    out
}

/// Capture-avoiding substitution of an index term into a type.
pub fn subst_type(a: &Type, r: &IndexTerm, x: &str) -> Type {
    let fv = free_vars(r);
    subst_type_with(a, r, x, &fv)
}

/// Applies several substitutions simultaneously.
pub fn subst_type_many(a: &Type, map: &BTreeMap<String, IndexTerm>) -> Type {
    if map.is_empty() {
        return a.clone();
    }
    // Go through fresh intermediates so that the replacements do not interfere.
    let mut avoid = type_all_vars(a);
    for (k, v) in map {
        avoid.insert(k.clone());
        avoid.extend(free_vars(v));
    }
    let mut out = a.clone();
    let mut temps = Vec::new();
    for (k, v) in map {
        let tmp = fresh_name(&format!("{k}_s"), &avoid);
        avoid.insert(tmp.clone());
        out = subst_type(&out, &IndexTerm::Var(tmp.clone()), k);
        temps.push((tmp, v));
    }
    for (tmp, v) in temps {
        out = subst_type(&out, v, &tmp);
    }
    out
}

fn subst_binder(i: &str, body: &Type, r: &IndexTerm, x: &str, fv: &IndexVarSet) -> (String, Type) {
    if i == x {
        return (i.to_string(), body.clone());
    }
    if fv.contains(i) && type_free_vars(body).contains(x) {
        let mut avoid = fv.clone();
        avoid.extend(type_all_vars(body));
        avoid.insert(x.to_string());
        let fresh = fresh_name(i, &avoid);
        let renamed = subst_type(body, &IndexTerm::Var(fresh.clone()), i);
        return (fresh, subst_type_with(&renamed, r, x, fv));
    }
    (i.to_string(), subst_type_with(body, r, x, fv))
}

fn subst_type_with(a: &Type, r: &IndexTerm, x: &str, fv: &IndexVarSet) -> Type {
    let si = |t: &IndexTerm| substitute(t, r, x);
    let st = |t: &Type| subst_type_with(t, r, x, fv);
    match a {
        Type::Unit => Type::Unit,
        Type::Wire(w, ann) => Type::Wire(*w, ann.as_ref().map(si)),
        Type::Bang(e, t) => Type::Bang(si(e), Box::new(st(t))),
        Type::Tensor(p, q) => Type::tensor(st(p), st(q)),
        Type::List(i, n, t) => {
            let (i2, t2) = subst_binder(i, t, r, x, fv);
            Type::List(i2, si(n), Box::new(t2))
        }
        Type::IndexAll(i, e, t) => {
            // The binder scopes over both the effect and the body.
            if i == x {
                return a.clone();
            }
            let needs_rename = fv.contains(i) && {
                let mut inner = type_free_vars(t);
                inner.extend(free_vars(e));
                inner.contains(x)
            };
            if needs_rename {
                let mut avoid = fv.clone();
                avoid.extend(type_all_vars(t));
                avoid.extend(free_vars(e));
                avoid.insert(x.to_string());
                let fresh = fresh_name(i, &avoid);
                let v = IndexTerm::Var(fresh.clone());
                let (e2, t2) = (substitute(e, &v, i), subst_type(t, &v, i));
                return Type::IndexAll(fresh, substitute(&e2, r, x), Box::new(subst_type_with(&t2, r, x, fv)));
            }
            Type::IndexAll(i.clone(), si(e), Box::new(st(t)))
        }
        Type::Arrow(f) => {
            let bound: Vec<String> = match &f.scheme {
                Scheme::Generic(vs) => vs.clone(),
                _ => Vec::new(),
            };
            if bound.iter().any(|b| b == x) {
                return a.clone();
            }
            let mut f2 = (**f).clone();
            if bound.iter().any(|b| fv.contains(b)) {
                let mut avoid = fv.clone();
                avoid.extend(type_all_vars(a));
                let mut map = BTreeMap::new();
                let mut renamed = Vec::new();
                for b in &bound {
                    let fresh = fresh_name(b, &avoid);
                    avoid.insert(fresh.clone());
                    map.insert(b.clone(), IndexTerm::Var(fresh.clone()));
                    renamed.push(fresh);
                }
                f2 = rename_arrow(&f2, &map);
                f2.scheme = Scheme::Generic(renamed);
            }
            Type::Arrow(Box::new(ArrowType {
                dom: st(&f2.dom),
                cod: st(&f2.cod),
                effect: si(&f2.effect),
                capture: st(&f2.capture),
                scheme: f2.scheme,
            }))
        }
        Type::Circ(c) => {
            if c.locals.iter().any(|l| l == x) {
                return a.clone();
            }
            let mut c2 = (**c).clone();
            if c.locals.iter().any(|l| fv.contains(l)) {
                let mut avoid = fv.clone();
                avoid.extend(type_all_vars(a));
                let mut map = BTreeMap::new();
                let mut renamed = Vec::new();
                for l in &c.locals {
                    let fresh = fresh_name(l, &avoid);
                    avoid.insert(fresh.clone());
                    map.insert(l.clone(), IndexTerm::Var(fresh.clone()));
                    renamed.push(fresh);
                }
                c2.input = subst_type_many(&c2.input, &map);
                c2.output = subst_type_many(&c2.output, &map);
                c2.locals = renamed;
            }
            Type::Circ(Box::new(CircType {
                size: si(&c2.size),
                locals: c2.locals,
                input: st(&c2.input),
                output: st(&c2.output),
            }))
        }
    }
}

fn rename_arrow(f: &ArrowType, map: &BTreeMap<String, IndexTerm>) -> ArrowType {
    let mut effect = f.effect.clone();
    for (k, v) in map {
        effect = substitute(&effect, v, k);
    }
    ArrowType {
        dom: subst_type_many(&f.dom, map),
        cod: subst_type_many(&f.cod, map),
        effect,
        capture: subst_type_many(&f.capture, map),
        scheme: f.scheme.clone(),
    }
}

/// Removes every wire annotation (global analyses ignore them).
pub fn strip_annotations(a: &Type) -> Type {
    let s = strip_annotations;
    match a {
        Type::Unit => Type::Unit,
        Type::Wire(w, _) => Type::Wire(*w, None),
        Type::Bang(e, t) => Type::Bang(e.clone(), Box::new(s(t))),
        Type::Tensor(p, q) => Type::tensor(s(p), s(q)),
        Type::List(i, n, t) => Type::List(i.clone(), n.clone(), Box::new(s(t))),
        Type::IndexAll(i, e, t) => Type::IndexAll(i.clone(), e.clone(), Box::new(s(t))),
        Type::Arrow(f) => Type::Arrow(Box::new(ArrowType {
            dom: s(&f.dom),
            cod: s(&f.cod),
            effect: f.effect.clone(),
            capture: s(&f.capture),
            scheme: match f.scheme {
                Scheme::Reverse => Scheme::Reverse,
                _ => Scheme::Mono,
            },
        })),
        Type::Circ(c) => Type::Circ(Box::new(CircType {
            size: c.size.clone(),
            locals: Vec::new(),
            input: s(&c.input),
            output: s(&c.output),
        })),
    }
}

/// A circuit reified as a value: input bundle, circuit, output bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxedCircuit {
    pub input: Bundle,
    pub circuit: Circuit,
    pub output: Bundle,
}

/// Built-in operations that are not expressible as ordinary terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prim {
    /// `rep @n` is a list of `n` units, used to drive iteration.
    Rep,
    /// `qrev @n` is a suspended list reversal.
    Qrev,
    /// The reversal function itself, obtained by forcing `qrev @n`.
    QrevFn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Unit,
    Var(String),
    Label(Label),
    Abs(String, Type, Box<Term>),
    Lift(Box<Term>),
    Boxed(Rc<BoxedCircuit>),
    Pair(Box<Value>, Box<Value>),
    Nil,
    RCons(Box<Value>, Box<Value>),
    IndexAbs(String, Box<Term>),
    Prim(Prim),
}

impl Value {
    pub fn var(x: &str) -> Value {
        Value::Var(x.to_string())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn rcons(xs: Value, x: Value) -> Value {
        Value::RCons(Box::new(xs), Box::new(x))
    }

    pub fn abs(x: &str, ty: Type, body: Term) -> Value {
        Value::Abs(x.to_string(), ty, Box::new(body))
    }

    pub fn lift(body: Term) -> Value {
        Value::Lift(Box::new(body))
    }

    pub fn index_abs(i: &str, body: Term) -> Value {
        Value::IndexAbs(i.to_string(), Box::new(body))
    }

    /// A wire bundle value mirroring `b`.
    pub fn from_bundle(b: &Bundle) -> Value {
        match b {
            Bundle::Unit => Value::Unit,
            Bundle::Single(l) => Value::Label(*l),
            Bundle::Pair(x, y) => Value::pair(Value::from_bundle(x), Value::from_bundle(y)),
            Bundle::Nil => Value::Nil,
            Bundle::Cons(x, y) => Value::rcons(Value::from_bundle(x), Value::from_bundle(y)),
        }
    }

    /// The wire bundle this value denotes, if it is made only of labels,
    /// units, pairs and lists.
    pub fn to_bundle(&self) -> Option<Bundle> {
        Some(match self {
            Value::Unit => Bundle::Unit,
            Value::Label(l) => Bundle::Single(*l),
            Value::Pair(x, y) => Bundle::pair(x.to_bundle()?, y.to_bundle()?),
            Value::Nil => Bundle::Nil,
            Value::RCons(x, y) => Bundle::cons(x.to_bundle()?, y.to_bundle()?),
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    App(Value, Value),
    /// `let (x, y) = V in M`
    Dest(String, String, Value, Box<Term>),
    Force(Value),
    /// `box[Δ; T] V`
    Box(Vec<String>, Type, Value),
    Apply(Value, Value),
    Return(Value),
    Let(String, Box<Term>, Box<Term>),
    /// `fold(step, accumulator, list)`; the step's index binder is the
    /// iteration counter.
    Fold(Value, Value, Value),
    IndexApp(Value, IndexTerm),
    /// A computation checked against a declared type.
    Annot(Box<Term>, Type),
}

impl Term {
    pub fn let_in(x: &str, m: Term, n: Term) -> Term {
        Term::Let(x.to_string(), Box::new(m), Box::new(n))
    }

    pub fn dest(x: &str, y: &str, v: Value, m: Term) -> Term {
        Term::Dest(x.to_string(), y.to_string(), v, Box::new(m))
    }
}

/// Label occurrences of a value, in syntax-tree order.
pub fn labs_value(v: &Value) -> Bundle {
    match v {
        Value::Label(l) => Bundle::Single(*l),
        Value::Pair(a, b) => Bundle::pair(labs_value(a), labs_value(b)),
        Value::RCons(a, b) => Bundle::cons(labs_value(a), labs_value(b)),
        Value::Nil => Bundle::Nil,
        Value::Abs(_, _, m) => labs_term(m),
        _ => Bundle::Unit,
    }
}

/// Label occurrences of a term, in syntax-tree order, as a right-nested tuple.
pub fn labs_term(m: &Term) -> Bundle {
    let mut out = Vec::new();
    collect_labels_term(m, &mut out);
    Bundle::tuple(&out)
}

fn collect_labels_value(v: &Value, out: &mut Vec<Label>) {
    match v {
        Value::Label(l) => out.push(*l),
        Value::Pair(a, b) | Value::RCons(a, b) => {
            collect_labels_value(a, out);
            collect_labels_value(b, out);
        }
        Value::Abs(_, _, m) | Value::Lift(m) | Value::IndexAbs(_, m) => collect_labels_term(m, out),
        _ => {}
    }
}

fn collect_labels_term(m: &Term, out: &mut Vec<Label>) {
    match m {
        Term::App(a, b) | Term::Apply(a, b) => {
            collect_labels_value(a, out);
            collect_labels_value(b, out);
        }
        Term::Dest(_, _, v, m) => {
            collect_labels_value(v, out);
            collect_labels_term(m, out);
        }
        Term::Force(v) | Term::Return(v) | Term::Box(_, _, v) | Term::IndexApp(v, _) => collect_labels_value(v, out),
        Term::Let(_, m, n) => {
            collect_labels_term(m, out);
            collect_labels_term(n, out);
        }
        Term::Fold(a, b, c) => {
            for v in [a, b, c] {
                collect_labels_value(v, out);
            }
        }
        Term::Annot(m, _) => collect_labels_term(m, out),
    }
}

/// A sequence of named definitions followed by the term under analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub bindings: Vec<(String, Term)>,
    pub main: Term,
}

impl Program {
    /// The program as a single nested `let` term.
    pub fn to_term(&self) -> Term {
        self.bindings
            .iter()
            .rev()
            .fold(self.main.clone(), |body, (x, m)| Term::let_in(x, m.clone(), body))
    }

    /// Splits leading `let x = M in` bindings off a term.
    pub fn from_term(t: Term) -> Program {
        let mut bindings = Vec::new();
        let mut cur = t;
        loop {
            match cur {
                Term::Let(x, m, n) => {
                    bindings.push((x, *m));
                    cur = *n;
                }
                other => return Program { bindings, main: other },
            }
        }
    }

    pub fn binding_names(&self) -> BTreeSet<&str> {
        self.bindings.iter().map(|(x, _)| x.as_str()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qlist(n: IndexTerm) -> Type {
        Type::list("j", n, Type::qubit())
    }

    #[test]
    fn size_and_content() {
        assert_eq!(type_size(&Type::qubit()), IndexTerm::Wire(WireType::Qubit));
        assert_eq!(
            type_size(&Type::tensor(Type::qubit(), Type::bit())),
            IndexTerm::par(IndexTerm::Wire(WireType::Qubit), IndexTerm::Wire(WireType::Bit))
        );
        assert_eq!(type_size(&Type::bang(3.into(), Type::qubit())), IndexTerm::Empty);
        let f = Type::arrow(Type::qubit(), Type::qubit(), 1.into(), Type::bit());
        assert_eq!(wire_content(&f), Type::bit());
        assert_eq!(wire_content(&qlist(IndexTerm::var("n"))), qlist(IndexTerm::var("n")));
        let c = Type::Circ(Box::new(CircType {
            size: 0.into(),
            locals: vec![],
            input: Type::Unit,
            output: Type::Unit,
        }));
        assert_eq!(wire_content(&c), Type::Unit);
    }

    #[test]
    fn substitution_renames_list_binders() {
        let t = Type::list("j", IndexTerm::var("n"), Type::wire(WireType::Qubit, Some(IndexTerm::var("k"))));
        let s = subst_type(&t, &IndexTerm::var("j"), "k");
        let Type::List(b, _, elem) = &s else { panic!() };
        assert_ne!(b, "j");
        assert_eq!(**elem, Type::wire(WireType::Qubit, Some(IndexTerm::var("j"))));
        assert_eq!(subst_type(&t, &IndexTerm::Nat(2), "j"), t);
    }

    #[test]
    fn param_types() {
        assert!(Type::Unit.is_param());
        assert!(!Type::qubit().is_param());
        assert!(Type::bang(0.into(), Type::arrow(Type::qubit(), Type::qubit(), 0.into(), Type::Unit)).is_param());
        assert!(Type::list("j", 3.into(), Type::Unit).is_param());
    }

    #[test]
    fn program_let_chain_round_trip() {
        let t = Term::let_in("a", Term::Return(Value::Unit), Term::Return(Value::var("a")));
        let p = Program::from_term(t.clone());
        assert_eq!(p.bindings.len(), 1);
        assert_eq!(p.to_term(), t);
    }
}
