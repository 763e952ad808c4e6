//! Big-step, substitution-based evaluation that builds a circuit as a side
//! effect.
//!
//! Configurations pair the circuit built so far with the term being
//! evaluated. Applying a boxed circuit appends a relabelled copy of it to
//! the current circuit; boxing a function runs it on fresh labels in a
//! separate circuit.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use crate::circuit::{Bundle, Circuit, CircuitError, Label, WireType};
use crate::index::{evaluate, substitute, IndexError, IndexTerm, Valuation};
use crate::metrics::{profile, Profile};
use crate::prelude::prelude_values;
use crate::syntax::ast::{subst_type, BoxedCircuit, Prim, Term, Type, Value};
use crate::syntax::pretty::value_to_source;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation is stuck: {0}")]
    Stuck(String),
    #[error("unbound variable `{0}` at run time")]
    Unbound(String),
    #[error("index {0} is not closed")]
    OpenIndex(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Closes an index term to a number.
pub fn closed_index(t: &IndexTerm) -> Result<u64, EvalError> {
    evaluate(t, &Valuation::new(), profile(Profile::Width)).map_err(|e| match e {
        IndexError::Unbound(_) => EvalError::OpenIndex(t.to_string()),
        other => EvalError::OpenIndex(format!("{t}: {other}")),
    })
}

/// Allocates fresh input wires for a closed bundle type, returning the bundle
/// and the type of each label (in allocation order).
pub fn fresh_labels(
    t: &Type,
    fresh: &mut dyn FnMut(WireType) -> Result<Label, CircuitError>,
) -> Result<Bundle, EvalError> {
    Ok(match t {
        Type::Unit => Bundle::Unit,
        Type::Wire(w, _) => Bundle::Single(fresh(*w)?),
        Type::Tensor(a, b) => {
            let a = fresh_labels(a, fresh)?;
            let b = fresh_labels(b, fresh)?;
            Bundle::pair(a, b)
        }
        Type::List(j, n, a) => {
            let n = closed_index(n)?;
            let mut acc = Bundle::Nil;
            for k in 0..n {
                let elem = subst_type(a, &IndexTerm::Nat(k), j);
                acc = Bundle::cons(acc, fresh_labels(&elem, fresh)?);
            }
            acc
        }
        other => {
            return Err(EvalError::Stuck(format!(
                "{} is not a bundle type",
                crate::syntax::pretty::type_to_source(other)
            )))
        }
    })
}

// ---- substitution ---------------------------------------------------------

/// `v[w/x]` for a closed `w`.
pub fn subst_value(v: &Value, x: &str, w: &Value) -> Value {
    match v {
        Value::Var(y) if y == x => w.clone(),
        Value::Pair(a, b) => Value::pair(subst_value(a, x, w), subst_value(b, x, w)),
        Value::RCons(a, b) => Value::rcons(subst_value(a, x, w), subst_value(b, x, w)),
        Value::Abs(y, t, body) if y != x => Value::Abs(y.clone(), t.clone(), Box::new(subst_term(body, x, w))),
        Value::Lift(m) => Value::Lift(Box::new(subst_term(m, x, w))),
        Value::IndexAbs(i, m) => Value::IndexAbs(i.clone(), Box::new(subst_term(m, x, w))),
        other => other.clone(),
    }
}

/// `m[w/x]` for a closed `w`.
pub fn subst_term(m: &Term, x: &str, w: &Value) -> Term {
    let sv = |v: &Value| subst_value(v, x, w);
    match m {
        Term::App(f, a) => Term::App(sv(f), sv(a)),
        Term::Dest(y, z, v, body) => {
            let body = if y == x || z == x { (**body).clone() } else { subst_term(body, x, w) };
            Term::Dest(y.clone(), z.clone(), sv(v), Box::new(body))
        }
        Term::Force(v) => Term::Force(sv(v)),
        Term::Box(l, t, v) => Term::Box(l.clone(), t.clone(), sv(v)),
        Term::Apply(a, b) => Term::Apply(sv(a), sv(b)),
        Term::Return(v) => Term::Return(sv(v)),
        Term::Let(y, a, b) => {
            let b = if y == x { (**b).clone() } else { subst_term(b, x, w) };
            Term::Let(y.clone(), Box::new(subst_term(a, x, w)), Box::new(b))
        }
        Term::Fold(a, b, c) => Term::Fold(sv(a), sv(b), sv(c)),
        Term::IndexApp(v, i) => Term::IndexApp(sv(v), i.clone()),
        Term::Annot(m, t) => Term::Annot(Box::new(subst_term(m, x, w)), t.clone()),
    }
}

/// `v[r/i]` for an index variable `i`, reaching into types, indices and
/// the parameters of boxed gates.
pub fn subst_index_value(v: &Value, r: &IndexTerm, i: &str) -> Value {
    match v {
        Value::Pair(a, b) => Value::pair(subst_index_value(a, r, i), subst_index_value(b, r, i)),
        Value::RCons(a, b) => Value::rcons(subst_index_value(a, r, i), subst_index_value(b, r, i)),
        Value::Abs(y, t, body) => {
            Value::Abs(y.clone(), subst_type(t, r, i), Box::new(subst_index_term(body, r, i)))
        }
        Value::Lift(m) => Value::Lift(Box::new(subst_index_term(m, r, i))),
        Value::IndexAbs(j, m) if j != i => Value::IndexAbs(j.clone(), Box::new(subst_index_term(m, r, i))),
        Value::Boxed(b) => {
            let circuit = b.circuit.map_params(&mut |p| substitute(p, r, i));
            Value::Boxed(Rc::new(BoxedCircuit { input: b.input.clone(), circuit, output: b.output.clone() }))
        }
        other => other.clone(),
    }
}

pub fn subst_index_term(m: &Term, r: &IndexTerm, i: &str) -> Term {
    let sv = |v: &Value| subst_index_value(v, r, i);
    match m {
        Term::App(f, a) => Term::App(sv(f), sv(a)),
        Term::Dest(y, z, v, body) => Term::Dest(y.clone(), z.clone(), sv(v), Box::new(subst_index_term(body, r, i))),
        Term::Force(v) => Term::Force(sv(v)),
        Term::Box(l, t, v) => {
            if l.iter().any(|x| x == i) {
                Term::Box(l.clone(), t.clone(), sv(v))
            } else {
                Term::Box(l.clone(), subst_type(t, r, i), sv(v))
            }
        }
        Term::Apply(a, b) => Term::Apply(sv(a), sv(b)),
        Term::Return(v) => Term::Return(sv(v)),
        Term::Let(y, a, b) => {
            Term::Let(y.clone(), Box::new(subst_index_term(a, r, i)), Box::new(subst_index_term(b, r, i)))
        }
        Term::Fold(a, b, c) => Term::Fold(sv(a), sv(b), sv(c)),
        Term::IndexApp(v, j) => Term::IndexApp(sv(v), substitute(j, r, i)),
        Term::Annot(m, t) => Term::Annot(Box::new(subst_index_term(m, r, i)), subst_type(t, r, i)),
    }
}

// ---- machine ----------------------------------------------------------------

/// The evaluator: a circuit under construction plus the prelude.
pub struct Machine {
    pub circuit: Circuit,
    prelude: Rc<HashMap<String, Value>>,
}

fn stuck(what: &str, v: &Value) -> EvalError {
    EvalError::Stuck(format!("expected {what}, found {}", value_to_source(v)))
}

impl Machine {
    /// A machine starting from `circuit`, with the prelude for the given mode.
    pub fn new(circuit: Circuit, local: bool) -> Machine {
        let prelude = prelude_values(local).into_iter().map(|(n, v)| (n.to_string(), v)).collect();
        Machine { circuit, prelude: Rc::new(prelude) }
    }

    fn sub_machine(&self, circuit: Circuit) -> Machine {
        Machine { circuit, prelude: Rc::clone(&self.prelude) }
    }

    /// Resolves a prelude name; other values are returned unchanged.
    fn resolve(&self, v: &Value) -> Result<Value, EvalError> {
        match v {
            Value::Var(x) => self.prelude.get(x).cloned().ok_or_else(|| EvalError::Unbound(x.clone())),
            other => Ok(other.clone()),
        }
    }

    /// Fully resolves the prelude names inside a value.
    fn resolve_deep(&self, v: &Value) -> Result<Value, EvalError> {
        Ok(match v {
            Value::Var(_) => self.resolve(v)?,
            Value::Pair(a, b) => Value::pair(self.resolve_deep(a)?, self.resolve_deep(b)?),
            Value::RCons(a, b) => Value::rcons(self.resolve_deep(a)?, self.resolve_deep(b)?),
            other => other.clone(),
        })
    }

    pub fn eval(&mut self, m: &Term) -> Result<Value, EvalError> {
        match m {
            Term::Return(v) => self.resolve_deep(v),
            Term::App(f, a) => {
                let a = self.resolve_deep(a)?;
                self.apply_function(&self.resolve(f)?, &a)
            }
            Term::Dest(x, y, v, body) => match self.resolve_deep(v)? {
                Value::Pair(a, b) => {
                    let body = subst_term(body, x, &a);
                    let body = if x == y { body } else { subst_term(&body, y, &b) };
                    self.eval(&body)
                }
                other => Err(stuck("a pair", &other)),
            },
            Term::Force(v) => self.force(&self.resolve(v)?),
            Term::Box(_, t, v) => {
                let f = self.resolve(v)?;
                let mut inner = self.sub_machine(Circuit::empty());
                let input = {
                    let c = &mut inner.circuit;
                    fresh_labels(t, &mut |w| c.add_input(w))?
                };
                let g = inner.force(&f)?;
                let out = inner.apply_function(&g, &Value::from_bundle(&input))?;
                let output = out.to_bundle().ok_or_else(|| stuck("a wire bundle", &out))?;
                Ok(Value::Boxed(Rc::new(BoxedCircuit { input, circuit: inner.circuit, output })))
            }
            Term::Apply(c, b) => {
                let c = self.resolve(c)?;
                let Value::Boxed(boxed) = &c else { return Err(stuck("a boxed circuit", &c)) };
                let b = self.resolve_deep(b)?;
                let on = b.to_bundle().ok_or_else(|| stuck("a wire bundle", &b))?;
                let out = self.emit(&on, boxed)?;
                Ok(Value::from_bundle(&out))
            }
            Term::Let(x, a, b) => {
                let v = self.eval(a)?;
                self.eval(&subst_term(b, x, &v))
            }
            Term::Fold(step, acc, list) => {
                let step = self.resolve(step)?;
                let mut acc = self.resolve_deep(acc)?;
                let mut elems = Vec::new();
                let mut cur = self.resolve_deep(list)?;
                loop {
                    match cur {
                        Value::Nil => break,
                        Value::RCons(init, last) => {
                            elems.push(*last);
                            cur = *init;
                        }
                        other => return Err(stuck("a list", &other)),
                    }
                }
                // `elems` holds the list from its last element backwards.
                for (k, x) in elems.into_iter().enumerate() {
                    let f = match self.force(&step)? {
                        Value::IndexAbs(i, body) => self.eval(&subst_index_term(&body, &IndexTerm::Nat(k as u64), &i))?,
                        other => return Err(stuck("an index abstraction", &other)),
                    };
                    acc = self.apply_function(&f, &Value::pair(acc, x))?;
                }
                Ok(acc)
            }
            Term::IndexApp(v, i) => {
                let n = closed_index(i)?;
                match self.resolve(v)? {
                    Value::IndexAbs(x, body) => self.eval(&subst_index_term(&body, &IndexTerm::Nat(n), &x)),
                    Value::Prim(Prim::Rep) => Ok((0..n).fold(Value::Nil, |acc, _| Value::rcons(acc, Value::Unit))),
                    Value::Prim(Prim::Qrev) => Ok(Value::lift(Term::Return(Value::Prim(Prim::QrevFn)))),
                    other => Err(stuck("an index abstraction", &other)),
                }
            }
            Term::Annot(m, _) => self.eval(m),
        }
    }

    fn force(&mut self, v: &Value) -> Result<Value, EvalError> {
        match v {
            Value::Lift(m) => self.eval(m),
            other => Err(stuck("a suspended computation", other)),
        }
    }

    /// Applies a function value to an argument value.
    pub fn apply_function(&mut self, f: &Value, a: &Value) -> Result<Value, EvalError> {
        match f {
            Value::Abs(x, _, body) => self.eval(&subst_term(body, x, a)),
            Value::Prim(Prim::QrevFn) => {
                let mut elems = Vec::new();
                let mut cur = a.clone();
                while let Value::RCons(init, last) = cur {
                    elems.push(*last);
                    cur = *init;
                }
                if cur != Value::Nil {
                    return Err(stuck("a list", a));
                }
                Ok(elems.into_iter().fold(Value::Nil, Value::rcons))
            }
            other => Err(stuck("a function", other)),
        }
    }

    /// Appends `boxed` to the current circuit with its inputs wired to `on`,
    /// returning the labels of its outputs.
    pub fn emit(&mut self, on: &Bundle, boxed: &BoxedCircuit) -> Result<Bundle, EvalError> {
        let from = boxed.input.labels();
        let to = on.labels();
        if from.len() != to.len() {
            return Err(EvalError::Circuit(CircuitError::Interface(format!(
                "circuit expects {} inputs, given {}",
                from.len(),
                to.len()
            ))));
        }
        let mut map: HashMap<Label, Label> = from.into_iter().zip(to).collect();
        for l in boxed.circuit.all_labels() {
            if let std::collections::hash_map::Entry::Vacant(e) = map.entry(l) {
                let fresh = self.circuit.fresh_label();
                e.insert(fresh);
            }
        }
        let piece = boxed.circuit.rename(&map);
        self.circuit = self.circuit.concat(&piece)?;
        Ok(boxed.output.rename(&map))
    }
}

/// Evaluates a closed term on an empty circuit.
pub fn run_closed(m: &Term, local: bool) -> Result<(Circuit, Value), EvalError> {
    let mut machine = Machine::new(Circuit::empty(), local);
    let v = machine.eval(m)?;
    Ok((machine.circuit, v))
}
