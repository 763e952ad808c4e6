//! Type-and-effect checking.
//!
//! The checker synthesizes, for every computation, a type and an effect: an
//! index term bounding the size of the circuit the computation builds. The
//! context is linear: wire-carrying variables must be used exactly once.
//!
//! Under a global profile wire annotations are ignored and effects are the
//! interesting output. Under the local profile effects are identically
//! zero and wire annotations carry the analysis; lambda domains whose wires
//! are unannotated get fresh annotation variables and become generic,
//! instantiated per application by matching the argument's annotations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::circuit::{Bundle, WireType};
use crate::index::{check_entailment, free_vars, fresh_name, CheckStrategy, IndexTerm, IndexVarSet, Relation, Verdict};
use crate::metrics::MetricProfile;
use crate::racs::{bundle_type, infer_signature};
use crate::syntax::ast::{
    strip_annotations, subst_type, subst_type_many, type_all_vars, type_free_vars, type_size, wire_content,
    ArrowType, CircType, Prim, Program, Scheme, Term, Type, Value,
};
use crate::syntax::pretty::type_to_source;

/// A semantic judgment the checker needed, kept for export.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub binding: String,
    pub vars: IndexVarSet,
    pub lhs: IndexTerm,
    pub rhs: IndexTerm,
    pub rel: Relation,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("linear variable `{0}` is used more than once")]
    Reused(String),
    #[error("linear variable `{0}` is never used")]
    Unused(String),
    #[error("linear variable `{0}` cannot be used inside a suspended computation")]
    LinearInSuspension(String),
    #[error("expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("expected {what}, found {found}")]
    NotA { what: &'static str, found: String },
    #[error("cannot establish {lhs} {rel} {rhs}: fails at {witness}")]
    Entailment { lhs: Box<IndexTerm>, rel: Relation, rhs: Box<IndexTerm>, witness: String },
    #[error("cannot instantiate wire annotations: {0}")]
    Instantiate(String),
    #[error("unbound index variable `{0}`")]
    UnboundIndex(String),
    #[error("index variable `{0}` is already in scope")]
    ShadowedIndex(String),
    #[error("cannot infer the type of {0}; add a type annotation")]
    CannotInfer(String),
    #[error("ill-formed boxed circuit: {0}")]
    Circuit(String),
}

impl TypeErrorKind {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            TypeErrorKind::Unbound(_) => "E001",
            TypeErrorKind::Reused(_) => "E002",
            TypeErrorKind::Unused(_) => "E003",
            TypeErrorKind::LinearInSuspension(_) => "E004",
            TypeErrorKind::Mismatch { .. } => "E005",
            TypeErrorKind::NotA { .. } => "E006",
            TypeErrorKind::Entailment { .. } => "E007",
            TypeErrorKind::Instantiate(_) => "E008",
            TypeErrorKind::UnboundIndex(_) => "E009",
            TypeErrorKind::ShadowedIndex(_) => "E010",
            TypeErrorKind::CannotInfer(_) => "E011",
            TypeErrorKind::Circuit(_) => "E012",
        }
    }
}

/// A type error located by the top-level binding it occurs in.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct TypeError {
    pub binding: String,
    pub kind: TypeErrorKind,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}] in `{}`: {}", self.kind.code(), self.binding, self.kind)
    }
}

type TResult<T> = Result<T, TypeErrorKind>;

#[derive(Clone, Debug)]
struct Entry {
    name: String,
    ty: Type,
    linear: bool,
    used: bool,
}

/// Result of checking a whole program.
#[derive(Clone, Debug)]
pub struct ProgramTyping {
    pub bindings: Vec<(String, Type, IndexTerm)>,
    pub main_type: Type,
    pub main_effect: IndexTerm,
    pub obligations: Vec<Obligation>,
}

pub struct Checker<'p> {
    profile: &'p MetricProfile,
    local: bool,
    strategy: CheckStrategy,
    ctx: Vec<Entry>,
    /// Context heights below which linear variables are out of reach.
    barriers: Vec<usize>,
    /// Context positions of linear variables, in consumption order.
    log: Vec<usize>,
    index_scope: Vec<String>,
    globals: HashMap<String, Type>,
    binding: String,
    obligations: Vec<Obligation>,
    generic_names: IndexVarSet,
}

fn mismatch(expected: &Type, found: &Type) -> TypeErrorKind {
    TypeErrorKind::Mismatch { expected: type_to_source(expected), found: type_to_source(found) }
}

fn not_a(what: &'static str, found: &Type) -> TypeErrorKind {
    TypeErrorKind::NotA { what, found: type_to_source(found) }
}

impl<'p> Checker<'p> {
    pub fn new(profile: &'p MetricProfile, strategy: CheckStrategy) -> Self {
        Checker {
            profile,
            local: profile.is_local(),
            strategy,
            ctx: Vec::new(),
            barriers: Vec::new(),
            log: Vec::new(),
            index_scope: Vec::new(),
            globals: HashMap::new(),
            binding: "main".to_string(),
            obligations: Vec::new(),
            generic_names: IndexVarSet::new(),
        }
    }

    /// Makes a global constant (e.g. a prelude entry) visible.
    pub fn declare_global(&mut self, name: &str, ty: Type) {
        self.globals.insert(name.to_string(), ty);
    }

    pub fn obligations(&self) -> &[Obligation] {
        &self.obligations
    }

    fn wrap<T>(&self, r: TResult<T>) -> Result<T, TypeError> {
        r.map_err(|kind| TypeError { binding: self.binding.clone(), kind })
    }

    /// Checks a program: each binding in order, then the main term.
    pub fn check_program(&mut self, p: &Program) -> Result<ProgramTyping, TypeError> {
        let mut bindings = Vec::new();
        for (x, m) in &p.bindings {
            self.binding = x.clone();
            let (ty, eff) = {
                let r = self.synth_term(m);
                self.wrap(r)?
            };
            self.push(x, ty.clone());
            bindings.push((x.clone(), ty, eff));
        }
        self.binding = "main".to_string();
        let r = self.synth_term(&p.main);
        let (main_type, main_effect) = self.wrap(r)?;
        for e in &self.ctx {
            if e.linear && !e.used {
                return Err(TypeError { binding: e.name.clone(), kind: TypeErrorKind::Unused(e.name.clone()) });
            }
        }
        Ok(ProgramTyping { bindings, main_type, main_effect, obligations: self.obligations.clone() })
    }

    /// Checks a closed term in an empty context (globals still visible).
    pub fn check_closed_term(&mut self, m: &Term) -> Result<(Type, IndexTerm), TypeError> {
        let r = self.synth_term(m);
        self.wrap(r)
    }

    // ---- context --------------------------------------------------------

    fn push(&mut self, name: &str, ty: Type) {
        let linear = !ty.is_param();
        self.ctx.push(Entry { name: name.to_string(), ty, linear, used: false });
    }

    fn pop(&mut self) -> TResult<()> {
        let e = self.ctx.pop().expect("balanced scopes");
        if e.linear && !e.used {
            return Err(TypeErrorKind::Unused(e.name));
        }
        Ok(())
    }

    fn lookup(&mut self, x: &str) -> TResult<Type> {
        if let Some(pos) = self.ctx.iter().rposition(|e| e.name == x) {
            let barrier = self.barriers.last().copied().unwrap_or(0);
            let e = &mut self.ctx[pos];
            if e.linear {
                if pos < barrier {
                    return Err(TypeErrorKind::LinearInSuspension(x.to_string()));
                }
                if e.used {
                    return Err(TypeErrorKind::Reused(x.to_string()));
                }
                e.used = true;
                self.log.push(pos);
            }
            return Ok(e.ty.clone());
        }
        self.globals.get(x).cloned().ok_or_else(|| TypeErrorKind::Unbound(x.to_string()))
    }

    /// Types of outer linear variables (below `height`) consumed since log position `from`.
    fn consumed_since(&self, from: usize, height: usize) -> Vec<Type> {
        self.log[from..].iter().filter(|&&p| p < height).map(|&p| self.ctx[p].ty.clone()).collect()
    }

    fn size_of(&self, types: &[Type]) -> IndexTerm {
        types.iter().map(type_size).reduce(IndexTerm::par).unwrap_or(IndexTerm::Empty)
    }

    fn effect(&self, t: IndexTerm) -> IndexTerm {
        if self.local {
            IndexTerm::Nat(0)
        } else {
            t
        }
    }

    fn scope_set(&self) -> IndexVarSet {
        self.index_scope.iter().cloned().collect()
    }

    fn push_index(&mut self, i: &str) -> TResult<()> {
        if self.index_scope.iter().any(|v| v == i) {
            return Err(TypeErrorKind::ShadowedIndex(i.to_string()));
        }
        self.index_scope.push(i.to_string());
        Ok(())
    }

    fn check_index_scope(&self, vars: IndexVarSet) -> TResult<()> {
        match vars.into_iter().find(|v| !self.index_scope.contains(v)) {
            Some(v) => Err(TypeErrorKind::UnboundIndex(v)),
            None => Ok(()),
        }
    }

    /// Normalizes a source type for the current mode.
    fn mode_type(&self, t: &Type) -> Type {
        if self.local {
            t.clone()
        } else {
            strip_annotations(t)
        }
    }

    // ---- entailment and subtyping -----------------------------------------

    fn entails(&mut self, lhs: &IndexTerm, rhs: &IndexTerm, rel: Relation) -> TResult<()> {
        if lhs == rhs {
            return Ok(());
        }
        let mut vars = self.scope_set();
        vars.extend(free_vars(lhs));
        vars.extend(free_vars(rhs));
        self.obligations.push(Obligation {
            binding: self.binding.clone(),
            vars: vars.clone(),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            rel,
        });
        match check_entailment(&vars, lhs, rhs, rel, self.profile, &self.strategy) {
            Verdict::HoldsBounded => Ok(()),
            Verdict::Counterexample(v) => {
                let witness = if v.is_empty() {
                    "the empty valuation".to_string()
                } else {
                    v.iter().map(|(k, n)| format!("{k}={n}")).collect::<Vec<_>>().join(", ")
                };
                Err(TypeErrorKind::Entailment { lhs: Box::new(lhs.clone()), rel, rhs: Box::new(rhs.clone()), witness })
            }
        }
    }

    /// `a` is at least as refined as `b`.
    pub fn subtype(&mut self, a: &Type, b: &Type) -> TResult<()> {
        match (a, b) {
            (Type::Unit, Type::Unit) => Ok(()),
            (Type::Wire(w1, x), Type::Wire(w2, y)) if w1 == w2 => match (x, y) {
                (Some(x), Some(y)) if self.local => self.entails(x, y, Relation::Le),
                _ => Ok(()),
            },
            (Type::Bang(e1, x), Type::Bang(e2, y)) => {
                self.entails(e1, e2, Relation::Le)?;
                self.subtype(x, y)
            }
            (Type::Tensor(a1, b1), Type::Tensor(a2, b2)) => {
                self.subtype(a1, a2)?;
                self.subtype(b1, b2)
            }
            (Type::Arrow(f), Type::Arrow(g)) => self.sub_arrow(f, g).map_err(|e| match e {
                TypeErrorKind::Instantiate(_) => mismatch(b, a),
                other => other,
            }),
            (Type::List(j1, n1, x), Type::List(j2, n2, y)) => {
                self.entails(n1, n2, Relation::Eq)?;
                let (j, x2, y2) = self.align_binders(j1, x, j2, y);
                self.index_scope.push(j);
                let r = self.subtype(&x2, &y2);
                self.index_scope.pop();
                r
            }
            (Type::IndexAll(i1, e1, x), Type::IndexAll(i2, e2, y)) => {
                let (i, x2, y2) = self.align_binders(i1, x, i2, y);
                let e1 = crate::index::substitute(e1, &IndexTerm::Var(i.clone()), i1);
                let e2 = crate::index::substitute(e2, &IndexTerm::Var(i.clone()), i2);
                self.index_scope.push(i);
                let r = self.entails(&e1, &e2, Relation::Le).and_then(|_| self.subtype(&x2, &y2));
                self.index_scope.pop();
                r
            }
            (Type::Circ(c1), Type::Circ(c2)) => {
                self.entails(&c1.size, &c2.size, Relation::Le)?;
                if strip_annotations(&c1.input) != strip_annotations(&c2.input)
                    || strip_annotations(&c1.output) != strip_annotations(&c2.output)
                {
                    return Err(mismatch(b, a));
                }
                Ok(())
            }
            _ => Err(mismatch(b, a)),
        }
    }

    /// Renames two binders to a common name that is fresh for the scope.
    fn align_binders(&self, i1: &str, x: &Type, i2: &str, y: &Type) -> (String, Type, Type) {
        let mut avoid = self.scope_set();
        avoid.extend(type_all_vars(x));
        avoid.extend(type_all_vars(y));
        let name = if i1 == i2 && !self.index_scope.iter().any(|v| v == i1) {
            i1.to_string()
        } else {
            fresh_name(i2, &avoid)
        };
        let v = IndexTerm::Var(name.clone());
        let x2 = if name == i1 { x.clone() } else { subst_type(x, &v, i1) };
        let y2 = if name == i2 { y.clone() } else { subst_type(y, &v, i2) };
        (name, x2, y2)
    }

    fn sub_arrow(&mut self, f: &ArrowType, g: &ArrowType) -> TResult<()> {
        // A generic subtype is instantiated to the supertype's domain.
        let f = match &f.scheme {
            Scheme::Generic(vs) => {
                let mut delta = BTreeMap::new();
                match_annotations(&f.dom, &g.dom, vs, &mut delta)?;
                instantiate_arrow(f, &delta)
            }
            _ => f.clone(),
        };
        let rigid: Vec<String> = match &g.scheme {
            Scheme::Generic(vs) => vs.clone(),
            _ => Vec::new(),
        };
        let height = self.index_scope.len();
        self.index_scope.extend(rigid);
        let r = (|| {
            self.subtype(&g.dom, &f.dom)?;
            self.subtype(&f.cod, &g.cod)?;
            self.entails(&f.effect, &g.effect, Relation::Le)?;
            self.entails(&type_size(&f.capture), &type_size(&g.capture), Relation::Le)
        })();
        self.index_scope.truncate(height);
        r
    }

    // ---- values -----------------------------------------------------------

    pub fn synth_value(&mut self, v: &Value) -> TResult<Type> {
        match v {
            Value::Unit => Ok(Type::Unit),
            Value::Var(x) => self.lookup(x),
            Value::Label(l) => Err(TypeErrorKind::CannotInfer(format!("label {l}"))),
            Value::Pair(a, b) => {
                let ta = self.synth_value(a)?;
                let tb = self.synth_value(b)?;
                Ok(Type::tensor(ta, tb))
            }
            Value::Nil => Err(TypeErrorKind::CannotInfer("an empty list".into())),
            Value::RCons(xs, x) => self.synth_rcons(xs, x, None),
            Value::Abs(x, t, body) => self.synth_abs(x, t, body),
            Value::Lift(m) => {
                self.barriers.push(self.ctx.len());
                let r = self.synth_term(m);
                self.barriers.pop();
                let (a, e) = r?;
                Ok(Type::Bang(e, Box::new(a)))
            }
            Value::IndexAbs(i, m) => {
                self.push_index(i)?;
                self.barriers.push(self.ctx.len());
                let r = self.synth_term(m);
                self.barriers.pop();
                self.index_scope.pop();
                let (a, e) = r?;
                Ok(Type::IndexAll(i.clone(), e, Box::new(a)))
            }
            Value::Boxed(b) => self.synth_boxed(&b.input, &b.circuit, &b.output),
            Value::Prim(p) => Ok(self.prim_type(*p)),
        }
    }

    fn prim_type(&self, p: Prim) -> Type {
        let n = IndexTerm::var("n");
        match p {
            Prim::Rep => Type::index_all("n", self.effect(IndexTerm::Empty), Type::list("j", n, Type::Unit)),
            Prim::Qrev | Prim::QrevFn => {
                let qs = Type::list("j", n.clone(), Type::qubit());
                let f = Type::Arrow(Box::new(ArrowType {
                    dom: qs.clone(),
                    cod: qs,
                    effect: self.effect(IndexTerm::bounded_par("j", n, IndexTerm::Wire(WireType::Qubit))),
                    capture: Type::Unit,
                    scheme: Scheme::Reverse,
                }));
                if p == Prim::QrevFn {
                    return f;
                }
                Type::index_all("n", self.effect(IndexTerm::Empty), Type::bang(self.effect(IndexTerm::Empty), f))
            }
        }
    }

    fn synth_boxed(&mut self, input: &Bundle, circuit: &crate::circuit::Circuit, output: &Bundle) -> TResult<Type> {
        let sig = infer_signature(circuit);
        let err = |e: crate::racs::BundleTypeError| TypeErrorKind::Circuit(e.to_string());
        let t = bundle_type(&sig.inputs, input).map_err(err)?;
        let u = bundle_type(&sig.outputs, output).map_err(err)?;
        let size = IndexTerm::max(IndexTerm::max(type_size(&t), sig.global.clone()), type_size(&u));
        let locals: Vec<String> = sig.input_vars.iter().map(|(_, v)| v.clone()).collect();
        Ok(if self.local {
            Type::Circ(Box::new(CircType { size: IndexTerm::Nat(0), locals, input: t, output: u }))
        } else {
            Type::Circ(Box::new(CircType {
                size,
                locals: Vec::new(),
                input: strip_annotations(&t),
                output: strip_annotations(&u),
            }))
        })
    }

    fn synth_abs(&mut self, x: &str, t: &Type, body: &Term) -> TResult<Type> {
        self.check_index_scope(type_free_vars(t))?;
        let (dom, generic) = if self.local { self.generalize(t) } else { (strip_annotations(t), Vec::new()) };
        let height = self.index_scope.len();
        self.index_scope.extend(generic.iter().cloned());
        let base = self.ctx.len();
        let log_from = self.log.len();
        self.push(x, dom.clone());
        let r = self.synth_term(body);
        let popped = self.pop();
        self.index_scope.truncate(height);
        let (cod, eff) = r?;
        popped?;
        let captured = self.consumed_since(log_from, base);
        let capture = Type::tuple(captured.iter().map(wire_content).collect());
        let scheme = if generic.is_empty() { Scheme::Mono } else { Scheme::Generic(generic) };
        Ok(Type::Arrow(Box::new(ArrowType { dom, cod, effect: eff, capture, scheme })))
    }

    /// Gives every unannotated wire leaf a fresh annotation variable.
    fn generalize(&mut self, t: &Type) -> (Type, Vec<String>) {
        let mut vars = Vec::new();
        let out = self.generalize_into(t, &mut vars);
        (out, vars)
    }

    fn generalize_into(&mut self, t: &Type, vars: &mut Vec<String>) -> Type {
        match t {
            Type::Wire(w, None) => {
                let mut avoid = self.scope_set();
                avoid.extend(self.generic_names.iter().cloned());
                let name = fresh_name("w", &avoid);
                self.generic_names.insert(name.clone());
                vars.push(name.clone());
                Type::Wire(*w, Some(IndexTerm::Var(name)))
            }
            Type::Tensor(a, b) => {
                let a = self.generalize_into(a, vars);
                let b = self.generalize_into(b, vars);
                Type::tensor(a, b)
            }
            Type::List(j, n, a) => Type::List(j.clone(), n.clone(), Box::new(self.generalize_into(a, vars))),
            other => other.clone(),
        }
    }

    /// Checks `v` against `expected`, returning the type it was given.
    pub fn check_value(&mut self, v: &Value, expected: &Type) -> TResult<Type> {
        match (v, expected) {
            (Value::Nil, Type::List(_, n, _)) => {
                self.entails(n, &IndexTerm::Nat(0), Relation::Eq)?;
                Ok(expected.clone())
            }
            (Value::Nil, other) => Err(not_a("a list type for []", other)),
            (Value::Pair(a, b), Type::Tensor(ta, tb)) => {
                let a = self.check_value(a, ta)?;
                let b = self.check_value(b, tb)?;
                Ok(Type::tensor(a, b))
            }
            (Value::RCons(xs, x), Type::List(..)) => {
                let t = self.synth_rcons(xs, x, Some(expected))?;
                self.subtype(&t, expected)?;
                Ok(t)
            }
            _ => {
                let t = self.synth_value(v)?;
                self.subtype(&t, expected)?;
                Ok(t)
            }
        }
    }

    fn synth_rcons(&mut self, xs: &Value, x: &Value, expected: Option<&Type>) -> TResult<Type> {
        let (j, len, elem) = match (xs, expected) {
            (Value::Nil, Some(Type::List(j, _, a))) => (j.clone(), IndexTerm::Nat(0), (**a).clone()),
            (Value::Nil, _) => {
                let tx = self.synth_value(x)?;
                let mut avoid = self.scope_set();
                avoid.extend(type_all_vars(&tx));
                let j = fresh_name("j", &avoid);
                return Ok(Type::list(&j, IndexTerm::Nat(1), tx));
            }
            _ => match self.synth_value(xs)? {
                Type::List(j, n, a) => (j, n, *a),
                other => return Err(not_a("a list", &other)),
            },
        };
        let last = subst_type(&elem, &len, &j);
        self.check_value(x, &last)?;
        Ok(Type::List(j, IndexTerm::plus(len, IndexTerm::Nat(1)), Box::new(elem)))
    }

    // ---- computations -----------------------------------------------------

    pub fn synth_term(&mut self, m: &Term) -> TResult<(Type, IndexTerm)> {
        match m {
            Term::Return(v) => {
                let t = self.synth_value(v)?;
                let e = self.effect(type_size(&t));
                Ok((t, e))
            }
            Term::App(f, a) => {
                let tf = self.synth_value(f)?;
                let Type::Arrow(f) = tf else { return Err(not_a("a function", &tf)) };
                self.apply_arrow(&f, a)
            }
            Term::Dest(x, y, v, body) => {
                let tv = self.synth_value(v)?;
                let Type::Tensor(ta, tb) = &tv else { return Err(not_a("a pair", &tv)) };
                let base = self.ctx.len();
                let log_from = self.log.len();
                self.push(x, (**ta).clone());
                self.push(y, (**tb).clone());
                let r = self.synth_term(body);
                let py = self.pop();
                let px = self.pop();
                let (c, j) = r?;
                py?;
                px?;
                let beside = self.consumed_since(log_from, base);
                let e = IndexTerm::seq(IndexTerm::par(type_size(&tv), self.size_of(&beside)), j);
                Ok((c, self.effect(e)))
            }
            Term::Force(v) => {
                let t = self.synth_value(v)?;
                match t {
                    Type::Bang(e, a) => Ok((*a, e)),
                    other => Err(not_a("a suspended computation (!A)", &other)),
                }
            }
            Term::Box(locals, t, v) => self.synth_box(locals, t, v),
            Term::Apply(c, b) => {
                let tc = self.synth_value(c)?;
                let Type::Circ(circ) = tc else { return Err(not_a("a circuit", &tc)) };
                let tb = if self.local { self.synth_value(b)? } else { self.check_value(b, &circ.input)? };
                if !tb.is_bundle() {
                    return Err(not_a("a wire bundle", &tb));
                }
                if self.local {
                    let mut delta = BTreeMap::new();
                    match_annotations(&circ.input, &tb, &circ.locals, &mut delta)?;
                    let input = subst_type_many(&circ.input, &delta);
                    self.subtype(&tb, &input)?;
                    Ok((subst_type_many(&circ.output, &delta), IndexTerm::Nat(0)))
                } else {
                    Ok((circ.output.clone(), circ.size.clone()))
                }
            }
            Term::Let(x, a, b) => {
                let (ta, i) = self.synth_term(a)?;
                let base = self.ctx.len();
                let log_from = self.log.len();
                self.push(x, ta);
                let r = self.synth_term(b);
                let popped = self.pop();
                let (tb, j) = r?;
                popped?;
                let beside = self.consumed_since(log_from, base);
                let e = IndexTerm::seq(IndexTerm::par(i, self.size_of(&beside)), j);
                Ok((tb, self.effect(e)))
            }
            Term::Fold(step, acc, list) => self.synth_fold(step, acc, list),
            Term::IndexApp(v, i) => {
                self.check_index_scope(free_vars(i))?;
                let t = self.synth_value(v)?;
                match t {
                    Type::IndexAll(x, e, a) => {
                        let body = subst_type(&a, i, &x);
                        let e = crate::index::substitute(&e, i, &x);
                        Ok((body, e))
                    }
                    other => Err(not_a("an index abstraction", &other)),
                }
            }
            Term::Annot(m, t) => {
                self.check_index_scope(type_free_vars(t))?;
                let (a, e) = self.synth_term(m)?;
                let declared = self.mode_type(t);
                self.subtype(&a, &declared)?;
                Ok((declared, e))
            }
        }
    }

    fn apply_arrow(&mut self, f: &ArrowType, a: &Value) -> TResult<(Type, IndexTerm)> {
        match &f.scheme {
            Scheme::Mono => {
                self.check_value(a, &f.dom)?;
                Ok((f.cod.clone(), f.effect.clone()))
            }
            Scheme::Generic(vs) => {
                let ta = self.synth_value(a)?;
                let mut delta = BTreeMap::new();
                match_annotations(&f.dom, &ta, vs, &mut delta)?;
                let g = instantiate_arrow(f, &delta);
                self.subtype(&ta, &g.dom)?;
                Ok((g.cod, g.effect))
            }
            Scheme::Reverse => {
                let ta = self.synth_value(a)?;
                let Type::List(j, n, elem) = &ta else { return Err(not_a("a list", &ta)) };
                self.subtype(&strip_annotations(&ta), &strip_annotations(&f.dom))?;
                let mirrored = IndexTerm::minus(
                    n.clone(),
                    IndexTerm::plus(IndexTerm::Var(j.clone()), IndexTerm::Nat(1)),
                );
                let reversed = subst_type(elem, &mirrored, j);
                Ok((Type::List(j.clone(), n.clone(), Box::new(reversed)), f.effect.clone()))
            }
        }
    }

    fn synth_box(&mut self, locals: &[String], t: &Type, v: &Value) -> TResult<(Type, IndexTerm)> {
        let height = self.index_scope.len();
        for l in locals {
            self.push_index(l)?;
        }
        let r = (|| {
            self.check_index_scope(type_free_vars(t))?;
            let input = self.mode_type(t);
            if !input.is_bundle() {
                return Err(not_a("a bundle type", &input));
            }
            let tv = self.synth_value(v)?;
            let Type::Bang(i, inner) = &tv else { return Err(not_a("a suspended function", &tv)) };
            let Type::Arrow(f) = &**inner else { return Err(not_a("a suspended function", &tv)) };
            let f = match &f.scheme {
                Scheme::Generic(vs) => {
                    let mut delta = BTreeMap::new();
                    match_annotations(&f.dom, &input, vs, &mut delta)?;
                    instantiate_arrow(f, &delta)
                }
                _ => (**f).clone(),
            };
            self.subtype(&input, &f.dom)?;
            let size = IndexTerm::seq(IndexTerm::par(i.clone(), type_size(&input)), f.effect.clone());
            let circ = Type::Circ(Box::new(CircType {
                size: self.effect(size),
                locals: if self.local { locals.to_vec() } else { Vec::new() },
                input,
                output: f.cod.clone(),
            }));
            Ok((circ, self.effect(IndexTerm::Empty)))
        })();
        self.index_scope.truncate(height);
        r
    }

    fn synth_fold(&mut self, step: &Value, acc: &Value, list: &Value) -> TResult<(Type, IndexTerm)> {
        let ts = self.synth_value(step)?;
        let shape = "a suspended index-abstracted step function !(i -> (B, A) -o B)";
        let Type::Bang(i1, inner) = &ts else { return Err(not_a(shape, &ts)) };
        let Type::IndexAll(i, i2, arrow) = &**inner else { return Err(not_a(shape, &ts)) };
        let Type::Arrow(f) = &**arrow else { return Err(not_a(shape, &ts)) };
        let Type::Tensor(b, a_step) = &f.dom else { return Err(not_a("a step taking a pair", &ts)) };
        if !matches!(f.scheme, Scheme::Mono) {
            return Err(TypeErrorKind::Instantiate("the step function must annotate every wire".into()));
        }
        let tl = self.synth_value(list)?;
        let Type::List(j, e_len, a) = &tl else { return Err(not_a("a list", &tl)) };

        // Work with a binder that is fresh for everything in scope.
        let mut avoid = self.scope_set();
        avoid.extend(type_all_vars(&ts));
        avoid.extend(type_all_vars(&tl));
        let clashes = self.index_scope.contains(i)
            || i == j
            || free_vars(e_len).contains(i)
            || type_free_vars(a).contains(i)
            || type_free_vars(&ts).contains(i);
        let iv = if clashes { fresh_name(i, &avoid) } else { i.clone() };
        let ren = |t: &Type| if iv == *i { t.clone() } else { subst_type(t, &IndexTerm::Var(iv.clone()), i) };
        let reni = |t: &IndexTerm| {
            if iv == *i {
                t.clone()
            } else {
                crate::index::substitute(t, &IndexTerm::Var(iv.clone()), i)
            }
        };
        let (b, a_step, cod) = (ren(b), ren(a_step), ren(&f.cod));
        let (i2, j_eff) = (reni(i2), reni(&f.effect));
        let ivar = IndexTerm::Var(iv.clone());

        let b0 = subst_type(&b, &IndexTerm::Nat(0), &iv);
        self.check_value(acc, &b0)?;

        let remaining = IndexTerm::minus(e_len.clone(), IndexTerm::plus(ivar.clone(), IndexTerm::Nat(1)));
        let a_at = subst_type(a, &remaining, j);
        self.index_scope.push(iv.clone());
        let r = (|| {
            self.subtype(&a_at, &a_step)?;
            let b_next = subst_type(&b, &IndexTerm::plus(ivar.clone(), IndexTerm::Nat(1)), &iv);
            self.subtype(&cod, &b_next)
        })();
        self.index_scope.pop();
        r?;

        let result = subst_type(&b, e_len, &iv);
        let per_step = IndexTerm::par(
            IndexTerm::seq(
                IndexTerm::par(IndexTerm::par(IndexTerm::seq(i1.clone(), i2), type_size(&b)), type_size(&a_at)),
                j_eff,
            ),
            IndexTerm::bounded_par(j, remaining, type_size(a)),
        );
        let e = IndexTerm::max(type_size(&b0), IndexTerm::bounded_seq(&iv, e_len.clone(), per_step));
        Ok((result, self.effect(e)))
    }
}

/// Instantiates a generic arrow's annotation variables.
fn instantiate_arrow(f: &ArrowType, delta: &BTreeMap<String, IndexTerm>) -> ArrowType {
    let mut effect = f.effect.clone();
    for (k, v) in delta {
        effect = crate::index::substitute(&effect, v, k);
    }
    ArrowType {
        dom: subst_type_many(&f.dom, delta),
        cod: subst_type_many(&f.cod, delta),
        effect,
        capture: subst_type_many(&f.capture, delta),
        scheme: Scheme::Mono,
    }
}

/// Finds values for `vars` by pairing wire leaves of `pattern` whose
/// annotation is one of `vars` with the corresponding leaves of `actual`.
fn match_annotations(
    pattern: &Type,
    actual: &Type,
    vars: &[String],
    delta: &mut BTreeMap<String, IndexTerm>,
) -> TResult<()> {
    collect_matches(pattern, actual, vars, &mut Vec::new(), delta)?;
    match vars.iter().find(|v| !delta.contains_key(*v)) {
        Some(v) => Err(TypeErrorKind::Instantiate(format!("no value found for `{v}`"))),
        None => Ok(()),
    }
}

fn collect_matches(
    pattern: &Type,
    actual: &Type,
    vars: &[String],
    binders: &mut Vec<(String, String)>,
    delta: &mut BTreeMap<String, IndexTerm>,
) -> TResult<()> {
    match (pattern, actual) {
        (Type::Wire(_, Some(IndexTerm::Var(v))), Type::Wire(_, found)) if vars.contains(v) => {
            let Some(found) = found else {
                return Err(TypeErrorKind::Instantiate(format!("argument wire for `{v}` is unannotated")));
            };
            let fv = free_vars(found);
            if let Some((_, b)) = binders.iter().find(|(_, b)| fv.contains(b)) {
                return Err(TypeErrorKind::Instantiate(format!(
                    "annotation {found} depends on the list position `{b}`"
                )));
            }
            delta.entry(v.clone()).or_insert_with(|| found.clone());
            Ok(())
        }
        (Type::Tensor(a1, b1), Type::Tensor(a2, b2)) => {
            collect_matches(a1, a2, vars, binders, delta)?;
            collect_matches(b1, b2, vars, binders, delta)
        }
        (Type::List(j1, _, a1), Type::List(j2, _, a2)) => {
            binders.push((j1.clone(), j2.clone()));
            let r = collect_matches(a1, a2, vars, binders, delta);
            binders.pop();
            r
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{profile, Profile};
    use crate::syntax::parser::parse_term;

    fn check(src: &str, p: Profile) -> Result<(Type, IndexTerm), TypeError> {
        let mut c = Checker::new(profile(p), CheckStrategy::default());
        c.check_closed_term(&parse_term(src).unwrap())
    }

    #[test]
    fn identity_function() {
        let (t, e) = check("\\q::Qubit. q", Profile::Width).unwrap();
        assert_eq!(type_to_source(&t), "Qubit -o[wire(Qubit)] Qubit");
        assert_eq!(e, IndexTerm::Empty);
    }

    #[test]
    fn linearity_is_enforced() {
        let e = check("\\q::Qubit. (q, q)", Profile::Width).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Reused("q".into()));
        let e = check("\\q::Qubit. ()", Profile::Width).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::Unused("q".into()));
        let e = check("\\q::Qubit. lift q", Profile::Width).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::LinearInSuspension("q".into()));
    }

    #[test]
    fn closures_record_captures() {
        let (t, _) = check("\\a::Qubit. \\b::Bit. (a, b)", Profile::Width).unwrap();
        let Type::Arrow(f) = t else { panic!() };
        let Type::Arrow(g) = &f.cod else { panic!() };
        assert_eq!(g.capture, Type::qubit());
    }

    #[test]
    fn list_lengths_must_agree() {
        let mut c = Checker::new(profile(Profile::Width), CheckStrategy::default());
        c.index_scope.push("n".into());
        let a = Type::list("j", IndexTerm::var("n"), Type::qubit());
        let b = Type::list("j", IndexTerm::plus(IndexTerm::var("n"), 1.into()), Type::qubit());
        assert!(c.subtype(&a, &a).is_ok());
        assert!(matches!(c.subtype(&a, &b), Err(TypeErrorKind::Entailment { .. })));
    }

    #[test]
    fn wire_annotations_are_ordered_locally() {
        let mut c = Checker::new(profile(Profile::Depth), CheckStrategy::default());
        c.index_scope.push("i".into());
        let q = |t: IndexTerm| Type::wire(WireType::Qubit, Some(t));
        let i = IndexTerm::var("i");
        assert!(c.subtype(&q(i.clone()), &q(IndexTerm::plus(i.clone(), 1.into()))).is_ok());
        assert!(c.subtype(&q(IndexTerm::plus(i.clone(), 1.into())), &q(i)).is_err());
    }

    #[test]
    fn arrow_effects_are_covariant() {
        let mut c = Checker::new(profile(Profile::GateCount), CheckStrategy::default());
        let f = |e: u64| Type::arrow(Type::qubit(), Type::qubit(), e.into(), Type::Unit);
        assert!(c.subtype(&f(2), &f(3)).is_ok());
        assert!(c.subtype(&f(3), &f(2)).is_err());
    }
}
