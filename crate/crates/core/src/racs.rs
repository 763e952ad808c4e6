//! Resource-aware circuit signatures: a circuit's input and output label
//! contexts annotated with index terms, plus a global size index.
//!
//! Signatures are derived symbolically (abstract operators are kept), so a
//! single derivation serves every metric profile.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::circuit::{Bundle, Circuit, Label, LabelContext, WireType};
use crate::index::{IndexTerm, WireMultiset};
use crate::syntax::ast::Type;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    /// One fresh variable per circuit input, in input order.
    pub input_vars: Vec<(Label, String)>,
    /// Inputs annotated with their variables.
    pub inputs: LabelContext,
    /// Live outputs annotated with index terms over the input variables.
    pub outputs: LabelContext,
    /// Global size index (closed; built from `id` and `append`).
    pub global: IndexTerm,
}

/// Name of the annotation variable attached to an input label.
pub fn input_var(l: Label) -> String {
    format!("v{}", l.0)
}

pub fn infer_signature(c: &Circuit) -> Signature {
    let mut inputs = LabelContext::new();
    let mut input_vars = Vec::new();
    let mut ann: HashMap<Label, (WireType, IndexTerm)> = HashMap::new();
    let mut live: Vec<Label> = Vec::new();
    for (l, w, _) in c.initial().iter() {
        let v = input_var(l);
        inputs.insert(l, w, Some(IndexTerm::Var(v.clone()))).expect("circuit inputs are distinct");
        input_vars.push((l, v.clone()));
        ann.insert(l, (w, IndexTerm::Var(v)));
        live.push(l);
    }
    let mut global = IndexTerm::Id(WireMultiset::from_wires(c.initial().wires()));
    for g in c.gates() {
        let decl = g.gate.decl().expect("circuit gates are registered");
        let args: Vec<IndexTerm> = g.inputs.iter().map(|l| ann[l].1.clone()).collect();
        let consumed = WireMultiset::from_wires(g.inputs.iter().map(|l| ann[l].0));
        live.retain(|l| !g.inputs.contains(l));
        let beside = WireMultiset::from_wires(live.iter().map(|l| ann[l].0));
        let produced = WireMultiset::from_wires(decl.outputs.iter().copied());
        global = IndexTerm::append(
            &g.gate.name,
            global,
            IndexTerm::Id(beside),
            IndexTerm::Id(consumed),
            IndexTerm::Id(produced),
        );
        for l in &g.inputs {
            ann.remove(l);
        }
        for (pos, (l, w)) in g.outputs.iter().zip(decl.outputs).enumerate() {
            let term = IndexTerm::GateOp { gate: g.gate.name.clone(), pos: pos + 1, args: args.clone() };
            ann.insert(*l, (*w, term));
            live.push(*l);
        }
    }
    let mut outputs = LabelContext::new();
    for l in c.live_outputs().labels() {
        let (w, a) = ann[&l].clone();
        outputs.insert(l, w, Some(a)).expect("live outputs are distinct");
    }
    Signature { input_vars, inputs, outputs, global }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<&str> = self.input_vars.iter().map(|(_, v)| v.as_str()).collect();
        write!(f, "{} ⟨{}⟩ → {} ; {}", self.inputs, vars.join(", "), self.outputs, self.global)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BundleTypeError {
    #[error("label {0} is not in the context")]
    MissingLabel(Label),
    #[error("labels left unused by the bundle: {0:?}")]
    Unused(Vec<Label>),
    #[error("list elements have different types")]
    Heterogeneous,
}

/// The bundle type mirroring `b`, with the context's annotated wire types
/// at the leaves. Every label of the context must occur exactly once.
pub fn bundle_type(q: &LabelContext, b: &Bundle) -> Result<Type, BundleTypeError> {
    let t = bundle_type_open(q, b)?;
    let used = b.labels();
    let unused: Vec<Label> = q.labels().filter(|l| !used.contains(l)).collect();
    if !unused.is_empty() {
        return Err(BundleTypeError::Unused(unused));
    }
    Ok(t)
}

fn bundle_type_open(q: &LabelContext, b: &Bundle) -> Result<Type, BundleTypeError> {
    Ok(match b {
        Bundle::Unit => Type::Unit,
        Bundle::Single(l) => {
            let (w, a) = q.get(*l).ok_or(BundleTypeError::MissingLabel(*l))?;
            Type::Wire(*w, a.clone())
        }
        Bundle::Pair(x, y) => Type::tensor(bundle_type_open(q, x)?, bundle_type_open(q, y)?),
        Bundle::Nil => Type::list("j", IndexTerm::Nat(0), Type::Unit),
        Bundle::Cons(..) => {
            let mut elems = Vec::new();
            let mut cur = b;
            while let Bundle::Cons(init, last) = cur {
                elems.push(bundle_type_open(q, last)?);
                cur = init;
            }
            if *cur != Bundle::Nil {
                return Err(BundleTypeError::Heterogeneous);
            }
            let first = elems[0].clone();
            if elems.iter().any(|e| *e != first) {
                return Err(BundleTypeError::Heterogeneous);
            }
            Type::list("j", IndexTerm::Nat(elems.len() as u64), first)
        }
    })
}
